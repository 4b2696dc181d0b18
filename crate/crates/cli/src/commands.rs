//! Subcommand bodies. Each returns a JSON report; `certify` also returns its verdict.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use tropkp_core::equations::{bit_label, squared_point_values};
use tropkp_core::hirota::verify_minor_identity;
use tropkp_core::jacobian::delaunay_set;
use tropkp_core::limits::dispersion;
use tropkp_core::orientation::{
    circuit_difference, delaunaytroid, orientation_to_vertex, strongly_connected_orientations, vertex_to_orientation,
};
use tropkp_core::scalar::{format_rational, parse_rational};
use tropkp_core::subsets::binomial;
use tropkp_core::tau::{all_zero, hirota_residual_by_wave, lattice_sum_to_label_sum, residual_groupings_agree};
use tropkp_core::{
    abel_map, beta_from_abel, beta_from_lambda, build_banana, check_dn_interlacing, evaluate_u, f_vector,
    face_direction_classes, hirota_residual, instantiate_and_check, invert_psi, kp_residual_numeric, lambda_from_beta,
    lambda_from_divisor, limit_r, matrix_a, matrix_a_dual, matrix_a_tilde, normalize_delaunay, psi, shift_vector,
    spacetime_inversion_check, squared_set, tau_from_hirota_point, uvw, voronoi_vertices, BananaData, Basis, Component,
    GrassmannPoint, HirotaPoint, KappaConfig, Matrix, PeriodVectors, Scalar, VertexChoice, VoronoiVertex,
};

use crate::config::{Params, RunConfig, Validated};
use crate::CliError;

fn q(x: &Scalar) -> Value {
    Value::String(format_rational(x))
}

fn qs(xs: &[Scalar]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

fn matrix(m: &Matrix) -> Value {
    Value::Array(m.to_rows().iter().map(|r| qs(r)).collect())
}

fn lattice_key(c: &[i64]) -> String {
    c.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn keyed(map: &BTreeMap<Basis, Scalar>, n: usize) -> Value {
    Value::Object(map.iter().map(|(j, a)| (bit_label(j, n), q(a))).collect())
}

fn banana(genus: usize) -> Result<BananaData, CliError> {
    let g = i64::try_from(genus).map_err(|_| CliError::Usage(format!("genus {genus} is too large")))?;
    Ok(build_banana(g, None)?)
}

fn vertices(genus: usize, class: Option<usize>) -> Result<Vec<VoronoiVertex>, CliError> {
    if let Some(k) = class {
        if k == 0 || k > genus {
            return Err(CliError::Usage(format!("class {k} out of range 1..={genus}")));
        }
    }
    Ok(voronoi_vertices(genus)
        .into_iter()
        .filter(|(k, _)| class.is_none_or(|c| c == *k))
        .flat_map(|(_, vs)| vs)
        .collect())
}

/// Parses `"a,b,c"` as a Voronoi vertex of genus `genus`.
pub fn parse_vertex(text: &str, genus: usize) -> Result<VoronoiVertex, CliError> {
    let coords = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if coords.len() != genus {
        return Err(CliError::Usage(format!("vertex has {} coordinates, expected {genus}", coords.len())));
    }
    Ok(VoronoiVertex::new(coords)?)
}

pub fn voronoi(genus: usize) -> Result<Value, CliError> {
    banana(genus)?;
    let classes = voronoi_vertices(genus);
    let count: usize = classes.values().map(Vec::len).sum();
    Ok(json!({
        "genus": genus,
        "vertex_count": count,
        "class_sizes": classes.iter().map(|(k, vs)| (k.to_string(), json!(vs.len()))).collect::<Map<_, _>>(),
        "classes": classes
            .iter()
            .map(|(k, vs)| (k.to_string(), Value::Array(vs.iter().map(|v| qs(v.coords())).collect())))
            .collect::<Map<_, _>>(),
        "f_vector": f_vector(genus),
    }))
}

pub fn delaunay(genus: usize, class: Option<usize>, vertex: Option<&str>) -> Result<Value, CliError> {
    let data = banana(genus)?;
    let selected = match vertex {
        Some(text) => vec![parse_vertex(text, genus)?],
        None => vertices(genus, class)?,
    };
    let mut out = Vec::new();
    for a in &selected {
        let ds = delaunay_set(&data, a)?;
        let labels = normalize_delaunay(&data, a)?;
        out.push(json!({
            "vertex": qs(a.coords()),
            "class_k": a.class_k(),
            "points": ds.points,
            "labels": labels
                .iter()
                .map(|(c, j)| (lattice_key(c), Value::String(bit_label(j, data.n()))))
                .collect::<Map<_, _>>(),
            "shift": shift_vector(&data, a)?.s,
        }));
    }
    Ok(json!({ "genus": genus, "vertices": out }))
}

pub fn orient(genus: usize) -> Result<Value, CliError> {
    let data = banana(genus)?;
    let mut table = Vec::new();
    let mut bijective = true;
    let mut firsts: BTreeMap<usize, _> = BTreeMap::new();
    let mut circuits = Vec::new();
    for a in vertices(genus, None)? {
        let o = vertex_to_orientation(&data, &a)?;
        bijective &= orientation_to_vertex(&data, &o)? == a;
        table.push(json!({
            "vertex": qs(a.coords()),
            "signs": o.to_string(),
            "out_degree_v1": o.out_degree_v1(),
        }));
        match firsts.get(&a.class_k()) {
            None => {
                firsts.insert(a.class_k(), o);
            }
            Some(first) => {
                let edges = circuit_difference(first, &o)
                    .ok_or_else(|| CliError::Config("orientations of one class differ in degree".into()))?;
                circuits.push(json!({ "from": first.to_string(), "to": o.to_string(), "edges": edges }));
            }
        }
    }
    let all = strongly_connected_orientations(data.n()).len();
    bijective &= all == table.len();
    Ok(json!({
        "genus": genus,
        "orientations": table,
        "count": all,
        "bijective": bijective,
        "circuits": circuits,
    }))
}

pub fn matroid(genus: usize, at: VertexChoice, class: Option<usize>) -> Result<Value, CliError> {
    let data = banana(genus)?;
    let mut out = Vec::new();
    for a in vertices(genus, class)? {
        let m = delaunaytroid(&data, &a, at)?;
        out.push(json!({
            "vertex": qs(a.coords()),
            "class_k": a.class_k(),
            "rank": m.k,
            "bases": m.bases.iter().map(|b| bit_label(b, data.n())).collect::<Vec<_>>(),
            "uniform": m.is_uniform(),
            "basis_exchange": m.satisfies_basis_exchange(),
        }));
    }
    Ok(json!({ "genus": genus, "at": at.to_string(), "matroids": out }))
}

fn periods(p: &PeriodVectors) -> Value {
    let zero = (0..p.genus()).all(|j| dispersion(&p.u[j], &p.v[j], &p.w[j]) == Scalar::from_integer(0.into()));
    json!({ "u": qs(&p.u), "v": qs(&p.v), "w": qs(&p.w), "dispersion_zero": zero })
}

pub fn limits(kc: &KappaConfig, cfg: Option<&Validated>) -> Result<Value, CliError> {
    let r = limit_r(kc);
    let mut out = json!({
        "kappas": qs(kc.kappas()),
        "r_matrix": r.entries().iter().map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "uvw": {
            Component::Plus.to_string(): periods(&uvw(kc, Component::Plus)),
            Component::Minus.to_string(): periods(&uvw(kc, Component::Minus)),
        },
    });
    if let Some(Params::Divisor(d)) = cfg.map(|c| &c.params) {
        let abel: Vec<Value> =
            abel_map(kc, d)?.iter().map(|a| json!({ "log": a.log.to_string(), "negative": a.negative })).collect();
        out["abel_map"] = Value::Array(abel);
    }
    Ok(out)
}

fn grassmann(a: &GrassmannPoint) -> Value {
    json!({
        "matrix": matrix(&a.matrix),
        "rank": a.rank(),
        "pluecker": keyed(&a.normalized_pluecker(), a.n),
        "totally_positive": a.is_totally_positive(),
    })
}

pub fn param(cfg: &RunConfig, v: &Validated) -> Result<Value, CliError> {
    let hp = v.hirota_point()?;
    let (_, beta) = invert_psi(&hp)?;
    let k = v.class_k;
    let lambda = lambda_from_beta(&v.kc, &beta, k)?;
    let a = matrix_a(&v.kc, &beta, k)?;
    let a_tilde = matrix_a_tilde(&v.kc, &lambda, k)?;
    let mut out = json!({
        "config": cfg.canonicalize()?,
        "class_k": k,
        "vertex_choice": v.choice.to_string(),
        "alphas": keyed(&hp.alphas, hp.n()),
        "beta": qs(&beta),
        "lambda": qs(&lambda),
        "matrix_a": grassmann(&a),
        "matrix_a_tilde": grassmann(&a_tilde),
        "a_proportional_to_a_tilde": a.proportional_to(&a_tilde),
        "minor_identity": verify_minor_identity(&v.kc, &beta, k)?,
    });
    if let Params::Divisor(d) = &v.params {
        let dual = matrix_a_dual(&v.kc, d)?;
        let div_lambda = lambda_from_divisor(&v.kc, d)?;
        let via_lambda = beta_from_lambda(&v.kc, &div_lambda, d.split_k)?;
        let via_abel = beta_from_abel(&v.kc, d)?;
        out["matrix_a_dual"] = grassmann(&dual);
        out["divisor_conversions"] = json!({
            "split_k": d.split_k,
            "lambda": qs(&div_lambda),
            "beta_from_lambda": qs(&via_lambda),
            "beta_from_abel": qs(&via_abel),
            "agree": via_lambda == via_abel,
        });
        if v.kc.is_sorted() {
            out["interlaced"] = json!(check_dn_interlacing(&v.kc, d)?);
        }
    }
    Ok(out)
}

fn label_size(hp: &HirotaPoint) -> usize {
    match hp.vertex_choice {
        VertexChoice::V1 => hp.class_k,
        VertexChoice::V2 => hp.n() - hp.class_k,
    }
}

/// Replaces coefficients given as `LABEL=VALUE` with `LABEL` a 0/1 string.
pub fn apply_overrides(hp: &mut HirotaPoint, overrides: &[String]) -> Result<(), CliError> {
    let n = hp.n();
    for o in overrides {
        let (label, value) =
            o.split_once('=').ok_or_else(|| CliError::Usage(format!("expected LABEL=VALUE, got {o:?}")))?;
        let label = label.trim();
        if label.len() != n || !label.chars().all(|c| c == '0' || c == '1') {
            return Err(CliError::Usage(format!("label {label:?} is not a 0/1 string of length {n}")));
        }
        let j: Basis = label.char_indices().filter(|(_, c)| *c == '1').map(|(i, _)| i + 1).collect();
        let slot = hp
            .alphas
            .get_mut(&j)
            .ok_or_else(|| CliError::Usage(format!("label {label} is not a basis of this point")))?;
        *slot = parse_rational(value)?;
    }
    Ok(())
}

/// Outcome of `certify`: the report and whether every check passed.
pub struct Certification {
    pub report: Value,
    pub certified: bool,
}

fn numeric_check(result: tropkp_core::Result<f64>, tolerance: f64) -> (Value, bool) {
    match result {
        Ok(x) => (json!({ "max": x, "tolerance": tolerance, "pass": x < tolerance }), x < tolerance),
        Err(e) => (json!({ "error": e.to_string(), "tolerance": tolerance, "pass": false }), false),
    }
}

pub fn certify(cfg: &RunConfig, v: &Validated, overrides: &[String]) -> Result<Certification, CliError> {
    let mut hp = v.hirota_point()?;
    apply_overrides(&mut hp, overrides)?;
    let (k, n) = (label_size(&hp), hp.n());
    let tau = tau_from_hirota_point(&hp)?;

    let residuals = hirota_residual(&tau);
    let exact_zero = all_zero(&residuals);
    let by_wave = hirota_residual_by_wave(&tau);
    let grouping = residual_groupings_agree(&tau);

    let relations = face_direction_classes(k, n)?;
    let values = instantiate_and_check(&relations, &hp)?;
    let relations_zero = values.values().all(|x| *x == Scalar::from_integer(0.into()));
    let translated: BTreeMap<Vec<i64>, Scalar> =
        residuals.iter().map(|(d, x)| (lattice_sum_to_label_sum(&hp, d), x.clone())).collect();
    let cross_check = translated == squared_point_values(k, n, &hp)?
        && relations.iter().all(|r| translated.get(&r.point()) == values.get(&r.direction));

    let samples = v.sample_points();
    let (kp, kp_pass) = numeric_check(kp_residual_numeric(&tau, &samples), v.tolerance);

    let (round_trip, spacetime, spacetime_pass) = match invert_psi(&hp) {
        Ok((kc, beta)) => {
            let back = psi(&kc, &beta, hp.class_k, hp.vertex_choice).ok();
            let round_trip = kc == v.kc && back.as_ref() == Some(&hp);
            let pair =
                psi(&kc, &beta, hp.class_k, VertexChoice::V1).and_then(|a| tau_from_hirota_point(&a)).and_then(|t1| {
                    let t2 = tau_from_hirota_point(&psi(&kc, &beta, hp.class_k, VertexChoice::V2)?)?;
                    spacetime_inversion_check(&t1, &t2, &samples)
                });
            let (st, pass) = numeric_check(pair, v.tolerance);
            (json!(round_trip), st, pass)
        }
        Err(e) => (json!({ "error": e.to_string() }), json!({ "error": e.to_string(), "pass": false }), false),
    };
    let round_trip_pass = round_trip == json!(true);

    let certified =
        exact_zero && grouping && relations_zero && cross_check && kp_pass && round_trip_pass && spacetime_pass;
    let report = json!({
        "config": cfg.canonicalize()?,
        "terms": tau.len(),
        "hirota_residuals": residuals.iter().map(|(d, x)| (lattice_key(d), q(x))).collect::<Map<_, _>>(),
        "hirota_residuals_zero": exact_zero,
        "wave_grouping": {
            "count": by_wave.len(),
            "agrees": grouping,
        },
        "relations": {
            "values": values.iter().map(|(j, x)| (bit_label(j, n), q(x))).collect::<Map<_, _>>(),
            "all_zero": relations_zero,
            "match_residuals": cross_check,
        },
        "kp_numeric": kp,
        "inversion_round_trip": round_trip,
        "spacetime_inversion": spacetime,
        "certified": certified,
    });
    Ok(Certification { report, certified })
}

pub fn eqs(k: usize, n: usize) -> Result<Value, CliError> {
    let relations = face_direction_classes(k, n)?;
    let squared = squared_set(k, n)?;
    let rels: Vec<Value> = relations
        .iter()
        .map(|r| {
            json!({
                "direction": bit_label(&r.direction, n),
                "fixed": bit_label(&r.fixed, n),
                "point": r.point(),
                "dimension": r.dimension(),
                "terms": r.terms.iter().map(|t| json!({
                    "first": bit_label(&t.first, n),
                    "second": bit_label(&t.second, n),
                    "difference": t.difference,
                })).collect::<Vec<_>>(),
                "polynomial": r.to_string(),
            })
        })
        .collect();
    let sq: Vec<Value> = squared
        .iter()
        .map(|p| {
            json!({
                "d": p.d,
                "pairs": p.pairs.iter().map(|(a, b)| [bit_label(a, n), bit_label(b, n)]).collect::<Vec<_>>(),
            })
        })
        .collect();
    Ok(json!({
        "k": k,
        "n": n,
        "bases": binomial(n as u64, k as u64),
        "relation_count": rels.len(),
        "relations": rels,
        "squared_count": sq.len(),
        "squared_set": sq,
    }))
}

/// `"min,max,count"` as `count` evenly spaced values.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("expected \"min,max,count\", got {text:?}"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [lo, hi, count] = parts[..] else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let count: usize = count.parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect())
}

pub fn field(v: &Validated, xs: &[f64], ys: &[f64], ts: &[f64]) -> Result<String, CliError> {
    let tau = tau_from_hirota_point(&v.hirota_point()?)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "t", "u"])?;
    for &t in ts {
        for &y in ys {
            for &x in xs {
                let u = evaluate_u(&tau, x, y, t)?;
                w.serialize((x, y, t, u))?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
