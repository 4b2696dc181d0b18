//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use tropkp_core::equations::{face_direction_classes, instantiate_and_check, squared_point_values, squared_set};
use tropkp_core::hirota::{
    beta_from_lambda, check_dn_interlacing, lambda_from_divisor, matrix_a, matrix_a_tilde, pluecker_vandermonde_holds,
    psi, verify_minor_identity, HirotaPoint,
};
use tropkp_core::jacobian::{build_banana, delaunay_set, voronoi_contains};
use tropkp_core::limits::{dispersion, uvw, Component};
use tropkp_core::orientation::{
    orientation_to_vertex, strongly_connected_orientations, vertex_to_orientation, VertexChoice,
};
use tropkp_core::scalar::{int, rat};
use tropkp_core::subsets::{binomial, complement, indicator, k_subsets, Basis};
use tropkp_core::tau::{
    all_zero, hirota_residual, kp_residual_numeric, lattice_sum_to_label_sum, spacetime_inversion_check,
    tau_from_hirota_point, TauFunction,
};
use tropkp_core::voronoi::{f_vector, f_vector_exhaustive, normalize_delaunay, shift_vector, voronoi_vertices};
use tropkp_core::{Scalar, VoronoiVertex};

const SEED: u64 = 20_241_019;
const CERT_SIZES: [(usize, usize); 6] = [(1, 2), (1, 3), (2, 3), (2, 4), (3, 5), (2, 5)];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn summarize(failures: Vec<String>, ok_detail: &str) -> Outcome {
    if failures.is_empty() {
        Outcome::new(true, ok_detail)
    } else {
        let shown: Vec<_> = failures.iter().take(3).cloned().collect();
        Outcome::new(false, format!("{} failure(s): {}", failures.len(), shown.join("; ")))
    }
}

fn voronoi_counts() -> Outcome {
    let mut f = Vec::new();
    for g in 1..=8usize {
        let vs = voronoi_vertices(g);
        let total: usize = vs.values().map(Vec::len).sum();
        check(&mut f, total as u64 == 2 * ((1u64 << g) - 1), || format!("g={g}: {total} vertices"));
        for k in 1..=g {
            let size = vs.get(&k).map_or(0, Vec::len) as u64;
            check(&mut f, size == binomial(g as u64 + 1, k as u64), || format!("g={g} class {k}: {size}"));
        }
        let fv = f_vector(g);
        for (l, &x) in fv.iter().enumerate() {
            let expected = binomial(g as u64 + 1, l as u64) * ((1u64 << (g + 1 - l)) - 2);
            check(&mut f, x == expected, || format!("g={g} f_{l}={x}"));
        }
    }
    check(&mut f, f_vector(3) == vec![14, 24, 12], || format!("genus-3 f-vector {:?}", f_vector(3)));
    for g in 1..=4 {
        let ex = f_vector_exhaustive(g);
        check(&mut f, ex == f_vector(g), || format!("g={g}: exhaustive {ex:?}"));
    }
    summarize(f, "g=1..8 counts and class sizes; f(3)=(14,24,12); exhaustive faces match at g<=4")
}

fn genus_two_ground_truth() -> Outcome {
    let mut f = Vec::new();
    let expected: BTreeSet<Vec<Scalar>> = [(-1, 2), (-1, -1), (2, -1), (1, 1), (-2, 1), (1, -2)]
        .into_iter()
        .map(|(a, b)| vec![rat(a, 3), rat(b, 3)])
        .collect();
    let got: BTreeSet<Vec<Scalar>> = voronoi_vertices(2).into_values().flatten().map(|v| v.coords().to_vec()).collect();
    check(&mut f, got == expected, || format!("hexagon vertices {got:?}"));
    let data = build_banana(2, None).unwrap();
    for v in &expected {
        check(&mut f, voronoi_contains(&data, v).unwrap_or(false), || format!("{v:?} not in V_Q"));
    }
    let a4 = VoronoiVertex::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
    let d = delaunay_set(&data, &a4).unwrap();
    let pts: BTreeSet<Vec<i64>> = d.points.into_iter().collect();
    let tri: BTreeSet<Vec<i64>> = [vec![0, 0], vec![1, 0], vec![0, 1]].into_iter().collect();
    check(&mut f, pts == tri, || format!("Delaunay set at a4 {pts:?}"));
    summarize(f, "six hexagon vertices and triangle {(0,0),(1,0),(0,1)} at a4")
}

fn hypersimplex_normalization() -> Outcome {
    let mut f = Vec::new();
    for g in 1..=6usize {
        let data = build_banana(g as i64, None).unwrap();
        for (k, vs) in voronoi_vertices(g) {
            let all: BTreeSet<Basis> = k_subsets(g + 1, k).into_iter().collect();
            for v in vs {
                let labels = normalize_delaunay(&data, &v).unwrap();
                let image: BTreeSet<Basis> = labels.values().cloned().collect();
                check(&mut f, image.len() == labels.len() && image == all, || format!("g={g} {v:?}"));
            }
        }
    }
    let data = build_banana(3, None).unwrap();
    let abar = VoronoiVertex::new(vec![rat(1, 2), rat(-1, 2), rat(-1, 2)]).unwrap();
    let s = shift_vector(&data, &abar).unwrap().s;
    check(&mut f, s == vec![1, 1, 0, 0], || format!("shift vector {s:?}"));
    summarize(f, "bijection onto C([n],k) for all vertices g<=6; s(1/2,-1/2,-1/2)=(1,1,0,0)")
}

fn orientation_bijection() -> Outcome {
    let mut f = Vec::new();
    for g in 1..=6usize {
        let data = build_banana(g as i64, None).unwrap();
        let vertices: Vec<VoronoiVertex> = voronoi_vertices(g).into_values().flatten().collect();
        let mut images = BTreeSet::new();
        for v in &vertices {
            let o = vertex_to_orientation(&data, v).unwrap();
            check(&mut f, orientation_to_vertex(&data, &o).as_ref() == Ok(v), || format!("g={g} {v:?}"));
            images.insert(o);
        }
        let os = strongly_connected_orientations(g + 1);
        check(&mut f, os.len() == (1 << (g + 1)) - 2, || format!("g={g}: {} orientations", os.len()));
        for o in &os {
            let back = orientation_to_vertex(&data, o).and_then(|v| vertex_to_orientation(&data, &v));
            check(&mut f, back.as_ref() == Ok(o), || format!("g={g} orientation {o}"));
        }
        check(&mut f, images.len() == os.len(), || format!("g={g}: image size {}", images.len()));
    }
    summarize(f, "phi and phi^-1 mutually inverse for g<=6; |O| = 2^(g+1)-2")
}

fn minor_identity() -> Outcome {
    let mut f = Vec::new();
    let mut r = common::rng(SEED + 5);
    let mut checked = 0;
    for n in 2..=7usize {
        for k in 1..n {
            for _ in 0..100 {
                let kc = common::kappas(&mut r, n);
                let beta = common::nonzero_vec(&mut r, n - 1);
                match verify_minor_identity(&kc, &beta, k) {
                    Ok(true) => checked += 1,
                    other => f.push(format!("(k,n)=({k},{n}) {kc:?} {beta:?}: {other:?}")),
                }
            }
        }
    }
    let mut exchanges = 0;
    for n in 2..=8usize {
        for _ in 0..3 {
            let kc = common::kappas(&mut r, n);
            for s in 1..=3usize.min(n / 2) {
                for is in k_subsets(n, s) {
                    let rest = complement(&is, n);
                    for pos in k_subsets(rest.len(), s) {
                        let js: Basis = pos.iter().map(|&p| rest[p - 1]).collect();
                        exchanges += 1;
                        check(&mut f, pluecker_vandermonde_holds(&kc, &is, &js), || format!("n={n} I={is:?} J={js:?}"));
                    }
                }
            }
        }
    }
    summarize(f, &format!("{checked} configs (100 per (k,n), n<=7); {exchanges} exchanges s<=3, n<=8"))
}

fn parametrization_equivalence() -> Outcome {
    let mut f = Vec::new();
    let mut r = common::rng(SEED + 6);
    let mut count = 0;
    for n in 2..=6usize {
        for k in 1..n.min(4) {
            for _ in 0..50 {
                let kc = common::sorted_kappas(&mut r, n);
                let lambda = common::nonzero_vec(&mut r, n - 1);
                let beta = beta_from_lambda(&kc, &lambda, k).unwrap();
                let a = matrix_a(&kc, &beta, k).unwrap();
                let at = matrix_a_tilde(&kc, &lambda, k).unwrap();
                check(&mut f, a.proportional_to(&at), || format!("(k,n)=({k},{n}) A not proportional to A~"));
                let d = common::interlaced_divisor(&mut r, &kc, k);
                check(&mut f, check_dn_interlacing(&kc, &d) == Ok(true), || format!("{d:?} not interlaced"));
                let lam = lambda_from_divisor(&kc, &d).unwrap();
                let tp = matrix_a_tilde(&kc, &lam, k).unwrap();
                check(&mut f, tp.pluecker.values().all(Signed::is_positive), || {
                    format!("(k,n)=({k},{n}) {d:?} not TP")
                });
                count += 1;
            }
        }
    }
    summarize(f, &format!("{count} configs, (k,n)<=(3,6): A ~ A~ exactly; interlaced divisors totally positive"))
}

/// Certification data: positive lambda on sorted kappa, converted to beta.
fn certification_points(seed: u64) -> Vec<HirotaPoint> {
    let mut r = common::rng(seed);
    let mut out = Vec::new();
    for &(k, n) in &CERT_SIZES {
        for _ in 0..4 {
            let kc = common::sorted_kappas(&mut r, n);
            let lambda = common::positive_vec(&mut r, n - 1);
            let beta = beta_from_lambda(&kc, &lambda, k).unwrap();
            for choice in [VertexChoice::V1, VertexChoice::V2] {
                out.push(psi(&kc, &beta, k, choice).unwrap());
            }
        }
    }
    out
}

fn size_of(hp: &HirotaPoint) -> (usize, usize) {
    (hp.class_k, hp.n())
}

fn kp_certification() -> Outcome {
    let mut f = Vec::new();
    let mut r = common::rng(SEED + 7);
    let samples = common::samples(&mut r, 20);
    let mut undetected: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut numeric_max = 0.0f64;
    let mut numeric_done = BTreeSet::new();
    for hp in certification_points(SEED + 70) {
        let tau = tau_from_hirota_point(&hp).unwrap();
        let res = hirota_residual(&tau);
        check(&mut f, all_zero(&res), || format!("{:?}: nonzero exact residual", size_of(&hp)));
        for i in 0..tau.len() {
            let bumped = tau.with_coefficient(i, common::perturbed(&mut r, &tau.terms()[i].coefficient));
            if all_zero(&hirota_residual(&bumped)) {
                undetected.insert(size_of(&hp));
            }
        }
        if hp.vertex_choice == VertexChoice::V1 && numeric_done.insert(size_of(&hp)) {
            match kp_residual_numeric(&tau, &samples) {
                Ok(m) => numeric_max = numeric_max.max(m),
                Err(e) => f.push(format!("{:?}: {e}", size_of(&hp))),
            }
        }
    }
    check(&mut f, numeric_max < 1e-8, || format!("numeric KP residual {numeric_max:e}"));
    let known: BTreeSet<(usize, usize)> = [(1, 2), (1, 3), (2, 3)].into_iter().collect();
    if !undetected.is_empty() {
        f.push(format!("perturbation not detected at (k,n) in {undetected:?} (k=1 or n-k=1: every alpha solves KP)"));
    }
    let outcome = summarize(f, &format!("exact residuals 0; perturbations detected; numeric max {numeric_max:.2e}"));
    // The only admissible failure is the perturbation clause on the known sizes.
    assert!(
        outcome.pass || (undetected == known && outcome.detail.starts_with("1 failure")),
        "criterion 7: unexpected failure: {}",
        outcome.detail
    );
    outcome
}

fn spacetime_inversion() -> Outcome {
    let kc = tropkp_core::KappaConfig::from_ints(&[0, 1, 2, 3]).unwrap();
    let beta = vec![int(1), int(1), int(1)];
    let v1 = tau_from_hirota_point(&psi(&kc, &beta, 2, VertexChoice::V1).unwrap()).unwrap();
    let v2 = tau_from_hirota_point(&psi(&kc, &beta, 2, VertexChoice::V2).unwrap()).unwrap();
    let samples = common::samples(&mut common::rng(SEED + 8), 20);
    match spacetime_inversion_check(&v1, &v2, &samples) {
        Ok(m) => Outcome::new(m < 1e-9, format!("max |u_v2(x) - u_v1(-x)| = {m:.2e} over 20 samples")),
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

fn dispersion_relation() -> Outcome {
    let mut f = Vec::new();
    let mut r = common::rng(SEED + 9);
    for i in 0..100 {
        let g = 1 + i % 6;
        let kc = common::kappas(&mut r, g + 1);
        for comp in [Component::Plus, Component::Minus] {
            let p = uvw(&kc, comp);
            for j in 0..g {
                check(&mut f, dispersion(&p.u[j], &p.v[j], &p.w[j]).is_zero(), || format!("{kc:?} j={j}"));
            }
        }
    }
    summarize(f, "U^4+3V^2-4UW = 0 exactly for 100 configs, g<=6, both components")
}

/// All unordered pairs of distinct k-subsets, grouped by indicator sum.
fn exhaustive_pairing(k: usize, n: usize) -> BTreeMap<Vec<i64>, usize> {
    let subsets = k_subsets(n, k);
    let mut out = BTreeMap::new();
    for (i, a) in subsets.iter().enumerate() {
        for b in &subsets[i + 1..] {
            let d: Vec<i64> = indicator(a, n).iter().zip(indicator(b, n)).map(|(x, y)| x + y).collect();
            *out.entry(d).or_insert(0) += 1;
        }
    }
    out
}

fn equation_generator() -> Outcome {
    let mut f = Vec::new();
    let rels = face_direction_classes(2, 4).unwrap();
    let edges = rels.iter().filter(|r| r.dimension() == 1).count();
    let three: Vec<_> = rels.iter().filter(|r| r.dimension() == 3).collect();
    check(&mut f, rels.len() == 7 && edges == 6 && three.len() == 1, || {
        format!("{} relations, {edges} edges", rels.len())
    });
    for r in rels.iter().filter(|r| r.dimension() == 1) {
        let t = &r.terms[0];
        let (i, j) = (r.direction[0] as i64, r.direction[1] as i64);
        let expected: Vec<i64> = (1..=4).map(|x| i64::from(x == i) - i64::from(x == j)).collect();
        check(&mut f, r.terms.len() == 1 && t.difference == expected, || format!("edge {:?}", r.direction));
    }
    // alpha_1100 alpha_0011 P(..) + alpha_1010 alpha_0101 P(..) + alpha_1001 alpha_0110 P(..)
    let expected: BTreeSet<(Basis, Basis, Vec<i64>)> = [
        (vec![1, 2], vec![3, 4], vec![1, 1, -1, -1]),
        (vec![1, 3], vec![2, 4], vec![1, -1, 1, -1]),
        (vec![1, 4], vec![2, 3], vec![1, -1, -1, 1]),
    ]
    .into_iter()
    .collect();
    if let Some(top) = three.first() {
        let got: BTreeSet<_> =
            top.terms.iter().map(|t| (t.first.clone(), t.second.clone(), t.difference.clone())).collect();
        check(&mut f, got == expected, || format!("3-dim relation {got:?}"));
    }
    let mut points = 0;
    for n in 2..=10usize {
        for k in 1..n {
            let sq = squared_set(k, n).unwrap();
            let oracle = exhaustive_pairing(k, n);
            let got: BTreeMap<Vec<i64>, usize> = sq.iter().map(|p| (p.d.clone(), p.pairs.len())).collect();
            check(&mut f, got == oracle, || format!("(k,n)=({k},{n}) squared set differs from pairing oracle"));
            for dp in (2 * k).saturating_sub(n)..k {
                let count = sq.iter().filter(|p| p.two_count == dp).count() as u64;
                let expected = binomial(n as u64, dp as u64) * binomial((n - dp) as u64, (2 * k - 2 * dp) as u64);
                check(&mut f, count == expected, || format!("(k,n)=({k},{n}) d'={dp}: {count} points"));
            }
            for p in &sq {
                let m = binomial((2 * k - 2 * p.two_count) as u64, (k - p.two_count) as u64) / 2;
                check(&mut f, p.pairs.len() as u64 == m, || format!("(k,n)=({k},{n}) {:?} multiplicity", p.d));
                check(&mut f, (p.pairs.len() == 1) == (2 * k - 2 * p.two_count == 2), || {
                    format!("{:?} uniqueness", p.d)
                });
            }
            let scanned: BTreeSet<Basis> = sq.iter().map(|p| p.direction()).collect();
            let rels = face_direction_classes(k, n).unwrap();
            let dirs: BTreeSet<Basis> = rels.iter().map(|r| r.direction.clone()).collect();
            check(&mut f, scanned == dirs && dirs.len() == rels.len(), || format!("(k,n)=({k},{n}) directions"));
            let formula: u64 = (1..=k.min(n - k)).map(|l| binomial(n as u64, 2 * l as u64)).sum();
            check(&mut f, rels.len() as u64 == formula, || format!("(k,n)=({k},{n}) {} directions", rels.len()));
            points += sq.len();
        }
    }
    summarize(
        f,
        &format!("(2,4): 6 edge quartics + the 3-term genus-3 quartic; {points} squared points match the count formulas for n<=10"),
    )
}

fn label_size(hp: &HirotaPoint) -> usize {
    match hp.vertex_choice {
        VertexChoice::V1 => hp.class_k,
        VertexChoice::V2 => hp.n() - hp.class_k,
    }
}

fn cross_oracle_for(hp: &HirotaPoint, f: &mut Vec<String>) {
    let (k, n) = (label_size(hp), hp.n());
    let tau: TauFunction = tau_from_hirota_point(hp).unwrap();
    let translated: BTreeMap<Vec<i64>, Scalar> =
        hirota_residual(&tau).into_iter().map(|(d, v)| (lattice_sum_to_label_sum(hp, &d), v)).collect();
    let direct = squared_point_values(k, n, hp).unwrap();
    check(f, translated == direct, || format!("{:?} {}: residual map differs", (k, n), hp.vertex_choice));
    let rels = face_direction_classes(k, n).unwrap();
    let values = instantiate_and_check(&rels, hp).unwrap();
    for r in &rels {
        check(f, direct.get(&r.point()) == values.get(&r.direction), || format!("relation {:?}", r.direction));
    }
}

fn cross_oracle() -> Outcome {
    let mut f = Vec::new();
    let mut r = common::rng(SEED + 11);
    let mut count = 0;
    for hp in certification_points(SEED + 70) {
        cross_oracle_for(&hp, &mut f);
        let mut bumped = hp.clone();
        let key = bumped.alphas.keys().next().cloned().unwrap();
        let a = bumped.alphas.get_mut(&key).unwrap();
        *a = common::perturbed(&mut r, a);
        cross_oracle_for(&bumped, &mut f);
        let mut moved = hp.clone();
        moved.uvw.v[0] += common::nonzero(&mut r, 5, 3);
        cross_oracle_for(&moved, &mut f);
        count += 3;
    }
    summarize(f, &format!("{count} points (certification configs, alpha- and period-perturbed): exact agreement"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Voronoi counts", voronoi_counts),
        ("Genus-2 ground truth", genus_two_ground_truth),
        ("Hypersimplex normalization", hypersimplex_normalization),
        ("Orientation bijection", orientation_bijection),
        ("Minor identity", minor_identity),
        ("Parametrization equivalence", parametrization_equivalence),
        ("KP certification", kp_certification),
        ("Space-time inversion", spacetime_inversion),
        ("Dispersion relation", dispersion_relation),
        ("Hirota-equation generator", equation_generator),
        ("Cross-oracle", cross_oracle),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        println!("{status} criterion {:>2} ({name}): {} [{:.1}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass && i + 1 != 7 {
            unexpected.push(i + 1);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
