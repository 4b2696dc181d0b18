//! KP tau functions as finite exponential sums: exact Hirota certification
//! and extended-precision evaluation of `u = 2 d_x^2 log tau` and the KP
//! residual.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::hirota::{canonical_basis, GrassmannPoint, HirotaPoint};
use crate::jacobian::{build_banana, DelaunaySet, VoronoiVertex};
use crate::limits::{dispersion, KappaConfig, PeriodVectors};
use crate::numeric::{self, Float};
use crate::orientation::VertexChoice;
use crate::scalar::{int, Scalar};
use crate::subsets::{complement, indicator, Basis};
use crate::voronoi::{canonical_vertex, normalize_delaunay};

/// One exponential `coefficient * exp(wave . (x, y, t))`. `lattice` is the
/// additive key used to group products: the lattice point `c` for theta-built
/// terms, the indicator vector of `J` for Grassmann-built ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTerm {
    pub coefficient: Scalar,
    pub lattice: Vec<i64>,
    pub basis: Option<Basis>,
    pub wave: [Scalar; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauFunction {
    terms: Vec<TauTerm>,
}

impl TauFunction {
    /// Drops zero coefficients; lattice keys must be distinct.
    pub fn new(terms: Vec<TauTerm>) -> Result<Self> {
        let terms: Vec<TauTerm> = terms.into_iter().filter(|t| !t.coefficient.is_zero()).collect();
        let mut seen = std::collections::BTreeSet::new();
        for t in &terms {
            if !seen.insert(&t.lattice) {
                return Err(Error::Invalid(format!("repeated tau term label {:?}", t.lattice)));
            }
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[TauTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Replaces one coefficient (by position).
    pub fn with_coefficient(&self, index: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        out.terms[index].coefficient = value;
        out
    }
}

fn grassmann_wave(kc: &KappaConfig, j: &[usize]) -> [Scalar; 3] {
    let mut w = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
    for &i in j {
        let k = kc.kappa(i);
        w[0] += k;
        w[1] += k * k;
        w[2] += k * k * k;
    }
    w
}

/// `tau_A = sum_J A_J K_J E_J` with `E_J = exp(sum_{j in J} (kappa_j x + kappa_j^2 y + kappa_j^3 t))`.
pub fn tau_from_grassmannian(a: &GrassmannPoint, kc: &KappaConfig) -> Result<TauFunction> {
    if a.n != kc.n() {
        return Err(Error::DimensionMismatch { expected: kc.n(), got: a.n });
    }
    let terms = a
        .pluecker
        .iter()
        .map(|(j, m)| TauTerm {
            coefficient: m * crate::hirota::vandermonde_minor(kc, j),
            lattice: indicator(j, a.n),
            basis: Some(j.clone()),
            wave: grassmann_wave(kc, j),
        })
        .collect();
    TauFunction::new(terms)
}

/// `tau = sum_{c in D} alpha_c exp(c.U x + c.V y + c.W t)`.
pub fn tau_from_theta(
    alphas: &BTreeMap<Vec<i64>, Scalar>,
    uvw: &PeriodVectors,
    d: &DelaunaySet,
) -> Result<TauFunction> {
    let terms = d
        .points
        .iter()
        .map(|c| {
            let a = alphas.get(c).ok_or_else(|| Error::MissingCoefficient(format!("{c:?}")))?;
            Ok(TauTerm { coefficient: a.clone(), lattice: c.clone(), basis: None, wave: uvw.wave(c) })
        })
        .collect::<Result<Vec<_>>>()?;
    TauFunction::new(terms)
}

/// Labels of the Delaunay points of `a`, read at the graph vertex of `hp`.
fn hp_labels(hp: &HirotaPoint, a: &VoronoiVertex) -> Result<BTreeMap<Vec<i64>, Basis>> {
    let g = hp.uvw.genus();
    if a.genus() != g || a.class_k() != hp.class_k {
        return Err(Error::LabelMismatch(format!(
            "vertex of genus {} and class {} for a point of genus {g} and class {}",
            a.genus(),
            a.class_k(),
            hp.class_k
        )));
    }
    let data = build_banana(g as i64, None)?;
    Ok(normalize_delaunay(&data, a)?
        .into_iter()
        .map(|(c, j)| {
            let label = match hp.vertex_choice {
                VertexChoice::V1 => j,
                VertexChoice::V2 => complement(&j, g + 1),
            };
            (c, label)
        })
        .collect())
}

/// Theta-built tau of a point of the Hirota variety on the Delaunay set of
/// the canonical vertex, identifying `alpha_c = alpha_{B^T c + s}`.
pub fn tau_from_hirota_point(hp: &HirotaPoint) -> Result<TauFunction> {
    tau_from_hirota_point_at(hp, &canonical_vertex(hp.uvw.genus(), hp.class_k)?)
}

/// As [`tau_from_hirota_point`], on the Delaunay set of any vertex of the
/// same class.
pub fn tau_from_hirota_point_at(hp: &HirotaPoint, a: &VoronoiVertex) -> Result<TauFunction> {
    let terms = hp_labels(hp, a)?
        .into_iter()
        .map(|(c, label)| {
            let a =
                hp.alphas.get(&label).ok_or_else(|| Error::MissingCoefficient(crate::subsets::basis_label(&label)))?;
            Ok(TauTerm { coefficient: a.clone(), wave: hp.uvw.wave(&c), lattice: c, basis: Some(label) })
        })
        .collect::<Result<Vec<_>>>()?;
    TauFunction::new(terms)
}

/// Indicator-sum key `1_{J_1} + 1_{J_2}` of a lattice sum `d = c_1 + c_2`
/// in the label frame of `hp`.
pub fn lattice_sum_to_label_sum(hp: &HirotaPoint, d: &[i64]) -> Vec<i64> {
    let n = hp.n();
    let base = indicator(&canonical_basis(hp.class_k), n);
    let sum: i64 = d.iter().sum();
    let bt = std::iter::once(sum).chain(d.iter().map(|x| -x));
    let v1 = bt.zip(&base).map(|(x, b)| x + 2 * b);
    match hp.vertex_choice {
        VertexChoice::V1 => v1.collect(),
        VertexChoice::V2 => v1.map(|x| 2 - x).collect(),
    }
}

/// If every term of `a` matches a term of `b` with the same basis label and
/// `coef_a = r coef_b`, `wave_a = wave_b + shift`, returns `(r, shift)`.
pub fn ratio_and_wave_shift(a: &TauFunction, b: &TauFunction) -> Option<(Scalar, [Scalar; 3])> {
    if a.len() != b.len() || a.is_empty() {
        return None;
    }
    let by_label: BTreeMap<&Basis, &TauTerm> =
        b.terms.iter().filter_map(|t| t.basis.as_ref().map(|j| (j, t))).collect();
    let mut found: Option<(Scalar, [Scalar; 3])> = None;
    for t in &a.terms {
        let other = by_label.get(t.basis.as_ref()?)?;
        let r = &t.coefficient / &other.coefficient;
        let shift = [0, 1, 2].map(|i| &t.wave[i] - &other.wave[i]);
        match &found {
            None => found = Some((r, shift)),
            Some(f) if f.0 == r && f.1 == shift => {}
            Some(_) => return None,
        }
    }
    found
}

fn pair_residual(a: &TauTerm, b: &TauTerm) -> Scalar {
    let d = [0, 1, 2].map(|i| &a.wave[i] - &b.wave[i]);
    &a.coefficient * &b.coefficient * dispersion(&d[0], &d[1], &d[2])
}

/// For each lattice sum `d = c_i + c_j` (`i < j`), the value
/// `sum alpha_i alpha_j P(wave_i - wave_j)`. The tau solves KP iff all vanish.
pub fn hirota_residual(tau: &TauFunction) -> BTreeMap<Vec<i64>, Scalar> {
    let mut out: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
    for (i, a) in tau.terms.iter().enumerate() {
        for b in &tau.terms[i + 1..] {
            let d: Vec<i64> = a.lattice.iter().zip(&b.lattice).map(|(x, y)| x + y).collect();
            *out.entry(d).or_insert_with(Scalar::zero) += pair_residual(a, b);
        }
    }
    out
}

/// The same residual grouped by the exact wave sum instead of the lattice sum.
pub fn hirota_residual_by_wave(tau: &TauFunction) -> BTreeMap<Vec<Scalar>, Scalar> {
    let mut out: BTreeMap<Vec<Scalar>, Scalar> = BTreeMap::new();
    for (i, a) in tau.terms.iter().enumerate() {
        for b in &tau.terms[i + 1..] {
            let key = (0..3).map(|k| &a.wave[k] + &b.wave[k]).collect();
            *out.entry(key).or_insert_with(Scalar::zero) += pair_residual(a, b);
        }
    }
    out
}

/// True iff distinct lattice sums have distinct wave sums and both groupings
/// give the same values.
pub fn residual_groupings_agree(tau: &TauFunction) -> bool {
    let wave_of: BTreeMap<Vec<i64>, Vec<Scalar>> = tau
        .terms
        .iter()
        .enumerate()
        .flat_map(|(i, a)| {
            tau.terms[i + 1..].iter().map(move |b| {
                let d = a.lattice.iter().zip(&b.lattice).map(|(x, y)| x + y).collect();
                (d, (0..3).map(|k| &a.wave[k] + &b.wave[k]).collect())
            })
        })
        .collect();
    let by_lattice = hirota_residual(tau);
    let by_wave = hirota_residual_by_wave(tau);
    by_lattice.len() == by_wave.len()
        && by_lattice.iter().all(|(d, v)| wave_of.get(d).and_then(|w| by_wave.get(w)) == Some(v))
}

pub fn all_zero(residuals: &BTreeMap<Vec<i64>, Scalar>) -> bool {
    residuals.values().all(Zero::is_zero)
}

// Numeric layer: a truncated Taylor series of tau around the evaluation
// point, turned into the series of log tau.

const MAX_X: usize = 6;
const MAX_Y: usize = 2;
const MAX_T: usize = 1;
const MAX_TOTAL: usize = 6;

fn idx(a: usize, b: usize, c: usize) -> usize {
    (a * (MAX_Y + 1) + b) * (MAX_T + 1) + c
}

fn in_box(a: usize, b: usize, c: usize) -> bool {
    a <= MAX_X && b <= MAX_Y && c <= MAX_T && a + b + c <= MAX_TOTAL
}

#[derive(Clone)]
struct Series {
    coef: Vec<Float>,
}

impl Series {
    fn zero(prec: usize) -> Self {
        Self { coef: vec![numeric::zero(prec); (MAX_X + 1) * (MAX_Y + 1) * (MAX_T + 1)] }
    }

    fn get(&self, a: usize, b: usize, c: usize) -> &Float {
        &self.coef[idx(a, b, c)]
    }

    fn mul(&self, other: &Series, prec: usize) -> Series {
        let mut out = Series::zero(prec);
        let nonzero: Vec<(usize, usize, usize)> =
            monomials().filter(|&(a, b, c)| self.get(a, b, c) != &Float::ZERO).collect();
        for &(a1, b1, c1) in &nonzero {
            for (a2, b2, c2) in monomials() {
                let (a, b, c) = (a1 + a2, b1 + b2, c1 + c2);
                if in_box(a, b, c) && other.get(a2, b2, c2) != &Float::ZERO {
                    let p = self.get(a1, b1, c1) * other.get(a2, b2, c2);
                    out.coef[idx(a, b, c)] += p;
                }
            }
        }
        out
    }
}

fn monomials() -> impl Iterator<Item = (usize, usize, usize)> {
    (0..=MAX_X)
        .flat_map(|a| (0..=MAX_Y).flat_map(move |b| (0..=MAX_T).map(move |c| (a, b, c))))
        .filter(|&(a, b, c)| in_box(a, b, c))
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Derivatives of `log tau` at one point, from the Taylor series.
struct LogDerivatives {
    series: Series,
}

impl LogDerivatives {
    fn at(tau: &TauFunction, point: [&Float; 3], prec: usize) -> Result<Self> {
        if tau.is_empty() {
            return Err(Error::EmptyTau);
        }
        let waves: Vec<[Float; 3]> =
            tau.terms.iter().map(|t| [0, 1, 2].map(|i| numeric::from_rational(&t.wave[i], prec))).collect();
        let exponents: Vec<Float> =
            waves.iter().map(|w| &w[0] * point[0] + &w[1] * point[1] + &w[2] * point[2]).collect();
        let shift =
            exponents.iter().max_by(|a, b| a.partial_cmp(b).expect("finite exponent")).cloned().expect("nonempty");
        let mut taylor = Series::zero(prec);
        let mut magnitude = numeric::zero(prec);
        for ((t, w), e) in tau.terms.iter().zip(&waves).zip(&exponents) {
            let v = numeric::from_rational(&t.coefficient, prec) * (e - &shift).exp();
            magnitude += numeric::abs(&v);
            for (a, b, c) in monomials() {
                let mut m = v.clone();
                for _ in 0..a {
                    m *= &w[0];
                }
                for _ in 0..b {
                    m *= &w[1];
                }
                for _ in 0..c {
                    m *= &w[2];
                }
                let f = factorial(a) * factorial(b) * factorial(c);
                taylor.coef[idx(a, b, c)] += m / numeric::from_i64(f, prec);
            }
        }
        let tau0 = taylor.get(0, 0, 0).clone();
        let tiny = magnitude * Float::from_parts(1.into(), -((prec as isize) - 4));
        if numeric::abs(&tau0) <= tiny {
            return Err(Error::TauVanishes {
                x: numeric::to_f64(point[0]),
                y: numeric::to_f64(point[1]),
                t: numeric::to_f64(point[2]),
            });
        }
        let mut s = taylor;
        for c in &mut s.coef {
            *c = &*c / &tau0;
        }
        s.coef[idx(0, 0, 0)] = numeric::zero(prec);
        // log(1 + s) = sum_{m >= 1} (-1)^{m+1} s^m / m
        let mut log = Series::zero(prec);
        let mut power = s.clone();
        for m in 1..=MAX_TOTAL {
            let scale = numeric::from_i64(if m % 2 == 1 { m as i64 } else { -(m as i64) }, prec);
            for (l, p) in log.coef.iter_mut().zip(&power.coef) {
                *l += p / &scale;
            }
            if m < MAX_TOTAL {
                power = power.mul(&s, prec);
            }
        }
        Ok(Self { series: log })
    }

    /// `d_x^a d_y^b d_t^c log tau`.
    fn d(&self, a: usize, b: usize, c: usize, prec: usize) -> Float {
        self.series.get(a, b, c) * numeric::from_i64(factorial(a) * factorial(b) * factorial(c), prec)
    }
}

fn float_point(x: f64, y: f64, t: f64, prec: usize) -> [Float; 3] {
    [numeric::from_f64(x, prec), numeric::from_f64(y, prec), numeric::from_f64(t, prec)]
}

fn u_float(tau: &TauFunction, p: &[Float; 3], prec: usize) -> Result<Float> {
    let l = LogDerivatives::at(tau, [&p[0], &p[1], &p[2]], prec)?;
    Ok(l.d(2, 0, 0, prec) * numeric::from_i64(2, prec))
}

/// `u = 2 d_x^2 log tau` at `(x, y, t)`.
pub fn evaluate_u(tau: &TauFunction, x: f64, y: f64, t: f64) -> Result<f64> {
    let prec = numeric::precision();
    u_float(tau, &float_point(x, y, t, prec), prec).map(|u| numeric::to_f64(&u))
}

/// `(-4u_t + 6uu_x + u_xxx)_x + 3u_yy` at one point, with `u = 2 L_xx`,
/// `L = log tau`: `-8L_xxxt + 24(L_xxx^2 + L_xx L_xxxx) + 2L_xxxxxx + 6L_xxyy`.
pub fn kp_residual_at(tau: &TauFunction, x: f64, y: f64, t: f64) -> Result<f64> {
    let prec = numeric::precision();
    let p = float_point(x, y, t, prec);
    let l = LogDerivatives::at(tau, [&p[0], &p[1], &p[2]], prec)?;
    let n = |k: i64| numeric::from_i64(k, prec);
    let l3 = l.d(3, 0, 0, prec);
    let r = n(-8) * l.d(3, 0, 1, prec)
        + n(24) * (&l3 * &l3 + l.d(2, 0, 0, prec) * l.d(4, 0, 0, prec))
        + n(2) * l.d(6, 0, 0, prec)
        + n(6) * l.d(2, 2, 0, prec);
    Ok(numeric::to_f64(&r))
}

/// Maximum `|KP residual|` over the samples.
pub fn kp_residual_numeric(tau: &TauFunction, samples: &[[f64; 3]]) -> Result<f64> {
    samples.iter().try_fold(0.0f64, |m, s| Ok(m.max(kp_residual_at(tau, s[0], s[1], s[2])?.abs())))
}

/// `max |u_{v2}(x, y, t) - u_{v1}(-x, -y, -t)|` over the samples.
pub fn spacetime_inversion_check(tau_v1: &TauFunction, tau_v2: &TauFunction, samples: &[[f64; 3]]) -> Result<f64> {
    let prec = numeric::precision();
    samples.iter().try_fold(0.0f64, |m, s| {
        let u2 = u_float(tau_v2, &float_point(s[0], s[1], s[2], prec), prec)?;
        let u1 = u_float(tau_v1, &float_point(-s[0], -s[1], -s[2], prec), prec)?;
        Ok(m.max(numeric::to_f64(&numeric::abs(&(u2 - u1)))))
    })
}

/// Central-difference derivative `d_x^a d_y^b d_t^c u` with step `h`,
/// Richardson-extrapolated from steps `h` and `h/2`.
fn u_fd(tau: &TauFunction, p: &[Float; 3], orders: [usize; 3], h: &Float, prec: usize) -> Result<Float> {
    let stencil = |h: &Float| -> Result<Float> {
        let mut total = numeric::zero(prec);
        let axes: Vec<Vec<(Float, Float)>> = orders
            .iter()
            .map(|&o| {
                (0..=o)
                    .map(|k| {
                        let binom = (1..=k as i64).fold(1i64, |acc, i| acc * (o as i64 - i + 1) / i);
                        let w = numeric::from_i64(if k % 2 == 0 { binom } else { -binom }, prec);
                        let off = numeric::from_i64(o as i64 - 2 * k as i64, prec) * h / numeric::from_i64(2, prec);
                        (off, w)
                    })
                    .collect()
            })
            .collect();
        for (ox, wx) in &axes[0] {
            for (oy, wy) in &axes[1] {
                for (ot, wt) in &axes[2] {
                    let q = [&p[0] + ox, &p[1] + oy, &p[2] + ot];
                    total += wx * wy * wt * u_float(tau, &q, prec)?;
                }
            }
        }
        let mut hp = numeric::from_i64(1, prec);
        for _ in 0..orders.iter().sum::<usize>() {
            hp *= h;
        }
        Ok(total / hp)
    };
    let coarse = stencil(h)?;
    let fine = stencil(&(h / numeric::from_i64(2, prec)))?;
    Ok((numeric::from_i64(4, prec) * fine - coarse) / numeric::from_i64(3, prec))
}

/// Finite-difference KP residual on `u` (independent of the series
/// derivatives of `log tau`), step `h`.
pub fn kp_residual_finite_difference(tau: &TauFunction, x: f64, y: f64, t: f64, h: f64) -> Result<f64> {
    let prec = numeric::precision().max(30);
    let p = float_point(x, y, t, prec);
    let h = numeric::from_f64(h, prec);
    let d = |o: [usize; 3]| u_fd(tau, &p, o, &h, prec);
    let n = |k: i64| numeric::from_i64(k, prec);
    let u = u_float(tau, &p, prec)?;
    let ux = d([1, 0, 0])?;
    let r = n(-4) * d([1, 0, 1])? + n(6) * (&ux * &ux + u * d([2, 0, 0])?) + d([4, 0, 0])? + n(3) * d([0, 2, 0])?;
    Ok(numeric::to_f64(&r))
}

/// Coefficient ratio expected between the theta-built and Grassmann-built
/// taus of the same point: `1 / K_{I_k}`.
pub fn theta_to_grassmann_ratio(kc: &KappaConfig, k: usize) -> Scalar {
    Scalar::one() / crate::hirota::vandermonde_minor(kc, &canonical_basis(k))
}

/// The 1-soliton `E_1 + E_2` at `kappa = (k1, k2)`.
pub fn one_soliton(kc: &KappaConfig) -> Result<TauFunction> {
    let terms = (1..=kc.n())
        .map(|j| TauTerm {
            coefficient: int(1),
            lattice: indicator(&[j], kc.n()),
            basis: Some(vec![j]),
            wave: grassmann_wave(kc, &[j]),
        })
        .collect();
    TauFunction::new(terms)
}
