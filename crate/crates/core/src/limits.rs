//! Limit data of the degenerating hyperelliptic family: the limit Riemann
//! matrix, theta coefficients, the periods `U, V, W`, and the Abel map of a
//! divisor on the nodal curve.
//!
//! Everything here is exact. Logarithms are kept as [`LogRational`], so the
//! exponentials that appear downstream stay rational.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::jacobian::DelaunaySet;
use crate::scalar::{int, powi, LogRational, Scalar, SignedLog};

/// Branch points `kappa_1, ..., kappa_n`, pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaConfig {
    kappas: Vec<Scalar>,
    sorted: bool,
}

impl KappaConfig {
    pub fn new(kappas: Vec<Scalar>) -> Result<Self> {
        if kappas.len() < 2 {
            return Err(Error::Invalid(format!("need at least two kappa values, got {}", kappas.len())));
        }
        for i in 0..kappas.len() {
            for j in i + 1..kappas.len() {
                if kappas[i] == kappas[j] {
                    return Err(Error::RepeatedKappa { i: i + 1, j: j + 1 });
                }
            }
        }
        let sorted = kappas.windows(2).all(|w| w[0] < w[1]);
        Ok(Self { kappas, sorted })
    }

    pub fn from_ints(kappas: &[i64]) -> Result<Self> {
        Self::new(kappas.iter().map(|&k| int(k)).collect())
    }

    pub fn kappas(&self) -> &[Scalar] {
        &self.kappas
    }

    /// `kappa_j` with a 1-based index.
    pub fn kappa(&self, j: usize) -> &Scalar {
        &self.kappas[j - 1]
    }

    pub fn n(&self) -> usize {
        self.kappas.len()
    }

    pub fn genus(&self) -> usize {
        self.kappas.len() - 1
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    /// `K'(kappa_j) = prod_{i != j} (kappa_j - kappa_i)`, 1-based `j`.
    pub fn k_prime(&self, j: usize) -> Scalar {
        let kj = self.kappa(j);
        (1..=self.n()).filter(|&i| i != j).map(|i| kj - self.kappa(i)).product()
    }

    /// `K(z) = prod (z - kappa_j)`.
    pub fn k_poly(&self, z: &Scalar) -> Scalar {
        self.kappas.iter().map(|k| z - k).product()
    }
}

/// Limit Riemann matrix, `g x g`, entries stored as logarithms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RMatrix {
    entries: Vec<Vec<LogRational>>,
}

impl RMatrix {
    pub fn genus(&self) -> usize {
        self.entries.len()
    }

    /// Entry with 1-based indices, extended by `R_{0,j} = R_{i,0} = 0`.
    pub fn get(&self, i: usize, j: usize) -> LogRational {
        if i == 0 || j == 0 {
            LogRational::zero()
        } else {
            self.entries[i - 1][j - 1].clone()
        }
    }

    pub fn entries(&self) -> &[Vec<LogRational>] {
        &self.entries
    }

    /// `exp(c^T R c / 2)`, when rational.
    pub fn half_quadratic_exp(&self, c: &[i64]) -> Result<Scalar> {
        let g = self.genus();
        if c.len() != g {
            return Err(Error::DimensionMismatch { expected: g, got: c.len() });
        }
        let mut out = Scalar::one();
        for i in 0..g {
            if c[i] == 0 {
                continue;
            }
            let diag = self.entries[i][i]
                .exp_scaled(c[i] * c[i], 2)
                .ok_or_else(|| Error::Invalid("theta coefficient is not rational".into()))?;
            out *= diag;
            for j in i + 1..g {
                out *= powi(self.entries[i][j].exp(), c[i] * c[j]);
            }
        }
        Ok(out)
    }

    /// `exp(x^T R y)` for integer vectors.
    pub fn bilinear_exp(&self, x: &[i64], y: &[i64]) -> Scalar {
        let mut out = Scalar::one();
        for (xi, row) in x.iter().zip(&self.entries) {
            for (yj, entry) in y.iter().zip(row) {
                let e = xi * yj;
                if e != 0 {
                    out *= powi(entry.exp(), e);
                }
            }
        }
        out
    }
}

/// `exp(R_ii) = (kappa_{i+1} - kappa_1)^-4` and
/// `exp(R_ij) = ((kappa_{i+1} - kappa_{j+1}) / ((kappa_{i+1} - kappa_1)(kappa_{j+1} - kappa_1)))^2`.
pub fn limit_r(kc: &KappaConfig) -> RMatrix {
    let g = kc.genus();
    let k1 = kc.kappa(1);
    let entries = (1..=g)
        .map(|i| {
            (1..=g)
                .map(|j| {
                    let di = kc.kappa(i + 1) - k1;
                    let arg = if i == j {
                        powi(&di, -4)
                    } else {
                        let dj = kc.kappa(j + 1) - k1;
                        let f = (kc.kappa(i + 1) - kc.kappa(j + 1)) / (di * dj);
                        &f * &f
                    };
                    LogRational::new(arg).expect("distinct kappas give positive arguments")
                })
                .collect()
        })
        .collect();
    RMatrix { entries }
}

/// `a_c = exp(c^T R c / 2)` for each point of the Delaunay set.
pub fn theta_coefficients(r: &RMatrix, d: &DelaunaySet) -> Result<BTreeMap<Vec<i64>, Scalar>> {
    d.points.iter().map(|c| Ok((c.clone(), r.half_quadratic_exp(c)?))).collect()
}

/// Component of the nodal curve carrying the marked point `p0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Plus,
    Minus,
}

impl Component {
    pub fn sign(self) -> i64 {
        match self {
            Self::Plus => 1,
            Self::Minus => -1,
        }
    }
}

impl FromStr for Component {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "X+" | "plus" | "+" => Ok(Self::Plus),
            "X-" | "minus" | "-" => Ok(Self::Minus),
            _ => Err(Error::Invalid(format!("component must be \"X+\" or \"X-\", got {s:?}"))),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plus => "X+",
            Self::Minus => "X-",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodVectors {
    pub u: Vec<Scalar>,
    pub v: Vec<Scalar>,
    pub w: Vec<Scalar>,
    pub component: Component,
}

impl PeriodVectors {
    pub fn genus(&self) -> usize {
        self.u.len()
    }

    pub fn negated(&self) -> Self {
        let neg = |x: &[Scalar]| x.iter().map(|a| -a.clone()).collect();
        Self {
            u: neg(&self.u),
            v: neg(&self.v),
            w: neg(&self.w),
            component: match self.component {
                Component::Plus => Component::Minus,
                Component::Minus => Component::Plus,
            },
        }
    }

    /// `(c.U, c.V, c.W)`.
    pub fn wave(&self, c: &[i64]) -> [Scalar; 3] {
        let dot = |x: &[Scalar]| -> Scalar { x.iter().zip(c).map(|(a, &b)| a * int(b)).sum() };
        [dot(&self.u), dot(&self.v), dot(&self.w)]
    }
}

/// The KP dispersion quartic `P(x, y, t) = x^4 - 4xt + 3y^2`.
pub fn dispersion(x: &Scalar, y: &Scalar, t: &Scalar) -> Scalar {
    let x2 = x * x;
    &x2 * &x2 - int(4) * x * t + int(3) * y * y
}

/// `(U_j, V_j, W_j) = +-(kappa_1^m - kappa_{j+1}^m)_{m=1,2,3}`, sign by component.
pub fn uvw(kc: &KappaConfig, component: Component) -> PeriodVectors {
    let s = int(component.sign());
    let k1 = kc.kappa(1);
    let col = |m: i64| -> Vec<Scalar> { (2..=kc.n()).map(|j| &s * (powi(k1, m) - powi(kc.kappa(j), m))).collect() };
    PeriodVectors { u: col(1), v: col(2), w: col(3), component }
}

/// `g` points on the nodal curve: the first `split_k` lie on the component
/// carrying `p0`, the rest on the other component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divisor {
    pub points: Vec<Scalar>,
    pub split_k: usize,
    pub p0_component: Component,
}

impl Divisor {
    pub fn new(points: Vec<Scalar>, split_k: usize, p0_component: Component) -> Result<Self> {
        if split_k > points.len() {
            return Err(Error::DivisorSplit(format!("split {split_k} exceeds {} points", points.len())));
        }
        Ok(Self { points, split_k, p0_component })
    }

    /// Checks the divisor against the branch points.
    pub fn validate(&self, kc: &KappaConfig) -> Result<()> {
        if self.points.len() != kc.genus() {
            return Err(Error::DimensionMismatch { expected: kc.genus(), got: self.points.len() });
        }
        if let Some(i) = self.points.iter().position(|p| kc.kappas().contains(p)) {
            return Err(Error::DivisorPole { index: i + 1 });
        }
        Ok(())
    }

    /// `P(z) = prod_{j <= split} (z - p_j)`.
    pub fn p_poly(&self, z: &Scalar) -> Scalar {
        self.points[..self.split_k].iter().map(|p| z - p).product()
    }

    /// `prod_l Q_l(z) = prod_{m > split} 1 / (z - p_m)`.
    pub fn q_product(&self, z: &Scalar) -> Result<Scalar> {
        let mut out = Scalar::one();
        for (i, p) in self.points.iter().enumerate().skip(self.split_k) {
            let d = z - p;
            if d.is_zero() {
                return Err(Error::DivisorPole { index: i + 1 });
            }
            out /= d;
        }
        Ok(out)
    }

    /// `Q_l(z)` for `l = 1..=g+1-split`, with `Q_1 = 1`.
    pub fn q_l(&self, l: usize, z: &Scalar) -> Result<Scalar> {
        if l == 1 {
            return Ok(Scalar::one());
        }
        let idx = self.split_k + l - 2;
        let d = z - &self.points[idx];
        if d.is_zero() {
            return Err(Error::DivisorPole { index: idx + 1 });
        }
        Ok(d.recip())
    }

    /// `P(z) prod Q_l(z)`, required nonzero.
    pub fn value(&self, z: &Scalar) -> Result<Scalar> {
        let v = self.p_poly(z) * self.q_product(z)?;
        if v.is_zero() {
            let index = self.points.iter().position(|p| p == z).map_or(0, |i| i + 1);
            return Err(Error::DivisorPole { index });
        }
        Ok(v)
    }
}

/// `A_i = log( P(kappa_{i+1}) prod Q_l(kappa_{i+1}) / (P(kappa_1) prod Q_l(kappa_1)) )`,
/// returned as `log|.|` with a sign tag.
pub fn abel_map(kc: &KappaConfig, d: &Divisor) -> Result<Vec<SignedLog>> {
    d.validate(kc)?;
    let base = d.value(kc.kappa(1))?;
    (2..=kc.n()).map(|j| SignedLog::from_value(&(d.value(kc.kappa(j))? / &base))).collect()
}
