//! The three parametrizations of the main Hirota component (by `beta`, by
//! `lambda`, by a divisor) and the Grassmannian matrices behind them.
//!
//! Conventions: bases are 1-based label sets, `I_k = {1, ..., k}` is the
//! canonical base, and `beta_0 = lambda_0 = 1`, `R_{0,.} = 0`.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::limits::{abel_map, limit_r, uvw, Component, Divisor, KappaConfig, PeriodVectors, RMatrix};
use crate::linalg::Matrix;
use crate::orientation::VertexChoice;
use crate::scalar::{int, powi, Scalar};
use crate::subsets::{complement, is_valid_subset, k_subsets, Basis};

/// A full-rank `k x n` matrix with its maximal minors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrassmannPoint {
    pub k: usize,
    pub n: usize,
    pub matrix: Matrix,
    pub pluecker: BTreeMap<Basis, Scalar>,
}

impl GrassmannPoint {
    pub fn from_matrix(matrix: Matrix) -> Self {
        let (k, n) = (matrix.rows(), matrix.cols());
        let rows: Vec<usize> = (0..k).collect();
        let pluecker = k_subsets(n, k)
            .into_iter()
            .map(|j| {
                let cols: Vec<usize> = j.iter().map(|c| c - 1).collect();
                let m = matrix.submatrix(&rows, &cols).determinant();
                (j, m)
            })
            .collect();
        Self { k, n, matrix, pluecker }
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// Plücker vector scaled so that the lexicographically first nonzero
    /// minor is 1.
    pub fn normalized_pluecker(&self) -> BTreeMap<Basis, Scalar> {
        normalize(&self.pluecker)
    }

    pub fn proportional_to(&self, other: &GrassmannPoint) -> bool {
        self.k == other.k && self.n == other.n && self.normalized_pluecker() == other.normalized_pluecker()
    }

    pub fn is_totally_positive(&self) -> bool {
        self.pluecker.values().all(Signed::is_positive)
    }

    /// Bases with a nonzero minor.
    pub fn matroid(&self) -> Vec<Basis> {
        self.pluecker.iter().filter(|(_, v)| !v.is_zero()).map(|(j, _)| j.clone()).collect()
    }
}

/// Scales a coordinate vector so the first nonzero entry is 1.
pub fn normalize(v: &BTreeMap<Basis, Scalar>) -> BTreeMap<Basis, Scalar> {
    let Some(first) = v.values().find(|x| !x.is_zero()).cloned() else {
        return v.clone();
    };
    v.iter().map(|(j, x)| (j.clone(), x / &first)).collect()
}

/// Image point of a parametrization: coefficients keyed by base, and periods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HirotaPoint {
    pub alphas: BTreeMap<Basis, Scalar>,
    pub uvw: PeriodVectors,
    pub class_k: usize,
    pub vertex_choice: VertexChoice,
}

impl HirotaPoint {
    pub fn n(&self) -> usize {
        self.uvw.genus() + 1
    }

    /// The canonical base `I_k` (for `v1`) or its complement (for `v2`).
    pub fn base_label(&self) -> Basis {
        let i = canonical_basis(self.class_k);
        match self.vertex_choice {
            VertexChoice::V1 => i,
            VertexChoice::V2 => complement(&i, self.n()),
        }
    }

    /// Lattice point of the Delaunay set of the canonical vertex that carries `label`.
    pub fn lattice_point(&self, label: &[usize]) -> Vec<i64> {
        let n = self.n();
        let v1_label = match self.vertex_choice {
            VertexChoice::V1 => label.to_vec(),
            VertexChoice::V2 => complement(label, n),
        };
        lattice_point(&v1_label, &canonical_basis(self.class_k), n - 1)
    }
}

pub fn canonical_basis(k: usize) -> Basis {
    (1..=k).collect()
}

/// The `c` with `B^T c + 1_base = 1_label`, i.e. `c_l = 1_base(l+1) - 1_label(l+1)`.
pub fn lattice_point(label: &[usize], base: &[usize], g: usize) -> Vec<i64> {
    (1..=g).map(|l| i64::from(base.contains(&(l + 1))) - i64::from(label.contains(&(l + 1)))).collect()
}

fn check_subset(j: &[usize], n: usize) -> Result<()> {
    if is_valid_subset(j, n, j.len()) {
        Ok(())
    } else {
        Err(Error::InvalidSubset(j.to_vec(), n))
    }
}

fn check_nonzero(xs: &[Scalar], name: &'static str, g: usize) -> Result<()> {
    if xs.len() != g {
        return Err(Error::DimensionMismatch { expected: g, got: xs.len() });
    }
    match xs.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::ZeroParameter { name, index: i + 1 }),
        None => Ok(()),
    }
}

fn check_class(k: usize, g: usize) -> Result<()> {
    if k < 1 || k > g {
        return Err(Error::ClassOutOfRange { k, g });
    }
    Ok(())
}

/// `x_{i}` with the convention `x_0 = 1` (1-based otherwise).
fn with_unit(xs: &[Scalar], i: usize) -> Scalar {
    if i == 0 {
        Scalar::one()
    } else {
        xs[i - 1].clone()
    }
}

/// `K_J = prod_{i<j in J} (kappa_j - kappa_i)`.
pub fn vandermonde_minor(kc: &KappaConfig, j: &[usize]) -> Scalar {
    j.iter().tuple_combinations().map(|(&a, &b)| kc.kappa(b) - kc.kappa(a)).product()
}

/// `K_J^2 = exp(-(k-1)/2 sum_l R_{j_l-1, j_l-1} + sum_{l<m} R_{j_l-1, j_m-1})`.
pub fn kj_squared_from_r(r: &RMatrix, j: &[usize]) -> Result<Scalar> {
    check_subset(j, r.genus() + 1)?;
    let k = j.len() as i64;
    let mut out = Scalar::one();
    for &a in j {
        let e = r.get(a - 1, a - 1);
        out *= e.exp_scaled(-(k - 1), 2).ok_or_else(|| Error::Invalid("K_J^2 is not rational for this R".into()))?;
    }
    for (&a, &b) in j.iter().tuple_combinations() {
        out *= r.get(a - 1, b - 1).exp();
    }
    Ok(out)
}

/// `alpha_J = exp(c_J^T R c_J / 2) prod_l beta_l^{c_l}`.
pub fn alpha_exp_form(r: &RMatrix, beta: &[Scalar], j: &[usize], k: usize) -> Result<Scalar> {
    let c = lattice_point(j, &canonical_basis(k), r.genus());
    let mut out = r.half_quadratic_exp(&c)?;
    for (b, &e) in beta.iter().zip(&c) {
        out *= powi(b, e);
    }
    Ok(out)
}

/// Closed product form of `alpha_J` in terms of the exchanged labels
/// `I_k \ J = {i_1..i_s}` and `J \ I_k = {j_1..j_s}`.
pub fn alpha_product_form(kc: &KappaConfig, beta: &[Scalar], j: &[usize], k: usize) -> Scalar {
    let base = canonical_basis(k);
    let is: Vec<usize> = base.iter().copied().filter(|x| !j.contains(x)).collect();
    let js: Vec<usize> = j.iter().copied().filter(|x| !base.contains(x)).collect();
    let mut num = Scalar::one();
    for (a, b) in (0..is.len()).tuple_combinations() {
        let di = kc.kappa(is[b]) - kc.kappa(is[a]);
        let dj = kc.kappa(js[b]) - kc.kappa(js[a]);
        num *= &di * &di * &dj * &dj;
    }
    let mut den = Scalar::one();
    for &i in &is {
        for &jj in &js {
            let d = kc.kappa(jj) - kc.kappa(i);
            den *= &d * &d;
        }
    }
    let c = lattice_point(j, &base, kc.genus());
    let mut out = num / den;
    for (b, &e) in beta.iter().zip(&c) {
        out *= powi(b, e);
    }
    out
}

/// The `beta`-parametrization: coefficients on the bases of `U_{k,n}`
/// (complemented for `v2`) and periods `+-B K`.
pub fn psi(kc: &KappaConfig, beta: &[Scalar], k: usize, choice: VertexChoice) -> Result<HirotaPoint> {
    let g = kc.genus();
    check_class(k, g)?;
    check_nonzero(beta, "beta", g)?;
    let r = limit_r(kc);
    let mut alphas = BTreeMap::new();
    for j in k_subsets(g + 1, k) {
        let a = alpha_exp_form(&r, beta, &j, k)?;
        if a != alpha_product_form(kc, beta, &j, k) {
            return Err(Error::Invalid(format!("exp and product forms of alpha disagree at {j:?}")));
        }
        let label = match choice {
            VertexChoice::V1 => j,
            VertexChoice::V2 => complement(&j, g + 1),
        };
        alphas.insert(label, a);
    }
    let component = match choice {
        VertexChoice::V1 => Component::Plus,
        VertexChoice::V2 => Component::Minus,
    };
    Ok(HirotaPoint { alphas, uvw: uvw(kc, component), class_k: k, vertex_choice: choice })
}

pub fn alpha_from_beta(kc: &KappaConfig, beta: &[Scalar], k: usize) -> Result<HirotaPoint> {
    psi(kc, beta, k, VertexChoice::V1)
}

/// RREF matrix with `A_ij = beta_{i-1} / (beta_{j-1} (kappa_j - kappa_i)^2) prod_{l in I_k, l != i} (kappa_i - kappa_l)/(kappa_j - kappa_l)` for `j > k`.
pub fn matrix_a(kc: &KappaConfig, beta: &[Scalar], k: usize) -> Result<GrassmannPoint> {
    let g = kc.genus();
    check_class(k, g)?;
    check_nonzero(beta, "beta", g)?;
    let n = g + 1;
    let m = Matrix::from_fn(k, n, |r, c| {
        let (i, j) = (r + 1, c + 1);
        if j <= k {
            return if i == j { Scalar::one() } else { Scalar::zero() };
        }
        let d = kc.kappa(j) - kc.kappa(i);
        let mut v = with_unit(beta, i - 1) / (with_unit(beta, j - 1) * &d * &d);
        for l in (1..=k).filter(|&l| l != i) {
            v *= (kc.kappa(i) - kc.kappa(l)) / (kc.kappa(j) - kc.kappa(l));
        }
        v
    });
    Ok(GrassmannPoint::from_matrix(m))
}

/// Left side of the Plücker–Vandermonde identity for exchanged labels
/// `is = {i_1 < .. < i_s}`, `js = {j_1 < .. < j_s}`:
/// `sum_pi sgn(pi) (-1)^{s(s-1)/2} prod_r prod_{l != r} (kappa_{j_pi(r)} - kappa_{i_l})`.
pub fn pluecker_vandermonde_lhs(kc: &KappaConfig, is: &[usize], js: &[usize]) -> Scalar {
    let s = is.len();
    let sign = if (s * s.saturating_sub(1) / 2).is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
    let mut total = Scalar::zero();
    for p in (0..s).permutations(s) {
        let inversions = (0..s).tuple_combinations().filter(|&(a, b)| p[a] > p[b]).count();
        let mut prod = Scalar::one();
        for r in 0..s {
            for l in (0..s).filter(|&l| l != r) {
                prod *= kc.kappa(js[p[r]]) - kc.kappa(is[l]);
            }
        }
        if inversions % 2 == 0 {
            total += prod;
        } else {
            total -= prod;
        }
    }
    sign * total
}

pub fn pluecker_vandermonde_holds(kc: &KappaConfig, is: &[usize], js: &[usize]) -> bool {
    pluecker_vandermonde_lhs(kc, is, js) == vandermonde_minor(kc, is) * vandermonde_minor(kc, js)
}

/// First base `J` where `A_J != alpha_J K_{I_k} / K_J`, if any.
pub fn minor_identity_failure(
    kc: &KappaConfig,
    a: &GrassmannPoint,
    alphas: &BTreeMap<Basis, Scalar>,
    k: usize,
) -> Option<Basis> {
    let ki = vandermonde_minor(kc, &canonical_basis(k));
    a.pluecker.iter().find_map(|(j, minor)| {
        let expected = alphas.get(j).map(|al| al * &ki / vandermonde_minor(kc, j));
        (expected.as_ref() != Some(minor)).then(|| j.clone())
    })
}

/// Checks the minor identity for every base, and the Plücker–Vandermonde
/// identity for every exchange of size `s >= 2` along the way.
pub fn verify_minor_identity(kc: &KappaConfig, beta: &[Scalar], k: usize) -> Result<bool> {
    let a = matrix_a(kc, beta, k)?;
    let hp = alpha_from_beta(kc, beta, k)?;
    let base = canonical_basis(k);
    for j in hp.alphas.keys() {
        let is: Vec<usize> = base.iter().copied().filter(|x| !j.contains(x)).collect();
        let js: Vec<usize> = j.iter().copied().filter(|x| !base.contains(x)).collect();
        if is.len() >= 2 && !pluecker_vandermonde_holds(kc, &is, &js) {
            return Err(Error::Invalid(format!("Plücker–Vandermonde identity fails at {j:?}")));
        }
    }
    Ok(minor_identity_failure(kc, &a, &hp.alphas, k).is_none())
}

/// Vandermonde rows `kappa^0 .. kappa^{k-1}` times `diag(1, lambda_1, .., lambda_g)`.
pub fn matrix_a_tilde(kc: &KappaConfig, lambda: &[Scalar], k: usize) -> Result<GrassmannPoint> {
    let g = kc.genus();
    check_class(k, g)?;
    check_nonzero(lambda, "lambda", g)?;
    let m = Matrix::from_fn(k, g + 1, |r, c| powi(kc.kappa(c + 1), r as i64) * with_unit(lambda, c));
    Ok(GrassmannPoint::from_matrix(m))
}

/// `exp(k/2 R_jj - sum_{l=1}^{k-1} R_jl)` for `j = 1..g`.
fn beta_lambda_factor(r: &RMatrix, k: usize) -> Result<Vec<Scalar>> {
    (1..=r.genus())
        .map(|j| {
            let mut f = r
                .get(j, j)
                .exp_scaled(k as i64, 2)
                .ok_or_else(|| Error::Invalid("beta-lambda factor is not rational".into()))?;
            for l in 1..k {
                f /= r.get(j, l).exp();
            }
            Ok(f)
        })
        .collect()
}

/// `beta_j = lambda_j^{-1} exp(k/2 R_jj - sum_{l<k} R_jl)`.
pub fn beta_from_lambda(kc: &KappaConfig, lambda: &[Scalar], k: usize) -> Result<Vec<Scalar>> {
    check_class(k, kc.genus())?;
    check_nonzero(lambda, "lambda", kc.genus())?;
    let f = beta_lambda_factor(&limit_r(kc), k)?;
    Ok(lambda.iter().zip(f).map(|(l, f)| f / l).collect())
}

/// Inverse of [`beta_from_lambda`].
pub fn lambda_from_beta(kc: &KappaConfig, beta: &[Scalar], k: usize) -> Result<Vec<Scalar>> {
    check_class(k, kc.genus())?;
    check_nonzero(beta, "beta", kc.genus())?;
    let f = beta_lambda_factor(&limit_r(kc), k)?;
    Ok(beta.iter().zip(f).map(|(b, f)| f / b).collect())
}

/// `lambda_j = P(k_1) K'(k_1) prod Q_l(k_1) / (P(k_{j+1}) K'(k_{j+1}) prod Q_l(k_{j+1}))`.
pub fn lambda_from_divisor(kc: &KappaConfig, d: &Divisor) -> Result<Vec<Scalar>> {
    d.validate(kc)?;
    let num = d.value(kc.kappa(1))? * kc.k_prime(1);
    (2..=kc.n()).map(|j| Ok(&num / (d.value(kc.kappa(j))? * kc.k_prime(j)))).collect()
}

/// `beta_j = exp(A_j) K'(k_{j+1}) / K'(k_1) exp(k/2 R_jj - sum_{l<k} R_jl)`,
/// with `A` the Abel map and `k` the divisor split.
pub fn beta_from_abel(kc: &KappaConfig, d: &Divisor) -> Result<Vec<Scalar>> {
    let k = d.split_k;
    check_class(k, kc.genus())?;
    let abel = abel_map(kc, d)?;
    let f = beta_lambda_factor(&limit_r(kc), k)?;
    Ok(abel.iter().zip(f).enumerate().map(|(i, (a, f))| a.value() * kc.k_prime(i + 2) / kc.k_prime(1) * f).collect())
}

/// `(n-k) x n` matrix with rows `P(kappa_i) Q_l(kappa_i) / K'(kappa_i)`, `l = 1..n-k`.
pub fn matrix_a_dual(kc: &KappaConfig, d: &Divisor) -> Result<GrassmannPoint> {
    d.validate(kc)?;
    let n = kc.n();
    let k = d.split_k;
    if k == 0 || k >= n {
        return Err(Error::DivisorSplit(format!("split {k} must lie in 1..={}", n - 1)));
    }
    let mut rows = Vec::with_capacity(n - k);
    for l in 1..=n - k {
        let row = (1..=n)
            .map(|i| {
                let z = kc.kappa(i);
                Ok(d.p_poly(z) * d.q_l(l, z)? / kc.k_prime(i))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(GrassmannPoint::from_matrix(Matrix::from_rows(rows)))
}

/// True iff each gap `(kappa_i, kappa_{i+1})` holds exactly one divisor point.
pub fn check_dn_interlacing(kc: &KappaConfig, d: &Divisor) -> Result<bool> {
    if !kc.is_sorted() {
        return Err(Error::UnsortedKappa);
    }
    if d.points.len() != kc.genus() {
        return Err(Error::DimensionMismatch { expected: kc.genus(), got: d.points.len() });
    }
    Ok((1..=kc.genus()).all(|i| d.points.iter().filter(|p| kc.kappa(i) < *p && *p < kc.kappa(i + 1)).count() == 1))
}

/// The divisor parametrization. For `v1` the first `k = split_k` points lie
/// with `p0`; for `v2` the first `n - k` do, and labels are complemented.
pub fn alpha_from_divisor(kc: &KappaConfig, d: &Divisor, choice: VertexChoice) -> Result<HirotaPoint> {
    d.validate(kc)?;
    let n = kc.n();
    let k = match choice {
        VertexChoice::V1 => d.split_k,
        VertexChoice::V2 => n - d.split_k,
    };
    check_class(k, kc.genus())?;
    // bracket_l = P(k_{l+1}) prod Q(k_{l+1}) K'(k_{l+1}) / (P(k_1) prod Q(k_1) K'(k_1))
    let base = d.value(kc.kappa(1))? * kc.k_prime(1);
    let brackets = (2..=n).map(|j| Ok(d.value(kc.kappa(j))? * kc.k_prime(j) / &base)).collect::<Result<Vec<_>>>()?;
    let i_k = canonical_basis(k);
    let mut alphas = BTreeMap::new();
    for j in k_subsets(n, k) {
        // exponent -(B^T c_J)_{l+1} = c_l
        let c = lattice_point(&j, &i_k, kc.genus());
        let label = match choice {
            VertexChoice::V1 => j.clone(),
            VertexChoice::V2 => complement(&j, n),
        };
        let base_label = match choice {
            VertexChoice::V1 => i_k.clone(),
            VertexChoice::V2 => complement(&i_k, n),
        };
        let kj = vandermonde_minor(kc, &label);
        let ki = vandermonde_minor(kc, &base_label);
        let mut a = &kj * &kj / (&ki * &ki);
        for (b, &e) in brackets.iter().zip(&c) {
            a *= powi(b, e);
        }
        alphas.insert(label, a);
    }
    let component = match choice {
        VertexChoice::V1 => Component::Plus,
        VertexChoice::V2 => Component::Minus,
    };
    Ok(HirotaPoint { alphas, uvw: uvw(kc, component), class_k: k, vertex_choice: choice })
}

/// Recovers `(kappa, beta)` from a point in the image of [`psi`].
pub fn invert_psi(hp: &HirotaPoint) -> Result<(KappaConfig, Vec<Scalar>)> {
    let p = match hp.vertex_choice {
        VertexChoice::V1 => hp.uvw.clone(),
        VertexChoice::V2 => hp.uvw.negated(),
    };
    let g = p.genus();
    let k = hp.class_k;
    check_class(k, g)?;
    let n = g + 1;
    if let Some(j) = p.u.iter().position(Zero::is_zero) {
        return Err(Error::DegenerateParameters { index: j + 1 });
    }
    let two = int(2);
    let k1 = (&p.v[0] + &p.u[0] * &p.u[0]) / (&two * &p.u[0]);
    let mut kappas = vec![k1.clone()];
    for j in 0..g {
        kappas.push((&p.v[j] - &p.u[j] * &p.u[j]) / (&two * &p.u[j]));
    }
    let kc = KappaConfig::new(kappas)?;
    // alpha lookup by v1 label
    let alpha = |j: Basis| -> Result<Scalar> {
        let label = match hp.vertex_choice {
            VertexChoice::V1 => j,
            VertexChoice::V2 => complement(&j, n),
        };
        hp.alphas.get(&label).cloned().ok_or_else(|| Error::MissingCoefficient(crate::subsets::basis_label(&label)))
    };
    let exchange = |out: usize, inn: usize| -> Basis {
        let mut j: Basis = (1..=k).filter(|&x| x != out).collect();
        j.push(inn);
        j.sort_unstable();
        j
    };
    let mut beta = vec![Scalar::zero(); g];
    for j in k..=g {
        let d = kc.kappa(j + 1) - kc.kappa(1);
        let a = alpha(exchange(1, j + 1))?;
        if a.is_zero() {
            return Err(Error::ZeroParameter { name: "alpha", index: j + 1 });
        }
        beta[j - 1] = (&d * &d * a).recip();
    }
    for i in 1..k {
        let d = kc.kappa(n) - kc.kappa(i + 1);
        beta[i - 1] = &d * &d * &beta[g - 1] * alpha(exchange(i + 1, n))?;
    }
    Ok((kc, beta))
}
