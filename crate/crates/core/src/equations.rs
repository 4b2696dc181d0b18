//! Defining quartics of the Hirota variety of the hypersimplex `Delta_{k,n}`:
//! the squared set with multiplicities and one quartic per face direction.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hirota::{lattice_point, HirotaPoint};
use crate::limits::{dispersion, RMatrix};
use crate::orientation::VertexChoice;
use crate::scalar::{int, powi, Scalar};
use crate::subsets::{complement, indicator, k_subsets, Basis};

/// A point `d = 1_{I_1} + 1_{I_2}` of `Delta_{k,n}^[2]` with all its
/// unordered representations (`I_1 != I_2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquaredPoint {
    pub d: Vec<i64>,
    pub pairs: Vec<(Basis, Basis)>,
    pub two_count: usize,
}

impl SquaredPoint {
    /// Coordinates equal to 1: the moving coordinates of the face.
    pub fn direction(&self) -> Basis {
        (1..=self.d.len()).filter(|&i| self.d[i - 1] == 1).collect()
    }
}

/// Splits `moving` into unordered halves; the first half holds `moving[0]`.
fn halves(moving: &[usize]) -> Vec<(Basis, Basis)> {
    let Some((&first, rest)) = moving.split_first() else {
        return vec![];
    };
    let half = moving.len() / 2;
    itertools::Itertools::combinations(rest.iter().copied(), half - 1)
        .map(|s| {
            let mut a = vec![first];
            a.extend(s);
            let b: Basis = moving.iter().copied().filter(|x| !a.contains(x)).collect();
            (a, b)
        })
        .collect()
}

fn join(fixed: &[usize], part: &[usize]) -> Basis {
    let mut v: Basis = fixed.iter().chain(part).copied().collect();
    v.sort_unstable();
    v
}

/// All points of the squared set of `Delta_{k,n}`, sorted by `d`.
pub fn squared_set(k: usize, n: usize) -> Result<Vec<SquaredPoint>> {
    check_kn(k, n)?;
    let mut out = Vec::new();
    for two_count in (2 * k).saturating_sub(n)..k {
        for fixed in k_subsets(n, two_count) {
            let rest = complement(&fixed, n);
            for pos in k_subsets(rest.len(), 2 * (k - two_count)) {
                let moving: Basis = pos.iter().map(|&p| rest[p - 1]).collect();
                let pairs = halves(&moving).into_iter().map(|(a, b)| (join(&fixed, &a), join(&fixed, &b))).collect();
                let d = (1..=n).map(|i| if fixed.contains(&i) { 2 } else { i64::from(moving.contains(&i)) }).collect();
                out.push(SquaredPoint { d, pairs, two_count });
            }
        }
    }
    out.sort_by(|a, b| a.d.cmp(&b.d));
    Ok(out)
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k == 0 || k >= n {
        return Err(Error::ClassOutOfRange { k, g: n.saturating_sub(1) });
    }
    Ok(())
}

/// `alpha_{I_1} alpha_{I_2} P(delta . U, delta . V, delta . W)` with `delta = 1_{I_1} - 1_{I_2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticTerm {
    pub first: Basis,
    pub second: Basis,
    pub difference: Vec<i64>,
}

/// One quartic per face direction: the representative face fixes the
/// lexicographically first `fixed` set outside the direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuarticRelation {
    pub n: usize,
    pub direction: Basis,
    pub fixed: Basis,
    pub terms: Vec<QuarticTerm>,
}

impl QuarticRelation {
    pub fn dimension(&self) -> usize {
        self.direction.len() - 1
    }

    /// The squared point of the representative face.
    pub fn point(&self) -> Vec<i64> {
        (1..=self.n).map(|i| if self.fixed.contains(&i) { 2 } else { i64::from(self.direction.contains(&i)) }).collect()
    }
}

/// Face directions of `Delta_{k,n}^[2]` of every odd dimension `2l - 1`,
/// sorted by (dimension, direction).
pub fn face_direction_classes(k: usize, n: usize) -> Result<Vec<QuarticRelation>> {
    check_kn(k, n)?;
    let mut out = Vec::new();
    for l in 1..=k.min(n - k) {
        for direction in k_subsets(n, 2 * l) {
            let rest = complement(&direction, n);
            let fixed: Basis = rest[..k - l].to_vec();
            let terms = halves(&direction)
                .into_iter()
                .map(|(a, b)| {
                    let first = join(&fixed, &a);
                    let second = join(&fixed, &b);
                    let difference =
                        indicator(&first, n).iter().zip(indicator(&second, n)).map(|(x, y)| x - y).collect();
                    QuarticTerm { first, second, difference }
                })
                .collect();
            out.push(QuarticRelation { n, direction, fixed, terms });
        }
    }
    Ok(out)
}

/// The 0/1 string of a label, e.g. `{1,2}` in `[4]` is `1100`.
pub fn bit_label(j: &[usize], n: usize) -> String {
    (1..=n).map(|i| if j.contains(&i) { '1' } else { '0' }).collect()
}

fn linear_form(symbol: char, delta: &[i64]) -> String {
    let mut s = String::new();
    for (i, &c) in delta.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let sign = if c < 0 {
            "-"
        } else if s.is_empty() {
            ""
        } else {
            "+"
        };
        let mag = if c.abs() == 1 { String::new() } else { format!("{}*", c.abs()) };
        s.push_str(&format!("{sign}{mag}{symbol}{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl QuarticTerm {
    /// Polynomial string with `P` expanded, for computer-algebra import.
    pub fn to_polynomial(&self, n: usize) -> String {
        let (u, v, w) = (
            linear_form('U', &self.difference),
            linear_form('V', &self.difference),
            linear_form('W', &self.difference),
        );
        format!("a{}*a{}*(({u})^4 - 4*({u})*({w}) + 3*({v})^2)", bit_label(&self.first, n), bit_label(&self.second, n))
    }
}

impl fmt::Display for QuarticRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_polynomial(self.n)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Label-frame periods `U_n` with `delta_n . U_n = delta_c . U` for the
/// lattice difference `delta_c` of the same pair.
fn label_frame_periods(hp: &HirotaPoint) -> [Vec<Scalar>; 3] {
    let sign = match hp.vertex_choice {
        VertexChoice::V1 => int(-1),
        VertexChoice::V2 => int(1),
    };
    let lift =
        |x: &[Scalar]| -> Vec<Scalar> { std::iter::once(Scalar::zero()).chain(x.iter().map(|a| a * &sign)).collect() };
    [lift(&hp.uvw.u), lift(&hp.uvw.v), lift(&hp.uvw.w)]
}

fn label_size(hp: &HirotaPoint) -> usize {
    match hp.vertex_choice {
        VertexChoice::V1 => hp.class_k,
        VertexChoice::V2 => hp.n() - hp.class_k,
    }
}

fn pair_value(hp: &HirotaPoint, periods: &[Vec<Scalar>; 3], a: &Basis, b: &Basis) -> Result<Scalar> {
    let get = |j: &Basis| hp.alphas.get(j).ok_or_else(|| Error::MissingCoefficient(crate::subsets::basis_label(j)));
    let n = hp.n();
    let delta: Vec<i64> = indicator(a, n).iter().zip(indicator(b, n)).map(|(x, y)| x - y).collect();
    let dot = |p: &[Scalar]| -> Scalar { p.iter().zip(&delta).map(|(x, &c)| x * int(c)).sum() };
    let [u, v, w] = periods;
    Ok(get(a)? * get(b)? * dispersion(&dot(u), &dot(v), &dot(w)))
}

fn check_labels(k: usize, n: usize, hp: &HirotaPoint) -> Result<()> {
    if hp.n() != n || label_size(hp) != k {
        return Err(Error::LabelMismatch(format!(
            "relations are over {k}-subsets of [{n}], point has {}-subsets of [{}]",
            label_size(hp),
            hp.n()
        )));
    }
    Ok(())
}

/// Value of every relation at `hp`, keyed by direction.
pub fn instantiate_and_check(relations: &[QuarticRelation], hp: &HirotaPoint) -> Result<BTreeMap<Basis, Scalar>> {
    let periods = label_frame_periods(hp);
    let mut out = BTreeMap::new();
    for r in relations {
        let k = r.terms.first().map_or(0, |t| t.first.len());
        check_labels(k, r.n, hp)?;
        let mut total = Scalar::zero();
        for t in &r.terms {
            total += pair_value(hp, &periods, &t.first, &t.second)?;
        }
        out.insert(r.direction.clone(), total);
    }
    Ok(out)
}

/// Value of the quartic at every point of the squared set, keyed by `d`.
pub fn squared_point_values(k: usize, n: usize, hp: &HirotaPoint) -> Result<BTreeMap<Vec<i64>, Scalar>> {
    check_labels(k, n, hp)?;
    let periods = label_frame_periods(hp);
    let mut out = BTreeMap::new();
    for p in squared_set(k, n)? {
        let mut total = Scalar::zero();
        for (a, b) in &p.pairs {
            total += pair_value(hp, &periods, a, b)?;
        }
        out.insert(p.d, total);
    }
    Ok(out)
}

/// Lattice vector `u` with `B^T u = 1_{to} - 1_{from}` (equal-size sets).
pub fn fixed_set_translation(from: &[usize], to: &[usize], n: usize) -> Vec<i64> {
    let diff: Vec<i64> = indicator(to, n).iter().zip(indicator(from, n)).map(|(x, y)| x - y).collect();
    diff[1..].iter().map(|x| -x).collect()
}

/// Factor between the quartics of two faces with the same direction, for
/// coefficients of the form `alpha_c = exp(c^T R c / 2) prod beta^c`: moving
/// the face by the lattice vector `u` multiplies the value at lattice sum `d`
/// by `exp(u^T R d + u^T R u) prod beta_l^{2 u_l}`.
pub fn dedup_ratio(r: &RMatrix, beta: &[Scalar], u: &[i64], d: &[i64]) -> Scalar {
    let mut out = r.bilinear_exp(u, d) * r.bilinear_exp(u, u);
    for (b, &e) in beta.iter().zip(u) {
        out *= powi(b, 2 * e);
    }
    out
}

/// Lattice sum `c_1 + c_2` (frame of the canonical base `I_k`) of a pair of labels.
pub fn lattice_sum(a: &[usize], b: &[usize], k: usize, n: usize) -> Vec<i64> {
    let base: Basis = (1..=k).collect();
    let ca = lattice_point(a, &base, n - 1);
    let cb = lattice_point(b, &base, n - 1);
    ca.iter().zip(&cb).map(|(x, y)| x + y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hirota::{alpha_from_beta, psi};
    use crate::limits::{limit_r, KappaConfig};
    use crate::scalar::rat;
    use crate::subsets::binomial;

    #[test]
    fn squared_set_genus_three() {
        let pts = squared_set(2, 4).unwrap();
        assert_eq!(pts.len(), 13);
        assert_eq!(pts.iter().filter(|p| p.pairs.len() == 1).count(), 12);
        let center = pts.iter().find(|p| p.d == vec![1, 1, 1, 1]).unwrap();
        assert_eq!(center.pairs.len(), 3);
        for p in &pts {
            assert_eq!(p.d.iter().sum::<i64>(), 4);
            for (a, b) in &p.pairs {
                let s: Vec<i64> = indicator(a, 4).iter().zip(indicator(b, 4)).map(|(x, y)| x + y).collect();
                assert_eq!(s, p.d);
            }
        }
    }

    #[test]
    fn squared_set_extremes() {
        for n in 2..=6 {
            let pts = squared_set(1, n).unwrap();
            assert_eq!(pts.len() as u64, binomial(n as u64, 2));
            assert!(pts.iter().all(|p| p.pairs.len() == 1));
        }
        let max = squared_set(3, 6).unwrap().iter().map(|p| p.pairs.len()).max().unwrap();
        assert_eq!(max, 10);
        assert!(squared_set(0, 3).is_err());
    }

    #[test]
    fn genus_three_relations() {
        let rels = face_direction_classes(2, 4).unwrap();
        assert_eq!(rels.len(), 7);
        assert_eq!(rels.iter().filter(|r| r.dimension() == 1).count(), 6);
        let top = rels.last().unwrap();
        assert_eq!(top.direction, vec![1, 2, 3, 4]);
        let diffs: Vec<Vec<i64>> = top.terms.iter().map(|t| t.difference.clone()).collect();
        assert_eq!(diffs, vec![vec![1, 1, -1, -1], vec![1, -1, 1, -1], vec![1, -1, -1, 1]]);
        assert_eq!(
            top.terms[0].to_polynomial(4),
            "a1100*a0011*((U1+U2-U3-U4)^4 - 4*(U1+U2-U3-U4)*(W1+W2-W3-W4) + 3*(V1+V2-V3-V4)^2)"
        );
        assert!(face_direction_classes(1, 4).unwrap().iter().all(|r| r.dimension() == 1));
    }

    #[test]
    fn psi_image_satisfies_relations() {
        let kc = KappaConfig::new(vec![int(0), rat(1, 2), int(2), int(3)]).unwrap();
        let beta = vec![int(2), rat(1, 3), int(-1)];
        for choice in [VertexChoice::V1, VertexChoice::V2] {
            let hp = psi(&kc, &beta, 2, choice).unwrap();
            let rels = face_direction_classes(2, 4).unwrap();
            let vals = instantiate_and_check(&rels, &hp).unwrap();
            assert_eq!(vals.len(), 7);
            assert!(vals.values().all(Zero::is_zero));
        }
        let hp = psi(&kc, &beta, 1, VertexChoice::V1).unwrap();
        let rels = face_direction_classes(2, 4).unwrap();
        assert!(matches!(instantiate_and_check(&rels, &hp), Err(Error::LabelMismatch(_))));
    }

    #[test]
    fn homogeneous_in_alpha() {
        let kc = KappaConfig::from_ints(&[0, 1, 2, 3]).unwrap();
        let mut hp = alpha_from_beta(&kc, &[int(1), int(1), int(1)], 2).unwrap();
        hp.uvw.w[0] += int(1);
        let rels = face_direction_classes(2, 4).unwrap();
        let before = instantiate_and_check(&rels, &hp).unwrap();
        assert!(before.values().any(|v| !v.is_zero()));
        for a in hp.alphas.values_mut() {
            *a *= rat(3, 2);
        }
        let after = instantiate_and_check(&rels, &hp).unwrap();
        for (k, v) in &before {
            assert_eq!(after[k], v * rat(9, 4));
        }
    }

    #[test]
    fn unique_pair_relation_is_single_term() {
        let kc = KappaConfig::from_ints(&[0, 1, 2, 3]).unwrap();
        let mut hp = alpha_from_beta(&kc, &[int(1), int(1), int(1)], 2).unwrap();
        hp.uvw.u = vec![rat(1, 3), int(2), rat(-5, 7)];
        let rels = face_direction_classes(2, 4).unwrap();
        let r = &rels[0];
        assert_eq!(r.terms.len(), 1);
        let t = &r.terms[0];
        let periods = label_frame_periods(&hp);
        let dot = |p: &[Scalar]| -> Scalar { p.iter().zip(&t.difference).map(|(x, &c)| x * int(c)).sum() };
        let expected = &hp.alphas[&t.first]
            * &hp.alphas[&t.second]
            * dispersion(&dot(&periods[0]), &dot(&periods[1]), &dot(&periods[2]));
        assert_eq!(instantiate_and_check(&rels[..1], &hp).unwrap()[&r.direction], expected);
    }

    #[test]
    fn same_direction_faces_differ_by_dedup_ratio() {
        let kc = KappaConfig::new(vec![rat(1, 2), int(-1), int(2), rat(7, 3), int(4)]).unwrap();
        let beta = vec![rat(2, 3), int(3), rat(-1, 2), int(5)];
        let mut hp = alpha_from_beta(&kc, &beta, 2).unwrap();
        hp.uvw.v = vec![int(1), rat(-2, 5), int(3), rat(1, 7)];
        let r = limit_r(&kc);
        let values = squared_point_values(2, 5, &hp).unwrap();
        for rel in face_direction_classes(2, 5).unwrap() {
            let rep = rel.point();
            let (a, b) = (&rel.terms[0].first, &rel.terms[0].second);
            let d = lattice_sum(a, b, 2, 5);
            for other in k_subsets(5, rel.fixed.len()) {
                if other.iter().any(|x| rel.direction.contains(x)) {
                    continue;
                }
                let p: Vec<i64> = (1..=5)
                    .map(|i| if other.contains(&i) { 2 } else { i64::from(rel.direction.contains(&i)) })
                    .collect();
                let u = fixed_set_translation(&rel.fixed, &other, 5);
                assert_eq!(values[&p], &values[&rep] * dedup_ratio(&r, &beta, &u, &d), "{p:?}");
            }
            assert!(!values[&rep].is_zero());
        }
    }
}
