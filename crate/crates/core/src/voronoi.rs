//! Closed-form Voronoi vertices, f-vectors, the cube lift, shift vectors and
//! the hypersimplex normalization of Delaunay polytopes.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::jacobian::{delaunay_set, BananaData, VoronoiVertex};
use crate::linalg::Matrix;
use crate::scalar::{int, rat, Scalar};
use crate::subsets::{binomial, k_subsets, Basis};

/// `B^T a` together with its sign pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedVertex {
    pub coords: Vec<Scalar>,
    pub signs: Vec<i8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftVector {
    pub s: Vec<i64>,
}

fn frac(num: usize, den: usize) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// The vertex whose lift is negative exactly on the edges in `negatives`.
pub(crate) fn vertex_from_negatives(g: usize, negatives: &[usize]) -> VoronoiVertex {
    let n = g + 1;
    let k = negatives.len();
    let lift: Vec<Scalar> =
        (1..=n).map(|e| if negatives.contains(&e) { -frac(n - k, n) } else { frac(k, n) }).collect();
    VoronoiVertex::new(lift[1..].iter().map(|x| -x.clone()).collect()).expect("pattern is a vertex")
}

/// Voronoi vertices grouped by class, lexicographically sorted within a class.
pub fn voronoi_vertices(g: usize) -> BTreeMap<usize, Vec<VoronoiVertex>> {
    (1..=g)
        .map(|k| {
            let mut class: Vec<VoronoiVertex> =
                k_subsets(g + 1, k).iter().map(|neg| vertex_from_negatives(g, neg)).collect();
            class.sort_by(|a, b| a.coords().cmp(b.coords()));
            (k, class)
        })
        .collect()
}

/// `f_l = C(g+1, l) (2^(g+1-l) - 2)` for `l = 0..g-1`.
pub fn f_vector(g: usize) -> Vec<u64> {
    (0..g).map(|l| binomial(g as u64 + 1, l as u64) * ((1u64 << (g + 1 - l)) - 2)).collect()
}

/// Face counts of `V_Q` computed from its vertex set alone.
///
/// Facets are found by brute force over affinely independent `g`-subsets of
/// vertices; every face is an intersection of facets. Exponential in `g`.
pub fn f_vector_exhaustive(g: usize) -> Vec<u64> {
    let n = g + 1;
    // scale by n so vertices are integer vectors
    let verts: Vec<Vec<i64>> = voronoi_vertices(g)
        .into_values()
        .flatten()
        .map(|v| v.coords().iter().map(|x| (x * int(n as i64)).to_integer().try_into().unwrap()).collect())
        .collect();
    let dot = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut facets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    for subset in (0..verts.len()).combinations(g) {
        let base = &verts[subset[0]];
        let diffs = Matrix::from_fn(g - 1, g, |i, j| int(verts[subset[i + 1]][j] - base[j]));
        let Some(normal) = integer_normal(&diffs, g) else { continue };
        let offset = dot(&normal, base);
        let vals: Vec<i64> = verts.iter().map(|v| dot(&normal, v) - offset).collect();
        if vals.iter().all(|&x| x >= 0) || vals.iter().all(|&x| x <= 0) {
            facets.insert((0..verts.len()).filter(|&i| vals[i] == 0).collect());
        }
    }

    let mut faces: BTreeSet<BTreeSet<usize>> = facets.clone();
    let mut frontier: Vec<BTreeSet<usize>> = facets.iter().cloned().collect();
    while let Some(face) = frontier.pop() {
        for facet in &facets {
            let meet: BTreeSet<usize> = face.intersection(facet).copied().collect();
            if !meet.is_empty() && faces.insert(meet.clone()) {
                frontier.push(meet);
            }
        }
    }

    let mut counts = vec![0u64; g];
    for face in &faces {
        let idx: Vec<usize> = face.iter().copied().collect();
        let base = &verts[idx[0]];
        let m = Matrix::from_fn(idx.len() - 1, g, |i, j| int(verts[idx[i + 1]][j] - base[j]));
        let dim = if idx.len() == 1 { 0 } else { m.rank() };
        if dim < g {
            counts[dim] += 1;
        }
    }
    counts
}

/// Integer normal of the hyperplane spanned by the rows of `diffs`, if they
/// have full rank `g - 1`.
fn integer_normal(diffs: &Matrix, g: usize) -> Option<Vec<i64>> {
    let (r, pivots) = diffs.rref();
    if pivots.len() != g - 1 {
        return None;
    }
    let free = (0..g).find(|c| !pivots.contains(c))?;
    let mut normal = vec![Scalar::zero(); g];
    normal[free] = int(1);
    for (row, &p) in pivots.iter().enumerate() {
        normal[p] = -r[(row, free)].clone();
    }
    let lcm = normal.iter().fold(BigInt::from(1), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    Some(normal.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer().try_into().unwrap()).collect())
}

/// `((g+1-k)/(g+1)` repeated `k-1` times, then `-k/(g+1)` repeated `g+1-k` times).
pub fn canonical_vertex(g: usize, k: usize) -> Result<VoronoiVertex> {
    if k < 1 || k > g {
        return Err(Error::ClassOutOfRange { k, g });
    }
    let n = g + 1;
    let coords = (0..g).map(|i| if i < k - 1 { frac(n - k, n) } else { -frac(k, n) }).collect();
    VoronoiVertex::new(coords)
}

pub fn lift(data: &BananaData, a: &VoronoiVertex) -> Result<LiftedVertex> {
    if a.genus() != data.genus() {
        return Err(Error::DimensionMismatch { expected: data.genus(), got: a.genus() });
    }
    let coords = data.lift(a.coords());
    let mut signs = Vec::with_capacity(coords.len());
    for (i, x) in coords.iter().enumerate() {
        if x.is_zero() {
            return Err(Error::ZeroLiftCoordinate { index: i + 1 });
        }
        signs.push(if x.is_positive() { 1 } else { -1 });
    }
    Ok(LiftedVertex { coords, signs })
}

/// Orthogonal projection of `R^n` onto the hyperplane `sum x = 0`.
pub fn projection_matrix(g: usize) -> Matrix {
    let n = g as i64 + 1;
    Matrix::from_fn(n as usize, n as usize, |i, j| if i == j { rat(g as i64, n) } else { rat(-1, n) })
}

/// The cube vertex with `-1/2` on `negatives` and `+1/2` elsewhere.
pub fn cube_vertex(n: usize, negatives: &[usize]) -> Vec<Scalar> {
    (1..=n).map(|e| if negatives.contains(&e) { rat(-1, 2) } else { rat(1, 2) }).collect()
}

pub fn shift_vector(data: &BananaData, a: &VoronoiVertex) -> Result<ShiftVector> {
    let l = lift(data, a)?;
    Ok(ShiftVector { s: l.signs.iter().map(|&s| i64::from(s < 0)).collect() })
}

/// Maps each Delaunay point `c` of `a` to the support of `B^T c + s_a`.
pub fn normalize_delaunay(data: &BananaData, a: &VoronoiVertex) -> Result<BTreeMap<Vec<i64>, Basis>> {
    let s = shift_vector(data, a)?;
    let ds = delaunay_set(data, a)?;
    let mut out = BTreeMap::new();
    for c in ds.points {
        let v: Vec<i64> = data.lift_int(&c).iter().zip(&s.s).map(|(x, y)| x + y).collect();
        if v.iter().any(|&x| x != 0 && x != 1) {
            return Err(Error::LabelNotBinary(v));
        }
        let label = (1..=v.len()).filter(|&j| v[j - 1] == 1).collect();
        out.insert(c, label);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobian::{build_banana, voronoi_contains};

    fn coords(v: &VoronoiVertex) -> Vec<Scalar> {
        v.coords().to_vec()
    }

    #[test]
    fn genus_two_hexagon() {
        let vs = voronoi_vertices(2);
        let c1: Vec<_> = vs[&1].iter().map(coords).collect();
        let c2: Vec<_> = vs[&2].iter().map(coords).collect();
        assert_eq!(c1, vec![vec![rat(-1, 3), rat(-1, 3)], vec![rat(-1, 3), rat(2, 3)], vec![rat(2, 3), rat(-1, 3)]]);
        assert_eq!(c2, vec![vec![rat(-2, 3), rat(1, 3)], vec![rat(1, 3), rat(-2, 3)], vec![rat(1, 3), rat(1, 3)]]);
    }

    #[test]
    fn class_sizes_and_f_vectors() {
        let vs = voronoi_vertices(1);
        assert_eq!(vs[&1].iter().map(coords).collect::<Vec<_>>(), vec![vec![rat(-1, 2)], vec![rat(1, 2)]]);
        let sizes: Vec<usize> = voronoi_vertices(3).values().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 6, 4]);
        assert_eq!(f_vector(3), vec![14, 24, 12]);
        assert_eq!(f_vector(2), vec![6, 6]);
        assert_eq!(f_vector(5)[0], 62);
        assert_eq!(voronoi_vertices(5).values().map(Vec::len).sum::<usize>(), 62);
    }

    #[test]
    fn exhaustive_faces_match_formula() {
        for g in 1..=3 {
            assert_eq!(f_vector_exhaustive(g), f_vector(g), "g = {g}");
        }
    }

    #[test]
    fn canonical_vertices() {
        assert_eq!(coords(&canonical_vertex(3, 2).unwrap()), vec![rat(1, 2), rat(-1, 2), rat(-1, 2)]);
        assert_eq!(coords(&canonical_vertex(1, 1).unwrap()), vec![rat(-1, 2)]);
        let v = canonical_vertex(4, 2).unwrap();
        assert_eq!(coords(&v), vec![rat(3, 5), rat(-2, 5), rat(-2, 5), rat(-2, 5)]);
        let d = build_banana(4, None).unwrap();
        assert!(voronoi_contains(&d, v.coords()).unwrap());
        assert_eq!(delaunay_set(&d, &v).unwrap().points.len(), 10);
        assert!(canonical_vertex(3, 0).is_err());
        assert!(canonical_vertex(3, 4).is_err());
    }

    #[test]
    fn lifts_and_projection() {
        let d = build_banana(2, None).unwrap();
        let a4 = VoronoiVertex::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
        let l = lift(&d, &a4).unwrap();
        assert_eq!(l.coords, vec![rat(2, 3), rat(-1, 3), rat(-1, 3)]);
        assert_eq!(l.signs, vec![1, -1, -1]);
        let p = projection_matrix(2);
        assert_eq!(
            p.to_rows(),
            vec![
                vec![rat(2, 3), rat(-1, 3), rat(-1, 3)],
                vec![rat(-1, 3), rat(2, 3), rat(-1, 3)],
                vec![rat(-1, 3), rat(-1, 3), rat(2, 3)],
            ]
        );
        assert!(p.mul_vec(&cube_vertex(3, &[])).iter().all(Zero::is_zero));
        assert!(p.mul_vec(&cube_vertex(3, &[1, 2, 3])).iter().all(Zero::is_zero));
    }

    #[test]
    fn cube_projection_reproduces_lifts() {
        for g in 1..=4 {
            let d = build_banana(g as i64, None).unwrap();
            let p = projection_matrix(g);
            for (k, class) in voronoi_vertices(g) {
                for v in class {
                    let l = lift(&d, &v).unwrap();
                    let neg: Vec<usize> = (1..=g + 1).filter(|&e| l.signs[e - 1] < 0).collect();
                    assert_eq!(neg.len(), k);
                    assert_eq!(p.mul_vec(&cube_vertex(g + 1, &neg)), l.coords);
                }
            }
        }
    }

    #[test]
    fn shift_vectors() {
        let d3 = build_banana(3, None).unwrap();
        let abar = VoronoiVertex::new(vec![rat(1, 2), rat(-1, 2), rat(-1, 2)]).unwrap();
        assert_eq!(shift_vector(&d3, &abar).unwrap().s, vec![1, 1, 0, 0]);
        let a = VoronoiVertex::new(vec![rat(-1, 2), rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(shift_vector(&d3, &a).unwrap().s, vec![0, 0, 1, 1]);
        let d2 = build_banana(2, None).unwrap();
        let a4 = VoronoiVertex::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
        assert_eq!(shift_vector(&d2, &a4).unwrap().s, vec![0, 1, 1]);
    }

    #[test]
    fn genus_three_labels() {
        let d = build_banana(3, None).unwrap();
        let abar = canonical_vertex(3, 2).unwrap();
        let labels = normalize_delaunay(&d, &abar).unwrap();
        assert_eq!(labels[&vec![0, 0, 0]], vec![1, 2]);
        assert_eq!(labels[&vec![0, -1, 0]], vec![2, 3]);
        assert_eq!(labels[&vec![0, 0, -1]], vec![2, 4]);
        assert_eq!(labels[&vec![1, -1, -1]], vec![3, 4]);
        assert_eq!(labels[&vec![1, -1, 0]], vec![1, 3]);
        assert_eq!(labels[&vec![1, 0, -1]], vec![1, 4]);
    }

    #[test]
    fn genus_two_labels_cover_hypersimplex() {
        let d = build_banana(2, None).unwrap();
        let a4 = VoronoiVertex::new(vec![rat(1, 3), rat(1, 3)]).unwrap();
        let labels: BTreeSet<Basis> = normalize_delaunay(&d, &a4).unwrap().into_values().collect();
        assert_eq!(labels, k_subsets(3, 2).into_iter().collect());
    }
}
