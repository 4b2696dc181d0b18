//! Banana-graph data and definitional Voronoi/Delaunay primitives.
//!
//! The banana graph of genus `g` has two vertices `v1, v2` joined by
//! `n = g + 1` edges `e_1, ..., e_n`. The cycle basis is `e_1 - e_{i+1}`,
//! which gives the `g x n` homology matrix `B` and the tropical Riemann
//! matrix `Q = B diag(l) B^T`.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{int, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BananaData {
    genus: usize,
    edge_lengths: Vec<Scalar>,
    b: Vec<Vec<i64>>,
    q: Matrix,
}

/// Builds the banana graph of genus `g`. `lengths` defaults to all ones.
pub fn build_banana(g: i64, lengths: Option<&[Scalar]>) -> Result<BananaData> {
    if g < 1 {
        return Err(Error::NonPositiveGenus(g));
    }
    let g = g as usize;
    let n = g + 1;
    let edge_lengths = match lengths {
        None => vec![Scalar::one(); n],
        Some(l) => {
            if l.len() != n {
                return Err(Error::LengthCount { expected: n, got: l.len() });
            }
            if let Some(index) = l.iter().position(|x| !x.is_positive()) {
                return Err(Error::NonPositiveLength { index: index + 1 });
            }
            l.to_vec()
        }
    };
    let b: Vec<Vec<i64>> = (0..g)
        .map(|i| {
            let mut row = vec![0; n];
            row[0] = 1;
            row[i + 1] = -1;
            row
        })
        .collect();
    let bm = Matrix::from_fn(g, n, |i, j| int(b[i][j]));
    let delta = Matrix::from_fn(n, n, |i, j| if i == j { edge_lengths[i].clone() } else { Scalar::zero() });
    let q = &(&bm * &delta) * &bm.transpose();
    Ok(BananaData { genus: g, edge_lengths, b, q })
}

impl BananaData {
    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn n(&self) -> usize {
        self.genus + 1
    }

    pub fn edge_lengths(&self) -> &[Scalar] {
        &self.edge_lengths
    }

    /// Homology matrix, row `i` is `e_1 - e_{i+2}` (0-based rows).
    pub fn b(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn b_matrix(&self) -> Matrix {
        Matrix::from_fn(self.genus, self.n(), |i, j| int(self.b[i][j]))
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn has_unit_lengths(&self) -> bool {
        self.edge_lengths.iter().all(One::is_one)
    }

    /// The unit-length graph of the same genus. The Voronoi/Delaunay
    /// combinatorics do not depend on the edge lengths, so all combinatorial
    /// routines run on this normalization.
    pub fn combinatorial(&self) -> BananaData {
        if self.has_unit_lengths() {
            return self.clone();
        }
        build_banana(self.genus as i64, None).expect("genus already validated")
    }

    /// `B^T p = (sum p_i, -p_1, ..., -p_g)`.
    pub fn lift(&self, p: &[Scalar]) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.n());
        out.push(p.iter().sum());
        out.extend(p.iter().map(|x| -x.clone()));
        out
    }

    /// `B^T c` for an integer vector.
    pub fn lift_int(&self, c: &[i64]) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.n());
        out.push(c.iter().sum());
        out.extend(c.iter().map(|x| -x));
        out
    }

    /// `x^T Q y`.
    pub fn q_form(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        let qy = self.q.mul_vec(y);
        x.iter().zip(&qy).map(|(a, b)| a * b).sum()
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.genus {
            return Err(Error::DimensionMismatch { expected: self.genus, got: len });
        }
        Ok(())
    }

    /// Integer form of `Q` for the unit-length case.
    fn q_int(&self) -> Vec<Vec<i64>> {
        let c = self.combinatorial();
        (0..self.genus).map(|i| (0..self.genus).map(|j| c.q[(i, j)].to_integer().to_i64().unwrap()).collect()).collect()
    }
}

/// A vertex of the Voronoi polytope `V_Q`.
///
/// For the banana graph, `p` is a vertex exactly when its lift `B^T p` has
/// `k` entries equal to `-(n-k)/n` and `n-k` entries equal to `k/n`, for
/// some `1 <= k <= g`; `k` is the class of the vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VoronoiVertex {
    coords: Vec<Scalar>,
    class_k: usize,
}

impl VoronoiVertex {
    /// Validates `coords` against the vertex pattern of genus `coords.len()`.
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        let g = coords.len();
        if g == 0 {
            return Err(Error::NotAVertex);
        }
        let n = g + 1;
        let mut lift = Vec::with_capacity(n);
        lift.push(coords.iter().sum::<Scalar>());
        lift.extend(coords.iter().map(|x| -x.clone()));
        let k = lift.iter().filter(|x| x.is_negative()).count();
        if k == 0 || k == n {
            return Err(Error::NotAVertex);
        }
        let pos = Scalar::new(BigInt::from(k), BigInt::from(n));
        let neg = -Scalar::new(BigInt::from(n - k), BigInt::from(n));
        if lift.iter().all(|x| *x == pos || *x == neg) {
            Ok(Self { coords, class_k: k })
        } else {
            Err(Error::NotAVertex)
        }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn class_k(&self) -> usize {
        self.class_k
    }

    pub fn genus(&self) -> usize {
        self.coords.len()
    }
}

/// Lattice points of `Z^g` equidistant (in the `Q`-norm) from a Voronoi vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelaunaySet {
    pub points: Vec<Vec<i64>>,
    pub anchor: VoronoiVertex,
}

/// Scales a rational vector to integers: returns `(P, D)` with `p = P / D`.
fn clear_denominators(p: &[Scalar]) -> (Vec<BigInt>, BigInt) {
    let d = p.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = p.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (scaled, d)
}

/// Comparison data for the test `2 c^T Q p <= c^T Q c`, scaled by the common
/// denominator `D` of `p`: `2 c . w <= D c^T Q c` with `w = Q P`.
struct DistanceTest {
    q: Vec<Vec<i64>>,
    w: Vec<i128>,
    d: i128,
}

impl DistanceTest {
    fn new(data: &BananaData, p: &[Scalar]) -> Option<Self> {
        let q = data.q_int();
        let (pp, d) = clear_denominators(p);
        let w = q
            .iter()
            .map(|row| row.iter().zip(&pp).map(|(a, b)| b * BigInt::from(*a)).sum::<BigInt>().to_i128())
            .collect::<Option<Vec<_>>>()?;
        Some(Self { q, w, d: d.to_i128()? })
    }

    /// Sign of `(p-c)^T Q (p-c) - p^T Q p` (times `D > 0`).
    fn compare(&self, c: &[i64]) -> std::cmp::Ordering {
        let cw: i128 = c.iter().zip(&self.w).map(|(a, b)| *a as i128 * b).sum();
        let mut cqc: i128 = 0;
        for (i, row) in self.q.iter().enumerate() {
            for (j, q) in row.iter().enumerate() {
                cqc += (c[i] * q * c[j]) as i128;
            }
        }
        (self.d * cqc).cmp(&(2 * cw))
    }
}

fn exact_compare(data: &BananaData, p: &[Scalar], c: &[i64]) -> std::cmp::Ordering {
    let q = data.combinatorial();
    let cs: Vec<Scalar> = c.iter().map(|&x| int(x)).collect();
    let lhs = q.q_form(&cs, &cs);
    let rhs = q.q_form(&cs, p) * int(2);
    lhs.cmp(&rhs)
}

fn cube(g: usize, r: i64) -> impl Iterator<Item = Vec<i64>> {
    (0..g).map(|_| -r..=r).multi_cartesian_product()
}

/// Definitional membership test `p^T Q p <= (p-c)^T Q (p-c)` for all lattice
/// points `c` with `|c|_inf <= ceil(2 max|p_i|) + 2`.
///
/// For the banana lattice every Voronoi-relevant vector lies in `{-1,0,1}^g`,
/// so the box (of radius at least 2) is more than enough.
pub fn voronoi_contains(data: &BananaData, p: &[Scalar]) -> Result<bool> {
    data.check_dim(p.len())?;
    let max_abs = p.iter().map(|x| x.abs()).max().unwrap_or_else(Scalar::zero);
    let r = (max_abs * int(2)).ceil().to_integer().to_i64().unwrap_or(i64::MAX - 2) + 2;
    let g = data.genus();
    let fast = DistanceTest::new(data, p);
    Ok(cube(g, r).all(|c| {
        let ord = match &fast {
            Some(t) => t.compare(&c),
            None => exact_compare(data, p, &c),
        };
        ord != std::cmp::Ordering::Less
    }))
}

/// All `c` in `{-1,0,1}^g` with `a^T Q a = (a-c)^T Q (a-c)`, sorted.
///
/// Fails loudly if equality is also attained on the shell `|c|_inf = 2`,
/// which would mean the `{-1,0,1}` restriction is unsound.
pub fn delaunay_set(data: &BananaData, a: &VoronoiVertex) -> Result<DelaunaySet> {
    data.check_dim(a.genus())?;
    let g = data.genus();
    let p = a.coords();
    let fast = DistanceTest::new(data, p);
    let cmp = |c: &[i64]| match &fast {
        Some(t) => t.compare(c),
        None => exact_compare(data, p, c),
    };
    let mut points = Vec::new();
    for c in cube(g, 2) {
        let shell = c.iter().any(|x| x.abs() == 2);
        match cmp(&c) {
            std::cmp::Ordering::Less => return Err(Error::NotAVertex),
            std::cmp::Ordering::Equal if shell => return Err(Error::DelaunayShellViolation(c)),
            std::cmp::Ordering::Equal => points.push(c),
            std::cmp::Ordering::Greater => {}
        }
    }
    points.sort();
    Ok(DelaunaySet { points, anchor: a.clone() })
}

/// The translation `c0` in the Delaunay set of `a` with `a2 = a - c0`, if any.
pub fn vertices_equivalent(data: &BananaData, a: &VoronoiVertex, a2: &VoronoiVertex) -> Result<Option<Vec<i64>>> {
    data.check_dim(a2.genus())?;
    if a.class_k() != a2.class_k() {
        return Ok(None);
    }
    let d = delaunay_set(data, a)?;
    Ok(d.points.into_iter().find(|c| a.coords().iter().zip(c).zip(a2.coords()).all(|((x, ci), y)| x - int(*ci) == *y)))
}
