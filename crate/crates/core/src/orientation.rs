//! Strongly connected orientations of the banana graph and the uniform
//! matroids attached to Voronoi vertices.
//!
//! Sign convention: the reference orientation sends every edge `v2 -> v1`.
//! Sign `+1` on edge `i` keeps that direction and corresponds to a positive
//! lift coordinate `(B^T a)_i`; sign `-1` reverses it, making the edge leave
//! `v1`. The out-degree at `v1` is therefore the number of `-1` signs, which
//! equals the class of the vertex.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::jacobian::{BananaData, VoronoiVertex};
use crate::subsets::{complement, Basis};
use crate::voronoi::{lift, normalize_delaunay, vertex_from_negatives};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation {
    signs: Vec<i8>,
}

impl Orientation {
    /// Accepts any `+1/-1` vector with at least one of each sign.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Invalid(format!("orientation signs must be +1 or -1: {signs:?}")));
        }
        if signs.iter().all(|&s| s == 1) || signs.iter().all(|&s| s == -1) {
            return Err(Error::NotStronglyConnected);
        }
        Ok(Self { signs })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn out_degree_v1(&self) -> usize {
        self.signs.iter().filter(|&&s| s < 0).count()
    }

    pub fn out_degree_v2(&self) -> usize {
        self.signs.len() - self.out_degree_v1()
    }

    /// Edges leaving `v1` (sign `-1`), 1-based.
    pub fn outgoing_v1(&self) -> Basis {
        (1..=self.signs.len()).filter(|&e| self.signs[e - 1] < 0).collect()
    }

    /// Edges leaving `v2` (sign `+1`), 1-based.
    pub fn outgoing_v2(&self) -> Basis {
        (1..=self.signs.len()).filter(|&e| self.signs[e - 1] > 0).collect()
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.signs {
            f.write_str(if s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

/// Which graph vertex the matroid is read off at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexChoice {
    V1,
    V2,
}

impl FromStr for VertexChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v1" => Ok(Self::V1),
            "v2" => Ok(Self::V2),
            _ => Err(Error::Invalid(format!("vertex choice must be \"v1\" or \"v2\", got {s:?}"))),
        }
    }
}

impl fmt::Display for VertexChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::V1 => "v1",
            Self::V2 => "v2",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatroidBases {
    pub k: usize,
    pub n: usize,
    pub bases: BTreeSet<Basis>,
}

impl MatroidBases {
    pub fn is_uniform(&self) -> bool {
        self.bases.len() as u64 == crate::subsets::binomial(self.n as u64, self.k as u64)
    }

    /// Exchange axiom: for bases `A != B` and `a in A \ B` there is
    /// `b in B \ A` with `A - a + b` a basis.
    pub fn satisfies_basis_exchange(&self) -> bool {
        if self.bases.is_empty() {
            return false;
        }
        self.bases.iter().all(|a| {
            self.bases.iter().all(|b| {
                a.iter().filter(|x| !b.contains(x)).all(|x| {
                    b.iter().filter(|y| !a.contains(y)).any(|y| {
                        let mut c: Basis = a.iter().copied().filter(|z| z != x).collect();
                        c.push(*y);
                        c.sort_unstable();
                        self.bases.contains(&c)
                    })
                })
            })
        })
    }

    pub fn dual(&self) -> MatroidBases {
        MatroidBases {
            k: self.n - self.k,
            n: self.n,
            bases: self.bases.iter().map(|b| complement(b, self.n)).collect(),
        }
    }
}

pub fn vertex_to_orientation(data: &BananaData, a: &VoronoiVertex) -> Result<Orientation> {
    Orientation::new(lift(data, a)?.signs)
}

pub fn orientation_to_vertex(data: &BananaData, o: &Orientation) -> Result<VoronoiVertex> {
    if o.signs().len() != data.n() {
        return Err(Error::DimensionMismatch { expected: data.n(), got: o.signs().len() });
    }
    Ok(vertex_from_negatives(data.genus(), &o.outgoing_v1()))
}

/// All `2^n - 2` strongly connected orientations, in lexicographic sign order.
pub fn strongly_connected_orientations(n: usize) -> Vec<Orientation> {
    (0..n).map(|_| [-1i8, 1]).multi_cartesian_product().filter_map(|s| Orientation::new(s).ok()).collect()
}

/// Edges on which two orientations differ, or `None` when the out-degrees
/// at `v1` differ. The flipped edges form a circuit: as many `+ -> -` as
/// `- -> +` flips.
pub fn circuit_difference(o: &Orientation, o2: &Orientation) -> Option<Basis> {
    if o.signs().len() != o2.signs().len() || o.out_degree_v1() != o2.out_degree_v1() {
        return None;
    }
    Some((1..=o.signs().len()).filter(|&e| o.signs()[e - 1] != o2.signs()[e - 1]).collect())
}

/// Bases read from the hypersimplex labels of the Delaunay set of `a`.
pub fn matroid_bases(data: &BananaData, a: &VoronoiVertex, choice: VertexChoice) -> Result<MatroidBases> {
    let labels = normalize_delaunay(data, a)?;
    let m = MatroidBases { k: a.class_k(), n: data.n(), bases: labels.into_values().collect() };
    Ok(match choice {
        VertexChoice::V1 => m,
        VertexChoice::V2 => m.dual(),
    })
}

/// Bases read from the orientations with the same degrees as `a`'s
/// orientation; checked against [`matroid_bases`].
pub fn delaunaytroid(data: &BananaData, a: &VoronoiVertex, choice: VertexChoice) -> Result<MatroidBases> {
    let k = vertex_to_orientation(data, a)?.out_degree_v1();
    let bases: BTreeSet<Basis> = strongly_connected_orientations(data.n())
        .into_iter()
        .filter(|o| o.out_degree_v1() == k)
        .map(|o| match choice {
            VertexChoice::V1 => o.outgoing_v1(),
            VertexChoice::V2 => o.outgoing_v2(),
        })
        .collect();
    let rank = match choice {
        VertexChoice::V1 => k,
        VertexChoice::V2 => data.n() - k,
    };
    let m = MatroidBases { k: rank, n: data.n(), bases };
    if m != matroid_bases(data, a, choice)? {
        return Err(Error::Invalid("orientation bases differ from Delaunay labels".into()));
    }
    Ok(m)
}
