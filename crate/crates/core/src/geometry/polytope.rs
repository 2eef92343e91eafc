use num_traits::{Signed, Zero};

use super::linalg::{affine_dim, det_rat};
use super::polyhedron::HPolyhedron;
use super::vector::{Rat, RatVector};
use crate::error::Result;

/// A bounded polyhedron given by its extreme points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    ambient_dim: usize,
    vertices: Vec<RatVector>,
    dim: i64,
}

impl VPolytope {
    pub fn empty(ambient_dim: usize) -> Self {
        VPolytope { ambient_dim, vertices: Vec::new(), dim: -1 }
    }

    pub(crate) fn from_parts(ambient_dim: usize, vertices: Vec<RatVector>, dim: i64) -> Self {
        VPolytope { ambient_dim, vertices, dim }
    }

    /// Convex hull of arbitrary points; non-extreme points are discarded.
    pub fn from_points(ambient_dim: usize, points: &[RatVector]) -> Result<Self> {
        HPolyhedron::hull_of(ambient_dim, points)?.vertices()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Lexicographically sorted extreme points.
    pub fn vertices(&self) -> &[RatVector] {
        &self.vertices
    }

    /// Affine dimension, `-1` when empty.
    pub fn dim(&self) -> i64 {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Exact Lebesgue measure in the ambient space.
    pub fn volume(&self) -> Rat {
        volume(self)
    }
}

/// Simplices (as vertex index lists) of a pulling triangulation of the
/// full-dimensional hull of `pts` in `R^d`.
fn pulling_triangulation(pts: &[RatVector], idx: &[usize]) -> Vec<Vec<usize>> {
    let d = pts[0].len();
    if d == 0 || idx.len() == 1 {
        return vec![vec![idx[0]]];
    }
    // pts are sorted, so position 0 is the lex-smallest
    let apex = 0;
    let hull = HPolyhedron::hull_of(d, pts).expect("consistent dimensions");
    let mut out = Vec::new();
    for facet in hull.inequalities() {
        if facet.eval(&pts[apex]).is_zero() {
            continue;
        }
        let tight: Vec<usize> = (0..pts.len()).filter(|&i| facet.eval(&pts[i]).is_zero()).collect();
        // dropping a coordinate with nonzero normal entry is injective on the facet plane
        let drop = facet.normal.iter().position(|c| !c.is_zero()).expect("nonzero facet normal");
        let mut sub: Vec<(RatVector, usize)> =
            tight.iter().map(|&i| (pts[i].without(drop), i)).collect();
        sub.sort();
        let sub_pts: Vec<RatVector> = sub.iter().map(|(p, _)| p.clone()).collect();
        let sub_idx: Vec<usize> = sub.iter().map(|(_, i)| idx[*i]).collect();
        for mut simplex in pulling_triangulation(&sub_pts, &sub_idx) {
            simplex.insert(0, idx[apex]);
            out.push(simplex);
        }
    }
    out
}

fn factorial(n: usize) -> Rat {
    (1..=n).fold(Rat::from_integer(1.into()), |acc, k| acc * Rat::from_integer(k.into()))
}

/// Exact volume: sum of `|det| / d!` over a pulling triangulation from the
/// lexicographically smallest vertex. Zero for lower-dimensional input.
pub fn volume(v: &VPolytope) -> Rat {
    let d = v.ambient_dim;
    if v.dim < d as i64 || v.vertices.is_empty() {
        return Rat::zero();
    }
    if d == 0 {
        return Rat::from_integer(1.into());
    }
    let pts = v.vertices.clone();
    debug_assert_eq!(affine_dim(&pts), d as i64);
    let idx: Vec<usize> = (0..pts.len()).collect();
    let total = pulling_triangulation(&pts, &idx)
        .into_iter()
        .map(|s| {
            let rows: Vec<RatVector> = s[1..].iter().map(|&i| pts[i].sub(&pts[s[0]])).collect();
            det_rat(&rows).abs()
        })
        .fold(Rat::zero(), |a, b| a + b);
    total / factorial(d)
}

/// Simplices of the triangulation used by [`volume`], as indices into `v.vertices()`.
pub fn triangulate(v: &VPolytope) -> Vec<Vec<usize>> {
    if v.dim < v.ambient_dim as i64 || v.vertices.is_empty() {
        return Vec::new();
    }
    let idx: Vec<usize> = (0..v.vertices.len()).collect();
    pulling_triangulation(&v.vertices, &idx)
}
