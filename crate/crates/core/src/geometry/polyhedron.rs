use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dd::{cone_generators, ConeGenerators};
use super::inequality::{LinearInequality, Triviality};
use super::linalg::affine_dim;
use super::polytope::VPolytope;
use super::vector::{Rat, RatVector};
use crate::error::{Error, Result};

/// Intersection of finitely many closed half-spaces and hyperplanes in `R^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolyhedron {
    ambient_dim: usize,
    inequalities: Vec<LinearInequality>,
    equations: Vec<LinearInequality>,
}

/// Exact extent of one coordinate. `None` means unbounded in that direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordRange {
    pub lower: Option<Rat>,
    pub upper: Option<Rat>,
}

impl CoordRange {
    pub fn is_bounded(&self) -> bool {
        self.lower.is_some() && self.upper.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub ranges: Vec<CoordRange>,
    /// `false` when the polyhedron is empty; the ranges are then meaningless.
    pub feasible: bool,
}

impl BoundingBox {
    pub fn is_bounded(&self) -> bool {
        !self.feasible || self.ranges.iter().all(CoordRange::is_bounded)
    }
}

impl HPolyhedron {
    pub fn new(
        ambient_dim: usize,
        inequalities: Vec<LinearInequality>,
        equations: Vec<LinearInequality>,
    ) -> Result<Self> {
        for c in inequalities.iter().chain(&equations) {
            if c.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: c.dim() });
            }
        }
        Ok(HPolyhedron { ambient_dim, inequalities, equations })
    }

    pub fn from_inequalities(ambient_dim: usize, inequalities: Vec<LinearInequality>) -> Result<Self> {
        HPolyhedron::new(ambient_dim, inequalities, Vec::new())
    }

    /// The whole space.
    pub fn universe(ambient_dim: usize) -> Self {
        HPolyhedron { ambient_dim, inequalities: Vec::new(), equations: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn inequalities(&self) -> &[LinearInequality] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[LinearInequality] {
        &self.equations
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inequalities.iter().chain(&self.equations).all(|c| c.constant.is_zero())
    }

    /// Canonical rows, duplicates removed, tautologies dropped, sorted.
    pub fn canonicalized(&self) -> Self {
        let mut ineqs: Vec<LinearInequality> = self
            .inequalities
            .iter()
            .map(LinearInequality::canonical)
            .filter(|c| c.triviality() != Some(Triviality::AlwaysTrue))
            .collect();
        ineqs.sort();
        ineqs.dedup();
        let mut eqs: Vec<LinearInequality> = self
            .equations
            .iter()
            .map(LinearInequality::canonical_equation)
            .filter(|c| !(c.normal.is_zero() && c.constant.is_zero()))
            .collect();
        eqs.sort();
        eqs.dedup();
        HPolyhedron { ambient_dim: self.ambient_dim, inequalities: ineqs, equations: eqs }
    }

    pub fn contains(&self, x: &RatVector) -> Result<bool> {
        if x.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: x.len() });
        }
        Ok(self.inequalities.iter().all(|c| c.holds_at(x))
            && self.equations.iter().all(|c| c.eval(x).is_zero()))
    }

    /// `{ k x : x in self }` for `k > 0`.
    pub fn scaled(&self, k: &Rat) -> Self {
        assert!(k.is_positive(), "scale factor must be positive");
        let map = |c: &LinearInequality| LinearInequality::new(c.normal.clone(), &c.constant * k);
        HPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities: self.inequalities.iter().map(map).collect(),
            equations: self.equations.iter().map(map).collect(),
        }
    }

    /// Fourier-Motzkin projection that deletes coordinate `coord`.
    ///
    /// Parallel inequalities are reduced to the tightest one and exact
    /// duplicates are removed; no further redundancy removal is attempted.
    /// An empty projection is returned as the single certificate `-1 >= 0`.
    pub fn fm_eliminate(&self, coord: usize) -> HPolyhedron {
        assert!(coord < self.ambient_dim, "coordinate out of range");
        let pivot_eq = self
            .equations
            .iter()
            .map(LinearInequality::canonical_equation)
            .filter(|e| !e.normal[coord].is_zero())
            .min();

        let mut ineqs: Vec<LinearInequality> = Vec::new();
        let mut eqs: Vec<LinearInequality> = Vec::new();

        if let Some(p) = pivot_eq {
            // substitute x_coord = -(rest)/p_c
            let pc = p.normal[coord].clone();
            let subst = |c: &LinearInequality| -> LinearInequality {
                let f = &c.normal[coord] / &pc;
                LinearInequality::new(c.normal.sub(&p.normal.scale(&f)), &c.constant - &p.constant * &f)
            };
            let mut used = false;
            for e in &self.equations {
                let ce = e.canonical_equation();
                if !used && ce == p {
                    used = true;
                    continue;
                }
                eqs.push(subst(e));
            }
            ineqs.extend(self.inequalities.iter().map(subst));
        } else {
            eqs.extend(self.equations.iter().cloned());
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            for c in &self.inequalities {
                let a = &c.normal[coord];
                if a.is_positive() {
                    pos.push(c);
                } else if a.is_negative() {
                    neg.push(c);
                } else {
                    ineqs.push(c.clone());
                }
            }
            for p in &pos {
                for q in &neg {
                    let ap = p.normal[coord].clone();
                    let aq = -q.normal[coord].clone();
                    ineqs.push(LinearInequality::new(
                        p.normal.scale(&aq).add(&q.normal.scale(&ap)),
                        &p.constant * &aq + &q.constant * &ap,
                    ));
                }
            }
        }

        let drop = |c: LinearInequality| LinearInequality::new(c.normal.without(coord), c.constant);
        let projected = HPolyhedron {
            ambient_dim: self.ambient_dim - 1,
            inequalities: ineqs.into_iter().map(drop).collect(),
            equations: eqs.into_iter().map(drop).collect(),
        };
        projected.tightened()
    }

    /// Canonicalizes, keeps the tightest of each parallel family, and collapses
    /// infeasible systems to a single certificate.
    fn tightened(&self) -> HPolyhedron {
        let infeasible = || HPolyhedron {
            ambient_dim: self.ambient_dim,
            inequalities: vec![LinearInequality::new(
                RatVector::zeros(self.ambient_dim),
                Rat::from_integer((-1).into()),
            )],
            equations: Vec::new(),
        };
        let mut best: BTreeMap<Vec<BigInt>, Rat> = BTreeMap::new();
        for c in &self.inequalities {
            match c.triviality() {
                Some(Triviality::AlwaysFalse) => return infeasible(),
                Some(Triviality::AlwaysTrue) => continue,
                None => {}
            }
            let prim = c.normal.primitive_integer();
            // c.normal = s * prim with s > 0
            let idx = prim.iter().position(|x| !x.is_zero()).unwrap();
            let s = &c.normal[idx] / Rat::from_integer(prim[idx].clone());
            let k = &c.constant / s;
            best.entry(prim)
                .and_modify(|cur| {
                    if k < *cur {
                        *cur = k.clone();
                    }
                })
                .or_insert(k);
        }
        let mut eqs = Vec::new();
        for e in &self.equations {
            if e.normal.is_zero() {
                if !e.constant.is_zero() {
                    return infeasible();
                }
                continue;
            }
            eqs.push(e.clone());
        }
        let ineqs = best
            .into_iter()
            .map(|(n, k)| LinearInequality::new(RatVector::from_bigints(&n), k))
            .collect();
        HPolyhedron { ambient_dim: self.ambient_dim, inequalities: ineqs, equations: eqs }
            .canonicalized()
    }

    fn is_certificate(&self) -> bool {
        self.inequalities.iter().any(|c| c.triviality() == Some(Triviality::AlwaysFalse))
    }

    /// Projects onto a single coordinate by eliminating all others.
    fn shadow_on(&self, coord: usize) -> HPolyhedron {
        let mut p = self.clone();
        for c in (0..self.ambient_dim).rev() {
            if c != coord {
                p = p.fm_eliminate(c);
            }
        }
        p
    }

    /// Exact per-coordinate extrema via Fourier-Motzkin shadows.
    pub fn bounding_box(&self) -> BoundingBox {
        let mut ranges = Vec::with_capacity(self.ambient_dim);
        if self.ambient_dim == 0 {
            return BoundingBox { ranges, feasible: !self.tightened().is_certificate() };
        }
        for coord in 0..self.ambient_dim {
            let shadow = self.shadow_on(coord);
            if shadow.is_certificate() {
                return BoundingBox { ranges: Vec::new(), feasible: false };
            }
            let mut lower: Option<Rat> = None;
            let mut upper: Option<Rat> = None;
            let mut push = |a: &Rat, c: &Rat, as_eq: bool| {
                // a x + c >= 0
                let t = -c / a;
                if (a.is_positive() || as_eq) && lower.as_ref().is_none_or(|l| t > *l) {
                    lower = Some(t.clone());
                }
                if (a.is_negative() || as_eq) && upper.as_ref().is_none_or(|u| t < *u) {
                    upper = Some(t);
                }
            };
            for c in shadow.inequalities() {
                push(&c.normal[0], &c.constant, false);
            }
            for e in shadow.equations() {
                push(&e.normal[0], &e.constant, true);
            }
            if let (Some(l), Some(u)) = (&lower, &upper) {
                if l > u {
                    return BoundingBox { ranges: Vec::new(), feasible: false };
                }
            }
            ranges.push(CoordRange { lower, upper });
        }
        BoundingBox { ranges, feasible: true }
    }

    pub fn is_empty(&self) -> bool {
        !self.is_feasible()
    }

    /// Exact feasibility by eliminating every coordinate.
    pub fn is_feasible(&self) -> bool {
        let mut p = self.tightened();
        while p.ambient_dim > 0 && !p.is_certificate() {
            p = p.fm_eliminate(p.ambient_dim - 1);
        }
        !p.is_certificate()
    }

    /// All integer points, lexicographically ordered, by box scan.
    ///
    /// Cost is the product of the box side lengths times the constraint count.
    pub fn lattice_points(&self) -> Result<Vec<RatVector>> {
        let bbox = self.bounding_box();
        if !bbox.feasible {
            return Ok(Vec::new());
        }
        if !bbox.is_bounded() {
            return Err(Error::UnboundedInput);
        }
        let to_i64 = |r: &BigInt| r.to_i64().ok_or(Error::UnboundedInput);
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for r in &bbox.ranges {
            lo.push(to_i64(&r.lower.as_ref().unwrap().ceil().to_integer())?);
            hi.push(to_i64(&r.upper.as_ref().unwrap().floor().to_integer())?);
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            let x = RatVector::from_ints(&cur);
            if self.contains(&x)? {
                out.push(x);
            }
            // odometer, last coordinate fastest
            let mut k = self.ambient_dim;
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                if cur[k] < hi[k] {
                    cur[k] += 1;
                    break;
                }
                cur[k] = lo[k];
            }
            if self.ambient_dim == 0 {
                return Ok(out);
            }
        }
    }

    /// Integer rows of the homogenized system `(normal, constant) . (x, t) >= 0`,
    /// with equations as opposite pairs, plus `t >= 0`, sorted lexicographically.
    fn homogenized_rows(&self) -> Vec<Vec<BigInt>> {
        let c = self.canonicalized();
        let mut rows: Vec<Vec<BigInt>> = c.inequalities.iter().map(|i| i.integer_row()).collect();
        for e in &c.equations {
            rows.push(e.integer_row());
            rows.push(e.negated().integer_row());
        }
        let mut t = vec![BigInt::zero(); self.ambient_dim + 1];
        t[self.ambient_dim] = BigInt::from(1);
        rows.push(t);
        rows.sort();
        rows.dedup();
        rows
    }

    /// Exact vertex set of a bounded polyhedron (double description).
    pub fn vertices(&self) -> Result<VPolytope> {
        let d = self.ambient_dim;
        let gens = cone_generators(d + 1, &self.homogenized_rows());
        let mut verts: Vec<RatVector> = Vec::new();
        let mut recession = !gens.lines.is_empty();
        for r in &gens.rays {
            let t = &r[d];
            if t.is_zero() {
                recession = true;
            } else {
                let tr = Rat::from_integer(t.clone());
                verts.push(RatVector::new(
                    r[..d].iter().map(|x| Rat::from_integer(x.clone()) / &tr).collect(),
                ));
            }
        }
        if verts.is_empty() {
            return Ok(VPolytope::empty(d));
        }
        if recession {
            return Err(Error::UnboundedInput);
        }
        verts.sort();
        verts.dedup();
        let dim = affine_dim(&verts);
        Ok(VPolytope::from_parts(d, verts, dim))
    }

    /// Generators of a homogeneous polyhedron (a cone).
    pub fn cone_generators(&self) -> ConeGenerators {
        let c = self.canonicalized();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let strip = |r: Vec<BigInt>| r[..self.ambient_dim].to_vec();
        for i in &c.inequalities {
            rows.push(strip(i.integer_row()));
        }
        for e in &c.equations {
            rows.push(strip(e.integer_row()));
            rows.push(strip(e.negated().integer_row()));
        }
        rows.sort();
        rows.dedup();
        cone_generators(self.ambient_dim, &rows)
    }

    /// Set equality by double inclusion of vertices (bounded) or generators (cones).
    pub fn set_equal(&self, other: &HPolyhedron) -> Result<bool> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: other.ambient_dim });
        }
        match (self.vertices(), other.vertices()) {
            (Ok(a), Ok(b)) => {
                for v in a.vertices() {
                    if !other.contains(v)? {
                        return Ok(false);
                    }
                }
                for v in b.vertices() {
                    if !self.contains(v)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ if self.is_homogeneous() && other.is_homogeneous() => {
                Ok(self.cone_within(other)? && other.cone_within(self)?)
            }
            _ => Err(Error::UnboundedInput),
        }
    }

    fn cone_within(&self, other: &HPolyhedron) -> Result<bool> {
        let g = self.cone_generators();
        for r in &g.rays {
            if !other.contains(&RatVector::from_bigints(r))? {
                return Ok(false);
            }
        }
        for l in &g.lines {
            let v = RatVector::from_bigints(l);
            if !other.contains(&v)? || !other.contains(&v.scale(&Rat::from_integer((-1).into())))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// H-representation of the convex hull of a finite point set.
    pub fn hull_of(ambient_dim: usize, points: &[RatVector]) -> Result<HPolyhedron> {
        if points.is_empty() {
            return HPolyhedron::from_inequalities(
                ambient_dim,
                vec![LinearInequality::new(RatVector::zeros(ambient_dim), Rat::from_integer((-1).into()))],
            );
        }
        let rows: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| {
                if p.len() != ambient_dim {
                    return Err(Error::DimensionMismatch { expected: ambient_dim, got: p.len() });
                }
                let mut row = p.entries().to_vec();
                row.push(Rat::from_integer(1.into()));
                Ok(RatVector::new(row).primitive_integer())
            })
            .collect::<Result<_>>()?;
        let mut rows = rows;
        rows.sort();
        rows.dedup();
        let polar = cone_generators(ambient_dim + 1, &rows);
        let ineqs = polar.rays.iter().map(|r| LinearInequality::from_integer_row(r)).collect();
        let eqs = polar.lines.iter().map(|r| LinearInequality::from_integer_row(r)).collect();
        Ok(HPolyhedron::new(ambient_dim, ineqs, eqs)?.canonicalized())
    }
}

/// Free-function form of [`HPolyhedron::fm_eliminate`].
pub fn fm_eliminate(p: &HPolyhedron, coord: usize) -> HPolyhedron {
    p.fm_eliminate(coord)
}

/// Free-function form of [`HPolyhedron::vertices`].
pub fn dd_vertices(p: &HPolyhedron) -> Result<VPolytope> {
    p.vertices()
}

pub fn lattice_points(p: &HPolyhedron) -> Result<Vec<RatVector>> {
    p.lattice_points()
}

pub fn bounding_box(p: &HPolyhedron) -> BoundingBox {
    p.bounding_box()
}

pub fn contains(p: &HPolyhedron, x: &RatVector) -> Result<bool> {
    p.contains(x)
}

pub fn poly_equal(p: &HPolyhedron, q: &HPolyhedron) -> Result<bool> {
    p.set_equal(q)
}
