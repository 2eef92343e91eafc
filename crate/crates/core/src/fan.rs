//! Smooth complete fans, the flag cone, and divisor classes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::linalg::{det_i64, inverse};
use crate::geometry::{HPolyhedron, LinearInequality, Rat, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
}

/// One reason a fan is rejected. Cone and ray indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanFailure {
    NonPrimitiveRay { ray: usize },
    DuplicateRay { first: usize, second: usize },
    NonSmoothCone { cone: usize, det: BigInt },
    FacetNotShared { facet: Vec<usize>, cones: Vec<usize> },
    SameSideFacet { facet: Vec<usize>, cones: Vec<usize> },
    CoveringDegree { point: Vec<i64>, count: usize },
    NotProjective,
}

impl fmt::Display for FanFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FanFailure::NonPrimitiveRay { ray } => write!(f, "ray {ray} is not primitive"),
            FanFailure::DuplicateRay { first, second } => {
                write!(f, "rays {first} and {second} coincide")
            }
            FanFailure::NonSmoothCone { cone, det } => {
                write!(f, "cone {cone} is not smooth (det = {det})")
            }
            FanFailure::FacetNotShared { facet, cones } => {
                write!(f, "facet {facet:?} lies in {} maximal cone(s) {cones:?}, expected 2", cones.len())
            }
            FanFailure::SameSideFacet { facet, cones } => {
                write!(f, "cones {cones:?} lie on the same side of facet {facet:?}")
            }
            FanFailure::CoveringDegree { point, count } => {
                write!(f, "point {point:?} lies in {count} maximal cones, expected 1")
            }
            FanFailure::NotProjective => write!(f, "no strictly convex support function exists"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanReport {
    pub smooth: bool,
    pub complete: bool,
    /// `None` when the projectivity check was not requested.
    pub projective: Option<bool>,
    pub failures: Vec<FanFailure>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl Fan {
    /// Checks shapes and index ranges only; geometry is checked by [`validate_fan`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Malformed("lattice rank must be positive".into()));
        }
        for (j, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return Err(Error::Malformed(format!("ray {j} has length {}, expected {dim}", r.len())));
            }
            if r.iter().all(|&x| x == 0) {
                return Err(Error::Malformed(format!("ray {j} is zero")));
            }
        }
        for (k, c) in max_cones.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::Malformed(format!("cone {k} has {} rays, expected {dim}", c.len())));
            }
            let mut s = c.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != c.len() {
                return Err(Error::Malformed(format!("cone {k} repeats a ray")));
            }
            if let Some(&bad) = c.iter().find(|&&j| j >= rays.len()) {
                return Err(Error::Malformed(format!("cone {k} refers to missing ray {bad}")));
            }
        }
        if max_cones.is_empty() {
            return Err(Error::Malformed("fan has no maximal cones".into()));
        }
        Ok(Fan { dim, rays, max_cones })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Projective space `P^n`: rays `e_1..e_n, -(e_1+..+e_n)`, cones omit one ray each.
    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|k| (i == k) as i64).collect())
            .collect();
        rays.push(vec![-1; n]);
        let mut cones: Vec<Vec<usize>> = (0..=n)
            .map(|skip| (0..=n).filter(|&j| j != skip).collect())
            .collect();
        cones.sort();
        Fan::new(n, rays, cones).expect("well-formed")
    }

    /// Hirzebruch surface `F_r`: rays `(1,0), (0,1), (-1,r), (0,-1)`.
    pub fn hirzebruch(r: i64) -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, r], vec![0, -1]],
            vec![vec![0, 1], vec![0, 3], vec![1, 2], vec![2, 3]],
        )
        .expect("well-formed")
    }

    /// `P^1 x P^1`.
    pub fn p1_x_p1() -> Fan {
        Fan::hirzebruch(0)
    }

    fn ray_matrix(&self, cone: &[usize]) -> Vec<Vec<i64>> {
        cone.iter().map(|&j| self.rays[j].clone()).collect()
    }

    /// Dual basis rows `v_i^*` of a smooth cone, as integers.
    fn dual_rows(&self, cone: &[usize]) -> Option<Vec<Vec<i64>>> {
        let m: Vec<RatVector> = cone.iter().map(|&j| RatVector::from_ints(&self.rays[j])).collect();
        // rows of the inverse transpose are the dual vectors
        let inv = inverse(&m)?;
        let n = self.dim;
        let rows: Option<Vec<Vec<i64>>> = (0..n)
            .map(|i| (0..n).map(|k| rat_to_i64(&inv[k][i])).collect())
            .collect();
        rows
    }
}

fn rat_to_i64(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A deterministic point avoiding every hyperplane spanned by `n - 1` rays of a cone.
fn generic_point(fan: &Fan, duals: &[Vec<Vec<i64>>]) -> Vec<i64> {
    let n = fan.dim;
    let mut seed: i64 = 1;
    loop {
        // coordinates grow fast enough to break ties between small hyperplanes
        let p: Vec<i64> = (0..n).map(|i| seed.pow(i as u32) * if i % 2 == 0 { 1 } else { -1 } + i as i64).collect();
        if duals.iter().all(|d| d.iter().all(|row| dot(row, &p) != 0)) {
            return p;
        }
        seed += 1;
    }
}

/// Smoothness, completeness, and optionally projectivity.
pub fn validate_fan(f: &Fan, check_projective: bool) -> FanReport {
    let mut failures = Vec::new();
    for (j, r) in f.rays.iter().enumerate() {
        let g = r.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g != 1 {
            failures.push(FanFailure::NonPrimitiveRay { ray: j });
        }
        for k in 0..j {
            if f.rays[k] == *r {
                failures.push(FanFailure::DuplicateRay { first: k, second: j });
            }
        }
    }

    let mut smooth = true;
    for (k, c) in f.max_cones.iter().enumerate() {
        let det = det_i64(&f.ray_matrix(c));
        if det.abs() != BigInt::one() {
            smooth = false;
            failures.push(FanFailure::NonSmoothCone { cone: k, det });
        }
    }
    let structural_ok = failures.is_empty();

    let mut complete = true;
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (k, c) in f.max_cones.iter().enumerate() {
        let mut s = c.clone();
        s.sort_unstable();
        for skip in 0..s.len() {
            let facet: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &j)| j).collect();
            facets.entry(facet).or_default().push(k);
        }
    }
    for (facet, cones) in &facets {
        if cones.len() != 2 {
            complete = false;
            failures.push(FanFailure::FacetNotShared { facet: facet.clone(), cones: cones.clone() });
            continue;
        }
        if !smooth {
            continue;
        }
        // the two opposite rays must lie on opposite sides of the facet hyperplane
        let sides: Vec<BigInt> = cones
            .iter()
            .map(|&k| {
                let other = f.max_cones[k].iter().find(|j| !facet.contains(j)).copied().unwrap();
                let mut rows: Vec<Vec<i64>> = facet.iter().map(|&j| f.rays[j].clone()).collect();
                rows.push(f.rays[other].clone());
                det_i64(&rows)
            })
            .collect();
        if sides[0].signum() == sides[1].signum() {
            complete = false;
            failures.push(FanFailure::SameSideFacet { facet: facet.clone(), cones: cones.clone() });
        }
    }

    if smooth && complete && structural_ok {
        let duals: Vec<Vec<Vec<i64>>> =
            f.max_cones.iter().map(|c| f.dual_rows(c).expect("smooth cone")).collect();
        let p = generic_point(f, &duals);
        let count = duals.iter().filter(|d| d.iter().all(|row| dot(row, &p) > 0)).count();
        if count != 1 {
            complete = false;
            failures.push(FanFailure::CoveringDegree { point: p, count });
        }
    }

    let projective = if check_projective && smooth && complete && structural_ok {
        let ok = has_strictly_convex_support(f, &facets);
        if !ok {
            failures.push(FanFailure::NotProjective);
        }
        Some(ok)
    } else if check_projective {
        Some(false)
    } else {
        None
    };

    FanReport { smooth, complete, projective, failures }
}

/// Feasibility of `psi_{v'} - <m_sigma, v'> >= 1` across every wall, where
/// `m_sigma` interpolates the unknown values `psi` on the rays of `sigma`.
fn has_strictly_convex_support(f: &Fan, facets: &BTreeMap<Vec<usize>, Vec<usize>>) -> bool {
    let d = f.num_rays();
    let mut rows = Vec::new();
    for (facet, cones) in facets {
        for (k, k2) in [(cones[0], cones[1]), (cones[1], cones[0])] {
            let sigma = &f.max_cones[k];
            let other = *f.max_cones[k2].iter().find(|j| !facet.contains(j)).unwrap();
            let dual = f.dual_rows(sigma).expect("smooth cone");
            // <m_sigma, v'> = sum_i psi_{sigma_i} <v_i^*, v'>
            let mut normal = vec![Rat::zero(); d];
            normal[other] += Rat::one();
            for (i, &j) in sigma.iter().enumerate() {
                normal[j] -= Rat::from_integer(dot(&dual[i], &f.rays[other]).into());
            }
            rows.push(LinearInequality::new(RatVector::new(normal), Rat::from_integer((-1).into())));
        }
    }
    HPolyhedron::from_inequalities(d, rows).expect("consistent").is_feasible()
}

/// The maximal cone `tau` and the ray order `v_1..v_n, v_{n+1}..v_d` it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagBasis {
    pub tau: usize,
    /// `ray_order[k]` is the input index of the ray at flag position `k`.
    pub ray_order: Vec<usize>,
    /// Rows `v_1^*, ..., v_n^*`.
    pub dual: Vec<Vec<i64>>,
    /// Rays in flag order.
    pub rays: Vec<Vec<i64>>,
}

impl FlagBasis {
    pub fn n(&self) -> usize {
        self.dual.len()
    }

    pub fn d(&self) -> usize {
        self.rays.len()
    }

    /// `<v_i^*, v_j>` with both indices in flag order.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        dot(&self.dual[i], &self.rays[j])
    }

    /// Flag position of an input ray.
    pub fn position_of(&self, input_ray: usize) -> usize {
        self.ray_order.iter().position(|&r| r == input_ray).expect("ray index in range")
    }

    /// Character with `<u, v_i> = c_i` on the rays of `tau`.
    pub fn character_from_tau_values(&self, values: &[i64]) -> Vec<i64> {
        let n = self.n();
        (0..n).map(|k| (0..n).map(|i| values[i] * self.dual[i][k]).sum()).collect()
    }

    /// Reorders a per-ray list from input order into flag order.
    pub fn to_flag_order<T: Clone>(&self, per_input_ray: &[T]) -> Vec<T> {
        self.ray_order.iter().map(|&r| per_input_ray[r].clone()).collect()
    }
}

/// Chooses `tau` (default: the lexicographically smallest maximal cone by
/// sorted ray indices). Its rays come first in ascending index order.
pub fn select_flag(f: &Fan, tau: Option<usize>) -> Result<FlagBasis> {
    let tau = match tau {
        Some(t) if t >= f.max_cones.len() => return Err(Error::InvalidCone(t)),
        Some(t) => t,
        None => (0..f.max_cones.len())
            .min_by_key(|&k| {
                let mut s = f.max_cones[k].clone();
                s.sort_unstable();
                (s, k)
            })
            .unwrap(),
    };
    let mut cone = f.max_cones[tau].clone();
    cone.sort_unstable();
    let mut ray_order = cone.clone();
    ray_order.extend((0..f.num_rays()).filter(|j| !cone.contains(j)));
    let dual = f.dual_rows(&cone).ok_or(Error::NotUnimodular)?;
    if det_i64(&f.ray_matrix(&cone)).abs() != BigInt::one() {
        return Err(Error::NotUnimodular);
    }
    let rays = ray_order.iter().map(|&j| f.rays[j].clone()).collect();
    Ok(FlagBasis { tau, ray_order, dual, rays })
}

/// `O(twist) (x) pi^* O(sum_{i>n} coeffs_i D_i)`, coefficients in flag order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
    pub twist: i64,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<i64>, twist: i64) -> Self {
        DivisorClass { coeffs, twist }
    }

    pub fn zero(len: usize) -> Self {
        DivisorClass { coeffs: vec![0; len], twist: 0 }
    }

    pub fn add(&self, other: &DivisorClass) -> DivisorClass {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        DivisorClass {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            twist: self.twist + other.twist,
        }
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass { coeffs: self.coeffs.iter().map(|a| a * k).collect(), twist: self.twist * k }
    }

    /// Full coefficient vector `m_1..m_d` in flag order (zeros on `tau`).
    pub fn flag_coeffs(&self, n: usize) -> Vec<i64> {
        let mut v = vec![0; n];
        v.extend_from_slice(&self.coeffs);
        v
    }

    /// Whether `k` divides the twist and every coefficient.
    pub fn divisible_by(&self, k: i64) -> bool {
        k != 0 && self.twist % k == 0 && self.coeffs.iter().all(|c| c % k == 0)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{};{}", cs.join(","), self.twist)
    }
}

/// Reduces `sum m_j D_j` (input ray order) to the basis `D_{n+1}..D_d`.
pub fn normalize_class(f: &Fan, b: &FlagBasis, full_coeffs: &[i64], twist: i64) -> Result<DivisorClass> {
    if full_coeffs.len() != f.num_rays() {
        return Err(Error::DimensionMismatch { expected: f.num_rays(), got: full_coeffs.len() });
    }
    let m = b.to_flag_order(full_coeffs);
    let n = b.n();
    let u = b.character_from_tau_values(&m[..n]);
    let coeffs = (n..b.d()).map(|j| m[j] - dot(&u, &b.rays[j])).collect();
    Ok(DivisorClass { coeffs, twist })
}

/// `{ u : <u, v_j> <= m_j }` with `m` in input ray order.
pub fn base_polytope(f: &Fan, m: &[i64]) -> Result<HPolyhedron> {
    if m.len() != f.num_rays() {
        return Err(Error::DimensionMismatch { expected: f.num_rays(), got: m.len() });
    }
    let rows = f
        .rays
        .iter()
        .zip(m)
        .map(|(v, &mj)| {
            let neg: Vec<i64> = v.iter().map(|x| -x).collect();
            LinearInequality::from_ints(&neg, mj)
        })
        .collect();
    HPolyhedron::from_inequalities(f.dim, rows)
}
