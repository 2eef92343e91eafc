//! Global Okounkov cone of `P(E)`, its fibers, and consistency checks.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fan::{DivisorClass, FlagBasis};
use crate::geometry::{HPolyhedron, LinearInequality, Rat, RatVector, VPolytope};
use crate::klyachko::FlagContext;
use crate::sections::{h0, valuation_set};

/// Default bound on the number of C-multi admissible sets.
pub const DEFAULT_CAP: u128 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdmissibleKind {
    ASingleton,
    BSingleton,
    CMulti,
}

/// Rays are flag positions, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdmissibleSet {
    pub kind: AdmissibleKind,
    pub rays: Vec<usize>,
}

impl fmt::Display for AdmissibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.kind {
            AdmissibleKind::ASingleton => "A",
            AdmissibleKind::BSingleton => "B",
            AdmissibleKind::CMulti => "C",
        };
        let r: Vec<String> = self.rays.iter().map(|j| (j + 1).to_string()).collect();
        write!(f, "{tag}{{{}}}", r.join(","))
    }
}

/// Number of C-multi admissible sets, `prod (|C_h| + 1) - 1`.
pub fn c_multi_count(ctx: &FlagContext) -> u128 {
    ctx.c_sets.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128 + 1)) - 1
}

pub fn admissible_sets(ctx: &FlagContext) -> Result<Vec<AdmissibleSet>> {
    admissible_sets_capped(ctx, DEFAULT_CAP)
}

/// A-singletons, B-singletons, then C-multis with `C_1` varying fastest over
/// (skip, rays ascending).
pub fn admissible_sets_capped(ctx: &FlagContext, cap: u128) -> Result<Vec<AdmissibleSet>> {
    let count = c_multi_count(ctx);
    if count > cap {
        return Err(Error::CapExceeded { count, cap });
    }
    let mut out: Vec<AdmissibleSet> = ctx
        .a_set
        .iter()
        .map(|&j| AdmissibleSet { kind: AdmissibleKind::ASingleton, rays: vec![j] })
        .chain(ctx.b_set.iter().map(|&j| AdmissibleSet { kind: AdmissibleKind::BSingleton, rays: vec![j] }))
        .collect();
    let p = ctx.c_sets.len();
    // choice[h] = 0 skips C_h, k > 0 takes its (k-1)-th ray
    let mut choice = vec![0usize; p];
    loop {
        let mut h = 0;
        while h < p {
            if choice[h] < ctx.c_sets[h].len() {
                choice[h] += 1;
                break;
            }
            choice[h] = 0;
            h += 1;
        }
        if h == p {
            break;
        }
        let mut rays: Vec<usize> =
            (0..p).filter(|&h| choice[h] > 0).map(|h| ctx.c_sets[h][choice[h] - 1]).collect();
        rays.sort_unstable();
        out.push(AdmissibleSet { kind: AdmissibleKind::CMulti, rays });
    }
    Ok(out)
}

fn coord_count(ctx: &FlagContext) -> usize {
    ctx.d + 2
}

/// Index of `w_k` (flag position `k >= n`) in the cone coordinates.
fn w_index(k: usize) -> usize {
    k + 1
}

/// Coordinate labels `x1..x(n+1), w(n+1)..wd, w`.
pub fn coord_names(ctx: &FlagContext) -> Vec<String> {
    let mut v: Vec<String> = (1..=ctx.n + 1).map(|i| format!("x{i}")).collect();
    v.extend((ctx.n + 1..=ctx.d).map(|j| format!("w{j}")));
    v.push("w".into());
    v
}

/// `sum_i <v_i^*, v_k> x_i + <u2 - u1, v_k> x_{n+1} + (a_k - <u2, v_k>) w + w_k`.
fn g_row(ctx: &FlagContext, k: usize) -> Vec<Rat> {
    let mut row = vec![Rat::zero(); coord_count(ctx)];
    for i in 0..ctx.n {
        row[i] = Rat::from_integer(ctx.basis.pairing(i, k).into());
    }
    row[ctx.n] = Rat::from_integer((ctx.u2_pairing(k) - ctx.u1_pairing(k)).into());
    row[ctx.d + 1] = Rat::from_integer((ctx.a[k] - ctx.u2_pairing(k)).into());
    if k >= ctx.n {
        row[w_index(k)] += Rat::one();
    }
    row
}

/// `gamma_j o psi` as a row over the cone coordinates.
pub fn gamma_coeffs(ctx: &FlagContext, j: usize) -> RatVector {
    let gap = Rat::from_integer(ctx.gap(j).into());
    RatVector::new(g_row(ctx, j).into_iter().map(|c| -c / &gap).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Admissible(AdmissibleSet),
    /// `w - x_{n+1} >= 0`
    TwistBound,
    /// `x_{n+1} >= 0`
    LastNonnegative,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Admissible(s) => write!(f, "{s}"),
            Provenance::TwistBound => write!(f, "w>=x"),
            Provenance::LastNonnegative => write!(f, "x>=0"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalCone {
    pub n: usize,
    pub d: usize,
    /// Homogeneous integer rows; row `i` comes from `provenance[i]`.
    pub cone: HPolyhedron,
    pub provenance: Vec<Provenance>,
}

impl GlobalCone {
    pub fn rows(&self) -> &[LinearInequality] {
        self.cone.inequalities()
    }

    /// Integer coefficient rows meaning `row . coords >= 0`.
    pub fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows()
            .iter()
            .map(|r| r.normal.iter().map(|c| c.to_integer()).collect())
            .collect()
    }

    /// Drops rows one at a time while the cone stays the same set.
    pub fn pruned(&self) -> Result<GlobalCone> {
        let mut rows: Vec<LinearInequality> = self.rows().to_vec();
        let mut prov = self.provenance.clone();
        let full = self.cone.clone();
        let mut i = 0;
        while i < rows.len() {
            let mut trial = rows.clone();
            trial.remove(i);
            let candidate = HPolyhedron::from_inequalities(full.ambient_dim(), trial.clone())?;
            if candidate.set_equal(&full)? {
                rows = trial;
                prov.remove(i);
            } else {
                i += 1;
            }
        }
        Ok(GlobalCone {
            n: self.n,
            d: self.d,
            cone: HPolyhedron::from_inequalities(full.ambient_dim(), rows)?,
            provenance: prov,
        })
    }
}

fn integral(row: Vec<Rat>) -> LinearInequality {
    LinearInequality::new(RatVector::new(row), Rat::zero()).canonical()
}

pub fn global_cone(ctx: &FlagContext) -> Result<GlobalCone> {
    global_cone_capped(ctx, DEFAULT_CAP)
}

pub fn global_cone_capped(ctx: &FlagContext, cap: u128) -> Result<GlobalCone> {
    let dim = coord_count(ctx);
    let mut rows = Vec::new();
    let mut provenance = Vec::new();
    for set in admissible_sets_capped(ctx, cap)? {
        let row = match set.kind {
            AdmissibleKind::ASingleton => g_row(ctx, set.rays[0]),
            AdmissibleKind::BSingleton => {
                let j = set.rays[0];
                let mut r = g_row(ctx, j);
                r[ctx.n] += Rat::from_integer(ctx.gap(j).into());
                r
            }
            AdmissibleKind::CMulti => {
                let l = set.rays.iter().fold(1i64, |acc, &j| acc.lcm(&ctx.gap(j)));
                let mut r = vec![Rat::zero(); dim];
                for &j in &set.rays {
                    let f = Rat::from_integer((l / ctx.gap(j)).into());
                    for (acc, c) in r.iter_mut().zip(g_row(ctx, j)) {
                        *acc += c * &f;
                    }
                }
                let lr = Rat::from_integer(l.into());
                r[ctx.d + 1] += &lr;
                r[ctx.n] -= &lr;
                r
            }
        };
        rows.push(integral(row));
        provenance.push(Provenance::Admissible(set));
    }
    let mut tb = vec![Rat::zero(); dim];
    tb[ctx.d + 1] = Rat::one();
    tb[ctx.n] = -Rat::one();
    rows.push(integral(tb));
    provenance.push(Provenance::TwistBound);
    let mut nn = vec![Rat::zero(); dim];
    nn[ctx.n] = Rat::one();
    rows.push(integral(nn));
    provenance.push(Provenance::LastNonnegative);
    Ok(GlobalCone { n: ctx.n, d: ctx.d, cone: HPolyhedron::from_inequalities(dim, rows)?, provenance })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OkounkovBody {
    pub cls: DivisorClass,
    pub body: HPolyhedron,
    pub verts: Option<VPolytope>,
    pub vol: Option<Rat>,
}

impl OkounkovBody {
    /// Computes and caches the vertex set.
    pub fn with_vertices(mut self) -> Result<Self> {
        if self.verts.is_none() {
            self.verts = Some(self.body.vertices()?);
        }
        Ok(self)
    }

    /// Computes and caches vertices and the exact volume.
    pub fn with_volume(self) -> Result<Self> {
        let mut s = self.with_vertices()?;
        let v = s.verts.as_ref().unwrap().volume();
        s.vol = Some(v);
        Ok(s)
    }

    pub fn lattice_points(&self) -> Result<Vec<RatVector>> {
        self.body.lattice_points()
    }
}

/// Slice of the cone at the class coordinates, as a polyhedron in `R^{n+1}`.
pub fn fiber_body(gc: &GlobalCone, cls: &DivisorClass) -> Result<OkounkovBody> {
    if cls.coeffs.len() != gc.d - gc.n {
        return Err(Error::DimensionMismatch { expected: gc.d - gc.n, got: cls.coeffs.len() });
    }
    let mut point = vec![Rat::zero(); gc.d + 2];
    for (k, &c) in cls.coeffs.iter().enumerate() {
        point[w_index(gc.n + k)] = Rat::from_integer(c.into());
    }
    point[gc.d + 1] = Rat::from_integer(cls.twist.into());
    let rows = gc
        .rows()
        .iter()
        .map(|r| {
            let normal = RatVector::new(r.normal.entries()[..=gc.n].to_vec());
            let constant = r.normal.entries()[gc.n + 1..]
                .iter()
                .zip(&point[gc.n + 1..])
                .fold(Rat::zero(), |acc, (a, b)| acc + a * b);
            LinearInequality::new(normal, constant)
        })
        .collect();
    let body = HPolyhedron::from_inequalities(gc.n + 1, rows)?;
    Ok(OkounkovBody { cls: cls.clone(), body, verts: None, vol: None })
}

fn factorial(k: usize) -> Rat {
    (1..=k).fold(Rat::one(), |acc, i| acc * Rat::from_integer(i.into()))
}

/// `(n+1)! vol(fiber)`, the volume of the class on `P(E)`.
pub fn vol_of_class(gc: &GlobalCone, cls: &DivisorClass) -> Result<Rat> {
    let b = fiber_body(gc, cls)?.with_volume()?;
    Ok(b.vol.unwrap() * factorial(gc.n + 1))
}

pub fn is_big(gc: &GlobalCone, cls: &DivisorClass) -> Result<bool> {
    let b = fiber_body(gc, cls)?.with_vertices()?;
    Ok(b.verts.unwrap().dim() == (gc.n + 1) as i64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub h0: i64,
    pub valuations: usize,
    pub lattice_points: usize,
    /// Every valuation vector lies in the body.
    pub containment: bool,
    /// `|valuations| = h0`.
    pub cardinality: bool,
    /// Valuations equal body lattice points on the level-`c` sublattice;
    /// `None` when the class is not divisible by `c`.
    pub level_c_equality: Option<bool>,
    /// Valuation vectors outside the body.
    pub outside_body: Vec<Vec<i64>>,
    /// Level-`c` lattice points of the body that are not valuation vectors.
    pub unreached: Vec<Vec<i64>>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.containment && self.cardinality && self.level_c_equality != Some(false)
    }
}

/// Compares the body against the section oracle.
pub fn check_against_oracle(gc: &GlobalCone, ctx: &FlagContext, cls: &DivisorClass) -> Result<CheckReport> {
    let body = fiber_body(gc, cls)?;
    let vals = valuation_set(ctx, cls)?;
    let h = h0(ctx, cls)?;
    let mut outside = Vec::new();
    for v in &vals {
        if !body.body.contains(&RatVector::from_ints(v))? {
            outside.push(v.clone());
        }
    }
    let pts: BTreeSet<Vec<i64>> = body
        .lattice_points()?
        .iter()
        .map(|p| p.to_i64().expect("small integer point"))
        .collect();
    let c = ctx.c;
    let (level_c_equality, unreached) = if cls.divisible_by(c) {
        let on_level = |v: &Vec<i64>| v.iter().all(|x| x % c == 0);
        let lv: BTreeSet<&Vec<i64>> = vals.iter().filter(|v| on_level(v)).collect();
        let lp: BTreeSet<&Vec<i64>> = pts.iter().filter(|v| on_level(v)).collect();
        let unreached: Vec<Vec<i64>> = lp.difference(&lv).map(|v| (*v).clone()).collect();
        (Some(lv == lp), unreached)
    } else {
        (None, Vec::new())
    };
    Ok(CheckReport {
        h0: h,
        valuations: vals.len(),
        lattice_points: pts.len(),
        containment: outside.is_empty(),
        cardinality: vals.len() as i64 == h,
        level_c_equality,
        outside_body: outside,
        unreached,
    })
}

/// The toric polytope of `P(L_1 + L_2)` for a split bundle, where `L_k`
/// has support-function values `h_k` (input ray order) and `L_1` is the
/// summand whose fiber is `E_1`.
pub fn split_model_body(basis: &FlagBasis, h1: &[i64], h2: &[i64], cls: &DivisorClass) -> Result<HPolyhedron> {
    let d = basis.d();
    let n = basis.n();
    for h in [h1, h2] {
        if h.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: h.len() });
        }
    }
    if cls.coeffs.len() != d - n {
        return Err(Error::DimensionMismatch { expected: d - n, got: cls.coeffs.len() });
    }
    let h1 = basis.to_flag_order(h1);
    let h2 = basis.to_flag_order(h2);
    let char_of = |h: &[i64]| -> Vec<i64> {
        let vals: Vec<i64> = h[..n].iter().map(|x| -x).collect();
        basis.character_from_tau_values(&vals)
    };
    let (u1, u2) = (char_of(&h1), char_of(&h2));
    let pair = |u: &[i64], j: usize| -> i64 { u.iter().zip(&basis.rays[j]).map(|(a, b)| a * b).sum() };
    let m = cls.twist;
    let mj = cls.flag_coeffs(n);
    let mut rows = Vec::new();
    let mut e = vec![0i64; n + 1];
    e[n] = 1;
    rows.push(LinearInequality::from_ints(&e, 0));
    e[n] = -1;
    rows.push(LinearInequality::from_ints(&e, m));
    for j in 0..d {
        let mut normal: Vec<i64> = (0..n).map(|i| basis.pairing(i, j)).collect();
        normal.push(h2[j] - h1[j] + pair(&u2, j) - pair(&u1, j));
        let constant = -m * h2[j] - m * pair(&u2, j) + mj[j];
        rows.push(LinearInequality::from_ints(&normal, constant));
    }
    HPolyhedron::from_inequalities(n + 1, rows)
}

/// Three-way answer of the exact root comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Holds,
    Violated,
    /// Not separated at the working precision (only possible near equality
    /// with irrational roots).
    Undecided,
}

/// Exact `k`-th root of a nonnegative rational, if it is rational.
fn exact_root(r: &Rat, k: u32) -> Option<Rat> {
    let p = r.numer().nth_root(k);
    let q = r.denom().nth_root(k);
    (p.pow(k) == *r.numer() && q.pow(k) == *r.denom()).then(|| Rat::new(p, q))
}

/// Rational bounds `lo <= r^{1/k} <= hi` with denominator `2^bits`.
fn root_bounds(r: &Rat, k: u32, bits: u64) -> (Rat, Rat) {
    let scale = BigInt::one() << bits;
    // floor((r * scale^k)^{1/k})
    let scaled = (r * Rat::from_integer(scale.pow(k))).floor().to_integer();
    let lo = scaled.nth_root(k);
    let s = Rat::from_integer(scale);
    (Rat::from_integer(lo.clone()) / &s, Rat::from_integer(lo + 1) / s)
}

/// Whether `v12^{1/k} >= v1^{1/k} + v2^{1/k}` for nonnegative rationals.
pub fn compare_log_concave(v1: &Rat, v2: &Rat, v12: &Rat, k: u32) -> Comparison {
    assert!(k >= 1);
    assert!(!v1.is_negative() && !v2.is_negative() && !v12.is_negative());
    let verdict = |b: bool| if b { Comparison::Holds } else { Comparison::Violated };
    if v1.is_zero() {
        return verdict(v12 >= v2);
    }
    if v2.is_zero() {
        return verdict(v12 >= v1);
    }
    // v2 = lambda^k v1 with lambda rational: the sum of roots is (1 + lambda) v1^{1/k}
    if let Some(lambda) = exact_root(&(v2 / v1), k) {
        let s = (Rat::one() + lambda).pow(k as i32) * v1;
        return verdict(*v12 >= s);
    }
    for bits in [32u64, 128, 512, 2048] {
        let (lo1, hi1) = root_bounds(v1, k, bits);
        let (lo2, hi2) = root_bounds(v2, k, bits);
        if (&hi1 + &hi2).pow(k as i32) <= *v12 {
            return Comparison::Holds;
        }
        if (&lo1 + &lo2).pow(k as i32) > *v12 {
            return Comparison::Violated;
        }
    }
    Comparison::Undecided
}
