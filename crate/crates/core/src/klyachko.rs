//! Rank-two Klyachko filtrations and the flag context they induce.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::fan::{Fan, FlagBasis};

/// A line `k (lambda, mu)` in the fiber `E = k^2`, stored primitive with
/// first nonzero entry positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjLine {
    rep: (i64, i64),
}

impl ProjLine {
    pub fn new(lambda: i64, mu: i64) -> Result<Self> {
        if lambda == 0 && mu == 0 {
            return Err(Error::Malformed("line representative is zero".into()));
        }
        let g = lambda.gcd(&mu);
        let (mut l, mut m) = (lambda / g, mu / g);
        if l < 0 || (l == 0 && m < 0) {
            l = -l;
            m = -m;
        }
        Ok(ProjLine { rep: (l, m) })
    }

    pub fn rep(&self) -> (i64, i64) {
        self.rep
    }

    /// Image under the integer matrix `[[p, q], [r, s]]` acting on column vectors.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let (x, y) = self.rep;
        ProjLine::new(m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }
}

impl fmt::Display for ProjLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span({}, {})", self.rep.0, self.rep.1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Jump {
    pub b: i64,
    pub line: ProjLine,
}

/// `E` for `i <= a`, the jump line for `a < i <= b`, then `0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RayFiltration {
    pub a: i64,
    pub jump: Option<Jump>,
}

impl RayFiltration {
    pub fn full_drop(a: i64) -> Self {
        RayFiltration { a, jump: None }
    }

    pub fn with_jump(a: i64, b: i64, line: ProjLine) -> Result<Self> {
        if b <= a {
            return Err(Error::Malformed(format!("jump level b = {b} must exceed a = {a}")));
        }
        Ok(RayFiltration { a, jump: Some(Jump { b, line }) })
    }

    pub fn dim_at(&self, i: i64) -> u8 {
        if i <= self.a {
            2
        } else {
            match self.jump {
                Some(j) if i <= j.b => 1,
                _ => 0,
            }
        }
    }

    pub fn line_at(&self, i: i64) -> Option<ProjLine> {
        match self.jump {
            Some(j) if i > self.a && i <= j.b => Some(j.line),
            _ => None,
        }
    }

    /// `b_j`, with `a_j + 1` for rays without a jump.
    pub fn b(&self) -> i64 {
        self.jump.map_or(self.a + 1, |j| j.b)
    }
}

/// Filtrations indexed like the fan's rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle2 {
    filtrations: Vec<RayFiltration>,
}

impl Bundle2 {
    pub fn new(filtrations: Vec<RayFiltration>) -> Self {
        Bundle2 { filtrations }
    }

    pub fn filtrations(&self) -> &[RayFiltration] {
        &self.filtrations
    }

    pub fn len(&self) -> usize {
        self.filtrations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filtrations.is_empty()
    }

    /// `O(D_1) + O(D_2)` with `D_k = sum_j c_k[j] D_j`, summand lines `(1,0)` and `(0,1)`.
    pub fn split(c1: &[i64], c2: &[i64]) -> Result<Self> {
        if c1.len() != c2.len() {
            return Err(Error::DimensionMismatch { expected: c1.len(), got: c2.len() });
        }
        let l1 = ProjLine::new(1, 0)?;
        let l2 = ProjLine::new(0, 1)?;
        let filtrations = c1
            .iter()
            .zip(c2)
            .map(|(&x, &y)| {
                if x == y {
                    Ok(RayFiltration::full_drop(x))
                } else if x > y {
                    RayFiltration::with_jump(y, x, l1)
                } else {
                    RayFiltration::with_jump(x, y, l2)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Bundle2 { filtrations })
    }

    /// Applies a change of basis of `E` to every jump line.
    pub fn transform_lines(&self, m: [[i64; 2]; 2]) -> Result<Self> {
        let filtrations = self
            .filtrations
            .iter()
            .map(|f| {
                Ok(match f.jump {
                    None => *f,
                    Some(j) => RayFiltration { a: f.a, jump: Some(Jump { b: j.b, line: j.line.transform(m)? }) },
                })
            })
            .collect::<Result<_>>()?;
        Ok(Bundle2 { filtrations })
    }

    fn check_len(&self, f: &Fan) -> Result<()> {
        if self.filtrations.len() != f.num_rays() {
            return Err(Error::DimensionMismatch { expected: f.num_rays(), got: self.filtrations.len() });
        }
        Ok(())
    }
}

/// Summand divisors `(c1, c2)` (input ray order) when `E` splits as a sum of
/// line bundles with fibers `e1` and a second line. `None` when the jump lines
/// do not fit in such a pair.
pub fn split_summands(e: &Bundle2, e1: &ProjLine) -> Option<(Vec<i64>, Vec<i64>)> {
    let lines: BTreeSet<ProjLine> = e.filtrations.iter().filter_map(|f| f.jump.map(|j| j.line)).collect();
    let other = match lines.len() {
        0 | 1 => match lines.iter().find(|l| *l != e1) {
            Some(l) => *l,
            None if e1.rep() == (0, 1) => ProjLine { rep: (1, 0) },
            None => ProjLine { rep: (0, 1) },
        },
        2 if lines.contains(e1) => *lines.iter().find(|l| *l != e1).unwrap(),
        _ => return None,
    };
    let value = |f: &RayFiltration, line: &ProjLine| match f.jump {
        Some(j) if j.line == *line => j.b,
        _ => f.a,
    };
    let c1 = e.filtrations.iter().map(|f| value(f, e1)).collect();
    let c2 = e.filtrations.iter().map(|f| value(f, &other)).collect();
    Some((c1, c2))
}

pub fn filtration_dim(e: &Bundle2, ray: usize, level: i64) -> u8 {
    e.filtrations[ray].dim_at(level)
}

pub fn filtration_line(e: &Bundle2, ray: usize, level: i64) -> Option<ProjLine> {
    e.filtrations[ray].line_at(level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatViolation {
    pub cone: usize,
    pub lines: Vec<ProjLine>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatReport {
    pub violations: Vec<CompatViolation>,
}

impl CompatReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A maximal cone passes when its rays carry at most two distinct jump lines.
pub fn check_compatibility(f: &Fan, e: &Bundle2) -> Result<CompatReport> {
    e.check_len(f)?;
    let violations = f
        .max_cones()
        .iter()
        .enumerate()
        .filter_map(|(k, cone)| {
            let lines: BTreeSet<ProjLine> =
                cone.iter().filter_map(|&j| e.filtrations[j].jump.map(|x| x.line)).collect();
            (lines.len() > 2).then(|| CompatViolation { cone: k, lines: lines.into_iter().collect() })
        })
        .collect();
    Ok(CompatReport { violations })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RayKind {
    A,
    B,
    /// Index `h` into `FlagContext::ls` (0-based).
    C(usize),
}

/// Everything the inequality system and the section oracle need.
/// Per-ray data is in flag order; positions are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagContext {
    pub n: usize,
    pub d: usize,
    pub basis: FlagBasis,
    /// Characters in the standard coordinates of `M = Z^n`.
    pub u1: Vec<i64>,
    pub u2: Vec<i64>,
    pub e1: ProjLine,
    pub ls: Vec<ProjLine>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub kinds: Vec<RayKind>,
    pub a_set: Vec<usize>,
    pub b_set: Vec<usize>,
    pub c_sets: Vec<Vec<usize>>,
    pub c: i64,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl FlagContext {
    /// `<u1, v_j>` for flag position `j`.
    pub fn u1_pairing(&self, j: usize) -> i64 {
        dot(&self.u1, &self.basis.rays[j])
    }

    pub fn u2_pairing(&self, j: usize) -> i64 {
        dot(&self.u2, &self.basis.rays[j])
    }

    pub fn pairing(&self, u: &[i64], j: usize) -> i64 {
        dot(u, &self.basis.rays[j])
    }

    /// `u1` in the basis `v_1^*..v_n^*`, i.e. `(<u1,v_1>, ..., <u1,v_n>)`.
    pub fn u1_dual_coords(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.u1_pairing(j)).collect()
    }

    pub fn u2_dual_coords(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.u2_pairing(j)).collect()
    }

    pub fn p(&self) -> usize {
        self.ls.len()
    }

    pub fn gap(&self, j: usize) -> i64 {
        self.b[j] - self.a[j]
    }
}

/// Default line used for `E_1` when no ray of `tau` jumps.
pub fn default_e1() -> ProjLine {
    ProjLine { rep: (1, 0) }
}

pub fn derive_context(f: &Fan, basis: &FlagBasis, e: &Bundle2) -> Result<FlagContext> {
    derive_context_with(f, basis, e, default_e1())
}

/// As [`derive_context`], with an explicit `E_1` for the case `u1 = u2`.
pub fn derive_context_with(f: &Fan, basis: &FlagBasis, e: &Bundle2, fallback_e1: ProjLine) -> Result<FlagContext> {
    let report = check_compatibility(f, e)?;
    if !report.passed() {
        return Err(Error::IncompatibleData(report.violations.len()));
    }
    let n = basis.n();
    let d = basis.d();
    let filts: Vec<RayFiltration> = basis.to_flag_order(e.filtrations());
    let a: Vec<i64> = filts.iter().map(|x| x.a).collect();
    let b: Vec<i64> = filts.iter().map(RayFiltration::b).collect();

    let tau_lines: Vec<ProjLine> = {
        let mut seen = Vec::new();
        for fl in &filts[..n] {
            if let Some(j) = fl.jump {
                if !seen.contains(&j.line) {
                    seen.push(j.line);
                }
            }
        }
        seen
    };

    let solve = |line: Option<ProjLine>| -> Vec<i64> {
        let vals: Vec<i64> = filts[..n]
            .iter()
            .map(|fl| match (fl.jump, line) {
                (Some(j), Some(l)) if j.line == l => j.b,
                _ => fl.a,
            })
            .collect();
        basis.character_from_tau_values(&vals)
    };

    let (u1, u2, e1) = match tau_lines.as_slice() {
        [] => {
            let u = solve(None);
            (u.clone(), u, fallback_e1)
        }
        [f1] => (solve(Some(*f1)), solve(None), *f1),
        [f1, f2] => {
            let (x, y) = (solve(Some(*f1)), solve(Some(*f2)));
            let diff: Vec<i64> = (0..n).map(|j| dot(&x, &basis.rays[j]) - dot(&y, &basis.rays[j])).collect();
            let x_first = diff.iter().find(|&&t| t != 0).is_none_or(|&t| t > 0);
            if x_first {
                (x, y, *f1)
            } else {
                (y, x, *f2)
            }
        }
        _ => unreachable!("compatibility allows at most two lines on tau"),
    };

    let mut ls: Vec<ProjLine> = Vec::new();
    for fl in &filts {
        if let Some(j) = fl.jump {
            if j.line != e1 && !ls.contains(&j.line) {
                ls.push(j.line);
            }
        }
    }

    let mut kinds = Vec::with_capacity(d);
    let (mut a_set, mut b_set) = (Vec::new(), Vec::new());
    let mut c_sets: Vec<Vec<usize>> = vec![Vec::new(); ls.len()];
    for (pos, fl) in filts.iter().enumerate() {
        let kind = match fl.jump {
            None => RayKind::A,
            Some(j) if j.line == e1 => RayKind::B,
            Some(j) => RayKind::C(ls.iter().position(|l| *l == j.line).unwrap()),
        };
        match kind {
            RayKind::A => a_set.push(pos),
            RayKind::B => b_set.push(pos),
            RayKind::C(h) => c_sets[h].push(pos),
        }
        kinds.push(kind);
    }
    let c = a.iter().zip(&b).fold(1i64, |acc, (x, y)| acc.lcm(&(y - x)));

    Ok(FlagContext {
        n,
        d,
        basis: basis.clone(),
        u1,
        u2,
        e1,
        ls,
        a,
        b,
        kinds,
        a_set,
        b_set,
        c_sets,
        c,
    })
}

/// Ceiling of `p / q` for `q > 0`.
pub fn ceil_div(p: i64, q: i64) -> i64 {
    assert!(q > 0, "ceil_div needs a positive divisor");
    (p + q - 1).div_euclid(q)
}

/// What one ray demands of the `u`-isotypical part of `Sym^m E (x) O(D)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    /// Type-A ray, no constraint.
    Pass,
    /// The isotypical part vanishes.
    Fail,
    /// At least `r` factors must come from the ray's jump line.
    Multiplicity(i64),
}

/// Requirement at flag position `j` for twist `m`, coefficient `m_j` and pairing `<u, v_j>`.
pub fn sym_twist_requirement(ctx: &FlagContext, j: usize, m: i64, m_j: i64, pairing: i64) -> Requirement {
    let t = pairing - ctx.a[j] * m - m_j;
    match ctx.kinds[j] {
        RayKind::A => {
            if t <= 0 {
                Requirement::Pass
            } else {
                Requirement::Fail
            }
        }
        _ => {
            let r = ceil_div(t, ctx.gap(j)).max(0);
            if r > m {
                Requirement::Fail
            } else {
                Requirement::Multiplicity(r)
            }
        }
    }
}
