//! Brute-force section oracle: isotypical dimensions, `h^0`, and valuation vectors.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fan::DivisorClass;
use crate::geometry::{HPolyhedron, LinearInequality};
use crate::klyachko::{sym_twist_requirement, FlagContext, RayKind, Requirement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicalSummand {
    pub u: Vec<i64>,
    pub alpha0: i64,
    /// `alpha_1..alpha_p`.
    pub alphas: Vec<i64>,
    pub dim: i64,
}

fn check_class(ctx: &FlagContext, cls: &DivisorClass) -> Result<()> {
    if cls.coeffs.len() != ctx.d - ctx.n {
        return Err(Error::DimensionMismatch { expected: ctx.d - ctx.n, got: cls.coeffs.len() });
    }
    Ok(())
}

/// Every `u` with `<u, v_j> <= b_j m + m_j` on all rays, lexicographically.
pub fn isotypical_support(ctx: &FlagContext, cls: &DivisorClass) -> Result<Vec<Vec<i64>>> {
    check_class(ctx, cls)?;
    if cls.twist < 0 {
        return Ok(Vec::new());
    }
    let mj = cls.flag_coeffs(ctx.n);
    let rows = (0..ctx.d)
        .map(|j| {
            let neg: Vec<i64> = ctx.basis.rays[j].iter().map(|x| -x).collect();
            LinearInequality::from_ints(&neg, ctx.b[j] * cls.twist + mj[j])
        })
        .collect();
    let p = HPolyhedron::from_inequalities(ctx.n, rows)?;
    let pts = p.lattice_points().map_err(|e| match e {
        Error::UnboundedInput => Error::UnboundedSupport,
        other => other,
    })?;
    Ok(pts.iter().map(|x| x.to_i64().expect("small integer point")).collect())
}

pub fn isotypical_dim(ctx: &FlagContext, cls: &DivisorClass, u: &[i64]) -> IsotypicalSummand {
    let m = cls.twist;
    let mj = cls.flag_coeffs(ctx.n);
    let mut alpha0 = 0;
    let mut alphas = vec![0; ctx.p()];
    let mut failed = m < 0;
    for j in 0..ctx.d {
        if failed {
            break;
        }
        match sym_twist_requirement(ctx, j, m, mj[j], ctx.pairing(u, j)) {
            Requirement::Pass => {}
            Requirement::Fail => failed = true,
            Requirement::Multiplicity(r) => match ctx.kinds[j] {
                RayKind::B => alpha0 = alpha0.max(r),
                RayKind::C(h) => alphas[h] = alphas[h].max(r),
                RayKind::A => unreachable!("type-A rays never carry a multiplicity"),
            },
        }
    }
    let dim = if failed { 0 } else { (m + 1 - alpha0 - alphas.iter().sum::<i64>()).max(0) };
    IsotypicalSummand { u: u.to_vec(), alpha0, alphas, dim }
}

/// Nonzero isotypical summands in support order.
pub fn isotypical_summands(ctx: &FlagContext, cls: &DivisorClass) -> Result<Vec<IsotypicalSummand>> {
    Ok(isotypical_support(ctx, cls)?
        .iter()
        .map(|u| isotypical_dim(ctx, cls, u))
        .filter(|s| s.dim > 0)
        .collect())
}

pub fn h0(ctx: &FlagContext, cls: &DivisorClass) -> Result<i64> {
    Ok(isotypical_summands(ctx, cls)?.iter().map(|s| s.dim).sum())
}

/// Valuation vectors contributed by one summand.
pub fn summand_valuations(ctx: &FlagContext, cls: &DivisorClass, s: &IsotypicalSummand) -> Vec<Vec<i64>> {
    let m = cls.twist;
    (0..s.dim)
        .map(|t| {
            let last = s.alpha0 + t;
            let mut x: Vec<i64> = (0..ctx.n)
                .map(|i| {
                    last * ctx.u1_pairing(i) + (m - last) * ctx.u2_pairing(i) - ctx.pairing(&s.u, i)
                })
                .collect();
            x.push(last);
            x
        })
        .collect()
}

/// The image of `nu` on nonzero sections.
pub fn valuation_set(ctx: &FlagContext, cls: &DivisorClass) -> Result<BTreeSet<Vec<i64>>> {
    let mut out = BTreeSet::new();
    for s in isotypical_summands(ctx, cls)? {
        out.extend(summand_valuations(ctx, cls, &s));
    }
    Ok(out)
}
