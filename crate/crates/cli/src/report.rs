//! JSON result blocks. Rationals are `"p/q"` strings; indices are 0-based.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use okbody_core::geometry::{fmt_rat, LinearInequality, RatVector};
use okbody_core::okounkov::{coord_names, CheckReport};
use okbody_core::{DivisorClass, FlagContext, GlobalCone, IsotypicalSummand};
use serde::Serialize;
use serde_json::Value;

fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn rat_vec(v: &RatVector) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

#[derive(Serialize)]
pub struct ContextOut {
    /// `ray_order[k]` is the input ray at flag position `k`.
    pub ray_order: Vec<usize>,
    pub tau: usize,
    pub u1: Vec<i64>,
    pub u2: Vec<i64>,
    /// `u1`, `u2` as pairings with the rays of tau.
    pub u1_dual: Vec<i64>,
    pub u2_dual: Vec<i64>,
    #[serde(rename = "E1")]
    pub e1: [i64; 2],
    #[serde(rename = "Ls")]
    pub ls: Vec<[i64; 2]>,
    #[serde(rename = "A")]
    pub a_set: Vec<usize>,
    #[serde(rename = "B")]
    pub b_set: Vec<usize>,
    #[serde(rename = "C")]
    pub c_sets: Vec<Vec<usize>>,
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub c: i64,
}

impl ContextOut {
    pub fn new(ctx: &FlagContext) -> Self {
        let line = |l: &okbody_core::ProjLine| {
            let (x, y) = l.rep();
            [x, y]
        };
        ContextOut {
            ray_order: ctx.basis.ray_order.clone(),
            tau: ctx.basis.tau,
            u1: ctx.u1.clone(),
            u2: ctx.u2.clone(),
            u1_dual: ctx.u1_dual_coords(),
            u2_dual: ctx.u2_dual_coords(),
            e1: line(&ctx.e1),
            ls: ctx.ls.iter().map(line).collect(),
            a_set: ctx.a_set.clone(),
            b_set: ctx.b_set.clone(),
            c_sets: ctx.c_sets.clone(),
            a: ctx.a.clone(),
            b: ctx.b.clone(),
            c: ctx.c,
        }
    }
}

#[derive(Serialize)]
pub struct ConeOut {
    pub coords: Vec<String>,
    /// `row . coords >= 0`.
    pub inequalities: Vec<Vec<Value>>,
    /// Admissible sets use 1-based flag positions.
    pub provenance: Vec<String>,
}

impl ConeOut {
    pub fn new(ctx: &FlagContext, gc: &GlobalCone) -> Self {
        ConeOut {
            coords: coord_names(ctx),
            inequalities: gc.integer_rows().iter().map(|r| r.iter().map(int_value).collect()).collect(),
            provenance: gc.provenance.iter().map(|p| p.to_string()).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct ClassOut {
    /// Flag order, rays `n+1..d`.
    pub coeffs: Vec<i64>,
    pub twist: i64,
}

impl From<&DivisorClass> for ClassOut {
    fn from(c: &DivisorClass) -> Self {
        ClassOut { coeffs: c.coeffs.clone(), twist: c.twist }
    }
}

/// `normal . x + constant >= 0`.
#[derive(Serialize)]
pub struct InequalityOut {
    pub normal: Vec<String>,
    pub constant: String,
}

impl From<&LinearInequality> for InequalityOut {
    fn from(r: &LinearInequality) -> Self {
        InequalityOut { normal: rat_vec(&r.normal), constant: fmt_rat(&r.constant) }
    }
}

#[derive(Serialize)]
pub struct ChecksOut {
    pub h0: i64,
    pub valuations: usize,
    pub lattice_points: usize,
    pub cardinality: bool,
    pub containment: bool,
    /// `null` when the class is not divisible by `c`.
    pub level_c_equality: Option<bool>,
    /// `null` when the bundle is not split with `E1` as a summand fiber.
    pub split_model: Option<bool>,
    pub outside_body: Vec<Vec<i64>>,
    pub unreached: Vec<Vec<i64>>,
    pub passed: bool,
}

impl ChecksOut {
    pub fn new(r: CheckReport, split_model: Option<bool>) -> Self {
        let passed = r.passed() && split_model != Some(false);
        ChecksOut {
            h0: r.h0,
            valuations: r.valuations,
            lattice_points: r.lattice_points,
            cardinality: r.cardinality,
            containment: r.containment,
            level_c_equality: r.level_c_equality,
            split_model,
            outside_body: r.outside_body,
            unreached: r.unreached,
            passed,
        }
    }
}

#[derive(Serialize)]
pub struct BodyOut {
    pub class: ClassOut,
    pub inequalities: Vec<InequalityOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vol_class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lattice_points: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<ChecksOut>,
}

#[derive(Serialize)]
pub struct SummandOut {
    pub u: Vec<i64>,
    pub alpha0: i64,
    pub alphas: Vec<i64>,
    pub dim: i64,
}

impl From<&IsotypicalSummand> for SummandOut {
    fn from(s: &IsotypicalSummand) -> Self {
        SummandOut { u: s.u.clone(), alpha0: s.alpha0, alphas: s.alphas.clone(), dim: s.dim }
    }
}

#[derive(Serialize)]
pub struct H0Out {
    pub class: ClassOut,
    pub h0: i64,
    pub summands: Vec<SummandOut>,
}

#[derive(Serialize)]
pub struct ValuationsOut {
    pub class: ClassOut,
    pub count: usize,
    pub valuations: Vec<Vec<i64>>,
}

#[derive(Serialize, Default)]
pub struct ResultFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub context: Option<ContextOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bodies: Option<Vec<BodyOut>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sections: Option<Vec<H0Out>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuations: Option<Vec<ValuationsOut>>,
}

/// Pretty JSON with arrays of scalars kept on one line.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    write_value(v, 0, &mut out);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(v: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            out.push('[');
            out.push_str(&parts.join(", "));
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&Value::from(k.as_str()).to_string());
                out.push_str(": ");
                write_value(x, depth + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}
