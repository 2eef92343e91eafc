//! OFF export of 3-dimensional bodies. Facet cycles are ordered exactly;
//! coordinates are written as decimals.

use std::cmp::Ordering;
use std::fmt::Write;

use num_traits::{Signed, ToPrimitive, Zero};
use okbody_core::geometry::{HPolyhedron, Rat, RatVector};

use crate::CliError;

fn cross(a: &[Rat], b: &[Rat]) -> [Rat; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Counterclockwise order of coplanar points around their centroid, seen
/// from the side `outward` points to.
fn cyclic_order(pts: &[RatVector], idx: &mut [usize], outward: &[Rat]) {
    let k = Rat::from_integer((idx.len() as i64).into());
    let centroid: Vec<Rat> = (0..3).map(|c| idx.iter().map(|&i| pts[i][c].clone()).sum::<Rat>() / &k).collect();
    let rel = |i: usize| -> Vec<Rat> { (0..3).map(|c| &pts[i][c] - &centroid[c]).collect() };
    let r0 = rel(idx[0]);
    // 0 for the half-turn starting at r0, 1 for the other
    let half = |p: &[Rat]| -> u8 {
        let s = dot(&cross(&r0, p), outward);
        if s.is_positive() || (s.is_zero() && dot(&r0, p).is_positive()) {
            0
        } else {
            1
        }
    };
    idx.sort_by(|&i, &j| {
        let (p, q) = (rel(i), rel(j));
        half(&p).cmp(&half(&q)).then_with(|| {
            let s = dot(&cross(&p, &q), outward);
            if s.is_positive() {
                Ordering::Less
            } else if s.is_negative() {
                Ordering::Greater
            } else {
                Ordering::Equal
            }
        })
    });
}

pub fn to_off(vertices: &[RatVector]) -> Result<String, CliError> {
    if vertices.first().is_none_or(|v| v.len() != 3) {
        return Err(CliError::Malformed("OFF export needs a nonempty body in R^3".into()));
    }
    let hull = HPolyhedron::hull_of(3, vertices)?;
    if !hull.equations().is_empty() {
        return Err(CliError::Malformed("OFF export needs a full-dimensional body".into()));
    }
    let mut faces = Vec::new();
    for row in hull.inequalities() {
        let mut idx: Vec<usize> = (0..vertices.len()).filter(|&i| row.eval(&vertices[i]).is_zero()).collect();
        if idx.len() < 3 {
            continue;
        }
        let outward: Vec<Rat> = row.normal.iter().map(|x| -x).collect();
        cyclic_order(vertices, &mut idx, &outward);
        faces.push(idx);
    }
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(out, "{} {} 0", vertices.len(), faces.len()).unwrap();
    for v in vertices {
        let c: Vec<String> = v.iter().map(|x| format!("{}", x.to_f64().unwrap_or(f64::NAN))).collect();
        writeln!(out, "{}", c.join(" ")).unwrap();
    }
    for f in &faces {
        let ids: Vec<String> = f.iter().map(|i| i.to_string()).collect();
        writeln!(out, "{} {}", f.len(), ids.join(" ")).unwrap();
    }
    Ok(out)
}
