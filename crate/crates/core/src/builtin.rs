//! Named example problems.

use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::klyachko::{Bundle2, ProjLine, RayFiltration};

/// A fan with a rank-two bundle on it. Split bundles keep their summand
/// divisors `c1`, `c2` (input ray order, summand lines `(1,0)` and `(0,1)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub fan: Fan,
    pub bundle: Bundle2,
    pub split: Option<(Vec<i64>, Vec<i64>)>,
}

pub const NAMES: [&str; 4] = ["tangent-p2", "split-p1 a b", "hirzebruch e", "pn-sum n"];

/// Tangent bundle of `P^2`: every ray jumps from `E` to its own line at level 1.
pub fn tangent_p2() -> Problem {
    let lines = [(1, 0), (0, 1), (1, 1)];
    let filtrations = lines
        .iter()
        .map(|&(x, y)| RayFiltration::with_jump(0, 1, ProjLine::new(x, y).unwrap()).unwrap())
        .collect();
    Problem {
        name: "tangent-p2".into(),
        fan: Fan::projective_space(2),
        bundle: Bundle2::new(filtrations),
        split: None,
    }
}

fn split_on(name: String, fan: Fan, c1: Vec<i64>, c2: Vec<i64>) -> Problem {
    let bundle = Bundle2::split(&c1, &c2).expect("equal lengths");
    Problem { name, fan, bundle, split: Some((c1, c2)) }
}

/// `O(a) + O(b)` on `P^1`, both twists carried by the second ray.
pub fn split_p1(a: i64, b: i64) -> Problem {
    split_on(format!("split-p1 {a} {b}"), Fan::projective_space(1), vec![0, a], vec![0, b])
}

/// `O + O(-e)` on `P^1`, whose projectivization is the Hirzebruch surface `F_e`.
pub fn hirzebruch(e: i64) -> Problem {
    let mut p = split_p1(0, -e);
    p.name = format!("hirzebruch {e}");
    p
}

/// `O + O(1)` on `P^n`, the twist carried by the last ray.
pub fn pn_sum(n: usize) -> Problem {
    let c1 = vec![0; n + 1];
    let mut c2 = vec![0; n + 1];
    c2[n] = 1;
    split_on(format!("pn-sum {n}"), Fan::projective_space(n), c1, c2)
}

/// Looks up `"tangent-p2"`, `"split-p1 a b"`, `"hirzebruch e"` or `"pn-sum n"`.
pub fn by_name(spec: &str) -> Result<Problem> {
    let parts: Vec<&str> = spec.split_whitespace().collect();
    let int = |s: &str| -> Result<i64> {
        s.parse().map_err(|_| Error::Malformed(format!("expected an integer, got {s:?}")))
    };
    let unknown = || Error::Malformed(format!("unknown example {spec:?}; known: {}", NAMES.join(", ")));
    match parts.as_slice() {
        ["tangent-p2"] => Ok(tangent_p2()),
        ["split-p1", a, b] => Ok(split_p1(int(a)?, int(b)?)),
        ["hirzebruch", e] => Ok(hirzebruch(int(e)?)),
        ["pn-sum", n] => {
            let n = int(n)?;
            if !(1..=4).contains(&n) {
                return Err(Error::Malformed("pn-sum needs 1 <= n <= 4".into()));
            }
            Ok(pn_sum(n as usize))
        }
        _ => Err(unknown()),
    }
}

/// The default instances used by tests and the acceptance suite.
pub fn all_defaults() -> Vec<Problem> {
    vec![tangent_p2(), split_p1(0, 0), split_p1(0, -1), split_p1(1, -1), hirzebruch(1), pn_sum(2)]
}
