//! Problem files: JSON in, validated core types out.

use std::path::Path;

use okbody_core::builtin;
use okbody_core::klyachko::{Bundle2, ProjLine, RayFiltration};
use okbody_core::{normalize_class, DivisorClass, Fan, FlagBasis};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSpec {
    pub dim: usize,
    pub rays: Vec<Vec<i64>>,
    /// 0-based ray indices.
    pub max_cones: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JumpSpec {
    pub b: i64,
    pub line: [i64; 2],
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationSpec {
    pub a: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jump: Option<JumpSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub filtrations: Vec<FiltrationSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlagSpec {
    /// 0-based maximal cone index.
    pub tau: usize,
}

/// `coeffs` has either `d - n` entries (flag order, rays `n+1..d`) or `d`
/// entries (input ray order, normalized on load).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub coeffs: Vec<i64>,
    pub twist: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub fan: FanSpec,
    pub bundle: BundleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flag: Option<FlagSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub classes: Vec<ClassSpec>,
}

impl ProblemFile {
    pub fn from_builtin(p: &builtin::Problem) -> Self {
        let filtrations = p
            .bundle
            .filtrations()
            .iter()
            .map(|f| FiltrationSpec {
                a: f.a,
                jump: f.jump.map(|j| {
                    let (x, y) = j.line.rep();
                    JumpSpec { b: j.b, line: [x, y] }
                }),
            })
            .collect();
        ProblemFile {
            fan: FanSpec { dim: p.fan.dim(), rays: p.fan.rays().to_vec(), max_cones: p.fan.max_cones().to_vec() },
            bundle: BundleSpec { filtrations },
            flag: None,
            classes: Vec::new(),
        }
    }

    pub fn fan(&self) -> Result<Fan, CliError> {
        Ok(Fan::new(self.fan.dim, self.fan.rays.clone(), self.fan.max_cones.clone())?)
    }

    /// Jump lines are normalized to primitive form, with a warning when that changes them.
    pub fn bundle(&self) -> Result<Bundle2, CliError> {
        let filtrations = self
            .bundle
            .filtrations
            .iter()
            .enumerate()
            .map(|(j, f)| match &f.jump {
                None => Ok(RayFiltration::full_drop(f.a)),
                Some(jump) => {
                    let line = ProjLine::new(jump.line[0], jump.line[1])?;
                    if line.rep() != (jump.line[0], jump.line[1]) {
                        eprintln!(
                            "warning: ray {} (1-based): line {:?} normalized to {line}",
                            j + 1,
                            jump.line
                        );
                    }
                    Ok(RayFiltration::with_jump(f.a, jump.b, line)?)
                }
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Bundle2::new(filtrations))
    }

    pub fn classes(&self, fan: &Fan, basis: &FlagBasis) -> Result<Vec<DivisorClass>, CliError> {
        let short = basis.d() - basis.n();
        self.classes
            .iter()
            .map(|c| {
                if c.coeffs.len() == short {
                    Ok(DivisorClass::new(c.coeffs.clone(), c.twist))
                } else if c.coeffs.len() == basis.d() {
                    Ok(normalize_class(fan, basis, &c.coeffs, c.twist)?)
                } else {
                    Err(CliError::Malformed(format!(
                        "class has {} coefficients, expected {short} (flag order) or {} (input order)",
                        c.coeffs.len(),
                        basis.d()
                    )))
                }
            })
            .collect()
    }
}

/// Reads `input` as a problem file, or failing that as a builtin name.
pub fn load(input: &str) -> Result<ProblemFile, CliError> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Malformed(format!("cannot read {input}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{input}: {e}")));
    }
    match builtin::by_name(input) {
        Ok(p) => Ok(ProblemFile::from_builtin(&p)),
        Err(e) => Err(CliError::Malformed(format!("{input:?} is neither a readable file nor a builtin ({e})"))),
    }
}

/// Parses `"m_{n+1},...,m_d;w"`.
pub fn parse_class(s: &str, expected: usize) -> Result<DivisorClass, CliError> {
    let bad = |why: &str| CliError::Malformed(format!("class {s:?}: {why}; expected \"m_(n+1),...,m_d;w\""));
    let (coeffs, twist) = s.split_once(';').ok_or_else(|| bad("missing ';'"))?;
    let twist: i64 = twist.trim().parse().map_err(|_| bad("twist is not an integer"))?;
    let coeffs: Vec<i64> = if coeffs.trim().is_empty() {
        Vec::new()
    } else {
        coeffs
            .split(',')
            .map(|c| c.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad("coefficient is not an integer"))?
    };
    if coeffs.len() != expected {
        return Err(bad(&format!("{} coefficients given, {expected} needed", coeffs.len())));
    }
    Ok(DivisorClass::new(coeffs, twist))
}
