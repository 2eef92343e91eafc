//! `okb`: Okounkov bodies of projectivized rank-two toric bundles from the command line.
//!
//! Exit codes: 0 ok, 1 malformed input or unknown name, 2 validation failure,
//! 3 admissible-set cap exceeded, 4 a requested check failed.

mod off;
mod problem;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use okbody_core::geometry::{fmt_rat, poly_equal};
use okbody_core::klyachko::split_summands;
use okbody_core::okounkov::{global_cone_capped, DEFAULT_CAP};
use okbody_core::sections::isotypical_summands;
use okbody_core::{
    builtin, check_against_oracle, check_compatibility, derive_context, fiber_body, select_flag, split_model_body,
    validate_fan, valuation_set, Bundle2, DivisorClass, Fan, FlagContext, GlobalCone,
};
use rayon::prelude::*;
use serde::Serialize;

use problem::{load, parse_class, ProblemFile};
use report::*;

#[derive(Debug)]
pub enum CliError {
    Malformed(String),
    Validation(String),
    Cap(String),
    CheckFailed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Malformed(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Cap(_) => 3,
            CliError::CheckFailed(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Malformed(m) | CliError::Validation(m) | CliError::Cap(m) | CliError::CheckFailed(m) => m,
        }
    }
}

impl From<okbody_core::Error> for CliError {
    fn from(e: okbody_core::Error) -> Self {
        use okbody_core::Error as E;
        match e {
            E::CapExceeded { .. } => CliError::Cap(e.to_string()),
            E::IncompatibleData(_) | E::UnboundedSupport | E::NotUnimodular => CliError::Validation(e.to_string()),
            _ => CliError::Malformed(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "okb", version, about = "Global Okounkov bodies of projectivized rank-two toric vector bundles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Input {
    /// Problem file (JSON) or a builtin name such as "tangent-p2" or "split-p1 0 -1".
    input: String,
    /// Maximal cone used as tau (0-based); overrides the file.
    #[arg(long)]
    tau: Option<usize>,
}

#[derive(Args)]
struct Output {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Classes {
    /// Class "m_(n+1),...,m_d;w" with coefficients in flag order; repeatable.
    /// Defaults to the classes in the problem file.
    #[arg(long = "class", allow_hyphen_values = true)]
    class: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the fan and the compatibility of the filtrations.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Also require a strictly convex support function.
        #[arg(long)]
        projective: bool,
    },
    /// Print the flag context.
    Context {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Print the global cone with row provenance.
    Cone {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
        /// Bound on the number of C-multi admissible sets.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        /// Drop redundant rows.
        #[arg(long)]
        prune: bool,
    },
    /// Fiber bodies of the given classes.
    Body {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        classes: Classes,
        #[command(flatten)]
        output: Output,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(long)]
        vertices: bool,
        /// Exact volume of the body and of the class.
        #[arg(long)]
        volume: bool,
        #[arg(long)]
        lattice: bool,
        /// Compare against the section oracle (and the split model when it applies).
        #[arg(long)]
        check: bool,
        /// Write 3-dimensional bodies as OFF; several classes get "-k" suffixes.
        #[arg(long)]
        off: Option<PathBuf>,
    },
    /// Section dimensions with their isotypical summands.
    H0 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        classes: Classes,
        #[command(flatten)]
        output: Output,
    },
    /// Valuation vectors of sections.
    Valuations {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        classes: Classes,
        #[command(flatten)]
        output: Output,
    },
    /// Print a builtin problem file.
    Example {
        /// One of: tangent-p2, "split-p1 a b", "hirzebruch e", "pn-sum n".
        #[arg(num_args = 1.., allow_hyphen_values = true, required = true)]
        name: Vec<String>,
    },
}

struct Loaded {
    file: ProblemFile,
    fan: Fan,
    bundle: Bundle2,
}

fn load_checked(input: &Input) -> Result<Loaded, CliError> {
    let file = load(&input.input)?;
    let fan = file.fan()?;
    let bundle = file.bundle()?;
    let text = validation_text(&fan, &bundle, false)?;
    if let Some(t) = text.failure {
        return Err(CliError::Validation(t));
    }
    Ok(Loaded { file, fan, bundle })
}

struct Validation {
    report: String,
    failure: Option<String>,
}

fn validation_text(fan: &Fan, bundle: &Bundle2, projective: bool) -> Result<Validation, CliError> {
    let fr = validate_fan(fan, projective);
    let cr = check_compatibility(fan, bundle)?;
    let mut lines = vec![format!(
        "fan: {} rays in dimension {}, {} maximal cones (indices below are 1-based)",
        fan.num_rays(),
        fan.dim(),
        fan.max_cones().len()
    )];
    lines.push(format!("  smooth: {}", fr.smooth));
    lines.push(format!("  complete: {}", fr.complete));
    if let Some(p) = fr.projective {
        lines.push(format!("  projective: {p}"));
    }
    for f in &fr.failures {
        lines.push(format!("  FAIL {}", one_based_failure(f)));
    }
    lines.push(format!("bundle: compatible: {}", cr.passed()));
    for v in &cr.violations {
        let ls: Vec<String> = v.lines.iter().map(|l| l.to_string()).collect();
        lines.push(format!("  FAIL cone {} carries {} distinct jump lines: {}", v.cone + 1, ls.len(), ls.join(", ")));
    }
    let ok = fr.passed() && cr.passed();
    lines.push(if ok { "PASS".into() } else { "FAIL".into() });
    let report = lines.join("\n");
    Ok(Validation { failure: (!ok).then(|| report.clone()), report })
}

fn one_based_failure(f: &okbody_core::fan::FanFailure) -> String {
    use okbody_core::fan::FanFailure as F;
    let inc = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    match f {
        F::NonPrimitiveRay { ray } => format!("ray {} is not primitive", ray + 1),
        F::DuplicateRay { first, second } => format!("rays {} and {} coincide", first + 1, second + 1),
        F::NonSmoothCone { cone, det } => format!("cone {} is not smooth (det = {det})", cone + 1),
        F::FacetNotShared { facet, cones } => {
            format!("facet with rays {:?} lies in {} maximal cone(s) {:?}, expected 2", inc(facet), cones.len(), inc(cones))
        }
        F::SameSideFacet { facet, cones } => {
            format!("cones {:?} lie on the same side of the facet with rays {:?}", inc(cones), inc(facet))
        }
        other => other.to_string(),
    }
}

fn context_of(l: &Loaded, tau: Option<usize>) -> Result<FlagContext, CliError> {
    let tau = tau.or(l.file.flag.as_ref().map(|f| f.tau));
    let basis = select_flag(&l.fan, tau)?;
    Ok(derive_context(&l.fan, &basis, &l.bundle)?)
}

fn classes_of(l: &Loaded, ctx: &FlagContext, c: &Classes) -> Result<Vec<DivisorClass>, CliError> {
    let out = if c.class.is_empty() {
        l.file.classes(&l.fan, &ctx.basis)?
    } else {
        c.class.iter().map(|s| parse_class(s, ctx.d - ctx.n)).collect::<Result<_, _>>()?
    };
    if out.is_empty() {
        return Err(CliError::Malformed("no classes: pass --class or list them in the problem file".into()));
    }
    let order: Vec<String> = ctx.basis.ray_order.iter().map(|r| (r + 1).to_string()).collect();
    eprintln!(
        "flag order: input rays {} (1-based); class coefficients refer to flag positions {}..{}",
        order.join(" "),
        ctx.n + 1,
        ctx.d
    );
    Ok(out)
}

fn emit<T: Serialize>(value: &T, out: &Option<PathBuf>) -> Result<(), CliError> {
    let value = serde_json::to_value(value).map_err(|e| CliError::Malformed(e.to_string()))?;
    let text = render(&value);
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

struct BodyFlags {
    vertices: bool,
    volume: bool,
    lattice: bool,
    check: bool,
    off: bool,
}

fn body_block(
    l: &Loaded,
    ctx: &FlagContext,
    gc: &GlobalCone,
    cls: &DivisorClass,
    fl: &BodyFlags,
) -> Result<(BodyOut, Option<String>), CliError> {
    let body = fiber_body(gc, cls)?;
    let inequalities = body.body.canonicalized().inequalities().iter().map(InequalityOut::from).collect();
    let mut out = BodyOut {
        class: cls.into(),
        inequalities,
        vertices: None,
        dim: None,
        volume: None,
        vol_class: None,
        big: None,
        lattice_points: None,
        checks: None,
    };
    let mut off_text = None;
    if fl.vertices || fl.volume || fl.off {
        let with = body.clone().with_vertices()?;
        let verts = with.verts.as_ref().unwrap();
        if fl.vertices {
            out.vertices = Some(verts.vertices().iter().map(rat_vec).collect());
            out.dim = Some(verts.dim());
        }
        if fl.volume {
            let v = verts.volume();
            let fact: i64 = (1..=(ctx.n as i64 + 1)).product();
            out.vol_class = Some(fmt_rat(&(&v * okbody_core::geometry::rat(fact))));
            out.volume = Some(fmt_rat(&v));
            out.big = Some(verts.dim() == ctx.n as i64 + 1);
        }
        if fl.off {
            off_text = Some(off::to_off(verts.vertices())?);
        }
    }
    if fl.lattice {
        out.lattice_points = Some(body.lattice_points()?.iter().map(rat_vec).collect());
    }
    if fl.check {
        if cls.twist < 0 {
            return Err(CliError::Malformed(format!("--check needs a nonnegative twist, got class {cls}")));
        }
        let rep = check_against_oracle(gc, ctx, cls)?;
        let split = match split_summands(&l.bundle, &ctx.e1) {
            Some((c1, c2)) => {
                let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
                let model = split_model_body(&ctx.basis, &neg(&c1), &neg(&c2), cls)?;
                Some(poly_equal(&model, &body.body)?)
            }
            None => None,
        };
        out.checks = Some(ChecksOut::new(rep, split));
    }
    Ok((out, off_text))
}

fn off_path(base: &std::path::Path, k: usize, total: usize) -> PathBuf {
    if total == 1 {
        return base.to_path_buf();
    }
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}-{k}.{}", ext.to_string_lossy()),
        None => format!("{stem}-{k}"),
    };
    base.with_file_name(name)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Validate { input, projective } => {
            let file = load(&input.input)?;
            let fan = file.fan()?;
            let bundle = file.bundle()?;
            let v = validation_text(&fan, &bundle, projective)?;
            println!("{}", v.report);
            match v.failure {
                Some(_) => Err(CliError::Validation(String::new())),
                None => Ok(()),
            }
        }
        Cmd::Context { input, output } => {
            let l = load_checked(&input)?;
            let ctx = context_of(&l, input.tau)?;
            emit(&ResultFile { context: Some(ContextOut::new(&ctx)), ..Default::default() }, &output.out)
        }
        Cmd::Cone { input, output, cap, prune } => {
            let l = load_checked(&input)?;
            let ctx = context_of(&l, input.tau)?;
            let mut gc = global_cone_capped(&ctx, cap)?;
            if prune {
                gc = gc.pruned()?;
            }
            let rf = ResultFile {
                context: Some(ContextOut::new(&ctx)),
                cone: Some(ConeOut::new(&ctx, &gc)),
                ..Default::default()
            };
            emit(&rf, &output.out)
        }
        Cmd::Body { input, classes, output, cap, vertices, volume, lattice, check, off } => {
            let l = load_checked(&input)?;
            let ctx = context_of(&l, input.tau)?;
            let cls = classes_of(&l, &ctx, &classes)?;
            let gc = global_cone_capped(&ctx, cap)?;
            let fl = BodyFlags { vertices, volume, lattice, check, off: off.is_some() };
            let blocks: Vec<(BodyOut, Option<String>)> =
                cls.par_iter().map(|c| body_block(&l, &ctx, &gc, c, &fl)).collect::<Result<_, _>>()?;
            let failed: Vec<String> = blocks
                .iter()
                .filter(|(b, _)| b.checks.as_ref().is_some_and(|c| !c.passed))
                .map(|(b, _)| format!("{};{}", join(&b.class.coeffs), b.class.twist))
                .collect();
            if let Some(base) = &off {
                for (k, (_, text)) in blocks.iter().enumerate() {
                    let p = off_path(base, k + 1, blocks.len());
                    std::fs::write(&p, text.as_deref().unwrap_or_default())
                        .map_err(|e| CliError::Malformed(format!("cannot write {}: {e}", p.display())))?;
                }
            }
            let bodies = blocks.into_iter().map(|(b, _)| b).collect();
            let rf = ResultFile {
                context: Some(ContextOut::new(&ctx)),
                cone: Some(ConeOut::new(&ctx, &gc)),
                bodies: Some(bodies),
                ..Default::default()
            };
            emit(&rf, &output.out)?;
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::CheckFailed(format!("check failed for class(es) {}", failed.join(" "))))
            }
        }
        Cmd::H0 { input, classes, output } => {
            let l = load_checked(&input)?;
            let ctx = context_of(&l, input.tau)?;
            let cls = classes_of(&l, &ctx, &classes)?;
            let sections = cls
                .par_iter()
                .map(|c| {
                    let summands = isotypical_summands(&ctx, c)?;
                    Ok(H0Out {
                        class: c.into(),
                        h0: summands.iter().map(|s| s.dim).sum(),
                        summands: summands.iter().map(SummandOut::from).collect(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            emit(&ResultFile { sections: Some(sections), ..Default::default() }, &output.out)
        }
        Cmd::Valuations { input, classes, output } => {
            let l = load_checked(&input)?;
            let ctx = context_of(&l, input.tau)?;
            let cls = classes_of(&l, &ctx, &classes)?;
            let vals = cls
                .par_iter()
                .map(|c| {
                    let v: Vec<Vec<i64>> = valuation_set(&ctx, c)?.into_iter().collect();
                    Ok(ValuationsOut { class: c.into(), count: v.len(), valuations: v })
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            emit(&ResultFile { valuations: Some(vals), ..Default::default() }, &output.out)
        }
        Cmd::Example { name } => {
            let p = builtin::by_name(&name.join(" "))?;
            emit(&ProblemFile::from_builtin(&p), &None)
        }
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("OKB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Malformed(format!("OKB_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Malformed(e.to_string()))
}

fn main() -> ExitCode {
    // clap reports usage errors with code 2, which is reserved for validation failures
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !e.message().is_empty() {
                eprintln!("error: {}", e.message());
            }
            ExitCode::from(e.code())
        }
    }
}
