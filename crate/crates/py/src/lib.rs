//! Python bindings: problems, flag contexts, global cones and fiber bodies.

use num_bigint::BigInt;
use num_rational::BigRational;
use okbody_core::builtin;
use okbody_core::fan::FanFailure;
use okbody_core::geometry::{fmt_rat, parse_rat, RatVector};
use okbody_core::klyachko::{split_summands, Bundle2, ProjLine, RayFiltration};
use okbody_core::okounkov::{self, Comparison, DEFAULT_CAP};
use okbody_core::{
    check_against_oracle, check_compatibility, derive_context, fiber_body, h0, normalize_class, select_flag,
    split_model_body, validate_fan, valuation_set, DivisorClass, Fan, FlagContext, GlobalCone,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(okbody, OkbodyError, PyValueError);
create_exception!(okbody, CapExceededError, OkbodyError);

fn err(e: okbody_core::Error) -> PyErr {
    match e {
        okbody_core::Error::CapExceeded { .. } => CapExceededError::new_err(e.to_string()),
        other => OkbodyError::new_err(other.to_string()),
    }
}

fn rats(v: &RatVector) -> Vec<BigRational> {
    v.entries().to_vec()
}

/// A fan together with a rank-two bundle given by Klyachko filtrations.
#[pyclass(frozen, skip_from_py_object, module = "okbody")]
#[derive(Clone)]
struct Problem {
    fan: Fan,
    bundle: Bundle2,
}

#[pymethods]
impl Problem {
    /// `filtrations[j]` is `(a,)` for a full drop at `a`, or `(a, b, (x, y))`
    /// for a jump to the line spanned by `(x, y)` between `a` and `b`.
    #[new]
    fn new(rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>, filtrations: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let dim = rays.first().map_or(0, Vec::len);
        let fan = Fan::new(dim, rays, max_cones).map_err(err)?;
        let filtrations = filtrations
            .iter()
            .map(|f| {
                if let Ok((a,)) = f.extract::<(i64,)>() {
                    return Ok(RayFiltration::full_drop(a));
                }
                let (a, b, (x, y)) = f.extract::<(i64, i64, (i64, i64))>()?;
                RayFiltration::with_jump(a, b, ProjLine::new(x, y).map_err(err)?).map_err(err)
            })
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Problem { fan, bundle: Bundle2::new(filtrations) })
    }

    /// `"tangent-p2"`, `"split-p1 a b"`, `"hirzebruch e"` or `"pn-sum n"`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let p = builtin::by_name(name).map_err(err)?;
        Ok(Problem { fan: p.fan, bundle: p.bundle })
    }

    #[getter]
    fn rays(&self) -> Vec<Vec<i64>> {
        self.fan.rays().to_vec()
    }

    #[getter]
    fn max_cones(&self) -> Vec<Vec<usize>> {
        self.fan.max_cones().to_vec()
    }

    /// `(passed, failures)` with human-readable failure strings (0-based indices).
    #[pyo3(signature = (projective = false))]
    fn validate(&self, projective: bool) -> PyResult<(bool, Vec<String>)> {
        let fr = validate_fan(&self.fan, projective);
        let cr = check_compatibility(&self.fan, &self.bundle).map_err(err)?;
        let mut failures: Vec<String> = fr.failures.iter().map(FanFailure::to_string).collect();
        failures.extend(cr.violations.iter().map(|v| format!("cone {} carries {} jump lines", v.cone, v.lines.len())));
        Ok((failures.is_empty(), failures))
    }

    #[pyo3(signature = (tau = None))]
    fn context(&self, tau: Option<usize>) -> PyResult<Context> {
        let basis = select_flag(&self.fan, tau).map_err(err)?;
        let ctx = derive_context(&self.fan, &basis, &self.bundle).map_err(err)?;
        Ok(Context { problem: self.clone(), ctx })
    }

    fn __repr__(&self) -> String {
        format!("Problem(rays={}, dim={})", self.fan.num_rays(), self.fan.dim())
    }
}

/// Derived flag data. Per-ray lists are in flag order, positions 0-based.
#[pyclass(frozen, module = "okbody")]
struct Context {
    problem: Problem,
    ctx: FlagContext,
}

impl Context {
    fn class(&self, coeffs: Vec<i64>, twist: i64) -> PyResult<DivisorClass> {
        let short = self.ctx.d - self.ctx.n;
        if coeffs.len() == short {
            Ok(DivisorClass::new(coeffs, twist))
        } else if coeffs.len() == self.ctx.d {
            normalize_class(&self.problem.fan, &self.ctx.basis, &coeffs, twist).map_err(err)
        } else {
            Err(OkbodyError::new_err(format!(
                "expected {short} coefficients (flag order) or {} (input order), got {}",
                self.ctx.d,
                coeffs.len()
            )))
        }
    }
}

fn line(l: &ProjLine) -> (i64, i64) {
    l.rep()
}

#[pymethods]
impl Context {
    #[getter]
    fn n(&self) -> usize {
        self.ctx.n
    }
    #[getter]
    fn d(&self) -> usize {
        self.ctx.d
    }
    #[getter]
    fn ray_order(&self) -> Vec<usize> {
        self.ctx.basis.ray_order.clone()
    }
    #[getter]
    fn u1(&self) -> Vec<i64> {
        self.ctx.u1.clone()
    }
    #[getter]
    fn u2(&self) -> Vec<i64> {
        self.ctx.u2.clone()
    }
    #[getter]
    fn e1(&self) -> (i64, i64) {
        line(&self.ctx.e1)
    }
    #[getter]
    fn ls(&self) -> Vec<(i64, i64)> {
        self.ctx.ls.iter().map(line).collect()
    }
    #[getter]
    fn a_set(&self) -> Vec<usize> {
        self.ctx.a_set.clone()
    }
    #[getter]
    fn b_set(&self) -> Vec<usize> {
        self.ctx.b_set.clone()
    }
    #[getter]
    fn c_sets(&self) -> Vec<Vec<usize>> {
        self.ctx.c_sets.clone()
    }
    #[getter]
    fn a(&self) -> Vec<i64> {
        self.ctx.a.clone()
    }
    #[getter]
    fn b(&self) -> Vec<i64> {
        self.ctx.b.clone()
    }
    #[getter]
    fn c(&self) -> i64 {
        self.ctx.c
    }

    /// Labels like `"C{2,3}"` with 1-based flag positions.
    fn admissible_sets(&self) -> PyResult<Vec<String>> {
        Ok(okounkov::admissible_sets(&self.ctx).map_err(err)?.iter().map(|s| s.to_string()).collect())
    }

    #[pyo3(signature = (cap = DEFAULT_CAP))]
    fn cone(slf: Py<Self>, cap: u128) -> PyResult<Cone> {
        let gc = okounkov::global_cone_capped(&slf.get().ctx, cap).map_err(err)?;
        Ok(Cone { context: slf, gc })
    }

    fn h0(&self, coeffs: Vec<i64>, twist: i64) -> PyResult<i64> {
        h0(&self.ctx, &self.class(coeffs, twist)?).map_err(err)
    }

    /// Sorted valuation vectors.
    fn valuations(&self, coeffs: Vec<i64>, twist: i64) -> PyResult<Vec<Vec<i64>>> {
        Ok(valuation_set(&self.ctx, &self.class(coeffs, twist)?).map_err(err)?.into_iter().collect())
    }

    fn __repr__(&self) -> String {
        format!("Context(u1={:?}, u2={:?}, E1={}, c={})", self.ctx.u1, self.ctx.u2, self.ctx.e1, self.ctx.c)
    }
}

/// The global cone; rows mean `row . coords >= 0`.
#[pyclass(frozen, module = "okbody")]
struct Cone {
    context: Py<Context>,
    gc: GlobalCone,
}

#[pymethods]
impl Cone {
    #[getter]
    fn coords(&self) -> Vec<String> {
        okounkov::coord_names(&self.context.get().ctx)
    }

    #[getter]
    fn rows(&self) -> Vec<Vec<BigInt>> {
        self.gc.integer_rows()
    }

    #[getter]
    fn provenance(&self) -> Vec<String> {
        self.gc.provenance.iter().map(|p| p.to_string()).collect()
    }

    fn pruned(&self, py: Python<'_>) -> PyResult<Cone> {
        Ok(Cone { context: self.context.clone_ref(py), gc: self.gc.pruned().map_err(err)? })
    }

    /// Fiber over a class: `coeffs` in flag order (`d - n` entries) or input order (`d`).
    fn body(&self, py: Python<'_>, coeffs: Vec<i64>, twist: i64) -> PyResult<Body> {
        let cls = self.context.get().class(coeffs, twist)?;
        let body = fiber_body(&self.gc, &cls).map_err(err)?;
        Ok(Body { context: self.context.clone_ref(py), gc: self.gc.clone(), cls, body })
    }

    fn __len__(&self) -> usize {
        self.gc.rows().len()
    }
}

#[pyclass(frozen, module = "okbody")]
struct Body {
    context: Py<Context>,
    gc: GlobalCone,
    cls: DivisorClass,
    body: okounkov::OkounkovBody,
}

#[pymethods]
impl Body {
    /// `(coeffs in flag order, twist)`.
    #[getter]
    fn divisor_class(&self) -> (Vec<i64>, i64) {
        (self.cls.coeffs.clone(), self.cls.twist)
    }

    /// `(normal, constant)` pairs meaning `normal . x + constant >= 0`.
    fn inequalities(&self) -> Vec<(Vec<BigRational>, BigRational)> {
        self.body.body.canonicalized().inequalities().iter().map(|r| (rats(&r.normal), r.constant.clone())).collect()
    }

    /// Lexicographically sorted vertices as `Fraction`s.
    fn vertices(&self) -> PyResult<Vec<Vec<BigRational>>> {
        let v = self.body.body.vertices().map_err(err)?;
        Ok(v.vertices().iter().map(rats).collect())
    }

    fn volume(&self) -> PyResult<BigRational> {
        Ok(self.body.body.vertices().map_err(err)?.volume())
    }

    /// `(n+1)!` times the body volume.
    fn vol_class(&self) -> PyResult<BigRational> {
        okounkov::vol_of_class(&self.gc, &self.cls).map_err(err)
    }

    fn is_big(&self) -> PyResult<bool> {
        okounkov::is_big(&self.gc, &self.cls).map_err(err)
    }

    fn lattice_points(&self) -> PyResult<Vec<Vec<BigRational>>> {
        Ok(self.body.lattice_points().map_err(err)?.iter().map(rats).collect())
    }

    fn contains(&self, point: Vec<BigRational>) -> PyResult<bool> {
        self.body.body.contains(&RatVector::new(point)).map_err(err)
    }

    /// Oracle comparison; `split_model` is `None` unless the bundle splits with `E1` as a summand fiber.
    fn check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = self.context.get();
        let rep = check_against_oracle(&self.gc, &c.ctx, &self.cls).map_err(err)?;
        let split = match split_summands(&c.problem.bundle, &c.ctx.e1) {
            Some((c1, c2)) => {
                let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
                let model = split_model_body(&c.ctx.basis, &neg(&c1), &neg(&c2), &self.cls).map_err(err)?;
                Some(okbody_core::geometry::poly_equal(&model, &self.body.body).map_err(err)?)
            }
            None => None,
        };
        let d = PyDict::new(py);
        d.set_item("h0", rep.h0)?;
        d.set_item("valuations", rep.valuations)?;
        d.set_item("lattice_points", rep.lattice_points)?;
        d.set_item("cardinality", rep.cardinality)?;
        d.set_item("containment", rep.containment)?;
        d.set_item("level_c_equality", rep.level_c_equality)?;
        d.set_item("split_model", split)?;
        d.set_item("passed", rep.passed() && split != Some(false))?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("Body(class={})", self.cls)
    }
}

/// `"holds"`, `"violated"` or `"undecided"` for `v12^(1/k) >= v1^(1/k) + v2^(1/k)`.
#[pyfunction]
fn compare_log_concave(v1: BigRational, v2: BigRational, v12: BigRational, k: u32) -> PyResult<&'static str> {
    if k == 0 || [&v1, &v2, &v12].iter().any(|v| *v < &BigRational::from_integer(0.into())) {
        return Err(OkbodyError::new_err("volumes must be nonnegative and k positive"));
    }
    Ok(match okounkov::compare_log_concave(&v1, &v2, &v12, k) {
        Comparison::Holds => "holds",
        Comparison::Violated => "violated",
        Comparison::Undecided => "undecided",
    })
}

/// Renders a rational as `"p"` or `"p/q"`; parses the same form back.
#[pyfunction]
fn format_rational(r: BigRational) -> String {
    fmt_rat(&r)
}

#[pyfunction]
fn parse_rational(s: &str) -> PyResult<BigRational> {
    parse_rat(s).ok_or_else(|| OkbodyError::new_err(format!("not a rational: {s:?}")))
}

#[pymodule]
pub fn okbody(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Problem>()?;
    m.add_class::<Context>()?;
    m.add_class::<Cone>()?;
    m.add_class::<Body>()?;
    m.add_function(wrap_pyfunction!(compare_log_concave, m)?)?;
    m.add_function(wrap_pyfunction!(format_rational, m)?)?;
    m.add_function(wrap_pyfunction!(parse_rational, m)?)?;
    m.add("OkbodyError", m.py().get_type::<OkbodyError>())?;
    m.add("CapExceededError", m.py().get_type::<CapExceededError>())?;
    m.add("BUILTINS", builtin::NAMES.to_vec())?;
    Ok(())
}
