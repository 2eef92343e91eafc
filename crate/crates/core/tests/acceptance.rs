//! One PASS/FAIL line per acceptance criterion, with its time budget.
//! Tolerances are exact equality throughout; volumes are exact rationals.

mod common;

use std::time::{Duration, Instant};

use okbody_core::geometry::{poly_equal, rat, HPolyhedron, LinearInequality};
use okbody_core::klyachko::{default_e1, Bundle2, ProjLine, RayFiltration};
use okbody_core::okounkov::{compare_log_concave, Comparison};
use okbody_core::{
    admissible_sets, base_polytope, builtin, check_against_oracle, check_compatibility, derive_context,
    derive_context_with, fiber_body, global_cone, h0, is_big, normalize_class, select_flag, split_model_body,
    valuation_set, vol_of_class, DivisorClass, Fan, FlagContext, GlobalCone,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn setup(p: &builtin::Problem) -> (FlagContext, GlobalCone) {
    let b = select_flag(&p.fan, None).unwrap();
    let ctx = derive_context(&p.fan, &b, &p.bundle).unwrap();
    let gc = global_cone(&ctx).unwrap();
    (ctx, gc)
}

fn ineq(normal: &[i64], c: i64) -> LinearInequality {
    LinearInequality::from_ints(normal, c)
}

fn criterion_1() -> Outcome {
    let p = builtin::tangent_p2();
    let (ctx, gc) = setup(&p);
    let cls = normalize_class(&p.fan, &ctx.basis, &[0, 0, 0], 1).map_err(|e| e.to_string())?;
    let body = fiber_body(&gc, &cls).unwrap().with_volume().unwrap();
    let want = HPolyhedron::from_inequalities(
        3,
        vec![
            ineq(&[0, 0, -1], 1),
            ineq(&[0, 0, 1], 0),
            ineq(&[1, 0, 0], 0),
            ineq(&[0, 1, 0], 0),
            ineq(&[-1, -1, -1], 2),
            ineq(&[-1, 0, 0], 1),
        ],
    )
    .unwrap();
    ensure(poly_equal(&body.body, &want).unwrap(), || "body differs from the six inequalities".into())?;
    let vol = body.vol.clone().unwrap();
    ensure(vol == rat(1), || format!("volume {vol}"))?;
    let v = vol_of_class(&gc, &cls).unwrap();
    ensure(v == rat(6), || format!("vol_of_class {v}"))?;
    Ok("body equal, vol 1, vol_of_class 6".into())
}

fn criterion_2() -> Outcome {
    let ctx = setup(&builtin::tangent_p2()).0;
    ensure(ctx.u1 == [1, 0] && ctx.u2 == [0, 1], || format!("u1 {:?} u2 {:?}", ctx.u1, ctx.u2))?;
    ensure(ctx.a_set.is_empty(), || format!("A {:?}", ctx.a_set))?;
    ensure(ctx.b_set == [0], || format!("B {:?}", ctx.b_set))?;
    ensure(ctx.c_sets == [vec![1], vec![2]], || format!("C {:?}", ctx.c_sets))?;
    let sets: Vec<String> = admissible_sets(&ctx).unwrap().iter().map(|s| s.to_string()).collect();
    ensure(sets == ["B{1}", "C{2}", "C{3}", "C{2,3}"], || format!("admissible {sets:?}"))?;
    Ok(format!("u1 (1,0), u2 (0,1), B {{1}}, C {{2}},{{3}}, A empty, {}", sets.join(" ")))
}

fn criterion_3() -> Outcome {
    let p = builtin::tangent_p2();
    let (ctx, gc) = setup(&p);
    let mut cases = 0;
    for m in 0..=5 {
        for m1 in -1..=1 {
            for m2 in -1..=1 {
                for m3 in -1..=1 {
                    let cls = normalize_class(&p.fan, &ctx.basis, &[m1, m2, m3], m).unwrap();
                    let rep = check_against_oracle(&gc, &ctx, &cls).unwrap();
                    ensure(rep.level_c_equality == Some(true) && rep.passed(), || {
                        format!("class {cls}: {rep:?}")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    let o1 = DivisorClass::new(vec![0], 1);
    let rep = check_against_oracle(&gc, &ctx, &o1).unwrap();
    ensure(rep.h0 == 8 && rep.lattice_points == 8, || format!("O(1): {rep:?}"))?;
    Ok(format!("{cases} classes, h0(O(1)) = 8 = lattice points"))
}

fn criterion_4() -> Outcome {
    let (ctx, gc) = setup(&builtin::tangent_p2());
    let body = fiber_body(&gc, &DivisorClass::new(vec![0], 1)).unwrap().body;
    let mut prev = None;
    for m in 1..=8i64 {
        let h = h0(&ctx, &DivisorClass::new(vec![0], m)).unwrap();
        let pts = body.scaled(&rat(m)).lattice_points().unwrap().len() as i64;
        ensure(h == pts, || format!("m = {m}: h0 {h}, lattice points {pts}"))?;
        let ratio = rat(h * 6) / rat(m * m * m);
        let mr = rat(m);
        let hi = rat(6) * (rat(1) + rat(3) / &mr + rat(3) / (&mr * &mr) + rat(1) / (&mr * &mr * &mr));
        ensure(ratio >= rat(6) && ratio <= hi, || format!("m = {m}: ratio {ratio} outside window"))?;
        if let Some(p) = &prev {
            ensure(ratio <= *p, || format!("m = {m}: ratio {ratio} increased"))?;
        }
        prev = Some(ratio);
    }
    Ok("h0(O(m)) = |m Delta ∩ Z^3| for m = 1..8, ratio decreasing to 6".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cases = 0;
    for (a, b) in [(0, 0), (0, -1), (1, -1)] {
        let p = builtin::split_p1(a, b);
        let (ctx, gc) = setup(&p);
        let (c1, c2) = p.split.clone().unwrap();
        // the model's first summand is the one whose fiber is E1
        let (c1, c2) = if ctx.e1 == ProjLine::new(1, 0).unwrap() { (c1, c2) } else { (c2, c1) };
        let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        for _ in 0..10 {
            let full: Vec<i64> = (0..p.fan.num_rays()).map(|_| rng.gen_range(-3..=3)).collect();
            let cls = normalize_class(&p.fan, &ctx.basis, &full, rng.gen_range(0..=4)).unwrap();
            let model = split_model_body(&ctx.basis, &neg(&c1), &neg(&c2), &cls).unwrap();
            let body = fiber_body(&gc, &cls).unwrap().body;
            ensure(poly_equal(&model, &body).unwrap(), || format!("O({a}) + O({b}), class {cls}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} split cases equal"))
}

/// `P_D` embedded by `x_i = -<u, v_i>` on the rays of tau and `x_{n+1} = 0`.
fn embedded_base(fan: &Fan, ctx: &FlagContext, cls: &DivisorClass) -> HPolyhedron {
    let n = ctx.n;
    let mut full = vec![0; ctx.d];
    for (k, c) in cls.coeffs.iter().enumerate() {
        full[ctx.basis.ray_order[n + k]] = *c;
    }
    let m = ctx.basis.to_flag_order(&full);
    // <u, v_j> <= m_j with u = -sum x_i v_i^*
    let mut rows: Vec<LinearInequality> = (0..ctx.d)
        .map(|j| {
            let mut normal: Vec<i64> = (0..n).map(|i| ctx.basis.pairing(i, j)).collect();
            normal.push(0);
            ineq(&normal, m[j])
        })
        .collect();
    let mut e = vec![0; n + 1];
    e[n] = 1;
    rows.push(ineq(&e, 0));
    e[n] = -1;
    rows.push(ineq(&e, 0));
    debug_assert!(base_polytope(fan, &full).is_ok());
    HPolyhedron::from_inequalities(n + 1, rows).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut cases = 0;
    for p in builtin::all_defaults() {
        let (ctx, gc) = setup(&p);
        for _ in 0..8 {
            let full: Vec<i64> = (0..p.fan.num_rays()).map(|_| rng.gen_range(-1..=2)).collect();
            let cls = normalize_class(&p.fan, &ctx.basis, &full, 0).unwrap();
            let body = fiber_body(&gc, &cls).unwrap().body;
            let want = embedded_base(&p.fan, &ctx, &cls);
            ensure(poly_equal(&body, &want).unwrap(), || format!("{}: class {cls}", p.name))?;
            ensure(!is_big(&gc, &cls).unwrap(), || format!("{}: class {cls} reported big", p.name))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} twist-0 classes over {} builtins", builtin::all_defaults().len()))
}

const SUITE: usize = 100;

fn random_instance(rng: &mut ChaCha8Rng) -> (Fan, Bundle2, FlagContext, GlobalCone) {
    let fans = common::small_fans();
    let fan = fans[rng.gen_range(0..fans.len())].clone();
    let e = common::random_bundle(rng, &fan, 2);
    let b = select_flag(&fan, None).unwrap();
    let ctx = derive_context(&fan, &b, &e).unwrap();
    let gc = global_cone(&ctx).unwrap();
    (fan, e, ctx, gc)
}

fn small_class(rng: &mut ChaCha8Rng, ctx: &FlagContext) -> DivisorClass {
    common::random_class(rng, ctx.d - ctx.n, 0..=2, 1)
}

fn suite_superadditivity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for i in 0..SUITE {
        let (_, _, ctx, _) = random_instance(rng);
        let (c1, c2) = (small_class(rng, &ctx), small_class(rng, &ctx));
        let v12 = valuation_set(&ctx, &c1.add(&c2)).unwrap();
        let v2 = valuation_set(&ctx, &c2).unwrap();
        for a in valuation_set(&ctx, &c1).unwrap() {
            for b in &v2 {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                ensure(v12.contains(&s), || format!("superadditivity #{i}: {c1} + {c2}"))?;
            }
        }
    }
    Ok(())
}

fn suite_homogeneity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for i in 0..SUITE {
        let (_, _, ctx, gc) = random_instance(rng);
        let cls = small_class(rng, &ctx);
        let one = fiber_body(&gc, &cls).unwrap().body;
        for k in 1..=4 {
            let many = fiber_body(&gc, &cls.scale(k)).unwrap().body;
            ensure(poly_equal(&one.scaled(&rat(k)), &many).unwrap(), || format!("homogeneity #{i}: {cls}, k = {k}"))?;
        }
    }
    Ok(())
}

fn suite_minkowski(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for i in 0..SUITE {
        let (_, _, ctx, gc) = random_instance(rng);
        let (c1, c2) = (small_class(rng, &ctx), small_class(rng, &ctx));
        let v1 = fiber_body(&gc, &c1).unwrap().with_vertices().unwrap().verts.unwrap();
        let v2 = fiber_body(&gc, &c2).unwrap().with_vertices().unwrap().verts.unwrap();
        let sum = fiber_body(&gc, &c1.add(&c2)).unwrap().body;
        for a in v1.vertices() {
            for b in v2.vertices() {
                ensure(sum.contains(&a.add(b)).unwrap(), || format!("Minkowski #{i}: {c1} + {c2}"))?;
            }
        }
    }
    Ok(())
}

fn suite_line_change(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mats = [[[2, 1], [1, 1]], [[0, 1], [1, 0]], [[1, 3], [0, 1]], [[1, 0], [-2, 1]]];
    for i in 0..SUITE {
        let (fan, e, ctx, gc) = random_instance(rng);
        let m = mats[rng.gen_range(0..mats.len())];
        let e2 = e.transform_lines(m).unwrap();
        let ctx2 = derive_context_with(&fan, &ctx.basis, &e2, ctx.e1.transform(m).unwrap()).unwrap();
        let gc2 = global_cone(&ctx2).unwrap();
        let cls = small_class(rng, &ctx);
        let (b1, b2) = (fiber_body(&gc, &cls).unwrap().body, fiber_body(&gc2, &cls).unwrap().body);
        ensure(poly_equal(&b1, &b2).unwrap(), || format!("line change #{i}: {cls}"))?;
        ensure(h0(&ctx, &cls).unwrap() == h0(&ctx2, &cls).unwrap(), || format!("line change h0 #{i}: {cls}"))?;
    }
    Ok(())
}

fn suite_e1_swap(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let alt = ProjLine::new(0, 1).unwrap();
    for i in 0..SUITE {
        let fans = common::small_fans();
        let fan = fans[rng.gen_range(0..fans.len())].clone();
        let b = select_flag(&fan, None).unwrap();
        let e = common::random_bundle(rng, &fan, 2);
        // flatten tau so that u1 = u2
        let mut filt = e.filtrations().to_vec();
        for &r in &b.ray_order[..b.n()] {
            filt[r] = RayFiltration::full_drop(filt[r].a);
        }
        let e = Bundle2::new(filt);
        let c0 = derive_context_with(&fan, &b, &e, default_e1()).unwrap();
        let c1 = derive_context_with(&fan, &b, &e, alt).unwrap();
        ensure(c0.u1 == c0.u2, || format!("E1 swap #{i}: u1 != u2"))?;
        let (g0, g1) = (global_cone(&c0).unwrap(), global_cone(&c1).unwrap());
        let cls = small_class(rng, &c0);
        let (v0, v1) = (vol_of_class(&g0, &cls).unwrap(), vol_of_class(&g1, &cls).unwrap());
        ensure(v0 == v1, || format!("E1 swap #{i}: {cls}: {v0} vs {v1}"))?;
        ensure(h0(&c0, &cls).unwrap() == h0(&c1, &cls).unwrap(), || format!("E1 swap h0 #{i}: {cls}"))?;
    }
    Ok(())
}

fn suite_compatibility(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let fan = Fan::projective_space(3);
    let mut rejected = 0;
    for i in 0..SUITE {
        let filt: Vec<RayFiltration> = (0..fan.num_rays())
            .map(|_| {
                if rng.gen_bool(0.2) {
                    RayFiltration::full_drop(0)
                } else {
                    let (x, y) = common::LINES[rng.gen_range(0..3)];
                    RayFiltration::with_jump(0, 1, ProjLine::new(x, y).unwrap()).unwrap()
                }
            })
            .collect();
        let bad = fan.max_cones().iter().any(|cone| {
            let mut lines: Vec<ProjLine> =
                cone.iter().filter_map(|&r| filt[r].jump.map(|j| j.line)).collect();
            lines.sort();
            lines.dedup();
            lines.len() >= 3
        });
        let rep = check_compatibility(&fan, &Bundle2::new(filt)).unwrap();
        ensure(rep.passed() != bad, || format!("compatibility #{i}: expected rejection {bad}"))?;
        rejected += bad as usize;
    }
    ensure(rejected > 0, || "no incompatible instance sampled".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    suite_superadditivity(&mut rng)?;
    suite_homogeneity(&mut rng)?;
    suite_minkowski(&mut rng)?;
    suite_line_change(&mut rng)?;
    suite_e1_swap(&mut rng)?;
    suite_compatibility(&mut rng)?;
    Ok(format!("6 suites x {SUITE} instances, zero failures"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    for p in builtin::all_defaults() {
        let (ctx, gc) = setup(&p);
        let k = (ctx.n + 1) as u32;
        let big = |rng: &mut ChaCha8Rng| loop {
            let full: Vec<i64> = (0..p.fan.num_rays()).map(|_| rng.gen_range(0..=2)).collect();
            let cls = normalize_class(&p.fan, &ctx.basis, &full, rng.gen_range(1..=2)).unwrap();
            if is_big(&gc, &cls).unwrap() {
                return cls;
            }
        };
        for _ in 0..20 {
            let (c1, c2) = (big(&mut rng), big(&mut rng));
            let v1 = vol_of_class(&gc, &c1).unwrap();
            let v2 = vol_of_class(&gc, &c2).unwrap();
            let v12 = vol_of_class(&gc, &c1.add(&c2)).unwrap();
            let cmp = compare_log_concave(&v1, &v2, &v12, k);
            ensure(cmp == Comparison::Holds, || format!("{}: {c1}, {c2}: {cmp:?} ({v1}, {v2}, {v12})", p.name))?;
            pairs += 1;
        }
    }
    Ok(format!("{pairs} big pairs, zero violations"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_millis(100)),
        (3, criterion_3, Duration::from_secs(10)),
        (4, criterion_4, Duration::from_secs(30)),
        (5, criterion_5, Duration::from_secs(10)),
        (6, criterion_6, Duration::from_secs(5)),
        (7, criterion_7, Duration::from_secs(120)),
        (8, criterion_8, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (id, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        failed += !ok as usize;
        println!(
            "criterion {id}: {} ({:.3}s of {:.1}s) {detail}",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            budget.as_secs_f64()
        );
    }
    if failed > 0 {
        eprintln!("{failed} criteria failed");
        std::process::exit(1);
    }
}
