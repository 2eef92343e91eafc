#![allow(dead_code)]

use okbody_core::klyachko::{Bundle2, ProjLine, RayFiltration};
use okbody_core::{check_compatibility, DivisorClass, Fan};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn small_fans() -> Vec<Fan> {
    vec![
        Fan::projective_space(1),
        Fan::projective_space(2),
        Fan::p1_x_p1(),
        Fan::hirzebruch(1),
        Fan::hirzebruch(2),
    ]
}

pub const LINES: [(i64, i64); 5] = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2)];

/// Random compatible bundle: levels in [-2, 2], gaps in [1, max_gap].
pub fn random_bundle(rng: &mut ChaCha8Rng, fan: &Fan, max_gap: i64) -> Bundle2 {
    loop {
        let filtrations = (0..fan.num_rays())
            .map(|_| {
                let a = rng.gen_range(-2..=2);
                if rng.gen_bool(0.25) {
                    RayFiltration::full_drop(a)
                } else {
                    let (x, y) = LINES[rng.gen_range(0..LINES.len())];
                    let b = a + rng.gen_range(1..=max_gap);
                    RayFiltration::with_jump(a, b, ProjLine::new(x, y).unwrap()).unwrap()
                }
            })
            .collect();
        let e = Bundle2::new(filtrations);
        if check_compatibility(fan, &e).unwrap().passed() {
            return e;
        }
    }
}

pub fn random_class(rng: &mut ChaCha8Rng, len: usize, twist: std::ops::RangeInclusive<i64>, coeff: i64) -> DivisorClass {
    DivisorClass::new((0..len).map(|_| rng.gen_range(-coeff..=coeff)).collect(), rng.gen_range(twist))
}
