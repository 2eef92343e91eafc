mod common;

use okbody_core::fan::FanFailure;
use okbody_core::geometry::RatVector;
use okbody_core::{base_polytope, normalize_class, select_flag, validate_fan, DivisorClass, Fan};
use proptest::prelude::*;

fn p2() -> Fan {
    Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap()
}

#[test]
fn p2_fan_validates() {
    let r = validate_fan(&p2(), false);
    assert!(r.smooth && r.complete && r.passed());
    assert_eq!(r.projective, None);
}

#[test]
fn determinant_two_cone_fails_smoothness() {
    let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-2, -1]], vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
    let r = validate_fan(&f, false);
    assert!(!r.smooth);
    let bad: Vec<usize> = r
        .failures
        .iter()
        .filter_map(|x| match x {
            FanFailure::NonSmoothCone { cone, .. } => Some(*cone),
            _ => None,
        })
        .collect();
    // |det((0,1),(-2,-1))| = 2 and |det((-2,-1),(1,0))| = 1
    assert_eq!(bad, vec![0]);
}

#[test]
fn missing_cone_is_reported() {
    let f = Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![1, 2], vec![2, 0]]).unwrap();
    let r = validate_fan(&f, false);
    assert!(!r.complete);
    assert!(r.failures.iter().any(|x| matches!(x, FanFailure::FacetNotShared { .. })));
}

#[test]
fn overlapping_cones_are_rejected() {
    // both cones on the same side of the shared ray (0,1)
    let f = Fan::new(
        2,
        vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, -1]],
        vec![vec![0, 1], vec![1, 2], vec![0, 3], vec![2, 3]],
    )
    .unwrap();
    let r = validate_fan(&f, false);
    assert!(!r.passed());
}

#[test]
fn non_primitive_and_duplicate_rays() {
    let f = Fan::new(1, vec![vec![2], vec![-1], vec![-1]], vec![vec![0], vec![1]]).unwrap();
    let r = validate_fan(&f, false);
    assert!(r.failures.contains(&FanFailure::NonPrimitiveRay { ray: 0 }));
    assert!(r.failures.contains(&FanFailure::DuplicateRay { first: 1, second: 2 }));
}

#[test]
fn builtin_fans_are_projective() {
    for f in [Fan::projective_space(1), Fan::projective_space(3), Fan::p1_x_p1(), Fan::hirzebruch(3)] {
        let r = validate_fan(&f, true);
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.projective, Some(true));
    }
}

#[test]
fn malformed_fans_are_refused() {
    assert!(Fan::new(2, vec![vec![1, 0], vec![0]], vec![vec![0, 1]]).is_err());
    assert!(Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0, 2]]).is_err());
    assert!(Fan::new(2, vec![vec![1, 0], vec![0, 0]], vec![vec![0, 1]]).is_err());
}

#[test]
fn flag_selection() {
    let b = select_flag(&p2(), Some(2)).unwrap();
    assert_eq!(b.ray_order, vec![0, 1, 2]);
    assert_eq!(b.dual, vec![vec![1, 0], vec![0, 1]]);
    // the default picks the sorted-smallest cone {0,1}, listed last in the input
    assert_eq!(select_flag(&p2(), None).unwrap().tau, 2);
    let b = select_flag(&p2(), Some(0)).unwrap();
    assert_eq!(b.ray_order, vec![1, 2, 0]);
    let q = select_flag(&Fan::p1_x_p1(), Some(0)).unwrap();
    assert_eq!(q.dual, vec![vec![1, 0], vec![0, 1]]);
}

#[test]
fn dual_inverts_ray_matrix_for_every_cone() {
    for f in common::small_fans().into_iter().chain([Fan::projective_space(3)]) {
        for t in 0..f.max_cones().len() {
            let b = select_flag(&f, Some(t)).unwrap();
            for i in 0..f.dim() {
                for j in 0..f.dim() {
                    assert_eq!(b.pairing(i, j), (i == j) as i64);
                }
            }
        }
    }
}

#[test]
fn class_normalization_examples() {
    let f = p2();
    let b = select_flag(&f, None).unwrap();
    assert_eq!(normalize_class(&f, &b, &[0, 0, 5], 2).unwrap(), DivisorClass::new(vec![5], 2));
    assert_eq!(normalize_class(&f, &b, &[1, 0, 0], 0).unwrap(), DivisorClass::new(vec![1], 0));
    assert_eq!(normalize_class(&f, &b, &[2, 0, 0], 0).unwrap(), DivisorClass::new(vec![2], 0));
}

fn lattice_count(f: &Fan, m: &[i64]) -> usize {
    base_polytope(f, m).unwrap().lattice_points().unwrap().len()
}

#[test]
fn base_polytope_examples() {
    let f = p2();
    assert_eq!(lattice_count(&f, &[0, 0, 1]), 3);
    assert_eq!(lattice_count(&f, &[1, 1, 1]), 10);
    let pts = base_polytope(&f, &[0, 0, 0]).unwrap().lattice_points().unwrap();
    assert_eq!(pts, vec![RatVector::from_ints(&[0, 0])]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_ignores_principal_divisors(
        fan_idx in 0usize..5,
        coeffs in prop::collection::vec(-3i64..=3, 4),
        u in prop::collection::vec(-3i64..=3, 2),
        twist in -2i64..=4,
    ) {
        let f = common::small_fans().swap_remove(fan_idx);
        let b = select_flag(&f, None).unwrap();
        let m: Vec<i64> = coeffs[..f.num_rays()].to_vec();
        let shifted: Vec<i64> = f
            .rays()
            .iter()
            .zip(&m)
            .map(|(v, c)| c + v.iter().zip(&u).map(|(x, y)| x * y).sum::<i64>())
            .collect();
        let a = normalize_class(&f, &b, &m, twist).unwrap();
        prop_assert_eq!(&a, &normalize_class(&f, &b, &shifted, twist).unwrap());
        let doubled: Vec<i64> = m.iter().map(|x| 2 * x).collect();
        prop_assert_eq!(a.scale(2), normalize_class(&f, &b, &doubled, 2 * twist).unwrap());
    }

    #[test]
    fn base_polytope_minkowski_containment(
        fan_idx in 1usize..5,
        m1 in prop::collection::vec(0i64..=2, 4),
        m2 in prop::collection::vec(0i64..=2, 4),
    ) {
        let f = common::small_fans().swap_remove(fan_idx);
        let d = f.num_rays();
        let (m1, m2) = (&m1[..d], &m2[..d]);
        let sum: Vec<i64> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
        let p = base_polytope(&f, &sum).unwrap();
        let a = base_polytope(&f, m1).unwrap().lattice_points().unwrap();
        let b = base_polytope(&f, m2).unwrap().lattice_points().unwrap();
        for x in &a {
            for y in &b {
                prop_assert!(p.contains(&x.add(y)).unwrap());
            }
        }
    }
}
