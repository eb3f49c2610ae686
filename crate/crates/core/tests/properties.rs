use num_complex::Complex64;
use proptest::prelude::*;

use specdyn_core::dihedral::{apply_f, apply_f2, tau, tchebyshev_t};
use specdyn_core::geometry::{fs_distance, normalize, ExtendedComplex, Point2};
use specdyn_core::grigorchuk::{apply_g, embed_x};
use specdyn_core::koopman::{
    build_dihedral_level, build_grigorchuk_level, min_singular_value, pencil_eigenvalues,
    singular_threshold, Permutation,
};

fn c() -> impl Strategy<Value = Complex64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b))
}

fn v3() -> impl Strategy<Value = [Complex64; 3]> {
    [c(), c(), c()].prop_filter("nonzero", |z| z.iter().any(|x| x.norm() > 1e-3))
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

proptest! {
    #[test]
    fn normalize_is_idempotent(z in v3()) {
        let p = normalize(&z).unwrap();
        prop_assert_eq!(normalize(&p).unwrap(), p);
    }

    #[test]
    fn fs_distance_is_symmetric_and_scale_invariant(z in v3(), w in v3(), s in c()) {
        prop_assume!(s.norm() > 1e-3);
        prop_assert!((fs_distance(&z, &w) - fs_distance(&w, &z)).abs() < 1e-12);
        prop_assert!(fs_distance(&z, &z.map(|x| x * s)) < 1e-7);
    }

    #[test]
    fn f_is_homogeneous_of_degree_three(z in v3(), s in c()) {
        let a = apply_f(&z.map(|x| x * s));
        let b = apply_f(&z);
        for k in 0..3 {
            prop_assert!(rel(a[k], b[k] * s * s * s) < 1e-12 * (1.0 + b.norm_inf() * s.norm().powi(3)));
        }
    }

    #[test]
    fn f2_is_f_with_last_coordinates_swapped(z in v3()) {
        let f = apply_f(&[z[0], z[2], z[1]]);
        let g = apply_f2(&z);
        for (a, b) in g.0.iter().zip([f[0], f[2], f[1]]) {
            prop_assert!((a - b).norm() <= 1e-13 * (1.0 + f.norm_inf()));
        }
    }

    #[test]
    fn tau_intertwines_f_and_t(z in v3()) {
        let lhs = tau(&apply_f(&z));
        let rhs = tchebyshev_t(tau(&z));
        match (lhs, rhs) {
            (ExtendedComplex::Finite(a), ExtendedComplex::Finite(b)) => prop_assert!(rel(a, b) < 1e-6),
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => {}
            (ExtendedComplex::Finite(a), ExtendedComplex::Infinity) => prop_assert!(a.norm() > 1e8),
            (ExtendedComplex::Infinity, ExtendedComplex::Finite(b)) => prop_assert!(b.norm() > 1e8),
        }
    }

    #[test]
    fn embedding_semiconjugates_f_to_g(z in v3()) {
        let lhs = embed_x(&apply_f(&z));
        let rhs = apply_g(&embed_x(&z));
        let scale = embed_x(&z).norm_inf().powi(3).max(1.0);
        for k in 0..5 {
            prop_assert!((lhs[k] - rhs[k]).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn points_survive_print_and_parse(z in v3()) {
        let p = normalize(&z).unwrap();
        let back: Point2 = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn grigorchuk_relations_through_level_ten() {
    for level in 0..=10 {
        let rep = build_grigorchuk_level(level).unwrap();
        let g = |n| rep.generator(n).unwrap().clone();
        let id = Permutation::identity(rep.dimension());
        assert_eq!(g('b').compose(&g('c')).compose(&g('d')), id, "level {level}");
        for n in ['a', 'b', 'c', 'd'] {
            assert!(g(n).is_involution());
        }
    }
}

#[test]
fn hecke_operator_matches_reduced_pencil() {
    let one = Complex64::new(1.0, 0.0);
    let g = build_grigorchuk_level(6).unwrap();
    let d = build_dihedral_level(6).unwrap();
    let lhs = pencil_eigenvalues(&g, &[one; 4]).unwrap();
    // a + b + c + d = I + a + 2u with u = t.
    let rhs: Vec<f64> = pencil_eigenvalues(&d, &[one, Complex64::new(2.0, 0.0)])
        .unwrap()
        .into_iter()
        .map(|x| x + 1.0)
        .collect();
    for (a, b) in lhs.iter().zip(&rhs) {
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn singular_value_reference_points() {
    let z = |a: f64, b: f64, c: f64| [a, b, c].map(|x| Complex64::new(x, 0.0));
    let rep8 = build_dihedral_level(8).unwrap();
    let rep4 = build_dihedral_level(4).unwrap();
    let at = |rep, p: [Complex64; 3]| min_singular_value(rep, p[0], &p[1..]).unwrap();
    assert!((at(&rep8, z(1.0, 0.0, 0.0)) - 1.0).abs() < 1e-12);
    assert!(at(&rep8, z(1.0, 1.0, 3.0)) > 0.1);
    let p = z(2.0, 1.0, 1.0);
    assert!(at(&rep8, p) < at(&rep4, p));
    assert!(at(&rep8, p) <= singular_threshold(&p, 8) * 10.0);
}

#[test]
fn dihedral_level_one_spectrum() {
    let one = Complex64::new(1.0, 0.0);
    let ev = pencil_eigenvalues(&build_dihedral_level(1).unwrap(), &[one, one]).unwrap();
    assert!((ev[0]).abs() < 1e-14 && (ev[1] - 2.0).abs() < 1e-14);
}
