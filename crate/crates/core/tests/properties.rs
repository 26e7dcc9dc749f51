mod common;

use feec4d::exterior::{apply_d, levi_civita, lmap, lmap_inv, Skew4P};
use feec4d::interp::{coeff_distance, interpolate};
use feec4d::pullback::{functoriality_check, pull, push};
use feec4d::rng::{random_affine, random_field, random_poly, seeded};
use feec4d::spaces::{space_basis, SpaceSpec};
use feec4d::tensorpoly::{gauss_legendre, rel_diff, Poly1D};
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn gauss_rules_integrate_monomials(n in 1usize..12, j in 0usize..24) {
        prop_assume!(j < 2 * n);
        let rule = gauss_legendre(n).unwrap();
        let got = rule.integrate(|x| x.powi(j as i32));
        let exact = if j % 2 == 1 { 0.0 } else { 2.0 / (j as f64 + 1.0) };
        prop_assert!((got - exact).abs() < 1e-14, "n={} j={} got {}", n, j, got);
    }

    #[test]
    fn one_dimensional_derivative_matches_powers(c in prop::collection::vec(-2.0f64..2.0, 1..8), x in -1.0f64..1.0) {
        let p = Poly1D::new(c.clone());
        let expected: f64 = c.iter().enumerate().skip(1).map(|(i, a)| i as f64 * a * x.powi(i as i32 - 1)).sum();
        prop_assert!((p.derivative().eval(x) - expected).abs() < 1e-12);
    }

    #[test]
    fn leibniz_rule(seed in any::<u64>(), axis in 0usize..4) {
        let mut rng = seeded(seed);
        let p = random_poly(&mut rng, [2, 1, 2, 1]);
        let q = random_poly(&mut rng, [1, 2, 0, 2]);
        let lhs = (&p * &q).diff(axis);
        let rhs = &(&p.diff(axis) * &q) + &(&p * &q.diff(axis));
        prop_assert!(rel_diff(&lhs, &rhs) < 1e-13);
    }

    #[test]
    fn products_evaluate_pointwise(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let p = random_poly(&mut rng, [2, 2, 1, 1]);
        let q = random_poly(&mut rng, [1, 0, 2, 2]);
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
        let pq = &p * &q;
        prop_assert!((pq.eval(x) - p.eval(x) * q.eval(x)).abs() < 1e-12 * (1.0 + pq.eval(x).abs()));
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), s in 0usize..3) {
        let mut rng = seeded(seed);
        let f = random_field(&mut rng, s, 3);
        let df = apply_d(&f).unwrap();
        let ddf = apply_d(&df).unwrap();
        prop_assert!(ddf.max_abs_coeff() < 1e-12 * df.max_abs_coeff().max(1.0));
    }

    #[test]
    fn skew_packing_round_trips(w in prop::array::uniform6(-5.0f64..5.0)) {
        let m = lmap(w);
        for i in 0..4 {
            prop_assert_eq!(m[i][i], 0.0);
            for j in 0..4 {
                prop_assert_eq!(m[i][j], -m[j][i]);
            }
        }
        prop_assert_eq!(lmap_inv(&m), w);
        let f = Skew4P::constant(w);
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(f.entry(i, j).eval([0.0; 4]), m[i][j]);
            }
        }
    }

    #[test]
    fn levi_civita_is_permutation_sign(i in 0usize..4, j in 0usize..4, k in 0usize..4, l in 0usize..4) {
        let idx = [i, j, k, l];
        let distinct = (0..4).all(|a| (a + 1..4).all(|b| idx[a] != idx[b]));
        let expected = if distinct { common::perm_sign(&idx) } else { 0.0 };
        prop_assert_eq!(levi_civita(i, j, k, l), expected);
    }
}

proptest! {
    #![proptest_config(config(16))]

    #[test]
    fn pullback_composes(seed in any::<u64>(), s in 0usize..5, negative in any::<bool>()) {
        let mut rng = seeded(seed);
        let phi = random_affine(&mut rng, negative);
        let psi = random_affine(&mut rng, !negative);
        let f = random_field(&mut rng, s, 2);
        prop_assert!(functoriality_check(&f, &phi, &psi, &mut rng).unwrap() < 1e-11);
    }

    #[test]
    fn push_inverts_pull(seed in any::<u64>(), s in 0usize..5) {
        let mut rng = seeded(seed);
        let phi = random_affine(&mut rng, seed % 2 == 0);
        let f = random_field(&mut rng, s, 1);
        let back = push(&pull(&f, &phi).unwrap(), &phi).unwrap();
        prop_assert!(coeff_distance(&back, &f) < 1e-10 * f.max_abs_coeff().max(1.0));
    }

    #[test]
    fn interpolation_reproduces_the_space(seed in any::<u64>(), k in 1usize..3, s in 0usize..5) {
        let mut rng = seeded(seed);
        let basis = space_basis(SpaceSpec::new(k, s).unwrap());
        let c: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let f = basis.combine(&c);
        let pi = interpolate(k, s, &f).unwrap();
        prop_assert!(coeff_distance(&pi.field, &f) < 1e-11 * f.max_abs_coeff().max(1.0));
        let twice = interpolate(k, s, &pi.field).unwrap();
        prop_assert!(coeff_distance(&twice.field, &pi.field) < 1e-11 * f.max_abs_coeff().max(1.0));
    }

    #[test]
    fn interpolation_is_linear(seed in any::<u64>(), s in 0usize..5, a in -3.0f64..3.0) {
        let mut rng = seeded(seed);
        let f = random_field(&mut rng, s, 3);
        let g = random_field(&mut rng, s, 3);
        let lhs = interpolate(2, s, &f.scale(a).add(&g)).unwrap().field;
        let rhs = interpolate(2, s, &f).unwrap().field.scale(a).add(&interpolate(2, s, &g).unwrap().field);
        prop_assert!(coeff_distance(&lhs, &rhs) < 1e-10 * lhs.max_abs_coeff().max(1.0));
    }
}
