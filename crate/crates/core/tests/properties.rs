use proptest::prelude::*;
use qball::limitlab::{boundary_norm, SweepConfig};
use qball::norm::{essential_norm_estimate, operator_norm, phase_grid};
use qball::polmat::{psi_automorphism, random_element, NumElement, PsiConvention};
use qball::repcat::{coherent_rep, omega0};
use qball::state::max_residual;
use qball::Binding;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(seed: u64) -> NumElement {
    random_element(&mut ChaCha8Rng::seed_from_u64(seed), 2, 2, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adjoint_reverses_products(s1 in any::<u64>(), s2 in any::<u64>(), q in 0.1f64..0.9) {
        let (a, b) = (element(s1), element(s2));
        let o = omega0().unwrap();
        let lhs = o.evaluate_numeric(&a.mul(&b), q).unwrap().adjoint();
        let rhs = o.evaluate_numeric(&b.adjoint().mul(&a.adjoint()), q).unwrap();
        let diff = lhs.try_sub(&rhs).unwrap();
        let r = max_residual(&diff, &Binding::new(q), 6, 2, &mut ChaCha8Rng::seed_from_u64(s1 ^ s2)).unwrap();
        prop_assert!(r <= 1e-12, "{r}");
    }

    #[test]
    fn norms_grow_with_truncation(seed in any::<u64>(), q in 0.1f64..0.9) {
        let e = omega0().unwrap().evaluate_numeric(&element(seed), q).unwrap();
        let b = Binding::new(q);
        let small = operator_norm(&e, &b, 4).unwrap();
        let large = operator_norm(&e, &b, 7).unwrap();
        prop_assert!(small <= large + 1e-8 * large.max(1.0), "{small} > {large}");
    }

    #[test]
    fn essential_estimate_shrinks_with_cut(seed in any::<u64>(), q in 0.1f64..0.9) {
        let e = omega0().unwrap().evaluate_numeric(&element(seed), q).unwrap();
        let b = Binding::new(q);
        let full = operator_norm(&e, &b, 8).unwrap();
        let mut last = full;
        for cut in [1, 3, 5] {
            let est = essential_norm_estimate(&e, &b, 8, cut).unwrap();
            prop_assert!(est <= last + 1e-8 * full.max(1.0), "cut {cut}: {est} > {last}");
            last = est;
        }
    }

    #[test]
    fn coherent_norms_match_rotated_vacuum_norms(seed in any::<u64>(), phi in 0.0..std::f64::consts::TAU, q in 0.2f64..0.8) {
        let p = element(seed);
        let c = coherent_rep(phi, q).unwrap();
        let lhs = operator_norm(&c.evaluate_numeric(&p, q).unwrap(), &c.bindings(q, &[])[0], 6).unwrap();
        let rotated = psi_automorphism(phi, 0.0, &p, PsiConvention::Lower);
        let rhs = operator_norm(&omega0().unwrap().evaluate_numeric(&rotated, q).unwrap(), &Binding::new(q), 6).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * lhs.max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn boundary_norm_is_phase_invariant(seed in any::<u64>(), phi in 0.0..std::f64::consts::TAU) {
        // rotating by Psi only moves the circle phases of Xi and Phi
        let p = element(seed);
        let cfg = SweepConfig::default();
        let grid = phase_grid(cfg.grid);
        let base = boundary_norm(&p, 0.5, 6, &grid).unwrap();
        let k = (phi / (std::f64::consts::TAU / cfg.grid as f64)).round();
        let step = k * std::f64::consts::TAU / cfg.grid as f64;
        let rotated = psi_automorphism(step, step, &p, PsiConvention::Lower);
        let moved = boundary_norm(&rotated, 0.5, 6, &grid).unwrap();
        prop_assert!((base - moved).abs() <= 1e-8 * base.max(1.0), "{base} vs {moved}");
    }
}
