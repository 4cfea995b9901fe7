mod common;

use cohpol::channels::{self, ChannelKind};
use cohpol::metrics;
use cohpol::propagation::{self, GaussianBeamPair};
use cohpol::screen::{self, SlitGeometry};
use cohpol::{DensityMatrix, Slit};
use common::*;
use proptest::prelude::*;

const KINDS: [ChannelKind; 2] = [ChannelKind::PathDephasing, ChannelKind::Birefringent];

fn assert_valid(rho: &DensityMatrix) -> Result<(), TestCaseError> {
    DensityMatrix::validate(*rho.matrix())
        .map(|_| ())
        .map_err(|report| TestCaseError::fail(report.to_string()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mixtures_are_valid(spec in arb_mixture()) {
        let rho = DensityMatrix::from_mixture(&spec).unwrap();
        assert_valid(&rho)?;
        let ev = rho.eigenvalues();
        prop_assert!(ev.iter().all(|&l| (-1e-10..=1.0 + 1e-10).contains(&l)), "{ev:?}");
        prop_assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(rho.purity() <= 1.0 + 1e-9);
    }

    #[test]
    fn pure_states_have_unit_purity(psi in arb_pure()) {
        let rho = DensityMatrix::from_pure(&psi);
        prop_assert!((rho.purity() - 1.0).abs() < 1e-9);
        prop_assert!(rho.eigenvalues()[2].abs() < 1e-10);
    }

    #[test]
    fn coherence_is_bounded(rho in arb_two_slit()) {
        let mu = metrics::degree_of_coherence(&rho).unwrap();
        prop_assert!(mu.modulus() <= 1.0 + 1e-9, "|mu| = {}", mu.modulus());
    }

    #[test]
    fn polarization_is_bounded_and_matches_stokes(rho in arb_two_slit()) {
        for slit in [Slit::Q0, Slit::Q1] {
            let p = metrics::degree_of_polarization(&rho, slit).unwrap().p;
            prop_assert!((0.0..=1.0 + 1e-9).contains(&p), "p = {p}");
            let s = metrics::stokes(&rho, slit);
            prop_assert!(s.s0 >= 0.0);
            prop_assert!(s.s1 * s.s1 + s.s2 * s.s2 + s.s3 * s.s3 <= s.s0 * s.s0 + 1e-9);
            let via_stokes = s.degree_of_polarization().unwrap().p;
            // Both are square roots of nearly equal radicands; compare squares
            // so tiny p does not amplify rounding.
            prop_assert!((p * p - via_stokes * via_stokes).abs() < 1e-10, "{p} vs {via_stokes}");
        }
    }

    #[test]
    fn pure_states_are_fully_polarized(psi in arb_pure()) {
        let rho = DensityMatrix::from_pure(&psi);
        for slit in [Slit::Q0, Slit::Q1] {
            if rho.slit_population(slit) > 1e-6 {
                let p = metrics::degree_of_polarization(&rho, slit).unwrap().p;
                prop_assert!((p - 1.0).abs() < 1e-9, "{slit}: {p}");
            }
        }
    }

    #[test]
    fn metrics_ignore_global_phase(psi in arb_pure(), theta in -10.0f64..10.0) {
        let a = DensityMatrix::from_pure(&psi);
        let b = DensityMatrix::from_pure(&psi.with_global_phase(theta));
        if let (Ok(ma), Ok(mb)) = (metrics::degree_of_coherence(&a), metrics::degree_of_coherence(&b)) {
            prop_assert!((ma.value() - mb.value()).norm() < 1e-12);
        }
        for slit in [Slit::Q0, Slit::Q1] {
            if let (Ok(pa), Ok(pb)) = (
                metrics::degree_of_polarization(&a, slit),
                metrics::degree_of_polarization(&b, slit),
            ) {
                prop_assert!((pa.p - pb.p).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slit_relabeling_conjugates_mu(rho in arb_two_slit()) {
        let swapped = rho.swap_slits();
        let mu = metrics::degree_of_coherence(&rho).unwrap().value();
        let mu_swapped = metrics::degree_of_coherence(&swapped).unwrap().value();
        prop_assert!((mu_swapped - mu.conj()).norm() < 1e-12);
        let p0 = metrics::degree_of_polarization(&rho, Slit::Q0).unwrap().p;
        let p1 = metrics::degree_of_polarization(&rho, Slit::Q1).unwrap().p;
        prop_assert!((metrics::degree_of_polarization(&swapped, Slit::Q0).unwrap().p - p1).abs() < 1e-12);
        prop_assert!((metrics::degree_of_polarization(&swapped, Slit::Q1).unwrap().p - p0).abs() < 1e-12);
    }

    #[test]
    fn screen_density_nonnegative_and_forms_agree(
        rho in arb_density(),
        y in -0.05f64..0.05,
        d in 1e-5f64..1e-3,
        l in 0.01f64..2.0,
        k in 1e6f64..3e7,
    ) {
        let g = SlitGeometry::new(d, l, k).unwrap();
        let s = screen::point_density(&rho, &g, y);
        prop_assert!(s.rho_total >= 0.0 && s.rho_q0 >= 0.0 && s.rho_q1 >= 0.0);
        let direct = screen::direct_density(&rho, &g, y);
        // Relative to the envelope: near a perfect dark fringe the total
        // itself is a cancellation residue.
        let scale = s.rho_q0 + s.rho_q1;
        prop_assert!((s.rho_total - direct).abs() <= 1e-12 * scale, "{} vs {direct}", s.rho_total);
    }

    #[test]
    fn channels_preserve_validity(rho in arb_density(), p in 0.0f64..=1.0, birefringent in any::<bool>()) {
        let ch = if birefringent { channels::birefringent_dephasing(p) } else { channels::path_dephasing(p) }.unwrap();
        let out = ch.apply(&rho);
        assert_valid(&out)?;
        prop_assert!((out.trace() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn channels_commute(rho in arb_density(), p1 in 0.0f64..=1.0, p2 in 0.0f64..=1.0) {
        let a = channels::path_dephasing(p1).unwrap();
        let b = channels::birefringent_dephasing(p2).unwrap();
        let ab = b.apply(&a.apply(&rho));
        let ba = a.apply(&b.apply(&rho));
        prop_assert!(max_abs_diff(&ab, &ba) < 1e-12);
    }

    #[test]
    fn continuous_evolution_is_a_semigroup(
        rho in arb_density(), gamma in 0.0f64..5.0, t1 in 0.0f64..3.0, t2 in 0.0f64..3.0,
    ) {
        for kind in KINDS {
            let stepwise = channels::evolve_continuous(
                kind, &channels::evolve_continuous(kind, &rho, gamma, t1).unwrap(), gamma, t2,
            ).unwrap();
            let direct = channels::evolve_continuous(kind, &rho, gamma, t1 + t2).unwrap();
            prop_assert!(max_abs_diff(&stepwise, &direct) < 1e-12);
            assert_valid(&direct)?;
        }
    }

    #[test]
    fn fixed_points(rho in arb_density(), gamma in 0.0f64..5.0, t in 0.0f64..5.0) {
        use cohpol::Basis::*;
        for kind in KINDS {
            let out = channels::evolve_continuous(kind, &rho, gamma, t).unwrap();
            for b in cohpol::Basis::ALL {
                prop_assert_eq!(out[(b, b)], rho[(b, b)]);
            }
        }
        let out = channels::evolve_continuous(ChannelKind::PathDephasing, &rho, gamma, t).unwrap();
        for (r, c) in [(H0, V0), (V0, H0), (H1, V1), (V1, H1)] {
            prop_assert_eq!(out[(r, c)], rho[(r, c)]);
        }
    }

    #[test]
    fn decay_is_monotone(rho in arb_two_slit(), gamma in 0.1f64..3.0) {
        for kind in KINDS {
            let series = channels::decay_report(&rho, kind, gamma, 4.0, 40).unwrap();
            for w in series.windows(2) {
                prop_assert!(w[1].abs_mu <= w[0].abs_mu + 1e-15);
                if kind == ChannelKind::Birefringent {
                    prop_assert!(w[1].p0 <= w[0].p0 + 1e-12);
                    prop_assert!(w[1].p1 <= w[0].p1 + 1e-12);
                } else {
                    prop_assert!((w[1].p0 - w[0].p0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn propagation_polarization_closed_form(
        z1 in 0.1f64..10.0, ratio in 1.0f64..5.0, z in 0.0f64..100.0, w1 in 0.0f64..=1.0,
    ) {
        let pair = GaussianBeamPair::new(1e-3, 1e-3, z1, z1 * ratio, w1, 1.0 - w1).unwrap();
        let s = propagation::sample_at(&pair, z).unwrap();
        prop_assert!((s.w1 + s.w2 - 1.0).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&s.p));
        let radical = (1.0 - 4.0 * s.w1 * s.w2 / (s.w1 + s.w2).powi(2)).max(0.0).sqrt();
        let difference = (s.w1 - s.w2).abs() / (s.w1 + s.w2);
        // The radical form loses ~√ε near p = 0; compare squares there.
        prop_assert!((radical * radical - difference * difference).abs() < 1e-12);
        prop_assert!((s.mu - 1.0).abs() < 1e-12);
        let rho = propagation::density_matrix_at(&pair, z).unwrap();
        assert_valid(&rho)?;
    }

    #[test]
    fn propagation_polarization_monotone(z1 in 0.1f64..10.0, ratio in 1.0f64..5.0) {
        let pair = GaussianBeamPair::balanced(1e-3, 1e-3, z1, z1 * ratio).unwrap();
        let curve = propagation::polarization_curve(&pair, 50.0 * z1, 200).unwrap();
        prop_assert!(curve.windows(2).all(|w| w[1].p >= w[0].p));
        prop_assert!(curve.last().unwrap().p <= pair.asymptotic_polarization() + 1e-12);
    }
}
