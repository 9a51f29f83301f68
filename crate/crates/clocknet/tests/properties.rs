//! Property-based invariants complementing the seeded acceptance suite.

use clocknet::budget::{error_budget, ErrorInputs, Variant};
use clocknet::config::SystemParams;
use clocknet::geometry::{kernel_a, kernel_s, Dim};
use clocknet::metrology::{
    allan_deviation_entangled, allan_deviation_unentangled, average_fisher, gain,
    parity_probability, GhzMeasurementModel,
};
use clocknet::params::RydbergConfig;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The two stability routes agree identically: G(N, E) equals the ratio of
    /// Allan deviations with contrast e^(−EN).
    #[test]
    fn gain_equals_allan_ratio(
        n in 2u64..500_000,
        log_e in -8.0f64..-3.0,
        omega0 in 0.1f64..10.0,
        tau in 0.1f64..10.0,
    ) {
        let e = 10f64.powf(log_e);
        let c = (-e * n as f64).exp();
        prop_assume!(c > 1e-9);
        let model = GhzMeasurementModel::from_contrast(n, c).unwrap();
        let ratio = allan_deviation_unentangled(n, omega0, tau).unwrap()
            / allan_deviation_entangled(&model, omega0, tau).unwrap();
        let g = gain(n as f64, e);
        prop_assert!((g - ratio).abs() <= 1e-12 * g.max(1.0));
    }

    /// Parity probabilities are a normalized distribution with fringe
    /// amplitude exactly c.
    #[test]
    fn parity_statistics_normalized(n in 1u64..64, c in 0.0f64..1.0, phi in -10.0f64..10.0) {
        let model = GhzMeasurementModel::from_contrast(n, c).unwrap();
        let p0 = parity_probability(0, phi, &model);
        let p1 = parity_probability(1, phi, &model);
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&p0));
        prop_assert!((p0 - p1).abs() <= c + 1e-14);
    }

    /// The averaged Fisher information is bounded by the Heisenberg ceiling
    /// and reduced to a pure function of the contrast.
    #[test]
    fn average_fisher_scales_as_n_squared(c in 0.0f64..=1.0, n in 2u64..32) {
        let small = average_fisher(&GhzMeasurementModel::from_contrast(2, c).unwrap()).unwrap() / 4.0;
        let big = average_fisher(&GhzMeasurementModel::from_contrast(n, c).unwrap()).unwrap()
            / (n * n) as f64;
        prop_assert!((small - big).abs() < 1e-6);
        prop_assert!(big <= 1.0 + 1e-9);
    }

    /// Budget terms react to parameter changes exactly as their power laws say.
    #[test]
    fn budget_power_laws(
        n in 4u32..400,
        log_omega in 2.0f64..6.0,
        n_tilde in 50u32..=150,
        three_d in any::<bool>(),
        scale in 1.1f64..4.0,
    ) {
        let dim = if three_d { Dim::ThreeD } else { Dim::TwoD };
        let base = ErrorInputs {
            n,
            omega: 10f64.powf(log_omega),
            dim,
            rydberg: RydbergConfig::new(n_tilde as f64).unwrap(),
            system: SystemParams::default(),
            variant: Variant::Photonic,
        };
        let b = error_budget(&base).unwrap();
        let s = error_budget(&ErrorInputs { omega: base.omega * scale, ..base }).unwrap();
        prop_assert!((s.imperfect_blockade / b.imperfect_blockade - scale * scale).abs() < 1e-9 * scale * scale);
        prop_assert!((s.rydberg_decay * scale / b.rydberg_decay - 1.0).abs() < 1e-12);
        prop_assert!(s.r2_decay == b.r2_decay && s.dark_counts == b.dark_counts);
        // all terms non-negative, total is the sum
        let terms = b.terms();
        prop_assert!(terms.iter().all(|t| *t >= 0.0));
        // up to summation-order rounding
        let total: f64 = terms.iter().sum();
        prop_assert!((b.total_per_atom - total).abs() <= 1e-15 * total);
    }

    /// The in-region kernels are non-negative, bounded by the free-space
    /// circle/sphere measure, and vanish outside the outer seam.
    #[test]
    fn kernels_bounded(radius in 0.1f64..5.0, r_frac in 0.0f64..=1.0, x_frac in 0.0f64..1.2) {
        let r = r_frac * radius;
        let x = x_frac * (radius + r + 0.1);
        let s = kernel_s(r, x, radius).unwrap();
        let a = kernel_a(r, x, radius).unwrap();
        prop_assert!(s >= 0.0 && a >= 0.0);
        prop_assert!(s <= 2.0 * std::f64::consts::PI * x + 1e-9);
        prop_assert!(a <= 4.0 * std::f64::consts::PI * x * x + 1e-9);
        if x > radius + r {
            prop_assert!(s == 0.0 && a == 0.0);
        }
    }
}
