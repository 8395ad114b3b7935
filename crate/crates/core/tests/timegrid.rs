use proptest::prelude::*;

use gjl_core::{CoefficientSeries, TimeGrid};

proptest! {
    #[test]
    fn differentiate_then_integrate(n in 32usize..80, w in 0.1f64..6.0, p in -3.0f64..3.0, c in -2.0f64..2.0) {
        let g = TimeGrid::new(n).unwrap();
        let f = CoefficientSeries::from_fn(&g, |t| (w * t + p).sin() + c * (t * t).exp());
        let got = f.derivative().integrate();
        prop_assert!((got - (f.last() - f.first())).abs() < 1e-10);
    }

    #[test]
    fn weights_are_exact_on_polynomials(n in 8usize..40, d in 0usize..8) {
        prop_assume!(d < n);
        let g = TimeGrid::new(n).unwrap();
        let f = CoefficientSeries::from_fn(&g, |t| t.powi(d as i32));
        prop_assert!((f.integrate() - 1.0 / (d as f64 + 1.0)).abs() < 1e-13);
    }
}
