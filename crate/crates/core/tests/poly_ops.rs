use proptest::prelude::*;

use gjl_core::poly_ops::{apply_d_operator, eigenbasis_q, op_u, PolyOperator};

proptest! {
    #[test]
    fn u_inverse_round_trip(n in 1usize..8, a in 0.05f64..20.0) {
        let u = op_u(n, a).unwrap();
        let inv: PolyOperator = u.try_inverse().unwrap();
        let id = u.compose(&inv).unwrap();
        let m = id.matrix();
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let e = if i == j { 1.0 } else { 0.0 };
                prop_assert!((m[(i, j)] - e).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn d_reads_the_top_q_coordinate(n in 1usize..8, a in 0.05f64..20.0) {
        let u = op_u(n, a).unwrap();
        for (k, q) in eigenbasis_q(n).unwrap().iter().enumerate() {
            let v = apply_d_operator(n, a, &u.apply(q).unwrap()).unwrap();
            let want = if k == n { 1.0 } else { 0.0 };
            prop_assert!((v - want).abs() < 1e-10, "k {} -> {}", k, v);
        }
    }
}
