use ambc_pls_core::intercept::{ip_all, ip_all_asy, ip_c, ip_c_checked, ip_f, ip_n};
use ambc_pls_core::model::{Scenario, Triple};
use ambc_pls_core::outage::{
    diversity_order, op_all, op_all_asy, op_c, op_c_checked, op_f, op_floor_f, op_floor_nc, op_floors, op_n,
};

fn baseline() -> Scenario {
    Scenario::baseline()
}

fn grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + k as f64 * step).collect()
}

fn non_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] <= w[0] + 1e-12)
}

fn non_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0] - 1e-12)
}

fn along<F: Fn(f64) -> Scenario>(values: &[f64], at: F) -> (Vec<Triple<f64>>, Vec<Triple<f64>>) {
    values
        .iter()
        .map(|&v| {
            let s = at(v);
            (op_all(&s).unwrap(), ip_all(&s).unwrap())
        })
        .unzip()
}

fn column(rows: &[Triple<f64>], pick: fn(&Triple<f64>) -> f64) -> Vec<f64> {
    rows.iter().map(pick).collect()
}

const FAR: fn(&Triple<f64>) -> f64 = |t| t.far;
const NEAR: fn(&Triple<f64>) -> f64 = |t| t.near;
const BD: fn(&Triple<f64>) -> f64 = |t| t.bd;

mod degenerate {
    use super::*;

    #[test]
    fn far_user_outage_is_certain_at_or_below_the_power_ratio() {
        for th in [4.0, 10.0] {
            let mut s = baseline();
            s.thresholds.g_f_sf = th;
            assert_eq!(op_f(&s).unwrap(), 1.0, "g_F_sF = {th}");
        }
        let mut s = baseline();
        s.thresholds.g_f_sf = 3.9;
        assert!(op_f(&s).unwrap() < 1.0);
    }

    #[test]
    fn near_user_and_device_fail_with_far_signal_sic() {
        let mut s = baseline();
        s.thresholds.g_n_sf = 4.0;
        assert_eq!(op_n(&s).unwrap(), 1.0);
        assert_eq!(op_c(&s).unwrap(), 1.0);
        assert!(op_f(&s).unwrap() < 1.0);
    }

    #[test]
    fn device_blocked_by_residual_noise() {
        // θ/(η(1-θ)) = 18 at baseline
        for th in [18.0, 20.0] {
            let mut s = baseline();
            s.thresholds.g_n_sc = th;
            assert_eq!(op_c(&s).unwrap(), 1.0, "g_N_sC = {th}");
            assert!(op_n(&s).unwrap() < 1.0);
            assert_eq!(op_floors(&s).unwrap().bd, 1.0);
        }
        let mut s = baseline();
        s.thresholds.g_n_sc = 10.0;
        assert!(op_c(&s).unwrap() < 1.0);
    }

    #[test]
    fn full_cancellation_never_blocks_the_device() {
        let mut s = baseline();
        s.params.eta = 0.0;
        s.thresholds.g_n_sc = 20.0;
        assert!(op_c(&s).unwrap() < 1.0);
        s.thresholds.g_n_sc = 1e3;
        assert!(op_c(&s.with_gamma_db(60.0)).unwrap() < 1.0);
    }

    #[test]
    fn far_signal_unreadable_to_eves() {
        let mut s = baseline();
        s.params.theta = 0.5;
        s = s.with_a_n(0.4);
        s.thresholds.g_e_sf = 1.0;
        // ceiling 0.3/0.7
        assert_eq!(ip_f(&s).unwrap(), 0.0);
        s.thresholds.g_e_sf = 0.3 / 0.7;
        assert_eq!(ip_f(&s).unwrap(), 0.0);
        s.thresholds.g_e_sf = 0.4;
        assert!(ip_f(&s).unwrap() > 0.0);
    }

    #[test]
    fn near_signal_unreadable_to_eves() {
        let mut s = baseline();
        s.params.theta = 0.5;
        s = s.with_a_n(0.05);
        s.thresholds.g_e_sn = 0.1;
        assert_eq!(ip_n(&s).unwrap(), 0.0);
        s.thresholds.g_e_sn = 0.05;
        assert_eq!(ip_n(&s).unwrap(), 0.0);
        s.thresholds.g_e_sn = 0.049;
        assert!(ip_n(&s).unwrap() > 0.0);
    }

    #[test]
    fn device_signal_unreadable_to_eves() {
        for th in [9.0, 12.0] {
            let mut s = baseline();
            s.thresholds.g_e_sc = th;
            assert_eq!(ip_c(&s).unwrap(), 0.0, "g_E_sC = {th}");
        }
        let mut s = baseline();
        s.thresholds.g_e_sc = 8.9;
        assert!(ip_c(&s).unwrap() > 0.0);
    }

    #[test]
    fn no_eves_no_interception() {
        let mut s = baseline();
        s.eves.lambda_e = 0.0;
        assert_eq!(
            ip_all(&s).unwrap(),
            Triple {
                far: 0.0,
                near: 0.0,
                bd: 0.0
            }
        );
        assert_eq!(
            ip_all_asy(&s).unwrap(),
            Triple {
                far: 0.0,
                near: 0.0,
                bd: 0.0
            }
        );
    }

    #[test]
    fn invalid_scenarios_are_rejected_not_evaluated() {
        let mut s = baseline();
        s.params.theta = 0.3;
        assert!(op_all(&s).is_err());
        assert!(ip_all(&s).is_err());
    }
}

mod invariance {
    use super::*;

    #[test]
    fn intercept_ignores_cancellation_efficiency() {
        let reference = ip_all(&baseline()).unwrap();
        for eta in [0.0, 0.5, 1.0] {
            let mut s = baseline();
            s.params.eta = eta;
            assert_eq!(ip_all(&s).unwrap(), reference);
        }
    }

    #[test]
    fn device_intercept_ignores_power_split() {
        let reference = ip_c(&baseline()).unwrap();
        for a_n in [0.1, 0.2, 0.4] {
            assert_eq!(ip_c(&baseline().with_a_n(a_n)).unwrap(), reference);
        }
    }
}

mod trends {
    use super::*;

    #[test]
    fn snr() {
        let (op, ip) = along(&grid(0.0, 60.0, 5.0), |db| baseline().with_gamma_db(db));
        for pick in [FAR, NEAR, BD] {
            assert!(non_increasing(&column(&op, pick)));
            assert!(non_decreasing(&column(&ip, pick)));
        }
    }

    #[test]
    fn eve_density_and_exclusion_radius() {
        let (_, ip) = along(&[0.0, 1e-5, 1e-4, 5e-4, 1e-3], |l| {
            let mut s = baseline();
            s.eves.lambda_e = l;
            s
        });
        for pick in [FAR, NEAR, BD] {
            assert!(non_decreasing(&column(&ip, pick)));
        }
        let (_, ip) = along(&[2.0, 5.0, 10.0, 20.0, 50.0], |r| {
            let mut s = baseline();
            s.geometry.r_p = r;
            s
        });
        for pick in [FAR, NEAR, BD] {
            let col = column(&ip, pick);
            assert!(non_increasing(&col));
            assert!(col[4] < col[0]);
        }
    }

    #[test]
    fn reflection_coefficient() {
        let betas = grid(0.05, 0.95, 0.05);
        let (op, ip) = along(&betas, |b| {
            let mut s = baseline();
            s.params.beta = b;
            s
        });
        assert!(non_decreasing(&column(&op, FAR)));
        assert!(non_decreasing(&column(&op, NEAR)));
        assert!(non_increasing(&column(&ip, FAR)));
        assert!(non_increasing(&column(&ip, NEAR)));
        assert!(non_decreasing(&column(&ip, BD)));

        let op_c = column(&op, BD);
        let (argmin, _) = op_c.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
        assert!(
            argmin > 0 && argmin < betas.len() - 1,
            "minimum at beta = {}",
            betas[argmin]
        );
    }

    #[test]
    fn power_fraction() {
        let (op, ip) = along(&grid(0.5, 0.95, 0.05), |t| {
            let mut s = baseline();
            s.params.theta = t;
            s
        });
        for pick in [FAR, NEAR, BD] {
            assert!(non_increasing(&column(&op, pick)));
            assert!(non_decreasing(&column(&ip, pick)));
        }
    }

    #[test]
    fn near_outage_never_exceeds_device_outage() {
        for db in grid(0.0, 60.0, 10.0) {
            let s = baseline().with_gamma_db(db);
            assert!(op_n(&s).unwrap() <= op_c(&s).unwrap());
        }
    }
}

mod high_snr {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b.max(1e-6)).abs()
    }

    #[test]
    fn floors() {
        let s = baseline();
        assert!((op_floor_f(&s).unwrap() - 0.0146).abs() < 5e-4);
        assert!((op_floor_nc(&s).unwrap() - 0.0259).abs() < 1e-3);
        let floors = op_floors(&s).unwrap();
        assert_eq!(floors.near, floors.bd);
        let far = baseline().with_gamma_db(70.0);
        assert!(rel(op_f(&far).unwrap(), floors.far) < 0.02);
        assert!(rel(op_c(&far).unwrap(), floors.bd) < 0.02);
        assert!(rel(op_n(&far).unwrap(), floors.near) < 0.02);
    }

    #[test]
    fn zero_diversity() {
        let s = baseline();
        for op in [op_f, op_n, op_c] {
            assert!(diversity_order(op, &s, 50.0, 60.0).unwrap().abs() < 0.05);
        }
    }

    #[test]
    fn asymptotic_forms_track_exact_values() {
        let s = baseline().with_gamma_db(50.0);
        let (op, op_asy) = (op_all(&s).unwrap(), op_all_asy(&s).unwrap());
        for pick in [FAR, NEAR, BD] {
            assert!(rel(pick(&op_asy), pick(&op)) <= 0.05);
        }
        let (ip, ip_asy) = (ip_all(&s).unwrap(), ip_all_asy(&s).unwrap());
        for pick in [FAR, NEAR, BD] {
            assert!(rel(pick(&ip_asy), pick(&ip)) <= 0.10);
        }
    }

    #[test]
    fn quadrature_order_doubling() {
        for db in [30.0, 50.0] {
            let s = baseline().with_gamma_db(db);
            assert!(op_c_checked(&s).unwrap().delta() < 1e-6);
            assert!(ip_c_checked(&s).unwrap().delta() < 1e-6);
        }
        let s = baseline().with_gamma_db(10.0);
        assert!(op_c_checked(&s).unwrap().delta() < 1e-4);
        assert!(ip_c_checked(&s).unwrap().delta() < 1e-6);
    }
}
