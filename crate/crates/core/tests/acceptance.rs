//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ambc_pls_core::intercept::{ip_all, ip_all_asy, ip_c, ip_c_checked, q_v};
use ambc_pls_core::model::{Scenario, Triple};
use ambc_pls_core::montecarlo::{estimate_ip, estimate_op, SimConfig};
use ambc_pls_core::outage::{diversity_order, op_all, op_all_asy, op_c, op_c_checked, op_f, op_floors, op_n, table1};
use ambc_pls_core::specfun::{bessel_k0, e1, gamma, gauss_laguerre, upper_gamma};
use ambc_pls_core::sweep::ToleranceProfile;
use common::{exp_sinh, q_v_brute, x_ex_e1_asymptotic};

type Outcome = Result<String, String>;
type BranchCase = (&'static str, Scenario, fn(&Scenario) -> f64, f64);
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn baseline() -> Scenario {
    Scenario::baseline()
}

fn outage_vs_simulation() -> Outcome {
    let start = Instant::now();
    let sim = SimConfig::new(1_000_000, 2024);
    let mut worst: f64 = 0.0;
    for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
        let s = baseline().with_gamma_db(db);
        let mc = estimate_op(&s, &sim).map_err(|e| e.to_string())?;
        let exact = op_all(&s).map_err(|e| e.to_string())?;
        for (m, a) in mc.into_array().iter().zip(exact.into_array()) {
            worst = worst.max((m.p_hat - a).abs() / m.wilson_se());
        }
    }
    let took = start.elapsed();
    check(
        worst <= 3.0 && took <= Duration::from_secs(120),
        format!("worst deviation {worst:.2} SE over 15 comparisons, {took:.1?}"),
    )
}

fn intercept_vs_simulation() -> Outcome {
    let start = Instant::now();
    let sim = SimConfig::new(100_000, 2024);
    let allowance = ToleranceProfile::default().intercept;
    let mut worst: f64 = 0.0;
    for db in [10.0, 20.0, 30.0] {
        let s = baseline().with_gamma_db(db);
        let mc = estimate_ip(&s, &sim).map_err(|e| e.to_string())?;
        let exact = ip_all(&s).map_err(|e| e.to_string())?;
        for (m, a) in mc.into_array().iter().zip(exact.into_array()) {
            worst = worst.max((m.p_hat - a).abs() / allowance.width(m));
        }
    }
    let took = start.elapsed();
    check(
        worst <= 1.0 && took <= Duration::from_secs(300),
        format!("worst deviation {worst:.2} of allowance over 9 comparisons, {took:.1?}"),
    )
}

fn outage_floors() -> Outcome {
    let s = baseline();
    let floors = op_floors(&s).map_err(|e| e.to_string())?;
    let t = table1(&s).map_err(|e| e.to_string())?;
    let oracle_f = 1.0 - x_ex_e1_asymptotic(t.far.unwrap().a0);
    let oracle_nc = 1.0 - x_ex_e1_asymptotic(t.near.unwrap().a1);
    let high = baseline().with_gamma_db(70.0);
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    let gap_f = rel(op_f(&high).unwrap(), floors.far);
    let gap_c = rel(op_c(&high).unwrap(), floors.bd);
    check(
        (floors.far - 0.0146).abs() <= 5e-4
            && (floors.near - 0.0259).abs() <= 1e-3
            && (floors.far - oracle_f).abs() < 1e-9
            && (floors.near - oracle_nc).abs() < 1e-9
            && gap_f < 0.02
            && gap_c < 0.02
            && floors.near == floors.bd,
        format!(
            "floor_f {:.6}, floor_nc {:.6}, 70 dB gaps {:.2e} / {:.2e}",
            floors.far, floors.near, gap_f, gap_c
        ),
    )
}

fn diversity() -> Outcome {
    let s = baseline();
    let d: Vec<f64> = [op_f, op_n, op_c]
        .into_iter()
        .map(|op| diversity_order(op, &s, 50.0, 60.0))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    check(
        d.iter().all(|x| x.abs() < 0.05),
        format!("slopes {:.1e} {:.1e} {:.1e}", d[0], d[1], d[2]),
    )
}

fn asymptotic_consistency() -> Outcome {
    let s = baseline().with_gamma_db(50.0);
    let rel = |a: f64, b: f64| ((a - b) / b.max(1e-6)).abs();
    let worst = |x: Triple<f64>, y: Triple<f64>| {
        x.into_array()
            .iter()
            .zip(y.into_array())
            .map(|(a, b)| rel(*a, b))
            .fold(0.0, f64::max)
    };
    let op = worst(op_all_asy(&s).unwrap(), op_all(&s).unwrap());
    let ip = worst(ip_all_asy(&s).unwrap(), ip_all(&s).unwrap());
    check(
        op <= 0.05 && ip <= 0.10,
        format!("largest relative gap: outage {op:.2e}, intercept {ip:.2e}"),
    )
}

fn invariances() -> Outcome {
    let reference = ip_all(&baseline()).unwrap();
    let eta_ok = [0.0, 0.5, 1.0].iter().all(|&eta| {
        let mut s = baseline();
        s.params.eta = eta;
        ip_all(&s).unwrap() == reference
    });
    let split_ok = [0.1, 0.2, 0.4]
        .iter()
        .all(|&a_n| ip_c(&baseline().with_a_n(a_n)).unwrap() == reference.bd);
    check(eta_ok && split_ok, format!("eta {eta_ok}, a_N {split_ok}"))
}

fn monotone(xs: &[f64], up: bool) -> bool {
    xs.windows(2)
        .all(|w| if up { w[1] >= w[0] - 1e-12 } else { w[1] <= w[0] + 1e-12 })
}

fn trends() -> Outcome {
    let mut failures = Vec::new();
    let mut expect = |name: &str, ok: bool| {
        if !ok {
            failures.push(name.to_string());
        }
    };
    let sweep = |values: &[f64], set: &dyn Fn(&mut Scenario, f64)| -> (Vec<Triple<f64>>, Vec<Triple<f64>>) {
        values
            .iter()
            .map(|&v| {
                let mut s = baseline();
                set(&mut s, v);
                (op_all(&s).unwrap(), ip_all(&s).unwrap())
            })
            .unzip()
    };
    let col = |rows: &[Triple<f64>], k: usize| rows.iter().map(|t| t.into_array()[k]).collect::<Vec<_>>();

    let snr: Vec<f64> = (0..=12).map(|k| 5.0 * k as f64).collect();
    let (op, ip) = sweep(&snr, &|s, v| *s = s.with_gamma_db(v));
    for k in 0..3 {
        expect("OP in gamma", monotone(&col(&op, k), false));
        expect("IP in gamma", monotone(&col(&ip, k), true));
    }
    let (_, ip) = sweep(&[0.0, 1e-5, 1e-4, 5e-4, 1e-3], &|s, v| s.eves.lambda_e = v);
    for k in 0..3 {
        expect("IP in lambda_e", monotone(&col(&ip, k), true));
    }
    let (_, ip) = sweep(&[2.0, 5.0, 10.0, 20.0, 50.0], &|s, v| s.geometry.r_p = v);
    for k in 0..3 {
        expect("IP in r_p", monotone(&col(&ip, k), false));
    }
    let betas: Vec<f64> = (1..=19).map(|k| 0.05 * k as f64).collect();
    let (op, ip) = sweep(&betas, &|s, v| s.params.beta = v);
    expect("op_f in beta", monotone(&col(&op, 0), true));
    expect("op_n in beta", monotone(&col(&op, 1), true));
    expect("ip_f in beta", monotone(&col(&ip, 0), false));
    expect("ip_n in beta", monotone(&col(&ip, 1), false));
    expect("ip_c in beta", monotone(&col(&ip, 2), true));
    let op_c = col(&op, 2);
    let argmin = (0..op_c.len()).min_by(|&a, &b| op_c[a].total_cmp(&op_c[b])).unwrap();
    expect("op_c interior minimum in beta", argmin > 0 && argmin + 1 < op_c.len());
    let thetas: Vec<f64> = (0..=9).map(|k| 0.5 + 0.05 * k as f64).collect();
    let (op, ip) = sweep(&thetas, &|s, v| s.params.theta = v);
    for k in 0..3 {
        expect("OP in theta", monotone(&col(&op, k), false));
        expect("IP in theta", monotone(&col(&ip, k), true));
    }
    check(
        failures.is_empty(),
        if failures.is_empty() {
            format!("op_c minimum at beta = {:.2}", betas[argmin])
        } else {
            format!("violated: {}", failures.join(", "))
        },
    )
}

fn degenerate_branches() -> Outcome {
    let mut failures = Vec::new();
    let with = |f: &dyn Fn(&mut Scenario)| {
        let mut s = baseline();
        f(&mut s);
        s
    };
    let cases: Vec<BranchCase> = vec![
        (
            "op_f at a_F/a_N",
            with(&|s| s.thresholds.g_f_sf = 4.0),
            |s| op_f(s).unwrap(),
            1.0,
        ),
        (
            "op_f above a_F/a_N",
            with(&|s| s.thresholds.g_f_sf = 10.0),
            |s| op_f(s).unwrap(),
            1.0,
        ),
        (
            "op_n at a_F/a_N",
            with(&|s| s.thresholds.g_n_sf = 4.0),
            |s| op_n(s).unwrap(),
            1.0,
        ),
        (
            "op_c at a_F/a_N",
            with(&|s| s.thresholds.g_n_sf = 6.0),
            |s| op_c(s).unwrap(),
            1.0,
        ),
        (
            "op_c at residual ceiling",
            with(&|s| s.thresholds.g_n_sc = 18.0),
            |s| op_c(s).unwrap(),
            1.0,
        ),
        (
            "op_c above residual ceiling",
            with(&|s| s.thresholds.g_n_sc = 20.0),
            |s| op_c(s).unwrap(),
            1.0,
        ),
        (
            "ip_f at ceiling",
            with(&|s| {
                *s = s.with_a_n(0.4);
                s.params.theta = 0.5;
                s.thresholds.g_e_sf = 1.0;
            }),
            |s| ip_all(s).unwrap().far,
            0.0,
        ),
        (
            "ip_n at ceiling",
            with(&|s| {
                *s = s.with_a_n(0.05);
                s.params.theta = 0.5;
                s.thresholds.g_e_sn = 0.05;
            }),
            |s| ip_all(s).unwrap().near,
            0.0,
        ),
        (
            "ip_c at ceiling",
            with(&|s| s.thresholds.g_e_sc = 9.0),
            |s| ip_c(s).unwrap(),
            0.0,
        ),
        (
            "ip_c above ceiling",
            with(&|s| s.thresholds.g_e_sc = 12.0),
            |s| ip_c(s).unwrap(),
            0.0,
        ),
    ];
    let n = cases.len();
    for (name, s, f, want) in cases {
        if f(&s) != want {
            failures.push(name);
        }
    }
    let no_eves = with(&|s| s.eves.lambda_e = 0.0);
    let zero = Triple {
        far: 0.0,
        near: 0.0,
        bd: 0.0,
    };
    if ip_all(&no_eves).unwrap() != zero || ip_all_asy(&no_eves).unwrap() != zero {
        failures.push("no eves");
    }
    let control = op_all(&baseline()).unwrap().into_array().iter().all(|p| *p < 1.0)
        && ip_all(&baseline()).unwrap().into_array().iter().all(|p| *p > 0.0);
    if !control {
        failures.push("baseline control");
    }
    check(
        failures.is_empty(),
        format!("{} branch cases, failures: {:?}", n + 2, failures),
    )
}

fn special_functions() -> Outcome {
    let e1_ref = exp_sinh(|t| (-t).exp() / t, 1.0, 1e-13);
    let k0_ref = exp_sinh(|t| (-t.cosh()).exp(), 0.0, 1e-13);
    let g_ref = exp_sinh(|t| (-t).exp() / t.sqrt(), 1.0, 1e-13);
    let errs = [
        (e1(1.0).unwrap() - e1_ref).abs(),
        (bessel_k0(1.0).unwrap() - k0_ref).abs(),
        (upper_gamma(0.5, 1.0).unwrap() - g_ref).abs(),
    ];
    let mut exact = true;
    for n in [5usize, 10, 30] {
        let rule = gauss_laguerre(n).unwrap();
        for k in 0..2 * n {
            let sum: f64 = rule.iter().map(|node| node.weight * node.root.powi(k as i32)).sum();
            let want = gamma(k as f64 + 1.0).unwrap();
            exact &= ((sum - want) / want).abs() < 1e-9;
        }
    }
    let s = baseline();
    let op_delta = op_c_checked(&s).unwrap().delta();
    let ip_delta = ip_c_checked(&s).unwrap().delta();
    check(
        errs.iter().all(|e| *e < 1e-8) && exact && op_delta < 1e-6 && ip_delta < 1e-6,
        format!(
            "E1/K0/Gamma errors {:.1e} {:.1e} {:.1e}, Laguerre exact {exact}, doubling {op_delta:.1e} / {ip_delta:.1e}",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn q_v_brute_force() -> Outcome {
    let s = baseline();
    let mut worst: f64 = 0.0;
    for r in [15.0, 30.0, 100.0] {
        let got = q_v(0.1, r, &s).map_err(|e| e.to_string())?;
        worst = worst.max((got - q_v_brute(&s, 0.1, r)).abs());
    }
    check(worst < 1e-4, format!("largest gap {worst:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("analytic vs Monte Carlo outage", outage_vs_simulation),
        ("analytic vs Monte Carlo intercept", intercept_vs_simulation),
        ("outage floors", outage_floors),
        ("zero diversity order", diversity),
        ("asymptotic consistency", asymptotic_consistency),
        ("exact invariances", invariances),
        ("trend suite", trends),
        ("degenerate branches", degenerate_branches),
        ("special-function oracles", special_functions),
        ("q_v brute-force equivalence", q_v_brute_force),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag} AC{:<2} {name}: {detail} [{took:.2?}]", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
