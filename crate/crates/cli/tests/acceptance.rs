//! Acceptance suite: one PASS/FAIL line per criterion with its runtime.
//! Runs without the libtest harness so the lines are always printed.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use olx_core::evaluate::{calibrate_truncation, zeta_em, zeta_eta};
use olx_core::lfamily::{dirichlet_l1, sym2_residue, tau_table, ModelSpec};
use olx_core::mertens::truncated_product_at_1;
use olx_core::primes::sieve_primes;
use olx_core::resonator::moments::DEFAULT_N_CUTOFF;
use olx_core::resonator::{moment_audit, resonance_at};
use olx_core::scan::{bound_report, grid_scan};
use olx_core::{Complex64, Model, EULER_GAMMA};

/// Largest grid value of |F(1+it; 10^5)| for zeta on [10, 10^6], step 0.05,
/// recorded by the first run.
const PINNED_SCAN_MAX: f64 = 5.560443096730917;
const PINNED_SCAN_T: f64 = 534573.7000000001;

type Check = Result<String, String>;

fn model(spec: &str) -> Model {
    spec.parse::<ModelSpec>().unwrap().build().unwrap()
}

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mertens_third() -> Check {
    let x = 1e6f64;
    let ratio = truncated_product_at_1(&model("zeta"), x).map_err(|e| e.to_string())? / (EULER_GAMMA.exp() * x.ln());
    ensure((0.995..=1.005).contains(&ratio), format!("ratio {ratio}"))
}

fn mertens_square() -> Check {
    let x = 1e6f64;
    let p1 = truncated_product_at_1(&model("zeta"), x).unwrap();
    let p2 = truncated_product_at_1(&model("zeta^2"), x).unwrap();
    let ratio = p2 / ((2.0 * EULER_GAMMA).exp() * x.ln().powi(2));
    let power = ((p2 - p1 * p1) / p2).abs();
    ensure((ratio - 1.0).abs() <= 0.01 && power <= 1e-12, format!("ratio {ratio}, power-law gap {power:e}"))
}

fn quadratic_fields() -> Check {
    let x = 1e6f64;
    let scale = EULER_GAMMA.exp() * x.ln();
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let r_i = truncated_product_at_1(&model("dedekind:-4"), x).unwrap() / (PI / 4.0 * scale);
    let r_5 = truncated_product_at_1(&model("dedekind:5"), x).unwrap() / (2.0 * phi.ln() / 5f64.sqrt() * scale);
    ensure(
        (r_i - 1.0).abs() <= 0.01 && (r_5 - 1.0).abs() <= 0.01,
        format!("Q(i) ratio {r_i}, Q(sqrt 5) ratio {r_5}"),
    )
}

fn rankin_selberg() -> Check {
    let x = 1e4f64;
    let rho = sym2_residue::<f64>(10_000).map_err(|e| e.to_string())?;
    let product = truncated_product_at_1(&model("rs-delta:10000"), x).unwrap();
    let ratio = product / (rho.value * EULER_GAMMA.exp() * x.ln());
    let tol = 0.05 + rho.tail_estimate / rho.value;
    ensure(
        (ratio - 1.0).abs() <= tol,
        format!("ratio {ratio}, rho_f {} (tail {:e}), tolerance {tol}", rho.value, rho.tail_estimate),
    )
}

fn resonance_identity() -> Check {
    let mut worst = 0.0f64;
    for spec in ["zeta", "zeta^3", "dedekind:-4", "rs-delta:1000"] {
        let m = model(spec);
        for x in [10.0, 100.0, 1000.0] {
            let r = resonance_at(&m, x).map_err(|e| e.to_string())?;
            worst = worst.max(((r.resonance_product - r.mertens_factor * r.defect) / r.resonance_product).abs());
        }
    }
    ensure(worst <= 1e-12, format!("largest relative gap {worst:e}"))
}

fn moment_inequality() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for spec in ["zeta", "dedekind:-4"] {
        let a = moment_audit(&model(spec), 20.0, 5000.0, DEFAULT_N_CUTOFF, 0.05).map_err(|e| e.to_string())?;
        ok &= a.inequality_holds && a.ratio >= a.resonance_product - a.allowance && a.i2_relative_gap <= 1e-6;
        details.push(format!(
            "{spec}: I1/I2 {} vs {} (allowance {:e}), I2 gap {:e}",
            a.ratio, a.resonance_product, a.allowance, a.i2_relative_gap
        ));
    }
    ensure(ok, details.join("; "))
}

fn oracle_agreement() -> Check {
    let mut worst = 0.0f64;
    for i in 0..20 {
        let s = Complex64::new(1.0, 1.0 + 99.0 * i as f64 / 19.0);
        let a = zeta_em(s).map_err(|e| e.to_string())?;
        let b = zeta_eta(s).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).norm() / (1.0 + a.norm()));
    }
    let l1 = (dirichlet_l1::<f64>(-4).unwrap() - PI / 4.0).abs();
    ensure(worst <= 1e-10 && l1 <= 1e-9, format!("zeta gap {worst:e}, L(1, chi_-4) error {l1:e}"))
}

fn calibration() -> Check {
    let s = calibrate_truncation(&model("zeta"), (100.0, 1000.0), 1e6, 100, 0).map_err(|e| e.to_string())?;
    ensure(s.median <= 0.02 && s.max <= 0.1, format!("median {}, max {}", s.median, s.max))
}

fn ramanujan_tau() -> Check {
    let n = 10_000usize;
    let tau = tau_table(n).map_err(|e| e.to_string())?;
    let mut primes = 0;
    for p in sieve_primes(n as u64).unwrap().iter() {
        let t = tau.get(p as usize).unwrap() as f64;
        if t.abs() > 2.0 * (p as f64).powf(5.5) {
            return Err(format!("|tau({p})| exceeds 2 p^(11/2)"));
        }
        primes += 1;
    }
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut pairs = 0u64;
    for m in 2..=n {
        for k in 2..=n / m {
            if gcd(m, k) == 1 {
                let prod = tau.get(m).unwrap().checked_mul(tau.get(k).unwrap()).ok_or("overflow")?;
                if tau.get(m * k).unwrap() != prod {
                    return Err(format!("tau({}) != tau({m}) tau({k})", m * k));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{primes} primes, {pairs} coprime pairs"))
}

fn run_olx(threads: &str, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_olx"))
        .args(args)
        .env("OLX_THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    Ok(out.stdout)
}

fn determinism() -> Check {
    let runs: [&[&str]; 2] = [
        &["mertens", "--model", "zeta", "--x", "1e6"],
        &["scan", "--model", "zeta", "--t-min", "1000", "--t-max", "3000", "--step", "0.01", "--Y", "1e5", "--top-k", "5"],
    ];
    let mut sizes = Vec::new();
    for args in runs {
        let one = run_olx("1", args)?;
        let four = run_olx("4", args)?;
        if one != four {
            return Err(format!("`olx {}` differs between 1 and 4 threads", args.join(" ")));
        }
        sizes.push(one.len());
    }
    Ok(format!("identical outputs ({} and {} bytes)", sizes[0], sizes[1]))
}

fn scan_regression() -> Check {
    let z = model("zeta");
    let records = grid_scan(&z, 10.0, 1e6, 0.05, 1e5, 1).map_err(|e| e.to_string())?;
    let top = records[0];
    let report = bound_report(&records, &z, 1e6).map_err(|e| e.to_string())?;
    let pinned = (top.magnitude - PINNED_SCAN_MAX).abs() <= 1e-12 * PINNED_SCAN_MAX && top.t == PINNED_SCAN_T;
    ensure(
        top.magnitude >= 2.0 && pinned && (report.bound - 6.396).abs() < 1e-3 && report.conjectural.is_some(),
        format!("max {} at t={} (pinned {PINNED_SCAN_MAX}), bound {}, ratio {}", top.magnitude, top.t, report.bound, report.ratio),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 11] = [
        ("Mertens third theorem, zeta at 1e6", Duration::from_secs(5), mertens_third),
        ("generalized Mertens, zeta^2 at 1e6", Duration::from_secs(5), mertens_square),
        ("quadratic fields Q(i) and Q(sqrt 5) at 1e6", Duration::from_secs(10), quadratic_fields),
        ("Rankin-Selberg Delta x Delta at 1e4", Duration::from_secs(30), rankin_selberg),
        ("resonance factorization identity", Duration::from_secs(1), resonance_identity),
        ("moment inequality at X=20, T=5000", Duration::from_secs(60), moment_inequality),
        ("direct oracle agreement", Duration::from_secs(5), oracle_agreement),
        ("truncation calibration, Y=1e6", Duration::from_secs(60), calibration),
        ("Ramanujan tau bound and multiplicativity", Duration::from_secs(30), ramanujan_tau),
        ("determinism across OLX_THREADS", Duration::from_secs(60), determinism),
        ("scan regression on [10, 1e6]", Duration::from_secs(600), scan_regression),
    ];
    let mut failures = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= *budget => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over runtime budget")),
            Err(d) => ("FAIL", d),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "{verdict} criterion {:>2}: {name} [{:.2} s / {} s] {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 11 criteria passed");
}
