//! Acceptance suite. Prints one line per criterion and exits non-zero if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use ddf_core::analysis::{
    aber_asymptotic_wsc2, aber_wsc1, aber_wsc2, cdf_xiw, diversity_order_estimate, optimize_beta,
};
use ddf_core::sim::{evaluate_point, run_simulation, sweep};
use ddf_core::validate::{random_tuples, wsc1_vs_integration, wsc2_vs_integration, Formulas};
use ddf_core::{BerEstimate, ClosedFormContext, SchemeId, SimConfig, SweepAxis, SystemParams};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn sim_cfg(snr_db: f64, block_len: usize, schemes: &[SchemeId]) -> SimConfig {
    let mut c = SimConfig::new(SystemParams::new(snr_db, [1.0; 3]).with_block_len(block_len))
        .with_schemes(schemes);
    c.seed = 1;
    c
}

fn formula_vs_integration() -> Outcome {
    let tuples = random_tuples(1, 30);
    let f = Formulas::default();
    let e1 = wsc1_vs_integration(&f.wsc1, &tuples).map_err(err)?;
    let e2 = wsc2_vs_integration(&f.wsc2, &tuples).map_err(err)?;
    check(
        e1 < 1e-4 && e2 < 1e-4,
        format!("30 tuples, worst rel err wsc1 {e1:.2e}, wsc2 {e2:.2e} (< 1e-4)"),
    )
}

// Per-symbol blocks (L = 1) keep bit errors independent, which the Wilson
// interval assumes.
fn simulation_vs_formula() -> Outcome {
    let mut misses = Vec::new();
    let mut min_err = u64::MAX;
    for snr in [5.0, 10.0, 15.0, 20.0] {
        let mut c = sim_cfg(snr, 1, &[SchemeId::Sc, SchemeId::Wsc1, SchemeId::Wsc2]);
        c.min_errors = 500;
        c.max_blocks = 50_000_000;
        let point = evaluate_point(&c).map_err(err)?;
        for r in &point.results {
            let want = r.analytic.ok_or("missing closed form")?;
            min_err = min_err.min(r.estimate.bit_errors);
            if !r.estimate.contains(want) || r.estimate.bit_errors < 500 {
                misses.push(format!(
                    "{} dB {}: sim {:.4e} [{:.4e}, {:.4e}] vs {want:.4e}",
                    snr,
                    r.estimate.scheme,
                    r.estimate.ber,
                    r.estimate.ci95_low,
                    r.estimate.ci95_high
                ));
            }
        }
    }
    check(
        misses.is_empty(),
        if misses.is_empty() {
            format!("12/12 points inside 95% Wilson CI, >= {min_err} errors each")
        } else {
            misses.join("; ")
        },
    )
}

fn zero_snr_anchor() -> Outcome {
    let pe = aber_wsc1(1.0, &ClosedFormContext::new(0.0, 0.0, 0.0).map_err(err)?).map_err(err)?;
    let mut c = SimConfig::new(SystemParams::new(0.0, [0.0; 3]));
    c.max_blocks = 400;
    c.min_errors = 0;
    let sims = run_simulation(&c).map_err(err)?;
    let worst = sims.iter().map(|e| (e.ber - 0.5).abs()).fold(0.0, f64::max);
    let bits = sims[0].bits;
    check(
        (pe - 0.5).abs() <= 1e-12 && worst < 0.01 && bits >= 100_000,
        format!("closed form {pe}, pure-noise |ber - 0.5| <= {worst:.4} over {bits} bits"),
    )
}

fn cancellation_identity() -> Outcome {
    let ctx = ClosedFormContext::new(3.0, 7.0, 20.0).map_err(err)?;
    let xs: Vec<f64> = (1..=10).map(|i| 0.3 * i as f64).collect();
    let betas: Vec<f64> = (0..10).map(|i| 0.05 * 1.5f64.powi(i)).collect();
    let gammas = [0.0, 0.5, 4.0, 60.0];
    let mut worst: f64 = 0.0;
    for &x in &xs {
        for &b in &betas {
            let diff = |g: f64| -> Result<f64, String> {
                Ok(cdf_xiw(x, b, g, &ctx).map_err(err)? - cdf_xiw(-x, b, g, &ctx).map_err(err)?)
            };
            let base = diff(gammas[0])?;
            for &g in &gammas[1..] {
                worst = worst.max((diff(g)? - base).abs());
            }
        }
    }
    check(
        worst <= 1e-12,
        format!("10x10x4 grid, max spread {worst:.1e}"),
    )
}

fn beta_opt(snr_db: f64, sigma_sq: [f64; 3]) -> Result<f64, String> {
    let ctx = ClosedFormContext::from_params(&SystemParams::new(snr_db, sigma_sq)).map_err(err)?;
    Ok(optimize_beta(&ctx).map_err(err)?.beta)
}

fn optimal_weight_trends() -> Outcome {
    let grid = [0.25, 1.0, 4.0, 16.0];
    let mut notes = Vec::new();
    let mut ok = true;
    for snr in [30.0, 20.0] {
        let by_s1: Vec<f64> = grid
            .iter()
            .map(|&s| beta_opt(snr, [1.0, s, 1.0]))
            .collect::<Result<_, _>>()?;
        let by_s2: Vec<f64> = grid
            .iter()
            .map(|&s| beta_opt(snr, [1.0, 1.0, s]))
            .collect::<Result<_, _>>()?;
        ok &= by_s1.windows(2).all(|w| w[1] >= w[0]);
        ok &= by_s2.windows(2).all(|w| w[1] <= w[0]);
        notes.push(format!(
            "{snr} dB beta_opt vs s1 {by_s1:.4?}, vs s2 {by_s2:.4?}"
        ));
    }

    // Simulated sweep at 20 dB on common realisations.
    let (lo, hi, n) = (0.05f64, 2.0f64, 20);
    let step = (hi / lo).ln() / (n - 1) as f64;
    let betas: Vec<f64> = (0..n).map(|i| (lo.ln() + step * i as f64).exp()).collect();
    let mut c = sim_cfg(20.0, 256, &[SchemeId::Wsc1]);
    c.max_blocks = 20_000;
    c.min_errors = 0;
    let res = sweep(&c, SweepAxis::Beta, &betas).map_err(err)?;
    let est: Vec<BerEstimate> = res
        .points
        .iter()
        .map(|p| p.get(SchemeId::Wsc1).unwrap().estimate)
        .collect();
    let fewest = est.iter().map(|e| e.bit_errors).min().unwrap();
    let (k, best) = est
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.ber.total_cmp(&b.1.ber))
        .unwrap();
    let opt = beta_opt(20.0, [1.0; 3])?;
    let gap = (betas[k] / opt).ln().abs() / step;
    ok &= fewest >= 300 && gap <= 1.0;
    notes.push(format!(
        "20 dB sweep argmin beta {:.4} (ber {:.3e}) vs beta_opt {opt:.4}: {gap:.2} grid steps, >= {fewest} errors/point",
        betas[k], best.ber
    ));
    check(ok, notes.join("; "))
}

fn slope(points: impl Iterator<Item = Result<(f64, f64), String>>) -> Result<f64, String> {
    let pts: Vec<(f64, f64)> = points.collect::<Result<_, _>>()?;
    diversity_order_estimate(&pts).map_err(err)
}

fn diversity_orders() -> Outcome {
    let snrs: Vec<f64> = (25..=40).map(f64::from).collect();
    let ctx =
        |db: f64| ClosedFormContext::from_params(&SystemParams::new(db, [1.0; 3])).map_err(err);
    let d2 = slope(
        snrs.iter()
            .map(|&db| Ok((db, aber_wsc2(&ctx(db)?).map_err(err)?))),
    )?;
    let d1 = slope(
        snrs.iter()
            .map(|&db| Ok((db, aber_wsc1(1.0, &ctx(db)?).map_err(err)?))),
    )?;
    check(
        (1.7..=2.0).contains(&d2) && (0.9..=1.1).contains(&d1),
        format!("25-40 dB slope wsc2 {d2:.4} in [1.7, 2.0], sc {d1:.4} in [0.9, 1.1]"),
    )
}

fn asymptotic_tightness() -> Outcome {
    let mut devs = Vec::new();
    for db in [25.0, 30.0, 35.0, 40.0] {
        let params = SystemParams::new(db, [1.0; 3]);
        let exact =
            aber_wsc2(&ClosedFormContext::from_params(&params).map_err(err)?).map_err(err)?;
        let approx = aber_asymptotic_wsc2(params.p0()).map_err(err)?;
        devs.push((approx / exact - 1.0).abs());
    }
    let decreasing = devs.windows(2).all(|w| w[1] < w[0]);
    check(
        decreasing && devs[3] < 0.5,
        format!(
            "|asym/exact - 1| at 25/30/35/40 dB: {}",
            devs.iter()
                .map(|d| format!("{d:.2e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    )
}

fn scheme_ordering() -> Outcome {
    let mut c = sim_cfg(20.0, 256, &SchemeId::ALL);
    c.min_errors = 500;
    c.max_blocks = 2_000_000;
    let p = evaluate_point(&c).map_err(err)?;
    let e = |s| p.get(s).unwrap().estimate;
    let (sc, w1, w2, lar) = (
        e(SchemeId::Sc),
        e(SchemeId::Wsc1),
        e(SchemeId::Wsc2),
        e(SchemeId::Lar),
    );
    let below = |a: &BerEstimate, b: &BerEstimate| -> &'static str {
        if a.ber > b.ber {
            "violated"
        } else if a.ci95_high >= b.ci95_low {
            "indeterminate"
        } else {
            "ok"
        }
    };
    let rel = [below(&w2, &w1), below(&w1, &sc), below(&w2, &lar)];
    let min_errors = [sc, w1, w2, lar]
        .iter()
        .map(|e| e.bit_errors)
        .min()
        .unwrap();
    check(
        rel.iter().all(|r| *r == "ok") && min_errors >= 500,
        format!(
            "wsc2 {:.3e} <= wsc1 {:.3e} ({}), wsc1 <= sc {:.3e} ({}), lar {:.3e} > wsc2 ({}), >= {min_errors} errors",
            w2.ber, w1.ber, rel[0], sc.ber, rel[1], lar.ber, rel[2]
        ),
    )
}

fn cli_determinism() -> Outcome {
    let run = |workers: &str| -> Result<Vec<u8>, String> {
        let o = Command::new(env!("CARGO_BIN_EXE_ddf"))
            .args([
                "sweep-snr",
                "--snr-db",
                "5:15:5",
                "--blocks",
                "3000",
                "--seed",
                "42",
                "--workers",
                workers,
            ])
            .output()
            .map_err(err)?;
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
        Ok(o.stdout)
    };
    let a = run("1")?;
    let b = run("8")?;
    check(
        a == b && !a.is_empty(),
        format!("sweep-snr CSV, {} bytes, identical: {}", a.len(), a == b),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("formula vs numerical integration", formula_vs_integration),
        ("simulation vs closed form", simulation_vs_formula),
        ("zero-SNR anchor", zero_snr_anchor),
        ("gamma1 cancellation identity", cancellation_identity),
        (
            "optimal weight trends and beta sweep",
            optimal_weight_trends,
        ),
        ("diversity orders", diversity_orders),
        ("asymptotic tightness", asymptotic_tightness),
        ("scheme ordering at 20 dB", scheme_ordering),
        ("CLI determinism across workers", cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = f();
        let secs = t.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        failed += usize::from(outcome.is_err());
        println!("acceptance {} {tag} {name}: {detail} [{secs:.1}s]", i + 1);
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
