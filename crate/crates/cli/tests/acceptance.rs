//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p wavepacket-cli --test acceptance`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use wavepacket_core::analytic::{
    f0_from_envelope, f0_reflected, f0_timereversed, far_field_variance, FarFieldPoint,
    VarianceScale,
};
use wavepacket_core::optimizer::{optimize, Objective, PulseFamily};
use wavepacket_core::propagator::{max_excitation, propagate, PropagatorConfig, Trajectory};
use wavepacket_core::{AtomParams, ModeGrid, PhotonState, TemporalEnvelope};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn atom() -> AtomParams {
    AtomParams::natural()
}

fn default_grid() -> Arc<ModeGrid> {
    Arc::new(ModeGrid::default_for(&atom()).unwrap())
}

fn run(state: &PhotonState, t_start: f64, t_end: f64) -> Trajectory {
    let cfg = PropagatorConfig::new(&atom(), t_start, t_end);
    propagate(state, &atom(), &cfg).unwrap()
}

fn uniform_deviation(traj: &Trajectory, oracle: impl Fn(f64) -> f64) -> f64 {
    traj.times
        .iter()
        .zip(&traj.prob)
        .map(|(&t, p)| (p - oracle(t)).abs())
        .fold(0.0, f64::max)
}

fn truncated_absorption() -> Outcome {
    let a = atom();
    let grid = default_grid();
    let state = PhotonState::ideal(&grid, &a).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;
    let start = Instant::now();
    // closed form (1 − e^{−ΓT})², recomputed: 0.74765, 0.90290, 0.98657
    for (gamma_t, closed, rounded) in [
        (2.0, 0.7476451, 0.75),
        (3.0, 0.9029046, 0.90),
        (5.0, 0.9865695, 0.99),
    ] {
        let analytic = f0_timereversed(0.0, -gamma_t, &a).unwrap().norm_sqr();
        let (_, numeric) = max_excitation(&run(&state, -gamma_t, 2.0)).unwrap();
        ok &= (analytic - (-gamma_t).exp_m1().powi(2)).abs() < 1e-12
            && (analytic - closed).abs() < 1e-6
            && ((analytic * 100.0).round() / 100.0 - rounded).abs() < 1e-12
            && (numeric - analytic).abs() <= 0.01;
        notes.push(format!(
            "ΓT={gamma_t}: analytic {analytic:.5} numeric {numeric:.4}"
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 10.0;
    notes.push(format!("numeric runtime {secs:.2}s"));
    check(ok, notes.join(", "))
}

fn reflected_response() -> Outcome {
    let a = atom();
    let expected = 4.0 * (-2.0f64).exp();
    let analytic = f0_reflected(2.0, -3.0, &a).unwrap().norm_sqr();
    let traj = run(
        &PhotonState::reflected(&default_grid(), &a).unwrap(),
        -3.0,
        8.0,
    );
    let (t_max, p_max) = max_excitation(&traj).unwrap();
    let before = traj
        .times
        .iter()
        .zip(&traj.prob)
        .filter(|(&t, _)| t <= a.t0())
        .map(|(_, &p)| p)
        .fold(0.0, f64::max);
    check(
        (analytic - expected).abs() < 1e-12
            && (p_max - expected).abs() <= 0.01
            && (t_max - 2.0).abs() <= 0.05
            && before <= 5e-3,
        format!("analytic {analytic:.4}, numeric {p_max:.4} at t={t_max:.4}, max prob before t0 {before:.2e}"),
    )
}

fn gaussian_optimum() -> Outcome {
    let a = atom();
    let analytic = optimize(
        &PulseFamily::gaussian_width(a, (0.2, 5.0)).unwrap(),
        97,
        &Objective::analytic(&a),
    )
    .unwrap();
    let numeric = optimize(
        &PulseFamily::gaussian_width(a, (1.0, 2.0)).unwrap(),
        5,
        &Objective::numeric(default_grid(), &a),
    )
    .unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for r in [&analytic, &numeric] {
        let sigma = r.best_param[0];
        ok &= (sigma - 1.46).abs() <= 0.05
            && (r.best_value - 0.80).abs() <= 0.01
            && (r.best_time - 1.0).abs() <= 0.15;
        notes.push(format!(
            "{}: σ*={sigma:.4} p*={:.4} t_max={:.4}",
            r.objective_mode, r.best_value, r.best_time
        ));
    }
    check(ok, notes.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let a = atom();
    let grid = default_grid();
    let ideal = PhotonState::ideal(&grid, &a).unwrap();
    let mut numeric = 0.0f64;
    for gamma_t in [1.0, 2.0, 3.0, 5.0] {
        let traj = run(&ideal, -gamma_t, 3.0);
        numeric = numeric.max(uniform_deviation(&traj, |t| {
            f0_timereversed(t, -gamma_t, &a).unwrap().norm_sqr()
        }));
    }
    let traj = run(&PhotonState::reflected(&grid, &a).unwrap(), -3.0, 8.0);
    numeric = numeric.max(uniform_deviation(&traj, |t| {
        f0_reflected(t, -3.0, &a).unwrap().norm_sqr()
    }));

    let (rising, falling) = (
        TemporalEnvelope::time_reversed(&a),
        TemporalEnvelope::reflected(&a),
    );
    let mut quadrature = 0.0f64;
    for t_in in [-5.0, -1.0, 0.5] {
        for k in 0..=52 {
            let t = t_in + 0.25 * k as f64;
            let d1 = (f0_from_envelope(&rising, t, t_in, &a).unwrap()
                - f0_timereversed(t, t_in, &a).unwrap())
            .norm();
            let d2 = (f0_from_envelope(&falling, t, t_in, &a).unwrap()
                - f0_reflected(t, t_in, &a).unwrap())
            .norm();
            quadrature = quadrature.max(d1).max(d2);
        }
    }
    check(
        numeric <= 5e-3 && quadrature <= 1e-7,
        format!("numeric-vs-analytic {numeric:.2e} (≤5e-3), quadrature-vs-closed-form {quadrature:.2e} (≤1e-7)"),
    )
}

fn conservation_and_order() -> Outcome {
    let a = atom();
    let traj = run(&PhotonState::ideal(&default_grid(), &a).unwrap(), -5.0, 5.0);
    let drift = traj
        .norm
        .iter()
        .map(|n| (n - 1.0).abs())
        .fold(0.0, f64::max);

    // fourth-order scaling is measured where the time-step error dominates:
    // a narrow band keeps every mode phase well resolved
    let narrow = Arc::new(ModeGrid::new(&a, 20.0, 201).unwrap());
    let state = PhotonState::ideal(&narrow, &a).unwrap();
    let probs = |dt: f64, stride: usize| {
        let cfg = PropagatorConfig::new(&a, -3.0, 2.0)
            .with_dt(dt)
            .with_stride(stride);
        propagate(&state, &a, &cfg).unwrap().prob
    };
    let (p1, p2, p3) = (probs(0.01, 1), probs(0.005, 2), probs(0.0025, 4));
    let diff = |x: &[f64], y: &[f64]| {
        x.iter()
            .zip(y)
            .map(|(u, v)| (u - v).abs())
            .fold(0.0, f64::max)
    };
    let ratio = diff(&p1, &p2) / diff(&p2, &p3);
    check(
        drift <= 1e-6 && (12.0..=20.0).contains(&ratio),
        format!("norm drift {drift:.2e} over 10/Γ, step-halving ratio {ratio:.2}"),
    )
}

fn emission_and_reversal() -> Outcome {
    let a = atom();
    // the exponential law only holds once the band is wide against Γ
    let wide = Arc::new(ModeGrid::new(&a, 2400.0, 12001).unwrap());
    let cfg = PropagatorConfig::new(&a, 0.0, 5.0)
        .with_dt(0.00025)
        .with_stride(40);
    let decay = propagate(&PhotonState::excited_atom(&wide), &a, &cfg).unwrap();
    let decay_dev = uniform_deviation(&decay, |t| (-t).exp());

    let grid = default_grid();
    let emitted = run(&PhotonState::excited_atom(&grid), 0.0, 10.0);
    let got: Vec<f64> = emitted.final_modes.iter().map(|c| c.norm_sqr()).collect();
    let total: f64 = got.iter().sum();
    let reference = PhotonState::ideal(&grid, &a).unwrap().mode_probabilities();
    let num: f64 = got
        .iter()
        .zip(&reference)
        .map(|(g, r)| (g / total - r).powi(2))
        .sum();
    let den: f64 = reference.iter().map(|r| r * r).sum();
    let spectrum_rms = (num / den).sqrt();

    let big_t = 5.0;
    let absorbed = run(&PhotonState::ideal(&grid, &a).unwrap(), -2.0 * big_t, 0.0);
    let emission = run(&PhotonState::excited_atom(&grid), 0.0, big_t);
    let n = emission.f0.len();
    let reversal = absorbed.f0[absorbed.f0.len() - n..]
        .iter()
        .zip(emission.f0.iter().rev())
        .map(|(x, y)| (x.norm() - y.norm()).abs())
        .fold(0.0, f64::max);
    check(
        decay_dev <= 1e-3 && spectrum_rms <= 0.02 && reversal <= 5e-3,
        format!("decay {decay_dev:.2e} (W=2400Γ), spectrum RMS {:.2}%, time reversal {reversal:.2e} at ΓT=5", 100.0 * spectrum_rms),
    )
}

fn far_field_profile() -> Outcome {
    let a = atom().with_omega0(1e4).unwrap();
    let r = 1e3;
    let front = a.t0() - r;
    let var = |theta: f64, t: f64| {
        far_field_variance(
            &FarFieldPoint::new(r, theta, 1.0, t).unwrap(),
            &a,
            VarianceScale::Normalized,
        )
        .unwrap()
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let ahead = (1..=200).all(|k| {
        var(half_pi, front + 0.01 * k as f64) == 0.0 && var(0.7, front + 0.5 * k as f64) == 0.0
    });
    let at_front = var(half_pi, front);

    // least-squares line through ln V against the lag behind the wavefront
    let lags: Vec<f64> = (0..=100).map(|k| 0.1 * k as f64).collect();
    let logs: Vec<f64> = lags.iter().map(|&l| var(half_pi, front - l).ln()).collect();
    let n = lags.len() as f64;
    let (mx, my) = (lags.iter().sum::<f64>() / n, logs.iter().sum::<f64>() / n);
    let sxy: f64 = lags
        .iter()
        .zip(&logs)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum();
    let sxx: f64 = lags.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = lags
        .iter()
        .zip(&logs)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    check(
        ahead && at_front == 1.0 && (-slope - a.gamma()).abs() <= 1e-6 && residual <= 1e-6,
        format!("zero ahead: {ahead}, value at front {at_front}, log slope {:.9}, fit residual {residual:.1e}", -slope),
    )
}

fn read_dir(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .map(|entries| {
            entries
                .map(|e| e.unwrap())
                .map(|e| {
                    (
                        e.file_name().to_string_lossy().into_owned(),
                        std::fs::read(e.path()).unwrap(),
                    )
                })
                .collect()
        })
        .unwrap_or_default()
}

fn determinism() -> Outcome {
    let scenarios = [
        "fig1",
        "fig2",
        "gaussian",
        "truncation",
        "emission",
        "variance",
    ];
    let root = std::env::temp_dir().join(format!("wavepacket-acceptance-{}", std::process::id()));
    let mut files = 0;
    for pass in ["a", "b"] {
        let out = Command::new(env!("CARGO_BIN_EXE_wavepacket"))
            .arg("run")
            .args(scenarios)
            .arg("--out-dir")
            .arg(root.join(pass))
            .env_remove("WAVEPACKET_OUT_DIR")
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!(
                "run failed: {}",
                String::from_utf8_lossy(&out.stderr)
            ));
        }
    }
    let (a, b) = (read_dir(&root.join("a")), read_dir(&root.join("b")));
    let _ = std::fs::remove_dir_all(&root);
    files += a.len();
    let mismatched: Vec<&String> = a.keys().filter(|k| b.get(*k) != a.get(*k)).collect();
    check(
        files > 0 && a.len() == b.len() && mismatched.is_empty(),
        format!(
            "{files} files from {} bundled scenarios, mismatches: {mismatched:?}",
            scenarios.len()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "truncated time-reversed pulse absorption",
            truncated_absorption,
        ),
        ("reflected pulse response and causality", reflected_response),
        (
            "gaussian width optimum in both objective modes",
            gaussian_optimum,
        ),
        (
            "numeric and quadrature oracle equivalence",
            oracle_equivalence,
        ),
        (
            "norm conservation and fourth-order convergence",
            conservation_and_order,
        ),
        (
            "emission, emitted spectrum and time reversal",
            emission_and_reversal,
        ),
        ("far-field variance profile", far_field_profile),
        ("byte-identical outputs of bundled scenarios", determinism),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL [{}] {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
