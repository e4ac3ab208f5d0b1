//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use squeezesim::config::ExperimentConfig;
use squeezesim::scenarios::run_spectrum;
use squeezesim::RunOptions;
use squeezesim_core::{
    db_to_r, r_to_db, sql_optimum, sql_total_noise, squeezing_after_cavity, v_to_db, CavityParams,
    DetectionChain, GaussianState, SidebandPair, PHYSICALITY_TOL,
};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn example_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/paper.json")
}

/// Median wall time of `reps` calls, for sub-millisecond budgets.
fn median_time<T>(reps: usize, mut f: impl FnMut() -> T) -> Duration {
    let mut times: Vec<Duration> = (0..reps)
        .map(|_| {
            let t = Instant::now();
            std::hint::black_box(f());
            t.elapsed()
        })
        .collect();
    times.sort();
    times[reps / 2]
}

fn c1_squeezing_bookkeeping() -> Outcome {
    let db = r_to_db(0.138);
    let t = median_time(101, || r_to_db(std::hint::black_box(0.138)));
    let ok = (db - (-1.20)).abs() <= 0.03 && t < Duration::from_millis(1);
    outcome(
        ok,
        format!("r_to_db(0.138) = {db:.4} dB (want -1.20 +/- 0.03), {t:?}"),
    )
}

fn c2_enhancement() -> Outcome {
    let v_in = 10f64.powf(-0.120);
    let v_out = 10f64.powf(-0.072);
    // efficiency implied by the two measured endpoints
    let eta_derived = (1.0 - v_out) / (1.0 - v_in);
    let eta = 0.633;
    let floor = || -> f64 {
        let pair = SidebandPair::prepare(TAU * 4.9e6, db_to_r(-1.20), 1.03e7).unwrap();
        let chain = DetectionChain::default()
            .with_stage("unattributed", eta)
            .unwrap();
        chain.measured_variance(pair.joint_phase_variance())
    };
    let input_db = v_to_db(
        SidebandPair::prepare(1.0, db_to_r(-1.20), 0.0)
            .unwrap()
            .joint_phase_variance(),
    );
    let db = v_to_db(floor());
    let t = median_time(101, floor);
    let ok = (eta_derived - eta).abs() < 5e-4
        && (input_db - (-1.20)).abs() < 1e-12
        && (db - (-0.72)).abs() <= 0.01
        && t < Duration::from_millis(1);
    outcome(
        ok,
        format!("derived eta = {eta_derived:.4}, floor = {db:.4} dB (want -0.72 +/- 0.01), {t:?}"),
    )
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> GaussianState {
    let mut s = GaussianState::vacuum(n).unwrap();
    for _ in 0..6 {
        let i = rng.gen_range(0..n);
        s = match rng.gen_range(0..4) {
            0 => s
                .squeeze(i, rng.gen_range(0.0..1.2), rng.gen_range(0.0..TAU))
                .unwrap(),
            1 => s
                .displace(i, rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
                .unwrap(),
            2 if n > 1 => {
                let j = (i + rng.gen_range(1..n)) % n;
                s.two_mode_squeeze(i, j, rng.gen_range(0.0..1.0)).unwrap()
            }
            _ if n > 1 => {
                let j = (i + rng.gen_range(1..n)) % n;
                s.beamsplitter(i, j, rng.gen_range(0.0..=1.0)).unwrap()
            }
            _ => s.phase_rotate(i, rng.gen_range(0.0..TAU)).unwrap(),
        };
    }
    s
}

fn c3_loss_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=3);
        let s = random_state(&mut rng, n);
        let mode = rng.gen_range(0..n);
        let eta = rng.gen_range(0.0..=1.0);
        let direct = s.loss(mode, eta).unwrap();
        let keep: Vec<usize> = (0..n).collect();
        let via_bs = s
            .tensor(&GaussianState::vacuum(1).unwrap())
            .beamsplitter(mode, n, eta)
            .unwrap()
            .reduced(&keep)
            .unwrap();
        let pairs = direct
            .covariance()
            .iter()
            .zip(via_bs.covariance())
            .chain(direct.mean().iter().zip(via_bs.mean()));
        for (a, b) in pairs {
            worst = worst.max((a - b).abs());
        }
    }
    let t = start.elapsed();
    let ok = worst <= 1e-10 && t < Duration::from_secs(5);
    outcome(
        ok,
        format!("1000 states, max entrywise diff {worst:.2e} (want <= 1e-10), {t:?}"),
    )
}

fn c4_physicality_fuzz() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut lowest = f64::INFINITY;
    for _ in 0..100_000 {
        let n = rng.gen_range(1..=4);
        let depth = rng.gen_range(1..=12);
        let mut s = GaussianState::vacuum(n).unwrap();
        for _ in 0..depth {
            let i = rng.gen_range(0..n);
            s = match rng.gen_range(0..4) {
                0 => s
                    .squeeze(i, rng.gen_range(0.0..1.0), rng.gen_range(0.0..TAU))
                    .unwrap(),
                1 => s.phase_rotate(i, rng.gen_range(0.0..TAU)).unwrap(),
                2 if n > 1 => {
                    let j = (i + rng.gen_range(1..n)) % n;
                    s.beamsplitter(i, j, rng.gen_range(0.0..=1.0)).unwrap()
                }
                _ => s.loss(i, rng.gen_range(0.0..=1.0)).unwrap(),
            };
        }
        let nu = s.symplectic_eigenvalues();
        lowest = lowest.min(nu.iter().copied().fold(f64::INFINITY, f64::min));
    }
    let t = start.elapsed();
    let ok = lowest >= 1.0 - PHYSICALITY_TOL && t < Duration::from_secs(30);
    outcome(
        ok,
        format!("1e5 circuits, min symplectic eigenvalue {lowest:.12}, {t:?}"),
    )
}

fn c5_thermal_sidebands() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let r = rng.gen_range(0.0..3.0);
        let s = GaussianState::vacuum(2)
            .unwrap()
            .two_mode_squeeze(0, 1, r)
            .unwrap();
        let want = [(2.0 * r).cosh(), 0.0, 0.0, (2.0 * r).cosh()];
        for m in 0..2 {
            let got = s.reduced(&[m]).unwrap();
            for (a, b) in got.covariance().iter().zip(want) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    outcome(
        worst <= 1e-10,
        format!("100 r, max |V_reduced - cosh(2r) I| = {worst:.2e}"),
    )
}

fn c6_shot_noise_anchor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_lossless = 0.0f64;
    let mut worst_stack = 0.0f64;
    for _ in 0..1000 {
        let omega = TAU * 10f64.powf(rng.gen_range(3.0..9.0));
        let alpha = 10f64.powf(rng.gen_range(-2.0..9.0));
        let pair = SidebandPair::prepare(omega, 0.0, alpha).unwrap();
        let v = pair.joint_phase_variance();
        worst_lossless =
            worst_lossless.max((DetectionChain::default().measured_variance(v) - 1.0).abs());
        let mut chain = DetectionChain::default();
        for k in 0..rng.gen_range(1..8) {
            chain = chain
                .with_stage(format!("s{k}"), rng.gen_range(0.0..=1.0))
                .unwrap();
        }
        if rng.gen_bool(0.5) {
            chain = chain.with_visibility(rng.gen_range(0.0..=1.0)).unwrap();
        }
        let lossy = pair.apply_symmetric_loss(rng.gen_range(0.0..=1.0)).unwrap();
        worst_stack = worst_stack
            .max((chain.measured_variance(v) - 1.0).abs())
            .max((chain.measured_variance(lossy.joint_phase_variance()) - 1.0).abs());
    }
    let ok = worst_lossless <= 1e-12 && worst_stack <= 1e-12;
    outcome(
        ok,
        format!(
            "lossless max dev {worst_lossless:.1e}, efficiency stacks max dev {worst_stack:.1e}"
        ),
    )
}

/// Minimizes `f` over `u = ln N` by golden-section search.
fn golden_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

fn c7_sql() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut worst_n, mut worst_s, mut worst_shift, mut worst_indep) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let a = 10f64.powf(rng.gen_range(-3.0..3.0));
        let b = 10f64.powf(rng.gen_range(-3.0..3.0));
        let r = rng.gen_range(0.0..2.0);
        let opt = sql_optimum(r, a, b).unwrap();
        let total = |u: f64| sql_total_noise(u.exp(), r, a, b).unwrap().total;
        // bracket wide enough for every sampled (a, b, r)
        let u = golden_min(total, -20.0, 20.0);
        worst_n = worst_n.max((u.exp() - opt.n_star).abs() / opt.n_star);
        worst_s = worst_s.max((total(u) - opt.s_min).abs() / opt.s_min);

        let coherent = sql_optimum(0.0, a, b).unwrap();
        worst_indep = worst_indep.max((opt.s_min - coherent.s_min).abs() / coherent.s_min);
        let shift = opt.n_star / coherent.n_star;
        worst_shift = worst_shift.max((shift - (-2.0 * r).exp()).abs() / (-2.0 * r).exp());
    }
    let ok = worst_n <= 1e-7 && worst_s <= 1e-7 && worst_indep <= 1e-9 && worst_shift <= 1e-12;
    outcome(
        ok,
        format!(
            "n_star rel {worst_n:.1e}, s_min rel {worst_s:.1e}, s_min(r) drift {worst_indep:.1e}, shift vs e^(-2r) {worst_shift:.1e}"
        ),
    )
}

fn c8_coupling_regime() -> Outcome {
    let kappa = TAU * 180e6;
    let cavity = CavityParams::critically_coupled(kappa).unwrap();
    let mut min_retained = f64::INFINITY;
    let mut worst_low = 0.0f64;
    for r in [0.05, 0.138, 0.5, 1.0, 1.5] {
        let high = SidebandPair::prepare(20.0 * kappa, r, 1e7).unwrap();
        let v_in = high.joint_phase_variance();
        let v_out = squeezing_after_cavity(&high, &cavity)
            .unwrap()
            .joint_phase_variance();
        min_retained = min_retained.min((1.0 - v_out) / (1.0 - v_in));

        let low = SidebandPair::prepare(0.01 * kappa, r, 1e7).unwrap();
        let v_low = squeezing_after_cavity(&low, &cavity)
            .unwrap()
            .joint_phase_variance();
        worst_low = worst_low.max((v_low - 1.0).abs());
    }
    let ok = min_retained >= 0.99 && worst_low <= 1e-3;
    outcome(
        ok,
        format!(
            "retained at 20 kappa >= {:.4}%, |V - 1| at 0.01 kappa <= {worst_low:.2e}",
            100.0 * min_retained
        ),
    )
}

fn c9_spectrum_shape() -> Outcome {
    let exp = ExperimentConfig::from_path(&example_config())
        .unwrap()
        .validate()
        .unwrap();
    let opts = RunOptions::default();
    let report = run_spectrum(&exp, opts, None).unwrap();

    // (a) flat floors
    let spread = |v: &[f64]| {
        let db: Vec<f64> = v.iter().map(|&x| v_to_db(x)).collect();
        let lo = db.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (c_lo, c_hi) = spread(&report.coherent.floor_snu);
    let (s_lo, s_hi) = spread(&report.squeezed.floor_snu);
    let flat = c_lo.abs() <= 1e-9
        && c_hi.abs() <= 1e-9
        && (s_lo + 0.72).abs() <= 0.01
        && (s_hi + 0.72).abs() <= 0.01;

    // (b) one maximum per mode within a grid step of omega_m, and the
    // signal follows the summed Lorentzians point by point
    let step = exp.grid[1] - exp.grid[0];
    let peaks_ok = report.peaks.len() == exp.modes.len()
        && report
            .peaks
            .iter()
            .zip(&exp.modes)
            .all(|(p, m)| (TAU * p.omega_hz - m.mode.omega_m).abs() <= step);
    let chain_eta: f64 = exp.optical_stages().iter().map(|s| s.1).product();
    let g = exp.coupling.g0 / exp.coupling.x_zpf;
    // resonant carrier transmission of the probed resonator
    let t0 = 1.0 - 2.0 * exp.cavity.kappa_ex / exp.cavity.kappa;
    let mut shape_err = 0.0f64;
    for (i, &w) in exp.grid.iter().enumerate() {
        let sx: f64 = exp.modes.iter().map(|m| m.mode.psd(w)).sum();
        let want = chain_eta * 2.0 * (t0 * exp.carrier_alpha).powi(2) * g * g * sx / (w * w);
        shape_err = shape_err.max((report.squeezed.signal_snu[i] - want).abs() / want);
    }
    let lorentz = peaks_ok && shape_err <= 1e-9;

    // (c) peak-to-floor ratio linear in alpha^2
    let mut slopes = Vec::new();
    for scale in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let mut e = exp.clone();
        e.carrier_alpha = exp.carrier_alpha * scale;
        let rep = run_spectrum(&e, opts, None).unwrap();
        let k = rep.peaks[0].index;
        let excess = rep.squeezed.total_snu[k] / rep.squeezed.floor_snu[k] - 1.0;
        slopes.push(excess / e.carrier_alpha.powi(2));
    }
    let s0 = slopes[2];
    let lin_err = slopes
        .iter()
        .map(|s| (s - s0).abs() / s0)
        .fold(0.0, f64::max);
    let linear = lin_err <= 1e-9;

    outcome(
        flat && lorentz && linear,
        format!(
            "floors {c_lo:.5}..{c_hi:.5} dB and {s_lo:.5}..{s_hi:.5} dB, {} peaks at omega_m, Lorentzian rel err {shape_err:.1e}, alpha^2 slope spread {lin_err:.1e}",
            report.peaks.len()
        ),
    )
}

fn c10_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_squeezesim");
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(example_config()).unwrap();
    let mut value: serde_json::Value = serde_json::from_str(&text).unwrap();
    value["grid"]["points"] = serde_json::json!(4096);
    let big = dir.path().join("example_4096.json");
    std::fs::write(&big, serde_json::to_string_pretty(&value).unwrap()).unwrap();

    let run = |config: &Path, out: &Path| -> (bool, Duration) {
        let t = Instant::now();
        let status = Command::new(bin)
            .args(["spectrum", "--csv", "--config"])
            .arg(config)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap()
            .status;
        (status.success(), t.elapsed())
    };
    let read = |out: &Path| {
        ["spectrum_coherent.csv", "spectrum_squeezed.csv"]
            .map(|f| std::fs::read(out.join(f)).unwrap_or_default())
    };

    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (ok_a, _) = run(&example_config(), &a);
    let (ok_b, _) = run(&example_config(), &b);
    let identical = ok_a && ok_b && read(&a) == read(&b) && !read(&a)[1].is_empty();

    let (big_a, big_b) = (dir.path().join("big_a"), dir.path().join("big_b"));
    let (ok_c, t_c) = run(&big, &big_a);
    let (ok_d, t_d) = run(&big, &big_b);
    let big_identical = ok_c && ok_d && read(&big_a) == read(&big_b);
    let lines = read(&big_a)[1].iter().filter(|&&c| c == b'\n').count();
    let t = t_c.max(t_d);
    let ok = identical && big_identical && lines == 4097 && t < Duration::from_secs(2);
    outcome(
        ok,
        format!("paper.json CSVs identical: {identical}, 4096-point CSVs identical: {big_identical}, slowest run {t:?}"),
    )
}

fn main() {
    // libtest flags (e.g. `--nocapture`) are accepted and ignored
    let criteria: [Criterion; 10] = [
        ("squeezing bookkeeping", c1_squeezing_bookkeeping),
        ("enhancement reproduction", c2_enhancement),
        ("loss-channel oracle equivalence", c3_loss_oracle),
        ("physicality fuzz", c4_physicality_fuzz),
        ("thermal sidebands", c5_thermal_sidebands),
        ("shot-noise anchor", c6_shot_noise_anchor),
        ("SQL properties", c7_sql),
        ("coupling regime", c8_coupling_regime),
        ("spectrum shape", c9_spectrum_shape),
        ("CLI determinism", c10_cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.ok {
            failed += 1;
        }
        println!(
            "[{}] {:>2} {name}: {}",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {}/10 passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
