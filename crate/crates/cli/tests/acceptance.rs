//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use metagame_cli::dispatch;
use metagame_core::econ::{
    efficiency, fairness, payoffs, persuasion_payoffs, BargainingOutcome, NegotiationOutcome, Outcome,
    PersuasionOutcome, SituationParams,
};
use metagame_core::engine::{Objective, ReportSummary};
use metagame_core::equilibrium::{enumerate_equilibria, support_enumeration, verify_equilibrium, BimatrixGame};
use metagame_core::econ::Family;
use metagame_core::matrix::Matrix;
use metagame_core::regression::{fit_observations, predict_pair, FeatureSpec, Observation, Target, TechPair};
use metagame_core::sim::tech_name;
use metagame_core::sweep::{run_sweep, wilson_interval, Panel, SweepConfig, SweepOutput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(took)
}

fn random_game(n: usize, rng: &mut ChaCha8Rng) -> BimatrixGame {
    let a = Matrix::from_fn(n, n, |_, _| rng.random::<f64>());
    let b = Matrix::from_fn(n, n, |_, _| rng.random::<f64>());
    BimatrixGame::new(a, b).expect("finite square game")
}

fn fixture_replay() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("expand.json");
    let start = Instant::now();
    let code = dispatch([
        "metagame",
        "expand",
        "--coefficients",
        "@poisoned-apple",
        "--techs",
        "A,B,C,D",
        "--add",
        "E",
        "--objective",
        "fairness",
        "--out",
        out.to_str().unwrap(),
    ]);
    let took = within(start, Duration::from_secs(1))?;
    ensure(code == 0, || format!("exit code {code}"))?;
    let text = fs::read_to_string(&out).map_err(|e| e.to_string())?;
    let r: ReportSummary = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let (b, x) = (&r.baseline, &r.expanded);
    ensure(b.market == 4, || format!("pre-release market {}", b.market))?;
    ensure(close(b.objective, 1.0, 1e-3), || format!("pre-release fairness {}", b.objective))?;
    ensure(close(b.payoffs[0], 0.49, 1e-2) && close(b.payoffs[1], 0.50, 1e-2), || {
        format!("pre-release payoffs {:?}", b.payoffs)
    })?;
    ensure(x.market == 8, || format!("post-release market {}", x.market))?;
    ensure(close(x.objective, 0.990, 1e-3), || format!("post-release fairness {}", x.objective))?;
    ensure(close(x.payoffs[0], 0.52, 1e-2) && close(x.payoffs[1], 0.46, 1e-2), || {
        format!("post-release payoffs {:?}", x.payoffs)
    })?;
    ensure(close(r.inertia_objective, 0.976, 1e-3), || format!("inertia fairness {}", r.inertia_objective))?;
    ensure(r.added_adoption <= 1e-6, || format!("adoption of E {}", r.added_adoption))?;
    ensure(r.flags.poisoned_apple && r.flags.inertia_harm, || format!("flags {:?}", r.flags))?;
    Ok(format!(
        "m* 4 -> 8, payoffs ({:.2}, {:.2}) -> ({:.2}, {:.2}), inertia {:.3}, {took:?}",
        b.payoffs[0], b.payoffs[1], x.payoffs[0], x.payoffs[1], r.inertia_objective
    ))
}

fn solver_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut profiles = 0;
    for i in 0..500 {
        let n = 2 + i % 4;
        let game = random_game(n, &mut rng);
        let oracle = support_enumeration(&game).map_err(|e| e.to_string())?;
        let found = enumerate_equilibria(&game);
        ensure(!found.is_empty(), || format!("game {i}: no equilibrium"))?;
        for p in &found {
            let regret = verify_equilibrium(&game, p, 1e-8).map_err(|e| e.to_string())?.max_regret();
            ensure(regret <= 1e-8, || format!("game {i}: regret {regret:e}"))?;
            ensure(oracle.iter().any(|q| p.distance(q) <= 1e-6), || format!("game {i}: {p:?} not found by oracle"))?;
            profiles += 1;
        }
    }
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("500 games, {profiles} profiles verified and matched, {took:?}"))
}

fn regression_recovery() -> Check {
    let start = Instant::now();
    let techs: Vec<String> = (0..13).map(tech_name).collect();
    let pairs: Vec<TechPair> =
        techs.iter().flat_map(|a| techs.iter().map(move |b| TechPair::new(a.clone(), b.clone()))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut market: Vec<f64> = (0..8).map(|_| rng.random_range(-0.1..0.1)).collect();
    let mut pair: Vec<f64> = (0..pairs.len()).map(|_| rng.random_range(-0.2..0.2)).collect();
    market[0] = 0.0;
    pair[0] = 0.0;
    let (c0, slopes) = (0.45, [0.25, 0.002]);
    let normal = Normal::new(0.0, 0.01).unwrap();

    let build = |noisy: bool, rng: &mut ChaCha8Rng| {
        let mut rows = Vec::new();
        for m in 0..8 {
            for (p, tp) in pairs.iter().enumerate() {
                for _ in 0..10 {
                    let x = [rng.random_range(0.8..0.99), rng.random_range(1.0..100.0)];
                    let mut y = c0 + market[m] + pair[p] + slopes[0] * x[0] + slopes[1] * x[1];
                    if noisy {
                        y += normal.sample(rng);
                    }
                    rows.push(Observation { market_id: m as u32 + 1, pair: tp.clone(), covariates: x.to_vec(), target: y });
                }
            }
        }
        rows
    };

    let clean = build(false, &mut rng);
    let spec = FeatureSpec::from_observations(&clean, &["x1", "x2"], false).map_err(|e| e.to_string())?;
    let fit = fit_observations(&clean, &spec, Family::Bargaining, Target::Fairness).map_err(|e| e.to_string())?;
    let mean = |k: usize| spec.situational[k].mean;
    let mut worst: f64 = (fit.beta0 - (c0 + slopes[0] * mean(0) + slopes[1] * mean(1))).abs();
    for m in 0..8 {
        worst = worst.max((fit.beta_market[&(m as u32 + 1)] - market[m]).abs());
    }
    for (p, tp) in pairs.iter().enumerate() {
        worst = worst.max((fit.beta_pair[tp] - pair[p]).abs());
    }
    worst = worst.max((fit.beta_situation["x1"] - slopes[0]).abs());
    worst = worst.max((fit.beta_situation["x2"] - slopes[1]).abs());
    ensure(worst <= 1e-8, || format!("largest coefficient error {worst:e}"))?;

    let noisy = build(true, &mut rng);
    let spec = FeatureSpec::from_observations(&noisy, &["x1", "x2"], false).map_err(|e| e.to_string())?;
    let fit = fit_observations(&noisy, &spec, Family::Bargaining, Target::Fairness).map_err(|e| e.to_string())?;
    let mut sq = 0.0;
    for m in 0..8 {
        for (p, tp) in pairs.iter().enumerate() {
            let truth = c0 + market[m] + pair[p] + slopes[0] * spec.situational[0].mean + slopes[1] * spec.situational[1].mean;
            let pred = predict_pair(&fit, m as u32 + 1, &tp.tech_a, &tp.tech_b).map_err(|e| e.to_string())?;
            sq += (pred - truth).powi(2);
        }
    }
    let rmse = (sq / (8 * pairs.len()) as f64).sqrt();
    ensure(rmse < 0.02, || format!("noisy rmse {rmse}"))?;
    let took = within(start, Duration::from_secs(30))?;
    Ok(format!("max error {worst:.1e} without noise, rmse {rmse:.4} with noise, {took:?}"))
}

fn metric_formulas() -> Check {
    let mut checked = 0;
    let mut eq = |got: f64, want: f64, what: &str| -> Result<(), String> {
        checked += 1;
        ensure(close(got, want, 1e-12), || format!("{what}: got {got}, want {want}"))
    };
    let base = SituationParams {
        delta_a: Some(0.9),
        delta_b: Some(0.9),
        m_scale: 1.0,
        f_a: None,
        f_b: None,
        prior_p: None,
        v_value: None,
        rounds: None,
    };
    let agree = |round, share| Outcome::Bargaining(BargainingOutcome::Agreement { round, share });
    let e = |x: Result<f64, _>| x.map_err(|e: metagame_core::econ::EconError| e.to_string());
    let pay = |o: &Outcome, s: &SituationParams| payoffs(o, s).map_err(|e| e.to_string());

    let (a, b) = pay(&agree(1, 0.5), &base)?;
    eq(a, 0.5, "bargaining t=1 u_a")?;
    eq(b, 0.5, "bargaining t=1 u_b")?;
    let scaled = SituationParams { delta_a: Some(0.8), delta_b: Some(0.5), m_scale: 100.0, ..base };
    let (a, b) = pay(&agree(2, 0.6), &scaled)?;
    eq(a, 48.0, "bargaining t=2 u_a")?;
    eq(b, 20.0, "bargaining t=2 u_b")?;
    let none = Outcome::Bargaining(BargainingOutcome::NoAgreement);
    let (a, b) = pay(&none, &base)?;
    eq(a + b.abs(), 0.0, "no agreement payoffs")?;
    eq(e(efficiency(&none, &base))?, 0.0, "no agreement efficiency")?;
    eq(e(fairness(&none, &base))?, 1.0, "no agreement fairness")?;
    eq(e(fairness(&agree(3, 0.5), &base))?, 1.0, "fairness at equal split")?;
    eq(e(fairness(&agree(3, 1.0), &base))?, 0.0, "fairness at full share")?;
    eq(e(efficiency(&agree(1, 0.83), &base))?, 1.0, "efficiency at t=1")?;

    let neg = SituationParams { f_a: Some(1.0), f_b: Some(2.0), m_scale: 100.0, ..base };
    let trade = |price| Outcome::Negotiation(NegotiationOutcome::Trade { price });
    let (a, b) = pay(&trade(150.0), &neg)?;
    eq(a, 50.0, "negotiation u_a")?;
    eq(b, 50.0, "negotiation u_b")?;
    let (a, b) = pay(&trade(100.0), &neg)?;
    eq(a, 0.0, "breakeven u_a")?;
    eq(b, 100.0, "breakeven u_b")?;
    let (a, b) = pay(&Outcome::Negotiation(NegotiationOutcome::NoTrade), &neg)?;
    eq(a.abs() + b.abs(), 0.0, "no trade payoffs")?;
    eq(e(efficiency(&trade(150.0), &neg))?, 1.0, "efficient trade")?;
    eq(e(fairness(&trade(150.0 + 50.0), &neg))?, 0.0, "fairness at p_f + M/2")?;

    let pers = |rounds, high, bought_high, rejected_low| PersuasionOutcome { rounds, high, bought_high, rejected_low };
    let ps = SituationParams { prior_p: Some(0.5), v_value: Some(2.0), rounds: Some(4), ..base };
    let run = |o: PersuasionOutcome, s: &SituationParams| {
        persuasion_payoffs(&o, o.bought_low(), s).map_err(|e| e.to_string())
    };
    let (a, b) = run(pers(4, 4, 4, 0), &ps)?;
    eq(a, 4.0, "all high bought u_a")?;
    eq(b, 4.0, "all high bought u_b")?;
    let (a, b) = run(pers(4, 2, 1, 2), &ps)?;
    eq(a, 1.0, "mixed u_a")?;
    eq(b, 1.0, "mixed u_b")?;
    let (a, b) = run(pers(2, 0, 0, 0), &SituationParams { rounds: Some(2), ..ps })?;
    eq(a, 2.0, "all low bought u_a")?;
    eq(b, -2.0, "all low bought u_b")?;
    let ratio = Outcome::Persuasion(pers(6, 4, 3, 1));
    let ps6 = SituationParams { rounds: Some(6), ..ps };
    eq(e(efficiency(&ratio, &ps6))?, 0.75, "persuasion efficiency k/n")?;
    eq(e(fairness(&ratio, &ps6))?, 0.5, "persuasion fairness r/(T-n)")?;
    Ok(format!("{checked} exact checks"))
}

fn synthetic_sweep() -> Result<SweepOutput, String> {
    let config = SweepConfig {
        families: vec![Family::Bargaining],
        objectives: vec![Objective::Fairness, Objective::Efficiency],
        roster_size: 13,
        subset_sizes: (2..=12).collect(),
        experiments_per_cell: 50,
        seed: 2026,
        ..SweepConfig::default()
    };
    run_sweep(&config).map_err(|e| e.to_string())
}

fn regulator_optimality(sweep: &SweepOutput) -> Check {
    let n = sweep.experiments.len();
    ensure(n >= 1000, || format!("only {n} experiments"))?;
    let bad = sweep.experiments.iter().filter(|e| e.expanded_objective < e.inertia_objective - 1e-9).count();
    ensure(bad == 0, || format!("{bad} of {n} experiments violate optimality"))?;
    Ok(format!("{n} experiments, 0 violations"))
}

fn existence(sweep: &SweepOutput) -> Check {
    let fair = sweep.experiments.iter().filter(|e| e.objective == Objective::Fairness);
    let (mut poisoned, mut decreased) = (0, 0);
    for e in fair {
        poisoned += usize::from(e.flags.poisoned_apple);
        decreased += usize::from(e.flags.objective_decreased);
    }
    ensure(poisoned > 0, || "no poisoned apple under fairness".into())?;
    ensure(decreased > 0, || "no objective decrease under fairness".into())?;
    for row in &sweep.stats.panels {
        let f = row.frequency.ok_or_else(|| format!("panel {} {} has no data", row.panel, row.objective))?;
        ensure(row.ci_lo <= f && f <= row.ci_hi, || format!("panel {} interval misses {f}", row.panel))?;
        let (lo, hi) = wilson_interval(row.successes, row.n);
        ensure(lo == row.ci_lo && hi == row.ci_hi, || format!("panel {} interval mismatch", row.panel))?;
    }
    ensure(sweep.stats.panels.len() == 2 * Panel::ALL.len(), || "missing panel rows".into())?;
    // closed form (2np + z² ∓ z√(z² + 4np(1−p))) / 2(n + z²)
    let closed = |k: f64, n: f64| {
        let z = 1.959964_f64;
        let p = k / n;
        let root = z * (z * z + 4.0 * n * p * (1.0 - p)).sqrt();
        ((2.0 * n * p + z * z - root) / (2.0 * (n + z * z)), (2.0 * n * p + z * z + root) / (2.0 * (n + z * z)))
    };
    for (k, n) in [(50u64, 100u64), (100, 100)] {
        let got = wilson_interval(k, n);
        let want = closed(k as f64, n as f64);
        ensure(close(got.0, want.0, 1e-12) && close(got.1, want.1.min(1.0), 1e-12), || {
            format!("wilson({k}, {n}) = {got:?}, closed form {want:?}")
        })?;
    }
    let (lo, hi) = wilson_interval(50, 100);
    ensure(close(lo, 0.404, 1e-3) && close(hi, 0.596, 1e-3), || format!("wilson(50, 100) = ({lo}, {hi})"))?;
    Ok(format!("{poisoned} poisoned apples, {decreased} fairness decreases, 12 panel rows with intervals"))
}

fn run_cli_sweep(dir: &Path, config: &Path) -> Result<(), String> {
    let code = dispatch([
        "metagame",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "77",
        "sweep",
        "--out",
        dir.to_str().unwrap(),
    ]);
    ensure(code == 0, || format!("sweep exited with {code}"))
}

fn determinism() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = tmp.path().join("sweep.toml");
    fs::write(
        &config,
        "[sweep]\nfamilies = [\"bargaining\", \"persuasion\"]\nobjectives = [\"fairness\"]\n\
         roster_size = 5\nsubset_sizes = [2, 3, 4]\nexperiments_per_cell = 10\n\
         source = \"simulated\"\ngames_per_cell = 4\n",
    )
    .map_err(|e| e.to_string())?;
    let (one, two) = (tmp.path().join("one"), tmp.path().join("two"));
    run_cli_sweep(&one, &config)?;
    run_cli_sweep(&two, &config)?;
    let mut bytes = 0;
    for name in ["corpus.csv", "report.json", "panels.csv"] {
        let a = fs::read(one.join(name)).map_err(|e| format!("{name}: {e}"))?;
        let b = fs::read(two.join(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(!a.is_empty() && a == b, || format!("{name} differs between runs"))?;
        bytes += a.len();
    }
    Ok(format!("corpus, report and plot CSV identical ({bytes} bytes)"))
}

fn affine_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..300 {
        let game = random_game(2 + i % 5, &mut rng);
        let base = enumerate_equilibria(&game);
        let shifted = enumerate_equilibria(&game.shifted(10.0, 10.0));
        let same = base.len() == shifted.len()
            && base.iter().all(|p| shifted.iter().any(|q| p.distance(q) <= 1e-7));
        ensure(same, || format!("game {i}: {} vs {} equilibria", base.len(), shifted.len()))?;
    }
    Ok("300 games, equilibrium sets unchanged".into())
}

fn main() {
    let sweep = synthetic_sweep();
    let from_sweep = |f: fn(&SweepOutput) -> Check| match &sweep {
        Ok(s) => f(s),
        Err(e) => Err(format!("sweep failed: {e}")),
    };
    let results: Vec<(&str, Check)> = vec![
        ("fixture replay", fixture_replay()),
        ("solver-oracle equivalence", solver_oracle()),
        ("regression recovery", regression_recovery()),
        ("metric formulas", metric_formulas()),
        ("regulator optimality", from_sweep(regulator_optimality)),
        ("existence checks", from_sweep(existence)),
        ("determinism", determinism()),
        ("affine invariance", affine_invariance()),
    ];
    let total = results.len();
    let mut failed = 0;
    for (i, (name, result)) in results.iter().enumerate() {
        match result {
            Ok(detail) => println!("[{}/{total}] {name:<28} PASS  {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("[{}/{total}] {name:<28} FAIL  {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", total - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
