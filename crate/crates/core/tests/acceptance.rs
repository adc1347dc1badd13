//! Acceptance suite: every release criterion, one test per independent
//! clause, each printing a `acceptance N <name>: PASS/FAIL` line (visible
//! with `cargo test -- --nocapture`). Tolerances are pinned here.
//!
//! Heavy experiment runs are computed once and shared between the clause
//! tests through `OnceLock`.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use cuecause::experiments::{
    exp1_population, exp2_convergence, exp3_sweep, exp4_disparity, exp_multi, exp_samediff,
    lemma1_check, theorem1_check,
};
use cuecause::model::{CueModel, SameDiffModel, TwoCueModel};
use cuecause::oracle::{exact_posterior, quadrature_posterior, QuadratureSpec};
use cuecause::real::Real as _;
use cuecause::rng::stream;
use cuecause::table::ResultTable;
use cuecause::ExperimentConfig;

struct Timed {
    table: ResultTable,
    elapsed: Duration,
}

fn timed(run: impl FnOnce(&ExperimentConfig) -> ResultTable, config: &ExperimentConfig) -> Timed {
    let start = Instant::now();
    let table = run(config);
    Timed {
        table,
        elapsed: start.elapsed(),
    }
}

fn check(criterion: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} - {detail}");
    assert!(pass, "acceptance {criterion} FAILED: {detail}");
}

/// Rows of `column` restricted to rows where `key` equals `key_value`.
fn select(table: &ResultTable, column: &str, key: &str, key_value: f64) -> Vec<f64> {
    table
        .column_f64(key)
        .iter()
        .zip(table.column_f64(column))
        .filter(|(k, _)| **k == key_value)
        .map(|(_, v)| v)
        .collect()
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

// ---------------------------------------------------------------------
// Criterion 1: the closed-form posterior and the quadrature oracle agree
// within 1e-6 on randomized two-cue and same-different instances, fast.
// ---------------------------------------------------------------------

#[test]
fn acceptance_1_oracle_soundness() {
    let start = Instant::now();
    let spec = QuadratureSpec::default();
    let mut rng = stream(20260809, 1);
    let mut max_dev = 0.0f64;

    for _ in 0..100 {
        let ss = f64::uniform(&mut rng, 1.0, 8.0);
        let s1 = f64::uniform(&mut rng, 1.0, 8.0);
        let s2 = f64::uniform(&mut rng, 1.0, 8.0);
        let x = [
            f64::uniform(&mut rng, -20.0, 20.0),
            f64::uniform(&mut rng, -20.0, 20.0),
        ];
        let model: CueModel<f64> = TwoCueModel::new(0.5, ss, s1, s2).unwrap().into();
        let exact = exact_posterior(&model, &x).unwrap();
        let quad = quadrature_posterior(&model, &x, &spec).unwrap();
        max_dev = max_dev.max((exact - quad).abs());
    }

    for k in 0..50 {
        let n = 2 + (k % 2);
        let ss = f64::uniform(&mut rng, 1.0, 3.0);
        let sigmas: Vec<f64> = (0..n).map(|_| f64::uniform(&mut rng, 1.0, 3.0)).collect();
        let x: Vec<f64> = (0..n)
            .map(|_| f64::uniform(&mut rng, -20.0, 20.0))
            .collect();
        let model: CueModel<f64> = SameDiffModel::new(n, 0.5, 10.0, ss, sigmas)
            .unwrap()
            .into();
        let exact = exact_posterior(&model, &x).unwrap();
        let quad = quadrature_posterior(&model, &x, &spec).unwrap();
        max_dev = max_dev.max((exact - quad).abs());
    }

    let elapsed = start.elapsed();
    check(
        "1 (oracle soundness)",
        max_dev < 1e-6 && elapsed < Duration::from_secs(10),
        &format!(
            "max |exact - quadrature| = {max_dev:.2e} over 100 two-cue + 50 same-different instances (tolerance 1e-6), runtime {elapsed:.2?} (limit 10 s)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 2: Monte Carlo convergence rate. Mean |p_hat - p_exact| over
// 100 repetitions scales as N^(-1/2) across N in {1e2, 1e3, 1e4, 1e5}.
// ---------------------------------------------------------------------

#[test]
fn acceptance_2_convergence_rate() {
    let start = Instant::now();
    let config = ExperimentConfig {
        repetitions: 100,
        sample_sizes: vec![100, 1000, 10_000, 100_000],
        epsilons: vec![0.05],
        observations: vec![vec![0.0, 0.0], vec![4.0, -4.0], vec![8.0, 2.0]],
        ..ExperimentConfig::default()
    };
    let table = theorem1_check(&config).unwrap();
    let elapsed = start.elapsed();

    let mut points = Vec::new();
    for &n in &config.sample_sizes {
        let errs = select(&table, "mean_abs_error", "n_samples", n as f64);
        points.push(((n as f64).ln(), errs[0].ln()));
    }
    let x_mean = mean(&points.iter().map(|p| p.0).collect::<Vec<_>>());
    let y_mean = mean(&points.iter().map(|p| p.1).collect::<Vec<_>>());
    let slope = points
        .iter()
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum::<f64>()
        / points.iter().map(|(x, _)| (x - x_mean).powi(2)).sum::<f64>();

    // Coverage side of the same run: nearly every estimate at N = 1e5 sits
    // within 0.05 of the exact posterior.
    let coverage = {
        let sizes = table.column_f64("n_samples");
        let eps = table.column_f64("epsilon");
        let cov = table.column_f64("coverage");
        sizes
            .iter()
            .zip(eps.iter().zip(&cov))
            .find(|(n, (e, _))| **n == 100_000.0 && **e == 0.05)
            .map(|(_, (_, c))| *c)
            .unwrap()
    };

    check(
        "2 (convergence rate)",
        (-0.65..=-0.35).contains(&slope)
            && coverage >= 0.99
            && elapsed < Duration::from_secs(120),
        &format!(
            "log-log slope of mean error vs N = {slope:.3} (required -0.5 +/- 0.15), coverage P(|err| < 0.05) = {coverage:.4} at N = 1e5 (required >= 0.99), runtime {elapsed:.2?} (limit 2 min)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 3: experiment 2. (a) mean error decreases monotonically in N
// within every repetition; (b) error rate vs the oracle decision at
// N = 1000 is at most 0.06; (c) the estimator's vs-cause error rate is
// within 0.02 of the oracle's on identical trials.
// ---------------------------------------------------------------------

fn exp2_run() -> &'static Timed {
    static CELL: OnceLock<Timed> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = ExperimentConfig {
            n_trials: 1000,
            repetitions: 10,
            sigma_lo: 3.0,
            sigma_hi: 7.0,
            sample_sizes: vec![10, 100, 1000, 10_000],
            ..ExperimentConfig::default()
        };
        timed(|c| exp2_convergence(c).unwrap(), &config)
    })
}

#[test]
fn acceptance_3a_exp2_mean_error_monotone() {
    let run = exp2_run();
    let mut monotone = true;
    for rep in 0..10 {
        let errs = select(&run.table, "mean_abs_error", "repetition", rep as f64);
        if !errs.windows(2).all(|w| w[1] < w[0]) {
            monotone = false;
        }
    }
    check(
        "3a (exp2 mean error monotone)",
        monotone && run.elapsed < Duration::from_secs(300),
        &format!(
            "mean |p_hat - p_exact| strictly decreasing over N in {{10, 100, 1000, 10000}} in all 10 repetitions, runtime {:.2?} (limit 5 min)",
            run.elapsed
        ),
    );
}

#[test]
fn acceptance_3b_exp2_error_rate_at_1000() {
    let run = exp2_run();
    let rate = mean(&select(&run.table, "error_rate", "n_samples", 1000.0));
    check(
        "3b (exp2 error rate at N=1000)",
        rate <= 0.06,
        &format!(
            "error rate vs oracle decision at N = 1000 over 10 x 1000 trials = {rate:.4} (required <= 0.06)"
        ),
    );
}

#[test]
fn acceptance_3c_exp2_cause_error_gap() {
    let run = exp2_run();
    let is_rate = mean(&select(&run.table, "is_cause_error_rate", "n_samples", 1000.0));
    let oracle_rate = mean(&select(
        &run.table,
        "oracle_cause_error_rate",
        "n_samples",
        1000.0,
    ));
    let gap = (is_rate - oracle_rate).abs();
    check(
        "3c (exp2 vs-cause gap)",
        gap <= 0.02,
        &format!(
            "|IS vs-cause error {is_rate:.4} - oracle vs-cause error {oracle_rate:.4}| = {gap:.4} at N = 1000 (required <= 0.02)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 4: experiment 1. At gain 1e4 with 1000 neurons, the mean
// |normalized rate - normalized likelihood| stays under 0.002 per trial,
// averaged over 20 trials.
// ---------------------------------------------------------------------

#[test]
fn acceptance_4_exp1_normalization() {
    let mut devs = Vec::new();
    for seed in 0..20u64 {
        let config = ExperimentConfig {
            seed,
            ..ExperimentConfig::default()
        };
        let table = exp1_population(&config).unwrap();
        let rates = table.column_f64("normalized_rate");
        let liks = table.column_f64("normalized_likelihood");
        let dev = rates
            .iter()
            .zip(&liks)
            .map(|(r, l)| (r - l).abs())
            .sum::<f64>()
            / rates.len() as f64;
        devs.push(dev);
    }
    let avg = mean(&devs);
    check(
        "4 (exp1 normalization fidelity)",
        avg < 0.002,
        &format!(
            "mean |normalized rate - normalized likelihood| averaged over 20 trials = {avg:.2e} (required < 0.002)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 5: experiment 3. (a) every grid cell with sigma_s >= 2 keeps
// its error rate under 0.12 at N = 1000; (b) the sigma_s = 1 grid mean
// strictly exceeds the sigma_s = 4 grid mean.
// ---------------------------------------------------------------------

fn exp3_run() -> &'static Timed {
    static CELL: OnceLock<Timed> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = ExperimentConfig {
            sigma_s_values: vec![1.0, 2.0, 4.0, 8.0],
            sigma_grid_min: 1.0,
            sigma_grid_max: 8.0,
            sigma_grid_step: 1.0,
            n_trials: 400,
            n_samples: 1000,
            ..ExperimentConfig::default()
        };
        timed(|c| exp3_sweep(c).unwrap(), &config)
    })
}

#[test]
fn acceptance_5a_exp3_cells_under_threshold() {
    let run = exp3_run();
    let ss = run.table.column_f64("sigma_s");
    let rates = run.table.column_f64("error_rate");
    let mut worst = 0.0f64;
    let mut worst_ss = 0.0;
    for (s, r) in ss.iter().zip(&rates) {
        if *s >= 2.0 && *r > worst {
            worst = *r;
            worst_ss = *s;
        }
    }
    check(
        "5a (exp3 cells under 0.12 for sigma_s >= 2)",
        worst < 0.12,
        &format!(
            "worst cell error rate {worst:.3} at sigma_s = {worst_ss} over the sigma_s >= 2 grids at N = 1000 (required < 0.12)"
        ),
    );
}

#[test]
fn acceptance_5b_exp3_small_sigma_s_degrades() {
    let run = exp3_run();
    let at_1 = mean(&select(&run.table, "error_rate", "sigma_s", 1.0));
    let at_4 = mean(&select(&run.table, "error_rate", "sigma_s", 4.0));
    check(
        "5b (exp3 degradation near zero sigma_s)",
        at_1 > at_4,
        &format!(
            "grid mean error rate at sigma_s = 1 is {at_1:.3}, at sigma_s = 4 is {at_4:.3} (required strictly larger at 1)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 6: experiment 4. Disparity curves with 200000 trials: the
// N = 1000 curve deviates from the oracle curve by at most 0.05 in any
// bin holding >= 200 trials, and larger N gives uniformly closer curves.
// ---------------------------------------------------------------------

fn exp4_run() -> &'static Timed {
    static CELL: OnceLock<Timed> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = ExperimentConfig {
            sigma_s: 10.0,
            sigmas: vec![3.0, 10.0],
            n_trials: 200_000,
            sample_sizes: vec![100, 300, 1000],
            disparity_bin_width: 1.0,
            min_bin_count: 200,
            ..ExperimentConfig::default()
        };
        timed(|c| exp4_disparity(c).unwrap(), &config)
    })
}

fn exp4_max_dev(table: &ResultTable, n: usize) -> f64 {
    let oracle = table.column_f64("p_common_oracle");
    let is_col = table.column_f64(&format!("p_common_is_{n}"));
    let flags = table.column_f64("low_count");
    oracle
        .iter()
        .zip(&is_col)
        .zip(&flags)
        .filter(|(_, &flag)| flag == 0.0)
        .map(|((o, i), _)| (o - i).abs())
        .fold(0.0, f64::max)
}

#[test]
fn acceptance_6a_exp4_deviation_bound() {
    let run = exp4_run();
    let dev = exp4_max_dev(&run.table, 1000);
    check(
        "6a (exp4 deviation at N=1000)",
        dev <= 0.05 && run.elapsed < Duration::from_secs(900),
        &format!(
            "max bin-wise |IS(N=1000) - oracle| = {dev:.4} over bins with >= 200 of 200000 trials (required <= 0.05), runtime {:.2?} (limit 15 min)",
            run.elapsed
        ),
    );
}

#[test]
fn acceptance_6b_exp4_curves_successively_closer() {
    let run = exp4_run();
    let d100 = exp4_max_dev(&run.table, 100);
    let d300 = exp4_max_dev(&run.table, 300);
    let d1000 = exp4_max_dev(&run.table, 1000);

    // Model symmetry: reflecting all stimuli maps disparity d to -d, so the
    // proportion curves are symmetric about zero up to Monte Carlo noise.
    let disp = run.table.column_f64("disparity");
    let counts = run.table.column_f64("n_trials");
    let mut asymmetry = 0.0f64;
    let mut pairs = 0usize;
    for column in ["p_common_oracle", "p_common_is_1000"] {
        let curve = run.table.column_f64(column);
        for (i, &d) in disp.iter().enumerate() {
            if d <= 0.0 || counts[i] < 2000.0 {
                continue;
            }
            if let Some(j) = disp.iter().position(|&m| m == -d) {
                if counts[j] >= 2000.0 {
                    asymmetry += (curve[i] - curve[j]).abs();
                    pairs += 1;
                }
            }
        }
    }
    asymmetry /= pairs as f64;

    check(
        "6b (exp4 successively closer curves)",
        d100 > d300 && d300 > d1000 && asymmetry <= 0.03,
        &format!(
            "max bin deviation {d100:.4} (N=100) > {d300:.4} (N=300) > {d1000:.4} (N=1000); mean curve asymmetry {asymmetry:.4} over {pairs} mirrored bin pairs (required <= 0.03)"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 7: generalizations. Multi-cue error rate at N = 1000 stays
// under 0.06 for 3 and 10 cues; same-different error rate at N = 5000
// stays under 0.06 for 3 and 10 objects; the high-dimensional variants
// need no larger N to reach the threshold.
// ---------------------------------------------------------------------

fn multi_run() -> &'static Timed {
    static CELL: OnceLock<Timed> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = ExperimentConfig {
            cue_counts: vec![3, 10],
            repetitions: 5,
            n_trials: 1000,
            sample_sizes: vec![100, 300, 1000, 3000],
            ..ExperimentConfig::default()
        };
        timed(|c| exp_multi(c).unwrap(), &config)
    })
}

fn samediff_run() -> &'static Timed {
    static CELL: OnceLock<Timed> = OnceLock::new();
    CELL.get_or_init(|| {
        let config = ExperimentConfig {
            object_counts: vec![3, 10],
            repetitions: 5,
            n_trials: 1000,
            sigma_lo: 1.0,
            sigma_hi: 3.0,
            half_range: 10.0,
            sample_sizes: vec![500, 1000, 5000],
            ..ExperimentConfig::default()
        };
        timed(|c| exp_samediff(c).unwrap(), &config)
    })
}

/// Smallest configured sample size whose error rate meets the threshold.
fn threshold_n(table: &ResultTable, variant_col: &str, variant: f64, threshold: f64) -> Option<f64> {
    let variants = table.column_f64(variant_col);
    let sizes = table.column_f64("n_samples");
    let rates = table.column_f64("error_rate");
    let mut qualifying: Vec<(f64, f64)> = variants
        .iter()
        .zip(sizes.iter().zip(&rates))
        .filter(|(v, _)| **v == variant)
        .map(|(_, (n, r))| (*n, *r))
        .collect();
    qualifying.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    qualifying.iter().find(|(_, r)| *r <= threshold).map(|(n, _)| *n)
}

#[test]
fn acceptance_7a_multi_cue_error_rates() {
    let run = multi_run();
    let at_3 = select(&run.table, "error_rate", "n_cues", 3.0)
        .into_iter()
        .zip(select(&run.table, "n_samples", "n_cues", 3.0))
        .find(|(_, n)| *n == 1000.0)
        .map(|(r, _)| r)
        .unwrap();
    let at_10 = select(&run.table, "error_rate", "n_cues", 10.0)
        .into_iter()
        .zip(select(&run.table, "n_samples", "n_cues", 10.0))
        .find(|(_, n)| *n == 1000.0)
        .map(|(r, _)| r)
        .unwrap();
    check(
        "7a (multi-cue error at N=1000)",
        at_3 <= 0.06 && at_10 <= 0.06,
        &format!("error rate vs oracle at N = 1000: t=3 -> {at_3:.4}, t=10 -> {at_10:.4} (required <= 0.06)"),
    );
}

/// True when the per-size rates never rise by more than the Monte Carlo
/// slack as N grows.
fn rates_decreasing(table: &ResultTable, variant_col: &str, variant: f64) -> bool {
    let rates = select(table, "error_rate", variant_col, variant);
    rates.windows(2).all(|w| w[1] <= w[0] + 0.005)
}

#[test]
fn acceptance_7b_multi_cue_threshold_scaling() {
    let run = multi_run();
    let n3 = threshold_n(&run.table, "n_cues", 3.0, 0.06);
    let n10 = threshold_n(&run.table, "n_cues", 10.0, 0.06);
    let scaling = matches!((n3, n10), (Some(a), Some(b)) if b <= a);
    let monotone = rates_decreasing(&run.table, "n_cues", 3.0)
        && rates_decreasing(&run.table, "n_cues", 10.0);
    check(
        "7b (multi-cue needs no larger N at t=10)",
        scaling && monotone,
        &format!(
            "smallest N meeting 0.06: t=3 -> {n3:?}, t=10 -> {n10:?}; error rates decreasing in N: {monotone}"
        ),
    );
}

#[test]
fn acceptance_7c_same_diff_error_rates() {
    let run = samediff_run();
    let rate = |variant: f64| {
        select(&run.table, "error_rate", "n_objects", variant)
            .into_iter()
            .zip(select(&run.table, "n_samples", "n_objects", variant))
            .find(|(_, n)| *n == 5000.0)
            .map(|(r, _)| r)
            .unwrap()
    };
    let (at_3, at_10) = (rate(3.0), rate(10.0));
    check(
        "7c (same-different error at N=5000)",
        at_3 <= 0.06 && at_10 <= 0.06,
        &format!("error rate vs oracle at N = 5000: n=3 -> {at_3:.4}, n=10 -> {at_10:.4} (required <= 0.06)"),
    );
}

#[test]
fn acceptance_7d_same_diff_threshold_scaling() {
    let run = samediff_run();
    let n3 = threshold_n(&run.table, "n_objects", 3.0, 0.06);
    let n10 = threshold_n(&run.table, "n_objects", 10.0, 0.06);
    let scaling = matches!((n3, n10), (Some(a), Some(b)) if b <= a);
    let monotone = rates_decreasing(&run.table, "n_objects", 3.0)
        && rates_decreasing(&run.table, "n_objects", 10.0);
    check(
        "7d (same-different needs no larger N at n=10)",
        scaling && monotone,
        &format!(
            "smallest N meeting 0.06: n=3 -> {n3:?}, n=10 -> {n10:?}; error rates decreasing in N: {monotone}"
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 8: the empirical coverage beats the concentration bounds in
// every tested (N, epsilon) cell, 1e4 repetitions per cell.
// ---------------------------------------------------------------------

#[test]
fn acceptance_8_lemma_bounds() {
    let config = ExperimentConfig {
        repetitions: 10_000,
        sample_sizes: vec![100, 1000, 10_000],
        epsilons: vec![0.05, 0.1, 0.2],
        ..ExperimentConfig::default()
    };
    let table = lemma1_check(&config).unwrap();

    let f1 = table.column_f64("lemma1_frequency");
    let b1 = table.column_f64("lemma1_bound");
    let f2 = table.column_f64("lemma2_frequency");
    let b2 = table.column_f64("lemma2_bound");
    let mut min_margin = f64::INFINITY;
    let mut ok = true;
    for i in 0..table.n_rows() {
        min_margin = min_margin.min(f1[i] - b1[i]).min(f2[i] - b2[i]);
        ok &= f1[i] >= b1[i] && f2[i] >= b2[i];
    }
    check(
        "8 (lemma coverage bounds)",
        ok,
        &format!(
            "empirical frequency >= bound in all {} (N, epsilon) cells for both bounds, min margin {min_margin:.4}",
            table.n_rows()
        ),
    );
}

// ---------------------------------------------------------------------
// Criterion 9: byte-identical CSV under reruns and under thread pools of
// size 1, 4 and 8.
// ---------------------------------------------------------------------

#[test]
fn acceptance_9_determinism_under_parallelism() {
    let exp2_config = ExperimentConfig {
        n_trials: 50,
        repetitions: 2,
        sample_sizes: vec![10, 100],
        ..ExperimentConfig::default()
    };

    let samediff_config = ExperimentConfig {
        object_counts: vec![3],
        repetitions: 1,
        n_trials: 30,
        sigma_lo: 1.0,
        sigma_hi: 3.0,
        sample_sizes: vec![10, 100],
        ..ExperimentConfig::default()
    };

    let exp4_config = ExperimentConfig {
        sigma_s: 10.0,
        sigmas: vec![3.0, 10.0],
        n_trials: 500,
        sample_sizes: vec![30],
        min_bin_count: 50,
        ..ExperimentConfig::default()
    };

    let exp1_config = ExperimentConfig {
        pool_size: 200,
        ..ExperimentConfig::default()
    };

    let exp3_config = ExperimentConfig {
        sigma_s_values: vec![2.0, 4.0],
        sigma_grid_min: 2.0,
        sigma_grid_max: 8.0,
        sigma_grid_step: 3.0,
        n_trials: 20,
        n_samples: 100,
        ..ExperimentConfig::default()
    };

    let multi_config = ExperimentConfig {
        cue_counts: vec![3],
        repetitions: 2,
        n_trials: 30,
        sample_sizes: vec![10, 100],
        ..ExperimentConfig::default()
    };

    let theorem1_config = ExperimentConfig {
        repetitions: 10,
        sample_sizes: vec![100, 1000],
        epsilons: vec![0.05],
        ..ExperimentConfig::default()
    };

    let lemma_config = ExperimentConfig {
        repetitions: 500,
        sample_sizes: vec![100, 1000],
        epsilons: vec![0.1, 0.2],
        ..ExperimentConfig::default()
    };

    type Run = Box<dyn Fn() -> String + Sync>;
    let runs: Vec<(&str, Run)> = vec![
        (
            "exp1",
            Box::new(move || exp1_population(&exp1_config).unwrap().to_csv_string()),
        ),
        (
            "exp2",
            Box::new(move || exp2_convergence(&exp2_config).unwrap().to_csv_string()),
        ),
        (
            "exp3",
            Box::new(move || exp3_sweep(&exp3_config).unwrap().to_csv_string()),
        ),
        (
            "exp4",
            Box::new(move || exp4_disparity(&exp4_config).unwrap().to_csv_string()),
        ),
        (
            "multi",
            Box::new(move || exp_multi(&multi_config).unwrap().to_csv_string()),
        ),
        (
            "samediff",
            Box::new(move || exp_samediff(&samediff_config).unwrap().to_csv_string()),
        ),
        (
            "theorem1",
            Box::new(move || theorem1_check(&theorem1_config).unwrap().to_csv_string()),
        ),
        (
            "lemma1",
            Box::new(move || lemma1_check(&lemma_config).unwrap().to_csv_string()),
        ),
    ];

    let mut all_ok = true;
    let mut detail = Vec::new();
    for (name, run) in &runs {
        let baseline = run();
        let rerun_ok = run() == baseline;
        let mut pools_ok = true;
        for jobs in [1usize, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .unwrap();
            pools_ok &= pool.install(run) == baseline;
        }
        all_ok &= rerun_ok && pools_ok;
        detail.push(format!(
            "{name}: rerun {} / pools(1,4,8) {}",
            if rerun_ok { "identical" } else { "DIFFERS" },
            if pools_ok { "identical" } else { "DIFFERS" }
        ));
    }
    check(
        "9 (byte-identical determinism)",
        all_ok,
        &detail.join("; "),
    );
}
