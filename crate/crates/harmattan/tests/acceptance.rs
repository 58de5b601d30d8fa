#![allow(clippy::needless_range_loop)] // oracle kernels use explicit indices

//! Acceptance suite: one test per criterion, each printing a PASS line
//! (cargo prints the fail lines). Oracles here are deliberately
//! independent of the library's implementation paths: the AR likelihood
//! is rebuilt from theoretical autocovariances and a local Cholesky, the
//! forecast variances from a symbolic future-innovation recursion, and
//! the calibration rates from fresh seeded simulations.
//!
//! Criterion 11 is dataset-gated: it runs only when
//! `HARMATTAN_GHANA_CSV` names a monthly CPI inflation CSV covering
//! 2010-2021 (see README), and reports itself as skipped otherwise.

use std::time::Instant;

use harmattan::arima::{
    exact_loglikelihood, fit, psi_weights, simulate_arma, simulate_random_walk, stepwise_search,
    ArimaOrder, SearchConfig,
};
use harmattan::diagnostics::{adf_test, kpss_test, ljung_box};
use harmattan::evaluation::score;
use harmattan::neural::{backward, forward, train, OptimizerKind, RecurrentKind, RecurrentModel, TrainConfig};
use harmattan::series::{
    apply_scaler, difference, fit_scaler, invert_scaler, make_windows, split_train_test,
    undifference, TimeSeries,
};

fn ts(values: Vec<f64>) -> TimeSeries {
    TimeSeries::monthly(values, 2010, 1).unwrap()
}

/// Minimal deterministic generator for the property-test inputs.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    fn uniform(&mut self, low: f64, high: f64) -> f64 {
        let unit = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        low + unit * (high - low)
    }

    fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

// =====================================================================
// Criterion 1: ARMA parameter recovery
// =====================================================================

#[test]
fn criterion_01_arma_parameter_recovery() {
    let start = Instant::now();
    let mut phi_errors = Vec::new();
    let mut theta_errors = Vec::new();
    let mut sigma2_errors = Vec::new();
    for seed in 0..20u64 {
        let data = simulate_arma(&[0.6], &[0.3], 0.0, 1.0, 2000, seed, 200);
        let fitted = fit(&ts(data), ArimaOrder::new(1, 0, 1), true).unwrap();
        phi_errors.push((fitted.ar_coeffs[0] - 0.6).abs());
        theta_errors.push((fitted.ma_coeffs[0] - 0.3).abs());
        sigma2_errors.push((fitted.sigma2 - 1.0).abs());
    }
    let median = |errors: &mut Vec<f64>| {
        errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (errors[9] + errors[10]) / 2.0
    };
    let phi_median = median(&mut phi_errors);
    let theta_median = median(&mut theta_errors);
    assert!(phi_median < 0.05, "median phi error {phi_median}");
    assert!(theta_median < 0.05, "median theta error {theta_median}");
    assert!(
        phi_errors.iter().chain(&theta_errors).all(|e| *e < 0.1),
        "max errors phi {:.4} theta {:.4}",
        phi_errors.last().unwrap(),
        theta_errors.last().unwrap()
    );
    assert!(
        sigma2_errors.iter().all(|e| *e < 0.15),
        "sigma2 error up to {:.4}",
        sigma2_errors.iter().cloned().fold(0.0, f64::max)
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 60, "took {elapsed:.1?}");
    println!(
        "[PASS] criterion 1: ARMA(1,1) recovery, median errors phi {phi_median:.4} / theta {theta_median:.4}, 20 seeds in {elapsed:.1?}"
    );
}

// =====================================================================
// Criterion 2: likelihood oracle
// =====================================================================

/// Solves a small dense linear system (test-local Gaussian elimination).
fn oracle_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&x, &y| a[x][col].abs().partial_cmp(&a[y][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i][j] * x[j];
        }
        x[i] = acc / a[i][i];
    }
    x
}

/// Theoretical autocovariances gamma_0..gamma_{max_lag} of a stationary
/// AR(p) with coefficients `phi` and innovation variance `sigma2`,
/// straight from the Yule-Walker equations.
fn ar_autocovariances(phi: &[f64], sigma2: f64, max_lag: usize) -> Vec<f64> {
    let p = phi.len();
    // Unknowns gamma_0..gamma_p: equation k is
    // gamma_k - sum_i phi_i gamma_{|k-i|} = sigma2 * [k == 0].
    let mut a = vec![vec![0.0; p + 1]; p + 1];
    let mut b = vec![0.0; p + 1];
    for (k, row) in a.iter_mut().enumerate() {
        row[k] += 1.0;
        for (i, &phi_i) in phi.iter().enumerate() {
            let j = k.abs_diff(i + 1);
            row[j] -= phi_i;
        }
    }
    b[0] = sigma2;
    let mut gamma = oracle_solve(a, b);
    for k in p + 1..=max_lag {
        let mut value = 0.0;
        for (i, &phi_i) in phi.iter().enumerate() {
            value += phi_i * gamma[k - 1 - i];
        }
        gamma.push(value);
    }
    gamma.truncate(max_lag + 1);
    gamma
}

/// Gaussian log-density of `y` under N(0, Gamma) via a local Cholesky.
fn gaussian_loglik_from_covariance(y: &[f64], gamma: &[f64]) -> f64 {
    let n = y.len();
    let mut chol = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = gamma[i.abs_diff(j)];
            for k in 0..j {
                acc -= chol[i][k] * chol[j][k];
            }
            if i == j {
                chol[i][j] = acc.sqrt();
            } else {
                chol[i][j] = acc / chol[j][j];
            }
        }
    }
    // Solve L z = y.
    let mut z = vec![0.0; n];
    for i in 0..n {
        let mut acc = y[i];
        for k in 0..i {
            acc -= chol[i][k] * z[k];
        }
        z[i] = acc / chol[i][i];
    }
    let log_det: f64 = (0..n).map(|i| chol[i][i].ln()).sum();
    let quad: f64 = z.iter().map(|v| v * v).sum();
    -0.5 * n as f64 * (2.0 * std::f64::consts::PI).ln() - log_det - 0.5 * quad
}

#[test]
fn criterion_02_likelihood_oracle() {
    // Kalman vs Cholesky-autocovariance for AR(p <= 3), n <= 50.
    let cases: Vec<(Vec<f64>, f64, usize, u64)> = vec![
        (vec![0.5], 1.0, 30, 1),
        (vec![0.5], 2.3, 50, 2),
        (vec![0.9], 1.0, 50, 3),
        (vec![0.4, 0.3], 0.7, 40, 4),
        (vec![1.2, -0.5], 1.0, 50, 5),
        (vec![0.3, 0.2, 0.2], 1.5, 50, 6),
        (vec![0.8, -0.4, 0.1], 1.0, 20, 7),
    ];
    for (phi, sigma2, n, seed) in cases {
        let data = simulate_arma(&phi, &[], 0.0, sigma2, n, seed, 300);
        let kalman = exact_loglikelihood(&data, &phi, &[], 0.0, sigma2).unwrap();
        let gamma = ar_autocovariances(&phi, sigma2, n - 1);
        let oracle = gaussian_loglik_from_covariance(&data, &gamma);
        assert!(
            (kalman - oracle).abs() < 1e-6,
            "AR({}) n={n}: kalman {kalman} vs oracle {oracle}",
            phi.len()
        );
    }

    // White noise vs the closed-form i.i.d. Gaussian likelihood.
    let data = simulate_arma(&[], &[], 2.0, 1.7, 50, 8, 0);
    let mean = 2.4;
    let sigma2 = 1.7;
    let closed: f64 = data
        .iter()
        .map(|&y| {
            let e = y - mean;
            -0.5 * (2.0 * std::f64::consts::PI * sigma2).ln() - 0.5 * e * e / sigma2
        })
        .sum();
    let kalman = exact_loglikelihood(&data, &[], &[], mean, sigma2).unwrap();
    assert!(
        (kalman - closed).abs() < 1e-8,
        "white noise: {kalman} vs {closed}"
    );
    println!("[PASS] criterion 2: Kalman likelihood matches Cholesky oracle (AR p<=3) to 1e-6 and the closed form to 1e-8");
}

// =====================================================================
// Criterion 3: unit-root test calibration
// =====================================================================

#[test]
fn criterion_03_unit_root_calibration() {
    let start = Instant::now();
    let replications = 200;
    let n = 500;

    let mut adf_size = 0;
    let mut adf_power = 0;
    let mut kpss_size = 0;
    let mut kpss_power = 0;
    for seed in 0..replications {
        let walk = ts(simulate_random_walk(n, 10_000 + seed));
        let noise = ts(simulate_arma(&[], &[], 0.0, 1.0, n, 20_000 + seed, 0));
        if adf_test(&walk, None).unwrap().reject_null {
            adf_size += 1;
        }
        if adf_test(&noise, None).unwrap().reject_null {
            adf_power += 1;
        }
        if kpss_test(&noise, None).unwrap().reject_null {
            kpss_size += 1;
        }
        if kpss_test(&walk, None).unwrap().reject_null {
            kpss_power += 1;
        }
    }
    assert!(
        adf_size * 10 <= replications,
        "ADF rejected {adf_size}/{replications} random walks (> 10%)"
    );
    assert!(
        adf_power * 100 >= replications * 95,
        "ADF rejected only {adf_power}/{replications} white noise series (< 95%)"
    );
    assert!(
        kpss_size * 10 <= replications,
        "KPSS rejected {kpss_size}/{replications} white noise series (> 10%)"
    );
    assert!(
        kpss_power * 100 >= replications * 95,
        "KPSS rejected only {kpss_power}/{replications} random walks (< 95%)"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:.1?}");
    println!(
        "[PASS] criterion 3: ADF size {adf_size}/200, power {adf_power}/200; KPSS size {kpss_size}/200, power {kpss_power}/200 in {elapsed:.1?}"
    );
}

// =====================================================================
// Criterion 4: Ljung-Box calibration
// =====================================================================

#[test]
fn criterion_04_ljung_box_calibration() {
    let replications = 200;
    let mut rejections = 0;
    for seed in 0..replications {
        let noise = simulate_arma(&[], &[], 0.0, 1.0, 500, 30_000 + seed, 0);
        if ljung_box(&noise, 10, 0).unwrap().p_value < 0.05 {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / replications as f64;
    assert!(
        (0.01..=0.10).contains(&rate),
        "rejection rate {rate} outside [0.01, 0.10]"
    );
    println!("[PASS] criterion 4: Ljung-Box size {rejections}/200 at the 5% level");
}

// =====================================================================
// Criterion 5: forecast identities and coverage
// =====================================================================

/// Independent forecast-error variance: propagate the coefficients of
/// the future innovations through the ARMA recursion symbolically.
/// `error(h) = sum_{k=1..h} c[h][k] eps_{n+k}` with
/// `c[h][k] = [k == h] + theta_{h-k} + sum phi_i c[h-i][k]`.
fn symbolic_forecast_variances(phi: &[f64], theta: &[f64], horizon: usize, sigma2: f64) -> Vec<f64> {
    let mut coeffs: Vec<Vec<f64>> = Vec::with_capacity(horizon + 1);
    coeffs.push(Vec::new()); // error(0) = 0
    for h in 1..=horizon {
        let mut c = vec![0.0; h + 1];
        c[h] = 1.0;
        for (j, &theta_j) in theta.iter().enumerate() {
            let lag = j + 1;
            if lag < h {
                c[h - lag] += theta_j;
            }
        }
        for (i, &phi_i) in phi.iter().enumerate() {
            let lag = i + 1;
            if lag < h {
                for (k, &value) in coeffs[h - lag].iter().enumerate() {
                    c[k] += phi_i * value;
                }
            }
        }
        coeffs.push(c);
    }
    coeffs[1..]
        .iter()
        .map(|c| sigma2 * c.iter().map(|v| v * v).sum::<f64>())
        .collect()
}

#[test]
fn criterion_05_forecast_identities_and_coverage() {
    let z975 = 1.959_963_984_540_054_4_f64;

    // (a) White-noise forecasts: point = mean, half-width = z * sigma.
    let data = simulate_arma(&[], &[], 7.0, 2.0, 400, 51, 0);
    let wn = fit(&ts(data), ArimaOrder::new(0, 0, 0), true).unwrap();
    let forecast = wn.forecast(8, 0.95).unwrap();
    for h in 0..8 {
        assert!((forecast.point[h] - wn.intercept).abs() < 1e-8);
        let half = forecast.upper[h] - forecast.point[h];
        assert!((half - z975 * wn.sigma2.sqrt()).abs() < 1e-8, "h={h}: {half}");
    }

    // (b) AR(1) closed-form point forecasts.
    let data = simulate_arma(&[0.7], &[], 5.0, 1.0, 800, 52, 100);
    let last = *data.last().unwrap();
    let ar1 = fit(&ts(data), ArimaOrder::new(1, 0, 0), true).unwrap();
    let forecast = ar1.forecast(12, 0.95).unwrap();
    for h in 1..=12usize {
        let expected = ar1.intercept + ar1.ar_coeffs[0].powi(h as i32) * (last - ar1.intercept);
        assert!(
            (forecast.point[h - 1] - expected).abs() < 1e-8,
            "h={h}: {} vs {expected}",
            forecast.point[h - 1]
        );
    }

    // (c) Interval variances match the symbolic recursion to 1e-6.
    let data = simulate_arma(&[0.6], &[0.3], 0.0, 1.0, 1500, 53, 200);
    let arma = fit(&ts(data), ArimaOrder::new(1, 0, 1), true).unwrap();
    let forecast = arma.forecast(12, 0.95).unwrap();
    let oracle =
        symbolic_forecast_variances(&arma.ar_coeffs, &arma.ma_coeffs, 12, arma.sigma2);
    let psi = psi_weights(&arma.ar_coeffs, &arma.ma_coeffs, 12);
    let mut cumulative = 0.0;
    for h in 0..12 {
        let half = forecast.upper[h] - forecast.point[h];
        let implied_variance = (half / z975) * (half / z975);
        assert!(
            (implied_variance - oracle[h]).abs() < 1e-6 * oracle[h].max(1.0),
            "h={}: implied {implied_variance} vs oracle {}",
            h + 1,
            oracle[h]
        );
        // The psi expansion itself agrees with the symbolic route.
        cumulative += psi[h] * psi[h];
        assert!((arma.sigma2 * cumulative - oracle[h]).abs() < 1e-6 * oracle[h].max(1.0));
    }

    // (d) One-step 95% coverage over 2000 rolling forecasts.
    let long = simulate_arma(&[0.6], &[0.3], 5.0, 1.0, 2300, 54, 200);
    let master = fit(&ts(long.clone()), ArimaOrder::new(1, 0, 1), true).unwrap();
    let mut covered = 0;
    let trials = 2000;
    for t in 300..300 + trials {
        let prefix = ts(long[..t].to_vec());
        let applied = master.reapply(&prefix).unwrap();
        let step = applied.forecast(1, 0.95).unwrap();
        if step.lower[0] <= long[t] && long[t] <= step.upper[0] {
            covered += 1;
        }
    }
    let coverage = covered as f64 / trials as f64;
    assert!(
        (0.92..=0.98).contains(&coverage),
        "one-step coverage {coverage}"
    );
    println!(
        "[PASS] criterion 5: closed-form forecasts to 1e-8, psi-variances to 1e-6, one-step coverage {coverage:.3}"
    );
}

// =====================================================================
// Criterion 6: neural gradient check
// =====================================================================

#[test]
fn criterion_06_neural_gradient_check() {
    let start = Instant::now();
    let step = 1e-5;
    let mut worst: f64 = 0.0;
    for kind in [RecurrentKind::SimpleRnn, RecurrentKind::Lstm] {
        for seed in 0..10u64 {
            let config = TrainConfig {
                look_back: 12,
                hidden_size: 8,
                epochs: 1,
                learning_rate: 0.01,
                seed: 100 + seed,
                gradient_clip: 5.0,
                optimizer: OptimizerKind::Adam,
            };
            let model = RecurrentModel::initialize(kind, &config);
            let mut rng = SplitMix64(900 + seed);
            let window: Vec<f64> = (0..12).map(|_| rng.uniform(-1.0, 1.0)).collect();
            let target = rng.uniform(-1.0, 1.0);

            let (_, cache) = forward(&model, &window).unwrap();
            let analytic = backward(&model, &cache, target).unwrap();

            let loss = |m: &RecurrentModel| {
                let (prediction, _) = forward(m, &window).unwrap();
                0.5 * (prediction - target) * (prediction - target)
            };
            for i in 0..model.weights().len() {
                let mut plus = model.clone();
                plus.weights_mut()[i] += step;
                let mut minus = model.clone();
                minus.weights_mut()[i] -= step;
                let numeric = (loss(&plus) - loss(&minus)) / (2.0 * step);
                let denom = analytic[i].abs().max(numeric.abs()).max(1e-5);
                let relative = (analytic[i] - numeric).abs() / denom;
                worst = worst.max(relative);
                assert!(
                    relative < 1e-4,
                    "{kind} seed {seed} weight {i}: analytic {} vs numeric {numeric} (rel {relative:.2e})",
                    analytic[i]
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 30, "took {elapsed:.1?}");
    println!(
        "[PASS] criterion 6: BPTT gradients match central differences, worst relative error {worst:.2e}, in {elapsed:.1?}"
    );
}

// =====================================================================
// Criterion 7: learnability
// =====================================================================

#[test]
fn criterion_07_learnability_on_sine() {
    let values: Vec<f64> = (0..480)
        .map(|i| (std::f64::consts::TAU * i as f64 / 24.0).sin())
        .collect();
    let series = ts(values);

    let lstm_config = TrainConfig {
        look_back: 12,
        hidden_size: 16,
        epochs: 200,
        learning_rate: 0.001,
        seed: 1,
        gradient_clip: 5.0,
        optimizer: OptimizerKind::Adam,
    };
    let (_, _, lstm_report) = train(&series, &lstm_config, RecurrentKind::Lstm).unwrap();
    let lstm_rmse = lstm_report.final_loss.sqrt();
    assert!(lstm_rmse < 0.02, "LSTM scaled RMSE {lstm_rmse}");

    let rnn_config = TrainConfig {
        learning_rate: 0.0005,
        seed: 7,
        ..lstm_config
    };
    let (_, _, rnn_report) = train(&series, &rnn_config, RecurrentKind::SimpleRnn).unwrap();
    let rnn_rmse = rnn_report.final_loss.sqrt();
    assert!(rnn_rmse < 0.05, "RNN scaled RMSE {rnn_rmse}");

    // Both loss curves must actually descend.
    assert!(lstm_report.final_loss < lstm_report.loss_history[0]);
    assert!(rnn_report.final_loss < rnn_report.loss_history[0]);
    println!(
        "[PASS] criterion 7: sine learnability, scaled RMSE lstm {lstm_rmse:.4} (< 0.02), rnn {rnn_rmse:.4} (< 0.05)"
    );
}

// =====================================================================
// Criterion 8: stepwise-search sanity
// =====================================================================

#[test]
fn criterion_08_stepwise_search_sanity() {
    // White noise: the null order wins the majority of 50 runs.
    let mut null_picks = 0;
    for seed in 400..450u64 {
        let data = simulate_arma(&[], &[], 0.0, 1.0, 1000, seed, 0);
        let (_, trace) = stepwise_search(&ts(data), &SearchConfig::default()).unwrap();
        if trace.best.p == 0 && trace.best.q == 0 {
            null_picks += 1;
        }
    }
    assert!(
        null_picks > 25,
        "white noise selected (0,0,0) in only {null_picks}/50 runs"
    );

    // AR(1) data: an autoregressive term is always found.
    for seed in 0..10u64 {
        let data = simulate_arma(&[0.7], &[], 0.0, 1.0, 1000, 500 + seed, 200);
        let (_, trace) = stepwise_search(&ts(data), &SearchConfig::default()).unwrap();
        assert!(
            trace.best.p >= 1,
            "seed {seed}: AR(1) data selected {}",
            trace.best
        );
    }

    // Determinism: identical trace for an identical seed.
    let data = simulate_arma(&[0.5], &[0.2], 1.0, 1.0, 800, 600, 100);
    let series = ts(data);
    let (fit_a, trace_a) = stepwise_search(&series, &SearchConfig::default()).unwrap();
    let (fit_b, trace_b) = stepwise_search(&series, &SearchConfig::default()).unwrap();
    assert_eq!(trace_a, trace_b);
    assert_eq!(fit_a.aic.to_bits(), fit_b.aic.to_bits());
    println!(
        "[PASS] criterion 8: stepwise search, {null_picks}/50 null picks on white noise, p >= 1 on AR(1), deterministic traces"
    );
}

// =====================================================================
// Criterion 9: transform round trips
// =====================================================================

#[test]
fn criterion_09_transform_round_trips() {
    let mut rng = SplitMix64(777);
    let cases = 1000;
    for case in 0..cases {
        // Percent-scale values and monthly-decade lengths: the data
        // domain of the toolkit. Third differences of longer coarse
        // random data hit the f64 rounding of the differences
        // themselves (quadratic in n under re-integration), which no
        // reconstruction can undo.
        let n = 8 + rng.index(112);
        let values: Vec<f64> = (0..n).map(|_| rng.uniform(-50.0, 50.0)).collect();
        let series = ts(values.clone());

        // difference / undifference to 1e-9 per element.
        let d = rng.index(4.min(n - 1));
        let (diffed, state) = difference(&series, d).unwrap();
        let back = undifference(&diffed, &state).unwrap();
        for (a, b) in back.values().iter().zip(&values) {
            assert!((a - b).abs() <= 1e-9, "case {case}: d={d}: {a} vs {b}");
        }

        // scaler round trip to 1e-12, scaled values in [0, 1].
        if let Ok(scaler) = fit_scaler(&series) {
            let scaled = apply_scaler(series.values(), &scaler);
            assert!(scaled.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
            let unscaled = invert_scaler(&scaled, &scaler);
            for (a, b) in unscaled.iter().zip(&values) {
                assert!((a - b).abs() <= 1e-12, "case {case}: {a} vs {b}");
            }
        }

        // window count exact, targets aligned.
        let look_back = 1 + rng.index(n - 1);
        let windows = make_windows(&series, look_back).unwrap();
        assert_eq!(windows.len(), n - look_back);
        for (i, target) in windows.targets.iter().enumerate() {
            assert_eq!(*target, values[i + look_back]);
            assert_eq!(windows.inputs[i], values[i..i + look_back].to_vec());
        }

        // split partitions in order.
        if n >= 2 {
            let test_length = 1 + rng.index(n - 1);
            let (train_span, test_span) = split_train_test(&series, test_length).unwrap();
            let mut rebuilt = train_span.values().to_vec();
            rebuilt.extend_from_slice(test_span.values());
            assert_eq!(rebuilt, values);
        }
    }
    println!("[PASS] criterion 9: transform round trips over {cases} random cases");
}

// =====================================================================
// Criterion 10: metric inequalities
// =====================================================================

#[test]
fn criterion_10_metric_inequalities() {
    let mut rng = SplitMix64(888);
    for _ in 0..1000 {
        let n = 1 + rng.index(50);
        let actual: Vec<f64> = (0..n).map(|_| rng.uniform(-20.0, 20.0)).collect();
        let predicted: Vec<f64> = (0..n).map(|_| rng.uniform(-20.0, 20.0)).collect();
        if let Ok(report) = score(&actual, &predicted) {
            assert!(
                report.rmse >= report.mae - 1e-12,
                "rmse {} < mae {}",
                report.rmse,
                report.mae
            );
        }
    }

    let report = score(&[1.0, 2.0], &[2.0, 4.0]).unwrap();
    assert_eq!(report.mae, 1.5);
    assert_eq!(report.rmse, 2.5f64.sqrt());
    assert_eq!(report.mape, 100.0);
    println!("[PASS] criterion 10: rmse >= mae on 1000 random inputs; worked example exact");
}

// =====================================================================
// Criterion 11: dataset-gated reference checks
// =====================================================================

/// Reads a monthly CPI inflation CSV (same schema as the CLI) covering
/// at least 2010-2021 and runs the reference checks against it.
#[test]
fn criterion_11_dataset_gated_reference() {
    let Some(path) = std::env::var_os("HARMATTAN_GHANA_CSV") else {
        println!(
            "[SKIP] criterion 11: dataset-gated; set HARMATTAN_GHANA_CSV to a monthly CPI inflation CSV (period,value; 2010-2021) to run"
        );
        return;
    };
    let text = std::fs::read_to_string(&path).expect("dataset readable");
    // Keep only the 2010-2021 reference window; files often carry the
    // later forecasting span too.
    let mut values = Vec::new();
    let mut start: Option<(i32, u32)> = None;
    for line in text.lines().skip(1) {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let (period, value) = line.split_once(',').expect("period,value rows");
        let (year, month) = period.trim().split_once('-').expect("YYYY-MM periods");
        let year: i32 = year.parse().expect("numeric year");
        let month: u32 = month.parse().expect("numeric month");
        if !(2010..=2021).contains(&year) {
            continue;
        }
        if start.is_none() {
            start = Some((year, month));
        }
        values.push(value.trim().parse::<f64>().expect("numeric value"));
    }
    let (year, month) = start.expect("rows inside 2010-2021");
    let series = TimeSeries::monthly(values, year, month).unwrap();

    // Levels fail to reject the unit root; first differences reject.
    let levels = adf_test(&series, None).unwrap();
    assert!(
        !levels.reject_null,
        "ADF on levels rejected (statistic {:.3})",
        levels.statistic
    );
    let (diffed, _) = difference(&series, 1).unwrap();
    let differences = adf_test(&diffed, None).unwrap();
    assert!(
        differences.reject_null,
        "ADF on first differences failed to reject (statistic {:.3})",
        differences.statistic
    );

    // (1,0,1) has the lowest AIC among the eight reference orders.
    let orders = [
        (2, 0, 2),
        (1, 0, 0),
        (0, 0, 1),
        (2, 0, 0),
        (1, 0, 1),
        (2, 0, 1),
        (1, 0, 2),
        (0, 0, 2),
    ];
    let mut aics = Vec::new();
    for (p, d, q) in orders {
        let fitted = fit(&series, ArimaOrder::new(p, d, q), true).unwrap();
        aics.push(((p, d, q), fitted.aic));
    }
    let best = aics
        .iter()
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    assert_eq!(
        best.0,
        (1, 0, 1),
        "expected (1,0,1) to minimize AIC; got {:?} (all: {aics:?})",
        best.0
    );
    println!(
        "[PASS] criterion 11: dataset reference checks (ADF levels {:.2}, differences {:.2}; (1,0,1) AIC minimal at {:.3})",
        levels.statistic, differences.statistic, best.1
    );
}
