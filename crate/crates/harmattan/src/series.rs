//! The time-series value type and the reversible transforms every model
//! consumes: differencing, min-max scaling, look-back windowing, and
//! chronological train/test splitting.
//!
//! All types here are immutable after construction and all operations are
//! pure functions, so values can be shared freely across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A calendar month, `(year, month)` with `month` in `1..=12`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Period {
    pub year: i32,
    pub month: u32,
}

impl Period {
    pub fn new(year: i32, month: u32) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::OutOfRange {
                name: "month",
                value: month.to_string(),
                expected: "1..=12",
            });
        }
        Ok(Self { year, month })
    }

    /// The period `n` months after this one.
    pub fn plus_months(self, n: usize) -> Self {
        let zero_based = self.year as i64 * 12 + (self.month as i64 - 1) + n as i64;
        Period {
            year: zero_based.div_euclid(12) as i32,
            month: (zero_based.rem_euclid(12) + 1) as u32,
        }
    }

    /// The next calendar month.
    pub fn next(self) -> Self {
        self.plus_months(1)
    }
}

impl std::fmt::Display for Period {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// An ordered sequence of real observations with period metadata.
///
/// Invariants enforced at construction: non-empty, all values finite.
/// Length always equals the number of periods spanned; gaps are an
/// ingestion error and never occur in a constructed value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    values: Vec<f64>,
    start_period: Period,
    frequency: u32,
}

impl TimeSeries {
    /// Builds a series, rejecting empty input and non-finite values.
    pub fn new(values: Vec<f64>, start_period: Period, frequency: u32) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if frequency == 0 {
            return Err(Error::OutOfRange {
                name: "frequency",
                value: "0".into(),
                expected: "positive",
            });
        }
        Ok(Self {
            values,
            start_period,
            frequency,
        })
    }

    /// A monthly series starting at `(year, month)`.
    pub fn monthly(values: Vec<f64>, year: i32, month: u32) -> Result<Self> {
        Self::new(values, Period::new(year, month)?, 12)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false for a constructed series; kept for idiomatic pairing
    /// with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_period(&self) -> Period {
        self.start_period
    }

    pub fn frequency(&self) -> u32 {
        self.frequency
    }

    /// Period of the final observation.
    pub fn end_period(&self) -> Period {
        self.start_period.plus_months(self.values.len() - 1)
    }

    /// Period of the `i`-th observation.
    pub fn period_at(&self, i: usize) -> Period {
        self.start_period.plus_months(i)
    }

    /// Replaces the values, keeping period metadata anchored at `start`.
    fn with_values(&self, values: Vec<f64>, start: Period) -> Result<Self> {
        Self::new(values, start, self.frequency)
    }
}

/// What `difference` consumed, retained so the transform can be inverted.
///
/// `seeds[i]` is the first element of the series as it stood before pass
/// `i + 1`; there are exactly `order` seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceState {
    order: usize,
    seeds: Vec<f64>,
    start_period: Period,
}

impl DifferenceState {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn seeds(&self) -> &[f64] {
        &self.seeds
    }
}

/// Applies `d` passes of consecutive differencing, `y[t] - y[t-1]`.
///
/// Returns the differenced series together with the state needed by
/// [`undifference`] to reconstruct the input exactly.
pub fn difference(series: &TimeSeries, d: usize) -> Result<(TimeSeries, DifferenceState)> {
    if series.len() <= d {
        return Err(Error::TooShort {
            operation: "difference",
            required: d + 1,
            actual: series.len(),
        });
    }
    let start_period = series.start_period();
    let mut values = series.values().to_vec();
    let mut seeds = Vec::with_capacity(d);
    for _ in 0..d {
        seeds.push(values[0]);
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let differenced = series.with_values(values, start_period.plus_months(d))?;
    Ok((
        differenced,
        DifferenceState {
            order: d,
            seeds,
            start_period,
        },
    ))
}

/// Exact inverse of [`difference`]: cumulative sums seeded with the stored
/// leading observations, innermost pass first.
pub fn undifference(series: &TimeSeries, state: &DifferenceState) -> Result<TimeSeries> {
    if state.seeds.len() != state.order {
        return Err(Error::SeedMismatch {
            order: state.order,
            seeds: state.seeds.len(),
        });
    }
    let mut values = series.values().to_vec();
    for &seed in state.seeds.iter().rev() {
        let mut rebuilt = Vec::with_capacity(values.len() + 1);
        rebuilt.push(seed);
        // Compensated summation keeps the reconstruction error at the
        // ulp of each element instead of growing with the length.
        let mut acc = seed;
        let mut compensation = 0.0;
        for v in &values {
            let y = v - compensation;
            let t = acc + y;
            compensation = (t - acc) - y;
            acc = t;
            rebuilt.push(acc);
        }
        values = rebuilt;
    }
    series.with_values(values, state.start_period)
}

/// Fitted min-max scaling parameters.
///
/// The scaler is fitted on training data only; applying it to later data
/// may legitimately produce values outside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalerState {
    pub min: f64,
    pub max: f64,
}

impl ScalerState {
    /// Maps `x` to `(x - min) / (max - min)`.
    pub fn apply_one(&self, x: f64) -> f64 {
        (x - self.min) / (self.max - self.min)
    }

    /// Inverse of [`ScalerState::apply_one`].
    pub fn invert_one(&self, x: f64) -> f64 {
        x * (self.max - self.min) + self.min
    }
}

/// Fits a min-max scaler. Constant series are rejected: they carry no
/// trainable signal and silently mapping them would mask data errors.
pub fn fit_scaler(series: &TimeSeries) -> Result<ScalerState> {
    let min = series.values().iter().cloned().fold(f64::INFINITY, f64::min);
    let max = series
        .values()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    if max <= min {
        return Err(Error::ZeroRange { value: min });
    }
    Ok(ScalerState { min, max })
}

/// Maps each value through the fitted scaler.
pub fn apply_scaler(values: &[f64], state: &ScalerState) -> Vec<f64> {
    values.iter().map(|&x| state.apply_one(x)).collect()
}

/// Exact inverse of [`apply_scaler`].
pub fn invert_scaler(values: &[f64], state: &ScalerState) -> Vec<f64> {
    values.iter().map(|&x| state.invert_one(x)).collect()
}

/// Sliding look-back windows paired with next-step targets.
///
/// For a source of length `n` there are exactly `n - look_back` windows;
/// `inputs[i]` is `source[i..i + look_back]` and `targets[i]` is
/// `source[i + look_back]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowSet {
    pub look_back: usize,
    pub inputs: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl WindowSet {
    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// Builds the sliding windows used by the recurrent forecasters.
pub fn make_windows(series: &TimeSeries, look_back: usize) -> Result<WindowSet> {
    make_windows_from(series.values(), look_back)
}

/// Window construction on a raw slice (the neural trainer windows scaled
/// values, which are no longer a `TimeSeries`).
pub fn make_windows_from(values: &[f64], look_back: usize) -> Result<WindowSet> {
    if look_back == 0 {
        return Err(Error::OutOfRange {
            name: "look_back",
            value: "0".into(),
            expected: "positive",
        });
    }
    if values.len() <= look_back {
        return Err(Error::TooShort {
            operation: "make_windows",
            required: look_back + 1,
            actual: values.len(),
        });
    }
    let count = values.len() - look_back;
    let mut inputs = Vec::with_capacity(count);
    let mut targets = Vec::with_capacity(count);
    for i in 0..count {
        inputs.push(values[i..i + look_back].to_vec());
        targets.push(values[i + look_back]);
    }
    Ok(WindowSet {
        look_back,
        inputs,
        targets,
    })
}

/// Chronological split: train is the first `n - test_length` points, test
/// the last `test_length`. Never shuffles.
pub fn split_train_test(series: &TimeSeries, test_length: usize) -> Result<(TimeSeries, TimeSeries)> {
    let n = series.len();
    if test_length == 0 || test_length >= n {
        return Err(Error::OutOfRange {
            name: "test_length",
            value: test_length.to_string(),
            expected: "1..n",
        });
    }
    let split = n - test_length;
    let train = series.with_values(series.values()[..split].to_vec(), series.start_period())?;
    let test = series.with_values(
        series.values()[split..].to_vec(),
        series.start_period().plus_months(split),
    )?;
    Ok((train, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::SplitMix64;

    fn ts(values: &[f64]) -> TimeSeries {
        TimeSeries::monthly(values.to_vec(), 2010, 1).unwrap()
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<TimeSeries>();
        assert_send_sync::<DifferenceState>();
        assert_send_sync::<ScalerState>();
        assert_send_sync::<WindowSet>();
        assert_send_sync::<crate::arima::ArimaFit>();
        assert_send_sync::<crate::neural::RecurrentModel>();
        assert_send_sync::<crate::diagnostics::TestReport>();
    }

    #[test]
    fn construction_rejects_empty_and_nonfinite() {
        assert!(matches!(
            TimeSeries::monthly(vec![], 2010, 1),
            Err(Error::EmptySeries)
        ));
        assert!(matches!(
            TimeSeries::monthly(vec![1.0, f64::NAN], 2010, 1),
            Err(Error::NonFinite { index: 1, .. })
        ));
        assert!(TimeSeries::monthly(vec![1.0], 2010, 13).is_err());
    }

    #[test]
    fn period_arithmetic_wraps_years() {
        let p = Period::new(2010, 11).unwrap();
        assert_eq!(p.plus_months(1), Period::new(2010, 12).unwrap());
        assert_eq!(p.plus_months(2), Period::new(2011, 1).unwrap());
        assert_eq!(p.plus_months(26), Period::new(2013, 1).unwrap());
        assert_eq!(format!("{}", p), "2010-11");
    }

    #[test]
    fn difference_first_order() {
        let (d, state) = difference(&ts(&[1.0, 2.0, 4.0, 7.0]), 1).unwrap();
        assert_eq!(d.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(state.seeds(), &[1.0]);
        assert_eq!(d.start_period(), Period::new(2010, 2).unwrap());
    }

    #[test]
    fn difference_zero_is_identity() {
        let original = ts(&[3.0, 1.0, 4.0]);
        let (d, state) = difference(&original, 0).unwrap();
        assert_eq!(d, original);
        assert!(state.seeds().is_empty());
    }

    #[test]
    fn difference_second_order() {
        let (d, state) = difference(&ts(&[1.0, 2.0, 4.0, 7.0]), 2).unwrap();
        assert_eq!(d.values(), &[1.0, 1.0]);
        assert_eq!(state.seeds(), &[1.0, 1.0]);
    }

    #[test]
    fn difference_rejects_short_series() {
        let err = difference(&ts(&[1.0, 2.0]), 2).unwrap_err();
        assert!(matches!(
            err,
            Error::TooShort {
                required: 3,
                actual: 2,
                ..
            }
        ));
    }

    #[test]
    fn undifference_inverts_example() {
        let (d, state) = difference(&ts(&[1.0, 2.0, 4.0, 7.0]), 1).unwrap();
        let back = undifference(&d, &state).unwrap();
        assert_eq!(back.values(), &[1.0, 2.0, 4.0, 7.0]);
        assert_eq!(back.start_period(), Period::new(2010, 1).unwrap());
    }

    #[test]
    fn undifference_empty_seeds_is_identity() {
        let original = ts(&[5.0, 6.0]);
        let (d, state) = difference(&original, 0).unwrap();
        assert_eq!(undifference(&d, &state).unwrap(), original);
    }

    #[test]
    fn undifference_rejects_corrupt_state() {
        let (d, state) = difference(&ts(&[1.0, 2.0, 4.0]), 1).unwrap();
        let corrupt = DifferenceState {
            order: 2,
            seeds: state.seeds().to_vec(),
            start_period: Period::new(2010, 1).unwrap(),
        };
        assert!(matches!(
            undifference(&d, &corrupt),
            Err(Error::SeedMismatch { order: 2, seeds: 1 })
        ));
    }

    #[test]
    fn round_trip_random_series_to_1e9() {
        let mut rng = SplitMix64::new(0x5eed);
        for d in 0..=3usize {
            let values: Vec<f64> = (0..100).map(|_| rng.uniform(-50.0, 50.0)).collect();
            let original = ts(&values);
            let (diffed, state) = difference(&original, d).unwrap();
            let back = undifference(&diffed, &state).unwrap();
            assert_eq!(back.len(), original.len());
            for (a, b) in back.values().iter().zip(original.values()) {
                assert!((a - b).abs() <= 1e-9, "d={d}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn scaler_maps_endpoints() {
        let state = fit_scaler(&ts(&[0.0, 5.0, 10.0])).unwrap();
        assert_eq!(apply_scaler(&[0.0, 5.0, 10.0], &state), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn scaler_rejects_constant_series() {
        assert!(matches!(
            fit_scaler(&ts(&[7.0, 7.0, 7.0])),
            Err(Error::ZeroRange { value }) if value == 7.0
        ));
    }

    #[test]
    fn scaler_round_trip_to_1e12() {
        let mut rng = SplitMix64::new(99);
        let values: Vec<f64> = (0..200).map(|_| rng.uniform(-30.0, 120.0)).collect();
        let series = ts(&values);
        let state = fit_scaler(&series).unwrap();
        let scaled = apply_scaler(series.values(), &state);
        for &s in &scaled {
            assert!((0.0..=1.0).contains(&s));
        }
        let back = invert_scaler(&scaled, &state);
        for (a, b) in back.iter().zip(series.values()) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn windows_match_definition() {
        let w = make_windows(&ts(&[1.0, 2.0, 3.0, 4.0, 5.0]), 2).unwrap();
        assert_eq!(
            w.inputs,
            vec![vec![1.0, 2.0], vec![2.0, 3.0], vec![3.0, 4.0]]
        );
        assert_eq!(w.targets, vec![3.0, 4.0, 5.0]);
    }

    #[test]
    fn windows_boundary_single_window() {
        let w = make_windows(&ts(&[1.0, 2.0, 3.0, 4.0]), 3).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w.targets, vec![4.0]);
    }

    #[test]
    fn windows_count_is_n_minus_l() {
        let values: Vec<f64> = (0..144).map(|i| i as f64).collect();
        let w = make_windows(&ts(&values), 12).unwrap();
        assert_eq!(w.len(), 132);
    }

    #[test]
    fn windows_reject_short_input() {
        assert!(make_windows(&ts(&[1.0, 2.0]), 2).is_err());
        assert!(make_windows(&ts(&[1.0, 2.0]), 0).is_err());
    }

    #[test]
    fn split_monthly_span() {
        let values: Vec<f64> = (0..156).map(|i| i as f64).collect();
        let series = ts(&values);
        let (train, test) = split_train_test(&series, 12).unwrap();
        assert_eq!(train.len(), 144);
        assert_eq!(test.len(), 12);
        assert_eq!(train.end_period(), Period::new(2021, 12).unwrap());
        assert_eq!(test.start_period(), Period::new(2022, 1).unwrap());
        assert_eq!(test.end_period(), Period::new(2022, 12).unwrap());
    }

    #[test]
    fn split_boundary_and_partition() {
        let series = ts(&[1.0, 2.0, 3.0, 4.0]);
        let (train, test) = split_train_test(&series, 3).unwrap();
        assert_eq!(train.len(), 1);
        let mut rebuilt = train.values().to_vec();
        rebuilt.extend_from_slice(test.values());
        assert_eq!(rebuilt, series.values());
        assert!(split_train_test(&series, 0).is_err());
        assert!(split_train_test(&series, 4).is_err());
    }
}
