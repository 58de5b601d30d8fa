//! Statistical tests and correlation functions: ADF and KPSS unit-root
//! tests, ACF/PACF correlograms, and the Ljung-Box portmanteau test.
//!
//! Every operation is a pure function over immutable inputs. P-values are
//! obtained by linear interpolation in published critical-value tables;
//! values clipped at a table edge are flagged through
//! [`PValueBound`] rather than silently reported as exact.

mod adf;
mod correlogram;
mod kpss;
mod ljung_box;

pub use adf::adf_test;
pub(crate) use correlogram::acf_from_values;
pub use correlogram::{acf, pacf};
pub use kpss::kpss_test;
pub use ljung_box::ljung_box;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Which way a table-clipped p-value should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PValueBound {
    /// Interpolated inside the table: report as-is.
    Exact,
    /// Statistic beyond the far edge of the table: true p <= reported.
    AtMost,
    /// Statistic short of the near edge of the table: true p >= reported.
    AtLeast,
}

/// Critical values keyed by significance level, kept sorted by level.
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalValues(Vec<(f64, f64)>);

impl CriticalValues {
    pub fn new(entries: &[(f64, f64)]) -> Self {
        let mut entries = entries.to_vec();
        entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        Self(entries)
    }

    /// The critical value at `level`, when tabulated.
    pub fn at(&self, level: f64) -> Option<f64> {
        self.0
            .iter()
            .find(|(l, _)| (l - level).abs() < 1e-9)
            .map(|&(_, v)| v)
    }

    /// `(level, value)` pairs in increasing level order.
    pub fn entries(&self) -> &[(f64, f64)] {
        &self.0
    }
}

fn level_label(level: f64) -> String {
    let s = format!("{level:.3}");
    if let Some(stripped) = s.strip_suffix('0') {
        stripped.to_string()
    } else {
        s
    }
}

impl Serialize for CriticalValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (level, value) in &self.0 {
            map.serialize_entry(&level_label(*level), value)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for CriticalValues {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CvVisitor;
        impl<'de> Visitor<'de> for CvVisitor {
            type Value = CriticalValues;

            fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str("a map from significance level to critical value")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<Self::Value, A::Error> {
                let mut entries = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, f64>()? {
                    let level: f64 = key.parse().map_err(serde::de::Error::custom)?;
                    entries.push((level, value));
                }
                Ok(CriticalValues::new(&entries))
            }
        }
        deserializer.deserialize_map(CvVisitor)
    }
}

/// Outcome of a hypothesis test: statistic, p-value, critical values, and
/// the 5%-level decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    /// Name of the test that produced this report.
    pub test: String,
    pub statistic: f64,
    /// P-value in `[0, 1]`; see `p_value_bound` for table-edge clipping.
    pub p_value: f64,
    pub p_value_bound: PValueBound,
    pub critical_values: CriticalValues,
    /// Decision at the 5% level, consistent with the statistic /
    /// critical-value comparison in the test's tail direction.
    pub reject_null: bool,
    pub lags_used: usize,
}

impl TestReport {
    /// `"0.46"` or `">= 0.10"` depending on clipping.
    pub fn p_value_display(&self) -> String {
        match self.p_value_bound {
            PValueBound::Exact => format!("{:.4}", self.p_value),
            PValueBound::AtMost => format!("<= {:.4}", self.p_value),
            PValueBound::AtLeast => format!(">= {:.4}", self.p_value),
        }
    }
}

/// Sample correlations (ACF or PACF) indexed by lag `0..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSequence {
    /// `values[k]` is the correlation at lag `k`; `values[0]` is exactly 1.
    pub values: Vec<f64>,
    /// Sample size the correlations were computed from.
    pub n: usize,
    /// The usual two-sided 95% band, `1.96 / sqrt(n)`.
    pub confidence_band: f64,
}

impl CorrelationSequence {
    fn new(values: Vec<f64>, n: usize) -> Self {
        Self {
            values,
            n,
            confidence_band: 1.96 / (n as f64).sqrt(),
        }
    }
}

/// Interpolates a p-value from `(statistic, p)` table rows sorted so the
/// p column is increasing in row order. Clips and flags at the edges.
fn interpolate_p(table: &[(f64, f64)], statistic: f64) -> (f64, PValueBound) {
    debug_assert!(table.len() >= 2);
    let first = table[0];
    let last = table[table.len() - 1];
    let ascending = last.0 > first.0;

    let before_first = if ascending {
        statistic <= first.0
    } else {
        statistic >= first.0
    };
    if before_first {
        return (first.1, PValueBound::AtMost);
    }
    let after_last = if ascending {
        statistic >= last.0
    } else {
        statistic <= last.0
    };
    if after_last {
        return (last.1, PValueBound::AtLeast);
    }

    for window in table.windows(2) {
        let (s0, p0) = window[0];
        let (s1, p1) = window[1];
        let inside = if ascending {
            statistic >= s0 && statistic <= s1
        } else {
            statistic <= s0 && statistic >= s1
        };
        if inside {
            let t = (statistic - s0) / (s1 - s0);
            return (p0 + t * (p1 - p0), PValueBound::Exact);
        }
    }
    unreachable!("statistic not bracketed by interpolation table");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_values_sorted_and_queryable() {
        let cv = CriticalValues::new(&[(0.10, -2.57), (0.01, -3.48), (0.05, -2.88)]);
        assert_eq!(cv.entries()[0].0, 0.01);
        assert_eq!(cv.at(0.05), Some(-2.88));
        assert_eq!(cv.at(0.20), None);
    }

    #[test]
    fn critical_values_json_round_trip() {
        let cv = CriticalValues::new(&[(0.01, 0.739), (0.025, 0.574), (0.05, 0.463), (0.10, 0.347)]);
        let json = serde_json::to_string(&cv).unwrap();
        assert!(json.contains("\"0.025\""));
        assert!(json.contains("\"0.10\""));
        let back: CriticalValues = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cv);
    }

    #[test]
    fn interpolation_clips_and_flags() {
        let table = [(-3.43, 0.01), (-2.86, 0.05), (-2.57, 0.10)];
        let (p, bound) = interpolate_p(&table, -5.0);
        assert_eq!((p, bound), (0.01, PValueBound::AtMost));
        let (p, bound) = interpolate_p(&table, -1.0);
        assert_eq!((p, bound), (0.10, PValueBound::AtLeast));
        let (p, bound) = interpolate_p(&table, -2.715);
        assert_eq!(bound, PValueBound::Exact);
        assert!((p - 0.075).abs() < 1e-12);
    }
}
