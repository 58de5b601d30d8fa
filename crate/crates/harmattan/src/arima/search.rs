//! Stepwise AIC order search.
//!
//! The differencing order comes first: KPSS is applied repeatedly and the
//! series differenced until the stationarity null is no longer rejected
//! (capped at `max_d`). The (p, q, intercept) search then starts from the
//! candidate set {(2,d,2), (1,d,0), (0,d,1), (0,d,0)}, all with
//! intercept, and hill-climbs through single-coordinate moves (p +/- 1,
//! q +/- 1, intercept toggle), moving whenever AIC improves by more than
//! `AIC_TOLERANCE`. Failed candidates are recorded in the trace, never
//! silently dropped.

use serde::{Deserialize, Serialize};

use crate::diagnostics::kpss_test;
use crate::error::{Error, Result};
use crate::series::{difference, TimeSeries};

use super::{fit_with_options, ArimaFit, ArimaOrder, FitOptions};

/// AIC differences at or below this are ties, resolved by parsimony.
const AIC_TOLERANCE: f64 = 1e-6;

/// Candidates whose fitted roots fall inside this radius are rejected.
const ROOT_PROXIMITY: f64 = 1.001;

/// Search limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchConfig {
    pub max_p: usize,
    pub max_q: usize,
    /// Cap on KPSS-selected differencing.
    pub max_d: usize,
    /// Skip KPSS selection and force this differencing order.
    pub fixed_d: Option<usize>,
    /// Upper bound on hill-climbing rounds.
    pub max_steps: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_p: 5,
            max_q: 5,
            max_d: 2,
            fixed_d: None,
            max_steps: 94,
        }
    }
}

/// One fit attempt inside the search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResult {
    pub order: ArimaOrder,
    pub with_intercept: bool,
    /// AIC when the fit succeeded.
    pub aic: Option<f64>,
    /// Failure description when it did not.
    pub failure: Option<String>,
}

/// Complete record of a stepwise search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchTrace {
    /// Every candidate evaluated, in evaluation order.
    pub evaluated: Vec<CandidateResult>,
    pub best: ArimaOrder,
    pub best_with_intercept: bool,
    /// Human-readable record of the moves taken.
    pub step_log: Vec<String>,
}

/// A (p, q, intercept) candidate at the fixed differencing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    p: usize,
    q: usize,
    intercept: bool,
}

impl Candidate {
    fn describe(&self, d: usize) -> String {
        format!(
            "({},{},{}){}",
            self.p,
            d,
            self.q,
            if self.intercept { "+c" } else { "" }
        )
    }
}

/// `a` strictly preferable to `b`: lower AIC beyond tolerance, ties by
/// smaller p + q, then smaller q.
fn better(a: (f64, Candidate), b: (f64, Candidate)) -> bool {
    if a.0 < b.0 - AIC_TOLERANCE {
        return true;
    }
    if a.0 > b.0 + AIC_TOLERANCE {
        return false;
    }
    let (ca, cb) = (a.1, b.1);
    (ca.p + ca.q, ca.q) < (cb.p + cb.q, cb.q)
}

/// Chooses d by repeated KPSS testing: difference until the test fails
/// to reject stationarity, capped at `max_d`.
fn select_d(series: &TimeSeries, max_d: usize, log: &mut Vec<String>) -> Result<usize> {
    let mut current = series.clone();
    let mut d = 0;
    loop {
        let report = kpss_test(&current, None)?;
        if !report.reject_null {
            log.push(format!(
                "kpss at d={d}: statistic {:.4}, stationary; selected d={d}",
                report.statistic
            ));
            return Ok(d);
        }
        if d >= max_d {
            log.push(format!(
                "kpss still rejects at d={d}; capped at max_d={max_d}"
            ));
            return Ok(d);
        }
        log.push(format!(
            "kpss at d={d}: statistic {:.4}, rejects stationarity; differencing",
            report.statistic
        ));
        let (next, _) = difference(&current, 1)?;
        current = next;
        d += 1;
    }
}

/// Stepwise AIC model selection. Returns the refit best model together
/// with the full search trace.
pub fn stepwise_search(series: &TimeSeries, config: &SearchConfig) -> Result<(ArimaFit, SearchTrace)> {
    let mut step_log = Vec::new();
    let d = match config.fixed_d {
        Some(d) => {
            step_log.push(format!("d={d} fixed by configuration"));
            d
        }
        None => select_d(series, config.max_d, &mut step_log)?,
    };

    let options = FitOptions::default();
    let mut evaluated: Vec<CandidateResult> = Vec::new();
    let mut scores: std::collections::BTreeMap<Candidate, Option<f64>> =
        std::collections::BTreeMap::new();

    let evaluate = |candidate: Candidate,
                        evaluated: &mut Vec<CandidateResult>,
                        scores: &mut std::collections::BTreeMap<Candidate, Option<f64>>|
     -> Option<f64> {
        if let Some(&cached) = scores.get(&candidate) {
            return cached;
        }
        let order = ArimaOrder::new(candidate.p, d, candidate.q);
        let outcome = fit_with_options(series, order, candidate.intercept, &options);
        let (aic, failure) = match outcome {
            Ok(fit) if !fit.aic.is_finite() => (None, Some("non-finite AIC".to_string())),
            // Fitted roots hugging the unit circle signal a boundary
            // solution (usually a spurious common factor); treat the
            // candidate as a failed fit rather than let a degenerate
            // likelihood win the AIC race.
            Ok(fit)
                if !super::roots_outside(&fit.ar_coeffs, ROOT_PROXIMITY)
                    || !super::ma_roots_outside(&fit.ma_coeffs, ROOT_PROXIMITY) =>
            {
                (None, Some("roots too close to the unit circle".to_string()))
            }
            Ok(fit) => (Some(fit.aic), None),
            Err(err) => (None, Some(err.to_string())),
        };
        evaluated.push(CandidateResult {
            order,
            with_intercept: candidate.intercept,
            aic,
            failure,
        });
        scores.insert(candidate, aic);
        aic
    };

    let initial = [(2usize, 2usize), (1, 0), (0, 1), (0, 0)];
    let mut best: Option<(f64, Candidate)> = None;
    for (p, q) in initial {
        if p > config.max_p || q > config.max_q {
            continue;
        }
        let candidate = Candidate {
            p,
            q,
            intercept: true,
        };
        if let Some(aic) = evaluate(candidate, &mut evaluated, &mut scores) {
            let entry = (aic, candidate);
            if best.is_none() || better(entry, best.unwrap()) {
                best = Some(entry);
            }
        }
    }
    let mut best = best.ok_or_else(|| Error::SearchFailed {
        trace: Box::new(SearchTrace {
            evaluated: evaluated.clone(),
            best: ArimaOrder::new(0, d, 0),
            best_with_intercept: true,
            step_log: step_log.clone(),
        }),
    })?;
    step_log.push(format!(
        "start at {} with aic {:.3}",
        best.1.describe(d),
        best.0
    ));

    for step in 1..=config.max_steps {
        let current = best.1;
        let mut neighbors = Vec::with_capacity(5);
        if current.p < config.max_p {
            neighbors.push(Candidate {
                p: current.p + 1,
                ..current
            });
        }
        if current.p > 0 {
            neighbors.push(Candidate {
                p: current.p - 1,
                ..current
            });
        }
        if current.q < config.max_q {
            neighbors.push(Candidate {
                q: current.q + 1,
                ..current
            });
        }
        if current.q > 0 {
            neighbors.push(Candidate {
                q: current.q - 1,
                ..current
            });
        }
        neighbors.push(Candidate {
            intercept: !current.intercept,
            ..current
        });

        let mut improved: Option<(f64, Candidate)> = None;
        for candidate in neighbors {
            if let Some(aic) = evaluate(candidate, &mut evaluated, &mut scores) {
                let entry = (aic, candidate);
                if entry.0 < best.0 - AIC_TOLERANCE
                    && (improved.is_none() || better(entry, improved.unwrap()))
                {
                    improved = Some(entry);
                }
            }
        }

        match improved {
            Some(entry) => {
                step_log.push(format!(
                    "step {step}: move to {} with aic {:.3}",
                    entry.1.describe(d),
                    entry.0
                ));
                best = entry;
            }
            None => {
                step_log.push(format!(
                    "step {step}: no neighbor improves; local minimum at {}",
                    current.describe(d)
                ));
                break;
            }
        }
    }

    let trace = SearchTrace {
        evaluated,
        best: ArimaOrder::new(best.1.p, d, best.1.q),
        best_with_intercept: best.1.intercept,
        step_log,
    };
    let refit = fit_with_options(series, trace.best, trace.best_with_intercept, &options)?;
    Ok((refit, trace))
}
