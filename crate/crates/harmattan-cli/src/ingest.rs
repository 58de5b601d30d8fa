//! CSV ingestion with a strict two-column schema.
//!
//! ```text
//! period,value
//! 2010-01,9.1
//! 2010-02,9.2
//! ```
//!
//! The header row is required, periods must be strictly increasing
//! consecutive months ("YYYY-MM"), and values must parse as finite
//! decimals. Every failure names the offending physical row (1-based,
//! header is row 1).

use std::path::Path;

use harmattan::series::{Period, TimeSeries};

use crate::CliError;

fn parse_period(text: &str, row: usize) -> Result<Period, CliError> {
    let (year, month) = text
        .split_once('-')
        .ok_or_else(|| CliError::data(format!("row {row}: period {text:?} is not YYYY-MM")))?;
    let year: i32 = year
        .parse()
        .map_err(|_| CliError::data(format!("row {row}: bad year in period {text:?}")))?;
    let month: u32 = month
        .parse()
        .map_err(|_| CliError::data(format!("row {row}: bad month in period {text:?}")))?;
    Period::new(year, month)
        .map_err(|_| CliError::data(format!("row {row}: month out of range in period {text:?}")))
}

/// Reads and validates the dataset file into a monthly series, echoing
/// the row count and span to stderr.
pub fn ingest(path: &Path) -> Result<TimeSeries, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let series = ingest_str(&text)?;
    eprintln!(
        "loaded {} observations ({} .. {}) from {}",
        series.len(),
        series.start_period(),
        series.end_period(),
        path.display()
    );
    Ok(series)
}

pub fn ingest_str(text: &str) -> Result<TimeSeries, CliError> {
    let mut lines = text.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) if line.trim().is_empty() => continue,
            Some((index, line)) => break (index, line.trim_end_matches('\r')),
            None => return Err(CliError::data("empty file: no header row".to_string())),
        }
    };
    let normalized = header.1.to_ascii_lowercase().replace(' ', "");
    if normalized != "period,value" {
        return Err(CliError::data(format!(
            "row {}: expected header \"period,value\", found {:?}",
            header.0 + 1,
            header.1
        )));
    }

    let mut values = Vec::new();
    let mut start: Option<Period> = None;
    let mut expected: Option<Period> = None;
    for (index, raw) in lines {
        let row = index + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let (period_text, value_text) = match (fields.next(), fields.next(), fields.next()) {
            (Some(p), Some(v), None) => (p.trim(), v.trim()),
            _ => {
                return Err(CliError::data(format!(
                    "row {row}: expected exactly two comma-separated columns"
                )))
            }
        };
        let period = parse_period(period_text, row)?;
        match expected {
            None => {
                start = Some(period);
            }
            Some(expected_period) => {
                if period < expected_period {
                    return Err(CliError::data(format!(
                        "row {row}: duplicate or out-of-order period {period} (expected {expected_period})"
                    )));
                }
                if period > expected_period {
                    return Err(CliError::data(format!(
                        "row {row}: gap in periods: expected {expected_period}, found {period}"
                    )));
                }
            }
        }
        expected = Some(period.next());

        let value: f64 = value_text.parse().map_err(|_| {
            CliError::data(format!("row {row}: value {value_text:?} is not a decimal"))
        })?;
        if !value.is_finite() {
            return Err(CliError::data(format!("row {row}: value is not finite")));
        }
        values.push(value);
    }

    let start = start.ok_or_else(|| CliError::data("no data rows after the header".to_string()))?;
    TimeSeries::new(values, start, 12).map_err(|e| CliError::data(format!("invalid series: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_row_example() {
        let series = ingest_str("period,value\n2010-01,9.1\n2010-02,9.2\n2010-03,9.0\n").unwrap();
        assert_eq!(series.len(), 3);
        assert_eq!(series.start_period(), Period::new(2010, 1).unwrap());
        assert_eq!(series.values(), &[9.1, 9.2, 9.0]);
    }

    #[test]
    fn gap_detected_at_row_three() {
        let err = ingest_str("period,value\n2010-01,9.1\n2010-03,9.0\n").unwrap_err();
        assert!(err.message.contains("row 3"), "{}", err.message);
        assert!(err.message.contains("gap"), "{}", err.message);
        assert!(err.message.contains("2010-02"), "{}", err.message);
    }

    #[test]
    fn duplicate_detected() {
        let err = ingest_str("period,value\n2010-01,9.1\n2010-01,9.2\n").unwrap_err();
        assert!(err.message.contains("row 3"), "{}", err.message);
        assert!(err.message.contains("duplicate"), "{}", err.message);
    }

    #[test]
    fn empty_and_headerless_files_rejected() {
        assert!(ingest_str("").is_err());
        assert!(ingest_str("period,value\n").is_err());
        let err = ingest_str("2010-01,9.1\n").unwrap_err();
        assert!(err.message.contains("header"), "{}", err.message);
    }

    #[test]
    fn bad_values_name_their_row() {
        let err = ingest_str("period,value\n2010-01,abc\n").unwrap_err();
        assert!(err.message.contains("row 2"), "{}", err.message);
        let err = ingest_str("period,value\n2010-01,9.1,extra\n").unwrap_err();
        assert!(err.message.contains("two comma-separated"), "{}", err.message);
        let err = ingest_str("period,value\n2010-13,9.1\n").unwrap_err();
        assert!(err.message.contains("month out of range"), "{}", err.message);
    }

    #[test]
    fn crlf_and_blank_lines_tolerated() {
        let series = ingest_str("period,value\r\n2010-01,9.1\r\n\r\n2010-02,9.2\r\n").unwrap();
        assert_eq!(series.len(), 2);
    }
}
