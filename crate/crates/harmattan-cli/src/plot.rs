//! Static SVG rendering: series line plots, forecast fans with per-step
//! interval segments, and actual-versus-predicted overlays.

use harmattan::arima::Forecast;
use harmattan::series::TimeSeries;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 450.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 20.0;
const MARGIN_BOTTOM: f64 = 45.0;

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn from_ranges(x_max: f64, values: impl Iterator<Item = f64>) -> Self {
        let mut y_min = f64::INFINITY;
        let mut y_max = f64::NEG_INFINITY;
        for v in values {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
        if !y_min.is_finite() || y_min == y_max {
            y_min -= 1.0;
            y_max += 1.0;
        }
        let pad = 0.05 * (y_max - y_min);
        Self {
            x_min: 0.0,
            x_max: x_max.max(1.0),
            y_min: y_min - pad,
            y_max: y_max + pad,
        }
    }

    fn x(&self, v: f64) -> f64 {
        MARGIN_LEFT + (v - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, v: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (v - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }

    fn polyline(&self, points: impl Iterator<Item = (f64, f64)>, class: &str, color: &str) -> String {
        let coords: Vec<String> = points
            .map(|(x, y)| format!("{:.2},{:.2}", self.x(x), self.y(y)))
            .collect();
        format!(
            "<polyline class=\"{class}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            coords.join(" ")
        )
    }

    fn axes(&self, title: &str, y_label: &str) -> String {
        let x0 = MARGIN_LEFT;
        let x1 = WIDTH - MARGIN_RIGHT;
        let y0 = HEIGHT - MARGIN_BOTTOM;
        let mut out = String::new();
        out.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{y0:.1}\" x2=\"{x1:.1}\" y2=\"{y0:.1}\" stroke=\"#333\"/>\n"
        ));
        out.push_str(&format!(
            "<line x1=\"{x0:.1}\" y1=\"{MARGIN_TOP:.1}\" x2=\"{x0:.1}\" y2=\"{y0:.1}\" stroke=\"#333\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"{:.1}\" y=\"14\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">{title}</text>\n",
            WIDTH / 2.0
        ));
        out.push_str(&format!(
            "<text x=\"14\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\" transform=\"rotate(-90 14 {:.1})\">{y_label}</text>\n",
            HEIGHT / 2.0, HEIGHT / 2.0
        ));
        for i in 0..=4 {
            let value = self.y_min + (self.y_max - self.y_min) * i as f64 / 4.0;
            let y = self.y(value);
            out.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"10\" font-family=\"sans-serif\">{:.1}</text>\n",
                x0 - 6.0, y + 3.0, value
            ));
            out.push_str(&format!(
                "<line x1=\"{x0:.1}\" y1=\"{y:.1}\" x2=\"{x1:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\" stroke-dasharray=\"3,3\"/>\n"
            ));
        }
        out
    }
}

fn document(body: String) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// A plain line plot of the series.
pub fn render_series(series: &TimeSeries, title: &str) -> String {
    let frame = Frame::from_ranges(
        (series.len() - 1) as f64,
        series.values().iter().copied(),
    );
    let mut body = frame.axes(title, "value");
    body.push_str(&frame.polyline(
        series
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64, v)),
        "history-line",
        "#1f6fb2",
    ));
    document(body)
}

/// History plus point forecast with one shaded interval segment per
/// horizon step (so a horizon-H plot contains exactly H
/// `interval-segment` polygons).
pub fn render_forecast(series: &TimeSeries, forecast: &Forecast, title: &str) -> String {
    let n = series.len();
    let horizon = forecast.horizon;
    let last = *series.values().last().expect("non-empty series");
    let all_values = series
        .values()
        .iter()
        .copied()
        .chain(forecast.lower.iter().copied())
        .chain(forecast.upper.iter().copied());
    let frame = Frame::from_ranges((n + horizon - 1) as f64, all_values);

    let mut body = frame.axes(title, "value");
    for h in 0..horizon {
        let (x0, l0, u0) = if h == 0 {
            ((n - 1) as f64, last, last)
        } else {
            ((n - 1 + h) as f64, forecast.lower[h - 1], forecast.upper[h - 1])
        };
        let x1 = (n + h) as f64;
        body.push_str(&format!(
            "<polygon class=\"interval-segment\" fill=\"#1f6fb2\" fill-opacity=\"0.18\" stroke=\"none\" points=\"{:.2},{:.2} {:.2},{:.2} {:.2},{:.2} {:.2},{:.2}\"/>\n",
            frame.x(x0), frame.y(l0),
            frame.x(x1), frame.y(forecast.lower[h]),
            frame.x(x1), frame.y(forecast.upper[h]),
            frame.x(x0), frame.y(u0),
        ));
    }
    body.push_str(&frame.polyline(
        series
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64, v)),
        "history-line",
        "#1f6fb2",
    ));
    body.push_str(&frame.polyline(
        std::iter::once(((n - 1) as f64, last)).chain(
            forecast
                .point
                .iter()
                .enumerate()
                .map(|(h, &v)| ((n + h) as f64, v)),
        ),
        "forecast-line",
        "#c0392b",
    ));
    document(body)
}

/// Actual values against model predictions over the same span.
pub fn render_overlay(actual: &TimeSeries, predicted: &[f64], title: &str) -> String {
    let frame = Frame::from_ranges(
        (actual.len().max(predicted.len()).saturating_sub(1)) as f64,
        actual.values().iter().copied().chain(predicted.iter().copied()),
    );
    let mut body = frame.axes(title, "value");
    body.push_str(&frame.polyline(
        actual
            .values()
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64, v)),
        "actual-line",
        "#1f6fb2",
    ));
    body.push_str(&frame.polyline(
        predicted
            .iter()
            .enumerate()
            .map(|(i, &v)| (i as f64, v)),
        "predicted-line",
        "#c0392b",
    ));
    body.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#1f6fb2\">actual</text>\n",
        WIDTH - 120.0, MARGIN_TOP + 14.0
    ));
    body.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#c0392b\">predicted</text>\n",
        WIDTH - 120.0, MARGIN_TOP + 30.0
    ));
    document(body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use harmattan::arima::{fit, ArimaOrder};

    fn series() -> TimeSeries {
        let values: Vec<f64> = (0..48).map(|i| 10.0 + (i as f64 * 0.4).sin() * 3.0).collect();
        TimeSeries::monthly(values, 2010, 1).unwrap()
    }

    #[test]
    fn forecast_plot_has_one_segment_per_step() {
        let s = series();
        let fitted = fit(&s, ArimaOrder::new(1, 0, 0), true).unwrap();
        let forecast = fitted.forecast(12, 0.95).unwrap();
        let svg = render_forecast(&s, &forecast, "test");
        assert_eq!(svg.matches("interval-segment").count(), 12);
        assert!(svg.contains("forecast-line"));
        assert!(svg.contains("history-line"));
    }

    #[test]
    fn series_plot_is_valid_and_deterministic() {
        let s = series();
        let a = render_series(&s, "x");
        let b = render_series(&s, "x");
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn overlay_has_both_lines() {
        let s = series();
        let predicted: Vec<f64> = s.values().iter().map(|v| v + 0.5).collect();
        let svg = render_overlay(&s, &predicted, "overlay");
        assert!(svg.contains("actual-line"));
        assert!(svg.contains("predicted-line"));
    }
}
