//! Self-contained SVG histogram of a distribution table. No external
//! assets; coordinates are formatted at fixed precision so output is
//! byte-stable.

use std::fmt::Write;

/// Renders pair-sum labels against probabilities as a bar chart.
pub fn histogram(title: &str, labels: &[i64], probs: &[f64]) -> String {
    const WIDTH: f64 = 640.0;
    const HEIGHT: f64 = 420.0;
    const MARGIN_LEFT: f64 = 64.0;
    const MARGIN_RIGHT: f64 = 20.0;
    const MARGIN_TOP: f64 = 48.0;
    const MARGIN_BOTTOM: f64 = 56.0;

    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let max_prob = probs.iter().copied().fold(0.0f64, f64::max).max(1e-12);
    // headroom above the tallest bar
    let y_max = max_prob * 1.08;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );

    // axes
    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let _ = write!(
        svg,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}" stroke="black" stroke-width="1"/>"#,
        x0 + plot_width
    );
    let _ = write!(
        svg,
        r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}" stroke="black" stroke-width="1"/>"#,
        MARGIN_TOP
    );

    // y ticks at quarters of the maximum
    for i in 0..=4 {
        let value = y_max * i as f64 / 4.0;
        let y = y0 - plot_height * i as f64 / 4.0;
        let _ = write!(
            svg,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}" stroke="black" stroke-width="1"/>"#,
            x0 - 4.0
        );
        let _ = write!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{value:.4}</text>"#,
            x0 - 8.0,
            y + 4.0
        );
    }

    // bars, evenly spaced per state
    let slot = plot_width / labels.len() as f64;
    let bar_width = slot * 0.62;
    for (i, (&label, &p)) in labels.iter().zip(probs).enumerate() {
        let height = plot_height * p / y_max;
        let x = x0 + slot * i as f64 + (slot - bar_width) / 2.0;
        let y = y0 - height;
        let _ = write!(
            svg,
            r##"<rect x="{x:.2}" y="{y:.2}" width="{bar_width:.2}" height="{height:.2}" fill="#4878a8" stroke="black" stroke-width="0.5"/>"##
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">{label}</text>"#,
            x + bar_width / 2.0,
            y0 + 18.0
        );
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="10" text-anchor="middle">{p:.5}</text>"#,
            x + bar_width / 2.0,
            (y - 5.0).max(MARGIN_TOP + 10.0)
        );
    }

    // axis captions
    let _ = write!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle">pair sum</text>"#,
        x0 + plot_width / 2.0,
        HEIGHT - 16.0
    );
    let _ = write!(
        svg,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 18 {:.1})">probability</text>"#,
        MARGIN_TOP + plot_height / 2.0,
        MARGIN_TOP + plot_height / 2.0
    );
    svg.push_str("</svg>\n");
    svg
}
