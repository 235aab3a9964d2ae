//! Benchmark reporting: RFC-4180 CSV emission and a minimal static SVG
//! scatter renderer for block-error plots.

use crate::pipeline::BlockErrorRecord;
use std::fmt::Write as _;

/// One benchmark metrics row.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub method: String,
    pub image: String,
    pub lambda: f64,
    pub rho: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub iterations: usize,
    pub psnr: f64,
    pub wall_time: f64,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut line = fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",");
    line.push_str("\r\n");
    line
}

/// Shortest-round-trip decimal text for a float; infinite PSNR is spelled
/// "inf" so spreadsheets keep the column numeric-ish.
fn num(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}

pub const METRICS_HEADER: [&str; 9] = [
    "method", "image", "lambda", "rho", "alpha0", "alpha1", "iterations", "psnr_db",
    "wall_time_s",
];

pub fn metrics_csv(rows: &[MetricsRow]) -> String {
    let mut out = csv_row(&METRICS_HEADER.map(String::from));
    for r in rows {
        out.push_str(&csv_row(&[
            r.method.clone(),
            r.image.clone(),
            num(r.lambda),
            num(r.rho),
            num(r.alpha0),
            num(r.alpha1),
            r.iterations.to_string(),
            num(r.psnr),
            num(r.wall_time),
        ]));
    }
    out
}

pub fn block_error_csv(records: &[BlockErrorRecord]) -> String {
    let mut out = csv_row(
        &["method", "row", "col", "ref_norm", "error"].map(String::from),
    );
    for r in records {
        out.push_str(&csv_row(&[
            r.method.clone(),
            r.row.to_string(),
            r.col.to_string(),
            num(r.ref_norm),
            num(r.error),
        ]));
    }
    out
}

/// A PSNR table shaped methods x images; `cells[i][j]` pairs with
/// `methods[i]`, `images[j]`.
pub fn psnr_table_csv(methods: &[String], images: &[String], cells: &[Vec<f64>]) -> String {
    let mut header = vec!["method".to_string()];
    header.extend(images.iter().cloned());
    let mut out = csv_row(&header);
    for (m, row) in methods.iter().zip(cells) {
        let mut fields = vec![m.clone()];
        fields.extend(row.iter().map(|&v| num(v)));
        out.push_str(&csv_row(&fields));
    }
    out
}

/// One scatter series: label plus (x, y) points.
#[derive(Debug, Clone)]
pub struct ScatterSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const SERIES_COLORS: [&str; 6] = [
    "#1f6fb4", "#d6552a", "#2e8540", "#8450a8", "#a58520", "#4f4f4f",
];

/// Static SVG 1.1 scatter plot: framed axes, tick labels, one colored point
/// cloud per series, and a legend. Layout is fixed at 640x480.
pub fn scatter_svg(title: &str, x_label: &str, y_label: &str, series: &[ScatterSeries]) -> String {
    let (width, height) = (640.0, 480.0);
    let (left, right, top, bottom) = (70.0, 20.0, 40.0, 50.0);
    let (pw, ph) = (width - left - right, height - top - bottom);

    let mut xmax = 0.0_f64;
    let mut ymax = 0.0_f64;
    for s in series {
        for &(x, y) in &s.points {
            xmax = xmax.max(x);
            ymax = ymax.max(y);
        }
    }
    if xmax <= 0.0 {
        xmax = 1.0;
    }
    if ymax <= 0.0 {
        ymax = 1.0;
    }
    let px = |x: f64| left + x / xmax * pw;
    let py = |y: f64| top + ph - y / ymax * ph;

    let esc = |s: &str| {
        s.replace('&', "&amp;")
            .replace('<', "&lt;")
            .replace('>', "&gt;")
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"15\">{}</text>",
        left + pw / 2.0,
        esc(title)
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{pw}\" height=\"{ph}\" \
         fill=\"none\" stroke=\"black\"/>"
    );
    // 5 ticks per axis
    for i in 0..=5 {
        let f = i as f64 / 5.0;
        let xv = f * xmax;
        let yv = f * ymax;
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\
             <text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"11\">{4:.3}</text>",
            px(xv),
            top + ph,
            top + ph + 5.0,
            top + ph + 18.0,
            xv
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"black\"/>\
             <text x=\"{3}\" y=\"{4}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"11\">{5:.3}</text>",
            left - 5.0,
            left,
            py(yv),
            left - 8.0,
            py(yv) + 4.0,
            yv
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\">{}</text>",
        left + pw / 2.0,
        height - 10.0,
        esc(x_label)
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"13\" transform=\"rotate(-90 16 {0})\">{1}</text>",
        top + ph / 2.0,
        esc(y_label)
    );
    for (i, s) in series.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2\" fill=\"{}\" fill-opacity=\"0.6\"/>",
                px(x),
                py(y),
                color
            );
        }
        let ly = top + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            svg,
            "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\
             <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            left + 12.0,
            ly,
            color,
            left + 22.0,
            ly + 4.0,
            esc(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_follows_rfc4180() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
        assert_eq!(csv_field("two\nlines"), "\"two\nlines\"");
    }

    #[test]
    fn metrics_csv_shape() {
        let rows = vec![MetricsRow {
            method: "l1".into(),
            image: "img,1".into(),
            lambda: 0.1,
            rho: 6.0,
            alpha0: 1.0,
            alpha1: 1.0,
            iterations: 250,
            psnr: f64::INFINITY,
            wall_time: 1.25,
        }];
        let csv = metrics_csv(&rows);
        let lines: Vec<&str> = csv.split("\r\n").collect();
        assert_eq!(lines.len(), 3); // header, row, trailing empty
        assert_eq!(lines[0], METRICS_HEADER.join(","));
        assert!(lines[1].starts_with("l1,\"img,1\",0.1,6,1,1,250,inf,1.25"));
    }

    #[test]
    fn table_csv_cell_count() {
        let methods = vec!["a".to_string(), "b".to_string()];
        let images = vec!["x".to_string(), "y".to_string(), "z".to_string()];
        let cells = vec![vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0]];
        let csv = psnr_table_csv(&methods, &images, &cells);
        let lines: Vec<&str> = csv.trim_end().split("\r\n").collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "a,1,2,3");
        assert_eq!(lines[2], "b,4,5,6");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let series = vec![
            ScatterSeries {
                label: "noisy <test>".into(),
                points: vec![(0.1, 0.2), (0.5, 0.4)],
            },
            ScatterSeries {
                label: "l1".into(),
                points: vec![(0.3, 0.1)],
            },
        ];
        let svg = scatter_svg("blocks & errors", "ref norm", "error", &series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<circle").count(), 3 + 2); // points + legend dots
        assert!(svg.contains("blocks &amp; errors"));
        assert!(svg.contains("noisy &lt;test&gt;"));
        // every opened tag family is closed or self-closed
        assert_eq!(svg.matches("<text").count(), svg.matches("</text>").count());
    }

    #[test]
    fn svg_handles_empty_and_degenerate_input() {
        let svg = scatter_svg("t", "x", "y", &[]);
        assert!(svg.contains("</svg>"));
        let series = vec![ScatterSeries {
            label: "zeros".into(),
            points: vec![(0.0, 0.0)],
        }];
        let svg = scatter_svg("t", "x", "y", &series);
        assert!(!svg.contains("NaN"));
    }
}
