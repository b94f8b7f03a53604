//! Deterministic artifact writers: canonical JSON with sorted keys, CSV at
//! full double precision, and a fixed-viewport SVG polyline.

use serde::Serialize;
use std::io::Write;
use std::path::Path;

/// Serialize through `serde_json::Value` so map keys come out sorted; pretty
/// printing with a trailing newline, LF only.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    std::fs::write(path, to_canonical_json(value))
}

/// Full-precision float formatting (17 significant digits) so downstream
/// diffs are exact.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Comma-separated, header row, LF line endings.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> std::io::Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(file);
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(format_f64).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    w.flush()
}

/// A plain polyline plot in a fixed 1000x600 viewport with a 40-pixel margin.
pub fn polyline_svg(xs: &[f64], ys: &[f64]) -> String {
    const W: f64 = 1000.0;
    const H: f64 = 600.0;
    const MARGIN: f64 = 40.0;
    let (x_min, x_max) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    let (y_min, y_max) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(*v), hi.max(*v))
        });
    let x_span = (x_max - x_min).max(1e-300);
    let y_span = (y_max - y_min).max(1e-300);
    let mut points = String::new();
    for (x, y) in xs.iter().zip(ys) {
        let px = MARGIN + (x - x_min) / x_span * (W - 2.0 * MARGIN);
        let py = H - MARGIN - (y - y_min) / y_span * (H - 2.0 * MARGIN);
        points.push_str(&format!("{px:.3},{py:.3} "));
    }
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1000 600\" \
         width=\"1000\" height=\"600\">\n\
         <rect width=\"1000\" height=\"600\" fill=\"white\"/>\n\
         <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n\
         </svg>\n",
        points.trim_end()
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_keys_are_sorted() {
        let v = json!({"zeta": 1, "alpha": 2, "mid": {"b": 1, "a": 2}});
        let s = to_canonical_json(&v);
        let alpha_pos = s.find("alpha").unwrap();
        let zeta_pos = s.find("zeta").unwrap();
        assert!(alpha_pos < zeta_pos);
        assert!(s.ends_with('\n'));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn float_format_is_full_precision() {
        let s = format_f64(std::f64::consts::PI);
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn svg_has_fixed_viewport() {
        let svg = polyline_svg(&[0.0, 0.5, 1.0], &[0.0, 1.0, 0.0]);
        assert!(svg.contains("viewBox=\"0 0 1000 600\""));
        assert!(svg.contains("<polyline"));
    }
}
