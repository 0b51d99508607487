//! SVG rendering of labelled region cells. Decimals here are for viewing
//! only and are never read back.

use std::fmt::Write as _;

use crate::geom::{to_f64, Point2};
use crate::trap::{CellLabel, RegionCells};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SvgStyle {
    /// Width of the drawing in pixels; the height follows the aspect ratio.
    pub width: u32,
    pub legend: bool,
    pub title: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        Self {
            width: 640,
            legend: true,
            title: None,
        }
    }
}

const LABELS: [CellLabel; 4] = [
    CellLabel::InE,
    CellLabel::TrappedBoth,
    CellLabel::TrappedLinesOnly,
    CellLabel::Free,
];

fn fill(label: CellLabel) -> &'static str {
    match label {
        CellLabel::InE => "#9aa5b1",
        CellLabel::TrappedBoth => "#d64545",
        CellLabel::TrappedLinesOnly => "#f0b429",
        CellLabel::Free => "none",
    }
}

/// At most 12 significant digits, shortest form.
pub fn fmt_decimal(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return "0".into();
    }
    let rounded: f64 = format!("{v:.11e}")
        .parse()
        .expect("float formatting round-trips");
    format!("{rounded}")
}

fn xy(p: &Point2) -> String {
    // SVG's y axis points down
    format!(
        "{},{}",
        fmt_decimal(to_f64(&p.x)),
        fmt_decimal(-to_f64(&p.y))
    )
}

pub fn render_svg(rc: &RegionCells, style: &SvgStyle) -> String {
    let (x0, x1) = (to_f64(&rc.bbox.min.x), to_f64(&rc.bbox.max.x));
    let (y0, y1) = (to_f64(&rc.bbox.min.y), to_f64(&rc.bbox.max.y));
    let (w, h) = ((x1 - x0).max(1e-9), (y1 - y0).max(1e-9));
    let pad = 0.04 * w.max(h);
    let legend_h = if style.legend { 0.22 * w.max(h) } else { 0.0 };
    let (vx, vy) = (x0 - pad, -y1 - pad);
    let (vw, vh) = (w + 2.0 * pad, h + 2.0 * pad + legend_h);
    let px_h = (f64::from(style.width) * vh / vw).round() as u64;
    let stroke = fmt_decimal(0.002 * w.max(h));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="{} {} {} {}">"#,
        style.width,
        px_h,
        fmt_decimal(vx),
        fmt_decimal(vy),
        fmt_decimal(vw),
        fmt_decimal(vh)
    );
    if let Some(t) = &style.title {
        let _ = writeln!(out, "<title>{}</title>", escape(t));
    }
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333" stroke-width="{stroke}"/>"##,
        fmt_decimal(x0),
        fmt_decimal(-y1),
        fmt_decimal(w),
        fmt_decimal(h)
    );
    let _ = writeln!(
        out,
        r##"<g stroke="#555" stroke-width="{stroke}" stroke-linejoin="round">"##
    );
    // a region with nothing but free space draws as its frame alone
    let empty = rc.cells.iter().all(|c| c.label == CellLabel::Free);
    for (i, c) in rc.cells.iter().enumerate().filter(|_| !empty) {
        let d: Vec<String> = c.poly.vertices().iter().map(xy).collect();
        let _ = writeln!(
            out,
            r#"<path id="cell-{i}" class="{}" fill="{}" d="M{}Z"/>"#,
            c.label.name(),
            fill(c.label),
            d.join(" L")
        );
    }
    out.push_str("</g>\n");
    if style.legend {
        let size = 0.04 * w.max(h);
        let font = fmt_decimal(size);
        let _ = writeln!(
            out,
            r#"<g id="legend" font-family="sans-serif" font-size="{font}">"#
        );
        for (k, label) in LABELS.into_iter().enumerate() {
            let ly = -y0 + pad + size * 1.3 * k as f64 + size * 0.5;
            let count = rc.cells.iter().filter(|c| c.label == label).count();
            let _ = writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{font}" height="{font}" fill="{}" stroke="#555" stroke-width="{stroke}"/>"##,
                fmt_decimal(x0),
                fmt_decimal(ly),
                fill(label)
            );
            let _ = writeln!(
                out,
                r#"<text x="{}" y="{}">{} ({count} cells)</text>"#,
                fmt_decimal(x0 + size * 1.5),
                fmt_decimal(ly + size * 0.85),
                label.name()
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{make_cut_scene_2d, CutMode, CutSceneSpec};
    use crate::scene::Scene2;
    use crate::trap::trap_region;

    #[test]
    fn decimals() {
        assert_eq!(fmt_decimal(0.0), "0");
        assert_eq!(fmt_decimal(-0.0), "0");
        assert_eq!(fmt_decimal(2.5), "2.5");
        assert_eq!(fmt_decimal(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_decimal(-4.0), "-4");
        assert_eq!(fmt_decimal(123456.7890123456), "123456.789012");
    }

    #[test]
    fn empty_region_is_just_a_frame() {
        let rc = trap_region(&Scene2::empty()).unwrap();
        let svg = render_svg(&rc, &SvgStyle::default());
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<rect"));
        assert_eq!(svg.matches("<path").count(), 0);
    }

    #[test]
    fn standard_region_marks_p_trapped() {
        let cs = make_cut_scene_2d(&CutSceneSpec::standard(CutMode::Lines)).unwrap();
        let rc = trap_region(&cs.scene).unwrap();
        let svg = render_svg(&rc, &SvgStyle::default());
        assert_eq!(svg.matches("<path").count(), rc.cells.len());
        assert!(svg.contains(r#"class="TrappedBoth""#));
        assert!(!svg.contains(r#"class="TrappedLinesOnly""#));
        assert_eq!(svg, render_svg(&rc, &SvgStyle::default()));
    }
}
