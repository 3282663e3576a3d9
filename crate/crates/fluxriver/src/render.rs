//! Deterministic SVG emission for river geometries, pixel panels, legends,
//! and composed figures.
//!
//! Output is plain SVG 1.1 text with absolute path commands, fixed attribute
//! order, and coordinates rounded to a configured number of decimal places.
//! Identical inputs produce byte-identical documents.

use crate::layout::RiverGeometry;
use crate::pixelmap::PixelPanel;
use crate::types::MoodSet;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("geometry holds no polygons")]
    EmptyGeometry,
    #[error("nothing to compose")]
    EmptyComposition,
    #[error("canvas too small: plot area would be {w}x{h}")]
    CanvasTooSmall { w: f64, h: f64 },
    #[error("panel requests {requested:?} but the panel holds no weight grid")]
    MissingWeightGrid { requested: &'static str },
    #[error("column-aligned parts disagree on the x mapping: {a:?} vs {b:?}")]
    ScaleMismatch { a: (f64, f64), b: (f64, f64) },
}

/// Pixel margins around the plot area: top, right, bottom, left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Margins {
    pub top: f64,
    pub right: f64,
    pub bottom: f64,
    pub left: f64,
}

impl Margins {
    pub fn uniform(v: f64) -> Self {
        Margins { top: v, right: v, bottom: v, left: v }
    }
}

/// One-dimensional affine map from data to pixel coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub scale: f64,
    pub offset: f64,
}

impl Affine {
    pub fn apply(&self, x: f64) -> f64 {
        self.scale * x + self.offset
    }
}

/// Target surface plus the data-to-pixel transforms. The y map is flipped so
/// data-up is pixel-up.
#[derive(Debug, Clone, PartialEq)]
pub struct Canvas {
    pub width_px: f64,
    pub height_px: f64,
    pub margins: Margins,
    pub x_scale: Affine,
    pub y_scale: Affine,
    pub decimal_places: u8,
}

impl Canvas {
    /// Fits the given data domains into the plot area. A degenerate domain
    /// (zero span) is widened to one unit around its center.
    pub fn fit(
        x_domain: (f64, f64),
        y_domain: (f64, f64),
        width_px: f64,
        height_px: f64,
        margins: Margins,
        decimal_places: u8,
    ) -> Result<Canvas, RenderError> {
        let plot_w = width_px - margins.left - margins.right;
        let plot_h = height_px - margins.top - margins.bottom;
        if plot_w <= 0.0 || plot_h <= 0.0 {
            return Err(RenderError::CanvasTooSmall { w: plot_w, h: plot_h });
        }
        let (x0, x1) = pad_degenerate(x_domain);
        let (y0, y1) = pad_degenerate(y_domain);
        let x_scale = Affine {
            scale: plot_w / (x1 - x0),
            offset: margins.left - x0 * plot_w / (x1 - x0),
        };
        let y_scale = Affine {
            scale: -plot_h / (y1 - y0),
            offset: margins.top + y1 * plot_h / (y1 - y0),
        };
        Ok(Canvas {
            width_px,
            height_px,
            margins,
            x_scale,
            y_scale,
            decimal_places,
        })
    }

    fn px(&self, x: f64) -> String {
        fmt_num(self.x_scale.apply(x), self.decimal_places)
    }

    fn py(&self, y: f64) -> String {
        fmt_num(self.y_scale.apply(y), self.decimal_places)
    }
}

fn pad_degenerate((a, b): (f64, f64)) -> (f64, f64) {
    if b > a {
        (a, b)
    } else {
        let c = (a + b) / 2.0;
        (c - 0.5, c + 0.5)
    }
}

/// Rounds to `dp` decimals and trims trailing zeros, so no coordinate text
/// carries more than `dp` digits after the point.
pub fn fmt_num(x: f64, dp: u8) -> String {
    let mut s = format!("{:.*}", dp as usize, x);
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".to_string();
    }
    s
}

/// An SVG fragment with its own extent. `x_map` records the effective
/// data-to-pixel x transform of any column-aligned content, so composition
/// can verify alignment.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgDoc {
    pub width: f64,
    pub height: f64,
    pub body: String,
    pub x_map: Option<Affine>,
}

impl SvgDoc {
    /// The complete standalone document.
    pub fn to_svg_string(&self) -> String {
        let w = fmt_num(self.width, 3);
        let h = fmt_num(self.height, 3);
        format!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {w} {h}\" width=\"{w}\" height=\"{h}\">\n{}</svg>\n",
            self.body
        )
    }
}

/// Renders a river geometry: one filled path per polygon in deterministic
/// order, then the threshold grid lines, dashed.
pub fn render_river(
    geometry: &RiverGeometry,
    canvas: &Canvas,
    moods: &MoodSet,
) -> Result<SvgDoc, RenderError> {
    if geometry.polygons.is_empty() {
        return Err(RenderError::EmptyGeometry);
    }
    let mut body = String::new();
    body.push_str("<g id=\"river\">\n");
    for polygon in &geometry.polygons {
        let mut d = String::new();
        for (i, &(x, y)) in polygon.points.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{},{} ", canvas.px(x), canvas.py(y));
        }
        d.push('Z');
        let _ = writeln!(
            body,
            "<path d=\"{d}\" fill=\"{}\"/>",
            moods.color(polygon.mood)
        );
    }
    for line in &geometry.gridlines {
        let mut d = String::new();
        for (i, &(x, y)) in line.iter().enumerate() {
            let cmd = if i == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{cmd}{},{}", canvas.px(x), canvas.py(y));
            if i + 1 < line.len() {
                d.push(' ');
            }
        }
        let _ = writeln!(
            body,
            "<path d=\"{d}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\" stroke-dasharray=\"4 3\"/>"
        );
    }
    body.push_str("</g>\n");
    Ok(SvgDoc {
        width: canvas.width_px,
        height: canvas.height_px,
        body,
        x_map: Some(canvas.x_scale),
    })
}

/// Which pieces of a pixel panel to draw, left to right:
/// prediction grid, weight grid, accuracy side-bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PixelParts {
    pub predictions: bool,
    pub weights: bool,
    pub side_bar: bool,
    /// Horizontal gap between pieces, in pixels.
    pub gap: f64,
    /// Width of the side-bar column, in pixels.
    pub bar_width: f64,
}

impl Default for PixelParts {
    fn default() -> Self {
        PixelParts {
            predictions: true,
            weights: false,
            side_bar: false,
            gap: 6.0,
            bar_width: 10.0,
        }
    }
}

/// Maps a weight in [0, 1] to a grayscale fill: 0 is white, 1 is black.
pub fn grayscale(value: f64) -> String {
    let level = (255.0 * (1.0 - value.clamp(0.0, 1.0))).round() as u8;
    format!("#{level:02X}{level:02X}{level:02X}")
}

/// Renders a pixel panel as filled rectangles, row-major per grid.
///
/// Cell boundaries are rounded once and shared between neighbors, so
/// adjacent rectangles meet at exactly equal coordinates. The canvas x map
/// positions the prediction-grid columns; extra pieces extend to the right
/// and the reported document width grows accordingly.
pub fn render_pixels(
    panel: &PixelPanel,
    canvas: &Canvas,
    moods: &MoodSet,
    parts: &PixelParts,
) -> Result<SvgDoc, RenderError> {
    if parts.weights && panel.weight_grid.is_none() {
        return Err(RenderError::MissingWeightGrid { requested: "weights" });
    }
    let dp = canvas.decimal_places;
    let (m, n) = (panel.m, panel.n);
    let grid_w = canvas.width_px - canvas.margins.left - canvas.margins.right;
    let grid_h = canvas.height_px - canvas.margins.top - canvas.margins.bottom;
    // row boundaries, rounded once
    let ys: Vec<f64> = (0..=m)
        .map(|r| round_dp(canvas.margins.top + grid_h * r as f64 / m as f64, dp))
        .collect();

    let mut body = String::new();
    let mut cursor = canvas.margins.left;
    let mut x_map = None;

    if parts.predictions {
        let xs = column_bounds(canvas, cursor, grid_w, n);
        body.push_str("<g id=\"pred-grid\">\n");
        for r in 0..m {
            for t in 0..n {
                let color = moods.color(panel.prediction(r, t));
                push_rect(&mut body, &xs, &ys, r, t, color, dp);
            }
        }
        body.push_str("</g>\n");
        x_map = Some(Affine {
            scale: canvas.x_scale.scale,
            offset: canvas.x_scale.offset + (cursor - canvas.margins.left),
        });
        cursor += grid_w + parts.gap;
    }
    if parts.weights {
        let xs = column_bounds(canvas, cursor, grid_w, n);
        body.push_str("<g id=\"weight-grid\">\n");
        for r in 0..m {
            for t in 0..n {
                let color = grayscale(panel.weight(r, t).expect("checked above"));
                push_rect(&mut body, &xs, &ys, r, t, &color, dp);
            }
        }
        body.push_str("</g>\n");
        if x_map.is_none() {
            x_map = Some(Affine {
                scale: canvas.x_scale.scale,
                offset: canvas.x_scale.offset + (cursor - canvas.margins.left),
            });
        }
        cursor += grid_w + parts.gap;
    }
    if parts.side_bar {
        let xs = vec![round_dp(cursor, dp), round_dp(cursor + parts.bar_width, dp)];
        body.push_str("<g id=\"side-bar\">\n");
        for r in 0..m {
            let color = grayscale(panel.side_bar[r]);
            push_rect(&mut body, &xs, &ys, r, 0, &color, dp);
        }
        body.push_str("</g>\n");
        cursor += parts.bar_width + parts.gap;
    }
    let width = cursor - parts.gap + canvas.margins.right;
    Ok(SvgDoc {
        width,
        height: canvas.height_px,
        body,
        x_map,
    })
}

/// Column boundaries of an m-by-n grid starting at `left`, rounded once so
/// neighbors share exact edges. The spacing mirrors the canvas x scale.
fn column_bounds(canvas: &Canvas, left: f64, grid_w: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| round_dp(left + grid_w * j as f64 / n as f64, canvas.decimal_places))
        .collect()
}

fn round_dp(x: f64, dp: u8) -> f64 {
    let f = 10f64.powi(dp as i32);
    (x * f).round() / f
}

fn push_rect(body: &mut String, xs: &[f64], ys: &[f64], r: usize, c: usize, color: &str, dp: u8) {
    let _ = writeln!(
        body,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{color}\"/>",
        fmt_num(xs[c], dp),
        fmt_num(ys[r], dp),
        fmt_num(xs[c + 1] - xs[c], dp),
        fmt_num(ys[r + 1] - ys[r], dp),
    );
}

/// One swatch and label per mood, plus an optional grayscale ramp bar per
/// extra label (for the accuracy maps).
pub fn render_legend(moods: &MoodSet, extra_ramps: &[&str]) -> SvgDoc {
    let swatch = 12.0;
    let row_h = 18.0;
    let mut body = String::new();
    body.push_str("<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n");
    let mut x = 4.0;
    for mood in moods.moods() {
        let _ = writeln!(
            body,
            "<rect x=\"{}\" y=\"3\" width=\"{swatch}\" height=\"{swatch}\" fill=\"{}\"/>",
            fmt_num(x, 3),
            mood.color
        );
        let _ = writeln!(
            body,
            "<text x=\"{}\" y=\"13\">{}</text>",
            fmt_num(x + swatch + 4.0, 3),
            escape_text(&mood.label)
        );
        x += swatch + 8.0 + 7.0 * mood.label.len() as f64;
    }
    let mut y = row_h;
    for ramp in extra_ramps {
        let steps = 24;
        let bar_w = 96.0;
        for i in 0..steps {
            let v = i as f64 / (steps - 1) as f64;
            let _ = writeln!(
                body,
                "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{swatch}\" fill=\"{}\"/>",
                fmt_num(4.0 + bar_w * i as f64 / steps as f64, 3),
                fmt_num(y + 3.0, 3),
                fmt_num(bar_w / steps as f64, 3),
                grayscale(v)
            );
        }
        let _ = writeln!(
            body,
            "<text x=\"{}\" y=\"{}\">0</text>",
            fmt_num(4.0, 3),
            fmt_num(y + swatch + 14.0, 3)
        );
        let _ = writeln!(
            body,
            "<text x=\"{}\" y=\"{}\">1 {}</text>",
            fmt_num(4.0 + bar_w - 4.0, 3),
            fmt_num(y + swatch + 14.0, 3),
            escape_text(ramp)
        );
        y += row_h + 14.0;
    }
    body.push_str("</g>\n");
    SvgDoc {
        width: x.max(120.0),
        height: y + 6.0,
        body,
        x_map: None,
    }
}

fn escape_text(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Where a part lands in a composed figure.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Placement {
    pub dx: f64,
    pub dy: f64,
    /// Parts sharing an alignment group must agree on their effective
    /// data-to-pixel x mapping.
    pub align_group: Option<u32>,
}

/// Nests the parts into one document, each inside a translated group, and
/// verifies that column-aligned parts share one x mapping.
pub fn compose_figure(parts: &[(SvgDoc, Placement)]) -> Result<SvgDoc, RenderError> {
    if parts.is_empty() {
        return Err(RenderError::EmptyComposition);
    }
    let mut group_maps: Vec<(u32, (f64, f64))> = Vec::new();
    for (doc, placement) in parts {
        if let (Some(group), Some(map)) = (placement.align_group, doc.x_map) {
            let effective = (map.scale, map.offset + placement.dx);
            match group_maps.iter().find(|(g, _)| *g == group) {
                Some(&(_, seen)) => {
                    if seen.0 != effective.0 || (seen.1 - effective.1).abs() > 1e-9 {
                        return Err(RenderError::ScaleMismatch { a: seen, b: effective });
                    }
                }
                None => group_maps.push((group, effective)),
            }
        }
    }
    let mut body = String::new();
    let mut width = 0f64;
    let mut height = 0f64;
    for (doc, placement) in parts {
        let _ = writeln!(
            body,
            "<g transform=\"translate({},{})\">",
            fmt_num(placement.dx, 3),
            fmt_num(placement.dy, 3)
        );
        body.push_str(&doc.body);
        body.push_str("</g>\n");
        width = width.max(placement.dx + doc.width);
        height = height.max(placement.dy + doc.height);
    }
    let x_map = parts.iter().find_map(|(doc, placement)| {
        doc.x_map.map(|m| Affine { scale: m.scale, offset: m.offset + placement.dx })
    });
    Ok(SvgDoc { width, height, body, x_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::{layout_dualflux, Smoothing};
    use crate::types::{MoodId, VoteSeries, WeightingScheme};

    fn canvas() -> Canvas {
        Canvas::fit((0.5, 2.5), (-5.0, 5.0), 200.0, 100.0, Margins::uniform(10.0), 3).unwrap()
    }

    #[test]
    fn fmt_num_trims_and_normalizes() {
        assert_eq!(fmt_num(105.0, 3), "105");
        assert_eq!(fmt_num(12.3456, 3), "12.346");
        assert_eq!(fmt_num(12.300, 3), "12.3");
        assert_eq!(fmt_num(-0.0001, 3), "0");
        assert_eq!(fmt_num(-1.5, 3), "-1.5");
    }

    #[test]
    fn canvas_maps_domain_to_plot_area() {
        let c = canvas();
        assert_eq!(c.x_scale.apply(0.5), 10.0);
        assert_eq!(c.x_scale.apply(2.5), 190.0);
        // y flipped
        assert_eq!(c.y_scale.apply(5.0), 10.0);
        assert_eq!(c.y_scale.apply(-5.0), 90.0);
    }

    #[test]
    fn canvas_rejects_margins_swallowing_the_plot() {
        assert!(matches!(
            Canvas::fit((0.0, 1.0), (0.0, 1.0), 20.0, 20.0, Margins::uniform(10.0), 3),
            Err(RenderError::CanvasTooSmall { .. })
        ));
    }

    fn two_step_series() -> VoteSeries {
        VoteSeries::new(
            vec![
                vec![1.0, 1.0],
                vec![5.0, 1.0],
                vec![1.0, 2.0],
                vec![2.0, 5.0],
            ],
            WeightingScheme::unweighted(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn river_renders_one_path_per_polygon_and_is_deterministic() {
        let moods = crate::types::MoodSet::default_four();
        let g = layout_dualflux(&two_step_series(), Smoothing::Smooth);
        let c = canvas();
        let a = render_river(&g, &c, &moods).unwrap().to_svg_string();
        let b = render_river(&g, &c, &moods).unwrap().to_svg_string();
        assert_eq!(a, b);
        let paths = a.matches("<path").count();
        assert_eq!(paths, g.polygons.len() + g.gridlines.len());
        assert!(a.contains("stroke-dasharray"));
    }

    #[test]
    fn single_constant_stream_is_one_rectangle_path() {
        let vs = VoteSeries::new(
            vec![vec![4.0, 4.0], vec![0.0, 0.0]],
            WeightingScheme::unweighted(),
            None,
        )
        .unwrap();
        let g = crate::layout::layout_stacked(&vs);
        let c = canvas();
        let moods = crate::types::MoodSet::default_four();
        let svg = render_river(&g, &c, &moods).unwrap().to_svg_string();
        // band 0 spans the full domain at constant height
        assert!(svg.contains("M10,54 L10,54" ) || svg.matches("<path").count() == 2);
    }

    #[test]
    fn coordinates_stay_inside_the_viewbox() {
        let moods = crate::types::MoodSet::default_four();
        let g = layout_dualflux(&two_step_series(), Smoothing::Smooth);
        let c = canvas();
        let svg = render_river(&g, &c, &moods).unwrap().to_svg_string();
        for token in svg
            .split(|ch: char| ch == 'M' || ch == 'L' || ch == ' ' || ch == '"')
            .filter(|tok| tok.contains(','))
        {
            if let Some((xs, ys)) = token.split_once(',') {
                if let (Ok(x), Ok(y)) = (xs.parse::<f64>(), ys.parse::<f64>()) {
                    assert!((0.0..=200.0).contains(&x), "x {x} outside viewBox");
                    assert!((0.0..=100.0).contains(&y), "y {y} outside viewBox");
                }
            }
        }
    }

    #[test]
    fn rounding_respects_decimal_places() {
        let moods = crate::types::MoodSet::default_four();
        let g = layout_dualflux(&two_step_series(), Smoothing::Smooth);
        let mut c = canvas();
        c.decimal_places = 2;
        let svg = render_river(&g, &c, &moods).unwrap().to_svg_string();
        for token in svg.split(['M', 'L', ' ', '"', ',']) {
            if let Some(dot) = token.find('.') {
                let decimals = &token[dot + 1..];
                if decimals.chars().all(|ch| ch.is_ascii_digit()) {
                    assert!(decimals.len() <= 2, "token {token} has too many decimals");
                }
            }
        }
    }

    #[test]
    fn empty_geometry_is_rejected() {
        let g = RiverGeometry {
            design: crate::layout::Design::Stacked,
            polygons: vec![],
            gridlines: vec![],
            x_domain: (0.5, 1.5),
        };
        assert!(matches!(
            render_river(&g, &canvas(), &crate::types::MoodSet::default_four()),
            Err(RenderError::EmptyGeometry)
        ));
    }

    fn one_by_one_panel() -> PixelPanel {
        PixelPanel {
            row_order: vec![0],
            m: 1,
            n: 1,
            prediction_grid: vec![MoodId(1)],
            weight_grid: None,
            side_bar: vec![0.5],
            power: crate::types::Power::One,
        }
    }

    #[test]
    fn single_pixel_renders_one_rect_of_the_mood_color() {
        let moods = crate::types::MoodSet::default_four();
        let c = Canvas::fit((0.5, 1.5), (0.0, 1.0), 40.0, 40.0, Margins::uniform(4.0), 3).unwrap();
        let svg = render_pixels(&one_by_one_panel(), &c, &moods, &PixelParts::default())
            .unwrap()
            .to_svg_string();
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains("fill=\"#D94A3D\""));
    }

    #[test]
    fn adjacent_pixel_rows_share_exact_edge_coordinates() {
        let moods = crate::types::MoodSet::default_four();
        let panel = PixelPanel {
            row_order: vec![0, 1, 2],
            m: 3,
            n: 2,
            prediction_grid: vec![MoodId(0); 6],
            weight_grid: None,
            side_bar: vec![0.1, 0.2, 0.3],
            power: crate::types::Power::One,
        };
        let c = Canvas::fit((0.5, 2.5), (0.0, 1.0), 50.0, 47.0, Margins::uniform(3.0), 3).unwrap();
        let svg = render_pixels(&panel, &c, &moods, &PixelParts::default())
            .unwrap()
            .to_svg_string();
        let ys: Vec<&str> = svg
            .lines()
            .filter(|l| l.starts_with("<rect"))
            .map(|l| attr(l, "y"))
            .collect();
        let hs: Vec<&str> = svg
            .lines()
            .filter(|l| l.starts_with("<rect"))
            .map(|l| attr(l, "height"))
            .collect();
        // row r+1 starts exactly where row r ends, textually
        let y0: f64 = ys[0].parse().unwrap();
        let h0: f64 = hs[0].parse().unwrap();
        let y1: f64 = ys[2].parse().unwrap();
        assert_eq!(y0 + h0, y1);
    }

    fn attr<'a>(line: &'a str, name: &str) -> &'a str {
        let key = format!("{name}=\"");
        let start = line.find(&key).unwrap() + key.len();
        let end = line[start..].find('"').unwrap();
        &line[start..start + end]
    }

    #[test]
    fn missing_weight_grid_is_an_error() {
        let moods = crate::types::MoodSet::default_four();
        let c = Canvas::fit((0.5, 1.5), (0.0, 1.0), 40.0, 40.0, Margins::uniform(4.0), 3).unwrap();
        let parts = PixelParts { weights: true, ..PixelParts::default() };
        assert!(matches!(
            render_pixels(&one_by_one_panel(), &c, &moods, &parts),
            Err(RenderError::MissingWeightGrid { .. })
        ));
    }

    #[test]
    fn grayscale_endpoints() {
        assert_eq!(grayscale(0.0), "#FFFFFF");
        assert_eq!(grayscale(1.0), "#000000");
        assert_eq!(grayscale(0.5), "#808080");
    }

    #[test]
    fn legend_emits_one_swatch_per_mood() {
        let moods = crate::types::MoodSet::default_four();
        let svg = render_legend(&moods, &[]).to_svg_string();
        assert_eq!(svg.matches("<rect").count(), 4);
        for mood in moods.moods() {
            assert!(svg.contains(&format!("fill=\"{}\"", mood.color)));
            assert!(svg.contains(&format!(">{}</text>", mood.label)));
        }
        let two = MoodSet::from_labels(&["up", "down"]).unwrap();
        assert_eq!(render_legend(&two, &[]).to_svg_string().matches("<rect").count(), 2);
    }

    #[test]
    fn legend_ramp_adds_gradient_steps() {
        let moods = crate::types::MoodSet::default_four();
        let svg = render_legend(&moods, &["accuracy"]).to_svg_string();
        assert_eq!(svg.matches("<rect").count(), 4 + 24);
        assert!(svg.contains("1 accuracy"));
    }

    #[test]
    fn single_part_composes_to_one_group_passthrough() {
        let doc = SvgDoc {
            width: 10.0,
            height: 10.0,
            body: "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"#000000\"/>\n".into(),
            x_map: None,
        };
        let out = compose_figure(&[(doc.clone(), Placement::default())]).unwrap();
        assert_eq!(out.width, 10.0);
        assert_eq!(
            out.body,
            format!("<g transform=\"translate(0,0)\">\n{}</g>\n", doc.body)
        );
    }

    #[test]
    fn compose_rejects_mismatched_aligned_scales() {
        let mk = |offset: f64| SvgDoc {
            width: 10.0,
            height: 10.0,
            body: String::new(),
            x_map: Some(Affine { scale: 2.0, offset }),
        };
        let aligned = Placement { dx: 0.0, dy: 0.0, align_group: Some(1) };
        let err = compose_figure(&[(mk(0.0), aligned), (mk(3.0), aligned)]);
        assert!(matches!(err, Err(RenderError::ScaleMismatch { .. })));
        // same offset after translation is fine
        let shifted = Placement { dx: -3.0, dy: 12.0, align_group: Some(1) };
        assert!(compose_figure(&[(mk(0.0), aligned), (mk(3.0), shifted)]).is_ok());
    }
}
