//! SVG rendering of 2-D problems: the feasible set with classified lattice
//! points, and (given a point) the criterion cone against `-K`.
//!
//! Geometry is computed exactly; only the final pixel coordinates are
//! rounded. Polygon edges introduced by the viewport are drawn dashed.

use std::cmp::Ordering;
use std::fmt::Write as _;

use bensonkit::harness::{self, ClassificationRow};
use bensonkit::rational::{self, format_rational, format_vector, Rational};
use bensonkit::HPolyhedron;
use num_traits::{Signed, ToPrimitive, Zero};

const PANEL: f64 = 320.0;
const MARGIN: f64 = 30.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub xmax: Rational,
    pub ymin: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn parse(text: &str) -> Result<Self, bensonkit::Error> {
        let v = rational::parse_vector(text)?;
        if v.len() != 4 {
            return Err(bensonkit::Error::Parse(format!("viewport needs 4 values, got {}", v.len())));
        }
        if v[0] >= v[1] || v[2] >= v[3] {
            return Err(bensonkit::Error::Parse("viewport must satisfy xmin < xmax and ymin < ymax".into()));
        }
        Ok(Self { xmin: v[0].clone(), xmax: v[1].clone(), ymin: v[2].clone(), ymax: v[3].clone() })
    }

    pub fn as_box(&self) -> HPolyhedron {
        let r = |a: i64, b: i64| vec![rational::int(a), rational::int(b)];
        HPolyhedron::from_inequalities(
            2,
            vec![r(1, 0), r(-1, 0), r(0, 1), r(0, -1)],
            vec![self.xmax.clone(), -&self.xmin, self.ymax.clone(), -&self.ymin],
        )
        .expect("shape")
    }

    fn px(&self, p: &[Rational], left: f64) -> (f64, f64) {
        let fx = ((&p[0] - &self.xmin) / (&self.xmax - &self.xmin)).to_f64().unwrap_or(0.0);
        let fy = ((&self.ymax - &p[1]) / (&self.ymax - &self.ymin)).to_f64().unwrap_or(0.0);
        (left + fx * PANEL, MARGIN + fy * PANEL)
    }
}

impl Default for Viewport {
    fn default() -> Self {
        let i = rational::int;
        Self { xmin: i(-4), xmax: i(4), ymin: i(-4), ymax: i(4) }
    }
}

/// `P ∩ viewport` as an ordered vertex list, with a flag per edge
/// `(v[i], v[i+1])` telling whether the edge was cut by the viewport.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClippedPolygon {
    pub vertices: Vec<Vec<Rational>>,
    pub clipped_edges: Vec<bool>,
}

fn tight(p: &HPolyhedron, x: &[Rational]) -> Vec<usize> {
    let mut out: Vec<usize> = p
        .ineq_lhs()
        .iter()
        .zip(p.ineq_rhs())
        .enumerate()
        .filter(|(_, (a, b))| rational::dot(a, x) == **b)
        .map(|(i, _)| i)
        .collect();
    out.extend((0..p.eq_lhs().len()).map(|i| p.ineq_lhs().len() + i));
    out
}

fn half(d: &[Rational]) -> bool {
    d[1].is_negative() || (d[1].is_zero() && d[0].is_negative())
}

/// Counter-clockwise order around the exact centroid.
fn angular_cmp(c: &[Rational], a: &[Rational], b: &[Rational]) -> Ordering {
    let da = rational::sub(a, c);
    let db = rational::sub(b, c);
    match (half(&da), half(&db)) {
        (false, true) => Ordering::Less,
        (true, false) => Ordering::Greater,
        _ => {
            let cross = &da[0] * &db[1] - &da[1] * &db[0];
            Rational::zero().cmp(&cross)
        }
    }
}

pub fn clip(p: &HPolyhedron, view: &Viewport) -> ClippedPolygon {
    let q = p.intersect(&view.as_box()).expect("2-D");
    let mut vertices = harness::vertices(&q, 256);
    if vertices.len() > 2 {
        let n = Rational::from_integer((vertices.len() as i64).into());
        let sum = vertices.iter().fold(rational::zeros(2), |acc, v| rational::add(&acc, v));
        let c = rational::scale(&sum, &n.recip());
        vertices.sort_by(|a, b| angular_cmp(&c, a, b));
    }
    let k = vertices.len();
    let clipped_edges = (0..k)
        .map(|i| {
            let (u, w) = (&vertices[i], &vertices[(i + 1) % k]);
            let tu = tight(p, u);
            !tight(p, w).iter().any(|r| tu.contains(r))
        })
        .collect();
    ClippedPolygon { vertices, clipped_edges }
}

fn draw_polygon(out: &mut String, poly: &ClippedPolygon, view: &Viewport, left: f64, fill: &str, stroke: &str, label: &str) {
    if poly.vertices.is_empty() {
        return;
    }
    let exact: Vec<String> = poly.vertices.iter().map(|v| format_vector(v)).collect();
    let pts: Vec<(f64, f64)> = poly.vertices.iter().map(|v| view.px(v, left)).collect();
    let _ = writeln!(out, "  <g class=\"{label}\">");
    let _ = writeln!(out, "    <title>{label}: {}</title>", exact.join(" "));
    if pts.len() >= 3 {
        let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(out, "    <polygon points=\"{}\" fill=\"{fill}\" fill-opacity=\"0.35\" stroke=\"none\"/>", path.join(" "));
    }
    let k = pts.len();
    let edges = if k == 2 { 1 } else if k >= 3 { k } else { 0 };
    for i in 0..edges {
        let (a, b) = (pts[i], pts[(i + 1) % k]);
        let dash = if poly.clipped_edges[i] && k >= 3 { " stroke-dasharray=\"5,4\"" } else { "" };
        let _ = writeln!(
            out,
            "    <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{stroke}\" stroke-width=\"2\"{dash}/>",
            a.0, a.1, b.0, b.1
        );
    }
    if k == 1 {
        let _ = writeln!(out, "    <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{stroke}\"/>", pts[0].0, pts[0].1);
    }
    let _ = writeln!(out, "  </g>");
}

fn frame(out: &mut String, view: &Viewport, left: f64, title: &str) {
    let _ = writeln!(
        out,
        "  <rect x=\"{left:.2}\" y=\"{MARGIN:.2}\" width=\"{PANEL:.2}\" height=\"{PANEL:.2}\" fill=\"none\" stroke=\"#888\"/>"
    );
    let _ = writeln!(out, "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\">{title}</text>", left, MARGIN - 10.0);
    let zero = rational::zeros(2);
    let (ox, oy) = view.px(&zero, left);
    if (left..=left + PANEL).contains(&ox) {
        let _ = writeln!(out, "  <line x1=\"{ox:.2}\" y1=\"{MARGIN:.2}\" x2=\"{ox:.2}\" y2=\"{:.2}\" stroke=\"#ccc\"/>", MARGIN + PANEL);
    }
    if (MARGIN..=MARGIN + PANEL).contains(&oy) {
        let _ = writeln!(out, "  <line x1=\"{left:.2}\" y1=\"{oy:.2}\" x2=\"{:.2}\" y2=\"{oy:.2}\" stroke=\"#ccc\"/>", left + PANEL);
    }
    let _ = writeln!(
        out,
        "  <text x=\"{left:.2}\" y=\"{:.2}\" font-size=\"10\" fill=\"#666\">x in [{}, {}], y in [{}, {}]</text>",
        MARGIN + PANEL + 14.0,
        format_rational(&view.xmin),
        format_rational(&view.xmax),
        format_rational(&view.ymin),
        format_rational(&view.ymax)
    );
}

/// Everything the plot shows, computed by the caller.
pub struct PlotData<'a> {
    pub title: String,
    pub feasible: &'a HPolyhedron,
    pub rows: &'a [ClassificationRow],
    /// `(cl cone S, -K, witness ray)` for the chosen point.
    pub cone_panel: Option<(HPolyhedron, HPolyhedron, Option<Vec<Rational>>)>,
}

pub fn render(data: &PlotData<'_>, view: &Viewport) -> String {
    let panels = if data.cone_panel.is_some() { 2.0 } else { 1.0 };
    let width = MARGIN + panels * (PANEL + MARGIN);
    let height = PANEL + 2.0 * MARGIN + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\">"
    );
    let _ = writeln!(out, "  <title>{}</title>", data.title);

    let left = MARGIN;
    frame(&mut out, view, left, "decision space: X and classified lattice points");
    draw_polygon(&mut out, &clip(data.feasible, view), view, left, "#9ecae1", "#3182bd", "X");
    for r in data.rows {
        let (x, y) = view.px(&r.point, left);
        let (fill, rad) = match (r.eps_efficient, r.benson_proper) {
            (true, true) => ("#31a354", 3.5),
            (true, false) => ("#e6550d", 3.5),
            _ => ("#999999", 2.0),
        };
        let _ = writeln!(
            out,
            "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{rad}\" fill=\"{fill}\"><title>{} efficient={} proper={}</title></circle>",
            format_vector(&r.point),
            r.eps_efficient,
            r.benson_proper
        );
    }
    let legend_y = MARGIN + PANEL + 30.0;
    let _ = writeln!(
        out,
        "  <text x=\"{left:.2}\" y=\"{legend_y:.2}\" font-size=\"11\"><tspan fill=\"#31a354\">efficient and proper</tspan>  <tspan fill=\"#e6550d\">efficient, not proper</tspan>  <tspan fill=\"#999\">not efficient</tspan>  dashed: viewport cut</text>"
    );

    if let Some((cone, neg_k, ray)) = &data.cone_panel {
        let left = 2.0 * MARGIN + PANEL;
        frame(&mut out, view, left, "image space: cl cone S and -K");
        draw_polygon(&mut out, &clip(cone, view), view, left, "#fdae6b", "#e6550d", "cl cone S");
        draw_polygon(&mut out, &clip(neg_k, view), view, left, "#bcbddc", "#756bb1", "-K");
        if let Some(w) = ray {
            let seg = HPolyhedron::new(2, Vec::new(), Vec::new(), vec![vec![-w[1].clone(), w[0].clone()]], vec![Rational::zero()])
                .expect("shape")
                .intersect(&half_plane_toward(w))
                .expect("shape");
            draw_polygon(&mut out, &clip(&seg, view), view, left, "none", "#de2d26", "witness ray");
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}

/// `{v : w·v >= 0}`.
fn half_plane_toward(w: &[Rational]) -> HPolyhedron {
    HPolyhedron::from_inequalities(2, vec![rational::neg(w)], vec![Rational::zero()]).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use bensonkit::rational::int;

    #[test]
    fn clips_quadrant_and_marks_cut_edges() {
        let view = Viewport::parse("-1,2,-1,2").unwrap();
        let poly = clip(&HPolyhedron::orthant(2), &view);
        assert_eq!(poly.vertices.len(), 4);
        assert_eq!(poly.clipped_edges.iter().filter(|&&c| c).count(), 2);
        assert!(poly.vertices.contains(&vec![int(0), int(0)]));
    }

    #[test]
    fn viewport_validation() {
        assert!(Viewport::parse("1,0,0,1").is_err());
        assert!(Viewport::parse("0,1,0").is_err());
        assert!(Viewport::parse("0,1.5,0,1").is_err());
    }
}
