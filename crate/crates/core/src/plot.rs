//! SVG pictures of the parameter domain in the `(n/p, s)` plane.

use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::composition::{hyperbola_branches, in_domain, simplified_domain, SimplifiedDomain};
use crate::error::{CalcError, Result};
use crate::numeric::{format_rational, int, ratio, to_f64, ExtReal, Rational, Surd};
use crate::space::{Base, OperatorSpec, Scale, SpaceParams};

pub const WIDTH: i64 = 1000;
pub const HEIGHT: i64 = 800;
const CELL: i64 = 4;
const LEFT: i64 = 80;
const RIGHT: i64 = 40;
const TOP: i64 = 40;
const BOTTOM: i64 = 80;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlotSpec {
    pub n: u32,
    pub r: u8,
    /// Right end of the `n/p` axis, which starts at 0.
    pub t_max: Rational,
    pub s_min: Rational,
    pub s_max: Rational,
    pub samples: usize,
}

impl PlotSpec {
    pub fn new(n: u32, r: u8, t_max: Rational, s_min: Rational, s_max: Rational, samples: usize) -> Result<Self> {
        if n == 0 {
            return Err(CalcError::Contract("dimension must be positive".into()));
        }
        if samples < 16 {
            return Err(CalcError::Contract(format!("samples must be at least 16, got {samples}")));
        }
        if t_max <= Rational::zero() || s_max <= s_min {
            return Err(CalcError::Contract("plot ranges must be nonempty".into()));
        }
        Ok(PlotSpec { n, r, t_max, s_min, s_max, samples })
    }

    /// The default window: `n/p ∈ [0, max(2n, 12)]`, `s ∈ [−1, max(2n, 12)]`.
    pub fn standard(n: u32, r: u8) -> Result<Self> {
        let top = int((2 * n as i64).max(12));
        PlotSpec::new(n, r, top.clone(), int(-1), top, 200)
    }
}

struct Frame<'a> {
    cfg: &'a PlotSpec,
}

impl Frame<'_> {
    fn plot_w() -> i64 {
        WIDTH - LEFT - RIGHT
    }

    fn plot_h() -> i64 {
        HEIGHT - TOP - BOTTOM
    }

    fn x(&self, t: f64) -> f64 {
        LEFT as f64 + t / to_f64(&self.cfg.t_max) * Self::plot_w() as f64
    }

    fn y(&self, s: f64) -> f64 {
        let lo = to_f64(&self.cfg.s_min);
        let hi = to_f64(&self.cfg.s_max);
        TOP as f64 + (hi - s) / (hi - lo) * Self::plot_h() as f64
    }

    fn inside(&self, s: f64) -> bool {
        s >= to_f64(&self.cfg.s_min) && s <= to_f64(&self.cfg.s_max)
    }

    /// Exact plane point at the centre of the pixel cell `(i, j)`.
    fn cell_centre(&self, i: i64, j: i64) -> (Rational, Rational) {
        let t = &self.cfg.t_max * ratio(2 * i * CELL + CELL, 2 * Self::plot_w());
        let height = &self.cfg.s_max - &self.cfg.s_min;
        let s = &self.cfg.s_max - height * ratio(2 * j * CELL + CELL, 2 * Self::plot_h());
        (t, s)
    }
}

fn point(out: &mut String, x: f64, y: f64) {
    let _ = write!(out, "{x:.2},{y:.2} ");
}

/// Polylines through the finite, in-range samples; breaks at gaps.
fn polyline(frame: &Frame, pts: &[(f64, Option<f64>)], class: &str, label: &str) -> String {
    let mut runs: Vec<Vec<(f64, f64)>> = vec![Vec::new()];
    for &(t, s) in pts {
        match s {
            Some(s) if s.is_finite() && frame.inside(s) => runs.last_mut().expect("nonempty").push((t, s)),
            _ => {
                if !runs.last().expect("nonempty").is_empty() {
                    runs.push(Vec::new());
                }
            }
        }
    }
    let mut out = String::new();
    for run in runs.iter().filter(|r| r.len() >= 2) {
        let mut coords = String::new();
        for &(t, s) in run {
            point(&mut coords, frame.x(t), frame.y(s));
        }
        let _ = writeln!(
            out,
            r#"<polyline class="{class}" fill="none" stroke-width="2" points="{}"><title>{label}</title></polyline>"#,
            coords.trim_end()
        );
    }
    out
}

fn sample_ts(cfg: &PlotSpec, from: &Rational) -> Vec<Rational> {
    let k = cfg.samples as i64;
    (0..=k).map(|i| from + (&cfg.t_max - from) * ratio(i, k)).collect()
}

fn line_points(cfg: &PlotSpec, slope: &Rational, offset: &Rational) -> Vec<(f64, Option<f64>)> {
    sample_ts(cfg, &Rational::zero())
        .iter()
        .map(|t| (to_f64(t), Some(to_f64(&(slope * t + offset)))))
        .collect()
}

fn shading(frame: &Frame, op: &OperatorSpec) -> Result<String> {
    let cfg = frame.cfg;
    let mut out = String::new();
    let cols = Frame::plot_w() / CELL;
    let rows = Frame::plot_h() / CELL;
    for j in 0..rows {
        let mut run_start: Option<i64> = None;
        for i in 0..=cols {
            let member = if i < cols {
                let (t, s) = frame.cell_centre(i, j);
                let u = &t / int(cfg.n as i64);
                let scale = if u.is_zero() { Scale::B } else { Scale::F };
                let sp = SpaceParams::new(scale, ExtReal::exact(s), u, Rational::zero(), cfg.n, Base::BoundedDomain)?;
                in_domain(&sp, op)
            } else {
                false
            };
            match (member, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(start)) => {
                    let _ = writeln!(
                        out,
                        r#"<rect class="domain" x="{}" y="{}" width="{}" height="{CELL}"/>"#,
                        LEFT + start * CELL,
                        TOP + j * CELL,
                        (i - start) * CELL
                    );
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    Ok(out)
}

fn hyperbola_points(cfg: &PlotSpec) -> Result<(Vec<(f64, Option<f64>)>, Vec<(f64, Option<f64>)>)> {
    let vertex = Surd::vertex();
    if vertex.cmp_rational(&cfg.t_max) != std::cmp::Ordering::Less {
        return Ok((Vec::new(), Vec::new()));
    }
    // the vertex itself, where both branches meet at s = (t+3)/2
    let v = vertex.to_f64();
    let mut lower = vec![(v, Some((v + 3.0) / 2.0))];
    let mut upper = lower.clone();
    let start = ratio(583, 100);
    for t in sample_ts(cfg, &start).into_iter().skip(1) {
        if vertex.cmp_rational(&t) != std::cmp::Ordering::Less {
            continue;
        }
        let b = hyperbola_branches(&t)?;
        lower.push((to_f64(&t), Some(b.lower_approx)));
        upper.push((to_f64(&t), Some(b.upper_approx)));
    }
    Ok((lower, upper))
}

/// `s = n/p − p/(1−p)` for `p < 1`, that is `n/p > n`.
fn condition_ii_curve(cfg: &PlotSpec) -> Vec<(f64, Option<f64>)> {
    let n = int(cfg.n as i64);
    if cfg.t_max <= n {
        return Vec::new();
    }
    sample_ts(cfg, &n)
        .into_iter()
        .skip(1)
        .map(|t| {
            let s = &t - &n / (&t - &n);
            (to_f64(&t), Some(to_f64(&s)))
        })
        .collect()
}

fn axes(frame: &Frame) -> String {
    let cfg = frame.cfg;
    let mut out = String::new();
    let x0 = frame.x(0.0);
    let x1 = frame.x(to_f64(&cfg.t_max));
    let y_lo = frame.y(to_f64(&cfg.s_min));
    let y_hi = frame.y(to_f64(&cfg.s_max));
    let _ = writeln!(out, r#"<line class="axis" x1="{x0:.2}" y1="{y_lo:.2}" x2="{x1:.2}" y2="{y_lo:.2}"/>"#);
    let _ = writeln!(out, r#"<line class="axis" x1="{x0:.2}" y1="{y_lo:.2}" x2="{x0:.2}" y2="{y_hi:.2}"/>"#);
    let _ = writeln!(
        out,
        r#"<text class="label" x="{:.2}" y="{:.2}" text-anchor="middle">n/p</text>"#,
        (x0 + x1) / 2.0,
        y_lo + 50.0
    );
    let _ = writeln!(
        out,
        r#"<text class="label" x="{:.2}" y="{:.2}" text-anchor="middle">s</text>"#,
        x0 - 50.0,
        (y_lo + y_hi) / 2.0
    );
    for (value, anchor_x, anchor_y, vertical) in [
        (Rational::zero(), x0, y_lo + 20.0, false),
        (cfg.t_max.clone(), x1, y_lo + 20.0, false),
        (cfg.s_min.clone(), x0 - 10.0, y_lo, true),
        (cfg.s_max.clone(), x0 - 10.0, y_hi + 5.0, true),
    ] {
        let anchor = if vertical { "end" } else { "middle" };
        let _ = writeln!(
            out,
            r#"<text class="tick" x="{anchor_x:.2}" y="{anchor_y:.2}" text-anchor="{anchor}">{}</text>"#,
            format_rational(&value)
        );
    }
    out
}

/// Renders the domain picture. Identical specs give identical bytes.
pub fn render_svg(cfg: &PlotSpec) -> Result<String> {
    let op = OperatorSpec::with_class(cfg.r)?;
    let frame = Frame { cfg };
    let n = int(cfg.n as i64);
    let r = int(cfg.r as i64);
    let mut body = String::new();
    body.push_str(&shading(&frame, &op)?);
    match simplified_domain(cfg.n, &op) {
        Some(SimplifiedDomain::OneDimensional { .. }) => {
            body.push_str(&polyline(&frame, &line_points(cfg, &Rational::one(), &(&r - int(1))), "boundary", "s = 1/p - 1 + r"));
        }
        Some(SimplifiedDomain::PlanarClassTwo) => {
            let pts: Vec<(f64, Option<f64>)> = sample_ts(cfg, &Rational::zero())
                .iter()
                .map(|t| (to_f64(t), Some(to_f64(&(t * ratio(1, 2) + int(1)).max(t.clone())))))
                .collect();
            body.push_str(&polyline(&frame, &pts, "boundary", "s = max(1/p + 1, 2/p)"));
        }
        _ => {
            body.push_str(&polyline(
                &frame,
                &line_points(cfg, &(Rational::one() / &n), &(&r - int(1))),
                "boundary-i",
                "s = 1/p - 1 + r",
            ));
            body.push_str(&polyline(&frame, &line_points(cfg, &Rational::one(), &(&r - &n)), "boundary-i", "s = n/p - n + r"));
            let (lower, upper) = hyperbola_points(cfg)?;
            body.push_str(&polyline(&frame, &lower, "boundary-iii", "lower hyperbola branch"));
            body.push_str(&polyline(&frame, &upper, "boundary-iii", "upper hyperbola branch"));
            body.push_str(&polyline(&frame, &condition_ii_curve(cfg), "boundary-ii", "s = n/p - p/(1-p)"));
        }
    }
    body.push_str(&axes(&frame));

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {WIDTH} {HEIGHT}" width="{WIDTH}" height="{HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        "<title>parameter domain, n = {}, r = {}</title>",
        cfg.n, cfg.r
    );
    let _ = writeln!(
        svg,
        "<style>.domain{{fill:#c8d8ee}} .boundary,.boundary-i{{stroke:#1f3b73}} .boundary-ii{{stroke:#8a2a2a}} .boundary-iii{{stroke:#2a7a3a}} .axis{{stroke:#000;stroke-width:1.5}} .label{{font:20px sans-serif}} .tick{{font:14px sans-serif}}</style>"
    );
    let _ = writeln!(svg, r##"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#fff"/>"##);
    svg.push_str(&body);
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(n: u32, r: u8) -> PlotSpec {
        let top = int((2 * n as i64).max(12));
        PlotSpec::new(n, r, top.clone(), int(-1), top, 32).unwrap()
    }

    #[test]
    fn deterministic_and_well_formed() {
        let cfg = small(12, 1);
        let a = render_svg(&cfg).unwrap();
        let b = render_svg(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.contains(r#"viewBox="0 0 1000 800""#));
        assert!(a.contains("upper hyperbola branch"));
        assert!(a.contains("s = n/p - p/(1-p)"));
        assert!(a.contains(r#"class="domain""#));
        assert!(a.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn low_dimensions_have_no_curves() {
        let one = render_svg(&small(1, 1)).unwrap();
        assert!(!one.contains("hyperbola"));
        assert!(one.contains("s = 1/p - 1 + r"));
        let two = render_svg(&small(2, 2)).unwrap();
        assert!(!two.contains("hyperbola"));
        assert!(two.contains("max(1/p + 1, 2/p)"));
    }

    #[test]
    fn polylines_have_enough_points() {
        let cfg = small(12, 1);
        let svg = render_svg(&cfg).unwrap();
        let line = svg.lines().find(|l| l.contains("s = n/p - n + r")).unwrap();
        let points = line.split("points=\"").nth(1).unwrap().split('"').next().unwrap();
        assert!(points.split_whitespace().count() >= 16);
    }

    #[test]
    fn spec_contracts() {
        assert!(PlotSpec::new(3, 1, int(5), int(0), int(5), 8).is_err());
        assert!(PlotSpec::new(3, 1, int(0), int(0), int(5), 64).is_err());
        assert!(PlotSpec::new(3, 1, int(5), int(5), int(5), 64).is_err());
    }
}
