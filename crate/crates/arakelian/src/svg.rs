//! SVG rendering of grid sets, component tints, curves, and circle arcs.
//!
//! Coordinates are window coordinates with the y axis flipped (`y_svg = -y`),
//! so the viewBox is `(xmin, -ymax, width, height)`. Every drawn element
//! corresponds to a report field: set cells, component regions, hole
//! representatives, curves, arcs, and the sampling circle.

use std::fmt::Write as _;

use crate::geometry::{GridSet, Point};
use crate::topology::{ArcSet, PolyPath, RegionLabeling};

const TINTS: [&str; 6] = [
    "#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fdd0a2", "#c7e9c0",
];

#[derive(Default)]
pub struct SvgScene<'a> {
    pub set: Option<&'a GridSet>,
    pub labeling: Option<&'a RegionLabeling>,
    pub curve: Option<&'a PolyPath>,
    pub arcs: Option<&'a ArcSet>,
    /// Radius of the sampling circle overlay.
    pub circle: Option<f64>,
    /// Marker points (hole representatives, placed zeros).
    pub markers: Vec<Point>,
}

impl<'a> SvgScene<'a> {
    pub fn render(&self) -> String {
        let window = self
            .set
            .map(|s| s.window)
            .or_else(|| self.labeling.map(|l| l.window))
            .expect("svg needs a set or a labeling");
        let w = window.xmax - window.xmin;
        let hgt = window.ymax - window.ymin;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">",
            window.xmin, -window.ymax, w, hgt
        );
        let stroke = (window.h * 0.75).max(w / 1024.0);

        if let Some(labeling) = self.labeling {
            for j in 0..labeling.ny() {
                let mut i = 0;
                while i < labeling.nx() {
                    let label = labeling.label_at(i, j);
                    if label < 0 {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    while i < labeling.nx() && labeling.label_at(i, j) == label {
                        i += 1;
                    }
                    let region = labeling.region(label).expect("labeled region");
                    let tint = if region.is_hole() {
                        TINTS[label as usize % TINTS.len()]
                    } else {
                        "#f0f0f0"
                    };
                    emit_run(&mut out, window, start, i, j, tint, "component");
                }
            }
        }
        if let Some(set) = self.set {
            for j in 0..set.ny() {
                let mut i = 0;
                while i < set.nx() {
                    if !set.at(i, j) {
                        i += 1;
                        continue;
                    }
                    let start = i;
                    while i < set.nx() && set.at(i, j) {
                        i += 1;
                    }
                    emit_run(&mut out, window, start, i, j, "#333333", "set");
                }
            }
        }
        if let Some(r) = self.circle {
            let _ = writeln!(
                out,
                "  <circle class=\"sampling-circle\" cx=\"0\" cy=\"0\" r=\"{r}\" fill=\"none\" \
                 stroke=\"#1f78b4\" stroke-width=\"{stroke}\" stroke-dasharray=\"{d} {d}\"/>",
                d = 4.0 * stroke
            );
        }
        if let Some(arcs) = self.arcs {
            let r = arcs.n0 as f64;
            for (k, arc) in arcs.arcs.iter().enumerate() {
                let steps = ((arc.theta_end - arc.theta_start) / arcs.delta_theta).ceil() as usize;
                let mut d = String::new();
                for s in 0..=steps.max(1) {
                    let t = arc.theta_start
                        + (arc.theta_end - arc.theta_start) * s as f64 / steps.max(1) as f64;
                    let cmd = if s == 0 { 'M' } else { 'L' };
                    let _ = write!(d, "{cmd}{} {} ", r * t.cos(), -(r * t.sin()));
                }
                let color = if arc.bounded { "#e31a1c" } else { "#33a02c" };
                let _ = writeln!(
                    out,
                    "  <path class=\"arc\" data-arc=\"{k}\" data-label=\"{}\" d=\"{}\" fill=\"none\" \
                     stroke=\"{color}\" stroke-width=\"{sw}\"/>",
                    arc.label,
                    d.trim_end(),
                    sw = 2.0 * stroke
                );
            }
        }
        if let Some(curve) = self.curve {
            let mut pts = String::new();
            for p in &curve.points {
                let _ = write!(pts, "{},{} ", p.re, -p.im);
            }
            if curve.closed {
                if let Some(p) = curve.points.first() {
                    let _ = write!(pts, "{},{}", p.re, -p.im);
                }
            }
            let _ = writeln!(
                out,
                "  <polyline class=\"gamma\" points=\"{}\" fill=\"none\" stroke=\"#e31a1c\" \
                 stroke-width=\"{sw}\"/>",
                pts.trim_end(),
                sw = 1.5 * stroke
            );
        }
        for (k, m) in self.markers.iter().enumerate() {
            let _ = writeln!(
                out,
                "  <circle class=\"marker\" data-marker=\"{k}\" cx=\"{}\" cy=\"{}\" r=\"{r}\" \
                 fill=\"#ff7f00\"/>",
                m.re,
                -m.im,
                r = 2.5 * stroke
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn emit_run(out: &mut String, window: crate::geometry::Window, i0: usize, i1: usize, j: usize, fill: &str, class: &str) {
    let x = window.xmin + i0 as f64 * window.h;
    let width = (i1 - i0) as f64 * window.h;
    let y_top = window.ymin + (j + 1) as f64 * window.h;
    let _ = writeln!(
        out,
        "  <rect class=\"{class}\" x=\"{x}\" y=\"{}\" width=\"{width}\" height=\"{}\" fill=\"{fill}\"/>",
        -y_top, window.h
    );
}
