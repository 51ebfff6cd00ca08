//! Sampled curves and enclosing-contour extraction.
//!
//! `enclosing_curve` traces a level set of the interior distance field of a
//! filled region with marching squares, then selects the loop that winds
//! around the requested point. The result is a simple closed polyline that
//! hugs the region boundary from inside at a prescribed standoff.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use crate::error::Error;
use crate::geometry::{distance_transform, GridSet, Point};
use crate::Result;

/// Sampled open or closed curve in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyPath {
    pub points: Vec<Point>,
    pub closed: bool,
}

impl PolyPath {
    pub fn new(points: Vec<Point>, closed: bool) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain("a path needs at least 2 points".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain("path points must be finite".into()));
        }
        Ok(PolyPath { points, closed })
    }

    /// Consecutive point pairs, including the closing edge when closed.
    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        let n = self.points.len();
        let last = if self.closed { n } else { n - 1 };
        (0..last).map(move |k| (self.points[k], self.points[(k + 1) % n]))
    }

    pub fn max_gap(&self) -> f64 {
        self.segments()
            .map(|(a, b)| (a.re - b.re).hypot(a.im - b.im))
            .fold(0.0, f64::max)
    }

    pub fn total_length(&self) -> f64 {
        self.segments()
            .map(|(a, b)| (a.re - b.re).hypot(a.im - b.im))
            .sum()
    }

    /// O(n^2) simplicity check; intended for tests and small curves.
    pub fn is_simple(&self) -> bool {
        let segs: Vec<_> = self.segments().collect();
        for a in 0..segs.len() {
            for b in (a + 1)..segs.len() {
                let adjacent = b == a + 1 || (a == 0 && b == segs.len() - 1 && self.closed);
                if adjacent {
                    continue;
                }
                if segments_intersect(segs[a], segs[b]) {
                    return false;
                }
            }
        }
        true
    }

    pub fn reversed(&self) -> PolyPath {
        let mut points = self.points.clone();
        points.reverse();
        PolyPath {
            points,
            closed: self.closed,
        }
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.re - a.re) * (c.im - a.im) - (b.im - a.im) * (c.re - a.re)
}

fn segments_intersect(s1: (Point, Point), s2: (Point, Point)) -> bool {
    let (a, b) = s1;
    let (c, d) = s2;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Integer winding number of a closed polyline around a point off the curve.
pub fn winding_around(points: &[Point], p: Point) -> i32 {
    let mut w = 0i32;
    let n = points.len();
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        if a.im <= p.im {
            if b.im > p.im && orient(a, b, p) > 0.0 {
                w += 1;
            }
        } else if b.im <= p.im && orient(a, b, p) < 0.0 {
            w -= 1;
        }
    }
    w
}

/// Signed area of a closed polyline (positive for counter-clockwise).
pub fn polyline_area(points: &[Point]) -> f64 {
    let n = points.len();
    let mut acc = 0.0;
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        acc += a.re * b.im - b.re * a.im;
    }
    acc / 2.0
}

/// Edge identifiers for marching squares: each contour vertex lies on a
/// horizontal or vertical lattice edge between two cell centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum EdgeId {
    H(usize, usize), // between centers (i, j) and (i+1, j)
    V(usize, usize), // between centers (i, j) and (i, j+1)
}

/// Extract a simple closed polyline inside `v`, at distance roughly
/// `epsilon` from the boundary, enclosing `zeta` with winding +1.
///
/// The contour level is placed so every vertex keeps distance in
/// `(0, epsilon]` from the complement; vertex spacing is at most the cell
/// size.
pub fn enclosing_curve(v: &GridSet, zeta: Point, epsilon: f64) -> Result<PolyPath> {
    let h = v.window.h;
    if !epsilon.is_finite() || epsilon < 2.0 * h {
        return Err(Error::Resolution(format!(
            "epsilon {epsilon} below the 2h = {} resolution floor",
            2.0 * h
        )));
    }
    let (zi, zj) = v
        .window
        .cell_of(zeta)
        .ok_or_else(|| Error::Resolution("zeta outside the window".into()))?;
    if !v.at(zi, zj) {
        return Err(Error::Resolution("zeta is not inside the region".into()));
    }
    let dt = distance_transform(v);
    if dt.at(zi, zj) <= epsilon {
        return Err(Error::Resolution(format!(
            "zeta is within epsilon = {epsilon} of the region boundary (clearance {})",
            dt.at(zi, zj)
        )));
    }

    let level = (0.75 * epsilon).clamp(h, epsilon - h);
    let loops = march_level(v, &dt, level);

    // Keep the loops that wind around zeta; take the outermost.
    let mut best: Option<(f64, Vec<Point>)> = None;
    for lp in loops {
        if winding_around(&lp, zeta) != 0 {
            let area = polyline_area(&lp).abs();
            if best.as_ref().is_none_or(|(a, _)| area > *a) {
                best = Some((area, lp));
            }
        }
    }
    let (_, mut points) = best.ok_or_else(|| {
        Error::Resolution(format!(
            "no contour at level {level} separates zeta from the boundary"
        ))
    })?;

    if polyline_area(&points) < 0.0 {
        points.reverse();
    }
    let points = subdivide_to_gap(&points, h);
    PolyPath::new(points, true)
}

/// Marching squares at `dt = level`, inside meaning `dt >= level`.
/// Segments are oriented with the inside on the left and stitched into
/// closed loops; the ambiguous saddle cases are split by the cell-average
/// rule, which keeps loops simple.
fn march_level(v: &GridSet, dt: &crate::geometry::DistanceField, level: f64) -> Vec<Vec<Point>> {
    let (nx, ny) = (v.nx(), v.ny());
    let val = |i: usize, j: usize| -> f64 {
        let d = dt.at(i, j);
        if d.is_finite() {
            d - level
        } else {
            f64::MAX
        }
    };
    let interp = |i0: usize, j0: usize, i1: usize, j1: usize| -> Point {
        let f0 = val(i0, j0);
        let f1 = val(i1, j1);
        let t = (f0 / (f0 - f1)).clamp(0.0, 1.0);
        let a = v.center(i0, j0);
        let b = v.center(i1, j1);
        Point::new(a.re + t * (b.re - a.re), a.im + t * (b.im - a.im))
    };

    // from-edge -> (to-edge, vertex at the from-edge). The vertex at the
    // to-edge is the next segment's own from-vertex: both squares sharing an
    // edge interpolate it from the same two cell values.
    let mut segs: HashMap<EdgeId, (EdgeId, Point)> = HashMap::new();
    let mut add = |from: EdgeId, to: EdgeId, pf: Point, _pt: Point| {
        segs.insert(from, (to, pf));
    };

    for j in 0..ny.saturating_sub(1) {
        for i in 0..nx.saturating_sub(1) {
            // Corners: 1 = (i,j), 2 = (i+1,j), 4 = (i+1,j+1), 8 = (i,j+1).
            let f00 = val(i, j);
            let f10 = val(i + 1, j);
            let f11 = val(i + 1, j + 1);
            let f01 = val(i, j + 1);
            let mut case = 0u8;
            if f00 >= 0.0 {
                case |= 1;
            }
            if f10 >= 0.0 {
                case |= 2;
            }
            if f11 >= 0.0 {
                case |= 4;
            }
            if f01 >= 0.0 {
                case |= 8;
            }
            if case == 0 || case == 15 {
                continue;
            }
            let bottom = EdgeId::H(i, j);
            let top = EdgeId::H(i, j + 1);
            let left = EdgeId::V(i, j);
            let right = EdgeId::V(i + 1, j);
            let pb = || interp(i, j, i + 1, j);
            let pt_ = || interp(i, j + 1, i + 1, j + 1);
            let pl = || interp(i, j, i, j + 1);
            let pr = || interp(i + 1, j, i + 1, j + 1);
            // Directed edges keep the inside (f >= 0) on the left when the
            // grid is viewed with j increasing upward.
            match case {
                1 => add(bottom, left, pb(), pl()),
                2 => add(right, bottom, pr(), pb()),
                3 => add(right, left, pr(), pl()),
                4 => add(top, right, pt_(), pr()),
                5 => {
                    let center = (f00 + f10 + f11 + f01) / 4.0;
                    if center >= 0.0 {
                        add(bottom, right, pb(), pr());
                        add(top, left, pt_(), pl());
                    } else {
                        add(bottom, left, pb(), pl());
                        add(top, right, pt_(), pr());
                    }
                }
                6 => add(top, bottom, pt_(), pb()),
                7 => add(top, left, pt_(), pl()),
                8 => add(left, top, pl(), pt_()),
                9 => add(bottom, top, pb(), pt_()),
                10 => {
                    let center = (f00 + f10 + f11 + f01) / 4.0;
                    if center >= 0.0 {
                        add(left, bottom, pl(), pb());
                        add(right, top, pr(), pt_());
                    } else {
                        add(right, bottom, pr(), pb());
                        add(left, top, pl(), pt_());
                    }
                }
                11 => add(right, top, pr(), pt_()),
                12 => add(left, right, pl(), pr()),
                13 => add(bottom, right, pb(), pr()),
                14 => add(left, bottom, pl(), pb()),
                _ => unreachable!(),
            }
        }
    }

    // Stitch loops: follow from-edge -> to-edge chains.
    let mut loops = Vec::new();
    let mut visited: HashMap<EdgeId, bool> = HashMap::new();
    let starts: Vec<EdgeId> = segs.keys().copied().collect();
    let mut starts = starts;
    starts.sort_by_key(|e| match *e {
        EdgeId::H(i, j) => (j, i, 0u8),
        EdgeId::V(i, j) => (j, i, 1u8),
    });
    for start in starts {
        if visited.get(&start).copied().unwrap_or(false) {
            continue;
        }
        let mut pts = Vec::new();
        let mut cur = start;
        loop {
            if visited.get(&cur).copied().unwrap_or(false) {
                break;
            }
            visited.insert(cur, true);
            match segs.get(&cur) {
                Some(&(next, pf)) => {
                    pts.push(pf);
                    cur = next;
                }
                None => break, // open chain: hit the grid edge; drop it
            }
            if cur == start {
                break;
            }
        }
        if cur == start && pts.len() >= 3 {
            loops.push(pts);
        }
    }
    loops
}

fn subdivide_to_gap(points: &[Point], gap: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(points.len() * 2);
    let n = points.len();
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        out.push(a);
        let len = (a.re - b.re).hypot(a.im - b.im);
        let pieces = (len / gap).ceil() as usize;
        for m in 1..pieces {
            let t = m as f64 / pieces as f64;
            out.push(Point::new(
                a.re + t * (b.re - a.re),
                a.im + t * (b.im - a.im),
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{rasterize, Scene, ShapeKind, Window};

    fn disk_set(r: f64, h: f64) -> GridSet {
        let scene = Scene::default().union(ShapeKind::Disk {
            cx: 0.0,
            cy: 0.0,
            r,
        });
        rasterize(&scene, Window::new(-2.0, 2.0, -2.0, 2.0, h).unwrap()).unwrap()
    }

    #[test]
    fn disk_contour_stays_in_the_requested_collar() {
        let set = disk_set(1.0, 4.0 / 256.0);
        let zeta = Point::new(0.0, 0.0);
        let path = enclosing_curve(&set, zeta, 0.2).unwrap();
        assert!(path.closed);
        assert!(path.is_simple());
        assert!(path.max_gap() <= set.window.h + 1e-12);
        for p in &path.points {
            let r = p.norm();
            assert!((0.8 - 1e-9..=1.0 + 1e-9).contains(&r), "radius {r}");
        }
        assert_eq!(winding_around(&path.points, zeta), 1);
        assert!(polyline_area(&path.points) > 0.0);
    }

    #[test]
    fn square_contour_winds_center_once() {
        let scene = Scene::default().union(ShapeKind::Rect {
            xmin: -1.0,
            xmax: 1.0,
            ymin: -1.0,
            ymax: 1.0,
        });
        let set = rasterize(&scene, Window::new(-2.0, 2.0, -2.0, 2.0, 0.02).unwrap()).unwrap();
        let zeta = Point::new(0.0, 0.0);
        let path = enclosing_curve(&set, zeta, 0.15).unwrap();
        assert!(path.is_simple());
        assert_eq!(winding_around(&path.points, zeta), 1);
        for p in &path.points {
            let d = (1.0 - p.re.abs()).min(1.0 - p.im.abs());
            assert!((-1e-9..=0.15 + 1e-9).contains(&d), "standoff {d}");
        }
    }

    #[test]
    fn zeta_too_close_to_boundary_is_a_resolution_error() {
        let set = disk_set(1.0, 0.02);
        let err = enclosing_curve(&set, Point::new(0.95, 0.0), 0.2).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }

    #[test]
    fn epsilon_below_grid_floor_is_rejected() {
        let set = disk_set(1.0, 0.02);
        let err = enclosing_curve(&set, Point::new(0.0, 0.0), 0.01).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }
}
