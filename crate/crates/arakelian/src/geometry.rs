//! Scene description, rasterization, and primitive planar measures.
//!
//! A [`GridSet`] is the discrete stand-in for a closed subset of the plane:
//! a rectangular window cut into square cells of side `h`, with a cell marked
//! iff its center lies in the set. Membership is sampled at cell centers
//! only; one-dimensional primitives (circles, segments) therefore carry an
//! explicit thickness of at least `2h`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tolerances::{MAX_CELLS_PER_AXIS, MAX_TOTAL_CELLS};
use crate::Result;

/// A point of the plane, serialized as `{re, im}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl Point {
    pub fn new(re: f64, im: f64) -> Self {
        Point { re, im }
    }

    pub fn to_c(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_c(z: Complex64) -> Self {
        Point { re: z.re, im: z.im }
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// Rectangular truncation of the plane with cell side `h`.
///
/// The effective grid spans `nx()` by `ny()` cells starting at
/// `(xmin, ymin)`; cell `(i, j)` has center
/// `(xmin + (i + 1/2) h, ymin + (j + 1/2) h)` with `j` increasing upward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub h: f64,
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, h: f64) -> Result<Self> {
        let w = Window {
            xmin,
            xmax,
            ymin,
            ymax,
            h,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for v in [self.xmin, self.xmax, self.ymin, self.ymax, self.h] {
            if !v.is_finite() {
                return Err(Error::Schema("window fields must be finite".into()));
            }
        }
        if self.xmax <= self.xmin || self.ymax <= self.ymin {
            return Err(Error::Schema("window must have positive extent".into()));
        }
        if self.h <= 0.0 {
            return Err(Error::Schema("cell size h must be positive".into()));
        }
        let nx = ((self.xmax - self.xmin) / self.h).round() as i64;
        let ny = ((self.ymax - self.ymin) / self.h).round() as i64;
        if nx < 1 || ny < 1 {
            return Err(Error::Schema("window smaller than one cell".into()));
        }
        if nx as usize > MAX_CELLS_PER_AXIS || ny as usize > MAX_CELLS_PER_AXIS {
            return Err(Error::Schema(format!(
                "cell count {}x{} exceeds per-axis limit {}",
                nx, ny, MAX_CELLS_PER_AXIS
            )));
        }
        if (nx * ny) as usize > MAX_TOTAL_CELLS {
            return Err(Error::Schema(format!(
                "total cell count {} exceeds limit {}",
                nx * ny,
                MAX_TOTAL_CELLS
            )));
        }
        Ok(())
    }

    pub fn nx(&self) -> usize {
        (((self.xmax - self.xmin) / self.h).round() as i64).max(1) as usize
    }

    pub fn ny(&self) -> usize {
        (((self.ymax - self.ymin) / self.h).round() as i64).max(1) as usize
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.xmin + (i as f64 + 0.5) * self.h,
            self.ymin + (j as f64 + 0.5) * self.h,
        )
    }

    /// Cell containing the point, or `None` outside the effective grid.
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let i = ((p.re - self.xmin) / self.h).floor();
        let j = ((p.im - self.ymin) / self.h).floor();
        if i < 0.0 || j < 0.0 {
            return None;
        }
        let (i, j) = (i as usize, j as usize);
        if i >= self.nx() || j >= self.ny() {
            return None;
        }
        Some((i, j))
    }

    /// Largest modulus over the window corners; bounds `|z|` on the grid.
    pub fn corner_radius(&self) -> f64 {
        let xs = [self.xmin, self.xmax];
        let ys = [self.ymin, self.ymax];
        let mut r = 0.0f64;
        for &x in &xs {
            for &y in &ys {
                r = r.max(x.hypot(y));
            }
        }
        r
    }
}

/// Set operation applied by a scene shape, in list order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Op {
    Union,
    Difference,
}

/// Shape primitives. All sets are closed (boundary included).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "camelCase")]
pub enum ShapeKind {
    Disk {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Annulus {
        cx: f64,
        cy: f64,
        #[serde(rename = "rInner")]
        r_inner: f64,
        #[serde(rename = "rOuter")]
        r_outer: f64,
    },
    Rect {
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
    },
    /// Half-plane `nx*x + ny*y >= offset`.
    HalfPlane {
        nx: f64,
        ny: f64,
        offset: f64,
    },
    /// Filled polygon, even-odd rule, implicitly closed.
    Polygon {
        points: Vec<Point>,
    },
    /// Closed capsule of the given total thickness around a segment.
    Segment {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        thickness: f64,
    },
    /// Closed band of the given total thickness around a circle.
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
        thickness: f64,
    },
}

impl ShapeKind {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Schema(format!("invalid shape: {msg}")));
        match self {
            ShapeKind::Disk { r, .. } => {
                if *r <= 0.0 {
                    return bad("disk radius must be positive");
                }
            }
            ShapeKind::Annulus {
                r_inner, r_outer, ..
            } => {
                if *r_inner < 0.0 || *r_outer <= *r_inner {
                    return bad("annulus radii must satisfy 0 <= rInner < rOuter");
                }
            }
            ShapeKind::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
            } => {
                if xmax <= xmin || ymax <= ymin {
                    return bad("rectangle must have positive extent");
                }
            }
            ShapeKind::HalfPlane { nx, ny, .. } => {
                if nx.hypot(*ny) == 0.0 {
                    return bad("half-plane normal must be nonzero");
                }
            }
            ShapeKind::Polygon { points } => {
                if points.len() < 3 {
                    return bad("polygon needs at least 3 points");
                }
                if points.iter().any(|p| !p.is_finite()) {
                    return bad("polygon points must be finite");
                }
            }
            ShapeKind::Segment { thickness, .. } | ShapeKind::Circle { thickness, .. } => {
                if *thickness <= 0.0 {
                    return bad("thickness must be positive");
                }
            }
        }
        Ok(())
    }

    /// Thickness of a one-dimensional primitive, if any.
    fn thin_thickness(&self) -> Option<f64> {
        match self {
            ShapeKind::Segment { thickness, .. } | ShapeKind::Circle { thickness, .. } => {
                Some(*thickness)
            }
            _ => None,
        }
    }

    fn contains(&self, p: Point) -> bool {
        match *self {
            ShapeKind::Disk { cx, cy, r } => (p.re - cx).hypot(p.im - cy) <= r,
            ShapeKind::Annulus {
                cx,
                cy,
                r_inner,
                r_outer,
            } => {
                let d = (p.re - cx).hypot(p.im - cy);
                d >= r_inner && d <= r_outer
            }
            ShapeKind::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
            } => p.re >= xmin && p.re <= xmax && p.im >= ymin && p.im <= ymax,
            ShapeKind::HalfPlane { nx, ny, offset } => nx * p.re + ny * p.im >= offset,
            ShapeKind::Polygon { ref points } => polygon_contains_even_odd(points, p),
            ShapeKind::Segment {
                x1,
                y1,
                x2,
                y2,
                thickness,
            } => dist_to_segment(p, x1, y1, x2, y2) <= thickness / 2.0,
            ShapeKind::Circle {
                cx,
                cy,
                r,
                thickness,
            } => ((p.re - cx).hypot(p.im - cy) - r).abs() <= thickness / 2.0,
        }
    }
}

fn dist_to_segment(p: Point, x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    let (dx, dy) = (x2 - x1, y2 - y1);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return (p.re - x1).hypot(p.im - y1);
    }
    let t = (((p.re - x1) * dx + (p.im - y1) * dy) / len2).clamp(0.0, 1.0);
    (p.re - (x1 + t * dx)).hypot(p.im - (y1 + t * dy))
}

fn polygon_contains_even_odd(points: &[Point], p: Point) -> bool {
    let mut inside = false;
    let n = points.len();
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        if (a.im > p.im) != (b.im > p.im) {
            let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
            if p.re < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// One step of a scene: a shape combined by union or difference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneShape {
    #[serde(flatten)]
    pub kind: ShapeKind,
    pub op: Op,
}

/// Ordered list of shape operations describing a closed planar set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Scene {
    pub shapes: Vec<SceneShape>,
}

impl Scene {
    pub fn new(shapes: Vec<SceneShape>) -> Self {
        Scene { shapes }
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.shapes {
            s.kind.validate()?;
        }
        Ok(())
    }

    pub fn union(mut self, kind: ShapeKind) -> Self {
        self.shapes.push(SceneShape {
            kind,
            op: Op::Union,
        });
        self
    }

    pub fn difference(mut self, kind: ShapeKind) -> Self {
        self.shapes.push(SceneShape {
            kind,
            op: Op::Difference,
        });
        self
    }
}

/// Scene file payload: a window plus the shape list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneFile {
    pub window: Window,
    pub shapes: Vec<SceneShape>,
}

impl SceneFile {
    pub fn scene(&self) -> Scene {
        Scene {
            shapes: self.shapes.clone(),
        }
    }
}

/// Rasterized closed set: boolean mask over a window grid, row-major with
/// index `j * nx + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    pub window: Window,
    nx: usize,
    ny: usize,
    pub mask: Vec<bool>,
}

impl GridSet {
    pub fn empty(window: Window) -> Result<Self> {
        window.validate()?;
        let (nx, ny) = (window.nx(), window.ny());
        Ok(GridSet {
            window,
            nx,
            ny,
            mask: vec![false; nx * ny],
        })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn at(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.nx + i]
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        self.window.center(i, j)
    }

    pub fn marked_count(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    /// Iterate marked cells in raster order (row j ascending, then column i).
    pub fn iter_marked(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let nx = self.nx;
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(move |(idx, _)| (idx % nx, idx / nx))
    }

    /// True iff the point's cell exists and is marked.
    pub fn contains_point(&self, p: Point) -> bool {
        match self.window.cell_of(p) {
            Some((i, j)) => self.at(i, j),
            None => false,
        }
    }

    pub fn same_grid(&self, other: &GridSet) -> bool {
        self.window == other.window && self.nx == other.nx && self.ny == other.ny
    }

    pub fn union_with(&self, other: &GridSet) -> Result<GridSet> {
        if !self.same_grid(other) {
            return Err(Error::Domain("grid union requires identical windows".into()));
        }
        let mask = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(&a, &b)| a || b)
            .collect();
        Ok(GridSet {
            window: self.window,
            nx: self.nx,
            ny: self.ny,
            mask,
        })
    }

    pub fn intersect_with(&self, other: &GridSet) -> Result<GridSet> {
        if !self.same_grid(other) {
            return Err(Error::Domain(
                "grid intersection requires identical windows".into(),
            ));
        }
        let mask = self
            .mask
            .iter()
            .zip(&other.mask)
            .map(|(&a, &b)| a && b)
            .collect();
        Ok(GridSet {
            window: self.window,
            nx: self.nx,
            ny: self.ny,
            mask,
        })
    }

    pub fn is_subset_of(&self, other: &GridSet) -> bool {
        self.same_grid(other)
            && self
                .mask
                .iter()
                .zip(&other.mask)
                .all(|(&a, &b)| !a || b)
    }

    pub fn inverted(&self) -> GridSet {
        GridSet {
            window: self.window,
            nx: self.nx,
            ny: self.ny,
            mask: self.mask.iter().map(|&m| !m).collect(),
        }
    }

    /// Build from a per-cell predicate on cell centers.
    pub fn from_fn(window: Window, f: impl Fn(Point) -> bool) -> Result<GridSet> {
        let mut set = GridSet::empty(window)?;
        for j in 0..set.ny {
            for i in 0..set.nx {
                if f(set.center(i, j)) {
                    set.mask[j * set.nx + i] = true;
                }
            }
        }
        Ok(set)
    }
}

/// Rasterize a scene: a cell is marked iff its center lies in the scene's
/// point set after applying the shape list in order.
pub fn rasterize(scene: &Scene, window: Window) -> Result<GridSet> {
    window.validate()?;
    scene.validate()?;
    for s in &scene.shapes {
        if let Some(t) = s.kind.thin_thickness() {
            if t < 2.0 * window.h {
                return Err(Error::Resolution(format!(
                    "thin shape thickness {t} is below 2h = {}; it cannot be rasterized faithfully",
                    2.0 * window.h
                )));
            }
        }
    }
    let mut set = GridSet::empty(window)?;
    for shape in &scene.shapes {
        for j in 0..set.ny {
            for i in 0..set.nx {
                let idx = j * set.nx + i;
                match shape.op {
                    Op::Union => {
                        if !set.mask[idx] && shape.kind.contains(set.center(i, j)) {
                            set.mask[idx] = true;
                        }
                    }
                    Op::Difference => {
                        if set.mask[idx] && shape.kind.contains(set.center(i, j)) {
                            set.mask[idx] = false;
                        }
                    }
                }
            }
        }
    }
    Ok(set)
}

/// Morphological dilation: a cell is marked iff its center lies within
/// `radius` (Euclidean, closed) of some marked cell center.
pub fn dilate(set: &GridSet, radius: f64) -> Result<GridSet> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(Error::Domain("dilation radius must be finite and >= 0".into()));
    }
    if radius == 0.0 {
        return Ok(set.clone());
    }
    // Exact integer squared distances to the nearest marked center.
    let sq = squared_cell_distances(&set.inverted());
    let limit = (radius / set.window.h) * (radius / set.window.h) + 1e-9;
    let mask = sq.iter().map(|&d| d <= limit).collect();
    Ok(GridSet {
        window: set.window,
        nx: set.nx,
        ny: set.ny,
        mask,
    })
}

/// Per-cell Euclidean distances to the complement.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub window: Window,
    nx: usize,
    ny: usize,
    pub vals: Vec<f64>,
}

impl DistanceField {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.vals[j * self.nx + i]
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }
}

/// Exact Euclidean distance transform: for each cell, the distance from its
/// center to the nearest unmarked cell center (zero on unmarked cells, plus
/// infinity when the grid has no unmarked cell). Exact for the cell-center
/// metric; the two-pass squared-distance computation stays in integers.
pub fn distance_transform(set: &GridSet) -> DistanceField {
    let sq = squared_cell_distances(set);
    let h = set.window.h;
    let vals = sq
        .iter()
        .map(|&d| if d.is_finite() { h * d.sqrt() } else { f64::INFINITY })
        .collect();
    DistanceField {
        window: set.window,
        nx: set.nx,
        ny: set.ny,
        vals,
    }
}

/// Squared distances, in cell units, from each cell to the nearest unmarked
/// cell. Two passes: per-column nearest along the column, then a lower
/// envelope of parabolas along each row. All intermediate values are exact
/// integers below 2^53.
fn squared_cell_distances(set: &GridSet) -> Vec<f64> {
    let (nx, ny) = (set.nx, set.ny);
    let inf = f64::INFINITY;

    // Vertical pass: distance in cells to the nearest unmarked cell in the
    // same column.
    let mut col = vec![inf; nx * ny];
    for i in 0..nx {
        let mut last: Option<usize> = None;
        for j in 0..ny {
            if !set.mask[j * nx + i] {
                col[j * nx + i] = 0.0;
                last = Some(j);
            } else if let Some(js) = last {
                col[j * nx + i] = (j - js) as f64;
            }
        }
        last = None;
        for j in (0..ny).rev() {
            if !set.mask[j * nx + i] {
                last = Some(j);
            } else if let Some(js) = last {
                let d = (js - j) as f64;
                let idx = j * nx + i;
                if d < col[idx] {
                    col[idx] = d;
                }
            }
        }
    }

    // Horizontal pass: lower envelope of parabolas i -> (i - i')^2 + col^2.
    let mut out = vec![inf; nx * ny];
    let mut v = vec![0usize; nx];
    let mut zbuf = vec![0.0f64; nx + 1];
    let mut g = vec![inf; nx];
    for j in 0..ny {
        for i in 0..nx {
            let c = col[j * nx + i];
            g[i] = if c.is_finite() { c * c } else { inf };
        }
        let mut k = 0usize;
        let mut started = false;
        for i in 0..nx {
            if !g[i].is_finite() {
                continue;
            }
            let q = i as f64;
            if !started {
                v[0] = i;
                zbuf[0] = -inf;
                zbuf[1] = inf;
                started = true;
                continue;
            }
            loop {
                let p = v[k] as f64;
                let s = ((g[i] + q * q) - (g[v[k]] + p * p)) / (2.0 * q - 2.0 * p);
                if s <= zbuf[k] {
                    if k == 0 {
                        v[0] = i;
                        zbuf[0] = -inf;
                        zbuf[1] = inf;
                        break;
                    }
                    k -= 1;
                } else {
                    k += 1;
                    v[k] = i;
                    zbuf[k] = s;
                    zbuf[k + 1] = inf;
                    break;
                }
            }
        }
        if !started {
            continue; // no unmarked cell reaches this row
        }
        let mut k = 0usize;
        for i in 0..nx {
            let q = i as f64;
            while zbuf[k + 1] < q {
                k += 1;
            }
            let p = v[k] as f64;
            out[j * nx + i] = (q - p) * (q - p) + g[v[k]];
        }
    }
    out
}

/// Nearest marked cell of `domain` to cell `(i, j)`, searched within
/// `max_cells` Chebyshev rings; ties broken lexicographically (row, then
/// column). Returns `None` when no marked cell lies in range.
pub fn nearest_marked_within(
    domain: &GridSet,
    i: usize,
    j: usize,
    max_cells: usize,
) -> Option<(usize, usize)> {
    let (nx, ny) = (domain.nx(), domain.ny());
    let mut best: Option<(f64, usize, usize)> = None;
    for r in 0..=max_cells {
        if let Some((d, _, _)) = best {
            // Cells in ring r are at least (r-1) cells away; stop once the
            // current best cannot be beaten.
            if d < ((r as f64) - 1.0).max(0.0) {
                break;
            }
        }
        let j0 = j.saturating_sub(r);
        let j1 = (j + r).min(ny - 1);
        let i0 = i.saturating_sub(r);
        let i1 = (i + r).min(nx - 1);
        for jj in j0..=j1 {
            for ii in i0..=i1 {
                let on_ring = jj == j0 || jj == j1 || ii == i0 || ii == i1;
                if r > 0 && !on_ring {
                    continue;
                }
                if !domain.at(ii, jj) {
                    continue;
                }
                let di = ii as f64 - i as f64;
                let dj = jj as f64 - j as f64;
                let d = (di * di + dj * dj).sqrt();
                let better = match best {
                    None => true,
                    Some((bd, bj, bi)) => {
                        d < bd - 1e-12
                            || ((d - bd).abs() <= 1e-12 && (jj, ii) < (bj, bi))
                    }
                };
                if better {
                    best = Some((d, jj, ii));
                }
            }
        }
    }
    best.map(|(_, bj, bi)| (bi, bj))
}
