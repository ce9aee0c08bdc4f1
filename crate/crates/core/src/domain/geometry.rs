//! Exact planar geometry behind the domain catalog: membership, point-to-boundary
//! distance and cube-to-boundary distance.

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        let (ex, ey) = (self.b[0] - self.a[0], self.b[1] - self.a[1]);
        let (wx, wy) = (p[0] - self.a[0], p[1] - self.a[1]);
        let len2 = ex * ex + ey * ey;
        let t = if len2 > 0.0 {
            ((wx * ex + wy * ey) / len2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let (dx, dy) = (wx - t * ex, wy - t * ey);
        (dx * dx + dy * dy).sqrt()
    }

    /// Liang-Barsky clipping against the closed box `[lo, hi]`.
    pub fn intersects_box(&self, lo: Point, hi: Point) -> bool {
        let d = [self.b[0] - self.a[0], self.b[1] - self.a[1]];
        let (mut t0, mut t1) = (0.0_f64, 1.0_f64);
        for axis in 0..2 {
            let checks = [
                (-d[axis], self.a[axis] - lo[axis]),
                (d[axis], hi[axis] - self.a[axis]),
            ];
            for (p, q) in checks {
                if p == 0.0 {
                    if q < 0.0 {
                        return false;
                    }
                } else {
                    let r = q / p;
                    if p < 0.0 {
                        t0 = t0.max(r);
                    } else {
                        t1 = t1.min(r);
                    }
                    if t0 > t1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Euclidean distance between the segment and the closed box; zero on contact.
    pub fn distance_to_box(&self, lo: Point, hi: Point) -> f64 {
        if self.intersects_box(lo, hi) {
            return 0.0;
        }
        let corners = [lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]];
        let from_corners = corners
            .iter()
            .map(|&c| self.distance_to_point(c))
            .fold(f64::INFINITY, f64::min);
        from_corners
            .min(point_box_distance(self.a, lo, hi))
            .min(point_box_distance(self.b, lo, hi))
    }

    fn proper_cross(&self, other: &Segment) -> bool {
        fn orient(p: Point, q: Point, r: Point) -> f64 {
            (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
        }
        let d1 = orient(other.a, other.b, self.a);
        let d2 = orient(other.a, other.b, self.b);
        let d3 = orient(self.a, self.b, other.a);
        let d4 = orient(self.a, self.b, other.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        // collinear touching also breaks simplicity
        let on = |p: Point, s: &Segment| {
            s.distance_to_point(p) == 0.0
        };
        on(self.a, other) || on(self.b, other) || on(other.a, self) || on(other.b, self)
    }
}

pub fn point_box_distance(p: Point, lo: Point, hi: Point) -> f64 {
    let dx = (lo[0] - p[0]).max(0.0).max(p[0] - hi[0]);
    let dy = (lo[1] - p[1]).max(0.0).max(p[1] - hi[1]);
    (dx * dx + dy * dy).sqrt()
}

/// Resolved geometry of a catalog domain.
#[derive(Debug, Clone)]
pub(crate) enum Geometry {
    UnitSquare,
    Disk { radius: f64 },
    /// Closed simple polygon; boundary distance is exact.
    Polygon { segments: Vec<Segment> },
    /// `{0 < x < 1, |y| < x^gamma}` with analytic membership and a sampled boundary polyline.
    Cusp { gamma: f64, segments: Vec<Segment> },
}

impl Geometry {
    pub fn polygon(vertices: &[Point]) -> Self {
        Geometry::Polygon {
            segments: closed_polyline(vertices),
        }
    }

    /// Boundary polyline of the cusp; consecutive samples are at most `step` apart.
    pub fn cusp(gamma: f64, step: f64) -> Self {
        let n = ((1.0 + gamma * gamma).sqrt() / step).ceil().max(1.0) as usize;
        let mut vertices = Vec::with_capacity(2 * n + 1);
        // upper branch from the tip to (1, 1), then the lower branch back
        for k in 0..=n {
            let x = k as f64 / n as f64;
            vertices.push([x, x.powf(gamma)]);
        }
        for k in (1..=n).rev() {
            let x = k as f64 / n as f64;
            vertices.push([x, -x.powf(gamma)]);
        }
        Geometry::Cusp {
            gamma,
            segments: closed_polyline(&vertices),
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            Geometry::UnitSquare => p[0] > 0.0 && p[0] < 1.0 && p[1] > 0.0 && p[1] < 1.0,
            Geometry::Disk { radius } => p[0].hypot(p[1]) < *radius,
            Geometry::Polygon { segments } => {
                crossing_parity(segments, p) && min_segment_distance(segments, p) > 0.0
            }
            Geometry::Cusp { gamma, .. } => {
                p[0] > 0.0 && p[0] < 1.0 && p[1].abs() < p[0].powf(*gamma)
            }
        }
    }

    /// Distance from an interior point to the boundary.
    pub fn distance(&self, p: Point) -> f64 {
        match self {
            Geometry::UnitSquare => p[0].min(1.0 - p[0]).min(p[1]).min(1.0 - p[1]),
            Geometry::Disk { radius } => radius - p[0].hypot(p[1]),
            Geometry::Polygon { segments } | Geometry::Cusp { segments, .. } => {
                min_segment_distance(segments, p)
            }
        }
    }

    /// `d(Q, ∂Ω)` for a closed axis-aligned box that meets the domain; zero if it
    /// touches or crosses the boundary.
    pub fn box_distance(&self, lo: Point, hi: Point) -> f64 {
        match self {
            Geometry::UnitSquare => lo[0].min(1.0 - hi[0]).min(lo[1]).min(1.0 - hi[1]).max(0.0),
            Geometry::Disk { radius } => {
                let fx = lo[0].abs().max(hi[0].abs());
                let fy = lo[1].abs().max(hi[1].abs());
                (radius - fx.hypot(fy)).max(0.0)
            }
            Geometry::Polygon { segments } | Geometry::Cusp { segments, .. } => segments
                .iter()
                .map(|s| s.distance_to_box(lo, hi))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn segments(&self) -> Option<&[Segment]> {
        match self {
            Geometry::Polygon { segments } | Geometry::Cusp { segments, .. } => Some(segments),
            _ => None,
        }
    }
}

fn closed_polyline(vertices: &[Point]) -> Vec<Segment> {
    (0..vertices.len())
        .map(|i| Segment::new(vertices[i], vertices[(i + 1) % vertices.len()]))
        .collect()
}

fn min_segment_distance(segments: &[Segment], p: Point) -> f64 {
    segments
        .iter()
        .map(|s| s.distance_to_point(p))
        .fold(f64::INFINITY, f64::min)
}

fn crossing_parity(segments: &[Segment], p: Point) -> bool {
    let mut inside = false;
    for s in segments {
        let (a, b) = (s.a, s.b);
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// True when no two non-adjacent edges of the closed polygon meet.
pub(crate) fn is_simple_polygon(vertices: &[Point]) -> bool {
    let n = vertices.len();
    if n < 3 {
        return false;
    }
    let segs = closed_polyline(vertices);
    for i in 0..n {
        if segs[i].a == segs[i].b {
            return false;
        }
        for j in (i + 1)..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                continue;
            }
            if segs[i].proper_cross(&segs[j]) {
                return false;
            }
        }
    }
    true
}
