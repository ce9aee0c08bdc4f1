//! Planar domains on uniform node grids and the distance-to-boundary field.
//!
//! A domain of resolution `N` is covered by a uniform grid of spacing
//! `h = (longest side of the bounding box) / N` whose nodes sit at
//! `origin + (i·h, j·h)`. Because `h` halves exactly when `N` doubles, every
//! node of resolution `N` is also a node (with bit-identical coordinates) of
//! resolution `2N`.

mod geometry;

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
pub use geometry::{point_box_distance, Point, Segment};
pub(crate) use geometry::Geometry;

/// Catalog of supported bounded planar domains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    /// `(0,1)²`
    UnitSquare,
    /// Open disk centered at the origin.
    Disk { radius: f64 },
    /// `(0,1)² \ [1/2,1)²`
    LShape,
    /// `{0 < x₁ < 1, |x₂| < x₁^γ}` with `γ > 1`, which has an outward cusp at the origin.
    PowerCusp { gamma: f64 },
    /// Simple closed polygon, vertices in order.
    Polygon { vertices: Vec<Point> },
}

/// A domain spec together with the grid resolution, as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainConfig {
    #[serde(flatten)]
    pub spec: DomainSpec,
    pub resolution: usize,
}

const L_SHAPE: [Point; 6] = [
    [0.0, 0.0],
    [1.0, 0.0],
    [1.0, 0.5],
    [0.5, 0.5],
    [0.5, 1.0],
    [0.0, 1.0],
];

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Disk { radius } if !(*radius > 0.0 && radius.is_finite()) => {
                Err(invalid("radius", format!("must be positive, got {radius}")))
            }
            DomainSpec::PowerCusp { gamma } if !(*gamma > 1.0 && gamma.is_finite()) => {
                Err(invalid("gamma", format!("must exceed 1, got {gamma}")))
            }
            DomainSpec::Polygon { vertices } => {
                if vertices.iter().flatten().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidDomain("non-finite polygon vertex".into()));
                }
                if !geometry::is_simple_polygon(vertices) {
                    return Err(Error::InvalidDomain(
                        "polygon must be simple with at least 3 vertices".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Axis-aligned bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            DomainSpec::UnitSquare | DomainSpec::LShape => ([0.0, 0.0], [1.0, 1.0]),
            DomainSpec::Disk { radius } => ([-radius, -radius], [*radius, *radius]),
            DomainSpec::PowerCusp { .. } => ([0.0, -1.0], [1.0, 1.0]),
            DomainSpec::Polygon { vertices } => {
                let mut lo = [f64::INFINITY; 2];
                let mut hi = [f64::NEG_INFINITY; 2];
                for v in vertices {
                    for a in 0..2 {
                        lo[a] = lo[a].min(v[a]);
                        hi[a] = hi[a].max(v[a]);
                    }
                }
                (lo, hi)
            }
        }
    }

    /// Short stable identifier used in CSV output.
    pub fn label(&self) -> String {
        match self {
            DomainSpec::UnitSquare => "unit_square".into(),
            DomainSpec::Disk { radius } => format!("disk({radius})"),
            DomainSpec::LShape => "l_shape".into(),
            DomainSpec::PowerCusp { gamma } => format!("power_cusp({gamma})"),
            DomainSpec::Polygon { vertices } => format!("polygon({})", vertices.len()),
        }
    }

    fn geometry(&self, spacing: f64) -> Geometry {
        match self {
            DomainSpec::UnitSquare => Geometry::UnitSquare,
            DomainSpec::Disk { radius } => Geometry::Disk { radius: *radius },
            DomainSpec::LShape => Geometry::polygon(&L_SHAPE),
            DomainSpec::PowerCusp { gamma } => Geometry::cusp(*gamma, spacing / 4.0),
            DomainSpec::Polygon { vertices } => Geometry::polygon(vertices),
        }
    }
}

/// Sentinel in the full-grid lookup for nodes outside the domain.
const EXTERIOR: u32 = u32::MAX;

/// A domain discretized on a uniform node grid.
#[derive(Debug, Clone)]
pub struct GridDomain {
    spec: DomainSpec,
    resolution: usize,
    spacing: f64,
    origin: Point,
    /// Number of grid cells along each axis; nodes run over `0..=cells[a]`.
    cells: [usize; 2],
    /// Full-grid node → interior index, row-major with `i` fastest.
    lookup: Vec<u32>,
    interior: Vec<[u32; 2]>,
    geometry: Geometry,
}

/// Builds the grid of a domain; `resolution` is the number of cells along the
/// longer side of the bounding box and must be at least 8.
pub fn build_domain(spec: &DomainSpec, resolution: usize) -> Result<GridDomain> {
    if resolution < 8 {
        return Err(invalid(
            "resolution",
            format!("must be at least 8, got {resolution}"),
        ));
    }
    GridDomain::build(spec, resolution)
}

impl GridDomain {
    pub(crate) fn build(spec: &DomainSpec, resolution: usize) -> Result<Self> {
        spec.validate()?;
        if resolution == 0 {
            return Err(invalid("resolution", "must be positive"));
        }
        let (lo, hi) = spec.bounding_box();
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        let spacing = extent / resolution as f64;
        let cells = [0usize, 1].map(|a| {
            let c = ((hi[a] - lo[a]) / spacing).round() as usize;
            // keep the whole box inside the grid
            if lo[a] + c as f64 * spacing < hi[a] {
                c + 1
            } else {
                c
            }
        });
        let geometry = spec.geometry(spacing);
        let stride = cells[0] + 1;
        let mut lookup = vec![EXTERIOR; stride * (cells[1] + 1)];
        let mut interior = Vec::new();
        for j in 0..=cells[1] {
            for i in 0..=cells[0] {
                let p = [lo[0] + i as f64 * spacing, lo[1] + j as f64 * spacing];
                if geometry.contains(p) {
                    lookup[j * stride + i] = interior.len() as u32;
                    interior.push([i as u32, j as u32]);
                }
            }
        }
        if interior.is_empty() {
            return Err(Error::EmptyInterior { resolution });
        }
        Ok(Self {
            spec: spec.clone(),
            resolution,
            spacing,
            origin: lo,
            cells,
            lookup,
            interior,
            geometry,
        })
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Grid spacing `h`.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn cells(&self) -> [usize; 2] {
        self.cells
    }

    /// Quadrature weight of one node, `h²`.
    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn len(&self) -> usize {
        self.interior.len()
    }

    pub fn is_empty(&self) -> bool {
        self.interior.is_empty()
    }

    /// Grid indices of interior node `k`.
    pub fn node_index(&self, k: usize) -> [u32; 2] {
        self.interior[k]
    }

    pub fn node_indices(&self) -> &[[u32; 2]] {
        &self.interior
    }

    /// Physical coordinates of interior node `k`.
    pub fn node(&self, k: usize) -> Point {
        let [i, j] = self.interior[k];
        self.grid_point(i as i64, j as i64)
    }

    /// Physical coordinates of grid node `(i, j)`; the single source of node positions.
    pub fn grid_point(&self, i: i64, j: i64) -> Point {
        [
            self.origin[0] + i as f64 * self.spacing,
            self.origin[1] + j as f64 * self.spacing,
        ]
    }

    /// Interior index of grid node `(i, j)`, if it lies inside the domain.
    pub fn interior_at(&self, i: i64, j: i64) -> Option<usize> {
        if i < 0 || j < 0 || i as usize > self.cells[0] || j as usize > self.cells[1] {
            return None;
        }
        let v = self.lookup[j as usize * (self.cells[0] + 1) + i as usize];
        (v != EXTERIOR).then_some(v as usize)
    }

    /// Analytic membership test.
    pub fn contains(&self, p: Point) -> bool {
        self.geometry.contains(p)
    }

    /// Distance from an interior point to the boundary (exact for the analytic
    /// shapes and polygons, polyline-sampled for the cusp).
    pub fn distance_at(&self, p: Point) -> f64 {
        self.geometry.distance(p)
    }

    /// `d(Q, ∂Ω)` for a closed box meeting the domain.
    pub fn box_distance(&self, lo: Point, hi: Point) -> f64 {
        self.geometry.box_distance(lo, hi)
    }

    /// Boundary polyline, for domains whose boundary is represented by segments.
    pub fn boundary_segments(&self) -> Option<&[Segment]> {
        self.geometry.segments()
    }
}

/// Distance to the boundary at every interior node.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceField {
    values: Vec<f64>,
}

impl DistanceField {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `d^γ` per node.
    pub fn powf(&self, gamma: f64) -> Vec<f64> {
        if gamma == 0.0 {
            return vec![1.0; self.values.len()];
        }
        self.values.iter().map(|d| d.powf(gamma)).collect()
    }

    /// Writes `x,y,d` rows with 17 significant digits.
    pub fn write_csv(&self, dom: &GridDomain, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["x", "y", "d"])?;
        for (k, d) in self.values.iter().enumerate() {
            let p = dom.node(k);
            w.write_record([sci(p[0]), sci(p[1]), sci(*d)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Formats a float with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn distance_to_boundary(dom: &GridDomain) -> DistanceField {
    let values = (0..dom.len())
        .map(|k| dom.distance_at(dom.node(k)))
        .collect();
    DistanceField { values }
}

/// `δ(x, y) = min(d(x), d(y))`.
pub fn delta_weight(dx: f64, dy: f64) -> Result<f64> {
    if !(dx > 0.0 && dy > 0.0) {
        return Err(invalid(
            "distance",
            format!("both distances must be positive, got ({dx}, {dy})"),
        ));
    }
    Ok(dx.min(dy))
}

/// Writes a one-line description of a grid domain.
pub fn write_summary(dom: &GridDomain, out: &mut impl Write) -> Result<()> {
    writeln!(
        out,
        "domain={} resolution={} spacing={} interior_nodes={}",
        dom.spec().label(),
        dom.resolution(),
        sci(dom.spacing()),
        dom.len()
    )?;
    Ok(())
}
