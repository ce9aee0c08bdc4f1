//! λ-refinement of a Whitney decomposition and its 9/8-expanded cover.

use super::decompose::WhitneyDecomposition;
use crate::domain::{DistanceField, GridDomain, Point};
use crate::error::{invalid, Result};

/// Expansion factor of the cover.
pub const EXPANSION: f64 = 9.0 / 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedCell {
    /// index of the parent cube in the decomposition
    pub parent: usize,
    pub parent_edge: f64,
    pub center: Point,
    pub edge: f64,
    pub subgrid: bool,
}

impl RefinedCell {
    pub fn diam(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.edge
    }

    /// Half-width of the expanded cube.
    pub fn expanded_half(&self) -> f64 {
        0.5 * EXPANSION * self.edge
    }

    fn in_open_expanded(&self, p: Point) -> bool {
        let r = self.expanded_half();
        (p[0] - self.center[0]).abs() < r && (p[1] - self.center[1]).abs() < r
    }
}

#[derive(Debug, Clone)]
pub struct RefinedDecomposition {
    lambda: f64,
    level: u32,
    cells: Vec<RefinedCell>,
}

impl RefinedDecomposition {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Number of dyadic halvings applied to every cube.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn cells(&self) -> &[RefinedCell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cells violating `λℓ_Q/2 ≤ ℓ ≤ λℓ_Q`.
    pub fn bracket_violations(&self) -> usize {
        let lam = self.lambda;
        self.cells
            .iter()
            .filter(|c| !(0.5 * lam * c.parent_edge <= c.edge && c.edge <= lam * c.parent_edge))
            .count()
    }
}

/// Smallest `k` with `2^-k ≤ λ`.
pub fn refinement_level(lambda: f64) -> Result<u32> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(invalid("lambda", format!("must lie in (0,1], got {lambda}")));
    }
    let mut k = 0u32;
    while 0.5f64.powi(k as i32) > lambda {
        k += 1;
    }
    Ok(k)
}

pub fn refine_lambda(w: &WhitneyDecomposition, lambda: f64) -> Result<RefinedDecomposition> {
    let level = refinement_level(lambda)?;
    let splits = 1u64 << level;
    let mut cells = Vec::with_capacity(w.len() * (splits * splits) as usize);
    for (parent, q) in w.cubes().iter().enumerate() {
        let edge = q.edge * 0.5f64.powi(level as i32);
        for b in 0..splits {
            for a in 0..splits {
                cells.push(RefinedCell {
                    parent,
                    parent_edge: q.edge,
                    center: [
                        q.lo[0] + (a as f64 + 0.5) * edge,
                        q.lo[1] + (b as f64 + 0.5) * edge,
                    ],
                    edge,
                    subgrid: q.subgrid,
                });
            }
        }
    }
    Ok(RefinedDecomposition {
        lambda,
        level,
        cells,
    })
}

/// Uniform bucket grid over the bounding box listing the cells whose open
/// expanded cube meets each bucket, stored as flat offsets into one array.
#[derive(Debug, Clone)]
pub(crate) struct CellIndex {
    origin: Point,
    size: f64,
    nx: usize,
    ny: usize,
    offsets: Vec<u32>,
    entries: Vec<u32>,
}

/// Upper bound on buckets per axis.
const MAX_BUCKETS: usize = 2048;

impl CellIndex {
    fn new(dom: &GridDomain, cells: &[RefinedCell]) -> Self {
        let [cx, cy] = dom.cells();
        let h = dom.spacing();
        let extent = cx.max(cy) as f64 * h;
        let smallest = cells.iter().map(|c| c.edge).fold(2.0 * h, f64::min);
        let size = smallest.max(extent / MAX_BUCKETS as f64);
        let nx = (cx as f64 * h / size).ceil() as usize + 1;
        let ny = (cy as f64 * h / size).ceil() as usize + 1;
        let origin = dom.origin();
        let clamp = |v: f64, n: usize| (v.floor().max(0.0) as usize).min(n - 1);
        let ranges: Vec<[usize; 4]> = cells
            .iter()
            .map(|c| {
                let r = c.expanded_half();
                [
                    clamp((c.center[0] - r - origin[0]) / size, nx),
                    clamp((c.center[0] + r - origin[0]) / size, nx),
                    clamp((c.center[1] - r - origin[1]) / size, ny),
                    clamp((c.center[1] + r - origin[1]) / size, ny),
                ]
            })
            .collect();
        let mut counts = vec![0u32; nx * ny + 1];
        for &[i0, i1, j0, j1] in &ranges {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    counts[j * nx + i + 1] += 1;
                }
            }
        }
        for b in 1..counts.len() {
            counts[b] += counts[b - 1];
        }
        let mut fill = counts.clone();
        let mut entries = vec![0u32; counts[nx * ny] as usize];
        for (k, &[i0, i1, j0, j1]) in ranges.iter().enumerate() {
            for j in j0..=j1 {
                for i in i0..=i1 {
                    let slot = &mut fill[j * nx + i];
                    entries[*slot as usize] = k as u32;
                    *slot += 1;
                }
            }
        }
        Self {
            origin,
            size,
            nx,
            ny,
            offsets: counts,
            entries,
        }
    }

    /// Candidate cells for `p`; empty outside the indexed box.
    pub(crate) fn candidates(&self, p: Point) -> &[u32] {
        let fx = (p[0] - self.origin[0]) / self.size;
        let fy = (p[1] - self.origin[1]) / self.size;
        if !(fx >= 0.0 && fy >= 0.0) {
            return &[];
        }
        let (i, j) = (fx as usize, fy as usize);
        if i >= self.nx || j >= self.ny {
            return &[];
        }
        let b = j * self.nx + i;
        &self.entries[self.offsets[b] as usize..self.offsets[b + 1] as usize]
    }
}

/// The 9/8-expanded cells with per-node overlap counts and the distance
/// comparability check.
#[derive(Debug, Clone)]
pub struct ExpandedCover {
    refined: RefinedDecomposition,
    overlap: Vec<u32>,
    comparability_checked: usize,
    comparability_violations: usize,
    pub(crate) index: CellIndex,
}

pub fn expanded_cover(
    r: RefinedDecomposition,
    dom: &GridDomain,
    d: &DistanceField,
) -> Result<ExpandedCover> {
    crate::norms::check_len(dom.len(), d.len())?;
    let index = CellIndex::new(dom, r.cells());
    let lam = r.lambda();
    let mut overlap = vec![0u32; dom.len()];
    let (mut checked, mut violations) = (0, 0);
    for (k, o) in overlap.iter_mut().enumerate() {
        let x = dom.node(k);
        let dx = d.get(k);
        for &c in index.candidates(x) {
            let cell = &r.cells()[c as usize];
            if !cell.in_open_expanded(x) {
                continue;
            }
            *o += 1;
            if cell.subgrid {
                continue;
            }
            checked += 1;
            let scale = cell.diam() / lam;
            if !(0.75 * scale <= dx && dx <= 10.25 * scale) {
                violations += 1;
            }
        }
    }
    Ok(ExpandedCover {
        refined: r,
        overlap,
        comparability_checked: checked,
        comparability_violations: violations,
        index,
    })
}

impl ExpandedCover {
    pub fn refined(&self) -> &RefinedDecomposition {
        &self.refined
    }

    pub fn cells(&self) -> &[RefinedCell] {
        self.refined.cells()
    }

    pub fn overlap_counts(&self) -> &[u32] {
        &self.overlap
    }

    pub fn max_overlap(&self) -> u32 {
        self.overlap.iter().copied().max().unwrap_or(0)
    }

    pub fn uncovered_nodes(&self) -> usize {
        self.overlap.iter().filter(|&&o| o == 0).count()
    }

    /// `(checked, violations)` of `¾diam/λ ≤ d(x) ≤ 41/4·diam/λ` over covered
    /// (node, non-subgrid cell) incidences.
    pub fn comparability(&self) -> (usize, usize) {
        (self.comparability_checked, self.comparability_violations)
    }

    pub(crate) fn candidates(&self, p: Point) -> &[u32] {
        self.index.candidates(p)
    }
}
