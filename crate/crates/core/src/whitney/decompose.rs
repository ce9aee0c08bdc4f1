//! Greedy dyadic Whitney decomposition of a grid domain.

use std::f64::consts::SQRT_2;
use std::path::Path;

use crate::domain::{sci, GridDomain, Point};
use crate::error::Result;

/// A closed dyadic square `[lo, lo + edge]²` of generation `generation` below the root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitneyCube {
    pub generation: u32,
    pub ix: u64,
    pub iy: u64,
    pub edge: f64,
    pub lo: Point,
    pub center: Point,
    /// `d(Q, ∂Ω)`
    pub d_boundary: f64,
    /// Accepted below grid scale without the size test.
    pub subgrid: bool,
}

impl WhitneyCube {
    pub fn diam(&self) -> f64 {
        SQRT_2 * self.edge
    }

    pub fn hi(&self) -> Point {
        [self.lo[0] + self.edge, self.lo[1] + self.edge]
    }
}

/// Node-index rectangle helper: counts interior nodes in closed dyadic squares
/// with exact integer arithmetic.
struct NodeCounter {
    /// cells of the root square per side, in grid spacings
    root_cells: u64,
    nx: usize,
    ny: usize,
    prefix: Vec<u32>,
}

impl NodeCounter {
    fn new(dom: &GridDomain, root_cells: u64) -> Self {
        let [cx, cy] = dom.cells();
        let (nx, ny) = (cx + 1, cy + 1);
        let mut prefix = vec![0u32; (nx + 1) * (ny + 1)];
        for j in 0..ny {
            for i in 0..nx {
                let inside = dom.interior_at(i as i64, j as i64).is_some() as u32;
                prefix[(j + 1) * (nx + 1) + i + 1] = inside
                    + prefix[j * (nx + 1) + i + 1]
                    + prefix[(j + 1) * (nx + 1) + i]
                    - prefix[j * (nx + 1) + i];
            }
        }
        Self {
            root_cells,
            nx,
            ny,
            prefix,
        }
    }

    /// Closed range of node indices covered by `[k, k+1]·root/2^g` along one axis.
    fn span(&self, generation: u32, k: u64, limit: usize) -> Option<(usize, usize)> {
        let scale = 1u64 << generation;
        let lo = (k * self.root_cells).div_ceil(scale);
        let hi = ((k + 1) * self.root_cells) / scale;
        let hi = hi.min(limit as u64 - 1);
        (lo <= hi).then_some((lo as usize, hi as usize))
    }

    fn count(&self, generation: u32, ix: u64, iy: u64) -> u32 {
        let (Some((i0, i1)), Some((j0, j1))) = (
            self.span(generation, ix, self.nx),
            self.span(generation, iy, self.ny),
        ) else {
            return 0;
        };
        let w = self.nx + 1;
        self.prefix[(j1 + 1) * w + i1 + 1] + self.prefix[j0 * w + i0]
            - self.prefix[j0 * w + i1 + 1]
            - self.prefix[(j1 + 1) * w + i0]
    }
}

/// Family of closed dyadic squares with disjoint interiors covering every interior node.
#[derive(Debug, Clone)]
pub struct WhitneyDecomposition {
    cubes: Vec<WhitneyCube>,
    root_lo: Point,
    root_scale: f64,
    root_cells: u64,
    subgrid_edge: f64,
}

struct Builder<'a> {
    dom: &'a GridDomain,
    counter: NodeCounter,
    root_lo: Point,
    root_scale: f64,
    subgrid_edge: f64,
    cubes: Vec<WhitneyCube>,
}

impl Builder<'_> {
    fn cube(&self, generation: u32, ix: u64, iy: u64) -> WhitneyCube {
        let edge = self.root_scale * 0.5f64.powi(generation as i32);
        let lo = [
            self.root_lo[0] + ix as f64 * edge,
            self.root_lo[1] + iy as f64 * edge,
        ];
        let hi = [lo[0] + edge, lo[1] + edge];
        WhitneyCube {
            generation,
            ix,
            iy,
            edge,
            lo,
            center: [lo[0] + 0.5 * edge, lo[1] + 0.5 * edge],
            d_boundary: self.dom.box_distance(lo, hi),
            subgrid: false,
        }
    }

    fn visit(&mut self, generation: u32, ix: u64, iy: u64) {
        if self.counter.count(generation, ix, iy) == 0 {
            return;
        }
        let mut q = self.cube(generation, ix, iy);
        if q.diam() <= q.d_boundary {
            self.cubes.push(q);
            return;
        }
        if q.edge < self.subgrid_edge {
            q.subgrid = true;
            self.cubes.push(q);
            return;
        }
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            self.visit(generation + 1, 2 * ix + dx, 2 * iy + dy);
        }
    }
}

/// Greedy top-down decomposition: a square meeting interior nodes is accepted
/// as soon as `diam(Q) ≤ d(Q, ∂Ω)`, otherwise split in four; squares with edge
/// below `2h` are accepted as subgrid squares instead of being split further.
pub fn whitney_decompose(dom: &GridDomain) -> WhitneyDecomposition {
    let [cx, cy] = dom.cells();
    let root_cells = cx.max(cy) as u64;
    let root_scale = root_cells as f64 * dom.spacing();
    let mut b = Builder {
        dom,
        counter: NodeCounter::new(dom, root_cells),
        root_lo: dom.origin(),
        root_scale,
        subgrid_edge: 2.0 * dom.spacing(),
        cubes: Vec::new(),
    };
    b.visit(0, 0, 0);
    WhitneyDecomposition {
        cubes: b.cubes,
        root_lo: b.root_lo,
        root_scale,
        root_cells,
        subgrid_edge: b.subgrid_edge,
    }
}

/// Outcome of the exhaustive property check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct WhitneyReport {
    pub cubes: usize,
    pub subgrid_cubes: usize,
    pub uncovered_nodes: usize,
    pub interior_overlaps: usize,
    /// non-subgrid cubes checked against `diam ≤ d(Q,∂Ω) ≤ 4 diam`
    pub size_checked: usize,
    pub size_violations: usize,
    /// touching pairs of non-subgrid cubes
    pub touching_pairs: usize,
    pub neighbor_violations: usize,
    pub maximality_violations: usize,
}

impl WhitneyReport {
    pub fn all_pass(&self) -> bool {
        self.uncovered_nodes == 0
            && self.interior_overlaps == 0
            && self.size_violations == 0
            && self.neighbor_violations == 0
            && self.maximality_violations == 0
    }
}

impl WhitneyDecomposition {
    pub fn cubes(&self) -> &[WhitneyCube] {
        &self.cubes
    }

    pub fn len(&self) -> usize {
        self.cubes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cubes.is_empty()
    }

    /// Edge of the root square, `L`.
    pub fn root_scale(&self) -> f64 {
        self.root_scale
    }

    pub fn subgrid_edge(&self) -> f64 {
        self.subgrid_edge
    }

    fn finest_generation(&self) -> u32 {
        self.cubes.iter().map(|q| q.generation).max().unwrap_or(0)
    }

    /// Integer footprint `[x0, x1] × [y0, y1]` in units of the finest generation.
    fn footprint(q: &WhitneyCube, finest: u32) -> [u64; 4] {
        let s = 1u64 << (finest - q.generation);
        [q.ix * s, (q.ix + 1) * s, q.iy * s, (q.iy + 1) * s]
    }

    /// Checks covering, disjointness, the size bracket, the neighbor ratio and
    /// maximality over every cube and every touching pair.
    pub fn check(&self, dom: &GridDomain) -> WhitneyReport {
        let mut rep = WhitneyReport {
            cubes: self.cubes.len(),
            subgrid_cubes: self.cubes.iter().filter(|q| q.subgrid).count(),
            ..Default::default()
        };

        let mut covered = vec![false; dom.len()];
        let counter_root = self.root_cells;
        for q in &self.cubes {
            let scale = 1u64 << q.generation;
            for (k, &[i, j]) in dom.node_indices().iter().enumerate() {
                if covered[k] {
                    continue;
                }
                let (i, j) = (i as u64 * scale, j as u64 * scale);
                if q.ix * counter_root <= i
                    && i <= (q.ix + 1) * counter_root
                    && q.iy * counter_root <= j
                    && j <= (q.iy + 1) * counter_root
                {
                    covered[k] = true;
                }
            }
        }
        rep.uncovered_nodes = covered.iter().filter(|c| !**c).count();

        for q in self.cubes.iter().filter(|q| !q.subgrid) {
            rep.size_checked += 1;
            if !(q.diam() <= q.d_boundary && q.d_boundary <= 4.0 * q.diam()) {
                rep.size_violations += 1;
            }
        }

        for q in &self.cubes {
            if q.generation == 0 {
                continue;
            }
            let edge = 2.0 * q.edge;
            let lo = [
                self.root_lo[0] + (q.ix / 2) as f64 * edge,
                self.root_lo[1] + (q.iy / 2) as f64 * edge,
            ];
            let parent_d = dom.box_distance(lo, [lo[0] + edge, lo[1] + edge]);
            if SQRT_2 * edge <= parent_d {
                rep.maximality_violations += 1;
            }
        }

        let finest = self.finest_generation();
        let mut order: Vec<usize> = (0..self.cubes.len()).collect();
        let fp: Vec<[u64; 4]> = self
            .cubes
            .iter()
            .map(|q| Self::footprint(q, finest))
            .collect();
        order.sort_by_key(|&a| fp[a][0]);
        for (pos, &a) in order.iter().enumerate() {
            for &b in &order[pos + 1..] {
                if fp[b][0] > fp[a][1] {
                    break;
                }
                let (fa, fb) = (fp[a], fp[b]);
                let touch_y = fa[2] <= fb[3] && fb[2] <= fa[3];
                if !touch_y {
                    continue;
                }
                let open_x = fa[0] < fb[1] && fb[0] < fa[1];
                let open_y = fa[2] < fb[3] && fb[2] < fa[3];
                if open_x && open_y {
                    rep.interior_overlaps += 1;
                }
                let (qa, qb) = (&self.cubes[a], &self.cubes[b]);
                if qa.subgrid || qb.subgrid {
                    continue;
                }
                rep.touching_pairs += 1;
                let ratio = qb.diam() / qa.diam();
                if !(0.25..=4.0).contains(&ratio) {
                    rep.neighbor_violations += 1;
                }
            }
        }
        rep
    }

    /// Writes `generation,ix,iy,edge,center_x,center_y,d_to_boundary,subgrid_flag`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record([
            "generation",
            "ix",
            "iy",
            "edge",
            "center_x",
            "center_y",
            "d_to_boundary",
            "subgrid_flag",
        ])?;
        for q in &self.cubes {
            w.write_record([
                q.generation.to_string(),
                q.ix.to_string(),
                q.iy.to_string(),
                sci(q.edge),
                sci(q.center[0]),
                sci(q.center[1]),
                sci(q.d_boundary),
                (q.subgrid as u8).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{build_domain, DomainSpec};

    #[test]
    fn unit_square_properties_hold() {
        let dom = build_domain(&DomainSpec::UnitSquare, 64).unwrap();
        let w = whitney_decompose(&dom);
        let rep = w.check(&dom);
        assert!(rep.all_pass(), "{rep:?}");
        assert!(rep.touching_pairs > 0);
        assert!(rep.size_checked > rep.subgrid_cubes);
    }

    #[test]
    fn interior_cube_parent_fails_the_size_test() {
        let dom = build_domain(&DomainSpec::UnitSquare, 32).unwrap();
        let w = whitney_decompose(&dom);
        let big = w
            .cubes()
            .iter()
            .filter(|q| !q.subgrid)
            .max_by(|a, b| a.edge.total_cmp(&b.edge))
            .unwrap();
        // the square's largest Whitney cubes sit at generation 3 (edge 1/8)
        assert_eq!(big.edge, 0.125);
        assert!(big.diam() <= big.d_boundary);
        assert_eq!(w.check(&dom).maximality_violations, 0);
    }

    #[test]
    fn node_counter_uses_closed_squares() {
        let dom = build_domain(&DomainSpec::UnitSquare, 8).unwrap();
        let c = NodeCounter::new(&dom, 8);
        // root contains all 7x7 interior nodes
        assert_eq!(c.count(0, 0, 0), 49);
        // [0, 0.5]² holds nodes 1..=4 on each axis, [0.5, 1]² nodes 4..=7
        assert_eq!(c.count(1, 0, 0), 16);
        assert_eq!(c.count(1, 1, 1), 16);
        assert_eq!(c.count(2, 0, 0), 4);
        assert_eq!(c.count(3, 7, 7), 1);
    }
}
