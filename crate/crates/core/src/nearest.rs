//! Nearest-neighbour lookups and grid deduplication for planar point sets.

use std::collections::BTreeMap;

use num_complex::Complex64;

/// Grid spacing used to deduplicate period values.
pub const DEDUP_GRID: f64 = 1e-6;

fn grid_key(z: Complex64, spacing: f64) -> (i64, i64) {
    ((z.re / spacing).round() as i64, (z.im / spacing).round() as i64)
}

/// Deduplicates values that round to the same grid cell. The first value in
/// input order is kept for each cell; output is ordered by cell key.
pub fn dedup_grid(values: impl IntoIterator<Item = Complex64>, spacing: f64) -> Vec<Complex64> {
    let mut seen = BTreeMap::new();
    for z in values {
        seen.entry(grid_key(z, spacing)).or_insert(z);
    }
    seen.into_values().collect()
}

fn lex_less(a: Complex64, b: Complex64) -> bool {
    (a.re, a.im) < (b.re, b.im)
}

/// Uniform bucket grid over a fixed point set.
pub struct PointIndex {
    points: Vec<Complex64>,
    origin: Complex64,
    cell: f64,
    nx: usize,
    ny: usize,
    starts: Vec<usize>,
    order: Vec<usize>,
}

impl PointIndex {
    pub fn new(points: Vec<Complex64>) -> Self {
        let (mut lo, mut hi) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        if let Some(&first) = points.first() {
            lo = first;
            hi = first;
        }
        for z in &points {
            lo.re = lo.re.min(z.re);
            lo.im = lo.im.min(z.im);
            hi.re = hi.re.max(z.re);
            hi.im = hi.im.max(z.im);
        }
        let side = (points.len() as f64).sqrt().ceil().max(1.0) as usize;
        let extent = (hi.re - lo.re).max(hi.im - lo.im);
        let cell = if extent > 0.0 { extent / side as f64 } else { 1.0 };
        let nx = (((hi.re - lo.re) / cell) as usize + 1).min(side + 1);
        let ny = (((hi.im - lo.im) / cell) as usize + 1).min(side + 1);

        let mut index = Self {
            points,
            origin: lo,
            cell,
            nx,
            ny,
            starts: Vec::new(),
            order: Vec::new(),
        };
        let cells: Vec<usize> = index.points.iter().map(|&z| index.cell_of(z)).collect();
        let mut counts = vec![0usize; nx * ny + 1];
        for &c in &cells {
            counts[c + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut order = vec![0usize; cells.len()];
        for (i, &c) in cells.iter().enumerate() {
            order[fill[c]] = i;
            fill[c] += 1;
        }
        index.starts = counts;
        index.order = order;
        index
    }

    fn coords(&self, z: Complex64) -> (usize, usize) {
        let fx = ((z.re - self.origin.re) / self.cell).floor();
        let fy = ((z.im - self.origin.im) / self.cell).floor();
        let cx = fx.clamp(0.0, (self.nx - 1) as f64) as usize;
        let cy = fy.clamp(0.0, (self.ny - 1) as f64) as usize;
        (cx, cy)
    }

    fn cell_of(&self, z: Complex64) -> usize {
        let (cx, cy) = self.coords(z);
        cy * self.nx + cx
    }

    fn bucket(&self, cx: usize, cy: usize) -> &[usize] {
        let c = cy * self.nx + cx;
        &self.order[self.starts[c]..self.starts[c + 1]]
    }

    /// Closest stored point to `z`; equal distances resolve to the
    /// lexicographically smallest `(re, im)`.
    pub fn nearest(&self, z: Complex64) -> Option<(Complex64, f64)> {
        if self.points.is_empty() {
            return None;
        }
        let (cx, cy) = self.coords(z);
        let mut best: Option<(Complex64, f64)> = None;
        let max_ring = self.nx.max(self.ny);
        for ring in 0..=max_ring {
            if let Some((_, d)) = best {
                // every point outside ring-1 sits at least (ring-1)*cell away
                // from the projection of z onto the grid box
                if ring >= 1 && d < (ring - 1) as f64 * self.cell {
                    break;
                }
            }
            let x0 = cx as i64 - ring as i64;
            let x1 = cx as i64 + ring as i64;
            let y0 = cy as i64 - ring as i64;
            let y1 = cy as i64 + ring as i64;
            for gy in y0..=y1 {
                if gy < 0 || gy >= self.ny as i64 {
                    continue;
                }
                let on_edge_row = gy == y0 || gy == y1;
                let mut gx = x0;
                while gx <= x1 {
                    if gx >= 0 && gx < self.nx as i64 {
                        for &i in self.bucket(gx as usize, gy as usize) {
                            let p = self.points[i];
                            let d = (p - z).norm();
                            let better = match best {
                                None => true,
                                Some((bp, bd)) => d < bd || (d == bd && lex_less(p, bp)),
                            };
                            if better {
                                best = Some((p, d));
                            }
                        }
                    }
                    // interior rows only visit the two ring columns
                    gx = if on_edge_row || gx == x1 { gx + 1 } else { x1 };
                }
            }
        }
        best
    }
}

/// `max_{a in from} min_{b in to} |a - b|`, or 0 when `from` is empty.
pub fn directed_hausdorff(from: &[Complex64], to: &PointIndex) -> f64 {
    use rayon::prelude::*;
    from.par_iter()
        .map(|&a| to.nearest(a).map_or(f64::INFINITY, |(_, d)| d))
        .reduce(|| 0.0, f64::max)
}
