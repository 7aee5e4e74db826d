//! Filled hypocycloids `H_r` as polygonized regions, with a winding-number
//! membership test and the period-containment check built on it.

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::laurent::{e, prime_power_orbit, sample_torus, LaurentMap, PrimePowerOrbit};
use crate::arith::is_prime;
use crate::supercharacter::{superclasses, PeriodEvaluator};
use crate::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 4096;
pub const MIN_SAMPLES: usize = 1024;

/// Point of the `r`-cusped hypocycloid at parameter `theta` (in turns).
pub fn boundary_point(r: u64, theta: f64) -> Complex64 {
    let rf = r as f64;
    e(theta) * (rf - 1.0) + e((1.0 - rf) * theta)
}

#[derive(Clone, Debug)]
pub struct HypocycloidRegion {
    cusps: u64,
    /// closed polyline; the last vertex connects back to the first
    boundary: Vec<Complex64>,
}

impl HypocycloidRegion {
    pub fn new(cusps: u64, samples: usize) -> Result<Self> {
        if cusps < 2 {
            return Err(Error::InvalidArgument(format!("hypocycloid needs r >= 2, got {cusps}")));
        }
        if samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "hypocycloid needs at least {MIN_SAMPLES} boundary samples, got {samples}"
            )));
        }
        let boundary = (0..samples)
            .map(|k| boundary_point(cusps, k as f64 / samples as f64))
            .collect();
        Ok(Self { cusps, boundary })
    }

    pub fn cusps(&self) -> u64 {
        self.cusps
    }

    pub fn boundary(&self) -> &[Complex64] {
        &self.boundary
    }

    fn edges(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.boundary
            .iter()
            .copied()
            .zip(self.boundary.iter().copied().cycle().skip(1))
    }

    /// Winding number of the boundary polyline around `z`.
    pub fn winding_number(&self, z: Complex64) -> i64 {
        let mut wn = 0i64;
        for (a, b) in self.edges() {
            let cross = (b.re - a.re) * (z.im - a.im) - (z.re - a.re) * (b.im - a.im);
            if a.im <= z.im {
                if b.im > z.im && cross > 0.0 {
                    wn += 1;
                }
            } else if b.im <= z.im && cross < 0.0 {
                wn -= 1;
            }
        }
        wn
    }

    pub fn distance_to_boundary(&self, z: Complex64) -> f64 {
        self.edges()
            .map(|(a, b)| segment_distance(z, a, b))
            .fold(f64::INFINITY, f64::min)
    }

    /// Inside (nonzero winding) or within `eps` of the boundary polyline.
    pub fn contains(&self, z: Complex64, eps: f64) -> bool {
        // every vertex has modulus <= r
        if z.norm() > self.cusps as f64 + eps {
            return false;
        }
        self.winding_number(z) != 0 || self.distance_to_boundary(z) < eps
    }

    /// 0 for points the polyline encloses, otherwise the distance to it.
    pub fn outside_distance(&self, z: Complex64) -> f64 {
        if self.winding_number(z) != 0 {
            0.0
        } else {
            self.distance_to_boundary(z)
        }
    }
}

pub fn hypocycloid(r: u64, samples: usize) -> Result<HypocycloidRegion> {
    HypocycloidRegion::new(r, samples)
}

pub fn in_hypocycloid(region: &HypocycloidRegion, z: Complex64, eps: f64) -> bool {
    region.contains(z, eps)
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (((z - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (z - (a + ab * t)).norm()
}

#[derive(Clone, Debug, Serialize)]
pub struct HypocycloidReport {
    #[serde(flatten)]
    pub orbit: PrimePowerOrbit,
    pub boundary_samples: usize,
    pub superclasses: usize,
    pub outside: usize,
    /// largest distance from a period value to the region (0 if all inside)
    pub max_defect: f64,
    /// largest distance from `g_r(z, ..., z)` to the boundary polyline
    pub diagonal_defect: f64,
    pub diagonal_samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub passed: bool,
    pub elapsed_s: f64,
}

/// Checks that every period value of `<omega>` mod `q` lies in `H_d`, and
/// that the diagonal of `g_d` runs along the boundary. Requires the
/// containment hypotheses and `d` prime.
pub fn verify_hypocycloid(
    q: u64,
    omega: i64,
    eps: f64,
    diagonal_samples: usize,
    seed: u64,
) -> Result<HypocycloidReport> {
    let start = Instant::now();
    let (orbit, spec) = prime_power_orbit(q, omega)?;
    if !is_prime(orbit.d) {
        return Err(Error::HypothesisViolated(format!(
            "order {} of {} is not prime",
            orbit.d, orbit.omega
        )));
    }
    let region = HypocycloidRegion::new(orbit.d, DEFAULT_SAMPLES)?;
    let eval = PeriodEvaluator::new(spec.clone());
    let classes = superclasses(&spec, 1);
    let defects: Vec<f64> = classes
        .par_iter()
        .map(|c| {
            let v = eval.eval(c.rep);
            if region.contains(v, eps) {
                0.0
            } else {
                region.outside_distance(v).max(eps)
            }
        })
        .collect();
    let outside = defects.iter().filter(|&&d| d > 0.0).count();
    let max_defect = defects.iter().copied().fold(0.0, f64::max);

    let g = LaurentMap::new(orbit.d)?;
    let diagonal_defect = sample_torus(1, diagonal_samples, seed)
        .par_iter()
        .map(|z| {
            let diag = vec![z.coords()[0]; g.dim()];
            region.distance_to_boundary(g.eval_raw(&diag))
        })
        .reduce(|| 0.0, f64::max);

    Ok(HypocycloidReport {
        orbit,
        boundary_samples: DEFAULT_SAMPLES,
        superclasses: classes.len(),
        outside,
        max_defect,
        diagonal_defect,
        diagonal_samples,
        seed,
        tolerance: eps,
        passed: outside == 0 && diagonal_defect < eps,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}
