//! The Laurent maps `g_d` and `h_{rs}` on the unit torus, and the checks
//! that tie them to period values.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, is_prime, mul_mod, pow_mod, OrbitSpec};
use crate::cyclotomic::reduction_matrix;
use crate::nearest::{directed_hausdorff, PointIndex};
use crate::supercharacter::{superclasses, PeriodEvaluator};
use crate::{Error, Result};

/// A point of the unit torus `T^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusPoint(Vec<Complex64>);

impl TorusPoint {
    pub const UNIT_TOLERANCE: f64 = 1e-12;

    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if let Some(bad) = coords.iter().find(|z| (z.norm() - 1.0).abs() >= Self::UNIT_TOLERANCE) {
            return Err(Error::InvalidArgument(format!("{bad} is not on the unit circle")));
        }
        Ok(Self(coords))
    }

    /// `(e(t_1), ..., e(t_m))`
    pub fn from_angles(turns: &[f64]) -> Self {
        Self(turns.iter().map(|&t| e(t)).collect())
    }

    pub fn ones(dim: usize) -> Self {
        Self(vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// `e(t) = exp(2 pi i t)`
pub fn e(turns: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * turns)
}

/// Draws `count` torus points with uniform angles from a ChaCha8 stream
/// seeded by `seed`.
pub fn sample_torus(dim: usize, count: usize, seed: u64) -> Vec<TorusPoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| TorusPoint((0..dim).map(|_| e(rng.random::<f64>())).collect()))
        .collect()
}

/// `z^k` for `|z| = 1`; negative powers go through the conjugate.
fn unit_pow(z: Complex64, k: i64) -> Complex64 {
    let mut base = if k < 0 { z.conj() } else { z };
    let mut exp = k.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

/// `g_d(z) = sum_{k<d} prod_j z_{j+1}^{c_jk}`.
#[derive(Clone, Debug)]
pub struct LaurentMap {
    d: u64,
    dim: usize,
    /// per term, the nonzero `(j, c_jk)`
    monomials: Vec<Vec<(usize, i64)>>,
}

impl LaurentMap {
    pub fn new(d: u64) -> Result<Self> {
        let m = reduction_matrix(d)?;
        let monomials = m
            .columns()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(j, &c)| (j, c))
                    .collect()
            })
            .collect();
        Ok(Self {
            d,
            dim: m.rows(),
            monomials,
        })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// `phi(d)`
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Evaluates on raw coordinates; callers guarantee `z.len() == dim()`.
    pub fn eval_raw(&self, z: &[Complex64]) -> Complex64 {
        debug_assert_eq!(z.len(), self.dim);
        self.monomials
            .iter()
            .map(|mono| {
                mono.iter()
                    .fold(Complex64::new(1.0, 0.0), |acc, &(j, c)| acc * unit_pow(z[j], c))
            })
            .sum()
    }

    pub fn eval(&self, z: &TorusPoint) -> Result<Complex64> {
        if z.dim() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "g_{} takes {} coordinates, got {}",
                self.d,
                self.dim,
                z.dim()
            )));
        }
        Ok(self.eval_raw(z.coords()))
    }
}

pub fn eval_g(d: u64, z: &TorusPoint) -> Result<Complex64> {
    LaurentMap::new(d)?.eval(z)
}

/// Index range of the first double sum in `h_{rs}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HIndexing {
    /// `j = 0..=s-2`; gives `h(1, ..., 1) = rs`
    Corrected,
    /// `j = 1..=s-2`, as usually printed; gives `rs - (r-1)` at the ones point
    Printed,
}

fn distinct_odd_primes(r: u64, s: u64) -> Result<()> {
    if r == s || r % 2 == 0 || s % 2 == 0 || !is_prime(r) || !is_prime(s) {
        return Err(Error::HypothesisViolated(format!(
            "h needs two distinct odd primes, got r={r}, s={s}"
        )));
    }
    Ok(())
}

/// `h_{rs}` on a grid `z[i][j]`, `i < r-1`, `j < s-1`.
pub fn eval_h(r: u64, s: u64, grid: &[Vec<Complex64>]) -> Result<Complex64> {
    eval_h_with(r, s, grid, HIndexing::Corrected)
}

pub fn eval_h_with(r: u64, s: u64, grid: &[Vec<Complex64>], indexing: HIndexing) -> Result<Complex64> {
    distinct_odd_primes(r, s)?;
    let (rows, cols) = ((r - 1) as usize, (s - 1) as usize);
    if grid.len() != rows || grid.iter().any(|row| row.len() != cols) {
        return Err(Error::InvalidArgument(format!("h_{{{r},{s}}} takes a {rows}x{cols} grid")));
    }
    let j0 = match indexing {
        HIndexing::Corrected => 0,
        HIndexing::Printed => 1,
    };
    let one = Complex64::new(1.0, 0.0);
    let linear: Complex64 = grid.iter().flat_map(|row| row[j0..].iter()).sum();
    let row_inv: Complex64 = grid
        .iter()
        .map(|row| row.iter().fold(one, |acc, z| acc * z.conj()))
        .sum();
    let col_inv: Complex64 = (0..cols)
        .map(|j| grid.iter().fold(one, |acc, row| acc * row[j].conj()))
        .sum();
    let all: Complex64 = grid.iter().flatten().fold(one, |acc, z| acc * z);
    Ok(linear + row_inv + col_inv + all)
}

#[derive(Clone, Debug, Serialize)]
pub struct HImageReport {
    pub r: u64,
    pub s: u64,
    pub samples: usize,
    pub seed: u64,
    /// sampled `h` values farthest from any sampled `g` value
    pub h_to_g: f64,
    pub g_to_h: f64,
    pub tolerance: f64,
    /// sampled near-containment only, not a proof of image equality
    pub heuristic: bool,
    pub passed: bool,
    /// `h` and `h_printed` at the all-ones point
    pub h_at_ones: f64,
    pub h_printed_at_ones: f64,
}

/// Sampled, bidirectional near-containment between the images of `h_{rs}`
/// and `g_{rs}`, with tolerance `0.05 * rs`.
pub fn h_image_heuristic(r: u64, s: u64, samples: usize, seed: u64) -> Result<HImageReport> {
    distinct_odd_primes(r, s)?;
    let d = r * s;
    let g = LaurentMap::new(d)?;
    let (rows, cols) = ((r - 1) as usize, (s - 1) as usize);

    let g_pts: Vec<Complex64> = sample_torus(g.dim(), samples, seed)
        .par_iter()
        .map(|z| g.eval_raw(z.coords()))
        .collect();
    let h_pts: Vec<Complex64> = sample_torus(rows * cols, samples, seed ^ 0x9E37_79B9_7F4A_7C15)
        .par_iter()
        .map(|z| {
            let grid: Vec<Vec<Complex64>> = z.coords().chunks(cols).map(<[_]>::to_vec).collect();
            eval_h(r, s, &grid).expect("grid shape")
        })
        .collect();

    let ones = vec![vec![Complex64::new(1.0, 0.0); cols]; rows];
    let tolerance = 0.05 * d as f64;
    let h_to_g = directed_hausdorff(&h_pts, &PointIndex::new(g_pts.clone()));
    let g_to_h = directed_hausdorff(&g_pts, &PointIndex::new(h_pts));
    Ok(HImageReport {
        r,
        s,
        samples,
        seed,
        h_to_g,
        g_to_h,
        tolerance,
        heuristic: true,
        passed: h_to_g < tolerance && g_to_h < tolerance,
        h_at_ones: eval_h(r, s, &ones)?.re,
        h_printed_at_ones: eval_h_with(r, s, &ones, HIndexing::Printed)?.re,
    })
}

/// Prime-power hypothesis data for `sigma_X` over `Z/qZ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PrimePowerOrbit {
    pub q: u64,
    pub p: u64,
    pub a: u32,
    pub omega: u64,
    pub d: u64,
}

/// Checks `q = p^a` with `p` odd and `d = ord(omega) | p - 1`.
pub fn prime_power_orbit(q: u64, omega: i64) -> Result<(PrimePowerOrbit, OrbitSpec)> {
    let (p, a) = factorize(q)
        .as_prime_power()
        .filter(|&(p, _)| p % 2 == 1)
        .ok_or_else(|| Error::HypothesisViolated(format!("{q} is not a power of an odd prime")))?;
    let spec = OrbitSpec::new(q, omega)?;
    let d = spec.order();
    if (p - 1) % d != 0 {
        return Err(Error::HypothesisViolated(format!(
            "order {d} of {omega} does not divide p - 1 = {}",
            p - 1
        )));
    }
    let info = PrimePowerOrbit {
        q,
        p,
        a,
        omega: spec.omega(),
        d,
    };
    Ok((info, spec))
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    #[serde(flatten)]
    pub orbit: PrimePowerOrbit,
    pub superclasses: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub elapsed_s: f64,
}

/// For every superclass representative `y`, compares `sigma_X(y)` with
/// `g_d(e(y/q), e(omega*y/q), ..., e(omega^{phi(d)-1}*y/q))`.
pub fn verify_containment(q: u64, omega: i64, tolerance: f64) -> Result<ContainmentReport> {
    let start = Instant::now();
    let (orbit, spec) = prime_power_orbit(q, omega)?;
    let g = LaurentMap::new(orbit.d)?;
    let eval = PeriodEvaluator::new(spec.clone());
    let classes = superclasses(&spec, 1);
    let table = eval.table();
    let basis: Vec<u64> = spec.orbit()[..g.dim()].to_vec();

    let max_defect = classes
        .par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); basis.len()],
            |z, c| {
                for (slot, &w) in z.iter_mut().zip(&basis) {
                    *slot = table.get(mul_mod(w, c.rep, q));
                }
                (eval.eval(c.rep) - g.eval_raw(z)).norm()
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(ContainmentReport {
        orbit,
        superclasses: classes.len(),
        max_defect,
        tolerance,
        passed: max_defect < tolerance,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

/// Shapley-Folkman-Starr distance bound `2 sqrt(2) r sin(pi/r)`.
pub fn sfs_radius(r: u64) -> f64 {
    let r = r as f64;
    2.0 * std::f64::consts::SQRT_2 * r * (std::f64::consts::PI / r).sin()
}

#[derive(Clone, Debug, Serialize)]
pub struct MinkowskiReport {
    pub r: u64,
    pub b: u32,
    pub samples: usize,
    pub seed: u64,
    pub max_defect: f64,
    pub tolerance: f64,
    pub sfs_radius: f64,
    pub passed: bool,
}

/// Checks `g_{r^b}(z) = sum_{j=1}^{r^{b-1}} g_r(z_j, z_{j+m}, ..., z_{j+(r-2)m})`
/// with `m = r^{b-1}` on seeded random torus points.
pub fn minkowski_decomposition_check(
    b: u32,
    r: u64,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> Result<MinkowskiReport> {
    if r % 2 == 0 || !is_prime(r) {
        return Err(Error::HypothesisViolated(format!("{r} is not an odd prime")));
    }
    if b == 0 {
        return Err(Error::InvalidArgument("b must be positive".into()));
    }
    let m = r.checked_pow(b - 1).ok_or(Error::InvalidArgument("r^b too large".into()))?;
    let full = LaurentMap::new(m * r)?;
    let part = LaurentMap::new(r)?;
    let stride = m as usize;
    let max_defect = sample_torus(full.dim(), samples, seed)
        .par_iter()
        .map_init(
            || vec![Complex64::new(0.0, 0.0); part.dim()],
            |buf, z| {
                let z = z.coords();
                let split: Complex64 = (0..stride)
                    .map(|j| {
                        for (l, slot) in buf.iter_mut().enumerate() {
                            *slot = z[j + l * stride];
                        }
                        part.eval_raw(buf)
                    })
                    .sum();
                (full.eval_raw(z) - split).norm()
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(MinkowskiReport {
        r,
        b,
        samples,
        seed,
        max_defect,
        tolerance,
        sfs_radius: sfs_radius(r),
        passed: max_defect < tolerance,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Gauss17 {
    pub lhs: f64,
    pub rhs: f64,
    pub defect: f64,
}

/// `16 cos(2 pi / 17)` against its nested-radical expression.
pub fn gauss17_check() -> Gauss17 {
    let s17 = 17f64.sqrt();
    let a = (34.0 - 2.0 * s17).sqrt();
    let b = (34.0 + 2.0 * s17).sqrt();
    let rhs = -1.0 + s17 + a + 2.0 * (17.0 + 3.0 * s17 - a - 2.0 * b).sqrt();
    let lhs = 16.0 * (std::f64::consts::TAU / 17.0).cos();
    Gauss17 {
        lhs,
        rhs,
        defect: (lhs - rhs).abs(),
    }
}

/// `e(omega^j * y / q)` for `j < dim`, the torus point a period lives over.
pub fn period_torus_point(spec: &OrbitSpec, y: u64, dim: usize) -> TorusPoint {
    let q = spec.modulus();
    let mut w = 1u64;
    let mut coords = Vec::with_capacity(dim);
    for _ in 0..dim {
        coords.push(e(mul_mod(w, y, q) as f64 / q as f64));
        w = mul_mod(w, spec.omega(), q);
    }
    debug_assert_eq!(w, pow_mod(spec.omega(), dim as u64, q));
    TorusPoint(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::supercharacter::eval_supercharacter;

    #[test]
    fn ones_point_gives_d() {
        for d in [2u64, 3, 4, 5, 6, 9, 12, 15, 30] {
            let g = LaurentMap::new(d).unwrap();
            assert_eq!(g.eval(&TorusPoint::ones(g.dim())).unwrap(), Complex64::new(d as f64, 0.0));
        }
    }

    #[test]
    fn g3_cusp_and_closed_form() {
        let z = TorusPoint::from_angles(&[1.0 / 3.0, 1.0 / 3.0]);
        let v = eval_g(3, &z).unwrap();
        assert!((v - e(1.0 / 3.0) * 3.0).norm() < 1e-12);

        for z in sample_torus(2, 50, 3) {
            let [a, b] = [z.coords()[0], z.coords()[1]];
            let closed = a + b + 1.0 / (a * b);
            assert!((eval_g(3, &z).unwrap() - closed).norm() < 1e-12);
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        assert!(eval_g(5, &TorusPoint::ones(3)).is_err());
        assert!(TorusPoint::new(vec![Complex64::new(1.1, 0.0)]).is_err());
    }

    #[test]
    fn unit_pow_matches_powi() {
        let z = e(0.1234);
        for k in -7..=7 {
            assert!((unit_pow(z, k) - z.powi(k as i32)).norm() < 1e-13);
        }
    }

    #[test]
    fn h_examples() {
        let (r, s) = (3u64, 5u64);
        let ones = vec![vec![Complex64::new(1.0, 0.0); 4]; 2];
        assert_eq!(eval_h(r, s, &ones).unwrap(), Complex64::new(15.0, 0.0));
        assert_eq!(eval_h_with(r, s, &ones, HIndexing::Printed).unwrap(), Complex64::new(13.0, 0.0));

        // z_00 = -1: linear sum 8-2=6, row products -1 and 1, column
        // products -1,1,1,1, full product -1
        let mut grid = ones.clone();
        grid[0][0] = Complex64::new(-1.0, 0.0);
        assert!((eval_h(r, s, &grid).unwrap() - Complex64::new(6.0 + 0.0 + 2.0 - 1.0, 0.0)).norm() < 1e-12);

        let grid: Vec<Vec<Complex64>> = sample_torus(4, 2, 8).into_iter().map(|p| p.coords().to_vec()).collect();
        let conj: Vec<Vec<Complex64>> = grid.iter().map(|r| r.iter().map(|z| z.conj()).collect()).collect();
        assert!((eval_h(r, s, &conj).unwrap() - eval_h(r, s, &grid).unwrap().conj()).norm() < 1e-12);

        assert!(eval_h(3, 3, &ones).is_err());
        assert!(eval_h(3, 5, &ones[..1]).is_err());
    }

    #[test]
    fn containment_small() {
        let rep = verify_containment(7, 2, 1e-12).unwrap();
        assert_eq!(rep.orbit.d, 3);
        assert!(rep.passed, "{rep:?}");

        let spec = OrbitSpec::new(7, 2).unwrap();
        let z = period_torus_point(&spec, 1, 2);
        let g = eval_g(3, &z).unwrap();
        let want = e(1.0 / 7.0) + e(2.0 / 7.0) + e(4.0 / 7.0);
        assert!((g - want).norm() < 1e-12);
        assert!((eval_supercharacter(&spec, 1) - want).norm() < 1e-12);
        assert_eq!(eval_g(3, &period_torus_point(&spec, 0, 2)).unwrap(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn containment_hypotheses() {
        assert!(matches!(verify_containment(35, 9, 1e-9), Err(Error::HypothesisViolated(_))));
        assert!(matches!(verify_containment(27, 2, 1e-9), Err(Error::HypothesisViolated(_))));
        // 3 has order 6 mod 7, 6 | 6 fine; 2 mod 49 has order 21, 21 does not divide 6
        assert!(verify_containment(7, 3, 1e-9).unwrap().passed);
        assert!(matches!(verify_containment(49, 2, 1e-9), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn minkowski_small() {
        let rep = minkowski_decomposition_check(2, 3, 200, 1, 1e-12).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert!((rep.sfs_radius - 3.0 * 6f64.sqrt()).abs() < 1e-12);
        let rep = minkowski_decomposition_check(3, 3, 20, 1, 1e-9).unwrap();
        assert!(rep.passed);
        assert!(minkowski_decomposition_check(2, 4, 20, 1, 1e-9).is_err());
    }

    #[test]
    fn gauss17() {
        let g = gauss17_check();
        assert!(g.defect < 1e-12);
        // 16 cos(2 pi/17) = 14.919555670469693 (independent evaluation)
        assert!((g.lhs - 14.919_555_670_469_693).abs() < 1e-12);
        assert!((g.rhs - 14.919_555_670_469_693).abs() < 1e-12);
    }

    #[test]
    fn sampling_is_seeded() {
        assert_eq!(sample_torus(3, 5, 42), sample_torus(3, 5, 42));
        assert_ne!(sample_torus(3, 5, 42), sample_torus(3, 5, 43));
    }
}
