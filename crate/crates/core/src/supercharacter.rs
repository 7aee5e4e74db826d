//! Cyclic supercharacters `sigma_X(y) = sum_{x in X} e(xy/n)` for the orbit
//! `X = <omega>*1`, their images with layer labels, and the dihedral-symmetry
//! and CRT product checks on those images.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{crt_split, gcd, mul_mod, mult_order, OrbitSpec};
use crate::nearest::{dedup_grid, directed_hausdorff, PointIndex, DEDUP_GRID};
use crate::{Error, Result};

/// `e(t/n)` for `t = 0..n`, one `sin_cos` per entry.
#[derive(Clone, Debug)]
pub struct RootTable {
    modulus: u64,
    roots: Vec<Complex64>,
}

impl RootTable {
    pub fn new(modulus: u64) -> Self {
        let n = modulus as f64;
        let roots = (0..modulus)
            .into_par_iter()
            .map(|t| {
                if t == 0 {
                    return Complex64::new(1.0, 0.0);
                }
                let (s, c) = (TAU * (t as f64 / n)).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        Self { modulus, roots }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `e(t/n)` with `t` already reduced.
    #[inline]
    pub fn get(&self, t: u64) -> Complex64 {
        self.roots[t as usize]
    }
}

/// Evaluates `sigma_X` through a shared root table.
#[derive(Clone, Debug)]
pub struct PeriodEvaluator {
    spec: OrbitSpec,
    table: RootTable,
}

impl PeriodEvaluator {
    pub fn new(spec: OrbitSpec) -> Self {
        let table = RootTable::new(spec.modulus());
        Self { spec, table }
    }

    pub fn spec(&self) -> &OrbitSpec {
        &self.spec
    }

    pub fn table(&self) -> &RootTable {
        &self.table
    }

    pub fn eval(&self, y: u64) -> Complex64 {
        let n = self.spec.modulus();
        let y = y % n;
        self.spec
            .orbit()
            .iter()
            .map(|&x| self.table.get(mul_mod(x, y, n)))
            .sum()
    }
}

/// Single evaluation of `sigma_X(y)`. Builds a fresh root table, so use
/// [`PeriodEvaluator`] for repeated calls.
pub fn eval_supercharacter(spec: &OrbitSpec, y: i64) -> Complex64 {
    let y = crate::arith::normalize(y, spec.modulus());
    PeriodEvaluator::new(spec.clone()).eval(y)
}

/// One `<omega>`-orbit of `Z/nZ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superclass {
    /// smallest member
    pub rep: u64,
    pub size: u64,
    /// sorted distinct `y mod c` over all members
    pub layers: Vec<u64>,
}

/// Partitions `Z/nZ` into `<omega>`-orbits, ordered by representative.
pub fn superclasses(spec: &OrbitSpec, layer_mod: u64) -> Vec<Superclass> {
    let n = spec.modulus();
    let w = spec.omega();
    let mut seen = vec![false; n as usize];
    let mut out = Vec::new();
    for y in 0..n {
        if seen[y as usize] {
            continue;
        }
        let mut layers = Vec::new();
        let mut size = 0;
        let mut x = y;
        loop {
            seen[x as usize] = true;
            size += 1;
            layers.push(x % layer_mod);
            x = mul_mod(x, w, n);
            if x == y {
                break;
            }
        }
        layers.sort_unstable();
        layers.dedup();
        out.push(Superclass { rep: y, size, layers });
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodPoint {
    /// superclass representative
    pub y: u64,
    /// `y mod c`
    pub layer: u64,
    /// every layer touched by the superclass
    pub layers: Vec<u64>,
    pub class_size: u64,
    #[serde(skip)]
    pub value: Complex64,
}

/// The image of `sigma_X`, one point per superclass.
#[derive(Clone, Debug)]
pub struct PeriodImage {
    pub spec: OrbitSpec,
    pub layer_mod: u64,
    pub points: Vec<PeriodPoint>,
    /// grid-deduplicated values, ordered by grid cell
    pub distinct: Vec<Complex64>,
}

impl PeriodImage {
    /// Every residue `y` in ascending order with its layer and value.
    pub fn residues(&self) -> Vec<(u64, u64, Complex64)> {
        let n = self.spec.modulus();
        let w = self.spec.omega();
        let mut out = Vec::with_capacity(n as usize);
        for p in &self.points {
            let mut x = p.y;
            for _ in 0..p.class_size {
                out.push((x, x % self.layer_mod, p.value));
                x = mul_mod(x, w, n);
            }
        }
        out.sort_unstable_by_key(|r| r.0);
        out
    }

    /// Number of points whose representative falls in each layer.
    pub fn layer_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.layer_mod as usize];
        for p in &self.points {
            counts[p.layer as usize] += 1;
        }
        counts
    }
}

pub fn check_layer_mod(c: u64, n: u64) -> Result<()> {
    if c == 1 || (c > 1 && c < n && n % c == 0) {
        Ok(())
    } else {
        Err(Error::InvalidLayerModulus { c, n })
    }
}

/// Evaluates `sigma_X` once per superclass and labels each point with its
/// layers modulo `layer_mod`.
pub fn image(spec: &OrbitSpec, layer_mod: u64) -> Result<PeriodImage> {
    check_layer_mod(layer_mod, spec.modulus())?;
    let eval = PeriodEvaluator::new(spec.clone());
    Ok(image_with(&eval, layer_mod))
}

pub(crate) fn image_with(eval: &PeriodEvaluator, layer_mod: u64) -> PeriodImage {
    let spec = eval.spec().clone();
    let classes = superclasses(&spec, layer_mod);
    let points: Vec<PeriodPoint> = classes
        .into_par_iter()
        .map(|c| PeriodPoint {
            y: c.rep,
            layer: c.rep % layer_mod,
            value: eval.eval(c.rep),
            layers: c.layers,
            class_size: c.size,
        })
        .collect();
    let distinct = dedup_grid(points.iter().map(|p| p.value), DEDUP_GRID);
    PeriodImage {
        spec,
        layer_mod,
        points,
        distinct,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub k: u64,
    pub max_conjugation_defect: f64,
    pub max_rotation_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Checks that the distinct values are closed (up to `tolerance`) under
/// conjugation and rotation by `e(1/k)` with `k = gcd(n, omega - 1)`.
pub fn verify_symmetry(img: &PeriodImage, tolerance: f64) -> SymmetryReport {
    let n = img.spec.modulus();
    let k = gcd(n, img.spec.omega() - 1);
    let rot = Complex64::from_polar(1.0, TAU / k as f64);
    let index = PointIndex::new(img.distinct.clone());
    let conj: Vec<Complex64> = img.distinct.iter().map(|z| z.conj()).collect();
    let rotated: Vec<Complex64> = img.distinct.iter().map(|&z| z * rot).collect();
    let max_conjugation_defect = directed_hausdorff(&conj, &index);
    let max_rotation_defect = directed_hausdorff(&rotated, &index);
    SymmetryReport {
        k,
        max_conjugation_defect,
        max_rotation_defect,
        tolerance,
        passed: max_conjugation_defect < tolerance && max_rotation_defect < tolerance,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MultiplicativityReport {
    pub m: u64,
    pub n: u64,
    pub omega: u64,
    pub omega_m: u64,
    pub omega_n: u64,
    pub order_m: u64,
    pub order_n: u64,
    pub full_count: usize,
    pub product_count: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn distinct_values(modulus: u64, omega: u64) -> Result<Vec<Complex64>> {
    if modulus == 1 {
        // Z/1Z has a single character, constant 1
        return Ok(vec![Complex64::new(1.0, 0.0)]);
    }
    let spec = OrbitSpec::new(modulus, omega as i64)?;
    Ok(image(&spec, 1)?.distinct)
}

/// Compares the image over `Z/mnZ` with the product set of the images over
/// `Z/mZ` and `Z/nZ` under the CRT split of `omega`.
pub fn verify_multiplicativity(m: u64, n: u64, omega: i64, tolerance: f64) -> Result<MultiplicativityReport> {
    let (omega_m, omega_n) = crt_split(omega, m, n)?;
    let mn = m * n;
    if mn < 2 {
        return Err(Error::InvalidModulus(mn));
    }
    let order_m = mult_order(omega_m as i64, m)?;
    let order_n = mult_order(omega_n as i64, n)?;
    if gcd(order_m, order_n) != 1 {
        return Err(Error::OrdersNotCoprime {
            m,
            n,
            order_m,
            order_n,
        });
    }
    let omega = crate::arith::normalize(omega, mn);
    let full = distinct_values(mn, omega)?;
    let left = distinct_values(m, omega_m)?;
    let right = distinct_values(n, omega_n)?;
    let product = dedup_grid(
        left.iter().flat_map(|&w| right.iter().map(move |&z| w * z)),
        DEDUP_GRID,
    );

    let full_index = PointIndex::new(full.clone());
    let product_index = PointIndex::new(product.clone());
    let max_defect = directed_hausdorff(&full, &product_index).max(directed_hausdorff(&product, &full_index));
    Ok(MultiplicativityReport {
        m,
        n,
        omega,
        omega_m,
        omega_n,
        order_m,
        order_n,
        full_count: full.len(),
        product_count: product.len(),
        max_defect,
        tolerance,
        passed: max_defect < tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Direct transcendental sum, independent of the root table.
    fn brute_sigma(n: u64, w: u64, y: u64) -> Complex64 {
        let mut x = 1u64;
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            let t = (x as u128 * y as u128 % n as u128) as f64 / n as f64;
            acc += Complex64::from_polar(1.0, TAU * t);
            x = x * w % n;
            if x == 1 {
                break;
            }
        }
        acc
    }

    #[test]
    fn golden_ratio_values() {
        let spec = OrbitSpec::new(5, 4).unwrap();
        assert_eq!(eval_supercharacter(&spec, 0), Complex64::new(2.0, 0.0));
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        assert!((eval_supercharacter(&spec, 1) - phi).norm() < 1e-12);
        assert!((eval_supercharacter(&spec, 2) + (5f64.sqrt() + 1.0) / 2.0).norm() < 1e-12);
        assert!((eval_supercharacter(&spec, -1) - phi).norm() < 1e-12);
    }

    #[test]
    fn image_examples() {
        let img = image(&OrbitSpec::new(5, 4).unwrap(), 1).unwrap();
        assert_eq!(img.distinct.len(), 3);

        let img = image(&OrbitSpec::new(7, 1).unwrap(), 1).unwrap();
        assert_eq!(img.distinct.len(), 7);
        for z in &img.distinct {
            assert!((z.norm() - 1.0).abs() < 1e-12);
            assert!((z.powu(7) - 1.0).norm() < 1e-12);
        }

        let img = image(&OrbitSpec::new(7, 2).unwrap(), 1).unwrap();
        let mut want: Vec<Complex64> = (0..7).map(|y| brute_sigma(7, 2, y)).collect();
        want = dedup_grid(want, DEDUP_GRID);
        assert_eq!(img.distinct.len(), 3);
        for z in &want {
            assert!(img.distinct.iter().any(|v| (v - z).norm() < 1e-12));
        }
        let s7 = 7f64.sqrt();
        for target in [Complex64::new(3.0, 0.0), Complex64::new(-0.5, s7 / 2.0), Complex64::new(-0.5, -s7 / 2.0)] {
            assert!(img.distinct.iter().any(|v| (v - target).norm() < 1e-12));
        }
    }

    #[test]
    fn invalid_layer_modulus() {
        let spec = OrbitSpec::new(15, 2).unwrap();
        assert!(matches!(image(&spec, 4), Err(Error::InvalidLayerModulus { .. })));
        assert!(matches!(image(&spec, 15), Err(Error::InvalidLayerModulus { .. })));
        assert!(image(&spec, 5).is_ok());
    }

    #[test]
    fn layers_partition_points() {
        let spec = OrbitSpec::new(105, 4).unwrap();
        let img = image(&spec, 7).unwrap();
        assert_eq!(img.layer_counts().iter().sum::<usize>(), img.points.len());
        for p in &img.points {
            assert_eq!(p.layer, p.y % 7);
            assert!(p.layers.contains(&p.layer));
        }
        let total: u64 = img.points.iter().map(|p| p.class_size).sum();
        assert_eq!(total, 105);
        let res = img.residues();
        assert_eq!(res.len(), 105);
        assert!(res.iter().enumerate().all(|(i, r)| r.0 == i as u64 && r.1 == r.0 % 7));
    }

    #[test]
    fn symmetry_small_cases() {
        let r = verify_symmetry(&image(&OrbitSpec::new(5, 4).unwrap(), 1).unwrap(), 1e-6);
        assert_eq!(r.k, 1);
        assert!(r.passed);

        // omega = 1: image is all n-th roots of unity, k = n
        let r = verify_symmetry(&image(&OrbitSpec::new(9, 1).unwrap(), 1).unwrap(), 1e-6);
        assert_eq!(r.k, 9);
        assert!(r.passed);
    }

    #[test]
    fn symmetry_detects_broken_set() {
        let mut img = image(&OrbitSpec::new(1001, 2).unwrap(), 1).unwrap();
        img.distinct.push(Complex64::new(0.123, 0.456));
        assert!(!verify_symmetry(&img, 1e-6).passed);
    }

    #[test]
    fn multiplicativity_small() {
        let r = verify_multiplicativity(7, 5, 9, 1e-9).unwrap();
        assert_eq!((r.order_m, r.order_n), (3, 2));
        assert!(r.passed, "{r:?}");

        let r = verify_multiplicativity(1, 5, 4, 1e-9).unwrap();
        assert!(r.passed);
        assert_eq!(r.product_count, 3);

        // 2 mod 7 has order 3, 2 mod 9 has order 6
        assert!(matches!(verify_multiplicativity(7, 9, 2, 1e-9), Err(Error::OrdersNotCoprime { .. })));
    }

    #[test]
    fn parallel_determinism() {
        let spec = OrbitSpec::new(10_403, 2).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| image(&spec, 101).unwrap())
        };
        let a = run(1);
        let b = run(4);
        let bits = |v: &[Complex64]| v.iter().map(|z| (z.re.to_bits(), z.im.to_bits())).collect::<Vec<_>>();
        assert_eq!(bits(&a.distinct), bits(&b.distinct));
        assert_eq!(a.points, b.points);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn pointwise_identities(n in 2u64..400, w in 1u64..400) {
            let w = w % n;
            prop_assume!(gcd(w, n) == 1);
            let spec = OrbitSpec::new(n, w as i64).unwrap();
            let d = spec.order() as f64;
            let eval = PeriodEvaluator::new(spec.clone());
            prop_assert_eq!(eval.eval(0), Complex64::new(d, 0.0));
            for y in 0..n {
                let v = eval.eval(y);
                prop_assert!((v - brute_sigma(n, w, y)).norm() < 1e-9);
                prop_assert!(v.norm() <= d + 1e-9);
                prop_assert!((eval.eval((n - y) % n) - v.conj()).norm() < 1e-9);
                for &a in spec.orbit() {
                    prop_assert!((eval.eval(mul_mod(a, y, n)) - v).norm() < 1e-9);
                }
            }
        }
    }
}
