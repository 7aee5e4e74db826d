//! The point sets `Lambda_q`, their exponential sums, and a grid-restricted
//! discrepancy estimate.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{factorize, gcd, mul_mod, pow_mod, totient};
use crate::supercharacter::RootTable;
use crate::{Error, Result};

/// Finite point set in `[0,1)^dim` with rational coordinates over a common
/// denominator. Coordinates are stored as numerators, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoints {
    dim: usize,
    denominator: u64,
    numerators: Vec<u64>,
}

impl RationalPoints {
    pub fn new(dim: usize, denominator: u64, numerators: Vec<u64>) -> Result<Self> {
        if dim == 0 || denominator == 0 || numerators.len() % dim != 0 {
            return Err(Error::InvalidArgument("malformed point set".into()));
        }
        if numerators.iter().any(|&x| x >= denominator) {
            return Err(Error::InvalidArgument("coordinate outside [0,1)".into()));
        }
        Ok(Self {
            dim,
            denominator,
            numerators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.numerators.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn numerators(&self, i: usize) -> &[u64] {
        &self.numerators[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        self.numerators(i)
            .iter()
            .map(|&x| x as f64 / self.denominator as f64)
            .collect()
    }
}

/// Smallest `w` in `[1, q)` of multiplicative order exactly `d`.
pub fn find_root_of_unity(q: u64, d: u64) -> Result<u64> {
    if q < 2 || d == 0 || totient(q) % d != 0 {
        return Err(Error::NoSuchRoot { q, d });
    }
    let primes: Vec<u64> = factorize(d).primes().collect();
    (1..q)
        .filter(|&w| gcd(w, q) == 1)
        .find(|&w| pow_mod(w, d, q) == 1 && primes.iter().all(|&p| pow_mod(w, d / p, q) != 1))
        .ok_or(Error::NoSuchRoot { q, d })
}

/// `{ (l/q)(1, w, ..., w^{phi(d)-1}) mod 1 : l < q }` for `w` the smallest
/// primitive `d`-th root of unity mod `q`.
#[derive(Clone, Debug)]
pub struct LambdaSet {
    pub q: u64,
    pub d: u64,
    pub root: u64,
    pub points: RationalPoints,
}

pub fn lambda_set(q: u64, d: u64) -> Result<LambdaSet> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("Lambda_q needs d >= 2, got {d}")));
    }
    match factorize(q).as_prime_power() {
        Some((p, _)) if p % 2 == 1 => {}
        _ => return Err(Error::InvalidArgument(format!("{q} is not a power of an odd prime"))),
    }
    let root = find_root_of_unity(q, d)?;
    let dim = totient(d) as usize;
    let powers: Vec<u64> = (0..dim as u64).map(|j| pow_mod(root, j, q)).collect();
    let mut numerators = Vec::with_capacity(q as usize * dim);
    for l in 0..q {
        numerators.extend(powers.iter().map(|&w| mul_mod(l, w, q)));
    }
    Ok(LambdaSet {
        q,
        d,
        root,
        points: RationalPoints::new(dim, q, numerators)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeylSum {
    #[serde(serialize_with = "ser_complex")]
    pub computed: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub predicted: Complex64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// `sum_{u in Lambda} e(u . v)` summed directly, next to the prediction
/// `q` if `q | f(w)` else `0`, where `f(x) = sum_j v_j x^j`.
pub fn weyl_sum(set: &LambdaSet, v: &[i64]) -> Result<WeylSum> {
    let pts = &set.points;
    if v.len() != pts.dim() {
        return Err(Error::InvalidArgument(format!(
            "frequency vector needs {} entries, got {}",
            pts.dim(),
            v.len()
        )));
    }
    let q = set.q;
    let vq: Vec<u64> = v.iter().map(|&x| crate::arith::normalize(x, q)).collect();
    let table = RootTable::new(q);
    let computed = (0..pts.len())
        .map(|i| {
            let phase = pts
                .numerators(i)
                .iter()
                .zip(&vq)
                .fold(0u64, |acc, (&u, &c)| (acc + mul_mod(u, c, q)) % q);
            table.get(phase)
        })
        .sum();
    let f_at_root = vq
        .iter()
        .enumerate()
        .fold(0u64, |acc, (j, &c)| (acc + mul_mod(c, pow_mod(set.root, j as u64, q), q)) % q);
    let predicted = if f_at_root == 0 { q as f64 } else { 0.0 };
    Ok(WeylSum {
        computed,
        predicted: Complex64::new(predicted, 0.0),
    })
}

/// Largest `|fraction - volume|` over boxes `prod [a_i/G, b_i/G)`.
///
/// Restricting box corners to the `G`-grid gives a lower estimate of the
/// true discrepancy. Counts come from a `(G+1)^dim` prefix-sum table.
pub fn discrepancy_estimate(points: &RationalPoints, grid: usize) -> Result<f64> {
    let dim = points.dim();
    if dim > 3 {
        return Err(Error::DimensionTooHigh(dim));
    }
    if grid < 2 {
        return Err(Error::InvalidArgument(format!("grid must be at least 2, got {grid}")));
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    let side = grid + 1;
    let strides: Vec<usize> = (0..dim).map(|a| side.pow(a as u32)).collect();
    let mut prefix = vec![0u64; side.pow(dim as u32)];
    let den = points.denominator() as u128;
    for i in 0..points.len() {
        let idx: usize = points
            .numerators(i)
            .iter()
            .zip(&strides)
            .map(|(&x, &s)| ((x as u128 * grid as u128 / den) as usize + 1) * s)
            .sum();
        prefix[idx] += 1;
    }
    for &stride in &strides {
        for flat in 0..prefix.len() {
            if (flat / stride) % side != 0 {
                prefix[flat] += prefix[flat - stride];
            }
        }
    }

    let pairs: Vec<(usize, usize)> = (0..grid)
        .flat_map(|a| (a + 1..=grid).map(move |b| (a, b)))
        .collect();
    let total = points.len() as f64;
    let g = grid as f64;
    let mut worst = 0.0f64;
    let mut sel = vec![0usize; dim];
    loop {
        let mut count = 0i64;
        for corner in 0..(1usize << dim) {
            let mut flat = 0;
            let mut lows = 0;
            for a in 0..dim {
                let (lo, hi) = pairs[sel[a]];
                if corner >> a & 1 == 1 {
                    flat += hi * strides[a];
                } else {
                    flat += lo * strides[a];
                    lows += 1;
                }
            }
            let term = prefix[flat] as i64;
            count += if lows % 2 == 0 { term } else { -term };
        }
        let volume: f64 = sel
            .iter()
            .map(|&s| (pairs[s].1 - pairs[s].0) as f64 / g)
            .product();
        worst = worst.max((count as f64 / total - volume).abs());

        // odometer over per-axis box choices
        let mut axis = 0;
        loop {
            if axis == dim {
                return Ok(worst);
            }
            sel[axis] += 1;
            if sel[axis] < pairs.len() {
                break;
            }
            sel[axis] = 0;
            axis += 1;
        }
    }
}
