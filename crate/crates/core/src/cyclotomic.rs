//! Cyclotomic polynomials over `Z` and the reduction matrix of `x^k mod Phi_d`.
//!
//! All arithmetic is exact `i64` with overflow checks. A division that leaves
//! a remainder is a bug and panics; there is no rounding anywhere in here.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::arith::{factorize, totient};
use crate::{Error, Result};

/// Largest index accepted by [`cyclotomic_poly`].
pub const MAX_INDEX: u64 = 1_000_000;

/// `Phi_d(x)`, coefficients lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicPolynomial {
    index: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicPolynomial {
    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c as f64)
    }
}

type Memo = Mutex<HashMap<u64, Arc<CyclotomicPolynomial>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Computes `Phi_d` as `(x^d - 1) / prod_{e | d, e < d} Phi_e`, dividing out
/// one memoized factor at a time.
pub fn cyclotomic_poly(d: u64) -> Result<Arc<CyclotomicPolynomial>> {
    if d == 0 || d > MAX_INDEX {
        return Err(Error::InvalidArgument(format!(
            "cyclotomic index must lie in 1..={MAX_INDEX}, got {d}"
        )));
    }
    if let Some(hit) = memo().lock().unwrap().get(&d) {
        return Ok(Arc::clone(hit));
    }

    // x^d - 1
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in factorize(d).divisors() {
        if e == d {
            continue;
        }
        let factor = cyclotomic_poly(e)?;
        let (q, r) = div_rem_monic(&num, factor.coeffs()).ok_or(Error::CoefficientOverflow(d))?;
        assert!(
            r.iter().all(|&c| c == 0),
            "Phi_{e} does not divide x^{d} - 1 exactly"
        );
        num = q;
    }
    debug_assert_eq!(num.len() as u64 - 1, totient(d));

    let poly = Arc::new(CyclotomicPolynomial { index: d, coeffs: num });
    memo()
        .lock()
        .unwrap()
        .entry(d)
        .or_insert_with(|| Arc::clone(&poly));
    Ok(poly)
}

/// Long division by a monic polynomial. Returns `None` on overflow.
pub(crate) fn div_rem_monic(num: &[i64], den: &[i64]) -> Option<(Vec<i64>, Vec<i64>)> {
    assert_eq!(den.last(), Some(&1), "divisor must be monic");
    let dd = den.len() - 1;
    if num.len() <= dd {
        return Some((vec![0], num.to_vec()));
    }
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dd];
    for i in (0..quot.len()).rev() {
        let lead = rem[i + dd];
        if lead == 0 {
            continue;
        }
        quot[i] = lead;
        for (j, &c) in den.iter().enumerate() {
            rem[i + j] = rem[i + j].checked_sub(lead.checked_mul(c)?)?;
        }
    }
    rem.truncate(dd.max(1));
    Some((quot, rem))
}

/// `c_jk`: column `k` holds the coefficients of `x^k mod Phi_d(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionMatrix {
    index: u64,
    rows: usize,
    /// column-major, `columns[k][j] = c_jk`
    columns: Vec<Vec<i64>>,
}

impl ReductionMatrix {
    pub fn index(&self) -> u64 {
        self.index
    }

    /// `phi(d)`
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// `d`
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn entry(&self, j: usize, k: usize) -> i64 {
        self.columns[k][j]
    }

    pub fn column(&self, k: usize) -> &[i64] {
        &self.columns[k]
    }

    pub fn columns(&self) -> impl ExactSizeIterator<Item = &[i64]> {
        self.columns.iter().map(Vec::as_slice)
    }
}

/// Builds `c_jk` by repeated multiply-by-`x` and subtraction of the
/// overflowing leading term times `Phi_d`.
///
/// `d = 1` is accepted as well (`Phi_1 = x - 1`, single column `(1)`).
pub fn reduction_matrix(d: u64) -> Result<ReductionMatrix> {
    let phi = cyclotomic_poly(d)?;
    let rows = phi.degree();
    let coeffs = phi.coeffs();
    let mut columns = Vec::with_capacity(d as usize);
    let mut cur = vec![0i64; rows];
    cur[0] = 1;
    for _ in 0..d {
        columns.push(cur.clone());
        // multiply by x: the coefficient shifted past degree rows-1 wraps as
        // x^rows = -sum_{j<rows} phi_j x^j
        let top = cur[rows - 1];
        let mut next = vec![0i64; rows];
        next[1..].copy_from_slice(&cur[..rows - 1]);
        if top != 0 {
            for (j, slot) in next.iter_mut().enumerate() {
                let sub = top.checked_mul(coeffs[j]).ok_or(Error::CoefficientOverflow(d))?;
                *slot = slot.checked_sub(sub).ok_or(Error::CoefficientOverflow(d))?;
            }
        }
        cur = next;
    }
    Ok(ReductionMatrix {
        index: d,
        rows,
        columns,
    })
}
