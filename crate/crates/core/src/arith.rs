//! Exact arithmetic on `Z/nZ`: factorization, totients, multiplicative
//! orders, CRT splitting and orbits under multiplication by a unit.
//!
//! Moduli are `u64`; products go through `u128` so nothing here overflows for
//! moduli below `2^64`. Factorization is trial division and is only meant for
//! moduli up to about `2^32`.

use crate::{Error, Result};

/// Prime factorization as strictly increasing `(prime, exponent)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> u64 {
        self.pairs.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// `Some((p, e))` when the factored integer is `p^e` with `e >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.pairs.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }

    /// All positive divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub fn factorize(mut n: u64) -> Factorization {
    let mut pairs = Vec::new();
    if n <= 1 {
        return Factorization { pairs };
    }
    let mut push = |n: &mut u64, p: u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    // 6k +/- 1 wheel
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(&mut n, p);
        push(&mut n, p + 2);
        p += 6;
    }
    if n > 1 {
        pairs.push((n, 1));
    }
    Factorization { pairs }
}

/// Deterministic primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 || n % (p + 2) == 0 {
            return false;
        }
        p += 6;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    totient_of(&factorize(n))
}

fn totient_of(f: &Factorization) -> u64 {
    f.pairs()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Reduces a possibly negative integer into `[0, n)`.
pub fn normalize(x: i64, n: u64) -> u64 {
    (x as i128).rem_euclid(n as i128) as u64
}

#[inline]
pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

fn unit(w: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidModulus(n));
    }
    let r = normalize(w, n);
    if gcd(r, n) != 1 {
        return Err(Error::NotAUnit { value: w, modulus: n });
    }
    Ok(r)
}

/// Multiplicative order of `w` modulo `n`.
///
/// Starts from `phi(n)` and strips prime factors while the power stays 1, so
/// the cost is a handful of modular exponentiations rather than a walk.
pub fn mult_order(w: i64, n: u64) -> Result<u64> {
    let w = unit(w, n)?;
    if n == 1 {
        return Ok(1);
    }
    let phi = totient(n);
    let mut order = phi;
    for (p, _) in factorize(phi).pairs().iter().copied() {
        while order % p == 0 && pow_mod(w, order / p, n) == 1 {
            order /= p;
        }
    }
    Ok(order)
}

/// Splits a unit modulo `m*n` into its residues modulo `m` and `n`.
pub fn crt_split(w: i64, m: u64, n: u64) -> Result<(u64, u64)> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidModulus(0));
    }
    if gcd(m, n) != 1 {
        return Err(Error::NotCoprime { m, n });
    }
    let mn = m.checked_mul(n).ok_or(Error::InvalidModulus(m))?;
    let w = unit(w, mn)?;
    Ok((w % m, w % n))
}

/// Inverse of [`crt_split`]: the unique `x mod m*n` with `x = a (mod m)` and
/// `x = b (mod n)`.
pub fn crt_combine(a: u64, m: u64, b: u64, n: u64) -> Result<u64> {
    if gcd(m, n) != 1 {
        return Err(Error::NotCoprime { m, n });
    }
    let mn = m as u128 * n as u128;
    if m == 1 {
        return Ok(b % n);
    }
    if n == 1 {
        return Ok(a % m);
    }
    let m_inv = mod_inverse(m % n, n).expect("coprime moduli");
    // x = a + m * ((b - a) * m^-1 mod n)
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u64;
    let t = mul_mod(diff, m_inv, n);
    Ok(((a % m) as u128 + m as u128 * t as u128).rem_euclid(mn) as u64)
}

/// Inverse of `a` modulo `n` via the extended Euclidean algorithm.
pub fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let (mut r0, mut r1) = (n as i128, (a % n) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0 == 1).then(|| t0.rem_euclid(n as i128) as u64)
}

/// `[y, w*y, w^2*y, ...] mod n`, stopping before the first repeat.
pub fn orbit(w: i64, n: u64, y: i64) -> Result<Vec<u64>> {
    let w = unit(w, n)?;
    let start = normalize(y, n);
    let mut out = vec![start];
    let mut x = mul_mod(start, w, n);
    // multiplication by a unit is a permutation, so the walk returns to `start`
    while x != start {
        out.push(x);
        x = mul_mod(x, w, n);
    }
    Ok(out)
}

/// A modulus together with a unit `omega` and the orbit `<omega>*1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSpec {
    modulus: u64,
    omega: u64,
    orbit: Vec<u64>,
}

impl OrbitSpec {
    pub fn new(modulus: u64, omega: i64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidModulus(modulus));
        }
        let orbit = orbit(omega, modulus, 1)?;
        Ok(Self {
            modulus,
            omega: normalize(omega, modulus),
            orbit,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn omega(&self) -> u64 {
        self.omega
    }

    /// `d = |X|`, the order of `omega`.
    pub fn order(&self) -> u64 {
        self.orbit.len() as u64
    }

    /// `X = [1, omega, omega^2, ...]`.
    pub fn orbit(&self) -> &[u64] {
        &self.orbit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_order(w: u64, n: u64) -> u64 {
        let mut x = w % n;
        let mut d = 1;
        while x != 1 {
            x = x * w % n;
            d += 1;
        }
        d
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(357193).pairs(), &[(29, 1), (109, 1), (113, 1)]);
        assert!(factorize(1).pairs().is_empty());
        assert_eq!(factorize(8).pairs(), &[(2, 3)]);
        assert_eq!(factorize(97 * 97 * 97).as_prime_power(), Some((97, 3)));
        assert_eq!(factorize(35).as_prime_power(), None);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(17), 16);
        assert_eq!(totient(1), 1);
        let brute = (1..8u64).filter(|&k| gcd(k, 8) == 1).count() as u64;
        assert_eq!(brute, 4);
        assert_eq!(totient(8), brute);
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(4, 5).unwrap(), naive_order(4, 5));
        assert_eq!(mult_order(4, 5).unwrap(), 2);
        assert_eq!(mult_order(1, 12345).unwrap(), 1);
        // (Z/8Z)^x has no element of order 4
        for w in [3, 5, 7] {
            assert_eq!(mult_order(w, 8).unwrap(), 2);
        }
        assert!(matches!(mult_order(6, 8), Err(Error::NotAUnit { .. })));
        assert_eq!(mult_order(-1, 5).unwrap(), 2);
    }

    #[test]
    fn crt_split_examples() {
        assert_eq!(crt_split(54184, 70531, 5).unwrap(), (54184, 4));
        assert_eq!(crt_split(9, 7, 5).unwrap(), (2, 4));
        assert_eq!(crt_split(1, 7, 5).unwrap(), (1, 1));
        assert!(matches!(crt_split(1, 6, 4), Err(Error::NotCoprime { .. })));
        assert!(matches!(crt_split(7, 7, 5), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn orbit_examples() {
        assert_eq!(orbit(4, 5, 1).unwrap(), vec![1, 4]);
        assert_eq!(orbit(1, 9, 5).unwrap(), vec![5]);
        assert_eq!(orbit(2, 7, 1).unwrap(), vec![1, 2, 4]);
        assert_eq!(orbit(2, 7, 0).unwrap(), vec![0]);
        assert!(orbit(2, 8, 1).is_err());
    }

    #[test]
    fn orbit_spec_rejects_bad_input() {
        assert!(matches!(OrbitSpec::new(1, 1), Err(Error::InvalidModulus(1))));
        assert!(OrbitSpec::new(10, 5).is_err());
        let s = OrbitSpec::new(7, -5).unwrap();
        assert_eq!(s.omega(), 2);
        assert_eq!(s.order(), 3);
    }

    #[test]
    fn mod_inverse_works() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(2, 4), None);
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..5_000_000) {
            let f = factorize(n);
            prop_assert_eq!(f.value(), n);
            let primes: Vec<u64> = f.primes().collect();
            prop_assert!(primes.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(primes.iter().all(|&p| is_prime(p)));
        }

        #[test]
        fn order_divides_totient_and_matches_orbit(n in 2u64..20_000, w in 1u64..20_000) {
            let w = w % n;
            prop_assume!(gcd(w, n) == 1);
            let d = mult_order(w as i64, n).unwrap();
            prop_assert_eq!(totient(n) % d, 0);
            prop_assert_eq!(d, naive_order(w, n));
            let orb = orbit(w as i64, n, 1).unwrap();
            prop_assert_eq!(orb.len() as u64, d);
            let mut shifted: Vec<u64> = orb.iter().map(|&x| mul_mod(x, w, n)).collect();
            let mut sorted = orb.clone();
            shifted.sort_unstable();
            sorted.sort_unstable();
            prop_assert_eq!(shifted, sorted);
        }

        #[test]
        fn crt_roundtrip(m in 1u64..3000, n in 1u64..3000, w in 0u64..9_000_000) {
            prop_assume!(gcd(m, n) == 1);
            let mn = m * n;
            let w = w % mn;
            prop_assume!(gcd(w, mn) == 1);
            let (a, b) = crt_split(w as i64, m, n).unwrap();
            prop_assert_eq!(crt_combine(a, m, b, n).unwrap(), w);
        }
    }
}
