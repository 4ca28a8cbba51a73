//! Small-integer number theory: trial-division factorization, square-free
//! parts, Legendre symbols.

use crate::error::{Error, Result};

/// Default trial-division bound for square-free reduction over the rationals.
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization of `n > 0` by trial division up to `bound`.
///
/// Fails with `UnsupportedInput` when a cofactor larger than `bound²`
/// survives, since its primality cannot be certified.
pub fn factorize(mut n: u128, bound: u64) -> Result<Vec<(u128, u32)>> {
    assert!(n > 0);
    let mut out = Vec::new();
    let mut push = |p: u128, n: &mut u128| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p: u128 = 3;
    while p * p <= n {
        if p > bound as u128 {
            return Err(Error::UnsupportedInput(format!("cofactor {n} exceeds the trial-division bound {bound}")));
        }
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    Ok(out)
}

/// Square-free part of `n > 0`.
pub fn square_free_part(n: u128, bound: u64) -> Result<u128> {
    Ok(factorize(n, bound)?.into_iter().filter(|&(_, e)| e % 2 == 1).map(|(p, _)| p).product())
}

/// Primes dividing a nonzero square-free integer.
pub fn prime_divisors(n: i64) -> Vec<u64> {
    let n = n.unsigned_abs() as u128;
    // square-free representatives are always factorable: they were produced
    // by `square_free_part` under the same bound
    factorize(n.max(1), DEFAULT_FACTOR_BOUND.max(1 << 22))
        .expect("square-free representative within factor bound")
        .into_iter()
        .map(|(p, _)| p as u64)
        .collect()
}

/// Product of two square-free integers, reduced modulo squares.
pub fn square_free_mul(a: i64, b: i64) -> Result<i64> {
    let g = gcd_u128(a.unsigned_abs() as u128, b.unsigned_abs() as u128);
    let m = (a.unsigned_abs() as u128 / g) * (b.unsigned_abs() as u128 / g);
    let sign = if (a < 0) != (b < 0) { -1 } else { 1 };
    i64::try_from(m)
        .map(|m| sign * m)
        .map_err(|_| Error::UnsupportedInput("square class representative overflows i64".into()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = (base % m) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

pub fn mod_inv(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(mod_pow(a, p - 2, p))
    }
}

/// Legendre symbol (a/p) for an odd prime p: 0, 1 or -1.
pub fn legendre(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if mod_pow(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| legendre(a as i64, p) == -1).expect("odd prime has non-residues")
}

/// Iterator over primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

pub fn valuation(n: i64, p: u64) -> (u32, i64) {
    let mut v = 0;
    let mut m = n;
    while m % p as i64 == 0 {
        m /= p as i64;
        v += 1;
    }
    (v, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_free_parts() {
        assert_eq!(square_free_part(72, 100).unwrap(), 2);
        assert_eq!(square_free_part(1, 100).unwrap(), 1);
        assert_eq!(square_free_part(30 * 30 * 7, 100).unwrap(), 7);
    }

    #[test]
    fn factor_bound_is_enforced() {
        // 1000003 * 1000033 has no factor below 1000
        let n = 1_000_003u128 * 1_000_033;
        assert!(matches!(factorize(n, 1000), Err(Error::UnsupportedInput(_))));
        assert_eq!(factorize(n, 2_000_000).unwrap().len(), 2);
    }

    #[test]
    fn legendre_mod_7() {
        let squares: Vec<i64> = (1..7).filter(|&a| legendre(a, 7) == 1).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        assert_eq!(smallest_nonresidue(7), 3);
        assert_eq!(legendre(14, 7), 0);
    }

    #[test]
    fn square_free_products() {
        assert_eq!(square_free_mul(6, 10).unwrap(), 15);
        assert_eq!(square_free_mul(-2, -2).unwrap(), 1);
        assert_eq!(square_free_mul(-1, 3).unwrap(), -3);
    }
}
