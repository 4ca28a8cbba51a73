//! Forms over `Q(√a)`.
//!
//! The Witt index is the minimum of the local indices over the places of
//! `K = Q(√a)` above `∞`, `2` and the primes dividing `a` or an entry. At any
//! other place the form is unimodular, so the only possible defect there is
//! a non-square discriminant, which is detected globally.

use super::hilbert::{LocalClass, Place};
use super::local::PadicInv;
use super::rational::{self, class_candidates, padic_inv, real_counts, support};
use crate::error::{Error, Result};
use crate::fields::arith::{prime_divisors, square_free_mul};

/// Index over `Q_v(√a)` (or `Q_v` itself when `a` is a local square).
pub fn local_index(entries: &[i64], a: i64, v: Place) -> usize {
    let n = entries.len();
    if v == Place::Real {
        let (p, m) = real_counts(entries);
        return if a < 0 { n / 2 } else { p.min(m) };
    }
    let la = LocalClass::of(a, v);
    let inv = padic_inv(entries, v);
    if la.is_square(v) {
        return inv.witt_index();
    }
    let (mut i, mut an) = inv.decompose();
    let neg_a = la.mul(LocalClass::of(-1, v), v);
    'extract: while an.dim >= 2 {
        for b in LocalClass::all(v) {
            let plane = PadicInv::of_entries(&[b, b.mul(neg_a, v)], v);
            if an.contains(&plane) {
                an = an.complement(&plane);
                i += 1;
                continue 'extract;
            }
        }
        break;
    }
    i
}

fn places(entries: &[i64], a: i64) -> Vec<Place> {
    let mut s = support(entries);
    s.extend(prime_divisors(a));
    s.sort_unstable();
    s.dedup();
    std::iter::once(Place::Real).chain(s.into_iter().map(Place::Padic)).collect()
}

pub fn witt_index(entries: &[i64], a: i64) -> Result<usize> {
    let n = entries.len();
    let m = places(entries, a).into_iter().map(|v| local_index(entries, a, v)).min().unwrap_or(0);
    if n.is_multiple_of(2) && m == n / 2 {
        let det = rational::det(entries)?;
        let disc = if (n / 2) % 2 == 1 { -det } else { det };
        if disc != 1 && disc != a {
            return Ok(n / 2 - 1);
        }
    }
    Ok(m)
}

/// Index over `K` plus an anisotropic part defined over `Q`, found by
/// repeatedly splitting off planes `b⟨1,−a⟩`.
pub fn decompose(entries: &[i64], a: i64) -> Result<(usize, Vec<i64>)> {
    let target = witt_index(entries, a)?;
    let (mut planes, mut cur) = rational::decompose(entries)?;
    while planes < target {
        let mut s = support(&cur);
        s.extend(prime_divisors(a));
        s.sort_unstable();
        s.dedup();
        let b = class_candidates(&s)
            .find(|&b| square_free_mul(-a, b).is_ok_and(|ab| rational::is_subform(&[b, ab], &cur)))
            .ok_or_else(|| Error::SearchExhausted(format!("no plane b<1,-{a}> found in {cur:?}")))?;
        cur = rational::complement(&cur, &[b, square_free_mul(-a, b)?])?;
        planes += 1;
    }
    Ok((planes, cur))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sums_of_squares_over_gaussian_field() {
        assert_eq!(witt_index(&[1, 1], -1).unwrap(), 1);
        assert_eq!(witt_index(&[1, 1, 1, 1], -1).unwrap(), 2);
        assert_eq!(witt_index(&[1, 1, 1], 2).unwrap(), 0);
        assert_eq!(witt_index(&[1, -2], 2).unwrap(), 1);
        assert_eq!(witt_index(&[1, 3], 2).unwrap(), 0);
    }

    #[test]
    fn plane_outside_the_support() {
        assert_eq!(witt_index(&[1, 1], -17).unwrap(), 0);
        assert_eq!(witt_index(&[1, 1, 17, 17], -17).unwrap(), 2);
        let (i, an) = decompose(&[1, 1, 1, 1, 1, 1], -17).unwrap();
        assert_eq!(i, 2);
        assert_eq!(an.len(), 2);
    }
}
