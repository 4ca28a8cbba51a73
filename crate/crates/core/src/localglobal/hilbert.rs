use std::fmt;

use serde::{Serialize, Serializer};

use crate::fields::arith::{legendre, valuation};

/// A place of the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Padic(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Padic(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Square class of `Q_v^×`.
///
/// At the real place `unit` is 1 for negative numbers. At an odd prime it is
/// 1 for a non-residue unit part. At 2 it is the unit part mod 8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClass {
    pub odd_val: bool,
    pub unit: u8,
}

impl LocalClass {
    pub fn one(v: Place) -> Self {
        LocalClass { odd_val: false, unit: if v == Place::Padic(2) { 1 } else { 0 } }
    }

    pub fn of(n: i64, v: Place) -> Self {
        assert!(n != 0, "local class of zero");
        match v {
            Place::Real => LocalClass { odd_val: false, unit: (n < 0) as u8 },
            Place::Padic(2) => {
                let (e, u) = valuation(n, 2);
                LocalClass { odd_val: e % 2 == 1, unit: u.rem_euclid(8) as u8 }
            }
            Place::Padic(p) => {
                let (e, u) = valuation(n, p);
                LocalClass { odd_val: e % 2 == 1, unit: (legendre(u, p) == -1) as u8 }
            }
        }
    }

    pub fn mul(self, other: Self, v: Place) -> Self {
        let unit = match v {
            Place::Padic(2) => (self.unit as u16 * other.unit as u16 % 8) as u8,
            _ => self.unit ^ other.unit,
        };
        LocalClass { odd_val: self.odd_val ^ other.odd_val, unit }
    }

    pub fn is_square(self, v: Place) -> bool {
        self == Self::one(v)
    }

    /// All square classes of `Q_v^×`.
    pub fn all(v: Place) -> Vec<LocalClass> {
        match v {
            Place::Real => vec![LocalClass { odd_val: false, unit: 0 }, LocalClass { odd_val: false, unit: 1 }],
            Place::Padic(2) => {
                [false, true].iter().flat_map(|&o| [1u8, 3, 5, 7].map(|u| LocalClass { odd_val: o, unit: u })).collect()
            }
            Place::Padic(_) => {
                [false, true].iter().flat_map(|&o| [0u8, 1].map(|u| LocalClass { odd_val: o, unit: u })).collect()
            }
        }
    }
}

/// Hilbert symbol of two local classes.
pub fn hilbert_local(a: LocalClass, b: LocalClass, v: Place) -> i8 {
    match v {
        Place::Real => {
            if a.unit == 1 && b.unit == 1 {
                -1
            } else {
                1
            }
        }
        Place::Padic(2) => {
            let eps = |u: u8| ((u as u32 - 1) / 2) % 2;
            let omega = |u: u8| ((u as u32 * u as u32 - 1) / 8) % 2;
            let (al, be) = (a.odd_val as u32, b.odd_val as u32);
            let e = eps(a.unit) * eps(b.unit) + al * omega(b.unit) + be * omega(a.unit);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Padic(p) => {
            let mut s = 1i8;
            if a.odd_val && b.odd_val && (p % 4 == 3) {
                s = -s;
            }
            if b.odd_val && a.unit == 1 {
                s = -s;
            }
            if a.odd_val && b.unit == 1 {
                s = -s;
            }
            s
        }
    }
}

/// `(a,b)_v` for nonzero integers.
pub fn hilbert_symbol(a: i64, b: i64, v: Place) -> i8 {
    hilbert_local(LocalClass::of(a, v), LocalClass::of(b, v), v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(hilbert_symbol(-1, -1, Place::Real), -1);
        assert_eq!(hilbert_symbol(2, 3, Place::Padic(7)), 1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Padic(2)), -1);
        assert_eq!(hilbert_symbol(-1, -1, Place::Padic(3)), 1);
        assert_eq!(hilbert_symbol(3, 3, Place::Padic(3)), -1);
        assert_eq!(hilbert_symbol(2, 5, Place::Padic(5)), -1);
        assert_eq!(hilbert_symbol(2, 7, Place::Padic(2)), 1);
        assert_eq!(hilbert_symbol(2, 3, Place::Padic(2)), -1);
    }

    /// Brute-force solvability of z² = ax² + by² modulo a high power of p,
    /// searching primitive solutions.
    fn brute(a: i64, b: i64, p: i64) -> i8 {
        let m = if p == 2 { 64 } else { p * p * p };
        for x in 0..m {
            for y in 0..m {
                for z in 0..m {
                    if x % p == 0 && y % p == 0 && z % p == 0 {
                        continue;
                    }
                    if (a * x * x + b * y * y - z * z).rem_euclid(m) == 0 {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn agrees_with_brute_force_for_square_free_entries() {
        // square-free entries have valuation ≤ 1, so solvability mod p³ (or
        // 2⁶) decides the local symbol
        let vals = [-6, -3, -2, -1, 1, 2, 3, 5, 6];
        for &p in &[2i64, 3, 5] {
            for &a in &vals {
                for &b in &vals {
                    assert_eq!(hilbert_symbol(a, b, Place::Padic(p as u64)), brute(a, b, p), "({a},{b})_{p}");
                }
            }
        }
    }
}
