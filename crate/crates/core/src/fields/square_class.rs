use std::fmt;

use num_bigint::Sign;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use super::arith::{self, legendre, smallest_nonresidue, square_free_mul};
use super::element::{FieldElement, RatFn};
use super::poly::Poly;
use super::FieldDesc;
use crate::error::{Error, Result};

/// Canonical representative of an element modulo nonzero squares.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    /// Signed square-free integer.
    Rational(i64),
    /// `true` for the non-residue class of `F_p`.
    Residue(bool),
    /// `a` or `a·x` with `a` a class of the base.
    Laurent { base: Box<SquareClass>, odd: bool },
    /// `c·f` with `c` a base class and `f` monic square-free.
    RatFunc { constant: Box<SquareClass>, poly: PolyKey },
}

/// Monic square-free polynomial used inside [`SquareClass::RatFunc`];
/// ordered by its debug rendering so that classes can live in sorted sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyKey(pub Poly);

impl PartialOrd for PolyKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PolyKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        format!("{:?}", self.0).cmp(&format!("{:?}", other.0))
    }
}

impl SquareClass {
    /// True for the class of squares in any field.
    pub fn is_one(&self) -> bool {
        match self {
            SquareClass::Rational(n) => *n == 1,
            SquareClass::Residue(nr) => !nr,
            SquareClass::Laurent { base, odd } => !odd && base.is_one(),
            SquareClass::RatFunc { constant, poly } => constant.is_one() && poly.0.degree() == Some(0),
        }
    }

    pub fn rational(&self) -> Option<i64> {
        match self {
            SquareClass::Rational(n) => Some(*n),
            _ => None,
        }
    }
}

impl FieldDesc {
    /// Canonical square class of a nonzero element.
    pub fn square_class(&self, e: &FieldElement) -> Result<SquareClass> {
        self.square_class_with_bound(e, arith::DEFAULT_FACTOR_BOUND)
    }

    pub fn square_class_with_bound(&self, e: &FieldElement, bound: u64) -> Result<SquareClass> {
        if self.is_zero(e) {
            return Err(Error::ZeroElement);
        }
        match (self, e) {
            (FieldDesc::Rationals, FieldElement::Rational(r)) => {
                let n = r.numer() * r.denom();
                let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
                let mag = n
                    .magnitude()
                    .to_u128()
                    .ok_or_else(|| Error::UnsupportedInput(format!("rational {r} is too large to factor")))?;
                let sf = arith::square_free_part(mag, bound)?;
                let sf = i64::try_from(sf)
                    .map_err(|_| Error::UnsupportedInput(format!("square-free part of {r} overflows")))?;
                Ok(SquareClass::Rational(sign * sf))
            }
            (FieldDesc::PrimeField(p), FieldElement::Residue(x)) => {
                Ok(SquareClass::Residue(legendre(*x as i64, *p) == -1))
            }
            (FieldDesc::QuadExt { .. }, _) => {
                Err(Error::UnsupportedField(format!("square classes inside {self} are not canonicalized")))
            }
            (FieldDesc::LaurentExt { base, .. }, FieldElement::Function(f)) => {
                let (val, lead) = laurent_leading(base, f);
                let lead = match **base {
                    FieldDesc::QuadExt { .. } => base.entry_class(&lead)?,
                    _ => base.square_class_with_bound(&lead, bound)?,
                };
                Ok(SquareClass::Laurent { base: Box::new(lead), odd: val.rem_euclid(2) == 1 })
            }
            (FieldDesc::RatFuncExt { base, .. }, FieldElement::Function(f)) => {
                if !matches!(**base, FieldDesc::Rationals | FieldDesc::PrimeField(_)) {
                    return Err(Error::UnsupportedField(format!("square classes over {self} need a prime base field")));
                }
                let lc = base.div(f.num.leading().unwrap(), f.den.leading().unwrap())?;
                let prod = base.poly_monic(&base.poly_mul(&f.num, &f.den));
                let mut odd_part = Poly::one(base);
                for (g, m) in base.poly_square_free_factors(&prod)? {
                    if m % 2 == 1 {
                        odd_part = base.poly_mul(&odd_part, &g);
                    }
                }
                Ok(SquareClass::RatFunc {
                    constant: Box::new(base.square_class_with_bound(&lc, bound)?),
                    poly: PolyKey(odd_part),
                })
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn is_square(&self, e: &FieldElement) -> Result<bool> {
        Ok(self.square_class(e)?.is_one())
    }

    /// Class used for diagonal entries. Over `K = F(√a)` entries are drawn
    /// from the base field and keep their base class.
    pub fn entry_class(&self, e: &FieldElement) -> Result<SquareClass> {
        match (self, e) {
            (FieldDesc::QuadExt { base, .. }, FieldElement::Quad(u, v)) => {
                if !base.is_zero(v) {
                    return Err(Error::UnsupportedField(format!(
                        "form entries over {self} must lie in the base field"
                    )));
                }
                base.entry_class(u)
            }
            _ => self.square_class(e),
        }
    }

    /// The field in which entry classes live (the base for `F(√a)`).
    pub fn class_field(&self) -> &FieldDesc {
        match self {
            FieldDesc::QuadExt { base, .. } => base.class_field(),
            _ => self,
        }
    }

    pub fn class_one(&self) -> SquareClass {
        match self {
            FieldDesc::Rationals => SquareClass::Rational(1),
            FieldDesc::PrimeField(_) => SquareClass::Residue(false),
            FieldDesc::QuadExt { base, .. } => base.class_one(),
            FieldDesc::LaurentExt { base, .. } => SquareClass::Laurent { base: Box::new(base.class_one()), odd: false },
            FieldDesc::RatFuncExt { base, .. } => {
                SquareClass::RatFunc { constant: Box::new(base.class_one()), poly: PolyKey(Poly::one(base)) }
            }
        }
    }

    pub fn class_minus_one(&self) -> SquareClass {
        self.class_field().entry_class(&self.class_field().int(-1)).expect("-1 is a unit")
    }

    /// Lift a base-field class into this field.
    pub fn class_embed(&self, c: SquareClass) -> SquareClass {
        match self {
            FieldDesc::LaurentExt { .. } => SquareClass::Laurent { base: Box::new(c), odd: false },
            FieldDesc::RatFuncExt { base, .. } => {
                SquareClass::RatFunc { constant: Box::new(c), poly: PolyKey(Poly::one(base)) }
            }
            _ => c,
        }
    }

    pub fn class_mul(&self, a: &SquareClass, b: &SquareClass) -> Result<SquareClass> {
        Ok(match (self, a, b) {
            (FieldDesc::Rationals, SquareClass::Rational(x), SquareClass::Rational(y)) => {
                SquareClass::Rational(square_free_mul(*x, *y)?)
            }
            (FieldDesc::PrimeField(_), SquareClass::Residue(x), SquareClass::Residue(y)) => SquareClass::Residue(x ^ y),
            (FieldDesc::QuadExt { base, .. }, _, _) => base.class_mul(a, b)?,
            (
                FieldDesc::LaurentExt { base, .. },
                SquareClass::Laurent { base: x, odd: ox },
                SquareClass::Laurent { base: y, odd: oy },
            ) => SquareClass::Laurent { base: Box::new(base.class_mul(x, y)?), odd: ox ^ oy },
            (
                FieldDesc::RatFuncExt { base, .. },
                SquareClass::RatFunc { constant: c1, poly: f },
                SquareClass::RatFunc { constant: c2, poly: g },
            ) => {
                let d = base.poly_gcd(&f.0, &g.0);
                let d2 = base.poly_mul(&d, &d);
                let prod = base.poly_divrem(&base.poly_mul(&f.0, &g.0), &d2).0;
                SquareClass::RatFunc { constant: Box::new(base.class_mul(c1, c2)?), poly: PolyKey(prod) }
            }
            _ => panic!("square class does not belong to {self}"),
        })
    }

    pub fn class_neg(&self, a: &SquareClass) -> Result<SquareClass> {
        self.class_mul(a, &self.class_minus_one())
    }

    pub fn class_product<'a>(&self, it: impl IntoIterator<Item = &'a SquareClass>) -> Result<SquareClass> {
        let mut acc = self.class_field().class_one();
        for c in it {
            acc = self.class_mul(&acc, c)?;
        }
        Ok(acc)
    }

    /// Canonical representative element of a class (in the class field).
    pub fn class_rep(&self, c: &SquareClass) -> FieldElement {
        match (self, c) {
            (FieldDesc::Rationals, SquareClass::Rational(n)) => FieldElement::from_i64(*n),
            (FieldDesc::PrimeField(p), SquareClass::Residue(nr)) => {
                FieldElement::Residue(if *nr { smallest_nonresidue(*p) } else { 1 })
            }
            (FieldDesc::QuadExt { base, .. }, _) => base.class_rep(c),
            (FieldDesc::LaurentExt { base, .. }, SquareClass::Laurent { base: b, odd }) => {
                let lead = self.embed(base.class_rep(b));
                if *odd {
                    let FieldDesc::LaurentExt { var, .. } = self else { unreachable!() };
                    self.mul(&lead, &self.variable(var).unwrap())
                } else {
                    lead
                }
            }
            (FieldDesc::RatFuncExt { base, .. }, SquareClass::RatFunc { constant, poly }) => {
                FieldElement::Function(RatFn {
                    num: base.poly_scale(&poly.0, &base.class_rep(constant)),
                    den: Poly::one(base),
                })
            }
            _ => panic!("square class does not belong to {self}"),
        }
    }

    /// Print a class in the form-expression syntax.
    pub fn format_class(&self, c: &SquareClass) -> String {
        match self {
            FieldDesc::QuadExt { base, .. } => base.format_class(c),
            FieldDesc::LaurentExt { base, var } => {
                let SquareClass::Laurent { base: b, odd } = c else { panic!("class/field mismatch") };
                let inner = base.format_class(b);
                if !odd {
                    inner
                } else if inner == "1" {
                    var.clone()
                } else if inner == "-1" {
                    format!("-{var}")
                } else {
                    format!("{inner}*{var}")
                }
            }
            FieldDesc::RatFuncExt { base, var } => {
                let SquareClass::RatFunc { constant, poly } = c else { panic!("class/field mismatch") };
                let k = base.format_class(constant);
                if poly.0.degree() == Some(0) {
                    return k;
                }
                let p = base.format_poly(&poly.0, var);
                let p = if p.contains(' ') { format!("({p})") } else { p };
                match k.as_str() {
                    "1" => p,
                    "-1" => format!("-{p}"),
                    _ => format!("{k}*{p}"),
                }
            }
            _ => self.format_element(&self.class_rep(c)),
        }
    }
}

/// Valuation and leading coefficient of a rational function viewed as a
/// Laurent series at 0.
pub(crate) fn laurent_leading(base: &FieldDesc, f: &RatFn) -> (i64, FieldElement) {
    let on = f.num.order(base).unwrap();
    let od = f.den.order(base).unwrap();
    let lead = base.div(&f.num.coeffs()[on], &f.den.coeffs()[od]).unwrap();
    (on as i64 - od as i64, lead)
}

/// All classes `±∏ p^e` over the primes of `support`: the finite witness
/// domain for existential square-class searches over the rationals.
pub fn s_square_classes(support: &[u64]) -> Vec<SquareClass> {
    let mut primes: Vec<u64> = support.to_vec();
    primes.sort_unstable();
    primes.dedup();
    let mut out = Vec::with_capacity(1 << (primes.len() + 1));
    for mask in 0u64..(1 << primes.len()) {
        let m: i64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p as i64).product();
        out.push(m);
        out.push(-m);
    }
    out.sort_by_key(|&m| (m.unsigned_abs(), m < 0));
    out.into_iter().map(SquareClass::Rational).collect()
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{self}"))
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Rational(n) => write!(f, "{n}"),
            SquareClass::Residue(nr) => write!(f, "{}", if *nr { "nonresidue" } else { "1" }),
            SquareClass::Laurent { base, odd } => {
                if *odd {
                    write!(f, "{base}*t")
                } else {
                    write!(f, "{base}")
                }
            }
            SquareClass::RatFunc { constant, poly } => write!(f, "{constant}*{:?}", poly.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_classes() {
        let q = FieldDesc::rationals();
        assert_eq!(q.square_class(&FieldElement::from_ratio(8, 9)).unwrap(), SquareClass::Rational(2));
        assert!(q.is_square(&FieldElement::from_ratio(9, 4)).unwrap());
        assert!(!q.is_square(&FieldElement::from_i64(-1)).unwrap());
        assert_eq!(q.square_class(&q.zero()), Err(Error::ZeroElement));
    }

    #[test]
    fn finite_field_classes() {
        let f7 = FieldDesc::prime_field(7).unwrap();
        assert_eq!(f7.square_class(&f7.int(3)).unwrap(), SquareClass::Residue(true));
        assert!(f7.is_square(&f7.int(2)).unwrap());
    }

    #[test]
    fn laurent_classes() {
        let f = FieldDesc::parse("Q((x))").unwrap();
        let x = f.variable("x").unwrap();
        let e = f.mul(&f.int(4), &f.pow(&x, 3).unwrap());
        assert_eq!(
            f.square_class(&e).unwrap(),
            SquareClass::Laurent { base: Box::new(SquareClass::Rational(1)), odd: true }
        );
        // 1 + x is a square in Q((x))
        assert!(f.is_square(&f.add(&f.one(), &x)).unwrap());

        // leading coefficients over a quadratic extension keep their base class
        let k = FieldDesc::parse("Q(sqrt -1)((x))").unwrap();
        let x = k.variable("x").unwrap();
        assert_eq!(
            k.square_class(&k.mul(&k.int(3), &x)).unwrap(),
            SquareClass::Laurent { base: Box::new(SquareClass::Rational(3)), odd: true }
        );
    }

    #[test]
    fn rational_function_classes() {
        let f = FieldDesc::parse("Q(x)").unwrap();
        let x = f.variable("x").unwrap();
        let xp1 = f.add(&x, &f.one());
        let e = f.mul(&f.int(-3), &f.mul(&f.pow(&xp1, 3).unwrap(), &x));
        let c = f.square_class(&e).unwrap();
        assert_eq!(f.format_class(&c), "-3*(x^2 + x)");
        // 1 + x is not a square in Q(x)
        assert!(!f.is_square(&xp1).unwrap());
    }

    #[test]
    fn s_classes_enumeration() {
        let show = |v: Vec<SquareClass>| v.iter().map(|c| c.rational().unwrap()).collect::<Vec<_>>();
        assert_eq!(show(s_square_classes(&[])), vec![1, -1]);
        assert_eq!(show(s_square_classes(&[2])), vec![1, -1, 2, -2]);
        assert_eq!(show(s_square_classes(&[3, 2])), vec![1, -1, 2, -2, 3, -3, 6, -6]);
    }
}
