use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::arith::mod_inv;
use super::poly::Poly;
use super::FieldDesc;
use crate::error::{Error, Result};

/// An exact element of some [`FieldDesc`]. The variant must match the field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue(u64),
    /// `u + v·√a`
    Quad(Box<FieldElement>, Box<FieldElement>),
    /// A rational function in the outermost variable, used both for
    /// `F(x)` and as an exact stand-in for Laurent series in `F((x))`.
    Function(RatFn),
}

/// Reduced quotient of polynomials: `gcd(num, den) = 1`, `den` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    pub(crate) num: Poly,
    pub(crate) den: Poly,
}

impl RatFn {
    pub fn num(&self) -> &Poly {
        &self.num
    }
    pub fn den(&self) -> &Poly {
        &self.den
    }
}

impl FieldElement {
    pub fn from_i64(n: i64) -> Self {
        FieldElement::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        FieldElement::Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            _ => None,
        }
    }
}

impl FieldDesc {
    pub fn zero(&self) -> FieldElement {
        self.int(0)
    }

    pub fn one(&self) -> FieldElement {
        self.int(1)
    }

    /// The image of an integer in this field.
    pub fn int(&self, n: i64) -> FieldElement {
        match self {
            FieldDesc::Rationals => FieldElement::from_i64(n),
            FieldDesc::PrimeField(p) => FieldElement::Residue(n.rem_euclid(*p as i64) as u64),
            FieldDesc::QuadExt { base, .. } => FieldElement::Quad(Box::new(base.int(n)), Box::new(base.zero())),
            FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. } => {
                FieldElement::Function(RatFn { num: Poly::constant(base, base.int(n)), den: Poly::one(base) })
            }
        }
    }

    /// The image of a rational number; fails in characteristic p when the
    /// denominator vanishes.
    pub fn rational(&self, r: &BigRational) -> Result<FieldElement> {
        match self {
            FieldDesc::Rationals => Ok(FieldElement::Rational(r.clone())),
            FieldDesc::PrimeField(p) => {
                let reduce = |n: &BigInt| -> u64 {
                    let m = BigInt::from(*p);
                    ((n % &m + &m) % &m).to_u64().unwrap()
                };
                let num = reduce(r.numer());
                let den = mod_inv(reduce(r.denom()), *p).ok_or(Error::ZeroElement)?;
                Ok(FieldElement::Residue((num as u128 * den as u128 % *p as u128) as u64))
            }
            _ => {
                let base = self.base().unwrap();
                Ok(self.embed(base.rational(r)?))
            }
        }
    }

    /// Embed an element of the immediate base field.
    pub fn embed(&self, e: FieldElement) -> FieldElement {
        match self {
            FieldDesc::QuadExt { base, .. } => FieldElement::Quad(Box::new(e), Box::new(base.zero())),
            FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. } => {
                FieldElement::Function(RatFn { num: Poly::constant(base, e), den: Poly::one(base) })
            }
            _ => e,
        }
    }

    /// The generator of the named variable, embedded in this field.
    pub fn variable(&self, name: &str) -> Result<FieldElement> {
        match self {
            FieldDesc::LaurentExt { base, var } | FieldDesc::RatFuncExt { base, var } => {
                if var == name {
                    Ok(FieldElement::Function(RatFn {
                        num: Poly::from_coeffs(base, vec![base.zero(), base.one()]),
                        den: Poly::one(base),
                    }))
                } else {
                    Ok(self.embed(base.variable(name)?))
                }
            }
            FieldDesc::QuadExt { base, .. } => Ok(self.embed(base.variable(name)?)),
            _ => Err(Error::UnknownVariable(name.to_string())),
        }
    }

    /// `√a` in `F(√a)`.
    pub fn sqrt_generator(&self) -> Result<FieldElement> {
        match self {
            FieldDesc::QuadExt { base, .. } => Ok(FieldElement::Quad(Box::new(base.zero()), Box::new(base.one()))),
            _ => Err(Error::UnsupportedField(format!("{self} is not a quadratic extension"))),
        }
    }

    pub fn is_zero(&self, e: &FieldElement) -> bool {
        match e {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Residue(r) => *r == 0,
            FieldElement::Quad(u, v) => {
                let base = self.base().unwrap();
                base.is_zero(u) && base.is_zero(v)
            }
            FieldElement::Function(f) => f.num.is_zero(),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldDesc::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x + y)
            }
            (FieldDesc::PrimeField(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue((x + y) % p)
            }
            (FieldDesc::QuadExt { base, .. }, FieldElement::Quad(u1, v1), FieldElement::Quad(u2, v2)) => {
                FieldElement::Quad(Box::new(base.add(u1, u2)), Box::new(base.add(v1, v2)))
            }
            (
                FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. },
                FieldElement::Function(f),
                FieldElement::Function(g),
            ) => {
                let num = base.poly_add(&base.poly_mul(&f.num, &g.den), &base.poly_mul(&g.num, &f.den));
                FieldElement::Function(base.ratfn(num, base.poly_mul(&f.den, &g.den)))
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (FieldDesc::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            (FieldDesc::PrimeField(p), FieldElement::Residue(x)) => FieldElement::Residue((p - x) % p),
            (FieldDesc::QuadExt { base, .. }, FieldElement::Quad(u, v)) => {
                FieldElement::Quad(Box::new(base.neg(u)), Box::new(base.neg(v)))
            }
            (FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. }, FieldElement::Function(f)) => {
                FieldElement::Function(RatFn { num: base.poly_neg(&f.num), den: f.den.clone() })
            }
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (FieldDesc::Rationals, FieldElement::Rational(x), FieldElement::Rational(y)) => {
                FieldElement::Rational(x * y)
            }
            (FieldDesc::PrimeField(p), FieldElement::Residue(x), FieldElement::Residue(y)) => {
                FieldElement::Residue((*x as u128 * *y as u128 % *p as u128) as u64)
            }
            (FieldDesc::QuadExt { base, a }, FieldElement::Quad(u1, v1), FieldElement::Quad(u2, v2)) => {
                let a = base.class_rep(a);
                let u = base.add(&base.mul(u1, u2), &base.mul(&a, &base.mul(v1, v2)));
                let v = base.add(&base.mul(u1, v2), &base.mul(v1, u2));
                FieldElement::Quad(Box::new(u), Box::new(v))
            }
            (
                FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. },
                FieldElement::Function(f),
                FieldElement::Function(g),
            ) => FieldElement::Function(base.ratfn(base.poly_mul(&f.num, &g.num), base.poly_mul(&f.den, &g.den))),
            _ => panic!("element does not belong to {self}"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if self.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        Ok(match (self, a) {
            (FieldDesc::Rationals, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            (FieldDesc::PrimeField(p), FieldElement::Residue(x)) => FieldElement::Residue(mod_inv(*x, *p).unwrap()),
            (FieldDesc::QuadExt { base, a }, FieldElement::Quad(u, v)) => {
                // (u - v√a) / (u² - a v²)
                let a = base.class_rep(a);
                let norm = base.sub(&base.mul(u, u), &base.mul(&a, &base.mul(v, v)));
                let ninv = base.inv(&norm)?;
                FieldElement::Quad(Box::new(base.mul(u, &ninv)), Box::new(base.neg(&base.mul(v, &ninv))))
            }
            (FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. }, FieldElement::Function(f)) => {
                FieldElement::Function(base.ratfn(f.den.clone(), f.num.clone()))
            }
            _ => panic!("element does not belong to {self}"),
        })
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        Ok(acc)
    }

    /// Build a reduced rational function over `self` (the coefficient field).
    pub(crate) fn ratfn(&self, num: Poly, den: Poly) -> RatFn {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFn { num, den: Poly::one(self) };
        }
        let g = self.poly_gcd(&num, &den);
        let num = self.poly_divrem(&num, &g).0;
        let den = self.poly_divrem(&den, &g).0;
        let lc = den.leading().unwrap().clone();
        let linv = self.inv(&lc).unwrap();
        RatFn { num: self.poly_scale(&num, &linv), den: self.poly_scale(&den, &linv) }
    }

    /// A random element of small height; used for sampling represented values.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> FieldElement {
        match self {
            FieldDesc::Rationals => FieldElement::from_i64(rng.gen_range(-height..=height)),
            FieldDesc::PrimeField(p) => FieldElement::Residue(rng.gen_range(0..*p)),
            FieldDesc::QuadExt { base, .. } => FieldElement::Quad(
                Box::new(base.random_element(rng, height)),
                Box::new(base.random_element(rng, height)),
            ),
            FieldDesc::LaurentExt { base, .. } | FieldDesc::RatFuncExt { base, .. } => {
                let deg = rng.gen_range(0..=2usize);
                let mut coeffs: Vec<FieldElement> = (0..deg).map(|_| base.zero()).collect();
                coeffs.push(base.random_element(rng, height));
                if rng.gen_bool(0.3) {
                    coeffs.push(base.random_element(rng, height));
                }
                FieldElement::Function(RatFn { num: Poly::from_coeffs(base, coeffs), den: Poly::one(base) })
            }
        }
    }

    /// Human-readable element, in the syntax accepted by the form parser.
    pub fn format_element(&self, e: &FieldElement) -> String {
        match (self, e) {
            (_, FieldElement::Rational(r)) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            (FieldDesc::PrimeField(p), FieldElement::Residue(x)) => {
                // print in the symmetric range so that -1 reads as -1
                let x = *x as i64;
                let p = *p as i64;
                if x > p / 2 {
                    (x - p).to_string()
                } else {
                    x.to_string()
                }
            }
            (FieldDesc::QuadExt { base, a }, FieldElement::Quad(u, v)) => {
                let a = base.format_class(a);
                if base.is_zero(v) {
                    base.format_element(u)
                } else {
                    format!("({} + ({})*sqrt({a}))", base.format_element(u), base.format_element(v))
                }
            }
            (FieldDesc::LaurentExt { base, var } | FieldDesc::RatFuncExt { base, var }, FieldElement::Function(f)) => {
                let num = base.format_poly(&f.num, var);
                if f.den.degree() == Some(0) {
                    num
                } else {
                    format!("({num})/({})", base.format_poly(&f.den, var))
                }
            }
            _ => format!("{e:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_extension_arithmetic() {
        let k = FieldDesc::parse("Q(sqrt 2)").unwrap();
        let s = k.sqrt_generator().unwrap();
        assert_eq!(k.mul(&s, &s), k.int(2));
        let x = k.add(&k.int(1), &s);
        let y = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &y), k.one());
    }

    #[test]
    fn rational_function_normalization() {
        let f = FieldDesc::parse("Q(x)").unwrap();
        let x = f.variable("x").unwrap();
        let xp1 = f.add(&x, &f.one());
        let a = f.mul(&xp1, &xp1);
        let b = f.div(&a, &xp1).unwrap();
        assert_eq!(b, xp1);
        assert_eq!(f.sub(&b, &xp1), f.zero());
    }

    #[test]
    fn nested_laurent_variables() {
        let f = FieldDesc::parse("F7((x))((y))").unwrap();
        let x = f.variable("x").unwrap();
        let y = f.variable("y").unwrap();
        let xy = f.mul(&x, &y);
        assert_eq!(f.div(&xy, &y).unwrap(), x);
        assert!(f.variable("z").is_err());
    }

    #[test]
    fn prime_field_rationals() {
        let f = FieldDesc::prime_field(7).unwrap();
        let half = f.rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(f.mul(&half, &f.int(2)), f.one());
        assert!(f.rational(&BigRational::new(1.into(), 7.into())).is_err());
    }
}
