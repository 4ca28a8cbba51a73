//! The supported field tower and exact element arithmetic.
//!
//! A [`FieldDesc`] is built from `Q` or `F_p` by adjoining a square root,
//! a Laurent-series variable, or a rational-function variable. Elements of
//! Laurent towers are stored as rational functions (an exact subfield of the
//! series field); only their valuation and leading coefficient matter for
//! square classes.

pub mod arith;
mod element;
mod parse;
mod poly;
mod square_class;

use std::fmt;

pub use element::{FieldElement, RatFn};
pub use poly::Poly;
pub use square_class::{s_square_classes, SquareClass};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDesc {
    Rationals,
    PrimeField(u64),
    /// `base(√a)` for a non-square class `a` of the base.
    QuadExt {
        base: Box<FieldDesc>,
        a: SquareClass,
    },
    /// `base((var))`
    LaurentExt {
        base: Box<FieldDesc>,
        var: String,
    },
    /// `base(var)`
    RatFuncExt {
        base: Box<FieldDesc>,
        var: String,
    },
}

impl FieldDesc {
    pub fn rationals() -> Self {
        FieldDesc::Rationals
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if p == 2 || !arith::is_prime(p) {
            return Err(Error::InvalidField(format!("F{p}: characteristic must be an odd prime")));
        }
        Ok(FieldDesc::PrimeField(p))
    }

    /// Adjoin `√a`; `a` must be a non-square of `self`.
    pub fn quad_ext(self, a: &FieldElement) -> Result<Self> {
        let class = self.square_class(a)?;
        if class.is_one() {
            return Err(Error::SquareArgument(self.format_element(a)));
        }
        Ok(FieldDesc::QuadExt { base: Box::new(self), a: class })
    }

    pub fn laurent(self, var: &str) -> Result<Self> {
        self.check_fresh(var)?;
        Ok(FieldDesc::LaurentExt { base: Box::new(self), var: var.to_string() })
    }

    pub fn rat_func(self, var: &str) -> Result<Self> {
        self.check_fresh(var)?;
        Ok(FieldDesc::RatFuncExt { base: Box::new(self), var: var.to_string() })
    }

    fn check_fresh(&self, var: &str) -> Result<()> {
        let ok = !var.is_empty()
            && var.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && var.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            && var != "pf"
            && var != "sqrt";
        if !ok {
            return Err(Error::InvalidField(format!("bad variable name `{var}`")));
        }
        if self.variables().iter().any(|v| v == var) {
            return Err(Error::InvalidField(format!("variable `{var}` already used in the tower")));
        }
        Ok(())
    }

    /// Variables of the tower, innermost first.
    pub fn variables(&self) -> Vec<String> {
        match self {
            FieldDesc::Rationals | FieldDesc::PrimeField(_) => Vec::new(),
            FieldDesc::QuadExt { base, .. } => base.variables(),
            FieldDesc::LaurentExt { base, var } | FieldDesc::RatFuncExt { base, var } => {
                let mut v = base.variables();
                v.push(var.clone());
                v
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDesc::Rationals => 0,
            FieldDesc::PrimeField(p) => *p,
            FieldDesc::QuadExt { base, .. }
            | FieldDesc::LaurentExt { base, .. }
            | FieldDesc::RatFuncExt { base, .. } => base.characteristic(),
        }
    }

    pub fn base(&self) -> Option<&FieldDesc> {
        match self {
            FieldDesc::Rationals | FieldDesc::PrimeField(_) => None,
            FieldDesc::QuadExt { base, .. }
            | FieldDesc::LaurentExt { base, .. }
            | FieldDesc::RatFuncExt { base, .. } => Some(base),
        }
    }

    /// The prime field `Q` or `F_p` at the bottom of the tower.
    pub fn ground(&self) -> &FieldDesc {
        match self.base() {
            Some(b) => b.ground(),
            None => self,
        }
    }

    /// Parse a field spec string such as `Q`, `F7`, `Q(sqrt -1)`,
    /// `F7((x))((y))` or `Q(x)`.
    pub fn parse(text: &str) -> Result<Self> {
        parse::parse_field(text)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDesc::Rationals => write!(f, "Q"),
            FieldDesc::PrimeField(p) => write!(f, "F{p}"),
            FieldDesc::QuadExt { base, a } => write!(f, "{base}(sqrt {})", base.format_class(a)),
            FieldDesc::LaurentExt { base, var } => write!(f, "{base}(({var}))"),
            FieldDesc::RatFuncExt { base, var } => write!(f, "{base}({var})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_two_rejected() {
        assert!(FieldDesc::prime_field(2).is_err());
        assert!(FieldDesc::prime_field(9).is_err());
        assert_eq!(FieldDesc::prime_field(7).unwrap().characteristic(), 7);
    }

    #[test]
    fn variables_must_be_distinct() {
        let f = FieldDesc::rationals().laurent("x").unwrap();
        assert!(f.clone().laurent("x").is_err());
        assert!(f.rat_func("y").is_ok());
    }

    #[test]
    fn quad_ext_requires_non_square() {
        let q = FieldDesc::rationals();
        assert!(matches!(q.clone().quad_ext(&FieldElement::from_i64(9)), Err(Error::SquareArgument(_))));
        assert!(q.quad_ext(&FieldElement::from_i64(-1)).is_ok());
    }

    #[test]
    fn display_round_trips() {
        for s in ["Q", "F7", "Q(sqrt -1)", "Q((x))", "F7((x))((y))", "Q(x)", "F5(sqrt 2)"] {
            let f = FieldDesc::parse(s).unwrap();
            assert_eq!(f.to_string(), s);
        }
    }
}
