//! Random instance generators and base change.

use rand::Rng;

use crate::error::Result;
use crate::fields::arith::square_free_part;
use crate::fields::{FieldDesc, FieldElement, SquareClass};
use crate::forms::QForm;
use crate::pfister::PfisterSpec;

pub const SMALL_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];

/// A square-free integer in `[−h, h]`, drawn as a nonzero integer and
/// reduced.
pub fn sqfree<R: Rng + ?Sized>(rng: &mut R, h: i64) -> i64 {
    loop {
        let n: i64 = rng.gen_range(-h..=h);
        if n != 0 {
            let s = square_free_part(n.unsigned_abs() as u128, u64::MAX).unwrap() as i64;
            return n.signum() * s;
        }
    }
}

/// A square-free integer other than 1.
pub fn nonsquare<R: Rng + ?Sized>(rng: &mut R, h: i64) -> i64 {
    loop {
        let a = sqfree(rng, h);
        if a != 1 {
            return a;
        }
    }
}

pub fn rational_entries<R: Rng + ?Sized>(rng: &mut R, dim: usize, h: i64) -> Vec<i64> {
    (0..dim).map(|_| sqfree(rng, h)).collect()
}

pub fn rational_form(e: &[i64]) -> QForm {
    QForm::from_ints(&FieldDesc::Rationals, e).unwrap()
}

pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, dim: usize, h: i64) -> QForm {
    rational_form(&rational_entries(rng, dim, h))
}

pub fn residue_entries<R: Rng + ?Sized>(rng: &mut R, p: u64, dim: usize) -> Vec<u64> {
    (0..dim).map(|_| rng.gen_range(1..p)).collect()
}

pub fn residue_form(p: u64, e: &[u64]) -> QForm {
    let f = FieldDesc::PrimeField(p);
    QForm::new(&f, &e.iter().map(|&a| FieldElement::Residue(a)).collect::<Vec<_>>()).unwrap()
}

/// A random form over `field` with entries of height `h` (or uniform
/// residues).
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, field: &FieldDesc, dim: usize, h: i64) -> QForm {
    match field {
        FieldDesc::Rationals => random_rational(rng, dim, h),
        FieldDesc::PrimeField(p) => residue_form(*p, &residue_entries(rng, *p, dim)),
        _ => {
            let e: Vec<FieldElement> = (0..dim)
                .map(|_| loop {
                    let x = field.random_element(rng, h);
                    if !field.is_zero(&x) {
                        break x;
                    }
                })
                .collect();
            QForm::new(field, &e).unwrap()
        }
    }
}

pub fn rational_pfister<R: Rng + ?Sized>(rng: &mut R, n: usize, h: i64) -> PfisterSpec {
    PfisterSpec::new((0..n).map(|_| SquareClass::Rational(sqfree(rng, h))).collect())
}

/// `q` over `F(√d)`; classes of the base are kept as they are.
pub fn to_quad_ext(q: &QForm, d: i64) -> Result<QForm> {
    let k = q.field().clone().quad_ext(&FieldElement::from_i64(d))?;
    QForm::from_classes(&k, q.diag().to_vec())
}

/// `q` over `F((var))`.
pub fn to_laurent(q: &QForm, var: &str) -> Result<QForm> {
    let k = q.field().clone().laurent(var)?;
    let diag = q.diag().iter().map(|c| k.class_embed(c.clone())).collect();
    QForm::from_classes(&k, diag)
}

/// `⟨e⟩ ⊥ x⟨o⟩` over `base((x))`.
pub fn laurent_pair(base: &FieldDesc, e: &QForm, o: &QForm, var: &str) -> Result<QForm> {
    let k = base.clone().laurent(var)?;
    let diag = e
        .diag()
        .iter()
        .map(|c| SquareClass::Laurent { base: Box::new(c.clone()), odd: false })
        .chain(o.diag().iter().map(|c| SquareClass::Laurent { base: Box::new(c.clone()), odd: true }))
        .collect();
    QForm::from_classes(&k, diag)
}
