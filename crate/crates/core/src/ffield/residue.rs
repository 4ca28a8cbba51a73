//! Residue maps for forms over `F(x)` with `F = Q` or `F_p`.
//!
//! Entries are classes `c·f` with `f` monic square-free. The second residue
//! at a monic irreducible `π` collects `c·f/π mod π` over the entries that
//! `π` divides. A form is hyperbolic over `F(x)` iff every second residue is
//! hyperbolic over `F[x]/(π)` and the first residue at infinity,
//! `⟨c : deg f even⟩`, is hyperbolic over `F`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement, Poly, SquareClass};
use crate::forms::QForm;
use crate::localglobal;

/// A diagonal form over the residue field `F[x]/(modulus)`, entries given as
/// reduced polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueForm {
    pub base: FieldDesc,
    pub modulus: Poly,
    pub entries: Vec<Poly>,
}

impl ResidueForm {
    /// The residue form as a form over `F` when the modulus is linear.
    pub fn to_form(&self) -> Result<Option<QForm>> {
        if self.modulus.degree() != Some(1) || self.entries.is_empty() {
            return Ok(None);
        }
        let els: Vec<FieldElement> =
            self.entries.iter().map(|e| e.coeffs().first().cloned().unwrap_or_else(|| self.base.zero())).collect();
        Ok(Some(QForm::new(&self.base, &els)?))
    }

    /// Hyperbolicity over the residue field; `None` when it cannot be
    /// decided (residue fields of degree > 1 over `Q`).
    pub fn is_hyperbolic(&self) -> Result<Option<bool>> {
        let f = &self.base;
        if self.entries.is_empty() {
            return Ok(Some(true));
        }
        if self.entries.len() % 2 == 1 {
            return Ok(Some(false));
        }
        if let Some(q) = self.to_form()? {
            return Ok(Some(localglobal::is_hyperbolic(&q)?));
        }
        match f {
            FieldDesc::PrimeField(p) => {
                // finite residue field: hyperbolic iff the discriminant is a square
                let m = self.entries.len() / 2;
                let mut disc = Poly::constant(f, f.int(if m % 2 == 1 { -1 } else { 1 }));
                for e in &self.entries {
                    disc = f.poly_divrem(&f.poly_mul(&disc, e), &self.modulus).1;
                }
                let k = self.modulus.degree().unwrap() as u32;
                let exp = (BigUint::from(*p).pow(k) - 1u32) / 2u32;
                Ok(Some(f.poly_is_one(&poly_powmod(f, &disc, &exp, &self.modulus))))
            }
            _ => {
                // only exact cancellation of opposite entries is recognized
                let mut rest: Vec<Poly> = self.entries.clone();
                while let Some(e) = rest.pop() {
                    let neg = f.poly_neg(&e);
                    match rest.iter().position(|x| *x == neg) {
                        Some(i) => {
                            rest.swap_remove(i);
                        }
                        None => return Ok(None),
                    }
                }
                Ok(Some(true))
            }
        }
    }
}

pub(crate) fn poly_mulmod(f: &FieldDesc, a: &Poly, b: &Poly, m: &Poly) -> Poly {
    f.poly_divrem(&f.poly_mul(a, b), m).1
}

pub(crate) fn poly_powmod(f: &FieldDesc, a: &Poly, e: &BigUint, m: &Poly) -> Poly {
    let mut acc = f.poly_divrem(&Poly::one(f), m).1;
    let base = f.poly_divrem(a, m).1;
    for i in (0..e.bits()).rev() {
        acc = poly_mulmod(f, &acc, &acc, m);
        if e.bit(i) {
            acc = poly_mulmod(f, &acc, &base, m);
        }
    }
    acc
}

fn x_poly(f: &FieldDesc) -> Poly {
    Poly::from_coeffs(f, vec![f.zero(), f.one()])
}

/// Irreducible factors of a monic square-free polynomial over `F_p`
/// (distinct-degree, then Cantor–Zassenhaus splitting).
pub fn factor_over_prime_field(f: &FieldDesc, poly: &Poly) -> Vec<Poly> {
    let FieldDesc::PrimeField(p) = f else { panic!("prime field expected") };
    let p = *p;
    let mut out = Vec::new();
    let mut rest = f.poly_monic(poly);
    let x = x_poly(f);
    let mut h = x.clone();
    let mut d = 1usize;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = poly_powmod(f, &h, &BigUint::from(p), &rest);
        let g = f.poly_gcd(&f.poly_sub(&h, &x), &rest);
        if g.degree().unwrap_or(0) > 0 {
            rest = f.poly_divrem(&rest, &g).0;
            h = f.poly_divrem(&h, &rest).1;
            equal_degree(f, p, &g, d, &mut out);
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out.sort_by_key(|g| (g.degree(), format!("{g:?}")));
    out
}

fn equal_degree(f: &FieldDesc, p: u64, g: &Poly, d: usize, out: &mut Vec<Poly>) {
    let n = g.degree().unwrap();
    if n == d {
        out.push(g.clone());
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64 * 7919 + d as u64);
    let exp = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a = Poly::from_coeffs(f, (0..n).map(|_| FieldElement::Residue(rng.gen_range(0..p))).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = f.poly_sub(&poly_powmod(f, &a, &exp, g), &Poly::one(f));
        let h = f.poly_gcd(&b, g);
        let dh = h.degree().unwrap_or(0);
        if dh > 0 && dh < n {
            equal_degree(f, p, &h, d, out);
            equal_degree(f, p, &f.poly_divrem(g, &h).0, d, out);
            return;
        }
    }
}

fn divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    let n = n.abs().to_u64().unwrap_or(0);
    if n == 0 || n > 1_000_000_000_000 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d.into());
            if d * d != n {
                out.push((n / d).into());
            }
        }
        d += 1;
    }
    out
}

/// Linear factors of a monic square-free rational polynomial (rational root
/// test) and the remaining cofactor.
pub fn rational_linear_factors(f: &FieldDesc, poly: &Poly) -> (Vec<Poly>, Poly) {
    let mut rest = f.poly_monic(poly);
    let mut roots: Vec<BigRational> = Vec::new();
    // clear denominators
    let coeffs: Vec<BigRational> = rest.coeffs().iter().map(|c| c.as_rational().unwrap().clone()).collect();
    let lcm = coeffs.iter().fold(num_bigint::BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<num_bigint::BigInt> =
        coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let Some(lowest) = ints.iter().position(|c| !c.is_zero()) else { return (Vec::new(), rest) };
    if lowest > 0 {
        roots.push(BigRational::zero());
    }
    for num in divisors(&ints[lowest]) {
        for den in divisors(ints.last().unwrap()) {
            for sign in [1, -1] {
                let r = BigRational::new(num.clone() * sign, den.clone());
                if !roots.contains(&r) && f.poly_eval(&rest, &FieldElement::Rational(r.clone())) == f.zero() {
                    roots.push(r);
                }
            }
        }
    }
    let mut lin = Vec::new();
    for r in roots {
        let l = Poly::from_coeffs(f, vec![FieldElement::Rational(-r), f.one()]);
        rest = f.poly_divrem(&rest, &l).0;
        lin.push(l);
    }
    (lin, rest)
}

/// Pairwise coprime polynomials generating the same factors as `polys`.
fn coprime_basis(f: &FieldDesc, polys: Vec<Poly>) -> Vec<Poly> {
    let mut basis: Vec<Poly> = polys.into_iter().filter(|p| p.degree().unwrap_or(0) > 0).collect();
    'outer: loop {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let g = f.poly_gcd(&basis[i], &basis[j]);
                if g.degree().unwrap_or(0) > 0 {
                    let a = f.poly_divrem(&basis[i], &g).0;
                    let b = f.poly_divrem(&basis[j], &g).0;
                    basis.remove(j);
                    basis.remove(i);
                    basis.extend([g, a, b].into_iter().filter(|p| p.degree().unwrap_or(0) > 0));
                    continue 'outer;
                }
            }
        }
        basis.dedup();
        return basis;
    }
}

fn split_entries(q: &QForm) -> Result<(&FieldDesc, Vec<(SquareClass, Poly)>)> {
    let FieldDesc::RatFuncExt { base, .. } = q.field() else {
        return Err(Error::UnsupportedField(format!("residues need a rational function field, got {}", q.field())));
    };
    let entries = q
        .diag()
        .iter()
        .map(|c| match c {
            SquareClass::RatFunc { constant, poly } => ((**constant).clone(), poly.0.clone()),
            _ => unreachable!(),
        })
        .collect();
    Ok((base, entries))
}

/// First residue at infinity: `⟨c : deg f even⟩` over `F`.
pub fn first_residue(q: &QForm) -> Result<Option<QForm>> {
    let (base, entries) = split_entries(q)?;
    let cls: Vec<SquareClass> =
        entries.into_iter().filter(|(_, f)| f.degree().unwrap() % 2 == 0).map(|(c, _)| c).collect();
    if cls.is_empty() {
        Ok(None)
    } else {
        Ok(Some(QForm::from_classes(base, cls)?))
    }
}

/// Second residue at a monic square-free `pi` (irreducible for the
/// residue to live in a field).
pub fn second_residue(q: &QForm, pi: &Poly) -> Result<ResidueForm> {
    let (base, entries) = split_entries(q)?;
    if pi.degree().unwrap_or(0) == 0 {
        return Err(Error::UnsupportedInput("residue at a constant polynomial".into()));
    }
    if !base.poly_is_one(&Poly::constant(base, pi.leading().unwrap().clone())) {
        return Err(Error::NonMonic);
    }
    if base.poly_gcd(pi, &base.poly_deriv(pi)).degree().unwrap_or(0) > 0 {
        return Err(Error::NotSquareFree);
    }
    let mut out = Vec::new();
    for (c, f) in entries {
        let (quo, rem) = base.poly_divrem(&f, pi);
        if rem.is_zero() {
            let cpoly = Poly::constant(base, base.class_rep(&c));
            out.push(base.poly_divrem(&base.poly_mul(&cpoly, &quo), pi).1);
        }
    }
    Ok(ResidueForm { base: base.clone(), modulus: pi.clone(), entries: out })
}

/// Primes of `F[x]` at which some entry has odd valuation, grouped so that
/// the list is pairwise coprime; over `Q` only linear factors are split
/// off, the rest stays as (possibly reducible) blocks.
pub fn residue_primes(q: &QForm) -> Result<Vec<Poly>> {
    let (base, entries) = split_entries(q)?;
    let mut polys = Vec::new();
    for (_, f) in entries {
        match base {
            FieldDesc::PrimeField(_) => polys.extend(factor_over_prime_field(base, &f)),
            FieldDesc::Rationals => {
                let (lin, rest) = rational_linear_factors(base, &f);
                polys.extend(lin);
                polys.push(rest);
            }
            _ => return Err(Error::UnsupportedField(format!("residues over {}", q.field()))),
        }
    }
    Ok(coprime_basis(base, polys))
}

/// Hyperbolicity over `F(x)`. `None` when some residue cannot be decided.
pub fn hyperbolic_over_rational_function_field(q: &QForm) -> Result<Option<bool>> {
    if q.dim() % 2 == 1 {
        return Ok(Some(false));
    }
    let mut unknown = false;
    for pi in residue_primes(q)? {
        let r = second_residue_block(q, &pi)?;
        match r.is_hyperbolic()? {
            Some(false) => return Ok(Some(false)),
            Some(true) => {}
            None => unknown = true,
        }
    }
    let first = match first_residue(q)? {
        None => true,
        Some(f) => localglobal::is_hyperbolic(&f)?,
    };
    if !first {
        return Ok(Some(false));
    }
    Ok(if unknown { None } else { Some(true) })
}

/// Like [`second_residue`] but without the irreducibility-related checks,
/// for blocks of the coprime basis.
fn second_residue_block(q: &QForm, pi: &Poly) -> Result<ResidueForm> {
    let (base, entries) = split_entries(q)?;
    let mut out = Vec::new();
    for (c, f) in entries {
        let (quo, rem) = base.poly_divrem(&f, pi);
        if rem.is_zero() {
            let cpoly = Poly::constant(base, base.class_rep(&c));
            out.push(base.poly_divrem(&base.poly_mul(&cpoly, &quo), pi).1);
        }
    }
    Ok(ResidueForm { base: base.clone(), modulus: pi.clone(), entries: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_form;

    fn form(f: &str, s: &str) -> QForm {
        parse_form(s, &FieldDesc::parse(f).unwrap()).unwrap()
    }

    fn poly(f: &FieldDesc, c: &[i64]) -> Poly {
        Poly::from_coeffs(f, c.iter().map(|&x| f.int(x)).collect())
    }

    #[test]
    fn residues_at_x() {
        let q = form("F7(x)", "<1,-x>");
        let f7 = FieldDesc::prime_field(7).unwrap();
        let r = second_residue(&q, &poly(&f7, &[0, 1])).unwrap();
        // −1 is the non-residue class of F7, printed as 3
        assert_eq!(r.to_form().unwrap().unwrap().to_string(), "<3>");
        assert_eq!(hyperbolic_over_rational_function_field(&q).unwrap(), Some(false));
        let q = form("F7(x)", "<1,-1,x,-x>");
        assert_eq!(hyperbolic_over_rational_function_field(&q).unwrap(), Some(true));
        let q = form("Q(x)", "<x+1, -(x+1)*9>");
        assert_eq!(hyperbolic_over_rational_function_field(&q).unwrap(), Some(true));
        assert!(matches!(second_residue(&q, &poly(&FieldDesc::Rationals, &[0, 2])), Err(Error::NonMonic)));
        assert!(matches!(second_residue(&q, &poly(&FieldDesc::Rationals, &[0, 0, 1])), Err(Error::NotSquareFree)));
    }

    #[test]
    fn factorization_over_f5() {
        let f5 = FieldDesc::prime_field(5).unwrap();
        // (x² + 2)(x + 1)(x + 3), x² + 2 irreducible mod 5
        let g = f5.poly_mul(&f5.poly_mul(&poly(&f5, &[2, 0, 1]), &poly(&f5, &[1, 1])), &poly(&f5, &[3, 1]));
        let fac = factor_over_prime_field(&f5, &g);
        assert_eq!(fac.len(), 3);
        let prod = fac.iter().fold(Poly::one(&f5), |a, b| f5.poly_mul(&a, b));
        assert_eq!(prod, g);
    }

    #[test]
    fn quadratic_residue_fields() {
        assert_eq!(hyperbolic_over_rational_function_field(&form("F5(x)", "<x^2+2, -(x^2+2)>")).unwrap(), Some(true));
        // residue ⟨1,2⟩ is hyperbolic over F25 but the first residue is not
        assert_eq!(hyperbolic_over_rational_function_field(&form("F5(x)", "<x^2+2, 2*(x^2+2)>")).unwrap(), Some(false));
        // x³+x+1 is irreducible mod 5; 3 stays a non-square in F125
        assert_eq!(
            hyperbolic_over_rational_function_field(&form("F5(x)", "<x^3+x+1, 2*(x^3+x+1)>")).unwrap(),
            Some(false)
        );
        assert_eq!(
            hyperbolic_over_rational_function_field(&form("F5(x)", "<x^3+x+1, -(x^3+x+1)>")).unwrap(),
            Some(true)
        );
        assert_eq!(hyperbolic_over_rational_function_field(&form("Q(x)", "<x^2+1, -2*(x^2+1), 1, -2>")).unwrap(), None);
        assert_eq!(
            hyperbolic_over_rational_function_field(&form("Q(x)", "<x-1, -(x-1)*(x+1), x+1, -1>")).unwrap(),
            Some(false)
        );
    }
}
