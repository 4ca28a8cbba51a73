use super::element::FieldElement;
use super::FieldDesc;
use crate::error::Result;

/// Dense univariate polynomial, coefficients low degree first, no trailing
/// zeros. Arithmetic goes through the coefficient [`FieldDesc`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(field: &FieldDesc) -> Self {
        Poly { coeffs: vec![field.one()] }
    }

    pub fn constant(field: &FieldDesc, c: FieldElement) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn from_coeffs(field: &FieldDesc, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn order(&self, field: &FieldDesc) -> Option<usize> {
        self.coeffs.iter().position(|c| !field.is_zero(c))
    }
}

impl FieldDesc {
    pub fn poly_add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.zero();
        let coeffs =
            (0..n).map(|i| self.add(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero))).collect();
        Poly::from_coeffs(self, coeffs)
    }

    pub fn poly_neg(&self, a: &Poly) -> Poly {
        Poly { coeffs: a.coeffs.iter().map(|c| self.neg(c)).collect() }
    }

    pub fn poly_sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.poly_add(a, &self.poly_neg(b))
    }

    pub fn poly_scale(&self, a: &Poly, c: &FieldElement) -> Poly {
        Poly::from_coeffs(self, a.coeffs.iter().map(|x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        Poly::from_coeffs(self, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn poly_divrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let db = b.degree().expect("division by zero polynomial");
        let linv = self.inv(b.leading().unwrap()).unwrap();
        let mut rem = a.coeffs.clone();
        let mut quot = vec![self.zero(); a.coeffs.len().saturating_sub(db)];
        while rem.len() > db && !rem.is_empty() {
            let k = rem.len() - 1 - db;
            let c = self.mul(rem.last().unwrap(), &linv);
            for (j, bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = self.sub(&rem[k + j], &self.mul(&c, bj));
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(|x| self.is_zero(x)) {
                rem.pop();
            }
        }
        (Poly::from_coeffs(self, quot), Poly::from_coeffs(self, rem))
    }

    pub fn poly_monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some(l) => self.poly_scale(a, &self.inv(l).unwrap()),
        }
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn poly_gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_divrem(&x, &y).1;
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    pub fn poly_deriv(&self, a: &Poly) -> Poly {
        let coeffs = a.coeffs.iter().enumerate().skip(1).map(|(i, c)| self.mul(&self.int(i as i64), c)).collect();
        Poly::from_coeffs(self, coeffs)
    }

    pub fn poly_eval(&self, a: &Poly, x: &FieldElement) -> FieldElement {
        a.coeffs.iter().rev().fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    pub fn poly_is_one(&self, a: &Poly) -> bool {
        a.coeffs.len() == 1 && a.coeffs[0] == self.one()
    }

    /// Square-free factorization of a monic polynomial: pairs (factor,
    /// multiplicity) with pairwise coprime square-free factors. Works in
    /// characteristic 0 and over prime fields.
    pub fn poly_square_free_factors(&self, f: &Poly) -> Result<Vec<(Poly, usize)>> {
        let mut out = Vec::new();
        if f.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let fp = self.poly_deriv(f);
        let mut c = self.poly_gcd(f, &fp);
        let mut w = self.poly_divrem(f, &c).0;
        let mut i = 1;
        while !self.poly_is_one(&w) {
            let y = self.poly_gcd(&w, &c);
            let fac = self.poly_divrem(&w, &y).0;
            if fac.degree().unwrap_or(0) > 0 {
                out.push((self.poly_monic(&fac), i));
            }
            i += 1;
            w = y;
            c = self.poly_divrem(&c, &w).0;
        }
        if !self.poly_is_one(&c) {
            // remaining factor is a p-th power; over F_p its p-th root just
            // drops the zero coefficients
            let p = self.characteristic() as usize;
            if p == 0 || !matches!(self, FieldDesc::PrimeField(_)) {
                return Err(crate::error::Error::UnsupportedField(format!("square-free factorization over {self}")));
            }
            let root = Poly::from_coeffs(self, c.coeffs.iter().step_by(p).cloned().collect());
            for (g, m) in self.poly_square_free_factors(&self.poly_monic(&root))? {
                out.push((g, m * p));
            }
        }
        Ok(out)
    }

    pub fn format_poly(&self, a: &Poly, var: &str) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for (i, c) in a.coeffs.iter().enumerate().rev() {
            if self.is_zero(c) {
                continue;
            }
            let cs = self.format_element(c);
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let needs_paren = cs.contains(['+', '*', '/']) || (cs[1..].contains('-'));
            let cs = if needs_paren { format!("({cs})") } else { cs };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (_, "1") => mono,
                (_, "-1") => format!("-{mono}"),
                _ => format!("{cs}*{mono}"),
            });
        }
        let mut s = terms[0].clone();
        for t in &terms[1..] {
            if let Some(rest) = t.strip_prefix('-') {
                s.push_str(&format!(" - {rest}"));
            } else {
                s.push_str(&format!(" + {t}"));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qpoly(f: &FieldDesc, c: &[i64]) -> Poly {
        Poly::from_coeffs(f, c.iter().map(|&x| f.int(x)).collect())
    }

    #[test]
    fn gcd_and_division() {
        let q = FieldDesc::rationals();
        let a = qpoly(&q, &[-1, 0, 1]); // x^2 - 1
        let b = qpoly(&q, &[1, 1]); // x + 1
        assert_eq!(q.poly_gcd(&a, &b), b);
        let (quo, rem) = q.poly_divrem(&a, &b);
        assert_eq!(quo, qpoly(&q, &[-1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn square_free_factorization_char_zero() {
        let q = FieldDesc::rationals();
        // (x+1)^2 (x-2)^3
        let xp1 = qpoly(&q, &[1, 1]);
        let xm2 = qpoly(&q, &[-2, 1]);
        let f = q.poly_mul(&q.poly_mul(&xp1, &xp1), &q.poly_mul(&xm2, &q.poly_mul(&xm2, &xm2)));
        let fac = q.poly_square_free_factors(&f).unwrap();
        assert_eq!(fac, vec![(xp1, 2), (xm2, 3)]);
    }

    #[test]
    fn square_free_factorization_char_p() {
        let f3 = FieldDesc::prime_field(3).unwrap();
        // x^3 + 1 = (x+1)^3 over F3, times x
        let g = qpoly(&f3, &[0, 1, 0, 0, 1]);
        let fac = f3.poly_square_free_factors(&g).unwrap();
        assert_eq!(fac, vec![(qpoly(&f3, &[0, 1]), 1), (qpoly(&f3, &[1, 1]), 3)]);
    }
}
