//! Diagonal quadratic forms and their elementary algebra.
//!
//! Entries are stored as canonical square classes, so two forms that print
//! the same are entry-wise equal. Isometry is a separate question answered by
//! [`crate::localglobal`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement, SquareClass};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QForm {
    field: FieldDesc,
    diag: Vec<SquareClass>,
}

impl QForm {
    /// `⟨a₁,…,aₙ⟩`; entries must be nonzero and `n ≥ 1`.
    pub fn new(field: &FieldDesc, entries: &[FieldElement]) -> Result<Self> {
        let diag = entries
            .iter()
            .map(|e| if field.is_zero(e) { Err(Error::ZeroEntry) } else { field.entry_class(e) })
            .collect::<Result<Vec<_>>>()?;
        Self::from_classes(field, diag)
    }

    pub fn from_classes(field: &FieldDesc, diag: Vec<SquareClass>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyForm);
        }
        Ok(QForm { field: field.clone(), diag })
    }

    /// Convenience constructor from integer entries.
    pub fn from_ints(field: &FieldDesc, entries: &[i64]) -> Result<Self> {
        let elems: Vec<FieldElement> = entries.iter().map(|&n| field.int(n)).collect();
        Self::new(field, &elems)
    }

    /// `k` copies of the hyperbolic plane `⟨1,−1⟩`.
    pub fn hyperbolic(field: &FieldDesc, k: usize) -> Result<Self> {
        let mut diag = Vec::with_capacity(2 * k);
        for _ in 0..k {
            diag.push(field.class_field().class_one());
            diag.push(field.class_minus_one());
        }
        Self::from_classes(field, diag)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[SquareClass] {
        &self.diag
    }

    /// Entries as field elements (canonical representatives).
    pub fn elements(&self) -> Vec<FieldElement> {
        self.diag.iter().map(|c| self.field.class_element(c)).collect()
    }

    fn check_field(&self, other: &QForm) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn orth_sum(&self, other: &QForm) -> Result<QForm> {
        self.check_field(other)?;
        let mut diag = self.diag.clone();
        diag.extend(other.diag.iter().cloned());
        Ok(QForm { field: self.field.clone(), diag })
    }

    pub fn tensor(&self, other: &QForm) -> Result<QForm> {
        self.check_field(other)?;
        let mut diag = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.diag {
            for b in &other.diag {
                diag.push(self.field.class_mul(a, b)?);
            }
        }
        Ok(QForm { field: self.field.clone(), diag })
    }

    pub fn scale(&self, a: &FieldElement) -> Result<QForm> {
        if self.field.is_zero(a) {
            return Err(Error::ZeroElement);
        }
        self.scale_class(&self.field.entry_class(a)?)
    }

    pub fn scale_class(&self, c: &SquareClass) -> Result<QForm> {
        let diag = self.diag.iter().map(|d| self.field.class_mul(d, c)).collect::<Result<_>>()?;
        Ok(QForm { field: self.field.clone(), diag })
    }

    pub fn neg(&self) -> QForm {
        self.scale_class(&self.field.class_minus_one()).expect("-1 is a unit")
    }

    /// Witt difference `q ⊥ −other`.
    pub fn minus(&self, other: &QForm) -> Result<QForm> {
        self.orth_sum(&other.neg())
    }

    pub fn determinant(&self) -> SquareClass {
        self.field.class_product(&self.diag).expect("class products stay in range")
    }

    /// `(−1)^{n(n−1)/2}·det`.
    pub fn discriminant(&self) -> SquareClass {
        let n = self.dim();
        let det = self.determinant();
        if (n * (n - 1) / 2) % 2 == 1 {
            self.field.class_neg(&det).expect("class products stay in range")
        } else {
            det
        }
    }

    /// Sub-form on the given diagonal positions.
    pub fn select(&self, idx: &[usize]) -> Result<QForm> {
        Self::from_classes(&self.field, idx.iter().map(|&i| self.diag[i].clone()).collect())
    }

    pub fn gram(&self) -> GramMatrix {
        let n = self.dim();
        let els = self.elements();
        let rows =
            (0..n).map(|i| (0..n).map(|j| if i == j { els[i].clone() } else { self.field.zero() }).collect()).collect();
        GramMatrix { field: self.field.clone(), rows }
    }

    /// Value `Σ aᵢ vᵢ²` at a vector of field elements.
    pub fn evaluate(&self, v: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        self.elements().iter().zip(v).fold(f.zero(), |acc, (a, x)| f.add(&acc, &f.mul(a, &f.mul(x, x))))
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.diag.iter().map(|c| self.field.format_class(c)).collect();
        write!(f, "<{}>", parts.join(","))
    }
}

impl Serialize for QForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Print an optional form; `<>` stands for the zero form.
pub fn format_opt(q: &Option<QForm>) -> String {
    q.as_ref().map_or_else(|| "<>".to_string(), |q| q.to_string())
}

/// Orthogonal sum where either side may be the zero form.
pub fn orth_opt(a: Option<QForm>, b: Option<QForm>) -> Result<Option<QForm>> {
    Ok(match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(a.orth_sum(&b)?),
    })
}

/// Symmetric matrix over a field; boundary input for forms given by Gram
/// matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    field: FieldDesc,
    rows: Vec<Vec<FieldElement>>,
}

/// `transform · G · transformᵀ = diag(values)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub form: QForm,
    pub values: Vec<FieldElement>,
    pub transform: Vec<Vec<FieldElement>>,
}

impl GramMatrix {
    pub fn new(field: &FieldDesc, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::EmptyForm);
        }
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSymmetric);
            }
            for j in 0..i {
                if r[j] != rows[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(GramMatrix { field: field.clone(), rows })
    }

    pub fn from_ints(field: &FieldDesc, rows: &[&[i64]]) -> Result<Self> {
        Self::new(field, rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<FieldElement>] {
        &self.rows
    }

    /// Congruence to a diagonal matrix by symmetric elimination. A zero pivot
    /// with no nonzero diagonal entry left is repaired by `v ↦ v + w`.
    pub fn diagonalize(&self) -> Result<Diagonalization> {
        let f = &self.field;
        let n = self.rows.len();
        let mut a = self.rows.clone();
        let mut t: Vec<Vec<FieldElement>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
        let add_row = |m: &mut Vec<Vec<FieldElement>>, dst: usize, src: usize, c: &FieldElement| {
            for j in 0..m[dst].len() {
                let v = f.add(&m[dst][j], &f.mul(c, &m[src][j]));
                m[dst][j] = v;
            }
        };
        let add_col = |m: &mut Vec<Vec<FieldElement>>, dst: usize, src: usize, c: &FieldElement| {
            for row in m.iter_mut() {
                let v = f.add(&row[dst], &f.mul(c, &row[src]));
                row[dst] = v;
            }
        };
        for k in 0..n {
            if f.is_zero(&a[k][k]) {
                if let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&a[j][j])) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                    t.swap(k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&a[k][j])) {
                    add_row(&mut a, k, j, &f.one());
                    add_col(&mut a, k, j, &f.one());
                    add_row(&mut t, k, j, &f.one());
                } else {
                    return Err(Error::Degenerate);
                }
            }
            let pivot = a[k][k].clone();
            for i in k + 1..n {
                if f.is_zero(&a[i][k]) {
                    continue;
                }
                let c = f.neg(&f.div(&a[i][k], &pivot)?);
                add_row(&mut a, i, k, &c);
                add_col(&mut a, i, k, &c);
                add_row(&mut t, i, k, &c);
            }
        }
        let values: Vec<FieldElement> = (0..n).map(|i| a[i][i].clone()).collect();
        Ok(Diagonalization { form: QForm::new(f, &values)?, values, transform: t })
    }
}

impl FieldDesc {
    /// A class representative as an element of this field.
    pub fn class_element(&self, c: &SquareClass) -> FieldElement {
        match self {
            FieldDesc::QuadExt { base, .. } => self.embed(base.class_element(c)),
            _ => self.class_rep(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldDesc {
        FieldDesc::rationals()
    }

    fn congruent(g: &GramMatrix, d: &Diagonalization) -> bool {
        let f = FieldDesc::rationals();
        let n = g.rows.len();
        let t = &d.transform;
        for i in 0..n {
            for j in 0..n {
                let mut s = f.zero();
                for k in 0..n {
                    for l in 0..n {
                        s = f.add(&s, &f.mul(&t[i][k], &f.mul(&g.rows[k][l], &t[j][l])));
                    }
                }
                let want = if i == j { d.values[i].clone() } else { f.zero() };
                if s != want {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn hyperbolic_plane_gram() {
        let g = GramMatrix::from_ints(&q(), &[&[0, 1], &[1, 0]]).unwrap();
        let d = g.diagonalize().unwrap();
        assert!(congruent(&g, &d));
        assert_eq!(d.form.to_string(), "<2,-2>");
        let g = GramMatrix::from_ints(&q(), &[&[1, 1], &[1, 2]]).unwrap();
        let d = g.diagonalize().unwrap();
        assert!(congruent(&g, &d));
        assert_eq!(d.form.to_string(), "<1,1>");
    }

    #[test]
    fn degenerate_and_asymmetric() {
        let g = GramMatrix::from_ints(&q(), &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(g.diagonalize().unwrap_err(), Error::Degenerate);
        assert_eq!(GramMatrix::from_ints(&q(), &[&[1, 2], &[3, 1]]).unwrap_err(), Error::NotSymmetric);
    }

    #[test]
    fn sums_products_and_invariants() {
        let a = QForm::from_ints(&q(), &[1, 2]).unwrap();
        let b = QForm::from_ints(&q(), &[1, 3]).unwrap();
        assert_eq!(a.tensor(&b).unwrap().to_string(), "<1,3,2,6>");
        assert_eq!(a.orth_sum(&b).unwrap().to_string(), "<1,2,1,3>");
        let h = QForm::from_ints(&q(), &[1, -1]).unwrap();
        assert_eq!(h.determinant(), SquareClass::Rational(-1));
        assert_eq!(h.discriminant(), SquareClass::Rational(1));
        let s = QForm::from_ints(&q(), &[1, 3]).unwrap().scale(&q().int(2)).unwrap();
        assert_eq!(s.determinant(), SquareClass::Rational(3));
        assert_eq!(QForm::from_ints(&q(), &[]).unwrap_err(), Error::EmptyForm);
        assert_eq!(QForm::from_ints(&q(), &[1, 0]).unwrap_err(), Error::ZeroEntry);
    }

    #[test]
    fn mismatched_fields() {
        let a = QForm::from_ints(&q(), &[1]).unwrap();
        let b = QForm::from_ints(&FieldDesc::prime_field(5).unwrap(), &[1]).unwrap();
        assert!(matches!(a.orth_sum(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn laurent_diagonal_entries() {
        let f = FieldDesc::parse("F7((x))").unwrap();
        let x = f.variable("x").unwrap();
        let g = GramMatrix::new(&f, vec![vec![f.zero(), x.clone()], vec![x, f.zero()]]).unwrap();
        let d = g.diagonalize().unwrap();
        assert_eq!(d.form.dim(), 2);
        assert_eq!(d.form.discriminant(), f.class_one());
    }
}
