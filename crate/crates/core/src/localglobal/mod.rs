//! Deciders for isotropy, Witt index, isometry and subforms.
//!
//! Over `Q` everything is read off local invariants (Hasse–Minkowski). Over
//! `F_p` the classification is by dimension and determinant. Laurent towers
//! split a form as `q₀ ⊥ x·q₁` and recurse, since `i(q₀ ⊥ x q₁) = i(q₀) +
//! i(q₁)`. Quadratic extensions are handled over `Q`, `F_p` and Laurent
//! towers over those.
//!
//! The global Witt index over `Q` is the minimum of the local indices: the
//! anisotropic part stays anisotropic at some place by Hasse–Minkowski, and
//! Witt decomposition commutes with completion.

mod finite;
mod hilbert;
mod local;
mod quadext;
mod rational;

use rand::Rng;
use serde::Serialize;

pub use hilbert::{hilbert_local, hilbert_symbol, LocalClass, Place};
pub use local::{LocalData, PadicInv};
pub use rational::{relevant_places, Invariants};

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement, SquareClass};
use crate::forms::QForm;

/// `q ≃ q_an ⊥ index × ⟨1,−1⟩`; `anisotropic_part` is `None` for
/// hyperbolic forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittDecomposition {
    pub index: usize,
    pub anisotropic_part: Option<QForm>,
}

pub(crate) fn ints(diag: &[SquareClass]) -> Vec<i64> {
    diag.iter().map(|c| c.rational().expect("rational square class")).collect()
}

fn rationals(v: Vec<i64>) -> Vec<SquareClass> {
    v.into_iter().map(SquareClass::Rational).collect()
}

/// Laurent entries split by the parity of the variable exponent.
fn springer_split(diag: &[SquareClass]) -> (Vec<SquareClass>, Vec<SquareClass>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for c in diag {
        let SquareClass::Laurent { base, odd: o } = c else { panic!("expected a Laurent class") };
        if *o {
            odd.push((**base).clone())
        } else {
            even.push((**base).clone())
        }
    }
    (even, odd)
}

fn laurent(c: SquareClass, odd: bool) -> SquareClass {
    SquareClass::Laurent { base: Box::new(c), odd }
}

/// Constant parts of rational-function classes, if every entry is constant.
fn constants(diag: &[SquareClass]) -> Option<Vec<SquareClass>> {
    diag.iter()
        .map(|c| match c {
            SquareClass::RatFunc { constant, poly } if poly.0.degree() == Some(0) => Some((**constant).clone()),
            _ => None,
        })
        .collect()
}

fn unsupported(field: &FieldDesc, what: &str) -> Error {
    Error::UnsupportedField(format!("{what} over {field}"))
}

fn decompose_classes(field: &FieldDesc, diag: &[SquareClass]) -> Result<(usize, Vec<SquareClass>)> {
    match field {
        FieldDesc::Rationals => {
            let (i, an) = rational::decompose(&ints(diag))?;
            Ok((i, rationals(an)))
        }
        FieldDesc::PrimeField(p) => {
            let bits: Vec<bool> = diag.iter().map(|c| matches!(c, SquareClass::Residue(true))).collect();
            let (i, an) = finite::decompose(*p, &bits);
            Ok((i, an.into_iter().map(SquareClass::Residue).collect()))
        }
        FieldDesc::LaurentExt { base, .. } => {
            let (q0, q1) = springer_split(diag);
            let (i0, a0) = decompose_classes(base, &q0)?;
            let (i1, a1) = decompose_classes(base, &q1)?;
            let an = a0.into_iter().map(|c| laurent(c, false)).chain(a1.into_iter().map(|c| laurent(c, true)));
            Ok((i0 + i1, an.collect()))
        }
        FieldDesc::RatFuncExt { base, .. } => {
            let consts =
                constants(diag).ok_or_else(|| unsupported(field, "Witt decomposition of non-constant forms"))?;
            let (i, an) = decompose_classes(base, &consts)?;
            Ok((i, an.into_iter().map(|c| field.class_embed(c)).collect()))
        }
        FieldDesc::QuadExt { base, a } => decompose_quad(field, base, a, diag, true),
    }
}

/// Decomposition over `base(√a)`; anisotropic parts are forms over `base`.
/// With `want_part = false` only the index is computed.
fn decompose_quad(
    field: &FieldDesc,
    base: &FieldDesc,
    a: &SquareClass,
    diag: &[SquareClass],
    want_part: bool,
) -> Result<(usize, Vec<SquareClass>)> {
    match base {
        FieldDesc::Rationals => {
            let a = a.rational().unwrap();
            if want_part {
                let (i, an) = quadext::decompose(&ints(diag), a)?;
                Ok((i, rationals(an)))
            } else {
                Ok((quadext::witt_index(&ints(diag), a)?, Vec::new()))
            }
        }
        // every element of F_p is a square in F_{p²}
        FieldDesc::PrimeField(_) => {
            let n = diag.len();
            Ok((n / 2, if n % 2 == 1 { vec![base.class_one()] } else { Vec::new() }))
        }
        FieldDesc::LaurentExt { base: b, .. } => {
            let SquareClass::Laurent { base: a0, odd } = a else { unreachable!() };
            let (q0, q1) = springer_split(diag);
            if !odd {
                // K = b(√a₀)((x))
                let k0 = FieldDesc::QuadExt { base: b.clone(), a: (**a0).clone() };
                let (i0, an0) = decompose_quad(&k0, b, a0, &q0, want_part)?;
                let (i1, an1) = decompose_quad(&k0, b, a0, &q1, want_part)?;
                let an = an0.into_iter().map(|c| laurent(c, false)).chain(an1.into_iter().map(|c| laurent(c, true)));
                Ok((i0 + i1, an.collect()))
            } else {
                // K = b((y)) with y² = a₀x, so x has class a₀ in K
                let mut all = q0;
                for c in q1 {
                    all.push(b.class_mul(&c, a0)?);
                }
                let (i, an) = decompose_classes(b, &all)?;
                Ok((i, an.into_iter().map(|c| laurent(c, false)).collect()))
            }
        }
        FieldDesc::RatFuncExt { base: b, .. } => {
            let consts =
                constants(diag).ok_or_else(|| unsupported(field, "Witt decomposition of non-constant forms"))?;
            let a0 = constants(std::slice::from_ref(a)).ok_or_else(|| unsupported(field, "Witt decomposition"))?;
            let k0 = FieldDesc::QuadExt { base: b.clone(), a: a0[0].clone() };
            let (i, an) = decompose_quad(&k0, b, &a0[0], &consts, want_part)?;
            Ok((i, an.into_iter().map(|c| base.class_embed(c)).collect()))
        }
        FieldDesc::QuadExt { .. } => Err(unsupported(field, "Witt decomposition")),
    }
}

fn index_classes(field: &FieldDesc, diag: &[SquareClass]) -> Result<usize> {
    match field {
        FieldDesc::Rationals => Ok(rational::witt_index(&ints(diag))),
        FieldDesc::PrimeField(_) => Ok(decompose_classes(field, diag)?.0),
        FieldDesc::LaurentExt { base, .. } => {
            let (q0, q1) = springer_split(diag);
            Ok(index_classes(base, &q0)? + index_classes(base, &q1)?)
        }
        FieldDesc::RatFuncExt { base, .. } => {
            let consts = constants(diag).ok_or_else(|| unsupported(field, "Witt index of non-constant forms"))?;
            index_classes(base, &consts)
        }
        FieldDesc::QuadExt { base, a } => Ok(decompose_quad(field, base, a, diag, false)?.0),
    }
}

pub fn witt_decompose(q: &QForm) -> Result<WittDecomposition> {
    let (index, an) = decompose_classes(q.field(), q.diag())?;
    let anisotropic_part = if an.is_empty() { None } else { Some(QForm::from_classes(q.field(), an)?) };
    Ok(WittDecomposition { index, anisotropic_part })
}

pub fn witt_index(q: &QForm) -> Result<usize> {
    index_classes(q.field(), q.diag())
}

pub fn is_isotropic(q: &QForm) -> Result<bool> {
    Ok(witt_index(q)? > 0)
}

pub fn is_hyperbolic(q: &QForm) -> Result<bool> {
    if q.dim() % 2 == 1 {
        return Ok(false);
    }
    if let FieldDesc::RatFuncExt { .. } = q.field() {
        if constants(q.diag()).is_none() {
            return crate::ffield::hyperbolic_over_rational_function_field(q)?
                .ok_or_else(|| unsupported(q.field(), "hyperbolicity with irreducible factors of degree > 1"));
        }
    }
    Ok(2 * witt_index(q)? == q.dim())
}

pub fn is_isometric(a: &QForm, b: &QForm) -> Result<bool> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field().to_string(), b.field().to_string()));
    }
    if a.dim() != b.dim() {
        return Ok(false);
    }
    match a.field() {
        FieldDesc::Rationals => rational::is_isometric(&ints(a.diag()), &ints(b.diag())),
        FieldDesc::PrimeField(_) => Ok(a.determinant() == b.determinant()),
        _ => is_hyperbolic(&a.minus(b)?),
    }
}

/// `r ⊆ q` iff `i(q ⊥ −r) ≥ dim r`.
pub fn is_subform(r: &QForm, q: &QForm) -> Result<bool> {
    if r.field() != q.field() {
        return Err(Error::FieldMismatch(r.field().to_string(), q.field().to_string()));
    }
    if r.dim() > q.dim() {
        return Ok(false);
    }
    if r.dim() == q.dim() {
        return is_isometric(r, q);
    }
    Ok(witt_index(&q.minus(r)?)? >= r.dim())
}

/// Whether `c` is a similarity factor: `c·q ≃ q`.
pub fn in_g_class(c: &SquareClass, q: &QForm) -> Result<bool> {
    is_isometric(&q.scale_class(c)?, q)
}

pub fn in_g(a: &FieldElement, q: &QForm) -> Result<bool> {
    in_g_class(&q.field().entry_class(a)?, q)
}

/// Whether `⟨1,−c⟩⊗q` is isotropic.
pub fn in_h_class(c: &SquareClass, q: &QForm) -> Result<bool> {
    is_isotropic(&q.orth_sum(&q.scale_class(c)?.neg())?)
}

pub fn in_h(a: &FieldElement, q: &QForm) -> Result<bool> {
    in_h_class(&q.field().entry_class(a)?, q)
}

/// Whether `q` represents the class `c`.
pub fn in_d_class(c: &SquareClass, q: &QForm) -> Result<bool> {
    let one = QForm::from_classes(q.field(), vec![c.clone()])?;
    is_isotropic(&q.minus(&one)?)
}

/// Square classes of values of `q` at `budget` random vectors.
pub fn sample_d<R: Rng + ?Sized>(q: &QForm, budget: usize, rng: &mut R) -> Vec<SquareClass> {
    let f = q.field().class_field();
    let entries: Vec<FieldElement> = q.diag().iter().map(|c| f.class_rep(c)).collect();
    let mut out: Vec<SquareClass> = Vec::new();
    for _ in 0..budget {
        let mut val = f.zero();
        for a in &entries {
            let x = f.random_element(rng, 4);
            val = f.add(&val, &f.mul(a, &f.mul(&x, &x)));
        }
        if f.is_zero(&val) {
            continue;
        }
        if let Ok(c) = f.square_class(&val) {
            if !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out
}

/// Products of pairs of sampled values, i.e. a sample of `D(q)·D(q)`.
pub fn sample_h<R: Rng + ?Sized>(q: &QForm, budget: usize, rng: &mut R) -> Vec<SquareClass> {
    let d = sample_d(q, budget, rng);
    let f = q.field();
    let mut out: Vec<SquareClass> = Vec::new();
    for (i, a) in d.iter().enumerate() {
        for b in &d[i..] {
            if let Ok(c) = f.class_mul(a, b) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
    }
    out
}

fn rational_entries(q: &QForm) -> Result<Vec<i64>> {
    if *q.field() != FieldDesc::Rationals {
        return Err(unsupported(q.field(), "local invariants"));
    }
    Ok(ints(q.diag()))
}

pub fn hasse_invariant(q: &QForm, v: Place) -> Result<i8> {
    Ok(rational::hasse_invariant(&rational_entries(q)?, v))
}

pub fn local_anisotropic_dim(q: &QForm, v: Place) -> Result<usize> {
    let e = rational_entries(q)?;
    Ok(e.len() - 2 * rational::local_witt_index(&e, v))
}

pub fn local_data(q: &QForm, v: Place) -> Result<LocalData> {
    let e = rational_entries(q)?;
    let d = LocalClass::of(rational::det(&e)?, v);
    let (pos, neg) = rational::real_counts(&e);
    Ok(LocalData {
        place: v,
        dim: e.len(),
        det: (d.odd_val, d.unit),
        hasse: rational::hasse_invariant(&e, v),
        signature: (v == Place::Real).then_some(pos as i64 - neg as i64),
    })
}

pub fn invariants(q: &QForm) -> Result<Invariants> {
    rational::invariants(&rational_entries(q)?)
}

pub fn form_from_invariants(inv: &Invariants) -> Result<QForm> {
    QForm::from_classes(&FieldDesc::Rationals, rationals(rational::form_from_invariants(inv)?))
}

/// Signature of a rational form.
pub fn signature(q: &QForm) -> Result<i64> {
    Ok(invariants(q)?.signature)
}

/// Local Witt index over `Q_v(√a)`.
pub fn local_index_over_quad_ext(q: &QForm, a: i64, v: Place) -> Result<usize> {
    Ok(quadext::local_index(&rational_entries(q)?, a, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_form;

    fn form(f: &str, s: &str) -> QForm {
        parse_form(s, &FieldDesc::parse(f).unwrap()).unwrap()
    }

    #[test]
    fn laurent_decomposition() {
        let q = form("Q((x))", "<1,-1> + x*<1,1>");
        let w = witt_decompose(&q).unwrap();
        assert_eq!(w.index, 1);
        assert_eq!(w.anisotropic_part.unwrap().to_string(), "<x,x>");
        let q = form("F7((x))((y))", "<1,1> + y*<1,1> + x*<1,-1>");
        assert_eq!(witt_index(&q).unwrap(), 1);
    }

    #[test]
    fn documented_decider_values() {
        assert!(is_isotropic(&form("Q", "<1,-1>")).unwrap());
        assert!(!is_isotropic(&form("Q", "<1,1,-7>")).unwrap());
        assert!(is_hyperbolic(&form("Q", "<1,-1,2,-2>")).unwrap());
        assert!(is_isometric(&form("Q", "<1,1>"), &form("Q", "<2,2>")).unwrap());
        assert!(is_subform(&form("Q", "<1,1>"), &form("Q", "<1,1,1>")).unwrap());
        assert!(in_g(&FieldElement::from_i64(2), &form("Q", "<1,1>")).unwrap());
        assert!(!in_g(&FieldElement::from_i64(-1), &form("Q", "<1,1>")).unwrap());
        assert!(in_h(&FieldElement::from_i64(2), &form("Q", "<1,1>")).unwrap());
        assert!(!in_h(&FieldElement::from_i64(-1), &form("Q", "<1,1,1>")).unwrap());
        assert_eq!(hasse_invariant(&form("Q", "<-1,-1>"), Place::Padic(2)).unwrap(), -1);
        assert_eq!(local_anisotropic_dim(&form("Q", "<1,1,1,1>"), Place::Real).unwrap(), 4);
        assert_eq!(local_anisotropic_dim(&form("Q", "<1,1,1,1>"), Place::Padic(7)).unwrap(), 0);
    }

    #[test]
    fn quadratic_extensions() {
        assert_eq!(witt_index(&form("Q(sqrt -1)", "<1,1>")).unwrap(), 1);
        assert_eq!(witt_index(&form("Q(sqrt 2)", "<1,1,1>")).unwrap(), 0);
        assert_eq!(witt_index(&form("F7(sqrt 3)", "<1,1,1>")).unwrap(), 1);
        // Q((x))(√x) ≅ Q((y)): ⟨1,1⟩ ⊥ x⟨1⟩ becomes ⟨1,1,1⟩ over Q
        assert_eq!(witt_index(&form("Q((x))(sqrt x)", "<1,1,x>")).unwrap(), 0);
        assert_eq!(witt_index(&form("Q((x))(sqrt -x)", "<1,1,x>")).unwrap(), 1);
        assert_eq!(witt_index(&form("Q((x))(sqrt -1)", "<1,1> + x*<1,1>")).unwrap(), 2);
        let w = witt_decompose(&form("Q(sqrt -1)", "<1,1,1>")).unwrap();
        assert_eq!(w.index, 1);
        assert_eq!(w.anisotropic_part.unwrap().dim(), 1);
    }

    #[test]
    fn constant_rational_function_forms() {
        assert!(!is_isotropic(&form("Q(t)", "<1,1,1>")).unwrap());
        assert!(is_isotropic(&form("F5(t)", "<1,1>")).unwrap());
    }
}
