//! Pfister forms `⟨1,a₁⟩⊗…⊗⟨1,aₙ⟩`.
//!
//! Note the sign convention: `pf(a)` is `⟨1,a⟩`, not `⟨1,−a⟩` as in much of
//! the literature.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement, SquareClass};
use crate::forms::QForm;
use crate::localglobal::{self as lg, Place};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PfisterSpec {
    pub slots: Vec<SquareClass>,
}

impl PfisterSpec {
    pub fn new(slots: Vec<SquareClass>) -> Self {
        PfisterSpec { slots }
    }

    pub fn from_elements(field: &FieldDesc, slots: &[FieldElement]) -> Result<Self> {
        let slots = slots
            .iter()
            .map(|a| if field.is_zero(a) { Err(Error::ZeroElement) } else { field.entry_class(a) })
            .collect::<Result<_>>()?;
        Ok(PfisterSpec { slots })
    }

    /// `pf(−1, 1, …, 1)`, hyperbolic for `n ≥ 1`.
    pub fn split(field: &FieldDesc, n: usize) -> Self {
        let mut slots = vec![field.class_one(); n];
        if n > 0 {
            slots[0] = field.class_minus_one();
        }
        PfisterSpec { slots }
    }

    pub fn fold(&self) -> usize {
        self.slots.len()
    }

    /// Tensor expansion, first entry 1; `pf(a)⊗pf(b) = ⟨1,b,a,ab⟩`.
    pub fn expand(&self, field: &FieldDesc) -> Result<QForm> {
        let mut diag = vec![field.class_field().class_one()];
        for a in &self.slots {
            let mut next = Vec::with_capacity(2 * diag.len());
            for d in &diag {
                next.push(d.clone());
                next.push(field.class_mul(d, a)?);
            }
            diag = next;
        }
        QForm::from_classes(field, diag)
    }

    pub fn format(&self, field: &FieldDesc) -> String {
        let s: Vec<String> = self.slots.iter().map(|c| field.format_class(c)).collect();
        format!("pf({})", s.join(","))
    }
}

fn log2_exact(n: usize) -> Option<usize> {
    n.is_power_of_two().then(|| n.trailing_zeros() as usize)
}

fn classes_form(field: &FieldDesc, diag: Vec<SquareClass>) -> Result<Option<QForm>> {
    if diag.is_empty() {
        Ok(None)
    } else {
        Ok(Some(QForm::from_classes(field, diag)?))
    }
}

fn disc_is_square(q: &QForm) -> Result<bool> {
    let d = q.discriminant();
    Ok(match q.field() {
        FieldDesc::QuadExt { a, .. } => d.is_one() || d == *a,
        _ => d.is_one(),
    })
}

/// Membership of `q` in `Iⁿ`, the n-th power of the fundamental ideal.
pub fn in_in(q: &QForm, n: usize) -> Result<bool> {
    in_in_opt(q.field(), Some(q), n)
}

fn in_in_opt(field: &FieldDesc, q: Option<&QForm>, n: usize) -> Result<bool> {
    let Some(q) = q else { return Ok(true) };
    if n == 0 || (n == 1 && q.dim() % 2 == 0) {
        return Ok(n == 0 || q.dim() % 2 == 0);
    }
    if q.dim() % 2 == 1 {
        return Ok(false);
    }
    if n == 2 && !matches!(field, FieldDesc::LaurentExt { .. }) {
        return disc_is_square(q);
    }
    match field {
        FieldDesc::Rationals => {
            if !disc_is_square(q)? {
                return Ok(false);
            }
            let e = lg::ints(q.diag());
            for v in lg::relevant_places(&e) {
                if v != Place::Real
                    && 2 * lg::PadicInv::of_entries(&e.iter().map(|&a| lg::LocalClass::of(a, v)).collect::<Vec<_>>(), v)
                        .witt_index()
                        != e.len()
                {
                    return Ok(false);
                }
            }
            Ok(lg::signature(q)?.rem_euclid(1 << n) == 0)
        }
        FieldDesc::PrimeField(_) => lg::is_hyperbolic(q),
        FieldDesc::QuadExt { base, .. } if matches!(**base, FieldDesc::PrimeField(_)) => lg::is_hyperbolic(q),
        FieldDesc::LaurentExt { base, .. } => {
            // Iⁿ(F((x))) ∋ q₀ ⊥ x q₁  iff  q₁ ∈ Iⁿ⁻¹(F) and q₀ ⊥ −q₁ ∈ Iⁿ(F)
            let mut q0 = Vec::new();
            let mut q1 = Vec::new();
            for c in q.diag() {
                let SquareClass::Laurent { base: b, odd } = c else { unreachable!() };
                if *odd {
                    q1.push((**b).clone())
                } else {
                    q0.push((**b).clone())
                }
            }
            let minus_q1: Vec<SquareClass> = q1.iter().map(|c| base.class_neg(c)).collect::<Result<_>>()?;
            let diff: Vec<SquareClass> = q0.into_iter().chain(minus_q1).collect();
            let q1 = classes_form(base, q1)?;
            let diff = classes_form(base, diff)?;
            Ok(in_in_opt(base, q1.as_ref(), n - 1)? && in_in_opt(base, diff.as_ref(), n)?)
        }
        _ => {
            if lg::is_hyperbolic(q)? {
                Ok(true)
            } else {
                Err(Error::UnsupportedField(format!("I^{n} membership over {field}")))
            }
        }
    }
}

/// `scalar·q ≃ pf(spec)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PfisterSimilarity {
    pub scalar: SquareClass,
    pub spec: PfisterSpec,
}

/// Recognize forms similar to Pfister forms; `None` means "not similar".
pub fn similar_to_pfister(q: &QForm) -> Result<Option<PfisterSimilarity>> {
    let field = q.field();
    let Some(n) = log2_exact(q.dim()) else { return Ok(None) };
    if !in_in(q, n)? {
        return Ok(None);
    }
    let c = q.diag()[0].clone();
    let cq = q.scale_class(&c)?;
    let spec = pfister_spec_of(&cq, n)?;
    let Some(spec) = spec else { return Ok(None) };
    if !lg::is_isometric(&cq, &spec.expand(field)?)? {
        return Err(Error::SearchExhausted(format!("recovered {} does not match {cq}", spec.format(field))));
    }
    Ok(Some(PfisterSimilarity { scalar: c, spec }))
}

/// Slots of a Pfister form isometric to `cq`, where `cq ∈ Iⁿ` has
/// dimension `2ⁿ` and represents 1.
fn pfister_spec_of(cq: &QForm, n: usize) -> Result<Option<PfisterSpec>> {
    let field = cq.field();
    let d = cq.diag();
    match n {
        0 => return Ok(Some(PfisterSpec::new(Vec::new()))),
        1 => return Ok(Some(PfisterSpec::new(vec![d[1].clone()]))),
        2 => return Ok(Some(PfisterSpec::new(vec![d[1].clone(), d[2].clone()]))),
        _ => {}
    }
    if lg::is_hyperbolic(cq)? {
        return Ok(Some(PfisterSpec::split(field, n)));
    }
    match field {
        // I³(Q) is torsion-free: an anisotropic n-fold is the sum of squares
        FieldDesc::Rationals => {
            if lg::signature(cq)? == 1 << n {
                Ok(Some(PfisterSpec::new(vec![field.class_one(); n])))
            } else {
                Ok(None)
            }
        }
        FieldDesc::LaurentExt { base, .. } => {
            // anisotropic π over F((x)) is ψ or ψ⊗⟨1,ux⟩ with ψ over F
            let mut q0 = Vec::new();
            let mut q1 = Vec::new();
            for c in d {
                let SquareClass::Laurent { base: b, odd } = c else { unreachable!() };
                if *odd {
                    q1.push((**b).clone())
                } else {
                    q0.push((**b).clone())
                }
            }
            if q1.is_empty() {
                let psi = QForm::from_classes(base, q0)?;
                return Ok(pfister_spec_of(&psi, n)?.map(|s| lift_spec(field, s)));
            }
            if q0.len() != q1.len() {
                return Ok(None);
            }
            let psi = QForm::from_classes(base, q0)?;
            let Some(s) = pfister_spec_of(&psi, n - 1)? else { return Ok(None) };
            let mut spec = lift_spec(field, s);
            spec.slots.push(SquareClass::Laurent { base: Box::new(q1[0].clone()), odd: true });
            Ok(Some(spec))
        }
        _ => Err(Error::UnsupportedField(format!("Pfister recognition of {n}-fold forms over {field}"))),
    }
}

fn lift_spec(field: &FieldDesc, s: PfisterSpec) -> PfisterSpec {
    PfisterSpec::new(s.slots.into_iter().map(|c| field.class_embed(c)).collect())
}

/// `q ≃ pf(π)⊗r`: returns `r`, or `None` if `q` is not a multiple.
pub fn divide_by_pfister(q: &QForm, pi: &PfisterSpec) -> Result<Option<QForm>> {
    let field = q.field();
    let k = 1usize << pi.fold();
    if !q.dim().is_multiple_of(k) {
        return Ok(None);
    }
    let p = pi.expand(field)?;
    if lg::is_isotropic(&p)? {
        // π hyperbolic: so is every multiple
        return if lg::is_hyperbolic(q)? {
            Ok(Some(QForm::from_classes(field, vec![field.class_field().class_one(); q.dim() / k])?))
        } else {
            Ok(None)
        };
    }
    let w = lg::witt_decompose(q)?;
    if w.index % k != 0 {
        return Ok(None);
    }
    let mut quotient: Vec<SquareClass> = Vec::new();
    let mut cur = w.anisotropic_part;
    while let Some(c) = cur {
        if c.dim() % k != 0 {
            return Ok(None);
        }
        let b = c.diag()[0].clone();
        let bp = p.scale_class(&b)?;
        if !lg::is_subform(&bp, &c)? {
            return Ok(None);
        }
        quotient.push(b);
        cur = if c.dim() == k { None } else { lg::witt_decompose(&c.minus(&bp)?)?.anisotropic_part };
    }
    for _ in 0..w.index / k {
        quotient.push(field.class_field().class_one());
        quotient.push(field.class_minus_one());
    }
    Ok(Some(QForm::from_classes(field, quotient)?))
}

/// Outcome of [`neighbor_of`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Neighbor {
    /// `scalar·τ ⊆ pf(spec)` and `dim τ > ½·2ⁿ`.
    Yes {
        spec: PfisterSpec,
        scalar: SquareClass,
    },
    No,
    Unknown,
}

/// Default number of slot tuples tried by the bounded neighbour search.
pub const NEIGHBOR_SEARCH_BUDGET: usize = 400;

/// Is `τ` similar to a subform of a Pfister form of less than twice its
/// dimension?
pub fn neighbor_of(tau: &QForm) -> Result<Neighbor> {
    let field = tau.field();
    let d = tau.dim();
    let n = d.next_power_of_two().trailing_zeros() as usize;
    let e = tau.diag();
    let a = e[0].clone();
    let yes = |spec: PfisterSpec, scalar: SquareClass| Ok(Neighbor::Yes { spec, scalar });
    match d {
        1 => return yes(PfisterSpec::new(Vec::new()), a),
        2 => return yes(PfisterSpec::new(vec![field.class_mul(&a, &e[1])?]), a),
        3 => {
            return yes(PfisterSpec::new(vec![field.class_mul(&a, &e[1])?, field.class_mul(&a, &e[2])?]), a);
        }
        _ => {}
    }
    if d == 1 << n {
        return Ok(match similar_to_pfister(tau)? {
            Some(s) => Neighbor::Yes { spec: s.spec, scalar: s.scalar },
            None => Neighbor::No,
        });
    }
    if d + 1 == 1 << n {
        let completed = tau.orth_sum(&QForm::from_classes(field, vec![tau.determinant()])?)?;
        return Ok(match similar_to_pfister(&completed)? {
            Some(s) => Neighbor::Yes { spec: s.spec, scalar: s.scalar },
            None => Neighbor::No,
        });
    }
    // remaining dims: 2^{n-1}+1 < d < 2^n - 1, so n ≥ 3
    let w = lg::witt_decompose(tau)?;
    let an_dim = w.anisotropic_part.as_ref().map_or(0, |q| q.dim());
    if an_dim + d <= 1 << n {
        return yes(PfisterSpec::split(field, n), field.class_field().class_one());
    }
    if *field == FieldDesc::Rationals {
        // anisotropic n-folds over Q are sums of squares, hyperbolic at
        // every finite place
        let sig = lg::signature(tau)?;
        if sig.unsigned_abs() as usize != d {
            return Ok(Neighbor::No);
        }
        let ints = lg::ints(e);
        for v in lg::relevant_places(&ints) {
            if v != Place::Real && lg::local_anisotropic_dim(tau, v)? + d > 1 << n {
                return Ok(Neighbor::No);
            }
        }
        let c = SquareClass::Rational(sig.signum());
        return yes(PfisterSpec::new(vec![field.class_one(); n]), c);
    }
    if matches!(field, FieldDesc::PrimeField(_)) {
        // every n-fold with n ≥ 2 is hyperbolic over a finite field
        return Ok(Neighbor::No);
    }
    bounded_neighbor_search(tau, n, NEIGHBOR_SEARCH_BUDGET)
}

/// Try Pfister forms whose slots are products of ratios of entries of `τ`.
fn bounded_neighbor_search(tau: &QForm, n: usize, budget: usize) -> Result<Neighbor> {
    let field = tau.field();
    let e = tau.diag();
    let mut pool: Vec<SquareClass> = Vec::new();
    for x in e {
        for y in e {
            let c = field.class_mul(x, y)?;
            if !pool.contains(&c) {
                pool.push(c);
            }
        }
    }
    for c in [field.class_minus_one(), field.class_one()] {
        if !pool.contains(&c) {
            pool.push(c);
        }
    }
    let scalar = e[0].clone();
    let scaled = tau.scale_class(&scalar)?;
    let mut idx = vec![0usize; n];
    let mut tried = 0;
    loop {
        if tried >= budget {
            return Ok(Neighbor::Unknown);
        }
        tried += 1;
        let spec = PfisterSpec::new(idx.iter().map(|&i| pool[i].clone()).collect());
        let p = spec.expand(field)?;
        if lg::is_subform(&scaled, &p)? {
            return Ok(Neighbor::Yes { spec, scalar });
        }
        // next nondecreasing index tuple
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(Neighbor::Unknown);
            }
            k -= 1;
            if idx[k] + 1 < pool.len() {
                idx[k] += 1;
                for j in k + 1..n {
                    idx[j] = idx[k];
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_form;

    fn q(s: &str) -> QForm {
        parse_form(s, &FieldDesc::Rationals).unwrap()
    }

    #[test]
    fn expansion() {
        let f = FieldDesc::Rationals;
        assert_eq!(q("pf(2,3)").to_string(), "<1,3,2,6>");
        assert_eq!(q("pf()").to_string(), "<1>");
        assert!(lg::is_hyperbolic(&q("pf(-1)")).unwrap());
        assert_eq!(PfisterSpec::split(&f, 2).expand(&f).unwrap().to_string(), "<1,1,-1,-1>");
    }

    #[test]
    fn ideal_membership() {
        assert!(in_in(&q("<1,1,1,1>"), 2).unwrap());
        assert!(!in_in(&q("<1,1>"), 2).unwrap());
        assert!(in_in(&q("pf(1,1,1)"), 3).unwrap());
        assert!(!in_in(&q("pf(1,1,1)"), 4).unwrap());
        assert!(in_in(&q("pf(1,1,1,1)"), 4).unwrap());
        assert!(!in_in(&q("pf(2,3)"), 3).unwrap());
        let f = FieldDesc::parse("Q((x))").unwrap();
        assert!(in_in(&parse_form("pf(1,1,x)", &f).unwrap(), 3).unwrap());
        assert!(!in_in(&parse_form("pf(1,x) + <1,1>", &f).unwrap(), 2).unwrap());
    }

    #[test]
    fn similarity() {
        let s = similar_to_pfister(&q("<1,1,1,1>")).unwrap().unwrap();
        assert_eq!(s.spec.format(&FieldDesc::Rationals), "pf(1,1)");
        assert!(similar_to_pfister(&q("<1,1,1,2>")).unwrap().is_none());
        assert_eq!(similar_to_pfister(&q("<2,2,2,2>")).unwrap().unwrap().scalar, SquareClass::Rational(2));
        assert!(similar_to_pfister(&q("3*pf(1,1,1)")).unwrap().is_some());
        assert!(similar_to_pfister(&q("3*pf(1,1,-1)")).unwrap().is_some());
        let f = FieldDesc::parse("F7((x))").unwrap();
        let s = similar_to_pfister(&parse_form("3*pf(3,x,1)", &f).unwrap()).unwrap().unwrap();
        assert_eq!(s.spec.fold(), 3);
    }

    #[test]
    fn division() {
        let f = FieldDesc::Rationals;
        let pf1 = PfisterSpec::new(vec![SquareClass::Rational(1)]);
        let r = divide_by_pfister(&q("<1,1,1,1,2,2>"), &pf1).unwrap().unwrap();
        assert!(lg::is_isometric(&pf1.expand(&f).unwrap().tensor(&r).unwrap(), &q("<1,1,1,1,2,2>")).unwrap());
        assert!(divide_by_pfister(&q("<1,1,2>"), &pf1).unwrap().is_none());
        assert!(divide_by_pfister(&q("<1,1,1,3>"), &pf1).unwrap().is_none());
        // the hyperbolic plane is not a multiple of ⟨1,1⟩
        assert!(divide_by_pfister(&q("<1,-1>"), &pf1).unwrap().is_none());
        assert!(divide_by_pfister(&q("<1,-1,1,-1>"), &pf1).unwrap().is_some());
    }

    #[test]
    fn neighbours() {
        let f = FieldDesc::Rationals;
        match neighbor_of(&q("<1,1,1>")).unwrap() {
            Neighbor::Yes { spec, scalar } => {
                assert_eq!(spec.format(&f), "pf(1,1)");
                assert_eq!(scalar, SquareClass::Rational(1));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(neighbor_of(&q("<1,1,1,2>")).unwrap(), Neighbor::No);
        assert!(matches!(neighbor_of(&q("<1,1,1,1,1,1,1>")).unwrap(), Neighbor::Yes { .. }));
        assert!(matches!(neighbor_of(&q("<1,1,1,1,1>")).unwrap(), Neighbor::Yes { .. }));
        assert!(matches!(neighbor_of(&q("<1,1,1,1,-1>")).unwrap(), Neighbor::Yes { .. }));
        assert_eq!(neighbor_of(&q("<1,1,1,1,1,-3>")).unwrap(), Neighbor::No);
        assert!(matches!(neighbor_of(&q("<1,1,1,-1,-1>")).unwrap(), Neighbor::Yes { .. }));
        assert!(matches!(neighbor_of(&q("<1,3>")).unwrap(), Neighbor::Yes { .. }));
    }
}
