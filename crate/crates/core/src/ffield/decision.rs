use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{FieldDesc, FieldElement, SquareClass};
use crate::forms::QForm;
use crate::localglobal as lg;
use crate::pfister::{self, Neighbor, PfisterSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// The failed necessary condition behind an `InvariantObstruction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// `F(p) = F` and `q` is not hyperbolic.
    NotHyperbolic,
    /// `p ≃ c·q` and `q` is not similar to a Pfister form.
    NotSimilarToPfister { similarity: SquareClass },
    /// `c·p` is a neighbour of `π` and `q` is not a multiple of `π`.
    NotDivisible { pi: PfisterSpec, scalar: SquareClass },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    PurelyTranscendental,
    AlreadyHyperbolic,
    /// `q ≃ π⊗quotient` and `scalar·p ⊆ π`.
    PfisterFactor {
        pi: PfisterSpec,
        quotient: QForm,
        scalar: SquareClass,
    },
    /// `q ≃ ⟨1,−a⟩⊗quotient` and `p ≃ b⟨1,−a⟩`.
    QuadExtDivisibility {
        a: SquareClass,
        quotient: QForm,
    },
    /// `p ≃ similarity·q` and `scalar·q ≃ pf(spec)`.
    SelfPfister {
        scalar: SquareClass,
        spec: PfisterSpec,
        similarity: SquareClass,
    },
    /// `a ∈ H(p)` but `a ∉ G(q)`.
    HObstruction {
        a: SquareClass,
    },
    /// `β ⊆ p` binary and `q` is not hyperbolic over `F(√−det β)`.
    TwoDimDivisibilityObstruction {
        beta: QForm,
    },
    InvariantObstruction(Obstruction),
    SearchExhausted,
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::PurelyTranscendental => "PurelyTranscendental",
            Certificate::AlreadyHyperbolic => "AlreadyHyperbolic",
            Certificate::PfisterFactor { .. } => "PfisterFactor",
            Certificate::QuadExtDivisibility { .. } => "QuadExtDivisibility",
            Certificate::SelfPfister { .. } => "SelfPfister",
            Certificate::HObstruction { .. } => "HObstruction",
            Certificate::TwoDimDivisibilityObstruction { .. } => "TwoDimDivisibilityObstruction",
            Certificate::InvariantObstruction(_) => "InvariantObstruction",
            Certificate::SearchExhausted => "SearchExhausted",
        }
    }
}

/// Verdict on "is `q` hyperbolic over `F(p)`" with its certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub field: FieldDesc,
    pub verdict: Verdict,
    pub certificate: Certificate,
}

impl Decision {
    fn new(field: &FieldDesc, verdict: Verdict, certificate: Certificate) -> Self {
        Decision { field: field.clone(), verdict, certificate }
    }

    fn yes_no(field: &FieldDesc, yes: bool, if_yes: Certificate, if_no: Certificate) -> Self {
        if yes {
            Decision::new(field, Verdict::Yes, if_yes)
        } else {
            Decision::new(field, Verdict::No, if_no)
        }
    }

    pub fn to_json(&self) -> Value {
        let f = &self.field;
        let c = |x: &SquareClass| f.format_class(x);
        let payload = match &self.certificate {
            Certificate::PurelyTranscendental | Certificate::AlreadyHyperbolic | Certificate::SearchExhausted => {
                json!({})
            }
            Certificate::PfisterFactor { pi, quotient, scalar } => {
                json!({ "pi": pi.format(f), "quotient": quotient.to_string(), "scalar": c(scalar) })
            }
            Certificate::QuadExtDivisibility { a, quotient } => json!({ "a": c(a), "quotient": quotient.to_string() }),
            Certificate::SelfPfister { scalar, spec, similarity } => {
                json!({ "scalar": c(scalar), "spec": spec.format(f), "similarity": c(similarity) })
            }
            Certificate::HObstruction { a } => json!({ "a": c(a) }),
            Certificate::TwoDimDivisibilityObstruction { beta } => json!({ "beta": beta.to_string() }),
            Certificate::InvariantObstruction(o) => obstruction_json(f, o),
        };
        json!({
            "verdict": self.verdict,
            "certificate": { "kind": self.certificate.kind(), "payload": payload },
        })
    }
}

impl Serialize for Decision {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

fn obstruction_json(f: &FieldDesc, o: &Obstruction) -> Value {
    match o {
        Obstruction::NotHyperbolic => json!({
            "obstruction": "NotHyperbolic",
            "text": "F(p) = F and q is not hyperbolic",
        }),
        Obstruction::NotSimilarToPfister { similarity } => json!({
            "obstruction": "NotSimilarToPfister",
            "similarity": f.format_class(similarity),
            "text": format!("p = {}*q and q is not similar to a Pfister form", f.format_class(similarity)),
        }),
        Obstruction::NotDivisible { pi, scalar } => json!({
            "obstruction": "NotDivisible",
            "pi": pi.format(f),
            "scalar": f.format_class(scalar),
            "text": format!("{}*p is a neighbour of {} and q is not a multiple of it", f.format_class(scalar), pi.format(f)),
        }),
    }
}

/// Search budgets for [`hyperbolic_over_ff`].
#[derive(Clone, Debug)]
pub struct HypConfig {
    pub h_samples: usize,
    pub seed: u64,
    pub pfister_search_budget: usize,
}

impl Default for HypConfig {
    fn default() -> Self {
        HypConfig { h_samples: 50, seed: 0, pfister_search_budget: 400 }
    }
}

fn is_hyperbolic_plane(p: &QForm) -> Result<bool> {
    Ok(p.dim() == 2 && lg::is_hyperbolic(p)?)
}

/// Is `q` hyperbolic over the function field of `p`?
pub fn hyperbolic_over_ff(q: &QForm, p: &QForm, cfg: &HypConfig) -> Result<Decision> {
    let field = q.field();
    if p.field() != field {
        return Err(Error::FieldMismatch(q.field().to_string(), p.field().to_string()));
    }
    match decide(q, p, cfg) {
        Err(Error::UnsupportedField(_)) | Err(Error::SearchExhausted(_)) => {
            Ok(Decision::new(field, Verdict::Unknown, Certificate::SearchExhausted))
        }
        other => other,
    }
}

fn decide(q: &QForm, p: &QForm, cfg: &HypConfig) -> Result<Decision> {
    use Certificate as C;
    let field = q.field();
    let cf = field.class_field();

    // (1) F(p) = F
    if p.dim() == 1 || is_hyperbolic_plane(p)? {
        let h = lg::is_hyperbolic(q)?;
        return Ok(Decision::yes_no(
            field,
            h,
            C::AlreadyHyperbolic,
            C::InvariantObstruction(Obstruction::NotHyperbolic),
        ));
    }
    // (2)
    if lg::is_hyperbolic(q)? {
        return Ok(Decision::new(field, Verdict::Yes, C::AlreadyHyperbolic));
    }
    // (3) q is not hyperbolic over F, hence not over a purely transcendental extension
    if lg::is_isotropic(p)? {
        return Ok(Decision::new(field, Verdict::No, C::PurelyTranscendental));
    }
    // from here on only the anisotropic part of q matters for divisibility
    let q_an = lg::witt_decompose(q)?.anisotropic_part.expect("q is not hyperbolic");
    // (4) F(p) ~ F(√a)
    if p.dim() == 2 {
        let a = field.class_neg(&field.class_mul(&p.diag()[0], &p.diag()[1])?)?;
        let pi = PfisterSpec::new(vec![field.class_neg(&a)?]);
        return Ok(match pfister::divide_by_pfister(&q_an, &pi)? {
            Some(quotient) => Decision::new(field, Verdict::Yes, C::QuadExtDivisibility { a, quotient }),
            None => Decision::new(field, Verdict::No, C::TwoDimDivisibilityObstruction { beta: p.clone() }),
        });
    }
    // (5) p similar to q
    if p.dim() == q.dim() {
        if let Some(similarity) = similarity_factor(p, q)? {
            return Ok(match pfister::similar_to_pfister(q)? {
                Some(s) => {
                    Decision::new(field, Verdict::Yes, C::SelfPfister { scalar: s.scalar, spec: s.spec, similarity })
                }
                None => Decision::new(
                    field,
                    Verdict::No,
                    C::InvariantObstruction(Obstruction::NotSimilarToPfister { similarity }),
                ),
            });
        }
    }
    // (6) F(p) and F(π) are equivalent for a neighbour p of π
    if let Neighbor::Yes { spec, scalar } = pfister::neighbor_of(p)? {
        return Ok(match pfister::divide_by_pfister(&q_an, &spec)? {
            Some(quotient) => Decision::new(field, Verdict::Yes, C::PfisterFactor { pi: spec, quotient, scalar }),
            None => Decision::new(
                field,
                Verdict::No,
                C::InvariantObstruction(Obstruction::NotDivisible { pi: spec, scalar }),
            ),
        });
    }
    // (7a) binary subforms r ⊆ p: hyperbolic over F(p) forces hyperbolic over F(r)
    let e = p.diag();
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            let beta = p.select(&[i, j])?;
            let pi = PfisterSpec::new(vec![field.class_mul(&e[i], &e[j])?]);
            if pfister::divide_by_pfister(&q_an, &pi)?.is_none() {
                return Ok(Decision::new(field, Verdict::No, C::TwoDimDivisibilityObstruction { beta }));
            }
        }
    }
    // (7b) H(p) ⊆ G(q)
    let np = p.scale_class(&e[0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for a in lg::sample_h(&np, cfg.h_samples, &mut rng) {
        if !lg::in_g_class(&a, q)? {
            return Ok(Decision::new(field, Verdict::No, C::HObstruction { a }));
        }
    }
    // (8) p similar to a half-dimensional subform of a 3-fold π dividing q
    if p.dim() == 4 && q_an.dim() % 8 == 0 {
        let scalar = e[0].clone();
        let mut pool: Vec<SquareClass> = vec![cf.class_one(), field.class_minus_one()];
        for x in np.diag() {
            if !pool.contains(x) {
                pool.push(x.clone());
            }
        }
        let mut tried = 0;
        'search: for i in 0..pool.len() {
            for j in i..pool.len() {
                for k in j..pool.len() {
                    tried += 1;
                    if tried > cfg.pfister_search_budget {
                        break 'search;
                    }
                    let pi = PfisterSpec::new(vec![pool[i].clone(), pool[j].clone(), pool[k].clone()]);
                    let big = pi.expand(field)?;
                    if lg::is_isotropic(&big)? || !lg::is_subform(&np, &big)? {
                        continue;
                    }
                    if let Some(quotient) = pfister::divide_by_pfister(&q_an, &pi)? {
                        return Ok(Decision::new(field, Verdict::Yes, C::PfisterFactor { pi, quotient, scalar }));
                    }
                }
            }
        }
    }
    // (9)
    Ok(Decision::new(field, Verdict::Unknown, C::SearchExhausted))
}

/// Some `c` with `p ≃ c·q`, tried over products of diagonal entries.
fn similarity_factor(p: &QForm, q: &QForm) -> Result<Option<SquareClass>> {
    let field = p.field();
    let mut tried: Vec<SquareClass> = Vec::new();
    for x in p.diag() {
        for y in q.diag() {
            let c = field.class_mul(x, y)?;
            if tried.contains(&c) {
                continue;
            }
            if lg::is_isometric(p, &q.scale_class(&c)?)? {
                return Ok(Some(c));
            }
            tried.push(c);
        }
    }
    Ok(None)
}

/// Re-derive a decision's certificate using deciders other than the one
/// that produced it. `Unknown` decisions replay trivially.
pub fn replay(q: &QForm, p: &QForm, d: &Decision) -> Result<bool> {
    use Certificate as C;
    let field = q.field();
    let half = |q: &QForm| -> Result<bool> { Ok(q.dim().is_multiple_of(2) && 2 * lg::witt_index(q)? == q.dim()) };
    Ok(match (&d.verdict, &d.certificate) {
        (Verdict::Unknown, _) => true,
        (Verdict::Yes, C::AlreadyHyperbolic) => half(q)?,
        (Verdict::No, C::InvariantObstruction(Obstruction::NotHyperbolic)) => {
            (p.dim() == 1 || (p.dim() == 2 && lg::witt_index(p)? == 1)) && !half(q)?
        }
        (Verdict::No, C::PurelyTranscendental) => lg::witt_index(p)? > 0 && !half(q)?,
        (Verdict::Yes, C::QuadExtDivisibility { a, quotient }) => {
            let lin = form_of(field, &[field.class_one(), field.class_neg(a)?])?;
            p.dim() == 2 && field.class_neg(&p.determinant())? == *a && up_to_hyperbolic(q, &lin.tensor(quotient)?)?
        }
        (Verdict::Yes, C::PfisterFactor { pi, quotient, scalar }) => {
            let big = pi.expand(field)?;
            lg::is_subform(&p.scale_class(scalar)?, &big)? && up_to_hyperbolic(q, &big.tensor(quotient)?)?
        }
        (Verdict::Yes, C::SelfPfister { scalar, spec, similarity }) => {
            lg::is_isometric(p, &q.scale_class(similarity)?)?
                && lg::is_isometric(&q.scale_class(scalar)?, &spec.expand(field)?)?
        }
        (Verdict::No, C::InvariantObstruction(Obstruction::NotSimilarToPfister { similarity })) => {
            lg::is_isometric(p, &q.scale_class(similarity)?)?
                && (!q.dim().is_power_of_two() || !pfister::in_in(q, q.dim().trailing_zeros() as usize)?)
        }
        (Verdict::No, C::InvariantObstruction(Obstruction::NotDivisible { pi, scalar })) => {
            let big = pi.expand(field)?;
            2 * p.dim() > big.dim() && lg::is_subform(&p.scale_class(scalar)?, &big)? && !quotient_exists(q, pi)?
        }
        (Verdict::No, C::HObstruction { a }) => {
            let np = p.scale_class(&p.diag()[0])?;
            lg::in_h_class(a, &np)? && !lg::in_g_class(a, q)?
        }
        (Verdict::No, C::TwoDimDivisibilityObstruction { beta }) => {
            let a = field.class_neg(&beta.determinant())?;
            beta.dim() == 2 && lg::is_subform(beta, p)? && 2 * witt_index_over_quad_ext_class(q, &a)? < q.dim()
        }
        _ => false,
    })
}

fn form_of(field: &FieldDesc, c: &[SquareClass]) -> Result<QForm> {
    QForm::from_classes(field, c.to_vec())
}

fn quotient_exists(q: &QForm, pi: &PfisterSpec) -> Result<bool> {
    Ok(match lg::witt_decompose(q)?.anisotropic_part {
        Some(an) => pfister::divide_by_pfister(&an, pi)?.is_some(),
        None => true,
    })
}

/// `q ≃ x ⊥ kH` for some `k ≥ 0`.
fn up_to_hyperbolic(q: &QForm, x: &QForm) -> Result<bool> {
    if x.dim() > q.dim() || !(q.dim() - x.dim()).is_multiple_of(2) {
        return Ok(false);
    }
    let k = (q.dim() - x.dim()) / 2;
    if k == 0 {
        return lg::is_isometric(q, x);
    }
    lg::is_isometric(q, &x.orth_sum(&QForm::hyperbolic(q.field(), k)?)?)
}

/// Witt index of `q` over `F(√a)`.
pub fn witt_index_over_quad_ext(q: &QForm, a: &FieldElement) -> Result<usize> {
    let field = q.field();
    if field.is_square(a)? {
        return Err(Error::SquareArgument(field.format_element(a)));
    }
    witt_index_over_quad_ext_class(q, &field.entry_class(a)?)
}

fn witt_index_over_quad_ext_class(q: &QForm, a: &SquareClass) -> Result<usize> {
    let field = q.field();
    if a.is_one() {
        return Err(Error::SquareArgument(field.format_class(a)));
    }
    let k = field.clone().quad_ext(&field.class_rep(a))?;
    lg::witt_index(&QForm::from_classes(&k, q.diag().to_vec())?)
}

/// Result of sampling `p(v) ∈ G(q)` at random vectors.
#[derive(Clone, Debug, Serialize)]
pub struct SpecializationReport {
    pub trials: usize,
    /// Values `p(v)` that are not similarity factors of `q`.
    pub failures: Vec<SquareClass>,
}

/// Sample values of `p`, normalized to represent 1, and test each for
/// membership in `G(q)`.
pub fn check_specialization_necessity<R: Rng + ?Sized>(
    p: &QForm,
    q: &QForm,
    trials: usize,
    rng: &mut R,
) -> Result<SpecializationReport> {
    let np = p.scale_class(&p.diag()[0])?;
    let f = np.field().class_field().clone();
    let mut failures: Vec<SquareClass> = Vec::new();
    let mut done = 0;
    while done < trials {
        let v: Vec<FieldElement> = (0..np.dim()).map(|_| f.random_element(rng, 6)).collect();
        let val = np.evaluate(&v);
        if np.field().is_zero(&val) {
            continue;
        }
        done += 1;
        let c = np.field().entry_class(&val)?;
        if !lg::in_g_class(&c, q)? && !failures.contains(&c) {
            failures.push(c);
        }
    }
    Ok(SpecializationReport { trials, failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::parse_form;

    fn q(s: &str) -> QForm {
        parse_form(s, &FieldDesc::Rationals).unwrap()
    }

    fn run(a: &str, b: &str) -> Decision {
        let d = hyperbolic_over_ff(&q(a), &q(b), &HypConfig::default()).unwrap();
        assert!(replay(&q(a), &q(b), &d).unwrap(), "{a} over {b}: {d:?}");
        d
    }

    #[test]
    fn quadratic_extension_branch() {
        let d = run("<1,1,1,1>", "<1,1>");
        assert_eq!(d.verdict, Verdict::Yes);
        assert_eq!(d.certificate.kind(), "QuadExtDivisibility");
        assert_eq!(run("<1,1,1,3>", "<1,1>").verdict, Verdict::No);
        // isotropic q with anisotropic part 14<1,1>
        assert_eq!(run("<1,-3,-2,-6>", "<14,14>").verdict, Verdict::Yes);
    }

    #[test]
    fn trivial_branches() {
        assert_eq!(run("<1,-1>", "<1,1,1>").certificate, Certificate::AlreadyHyperbolic);
        let d = run("<1,1,1,1>", "<1,1,-2>");
        assert_eq!((d.verdict, d.certificate), (Verdict::No, Certificate::PurelyTranscendental));
        assert_eq!(run("<1,1>", "<3>").verdict, Verdict::No);
    }

    #[test]
    fn pfister_branches() {
        let d = run("<1,1,1,1>", "<1,1,1>");
        assert_eq!((d.verdict, d.certificate.kind()), (Verdict::Yes, "PfisterFactor"));
        let d = run("pf(1,1,1)", "pf(1,1,1)");
        assert_eq!((d.verdict, d.certificate.kind()), (Verdict::Yes, "SelfPfister"));
        let d = run("<1,1,1,2>", "<1,1,1,2>");
        assert_eq!(d.verdict, Verdict::No);
        assert_eq!(run("<1,1,1,3>", "<1,1,1>").verdict, Verdict::No);
    }

    #[test]
    fn quad_ext_index() {
        let one = FieldElement::from_i64(1);
        let a = FieldElement::from_i64;
        assert_eq!(witt_index_over_quad_ext(&q("<1,-5>"), &a(5)).unwrap(), 1);
        assert_eq!(witt_index_over_quad_ext(&q("<1,1>"), &a(-1)).unwrap(), 1);
        assert_eq!(witt_index_over_quad_ext(&q("<1,1,1>"), &a(2)).unwrap(), 0);
        assert!(matches!(witt_index_over_quad_ext(&q("<1,1>"), &one), Err(Error::SquareArgument(_))));
    }

    #[test]
    fn specialization() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = check_specialization_necessity(&q("<1,1>"), &q("<1,1,1,1>"), 30, &mut rng).unwrap();
        assert!(r.failures.is_empty());
        let r = check_specialization_necessity(&q("<1,1>"), &q("<1,1,1,3>"), 30, &mut rng).unwrap();
        assert!(!r.failures.is_empty());
    }

    #[test]
    fn json_shape() {
        let d = run("<1,1,1,1>", "<1,1>");
        assert_eq!(
            d.to_json().to_string(),
            r#"{"certificate":{"kind":"QuadExtDivisibility","payload":{"a":"-1","quotient":"<1,1>"}},"verdict":"Yes"}"#
        );
    }
}
