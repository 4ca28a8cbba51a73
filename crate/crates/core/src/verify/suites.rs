use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{Map, Value};

use super::gen::*;
use super::oracle;
use super::{GenConfig, Outcome};
use crate::error::Result;
use crate::ffield::{self, Decision, HypConfig, Verdict};
use crate::fields::{FieldDesc, SquareClass};
use crate::forms::QForm;
use crate::localglobal as lg;
use crate::pfister::{self, PfisterSpec};

fn input(pairs: &[(&str, String)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.to_string(), Value::String(v.clone()));
    }
    Value::Object(m)
}

fn fail(input: Value, msg: impl Into<String>) -> Outcome {
    Outcome { violation: Some((input, msg.into())), ..Outcome::default() }
}

fn skip() -> Outcome {
    Outcome { skipped: true, ..Outcome::default() }
}

macro_rules! ensure {
    ($cond:expr, $input:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(fail($input, format!($($msg)*)));
        }
    };
}

fn fmt_res(e: &[u64]) -> String {
    let s: Vec<String> = e.iter().map(|a| a.to_string()).collect();
    format!("<{}>", s.join(","))
}

fn decide(q: &QForm, p: &QForm, seed: u64) -> Result<Decision> {
    ffield::hyperbolic_over_ff(q, p, &HypConfig { seed, ..HypConfig::default() })
}

// ---------------------------------------------------------------- springer

pub(super) fn springer(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let base =
        cfg.field.clone().unwrap_or(if i.is_multiple_of(2) { FieldDesc::PrimeField(7) } else { FieldDesc::Rationals });
    // every tenth instance is small enough for the truncated-series oracle
    let brute = i.is_multiple_of(10) && base == FieldDesc::PrimeField(7);
    let top = if brute { 2 } else { 4 };
    let (p0, q0, e, o) = if let FieldDesc::PrimeField(p) = base {
        let e = {
            let d_ = rng.gen_range(1..=top);
            residue_entries(rng, p, d_)
        };
        let o = {
            let d_ = rng.gen_range(1..=top);
            residue_entries(rng, p, d_)
        };
        (residue_form(p, &e), residue_form(p, &o), e, o)
    } else {
        let (d0, d1) = (rng.gen_range(1..=top), rng.gen_range(1..=top));
        (random_form(rng, &base, d0, cfg.height), random_form(rng, &base, d1, cfg.height), Vec::new(), Vec::new())
    };
    let q = laurent_pair(&base, &p0, &q0, "x")?;
    let inp = input(&[("field", q.field().to_string()), ("p", p0.to_string()), ("q", q0.to_string())]);
    let w = lg::witt_decompose(&q)?;
    let expected = lg::witt_index(&p0)? + lg::witt_index(&q0)?;
    ensure!(w.index == expected, inp, "i(p + x q) = {} but i(p) + i(q) = {expected}", w.index);
    let an_dim = w.anisotropic_part.as_ref().map_or(0, |a| a.dim());
    ensure!(an_dim + 2 * w.index == q.dim(), inp, "anisotropic part has dimension {an_dim}");
    if brute {
        let iso = oracle::laurent_truncated_isotropic(7, &e, &o);
        ensure!(iso == (w.index > 0), inp, "truncated series says isotropic = {iso}, index {}", w.index);
        if let Some(an) = &w.anisotropic_part {
            let (mut ae, mut ao) = (Vec::new(), Vec::new());
            for c in an.diag() {
                let SquareClass::Laurent { base: b, odd } = c else { unreachable!() };
                let SquareClass::Residue(nr) = **b else { unreachable!() };
                let r = if nr { 3 } else { 1 };
                if *odd {
                    ao.push(r)
                } else {
                    ae.push(r)
                }
            }
            ensure!(
                ae.len() <= 2 && ao.len() <= 2 && !oracle::laurent_truncated_isotropic(7, &ae, &ao),
                inp,
                "anisotropic part {an} is isotropic"
            );
        }
    }
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- local-global

pub(super) fn local_global(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let rational = match &cfg.field {
        Some(FieldDesc::Rationals) => true,
        Some(_) => false,
        None => i % 4 == 3,
    };
    if rational {
        local_global_rational(rng, cfg)
    } else {
        let p = match &cfg.field {
            Some(FieldDesc::PrimeField(p)) => *p,
            _ => SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())],
        };
        local_global_finite(p, rng, cfg)
    }
}

fn local_global_finite(p: u64, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let n = rng.gen_range(cfg.min_dim.max(1)..=cfg.max_dim.min(6));
    let e = residue_entries(rng, p, n);
    let e2 = residue_entries(rng, p, n);
    let r = {
        let d_ = rng.gen_range(1..=n);
        residue_entries(rng, p, d_)
    };
    let (q, q2, rf) = (residue_form(p, &e), residue_form(p, &e2), residue_form(p, &r));
    let inp = input(&[("field", format!("F{p}")), ("q", fmt_res(&e)), ("q2", fmt_res(&e2)), ("r", fmt_res(&r))]);
    let iso = lg::is_isotropic(&q)?;
    ensure!(iso == oracle::fp_isotropic(p, &e), inp, "isotropy decider says {iso}");
    let idx = lg::witt_index(&q)?;
    let oi = oracle::fp_witt_index(p, &e);
    ensure!(idx == oi, inp, "Witt index {idx}, enumeration {oi}");
    let isom = lg::is_isometric(&q, &q2)?;
    ensure!(isom == oracle::fp_isometric(p, &e, &e2), inp, "isometry decider says {isom}");
    let sub = lg::is_subform(&rf, &q)?;
    ensure!(sub == oracle::fp_subform(p, &r, &e), inp, "subform decider says {sub}");
    Ok(Outcome::default())
}

fn local_global_rational(rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let n = rng.gen_range(cfg.min_dim.max(1)..=cfg.max_dim.min(5));
    let e = rational_entries(rng, n, cfg.height);
    let q = rational_form(&e);
    let inp = input(&[("field", "Q".into()), ("q", q.to_string())]);
    let iso = lg::is_isotropic(&q)?;
    if let Some(v) = oracle::rational_search(&e) {
        let val: i128 = v.iter().zip(&e).map(|(&x, &a)| a as i128 * x as i128 * x as i128).sum();
        ensure!(val == 0, inp, "search returned a non-zero of value {val}");
        ensure!(iso, inp, "decider says anisotropic but {v:?} is an isotropic vector");
    }
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- quad-ext

pub(super) fn quad_ext(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(30);
    match i % 3 {
        0 | 1 => {
            let a = nonsquare(rng, h);
            let b = sqfree(rng, h);
            let p = rational_form(&[b, -a * b]);
            let q = if i.is_multiple_of(3) {
                let r = {
                    let d_ = rng.gen_range(1..=3);
                    random_rational(rng, d_, h)
                };
                rational_form(&[1, -a]).tensor(&r)?
            } else {
                {
                    let d_ = 2 * rng.gen_range(1..=2);
                    random_rational(rng, d_, h)
                }
            };
            let inp = input(&[("q", q.to_string()), ("p", p.to_string()), ("a", a.to_string())]);
            let d = decide(&q, &p, i as u64)?;
            let split = 2 * ffield::witt_index_over_quad_ext(&q, &f.int(a))? == q.dim();
            let want = if split { Verdict::Yes } else { Verdict::No };
            ensure!(d.verdict == want, inp, "verdict {:?}, index over Q(sqrt a) says hyperbolic = {split}", d.verdict);
            ensure!(i % 3 == 1 || split, inp, "constructed multiple of <1,-a> is not hyperbolic over Q(sqrt a)");
            ensure!(ffield::replay(&q, &p, &d)?, inp, "certificate {} failed replay", d.certificate.kind());
            Ok(Outcome { replayed: 1, ..Outcome::default() })
        }
        _ => {
            let n = rng.gen_range(2..=3);
            let e = rational_entries(rng, n, 10);
            let a = nonsquare(rng, 10);
            let q = to_quad_ext(&rational_form(&e), a)?;
            let inp = input(&[("field", q.field().to_string()), ("q", q.to_string())]);
            let iso = lg::is_isotropic(&q)?;
            let bound = if n == 2 { 40 } else { 5 };
            let found = oracle::quad_ext_search(&e, a, bound);
            ensure!(!found || iso, inp, "search found an isotropic vector, decider says anisotropic");
            if n == 2 {
                // a binary form has an isotropic vector of height ≤ |entries|
                ensure!(found == iso, inp, "binary decider says {iso}, search says {found}");
            }
            Ok(Outcome::default())
        }
    }
}

// ---------------------------------------------------------------- hyp-multiples

pub(super) fn hyp_multiples(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let n = rng.gen_range(1..=2);
    let pi = rational_pfister(rng, n, h);
    let big = pi.expand(&f)?;
    let p = if n == 2 && rng.gen_bool(0.5) {
        big.select(&[0, 1, 2])?.scale_class(&SquareClass::Rational(sqfree(rng, h)))?
    } else {
        big.clone()
    };
    let r = {
        let d_ = rng.gen_range(1..=3);
        random_rational(rng, d_, h)
    };
    let odd = i % 4 == 3;
    let q = if odd { big.tensor(&r)?.orth_sum(&random_rational(rng, 1, h))? } else { big.tensor(&r)? };
    let inp = input(&[("q", q.to_string()), ("p", p.to_string())]);
    let d = decide(&q, &p, i as u64)?;
    let want = if odd { Verdict::No } else { Verdict::Yes };
    ensure!(d.verdict == want, inp, "verdict {:?}", d.verdict);
    ensure!(ffield::replay(&q, &p, &d)?, inp, "certificate {} failed replay", d.certificate.kind());
    Ok(Outcome { replayed: 1, ..Outcome::default() })
}

// ---------------------------------------------------------------- becher / el73

fn tensor_entries(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y % p)).collect()
}

fn becher_like(rng: &mut ChaCha8Rng, cfg: &GenConfig, el73: bool) -> Result<Outcome> {
    let p = match &cfg.field {
        Some(FieldDesc::PrimeField(p)) => *p,
        _ => SMALL_PRIMES[rng.gen_range(0..SMALL_PRIMES.len())],
    };
    let (pe, qe) = if el73 {
        (
            {
                let d_ = rng.gen_range(2..=5);
                residue_entries(rng, p, d_)
            },
            residue_entries(rng, p, 2),
        )
    } else if rng.gen_bool(0.2) {
        // dim q = 1 needs p anisotropic
        (residue_entries(rng, p, 2), residue_entries(rng, p, 1))
    } else {
        let dq = rng.gen_range(2..=3);
        (
            {
                let d_ = rng.gen_range(dq..=5);
                residue_entries(rng, p, d_)
            },
            residue_entries(rng, p, dq),
        )
    };
    let inp = input(&[("field", format!("F{p}")), ("p", fmt_res(&pe)), ("q", fmt_res(&qe))]);
    if !oracle::fp_isotropic(p, &tensor_entries(p, &pe, &qe)) || (qe.len() == 1 && oracle::fp_isotropic(p, &pe)) {
        return Ok(skip());
    }
    let pf = residue_form(p, &pe);
    let max_r = if el73 { pe.len() } else { qe.len().min(pe.len()) };
    let mut found = false;
    for d in 1..=max_r {
        for r in oracle::fp_classification(p, d) {
            let sub = lg::is_subform(&residue_form(p, &r), &pf)?;
            ensure!(sub == oracle::fp_subform(p, &r, &pe), inp, "subform decider disagrees on {}", fmt_res(&r));
            if !sub {
                continue;
            }
            let t = tensor_entries(p, &r, &qe);
            if if el73 { oracle::fp_hyperbolic(p, &t) } else { oracle::fp_isotropic(p, &t) } {
                found = true;
            }
        }
    }
    ensure!(found, inp, "no subform r of p with the required property");
    Ok(Outcome::default())
}

pub(super) fn becher(_: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    becher_like(rng, cfg, false)
}

pub(super) fn el73(_: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    becher_like(rng, cfg, true)
}

// ---------------------------------------------------------------- decidable Yes instances

/// `(q, p)` over Q with `q` hyperbolic over `F(p)` by construction: either
/// `p` binary and `q` a multiple of `⟨1,−a⟩`, or `p` a ternary neighbour of
/// a 2-fold dividing `q`.
fn yes_instance(rng: &mut ChaCha8Rng, h: i64, binary_rate: f64) -> Result<(QForm, QForm)> {
    let f = FieldDesc::Rationals;
    loop {
        let (q, p) = if rng.gen_bool(binary_rate) {
            let a = nonsquare(rng, h);
            let b = sqfree(rng, h);
            let r = {
                let d_ = rng.gen_range(1..=3);
                random_rational(rng, d_, h)
            };
            (rational_form(&[1, -a]).tensor(&r)?, rational_form(&[b, -a * b]))
        } else {
            let pi = rational_pfister(rng, 2, h).expand(&f)?;
            let r = {
                let d_ = rng.gen_range(1..=2);
                random_rational(rng, d_, h)
            };
            let c = SquareClass::Rational(sqfree(rng, h));
            (pi.tensor(&r)?, pi.select(&[0, 1, 2])?.scale_class(&c)?)
        };
        // a hyperbolic plane keeps the instance Yes but makes q isotropic
        let q = if rng.gen_bool(0.25) {
            let c = sqfree(rng, h);
            q.orth_sum(&rational_form(&[c, -c]))?
        } else {
            q
        };
        // keep p anisotropic so that F(p) is not purely transcendental
        if !lg::is_isotropic(&p)? && !lg::is_hyperbolic(&q)? {
            return Ok((q, p));
        }
    }
}

/// Run the decider on a constructed Yes instance and replay it.
fn confirm_yes(q: &QForm, p: &QForm, seed: u64) -> Result<std::result::Result<(), String>> {
    let d = decide(q, p, seed)?;
    if d.verdict != Verdict::Yes {
        return Ok(Err(format!("constructed instance decided {:?}", d.verdict)));
    }
    if !ffield::replay(q, p, &d)? {
        return Ok(Err(format!("certificate {} failed replay", d.certificate.kind())));
    }
    Ok(Ok(()))
}

// ---------------------------------------------------------------- i1

pub(super) fn i1(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let a = nonsquare(rng, h);
    let b = sqfree(rng, h);
    let p = rational_form(&[b, -a * b]);
    let mut q = {
        let d_ = rng.gen_range(1..=3);
        random_rational(rng, d_, h)
    };
    if rng.gen_bool(0.5) {
        let c = sqfree(rng, h);
        q = rational_form(&[c, -a * c]).orth_sum(&q)?;
    }
    let pi = {
        let d_ = rng.gen_range(1..=2);
        rational_pfister(rng, d_, h)
    };
    let big = pi.expand(&f)?;
    let m = ffield::witt_index_over_quad_ext(&q, &f.int(a))?;
    let (kname, pq, qq) = match i % 3 {
        0 => {
            let d = a;
            (format!("Q(sqrt {d})"), to_quad_ext(&big.tensor(&p)?, d)?, to_quad_ext(&big.tensor(&q)?, d)?)
        }
        1 => {
            let d = nonsquare(rng, h);
            (format!("Q(sqrt {d})"), to_quad_ext(&big.tensor(&p)?, d)?, to_quad_ext(&big.tensor(&q)?, d)?)
        }
        _ => ("Q((x))".into(), to_laurent(&big.tensor(&p)?, "x")?, to_laurent(&big.tensor(&q)?, "x")?),
    };
    let inp = input(&[("K", kname), ("pi", pi.format(&f)), ("p", p.to_string()), ("q", q.to_string())]);
    if !lg::is_isotropic(&pq)? {
        return Ok(skip());
    }
    let lhs = lg::witt_index(&qq)?;
    ensure!(lhs >= big.dim() * m, inp, "i((pi q)_K) = {lhs} < dim pi * i(q_F(p)) = {}", big.dim() * m);
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- itrans

pub(super) fn itrans(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let n = if i % 4 == 3 { 2 } else { 1 };
    let a = nonsquare(rng, h);
    let b = sqfree(rng, h);
    let p = rational_form(&[b, -a * b]);
    let mut q = {
        let d_ = rng.gen_range(2..=3);
        random_rational(rng, d_, h)
    };
    if rng.gen_bool(0.5) {
        let c = sqfree(rng, h);
        q = rational_form(&[c, -a * c]).orth_sum(&q)?;
    }
    let inp = input(&[("n", n.to_string()), ("p", p.to_string()), ("q", q.to_string())]);
    let m = ffield::witt_index_over_quad_ext(&q, &f.int(a))?;
    let rhs = (1 << n) * m;

    // K = Q((x1))…((xn)), π = ⊗⟨1,−xᵢ⟩, ρ = π⊗⟨1,−a⟩ similar to π⊗p
    let mut k = f.clone();
    let mut slots = Vec::new();
    for j in 1..=n {
        k = k.laurent(&format!("x{j}"))?;
        slots = slots.into_iter().map(|c| k.class_embed(c)).collect();
        let xj = k.square_class(&k.variable(&format!("x{j}"))?)?;
        slots.push(k.class_neg(&xj)?);
    }
    let lift = |c: &SquareClass| lift_class(&k, c.clone());
    let pi = PfisterSpec::new(slots.clone());
    let pik = pi.expand(&k)?;
    let qk = QForm::from_classes(&k, q.diag().iter().map(&lift).collect())?;
    let phi = pik.tensor(&qk)?;
    let mut rho_slots = slots;
    rho_slots.push(lift(&SquareClass::Rational(-a)));
    let rho = PfisterSpec::new(rho_slots).expand(&k)?;

    // upper bound: ρ splits over F(√a)((x1))…, where i(φ) = 2ⁿ i(q_F(√a))
    let mut l = f.clone().quad_ext(&f.int(a))?;
    for j in 1..=n {
        l = l.laurent(&format!("x{j}"))?;
    }
    let upper = lg::witt_index(&QForm::from_classes(&l, phi.diag().to_vec())?)?;
    ensure!(upper == rhs, inp, "index over the splitting field {upper} differs from 2^n i(q_F(p)) = {rhs}");

    // lower bound: hyperbolic part plus ρ-multiples peeled from φ_an
    let w = lg::witt_decompose(&phi)?;
    let mut lower = w.index;
    let mut cur = w.anisotropic_part;
    'peel: while let Some(c) = cur.clone() {
        if c.dim() < rho.dim() {
            break;
        }
        let mut cands: Vec<SquareClass> = Vec::new();
        for x in c.diag() {
            for y in [x.clone(), k.class_neg(x)?] {
                if !cands.contains(&y) {
                    cands.push(y);
                }
            }
        }
        for bcls in cands {
            let br = rho.scale_class(&bcls)?;
            if lg::is_subform(&br, &c)? {
                lower += rho.dim() / 2;
                cur = if c.dim() == br.dim() { None } else { lg::witt_decompose(&c.minus(&br)?)?.anisotropic_part };
                continue 'peel;
            }
        }
        break;
    }
    ensure!(lower <= rhs, inp, "peeled lower bound {lower} exceeds 2^n i(q_F(p)) = {rhs}");
    if lower < rhs {
        return Ok(skip());
    }
    Ok(Outcome::default())
}

fn lift_class(k: &FieldDesc, c: SquareClass) -> SquareClass {
    match k {
        FieldDesc::LaurentExt { base, .. } => k.class_embed(lift_class(base, c)),
        _ => c,
    }
}

// ---------------------------------------------------------------- ekm-gen

pub(super) fn ekm_gen(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let h = cfg.height.min(12);
    let (q, p) = yes_instance(rng, h, 0.6)?;
    let inp = input(&[("q", q.to_string()), ("p", p.to_string())]);
    if let Err(e) = confirm_yes(&q, &p, i as u64)? {
        return Ok(fail(inp, e));
    }
    let np = p.scale_class(&p.diag()[0])?;
    const PER_FIELD: usize = 20;
    // K = F
    for c in lg::sample_h(&np, PER_FIELD, rng).into_iter().take(PER_FIELD) {
        ensure!(lg::in_g_class(&c, &q)?, inp, "H-value {c} of p is not in G(q)");
    }
    // K = F(√d) for five random d; rational samples filtered by H_K(p)
    for _ in 0..5 {
        let d = nonsquare(rng, h);
        let (pk, qk) = (to_quad_ext(&np, d)?, to_quad_ext(&q, d)?);
        let mut accepted = 0;
        for _ in 0..10 * PER_FIELD {
            if accepted == PER_FIELD {
                break;
            }
            let c = SquareClass::Rational(sqfree(rng, h));
            if lg::in_h_class(&c, &pk)? {
                accepted += 1;
                ensure!(lg::in_g_class(&c, &qk)?, inp, "over Q(sqrt {d}), {c} is in H(p) but not in G(q)");
            }
        }
    }
    // K = F((x))
    let (pk, qk) = (to_laurent(&np, "x")?, to_laurent(&q, "x")?);
    for c in lg::sample_h(&pk, PER_FIELD, rng).into_iter().take(PER_FIELD) {
        ensure!(lg::in_g_class(&c, &qk)?, inp, "over Q((x)), H-value is not in G(q)");
    }
    Ok(Outcome { replayed: 1, ..Outcome::default() })
}

// ---------------------------------------------------------------- f32

pub(super) fn f32(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let (q, p) = yes_instance(rng, h, 0.7)?;
    let pi = {
        let d_ = rng.gen_range(1..=2);
        rational_pfister(rng, d_, h)
    }
    .expand(&f)?;
    let (pq, pp) = (pi.tensor(&q)?, pi.tensor(&p)?);
    let inp = input(&[("q", q.to_string()), ("p", p.to_string()), ("pi", pi.to_string())]);
    if let Err(e) = confirm_yes(&q, &p, i as u64)? {
        return Ok(fail(inp, e));
    }
    let d = decide(&pq, &pp, i as u64)?;
    ensure!(ffield::replay(&pq, &pp, &d)?, inp, "certificate {} failed replay", d.certificate.kind());
    ensure!(d.verdict != Verdict::No, inp, "pi q decided not hyperbolic over F(pi p)");
    if p.dim() == 2 {
        ensure!(d.verdict == Verdict::Yes, inp, "binary p: verdict {:?}", d.verdict);
    }
    Ok(Outcome { skipped: d.verdict == Verdict::Unknown, replayed: 2, violation: None })
}

// ---------------------------------------------------------------- self-pfister

pub(super) fn self_pfister(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let (q, expect) = match i % 3 {
        0 | 1 => {
            let n = rng.gen_range(1..=3);
            let c = SquareClass::Rational(sqfree(rng, h));
            (rational_pfister(rng, n, h).expand(&f)?.scale_class(&c)?, Verdict::Yes)
        }
        _ => {
            let q = {
                let d_ = rng.gen_range(3..=4);
                random_rational(rng, d_, h)
            };
            if lg::is_isotropic(&q)? || pfister::similar_to_pfister(&q)?.is_some() {
                return Ok(skip());
            }
            (q, Verdict::No)
        }
    };
    let inp = input(&[("q", q.to_string())]);
    let d = decide(&q, &q, i as u64)?;
    ensure!(d.verdict == expect, inp, "q over F(q) decided {:?}", d.verdict);
    ensure!(ffield::replay(&q, &q, &d)?, inp, "certificate {} failed replay", d.certificate.kind());
    Ok(Outcome { replayed: 1, ..Outcome::default() })
}

// ---------------------------------------------------------------- hypchar-iv

pub(super) fn hypchar_iv(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let h = cfg.height.min(12);
    let (q, p) = yes_instance(rng, h, 0.5)?;
    let inp = input(&[("q", q.to_string()), ("p", p.to_string())]);
    if let Err(e) = confirm_yes(&q, &p, i as u64)? {
        return Ok(fail(inp, e));
    }
    let r = ffield::check_specialization_necessity(&p, &q, 10, rng)?;
    ensure!(r.failures.is_empty(), inp, "values of p outside G(q): {:?}", r.failures);
    let (pk, qk) = (to_laurent(&p, "x")?, to_laurent(&q, "x")?);
    let r = ffield::check_specialization_necessity(&pk, &qk, 10, rng)?;
    ensure!(r.failures.is_empty(), inp, "over Q((x)), values of p outside G(q)");
    Ok(Outcome { replayed: 1, ..Outcome::default() })
}

// ---------------------------------------------------------------- subform

pub(super) fn subform(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let (q, p) = yes_instance(rng, h, 0.5)?;
    let inp = input(&[("q", q.to_string()), ("p", p.to_string())]);
    if let Err(e) = confirm_yes(&q, &p, i as u64)? {
        return Ok(fail(inp, e));
    }
    let mut replayed = 1;
    if !lg::is_isotropic(&q)? {
        let ds = lg::sample_d(&p, 6, rng);
        let dq = lg::sample_d(&q, 6, rng);
        for a in &ds {
            for b in &dq {
                let ok = lg::is_subform(&p.scale_class(a)?, &q.scale_class(b)?)?;
                ensure!(ok, inp, "{a}*p is not a subform of {b}*q");
            }
        }
    }
    // forward direction: p ⊆ p ⊥ s realizes p(v) = (p ⊥ s)(v, 0)
    let s = {
        let d_ = rng.gen_range(1..=2);
        random_rational(rng, d_, h)
    };
    let ps = p.orth_sum(&s)?;
    let mut v: Vec<_> = (0..p.dim()).map(|_| f.random_element(rng, 9)).collect();
    let pv = p.evaluate(&v);
    v.extend((0..s.dim()).map(|_| f.zero()));
    ensure!(ps.evaluate(&v) == pv, inp, "substitution does not realize p(v)");
    if !f.is_zero(&pv) {
        ensure!(lg::in_d_class(&f.square_class(&pv)?, &ps)?, inp, "p(v) not represented by p + s");
        replayed += 1;
    }
    Ok(Outcome { replayed, ..Outcome::default() })
}

// ---------------------------------------------------------------- hauptsatz

pub(super) fn hauptsatz(i: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(7);
    let n = 2 + i % 2;
    let terms = rng.gen_range(1..=3);
    let mut q: Option<QForm> = None;
    let mut text = Vec::new();
    for _ in 0..terms {
        let spec = rational_pfister(rng, n, h);
        let c = sqfree(rng, h) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let t = spec.expand(&f)?.scale_class(&SquareClass::Rational(c))?;
        text.push(format!("{c}*{}", spec.format(&f)));
        q = Some(match q {
            None => t,
            Some(q) => q.orth_sum(&t)?,
        });
    }
    let q = q.unwrap();
    let inp = input(&[("n", n.to_string()), ("q", text.join(" + "))]);
    ensure!(pfister::in_in(&q, n)?, inp, "sum of {n}-fold Pfister forms not in I^{n}");
    let w = lg::witt_decompose(&q)?;
    let Some(an) = w.anisotropic_part else { return Ok(Outcome::default()) };
    ensure!(an.dim() >= 1 << n, inp, "anisotropic part {an} of dimension {} < 2^{n}", an.dim());
    ensure!(lg::is_hyperbolic(&q.minus(&an)?)?, inp, "q - q_an is not hyperbolic");
    if an.dim() == 1 << n {
        let Some(s) = pfister::similar_to_pfister(&an)? else {
            return Ok(fail(inp, format!("anisotropic part {an} not recognized as similar to a Pfister form")));
        };
        let ok = lg::is_isometric(&an.scale_class(&s.scalar)?, &s.spec.expand(&f)?)?;
        ensure!(ok, inp, "similarity witness {} fails replay", s.spec.format(&f));
        return Ok(Outcome { replayed: 1, ..Outcome::default() });
    }
    Ok(Outcome::default())
}

// ---------------------------------------------------------------- roussey

pub(super) fn roussey(_: usize, rng: &mut ChaCha8Rng, cfg: &GenConfig) -> Result<Outcome> {
    let f = FieldDesc::Rationals;
    let h = cfg.height.min(12);
    let a = nonsquare(rng, h);
    let b = sqfree(rng, h);
    let p = rational_form(&[b, -a * b]);
    let c = sqfree(rng, h);
    let q = rational_form(&[c, -a * c]).orth_sum(&{
        let d_ = rng.gen_range(1..=2);
        random_rational(rng, d_, h)
    })?;
    let inp = input(&[("q", q.to_string()), ("p", p.to_string())]);
    ensure!(ffield::witt_index_over_quad_ext(&q, &f.int(a))? > 0, inp, "q not isotropic over Q(sqrt a)");
    for x in lg::sample_h(&p, 20, rng) {
        ensure!(lg::in_h_class(&x, &q)?, inp, "{x} in H(p) but not in H(q)");
    }
    Ok(Outcome::default())
}
