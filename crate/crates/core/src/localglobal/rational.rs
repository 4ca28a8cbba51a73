//! Forms over the rationals: classification by local invariants and
//! reconstruction of a form from prescribed invariants.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::hilbert::{hilbert_symbol, LocalClass, Place};
use super::local::PadicInv;
use crate::error::{Error, Result};
use crate::fields::arith::{prime_divisors, primes, square_free_mul, square_free_part, DEFAULT_FACTOR_BOUND};
use crate::fields::s_square_classes;

/// Number of auxiliary primes tried by existential searches over square
/// classes before giving up.
pub(crate) const EXTRA_PRIME_BUDGET: usize = 2000;

/// Complete isometry invariants of a rational form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: usize,
    pub det: i64,
    /// Hasse invariants; places not listed carry `+1`.
    pub hasse: BTreeMap<Place, i8>,
    pub signature: i64,
}

impl Invariants {
    pub fn hasse_at(&self, v: Place) -> i8 {
        self.hasse.get(&v).copied().unwrap_or(1)
    }

    fn places(&self) -> BTreeSet<Place> {
        let mut out: BTreeSet<Place> = self.hasse.keys().copied().collect();
        out.insert(Place::Real);
        out.insert(Place::Padic(2));
        out.extend(prime_divisors(self.det).into_iter().map(Place::Padic));
        out
    }

    /// Equality as invariants (missing Hasse entries count as `+1`).
    pub fn same_as(&self, other: &Invariants) -> bool {
        self.dim == other.dim
            && self.det == other.det
            && self.signature == other.signature
            && self.places().union(&other.places()).all(|&v| self.hasse_at(v) == other.hasse_at(v))
    }
}

pub(crate) fn support(entries: &[i64]) -> Vec<u64> {
    let mut s: BTreeSet<u64> = BTreeSet::from([2]);
    for &a in entries {
        s.extend(prime_divisors(a));
    }
    s.into_iter().collect()
}

/// `∞`, `2` and the primes dividing some entry.
pub fn relevant_places(entries: &[i64]) -> Vec<Place> {
    std::iter::once(Place::Real).chain(support(entries).into_iter().map(Place::Padic)).collect()
}

pub(crate) fn padic_inv(entries: &[i64], v: Place) -> PadicInv {
    let cls: Vec<LocalClass> = entries.iter().map(|&a| LocalClass::of(a, v)).collect();
    PadicInv::of_entries(&cls, v)
}

pub(crate) fn real_counts(entries: &[i64]) -> (usize, usize) {
    let neg = entries.iter().filter(|&&a| a < 0).count();
    (entries.len() - neg, neg)
}

fn real_hasse(neg: usize) -> i8 {
    if (neg * neg.saturating_sub(1) / 2) % 2 == 1 {
        -1
    } else {
        1
    }
}

pub(crate) fn det(entries: &[i64]) -> Result<i64> {
    entries.iter().try_fold(1i64, |acc, &a| square_free_mul(acc, a))
}

pub fn hasse_invariant(entries: &[i64], v: Place) -> i8 {
    match v {
        Place::Real => real_hasse(real_counts(entries).1),
        _ => padic_inv(entries, v).hasse,
    }
}

pub fn invariants(entries: &[i64]) -> Result<Invariants> {
    let (pos, neg) = real_counts(entries);
    let hasse = relevant_places(entries)
        .into_iter()
        .map(|v| (v, hasse_invariant(entries, v)))
        .filter(|&(_, h)| h == -1)
        .collect();
    Ok(Invariants { dim: entries.len(), det: det(entries)?, hasse, signature: pos as i64 - neg as i64 })
}

pub fn local_witt_index(entries: &[i64], v: Place) -> usize {
    match v {
        Place::Real => {
            let (p, n) = real_counts(entries);
            p.min(n)
        }
        _ => padic_inv(entries, v).witt_index(),
    }
}

pub fn witt_index(entries: &[i64]) -> usize {
    relevant_places(entries).into_iter().map(|v| local_witt_index(entries, v)).min().unwrap_or(0)
}

/// Witt index and the anisotropic part, rebuilt from its invariants.
pub fn decompose(entries: &[i64]) -> Result<(usize, Vec<i64>)> {
    let m = witt_index(entries);
    if m == 0 {
        return Ok((0, entries.to_vec()));
    }
    let n = entries.len();
    if 2 * m == n {
        return Ok((m, Vec::new()));
    }
    let mut hasse = BTreeMap::new();
    for v in relevant_places(entries) {
        let h = match v {
            Place::Real => real_hasse(real_counts(entries).1 - m),
            _ => {
                let mut inv = padic_inv(entries, v);
                for _ in 0..m {
                    inv = inv.split_plane();
                }
                inv.hasse
            }
        };
        if h == -1 {
            hasse.insert(v, h);
        }
    }
    let d = det(entries)?;
    let inv = Invariants {
        dim: n - 2 * m,
        det: if m % 2 == 1 { -d } else { d },
        hasse,
        signature: invariants(entries)?.signature,
    };
    Ok((m, form_from_invariants(&inv)?))
}

pub fn is_isometric(a: &[i64], b: &[i64]) -> Result<bool> {
    Ok(a.len() == b.len() && invariants(a)?.same_as(&invariants(b)?))
}

pub fn is_subform(r: &[i64], q: &[i64]) -> bool {
    if r.len() > q.len() {
        return false;
    }
    let mut all = q.to_vec();
    all.extend(r.iter().map(|a| -a));
    witt_index(&all) >= r.len()
}

/// Invariants of `c` where `q ≃ r ⊥ c`; `r` must be a subform.
pub fn complement_invariants(q: &[i64], r: &[i64]) -> Result<Invariants> {
    let iq = invariants(q)?;
    let ir = invariants(r)?;
    let dc = square_free_mul(iq.det, ir.det)?;
    let mut places: BTreeSet<Place> = iq.places().union(&ir.places()).copied().collect();
    places.extend(prime_divisors(dc).into_iter().map(Place::Padic));
    let hasse = places
        .into_iter()
        .map(|v| (v, iq.hasse_at(v) * ir.hasse_at(v) * hilbert_symbol(ir.det, dc, v)))
        .filter(|&(_, h)| h == -1)
        .collect();
    Ok(Invariants { dim: q.len() - r.len(), det: dc, hasse, signature: iq.signature - ir.signature })
}

/// Complement of a subform, as a form (empty when `r` exhausts `q`).
pub fn complement(q: &[i64], r: &[i64]) -> Result<Vec<i64>> {
    if q.len() == r.len() {
        return Ok(Vec::new());
    }
    form_from_invariants(&complement_invariants(q, r)?)
}

/// Square classes `±∏ pᵉ` over `base`, followed by the same classes times
/// one auxiliary prime outside `base`, in increasing order of that prime.
pub(crate) fn class_candidates(base: &[u64]) -> impl Iterator<Item = i64> {
    let base: Vec<u64> = base.to_vec();
    let classes: Vec<i64> = s_square_classes(&base).iter().map(|c| c.rational().unwrap()).collect();
    let first = classes.clone().into_iter();
    let extra = primes()
        .filter(move |q| !base.contains(q))
        .take(EXTRA_PRIME_BUDGET)
        .flat_map(move |q| classes.clone().into_iter().filter_map(move |c| c.checked_mul(q as i64)));
    first.chain(extra)
}

fn inconsistent(msg: &str) -> Error {
    Error::InconsistentInvariants(msg.to_string())
}

/// A diagonal rational form with the given invariants.
pub fn form_from_invariants(inv: &Invariants) -> Result<Vec<i64>> {
    let n = inv.dim;
    if n == 0 {
        return Err(inconsistent("dimension must be positive"));
    }
    if inv.det == 0 {
        return Err(inconsistent("determinant must be nonzero"));
    }
    let det = inv.det.signum() * square_free_part(inv.det.unsigned_abs() as u128, DEFAULT_FACTOR_BOUND)? as i64;
    if inv.signature.unsigned_abs() as usize > n || (n as i64 - inv.signature) % 2 != 0 {
        return Err(inconsistent("signature must satisfy |sig| <= dim and sig = dim mod 2"));
    }
    if inv.hasse.values().any(|&h| h != 1 && h != -1) {
        return Err(inconsistent("Hasse invariants must be signs"));
    }
    let neg = (n as i64 - inv.signature) as usize / 2;
    if (det < 0) != (neg % 2 == 1) {
        return Err(inconsistent("sign of the determinant disagrees with the signature"));
    }
    if inv.hasse_at(Place::Real) != real_hasse(neg) {
        return Err(inconsistent("real Hasse invariant disagrees with the signature"));
    }
    if inv.hasse.values().filter(|&&h| h == -1).count() % 2 == 1 {
        return Err(inconsistent("product of Hasse invariants over all places must be +1"));
    }
    let inv = Invariants { det, ..inv.clone() };
    if n == 1 && !inv.hasse.is_empty() {
        return Err(inconsistent("a one-dimensional form has trivial Hasse invariants"));
    }
    if n == 2 {
        for v in inv.places() {
            if LocalClass::of(-det, v).is_square(v) && inv.hasse_at(v) == -1 {
                return Err(inconsistent(&format!("binary form with -det a square at {v} must have Hasse +1 there")));
            }
        }
    }
    let out = build(&inv).ok_or_else(|| Error::SearchExhausted("no form realizes the invariants".into()))?;
    debug_assert!(invariants(&out).map(|i| i.same_as(&inv)).unwrap_or(false));
    if !invariants(&out)?.same_as(&inv) {
        return Err(Error::SearchExhausted("reconstructed form failed verification".into()));
    }
    Ok(out)
}

fn place_primes(places: &BTreeSet<Place>) -> Vec<u64> {
    places
        .iter()
        .filter_map(|v| match v {
            Place::Padic(p) => Some(*p),
            Place::Real => None,
        })
        .collect()
}

fn build(inv: &Invariants) -> Option<Vec<i64>> {
    let n = inv.dim;
    let det = inv.det;
    if n == 1 {
        return Some(vec![det]);
    }
    let places = inv.places();
    let base = place_primes(&places);
    let neg = (n as i64 - inv.signature) as usize / 2;
    if n == 2 {
        for a in class_candidates(&base) {
            let ok_sign = match neg {
                0 => a > 0,
                2 => a < 0,
                _ => true,
            };
            if !ok_sign {
                continue;
            }
            let mut check = places.clone();
            check.extend(prime_divisors(a).into_iter().map(Place::Padic));
            if check.iter().all(|&v| hilbert_symbol(a, -det, v) == inv.hasse_at(v)) {
                return Some(vec![a, square_free_mul(a, det).ok()?]);
            }
        }
        return None;
    }
    for a in class_candidates(&base) {
        let sig = inv.signature - a.signum();
        if sig.unsigned_abs() as usize > n - 1 {
            continue;
        }
        let Ok(d2) = square_free_mul(det, a) else { continue };
        let mut check = places.clone();
        check.extend(prime_divisors(a).into_iter().map(Place::Padic));
        check.extend(prime_divisors(d2).into_iter().map(Place::Padic));
        let hasse: BTreeMap<Place, i8> =
            check.iter().map(|&v| (v, inv.hasse_at(v) * hilbert_symbol(a, d2, v))).filter(|&(_, h)| h == -1).collect();
        let rest = Invariants { dim: n - 1, det: d2, hasse, signature: sig };
        if n - 1 == 2 && check.iter().any(|&v| LocalClass::of(-d2, v).is_square(v) && rest.hasse_at(v) == -1) {
            continue;
        }
        if let Some(mut tail) = build(&rest) {
            tail.insert(0, a);
            return Some(tail);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_decompositions() {
        assert_eq!(witt_index(&[1, 1, -2, -3]), 1);
        let (m, an) = decompose(&[1, 1, -2, -3]).unwrap();
        assert_eq!(m, 1);
        assert_eq!(an.len(), 2);
        // det q = 6 = det⟨1,−1⟩·det q_an
        assert_eq!(det(&an).unwrap(), -6);
        assert_eq!(witt_index(&[1, 1, -7]), 0);
        assert_eq!(witt_index(&[1, 1, -2]), 1);
        assert_eq!(witt_index(&[1, -1, 2, -2]), 2);
        assert!(is_isometric(&[1, 1], &[2, 2]).unwrap());
        assert!(!is_isometric(&[1, 1], &[1, -1]).unwrap());
    }

    #[test]
    fn subforms() {
        assert!(is_subform(&[1, 1], &[1, 1, 1]));
        assert!(!is_subform(&[-1], &[1, 1]));
        assert!(!is_subform(&[1, -1], &[1, 1, 1, 1]));
    }

    #[test]
    fn reconstruction() {
        let inv = Invariants { dim: 2, det: -1, hasse: BTreeMap::new(), signature: 0 };
        assert_eq!(form_from_invariants(&inv).unwrap(), vec![1, -1]);
        let bad = Invariants { dim: 3, det: 1, hasse: BTreeMap::from([(Place::Padic(3), -1)]), signature: 3 };
        assert!(matches!(form_from_invariants(&bad), Err(Error::InconsistentInvariants(_))));
        for q in [vec![1, 1, 1], vec![3, 5, -7, 2], vec![-1, -1, -1, -1, 6], vec![2, 3], vec![-5]] {
            let inv = invariants(&q).unwrap();
            let r = form_from_invariants(&inv).unwrap();
            assert!(is_isometric(&q, &r).unwrap(), "{q:?} vs {r:?}");
        }
    }

    #[test]
    fn binary_reconstruction() {
        let inv = invariants(&[7, 7]).unwrap();
        let r = form_from_invariants(&inv).unwrap();
        assert!(is_isometric(&[7, 7], &r).unwrap());
    }
}
