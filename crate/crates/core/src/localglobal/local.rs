//! Classification of forms over the completions `Q_v`.

use serde::Serialize;

use super::hilbert::{hilbert_local, LocalClass, Place};

/// Invariants of a form over a p-adic completion: dimension, determinant
/// class and Hasse invariant `∏_{i<j}(aᵢ,aⱼ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicInv {
    pub place: Place,
    pub dim: usize,
    pub det: LocalClass,
    pub hasse: i8,
}

impl PadicInv {
    pub fn zero(place: Place) -> Self {
        PadicInv { place, dim: 0, det: LocalClass::one(place), hasse: 1 }
    }

    pub fn of_entries(entries: &[LocalClass], place: Place) -> Self {
        entries.iter().fold(Self::zero(place), |acc, &a| acc.orth(&PadicInv { place, dim: 1, det: a, hasse: 1 }))
    }

    pub fn orth(&self, other: &PadicInv) -> PadicInv {
        let v = self.place;
        PadicInv {
            place: v,
            dim: self.dim + other.dim,
            det: self.det.mul(other.det, v),
            hasse: self.hasse * other.hasse * hilbert_local(self.det, other.det, v),
        }
    }

    /// Invariants of `c·q`.
    pub fn scale(&self, c: LocalClass) -> PadicInv {
        let v = self.place;
        let n = self.dim;
        // s(cq) = s(q)·(c,c)^{n(n-1)/2}·(c,det q)^{n-1}
        let mut h = self.hasse;
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            h *= hilbert_local(c, c, v);
        }
        if n >= 1 && (n - 1) % 2 == 1 {
            h *= hilbert_local(c, self.det, v);
        }
        let det = if n % 2 == 1 { self.det.mul(c, v) } else { self.det };
        PadicInv { place: v, dim: n, det, hasse: h }
    }

    pub fn neg(&self) -> PadicInv {
        self.scale(LocalClass::of(-1, self.place))
    }

    pub fn is_isotropic(&self) -> bool {
        let v = self.place;
        let minus_one = LocalClass::of(-1, v);
        let neg_det = self.det.mul(minus_one, v);
        match self.dim {
            0 | 1 => false,
            2 => neg_det.is_square(v),
            3 => hilbert_local(minus_one, neg_det, v) == self.hasse,
            4 => !self.det.is_square(v) || self.hasse == hilbert_local(minus_one, minus_one, v),
            _ => true,
        }
    }

    /// Invariants after splitting off one hyperbolic plane.
    pub fn split_plane(&self) -> PadicInv {
        let v = self.place;
        let det = self.det.mul(LocalClass::of(-1, v), v);
        PadicInv { place: v, dim: self.dim - 2, det, hasse: self.hasse * hilbert_local(LocalClass::of(-1, v), det, v) }
    }

    /// Local Witt index and invariants of the anisotropic part.
    pub fn decompose(&self) -> (usize, PadicInv) {
        let mut cur = *self;
        let mut i = 0;
        while cur.is_isotropic() {
            cur = cur.split_plane();
            i += 1;
        }
        (i, cur)
    }

    pub fn witt_index(&self) -> usize {
        self.decompose().0
    }

    pub fn anisotropic_dim(&self) -> usize {
        self.decompose().1.dim
    }

    /// Complement of a subform: invariants of `c` with `self ≃ r ⊥ c`.
    pub fn complement(&self, r: &PadicInv) -> PadicInv {
        let v = self.place;
        let det = self.det.mul(r.det, v);
        PadicInv { place: v, dim: self.dim - r.dim, det, hasse: self.hasse * r.hasse * hilbert_local(r.det, det, v) }
    }

    /// Whether `r` is a subform, via `i(self ⊥ −r) ≥ dim r`.
    pub fn contains(&self, r: &PadicInv) -> bool {
        r.dim <= self.dim && self.orth(&r.neg()).witt_index() >= r.dim
    }
}

/// Local data of a rational form at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalData {
    pub place: Place,
    pub dim: usize,
    /// Representative of the determinant class as `(odd valuation, unit)`.
    pub det: (bool, u8),
    pub hasse: i8,
    /// Only meaningful at the real place.
    pub signature: Option<i64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(entries: &[i64], p: u64) -> PadicInv {
        let v = Place::Padic(p);
        PadicInv::of_entries(&entries.iter().map(|&a| LocalClass::of(a, v)).collect::<Vec<_>>(), v)
    }

    #[test]
    fn sum_of_four_squares() {
        assert_eq!(inv(&[1, 1, 1, 1], 7).anisotropic_dim(), 0);
        assert_eq!(inv(&[1, 1, 1, 1], 2).anisotropic_dim(), 4);
        assert_eq!(inv(&[1, 1, 1], 2).anisotropic_dim(), 3);
        assert_eq!(inv(&[1, -1], 5).anisotropic_dim(), 0);
        assert_eq!(inv(&[1, 1, -7], 2).anisotropic_dim(), 3);
    }

    #[test]
    fn scaling_matches_entrywise_product() {
        for p in [2u64, 3, 5] {
            let v = Place::Padic(p);
            for c in [-6i64, -1, 2, 3, 5] {
                let q = [1i64, 2, -3, 5];
                for n in 1..=q.len() {
                    let scaled: Vec<i64> = q[..n].iter().map(|a| a * c).collect();
                    assert_eq!(inv(&q[..n], p).scale(LocalClass::of(c, v)), inv(&scaled, p));
                }
            }
        }
    }
}
