//! Brute-force oracles that share no code with the deciders.

use num_integer::Roots;

/// `counts[c]` = number of `v ∈ F_pⁿ` with `Σ aᵢvᵢ² = c`.
pub fn fp_value_counts(p: u64, entries: &[u64]) -> Vec<u64> {
    let p = p as usize;
    let mut counts = vec![0u64; p];
    counts[0] = 1;
    for &a in entries {
        let mut single = vec![0u64; p];
        for x in 0..p {
            single[(a as usize * x % p * x) % p] += 1;
        }
        let mut next = vec![0u64; p];
        for (s, &cs) in counts.iter().enumerate() {
            if cs == 0 {
                continue;
            }
            for (t, &ct) in single.iter().enumerate() {
                next[(s + t) % p] += cs * ct;
            }
        }
        counts = next;
    }
    counts
}

pub fn fp_isotropic(p: u64, entries: &[u64]) -> bool {
    fp_value_counts(p, entries)[0] > 1
}

fn nonresidue(p: u64) -> u64 {
    (2..p).find(|&a| (1..p).all(|x| x * x % p != a)).unwrap()
}

/// The two isometry classes of dimension `n ≥ 1`, or the empty form.
pub fn fp_classification(p: u64, n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let a = vec![1u64; n];
    let mut b = a.clone();
    b[n - 1] = nonresidue(p);
    vec![a, b]
}

/// Value distributions determine isometry classes over `F_p`.
pub fn fp_isometric(p: u64, a: &[u64], b: &[u64]) -> bool {
    a.len() == b.len() && fp_value_counts(p, a) == fp_value_counts(p, b)
}

/// `r ⊆ q` iff `r ⊥ s ≃ q` for one of the classes `s`.
pub fn fp_subform(p: u64, r: &[u64], q: &[u64]) -> bool {
    if r.len() > q.len() {
        return false;
    }
    fp_classification(p, q.len() - r.len()).into_iter().any(|s| {
        let mut rs = r.to_vec();
        rs.extend(s);
        fp_isometric(p, &rs, q)
    })
}

pub fn fp_hyperbolic_entries(p: u64, k: usize) -> Vec<u64> {
    (0..k).flat_map(|_| [1, p - 1]).collect()
}

pub fn fp_witt_index(p: u64, q: &[u64]) -> usize {
    (0..=q.len() / 2).rev().find(|&k| fp_subform(p, &fp_hyperbolic_entries(p, k), q)).unwrap_or(0)
}

pub fn fp_hyperbolic(p: u64, q: &[u64]) -> bool {
    q.len().is_multiple_of(2) && fp_isometric(p, q, &fp_hyperbolic_entries(p, q.len() / 2))
}

fn isqrt_exact(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = n.sqrt();
    (r * r == n).then_some(r)
}

/// Search bound used for dimension `n` by [`rational_search`].
pub fn rational_search_bound(n: usize) -> i64 {
    match n {
        0..=3 => 200,
        4 => 30,
        _ => 12,
    }
}

/// A nonzero integer vector with `Σ aᵢvᵢ² = 0` and coordinates bounded by
/// [`rational_search_bound`], solving for the last coordinate.
pub fn rational_search(a: &[i64]) -> Option<Vec<i64>> {
    let n = a.len();
    if n < 2 {
        return None;
    }
    let h = rational_search_bound(n);
    let last = a[n - 1] as i128;
    let mut v = vec![-h; n - 1];
    loop {
        if v.iter().any(|&x| x != 0) {
            let s: i128 = v.iter().zip(a).map(|(&x, &c)| c as i128 * x as i128 * x as i128).sum();
            if s % last == 0 {
                if let Some(z) = isqrt_exact(-s / last) {
                    let mut w = v.clone();
                    w.push(z as i64);
                    return Some(w);
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n - 1 {
                return None;
            }
            if v[k] < h {
                v[k] += 1;
                break;
            }
            v[k] = -h;
            k += 1;
        }
    }
}

/// Whether `s + t√a` is a nonzero square in `Q(√a)`, for a non-square `a`.
fn is_square_in_quad(s: i128, t: i128, a: i128) -> bool {
    if t == 0 {
        return s > 0 && isqrt_exact(s).is_some() || s != 0 && s % a == 0 && isqrt_exact(s / a).is_some();
    }
    // (x + y√a)² = s + t√a forces x² = (s ± n)/2 with n² = s² − a t²
    let Some(n) = isqrt_exact(s * s - a * t * t) else { return false };
    [s + n, s - n].iter().any(|&m| m != 0 && isqrt_exact(2 * m).is_some())
}

/// A nonzero vector over `Z[√a]` with coordinates `u + v√a`, `|u|,|v| ≤ h`,
/// on `Σ aᵢzᵢ² = 0`; the last coordinate is solved for.
pub fn quad_ext_search(e: &[i64], a: i64, h: i64) -> bool {
    let n = e.len();
    if n < 2 {
        return false;
    }
    let a = a as i128;
    let last = e[n - 1] as i128;
    let mut v = vec![-h; 2 * (n - 1)];
    loop {
        if v.iter().any(|&x| x != 0) {
            // Σ eᵢ(uᵢ² + a vᵢ²) + 2√a Σ eᵢuᵢvᵢ
            let mut s = 0i128;
            let mut t = 0i128;
            for i in 0..n - 1 {
                let (u, w, c) = (v[2 * i] as i128, v[2 * i + 1] as i128, e[i] as i128);
                s += c * (u * u + a * w * w);
                t += 2 * c * u * w;
            }
            // z² = −(s + t√a)/last; scale by last² to stay integral
            if is_square_in_quad(-s * last, -t * last, a) || (s == 0 && t == 0) {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == v.len() {
                return false;
            }
            if v[k] < h {
                v[k] += 1;
                break;
            }
            v[k] = -h;
            k += 1;
        }
    }
}

/// Isotropy of `⟨e⟩ ⊥ x⟨o⟩` over `F_p((x))` by exhaustive search for a
/// primitive solution modulo `x²` (`e`-coordinates taken mod `x²`,
/// `o`-coordinates mod `x`).
pub fn laurent_truncated_isotropic(p: u64, e: &[u64], o: &[u64]) -> bool {
    let ne = e.len();
    let no = o.len();
    let total = 2 * ne + no;
    let mut v = vec![0u64; total];
    loop {
        let (u0, rest) = v.split_at(ne);
        let (u1, w0) = rest.split_at(ne);
        let primitive = u0.iter().chain(w0).any(|&x| x != 0);
        if primitive {
            let c0: u64 = (0..ne).map(|i| e[i] * u0[i] % p * u0[i]).sum::<u64>() % p;
            let c1: u64 = ((0..ne).map(|i| 2 * e[i] % p * u0[i] % p * u1[i]).sum::<u64>()
                + (0..no).map(|j| o[j] * w0[j] % p * w0[j]).sum::<u64>())
                % p;
            if c0 == 0 && c1 == 0 {
                return true;
            }
        }
        let mut k = 0;
        loop {
            if k == total {
                return false;
            }
            v[k] += 1;
            if v[k] < p {
                break;
            }
            v[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_counts() {
        assert_eq!(fp_value_counts(5, &[1]), vec![1, 2, 0, 0, 2]);
        assert!(fp_isotropic(5, &[1, 1]));
        assert!(!fp_isotropic(7, &[1, 1]));
        assert!(fp_isometric(7, &[1, 1], &[2, 2]));
        assert!(!fp_isometric(7, &[1, 1], &[1, 3]));
        assert_eq!(fp_witt_index(7, &[1, 1, 1, 1]), 2);
        assert_eq!(fp_witt_index(7, &[1, 1, 1, 3]), 1);
        assert!(fp_subform(7, &[3], &[1, 1]));
    }

    #[test]
    fn rational_and_quadratic_search() {
        assert_eq!(rational_search(&[1, 1, -2]).map(|v| v.len()), Some(3));
        assert!(rational_search(&[1, 1, 1]).is_none());
        assert!(quad_ext_search(&[1, 1], -1, 2));
        assert!(!quad_ext_search(&[1, 1], 2, 4));
        assert!(quad_ext_search(&[1, 1, 1], -2, 3));
        assert!(!quad_ext_search(&[1, 1, 1], 2, 3));
    }

    #[test]
    fn truncated_series() {
        assert!(!laurent_truncated_isotropic(7, &[1, 1], &[1, 1]));
        assert!(laurent_truncated_isotropic(7, &[1, 6], &[]));
        assert!(laurent_truncated_isotropic(7, &[1], &[1, 6]));
        assert!(!laurent_truncated_isotropic(7, &[1], &[3]));
    }
}
