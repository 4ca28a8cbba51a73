//! Closed forms over `F_p`: a form is classified by dimension and
//! determinant, and every form of dimension at least 3 is isotropic.

/// `true` marks the non-square class. Returns the Witt index and the
/// anisotropic part.
pub fn decompose(p: u64, diag: &[bool]) -> (usize, Vec<bool>) {
    let n = diag.len();
    let det = diag.iter().fold(false, |a, &b| a ^ b);
    let minus_one = p % 4 == 3;
    let sign = |k: usize| minus_one && k % 2 == 1;
    if n % 2 == 1 {
        let m = n / 2;
        (m, vec![det ^ sign(m)])
    } else if det ^ sign(n / 2) {
        let m = n / 2 - 1;
        (m, vec![false, det ^ sign(m)])
    } else {
        (n / 2, Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        // ⟨1,1⟩ over F7 is anisotropic, over F5 hyperbolic
        assert_eq!(decompose(7, &[false, false]).0, 0);
        assert_eq!(decompose(5, &[false, false]).0, 1);
        assert_eq!(decompose(7, &[false, false, false]), (1, vec![true]));
        assert_eq!(decompose(3, &[false; 4]).0, 2);
    }
}
