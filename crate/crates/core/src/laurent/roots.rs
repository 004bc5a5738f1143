//! Polynomial roots from the companion matrix, refined by Newton steps.

use nalgebra::DMatrix;

use super::C64;

fn horner_with_derivative(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::default();
    let mut dp = C64::default();
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Roots of `sum_j coeffs[j] z^j`; the leading coefficient must be nonzero.
/// Zero roots are returned for vanishing low-order coefficients.
pub fn poly_roots(coeffs: &[C64]) -> Vec<C64> {
    let zero = C64::default();
    let nz = coeffs.iter().take_while(|c| **c == zero).count();
    let mut roots = vec![zero; nz];
    let c = &coeffs[nz..];
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return roots;
    }
    let lead = c[n];
    if n == 1 {
        roots.push(-c[0] / lead);
        return roots;
    }
    // companion matrix of the monic polynomial, last column holds -c_j/lead
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    let eig = m
        .clone()
        .schur()
        .eigenvalues()
        .expect("complex Schur form is triangular");
    for mut z in eig.iter().copied() {
        // a few Newton steps on the original coefficients
        for _ in 0..3 {
            let (p, dp) = horner_with_derivative(c, z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            let next = z - step;
            let (pn, _) = horner_with_derivative(c, next);
            if !(pn.norm() < p.norm()) {
                break;
            }
            z = next;
        }
        roots.push(z);
    }
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic() {
        // z^2 + 1
        let mut r = poly_roots(&[C64::new(1.0, 0.0), C64::default(), C64::new(1.0, 0.0)]);
        r.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((r[0] + C64::i()).norm() < 1e-14);
        assert!((r[1] - C64::i()).norm() < 1e-14);
    }

    #[test]
    fn zero_roots_and_linear() {
        let r = poly_roots(&[C64::default(), C64::new(-2.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(r.len(), 2);
        assert!(r.contains(&C64::default()));
        assert!(r.iter().any(|z| (z - 2.0).norm() < 1e-14));
    }
}
