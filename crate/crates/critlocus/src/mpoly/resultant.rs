//! Resultant in β over the α-subring: fraction-free Bareiss elimination on
//! the Sylvester matrix (rows of g's coefficients first), with a direct
//! evaluation fast path for monic linear h.

use super::{MpolyError, Poly};

pub fn resultant_in_beta(g: &Poly, h: &Poly) -> Result<Poly, MpolyError> {
    if g.space() != h.space() {
        return Err(MpolyError::VarSpaceMismatch);
    }
    let m = g.deg_beta() as usize;
    let n = h.deg_beta() as usize;
    if m == 0 || n == 0 {
        return Err(MpolyError::ZeroDegree);
    }
    // h = β − ℓ(α), monic: Res(g, h) = (−1)^m · g|_{β=ℓ}
    if n == 1 && h.is_monic_in_beta() {
        let ell = h.beta_coefficients().swap_remove(0).neg();
        let eval = g.eval_beta(&ell)?;
        return Ok(if m % 2 == 1 { eval.neg() } else { eval });
    }
    let gc = g.beta_coefficients();
    let hc = h.beta_coefficients();
    let size = m + n;
    let space = g.space();
    let zero = Poly::zero(space);
    // Sylvester matrix: n shifted rows of g's coefficients, then m of h's,
    // highest-degree coefficient first in each row.
    let mut mat: Vec<Vec<Poly>> = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![zero.clone(); size];
        for (j, c) in gc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        mat.push(row);
    }
    for i in 0..m {
        let mut row = vec![zero.clone(); size];
        for (j, c) in hc.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        mat.push(row);
    }
    bareiss_determinant(mat, space)
}

/// Fraction-free Bareiss determinant over the polynomial ring; every
/// division is exact by construction.
fn bareiss_determinant(
    mut mat: Vec<Vec<Poly>>,
    space: &std::sync::Arc<super::VarSpace>,
) -> Result<Poly, MpolyError> {
    let size = mat.len();
    let mut sign_flip = false;
    let mut prev_pivot = Poly::one(space);
    for k in 0..size {
        if mat[k][k].is_zero() {
            let swap = (k + 1..size).find(|&r| !mat[r][k].is_zero());
            match swap {
                Some(r) => {
                    mat.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(Poly::zero(space)),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let num = mat[k][k]
                    .checked_mul(&mat[i][j])?
                    .checked_sub(&mat[i][k].checked_mul(&mat[k][j])?)?;
                mat[i][j] = Poly::exact_divide(&num, &prev_pivot)?;
            }
            mat[i][k] = Poly::zero(space);
        }
        prev_pivot = mat[k][k].clone();
    }
    let det = mat[size - 1][size - 1].clone();
    Ok(if sign_flip { det.neg() } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarSpace;

    /// General-path resultant (Bareiss) bypassing the linear fast path, for
    /// sign cross-checks.
    fn resultant_general(g: &Poly, h: &Poly) -> Poly {
        let m = g.deg_beta() as usize;
        let n = h.deg_beta() as usize;
        assert!(m >= 1 && n >= 1);
        let gc = g.beta_coefficients();
        let hc = h.beta_coefficients();
        let size = m + n;
        let zero = Poly::zero(g.space());
        let mut mat = Vec::new();
        for i in 0..n {
            let mut row = vec![zero.clone(); size];
            for (j, c) in gc.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            mat.push(row);
        }
        for i in 0..m {
            let mut row = vec![zero.clone(); size];
            for (j, c) in hc.iter().rev().enumerate() {
                row[i + j] = c.clone();
            }
            mat.push(row);
        }
        bareiss_determinant(mat, g.space()).unwrap()
    }

    #[test]
    fn res_linear_pair() {
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b + 2*a1").unwrap();
        let h = Poly::parse(&s, "b - a1").unwrap();
        let r = resultant_in_beta(&g, &h).unwrap();
        let expect = Poly::parse(&s, "3*a1").unwrap();
        assert!(r == expect || r == expect.neg(), "got {r}");
        // fast path and Bareiss agree including sign
        assert_eq!(r, resultant_general(&g, &h));
    }

    #[test]
    fn res_shared_root_is_zero() {
        let s = VarSpace::unhatted(3);
        let h = Poly::parse(&s, "b - a1").unwrap();
        let t = Poly::parse(&s, "b^2 + a2*b + 1").unwrap();
        let g = h.checked_mul(&t).unwrap();
        assert!(resultant_in_beta(&g, &h).unwrap().is_zero());
    }

    #[test]
    fn res_vs_evaluation() {
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b^3 + a2*b + a1").unwrap();
        let h = Poly::parse(&s, "b - a1").unwrap();
        let r = resultant_in_beta(&g, &h).unwrap();
        let eval = Poly::parse(&s, "a1^3 + a1*a2 + a1").unwrap();
        assert!(r == eval || r == eval.neg());
        assert_eq!(r, resultant_general(&g, &h));
    }

    #[test]
    fn res_degree_checks() {
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b + a1").unwrap();
        let c = Poly::parse(&s, "a1").unwrap();
        assert_eq!(resultant_in_beta(&g, &c), Err(MpolyError::ZeroDegree));
        assert_eq!(resultant_in_beta(&c, &g), Err(MpolyError::ZeroDegree));
    }

    #[test]
    fn res_quadratic_pair() {
        // Res(β² − a1, β² − a2) = (a1 − a2)² by hand
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b^2 - a1").unwrap();
        let h = Poly::parse(&s, "b^2 - a2").unwrap();
        let r = resultant_in_beta(&g, &h).unwrap();
        let expect = Poly::parse(&s, "a1^2 - 2*a1*a2 + a2^2").unwrap();
        assert_eq!(r, expect);
    }
}
