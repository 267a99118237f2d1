//! Multivariate gcd over ℚ by the primitive pseudo-remainder sequence,
//! recursing on the variable structure. Exercised only at desk scale; the
//! polynomials in play are small by the time a gcd is requested.

use super::{MpolyError, Poly, Var};
use crate::exactnum::Rational;

/// gcd of two polynomials monic in β, normalized monic in β.
pub fn gcd_in_beta(a: &Poly, b: &Poly) -> Result<Poly, MpolyError> {
    if a.space() != b.space() {
        return Err(MpolyError::VarSpaceMismatch);
    }
    if !a.is_monic_in_beta() || !b.is_monic_in_beta() {
        return Err(MpolyError::NotMonicInBeta);
    }
    // a monic linear divisor β − ℓ is irreducible in β, so the gcd is the
    // divisor itself or a constant, decided by evaluation
    for (x, y) in [(a, b), (b, a)] {
        if y.deg_beta() == 1 {
            let ell = Poly::var(y.space(), Var::B).checked_sub(y)?;
            return if x.eval_beta(&ell)?.is_zero() {
                Ok(y.clone())
            } else {
                Ok(Poly::one(a.space()))
            };
        }
    }
    // both inputs are monic in β, so reducing the coefficients mod q and
    // evaluating the other variables at points of F_q preserves β-degrees
    // and the image of the gcd still divides both images: a coprime image
    // certifies coprimality without running the rational PRS
    if coprime_by_evaluation(a, b) {
        return Ok(Poly::one(a.space()));
    }
    let g = gcd_mv(a, b)?;
    // gcd of monic-in-β polynomials has a constant leading β-coefficient
    let lc = g
        .beta_coefficients()
        .pop()
        .and_then(|c| c.as_constant())
        .expect("gcd of monic-in-beta inputs must have constant leading coefficient");
    Ok(g.scale(&lc.recip()))
}

/// Attempts to certify gcd(a, b) constant by a modular evaluation: reduce
/// mod a 31-bit prime q, send every variable but β to a fixed point of F_q,
/// and run the univariate Euclid in β. False means "not proven coprime".
fn coprime_by_evaluation(a: &Poly, b: &Poly) -> bool {
    const Q: u64 = 2_147_483_647;
    for trial in 0..3u64 {
        let Some(ua) = eval_univariate_mod_q(a, Q, trial) else {
            continue;
        };
        let Some(ub) = eval_univariate_mod_q(b, Q, trial) else {
            continue;
        };
        let (mut g, mut h) = (ua, ub);
        while !h.is_empty() {
            let r = poly_rem_mod_q(&g, &h, Q);
            g = h;
            h = r;
        }
        if g.len() == 1 {
            return true;
        }
    }
    false
}

/// β-coefficient vector of g with the other variables sent to simple
/// trial-dependent values of F_q; None if a denominator is not invertible.
fn eval_univariate_mod_q(g: &Poly, q: u64, trial: u64) -> Option<Vec<u64>> {
    let space = g.space();
    let beta = space.index_of(Var::B)?;
    // small odd values keep the powers cheap and differ between trials
    let point: Vec<u64> = (0..space.arity() as u64)
        .map(|i| 2 * i + 3 + 97 * trial)
        .collect();
    let mut coeffs = vec![0u64; g.deg_beta() as usize + 1];
    for (m, c) in g.terms() {
        let mut val = c.reduce_mod_p(q).ok()?.residue();
        for (i, &x) in point.iter().enumerate() {
            if i != beta {
                val = (val as u128 * crate::exactnum::mod_pow(x, m.exponent(i) as u64, q) as u128
                    % q as u128) as u64;
            }
        }
        let e = m.exponent(beta) as usize;
        coeffs[e] = (coeffs[e] + val) % q;
    }
    while coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    Some(coeffs)
}

/// Remainder of g by h in F_q[β]; coefficient vectors are trimmed, h nonzero.
fn poly_rem_mod_q(g: &[u64], h: &[u64], q: u64) -> Vec<u64> {
    let mut r: Vec<u64> = g.to_vec();
    let hl = *h.last().unwrap();
    let hinv = crate::exactnum::mod_inverse(hl, q);
    while r.len() >= h.len() {
        let lead = *r.last().unwrap();
        let scale = (lead as u128 * hinv as u128 % q as u128) as u64;
        let off = r.len() - h.len();
        for (i, &hc) in h.iter().enumerate() {
            let sub = (hc as u128 * scale as u128 % q as u128) as u64;
            r[off + i] = (r[off + i] + q - sub) % q;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Primitive, positive-leading-coefficient normalization (gcds are defined
/// up to units of ℚ).
fn normalize(g: &Poly) -> Poly {
    if g.is_zero() {
        return g.clone();
    }
    let c = rational_content(g);
    g.scale(&c.recip())
}

/// The rational content with the sign of the grevlex-leading coefficient:
/// dividing by it yields integer coprime coefficients with positive lead.
fn rational_content(g: &Poly) -> Rational {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{One, Zero};
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for (_, c) in g.terms() {
        num = num.gcd(c.numer());
        den = den.lcm(c.denom());
    }
    let mut content = Rational::from_big(num, den);
    if g.terms()[0].1.is_negative() {
        content = -content;
    }
    content
}

pub(super) fn gcd_mv(a: &Poly, b: &Poly) -> Result<Poly, MpolyError> {
    if a.is_zero() {
        return Ok(normalize(b));
    }
    if b.is_zero() {
        return Ok(normalize(a));
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Poly::one(a.space()));
    }
    // main variable: the greatest variable occurring in either input
    let v = *a
        .space()
        .vars()
        .iter()
        .rev()
        .find(|&&v| a.deg_in(v) > 0 || b.deg_in(v) > 0)
        .expect("nonconstant polynomials use a variable");
    if a.deg_in(v) == 0 {
        // gcd is free of v and divides a, so reduce b to its v-content
        return gcd_mv(a, &content_in(b, v)?);
    }
    if b.deg_in(v) == 0 {
        return gcd_mv(&content_in(a, v)?, b);
    }
    let ca = content_in(a, v)?;
    let cb = content_in(b, v)?;
    let cg = gcd_mv(&ca, &cb)?;
    let pa = Poly::exact_divide(a, &ca)?;
    let pb = Poly::exact_divide(b, &cb)?;
    let (mut g, mut h) = if pa.deg_in(v) >= pb.deg_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    loop {
        let r = pseudo_remainder(&g, &h, v)?;
        if r.is_zero() {
            let pp = primitive_part_in(&h, v)?;
            return Ok(normalize(&cg.checked_mul(&pp)?));
        }
        if r.deg_in(v) == 0 {
            // primitive inputs with a v-free remainder are coprime in v
            return Ok(normalize(&cg));
        }
        g = h;
        h = primitive_part_in(&r, v)?;
    }
}

/// Content with respect to v: the (recursive) gcd of the v-coefficients.
fn content_in(g: &Poly, v: Var) -> Result<Poly, MpolyError> {
    let mut acc = Poly::zero(g.space());
    for c in coefficients_in(g, v) {
        if !c.is_zero() {
            acc = gcd_mv(&acc, &c)?;
            if acc.is_constant() {
                break;
            }
        }
    }
    Ok(acc)
}

fn primitive_part_in(g: &Poly, v: Var) -> Result<Poly, MpolyError> {
    let c = content_in(g, v)?;
    Poly::exact_divide(g, &c)
}

fn coefficients_in(g: &Poly, v: Var) -> Vec<Poly> {
    let idx = g.space().index_of(v).expect("variable in space");
    let d = g.deg_in(v) as usize;
    let mut buckets: Vec<Vec<_>> = vec![Vec::new(); d + 1];
    for (m, c) in g.terms() {
        let e = m.exponent(idx);
        buckets[e as usize].push((
            super::Monomial::var(idx).pow(e).div_into(m),
            c.clone(),
        ));
    }
    buckets
        .into_iter()
        .map(|b| Poly::from_terms(g.space(), b))
        .collect()
}

fn leading_coefficient_in(g: &Poly, v: Var) -> Poly {
    coefficients_in(g, v).pop().expect("nonzero polynomial")
}

/// Pseudo-remainder of g by h with respect to v:
/// lc_v(h)^{deg_v g − deg_v h + 1} · g reduced until deg_v < deg_v h.
fn pseudo_remainder(g: &Poly, h: &Poly, v: Var) -> Result<Poly, MpolyError> {
    let idx = g.space().index_of(v).expect("variable in space");
    let dh = h.deg_in(v);
    let lch = leading_coefficient_in(h, v);
    let mut r = g.clone();
    let mut steps = g.deg_in(v) as i64 - dh as i64 + 1;
    while !r.is_zero() && r.deg_in(v) >= dh {
        let dr = r.deg_in(v);
        let lcr = leading_coefficient_in(&r, v);
        let shift = Poly::from_terms(
            g.space(),
            vec![(super::Monomial::var(idx).pow(dr - dh), Rational::one())],
        );
        r = r
            .checked_mul(&lch)?
            .checked_sub(&lcr.checked_mul(&shift)?.checked_mul(h)?)?;
        steps -= 1;
    }
    // pad to the full pseudo-remainder power so contents stay predictable
    for _ in 0..steps.max(0) {
        r = r.checked_mul(&lch)?;
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarSpace;

    #[test]
    fn gcd_examples() {
        let s = VarSpace::unhatted(3);
        let bma = Poly::parse(&s, "b - a1").unwrap();
        let bp2a = Poly::parse(&s, "b + 2*a1").unwrap();
        let prod = bma.checked_mul(&bp2a).unwrap();
        assert_eq!(gcd_in_beta(&bma, &prod).unwrap(), bma);
        assert_eq!(gcd_in_beta(&bp2a, &bma).unwrap(), Poly::one(&s));
    }

    #[test]
    fn gcd_univariate() {
        // gcd(c^5(c^4+3c^2+3), c^3) = c^3, with c := b
        let s = VarSpace::custom(vec![Var::B]);
        let f = Poly::parse(&s, "b^9 + 3*b^7 + 3*b^5").unwrap();
        let g = Poly::parse(&s, "b^3").unwrap();
        assert_eq!(gcd_in_beta(&f, &g).unwrap(), g);
    }

    #[test]
    fn gcd_with_multiplicity() {
        let s = VarSpace::unhatted(3);
        let bma = Poly::parse(&s, "b - a1").unwrap();
        let other = Poly::parse(&s, "b + a2").unwrap();
        let a = bma.pow(3).checked_mul(&other).unwrap();
        let b = bma.pow(2).checked_mul(&other.pow(2)).unwrap();
        let g = gcd_in_beta(&a, &b).unwrap();
        assert_eq!(g, bma.pow(2).checked_mul(&other).unwrap());
    }

    #[test]
    fn monicity_enforced() {
        let s = VarSpace::unhatted(3);
        let bad = Poly::parse(&s, "2*b - a1").unwrap();
        let ok = Poly::parse(&s, "b - a1").unwrap();
        assert_eq!(gcd_in_beta(&bad, &ok), Err(MpolyError::NotMonicInBeta));
    }
}
