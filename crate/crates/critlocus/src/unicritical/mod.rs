//! Unicritical specialization f(z) = z^d + β: the Gleason–Misiurewicz
//! polynomials R_{k,n,d}, their β-Eisenstein certificates, and a numeric
//! oracle checking that roots are strictly preperiodic parameters.

pub mod numeric;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{certify_eisenstein, CertifyError, EisensteinCertificate, Verdict};
use crate::dynamics::{h_k1p, DynError, NormalForm};
use crate::exactnum::Rational;
use crate::mpoly::{gcd_in_beta, MpolyError, Poly, Var, VarSpace};
use numeric::{aberth_roots, derivative_coeffs, eval_poly, BigFloat, Complex, PREC};

#[derive(Debug, Error)]
pub enum UniError {
    #[error("root refinement did not converge")]
    DidNotConverge,
    #[error("orbit magnitude exhausted the working precision")]
    PrecisionExhausted,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
    #[error(transparent)]
    Dynamics(#[from] DynError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Dense univariate polynomial over ℚ in β, ascending coefficients with a
/// nonzero leading coefficient (empty = zero).
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> UniPoly {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> UniPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rational) -> UniPoly {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn beta() -> UniPoly {
        UniPoly::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a.clone() * b.clone());
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn pow(&self, n: u32) -> UniPoly {
        let mut acc = UniPoly::constant(Rational::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * Rational::from_int(i as i64))
                .collect(),
        )
    }

    /// shared single-variable space for mpoly-backed operations
    fn beta_space() -> std::sync::Arc<VarSpace> {
        VarSpace::custom(vec![Var::B])
    }

    pub fn to_poly(&self) -> Poly {
        let space = Self::beta_space();
        let mut acc = Poly::zero(&space);
        let b = Poly::var(&space, Var::B);
        for c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(&b)
                .expect("same space")
                .checked_add(&Poly::constant(&space, c.clone()))
                .expect("same space");
        }
        acc
    }

    /// Reads off a polynomial that only involves β (any space).
    pub fn from_poly(p: &Poly) -> Result<UniPoly, UniError> {
        for (m, _) in p.terms() {
            for (i, &v) in p.space().vars().iter().enumerate() {
                if v != Var::B && m.exponent(i) != 0 {
                    return Err(UniError::BadParameter(format!(
                        "polynomial involves {v}, not only b"
                    )));
                }
            }
        }
        let bi = p
            .space()
            .index_of(Var::B)
            .ok_or_else(|| UniError::BadParameter("space lacks b".into()))?;
        let mut coeffs = vec![Rational::zero(); p.deg_in(Var::B) as usize + 1];
        for (m, c) in p.terms() {
            coeffs[m.exponent(bi) as usize] = c.clone();
        }
        Ok(UniPoly::from_coeffs(coeffs))
    }

    pub fn gcd(&self, other: &UniPoly) -> Result<UniPoly, UniError> {
        // reuse the multivariate primitive-PRS gcd; normalize inputs monic
        let monic = |p: &UniPoly| {
            let lead = p.coeffs.last().unwrap().clone();
            UniPoly::from_coeffs(p.coeffs.iter().map(|c| c.clone() / lead.clone()).collect())
        };
        if self.is_zero() || other.is_zero() || self.is_constant() || other.is_constant() {
            return Ok(UniPoly::constant(Rational::one()));
        }
        // coprimality is the common case and the expensive one for the PRS:
        // a degree-0 gcd modulo a good prime proves it outright
        if self.gcd_degree_bound_mod_q(other) == Some(0) {
            return Ok(UniPoly::constant(Rational::one()));
        }
        let g = gcd_in_beta(&monic(self).to_poly(), &monic(other).to_poly())?;
        UniPoly::from_poly(&g)
    }

    /// Degree of gcd(self, other) reduced mod a prime q that preserves both
    /// leading coefficients; an upper bound for the rational gcd degree.
    /// None when no prime in the fixed list is good.
    fn gcd_degree_bound_mod_q(&self, other: &UniPoly) -> Option<usize> {
        use num_integer::Integer;
        'primes: for q in [2147483647u64, 2147483629, 2147483587] {
            let qb = num_bigint::BigInt::from(q);
            let residue = |x: &num_bigint::BigInt| -> u64 {
                use num_traits::ToPrimitive;
                x.mod_floor(&qb).to_u64().unwrap()
            };
            let reduce = |p: &UniPoly| -> Option<Vec<u64>> {
                let mut out = Vec::with_capacity(p.coeffs.len());
                for c in &p.coeffs {
                    let den = residue(c.denom());
                    if den == 0 {
                        return None;
                    }
                    let num = residue(c.numer());
                    let inv = crate::exactnum::mod_inverse(den, q);
                    out.push(((num as u128 * inv as u128) % q as u128) as u64);
                }
                Some(out)
            };
            let (mut a, mut b) = match (reduce(self), reduce(other)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue 'primes,
            };
            // leading coefficients must survive the reduction
            if a.last() == Some(&0) || b.last() == Some(&0) {
                continue 'primes;
            }
            while !b.is_empty() {
                // a ← a mod b over F_q, then rotate
                let lead_inv = crate::exactnum::mod_inverse(*b.last().unwrap(), q);
                while a.len() >= b.len() {
                    let shift = a.len() - b.len();
                    let factor = (*a.last().unwrap() as u128 * lead_inv as u128) % q as u128;
                    for (i, &bc) in b.iter().enumerate() {
                        let sub = (factor * bc as u128) % q as u128;
                        a[i + shift] = ((a[i + shift] as u128 + q as u128 - sub) % q as u128) as u64;
                    }
                    while a.last() == Some(&0) {
                        a.pop();
                    }
                    if a.is_empty() {
                        break;
                    }
                }
                std::mem::swap(&mut a, &mut b);
            }
            return Some(a.len().saturating_sub(1));
        }
        None
    }

    pub fn exact_divide(&self, other: &UniPoly) -> Result<UniPoly, UniError> {
        let q = Poly::exact_divide(&self.to_poly(), &other.to_poly())?;
        UniPoly::from_poly(&q)
    }

    /// integer content-free with positive leading coefficient
    pub fn normalized(&self) -> UniPoly {
        use num_integer::Integer;
        use num_traits::{One, Signed, Zero};
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut den = num_bigint::BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let ints: Vec<num_bigint::BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = num_bigint::BigInt::zero();
        for c in &ints {
            content = content.gcd(c);
        }
        if ints.last().unwrap().is_negative() {
            content = -content;
        }
        UniPoly::from_coeffs(
            ints.into_iter()
                .map(|c| Rational::from_big(c, content.clone()))
                .collect(),
        )
    }

    pub fn render(&self) -> String {
        self.to_poly().render()
    }

    pub fn parse(s: &str) -> Result<UniPoly, UniError> {
        let space = Self::beta_space();
        Ok(UniPoly::from_poly(&Poly::parse(&space, s)?)?)
    }

    pub fn to_bigfloats(&self) -> Vec<BigFloat> {
        self.coeffs.iter().map(BigFloat::from_rational).collect()
    }
}

/// f^{k+n}(0) − f^k(0) for f = z^d + β, as a polynomial in β.
pub fn uni_f_knd(d: u32, k: u32, n: u32) -> UniPoly {
    assert!(d >= 2 && n >= 1);
    let mut orbit = vec![UniPoly::zero()]; // f^0(0) = 0
    for _ in 0..(k + n) {
        let prev = orbit.last().unwrap();
        orbit.push(prev.pow(d).add(&UniPoly::beta()));
    }
    orbit[(k + n) as usize].sub(&orbit[k as usize])
}

/// R_{k,n,d} together with the factors removed by the gcd loop, each paired
/// with the (l, m) it came from.
pub struct RComputation {
    pub r: UniPoly,
    pub removed: Vec<(u32, u32, UniPoly)>,
}

/// Gleason–Misiurewicz polynomial: strip from f^{k+n}(0) − f^k(0) every
/// common factor with the earlier orbit relations (l ≤ k, m | n), then
/// normalize to integer content-free form with positive leading coefficient.
pub fn r_knd(d: u32, k: u32, n: u32) -> Result<RComputation, UniError> {
    let mut g = uni_f_knd(d, k, n);
    let mut removed = Vec::new();
    for l in 0..=k {
        for m in 1..=n {
            if n % m != 0 || (l, m) == (k, n) {
                continue;
            }
            let flm = uni_f_knd(d, l, m);
            if flm.is_constant() {
                continue;
            }
            loop {
                let gc = g.gcd(&flm)?;
                if gc.is_constant() {
                    break;
                }
                g = g.exact_divide(&gc)?;
                removed.push((l, m, gc.normalized()));
            }
        }
    }
    Ok(RComputation {
        r: g.normalized(),
        removed,
    })
}

/// Classical p-Eisenstein check of R_{k,1,p} in β: realized as the
/// generalized certificate with h = β. A nonzero constant R passes with the
/// verdict `constant`.
pub fn certify_r_eisenstein(p: u64, k: u32) -> Result<EisensteinCertificate, UniError> {
    crate::exactnum::check_odd_prime(p).map_err(|e| UniError::BadParameter(e.to_string()))?;
    let r = r_knd(p as u32, k, 1)?.r;
    let target = format!("R_{{{k},1,{p}}}");
    if r.is_constant() {
        if r.is_zero() {
            return Err(UniError::BadParameter("R is zero".into()));
        }
        return Ok(EisensteinCertificate {
            target,
            p,
            h: "b".into(),
            g: r.render(),
            n_exponent: Some(0),
            h_mod_p_irreducible: Some(true),
            resultant_valuation: Some(0),
            threshold: 2,
            verdict: Verdict::Constant,
        });
    }
    if r.degree() == 1 {
        // linear R is irreducible outright; the valuation condition is
        // vacuous (and R_{0,1,p} = β would trip it via a zero constant)
        return Ok(EisensteinCertificate {
            target,
            p,
            h: "b".into(),
            g: r.render(),
            n_exponent: Some(1),
            h_mod_p_irreducible: Some(true),
            resultant_valuation: None,
            threshold: 2,
            verdict: Verdict::Pass,
        });
    }
    let h = Poly::var(&UniPoly::beta_space(), Var::B);
    Ok(certify_eisenstein(&target, &r.to_poly(), &h, p)?)
}

/// Cross-check of the unicritical limit: h_{k,1,p}(0,…,0,β) = β^{p−2}·T
/// with T both p-Eisenstein in β and divisible by R_{k,1,p}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossCheck {
    pub p: u64,
    pub k: u32,
    pub specialized: String,
    pub quotient: String,
    pub divisible_by_r: bool,
    pub eisenstein: Verdict,
}

pub fn cross_check_specialization(nf: &NormalForm, k: u32) -> Result<CrossCheck, UniError> {
    let p = nf.degree() as u64;
    let h = h_k1p(nf, k)?;
    let s = UniPoly::from_poly(&crate::dynamics::specialize_unicritical(&h)?)?;
    let mut t = s.clone();
    for _ in 0..(p - 2) {
        t = t.exact_divide(&UniPoly::beta())?;
    }
    let r = r_knd(p as u32, k, 1)?.r;
    let divisible = t.to_poly().is_divisible_by(&r.to_poly());
    let cert = certify_eisenstein(
        &format!("h_{{{k},1,{p}}}(0,…,0,b)/b^{}", p - 2),
        &monicize(&t).to_poly(),
        &Poly::var(&UniPoly::beta_space(), Var::B),
        p,
    )?;
    Ok(CrossCheck {
        p,
        k,
        specialized: s.render(),
        quotient: t.render(),
        divisible_by_r: divisible,
        eisenstein: cert.verdict,
    })
}

fn monicize(t: &UniPoly) -> UniPoly {
    let lead = t.coeffs().last().expect("nonzero").clone();
    UniPoly::from_coeffs(t.coeffs().iter().map(|c| c.clone() / lead.clone()).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreperiodicityWitness {
    pub d: u32,
    pub k: u32,
    pub n: u32,
    /// rendered root approximation, "re±im·i"
    pub root: String,
    /// |f^{k+n}(0) − f^k(0)| at the root
    pub residual: f64,
    /// min over (l, m) ≠ (k, n), l ≤ k, m | n of |f^{l+m}(0) − f^l(0)|;
    /// None when there is no smaller pair to rule out
    pub margin: Option<f64>,
    pub eps_eq: f64,
    pub eps_strict: f64,
    pub pass: bool,
}

/// Newton-refines an approximate root of R_{k,n,d} and checks that the
/// critical orbit of z^d + root is strictly (k, n)-preperiodic within the
/// given tolerances. A point that refuses to refine onto a nearby root of R
/// is evaluated as-is (and will fail the residual test).
pub fn numeric_preperiodicity_oracle(
    d: u32,
    k: u32,
    n: u32,
    root: &Complex,
    eps_eq: f64,
    eps_strict: f64,
) -> Result<PreperiodicityWitness, UniError> {
    let r = r_knd(d, k, n)?.r;
    oracle_with_r(&r, d, k, n, root, eps_eq, eps_strict)
}

/// Same oracle with R_{k,n,d} supplied by the caller (avoids recomputing it
/// once per root).
pub fn oracle_with_r(
    r: &UniPoly,
    d: u32,
    k: u32,
    n: u32,
    root: &Complex,
    eps_eq: f64,
    eps_strict: f64,
) -> Result<PreperiodicityWitness, UniError> {
    let point = if r.is_constant() {
        root.clone()
    } else {
        // a point that refuses to refine onto a nearby root of R is not an
        // approximate root; judge it raw (it will fail the residual test)
        match newton_refine(r, root) {
            Ok(refined) if refined.sub(root).abs_f64() < 1e-3 => refined,
            _ => root.clone(),
        }
    };

    // critical orbit of z^d + point
    let mut orbit = vec![Complex::zero()];
    for _ in 0..(k + n) {
        let z = orbit.last().unwrap();
        let mut pw = Complex::from_f64(1.0, 0.0);
        for _ in 0..d {
            pw = pw.mul(z);
        }
        let next = pw.add(&point);
        if next.mag() > 1i64 << 24 {
            return Err(UniError::PrecisionExhausted);
        }
        orbit.push(next);
    }
    let residual = orbit[(k + n) as usize].sub(&orbit[k as usize]).abs_f64();
    let mut margin: Option<f64> = None;
    for l in 0..=k {
        for m in 1..=n {
            if n % m != 0 || (l, m) == (k, n) {
                continue;
            }
            let gap = orbit[(l + m) as usize].sub(&orbit[l as usize]).abs_f64();
            margin = Some(margin.map_or(gap, |g: f64| g.min(gap)));
        }
    }
    let pass = residual < eps_eq && margin.map_or(true, |m| m > eps_strict);
    Ok(PreperiodicityWitness {
        d,
        k,
        n,
        root: point.render(),
        residual,
        margin,
        eps_eq,
        eps_strict,
        pass,
    })
}

fn newton_refine(r: &UniPoly, start: &Complex) -> Result<Complex, UniError> {
    let coeffs = r.to_bigfloats();
    let deriv = derivative_coeffs(&coeffs);
    let mut z = start.clone();
    for _ in 0..80 {
        let dv = eval_poly(&deriv, &z);
        if dv.is_zero() {
            return Err(UniError::DidNotConverge);
        }
        let step = eval_poly(&coeffs, &z).div(&dv);
        let scale = z.mag().max(0);
        z = z.sub(&step);
        if step.mag() - scale <= -(PREC as i64) + 16 {
            return Ok(z);
        }
    }
    Err(UniError::DidNotConverge)
}

/// All complex roots of p (as a set: multiple roots are found once), via
/// Aberth–Ehrlich on the squarefree part.
pub fn find_roots(p: &UniPoly, seed: u64) -> Result<Vec<Complex>, UniError> {
    if p.is_constant() {
        return Ok(Vec::new());
    }
    let sqfree = {
        let gc = p.gcd(&p.derivative())?;
        if gc.is_constant() {
            p.clone()
        } else {
            p.exact_divide(&gc)?
        }
    };
    aberth_roots(&sqfree.to_bigfloats(), seed).ok_or(UniError::DidNotConverge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uni_f_small_values() {
        assert_eq!(uni_f_knd(3, 0, 1).render(), "b");
        assert_eq!(uni_f_knd(3, 1, 1).render(), "b^3");
        // f³(0) − f²(0) = (β³+β)³ − β³ = β⁹ + 3β⁷ + 3β⁵
        assert_eq!(uni_f_knd(3, 2, 1).render(), "b^9 + 3*b^7 + 3*b^5");
    }

    #[test]
    fn r_small_values() {
        assert_eq!(r_knd(3, 0, 1).unwrap().r.render(), "b");
        let r11 = r_knd(3, 1, 1).unwrap();
        assert!(r11.r.is_constant());
        assert_eq!(r11.r.render(), "1");
        // R_{2,1,3} = β⁴ + 3β² + 3
        let r21 = r_knd(3, 2, 1).unwrap();
        assert_eq!(r21.r.render(), "b^4 + 3*b^2 + 3");
        // degree bookkeeping: deg(f) = deg(R) + removed degrees
        let removed: usize = r21.removed.iter().map(|(_, _, f)| f.degree()).sum();
        assert_eq!(uni_f_knd(3, 2, 1).degree(), r21.r.degree() + removed);
    }

    #[test]
    fn r_gcd_removal_order_independent() {
        // reversed (l, m) loop yields the same R
        let d = 3;
        let (k, n) = (3u32, 1u32);
        let forward = r_knd(d, k, n).unwrap().r;
        let mut g = uni_f_knd(d, k, n);
        for l in (0..=k).rev() {
            let flm = uni_f_knd(d, l, 1);
            if (l, 1) == (k, n) || flm.is_constant() {
                continue;
            }
            loop {
                let gc = g.gcd(&flm).unwrap();
                if gc.is_constant() {
                    break;
                }
                g = g.exact_divide(&gc).unwrap();
            }
        }
        assert_eq!(g.normalized(), forward);
    }

    #[test]
    fn eisenstein_certificates() {
        let c = certify_r_eisenstein(3, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Pass);
        assert_eq!(c.n_exponent, Some(4));
        assert_eq!(c.resultant_valuation, Some(1));

        let c0 = certify_r_eisenstein(3, 0).unwrap();
        assert_eq!(c0.verdict, Verdict::Pass);

        let c1 = certify_r_eisenstein(3, 1).unwrap();
        assert_eq!(c1.verdict, Verdict::Constant);
    }

    #[test]
    fn oracle_on_r213_roots() {
        let r = r_knd(3, 2, 1).unwrap();
        let roots = find_roots(&r.r, 42).unwrap();
        assert_eq!(roots.len(), 4);
        for root in &roots {
            let w = numeric_preperiodicity_oracle(3, 2, 1, root, 1e-9, 1e-6).unwrap();
            assert!(w.pass, "witness failed: {w:?}");
            assert!(w.residual < 1e-9);
            assert!(w.margin.unwrap() > 1e-6);
        }
        // removed factors carry non-strict parameters: strictness fails
        let mut checked = 0;
        for (_, _, f) in &r.removed {
            for root in find_roots(f, 42).unwrap() {
                let w = numeric_preperiodicity_oracle(3, 2, 1, &root, 1e-9, 1e-6).unwrap();
                assert!(!w.pass);
                checked += 1;
            }
        }
        assert!(checked > 0);
        // negative control: a random non-root has a large residual
        let w = numeric_preperiodicity_oracle(3, 2, 1, &Complex::from_f64(0.7, 0.3), 1e-9, 1e-6)
            .unwrap();
        assert!(!w.pass);
        assert!(w.residual > 1e-9);
    }

    #[test]
    fn oracle_vacuous_case() {
        // (k, n) = (0, 1), root 0 of R = β: orbit is constant, no smaller pair
        let w =
            numeric_preperiodicity_oracle(3, 0, 1, &Complex::zero(), 1e-9, 1e-6).unwrap();
        assert!(w.pass);
        assert_eq!(w.residual, 0.0);
        assert!(w.margin.is_none());
    }

    #[test]
    fn cross_check_p3_k2() {
        let nf = crate::dynamics::build_normal_form(3).unwrap();
        let cc = cross_check_specialization(&nf, 2).unwrap();
        assert!(cc.divisible_by_r);
        assert!(cc.eisenstein.passed());
    }
}
