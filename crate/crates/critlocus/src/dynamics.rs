//! Normal form of a degree-d polynomial with marked critical point, the
//! symbolic critical orbit, the preperiodicity polynomials f_{k,n,d} and
//! h_{k,n,d}, mixed-critical specializations, and the mod-p rigidity
//! computations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::Rational;
use crate::mpoly::{gcd_in_beta, ModPPoly, MpolyError, Part, Poly, Var, VarSpace};

#[derive(Debug, Error)]
pub enum DynError {
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
    /// A computation the paper proves must succeed did not. Carries a dump
    /// of the inputs so the failure can be reproduced independently.
    #[error("falsified identity in {context}\n{dump}")]
    IdentityFalsified { context: String, dump: String },
}

fn falsified(context: &str, items: &[(&str, String)]) -> DynError {
    let dump = items
        .iter()
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join("\n");
    DynError::IdentityFalsified {
        context: context.into(),
        dump,
    }
}

#[derive(Default)]
struct Caches {
    /// k → f̂^k(α₁) in the hatted space
    orbit: HashMap<u32, Poly>,
    /// m → f̂^m as a polynomial in z (hatted space)
    sym_pow: HashMap<u32, Poly>,
    /// k → f^k(α₁) in the unhatted space
    orbit_unhatted: HashMap<u32, Poly>,
}

/// The normal form f = z^d + Σ_{i=2}^{d−1} (−1)^i (d/(d−i)) s_i(ᾱ) z^{d−i}
/// − f(α₁)-part + β, together with its hatted image and orbit caches.
pub struct NormalForm {
    d: u32,
    space: Arc<VarSpace>,
    hat_space: Arc<VarSpace>,
    f: Poly,
    fhat: Poly,
    /// ŝ_i for i = 0..=d−1 (images of the elementary symmetric polynomials
    /// under the hat map)
    sym_hat: Vec<Poly>,
    cache: Mutex<Caches>,
}

/// Splits d into (p, e) when d is a power of an odd prime.
pub fn odd_prime_power(d: u32) -> Option<(u64, u32)> {
    for p in (3..=d).step_by(2) {
        if crate::exactnum::is_prime(p as u64) {
            let mut e = 0u32;
            let mut m = d;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            if m == 1 {
                return Some((p as u64, e));
            }
        }
    }
    None
}

pub fn build_normal_form(d: u32) -> Result<NormalForm, DynError> {
    if d < 3 {
        return Err(DynError::BadParameter(format!("d = {d} < 3")));
    }
    let space = VarSpace::unhatted(d);
    let alphas: Vec<Var> = (1..d).map(Var::A).collect();
    let z = Poly::var(&space, Var::Z);
    let a1 = Poly::var(&space, Var::A(1));
    let b = Poly::var(&space, Var::B);
    let mut f = z.pow(d);
    for i in 2..d {
        let c = coefficient(d, i);
        let s = Poly::elementary_symmetric(&space, i as usize, &alphas)?;
        let term = s.scale(&c);
        f = f.checked_add(&term.checked_mul(&z.pow(d - i))?)?;
        f = f.checked_sub(&term.checked_mul(&a1.pow(d - i))?)?;
    }
    f = f.checked_sub(&a1.pow(d))?.checked_add(&b)?;

    // construction-time invariants of the normal form
    let fz = f.deg_in(Var::Z);
    assert_eq!(fz, d, "f must have degree d in z");
    let zcoeffs = z_coefficients(&f, d);
    assert_eq!(zcoeffs[d as usize].as_constant(), Some(Rational::one()), "f monic in z");
    assert!(zcoeffs[(d - 1) as usize].is_zero(), "reduced: no z^{{d-1}} term");
    assert_eq!(f.substitute(Var::Z, &a1)?, b, "f(α₁) = β");
    let mut prod = Poly::int(&space, d as i64);
    for &v in &alphas {
        prod = prod.checked_mul(&z.checked_sub(&Poly::var(&space, v))?)?;
    }
    // Eq. (b) holds on the reduced locus Σα_i = 0, so the derivative
    // identity is checked through the hat map
    assert_eq!(
        f.derivative(Var::Z).substitute_hat(),
        prod.substitute_hat(),
        "f' = d·∏(z − α_i) under Σα_i = 0"
    );
    if let Some((p, _)) = odd_prime_power(d) {
        for (_, c) in f.terms() {
            assert!(
                c.padic_valuation(p).map(|v| v.is_nonnegative()).unwrap_or(false),
                "coefficient {c} outside ℤ_({p})"
            );
        }
    }

    let fhat = f.substitute_hat();
    let hat_space = VarSpace::hatted(d);
    let mut sym_hat = Vec::with_capacity(d as usize);
    for i in 0..d {
        let s = Poly::elementary_symmetric(&space, i as usize, &alphas)?;
        sym_hat.push(s.substitute_hat());
    }
    debug_assert!(fhat.substitute(Var::Z, &Poly::var(&hat_space, Var::A(1)))? == Poly::var(&hat_space, Var::B));
    Ok(NormalForm {
        d,
        space,
        hat_space,
        f,
        fhat,
        sym_hat,
        cache: Mutex::new(Caches::default()),
    })
}

/// (−1)^i · d/(d−i), the Eq.-(b) coefficient of s_i.
fn coefficient(d: u32, i: u32) -> Rational {
    let c = Rational::new(d as i64, (d - i) as i64);
    if i % 2 == 1 {
        -c
    } else {
        c
    }
}

fn z_coefficients(f: &Poly, d: u32) -> Vec<Poly> {
    let idx = f.space().index_of(Var::Z).unwrap();
    let mut out = vec![Vec::new(); (d + 1) as usize];
    for (m, c) in f.terms() {
        let e = m.exponent(idx);
        out[e as usize].push((crate::mpoly::Monomial::var(idx).pow(e).div_into(m), c.clone()));
    }
    out.into_iter()
        .map(|t| Poly::from_terms(f.space(), t))
        .collect()
}

impl NormalForm {
    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn hat_space(&self) -> &Arc<VarSpace> {
        &self.hat_space
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn fhat(&self) -> &Poly {
        &self.fhat
    }

    /// f̂^m as a polynomial in z.
    fn sym_power(&self, m: u32) -> Poly {
        if m == 0 {
            return Poly::var(&self.hat_space, Var::Z);
        }
        if m == 1 {
            return self.fhat.clone();
        }
        if let Some(p) = self.cache.lock().unwrap().sym_pow.get(&m) {
            return p.clone();
        }
        let prev = self.sym_power(m - 1);
        let out = prev.compose_in_z(&self.fhat).expect("same space");
        self.cache.lock().unwrap().sym_pow.insert(m, out.clone());
        out
    }

    /// f̂^k(α₁) in the hatted space; k = 0 is α₁, k = 1 is β.
    pub fn orbit_point(&self, k: u32) -> Poly {
        match k {
            0 => return Poly::var(&self.hat_space, Var::A(1)),
            1 => return Poly::var(&self.hat_space, Var::B),
            _ => {}
        }
        if let Some(p) = self.cache.lock().unwrap().orbit.get(&k) {
            return p.clone();
        }
        // f̂^k(α₁) = f̂^{k−1}(β): a cheap relabeling of the symbolic iterate
        let out = self
            .sym_power(k - 1)
            .substitute(Var::Z, &Poly::var(&self.hat_space, Var::B))
            .expect("same space");
        self.cache.lock().unwrap().orbit.insert(k, out.clone());
        out
    }

    /// f^k(α₁) in the unhatted space (small cases only; used for Ψ checks).
    pub fn orbit_point_unhatted(&self, k: u32) -> Poly {
        match k {
            0 => return Poly::var(&self.space, Var::A(1)),
            1 => return Poly::var(&self.space, Var::B),
            _ => {}
        }
        if let Some(p) = self.cache.lock().unwrap().orbit_unhatted.get(&k) {
            return p.clone();
        }
        let prev = self.orbit_point_unhatted(k - 1);
        let out = self.f.compose_in_z(&prev).expect("same space");
        self.cache
            .lock()
            .unwrap()
            .orbit_unhatted
            .insert(k, out.clone());
        out
    }

    /// f̂^k(α₁) reduced mod p, iterated natively over 𝔽_p (Frobenius keeps
    /// these tiny even when the exact iterate is out of reach).
    pub fn orbit_point_modp(&self, k: u32, p: u64) -> Result<ModPPoly, DynError> {
        let fhat_p = self.fhat.reduce_mod_p(p)?;
        let mut cur = ModPPoly::var(&self.hat_space, p, Var::A(1));
        for _ in 0..k {
            cur = fhat_p.compose_in_z(&cur)?;
        }
        Ok(cur)
    }
}

/// f_{k,n,d} = f^{k+n}(α₁) − f^k(α₁), hatted or unhatted.
pub fn f_knd(nf: &NormalForm, k: u32, n: u32, hatted: bool) -> Result<Poly, DynError> {
    if n < 1 {
        return Err(DynError::BadParameter(format!("n = {n} < 1")));
    }
    let (hi, lo) = if hatted {
        (nf.orbit_point(k + n), nf.orbit_point(k))
    } else {
        (nf.orbit_point_unhatted(k + n), nf.orbit_point_unhatted(k))
    };
    Ok(hi.checked_sub(&lo)?)
}

/// f̂_{k,n,d} reduced mod p, computed natively over 𝔽_p.
pub fn f_knd_modp(nf: &NormalForm, k: u32, n: u32, p: u64) -> Result<ModPPoly, DynError> {
    if n < 1 {
        return Err(DynError::BadParameter(format!("n = {n} < 1")));
    }
    let hi = nf.orbit_point_modp(k + n, p)?;
    let lo = nf.orbit_point_modp(k, p)?;
    Ok(hi.sub(&lo)?)
}

/// The quotient f̂_{k,n,d} / f̂_{l,m,d}; failure falsifies the divisibility
/// lemma and aborts.
pub fn check_divisibility(
    nf: &NormalForm,
    l: u32,
    m: u32,
    k: u32,
    n: u32,
) -> Result<Poly, DynError> {
    if l > k || m < 1 || n % m != 0 {
        return Err(DynError::BadParameter(format!(
            "need l ≤ k, m ≥ 1, m | n; got (l,m) = ({l},{m}), (k,n) = ({k},{n})"
        )));
    }
    let num = f_knd(nf, k, n, true)?;
    let den = f_knd(nf, l, m, true)?;
    Poly::exact_divide(&num, &den).map_err(|e| {
        falsified(
            &format!("f_{{{l},{m}}} | f_{{{k},{n}}} at d = {}", nf.d),
            &[
                ("error", e.to_string()),
                ("numerator", num.render()),
                ("denominator", den.render()),
            ],
        )
    })
}

/// h_{k,1,p} by the explicit division formulas. For k ≥ 2 the quotient
/// f̂_{k,1,p}/f̂_{k−1,1,p} is expanded directly as
/// Φ_p(A,B) + Σ_{i=2}^{p−1} (−1)^i (p/(p−i)) ŝ_i Φ_{p−i}(A,B)
/// with A = f̂^k(α₁), B = f̂^{k−1}(α₁), so only the final division by
/// (β − α₁) touches the large polynomial.
pub fn h_k1p(nf: &NormalForm, k: u32) -> Result<Poly, DynError> {
    let d = nf.d;
    if odd_prime_power(d) != Some((d as u64, 1)) {
        return Err(DynError::BadParameter(format!("d = {d} is not an odd prime")));
    }
    let hs = &nf.hat_space;
    let bma = Poly::var(hs, Var::B)
        .checked_sub(&Poly::var(hs, Var::A(1)))
        .unwrap();
    if k == 0 {
        return Ok(bma);
    }
    if k == 1 {
        let num = f_knd(nf, 1, 1, true)?;
        let den = bma.pow(2);
        return Poly::exact_divide(&num, &den).map_err(|e| {
            falsified(
                &format!("h_{{1,1,{d}}} = f̂_{{1,1,{d}}}/(β−α₁)²"),
                &[("error", e.to_string()), ("numerator", num.render())],
            )
        });
    }
    let a = nf.orbit_point(k);
    let b = nf.orbit_point(k - 1);
    let quotient = phi_quotient(nf, &a, &b)?;
    let h = Poly::exact_divide(&quotient, &bma).map_err(|e| {
        falsified(
            &format!("(β−α₁) | f̂_{{{k},1,{d}}}/f̂_{{{},1,{d}}}", k - 1),
            &[("error", e.to_string())],
        )
    })?;
    // Eisen2's final step: (β − α₁) appears to the first power exactly
    let at_alpha = h.eval_beta(&Poly::var(hs, Var::A(1)))?;
    if at_alpha.is_zero() {
        return Err(falsified(
            &format!("(β−α₁) ∤ h_{{{k},1,{d}}}"),
            &[("h(β=α₁)", "0".into())],
        ));
    }
    Ok(h)
}

/// Φ_d(A,B) + Σ_{i=2}^{d−1} c_i ŝ_i Φ_{d−i}(A,B), evaluated by Horner in A
/// so the dominant cost is |A|-sized multiplications.
fn phi_quotient(nf: &NormalForm, a: &Poly, b: &Poly) -> Result<Poly, DynError> {
    let d = nf.d;
    // S_j = Σ over contributing i of c_i ŝ_i B^{d−1−i−j}, the coefficient
    // of A^j; then the quotient is Σ_j A^j S_j.
    let mut bpow = Vec::with_capacity(d as usize);
    bpow.push(Poly::one(&nf.hat_space));
    for _ in 1..d {
        bpow.push(bpow.last().unwrap().checked_mul(b)?);
    }
    let mut s: Vec<Poly> = Vec::with_capacity(d as usize);
    for j in 0..d {
        // the i = 0 term (c_0 = 1, ŝ_0 = 1) contributes B^{d−1−j}
        let mut acc = bpow[(d - 1 - j) as usize].clone();
        for i in 2..d {
            if d - i >= j + 1 {
                let t = nf.sym_hat[i as usize]
                    .scale(&coefficient(d, i))
                    .checked_mul(&bpow[(d - 1 - i - j) as usize])?;
                acc = acc.checked_add(&t)?;
            }
        }
        s.push(acc);
    }
    let mut acc = s.pop().unwrap();
    for sj in s.into_iter().rev() {
        acc = acc.checked_mul(a)?.checked_add(&sj)?;
    }
    Ok(acc)
}

/// h_{k,n,d} by the generic gcd-removal loop (desk-scale only).
pub fn h_general(nf: &NormalForm, k: u32, n: u32) -> Result<Poly, DynError> {
    if n < 1 {
        return Err(DynError::BadParameter(format!("n = {n} < 1")));
    }
    let mut g = f_knd(nf, k, n, true)?;
    for l in 0..=k {
        for m in 1..=n {
            if n % m != 0 || (l, m) == (k, n) {
                continue;
            }
            let lower = f_knd(nf, l, m, true)?;
            loop {
                let shared = gcd_in_beta(&g, &lower)?;
                if shared.is_constant() {
                    break;
                }
                g = Poly::exact_divide(&g, &shared)?;
            }
        }
    }
    Ok(g)
}

/// Specialization α₂, …, α_j ↦ α₁ (ramification index j+1 at the marked
/// point). The result lives in the smaller space {α₁, α_{j+1}, …, β}.
pub fn mixed_specialize(h: &Poly, j: u32) -> Result<Poly, DynError> {
    let avars = h.space().alphas();
    let top = avars
        .iter()
        .map(|v| match v {
            Var::A(i) => *i,
            _ => unreachable!(),
        })
        .max()
        .unwrap_or(0);
    if !(2..=top).contains(&j) {
        return Err(DynError::BadParameter(format!(
            "j = {j} out of range 2..={top}"
        )));
    }
    let a1 = Poly::var(h.space(), Var::A(1));
    let mut out = h.clone();
    for i in 2..=j {
        out = out.substitute(Var::A(i), &a1)?;
    }
    let mut vars = vec![Var::A(1)];
    vars.extend(((j + 1)..=top).map(Var::A));
    vars.push(Var::B);
    Ok(out.project_to(&VarSpace::custom(vars)))
}

/// Specialization of all α_i ↦ 0 (the unicritical limit); result is
/// univariate in β.
pub fn specialize_unicritical(h: &Poly) -> Result<Poly, DynError> {
    let zero = Poly::zero(h.space());
    let mut out = h.clone();
    for v in h.space().alphas() {
        out = out.substitute(v, &zero)?;
    }
    Ok(out.project_to(&VarSpace::custom(vec![Var::B])))
}

/// Report of the weak-Thurston-rigidity mod-p computation.
#[derive(Debug, Clone, Serialize)]
pub struct RigidityReport {
    pub p: u64,
    pub e: u32,
    pub k1: u32,
    pub n1: u32,
    pub i: u32,
    pub ki: u32,
    pub ni: u32,
    /// f^{k₁+n₁}(α₁) − f^{k₁}(α₁) mod p
    pub difference_marked: String,
    /// f^{k_i+n_i}(α_i) − f^{k_i}(α_i) mod p
    pub difference_other: String,
    pub highest_marked: String,
    pub highest_other: String,
    pub congruences_verified: bool,
    pub coprime_mod_p: bool,
}

/// Verifies the mod-p proof computation of weak Thurston rigidity: the two
/// orbit differences match their closed forms, and their highest
/// homogeneous parts are powers of the distinct linear forms (β − α₁) and
/// (α_i − α₁).
pub fn rigidity_check(
    p: u64,
    e: u32,
    k1: u32,
    n1: u32,
    i: u32,
    ki: u32,
    ni: u32,
) -> Result<RigidityReport, DynError> {
    crate::exactnum::check_odd_prime(p).map_err(|err| DynError::BadParameter(err.to_string()))?;
    if e < 1 || n1 < 1 || ni < 1 {
        return Err(DynError::BadParameter("need e, n₁, n_i ≥ 1".into()));
    }
    let d = (p as u32).pow(e);
    if !(2..d).contains(&i) {
        return Err(DynError::BadParameter(format!("i = {i} out of 2..{d}")));
    }
    let max_exp = (p as u64).checked_pow((ki.max(k1) + ni.max(n1)) * e);
    match max_exp {
        Some(m) if m <= crate::mpoly::MAX_EXPONENT as u64 => {}
        _ => {
            return Err(DynError::BadParameter(
                "p^{(k+n)e} exceeds the engine's exponent range".into(),
            ))
        }
    }
    let nf = build_normal_form(d)?;
    let fp = nf.f.reduce_mod_p(p)?;
    let space = nf.space();
    let orbit_from = |start: Var, l: u32| -> Result<ModPPoly, DynError> {
        let mut cur = ModPPoly::var(space, p, start);
        for _ in 0..l {
            cur = fp.compose_in_z(&cur)?;
        }
        Ok(cur)
    };
    let diff1 = orbit_from(Var::A(1), k1 + n1)?.sub(&orbit_from(Var::A(1), k1)?)?;
    let diffi = orbit_from(Var::A(i), ki + ni)?.sub(&orbit_from(Var::A(i), ki)?)?;

    let bma = ModPPoly::var(space, p, Var::B).sub(&ModPPoly::var(space, p, Var::A(1)))?;
    let ama = ModPPoly::var(space, p, Var::A(i)).sub(&ModPPoly::var(space, p, Var::A(1)))?;
    let pe = |j: u32| (p as u64).pow(j * e);
    // Σ_{j=k}^{k+n−1} (β−α₁)^{p^{je}}
    let beta_sum = |k: u32, n: u32| -> Result<ModPPoly, DynError> {
        let mut acc = ModPPoly::zero(space, p);
        for j in k..k + n {
            acc = acc.add(&bma.pow(pe(j)))?;
        }
        Ok(acc)
    };
    let closed1 = beta_sum(k1, n1)?;
    let closedi = ama
        .pow(pe(ki + ni))
        .sub(&ama.pow(pe(ki)))?
        .add(&beta_sum(ki, ni)?)?;
    if diff1 != closed1 {
        return Err(falsified(
            "rigidity congruence for the marked orbit",
            &[
                ("computed", diff1.render_annotated()),
                ("closed form", closed1.render_annotated()),
            ],
        ));
    }
    if diffi != closedi {
        return Err(falsified(
            "rigidity congruence for the secondary orbit",
            &[
                ("computed", diffi.render_annotated()),
                ("closed form", closedi.render_annotated()),
            ],
        ));
    }
    let h1 = diff1.homogeneous_part_modp(Part::Highest);
    let hi = diffi.homogeneous_part_modp(Part::Highest);
    let coprime = h1 == bma.pow(pe(k1 + n1 - 1)) && hi == ama.pow(pe(ki + ni));
    if !coprime {
        return Err(falsified(
            "rigidity highest homogeneous parts",
            &[
                ("highest marked", h1.render_annotated()),
                ("highest other", hi.render_annotated()),
            ],
        ));
    }
    Ok(RigidityReport {
        p,
        e,
        k1,
        n1,
        i,
        ki,
        ni,
        difference_marked: diff1.render(),
        difference_other: diffi.render(),
        highest_marked: h1.render(),
        highest_other: hi.render(),
        congruences_verified: true,
        coprime_mod_p: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_d3() {
        let nf = build_normal_form(3).unwrap();
        let s = nf.space();
        assert_eq!(
            nf.f(),
            &Poly::parse(s, "z^3 + 3*a1*a2*z + b - a1^3 - 3*a1^2*a2").unwrap()
        );
        let hs = nf.hat_space();
        assert_eq!(
            nf.fhat(),
            &Poly::parse(hs, "z^3 - 3*a1^2*z + b + 2*a1^3").unwrap()
        );
        // fhat(α₁) = β
        let a1 = Poly::var(hs, Var::A(1));
        assert_eq!(
            nf.fhat().substitute(Var::Z, &a1).unwrap(),
            Poly::var(hs, Var::B)
        );
    }

    #[test]
    fn normal_form_invariants_to_9() {
        for d in [3u32, 5, 7, 9] {
            build_normal_form(d).unwrap(); // invariants asserted inside
        }
        assert!(build_normal_form(2).is_err());
    }

    #[test]
    fn orbit_points_d3() {
        let nf = build_normal_form(3).unwrap();
        let hs = nf.hat_space();
        assert_eq!(nf.orbit_point(0), Poly::var(hs, Var::A(1)));
        assert_eq!(nf.orbit_point(1), Poly::var(hs, Var::B));
        assert_eq!(
            nf.orbit_point(2),
            Poly::parse(hs, "b^3 - 3*a1^2*b + b + 2*a1^3").unwrap()
        );
    }

    #[test]
    fn f_knd_values() {
        let nf = build_normal_form(3).unwrap();
        let hs = nf.hat_space();
        assert_eq!(
            f_knd(&nf, 0, 1, true).unwrap(),
            Poly::parse(hs, "b - a1").unwrap()
        );
        assert_eq!(
            f_knd(&nf, 1, 1, true).unwrap(),
            Poly::parse(hs, "b^3 - 3*a1^2*b + 2*a1^3").unwrap()
        );
        assert!(f_knd(&nf, 1, 0, true).is_err());
    }

    #[test]
    fn hat_commutes_with_orbit() {
        // Ψ(f_{k,n,d}) = f̂_{k,n,d} for d ∈ {3,5}, k+n ≤ 4 (d=5 kept to ≤ 3)
        for (d, maxsum) in [(3u32, 4u32), (5, 3)] {
            let nf = build_normal_form(d).unwrap();
            for k in 0..maxsum {
                for n in 1..=(maxsum - k) {
                    let unhatted = f_knd(&nf, k, n, false).unwrap();
                    let hatted = f_knd(&nf, k, n, true).unwrap();
                    assert_eq!(unhatted.substitute_hat(), hatted, "d={d} k={k} n={n}");
                }
            }
        }
    }

    #[test]
    fn divisibility_lemma() {
        let nf = build_normal_form(3).unwrap();
        let hs = nf.hat_space();
        // (l,m)=(0,1), (k,n)=(1,1): quotient (β−α₁)(β+2α₁)
        let q = check_divisibility(&nf, 0, 1, 1, 1).unwrap();
        let expect = Poly::parse(hs, "b - a1")
            .unwrap()
            .checked_mul(&Poly::parse(hs, "b + 2*a1").unwrap())
            .unwrap();
        assert_eq!(q, expect);
        // (l,m) = (k,n): quotient 1
        assert_eq!(check_divisibility(&nf, 1, 1, 1, 1).unwrap(), Poly::one(hs));
        // telescoping case (0,1) | (0,2)
        let q2 = check_divisibility(&nf, 0, 1, 0, 2).unwrap();
        let back = q2
            .checked_mul(&f_knd(&nf, 0, 1, true).unwrap())
            .unwrap();
        assert_eq!(back, f_knd(&nf, 0, 2, true).unwrap());
        assert!(check_divisibility(&nf, 2, 1, 1, 1).is_err());
    }

    #[test]
    fn telescoping_sum() {
        // f_{k,mt,d} = Σ_{i=0}^{t−1} f_{k+mi,m,d} at d = 3
        let nf = build_normal_form(3).unwrap();
        for (k, m, t) in [(0u32, 1u32, 2u32), (0, 1, 3), (1, 1, 2), (0, 2, 2)] {
            let lhs = f_knd(&nf, k, m * t, true).unwrap();
            let mut rhs = Poly::zero(nf.hat_space());
            for i in 0..t {
                rhs = rhs
                    .checked_add(&f_knd(&nf, k + m * i, m, true).unwrap())
                    .unwrap();
            }
            assert_eq!(lhs, rhs, "k={k} m={m} t={t}");
        }
    }

    #[test]
    fn h_small_values() {
        let nf = build_normal_form(3).unwrap();
        let hs = nf.hat_space();
        assert_eq!(h_k1p(&nf, 0).unwrap(), Poly::parse(hs, "b - a1").unwrap());
        assert_eq!(h_k1p(&nf, 1).unwrap(), Poly::parse(hs, "b + 2*a1").unwrap());
    }

    #[test]
    fn h_phi_route_matches_direct_division() {
        // the Φ-expansion must agree with the literal Eisen2 quotient
        for (d, kmax) in [(3u32, 3u32), (5, 2)] {
            let nf = build_normal_form(d).unwrap();
            let bma = Poly::var(nf.hat_space(), Var::B)
                .checked_sub(&Poly::var(nf.hat_space(), Var::A(1)))
                .unwrap();
            for k in 2..=kmax {
                let h = h_k1p(&nf, k).unwrap();
                let den = f_knd(&nf, k - 1, 1, true)
                    .unwrap()
                    .checked_mul(&bma)
                    .unwrap();
                let direct =
                    Poly::exact_divide(&f_knd(&nf, k, 1, true).unwrap(), &den).unwrap();
                assert_eq!(h, direct, "d={d} k={k}");
            }
        }
    }

    #[test]
    fn h_general_agrees() {
        let nf = build_normal_form(3).unwrap();
        assert_eq!(h_general(&nf, 0, 1).unwrap(), h_k1p(&nf, 0).unwrap());
        assert_eq!(h_general(&nf, 1, 1).unwrap(), h_k1p(&nf, 1).unwrap());
        assert_eq!(h_general(&nf, 2, 1).unwrap(), h_k1p(&nf, 2).unwrap());
    }

    #[test]
    fn mixed_specialize_examples() {
        let nf = build_normal_form(5).unwrap();
        let h = h_k1p(&nf, 2).unwrap();
        let hj = mixed_specialize(&h, 2).unwrap();
        assert_eq!(
            hj.space().vars(),
            &[Var::A(1), Var::A(3), Var::B]
        );
        // β−α₁ is untouched by j=2 when α₂ is absent
        let bma = Poly::parse(nf.hat_space(), "b - a1").unwrap();
        let t = mixed_specialize(&bma, 2).unwrap();
        assert_eq!(t.render(), "b - a1");
        assert!(mixed_specialize(&h, 7).is_err());
    }

    #[test]
    fn unicritical_limit_lowest_term() {
        // lowest term of h_{k,1,p}(0,…,0,β) is p·β^{p−2}
        let nf = build_normal_form(3).unwrap();
        let h = h_k1p(&nf, 2).unwrap();
        let u = specialize_unicritical(&h).unwrap();
        let lowest = u.homogeneous_part(Part::Lowest).unwrap();
        assert_eq!(lowest.render(), "3*b");
    }

    #[test]
    fn modp_orbit_matches_reduction() {
        let nf = build_normal_form(3).unwrap();
        for k in 0..=3u32 {
            let exact = f_knd(&nf, k, 1, true).unwrap().reduce_mod_p(3).unwrap();
            let native = f_knd_modp(&nf, k, 1, 3).unwrap();
            assert_eq!(exact, native, "k={k}");
        }
    }

    #[test]
    fn rigidity_examples() {
        // (p,e)=(3,1), marked (0,1): difference ≡ β−α₁
        let r = rigidity_check(3, 1, 0, 1, 2, 0, 1).unwrap();
        assert!(r.coprime_mod_p);
        assert_eq!(r.difference_marked, "b + 2*a1");
        // (α₂−α₁)³ ≡ α₂³ − α₁³ (mod 3)
        assert_eq!(r.highest_other, "a2^3 + 2*a1^3");
        // (p,e)=(3,2), marked (1,1): highest part (β−α₁)^9
        let r2 = rigidity_check(3, 2, 1, 1, 2, 0, 1).unwrap();
        assert!(r2.coprime_mod_p);
        assert_eq!(r2.highest_marked, "b^9 + 2*a1^9");
        assert!(rigidity_check(4, 1, 0, 1, 2, 0, 1).is_err());
    }
}
