use std::collections::BTreeMap;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::{Monomial, MpolyError, Var, VarSpace};
use crate::exactnum::mod_inverse;

/// Sparse multivariate polynomial over 𝔽_p. Same canonical term order as
/// `Poly`; coefficients are residues in [1, p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPPoly {
    space: Arc<VarSpace>,
    p: u64,
    terms: Vec<(Monomial, u64)>,
}

impl ModPPoly {
    pub fn zero(space: &Arc<VarSpace>, p: u64) -> ModPPoly {
        ModPPoly {
            space: space.clone(),
            p,
            terms: Vec::new(),
        }
    }

    pub fn constant(space: &Arc<VarSpace>, p: u64, c: u64) -> ModPPoly {
        let c = c % p;
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::unit(), c)]
        };
        ModPPoly {
            space: space.clone(),
            p,
            terms,
        }
    }

    pub fn one(space: &Arc<VarSpace>, p: u64) -> ModPPoly {
        Self::constant(space, p, 1)
    }

    pub fn var(space: &Arc<VarSpace>, p: u64, v: Var) -> ModPPoly {
        let idx = space
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in space"));
        ModPPoly {
            space: space.clone(),
            p,
            terms: vec![(Monomial::var(idx), 1)],
        }
    }

    /// From terms already sorted descending with nonzero residues.
    pub(super) fn from_sorted_terms(
        space: &Arc<VarSpace>,
        p: u64,
        terms: Vec<(Monomial, u64)>,
    ) -> ModPPoly {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|&(_, c)| c > 0 && c < p));
        ModPPoly {
            space: space.clone(),
            p,
            terms,
        }
    }

    pub fn from_terms(space: &Arc<VarSpace>, p: u64, raw: Vec<(Monomial, u64)>) -> ModPPoly {
        let mut map: BTreeMap<Monomial, u64> = BTreeMap::new();
        for (m, c) in raw {
            let e = map.entry(m).or_insert(0);
            *e = (*e + c % p) % p;
        }
        let terms = map
            .into_iter()
            .rev()
            .filter(|&(_, c)| c != 0)
            .collect();
        ModPPoly {
            space: space.clone(),
            p,
            terms,
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_unit())
    }

    pub fn as_constant(&self) -> Option<u64> {
        if self.is_zero() {
            Some(0)
        } else if self.is_constant() {
            Some(self.terms[0].1)
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.total_degree())
    }

    fn check_compat(&self, rhs: &ModPPoly) -> Result<(), MpolyError> {
        if self.space == rhs.space && self.p == rhs.p {
            Ok(())
        } else {
            Err(MpolyError::VarSpaceMismatch)
        }
    }

    pub fn add(&self, rhs: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        self.check_compat(rhs)?;
        Ok(self.add_scaled(rhs, 1))
    }

    pub fn sub(&self, rhs: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        self.check_compat(rhs)?;
        Ok(self.add_scaled(rhs, self.p - 1))
    }

    fn add_scaled(&self, rhs: &ModPPoly, scale: u64) -> ModPPoly {
        let p = self.p;
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (ma, ca) = self.terms[i];
            let (mb, cb) = rhs.terms[j];
            match mb.cmp(&ma) {
                std::cmp::Ordering::Less => {
                    terms.push((ma, ca));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((mb, cb * scale % p));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = (ca + cb * scale) % p;
                    if c != 0 {
                        terms.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend(rhs.terms[j..].iter().map(|&(m, c)| (m, c * scale % p)));
        terms.retain(|&(_, c)| c != 0);
        ModPPoly {
            space: self.space.clone(),
            p,
            terms,
        }
    }

    pub fn neg(&self) -> ModPPoly {
        let p = self.p;
        ModPPoly {
            space: self.space.clone(),
            p,
            terms: self.terms.iter().map(|&(m, c)| (m, p - c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        self.check_compat(rhs)?;
        Ok(self.mul_impl(rhs))
    }

    fn mul_impl(&self, rhs: &ModPPoly) -> ModPPoly {
        let p = self.p;
        if self.is_zero() || rhs.is_zero() {
            return ModPPoly::zero(&self.space, p);
        }
        let mut acc: FxHashMap<Monomial, u64> = FxHashMap::default();
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &rhs.terms {
                let e = acc.entry(ma.mul(&mb)).or_insert(0);
                *e = (*e + ca * cb) % p;
            }
        }
        let mut terms: Vec<(Monomial, u64)> =
            acc.into_iter().filter(|&(_, c)| c != 0).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        ModPPoly {
            space: self.space.clone(),
            p,
            terms,
        }
    }

    /// Frobenius endomorphism g ↦ g^p: raise every exponent by the factor p
    /// (coefficients are fixed by Fermat).
    pub fn frobenius(&self) -> ModPPoly {
        let p32 = self.p as u32;
        ModPPoly {
            space: self.space.clone(),
            p: self.p,
            terms: self.terms.iter().map(|&(m, c)| (m.pow(p32), c)).collect(),
        }
    }

    /// Power by repeated squaring, with the Frobenius shortcut applied for
    /// every factor of p in the exponent.
    pub fn pow(&self, mut n: u64) -> ModPPoly {
        if n == 0 {
            return ModPPoly::one(&self.space, self.p);
        }
        let mut base = self.clone();
        while n % self.p == 0 {
            base = base.frobenius();
            n /= self.p;
        }
        let mut acc: Option<ModPPoly> = None;
        loop {
            if n & 1 == 1 {
                acc = Some(match acc {
                    Some(a) => a.mul_impl(&base),
                    None => base.clone(),
                });
            }
            n >>= 1;
            if n == 0 {
                break;
            }
            base = base.mul_impl(&base);
        }
        acc.unwrap()
    }

    /// Substitutes `rep` for variable `v` (Horner).
    pub fn substitute(&self, v: Var, rep: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        self.check_compat(rep)?;
        let idx = self
            .space
            .index_of(v)
            .ok_or(MpolyError::VarSpaceMismatch)?;
        let max_e = self
            .terms
            .iter()
            .map(|(m, _)| m.exponent(idx))
            .max()
            .unwrap_or(0);
        if max_e == 0 {
            return Ok(self.clone());
        }
        let mut buckets: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); (max_e + 1) as usize];
        for &(m, c) in &self.terms {
            let e = m.exponent(idx);
            buckets[e as usize].push((Monomial::var(idx).pow(e).div_into(&m), c));
        }
        let coeff = |b: Vec<(Monomial, u64)>| ModPPoly::from_terms(&self.space, self.p, b);
        let mut iter = buckets.into_iter().rev();
        let mut acc = coeff(iter.next().unwrap());
        for bucket in iter {
            acc = acc.mul_impl(rep).add_scaled(&coeff(bucket), 1);
        }
        Ok(acc)
    }

    pub fn compose_in_z(&self, h: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        if !self.space.contains(Var::Z) {
            return Err(MpolyError::VarSpaceMismatch);
        }
        self.substitute(Var::Z, h)
    }

    /// Exact division over 𝔽_p, leading-term reduction in grevlex order.
    pub fn exact_divide(num: &ModPPoly, den: &ModPPoly) -> Result<ModPPoly, MpolyError> {
        num.check_compat(den)?;
        let p = num.p;
        if den.is_zero() {
            return Err(MpolyError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(ModPPoly::zero(&num.space, p));
        }
        if let Some(c) = den.as_constant() {
            let inv = mod_inverse(c, p);
            return Ok(ModPPoly {
                space: num.space.clone(),
                p,
                terms: num.terms.iter().map(|&(m, k)| (m, k * inv % p)).collect(),
            });
        }
        let (lead_m, lead_c) = den.terms[0];
        let lead_inv = mod_inverse(lead_c, p);
        let tail = &den.terms[1..];
        let mut rem: BTreeMap<Monomial, u64> = num.terms.iter().copied().collect();
        let mut q: Vec<(Monomial, u64)> = Vec::new();
        while let Some((&m, _)) = rem.iter().next_back() {
            if !lead_m.divides(&m) {
                return Err(MpolyError::NotDivisible {
                    lead: super::parse::render_monomial(&num.space, &m),
                });
            }
            let c = rem.remove(&m).unwrap();
            let qm = lead_m.div_into(&m);
            let qc = c * lead_inv % p;
            for &(dm, dc) in tail {
                let key = qm.mul(&dm);
                let delta = qc * dc % p;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        let v = (*e.get() + p - delta) % p;
                        if v == 0 {
                            e.remove();
                        } else {
                            *e.get_mut() = v;
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(p - delta);
                    }
                }
            }
            q.push((qm, qc));
        }
        let quotient = ModPPoly {
            space: num.space.clone(),
            p,
            terms: q,
        };
        if quotient.mul_impl(den) != *num {
            return Err(MpolyError::NotDivisible {
                lead: "re-verification failed".into(),
            });
        }
        Ok(quotient)
    }

    /// Returns N with g = h^N if one exists, by repeated exact division.
    pub fn is_power_of(g: &ModPPoly, h: &ModPPoly) -> Option<u64> {
        assert!(!h.is_constant(), "is_power_of needs a nonconstant base");
        if g.is_zero() {
            return None;
        }
        let hd = h.total_degree();
        if g.total_degree() % hd != 0 {
            return None;
        }
        let mut cur = g.clone();
        let mut n = 0u64;
        while !cur.is_constant() {
            match ModPPoly::exact_divide(&cur, h) {
                Ok(q) => {
                    cur = q;
                    n += 1;
                }
                Err(_) => return None,
            }
        }
        if cur.as_constant() == Some(1) && n >= 1 {
            Some(n)
        } else {
            None
        }
    }

    /// Sum of terms of minimal / maximal total degree; zero maps to zero.
    pub fn homogeneous_part_modp(&self, which: super::poly::Part) -> ModPPoly {
        if self.is_zero() {
            return self.clone();
        }
        let target = match which {
            super::poly::Part::Highest => self.terms.first().unwrap().0.total_degree(),
            super::poly::Part::Lowest => self.terms.last().unwrap().0.total_degree(),
        };
        ModPPoly {
            space: self.space.clone(),
            p: self.p,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == target)
                .copied()
                .collect(),
        }
    }

    /// Degree in a single variable.
    pub fn deg_in(&self, v: Var) -> u32 {
        let idx = match self.space.index_of(v) {
            Some(i) => i,
            None => return 0,
        };
        self.terms
            .iter()
            .map(|(m, _)| m.exponent(idx))
            .max()
            .unwrap_or(0)
    }

    /// True iff the polynomial uses no variable other than `v`.
    pub fn is_univariate_in(&self, v: Var) -> bool {
        let idx = match self.space.index_of(v) {
            Some(i) => i,
            None => return self.is_constant(),
        };
        self.terms.iter().all(|(m, _)| {
            (0..self.space.arity()).all(|i| i == idx || m.exponent(i) == 0)
        })
    }

    /// Dense coefficient vector of a univariate polynomial in `v`.
    pub fn univariate_coeffs(&self, v: Var) -> Option<Vec<u64>> {
        if !self.is_univariate_in(v) {
            return None;
        }
        let idx = self.space.index_of(v)?;
        let d = self.deg_in(v) as usize;
        let mut out = vec![0u64; d + 1];
        for &(m, c) in &self.terms {
            out[m.exponent(idx) as usize] = c;
        }
        Some(out)
    }

    /// Evaluates a univariate-in-`v` polynomial at a point of 𝔽_p.
    pub fn eval_univariate(&self, v: Var, x: u64) -> Option<u64> {
        let coeffs = self.univariate_coeffs(v)?;
        let p = self.p;
        Some(
            coeffs
                .iter()
                .rev()
                .fold(0u64, |acc, &c| (acc * (x % p) + c) % p),
        )
    }
}

/// Irreducibility of a univariate polynomial over 𝔽_p by trial division
/// against all monic polynomials of degree ≤ deg/2 (desk-scale degrees only).
pub fn univariate_irreducible_mod_p(coeffs: &[u64], p: u64) -> bool {
    let d = coeffs.len() - 1;
    assert!(coeffs[d] != 0, "leading coefficient must be nonzero");
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    // trial division by monic polynomials of degree t, 1 <= t <= d/2
    for t in 1..=d / 2 {
        let count = p.checked_pow(t as u32).expect("divisor space too large");
        for idx in 0..count {
            // decode idx into the low coefficients of a monic divisor
            let mut div = Vec::with_capacity(t + 1);
            let mut r = idx;
            for _ in 0..t {
                div.push(r % p);
                r /= p;
            }
            div.push(1);
            if poly_rem_is_zero(coeffs, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u64], den: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for i in 0..dd {
                let v = rem[shift + i];
                rem[shift + i] = (v + p - lead * den[i] % p) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && *rem.last().unwrap() == 0 {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> Arc<VarSpace> {
        VarSpace::unhatted(3)
    }

    fn bma(s: &Arc<VarSpace>, p: u64) -> ModPPoly {
        ModPPoly::var(s, p, Var::B)
            .sub(&ModPPoly::var(s, p, Var::A(1)))
            .unwrap()
    }

    #[test]
    fn power_of_examples() {
        let s = sp();
        // (β−α₁)^9 mod 3 → N = 9
        let h = bma(&s, 3);
        let g = h.pow(9);
        assert_eq!(ModPPoly::is_power_of(&g, &h), Some(9));
        assert_eq!(ModPPoly::is_power_of(&h, &h), Some(1));
        // (β−α₁)^4 + 1 mod 5 → absent
        let h5 = bma(&s, 5);
        let g5 = h5.pow(4).add(&ModPPoly::one(&s, 5)).unwrap();
        assert_eq!(ModPPoly::is_power_of(&g5, &h5), None);
    }

    #[test]
    fn frobenius_matches_mul() {
        let s = sp();
        let g = bma(&s, 3)
            .add(&ModPPoly::var(&s, 3, Var::A(2)).mul(&ModPPoly::var(&s, 3, Var::B)).unwrap())
            .unwrap();
        let cubed = g.mul(&g).unwrap().mul(&g).unwrap();
        assert_eq!(g.frobenius(), cubed);
        assert_eq!(g.pow(3), cubed);
    }

    #[test]
    fn exact_divide_mod_p() {
        let s = sp();
        let h = bma(&s, 5);
        let g = h.pow(7);
        let q = ModPPoly::exact_divide(&g, &h).unwrap();
        assert_eq!(q, h.pow(6));
        let bad = g.add(&ModPPoly::one(&s, 5)).unwrap();
        assert!(ModPPoly::exact_divide(&bad, &h).is_err());
    }

    #[test]
    fn univariate_helpers() {
        let s = sp();
        // β² + 1 over F_3: irreducible
        let g = ModPPoly::var(&s, 3, Var::B)
            .pow(2)
            .add(&ModPPoly::one(&s, 3))
            .unwrap();
        assert!(g.is_univariate_in(Var::B));
        let coeffs = g.univariate_coeffs(Var::B).unwrap();
        assert_eq!(coeffs, vec![1, 0, 1]);
        assert!(univariate_irreducible_mod_p(&coeffs, 3));
        // β² − 1 = (β−1)(β+1): reducible
        assert!(!univariate_irreducible_mod_p(&[2, 0, 1], 3));
        // linear: irreducible
        assert!(univariate_irreducible_mod_p(&[1, 1], 3));
        assert_eq!(g.eval_univariate(Var::B, 1), Some(2));
    }
}
