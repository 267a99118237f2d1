use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use super::{ModPPoly, Monomial, MpolyError, Var, VarSpace};
use crate::exactnum::Rational;

/// Which homogeneous part of a polynomial to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Lowest,
    Highest,
}

/// Sparse multivariate polynomial over `Rational` in a fixed `VarSpace`.
/// Terms are kept sorted in descending grevlex order with no zero
/// coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    space: Arc<VarSpace>,
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero(space: &Arc<VarSpace>) -> Poly {
        Poly {
            space: space.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(space: &Arc<VarSpace>, c: Rational) -> Poly {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![(Monomial::unit(), c)]
        };
        Poly {
            space: space.clone(),
            terms,
        }
    }

    pub fn one(space: &Arc<VarSpace>) -> Poly {
        Self::constant(space, Rational::one())
    }

    pub fn int(space: &Arc<VarSpace>, n: i64) -> Poly {
        Self::constant(space, Rational::from_int(n))
    }

    pub fn var(space: &Arc<VarSpace>, v: Var) -> Poly {
        let idx = space
            .index_of(v)
            .unwrap_or_else(|| panic!("variable {v} not in space"));
        Poly {
            space: space.clone(),
            terms: vec![(Monomial::var(idx), Rational::one())],
        }
    }

    /// Builds from arbitrary (monomial, coefficient) pairs: sorts, merges
    /// duplicates, drops zeros.
    pub fn from_terms(space: &Arc<VarSpace>, mut raw: Vec<(Monomial, Rational)>) -> Poly {
        raw.sort_by(|a, b| b.0.cmp(&a.0));
        let mut terms: Vec<(Monomial, Rational)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            if let Some(last) = terms.last_mut() {
                if last.0 == m {
                    last.1 += &c;
                    continue;
                }
            }
            terms.push((m, c));
        }
        terms.retain(|(_, c)| !c.is_zero());
        Poly {
            space: space.clone(),
            terms,
        }
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(m, _)| m.is_unit())
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |(m, _)| m.total_degree())
    }

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

    pub fn deg_beta(&self) -> u32 {
        self.deg_in(Var::B)
    }

    fn same_space(&self, rhs: &Poly) -> Result<(), MpolyError> {
        if self.space == rhs.space {
            Ok(())
        } else {
            Err(MpolyError::VarSpaceMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &Poly) -> Result<Poly, MpolyError> {
        self.same_space(rhs)?;
        Ok(self.add_impl(rhs, false))
    }

    pub fn checked_sub(&self, rhs: &Poly) -> Result<Poly, MpolyError> {
        self.same_space(rhs)?;
        Ok(self.add_impl(rhs, true))
    }

    pub fn checked_mul(&self, rhs: &Poly) -> Result<Poly, MpolyError> {
        self.same_space(rhs)?;
        Ok(self.mul_impl(rhs))
    }

    /// Merge of two descending term lists.
    fn add_impl(&self, rhs: &Poly, negate_rhs: bool) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < rhs.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &rhs.terms[j];
            match mb.cmp(ma) {
                std::cmp::Ordering::Less => {
                    terms.push((*ma, ca.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push((*mb, if negate_rhs { -cb.clone() } else { cb.clone() }));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_rhs {
                        ca.clone() - cb.clone()
                    } else {
                        ca.clone() + cb.clone()
                    };
                    if !c.is_zero() {
                        terms.push((*ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend(self.terms[i..].iter().cloned());
        terms.extend(rhs.terms[j..].iter().map(|(m, c)| {
            (*m, if negate_rhs { -c.clone() } else { c.clone() })
        }));
        Poly {
            space: self.space.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.space);
        }
        Poly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (*m, k.clone() * c.clone()))
                .collect(),
        }
    }

    /// Rewrites the terms over a common denominator: returns integer
    /// coefficients and the denominator. The multiplication kernel works
    /// over BigInt to avoid per-operation gcd reduction.
    fn clear_denominators(&self) -> (Vec<(Monomial, BigInt)>, BigInt) {
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let ints = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
            .collect();
        (ints, den)
    }

    fn mul_impl(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.space);
        }
        // fast path: monomial multiplier
        if rhs.terms.len() == 1 {
            let (m, c) = &rhs.terms[0];
            return Poly {
                space: self.space.clone(),
                terms: self
                    .terms
                    .iter()
                    .map(|(ma, ca)| (ma.mul(m), ca.clone() * c.clone()))
                    .collect(),
            };
        }
        if self.terms.len() == 1 {
            return rhs.mul_impl(self);
        }
        let (ta, da) = self.clear_denominators();
        let (tb, db) = rhs.clear_denominators();
        // iterate the smaller factor in the outer loop
        let (outer, inner) = if ta.len() <= tb.len() {
            (&ta, &tb)
        } else {
            (&tb, &ta)
        };
        let mut acc: FxHashMap<Monomial, BigInt> =
            FxHashMap::with_capacity_and_hasher(inner.len() * 2, Default::default());
        for (mo, co) in outer {
            for (mi, ci) in inner {
                let m = mo.mul(mi);
                match acc.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += co * ci;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(co * ci);
                    }
                }
            }
        }
        let den = da * db;
        let mut terms: Vec<(Monomial, Rational)> = acc
            .into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(m, v)| (m, Rational::from_big(v, den.clone())))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        Poly {
            space: self.space.clone(),
            terms,
        }
    }

    /// Power by repeated squaring.
    pub fn pow(&self, n: u32) -> Poly {
        if n == 0 {
            return Poly::one(&self.space);
        }
        // single-term base: exponentiate the monomial directly
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            let mut ck = Rational::one();
            for _ in 0..n {
                ck *= c;
            }
            return Poly {
                space: self.space.clone(),
                terms: vec![(m.pow(n), ck)],
            };
        }
        let mut base = self.clone();
        let mut acc: Option<Poly> = None;
        let mut n = n;
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

    /// Substitutes `rep` for the variable `v` (Horner in `v`); result is in
    /// the same space.
    pub fn substitute(&self, v: Var, rep: &Poly) -> Result<Poly, MpolyError> {
        self.same_space(rep)?;
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
        // bucket coefficient polynomials by exponent of v
        let mut buckets: Vec<Vec<(Monomial, Rational)>> =
            vec![Vec::new(); (max_e + 1) as usize];
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            let stripped = Monomial::var(idx).pow(e).div_into(m);
            buckets[e as usize].push((stripped, c.clone()));
        }
        let coeff = |bucket: Vec<(Monomial, Rational)>| Poly::from_terms(&self.space, bucket);
        let mut iter = buckets.into_iter().rev();
        let mut acc = coeff(iter.next().unwrap());
        for bucket in iter {
            acc = acc.mul_impl(rep).add_impl(&coeff(bucket), false);
        }
        Ok(acc)
    }

    /// g with z replaced by h; all other variables untouched.
    pub fn compose_in_z(&self, h: &Poly) -> Result<Poly, MpolyError> {
        if !self.space.contains(Var::Z) {
            return Err(MpolyError::VarSpaceMismatch);
        }
        self.substitute(Var::Z, h)
    }

    /// Reinterprets the polynomial in `target`, which must contain every
    /// variable actually used. Panics on a genuinely missing variable (an
    /// internal invariant, not a user input path).
    pub fn project_to(&self, target: &Arc<VarSpace>) -> Poly {
        let arity = self.space.arity();
        let map: Vec<Option<usize>> = self
            .space
            .vars()
            .iter()
            .map(|&v| target.index_of(v))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut exps = vec![0u32; target.arity()];
                for i in 0..arity {
                    let e = m.exponent(i);
                    if e > 0 {
                        let j = map[i].unwrap_or_else(|| {
                            panic!("variable {} used but absent from target", self.space.vars()[i])
                        });
                        exps[j] = e;
                    }
                }
                (Monomial::from_exponents(&exps), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// The hat map: α_{d−1} ↦ −(α₁ + … + α_{d−2}), landing in the hatted
    /// space of the same degree.
    pub fn substitute_hat(&self) -> Poly {
        let d = (self.space.arity() - 1) as u32;
        let expected = VarSpace::unhatted(d);
        assert_eq!(self.space.vars(), expected.vars(), "not an unhatted space");
        let rep = (1..d - 1).fold(Poly::zero(&self.space), |acc, i| {
            acc.add_impl(&Poly::var(&self.space, Var::A(i)), true)
        });
        let sub = self.substitute(Var::A(d - 1), &rep).unwrap();
        sub.project_to(&VarSpace::hatted(d))
    }

    /// i-th elementary symmetric polynomial in the given variables.
    pub fn elementary_symmetric(
        space: &Arc<VarSpace>,
        i: usize,
        vars: &[Var],
    ) -> Result<Poly, MpolyError> {
        if i > vars.len() {
            return Err(MpolyError::SymmetricIndexOutOfRange(i, vars.len()));
        }
        // iterate ∏(1 + t·x_v) keeping the coefficient list in t
        let mut coeffs = vec![Poly::one(space)];
        for &v in vars {
            let x = Poly::var(space, v);
            let mut next = Vec::with_capacity(coeffs.len() + 1);
            next.push(coeffs[0].clone());
            for j in 1..=coeffs.len() {
                let mut t = coeffs[j - 1].mul_impl(&x);
                if j < coeffs.len() {
                    t = t.add_impl(&coeffs[j], false);
                }
                next.push(t);
            }
            coeffs = next;
        }
        Ok(coeffs.swap_remove(i))
    }

    /// Φ_n(x, y) = Σ_{j=0}^{n−1} x^j y^{n−1−j}, so (x − y)·Φ_n = x^n − y^n.
    pub fn phi(space: &Arc<VarSpace>, n: i64, x: Var, y: Var) -> Result<Poly, MpolyError> {
        if n < 1 {
            return Err(MpolyError::PhiIndex(n));
        }
        let xi = space.index_of(x).ok_or(MpolyError::VarSpaceMismatch)?;
        let yi = space.index_of(y).ok_or(MpolyError::VarSpaceMismatch)?;
        let n = n as u32;
        let terms = (0..n)
            .map(|j| {
                (
                    Monomial::var(xi).pow(j).mul(&Monomial::var(yi).pow(n - 1 - j)),
                    Rational::one(),
                )
            })
            .collect();
        Ok(Poly::from_terms(space, terms))
    }

    /// Exact division via leading-term reduction in grevlex order. The
    /// product identity q·den = num is re-verified before returning.
    pub fn exact_divide(num: &Poly, den: &Poly) -> Result<Poly, MpolyError> {
        num.same_space(den)?;
        if den.is_zero() {
            return Err(MpolyError::ZeroPolynomial);
        }
        if num.is_zero() {
            return Ok(Poly::zero(&num.space));
        }
        if let Some(c) = den.as_constant() {
            return Ok(num.scale(&c.recip()));
        }
        let (lead_m, lead_c) = &den.terms[0];
        let tail = &den.terms[1..];
        let mut rem: BTreeMap<Monomial, Rational> = num.terms.iter().cloned().collect();
        let mut q: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((&m, _)) = rem.iter().next_back() {
            if !lead_m.divides(&m) {
                return Err(MpolyError::NotDivisible {
                    lead: format!("{}", num.render_monomial_at(&m)),
                });
            }
            let c = rem.remove(&m).unwrap();
            let qm = lead_m.div_into(&m);
            let qc = c / lead_c.clone();
            for (dm, dc) in tail {
                let key = qm.mul(dm);
                let delta = qc.clone() * dc.clone();
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() -= &delta;
                        if e.get().is_zero() {
                            e.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(-delta);
                    }
                }
            }
            q.push((qm, qc));
        }
        let quotient = Poly {
            space: num.space.clone(),
            terms: q,
        };
        debug_assert!(quotient
            .terms
            .windows(2)
            .all(|w| w[0].0 > w[1].0));
        if quotient.mul_impl(den) != *num {
            return Err(MpolyError::NotDivisible {
                lead: "re-verification failed".into(),
            });
        }
        Ok(quotient)
    }

    /// True iff den divides self exactly.
    pub fn is_divisible_by(&self, den: &Poly) -> bool {
        Poly::exact_divide(self, den).is_ok()
    }

    /// Sum of terms of minimal / maximal total degree.
    pub fn homogeneous_part(&self, which: Part) -> Result<Poly, MpolyError> {
        if self.is_zero() {
            return Err(MpolyError::ZeroPolynomial);
        }
        let target = match which {
            Part::Highest => self.terms.first().unwrap().0.total_degree(),
            Part::Lowest => self.terms.last().unwrap().0.total_degree(),
        };
        Ok(Poly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.total_degree() == target)
                .cloned()
                .collect(),
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        match (self.terms.first(), self.terms.last()) {
            (Some(a), Some(b)) => a.0.total_degree() == b.0.total_degree(),
            _ => true,
        }
    }

    pub fn derivative(&self, v: Var) -> Poly {
        let idx = match self.space.index_of(v) {
            Some(i) => i,
            None => return Poly::zero(&self.space),
        };
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponent(idx) > 0)
            .map(|(m, c)| {
                let e = m.exponent(idx);
                let m2 = Monomial::var(idx).div_into(m);
                (m2, c.clone() * Rational::from_int(e as i64))
            })
            .collect();
        Poly::from_terms(&self.space, terms)
    }

    /// Coefficient polynomials in β: entry i is the coefficient of β^i,
    /// with the β-exponent stripped (still in the same space).
    pub fn beta_coefficients(&self) -> Vec<Poly> {
        let idx = self.space.index_of(Var::B).expect("space without b");
        let d = self.deg_beta() as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(idx);
            buckets[e as usize].push((Monomial::var(idx).pow(e).div_into(m), c.clone()));
        }
        buckets
            .into_iter()
            .map(|b| Poly::from_terms(&self.space, b))
            .collect()
    }

    /// True iff the leading coefficient in β is the constant 1.
    pub fn is_monic_in_beta(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        let coeffs = self.beta_coefficients();
        coeffs.last().map(|c| c.as_constant() == Some(Rational::one())) == Some(true)
    }

    /// Evaluation at β = ℓ (substitution of a β-free polynomial for β).
    pub fn eval_beta(&self, ell: &Poly) -> Result<Poly, MpolyError> {
        self.substitute(Var::B, ell)
    }

    /// Coefficient-wise reduction into 𝔽_p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<ModPPoly, MpolyError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let r = c.reduce_mod_p(p).map_err(|e| match e {
                crate::exactnum::NumError::NegativeValuation(..) => {
                    MpolyError::NegativeValuation {
                        monomial: self.render_monomial_at(m),
                        p,
                    }
                }
                other => MpolyError::Num(other),
            })?;
            if !r.is_zero() {
                terms.push((*m, r.residue()));
            }
        }
        Ok(ModPPoly::from_sorted_terms(&self.space, p, terms))
    }

    /// Minimal p-adic valuation over all coefficients (∞ for zero).
    pub fn min_valuation(&self, p: u64) -> Result<crate::exactnum::Valuation, MpolyError> {
        let mut best = crate::exactnum::Valuation::Infinite;
        for (_, c) in &self.terms {
            let v = c.padic_valuation(p)?;
            if v < best {
                best = v;
            }
        }
        Ok(best)
    }

    pub(super) fn render_monomial_at(&self, m: &Monomial) -> String {
        super::parse::render_monomial(&self.space, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> Arc<VarSpace> {
        VarSpace::unhatted(3) // z, a1, a2, b
    }

    fn b_minus_a1(s: &Arc<VarSpace>) -> Poly {
        Poly::var(s, Var::B)
            .checked_sub(&Poly::var(s, Var::A(1)))
            .unwrap()
    }

    #[test]
    fn multiply_basic() {
        let s = sp();
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        let p = b_minus_a1(&s)
            .checked_mul(&b.checked_add(&a1).unwrap())
            .unwrap();
        // β² − α₁²
        let expect = b
            .checked_mul(&b)
            .unwrap()
            .checked_sub(&a1.checked_mul(&a1).unwrap())
            .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn pow_square() {
        let s = sp();
        let p = b_minus_a1(&s).pow(2);
        // β² − 2α₁β + α₁²
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        let expect = b
            .pow(2)
            .checked_sub(&a1.checked_mul(&b).unwrap().scale(&Rational::from_int(2)))
            .unwrap()
            .checked_add(&a1.pow(2))
            .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn mul_by_zero() {
        let s = sp();
        let z = Poly::zero(&s);
        assert!(b_minus_a1(&s).checked_mul(&z).unwrap().is_zero());
    }

    #[test]
    fn space_mismatch() {
        let a = Poly::var(&VarSpace::unhatted(3), Var::B);
        let b = Poly::var(&VarSpace::unhatted(5), Var::B);
        assert_eq!(a.checked_mul(&b), Err(MpolyError::VarSpaceMismatch));
    }

    #[test]
    fn elementary_symmetric_values() {
        let s = VarSpace::unhatted(4); // z a1 a2 a3 b
        let vars = [Var::A(1), Var::A(2), Var::A(3)];
        let s1 = Poly::elementary_symmetric(&s, 1, &vars).unwrap();
        let expect = Poly::var(&s, Var::A(1))
            .checked_add(&Poly::var(&s, Var::A(2)))
            .unwrap()
            .checked_add(&Poly::var(&s, Var::A(3)))
            .unwrap();
        assert_eq!(s1, expect);
        let s2 = Poly::elementary_symmetric(&s, 2, &vars[..2]).unwrap();
        let a1a2 = Poly::var(&s, Var::A(1))
            .checked_mul(&Poly::var(&s, Var::A(2)))
            .unwrap();
        assert_eq!(s2, a1a2);
        let s0 = Poly::elementary_symmetric(&s, 0, &vars).unwrap();
        assert_eq!(s0, Poly::one(&s));
        assert!(Poly::elementary_symmetric(&s, 4, &vars).is_err());
    }

    #[test]
    fn compose_examples() {
        let s = sp();
        let z = Poly::var(&s, Var::Z);
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        // g = z² + β, h = z + α₁ → z² + 2α₁z + α₁² + β
        let g = z.pow(2).checked_add(&b).unwrap();
        let h = z.checked_add(&a1).unwrap();
        let got = g.compose_in_z(&h).unwrap();
        let expect = z
            .pow(2)
            .checked_add(&z.checked_mul(&a1).unwrap().scale(&Rational::from_int(2)))
            .unwrap()
            .checked_add(&a1.pow(2))
            .unwrap()
            .checked_add(&b)
            .unwrap();
        assert_eq!(got, expect);
        // g = z → h
        assert_eq!(z.compose_in_z(&h).unwrap(), h);
        // compose with z is the identity
        assert_eq!(g.compose_in_z(&z).unwrap(), g);
    }

    #[test]
    fn hat_substitution() {
        // d=3: α₁α₂ ↦ −α₁²; β ↦ β
        let s = sp();
        let h = VarSpace::hatted(3);
        let a1a2 = Poly::var(&s, Var::A(1))
            .checked_mul(&Poly::var(&s, Var::A(2)))
            .unwrap();
        assert_eq!(a1a2.substitute_hat(), Poly::var(&h, Var::A(1)).pow(2).neg());
        assert_eq!(Poly::var(&s, Var::B).substitute_hat(), Poly::var(&h, Var::B));
    }

    #[test]
    fn exact_divide_examples() {
        let s = sp();
        let bma = b_minus_a1(&s);
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        let bp2a = b.checked_add(&a1.scale(&Rational::from_int(2))).unwrap();
        // (β³ − 3α₁²β + 2α₁³) / (β − α₁)² = β + 2α₁
        let num = bma.pow(2).checked_mul(&bp2a).unwrap();
        assert_eq!(Poly::exact_divide(&num, &bma.pow(2)).unwrap(), bp2a);
        // g / 1 = g
        assert_eq!(Poly::exact_divide(&num, &Poly::one(&s)).unwrap(), num);
        // (β² − α₁²) / (β + 2α₁) → NotDivisible
        let n2 = b.pow(2).checked_sub(&a1.pow(2)).unwrap();
        assert!(matches!(
            Poly::exact_divide(&n2, &bp2a),
            Err(MpolyError::NotDivisible { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        let s = sp();
        assert_eq!(Poly::phi(&s, 1, Var::Z, Var::B).unwrap(), Poly::one(&s));
        // Φ₃(z, w) with w := a1 here
        let z = Poly::var(&s, Var::Z);
        let w = Poly::var(&s, Var::A(1));
        let expect = z
            .pow(2)
            .checked_add(&z.checked_mul(&w).unwrap())
            .unwrap()
            .checked_add(&w.pow(2))
            .unwrap();
        assert_eq!(Poly::phi(&s, 3, Var::Z, Var::A(1)).unwrap(), expect);
        // (x − y)·Φ_n = x^n − y^n for n ≤ 12
        for n in 1..=12u32 {
            let phi = Poly::phi(&s, n as i64, Var::Z, Var::A(1)).unwrap();
            let lhs = z.checked_sub(&w).unwrap().checked_mul(&phi).unwrap();
            let rhs = z.pow(n).checked_sub(&w.pow(n)).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert!(Poly::phi(&s, 0, Var::Z, Var::B).is_err());
    }

    #[test]
    fn homogeneous_parts() {
        let s = sp();
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        // β² + 3α₁β + α₁ → lowest α₁
        let g = b
            .pow(2)
            .checked_add(&a1.checked_mul(&b).unwrap().scale(&Rational::from_int(3)))
            .unwrap()
            .checked_add(&a1)
            .unwrap();
        assert_eq!(g.homogeneous_part(Part::Lowest).unwrap(), a1);
        // highest((β−α₁)⁴ + β) = (β−α₁)⁴
        let q = b_minus_a1(&s).pow(4).checked_add(&b).unwrap();
        assert_eq!(q.homogeneous_part(Part::Highest).unwrap(), b_minus_a1(&s).pow(4));
        assert!(Poly::zero(&s).homogeneous_part(Part::Lowest).is_err());
    }

    #[test]
    fn beta_structure() {
        let s = sp();
        let bma = b_minus_a1(&s);
        assert!(bma.is_monic_in_beta());
        assert!(!bma.scale(&Rational::from_int(2)).is_monic_in_beta());
        let g = bma.pow(3);
        assert_eq!(g.deg_beta(), 3);
        let coeffs = g.beta_coefficients();
        assert_eq!(coeffs.len(), 4);
        assert_eq!(coeffs[3], Poly::one(&s));
        assert_eq!(coeffs[0], Poly::var(&s, Var::A(1)).pow(3).neg());
    }

    #[test]
    fn derivative_and_eval() {
        let s = sp();
        let z = Poly::var(&s, Var::Z);
        let a1 = Poly::var(&s, Var::A(1));
        let g = z.pow(3).checked_add(&a1.checked_mul(&z).unwrap()).unwrap();
        let expect = z.pow(2).scale(&Rational::from_int(3)).checked_add(&a1).unwrap();
        assert_eq!(g.derivative(Var::Z), expect);
        // eval β at α₁ on (β−α₁) → 0
        let bma = b_minus_a1(&s);
        assert!(bma.eval_beta(&a1).unwrap().is_zero());
    }

    #[test]
    fn reduce_mod_p_examples() {
        let s = sp();
        let a1 = Poly::var(&s, Var::A(1));
        let b = Poly::var(&s, Var::B);
        // 3β + α₁ mod 3 → α₁
        let g = b.scale(&Rational::from_int(3)).checked_add(&a1).unwrap();
        let r = g.reduce_mod_p(3).unwrap();
        assert_eq!(r, a1.reduce_mod_p(3).unwrap());
        // β/3 mod 3 → error
        let bad = b.scale(&Rational::new(1, 3));
        assert!(matches!(
            bad.reduce_mod_p(3),
            Err(MpolyError::NegativeValuation { .. })
        ));
    }
}
