//! Irreducibility certificates: the generalized Eisenstein criterion over
//! ℤ_(p), and the ℚ-to-ℂ upgrade via simple rational linear factors of the
//! lowest homogeneous part (or of the residue mod (β − α₁) in the k = 1
//! shape).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactnum::{check_odd_prime, Rational, Valuation};
use crate::mpoly::{
    resultant_in_beta, univariate_irreducible_mod_p, MpolyError, Part, Poly, Var,
};

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("the form is not a rational constant times a product of rational linear forms")]
    NotProductOfRationalLinears,
    #[error("the Eisenstein certificate did not pass; absolute certification needs it")]
    EisensteinNotPassed,
    #[error("invalid certificate input: {0}")]
    BadParameter(String),
    #[error("malformed certificate text at line {line}: {msg}")]
    BadText { line: usize, msg: String },
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
}

/// Outcome of a certificate check. `Fail` records the 1-based index of the
/// first violated condition of the criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail { condition: u8 },
    Undecided,
    /// Unicritical R_{k,n,d} that is a nonzero constant: nothing to certify.
    Constant,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Constant)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::Fail { condition } => write!(f, "fail(condition={condition})"),
            Verdict::Undecided => write!(f, "undecided"),
            Verdict::Constant => write!(f, "constant"),
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pass" => Ok(Verdict::Pass),
            "undecided" => Ok(Verdict::Undecided),
            "constant" => Ok(Verdict::Constant),
            _ => s
                .strip_prefix("fail(condition=")
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.parse().ok())
                .map(|condition| Verdict::Fail { condition })
                .ok_or_else(|| format!("bad verdict `{s}`")),
        }
    }
}

/// Above this term count the certificate stores a summary instead of the
/// full rendering of g (the `.poly` artifact holds the polynomial itself).
const RENDER_LIMIT: usize = 100_000;

fn render_or_summarize(g: &Poly) -> String {
    if g.num_terms() <= RENDER_LIMIT {
        g.render()
    } else {
        format!(
            "(omitted: {} terms, total degree {}; see the .poly artifact)",
            g.num_terms(),
            g.total_degree()
        )
    }
}

/// Generalized Eisenstein certificate: g ≡ h^N (mod p), h irreducible mod
/// p, and v_p(Res_β(g, h)) < 2·deg_β(h).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EisensteinCertificate {
    pub target: String,
    pub p: u64,
    pub h: String,
    pub g: String,
    /// N with g ≡ h^N (mod p), when it exists (condition 1)
    pub n_exponent: Option<u64>,
    /// condition 2; None when the check is out of the implemented scope
    pub h_mod_p_irreducible: Option<bool>,
    /// v_p of the resultant; None encodes +∞ (condition 3 fails)
    pub resultant_valuation: Option<i64>,
    /// 2·deg_β(h)
    pub threshold: u32,
    pub verdict: Verdict,
}

pub fn certify_eisenstein(
    target: &str,
    g: &Poly,
    h: &Poly,
    p: u64,
) -> Result<EisensteinCertificate, CertifyError> {
    check_odd_prime(p).map_err(|e| CertifyError::BadParameter(e.to_string()))?;
    if !g.is_monic_in_beta() || !h.is_monic_in_beta() {
        return Err(CertifyError::Mpoly(MpolyError::NotMonicInBeta));
    }
    let g_p = g.reduce_mod_p(p)?;
    let h_p = h.reduce_mod_p(p)?;

    // condition 1: g ≡ h^N (mod p)
    let n_exponent = if h_p.is_constant() {
        None
    } else {
        crate::mpoly::ModPPoly::is_power_of(&g_p, &h_p)
    };

    // condition 2: h mod p irreducible. Decided for deg_β(h) = 1 and for
    // univariate h mod p; everything else is out of the certified scope.
    let h_mod_p_irreducible = if h.deg_beta() == 1 && h_p.deg_in(Var::B) == 1 {
        Some(true)
    } else if let Some(coeffs) = h_p.univariate_coeffs(Var::B) {
        if coeffs.len() >= 2 {
            Some(univariate_irreducible_mod_p(&coeffs, p))
        } else {
            Some(false)
        }
    } else {
        None
    };

    // condition 3: v_p(Res(g, h)) < 2·deg_β(h)
    let res = resultant_in_beta(g, h)?;
    let v = res.min_valuation(p)?;
    let threshold = 2 * h.deg_beta();
    let cond3 = match v {
        Valuation::Finite(x) => (x as i128) < threshold as i128,
        Valuation::Infinite => false,
    };

    let verdict = if n_exponent.is_none() {
        Verdict::Fail { condition: 1 }
    } else if h_mod_p_irreducible == Some(false) {
        Verdict::Fail { condition: 2 }
    } else if !cond3 {
        Verdict::Fail { condition: 3 }
    } else if h_mod_p_irreducible.is_none() {
        Verdict::Undecided
    } else {
        Verdict::Pass
    };

    Ok(EisensteinCertificate {
        target: target.into(),
        p,
        h: h.render(),
        g: render_or_summarize(g),
        n_exponent,
        h_mod_p_irreducible,
        resultant_valuation: match v {
            Valuation::Finite(x) => Some(x),
            Valuation::Infinite => None,
        },
        threshold,
        verdict,
    })
}

/// ℂ-irreducibility upgrade report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbsoluteIrreducibilityReport {
    pub target: String,
    /// which proof shape applied: the lowest homogeneous part splits
    /// ("lowest-part") or the k = 1 residue mod (β − α₁) splits
    /// ("beta-residual")
    pub shape: String,
    pub form: String,
    pub constant: String,
    /// rational linear factors with multiplicities
    pub factors: Vec<(String, u32)>,
    /// a simple (multiplicity 1) rational linear factor, when one exists
    pub witness: Option<String>,
    pub all_simple: bool,
    pub verdict: Verdict,
}

/// Factors a nonzero homogeneous form as constant · ∏ (rational linear)^m,
/// or reports that no such factorization exists. Candidate linear forms are
/// harvested from the rational roots of two-variable slices of the form.
pub fn linear_factorization_of_form(
    form: &Poly,
) -> Result<(Rational, Vec<(Poly, u32)>), CertifyError> {
    if form.is_zero() {
        return Err(CertifyError::BadParameter("zero form".into()));
    }
    if !form.is_homogeneous() {
        return Err(CertifyError::BadParameter("form is not homogeneous".into()));
    }
    let space = form.space();
    let mut g = form.clone();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    // peel variables from the greatest down; every linear factor is monic
    // in the greatest variable it involves
    for &v in space.vars().iter().rev() {
        if g.is_constant() {
            break;
        }
        if g.deg_in(v) == 0 {
            continue;
        }
        let lower: Vec<Var> = space
            .vars()
            .iter()
            .copied()
            .take_while(|&w| w != v)
            .collect();
        let candidate_sets: Vec<Vec<Rational>> = lower
            .iter()
            .map(|&w| slice_candidates(&g, v, w))
            .collect();
        // enumerate ℓ = v + Σ c_w·w over the candidate grid
        let mut combos: u64 = 1;
        for set in &candidate_sets {
            combos = combos.saturating_mul(set.len() as u64);
        }
        if combos > 200_000 {
            return Err(CertifyError::NotProductOfRationalLinears);
        }
        let mut idx = vec![0usize; candidate_sets.len()];
        loop {
            let mut ell = Poly::var(space, v);
            for (j, &w) in lower.iter().enumerate() {
                let c = &candidate_sets[j][idx[j]];
                if !c.is_zero() {
                    ell = ell
                        .checked_add(&Poly::var(space, w).scale(c))
                        .expect("same space");
                }
            }
            let mut mult = 0u32;
            while let Ok(q) = Poly::exact_divide(&g, &ell) {
                g = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((ell, mult));
            }
            if g.deg_in(v) == 0 {
                break;
            }
            // advance the mixed-radix index
            let mut j = 0;
            loop {
                if j == idx.len() {
                    break;
                }
                idx[j] += 1;
                if idx[j] < candidate_sets[j].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == idx.len() {
                break;
            }
        }
        if g.deg_in(v) > 0 {
            return Err(CertifyError::NotProductOfRationalLinears);
        }
    }
    match g.as_constant() {
        Some(c) if !c.is_zero() => {
            factors.sort_by(|a, b| {
                b.0.terms()[0]
                    .0
                    .cmp(&a.0.terms()[0].0)
                    .then_with(|| a.0.render().cmp(&b.0.render()))
            });
            Ok((c, factors))
        }
        _ => Err(CertifyError::NotProductOfRationalLinears),
    }
}

/// Candidate coefficients for w in a monic-in-v linear factor, read off the
/// (v, w) slice of the form: set every other variable to zero and collect
/// the rational roots r of the resulting binary form (v + r·w divides the
/// slice). Zero is always a candidate.
fn slice_candidates(g: &Poly, v: Var, w: Var) -> Vec<Rational> {
    let space = g.space();
    let zero = Poly::zero(space);
    let mut slice = g.clone();
    for &u in space.vars() {
        if u != v && u != w {
            slice = slice.substitute(u, &zero).expect("same space");
        }
    }
    let mut out = vec![Rational::zero()];
    if slice.is_zero() {
        // the slice kills every factor; fall back to a coarse grid
        for n in [1i64, -1, 2, -2] {
            out.push(Rational::from_int(n));
        }
        return out;
    }
    // slice = Σ a_j v^j w^{m−j}; candidates are roots r of q(t) = Σ a_j t^j
    // with v = t, i.e. v − t·w divides ⇒ coefficient of w is −t... the
    // factor v + c·w corresponds to the root t = −c of q.
    let vi = space.index_of(v).unwrap();
    let m = slice.total_degree();
    let mut coeffs: Vec<Rational> = vec![Rational::zero(); (m + 1) as usize];
    for (mono, c) in slice.terms() {
        coeffs[mono.exponent(vi) as usize] = c.clone();
    }
    for r in rational_roots(&coeffs) {
        out.push(-r);
    }
    out.sort_by(|a, b| {
        (a.numer(), a.denom())
            .partial_cmp(&(b.numer(), b.denom()))
            .unwrap()
    });
    out.dedup();
    out
}

/// Rational roots of a polynomial given by its coefficient vector, by the
/// rational root theorem after clearing denominators.
fn rational_roots(coeffs: &[Rational]) -> Vec<Rational> {
    let lo = coeffs.iter().position(|c| !c.is_zero());
    let hi = coeffs.iter().rposition(|c| !c.is_zero());
    let (lo, hi) = match (lo, hi) {
        (Some(a), Some(b)) if b > a => (a, b),
        _ => return Vec::new(),
    };
    // clear denominators over the trimmed window
    let mut den = BigInt::one();
    for c in &coeffs[lo..=hi] {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = coeffs[lo..=hi]
        .iter()
        .map(|c| c.numer() * (&den / c.denom()))
        .collect();
    let eval = |r: &Rational| -> bool {
        let mut acc = Rational::zero();
        for c in ints.iter().rev() {
            acc = acc * r.clone() + Rational::from_bigint(c.clone());
        }
        acc.is_zero()
    };
    let mut out = Vec::new();
    for pnum in divisors(&ints[0]) {
        for qden in divisors(ints.last().unwrap()) {
            for sign in [1i64, -1] {
                let cand = Rational::from_big(&pnum * BigInt::from(sign), qden.clone());
                if eval(&cand) && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    // desk-scale constants only; fall back to 1 and |n| if n is large
    if let Ok(small) = u64::try_from(n.clone()) {
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= small {
            if small % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(small / d));
            }
            d += 1;
        }
        out.sort();
        out.dedup();
        out
    } else {
        vec![BigInt::one(), n]
    }
}

/// ℂ-irreducibility upgrade. Requires a passing Eisenstein certificate;
/// passes iff a simple rational linear factor is exhibited, either in the
/// lowest homogeneous part or (k = 1 shape) in the residue of g modulo
/// (β − α₁).
pub fn certify_absolute(
    g: &Poly,
    eis: &EisensteinCertificate,
) -> Result<AbsoluteIrreducibilityReport, CertifyError> {
    if !eis.verdict.passed() {
        return Err(CertifyError::EisensteinNotPassed);
    }
    let lowest = g.homogeneous_part(Part::Lowest)?;
    if let Ok((c, factors)) = linear_factorization_of_form(&lowest) {
        return Ok(build_report(
            &eis.target,
            "lowest-part",
            &lowest,
            c,
            factors,
        ));
    }
    // k = 1 shape: reduce modulo (β − α₁), i.e. evaluate β at α₁
    let a1 = Poly::var(g.space(), Var::A(1));
    let residual = g.eval_beta(&a1)?;
    if residual.is_zero() {
        return Err(CertifyError::NotProductOfRationalLinears);
    }
    let (c, factors) = linear_factorization_of_form(&residual)?;
    Ok(build_report(
        &eis.target,
        "beta-residual",
        &residual,
        c,
        factors,
    ))
}

fn build_report(
    target: &str,
    shape: &str,
    form: &Poly,
    constant: Rational,
    factors: Vec<(Poly, u32)>,
) -> AbsoluteIrreducibilityReport {
    let witness = factors.iter().find(|(_, m)| *m == 1).map(|(f, _)| f.render());
    let all_simple = !factors.is_empty() && factors.iter().all(|(_, m)| *m == 1);
    let verdict = if witness.is_some() {
        Verdict::Pass
    } else {
        Verdict::Fail { condition: 1 }
    };
    AbsoluteIrreducibilityReport {
        target: target.into(),
        shape: shape.into(),
        form: form.render(),
        constant: constant.to_string(),
        factors: factors.into_iter().map(|(f, m)| (f.render(), m)).collect(),
        witness,
        all_simple,
        verdict,
    }
}

// ---- serialization: line-oriented text and JSON, both round-tripping ----

fn text_block(fields: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in fields {
        out.push_str(k);
        out.push_str(": ");
        out.push_str(v);
        out.push('\n');
    }
    out
}

fn parse_block(text: &str) -> Result<Vec<(String, String)>, CertifyError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once(": ").ok_or_else(|| CertifyError::BadText {
            line: i + 1,
            msg: "expected `key: value`".into(),
        })?;
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn field<'a>(
    block: &'a [(String, String)],
    key: &str,
) -> Result<&'a str, CertifyError> {
    block
        .iter()
        .find(|(k, _)| k == key)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| CertifyError::BadText {
            line: 0,
            msg: format!("missing field `{key}`"),
        })
}

impl EisensteinCertificate {
    pub fn to_text(&self) -> String {
        text_block(&[
            ("certificate", "eisenstein".into()),
            ("target", self.target.clone()),
            ("p", self.p.to_string()),
            ("h", self.h.clone()),
            ("g", self.g.clone()),
            (
                "n_exponent",
                self.n_exponent.map_or("absent".into(), |n| n.to_string()),
            ),
            (
                "h_mod_p_irreducible",
                match self.h_mod_p_irreducible {
                    Some(true) => "true".into(),
                    Some(false) => "false".into(),
                    None => "undecided".into(),
                },
            ),
            (
                "resultant_valuation",
                self.resultant_valuation
                    .map_or("inf".into(), |v| v.to_string()),
            ),
            ("threshold", self.threshold.to_string()),
            ("verdict", self.verdict.to_string()),
        ])
    }

    pub fn from_text(text: &str) -> Result<Self, CertifyError> {
        let block = parse_block(text)?;
        let bad = |msg: &str| CertifyError::BadText {
            line: 0,
            msg: msg.into(),
        };
        Ok(EisensteinCertificate {
            target: field(&block, "target")?.to_string(),
            p: field(&block, "p")?.parse().map_err(|_| bad("bad p"))?,
            h: field(&block, "h")?.to_string(),
            g: field(&block, "g")?.to_string(),
            n_exponent: match field(&block, "n_exponent")? {
                "absent" => None,
                s => Some(s.parse().map_err(|_| bad("bad n_exponent"))?),
            },
            h_mod_p_irreducible: match field(&block, "h_mod_p_irreducible")? {
                "true" => Some(true),
                "false" => Some(false),
                "undecided" => None,
                _ => return Err(bad("bad h_mod_p_irreducible")),
            },
            resultant_valuation: match field(&block, "resultant_valuation")? {
                "inf" => None,
                s => Some(s.parse().map_err(|_| bad("bad resultant_valuation"))?),
            },
            threshold: field(&block, "threshold")?
                .parse()
                .map_err(|_| bad("bad threshold"))?,
            verdict: field(&block, "verdict")?
                .parse()
                .map_err(|_| bad("bad verdict"))?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        serde_json::from_str(s).map_err(|e| CertifyError::BadText {
            line: 0,
            msg: e.to_string(),
        })
    }
}

impl AbsoluteIrreducibilityReport {
    pub fn to_text(&self) -> String {
        let mut fields: Vec<(&str, String)> = vec![
            ("certificate", "absolute".into()),
            ("target", self.target.clone()),
            ("shape", self.shape.clone()),
            ("form", self.form.clone()),
            ("constant", self.constant.clone()),
        ];
        let factor_lines: Vec<String> = self
            .factors
            .iter()
            .map(|(f, m)| format!("{f} ^ {m}"))
            .collect();
        for line in &factor_lines {
            fields.push(("factor", line.clone()));
        }
        fields.push((
            "witness",
            self.witness.clone().unwrap_or_else(|| "absent".into()),
        ));
        fields.push(("all_simple", self.all_simple.to_string()));
        fields.push(("verdict", self.verdict.to_string()));
        text_block(&fields)
    }

    pub fn from_text(text: &str) -> Result<Self, CertifyError> {
        let block = parse_block(text)?;
        let bad = |msg: &str| CertifyError::BadText {
            line: 0,
            msg: msg.into(),
        };
        let mut factors = Vec::new();
        for (k, v) in &block {
            if k == "factor" {
                let (f, m) = v.rsplit_once(" ^ ").ok_or_else(|| bad("bad factor line"))?;
                factors.push((f.to_string(), m.parse().map_err(|_| bad("bad multiplicity"))?));
            }
        }
        Ok(AbsoluteIrreducibilityReport {
            target: field(&block, "target")?.to_string(),
            shape: field(&block, "shape")?.to_string(),
            form: field(&block, "form")?.to_string(),
            constant: field(&block, "constant")?.to_string(),
            factors,
            witness: match field(&block, "witness")? {
                "absent" => None,
                s => Some(s.to_string()),
            },
            all_simple: field(&block, "all_simple")?
                .parse()
                .map_err(|_| bad("bad all_simple"))?,
            verdict: field(&block, "verdict")?
                .parse()
                .map_err(|_| bad("bad verdict"))?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        serde_json::from_str(s).map_err(|e| CertifyError::BadText {
            line: 0,
            msg: e.to_string(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::VarSpace;

    #[test]
    fn eisenstein_hand_case() {
        // g = β+2α₁, h = β−α₁, p = 3: pass with N = 1, v = 1 < 2
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b + 2*a1").unwrap();
        let h = Poly::parse(&s, "b - a1").unwrap();
        let cert = certify_eisenstein("hand", &g, &h, 3).unwrap();
        assert_eq!(cert.verdict, Verdict::Pass);
        assert_eq!(cert.n_exponent, Some(1));
        assert_eq!(cert.resultant_valuation, Some(1));
        assert_eq!(cert.threshold, 2);
    }

    #[test]
    fn eisenstein_reducible_fails() {
        // g = (β−α₁)²: Res = 0, v = ∞ → fail condition 3
        let s = VarSpace::unhatted(3);
        let h = Poly::parse(&s, "b - a1").unwrap();
        let g = h.pow(2);
        let cert = certify_eisenstein("neg", &g, &h, 3).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail { condition: 3 });
        assert_eq!(cert.resultant_valuation, None);
    }

    #[test]
    fn eisenstein_wrong_power_fails() {
        // g with no h-power congruence mod p → fail condition 1
        let s = VarSpace::unhatted(3);
        let h = Poly::parse(&s, "b - a1").unwrap();
        let g = Poly::parse(&s, "b^2 - a1^2 + 1").unwrap();
        let cert = certify_eisenstein("neg1", &g, &h, 5).unwrap();
        assert_eq!(cert.verdict, Verdict::Fail { condition: 1 });
    }

    #[test]
    fn linear_factorization_examples() {
        // 5(β+α₁+α₂+α₃)(β−α₂)(β−α₃) at p = 5
        let s = VarSpace::hatted(5); // z a1 a2 a3 b
        let f1 = Poly::parse(&s, "b + a1 + a2 + a3").unwrap();
        let f2 = Poly::parse(&s, "b - a2").unwrap();
        let f3 = Poly::parse(&s, "b - a3").unwrap();
        let form = f1
            .checked_mul(&f2)
            .unwrap()
            .checked_mul(&f3)
            .unwrap()
            .scale(&Rational::from_int(5));
        let (c, factors) = linear_factorization_of_form(&form).unwrap();
        assert_eq!(c, Rational::from_int(5));
        assert_eq!(factors.len(), 3);
        assert!(factors.iter().all(|(_, m)| *m == 1));
        let rendered: Vec<String> = factors.iter().map(|(f, _)| f.render()).collect();
        assert!(rendered.contains(&"b + a3 + a2 + a1".to_string()));
        assert!(rendered.contains(&"b - a2".to_string()));
        assert!(rendered.contains(&"b - a3".to_string()));

        // (β−α₁)² → multiplicity 2
        let s3 = VarSpace::unhatted(3);
        let sq = Poly::parse(&s3, "b - a1").unwrap().pow(2);
        let (c2, f) = linear_factorization_of_form(&sq).unwrap();
        assert_eq!(c2, Rational::one());
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].1, 2);

        // β² + α₁²: irreducible over ℚ
        let bad = Poly::parse(&s3, "b^2 + a1^2").unwrap();
        assert!(matches!(
            linear_factorization_of_form(&bad),
            Err(CertifyError::NotProductOfRationalLinears)
        ));
    }

    #[test]
    fn alpha_only_form_factors() {
        let s = VarSpace::hatted(5);
        // (α₁−α₂)(2α₁+α₂+α₃)
        let form = Poly::parse(&s, "a1 - a2")
            .unwrap()
            .checked_mul(&Poly::parse(&s, "2*a1 + a2 + a3").unwrap())
            .unwrap();
        let (c, factors) = linear_factorization_of_form(&form).unwrap();
        let back = factors
            .iter()
            .fold(Poly::constant(&s, c), |acc, (f, m)| {
                acc.checked_mul(&f.pow(*m)).unwrap()
            });
        assert_eq!(back, form);
        assert_eq!(factors.len(), 2);
    }

    #[test]
    fn certificate_round_trips() {
        let s = VarSpace::unhatted(3);
        let g = Poly::parse(&s, "b + 2*a1").unwrap();
        let h = Poly::parse(&s, "b - a1").unwrap();
        let cert = certify_eisenstein("h_{1,1,3}", &g, &h, 3).unwrap();
        assert_eq!(
            EisensteinCertificate::from_text(&cert.to_text()).unwrap(),
            cert
        );
        assert_eq!(
            EisensteinCertificate::from_json(&cert.to_json()).unwrap(),
            cert
        );
        let rep = certify_absolute(&g, &cert).unwrap();
        assert_eq!(
            AbsoluteIrreducibilityReport::from_text(&rep.to_text()).unwrap(),
            rep
        );
        assert_eq!(
            AbsoluteIrreducibilityReport::from_json(&rep.to_json()).unwrap(),
            rep
        );
    }

    #[test]
    fn certify_real_targets_p5() {
        let nf = crate::dynamics::build_normal_form(5).unwrap();
        let lin = Poly::parse(nf.hat_space(), "b - a1").unwrap();

        // k = 1: Eisenstein passes with v = 1; the absolute upgrade goes
        // through the residue mod (β − α₁)
        let h1 = crate::dynamics::h_k1p(&nf, 1).unwrap();
        let c1 = certify_eisenstein("h_{1,1,5}", &h1, &lin, 5).unwrap();
        assert_eq!(c1.verdict, Verdict::Pass);
        assert_eq!(c1.resultant_valuation, Some(1));
        let a1 = certify_absolute(&h1, &c1).unwrap();
        assert_eq!(a1.verdict, Verdict::Pass);
        assert_eq!(a1.shape, "beta-residual");

        // k = 2: lowest part 5(β+α₁+α₂+α₃)(β−α₂)(β−α₃), all simple
        let h2 = crate::dynamics::h_k1p(&nf, 2).unwrap();
        let c2 = certify_eisenstein("h_{2,1,5}", &h2, &lin, 5).unwrap();
        assert_eq!(c2.verdict, Verdict::Pass);
        assert_eq!(c2.resultant_valuation, Some(1));
        let a2 = certify_absolute(&h2, &c2).unwrap();
        assert_eq!(a2.verdict, Verdict::Pass);
        assert_eq!(a2.shape, "lowest-part");
        assert!(a2.all_simple);
        assert_eq!(a2.constant, "5");
        assert_eq!(a2.factors.len(), 3);
    }

    #[test]
    fn absolute_requires_pass() {
        let s = VarSpace::unhatted(3);
        let h = Poly::parse(&s, "b - a1").unwrap();
        let g = h.pow(2);
        let cert = certify_eisenstein("neg", &g, &h, 3).unwrap();
        assert!(matches!(
            certify_absolute(&g, &cert),
            Err(CertifyError::EisensteinNotPassed)
        ));
    }
}
