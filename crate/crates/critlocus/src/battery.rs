//! The acceptance battery: twelve desk-scale checks covering the normal
//! form, certificates, congruences, rigidity, property suites, and artifact
//! determinism. Used by the `suite` subcommand and the acceptance tests.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Mutex;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certify::{certify_absolute, certify_eisenstein, Verdict};
use crate::cli;
use crate::dynamics::{
    build_normal_form, f_knd_modp, h_general, h_k1p, mixed_specialize, rigidity_check,
};
use crate::exactnum::Rational;
use crate::mpoly::{resultant_in_beta, ModPPoly, Monomial, Part, Poly, Var, VarSpace};
use crate::unicritical::{
    certify_r_eisenstein, cross_check_specialization, find_roots, numeric::Complex,
    oracle_with_r, r_knd,
};

pub struct Config {
    pub seed: u64,
    /// include the stretch certificate cases (p=5 k=3, p=7 k=2)
    pub stretch: bool,
    pub jobs: usize,
    /// scratch directory for the determinism criterion
    pub scratch: PathBuf,
}

pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        if self.passed {
            format!(
                "criterion {:2} [pass] {} ({} ms)",
                self.index, self.name, self.millis
            )
        } else {
            format!(
                "criterion {:2} [FAIL] {} ({} ms): {}",
                self.index, self.name, self.millis, self.detail
            )
        }
    }
}

type Check = fn(&Config) -> Result<(), String>;

const CRITERIA: &[(usize, &str, Check)] = &[
    (1, "normal-form invariants d ∈ {3,5,7,9}", c1_normal_form),
    (2, "golden d = 3 values", c2_golden),
    (3, "Eisenstein + absolute certificates for h_{k,1,p}", c3_certificates),
    (4, "lowest homogeneous part of h_{k,1,p}, k ≥ 2", c4_lowest_part),
    (5, "f̂_{k,1,p} ≡ (β−α₁)^{p^k} mod p", c5_frobenius_congruence),
    (6, "h_{0,2,p} mod p and Eisenstein precondition failure", c6_h02p),
    (7, "mixed specialization h^2_{2,1,5}", c7_mixed),
    (8, "unicritical R and preperiodicity oracle", c8_unicritical),
    (9, "unicritical cross-check of h_{k,1,p}", c9_cross_check),
    (10, "weak Thurston rigidity mod p", c10_rigidity),
    (11, "randomized property suites", c11_properties),
    (12, "artifact determinism", c12_determinism),
];

pub fn run_all(cfg: &Config) -> Vec<CriterionOutcome> {
    let queue = Mutex::new(CRITERIA.iter());
    let results = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..cfg.jobs.max(1) {
            scope.spawn(|| loop {
                let next = queue.lock().unwrap().next();
                let Some(&(index, name, check)) = next else {
                    break;
                };
                let start = Instant::now();
                let outcome = catch_unwind(AssertUnwindSafe(|| check(cfg)));
                let (passed, detail) = match outcome {
                    Ok(Ok(())) => (true, String::new()),
                    Ok(Err(msg)) => (false, msg),
                    Err(panic) => {
                        let msg = panic
                            .downcast_ref::<String>()
                            .cloned()
                            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panicked".into());
                        (false, format!("panicked: {msg}"))
                    }
                };
                results.lock().unwrap().push(CriterionOutcome {
                    index,
                    name,
                    passed,
                    detail,
                    millis: start.elapsed().as_millis(),
                });
            });
        }
    });
    let mut out = results.into_inner().unwrap();
    out.sort_by_key(|o| o.index);
    out
}

fn err<T>(msg: String) -> Result<T, String> {
    Err(msg)
}

fn c1_normal_form(_: &Config) -> Result<(), String> {
    // construction asserts monicity, the missing z^{d−1}, f(α₁) = β, the
    // critical-product identity under the hat map, and p-integrality
    for d in [3u32, 5, 7, 9] {
        build_normal_form(d).map_err(|e| format!("d = {d}: {e}"))?;
    }
    Ok(())
}

fn c2_golden(_: &Config) -> Result<(), String> {
    let nf = build_normal_form(3).map_err(|e| e.to_string())?;
    let hs = nf.hat_space();
    let want_fhat = Poly::parse(hs, "z^3 - 3*a1^2*z + 2*a1^3 + b").unwrap();
    if *nf.fhat() != want_fhat {
        return err(format!("f̂ = {}", nf.fhat().render()));
    }
    let h0 = h_k1p(&nf, 0).map_err(|e| e.to_string())?;
    if h0 != Poly::parse(hs, "b - a1").unwrap() {
        return err(format!("h_{{0,1,3}} = {}", h0.render()));
    }
    let h1 = h_k1p(&nf, 1).map_err(|e| e.to_string())?;
    if h1 != Poly::parse(hs, "b + 2*a1").unwrap() {
        return err(format!("h_{{1,1,3}} = {}", h1.render()));
    }
    let lin = Poly::parse(hs, "b - a1").unwrap();
    let res = resultant_in_beta(&h1, &lin).map_err(|e| e.to_string())?;
    let three_a1 = Poly::parse(hs, "3*a1").unwrap();
    if res != three_a1 && res != three_a1.neg() {
        return err(format!("Res(h_{{1,1,3}}, β−α₁) = {}", res.render()));
    }
    // ±3α₁ must match f̂″(α₁)/2
    let half = Rational::from_big(1.into(), 2.into());
    let curv = nf
        .fhat()
        .derivative(Var::Z)
        .derivative(Var::Z)
        .substitute(Var::Z, &Poly::var(hs, Var::A(1)))
        .unwrap()
        .scale(&half);
    if res != curv && res != curv.neg() {
        return err(format!("f̂″(α₁)/2 = {}", curv.render()));
    }
    Ok(())
}

fn required_cases(stretch: bool) -> Vec<(u64, u32)> {
    let mut cases = vec![(3u64, 1u32), (3, 2), (3, 3), (3, 4), (5, 1), (5, 2)];
    if stretch {
        cases.push((5, 3));
        cases.push((7, 2));
    }
    cases
}

fn c3_certificates(cfg: &Config) -> Result<(), String> {
    for (p, k) in required_cases(cfg.stretch) {
        let nf = build_normal_form(p as u32).map_err(|e| e.to_string())?;
        let h = h_k1p(&nf, k).map_err(|e| e.to_string())?;
        let lin = Poly::parse(nf.hat_space(), "b - a1").unwrap();
        let cert = certify_eisenstein(&format!("h_{{{k},1,{p}}}"), &h, &lin, p)
            .map_err(|e| e.to_string())?;
        if cert.verdict != Verdict::Pass {
            return err(format!("h_{{{k},1,{p}}}: {}", cert.verdict));
        }
        if cert.resultant_valuation != Some(1) {
            return err(format!(
                "h_{{{k},1,{p}}}: v = {:?}, expected 1",
                cert.resultant_valuation
            ));
        }
        let abs = certify_absolute(&h, &cert).map_err(|e| e.to_string())?;
        if abs.verdict != Verdict::Pass {
            return err(format!("h_{{{k},1,{p}}} absolute: {}", abs.verdict));
        }
    }
    Ok(())
}

fn c4_lowest_part(cfg: &Config) -> Result<(), String> {
    for (p, k) in required_cases(cfg.stretch) {
        if k < 2 {
            continue;
        }
        let nf = build_normal_form(p as u32).map_err(|e| e.to_string())?;
        let hs = nf.hat_space();
        let h = h_k1p(&nf, k).map_err(|e| e.to_string())?;
        let lowest = h.homogeneous_part(Part::Lowest).map_err(|e| e.to_string())?;
        // p · (β + Σ_{i=1}^{p−2} α_i) · ∏_{i=2}^{p−2} (β − α_i)
        let mut want = Poly::var(hs, Var::B);
        for i in 1..=(p as u32 - 2) {
            want = want.checked_add(&Poly::var(hs, Var::A(i))).unwrap();
        }
        want = want.scale(&Rational::from_int(p as i64));
        for i in 2..=(p as u32 - 2) {
            let factor = Poly::var(hs, Var::B)
                .checked_sub(&Poly::var(hs, Var::A(i)))
                .unwrap();
            want = want.checked_mul(&factor).unwrap();
        }
        if lowest != want {
            return err(format!(
                "lowest(h_{{{k},1,{p}}}) = {}, expected {}",
                lowest.render(),
                want.render()
            ));
        }
    }
    Ok(())
}

fn c5_frobenius_congruence(_: &Config) -> Result<(), String> {
    for p in [3u64, 5, 7] {
        let nf = build_normal_form(p as u32).map_err(|e| e.to_string())?;
        let hs = nf.hat_space();
        let bma = ModPPoly::var(hs, p, Var::B)
            .sub(&ModPPoly::var(hs, p, Var::A(1)))
            .unwrap();
        for k in 1..=3u32 {
            let f = f_knd_modp(&nf, k, 1, p).map_err(|e| e.to_string())?;
            let want = bma.pow(p.pow(k));
            if f != want {
                return err(format!("f̂_{{{k},1,{p}}} mod {p} ≠ (β−α₁)^{{{p}^{k}}}"));
            }
        }
    }
    Ok(())
}

fn c6_h02p(_: &Config) -> Result<(), String> {
    for p in [5u64, 7, 11] {
        let nf = build_normal_form(p as u32).map_err(|e| e.to_string())?;
        let hs = nf.hat_space();
        let h = h_general(&nf, 0, 2).map_err(|e| e.to_string())?;
        let hp = h.reduce_mod_p(p).map_err(|e| e.to_string())?;
        let bma = ModPPoly::var(hs, p, Var::B)
            .sub(&ModPPoly::var(hs, p, Var::A(1)))
            .unwrap();
        let want = bma.pow(p - 1).add(&ModPPoly::one(hs, p)).unwrap();
        if hp != want {
            return err(format!("h_{{0,2,{p}}} mod {p} = {}", hp.render()));
        }
        if ModPPoly::is_power_of(&hp, &bma).is_some() {
            return err(format!("h_{{0,2,{p}}} mod {p} unexpectedly a power of β−α₁"));
        }
    }
    Ok(())
}

fn c7_mixed(_: &Config) -> Result<(), String> {
    let nf = build_normal_form(5).map_err(|e| e.to_string())?;
    let h = h_k1p(&nf, 2).map_err(|e| e.to_string())?;
    let hj = mixed_specialize(&h, 2).map_err(|e| e.to_string())?;
    let lin = Poly::parse(hj.space(), "b - a1").unwrap();
    let cert = certify_eisenstein("h^2_{2,1,5}", &hj, &lin, 5).map_err(|e| e.to_string())?;
    if cert.verdict != Verdict::Pass {
        // diagnose: the specialization acquires a β−α₁ factor, since
        // Res(h_{k,1,p}, β−α₁) = ±lowest(h)(β=α₁) carries (α₁−α₂)
        let mut detail = format!("mixed Eisenstein: {}", cert.verdict);
        if let Ok(q) = Poly::exact_divide(&hj, &lin) {
            detail.push_str("; h^2_{2,1,5} = (β−α₁)·q");
            if let Ok(qc) = certify_eisenstein("q", &q, &lin, 5) {
                detail.push_str(&format!(
                    ", quotient certificate {} (v = {:?})",
                    qc.verdict, qc.resultant_valuation
                ));
            }
        }
        return err(detail);
    }
    let abs = certify_absolute(&hj, &cert).map_err(|e| e.to_string())?;
    if abs.verdict != Verdict::Pass {
        return err(format!("mixed absolute: {}", abs.verdict));
    }
    let witness = Poly::parse(hj.space(), "b + 2*a1 + a3").unwrap();
    let found = abs.factors.iter().any(|(f, m)| {
        *m == 1 && Poly::parse(hj.space(), f).map_or(false, |fp| fp == witness)
    });
    if !found {
        return err(format!(
            "witness β+2α₁+α₃ not among simple factors: {:?}",
            abs.factors
        ));
    }
    Ok(())
}

fn c8_unicritical(cfg: &Config) -> Result<(), String> {
    for p in [3u64, 5, 7] {
        let r0 = r_knd(p as u32, 0, 1).map_err(|e| e.to_string())?.r;
        if r0.render() != "b" {
            return err(format!("R_{{0,1,{p}}} = {}", r0.render()));
        }
        let r1 = r_knd(p as u32, 1, 1).map_err(|e| e.to_string())?.r;
        if !r1.is_constant() {
            return err(format!("R_{{1,1,{p}}} nonconstant: {}", r1.render()));
        }
    }
    let r213 = r_knd(3, 2, 1).map_err(|e| e.to_string())?;
    if r213.r.render() != "b^4 + 3*b^2 + 3" {
        return err(format!("R_{{2,1,3}} = {}", r213.r.render()));
    }
    for (p, kmax) in [(3u64, 4u32), (5, 3), (7, 2)] {
        for k in 2..=kmax {
            let cert = certify_r_eisenstein(p, k).map_err(|e| e.to_string())?;
            if cert.verdict != Verdict::Pass {
                return err(format!("R_{{{k},1,{p}}} Eisenstein: {}", cert.verdict));
            }
            let rc = r_knd(p as u32, k, 1).map_err(|e| e.to_string())?;
            let roots = find_roots(&rc.r, cfg.seed).map_err(|e| e.to_string())?;
            if roots.len() != rc.r.degree() {
                return err(format!(
                    "R_{{{k},1,{p}}}: found {} roots of degree {}",
                    roots.len(),
                    rc.r.degree()
                ));
            }
            for root in &roots {
                let w = oracle_with_r(&rc.r, p as u32, k, 1, root, 1e-9, 1e-6)
                    .map_err(|e| e.to_string())?;
                if !w.pass || w.residual >= 1e-9 || w.margin.map_or(true, |m| m <= 1e-6) {
                    return err(format!("R_{{{k},1,{p}}} witness failed: {w:?}"));
                }
            }
        }
    }
    // negative controls: a removed-factor root fails strictness, a random
    // non-root fails the residual test
    let mut strict_fails = 0;
    for (_, _, f) in &r213.removed {
        for root in find_roots(f, cfg.seed).map_err(|e| e.to_string())? {
            let w = oracle_with_r(&r213.r, 3, 2, 1, &root, 1e-9, 1e-6)
                .map_err(|e| e.to_string())?;
            if w.pass {
                return err(format!("removed-factor root passed: {w:?}"));
            }
            strict_fails += 1;
        }
    }
    if strict_fails == 0 {
        return err("no removed-factor roots exercised".into());
    }
    let w = oracle_with_r(&r213.r, 3, 2, 1, &Complex::from_f64(0.7, 0.3), 1e-9, 1e-6)
        .map_err(|e| e.to_string())?;
    if w.pass || w.residual < 1e-9 {
        return err(format!("random non-root passed: {w:?}"));
    }
    Ok(())
}

fn c9_cross_check(_: &Config) -> Result<(), String> {
    for (k, p) in [(2u32, 3u64), (3, 3), (2, 5)] {
        let nf = build_normal_form(p as u32).map_err(|e| e.to_string())?;
        let cc = cross_check_specialization(&nf, k).map_err(|e| e.to_string())?;
        if !cc.divisible_by_r {
            return err(format!("h_{{{k},1,{p}}} specialization not divisible by R"));
        }
        if !cc.eisenstein.passed() {
            return err(format!(
                "h_{{{k},1,{p}}} specialization quotient not β-Eisenstein: {}",
                cc.eisenstein
            ));
        }
    }
    Ok(())
}

fn c10_rigidity(_: &Config) -> Result<(), String> {
    for (p, e) in [(3u64, 1u32), (5, 1), (3, 2)] {
        let d = (p as u32).pow(e);
        for i in 2..d {
            for k1 in 0..=2u32 {
                for ki in 0..=2u32 {
                    let rep = rigidity_check(p, e, k1, 1, i, ki, 1)
                        .map_err(|err| format!("(p,e,i,k1,ki)=({p},{e},{i},{k1},{ki}): {err}"))?;
                    if !rep.congruences_verified || !rep.coprime_mod_p {
                        return err(format!(
                            "rigidity failed at (p,e,i,k1,ki)=({p},{e},{i},{k1},{ki})"
                        ));
                    }
                }
            }
        }
    }
    // prime-power precursor: f̂_{k,1,9} ≡ (β−α₁)^{9^k} mod 3
    let nf9 = build_normal_form(9).map_err(|e| e.to_string())?;
    let hs = nf9.hat_space();
    let bma = ModPPoly::var(hs, 3, Var::B)
        .sub(&ModPPoly::var(hs, 3, Var::A(1)))
        .unwrap();
    for k in 0..=2u32 {
        let f = f_knd_modp(&nf9, k, 1, 3).map_err(|e| e.to_string())?;
        if f != bma.pow(9u64.pow(k)) {
            return err(format!("f̂_{{{k},1,9}} mod 3 ≠ (β−α₁)^{{9^{k}}}"));
        }
    }
    Ok(())
}

fn random_poly(
    rng: &mut ChaCha8Rng,
    space: &std::sync::Arc<VarSpace>,
    max_terms: usize,
    max_exp: u32,
    integer: bool,
) -> Poly {
    let arity = space.arity();
    let nterms = rng.gen_range(1..=max_terms);
    let mut terms = Vec::with_capacity(nterms);
    for _ in 0..nterms {
        let exps: Vec<u32> = (0..arity).map(|_| rng.gen_range(0..=max_exp)).collect();
        let num = rng.gen_range(-9i64..=9);
        let den = if integer { 1 } else { rng.gen_range(1i64..=4) };
        terms.push((
            Monomial::from_exponents(&exps),
            Rational::from_big(num.into(), den.into()),
        ));
    }
    Poly::from_terms(space, terms)
}

fn c11_properties(cfg: &Config) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let spaces = [VarSpace::unhatted(3), VarSpace::unhatted(4), VarSpace::unhatted(5)];

    // hat map commutes with composition in z (2500 cases)
    for case in 0..2500 {
        let space = &spaces[case % spaces.len()];
        let g = random_poly(&mut rng, space, 4, 2, false);
        let h = random_poly(&mut rng, space, 3, 2, false);
        let lhs = g.compose_in_z(&h).unwrap().substitute_hat();
        let rhs = g
            .substitute_hat()
            .compose_in_z(&h.substitute_hat())
            .unwrap();
        if lhs != rhs {
            return err(format!(
                "hat/composition case {case}: g = {}, h = {}",
                g.render(),
                h.render()
            ));
        }
    }

    // exact division inverts multiplication (2500 cases)
    for case in 0..2500 {
        let space = &spaces[case % spaces.len()];
        let a = random_poly(&mut rng, space, 5, 3, false);
        let b = random_poly(&mut rng, space, 4, 3, false);
        if b.is_zero() {
            continue;
        }
        let prod = a.checked_mul(&b).unwrap();
        let q = Poly::exact_divide(&prod, &b).map_err(|e| format!("case {case}: {e}"))?;
        if q != a {
            return err(format!("division case {case}: got {}", q.render()));
        }
    }

    // Sylvester/Bareiss resultant against direct evaluation for degree-one
    // divisors: Res(g, c·(β−ℓ)) = c^{deg g}·(−1)^{deg g}·g(ℓ)  (2500 cases)
    for case in 0..2500 {
        let space = &spaces[case % spaces.len()];
        let m = rng.gen_range(1..=3u32);
        let mut g = Poly::var(space, Var::B).pow(m);
        let mut low = random_poly(&mut rng, space, 3, 2, false);
        // keep deg_β(low) below m so g stays monic of degree m in β
        while low.deg_beta() >= m {
            low = low.substitute(Var::B, &Poly::int(space, 1)).unwrap();
        }
        g = g.checked_add(&low).unwrap();
        let ell = random_poly(&mut rng, space, 2, 1, false)
            .substitute(Var::B, &Poly::int(space, 0))
            .unwrap();
        let c = Rational::from_int(rng.gen_range(2..=5));
        let h = Poly::var(space, Var::B)
            .checked_sub(&ell)
            .unwrap()
            .scale(&c);
        let res = resultant_in_beta(&g, &h).map_err(|e| format!("case {case}: {e}"))?;
        let mut cpow = Rational::one();
        for _ in 0..m {
            cpow = cpow * c.clone();
        }
        let mut want = g.eval_beta(&ell).unwrap().scale(&cpow);
        if m % 2 == 1 {
            want = want.neg();
        }
        if res != want {
            return err(format!(
                "resultant case {case}: res = {}, want = {}",
                res.render(),
                want.render()
            ));
        }
    }

    // reduction mod p is a ring homomorphism (2500 cases)
    for case in 0..2500 {
        let space = &spaces[case % spaces.len()];
        let p = [3u64, 5, 7][case % 3];
        let a = random_poly(&mut rng, space, 5, 3, true);
        let b = random_poly(&mut rng, space, 5, 3, true);
        let sum = a.checked_add(&b).unwrap().reduce_mod_p(p).unwrap();
        let prod = a.checked_mul(&b).unwrap().reduce_mod_p(p).unwrap();
        let ap = a.reduce_mod_p(p).unwrap();
        let bp = b.reduce_mod_p(p).unwrap();
        if sum != ap.add(&bp).unwrap() || prod != ap.mul(&bp).unwrap() {
            return err(format!("mod-{p} homomorphism case {case} failed"));
        }
    }
    Ok(())
}

fn determinism_jobs() -> Vec<Vec<String>> {
    let to_args = |v: &[&str]| v.iter().map(|s| s.to_string()).collect();
    vec![
        to_args(&["hk1p", "--p", "3", "--k", "2"]),
        to_args(&["uni", "--p", "3", "--k", "2", "--seed", "42"]),
        to_args(&[
            "rigidity", "--p", "3", "--e", "2", "--k1", "1", "--n1", "1", "--i", "2", "--ki",
            "0", "--ni", "1",
        ]),
        to_args(&["modp", "--p", "5", "--k", "2"]),
    ]
}

fn c12_determinism(cfg: &Config) -> Result<(), String> {
    use clap::Parser;
    let base = &cfg.scratch;
    let _ = fs::remove_dir_all(base);
    for (j, job) in determinism_jobs().iter().enumerate() {
        let mut contents: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
        for run in 0..2 {
            let dir = base.join(format!("job{j}-run{run}"));
            let mut args = vec!["critlocus".to_string()];
            args.extend(job.iter().cloned());
            args.push("--out".into());
            args.push(dir.to_string_lossy().into_owned());
            let parsed = cli::Cli::try_parse_from(&args).map_err(|e| e.to_string())?;
            cli::execute(&parsed).map_err(|e| format!("job {j} run {run}: {e}"))?;
            let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(&dir)
                .map_err(|e| e.to_string())?
                .filter_map(|entry| {
                    let entry = entry.ok()?;
                    let name = entry.file_name().to_string_lossy().into_owned();
                    if name == "manifest.txt" {
                        return None; // timing fields are run-dependent
                    }
                    Some((name.clone(), fs::read(entry.path()).ok()?))
                })
                .collect();
            files.sort();
            contents.push(files);
        }
        if contents[0] != contents[1] {
            return err(format!("job {j} artifacts differ between reruns"));
        }
    }
    let _ = fs::remove_dir_all(base);
    Ok(())
}
