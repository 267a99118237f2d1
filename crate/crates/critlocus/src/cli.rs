//! Command-line surface: runs the constructions, writes canonical-text
//! polynomials, certificate blocks, reports and a run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::certify::{certify_absolute, certify_eisenstein, CertifyError, Verdict};
use crate::dynamics::{
    self, build_normal_form, f_knd, f_knd_modp, h_general, h_k1p, mixed_specialize,
    rigidity_check, DynError,
};
use crate::mpoly::{MpolyError, Poly, Var};
use crate::unicritical::{certify_r_eisenstein, find_roots, oracle_with_r, r_knd, UniError};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CERT_FAIL: i32 = 1;
pub const EXIT_FALSIFIED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid parameters: {0}")]
    BadParameter(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Dyn(#[from] DynError),
    #[error(transparent)]
    Mpoly(#[from] MpolyError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Uni(#[from] UniError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Dyn(DynError::IdentityFalsified { .. }) => EXIT_FALSIFIED,
            _ => EXIT_ERROR,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "critlocus",
    version,
    about = "preperiodicity polynomials of marked critical points and their irreducibility certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// directory for output artifacts
    #[arg(long, global = true, env = "CRITLOCUS_OUT", default_value = "critlocus-out")]
    pub out: PathBuf,
}

/// Degree selection: --d directly, or --p with --e for d = p^e.
#[derive(Args, Debug, Clone)]
pub struct DegreeArgs {
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
}

impl DegreeArgs {
    pub fn degree(&self) -> Result<u32, CliError> {
        match (self.d, self.p) {
            (Some(d), None) => Ok(d),
            (None, Some(p)) => (p as u32)
                .checked_pow(self.e)
                .ok_or_else(|| CliError::BadParameter("p^e overflows".into())),
            _ => Err(CliError::BadParameter(
                "give exactly one of --d or --p (with optional --e)".into(),
            )),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Reduced normal form f and its hatted image f̂
    Normalform {
        #[command(flatten)]
        deg: DegreeArgs,
    },
    /// Marked orbit point f̂^k(α₁)
    Orbit {
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long)]
        k: u32,
    },
    /// f̂_{k,n,d} = f̂^{k+n}(α₁) − f̂^k(α₁)
    Fknd {
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// h_{k,1,p} with Eisenstein and absolute certificates
    Hk1p {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// h_{k,n,d} by gcd-removal
    Hgeneral {
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Mixed-critical specialization h^j_{k,1,p} with certificates
    Mixed {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        j: u32,
    },
    /// Certificates for h_{k,1,p} only (no polynomial artifact)
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
    },
    /// Unicritical R_{k,1,p}: polynomial, β-Eisenstein certificate, and
    /// preperiodicity witnesses for every numerically found root
    Uni {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol_eq: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol_strict: f64,
    },
    /// Weak-Thurston-rigidity mod-p report at d = p^e
    Rigidity {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        e: u32,
        #[arg(long)]
        k1: u32,
        #[arg(long, default_value_t = 1)]
        n1: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        ki: u32,
        #[arg(long, default_value_t = 1)]
        ni: u32,
    },
    /// Native mod-p reduction of f̂_{k,n,d}
    Modp {
        #[command(flatten)]
        deg: DegreeArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Run the acceptance battery
    Suite {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// include the stretch certificate cases (minutes of runtime)
        #[arg(long)]
        stretch: bool,
    },
}

/// A finished job: artifacts to persist plus the verdict-derived exit code.
pub struct JobOutput {
    pub files: Vec<(String, String)>,
    pub summary: Vec<(String, String)>,
    pub exit: i32,
}

/// Runs one command, writes its artifacts and manifest under `out`, and
/// returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Dyn(DynError::IdentityFalsified { context, dump }) = &e {
                eprintln!("falsified identity: {context}\n{dump}");
            }
            e.exit_code()
        }
    }
}

/// Like `run` but surfacing errors; used by tests and the suite.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let started = Instant::now();
    let output = dispatch(&cli.command, &cli.out)?;
    persist(&cli.out, &cli.command, output, started)
}

fn dispatch(cmd: &Command, out_dir: &Path) -> Result<JobOutput, CliError> {
    match cmd {
        Command::Normalform { deg } => {
            let d = deg.degree()?;
            let nf = build_normal_form(d)?;
            Ok(JobOutput {
                files: vec![
                    (format!("f_{d}.poly"), poly_file(nf.f())),
                    (format!("fhat_{d}.poly"), poly_file(nf.fhat())),
                ],
                summary: vec![("d".into(), d.to_string())],
                exit: EXIT_PASS,
            })
        }
        Command::Orbit { deg, k } => {
            let d = deg.degree()?;
            let nf = build_normal_form(d)?;
            let orbit = nf.orbit_point(*k);
            Ok(JobOutput {
                files: vec![(format!("orbit_{k}_{d}.poly"), poly_file(&orbit))],
                summary: vec![
                    ("d".into(), d.to_string()),
                    ("k".into(), k.to_string()),
                    ("terms".into(), orbit.num_terms().to_string()),
                ],
                exit: EXIT_PASS,
            })
        }
        Command::Fknd { deg, k, n } => {
            let d = deg.degree()?;
            let nf = build_normal_form(d)?;
            let f = f_knd(&nf, *k, *n, true)?;
            Ok(JobOutput {
                files: vec![(format!("f_{k}_{n}_{d}.poly"), poly_file(&f))],
                summary: vec![
                    ("d".into(), d.to_string()),
                    ("k".into(), k.to_string()),
                    ("n".into(), n.to_string()),
                    ("terms".into(), f.num_terms().to_string()),
                ],
                exit: EXIT_PASS,
            })
        }
        Command::Hk1p { p, k } => {
            let nf = build_normal_form(*p as u32)?;
            let h = h_k1p(&nf, *k)?;
            let (files, exit) = certificate_files(&h, *p, &format!("h_{{{k},1,{p}}}"))?;
            let mut all = vec![(format!("h_{k}_1_{p}.poly"), poly_file(&h))];
            all.extend(files);
            Ok(JobOutput {
                files: all,
                summary: vec![
                    ("p".into(), p.to_string()),
                    ("k".into(), k.to_string()),
                    ("terms".into(), h.num_terms().to_string()),
                ],
                exit,
            })
        }
        Command::Hgeneral { deg, k, n } => {
            let d = deg.degree()?;
            let nf = build_normal_form(d)?;
            let h = h_general(&nf, *k, *n)?;
            Ok(JobOutput {
                files: vec![(format!("h_{k}_{n}_{d}.poly"), poly_file(&h))],
                summary: vec![
                    ("d".into(), d.to_string()),
                    ("k".into(), k.to_string()),
                    ("n".into(), n.to_string()),
                    ("terms".into(), h.num_terms().to_string()),
                ],
                exit: EXIT_PASS,
            })
        }
        Command::Mixed { p, k, j } => {
            let nf = build_normal_form(*p as u32)?;
            let h = h_k1p(&nf, *k)?;
            let hj = mixed_specialize(&h, *j)?;
            let (files, exit) =
                certificate_files(&hj, *p, &format!("h^{j}_{{{k},1,{p}}}"))?;
            let mut all = vec![(format!("h_{k}_1_{p}_j{j}.poly"), poly_file(&hj))];
            all.extend(files);
            Ok(JobOutput {
                files: all,
                summary: vec![
                    ("p".into(), p.to_string()),
                    ("k".into(), k.to_string()),
                    ("j".into(), j.to_string()),
                ],
                exit,
            })
        }
        Command::Certify { p, k } => {
            let nf = build_normal_form(*p as u32)?;
            let h = h_k1p(&nf, *k)?;
            let (files, exit) = certificate_files(&h, *p, &format!("h_{{{k},1,{p}}}"))?;
            Ok(JobOutput {
                files,
                summary: vec![("p".into(), p.to_string()), ("k".into(), k.to_string())],
                exit,
            })
        }
        Command::Uni {
            p,
            k,
            seed,
            tol_eq,
            tol_strict,
        } => {
            let rc = r_knd(*p as u32, *k, 1)?;
            let cert = certify_r_eisenstein(*p, *k)?;
            let mut files = vec![
                (format!("R_{k}_1_{p}.poly"), poly_file(&rc.r.to_poly())),
                ("R_eisenstein.cert".into(), cert.to_text()),
                ("R_eisenstein.json".into(), cert.to_json()),
            ];
            let mut exit = if cert.verdict.passed() {
                EXIT_PASS
            } else {
                EXIT_CERT_FAIL
            };
            let mut report = String::new();
            let mut witnesses = Vec::new();
            if !rc.r.is_constant() {
                let roots = find_roots(&rc.r, *seed)?;
                for root in &roots {
                    let w = oracle_with_r(&rc.r, *p as u32, *k, 1, root, *tol_eq, *tol_strict)?;
                    if !w.pass {
                        exit = EXIT_CERT_FAIL;
                    }
                    let _ = writeln!(
                        report,
                        "root: {} residual: {:e} margin: {} pass: {}",
                        w.root,
                        w.residual,
                        w.margin.map_or("none".into(), |m| format!("{m:e}")),
                        w.pass
                    );
                    witnesses.push(w);
                }
            }
            files.push(("witnesses.report".into(), report));
            files.push((
                "witnesses.json".into(),
                serde_json::to_string_pretty(&witnesses).expect("serializable"),
            ));
            Ok(JobOutput {
                files,
                summary: vec![
                    ("p".into(), p.to_string()),
                    ("k".into(), k.to_string()),
                    ("degR".into(), rc.r.degree().to_string()),
                    ("seed".into(), seed.to_string()),
                ],
                exit,
            })
        }
        Command::Rigidity {
            p,
            e,
            k1,
            n1,
            i,
            ki,
            ni,
        } => {
            let rep = rigidity_check(*p, *e, *k1, *n1, *i, *ki, *ni)?;
            let pass = rep.congruences_verified && rep.coprime_mod_p;
            let mut text = String::new();
            let _ = writeln!(text, "p: {}", rep.p);
            let _ = writeln!(text, "e: {}", rep.e);
            let _ = writeln!(text, "k1: {} n1: {}", rep.k1, rep.n1);
            let _ = writeln!(text, "i: {} ki: {} ni: {}", rep.i, rep.ki, rep.ni);
            let _ = writeln!(text, "difference_marked: {}", rep.difference_marked);
            let _ = writeln!(text, "difference_other: {}", rep.difference_other);
            let _ = writeln!(text, "highest_marked: {}", rep.highest_marked);
            let _ = writeln!(text, "highest_other: {}", rep.highest_other);
            let _ = writeln!(text, "congruences_verified: {}", rep.congruences_verified);
            let _ = writeln!(text, "coprime_mod_p: {}", rep.coprime_mod_p);
            Ok(JobOutput {
                files: vec![
                    ("rigidity.report".into(), text),
                    (
                        "rigidity.json".into(),
                        serde_json::to_string_pretty(&rep).expect("serializable"),
                    ),
                ],
                summary: vec![("p".into(), p.to_string()), ("e".into(), e.to_string())],
                exit: if pass { EXIT_PASS } else { EXIT_CERT_FAIL },
            })
        }
        Command::Modp { deg, k, n } => {
            let d = deg.degree()?;
            let p = deg
                .p
                .or_else(|| dynamics::odd_prime_power(d).map(|(p, _)| p))
                .ok_or_else(|| CliError::BadParameter("d is not an odd prime power".into()))?;
            let nf = build_normal_form(d)?;
            let f = f_knd_modp(&nf, *k, *n, p)?;
            Ok(JobOutput {
                files: vec![(
                    format!("f_{k}_{n}_{d}_mod{p}.poly"),
                    format!("{}\n", f.render()),
                )],
                summary: vec![
                    ("d".into(), d.to_string()),
                    ("p".into(), p.to_string()),
                    ("k".into(), k.to_string()),
                    ("n".into(), n.to_string()),
                ],
                exit: EXIT_PASS,
            })
        }
        Command::Suite {
            jobs,
            seed,
            stretch,
        } => {
            let cfg = crate::battery::Config {
                seed: *seed,
                stretch: *stretch,
                jobs: (*jobs).max(1),
                scratch: out_dir.join("suite-scratch"),
            };
            let outcomes = crate::battery::run_all(&cfg);
            let mut text = String::new();
            let mut exit = EXIT_PASS;
            for o in &outcomes {
                let line = o.line();
                println!("{line}");
                let _ = writeln!(text, "{line}");
                if !o.passed {
                    exit = EXIT_CERT_FAIL;
                }
            }
            Ok(JobOutput {
                files: vec![("suite.report".into(), text)],
                summary: vec![
                    ("criteria".into(), outcomes.len().to_string()),
                    ("seed".into(), seed.to_string()),
                    ("stretch".into(), stretch.to_string()),
                ],
                exit,
            })
        }
    }
}

fn poly_file(p: &Poly) -> String {
    format!("{}\n", p.render())
}

/// Eisenstein + absolute certificate artifacts for a monic-in-β target
/// against h = β − α₁, in both text and structured form.
fn certificate_files(
    g: &Poly,
    p: u64,
    target: &str,
) -> Result<(Vec<(String, String)>, i32), CliError> {
    let lin = Poly::var(g.space(), Var::B)
        .checked_sub(&Poly::var(g.space(), Var::A(1)))?;
    let eis = certify_eisenstein(target, g, &lin, p)?;
    let mut files = vec![
        ("eisenstein.cert".into(), eis.to_text()),
        ("eisenstein.json".into(), eis.to_json()),
    ];
    let mut exit = if eis.verdict.passed() {
        EXIT_PASS
    } else {
        EXIT_CERT_FAIL
    };
    if eis.verdict.passed() {
        let abs = certify_absolute(g, &eis)?;
        if abs.verdict != Verdict::Pass {
            exit = EXIT_CERT_FAIL;
        }
        files.push(("absolute.cert".into(), abs.to_text()));
        files.push(("absolute.json".into(), abs.to_json()));
    }
    Ok((files, exit))
}

fn persist(
    out_dir: &Path,
    cmd: &Command,
    output: JobOutput,
    started: Instant,
) -> Result<i32, CliError> {
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    for (name, contents) in &output.files {
        let path = out_dir.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    let mut manifest = String::new();
    let _ = writeln!(manifest, "command: {}", command_name(cmd));
    for (k, v) in &output.summary {
        let _ = writeln!(manifest, "param: {k}={v}");
    }
    let _ = writeln!(manifest, "version: {}", env!("CARGO_PKG_VERSION"));
    for (name, _) in &output.files {
        let _ = writeln!(manifest, "artifact: {name}");
    }
    let _ = writeln!(manifest, "exit: {}", output.exit);
    // timing is informational only and excluded from determinism checks
    let _ = writeln!(manifest, "elapsed_ms: {}", started.elapsed().as_millis());
    let path = out_dir.join("manifest.txt");
    fs::write(&path, manifest).map_err(|source| CliError::Io { path, source })?;
    Ok(output.exit)
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Normalform { .. } => "normalform",
        Command::Orbit { .. } => "orbit",
        Command::Fknd { .. } => "fknd",
        Command::Hk1p { .. } => "hk1p",
        Command::Hgeneral { .. } => "hgeneral",
        Command::Mixed { .. } => "mixed",
        Command::Certify { .. } => "certify",
        Command::Uni { .. } => "uni",
        Command::Rigidity { .. } => "rigidity",
        Command::Modp { .. } => "modp",
        Command::Suite { .. } => "suite",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_to(dir: &Path, args: &[&str]) -> i32 {
        let mut full = vec!["critlocus"];
        full.extend_from_slice(args);
        full.push("--out");
        let out = dir.to_str().unwrap();
        full.push(out);
        let cli = Cli::try_parse_from(full).expect("args parse");
        execute(&cli).expect("job runs")
    }

    #[test]
    fn hk1p_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let code = run_to(dir.path(), &["hk1p", "--p", "3", "--k", "2"]);
        assert_eq!(code, EXIT_PASS);
        for name in [
            "h_2_1_3.poly",
            "eisenstein.cert",
            "eisenstein.json",
            "absolute.cert",
            "absolute.json",
            "manifest.txt",
        ] {
            assert!(dir.path().join(name).exists(), "missing {name}");
        }
        let cert = fs::read_to_string(dir.path().join("eisenstein.cert")).unwrap();
        assert!(cert.contains("verdict: pass"));
    }

    #[test]
    fn uni_artifacts_golden() {
        let dir = tempfile::tempdir().unwrap();
        let code = run_to(dir.path(), &["uni", "--p", "3", "--k", "2"]);
        assert_eq!(code, EXIT_PASS);
        let poly = fs::read_to_string(dir.path().join("R_2_1_3.poly")).unwrap();
        assert_eq!(poly, "b^4 + 3*b^2 + 3\n");
        let report = fs::read_to_string(dir.path().join("witnesses.report")).unwrap();
        assert_eq!(report.lines().count(), 4);
        assert!(report.lines().all(|l| l.ends_with("pass: true")));
    }

    #[test]
    fn rigidity_artifact() {
        let dir = tempfile::tempdir().unwrap();
        let code = run_to(
            dir.path(),
            &[
                "rigidity", "--p", "3", "--e", "2", "--k1", "1", "--n1", "1", "--i", "2",
                "--ki", "0", "--ni", "1",
            ],
        );
        assert_eq!(code, EXIT_PASS);
        let rep = fs::read_to_string(dir.path().join("rigidity.report")).unwrap();
        assert!(rep.contains("coprime_mod_p: true"));
    }

    #[test]
    fn reruns_are_byte_identical() {
        let d1 = tempfile::tempdir().unwrap();
        let d2 = tempfile::tempdir().unwrap();
        for d in [&d1, &d2] {
            assert_eq!(run_to(d.path(), &["hk1p", "--p", "3", "--k", "3"]), EXIT_PASS);
            assert_eq!(run_to(d.path(), &["uni", "--p", "5", "--k", "2"]), EXIT_PASS);
        }
        for entry in fs::read_dir(d1.path()).unwrap() {
            let name = entry.unwrap().file_name();
            if name == "manifest.txt" {
                continue;
            }
            let a = fs::read(d1.path().join(&name)).unwrap();
            let b = fs::read(d2.path().join(&name)).unwrap();
            assert_eq!(a, b, "artifact {name:?} differs between reruns");
        }
    }

    #[test]
    fn degree_args_validation() {
        let cli = Cli::try_parse_from(["critlocus", "normalform", "--p", "3", "--e", "2"])
            .unwrap();
        match &cli.command {
            Command::Normalform { deg } => assert_eq!(deg.degree().unwrap(), 9),
            _ => unreachable!(),
        }
        let bad = Cli::try_parse_from(["critlocus", "normalform"]).unwrap();
        match &bad.command {
            Command::Normalform { deg } => assert!(deg.degree().is_err()),
            _ => unreachable!(),
        }
    }
}
