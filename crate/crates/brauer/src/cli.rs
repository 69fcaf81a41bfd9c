//! Command-line front door: parse systems and jobs, run the pipelines,
//! emit certificates and reports.
//!
//! Exit-code contract: 0 success, 2 parse error, 3 budget exceeded,
//! 4 verification failure; other runtime failures exit 1. Every
//! command that produces a certificate re-verifies it through the oracle
//! before exiting 0, and identical job + seed produce byte-identical
//! certificates.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::budget::Budget;
use crate::cert::{CertBuilder, Certificate, ClaimKind};
use crate::error::{Error, Result};
use crate::field::{nkd_exact, FqField};
use crate::job::{Command, JobSpec};
use crate::normalform::{self, Phi};
use crate::oracle;
use crate::ortho;
use crate::poly::FormTuple;
use crate::strength::{strength_exhaustive, tuple_strength, StrengthKind};
use crate::text;

#[derive(Parser)]
#[command(name = "brauer", version, about = "Rational points on systems of forms over finite fields, with replayable certificates")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Seed recorded in the certificate (reproducibility contract)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Search-step budget override
    #[arg(long, global = true)]
    budget_tries: Option<u64>,
    /// Dimension budget override
    #[arg(long, global = true)]
    budget_dim: Option<usize>,
    /// Cap on internal parallelism (accepted for compatibility; the
    /// pipelines currently run single-threaded)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Mirror the report as a JSON object
    #[arg(long, global = true)]
    json: bool,
    /// Write the certificate to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Find a nonzero common zero of the system
    Solve { system: PathBuf },
    /// Find a point of the zero locus where a target form is nonzero
    DensePoint {
        system: PathBuf,
        /// Target form line, e.g. "poly 3 1: [1] 1,0,0"
        #[arg(long)]
        g: Option<String>,
    },
    /// Construct the normal form W and its chart data
    NormalForm {
        system: PathBuf,
        #[arg(long)]
        g: Option<String>,
    },
    /// Strength of each form and of the tuple
    Strength { system: PathBuf },
    /// Minimal n with a nontrivial diagonal zero for every coefficient
    /// choice: `nkd GF(3) 2`
    Nkd { field: String, degree: u32 },
    /// Regularize the tuple and report the closure codimension bound
    Regularize {
        system: PathBuf,
        #[arg(long, default_value = "const:1")]
        phi: String,
    },
    /// Replay a certificate file
    Verify { certificate: PathBuf },
    /// Enumerate the full zero locus
    Enumerate { system: PathBuf },
    /// Execute a job file
    Run { job: PathBuf },
}

/// Lines of human-readable report plus an optional certificate.
pub struct Output {
    pub lines: Vec<String>,
    pub cert: Option<Certificate>,
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_system(path: &PathBuf) -> Result<(FqField, FormTuple)> {
    text::parse_system(&read(path)?)
}

fn cli_to_job(cli: &Cli) -> Result<JobSpec> {
    let (command, field, forms, g, phi, degree, input) = match &cli.cmd {
        Cmd::Solve { system } => {
            let (f, ft) = load_system(system)?;
            (Command::Solve, f, ft.forms().to_vec(), None, None, None, None)
        }
        Cmd::DensePoint { system, g } => {
            let (f, ft) = load_system(system)?;
            let g = g.as_ref().map(|s| text::parse_form(&f, s)).transpose()?;
            (Command::DensePoint, f, ft.forms().to_vec(), g, None, None, None)
        }
        Cmd::NormalForm { system, g } => {
            let (f, ft) = load_system(system)?;
            let g = g.as_ref().map(|s| text::parse_form(&f, s)).transpose()?;
            (Command::NormalForm, f, ft.forms().to_vec(), g, None, None, None)
        }
        Cmd::Strength { system } => {
            let (f, ft) = load_system(system)?;
            (Command::Strength, f, ft.forms().to_vec(), None, None, None, None)
        }
        Cmd::Nkd { field, degree } => {
            let f = text::parse_field(field)?;
            (Command::Nkd, f, Vec::new(), None, None, Some(*degree), None)
        }
        Cmd::Regularize { system, phi } => {
            let (f, ft) = load_system(system)?;
            Phi::parse(phi)?;
            (Command::Regularize, f, ft.forms().to_vec(), None, Some(phi.clone()), None, None)
        }
        Cmd::Verify { certificate } => {
            let f = FqField::new(2, 1).expect("placeholder field");
            (Command::Verify, f, Vec::new(), None, None, None, Some(certificate.display().to_string()))
        }
        Cmd::Enumerate { system } => {
            let (f, ft) = load_system(system)?;
            (Command::Enumerate, f, ft.forms().to_vec(), None, None, None, None)
        }
        Cmd::Run { job } => return JobSpec::parse(&read(job)?),
    };
    Ok(JobSpec {
        command,
        field,
        forms,
        g,
        seed: cli.seed,
        budget_tries: cli.budget_tries,
        budget_dim: cli.budget_dim,
        phi,
        degree,
        input,
        output: cli.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn seal(mut cert: Certificate, seed: u64) -> Result<Certificate> {
    cert.body.push(format!("seed: {seed}"));
    // exit 0 iff the certificate verifies: replay before reporting
    let report = oracle::verify_certificate(&cert)?;
    if let Some(name) = report.first_failure() {
        return Err(Error::MalformedCertificate(format!("self-check failed: {name}")));
    }
    Ok(cert)
}

/// Execute a job. Deterministic: the same job and seed produce the same
/// output lines and a byte-identical certificate.
pub fn execute(job: &JobSpec) -> Result<Output> {
    let field = &job.field;
    let budget: Budget = job.budget();
    let mut lines = Vec::new();
    let mut cert = None;
    match job.command {
        Command::Solve => {
            let ft = job.tuple()?;
            let point = ortho::brauer_solve(field, &ft, &budget)?;
            lines.push(format!("point: {}", text::render_point(field, &point)));
            let mut cb = CertBuilder::new(ClaimKind::NonzeroPoint);
            cb.kv("field", field.descriptor());
            cb.kv("nvars", ft.nvars());
            for f in ft.forms() {
                cb.kv("form", text::render_form(field, f));
            }
            cb.kv("point", text::render_point(field, &point));
            cb.check("point nonzero");
            for i in 0..ft.len() {
                cb.check(format!("vanish f{} at point", i + 1));
            }
            cert = Some(seal(cb.finish(), job.seed)?);
        }
        Command::DensePoint => {
            let ft = job.tuple()?;
            let g = job.g.clone().unwrap_or_else(|| normalform::one(ft.nvars()));
            let (point, c) = normalform::dense_point(field, &ft, &g, &budget)?;
            lines.push(format!("point: {}", text::render_point(field, &point)));
            lines.push(format!("g value: {}", field.render(g.eval(field, &point))));
            cert = Some(seal(c, job.seed)?);
        }
        Command::NormalForm => {
            let ft = job.tuple()?;
            let g = job.g.clone().unwrap_or_else(|| normalform::one(ft.nvars()));
            let nf = normalform::normal_form(field, &ft, &g, &budget)?;
            lines.push(format!("blocks: {}", nf.r()));
            lines.push(format!("trailing: {}", nf.m()));
            lines.push(format!("a: {}", text::render_point(field, &nf.a)));
            lines.push(format!("b: {}", text::render_point(field, &nf.b)));
            cert = Some(seal(normalform::normal_form_certificate(field, &ft, &g, &nf), job.seed)?);
        }
        Command::Strength => {
            let ft = job.tuple()?;
            for (i, f) in ft.forms().iter().enumerate() {
                let r = strength_exhaustive(field, f, &budget)?;
                let kind = match r.kind {
                    StrengthKind::Exact => "exact",
                    StrengthKind::LowerBound => "at least",
                };
                lines.push(format!("f{}: strength {} ({kind})", i + 1, r.value));
            }
            let r = tuple_strength(field, &ft, &budget)?;
            let kind = match r.kind {
                StrengthKind::Exact => "exact",
                StrengthKind::LowerBound => "at least",
            };
            lines.push(format!("tuple: strength {} ({kind})", r.value));
        }
        Command::Nkd => {
            let d = job
                .degree
                .ok_or_else(|| Error::parse_at(1, 1, "nkd requires a degree"))?;
            let n = nkd_exact(field, d, d as usize + 1)?;
            lines.push(format!("{n}"));
        }
        Command::Regularize => {
            let ft = job.tuple()?;
            let phi = Phi::parse(job.phi.as_deref().unwrap_or("const:1"))?;
            let (reg, bound, c) = normalform::closure_codim_bound(field, &ft, &phi, &budget)?;
            for gf in reg.tuple.forms() {
                lines.push(format!("g: {}", text::render_form(field, gf)));
            }
            lines.push(format!("codim bound: {bound}"));
            cert = Some(seal(c, job.seed)?);
        }
        Command::Verify => {
            let path = job
                .input
                .as_ref()
                .ok_or_else(|| Error::parse_at(1, 1, "verify requires an input certificate"))?;
            let textual = std::fs::read_to_string(path)?;
            let c = Certificate::parse(&textual)?;
            let report = oracle::verify_certificate(&c)?;
            for (name, ok) in &report.checks {
                lines.push(format!("check: {name} {}", if *ok { "ok" } else { "FAILED" }));
            }
            if !report.pass {
                let name = report.first_failure().unwrap_or("unknown").to_string();
                return Err(Error::MalformedCertificate(format!("failed check: {name}")));
            }
            lines.push("certificate ok".into());
        }
        Command::Enumerate => {
            let ft = job.tuple()?;
            let z = oracle::enumerate_zero_locus(field, &ft, &budget)?;
            lines.push(format!("points: {}", z.points.len()));
            for p in &z.points {
                lines.push(text::render_point(field, p));
            }
        }
    }
    Ok(Output { lines, cert })
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::InvalidField(_) | Error::Io(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        Error::MalformedCertificate(_) => 4,
        _ => 1,
    }
}

/// CLI entry point; returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let json = cli.json;
    let result = cli_to_job(&cli).and_then(|job| {
        let out = execute(&job)?;
        if let (Some(cert), Some(path)) = (&out.cert, &job.output) {
            std::fs::write(path, cert.to_text())?;
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            if json {
                let lines: Vec<String> = out.lines.iter().map(|l| format!("\"{}\"", json_escape(l))).collect();
                let cert = out
                    .cert
                    .as_ref()
                    .map(|c| format!("\"{}\"", json_escape(&c.to_text())))
                    .unwrap_or_else(|| "null".into());
                println!("{{\"status\":\"ok\",\"report\":[{}],\"certificate\":{}}}", lines.join(","), cert);
            } else {
                for l in &out.lines {
                    println!("{l}");
                }
            }
            0
        }
        Err(e) => {
            let code = exit_code(&e);
            if json {
                println!("{{\"status\":\"error\",\"code\":{code},\"message\":\"{}\"}}", json_escape(&e.to_string()));
            } else {
                eprintln!("error: {e}");
            }
            code
        }
    }
}
