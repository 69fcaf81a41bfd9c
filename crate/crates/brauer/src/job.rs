//! Job specifications: a line-oriented description of one run (command,
//! field, forms, budgets, seed, output). Parse/print round-trips are
//! stable and unknown fields are rejected, so a job file is a complete,
//! reproducible record of an invocation.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::FqField;
use crate::poly::{Form, FormTuple};
use crate::text;

pub const HEADER: &str = "brauer-job v1";

/// The operation a job runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    DensePoint,
    NormalForm,
    Strength,
    Nkd,
    Regularize,
    Verify,
    Enumerate,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::DensePoint => "dense-point",
            Command::NormalForm => "normal-form",
            Command::Strength => "strength",
            Command::Nkd => "nkd",
            Command::Regularize => "regularize",
            Command::Verify => "verify",
            Command::Enumerate => "enumerate",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Some(match s {
            "solve" => Command::Solve,
            "dense-point" => Command::DensePoint,
            "normal-form" => Command::NormalForm,
            "strength" => Command::Strength,
            "nkd" => Command::Nkd,
            "regularize" => Command::Regularize,
            "verify" => Command::Verify,
            "enumerate" => Command::Enumerate,
            _ => return None,
        })
    }
}

/// One parsed job. Field and forms are kept canonicalized; `render`
/// reproduces the exact input of a canonical file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JobSpec {
    pub command: Command,
    pub field: FqField,
    pub forms: Vec<Form>,
    pub g: Option<Form>,
    pub seed: u64,
    pub budget_tries: Option<u64>,
    pub budget_dim: Option<usize>,
    pub phi: Option<String>,
    pub degree: Option<u32>,
    /// Input path (certificate file for `verify`).
    pub input: Option<String>,
    /// Output path for the certificate artifact.
    pub output: Option<String>,
}

impl JobSpec {
    pub fn tuple(&self) -> Result<FormTuple> {
        let nvars = self.forms.first().map_or(0, |f| f.nvars());
        FormTuple::new(nvars, self.forms.clone())
    }

    pub fn budget(&self) -> Budget {
        let mut b = Budget::default();
        if let Some(t) = self.budget_tries {
            b.tries = t;
        }
        if let Some(d) = self.budget_dim {
            b.dim = d;
        }
        b
    }

    /// Canonical text, stable under `parse` round-trips.
    pub fn render(&self) -> String {
        let mut out = format!("{HEADER}\ncommand: {}\nfield: {}\n", self.command.as_str(), self.field.descriptor());
        for f in &self.forms {
            out.push_str(&format!("form: {}\n", text::render_form(&self.field, f)));
        }
        if let Some(g) = &self.g {
            out.push_str(&format!("g: {}\n", text::render_form(&self.field, g)));
        }
        out.push_str(&format!("seed: {}\n", self.seed));
        if let Some(t) = self.budget_tries {
            out.push_str(&format!("budget-tries: {t}\n"));
        }
        if let Some(d) = self.budget_dim {
            out.push_str(&format!("budget-dim: {d}\n"));
        }
        if let Some(p) = &self.phi {
            out.push_str(&format!("phi: {p}\n"));
        }
        if let Some(d) = self.degree {
            out.push_str(&format!("degree: {d}\n"));
        }
        if let Some(i) = &self.input {
            out.push_str(&format!("input: {i}\n"));
        }
        if let Some(o) = &self.output {
            out.push_str(&format!("output: {o}\n"));
        }
        out
    }

    /// Parse a job file; unknown keys are rejected with their position.
    pub fn parse(textual: &str) -> Result<JobSpec> {
        let mut lines = textual.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim() == HEADER => {}
            _ => return Err(Error::parse_at(1, 1, format!("expected `{HEADER}` header"))),
        }
        let mut command = None;
        let mut field: Option<FqField> = None;
        let mut forms: Vec<Form> = Vec::new();
        let mut g = None;
        let mut seed = None;
        let mut budget_tries = None;
        let mut budget_dim = None;
        let mut phi = None;
        let mut degree = None;
        let mut input = None;
        let mut output = None;
        for (i, raw) in lines {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once(": ")
                .ok_or_else(|| Error::parse_at(lineno, 1, "expected `key: value`"))?;
            let dup = |name: &str| Error::parse_at(lineno, 1, format!("duplicate `{name}`"));
            match key {
                "command" => {
                    if command.is_some() {
                        return Err(dup(key));
                    }
                    command = Some(
                        Command::parse(value)
                            .ok_or_else(|| Error::parse_at(lineno, 10, format!("unknown command `{value}`")))?,
                    );
                }
                "field" => {
                    if field.is_some() {
                        return Err(dup(key));
                    }
                    field = Some(text::parse_field_at(value, lineno)?);
                }
                "form" => {
                    let f = field
                        .as_ref()
                        .ok_or_else(|| Error::parse_at(lineno, 1, "form before field"))?;
                    forms.push(text::parse_form_at(f, value, lineno)?);
                }
                "g" => {
                    if g.is_some() {
                        return Err(dup(key));
                    }
                    let f = field
                        .as_ref()
                        .ok_or_else(|| Error::parse_at(lineno, 1, "g before field"))?;
                    g = Some(text::parse_form_at(f, value, lineno)?);
                }
                "seed" => {
                    if seed.is_some() {
                        return Err(dup(key));
                    }
                    seed = Some(value.parse().map_err(|_| Error::parse_at(lineno, 7, "bad seed"))?);
                }
                "budget-tries" => {
                    if budget_tries.is_some() {
                        return Err(dup(key));
                    }
                    budget_tries =
                        Some(value.parse().map_err(|_| Error::parse_at(lineno, 15, "bad budget"))?);
                }
                "budget-dim" => {
                    if budget_dim.is_some() {
                        return Err(dup(key));
                    }
                    budget_dim =
                        Some(value.parse().map_err(|_| Error::parse_at(lineno, 13, "bad budget"))?);
                }
                "phi" => {
                    if phi.is_some() {
                        return Err(dup(key));
                    }
                    crate::normalform::Phi::parse(value)
                        .map_err(|_| Error::parse_at(lineno, 6, format!("bad phi `{value}`")))?;
                    phi = Some(value.to_string());
                }
                "degree" => {
                    if degree.is_some() {
                        return Err(dup(key));
                    }
                    degree = Some(value.parse().map_err(|_| Error::parse_at(lineno, 9, "bad degree"))?);
                }
                "input" => {
                    if input.is_some() {
                        return Err(dup(key));
                    }
                    input = Some(value.to_string());
                }
                "output" => {
                    if output.is_some() {
                        return Err(dup(key));
                    }
                    output = Some(value.to_string());
                }
                _ => return Err(Error::parse_at(lineno, 1, format!("unknown field `{key}`"))),
            }
        }
        Ok(JobSpec {
            command: command.ok_or_else(|| Error::parse_at(1, 1, "missing `command`"))?,
            field: field.ok_or_else(|| Error::parse_at(1, 1, "missing `field`"))?,
            forms,
            g,
            seed: seed.unwrap_or(0),
            budget_tries,
            budget_dim,
            phi,
            degree,
            input,
            output,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "brauer-job v1\ncommand: solve\nfield: GF(3)\nform: poly 3 2: [1] 0,0,2; [1] 0,2,0; [1] 2,0,0\nseed: 7\nbudget-tries: 1000\n";
        let job = JobSpec::parse(text).unwrap();
        assert_eq!(job.render(), text);
        assert_eq!(JobSpec::parse(&job.render()).unwrap(), job);
    }

    #[test]
    fn unknown_field_rejected() {
        let text = "brauer-job v1\ncommand: solve\nfield: GF(3)\nmystery: 1\n";
        assert!(matches!(JobSpec::parse(text), Err(Error::Parse { line: 4, .. })));
        assert!(JobSpec::parse("nope\n").is_err());
        let dup = "brauer-job v1\ncommand: solve\ncommand: nkd\nfield: GF(3)\n";
        assert!(JobSpec::parse(dup).is_err());
    }
}
