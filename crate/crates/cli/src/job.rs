//! Line-oriented job files.
//!
//! ```text
//! # comment
//! [ring]
//! vars = x, y
//! field = Q
//! [module]
//! relations = x^2*y, x^3
//! [ideal]
//! q = maximal
//! [sequence]
//! a = y^2 - x^3, y^2 + x^3
//! b = y^2 - x^3
//! [command]
//! name = multiplicity
//! [options]
//! n_lo = 1
//! n_hi = 8
//! ```

use std::path::Path;

use hsmult_core::ring::FieldKind;

use crate::error::CliError;

/// Truncation and range settings from the `[options]` section.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct JobOptions {
    pub n_lo: Option<i64>,
    pub n_hi: Option<i64>,
    pub trunc_start: Option<u32>,
    pub trunc_step: Option<u32>,
    pub trunc_max: Option<u32>,
    pub agree_window: Option<u32>,
}

/// A parsed job. Polynomials stay as text until the ring is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobFile {
    pub vars: Vec<String>,
    pub field: FieldKind,
    pub relations: Vec<String>,
    /// `None` is the maximal ideal.
    pub q: Option<Vec<String>>,
    pub a: Vec<String>,
    pub b: Option<Vec<String>>,
    pub f: Option<String>,
    pub g: Option<String>,
    pub command: Option<String>,
    pub options: JobOptions,
}

impl JobFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {}", path.display(), e)))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut section: Option<String> = None;
        let mut vars = None;
        let mut field = FieldKind::Rationals;
        let mut relations = Vec::new();
        let mut q = None;
        let mut a = Vec::new();
        let mut b = None;
        let mut f = None;
        let mut g = None;
        let mut command = None;
        let mut options = JobOptions::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |msg: String| CliError::Syntax { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err("unterminated section header".into()))?
                    .trim();
                match name {
                    "ring" | "module" | "ideal" | "sequence" | "command" | "options" => section = Some(name.into()),
                    other => return Err(err(format!("unknown section [{}]", other))),
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let sec = section.as_deref().ok_or_else(|| err("key outside of any section".into()))?;
            match (sec, key) {
                ("ring", "vars") => {
                    let vs = list(value);
                    if vs.is_empty() {
                        return Err(err("no variables declared".into()));
                    }
                    vars = Some(vs);
                }
                ("ring", "field") => field = parse_field(value).map_err(err)?,
                ("module", "relations") => relations = list(value),
                ("ideal", "q") => q = if value == "maximal" { None } else { Some(nonempty(value, key).map_err(err)?) },
                ("sequence", "a") => a = list(value),
                ("sequence", "b") => b = Some(nonempty(value, key).map_err(err)?),
                ("sequence", "f") => f = Some(value.to_string()),
                ("sequence", "g") => g = Some(value.to_string()),
                ("command", "name") => command = Some(value.to_string()),
                ("options", k) => set_option(&mut options, k, value).map_err(err)?,
                (s, k) => return Err(err(format!("unknown key `{}` in [{}]", k, s))),
            }
        }
        let vars = vars.ok_or(CliError::Syntax {
            line: 0,
            msg: "missing `vars` in [ring]".into(),
        })?;
        Ok(JobFile {
            vars,
            field,
            relations,
            q,
            a,
            b,
            f,
            g,
            command,
            options,
        })
    }
}

fn list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn nonempty(value: &str, key: &str) -> Result<Vec<String>, String> {
    let v = list(value);
    if v.is_empty() {
        Err(format!("`{}` needs at least one polynomial", key))
    } else {
        Ok(v)
    }
}

/// `Q`, `Fp p` or `Fp:p`.
pub fn parse_field(value: &str) -> Result<FieldKind, String> {
    if value == "Q" {
        return Ok(FieldKind::Rationals);
    }
    let p = value
        .strip_prefix("Fp")
        .map(|r| r.trim_start_matches(':').trim())
        .ok_or_else(|| format!("unknown field `{}`", value))?;
    let p: u64 = p.parse().map_err(|_| format!("bad characteristic `{}`", p))?;
    FieldKind::prime(p).ok_or_else(|| format!("{} is not a supported prime", p))
}

fn set_option(o: &mut JobOptions, key: &str, value: &str) -> Result<(), String> {
    let int = || value.parse::<i64>().map_err(|_| format!("`{}` expects an integer", key));
    let nat = || value.parse::<u32>().map_err(|_| format!("`{}` expects a non-negative integer", key));
    match key {
        "n_lo" => o.n_lo = Some(int()?),
        "n_hi" => o.n_hi = Some(int()?),
        "trunc_start" => o.trunc_start = Some(nat()?),
        "trunc_step" => o.trunc_step = Some(nat()?),
        "trunc_max" => o.trunc_max = Some(nat()?),
        "agree_window" => o.agree_window = Some(nat()?),
        other => return Err(format!("unknown option `{}`", other)),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_job() {
        let job = JobFile::parse(
            "[ring]\nvars = x, y\nfield = Fp:101\n[module]\nrelations = x^2*y, x^3 # rels\n\n[ideal]\nq = x^2, y\n\
             [sequence]\na = y\n[command]\nname = chi\n[options]\nn_hi = 9\n",
        )
        .unwrap();
        assert_eq!(job.vars, ["x", "y"]);
        assert_eq!(job.field, FieldKind::Prime(101));
        assert_eq!(job.relations, ["x^2*y", "x^3"]);
        assert_eq!(job.q, Some(vec!["x^2".to_string(), "y".to_string()]));
        assert_eq!(job.command.as_deref(), Some("chi"));
        assert_eq!(job.options.n_hi, Some(9));
    }

    #[test]
    fn reports_line_numbers() {
        let e = JobFile::parse("[ring]\nvars = x\n[bogus]\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { line: 3, .. }));
        let e = JobFile::parse("[ring]\nvars = x\nfield = R\n").unwrap_err();
        assert!(matches!(e, CliError::Syntax { line: 3, .. }));
        assert!(JobFile::parse("[module]\nrelations =\n").is_err());
    }

    #[test]
    fn maximal_and_empty_relations() {
        let job = JobFile::parse("[ring]\nvars = x,y\n[module]\nrelations =\n[ideal]\nq = maximal\n").unwrap();
        assert!(job.relations.is_empty() && job.q.is_none());
        assert_eq!(parse_field("Fp 7"), Ok(FieldKind::Prime(7)));
        assert!(parse_field("Fp 8").is_err());
    }
}
