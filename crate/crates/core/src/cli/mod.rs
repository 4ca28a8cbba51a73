//! Command-line front end.
//!
//! Exit codes: 0 decided or passed, 1 a violation or a verdict contradicting
//! `--expect`, 2 Unknown, 64 usage error.

mod expr;

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use expr::{evaluate, parse_form, parse_scalar};

use crate::error::{Error, Result};
use crate::ffield::{self, HypConfig, Verdict};
use crate::fields::FieldDesc;
use crate::forms::{format_opt, orth_opt, QForm};
use crate::localglobal as lg;
use crate::pfister::{self, Neighbor, PfisterSpec};
use crate::verify::{self, GenConfig, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "quadform", version, about = "Exact decision procedures for quadratic forms")]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Exit with 1 unless the verdict matches.
    #[arg(long, global = true, value_enum)]
    pub expect: Option<Expect>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Expect {
    Yes,
    No,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Is the form isotropic?
    Isotropy {
        #[arg(long, default_value = "Q")]
        field: String,
        form: String,
    },
    /// Witt index and anisotropic part.
    Witt {
        #[arg(long, default_value = "Q")]
        field: String,
        form: String,
    },
    /// Are two forms isometric?
    Isometric {
        #[arg(long, default_value = "Q")]
        field: String,
        a: String,
        b: String,
    },
    /// Is R a subform of Q?
    Subform {
        #[arg(long, default_value = "Q")]
        field: String,
        r: String,
        q: String,
    },
    /// Is the form similar to a Pfister form (or, with --in N, in I^N)?
    Pfister {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long = "in")]
        power: Option<usize>,
        form: String,
    },
    /// Divide a form by a Pfister form given as pf(a,...).
    Divide {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        pi: String,
        form: String,
    },
    /// Is the form a Pfister neighbour?
    Neighbor {
        #[arg(long, default_value = "Q")]
        field: String,
        form: String,
    },
    /// Is q hyperbolic over the function field of p?
    HypOver {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        p: String,
        /// Number of sampled H-values.
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Run property suites.
    Verify {
        /// Suite ids; all default suites when empty.
        suites: Vec<String>,
        /// Instances per suite (each suite has its own default).
        #[arg(long)]
        samples: Option<usize>,
        /// Restrict suites to one base field.
        #[arg(long)]
        field: Option<String>,
        /// Also run optional suites.
        #[arg(long)]
        all: bool,
        /// JSON-lines corpus: each line a form expression or {"field","q","p"}.
        #[arg(long)]
        corpus: Option<String>,
    },
    /// Evaluate an expression and print it in canonical form.
    ReplFreeEval {
        #[arg(long, default_value = "Q")]
        field: String,
        expr: String,
    },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(&cli) {
        Ok((code, stdout)) => Output { code, stdout, stderr: String::new() },
        Err(e) => {
            let code = match e {
                Error::UnsupportedField(_) | Error::SearchExhausted(_) => EXIT_UNKNOWN,
                _ => EXIT_USAGE,
            };
            Output { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn field(s: &str) -> Result<FieldDesc> {
    FieldDesc::parse(s)
}

/// Parse `pf(a,b,...)`.
pub fn parse_pfister(text: &str, f: &FieldDesc) -> Result<PfisterSpec> {
    let t = text.trim();
    let inner = t
        .strip_prefix("pf(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::Parse { pos: 0, msg: "expected pf(a,...)".into() })?;
    let mut slots = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = inner.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' | b'<' => depth += 1,
            b')' | b'>' => depth -= 1,
            b',' if depth == 0 => {
                slots.push(parse_scalar(&inner[start..i], f)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !inner[start..].trim().is_empty() {
        slots.push(parse_scalar(&inner[start..], f)?);
    } else if !slots.is_empty() {
        return Err(Error::Parse { pos: 3 + start, msg: "empty slot".into() });
    }
    PfisterSpec::from_elements(f, &slots)
}

fn verdict_code(yes: Option<bool>, expect: Option<Expect>) -> i32 {
    match (yes, expect) {
        (None, _) => EXIT_UNKNOWN,
        (Some(y), Some(Expect::Yes)) if !y => EXIT_VIOLATION,
        (Some(y), Some(Expect::No)) if y => EXIT_VIOLATION,
        _ => EXIT_OK,
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "Yes"
    } else {
        "No"
    }
}

fn emit(json_out: bool, v: Value, text: String) -> String {
    if json_out {
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    } else {
        text
    }
}

fn bool_verb(cli: &Cli, f: &FieldDesc, key: &str, ans: bool, mut v: Value) -> (i32, String) {
    v["field"] = json!(f.to_string());
    v[key] = json!(ans);
    v["verdict"] = json!(yes_no(ans));
    (verdict_code(Some(ans), cli.expect), emit(cli.json, v, format!("{}\n", yes_no(ans))))
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    match &cli.command {
        Command::Isotropy { field: fs, form } => {
            let f = field(fs)?;
            let q = parse_form(form, &f)?;
            let iso = lg::is_isotropic(&q)?;
            Ok(bool_verb(cli, &f, "isotropic", iso, json!({ "form": q.to_string() })))
        }
        Command::Witt { field: fs, form } => {
            let f = field(fs)?;
            let q = parse_form(form, &f)?;
            let w = lg::witt_decompose(&q)?;
            let an = format_opt(&w.anisotropic_part);
            let v = json!({
                "field": f.to_string(),
                "form": q.to_string(),
                "index": w.index,
                "anisotropic_part": an,
            });
            Ok((EXIT_OK, emit(cli.json, v, format!("index {}\nanisotropic part {an}\n", w.index))))
        }
        Command::Isometric { field: fs, a, b } => {
            let f = field(fs)?;
            let (a, b) = (parse_form(a, &f)?, parse_form(b, &f)?);
            let ans = lg::is_isometric(&a, &b)?;
            Ok(bool_verb(cli, &f, "isometric", ans, json!({ "a": a.to_string(), "b": b.to_string() })))
        }
        Command::Subform { field: fs, r, q } => {
            let f = field(fs)?;
            let (r, q) = (parse_form(r, &f)?, parse_form(q, &f)?);
            let ans = lg::is_subform(&r, &q)?;
            Ok(bool_verb(cli, &f, "subform", ans, json!({ "r": r.to_string(), "q": q.to_string() })))
        }
        Command::Pfister { field: fs, power, form } => {
            let f = field(fs)?;
            let q = parse_form(form, &f)?;
            if let Some(n) = power {
                let ans = pfister::in_in(&q, *n)?;
                return Ok(bool_verb(cli, &f, "member", ans, json!({ "form": q.to_string(), "n": n })));
            }
            let s = pfister::similar_to_pfister(&q)?;
            let mut v = json!({ "field": f.to_string(), "form": q.to_string(), "verdict": yes_no(s.is_some()) });
            let text = match &s {
                Some(s) => {
                    v["scalar"] = json!(f.format_class(&s.scalar));
                    v["spec"] = json!(s.spec.format(&f));
                    format!("Yes\n{} * q = {}\n", f.format_class(&s.scalar), s.spec.format(&f))
                }
                None => "No\n".into(),
            };
            Ok((verdict_code(Some(s.is_some()), cli.expect), emit(cli.json, v, text)))
        }
        Command::Divide { field: fs, pi, form } => {
            let f = field(fs)?;
            let q = parse_form(form, &f)?;
            let pi = parse_pfister(pi, &f)?;
            let r = pfister::divide_by_pfister(&q, &pi)?;
            let mut v = json!({
                "field": f.to_string(),
                "form": q.to_string(),
                "pi": pi.format(&f),
                "verdict": yes_no(r.is_some()),
            });
            let text = match &r {
                Some(r) => {
                    v["quotient"] = json!(r.to_string());
                    format!("Yes\nquotient {r}\n")
                }
                None => "No\n".into(),
            };
            Ok((verdict_code(Some(r.is_some()), cli.expect), emit(cli.json, v, text)))
        }
        Command::Neighbor { field: fs, form } => {
            let f = field(fs)?;
            let q = parse_form(form, &f)?;
            let n = pfister::neighbor_of(&q)?;
            let mut v = json!({ "field": f.to_string(), "form": q.to_string() });
            let (ans, text) = match &n {
                Neighbor::Yes { spec, scalar } => {
                    v["verdict"] = json!("Yes");
                    v["spec"] = json!(spec.format(&f));
                    v["scalar"] = json!(f.format_class(scalar));
                    (Some(true), format!("Yes\n{} * q is a subform of {}\n", f.format_class(scalar), spec.format(&f)))
                }
                Neighbor::No => {
                    v["verdict"] = json!("No");
                    (Some(false), "No\n".into())
                }
                Neighbor::Unknown => {
                    v["verdict"] = json!("Unknown");
                    (None, "Unknown\n".into())
                }
            };
            Ok((verdict_code(ans, cli.expect), emit(cli.json, v, text)))
        }
        Command::HypOver { field: fs, q, p, samples } => {
            let f = field(fs)?;
            let (q, p) = (parse_form(q, &f)?, parse_form(p, &f)?);
            let cfg = HypConfig { h_samples: *samples, seed: cli.seed, ..HypConfig::default() };
            let d = ffield::hyperbolic_over_ff(&q, &p, &cfg)?;
            let mut v = d.to_json();
            v["field"] = json!(f.to_string());
            v["q"] = json!(q.to_string());
            v["p"] = json!(p.to_string());
            let ans = match d.verdict {
                Verdict::Yes => Some(true),
                Verdict::No => Some(false),
                Verdict::Unknown => None,
            };
            let mut text = format!("{:?}\n{}", d.verdict, d.certificate.kind());
            let payload = &v["certificate"]["payload"];
            if let Some(m) = payload.as_object() {
                for (k, x) in m {
                    let _ = write!(text, " {k}={}", x.as_str().unwrap_or_default());
                }
            }
            text.push('\n');
            Ok((verdict_code(ans, cli.expect), emit(cli.json, v, text)))
        }
        Command::Verify { suites, samples, field: fs, all, corpus } => {
            let base = fs.as_deref().map(field).transpose()?;
            let mut reports: Vec<SuiteReport> = Vec::new();
            if let Some(path) = corpus {
                reports.push(run_corpus(path, base.as_ref(), cli.seed)?);
            }
            let ids: Vec<String> = if suites.is_empty() && corpus.is_none() {
                let mut v: Vec<String> = verify::DEFAULT_SUITES.iter().map(|s| s.to_string()).collect();
                if *all {
                    v.extend(verify::OPTIONAL_SUITES.iter().map(|s| s.to_string()));
                }
                v
            } else {
                suites.clone()
            };
            for id in &ids {
                let mut cfg = GenConfig::new(cli.seed, samples.unwrap_or_else(|| verify::default_samples(id)));
                cfg.field = base.clone();
                reports.push(verify::run_suite(id, &cfg)?);
            }
            let code = if reports.iter().all(|r| r.passed()) { EXIT_OK } else { EXIT_VIOLATION };
            let v = if reports.len() == 1 { json!(reports[0]) } else { json!(reports) };
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{:<14} {:?} instances={} skipped={} replayed={} violations={}",
                    r.suite,
                    r.status,
                    r.instances,
                    r.skipped,
                    r.certificates_replayed,
                    r.violations.len()
                );
                for viol in &r.violations {
                    let _ = writeln!(text, "  #{} {} {}", viol.instance, viol.input, viol.message);
                }
            }
            Ok((code, emit(cli.json, v, text)))
        }
        Command::ReplFreeEval { field: fs, expr } => {
            let f = field(fs)?;
            let s = evaluate(expr, &f)?;
            Ok((EXIT_OK, emit(cli.json, json!({ "field": f.to_string(), "value": s }), format!("{s}\n"))))
        }
    }
}

/// Check every corpus line: a lone form gets a Witt-decomposition
/// consistency check, a `{q, p}` pair a replayed hyperbolicity decision.
fn run_corpus(path: &str, default_field: Option<&FieldDesc>, seed: u64) -> Result<SuiteReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::UnsupportedInput(format!("{path}: {e}")))?;
    let mut report = SuiteReport {
        suite: "corpus".into(),
        seed,
        instances: 0,
        skipped: 0,
        certificates_replayed: 0,
        status: verify::SuiteStatus::Pass,
        violations: Vec::new(),
    };
    let fallback = default_field.cloned().unwrap_or(FieldDesc::Rationals);
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let v: Value =
            serde_json::from_str(line).map_err(|e| Error::Parse { pos: 0, msg: format!("{path}:{}: {e}", i + 1) })?;
        report.instances += 1;
        let mut violation = |msg: String| {
            report.violations.push(verify::Violation { instance: i, input: v.clone(), message: msg });
        };
        match &v {
            Value::String(s) => {
                let q = parse_form(s, &fallback)?;
                let w = lg::witt_decompose(&q)?;
                let h = if w.index == 0 { None } else { Some(QForm::hyperbolic(&fallback, w.index)?) };
                let rebuilt = orth_opt(w.anisotropic_part.clone(), h)?;
                let an_ok = match &w.anisotropic_part {
                    Some(a) => !lg::is_isotropic(a)?,
                    None => true,
                };
                if !an_ok || !rebuilt.map_or(Ok(false), |r| lg::is_isometric(&q, &r))? {
                    violation(format!("q is not q_an + {} H", w.index));
                }
            }
            Value::Object(m) => {
                let f = match m.get("field").and_then(Value::as_str) {
                    Some(s) => field(s)?,
                    None => fallback.clone(),
                };
                let get = |k: &str| -> Result<QForm> {
                    let s = m
                        .get(k)
                        .and_then(Value::as_str)
                        .ok_or_else(|| Error::UnsupportedInput(format!("corpus line {} lacks `{k}`", i + 1)))?;
                    parse_form(s, &f)
                };
                let (q, p) = (get("q")?, get("p")?);
                let d = ffield::hyperbolic_over_ff(&q, &p, &HypConfig { seed, ..HypConfig::default() })?;
                if d.verdict == Verdict::Unknown {
                    report.skipped += 1;
                } else {
                    report.certificates_replayed += 1;
                    if !ffield::replay(&q, &p, &d)? {
                        violation(format!("certificate {} failed replay", d.certificate.kind()));
                    }
                }
            }
            _ => return Err(Error::UnsupportedInput(format!("corpus line {} is not a string or object", i + 1))),
        }
    }
    if !report.violations.is_empty() {
        report.status = verify::SuiteStatus::Fail;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Output {
        run(std::iter::once("quadform").chain(args.iter().copied()))
    }

    #[test]
    fn witt_text() {
        let o = go(&["witt", "--field", "Q((x))", "<1,-1> + x*<1,1>"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout, "index 1\nanisotropic part <x,x>\n");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(go(&["isotropy", "<1,1>"]).code, 0);
        assert_eq!(go(&["isotropy", "--expect", "yes", "<1,1>"]).code, 1);
        assert_eq!(go(&["isotropy", "--expect", "yes", "<1,-1>"]).code, 0);
        assert_eq!(go(&["isotropy", "<1,"]).code, 64);
        assert_eq!(go(&["frobnicate"]).code, 64);
        assert_eq!(go(&["verify", "nope"]).code, 64);
        assert_eq!(go(&["neighbor", "--field", "Q((x))", "<1,1,1,x,2*x,3>"]).code, 2);
    }

    #[test]
    fn pfister_verbs() {
        assert_eq!(go(&["pfister", "<2,2,2,2>"]).stdout, "Yes\n2 * q = pf(1,1)\n");
        assert_eq!(go(&["divide", "--pi", "pf(1)", "<1,1,2,2>"]).code, 0);
        assert_eq!(go(&["pfister", "--in", "2", "<1,1>"]).stdout, "No\n");
        assert_eq!(go(&["repl-free-eval", "pf(2,3) + <4>"]).stdout, "<1,3,2,6,1>\n");
        assert!(parse_pfister("pf(1,", &FieldDesc::Rationals).is_err());
        assert_eq!(parse_pfister("pf()", &FieldDesc::Rationals).unwrap().fold(), 0);
    }
}
