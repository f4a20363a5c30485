use std::fs;
use std::io::Read;

use ejet_core::classify::{Certificate, Verdict};
use ejet_core::jet::replay;
use ejet_core::normal_form::reduce;
use ejet_core::rational::to_exact_string;
use ejet_core::series::decompose;
use ejet_core::verify::{verify_normal_form, Chart};
use ejet_core::{classify, TransformStep};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::parse::{parse_germ, GermExpr, ParseError};
use crate::{json as enc, Cli, Command, Input};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", .0.message)]
    Parse(ParseError),
    #[error("{0}")]
    Core(ejet_core::Error),
    #[error("{0}")]
    Input(String),
}

impl From<ejet_core::Error> for CliError {
    fn from(e: ejet_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_internal() => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }

    fn to_json(&self) -> Value {
        let mut err = Map::new();
        let kind = match self {
            CliError::Parse(p) => {
                err.insert("line".into(), json!(p.line));
                err.insert("column".into(), json!(p.column));
                "parse"
            }
            CliError::Core(e) if e.is_internal() => "internal",
            CliError::Core(_) | CliError::Input(_) => "input",
        };
        err.insert("kind".into(), json!(kind));
        err.insert("message".into(), json!(self.to_string()));
        json!({"error": err, "version": VERSION})
    }
}

/// What the binary prints, and its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// A successful result; `code` is nonzero only for a failed verification.
struct Done {
    value: Value,
    code: i32,
}

type Job<'a> = dyn Fn(&GermExpr) -> Result<Done, CliError> + Sync + 'a;

fn with_header(command: &str, germ: &GermExpr, mut body: Map<String, Value>) -> Value {
    body.insert("command".into(), json!(command));
    body.insert("input".into(), json!(germ.source.trim()));
    body.insert("order".into(), json!(germ.order));
    body.insert("version".into(), json!(VERSION));
    Value::Object(body)
}

/// The decision path in words.
pub fn explain(v: &Verdict, cert: &Certificate) -> Vec<String> {
    let mut out = Vec::new();
    match (&cert.cube_coefficient, &cert.cube_root_form) {
        (Some(c), Some(l)) => {
            out.push(format!(
                "p3 = c*L^3 with c = {}, L = ({})*x1 + ({})*x2, so m_S1(p3) = 3",
                to_exact_string(c),
                to_exact_string(l.a()),
                to_exact_string(l.b())
            ));
            out.push("rotate_p3 takes L to x2, so p3 becomes c*x2^3".into());
        }
        _ => {
            out.push(format!("m_S1(p3) = {} != 3: no E-type criterion can hold", cert.m_s1_p3));
            return out;
        }
    }
    if let (Some(m), Some(r)) = (cert.common_mult_in_p4, &cert.res_p3_p4) {
        out.push(format!(
            "x2 divides the rotated p4 with multiplicity {m}; Res(p3,p4) = {}",
            to_exact_string(r)
        ));
    }
    match v {
        Verdict::E6(s) => out.push(format!(
            "E6 criterion: m_S1(p3) = 3 and Res(p3,p4) != 0; the x1^4 coefficient {} fixes the sign {}",
            to_exact_string(&cert.normalized_jet.coeff(4, 0)),
            s.as_str()
        )),
        Verdict::E7 => out.push("E7 criterion: L is a simple linear factor of p4".into()),
        _ => {
            let r = cert.res_p3_p5.as_ref().map(to_exact_string).unwrap_or_default();
            out.push(format!("L divides p4 at least twice; Res(p3,p5) = {r}"));
            if *v == Verdict::E8 {
                out.push("E8 criterion: double common factor in p4 and Res(p3,p5) != 0".into());
            } else {
                out.push("Res(p3,p5) = 0: none of the E6, E7, E8 criteria applies".into());
            }
        }
    }
    out
}

fn cmd_classify(germ: &GermExpr, explain_path: bool) -> Result<Done, CliError> {
    let (v, cert) = classify(&germ.jet)?;
    let mut body = Map::new();
    enc::verdict_fields(&v, &mut body);
    body.insert("certificate".into(), enc::certificate(&cert));
    if explain_path {
        body.insert("explain".into(), json!(explain(&v, &cert)));
    }
    Ok(Done { value: with_header("classify", germ, body), code: EXIT_OK })
}

fn cmd_reduce(germ: &GermExpr, w: u32, chain: Option<&[TransformStep]>) -> Result<Done, CliError> {
    let mut body = Map::new();
    if let Some(steps) = chain {
        body.insert("steps_replayed".into(), json!(steps.len()));
        body.insert("reduced_jet".into(), enc::jet(&replay(&germ.jet, steps)));
        return Ok(Done { value: with_header("reduce", germ, body), code: EXIT_OK });
    }
    let (v, cert) = classify(&germ.jet)?;
    let red = reduce(v, &cert, w)?;
    enc::verdict_fields(&v, &mut body);
    if let Value::Object(m) = enc::reduction(&red) {
        body.extend(m);
    }
    Ok(Done { value: with_header("reduce", germ, body), code: EXIT_OK })
}

fn cmd_decompose(germ: &GermExpr, w: u32, reduced: bool) -> Result<Done, CliError> {
    let mut body = Map::new();
    let target = if reduced {
        let (v, cert) = classify(&germ.jet)?;
        let red = reduce(v, &cert, w)?;
        enc::verdict_fields(&v, &mut body);
        red.prenormal
    } else {
        germ.jet.clone()
    };
    let d = decompose(&target, w)?;
    body.insert("jet".into(), enc::jet(&target));
    if let Value::Object(m) = enc::decomposition(&d) {
        body.extend(m);
    }
    Ok(Done { value: with_header("decompose", germ, body), code: EXIT_OK })
}

fn cmd_verify(germ: &GermExpr, w: u32, radius: f64, samples: usize, seed: u64) -> Result<Done, CliError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(CliError::Input(format!("radius must be positive, got {radius}")));
    }
    if samples == 0 {
        return Err(CliError::Input("samples must be positive".into()));
    }
    let (v, cert) = classify(&germ.jet)?;
    let red = reduce(v, &cert, w)?;
    let chart = Chart::new(&red)?;
    let rep = verify_normal_form(&germ.jet, &red.steps, &chart, radius, samples, seed);
    let mut body = Map::new();
    enc::verdict_fields(&v, &mut body);
    body.insert("series_order".into(), json!(red.series_order));
    body.insert("seed".into(), json!(seed));
    if let Value::Object(m) = enc::report(&rep) {
        body.extend(m);
    }
    let code = if rep.pass { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok(Done { value: with_header("verify", germ, body), code })
}

fn render(v: &Value, pretty: bool) -> String {
    let s = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    s.expect("JSON values always serialize")
}

fn read_source(germ: &str) -> Result<String, CliError> {
    if germ != "-" {
        return Ok(germ.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
    Ok(s)
}

fn read_chain(path: &std::path::Path) -> Result<Vec<TransformStep>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("reading {}: {e}", path.display())))?;
    // the file may hold batch output; the first object with a chain wins
    let value: Value = match serde_json::from_str(&text) {
        Ok(v) => v,
        Err(_) => text
            .lines()
            .find_map(|l| serde_json::from_str(l).ok())
            .ok_or_else(|| CliError::Input(format!("{} is not JSON", path.display())))?,
    };
    enc::decode_chain(&value).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn one(input: &Input, job: &Job<'_>) -> Output {
    let result = read_source(input.germ.as_deref().unwrap_or("-"))
        .and_then(|src| parse_germ(&src, input.order).map_err(CliError::Parse))
        .and_then(|g| job(&g));
    match result {
        Ok(done) => Output {
            stdout: render(&done.value, input.pretty) + "\n",
            stderr: String::new(),
            code: done.code,
        },
        Err(e) => Output {
            stdout: String::new(),
            stderr: render(&e.to_json(), input.pretty) + "\n",
            code: e.exit_code(),
        },
    }
}

fn batch(input: &Input, path: &std::path::Path, job: &Job<'_>) -> Output {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let e = CliError::Input(format!("reading {}: {e}", path.display()));
            return Output { stdout: String::new(), stderr: render(&e.to_json(), false) + "\n", code: e.exit_code() };
        }
    };
    let entries: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let results: Vec<(Value, i32)> = entries
        .par_iter()
        .map(|&(line, src)| {
            let r = parse_germ(src, input.order)
                .map_err(|mut p| {
                    p.line = line;
                    CliError::Parse(p)
                })
                .and_then(|g| job(&g));
            let (mut v, code) = match r {
                Ok(d) => (d.value, d.code),
                Err(e) => (e.to_json(), e.exit_code()),
            };
            v.as_object_mut().expect("objects only").insert("line".into(), json!(line));
            (v, code)
        })
        .collect();
    let mut stdout = String::new();
    for (v, _) in &results {
        stdout.push_str(&render(v, input.pretty));
        stdout.push('\n');
    }
    let code = results.iter().map(|r| r.1).max().unwrap_or(EXIT_OK);
    Output { stdout, stderr: String::new(), code }
}

fn dispatch(input: &Input, job: &Job<'_>) -> Output {
    match &input.batch {
        Some(path) => batch(input, path, job),
        None => one(input, job),
    }
}

pub fn run(cli: &Cli) -> Output {
    match &cli.command {
        Command::Classify { input, explain } => dispatch(input, &|g| cmd_classify(g, *explain)),
        Command::Reduce { input, chain } => {
            let steps = match chain.as_deref().map(read_chain).transpose() {
                Ok(s) => s,
                Err(e) => {
                    return Output {
                        stdout: String::new(),
                        stderr: render(&e.to_json(), input.pretty) + "\n",
                        code: e.exit_code(),
                    }
                }
            };
            let w = input.series_order();
            dispatch(input, &|g| cmd_reduce(g, w, steps.as_deref()))
        }
        Command::Decompose { input, reduced } => {
            let w = input.series_order();
            dispatch(input, &|g| cmd_decompose(g, w, *reduced))
        }
        Command::Verify { input, radius, samples, seed } => {
            let w = input.series_order();
            dispatch(input, &|g| cmd_verify(g, w, *radius, *samples, *seed))
        }
    }
}

