//! Request handling for the `apw` command-line tool.
//!
//! Every command reads one JSON document and writes one JSON report. Reports
//! echo the solver options they were produced with, so a report together with
//! its input is enough to reproduce it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use apw_core::factorization::{self, FactorizationReport};
use apw_core::geometry::{self, MaskKind, SpectralMask};
use apw_core::json::{
    parse_document, FactorizationJson, HalfspaceJson, MaskJson, MatrixJson, PolyJson, SCHEMA_VERSION,
};
use apw_core::toepcorona::{self, CoronaSolution};
use apw_core::{ApMatrix, ApwError, ErrorClass, Halfspace, SolverOptions};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CORPUS_MISMATCH: i32 = 7;

pub fn exit_code(class: ErrorClass) -> i32 {
    match class {
        ErrorClass::Parse => 2,
        ErrorClass::Domain => 3,
        ErrorClass::UnsupportedRank => 4,
        ErrorClass::NotInvertible => 5,
        ErrorClass::Infeasible => 6,
    }
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Parse => "parse",
        ErrorClass::Domain => "domain",
        ErrorClass::UnsupportedRank => "unsupported_rank",
        ErrorClass::NotInvertible => "not_invertible",
        ErrorClass::Infeasible => "infeasible",
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Project,
    Factorize,
    Augment,
    Toeplitz,
    Gram,
    Corona,
    Parametrize,
    Verify,
    Corpus,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Analyze,
        Command::Project,
        Command::Factorize,
        Command::Augment,
        Command::Toeplitz,
        Command::Gram,
        Command::Corona,
        Command::Parametrize,
        Command::Verify,
        Command::Corpus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Project => "project",
            Command::Factorize => "factorize",
            Command::Augment => "augment",
            Command::Toeplitz => "toeplitz",
            Command::Gram => "gram",
            Command::Corona => "corona",
            Command::Parametrize => "parametrize",
            Command::Verify => "verify",
            Command::Corpus => "corpus",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command `{s}`"))
    }
}

/// Option overrides from the command line; they win over the request file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub cutoff: Option<usize>,
    pub tail_tol: Option<f64>,
    pub grid_density: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesJson {
    pub tail_tol: Option<f64>,
    pub grid_density: Option<usize>,
    pub seed: Option<u64>,
}

fn resolve_options(cutoff: Option<usize>, tol: &Option<TolerancesJson>, ov: &Overrides) -> SolverOptions {
    let d = SolverOptions::default();
    let t = tol.clone().unwrap_or_default();
    SolverOptions {
        cutoff: ov.cutoff.or(cutoff).unwrap_or(d.cutoff),
        tail_tol: ov.tail_tol.or(t.tail_tol).unwrap_or(d.tail_tol),
        grid_density: ov.grid_density.or(t.grid_density).unwrap_or(d.grid_density),
        seed: ov.seed.or(t.seed).unwrap_or(d.seed),
    }
}

/// A failed request: error class plus the message and stage, if any.
#[derive(Debug)]
pub struct RequestError(pub ApwError);

impl From<ApwError> for RequestError {
    fn from(e: ApwError) -> Self {
        RequestError(e)
    }
}

type Outcome = Result<Value, RequestError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnalyzeRequest {
    apw_schema: u32,
    f: PolyJson,
    cutoff: Option<usize>,
    tolerances: Option<TolerancesJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProjectRequest {
    apw_schema: u32,
    f: PolyJson,
    #[serde(rename = "S")]
    s: HalfspaceJson,
    mask: MaskJson,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorizeRequest {
    apw_schema: u32,
    #[serde(rename = "G")]
    g: MatrixJson,
    #[serde(rename = "S")]
    s: HalfspaceJson,
    pivot: Option<usize>,
    tolerances: Option<TolerancesJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ToeplitzRequest {
    apw_schema: u32,
    #[serde(rename = "F")]
    f: MatrixJson,
    #[serde(rename = "S")]
    s: HalfspaceJson,
    cutoff: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoronaRequest {
    apw_schema: u32,
    #[serde(rename = "A")]
    a: MatrixJson,
    #[serde(rename = "B")]
    b: MatrixJson,
    gamma: f64,
    #[serde(rename = "S")]
    s: HalfspaceJson,
    cutoff: Option<usize>,
    tolerances: Option<TolerancesJson>,
    /// Only used by `parametrize`.
    #[serde(rename = "G")]
    g: Option<MatrixJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyRequest {
    apw_schema: u32,
    #[serde(rename = "G")]
    g: MatrixJson,
    #[serde(rename = "S")]
    s: HalfspaceJson,
    factorization: FactorizationJson,
    tolerances: Option<TolerancesJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub value: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusInstance {
    pub name: String,
    pub command: Command,
    pub request: Value,
    #[serde(default)]
    pub expected: BTreeMap<String, ExpectedValue>,
    /// Error class the instance must fail with, if any.
    #[serde(default)]
    pub expected_error: Option<String>,
    #[serde(default)]
    pub expected_status: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub apw_schema: u32,
    pub instances: Vec<CorpusInstance>,
}

fn check_schema(v: u32) -> Result<(), ApwError> {
    if v != SCHEMA_VERSION {
        return Err(ApwError::Parse(format!("unsupported apw_schema {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, ApwError> {
    parse_document(text)
}

fn options_json(o: &SolverOptions) -> Value {
    serde_json::to_value(o).expect("options serialize")
}

fn envelope(command: Command, opts: Option<&SolverOptions>, body: Value) -> Value {
    let mut map = Map::new();
    map.insert("apw_schema".into(), json!(SCHEMA_VERSION));
    map.insert("command".into(), json!(command.name()));
    if let Some(o) = opts {
        map.insert("options".into(), options_json(o));
    }
    if let Value::Object(b) = body {
        map.extend(b);
    }
    Value::Object(map)
}

/// Runs one request document and returns the report plus the exit code.
pub fn run_request(command: Command, text: &str, ov: &Overrides) -> (Value, i32) {
    let result = match command {
        Command::Analyze => analyze(text, ov),
        Command::Project => project(text),
        Command::Factorize => factorize(text, ov),
        Command::Augment => augment(text, ov),
        Command::Toeplitz => toeplitz(text, ov),
        Command::Gram => gram(text, ov),
        Command::Corona => corona(text, ov),
        Command::Parametrize => parametrize(text, ov),
        Command::Verify => verify(text, ov),
        Command::Corpus => return corpus(text, ov),
    };
    match result {
        Ok(v) => {
            let code = v
                .get("status")
                .and_then(Value::as_str)
                .map_or(EXIT_OK, status_exit_code);
            (v, code)
        }
        Err(RequestError(e)) => (error_report(command, &e), exit_code(e.class())),
    }
}

fn status_exit_code(status: &str) -> i32 {
    match status {
        "not_invertible" | "completion_failed" => exit_code(ErrorClass::NotInvertible),
        "unsupported_rank" => exit_code(ErrorClass::UnsupportedRank),
        _ => EXIT_OK,
    }
}

pub fn error_report(command: Command, e: &ApwError) -> Value {
    let stage = match e {
        ApwError::Stage { stage, .. } => Value::String((*stage).to_string()),
        _ => Value::Null,
    };
    envelope(
        command,
        None,
        json!({
            "error": {
                "class": class_name(e.class()),
                "stage": stage,
                "message": e.root().to_string(),
            }
        }),
    )
}

fn analyze(text: &str, ov: &Overrides) -> Outcome {
    let req: AnalyzeRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let opts = resolve_options(req.cutoff, &req.tolerances, ov);
    let f = req.f.to_poly()?;
    let spectrum: Vec<Vec<i64>> = f.spectrum().into_iter().map(|l| l.0).collect();
    let mean = f.bohr_mean();
    Ok(envelope(
        Command::Analyze,
        Some(&opts),
        json!({
            "spectrum": spectrum,
            "wiener_norm": f.wiener_norm(),
            "bohr_mean": mean.re,
            "bohr_mean_im": mean.im,
            "sup_norm_estimate": f.sup_norm_estimate(opts.grid_density, opts.seed),
        }),
    ))
}

fn project(text: &str) -> Outcome {
    let req: ProjectRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let f = req.f.to_poly()?;
    let s = req.s.to_halfspace()?;
    let kind = MaskKind::from_name(&req.mask.kind)
        .filter(|k| *k != MaskKind::Predicate)
        .ok_or_else(|| ApwError::Parse(format!("unknown mask kind `{}`", req.mask.kind)))?;
    let out = geometry::project(&f, &SpectralMask::new(kind, s)?)?;
    Ok(envelope(
        Command::Project,
        None,
        json!({ "mask": kind.name(), "projected": PolyJson::from_poly(&out) }),
    ))
}

fn report_json(rep: &FactorizationReport) -> Value {
    json!({
        "status": rep.status.name(),
        "factorization": rep.factorization.as_ref().map(FactorizationJson::from_factorization),
        "diagnostics": rep.diagnostics,
        "certificates": rep.certificates,
    })
}

fn factor_request(text: &str, ov: &Overrides) -> Result<(ApMatrix, Halfspace, SolverOptions, FactorizationReport), ApwError> {
    let req: FactorizeRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let opts = resolve_options(None, &req.tolerances, ov);
    let g = req.g.to_matrix()?;
    let s = req.s.to_halfspace()?;
    let rep = match (g.shape(), req.pivot) {
        ((1, n), Some(_)) if n > 1 => factorization::row_factorize(&g, req.pivot, &s, &opts)?,
        ((m, 1), Some(_)) if m > 1 => factorization::column_factorize(&g, req.pivot, &s, &opts)?,
        _ => factorization::factorize(&g, &s, &opts)?,
    };
    Ok((g, s, opts, rep))
}

fn factorize(text: &str, ov: &Overrides) -> Outcome {
    let (_, _, opts, rep) = factor_request(text, ov)?;
    Ok(envelope(Command::Factorize, Some(&opts), report_json(&rep)))
}

fn augment(text: &str, ov: &Overrides) -> Outcome {
    let (g, _, opts, rep) = factor_request(text, ov)?;
    let Some(fact) = rep.factorization.clone() else {
        return Ok(envelope(Command::Augment, Some(&opts), report_json(&rep)));
    };
    let (f, ff) = factorization::augment_to_square(&g, &fact, &opts)?;
    let restricted = if g.rows() <= g.cols() {
        ff.restrict_rows(g.rows())
    } else {
        ff.transposed().restrict_rows(g.cols()).transposed()
    };
    Ok(envelope(
        Command::Augment,
        Some(&opts),
        json!({
            "status": rep.status.name(),
            "F": MatrixJson::from_matrix(&f),
            "factorization": FactorizationJson::from_factorization(&ff),
            "certificates": {
                "residual": ff.residual,
                "roundtrip_matches": restricted == fact,
            },
        }),
    ))
}

fn toeplitz(text: &str, ov: &Overrides) -> Outcome {
    let req: ToeplitzRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let opts = resolve_options(req.cutoff, &None, ov);
    let f = req.f.to_matrix()?;
    let s = req.s.to_halfspace()?;
    let t = toepcorona::toeplitz_truncate(&f, &s, opts.cutoff)?;
    let rows: Vec<Vec<[f64; 2]>> = t
        .matrix
        .row_iter()
        .map(|r| r.iter().map(|c| [c.re, c.im]).collect())
        .collect();
    Ok(envelope(
        Command::Toeplitz,
        Some(&opts),
        json!({
            "index_set": t.index_set.iter().map(|l| l.0.clone()).collect::<Vec<_>>(),
            "symbol_shape": [t.symbol_shape.0, t.symbol_shape.1],
            "rows": rows,
        }),
    ))
}

struct CoronaInput {
    a: ApMatrix,
    b: ApMatrix,
    gamma: f64,
    s: Halfspace,
    g: Option<MatrixJson>,
    opts: SolverOptions,
}

fn corona_input(text: &str, ov: &Overrides) -> Result<CoronaInput, ApwError> {
    let req: CoronaRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let opts = resolve_options(req.cutoff, &req.tolerances, ov);
    let a = req.a.to_matrix()?;
    let b = req.b.to_matrix_in(a.basis())?;
    Ok(CoronaInput {
        a,
        b,
        gamma: req.gamma,
        s: req.s.to_halfspace()?,
        g: req.g,
        opts,
    })
}

fn gram(text: &str, ov: &Overrides) -> Outcome {
    let inp = corona_input(text, ov)?;
    let rep = toepcorona::gram_test(&inp.a, &inp.b, inp.gamma, &inp.s, &inp.opts)?;
    Ok(envelope(
        Command::Gram,
        Some(&inp.opts),
        json!({
            "passes": rep.passes,
            "margin": rep.margin,
            "section_size": rep.section_size,
            "gamma": rep.gamma,
        }),
    ))
}

pub fn solution_json(sol: &CoronaSolution) -> Value {
    json!({
        "status": "solved",
        "gamma": sol.gamma,
        "C": MatrixJson::from_matrix(&sol.c),
        "D": MatrixJson::from_matrix(&sol.d),
        "R": MatrixJson::from_matrix(&sol.r),
        "J0": sol.j0,
        "theta": {
            "11": MatrixJson::from_matrix(&sol.theta11),
            "12": MatrixJson::from_matrix(&sol.theta12),
            "21": MatrixJson::from_matrix(&sol.theta21),
            "22": MatrixJson::from_matrix(&sol.theta22),
        },
        "F0": MatrixJson::from_matrix(&sol.f0),
        "residuals": sol.residuals,
    })
}

fn corona(text: &str, ov: &Overrides) -> Outcome {
    let inp = corona_input(text, ov)?;
    if inp.g.is_some() {
        return Err(ApwError::Parse("field `G` is only accepted by parametrize".into()).into());
    }
    let sol = toepcorona::corona_solve(&inp.a, &inp.b, inp.gamma, &inp.s, &inp.opts)?;
    Ok(envelope(Command::Corona, Some(&inp.opts), solution_json(&sol)))
}

fn parametrize(text: &str, ov: &Overrides) -> Outcome {
    let inp = corona_input(text, ov)?;
    let g = inp
        .g
        .as_ref()
        .ok_or_else(|| ApwError::Parse("parametrize needs the parameter `G`".into()))?
        .to_matrix_in(inp.a.basis())?;
    let sol = toepcorona::corona_solve(&inp.a, &inp.b, inp.gamma, &inp.s, &inp.opts)?;
    let par = toepcorona::corona_parametrize(&sol, &g, &inp.opts)?;
    Ok(envelope(
        Command::Parametrize,
        Some(&inp.opts),
        json!({
            "status": "solved",
            "gamma": sol.gamma,
            "F": MatrixJson::from_matrix(&par.f),
            "residuals": par.residuals,
        }),
    ))
}

fn verify(text: &str, ov: &Overrides) -> Outcome {
    let req: VerifyRequest = parse(text)?;
    check_schema(req.apw_schema)?;
    let opts = resolve_options(None, &req.tolerances, ov);
    let g = req.g.to_matrix()?;
    let s = req.s.to_halfspace()?;
    let fact = req.factorization.to_factorization(g.basis(), &s)?;
    let rep = factorization::verify_factorization(&g, &fact, &opts)?;
    Ok(envelope(
        Command::Verify,
        Some(&opts),
        json!({
            "residual": rep.residual,
            "mask_violations": rep.mask_violations,
            "indices_ordered": rep.indices_ordered,
            "shapes_ok": rep.shapes_ok,
            "plus_right_inverse_residual": rep.plus_right_inverse_residual,
            "minus_left_inverse_residual": rep.minus_left_inverse_residual,
            "passes": rep.passes(1e-7),
        }),
    ))
}

/// Numeric leaves of a report, keyed by dotted path; matrices and the
/// option echo are skipped.
pub fn certificates(v: &Value) -> BTreeMap<String, f64> {
    fn walk(prefix: &str, v: &Value, out: &mut BTreeMap<String, f64>) {
        match v {
            Value::Number(n) => {
                if let Some(x) = n.as_f64() {
                    out.insert(prefix.to_string(), x);
                }
            }
            Value::Bool(b) => {
                out.insert(prefix.to_string(), if *b { 1.0 } else { 0.0 });
            }
            Value::Object(map) => {
                if map.contains_key("entries") || map.contains_key("terms") {
                    return;
                }
                for (k, x) in map {
                    if prefix.is_empty() && (k == "options" || k == "apw_schema") {
                        continue;
                    }
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, out);
                }
            }
            _ => {}
        }
    }
    let mut out = BTreeMap::new();
    walk("", v, &mut out);
    out
}

fn corpus(text: &str, ov: &Overrides) -> (Value, i32) {
    let corpus: Corpus = match parse(text).and_then(|c: Corpus| check_schema(c.apw_schema).map(|_| c)) {
        Ok(c) => c,
        Err(e) => return (error_report(Command::Corpus, &e), exit_code(e.class())),
    };
    let mut results = Vec::new();
    let mut failed = 0usize;
    for inst in &corpus.instances {
        let (report, code) = if inst.command == Command::Corpus {
            let e = ApwError::Parse("corpus instances cannot nest".into());
            (error_report(Command::Corpus, &e), exit_code(e.class()))
        } else {
            run_request(inst.command, &inst.request.to_string(), ov)
        };
        let certs = certificates(&report);
        let mut mismatches = Vec::new();
        let got_error = report.get("error").and_then(|e| e.get("class")).and_then(Value::as_str);
        match (&inst.expected_error, got_error) {
            (Some(want), Some(got)) if want == got => {}
            (Some(want), got) => mismatches.push(format!("expected error `{want}`, got {got:?}")),
            (None, Some(got)) => mismatches.push(format!("unexpected error `{got}`")),
            (None, None) => {}
        }
        let got_status = report.get("status").and_then(Value::as_str);
        if let Some(want) = &inst.expected_status {
            if got_status != Some(want.as_str()) {
                mismatches.push(format!("expected status `{want}`, got {got_status:?}"));
            }
        }
        for (key, exp) in &inst.expected {
            match certs.get(key) {
                Some(x) if (x - exp.value).abs() <= exp.tol => {}
                Some(x) => mismatches.push(format!("{key}: got {x:e}, expected {:e} +- {:e}", exp.value, exp.tol)),
                None => mismatches.push(format!("{key}: missing")),
            }
        }
        if !mismatches.is_empty() {
            failed += 1;
        }
        results.push(json!({
            "name": inst.name,
            "command": inst.command.name(),
            "exit_code": code,
            "ok": mismatches.is_empty(),
            "mismatches": mismatches,
            "certificates": certs,
        }));
    }
    let report = envelope(
        Command::Corpus,
        None,
        json!({
            "instances": results,
            "passed": corpus.instances.len() - failed,
            "failed": failed,
        }),
    );
    (report, if failed == 0 { EXIT_OK } else { EXIT_CORPUS_MISMATCH })
}

/// Pretty JSON with a trailing newline, the format written by the tool.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}
