use num_bigint::BigUint;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::params::rational;
use super::{
    cleaning_step, core_with_retained_degrees, induced_mader, mader_parameters, main_theorem,
    unbalanced_step, MaderOverrides, MaderParameters, PipelineRun, PipelineTrace, Profile,
    RunOptions,
};
use crate::error::PipelineError;
use crate::format::GraphJson;
use crate::graph::Graph;

/// Retries used when a descriptor does not set them.
pub const DEFAULT_RETRIES: u32 = 50;

/// One pipeline invocation as read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunDescriptor {
    pub op: String,
    #[serde(default)]
    pub graph: Option<GraphJson>,
    /// A profile name or an object of overrides.
    #[serde(default = "default_profile")]
    pub profile: Value,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_retries")]
    pub retries: u32,
    #[serde(default)]
    pub timings: bool,
    /// Operation-specific arguments.
    #[serde(default)]
    pub args: Value,
}

fn default_profile() -> Value {
    Value::String("desk".into())
}

fn default_retries() -> u32 {
    DEFAULT_RETRIES
}

/// Everything a run produced. `certificate` is present only when it
/// verified as induced and proper.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunResult {
    pub op: String,
    pub profile: Profile,
    pub seed: u64,
    pub retries: u32,
    /// `ok`, `absent`, `precondition`, `structural`, `parameters` or
    /// `infeasible`.
    pub status: String,
    pub error: Option<String>,
    pub failed_stage: Option<String>,
    pub trace: Option<PipelineTrace>,
    pub certificate: Option<Value>,
    /// Operation-specific output, such as a parameter table or the sets
    /// produced by the cleaning step.
    pub extra: Option<Value>,
}

impl RunResult {
    pub fn succeeded(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitArgs {
    a: Vec<usize>,
    b: Vec<usize>,
    d: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CleaningArgs {
    x: Vec<usize>,
    b0: Vec<usize>,
    d: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoreArgs {
    k: usize,
    d_max: u64,
    m: u64,
    b: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MaderArgs {
    s: u64,
    eta: [u64; 2],
    /// A JSON integer or a decimal string, for bounds such as `d^43`.
    d_max: Value,
    ell: u64,
    m: u64,
    #[serde(default)]
    overrides: Option<MaderOverrides>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TheoremArgs {
    k: usize,
}

fn parse_args<T: DeserializeOwned>(op: &str, args: &Value) -> Result<T, PipelineError> {
    serde_json::from_value(args.clone())
        .map_err(|e| PipelineError::Parameters(format!("{op} arguments: {e}")))
}

fn big(value: &Value) -> Result<BigUint, PipelineError> {
    match value {
        Value::Number(n) => n
            .as_u64()
            .map(BigUint::from)
            .ok_or_else(|| PipelineError::Parameters(format!("d_max {n} is not a u64"))),
        Value::String(s) => s.parse().map_err(|_| {
            PipelineError::Parameters(format!("d_max {s:?} is not a decimal integer"))
        }),
        other => Err(PipelineError::Parameters(format!(
            "d_max must be an integer, got {other}"
        ))),
    }
}

impl MaderArgs {
    fn parameters(
        &self,
        profile: &Profile,
        checked: bool,
    ) -> Result<MaderParameters, PipelineError> {
        let eta = rational(self.eta[0], self.eta[1]);
        let d_max = big(&self.d_max)?;
        if checked {
            return mader_parameters(self.s, eta, d_max, self.ell, self.m);
        }
        let overrides = self.overrides.as_ref().unwrap_or(&profile.mader_overrides);
        MaderParameters::compute(self.s, eta, d_max, self.ell, self.m)?.with_overrides(overrides)
    }
}

/// Parses a descriptor from JSON bytes.
pub fn parse_descriptor(bytes: &[u8]) -> Result<RunDescriptor, PipelineError> {
    serde_json::from_slice(bytes)
        .map_err(|e| PipelineError::Parameters(format!("run descriptor: {e}")))
}

/// Executes a descriptor.
///
/// An unknown op, malformed arguments, a missing graph or an unknown
/// profile are errors. Everything that happens once the operation runs,
/// including precondition failures, is reported inside the result.
pub fn run_descriptor(desc: &RunDescriptor) -> Result<RunResult, PipelineError> {
    let profile = Profile::resolve(&desc.profile)?;
    let opts = RunOptions {
        seed: desc.seed,
        retries: desc.retries,
        timings: desc.timings,
    };
    let graph = || -> Result<Graph, PipelineError> {
        let json = desc
            .graph
            .clone()
            .ok_or_else(|| PipelineError::Parameters(format!("{} needs a graph", desc.op)))?;
        Graph::try_from(json).map_err(|e| PipelineError::Parameters(format!("graph: {e}")))
    };
    let op = desc.op.as_str();
    let mut result = RunResult {
        op: desc.op.clone(),
        profile: profile.clone(),
        seed: desc.seed,
        retries: desc.retries,
        status: "ok".into(),
        error: None,
        failed_stage: None,
        trace: None,
        certificate: None,
        extra: None,
    };
    match op {
        "unbalanced_step" => {
            let g = graph()?;
            let args: SplitArgs = parse_args(op, &desc.args)?;
            check_vertices(&g, [&args.a, &args.b])?;
            let run = unbalanced_step(&g, &args.a, &args.b, args.d, &profile, opts);
            record_certificate(&mut result, run);
        }
        "cleaning_step" => {
            let g = graph()?;
            let args: CleaningArgs = parse_args(op, &desc.args)?;
            check_vertices(&g, [&args.x, &args.b0])?;
            let run = cleaning_step(&g, &args.x, &args.b0, args.d, &profile, opts);
            record(&mut result, run, |out, r| r.extra = Some(json!(out)));
        }
        "core_with_retained_degrees" => {
            let g = graph()?;
            let args: CoreArgs = parse_args(op, &desc.args)?;
            check_vertices(&g, [&args.b])?;
            let run =
                core_with_retained_degrees(&g, args.k, args.d_max, args.m, &args.b, &profile, opts);
            record(&mut result, run, |out, r| r.extra = Some(json!(out)));
        }
        "induced_mader" => {
            let g = graph()?;
            let args: MaderArgs = parse_args(op, &desc.args)?;
            let params = args.parameters(&profile, false)?;
            let run = induced_mader(&g, &params, &profile, opts);
            record_certificate(&mut result, run);
            result.extra = Some(params.summary());
        }
        "main_theorem" => {
            let g = graph()?;
            let args: TheoremArgs = parse_args(op, &desc.args)?;
            let run = main_theorem(&g, args.k, &profile, opts);
            record_certificate(&mut result, run);
        }
        "mader_parameters" => {
            let args: MaderArgs = parse_args(op, &desc.args)?;
            match args.parameters(&profile, args.overrides.is_none()) {
                Ok(p) => result.extra = Some(p.summary()),
                Err(e) => {
                    // Report the table alongside the violated conditions.
                    if let Ok(p) = args.parameters(&profile, false) {
                        result.extra = Some(p.summary());
                    }
                    fail(&mut result, &e);
                }
            }
        }
        other => return Err(PipelineError::Parameters(format!("unknown op {other:?}"))),
    }
    Ok(result)
}

fn check_vertices<const N: usize>(g: &Graph, sets: [&Vec<usize>; N]) -> Result<(), PipelineError> {
    for set in sets {
        if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
            return Err(PipelineError::Parameters(format!(
                "vertex {v} out of range for a graph on {} vertices",
                g.n()
            )));
        }
    }
    Ok(())
}

fn status_of(e: &PipelineError) -> &'static str {
    match e {
        PipelineError::Precondition { .. } => "precondition",
        PipelineError::Structural { .. } => "structural",
        PipelineError::Parameters(_) => "parameters",
        PipelineError::Infeasible { .. } => "infeasible",
        PipelineError::Absent { .. } => "absent",
    }
}

fn fail(result: &mut RunResult, e: &PipelineError) {
    result.status = status_of(e).into();
    result.error = Some(e.to_string());
    if result.failed_stage.is_none() {
        result.failed_stage = e.stage().map(str::to_string);
    }
}

fn record<T>(result: &mut RunResult, run: PipelineRun<T>, on_ok: impl FnOnce(T, &mut RunResult)) {
    result.failed_stage = run.trace.failed_stage.clone();
    result.trace = Some(run.trace);
    match run.outcome {
        Ok(out) => on_ok(out, result),
        Err(e) => fail(result, &e),
    }
}

fn record_certificate(
    result: &mut RunResult,
    run: PipelineRun<crate::subdivision::SubdivisionCertificate>,
) {
    record(result, run, |cert, r| {
        r.certificate =
            Some(serde_json::from_str(&cert.to_json_string()).expect("certificate JSON is valid"));
    });
}
