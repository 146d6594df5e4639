use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::params::MaderOverrides;
use crate::error::PipelineError;

/// Every tunable constant of the pipeline.
///
/// `paper` reproduces the constants of the argument exactly; no desk-sized
/// graph meets its girth hypotheses. `desk` relaxes them so that planted
/// instances of a few thousand vertices exercise every stage. Rationals are
/// `[numerator, denominator]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profile {
    pub name: String,
    /// Girth floor of the unbalanced and cleaning steps.
    pub step_girth: u64,
    /// Girth floor of `main_theorem`.
    pub main_girth: u64,
    /// Turn failed girth checks into warnings.
    pub relax_girth: bool,
    /// The unbalanced step applies when `|A| > ratio * d^2 * |B|`.
    pub unbalanced_ratio: [u64; 2],
    /// Sampling rate of `B` in the unbalanced step; `None` means `1/(6d)`.
    pub unbalanced_rate: Option<[u64; 2]>,
    /// Degree cap of the cleaning step is `delta0_factor * d`.
    pub delta0_factor: u64,
    /// `kappa = kappa_factor * d^4`.
    pub kappa_factor: u64,
    /// Cleaning step requires `|X| >= fraction * n`.
    pub cleaning_fraction: [u64; 2],
    /// Cleaning conclusion (i): `|Y| >= beta * n / (d^3 (d+1))`.
    pub cleaning_beta: [u64; 2],
    /// Case 1 applies when `|A'| >= fraction * n`.
    pub case1_fraction: [u64; 2],
    /// High-degree threshold is `d^b_exponent`.
    pub b_exponent: u32,
    /// Sampling rate of `B` in case 1; `None` means `1/(2d)`.
    pub case1_rate: Option<[u64; 2]>,
    /// `eta` for the Mader stage.
    pub mader_eta: [u64; 2],
    /// `(ell, m)` for the Mader stage; `None` uses the tuple for `d`.
    pub mader_ell_m: Option<[u64; 2]>,
    /// Maximum degree bound for the Mader stage; `None` means `d^b_exponent`.
    pub mader_d_max: Option<u64>,
    pub mader_overrides: MaderOverrides,
    /// Vertex-minimal reduction at the start of the Mader stage.
    pub minimal_reduction: bool,
    /// Minimum degree factor of the retained-degree core: `k^2 * factor`.
    pub core_min_degree_factor: u64,
    /// Witness condition (iii) is checked exhaustively up to this many
    /// selections, by random selections above it.
    pub witness_pair_cap: u64,
    pub witness_spot_checks: u32,
    pub linkage_budget: u64,
    pub finder_budget: u64,
}

impl Profile {
    pub fn paper() -> Self {
        Profile {
            name: "paper".into(),
            step_girth: 54,
            main_girth: 8_000_000,
            relax_girth: false,
            unbalanced_ratio: [60, 1],
            unbalanced_rate: None,
            delta0_factor: 800,
            kappa_factor: 30_000_000,
            cleaning_fraction: [81, 100],
            cleaning_beta: [1, 1_000_000_000_000],
            case1_fraction: [81, 100],
            b_exponent: 43,
            case1_rate: None,
            mader_eta: [1, 20],
            mader_ell_m: None,
            mader_d_max: None,
            mader_overrides: MaderOverrides::default(),
            minimal_reduction: true,
            core_min_degree_factor: 9,
            witness_pair_cap: 10_000,
            witness_spot_checks: 200,
            linkage_budget: 1_000_000,
            finder_budget: 10_000_000,
        }
    }

    pub fn desk() -> Self {
        Profile {
            name: "desk".into(),
            step_girth: 5,
            main_girth: 5,
            relax_girth: false,
            unbalanced_ratio: [1, 2],
            unbalanced_rate: Some([1, 2]),
            delta0_factor: 800,
            kappa_factor: 30_000_000,
            cleaning_fraction: [1, 2],
            cleaning_beta: [1, 100],
            case1_fraction: [81, 100],
            b_exponent: 2,
            case1_rate: Some([1, 2]),
            mader_eta: [1, 20],
            mader_ell_m: Some([3, 1]),
            mader_d_max: Some(32),
            mader_overrides: MaderOverrides {
                q: Some(2),
                big_q: Some(4),
                p: Some([9, 10]),
                d0: Some(64),
            },
            minimal_reduction: false,
            core_min_degree_factor: 4,
            witness_pair_cap: 10_000,
            witness_spot_checks: 200,
            linkage_budget: 200_000,
            finder_budget: 2_000_000,
        }
    }

    pub fn named(name: &str) -> Result<Self, PipelineError> {
        match name {
            "paper" => Ok(Profile::paper()),
            "desk" => Ok(Profile::desk()),
            other => Err(PipelineError::Parameters(format!(
                "unknown profile {other:?}"
            ))),
        }
    }

    /// Resolves `"paper"`, `"desk"` or an object of overrides. An object may
    /// name its base with `"base"` (default `desk`); every other key replaces
    /// the field of the same name.
    pub fn resolve(spec: &Value) -> Result<Self, PipelineError> {
        match spec {
            Value::String(name) => Profile::named(name),
            Value::Object(map) => {
                let base = match map.get("base") {
                    None => Profile::desk(),
                    Some(Value::String(name)) => Profile::named(name)?,
                    Some(other) => {
                        return Err(PipelineError::Parameters(format!(
                            "profile base must be a name, got {other}"
                        )))
                    }
                };
                let mut merged = serde_json::to_value(&base).expect("profile serializes");
                let fields = merged.as_object_mut().expect("profile is an object");
                for (key, value) in map {
                    if key == "base" {
                        continue;
                    }
                    if !fields.contains_key(key) {
                        return Err(PipelineError::Parameters(format!(
                            "unknown profile field {key:?}"
                        )));
                    }
                    fields.insert(key.clone(), value.clone());
                }
                fields.insert(
                    "name".into(),
                    Value::String(format!("{}+overrides", base.name)),
                );
                serde_json::from_value(merged)
                    .map_err(|e| PipelineError::Parameters(format!("profile: {e}")))
            }
            other => Err(PipelineError::Parameters(format!(
                "profile must be a name or an object, got {other}"
            ))),
        }
    }
}
