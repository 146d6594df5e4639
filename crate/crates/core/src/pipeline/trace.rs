use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything a pipeline run recorded, one entry per stage in execution
/// order. Vertex sets and edge lists always use indices of the graph the
/// operation was called on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub op: String,
    pub stages: Vec<StageRecord>,
    /// Stage that stopped the run, if any.
    pub failed_stage: Option<String>,
    #[serde(skip)]
    timings: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    /// Number of random attempts used (0 for deterministic stages).
    pub attempts: u32,
    pub sets: BTreeMap<String, Vec<usize>>,
    pub edges: BTreeMap<String, Vec<[usize; 2]>>,
    pub checks: BTreeMap<String, bool>,
    pub values: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    /// Wall-clock milliseconds; only filled when timings are enabled so
    /// that traces stay byte-identical across runs by default.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<f64>,
}

impl PipelineTrace {
    pub fn new(op: &str, timings: bool) -> Self {
        PipelineTrace {
            op: op.to_string(),
            stages: Vec::new(),
            failed_stage: None,
            timings,
        }
    }

    pub fn timings(&self) -> bool {
        self.timings
    }

    /// Opens a stage; pair with [`PipelineTrace::close`].
    pub fn open(&self, name: &str) -> StageGuard {
        StageGuard {
            record: StageRecord {
                name: name.to_string(),
                ..StageRecord::default()
            },
            started: Instant::now(),
        }
    }

    pub fn close(&mut self, guard: StageGuard) {
        let mut record = guard.record;
        if self.timings {
            record.elapsed_ms = Some(guard.started.elapsed().as_secs_f64() * 1e3);
        }
        self.stages.push(record);
    }

    /// Appends the stages of a nested run, prefixing their names, with
    /// vertex indices mapped through `to_outer`.
    pub fn absorb(&mut self, prefix: &str, inner: PipelineTrace, to_outer: &[usize]) {
        for mut stage in inner.stages {
            stage.name = format!("{prefix}/{}", stage.name);
            for set in stage.sets.values_mut() {
                for v in set.iter_mut() {
                    *v = to_outer[*v];
                }
            }
            for list in stage.edges.values_mut() {
                for e in list.iter_mut() {
                    *e = [to_outer[e[0]], to_outer[e[1]]];
                }
            }
            self.stages.push(stage);
        }
        if let Some(failed) = inner.failed_stage {
            self.failed_stage = Some(format!("{prefix}/{failed}"));
        }
    }

    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.iter().find(|s| s.name == name)
    }

    /// True if every recorded vertex index is below `n`.
    pub fn indices_within(&self, n: usize) -> bool {
        self.stages.iter().all(|s| {
            s.sets.values().flatten().all(|&v| v < n)
                && s.edges.values().flatten().all(|e| e[0] < n && e[1] < n)
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}

/// A stage being recorded.
pub struct StageGuard {
    pub record: StageRecord,
    started: Instant,
}

impl StageGuard {
    pub fn set(&mut self, name: &str, vertices: &[usize]) {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        self.record.sets.insert(name.to_string(), sorted);
    }

    pub fn edges(&mut self, name: &str, edges: impl IntoIterator<Item = (usize, usize)>) {
        let mut list: Vec<[usize; 2]> = edges
            .into_iter()
            .map(|(u, v)| [u.min(v), u.max(v)])
            .collect();
        list.sort_unstable();
        self.record.edges.insert(name.to_string(), list);
    }

    pub fn check(&mut self, name: &str, holds: bool) -> bool {
        self.record.checks.insert(name.to_string(), holds);
        holds
    }

    pub fn value(&mut self, name: &str, value: impl Into<Value>) {
        self.record.values.insert(name.to_string(), value.into());
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.record.warnings.push(message.into());
    }

    pub fn attempts(&mut self, attempts: u32) {
        self.record.attempts = attempts;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_record_sorted_sets_and_no_time_by_default() {
        let mut trace = PipelineTrace::new("t", false);
        let mut st = trace.open("a");
        st.set("S", &[3, 1, 2]);
        st.edges("H", [(2, 1)]);
        st.check("ok", true);
        trace.close(st);
        let a = trace.stage("a").unwrap();
        assert_eq!(a.sets["S"], vec![1, 2, 3]);
        assert_eq!(a.edges["H"], vec![[1, 2]]);
        assert!(a.elapsed_ms.is_none());
        assert!(!trace.to_json_string().contains("elapsed_ms"));
        assert!(trace.indices_within(4) && !trace.indices_within(3));
    }

    #[test]
    fn absorb_maps_indices() {
        let mut inner = PipelineTrace::new("inner", false);
        let mut st = inner.open("x");
        st.set("S", &[0, 1]);
        inner.close(st);
        inner.failed_stage = Some("x".into());
        let mut outer = PipelineTrace::new("outer", false);
        outer.absorb("sub", inner, &[5, 7]);
        assert_eq!(outer.stage("sub/x").unwrap().sets["S"], vec![5, 7]);
        assert_eq!(outer.failed_stage.as_deref(), Some("sub/x"));
    }
}
