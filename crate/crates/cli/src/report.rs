use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// What a command did: the resolved manifest, the seeds it used, metrics,
/// files written and per-stage wall-clock time. Everything except
/// `timings` is a pure function of the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub manifest: Value,
    pub seeds: BTreeMap<String, u64>,
    pub metrics: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, PathBuf>,
    pub warnings: Vec<String>,
    /// Seconds per stage.
    pub timings: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, manifest: Value) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            manifest,
            seeds: BTreeMap::new(),
            metrics: BTreeMap::new(),
            outputs: BTreeMap::new(),
            warnings: Vec::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn seed(&mut self, name: &str, seed: u64) {
        self.seeds.insert(name.to_string(), seed);
    }

    pub fn metric(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metrics.insert(name.to_string(), v);
    }

    pub fn output(&mut self, name: &str, path: &Path) {
        self.outputs.insert(name.to_string(), path.to_path_buf());
    }

    /// Run `f` and record its duration under `stage`.
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        *self.timings.entry(stage.to_string()).or_default() += start.elapsed().as_secs_f64();
        out
    }

    pub fn add_timing(&mut self, stage: &str, seconds: f64) {
        *self.timings.entry(stage.to_string()).or_default() += seconds;
    }

    /// The report as JSON with the timing block removed.
    pub fn without_timings(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings");
        }
        v
    }
}

/// A failure tagged with the pipeline stage that produced it.
#[derive(Debug)]
pub struct StageError {
    pub stage: String,
    pub message: String,
}

impl StageError {
    pub fn new(stage: &str, message: impl std::fmt::Display) -> Self {
        Self {
            stage: stage.to_string(),
            message: message.to_string(),
        }
    }
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage {} failed: {}", self.stage, self.message)
    }
}

impl std::error::Error for StageError {}

/// `result.map_err(StageError)` shorthand.
pub trait AtStage<T> {
    fn at(self, stage: &str) -> Result<T, StageError>;
}

impl<T, E: std::fmt::Display> AtStage<T> for Result<T, E> {
    fn at(self, stage: &str) -> Result<T, StageError> {
        self.map_err(|e| StageError::new(stage, e))
    }
}
