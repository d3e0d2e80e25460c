//! One function per subcommand. Each resolves the manifest, runs its stages,
//! writes artifacts into `output_dir` and returns the [`RunReport`] it saved.

use std::path::{Path, PathBuf};

use ndarray::{concatenate, Array2, ArrayView2, Axis};
use optrf::convergence::{
    error_curve, exponent_ordering, sample_unit_pairs, tail_probability, ConvergenceReport, TailBoundCheck,
    TailTable, CSV_HEADER,
};
use optrf::data_io::manifest::{DataSource, FeaturesSection};
use optrf::data_io::{save_matrix, save_matrix_u8, write_atomic, write_json};
use optrf::kernels::gram;
use optrf::model_selection::{grid_search, threshold_search, Estimator, GridSearchResult, Pipeline, GRID_KIND};
use optrf::projection::{append_bias, binarize, is_binary, BinarizerConfig, FeatureFamily, FeatureMap};
use optrf::ridge::RidgeMode;
use optrf::stats::SignTest;
use optrf::{Dataset, ExperimentManifest};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::args::{FetchArgs, ManifestArgs, PlotArgs};
use crate::overrides;
use crate::report::{AtStage, RunReport, StageError};

type CmdResult<T = RunReport> = Result<T, StageError>;

/// The merged, validated manifest and any flag-conflict warnings.
pub struct Resolved {
    pub manifest: ExperimentManifest,
    pub warnings: Vec<String>,
}

/// Read the manifest (if any), fold in flags, resolve and validate.
pub fn resolve_manifest(args: &ManifestArgs, workers: Option<usize>) -> CmdResult<Resolved> {
    let (mut doc, base) = match &args.manifest {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| StageError::new("manifest", format!("cannot read {}: {e}", path.display())))?;
            let doc: Value = serde_json::from_str(&text).at("manifest")?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (doc, base)
        }
        None => (json!({ "schema_version": optrf::data_io::manifest::SCHEMA_VERSION }), PathBuf::from(".")),
    };
    let mut flags = args.overrides().at("manifest")?;
    if let Some(w) = workers {
        flags.push(("workers".into(), json!(w)));
    }
    let warnings = overrides::apply(&mut doc, &flags).at("manifest")?;
    let manifest = ExperimentManifest::from_value(doc, &base).at("manifest")?;
    Ok(Resolved { manifest, warnings })
}

fn missing(section: &str) -> StageError {
    StageError::new("manifest", format!("manifest error at {section}: section is required for this command"))
}

fn start_report(command: &str, r: &Resolved) -> RunReport {
    let echo = serde_json::to_value(&r.manifest).expect("manifest serializes");
    let mut report = RunReport::new(command, echo);
    report.warnings = r.warnings.clone();
    collect_seeds(&r.manifest, &mut report);
    report
}

fn collect_seeds(m: &ExperimentManifest, report: &mut RunReport) {
    if let Some(data) = &m.data {
        if let DataSource::SyntheticBlobs { seed, .. } = data.source {
            report.seed("data", seed);
        }
        if let Some(s) = data.split {
            report.seed("split", s.seed);
        }
    }
    if let Some(f) = &m.features {
        report.seed("features", f.seed);
    }
    if let Some(g) = &m.grid {
        report.seed("grid_split", g.split_seed);
    }
    if let Some(c) = &m.convergence {
        report.seed("pairs", c.pairs_seed);
        report.seed("replicate_base", c.base_seed);
    }
}

fn finish(report: RunReport, dir: &Path) -> CmdResult {
    let path = dir.join(format!("{}_report.json", report.command));
    write_json(&path, &report).at("write")?;
    log::info!("wrote {}", path.display());
    Ok(report)
}

/// Optical maps model a binary modulator; other inputs are allowed with a
/// warning unless `strict_binary` is set.
fn check_binary(f: &FeaturesSection, x: ArrayView2<f64>, report: &mut RunReport) -> CmdResult<()> {
    if !matches!(f.map.family, FeatureFamily::Optical { .. }) || is_binary(x) {
        return Ok(());
    }
    let msg = "optical features on non-binary inputs (a physical modulator only takes 0/1)".to_string();
    if f.strict_binary {
        return Err(StageError::new("features", format!("{msg}; rejected by strict_binary")));
    }
    log::warn!("{msg}");
    report.warnings.push(msg);
    Ok(())
}

pub fn features(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("features", r);
    let data = m.data.as_ref().ok_or_else(|| missing("data"))?;
    let f = m.features.ok_or_else(|| missing("features"))?;
    let loaded = report.time("load", || data.load()).at("load")?;
    check_binary(&f, loaded.features.view(), &mut report)?;
    let phi = report
        .time("features", || {
            FeatureMap::<f64>::new(f.map, f.seed, loaded.features.ncols())?.transform(loaded.features.view())
        })
        .at("features")?;
    let out = m.output_dir.join("features.oprf");
    report.time("write", || save_matrix(&out, &phi)).at("write")?;
    report.output("features", &out);
    report.metric("rows", phi.nrows());
    report.metric("cols", phi.ncols());
    report.metric("family", f.map.family.name());
    finish(report, &m.output_dir)
}

pub fn kernel(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("kernel", r);
    let data = m.data.as_ref().ok_or_else(|| missing("data"))?;
    let k = m.kernel.ok_or_else(|| missing("kernel"))?;
    let loaded = report.time("load", || data.load()).at("load")?;
    let g = report
        .time("gram", || -> optrf::Result<Array2<f64>> {
            let x = if k.bias > 0.0 {
                append_bias(loaded.features.view(), k.bias)?
            } else {
                loaded.features.clone()
            };
            let s2 = k.scale * k.scale;
            Ok(gram(x.view(), None, &k.spec)?.values.mapv(|v| v * s2))
        })
        .at("gram")?;
    let out = m.output_dir.join("gram.oprf");
    report.time("write", || save_matrix(&out, &g)).at("write")?;
    report.output("gram", &out);
    report.metric("rows", g.nrows());
    report.metric("trace", g.diag().sum());
    finish(report, &m.output_dir)
}

fn read_grid_result(path: &Path) -> CmdResult<GridSearchResult> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| StageError::new("manifest", format!("missing upstream artifact {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de)
        .map_err(|e| StageError::new("manifest", format!("{} at {}: {}", path.display(), e.path(), e.inner())))
}

pub fn train(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("train", r);
    let data = m.data.as_ref().ok_or_else(|| missing("data"))?;
    let ridge = m.ridge.as_ref().ok_or_else(|| missing("ridge"))?;
    let (estimator, mut params) = m.estimator().at("manifest")?;
    if let Some(path) = &ridge.hyperparameters_from {
        let grid = read_grid_result(path)?;
        if std::mem::discriminant(&grid.estimator) != std::mem::discriminant(&estimator) {
            let msg = format!("hyperparameters in {} were searched for a different estimator", path.display());
            log::warn!("{msg}");
            report.warnings.push(msg);
        }
        params = grid.best;
    }
    let solver = m.solver();
    let splits = report.time("load", || data.splits()).at("load")?;
    if let (RidgeMode::Primal, Some(f)) = (ridge.mode, &m.features) {
        check_binary(f, splits.train.features(), &mut report)?;
    }
    let pipe = Pipeline::fit(&estimator, &params, &splits.train, &solver).at("fit")?;
    let transform_stage = match estimator {
        Estimator::RandomFeatures { .. } => "features",
        Estimator::ExactKernel { .. } => "gram",
    };
    report.add_timing(transform_stage, pipe.timings().transform_seconds);
    report.add_timing("solve", pipe.timings().solve_seconds);
    let (train_acc, val_acc, test_acc) = report
        .time("evaluate", || -> optrf::Result<_> {
            Ok((
                pipe.accuracy(&splits.train)?,
                pipe.accuracy(&splits.validation)?,
                pipe.accuracy(&splits.test)?,
            ))
        })
        .at("evaluate")?;
    let out = m.output_dir.join("model.oprf");
    let coefficients = pipe.model().coefficients().to_owned();
    report.time("write", || save_matrix(&out, &coefficients)).at("write")?;
    report.output("model_coefficients", &out);

    report.metric("estimator", estimator);
    report.metric("hyperparameters", params);
    report.metric("train_accuracy", train_acc);
    report.metric("validation_accuracy", val_acc);
    report.metric("test_accuracy", test_acc);
    report.metric("test_error", 1.0 - test_acc);
    report.metric("solver", pipe.model().stats());
    report.metric("n_train", splits.train.len());
    report.metric("n_validation", splits.validation.len());
    report.metric("n_test", splits.test.len());
    finish(report, &m.output_dir)
}

/// Estimator for a grid: `ridge.mode` when given, else features before kernel.
fn grid_estimator(m: &ExperimentManifest) -> CmdResult<Estimator> {
    if m.ridge.is_some() {
        return Ok(m.estimator().at("manifest")?.0);
    }
    if let Some(f) = &m.features {
        return Ok(Estimator::RandomFeatures {
            features: f.map,
            seed: f.seed,
        });
    }
    if let Some(k) = &m.kernel {
        return Ok(Estimator::ExactKernel { kernel: k.spec });
    }
    Err(missing("features"))
}

/// Train and validation rows together, test rows withheld.
fn searchable_rows(m: &ExperimentManifest, report: &mut RunReport) -> CmdResult<Dataset> {
    let data = m.data.as_ref().ok_or_else(|| missing("data"))?;
    let splits = report.time("load", || data.splits()).at("load")?;
    let x = concatenate(Axis(0), &[splits.train.features(), splits.validation.features()]).expect("same width");
    let labels = splits.train.labels().iter().chain(splits.validation.labels()).copied().collect();
    Dataset::new(x, labels, splits.train.num_classes()).at("load")
}

pub fn grid(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("grid", r);
    let cfg = m.grid.clone().ok_or_else(|| missing("grid"))?;
    let estimator = grid_estimator(m)?;
    let rows = searchable_rows(m, &mut report)?;
    if let (Estimator::RandomFeatures { .. }, Some(f)) = (estimator, &m.features) {
        check_binary(f, rows.features(), &mut report)?;
    }
    let result = report
        .time("search", || grid_search(&rows, &estimator, &cfg, &m.solver()))
        .at("search")?;
    let json_path = m.output_dir.join("grid_result.json");
    let csv_path = m.output_dir.join("grid.csv");
    report
        .time("write", || -> optrf::Result<()> {
            write_json(&json_path, &result)?;
            write_atomic(&csv_path, |w| result.write_csv(w))
        })
        .at("write")?;
    report.output("grid_result", &json_path);
    report.output("grid_csv", &csv_path);
    report.metric("best", result.best);
    report.metric("best_validation_accuracy", result.best_validation_accuracy);
    report.metric("grid_points", result.full_grid.len());
    report.metric("failed_points", result.full_grid.iter().filter(|r| r.failed).count());
    finish(report, &m.output_dir)
}

pub const CONVERGENCE_KIND: &str = "convergence";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityEntry {
    pub exponent: u32,
    pub from_dim: usize,
    pub to_dim: usize,
    /// Per-replicate median error at `from_dim` greater than at `to_dim`.
    pub test: SignTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingEntry {
    pub higher_exponent: u32,
    pub lower_exponent: u32,
    pub dim: usize,
    pub test: SignTest,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailDocument {
    pub table: TailTable,
    pub non_increasing: Vec<(f64, bool)>,
    /// Shape check with an empirically fitted constant.
    pub fitted_bound: Option<TailBoundCheck>,
}

/// JSON summary written by `converge`; per-record rows go to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergenceDocument {
    pub kind: String,
    pub pairs: usize,
    pub pair_dim: usize,
    pub pairs_seed: u64,
    pub reports: Vec<ConvergenceReport>,
    pub monotonicity: Vec<MonotonicityEntry>,
    pub exponent_ordering: Vec<OrderingEntry>,
    pub tails: Vec<TailDocument>,
}

pub fn converge(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("converge", r);
    let c = m.convergence.clone().ok_or_else(|| missing("convergence"))?;
    let pairs = sample_unit_pairs(c.pairs, c.pair_dim, c.pairs_seed).at("pairs")?;
    let mut reports = Vec::new();
    for &exp in &c.exponents {
        let rep = report
            .time("estimate", || error_curve(exp, &c.dims, &pairs, c.replicates, c.base_seed))
            .at("estimate")?;
        reports.push(rep);
    }
    let monotonicity = reports
        .iter()
        .flat_map(|rep| {
            rep.monotonicity_tests()
                .into_iter()
                .zip(rep.dims.windows(2))
                .map(|(test, w)| MonotonicityEntry {
                    exponent: rep.exponent,
                    from_dim: w[0],
                    to_dim: w[1],
                    test,
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut ordering = Vec::new();
    for w in reports.windows(2) {
        let (lower, higher) = if w[0].exponent < w[1].exponent { (&w[0], &w[1]) } else { (&w[1], &w[0]) };
        for &dim in &c.dims {
            ordering.push(OrderingEntry {
                higher_exponent: higher.exponent,
                lower_exponent: lower.exponent,
                dim,
                test: exponent_ordering(higher, lower, dim).at("estimate")?,
            });
        }
    }
    let mut tails = Vec::new();
    if let Some(t) = &c.tail {
        for &exp in &c.exponents {
            let table = report
                .time("tail", || tail_probability(exp, &c.dims, &t.t_values, &pairs, t.replicates, c.base_seed))
                .at("tail")?;
            tails.push(TailDocument {
                non_increasing: table.non_increasing_in_dim(),
                fitted_bound: table.bound_check(),
                table,
            });
        }
    }
    let doc = ConvergenceDocument {
        kind: CONVERGENCE_KIND.into(),
        pairs: c.pairs,
        pair_dim: c.pair_dim,
        pairs_seed: c.pairs_seed,
        reports,
        monotonicity,
        exponent_ordering: ordering,
        tails,
    };
    let json_path = m.output_dir.join("convergence.json");
    let csv_path = m.output_dir.join("convergence.csv");
    report
        .time("write", || -> optrf::Result<()> {
            write_json(&json_path, &doc)?;
            write_atomic(&csv_path, |w| {
                use std::io::Write;
                writeln!(w, "{CSV_HEADER}")?;
                for rep in &doc.reports {
                    rep.write_csv_rows(&mut *w)?;
                }
                Ok(())
            })
        })
        .at("write")?;
    report.output("convergence_json", &json_path);
    report.output("convergence_csv", &csv_path);
    for rep in &doc.reports {
        let medians: Vec<(usize, f64)> = rep.per_dim.iter().map(|s| (s.dim, s.median_rel_error)).collect();
        report.metric(&format!("median_rel_error_m{}", rep.exponent), medians);
    }
    finish(report, &m.output_dir)
}

pub fn binarize_cmd(r: &Resolved) -> CmdResult {
    let m = &r.manifest;
    let mut report = start_report("binarize", r);
    let data = m.data.as_ref().ok_or_else(|| missing("data"))?;
    let b = m.binarize.ok_or_else(|| missing("binarize"))?;
    let loaded = report.time("load", || data.load()).at("load")?;
    let threshold = if b.search {
        let cfg = m.grid.clone().ok_or_else(|| missing("grid"))?;
        let (estimator, params) = m.estimator().at("manifest")?;
        let ds = loaded.dataset(None).at("load")?;
        let res = report
            .time("search", || threshold_search(&ds, &cfg.threshold_grid, &estimator, &params, &cfg, &m.solver()))
            .at("search")?;
        report.metric("threshold_search", &res);
        res.best_threshold
    } else {
        b.threshold
    };
    let bits = report.time("binarize", || binarize(loaded.features.view(), &BinarizerConfig { threshold }));
    let out = m.output_dir.join("binarized.oprf");
    report.time("write", || save_matrix_u8(&out, &bits)).at("write")?;
    report.output("binarized", &out);
    report.metric("threshold", threshold);
    report.metric("fraction_ones", bits.iter().filter(|&&v| v == 1).count() as f64 / bits.len().max(1) as f64);
    report.metric("rows", bits.nrows());
    report.metric("cols", bits.ncols());
    finish(report, &m.output_dir)
}

pub const SERIES_CSV_HEADER: &str = "m,D,mean_rel_error,median_rel_error,max_rel_error";

/// Plot-ready CSV from a grid (heat map rows) or convergence (error-vs-D
/// series) result. Returns the number of data rows written.
pub fn plotdata(args: &PlotArgs) -> CmdResult<usize> {
    let text = std::fs::read_to_string(&args.input).map_err(|e| {
        StageError::new("plotdata", format!("missing upstream artifact {}: {e}", args.input.display()))
    })?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| StageError::new("plotdata", format!("{} is not JSON: {e}", args.input.display())))?;
    let schema_err =
        |e: serde_path_to_error::Error<serde_json::Error>| StageError::new("plotdata", format!("schema error at {}: {}", e.path(), e.inner()));
    match doc.get("kind").and_then(Value::as_str) {
        Some(GRID_KIND) => {
            let res: GridSearchResult = serde_path_to_error::deserialize(doc).map_err(schema_err)?;
            write_atomic(&args.output, |w| res.write_csv(w)).at("write")?;
            Ok(res.full_grid.len())
        }
        Some(CONVERGENCE_KIND) => {
            let conv: ConvergenceDocument = serde_path_to_error::deserialize(doc).map_err(schema_err)?;
            let mut rows = 0;
            write_atomic(&args.output, |w| {
                use std::io::Write;
                writeln!(w, "{SERIES_CSV_HEADER}")?;
                for rep in &conv.reports {
                    for s in &rep.per_dim {
                        writeln!(
                            w,
                            "{},{},{:e},{:e},{:e}",
                            rep.exponent, s.dim, s.mean_rel_error, s.median_rel_error, s.max_rel_error
                        )?;
                        rows += 1;
                    }
                }
                Ok(())
            })
            .at("write")?;
            Ok(rows)
        }
        Some(other) => Err(StageError::new("plotdata", format!("schema error at kind: unknown result kind {other:?}"))),
        None => Err(StageError::new("plotdata", "schema error at kind: field missing or not a string")),
    }
}

#[cfg(feature = "fetch")]
pub fn fetch(args: &FetchArgs) -> CmdResult<PathBuf> {
    use optrf::data_io::fetch::{fashion_mnist_subset, FetchSource};
    let mut source = FetchSource::fashion_mnist();
    if let Some(url) = &args.base_url {
        source.base_url = url.clone();
    }
    let dir = optrf::data_io::default_cache_dir();
    let (train, test) = fashion_mnist_subset(&source, &dir, args.n_train, args.n_test).at("fetch")?;
    log::info!("cached {} train / {} test rows in {}", train.len(), test.len(), dir.display());
    Ok(dir)
}

#[cfg(not(feature = "fetch"))]
pub fn fetch(_: &FetchArgs) -> CmdResult<PathBuf> {
    Err(StageError::new("fetch", "built without the `fetch` feature"))
}
