//! Declarative benchmark grids: datasets x methods x seeds, run in
//! parallel, with aggregate accuracy tables and figure-backing CSVs.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use adapu::booster::write_round_logs_csv;
use adapu::eval::{curve_rows, write_curves_csv, CurveRow};
use adapu::{
    evaluate_labeled, evaluate_pu_train, feature_usage, load_csv, load_sparse_text,
    make_pn_counterpart, make_pu, split_train_test, train_adaboost, train_adapu, ColumnSelector,
    LabeledDataset, Normalization, ThresholdInterval, ThresholdStrategy, TrainConfig,
};
use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;
use serde_json::json;

use crate::manifest::{fingerprint, DatasetFingerprint, RunManifest};
use crate::CliError;

/// (dataset, mode, beta, seed, accuracy)
type BetaSweepRow = (String, String, f64, u64, f64);
/// (dataset, method, trial, feature, count)
type UsageRow = (String, String, u64, usize, usize);

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Benchmark spec file (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Parallel cells; overrides the ADAPU_JOBS environment variable.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Output root; overrides ADAPU_OUTPUT_ROOT and the spec's output_root.
    #[arg(long)]
    pub out_root: Option<PathBuf>,
}

fn default_rounds() -> usize {
    100
}

fn default_k() -> usize {
    10
}

fn default_true() -> bool {
    true
}

fn default_label_column() -> String {
    "label".into()
}

fn default_positive_label() -> String {
    "1".into()
}

fn default_beta() -> f64 {
    1.0
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    #[serde(default = "default_rounds")]
    pub t: usize,
    #[serde(default = "default_k")]
    pub k: usize,
    pub seeds: Vec<u64>,
    pub output_root: Option<PathBuf>,
    pub datasets: Vec<DatasetSpec>,
    pub methods: Vec<MethodSpec>,
    #[serde(default)]
    pub sweeps: Sweeps,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub name: String,
    pub train: PathBuf,
    /// Held-out labeled test file; when absent, `train_size`/`split_seed`
    /// carve the test side out of `train`.
    pub test: Option<PathBuf>,
    #[serde(default)]
    pub format: DataFormat,
    #[serde(default = "default_label_column")]
    pub label_column: String,
    #[serde(default = "default_positive_label")]
    pub positive_label: String,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Feature dimension (sparse format only).
    pub dimension: Option<usize>,
    pub prior: f64,
    pub n_positive: usize,
    pub train_size: Option<usize>,
    #[serde(default)]
    pub split_seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    #[default]
    Csv,
    Sparse,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyName {
    #[default]
    Random,
    Even,
}

impl From<StrategyName> for ThresholdStrategy {
    fn from(s: StrategyName) -> Self {
        match s {
            StrategyName::Random => ThresholdStrategy::Random,
            StrategyName::Even => ThresholdStrategy::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalName {
    #[default]
    Widened,
    Pseudocode,
}

impl From<IntervalName> for ThresholdInterval {
    fn from(i: IntervalName) -> Self {
        match i {
            IntervalName::Widened => ThresholdInterval::Widened,
            IntervalName::Pseudocode => ThresholdInterval::Pseudocode,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MethodSpec {
    AdapuPerGroup {
        beta: f64,
        #[serde(default)]
        strategy: StrategyName,
        #[serde(default)]
        threshold_interval: IntervalName,
    },
    AdapuOverAll {
        beta: f64,
        #[serde(default)]
        strategy: StrategyName,
        #[serde(default)]
        threshold_interval: IntervalName,
    },
    Adaboost {
        #[serde(default = "default_beta")]
        beta: f64,
    },
    External {
        name: String,
        /// Map of dataset name to a CSV of +-1 predictions over its test rows.
        predictions: BTreeMap<String, PathBuf>,
    },
}

impl MethodSpec {
    fn label(&self) -> String {
        match self {
            MethodSpec::AdapuPerGroup { beta, .. } => format!("adapu-per-group(beta={beta})"),
            MethodSpec::AdapuOverAll { beta, .. } => format!("adapu-over-all(beta={beta})"),
            MethodSpec::Adaboost { beta } => format!("adaboost(beta={beta})"),
            MethodSpec::External { name, .. } => format!("external:{name}"),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweeps {
    /// Train both normalizations across this shrinkage grid.
    #[serde(default)]
    pub beta_grid: Vec<f64>,
    /// Compare random vs even threshold placement (per-group) at this beta.
    pub strategy_beta: Option<f64>,
}

struct LoadedDataset {
    spec: DatasetSpec,
    train: LabeledDataset,
    test: LabeledDataset,
}

fn load_dataset(spec: &DatasetSpec) -> Result<(LabeledDataset, LabeledDataset), String> {
    let read = |path: &Path| -> Result<LabeledDataset, String> {
        match spec.format {
            DataFormat::Csv => load_csv(
                path,
                &ColumnSelector::parse(&spec.label_column),
                &spec.positive_label,
                spec.has_header,
            )
            .map_err(|e| e.to_string()),
            DataFormat::Sparse => {
                let dim = spec
                    .dimension
                    .ok_or_else(|| "sparse format requires `dimension`".to_string())?;
                load_sparse_text(path, dim).map_err(|e| e.to_string())
            }
        }
    };
    let train_full = read(&spec.train)?;
    match (&spec.test, spec.train_size) {
        (Some(test_path), _) => Ok((train_full, read(test_path)?)),
        (None, Some(train_size)) => {
            split_train_test(&train_full, train_size, spec.split_seed).map_err(|e| e.to_string())
        }
        (None, None) => Err("dataset needs either `test` or `train_size`".into()),
    }
}

struct CellResult {
    dataset: String,
    method: String,
    seed: u64,
    accuracy: Result<f64, String>,
    curves: Vec<CurveRow>,
    rates: Vec<CurveRow>,
    usage: Vec<(usize, usize)>,
}

fn run_training_cell(
    data: &LoadedDataset,
    method: &MethodSpec,
    seed: u64,
    rounds: usize,
    k: usize,
    out_dir: &Path,
) -> Result<CellResult, String> {
    let dataset = data.spec.name.clone();
    let label = method.label();
    let (config, is_pu) = match method {
        MethodSpec::AdapuPerGroup {
            beta,
            strategy,
            threshold_interval,
        } => (
            TrainConfig {
                rounds,
                shrinkage: *beta,
                thresholds_per_feature: k,
                normalization: Normalization::PerGroup,
                strategy: (*strategy).into(),
                interval: (*threshold_interval).into(),
                seed,
                ..TrainConfig::default()
            },
            true,
        ),
        MethodSpec::AdapuOverAll {
            beta,
            strategy,
            threshold_interval,
        } => (
            TrainConfig {
                rounds,
                shrinkage: *beta,
                thresholds_per_feature: k,
                normalization: Normalization::OverAll,
                strategy: (*strategy).into(),
                interval: (*threshold_interval).into(),
                seed,
                ..TrainConfig::default()
            },
            true,
        ),
        MethodSpec::Adaboost { beta } => (
            TrainConfig {
                rounds,
                shrinkage: *beta,
                thresholds_per_feature: k,
                seed,
                ..TrainConfig::default()
            },
            false,
        ),
        MethodSpec::External { .. } => unreachable!("external methods have no training cell"),
    };
    config.validate().map_err(|e| e.to_string())?;

    std::fs::create_dir_all(out_dir).map_err(|e| e.to_string())?;
    let trial = seed;

    let (ensemble, logs, rate_rows, train_metric) = if is_pu {
        let pu = make_pu(&data.train, data.spec.n_positive, data.spec.prior, seed)
            .map_err(|e| e.to_string())?;
        let (ensemble, logs) = train_adapu(&pu, &config).map_err(|e| e.to_string())?;
        let rates = evaluate_pu_train(&ensemble, &pu, true).map_err(|e| e.to_string())?;
        let rate_rows = curve_rows(&rates.curve.unwrap_or_default(), trial, &dataset, &label);
        (ensemble, logs, rate_rows, "train_pu_risk")
    } else {
        let pn = make_pn_counterpart(&data.train, data.spec.n_positive, data.spec.prior, seed)
            .map_err(|e| e.to_string())?;
        let (ensemble, logs) = train_adaboost(&pn, &config).map_err(|e| e.to_string())?;
        (ensemble, logs, Vec::new(), "train_zero_one")
    };

    ensemble
        .save_json(&out_dir.join("model.json"))
        .map_err(|e| e.to_string())?;
    write_round_logs_csv(&out_dir.join("rounds.csv"), &logs).map_err(|e| e.to_string())?;

    let evaluation = evaluate_labeled(&ensemble, &data.test, true).map_err(|e| e.to_string())?;
    let accuracy = evaluation
        .report
        .accuracy
        .ok_or_else(|| "labeled evaluation lacks accuracy".to_string())?;

    let mut curves = curve_rows(
        &evaluation.curve.unwrap_or_default(),
        trial,
        &dataset,
        &label,
    );
    for log in &logs {
        curves.push(CurveRow {
            round: log.round,
            metric: train_metric.to_string(),
            value: log.train_risk,
            trial,
            dataset: dataset.clone(),
            method: label.clone(),
        });
    }
    let usage = feature_usage(&ensemble, data.train.n_features())
        .map_err(|e| e.to_string())?
        .counts
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .collect();

    Ok(CellResult {
        dataset,
        method: label,
        seed,
        accuracy: Ok(accuracy),
        curves,
        rates: rate_rows,
        usage,
    })
}

fn run_external_cell(
    data: &LoadedDataset,
    name: &str,
    predictions: &Path,
) -> Result<CellResult, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(predictions)
        .map_err(|e| format!("cannot read {}: {e}", predictions.display()))?;
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let col = headers
        .iter()
        .position(|h| h == "prediction")
        .ok_or_else(|| "predictions file needs a `prediction` column".to_string())?;
    let mut preds: Vec<i8> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let raw = record.get(col).unwrap_or_default();
        match raw.trim() {
            "1" | "+1" => preds.push(1),
            "-1" => preds.push(-1),
            other => return Err(format!("bad prediction value {other:?}")),
        }
    }
    if preds.len() != data.test.n_examples() {
        return Err(format!(
            "{} predictions for {} test rows",
            preds.len(),
            data.test.n_examples()
        ));
    }
    let correct = preds
        .iter()
        .zip(&data.test.labels)
        .filter(|(p, y)| p == y)
        .count();
    Ok(CellResult {
        dataset: data.spec.name.clone(),
        method: format!("external:{name}"),
        seed: 0,
        accuracy: Ok(correct as f64 / preds.len() as f64),
        curves: Vec::new(),
        rates: Vec::new(),
        usage: Vec::new(),
    })
}

fn write_table_csv(
    path: &Path,
    table: &BTreeMap<(String, String), Vec<f64>>,
    failures: &BTreeMap<(String, String), usize>,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
    w.write_record([
        "dataset",
        "method",
        "mean_accuracy",
        "std_accuracy",
        "runs",
        "failures",
    ])
    .map_err(CliError::runtime)?;
    let mut keys: Vec<&(String, String)> = table.keys().chain(failures.keys()).collect();
    keys.sort();
    keys.dedup();
    for key in keys {
        let accs = table.get(key).cloned().unwrap_or_default();
        let failed = failures.get(key).copied().unwrap_or(0);
        let (mean, std) = mean_std(&accs);
        w.write_record([
            key.0.clone(),
            key.1.clone(),
            if accs.is_empty() {
                String::new()
            } else {
                format!("{mean}")
            },
            if accs.is_empty() {
                String::new()
            } else {
                format!("{std}")
            },
            accs.len().to_string(),
            failed.to_string(),
        ])
        .map_err(CliError::runtime)?;
    }
    w.flush().map_err(CliError::runtime)?;
    Ok(())
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() == 1 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    (mean, std)
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

pub fn run(args: BenchmarkArgs) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", args.spec.display())))?;
    let spec: BenchSpec =
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("bad benchmark spec: {e}")))?;
    if spec.seeds.is_empty() {
        return Err(CliError::Usage("spec needs at least one seed".into()));
    }
    if spec.datasets.is_empty() || spec.methods.is_empty() {
        return Err(CliError::Usage("spec needs datasets and methods".into()));
    }

    let out_root = args
        .out_root
        .or_else(|| std::env::var_os("ADAPU_OUTPUT_ROOT").map(PathBuf::from))
        .or_else(|| spec.output_root.clone())
        .unwrap_or_else(|| PathBuf::from("bench_out"));
    let jobs = args.jobs.or_else(|| {
        std::env::var("ADAPU_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    });

    let mut fingerprints: Vec<DatasetFingerprint> = Vec::new();
    for d in &spec.datasets {
        if let Ok(fp) = fingerprint(&d.train) {
            fingerprints.push(fp);
        }
        if let Some(test) = &d.test {
            if let Ok(fp) = fingerprint(test) {
                fingerprints.push(fp);
            }
        }
    }
    let manifest = RunManifest::new(
        json!({
            "command": "benchmark",
            "spec_file": args.spec.display().to_string(),
            "spec": &text,
            "jobs": jobs,
        }),
        fingerprints,
        spec.seeds.clone(),
        vec![
            "accuracy_table.csv".into(),
            "curves.csv".into(),
            "rates.csv".into(),
            "feature_usage.csv".into(),
        ],
    );
    manifest.write(&out_root)?;

    // load datasets once; a broken dataset fails all its cells, not the grid
    let loaded: Vec<Result<LoadedDataset, (String, String)>> = spec
        .datasets
        .into_iter()
        .map(|d| match load_dataset(&d) {
            Ok((train, test)) => Ok(LoadedDataset {
                spec: d,
                train,
                test,
            }),
            Err(e) => Err((d.name.clone(), e)),
        })
        .collect();

    let pool = {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(jobs) = jobs {
            builder = builder.num_threads(jobs.max(1));
        }
        builder.build().map_err(CliError::runtime)?
    };

    enum Cell<'a> {
        Train {
            data: &'a LoadedDataset,
            method: &'a MethodSpec,
            seed: u64,
            out_dir: PathBuf,
        },
        External {
            data: &'a LoadedDataset,
            name: &'a str,
            predictions: &'a Path,
        },
        Failed {
            dataset: String,
            method: String,
            error: String,
        },
    }

    let mut cells: Vec<Cell> = Vec::new();
    for dataset in &loaded {
        match dataset {
            Err((name, error)) => {
                for method in &spec.methods {
                    cells.push(Cell::Failed {
                        dataset: name.clone(),
                        method: method.label(),
                        error: error.clone(),
                    });
                }
            }
            Ok(data) => {
                for method in &spec.methods {
                    match method {
                        MethodSpec::External { name, predictions } => {
                            match predictions.get(&data.spec.name) {
                                Some(path) => cells.push(Cell::External {
                                    data,
                                    name,
                                    predictions: path,
                                }),
                                None => cells.push(Cell::Failed {
                                    dataset: data.spec.name.clone(),
                                    method: method.label(),
                                    error: "no predictions file for this dataset".into(),
                                }),
                            }
                        }
                        _ => {
                            for &seed in &spec.seeds {
                                let out_dir = out_root
                                    .join(sanitize(&data.spec.name))
                                    .join(sanitize(&method.label()))
                                    .join(format!("seed_{seed}"));
                                cells.push(Cell::Train {
                                    data,
                                    method,
                                    seed,
                                    out_dir,
                                });
                            }
                        }
                    }
                }
            }
        }
    }

    let results: Vec<CellResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| match cell {
                Cell::Train {
                    data,
                    method,
                    seed,
                    out_dir,
                } => run_training_cell(data, method, *seed, spec.t, spec.k, out_dir)
                    .unwrap_or_else(|e| CellResult {
                        dataset: data.spec.name.clone(),
                        method: method.label(),
                        seed: *seed,
                        accuracy: Err(e),
                        curves: Vec::new(),
                        rates: Vec::new(),
                        usage: Vec::new(),
                    }),
                Cell::External {
                    data,
                    name,
                    predictions,
                } => run_external_cell(data, name, predictions).unwrap_or_else(|e| CellResult {
                    dataset: data.spec.name.clone(),
                    method: format!("external:{name}"),
                    seed: 0,
                    accuracy: Err(e),
                    curves: Vec::new(),
                    rates: Vec::new(),
                    usage: Vec::new(),
                }),
                Cell::Failed {
                    dataset,
                    method,
                    error,
                } => CellResult {
                    dataset: dataset.clone(),
                    method: method.clone(),
                    seed: 0,
                    accuracy: Err(error.clone()),
                    curves: Vec::new(),
                    rates: Vec::new(),
                    usage: Vec::new(),
                },
            })
            .collect()
    });

    let mut table: BTreeMap<(String, String), Vec<f64>> = BTreeMap::new();
    let mut failures: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut all_curves: Vec<CurveRow> = Vec::new();
    let mut all_rates: Vec<CurveRow> = Vec::new();
    let mut usage_rows: Vec<UsageRow> = Vec::new();
    let mut failure_messages: Vec<String> = Vec::new();
    for r in results {
        let key = (r.dataset.clone(), r.method.clone());
        match r.accuracy {
            Ok(acc) => table.entry(key).or_default().push(acc),
            Err(e) => {
                *failures.entry(key).or_default() += 1;
                failure_messages.push(format!(
                    "{} / {} (seed {}): {e}",
                    r.dataset, r.method, r.seed
                ));
            }
        }
        all_curves.extend(r.curves);
        all_rates.extend(r.rates);
        for (feature, count) in r.usage {
            usage_rows.push((r.dataset.clone(), r.method.clone(), r.seed, feature, count));
        }
    }

    write_table_csv(&out_root.join("accuracy_table.csv"), &table, &failures)?;
    write_curves_csv(&out_root.join("curves.csv"), &all_curves)?;
    write_curves_csv(&out_root.join("rates.csv"), &all_rates)?;
    {
        let path = out_root.join("feature_usage.csv");
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        w.write_record(["dataset", "method", "trial", "feature", "count"])
            .map_err(CliError::runtime)?;
        for (dataset, method, trial, feature, count) in &usage_rows {
            w.write_record([
                dataset.clone(),
                method.clone(),
                trial.to_string(),
                feature.to_string(),
                count.to_string(),
            ])
            .map_err(CliError::runtime)?;
        }
        w.flush().map_err(CliError::runtime)?;
    }

    run_sweeps(
        &spec.sweeps,
        &loaded,
        &spec.seeds,
        spec.t,
        spec.k,
        &out_root,
        &pool,
    )?;

    // printed table: methods as rows, datasets as columns, mean (std) in percent
    let datasets: Vec<String> = loaded
        .iter()
        .map(|d| match d {
            Ok(d) => d.spec.name.clone(),
            Err((name, _)) => name.clone(),
        })
        .collect();
    let methods: Vec<String> = spec.methods.iter().map(|m| m.label()).collect();
    let width = methods.iter().map(|m| m.len()).max().unwrap_or(8).max(8);
    print!("{:width$}", "method");
    for d in &datasets {
        print!("  {d:>16}");
    }
    println!();
    for m in &methods {
        print!("{m:width$}");
        for d in &datasets {
            let key = (d.clone(), m.clone());
            match table.get(&key) {
                Some(accs) if !accs.is_empty() => {
                    let (mean, std) = mean_std(accs);
                    print!(
                        "  {:>16}",
                        format!("{:.2} ({:.2})", mean * 100.0, std * 100.0)
                    );
                }
                _ => print!("  {:>16}", "FAILED"),
            }
        }
        println!();
    }

    if !failure_messages.is_empty() {
        eprintln!("{} cell(s) failed:", failure_messages.len());
        for m in &failure_messages {
            eprintln!("  {m}");
        }
        return Err(CliError::Runtime(format!(
            "{} benchmark cell(s) failed",
            failure_messages.len()
        )));
    }
    println!("outputs written to {}", out_root.display());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn run_sweeps(
    sweeps: &Sweeps,
    loaded: &[Result<LoadedDataset, (String, String)>],
    seeds: &[u64],
    rounds: usize,
    k: usize,
    out_root: &Path,
    pool: &rayon::ThreadPool,
) -> Result<(), CliError> {
    let datasets: Vec<&LoadedDataset> = loaded.iter().filter_map(|d| d.as_ref().ok()).collect();

    if !sweeps.beta_grid.is_empty() {
        let rows: Mutex<Vec<BetaSweepRow>> = Mutex::new(Vec::new());
        let mut jobs = Vec::new();
        for data in &datasets {
            for normalization in [Normalization::PerGroup, Normalization::OverAll] {
                for &beta in &sweeps.beta_grid {
                    for &seed in seeds {
                        jobs.push((*data, normalization, beta, seed));
                    }
                }
            }
        }
        pool.install(|| {
            jobs.par_iter()
                .for_each(|(data, normalization, beta, seed)| {
                    let config = TrainConfig {
                        rounds,
                        shrinkage: *beta,
                        thresholds_per_feature: k,
                        normalization: *normalization,
                        seed: *seed,
                        ..TrainConfig::default()
                    };
                    let outcome =
                        make_pu(&data.train, data.spec.n_positive, data.spec.prior, *seed)
                            .and_then(|pu| train_adapu(&pu, &config))
                            .and_then(|(ensemble, _)| {
                                evaluate_labeled(&ensemble, &data.test, false)
                            });
                    if let Ok(eval) = outcome {
                        if let Some(acc) = eval.report.accuracy {
                            rows.lock().unwrap().push((
                                data.spec.name.clone(),
                                normalization.to_string(),
                                *beta,
                                *seed,
                                acc,
                            ));
                        }
                    }
                });
        });
        let mut rows = rows.into_inner().unwrap();
        rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let path = out_root.join("beta_sweep.csv");
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        w.write_record(["dataset", "mode", "beta", "seed", "accuracy"])
            .map_err(CliError::runtime)?;
        for (dataset, mode, beta, seed, acc) in &rows {
            w.write_record([
                dataset.clone(),
                mode.clone(),
                format!("{beta}"),
                seed.to_string(),
                format!("{acc}"),
            ])
            .map_err(CliError::runtime)?;
        }
        w.flush().map_err(CliError::runtime)?;
    }

    if let Some(beta) = sweeps.strategy_beta {
        let rows: Mutex<Vec<CurveRow>> = Mutex::new(Vec::new());
        let usage: Mutex<Vec<UsageRow>> = Mutex::new(Vec::new());
        let mut jobs = Vec::new();
        for data in &datasets {
            for strategy in [ThresholdStrategy::Random, ThresholdStrategy::Even] {
                for &seed in seeds {
                    jobs.push((*data, strategy, seed));
                }
            }
        }
        pool.install(|| {
            jobs.par_iter().for_each(|(data, strategy, seed)| {
                let label = match strategy {
                    ThresholdStrategy::Random => "random-thresholds",
                    ThresholdStrategy::Even => "even-thresholds",
                };
                let config = TrainConfig {
                    rounds,
                    shrinkage: beta,
                    thresholds_per_feature: k,
                    strategy: *strategy,
                    seed: *seed,
                    ..TrainConfig::default()
                };
                let outcome = make_pu(&data.train, data.spec.n_positive, data.spec.prior, *seed)
                    .and_then(|pu| train_adapu(&pu, &config));
                if let Ok((ensemble, _)) = outcome {
                    if let Ok(eval) = evaluate_labeled(&ensemble, &data.test, true) {
                        let curve = eval.curve.unwrap_or_default();
                        rows.lock().unwrap().extend(curve_rows(
                            &curve,
                            *seed,
                            &data.spec.name,
                            label,
                        ));
                    }
                    if let Ok(u) = feature_usage(&ensemble, data.train.n_features()) {
                        let mut usage = usage.lock().unwrap();
                        for (feature, count) in u.counts.into_iter().enumerate() {
                            if count > 0 {
                                usage.push((
                                    data.spec.name.clone(),
                                    label.to_string(),
                                    *seed,
                                    feature,
                                    count,
                                ));
                            }
                        }
                    }
                }
            });
        });
        let mut rows = rows.into_inner().unwrap();
        rows.sort_by(|a, b| {
            (&a.dataset, &a.method, a.trial, a.round, &a.metric)
                .cmp(&(&b.dataset, &b.method, b.trial, b.round, &b.metric))
        });
        write_curves_csv(&out_root.join("strategy_curves.csv"), &rows)?;
        let mut usage = usage.into_inner().unwrap();
        usage.sort();
        let path = out_root.join("strategy_feature_usage.csv");
        let mut w = csv::Writer::from_path(&path)
            .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", path.display())))?;
        w.write_record(["dataset", "method", "trial", "feature", "count"])
            .map_err(CliError::runtime)?;
        for (dataset, method, trial, feature, count) in &usage {
            w.write_record([
                dataset.clone(),
                method.clone(),
                trial.to_string(),
                feature.to_string(),
                count.to_string(),
            ])
            .map_err(CliError::runtime)?;
        }
        w.flush().map_err(CliError::runtime)?;
    }
    Ok(())
}
