//! Dataset containers, file loaders, and the sampling protocols that derive
//! positive-unlabeled and positive-negative training sets from labeled data.

use std::io::Write;
use std::path::Path;

use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::seeds;

/// Fully labeled binary dataset. Labels are strictly +1 / -1.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub instances: Array2<f64>,
    pub labels: Vec<i8>,
    pub feature_names: Option<Vec<String>>,
}

impl LabeledDataset {
    pub fn new(
        instances: Array2<f64>,
        labels: Vec<i8>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let (n, d) = instances.dim();
        if n < 1 || d < 1 {
            return Err(Error::InvalidData(format!(
                "dataset must have at least one row and one feature, got {n}x{d}"
            )));
        }
        if labels.len() != n {
            return Err(Error::InvalidData(format!(
                "label count {} does not match row count {n}",
                labels.len()
            )));
        }
        if let Some(bad) = labels.iter().find(|&&y| y != 1 && y != -1) {
            return Err(Error::InvalidData(format!(
                "labels must be +1 or -1, found {bad}"
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != d {
                return Err(Error::InvalidData(format!(
                    "{} feature names for {d} features",
                    names.len()
                )));
            }
        }
        if instances.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData(
                "feature values must be finite (no NaN or infinity)".into(),
            ));
        }
        Ok(Self {
            instances,
            labels,
            feature_names,
        })
    }

    pub fn n_examples(&self) -> usize {
        self.instances.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.instances.ncols()
    }

    /// Row indices carrying label +1, in row order.
    pub fn positive_indices(&self) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &y)| y == 1)
            .map(|(i, _)| i)
            .collect()
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Result<Self> {
        let instances = self.instances.select(Axis(0), rows);
        let labels = rows.iter().map(|&i| self.labels[i]).collect();
        LabeledDataset::new(instances, labels, self.feature_names.clone())
    }
}

/// Case-control positive-unlabeled dataset with a known class prior.
#[derive(Debug, Clone)]
pub struct PUDataset {
    pub positives: Array2<f64>,
    pub unlabeled: Array2<f64>,
    pub prior: f64,
}

impl PUDataset {
    pub fn new(positives: Array2<f64>, unlabeled: Array2<f64>, prior: f64) -> Result<Self> {
        if positives.nrows() < 1 || unlabeled.nrows() < 1 {
            return Err(Error::InvalidData(
                "need at least one positive and one unlabeled example".into(),
            ));
        }
        if positives.ncols() != unlabeled.ncols() {
            return Err(Error::InvalidData(format!(
                "feature dimension mismatch: positives have {}, unlabeled have {}",
                positives.ncols(),
                unlabeled.ncols()
            )));
        }
        if !(prior > 0.0 && prior < 1.0) {
            return Err(Error::InvalidData(format!(
                "class prior must lie strictly inside (0,1), got {prior}"
            )));
        }
        if positives
            .iter()
            .chain(unlabeled.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidData(
                "feature values must be finite (no NaN or infinity)".into(),
            ));
        }
        Ok(Self {
            positives,
            unlabeled,
            prior,
        })
    }

    pub fn n_positive(&self) -> usize {
        self.positives.nrows()
    }

    pub fn n_unlabeled(&self) -> usize {
        self.unlabeled.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.positives.ncols()
    }
}

/// K-fold split request.
#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub fold_count: usize,
    pub seed: u64,
}

/// How to locate the label column of a CSV file.
#[derive(Debug, Clone)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    /// Parse a CLI-style selector: a bare integer is an index, anything else a name.
    pub fn parse(raw: &str) -> Self {
        match raw.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(raw.to_string()),
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(
    path: &Path,
    line: usize,
    column: impl Into<String>,
    message: impl Into<String>,
) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column: column.into(),
        message: message.into(),
    }
}

/// Load a labeled dataset from an RFC-4180-style CSV file.
///
/// The label column is mapped to +1 where its raw value equals
/// `positive_label_value` and to -1 otherwise. More than two distinct raw
/// label values are rejected rather than silently collapsed. Missing cells
/// are rejected; there is no imputation.
pub fn load_csv(
    path: &Path,
    label_column: &ColumnSelector,
    positive_label_value: &str,
    has_header: bool,
) -> Result<LabeledDataset> {
    if matches!(label_column, ColumnSelector::Name(_)) && !has_header {
        return Err(Error::InvalidConfig(
            "selecting the label column by name requires a header row".into(),
        ));
    }
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .from_path(path)
        .map_err(|e| Error::InvalidData(format!("cannot open {}: {e}", path.display())))?;

    let headers: Option<Vec<String>> = if has_header {
        Some(
            reader
                .headers()
                .map_err(|e| Error::InvalidData(format!("bad header in {}: {e}", path.display())))?
                .iter()
                .map(str::to_string)
                .collect(),
        )
    } else {
        None
    };

    let label_idx = match label_column {
        ColumnSelector::Index(i) => *i,
        ColumnSelector::Name(name) => {
            let headers = headers.as_ref().expect("checked above");
            headers.iter().position(|h| h == name).ok_or_else(|| {
                Error::InvalidData(format!(
                    "label column {name:?} not found in header of {}",
                    path.display()
                ))
            })?
        }
    };

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut width: Option<usize> = None;
    let header_offset = if has_header { 1 } else { 0 };

    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 1 + header_offset;
        let record = record.map_err(|e| parse_err(path, line, "-", e.to_string()))?;
        match width {
            None => {
                if label_idx >= record.len() {
                    return Err(parse_err(
                        path,
                        line,
                        label_idx.to_string(),
                        format!(
                            "label column {label_idx} out of range for {} columns",
                            record.len()
                        ),
                    ));
                }
                width = Some(record.len());
            }
            Some(w) if w != record.len() => {
                return Err(parse_err(
                    path,
                    line,
                    "-",
                    format!("expected {w} columns, found {}", record.len()),
                ));
            }
            _ => {}
        }
        let mut row = Vec::with_capacity(record.len() - 1);
        for (col, cell) in record.iter().enumerate() {
            if col == label_idx {
                if cell.is_empty() {
                    return Err(parse_err(
                        path,
                        line,
                        col.to_string(),
                        "missing label value",
                    ));
                }
                raw_labels.push(cell.to_string());
                continue;
            }
            if cell.is_empty() {
                return Err(parse_err(path, line, col.to_string(), "missing value"));
            }
            let value: f64 = cell.trim().parse().map_err(|_| {
                parse_err(
                    path,
                    line,
                    col.to_string(),
                    format!("cannot parse {cell:?} as a number"),
                )
            })?;
            row.push(value);
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(Error::InvalidData(format!(
            "{} contains no data rows",
            path.display()
        )));
    }

    let mut distinct: Vec<&str> = Vec::new();
    for raw in &raw_labels {
        if !distinct.contains(&raw.as_str()) {
            distinct.push(raw);
        }
    }
    if distinct.len() > 2 {
        return Err(Error::InvalidData(format!(
            "label column has {} distinct values {:?}; refusing to collapse more than two classes",
            distinct.len(),
            distinct
        )));
    }

    let labels: Vec<i8> = raw_labels
        .iter()
        .map(|raw| if raw == positive_label_value { 1 } else { -1 })
        .collect();

    let d = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let instances = Array2::from_shape_vec((flat.len() / d, d), flat)
        .map_err(|e| Error::InvalidData(e.to_string()))?;

    let feature_names = headers.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|(i, _)| *i != label_idx)
            .map(|(_, name)| name)
            .collect()
    });

    LabeledDataset::new(instances, labels, feature_names)
}

/// Load a feature-only CSV (no label column), e.g. a file of positives.
pub fn load_features_csv(
    path: &Path,
    has_header: bool,
) -> Result<(Array2<f64>, Option<Vec<String>>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .from_path(path)
        .map_err(|e| Error::InvalidData(format!("cannot open {}: {e}", path.display())))?;
    let headers: Option<Vec<String>> = if has_header {
        Some(
            reader
                .headers()
                .map_err(|e| Error::InvalidData(format!("bad header in {}: {e}", path.display())))?
                .iter()
                .map(str::to_string)
                .collect(),
        )
    } else {
        None
    };
    let header_offset = if has_header { 1 } else { 0 };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (row_idx, record) in reader.records().enumerate() {
        let line = row_idx + 1 + header_offset;
        let record = record.map_err(|e| parse_err(path, line, "-", e.to_string()))?;
        let mut row = Vec::with_capacity(record.len());
        for (col, cell) in record.iter().enumerate() {
            if cell.is_empty() {
                return Err(parse_err(path, line, col.to_string(), "missing value"));
            }
            let value: f64 = cell.trim().parse().map_err(|_| {
                parse_err(
                    path,
                    line,
                    col.to_string(),
                    format!("cannot parse {cell:?} as a number"),
                )
            })?;
            row.push(value);
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    path,
                    line,
                    "-",
                    format!("expected {} columns, found {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::InvalidData(format!(
            "{} contains no data rows",
            path.display()
        )));
    }
    let d = rows[0].len();
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    let matrix = Array2::from_shape_vec((flat.len() / d, d), flat)
        .map_err(|e| Error::InvalidData(e.to_string()))?;
    Ok((matrix, headers))
}

/// Write a labeled dataset as CSV with a trailing `label` column.
///
/// Values are printed with the shortest representation that round-trips, so
/// `load_csv(save_csv(data))` reproduces the matrix bit-exactly.
pub fn save_csv(data: &LabeledDataset, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    let names: Vec<String> = match &data.feature_names {
        Some(n) => n.clone(),
        None => (0..data.n_features()).map(|i| format!("x{i}")).collect(),
    };
    writeln!(file, "{},label", names.join(",")).map_err(|e| io_err(path, e))?;
    for (row, y) in data.instances.rows().into_iter().zip(&data.labels) {
        let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
        writeln!(file, "{},{}", cells.join(","), y).map_err(|e| io_err(path, e))?;
    }
    Ok(())
}

/// Load the `label index:value ...` sparse text format into a dense matrix.
///
/// Indices are 1-based, strictly increasing within a line, and at most
/// `dimension`; absent indices are filled with 0.0.
pub fn load_sparse_text(path: &Path, dimension: usize) -> Result<LabeledDataset> {
    if dimension == 0 {
        return Err(Error::InvalidConfig("dimension must be positive".into()));
    }
    let content = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut rows: Vec<f64> = Vec::new();
    let mut labels: Vec<i8> = Vec::new();
    for (line_idx, line) in content.lines().enumerate() {
        let line_no = line_idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let label_tok = parts.next().expect("non-empty line");
        let label: i64 = label_tok.parse().map_err(|_| {
            parse_err(
                path,
                line_no,
                "label",
                format!("cannot parse label {label_tok:?}"),
            )
        })?;
        let label: i8 = match label {
            1 => 1,
            -1 => -1,
            other => {
                return Err(parse_err(
                    path,
                    line_no,
                    "label",
                    format!("label must be +1 or -1, got {other}"),
                ))
            }
        };
        let mut row = vec![0.0f64; dimension];
        let mut last_idx = 0usize;
        for tok in parts {
            let (idx_str, val_str) = tok
                .split_once(':')
                .ok_or_else(|| parse_err(path, line_no, tok, "expected index:value"))?;
            let idx: usize = idx_str
                .parse()
                .map_err(|_| parse_err(path, line_no, tok, format!("bad index {idx_str:?}")))?;
            if idx == 0 || idx > dimension {
                return Err(parse_err(
                    path,
                    line_no,
                    tok,
                    format!("index {idx} out of range 1..={dimension}"),
                ));
            }
            if idx <= last_idx {
                return Err(parse_err(
                    path,
                    line_no,
                    tok,
                    format!("non-increasing index {idx} after {last_idx}"),
                ));
            }
            let value: f64 = val_str
                .parse()
                .map_err(|_| parse_err(path, line_no, tok, format!("bad value {val_str:?}")))?;
            row[idx - 1] = value;
            last_idx = idx;
        }
        rows.extend_from_slice(&row);
        labels.push(label);
    }
    if labels.is_empty() {
        return Err(Error::InvalidData(format!(
            "{} contains no data rows",
            path.display()
        )));
    }
    let instances = Array2::from_shape_vec((labels.len(), dimension), rows)
        .map_err(|e| Error::InvalidData(e.to_string()))?;
    LabeledDataset::new(instances, labels, None)
}

/// Derive a PU dataset: `n_p` positives sampled without replacement, and all
/// instances (labels discarded) as the unlabeled pool.
pub fn make_pu(data: &LabeledDataset, n_p: usize, prior: f64, seed: u64) -> Result<PUDataset> {
    if n_p == 0 {
        return Err(Error::InvalidConfig("n_p must be positive".into()));
    }
    let pos = data.positive_indices();
    if pos.len() < n_p {
        return Err(Error::InvalidData(format!(
            "requested {n_p} positives but only {} are available",
            pos.len()
        )));
    }
    let mut rng = seeds::rng_for(seed, seeds::DOMAIN_PU_SAMPLING, 0);
    let mut chosen = rand::seq::index::sample(&mut rng, pos.len(), n_p).into_vec();
    chosen.sort_unstable();
    let rows: Vec<usize> = chosen.into_iter().map(|i| pos[i]).collect();
    let positives = data.instances.select(Axis(0), &rows);
    let unlabeled = data.instances.clone();
    PUDataset::new(positives, unlabeled, prior)
}

/// Number of negatives paired with `n_p` positives in the PN counterpart:
/// `floor(((1 - prior) / (2 * prior))^2 * n_p)`.
pub fn pn_negative_count(n_p: usize, prior: f64) -> usize {
    let ratio = (1.0 - prior) / (2.0 * prior);
    (ratio * ratio * n_p as f64).floor() as usize
}

/// Derive the fully labeled PN counterpart of a PU sampling: `n_p` positives
/// and `pn_negative_count` negatives, shuffled by the seed.
pub fn make_pn_counterpart(
    data: &LabeledDataset,
    n_p: usize,
    prior: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if n_p == 0 {
        return Err(Error::InvalidConfig("n_p must be positive".into()));
    }
    if !(prior > 0.0 && prior < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "class prior must lie strictly inside (0,1), got {prior}"
        )));
    }
    let n_n = pn_negative_count(n_p, prior);
    let pos: Vec<usize> = data.positive_indices();
    let neg: Vec<usize> = data
        .labels
        .iter()
        .enumerate()
        .filter(|(_, &y)| y == -1)
        .map(|(i, _)| i)
        .collect();
    if pos.len() < n_p || neg.len() < n_n {
        return Err(Error::InvalidData(format!(
            "need {n_p} positives and {n_n} negatives, have {} and {}",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = seeds::rng_for(seed, seeds::DOMAIN_PN_SAMPLING, 0);
    let chosen_pos = rand::seq::index::sample(&mut rng, pos.len(), n_p).into_vec();
    let chosen_neg = rand::seq::index::sample(&mut rng, neg.len(), n_n).into_vec();
    let mut rows: Vec<usize> = chosen_pos
        .into_iter()
        .map(|i| pos[i])
        .chain(chosen_neg.into_iter().map(|i| neg[i]))
        .collect();
    rows.shuffle(&mut rng);
    data.select(&rows)
}

/// Disjoint k-fold (train, validation) index sets covering `0..n`.
/// Validation sizes differ by at most one; output is deterministic per seed.
pub fn kfold_indices(n: usize, spec: SplitSpec) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    if spec.fold_count < 2 {
        return Err(Error::InvalidConfig(format!(
            "fold_count must be at least 2, got {}",
            spec.fold_count
        )));
    }
    if n < spec.fold_count {
        return Err(Error::InvalidData(format!(
            "cannot split {n} examples into {} folds",
            spec.fold_count
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeds::rng_for(spec.seed, seeds::DOMAIN_FOLDS, 0);
    order.shuffle(&mut rng);

    let base = n / spec.fold_count;
    let extra = n % spec.fold_count;
    let mut folds = Vec::with_capacity(spec.fold_count);
    let mut start = 0usize;
    for k in 0..spec.fold_count {
        let size = base + usize::from(k < extra);
        let validation: Vec<usize> = order[start..start + size].to_vec();
        let train: Vec<usize> = order[..start]
            .iter()
            .chain(order[start + size..].iter())
            .copied()
            .collect();
        folds.push((train, validation));
        start += size;
    }
    Ok(folds)
}

/// Shuffle rows by seed and split into a `train_size` head and the remaining tail.
pub fn split_train_test(
    data: &LabeledDataset,
    train_size: usize,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let n = data.n_examples();
    if train_size == 0 || train_size >= n {
        return Err(Error::InvalidConfig(format!(
            "train_size must be in 1..{n}, got {train_size}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = seeds::rng_for(seed, seeds::DOMAIN_SPLIT, 0);
    order.shuffle(&mut rng);
    let train = data.select(&order[..train_size])?;
    let test = data.select(&order[train_size..])?;
    Ok((train, test))
}

/// Sample a two-Gaussian synthetic labeled set: positives from N(+mean, 1),
/// negatives from N(-mean, 1) in one dimension, with P(y=+1) = prior.
pub fn synth_gaussian(n: usize, mean: f64, prior: f64, seed: u64) -> Result<LabeledDataset> {
    let mut rng = seeds::rng_for(seed, seeds::DOMAIN_PU_SAMPLING, 1);
    let mut values = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let y: i8 = if rng.gen::<f64>() < prior { 1 } else { -1 };
        // Box-Muller transform
        let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
        let u2: f64 = rng.gen();
        let z = (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
        values.push(z + mean * f64::from(y));
        labels.push(y);
    }
    let instances =
        Array2::from_shape_vec((n, 1), values).map_err(|e| Error::InvalidData(e.to_string()))?;
    LabeledDataset::new(instances, labels, None)
}
