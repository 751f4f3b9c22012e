use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde_json::json;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Gnuplot,
    VegaLite,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Long-format curves CSV (round,metric,value,trial,dataset,method).
    #[arg(long)]
    pub curves: PathBuf,
    #[arg(long, value_enum, default_value_t = PlotFormat::Gnuplot)]
    pub format: PlotFormat,
    /// Output script/spec path.
    #[arg(long)]
    pub out: PathBuf,
}

fn metrics_in(path: &PathBuf) -> Result<Vec<String>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::runtime(format!("cannot read {}: {e}", path.display())))?;
    let headers = reader.headers().map_err(CliError::runtime)?.clone();
    let metric_idx = headers
        .iter()
        .position(|h| h == "metric")
        .ok_or_else(|| CliError::Usage("curves file lacks a `metric` column".into()))?;
    let mut metrics = Vec::new();
    for record in reader.records() {
        let record = record.map_err(CliError::runtime)?;
        let m = record.get(metric_idx).unwrap_or_default().to_string();
        if !metrics.contains(&m) {
            metrics.push(m);
        }
    }
    Ok(metrics)
}

pub fn run(args: PlotArgs) -> Result<(), CliError> {
    let metrics = metrics_in(&args.curves)?;
    let csv_path = args.curves.display().to_string();
    let text = match args.format {
        PlotFormat::Gnuplot => {
            let mut s = String::new();
            s.push_str("set datafile separator ','\n");
            s.push_str("set key outside\n");
            s.push_str("set xlabel 'round'\n");
            for metric in &metrics {
                s.push_str(&format!(
                    "set ylabel '{metric}'\nplot '{csv_path}' using 1:(strcol(2) eq '{metric}' ? $3 : 1/0) \
                     with points title '{metric}'\npause -1\n"
                ));
            }
            s
        }
        PlotFormat::VegaLite => {
            let spec = json!({
                "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
                "data": {"url": csv_path, "format": {"type": "csv"}},
                "mark": "line",
                "encoding": {
                    "x": {"field": "round", "type": "quantitative"},
                    "y": {"field": "value", "type": "quantitative"},
                    "color": {"field": "method", "type": "nominal"},
                    "detail": {"field": "trial", "type": "nominal"},
                    "facet": {"field": "metric", "type": "nominal", "columns": 2}
                }
            });
            let mut s = serde_json::to_string_pretty(&spec).map_err(CliError::runtime)?;
            s.push('\n');
            s
        }
    };
    std::fs::write(&args.out, text)
        .map_err(|e| CliError::runtime(format!("cannot write {}: {e}", args.out.display())))?;
    println!("wrote {} ({} metrics)", args.out.display(), metrics.len());
    Ok(())
}
