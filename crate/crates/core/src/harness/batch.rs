use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::report::{indexes, AggregateReport};
use super::{RunConfig, SpecSource, GROUND_TRUTH_SUFFIX, SEGMENTATION_SUFFIX};
use crate::dsl::{format_number, Bindings};
use crate::grid::{BoolImage, ColorImage};
use crate::imaging::{intensity, load_png};
use crate::metrics::MetricsRecord;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum CaseStatus {
    Ok,
    Skipped(String),
    Error(String),
}

impl CaseStatus {
    pub fn label(&self) -> String {
        match self {
            CaseStatus::Ok => "ok".into(),
            CaseStatus::Skipped(reason) => format!("skipped: {reason}"),
            CaseStatus::Error(message) => format!("error: {message}"),
        }
    }
}

/// The outcome of one image. `metrics` is present iff the status is ok.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub metrics: Option<MetricsRecord>,
    pub seconds: f64,
    pub status: CaseStatus,
}

/// Binarizes a ground-truth or saved mask image: any positive intensity.
fn positive(img: &ColorImage) -> BoolImage {
    let inty = intensity(img, Default::default());
    BoolImage::from_fn(img.dims(), |x, y| inty.get(x, y) > 0.0)
}

/// Runs the specification on `<dataset>/<name>.png` and scores the saved
/// segmentation against `<dataset>/<name>_seg_RGB.png`.
pub fn run_case(spec: &SpecSource, dataset: &Path, name: &str, output: &Path, config: &RunConfig) -> CaseResult {
    let start = Instant::now();
    let outcome = score_case(spec, dataset, name, output, config);
    let seconds = if config.timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    };
    match outcome {
        Ok(m) => CaseResult {
            name: name.to_string(),
            metrics: Some(m),
            seconds,
            status: CaseStatus::Ok,
        },
        Err(e) => CaseResult {
            name: name.to_string(),
            metrics: None,
            seconds,
            status: CaseStatus::Error(e.to_string()),
        },
    }
}

fn score_case(spec: &SpecSource, dataset: &Path, name: &str, output: &Path, config: &RunConfig) -> Result<MetricsRecord> {
    let mut bindings = Bindings::new();
    for (k, v) in &config.defines {
        bindings.define(k, v);
    }
    bindings
        .define("INPUTDIR", dataset.display().to_string())
        .define("OUTPUTDIR", output.display().to_string())
        .define("NAME", name);
    super::run_script(spec, &bindings, config)?;
    let seg = load_png(output.join(format!("{name}{SEGMENTATION_SUFFIX}")))?;
    let truth = load_png(dataset.join(format!("{name}{GROUND_TRUTH_SUFFIX}")))?;
    MetricsRecord::compare(&positive(&seg), &positive(&truth))
}

/// Case names in a dataset directory, sorted.
pub fn discover_cases(dataset: &Path) -> Result<Vec<String>> {
    let io = |e| Error::Io {
        path: dataset.to_path_buf(),
        source: e,
    };
    let mut names = Vec::new();
    for entry in std::fs::read_dir(dataset).map_err(io)? {
        let entry = entry.map_err(io)?;
        let file = entry.file_name();
        let Some(file) = file.to_str() else { continue };
        if file.ends_with(GROUND_TRUTH_SUFFIX) || !entry.path().is_file() {
            continue;
        }
        if let Some(stem) = file.strip_suffix(".png") {
            names.push(stem.to_string());
        }
    }
    names.sort();
    Ok(names)
}

/// Names listed one per line; blank lines and `#` comments are ignored.
pub fn read_skip_list(path: &Path) -> Result<BTreeSet<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

#[derive(Clone, Debug)]
pub struct BatchOutcome {
    pub cases: Vec<CaseResult>,
    pub report: AggregateReport,
    pub csv_path: PathBuf,
    pub report_path: PathBuf,
}

pub const CSV_HEADER: [&str; 12] = [
    "name",
    "tp",
    "tn",
    "fp",
    "fn",
    "dice",
    "jaccard",
    "sensitivity",
    "specificity",
    "accuracy",
    "seconds",
    "status",
];

/// Runs every case of `dataset`, then writes `results.csv` and
/// `report.txt` into `output`.
pub fn run_batch(
    dataset: &Path,
    spec: &SpecSource,
    output: &Path,
    config: &RunConfig,
    skip: &BTreeSet<String>,
) -> Result<BatchOutcome> {
    let names = discover_cases(dataset)?;
    if names.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no <NAME>.png images found in {}",
            dataset.display()
        )));
    }
    std::fs::create_dir_all(output).map_err(|e| Error::Io {
        path: output.to_path_buf(),
        source: e,
    })?;
    let cases: Vec<CaseResult> = names
        .par_iter()
        .map(|name| {
            if skip.contains(name) {
                CaseResult {
                    name: name.clone(),
                    metrics: None,
                    seconds: 0.0,
                    status: CaseStatus::Skipped("listed in skip list".into()),
                }
            } else {
                run_case(spec, dataset, name, output, config)
            }
        })
        .collect();

    let records: Vec<MetricsRecord> = cases.iter().filter_map(|c| c.metrics).collect();
    let skipped = cases
        .iter()
        .filter(|c| matches!(c.status, CaseStatus::Skipped(_)))
        .count();
    let errors = cases.len() - records.len() - skipped;
    let report = AggregateReport::from_records(&records, skipped, errors);

    let csv_path = output.join("results.csv");
    write_csv(&csv_path, &cases)?;
    let report_path = output.join("report.txt");
    std::fs::write(&report_path, report.to_string()).map_err(|e| Error::Io {
        path: report_path.clone(),
        source: e,
    })?;
    Ok(BatchOutcome {
        cases,
        report,
        csv_path,
        report_path,
    })
}

fn write_csv(path: &Path, cases: &[CaseResult]) -> Result<()> {
    let io_err = |e: csv::Error| Error::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(io_err)?;
    w.write_record(CSV_HEADER).map_err(io_err)?;
    for case in cases {
        let mut row = vec![case.name.clone()];
        match &case.metrics {
            Some(m) => {
                let c = m.counts;
                row.extend([c.tp, c.tn, c.fp, c.fn_].map(|v| v.to_string()));
                row.extend(indexes(m).map(format_number));
            }
            None => row.extend(std::iter::repeat_n(String::new(), 9)),
        }
        row.push(format_number(case.seconds));
        row.push(case.status.label());
        w.write_record(&row).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
