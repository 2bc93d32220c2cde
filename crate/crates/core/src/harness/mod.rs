//! Running the nevus specification over single images and whole datasets.
//!
//! A dataset is a directory of `<NAME>.png` images, each paired with a
//! `<NAME>_seg_RGB.png` ground truth. The specification is an ordinary
//! script run with `INPUTDIR`, `NAME` and `OUTPUTDIR` bound; scoring reads
//! back the saved `<NAME>_nevSegV0.png` and compares it natively with the
//! ground truth.

mod batch;
pub mod corpus;
mod report;
pub mod synthetic;

pub use batch::{discover_cases, read_skip_list, run_batch, run_case, BatchOutcome, CaseResult, CaseStatus};
pub use report::{AggregateReport, DiceBin};

use std::path::{Path, PathBuf};

use crate::dsl::{Bindings, EvalOptions, ImportResolver, Program, RunReport, ScriptError};

/// Suffix of ground-truth images next to each input image.
pub const GROUND_TRUTH_SUFFIX: &str = "_seg_RGB.png";
/// Suffix of the segmentation each case must save into the output directory.
pub const SEGMENTATION_SUFFIX: &str = "_nevSegV0.png";

/// Settings shared by single runs and batches.
#[derive(Clone, Debug, Default)]
pub struct RunConfig {
    pub options: EvalOptions,
    /// Extra directory searched for imports before the embedded corpus.
    pub stdlib_dir: Option<PathBuf>,
    /// Definitions added to every run (`NAME` etc. are set per case).
    pub defines: Vec<(String, String)>,
    /// Record wall-clock seconds; when off the CSV carries zeros and is
    /// byte-for-byte reproducible.
    pub timing: bool,
}

impl RunConfig {
    pub fn resolver(&self) -> ImportResolver {
        let mut r = ImportResolver::new();
        if let Some(dir) = &self.stdlib_dir {
            r = r.with_search_dir(dir);
        }
        corpus::register(r)
    }
}

/// A script's text and where imports should be resolved from.
#[derive(Clone, Debug)]
pub struct SpecSource {
    pub text: String,
    pub file: String,
    pub dir: Option<PathBuf>,
}

impl SpecSource {
    /// Reads `path`; if no such file exists and its file name is one of the
    /// embedded corpus files, the embedded copy is used.
    pub fn load(path: &Path) -> crate::Result<SpecSource> {
        match std::fs::read_to_string(path) {
            Ok(text) => Ok(SpecSource {
                text,
                file: path.display().to_string(),
                dir: path.parent().map(Path::to_path_buf),
            }),
            Err(e) => {
                let embedded = path
                    .file_name()
                    .and_then(|n| n.to_str())
                    .and_then(|n| corpus::get(n).map(|t| (n, t)));
                match embedded {
                    Some((name, text)) if !path.exists() => Ok(SpecSource {
                        text: text.to_string(),
                        file: format!("<embedded>/{name}"),
                        dir: None,
                    }),
                    _ => Err(crate::Error::Io {
                        path: path.to_path_buf(),
                        source: e,
                    }),
                }
            }
        }
    }

    pub fn embedded(name: &str) -> Option<SpecSource> {
        corpus::get(name).map(|text| SpecSource {
            text: text.to_string(),
            file: format!("<embedded>/{name}"),
            dir: None,
        })
    }

    pub fn compile(&self, bindings: &Bindings, resolver: &ImportResolver) -> Result<Program, ScriptError> {
        Program::compile(&self.text, &self.file, self.dir.as_deref(), bindings, resolver)
    }
}

/// Compiles and runs a script once with the given bindings.
pub fn run_script(spec: &SpecSource, bindings: &Bindings, config: &RunConfig) -> crate::Result<RunReport> {
    let program = spec.compile(bindings, &config.resolver())?;
    Ok(program.run(&config.options)?)
}
