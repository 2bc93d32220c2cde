use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use imgql::dsl::{Bindings, EvalOptions, Event};
use imgql::harness::{self, RunConfig, SpecSource};
use imgql::{Adjacency, IntensityMode, TextureMode};

#[derive(Parser)]
#[command(name = "imgql", version, about = "Spatial model checking of 2D images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script once.
    Run {
        /// Script file (or the name of an embedded corpus file).
        spec: PathBuf,
        /// Bind a path variable, e.g. NAME=ISIC_0000010.
        #[arg(short = 'D', long = "define", value_name = "KEY=VALUE")]
        defines: Vec<String>,
        /// Bound to OUTPUTDIR.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a script over every `<NAME>.png` in a directory and score it.
    Batch {
        dataset: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(short = 'D', long = "define", value_name = "KEY=VALUE")]
        defines: Vec<String>,
        /// File with case names to leave out, one per line.
        #[arg(long)]
        skip_list: Option<PathBuf>,
        /// Write 0 in the seconds column so the CSV is reproducible.
        #[arg(long)]
        no_timing: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// 4 (orthogonal) or 8 (orthodiagonal) adjacency.
    #[arg(long, default_value = "8")]
    adjacency: Adjacency,
    #[arg(long, default_value = "rec601")]
    intensity: IntensityMode,
    /// Use the naive cross-correlation implementation.
    #[arg(long)]
    oracle_texture: bool,
    /// Directory searched for imports after the script's own directory.
    #[arg(long)]
    stdlib: Option<PathBuf>,
}

impl Common {
    fn config(&self, defines: &[String], timing: bool) -> Result<RunConfig, String> {
        let mut pairs = Vec::new();
        for d in defines {
            let (k, v) = d
                .split_once('=')
                .ok_or_else(|| format!("--define {d}: expected KEY=VALUE"))?;
            pairs.push((k.to_string(), v.to_string()));
        }
        Ok(RunConfig {
            options: EvalOptions {
                adjacency: self.adjacency,
                intensity: self.intensity,
                texture: if self.oracle_texture {
                    TextureMode::Naive
                } else {
                    TextureMode::Sliding
                },
                threads: self.threads,
            },
            stdlib_dir: self.stdlib.clone(),
            defines: pairs,
            timing,
        })
    }
}

fn run(spec: &Path, defines: &[String], output: Option<&Path>, common: &Common) -> Result<(), String> {
    let config = common.config(defines, true)?;
    let source = SpecSource::load(spec).map_err(|e| e.to_string())?;
    let mut bindings = Bindings::with_env();
    if let Some(out) = output {
        bindings.define("OUTPUTDIR", out.display().to_string());
    }
    for d in defines {
        bindings.define_pair(d).map_err(|e| e.to_string())?;
    }
    let report = harness::run_script(&source, &bindings, &config).map_err(|e| e.to_string())?;
    for event in &report.events {
        match event {
            Event::Print { elapsed_ms, .. } => {
                println!("{}", event.print_line().unwrap_or_default());
                eprintln!("[{elapsed_ms:.1} ms] print");
            }
            Event::Save { path, elapsed_ms } => eprintln!("[{elapsed_ms:.1} ms] saved {path}"),
        }
    }
    Ok(())
}

fn batch(
    dataset: &Path,
    spec: &Path,
    output: &Path,
    defines: &[String],
    skip_list: Option<&Path>,
    timing: bool,
    common: &Common,
) -> Result<(), String> {
    let config = common.config(defines, timing)?;
    let source = SpecSource::load(spec).map_err(|e| e.to_string())?;
    let skip = match skip_list {
        Some(p) => harness::read_skip_list(p).map_err(|e| e.to_string())?,
        None => BTreeSet::new(),
    };
    let outcome = harness::run_batch(dataset, &source, output, &config, &skip).map_err(|e| e.to_string())?;
    for case in &outcome.cases {
        eprintln!("{} [{:.2} s] {}", case.name, case.seconds, case.status.label());
    }
    print!("{}", outcome.report);
    eprintln!("wrote {} and {}", outcome.csv_path.display(), outcome.report_path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            spec,
            defines,
            output,
            common,
        } => run(spec, defines, output.as_deref(), common),
        Command::Batch {
            dataset,
            spec,
            output,
            defines,
            skip_list,
            no_timing,
            common,
        } => batch(
            dataset,
            spec,
            output,
            defines,
            skip_list.as_deref(),
            !no_timing,
            common,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
