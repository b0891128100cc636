//! `gsmatch`: match two shapes, run retrieval over a dataset directory,
//! generate perturbed or synthetic datasets.

mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsmatch_core::dp::match_bundles;
use gsmatch_core::params::CostParams;
use gsmatch_core::report::format_report;
use gsmatch_core::shape::ShapeBundle;
use gsmatch_retrieval::bench::distance_matrix;
use gsmatch_retrieval::cache::{write_atomic, Cache};
use gsmatch_retrieval::dataset::{load_shape, Dataset, Entry};
use gsmatch_retrieval::perturb::{merged_dataset, occluded_dataset};
use gsmatch_retrieval::score::{bullseye_score, topk_recognition};
use gsmatch_retrieval::synth::{generate, Deformation, ShapeClass};

#[derive(Parser)]
#[command(name = "gsmatch", version, about = "Group-of-segments shape matching")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ParamArgs {
    /// `key = value` parameter file; unlisted keys keep their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parameter override, `key=value`; wins over the config file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl ParamArgs {
    fn params(&self) -> Result<CostParams<f64>, String> {
        let mut p = match &self.config {
            Some(path) => CostParams::load(path).map_err(|e| format!("{}: {e}", path.display()))?,
            None => CostParams::default(),
        };
        for o in &self.overrides {
            let (k, v) = o.split_once('=').ok_or_else(|| format!("--set expects KEY=VALUE, got `{o}`"))?;
            p.set(k.trim(), v.trim()).map_err(|e| e.to_string())?;
        }
        p.validate().map_err(|e| e.to_string())?;
        Ok(p)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Occlude,
    Merge,
}

#[derive(Subcommand)]
enum Command {
    /// Match two shapes and print the decomposition.
    Match {
        shape1: PathBuf,
        shape2: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Also render the match as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Distance matrix and retrieval scores over a dataset directory.
    Retrieve {
        dir: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Report file; the matrix goes to `<out>.matrix` and the cache to
        /// `<out>.cache`. Without it the report is printed.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Reuse cached break-points and pair costs from an earlier run.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Bullseye window (defaults to twice the largest class).
        #[arg(long)]
        top: Option<usize>,
    },
    /// Write an occluded or merged copy of a dataset.
    Perturb {
        dir: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Merged shapes to generate.
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Write a synthetic dataset of deformed prototype shapes.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated classes: circle, square, star, fish, cross.
        #[arg(long, default_value = "star,fish,cross", value_delimiter = ',')]
        classes: Vec<ShapeClass>,
        #[arg(long, default_value_t = 15)]
        per_class: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

type CmdResult = Result<(), String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn cmd_match(shape1: &Path, shape2: &Path, params: &ParamArgs, svg: Option<&Path>) -> CmdResult {
    let p = params.params()?;
    let load = |path: &Path| {
        let c = load_shape(path).map_err(|e| format!("{}: {e}", path.display()))?;
        ShapeBundle::build(&c, &p).map_err(|e| format!("{}: {e}", path.display()))
    };
    let a = load(shape1)?;
    let b = load(shape2)?;
    let r = match_bundles(&a, &b, &p).map_err(err)?;
    print!("{}", format_report(&r, &p));
    if let Some(path) = svg {
        let doc = svg::render(&a, &b, &r, &svg::RenderSpec::default());
        write_atomic(path, doc.as_bytes()).map_err(err)?;
    }
    Ok(())
}

fn cmd_retrieve(dir: &Path, params: &ParamArgs, out: Option<&Path>, resume: bool, top: Option<usize>) -> CmdResult {
    let p = params.params()?;
    let ds = Dataset::load_dir(dir).map_err(err)?;
    for (file, reason) in &ds.failures {
        eprintln!("warning: skipped {file}: {reason}");
    }
    let cache = match out {
        Some(out) => {
            let c = Cache::open(&sibling(out, "cache")).map_err(err)?;
            if !resume {
                c.clear().map_err(err)?;
            }
            Some(c)
        }
        None => None,
    };
    let t0 = Instant::now();
    let dm = distance_matrix(&ds.entries, &p, cache.as_ref()).map_err(err)?;
    log::info!("matching took {:.1}s", t0.elapsed().as_secs_f64());
    let labels: Vec<String> = ds.labels();
    let sizes = ds.class_sizes();
    let top = top.unwrap_or(2 * sizes.values().copied().max().unwrap_or(1));
    let valid = dm.valid();
    let mut report = String::new();
    let _ = writeln!(report, "shapes={}", ds.len());
    let _ = writeln!(report, "classes={}", sizes.len());
    let _ = writeln!(report, "unreadable={}", ds.failures.len());
    let _ = writeln!(report, "failed={}", valid.iter().filter(|v| !**v).count());
    let _ = writeln!(report, "bullseye_top={top}");
    let _ = writeln!(report, "bullseye={:.4}", bullseye_score(&dm, &labels, top));
    for k in [1, 5] {
        let _ = writeln!(report, "top{k}={:.4}", topk_recognition(&dm, &labels, k));
    }
    for (k, ok) in valid.iter().enumerate() {
        if !ok {
            eprintln!("warning: {} could not be matched", ds.entries[k].id);
        }
    }
    match out {
        Some(out) => {
            dm.save(&sibling(out, "matrix")).map_err(err)?;
            write_atomic(out, report.as_bytes()).map_err(err)?;
        }
        None => print!("{report}"),
    }
    Ok(())
}

/// `<path>.<ext>` next to `path`.
fn sibling(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn cmd_perturb(dir: &Path, mode: Mode, seed: u64, out: &Path, count: usize, params: &ParamArgs) -> CmdResult {
    let p = params.params()?;
    let ds = Dataset::load_dir(dir).map_err(err)?;
    for (file, reason) in &ds.failures {
        eprintln!("warning: skipped {file}: {reason}");
    }
    match mode {
        Mode::Occlude => {
            let (occ, records, failures) = occluded_dataset(&ds, seed, &p);
            for (id, reason) in &failures {
                eprintln!("warning: {id} not occluded: {reason}");
            }
            if occ.is_empty() {
                return Err("no shape could be occluded".into());
            }
            occ.save_dir(out).map_err(err)?;
            // id, segment count, first removed segment, removed count
            let mut list = String::new();
            for r in &records {
                let _ = writeln!(list, "{} {} {} {}", r.id, r.segments, r.first_removed, r.removed);
            }
            write_atomic(&out.join("occlusions.list"), list.as_bytes()).map_err(err)?;
        }
        Mode::Merge => {
            let (merged, records) = merged_dataset(&ds, count, seed).map_err(err)?;
            merged.save_dir(out).map_err(err)?;
            let mut list = String::new();
            for r in &records {
                let _ = writeln!(list, "{} {} {}", r.id, r.first, r.second);
            }
            write_atomic(&out.join("constituents.list"), list.as_bytes()).map_err(err)?;
        }
    }
    Ok(())
}

fn cmd_synth(out: &Path, classes: &[ShapeClass], per_class: usize, seed: u64) -> CmdResult {
    let shapes = generate(classes, per_class, seed, &Deformation::default()).map_err(err)?;
    let entries = shapes
        .into_iter()
        .map(|(id, label, contour)| Entry { id, label, contour })
        .collect();
    Dataset::from_entries(entries).save_dir(out).map_err(err)
}

fn run(cli: Cli) -> CmdResult {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(err)?;
    }
    match &cli.command {
        Command::Match { shape1, shape2, params, svg } => cmd_match(shape1, shape2, params, svg.as_deref()),
        Command::Retrieve { dir, params, out, resume, top } => cmd_retrieve(dir, params, out.as_deref(), *resume, *top),
        Command::Perturb { dir, mode, seed, out, count, params } => cmd_perturb(dir, *mode, *seed, out, *count, params),
        Command::Synth { out, classes, per_class, seed } => cmd_synth(out, classes, *per_class, *seed),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
