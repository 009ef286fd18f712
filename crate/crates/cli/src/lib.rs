//! The `polycheck` command line: every stage of the mesh → model → results
//! pipeline as a subcommand reading and writing named files.

use std::ffi::OsString;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use polycheck_core::minimise::{export_lts, minimise, quotient, EquivalenceMode, LtsFormat};
use polycheck_core::model::{validate_complex_with, write_model, ValidateOptions};
use polycheck_core::obj::{convert_text, ConvertConfig};
use polycheck_core::results::{
    enrich_model, export_colored_obj, read_results, write_results, ColorMap, EnrichMode,
    EnrichSpec, ResultFile,
};
use polycheck_core::{build_poset, check_script, parse_model, synth, CheckOptions, PolyhedralModelFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] polycheck_core::Error),
    #[error("{}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }
}

macro_rules! core_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}
core_from!(
    polycheck_core::ModelError,
    polycheck_core::obj::ObjError,
    polycheck_core::results::ResultsError,
    polycheck_core::minimise::MinimiseError
);

#[derive(Debug, Parser)]
#[command(name = "polycheck", version, about = "Spatial model checking on polyhedral meshes")]
pub struct Cli {
    /// More log output on stderr; repeat for debug output. RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert a triangulated .obj (+ .mtl) into a polyhedral model.
    Convert(ConvertArgs),
    /// Check that a model is a simplicial complex.
    Validate(ValidateArgs),
    /// Model check the saves of a query script.
    Check(CheckArgs),
    /// Add results to a model as atomic propositions.
    Enrich(EnrichArgs),
    /// Minimise a model modulo logical equivalence.
    Minimise(MinimiseArgs),
    /// Write a colored .obj/.mtl showing results on the mesh.
    Export(ExportArgs),
    /// Write a synthetic fixture.
    Generate {
        #[command(subcommand)]
        what: Generate,
    },
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long)]
    pub obj: PathBuf,
    /// Material library; without it, faces must not use materials.
    #[arg(long)]
    pub mtl: Option<PathBuf>,
    /// Atom mapping rules (JSON).
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Also reject affinely dependent simplexes.
    #[arg(long)]
    pub geometric: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub script: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Checker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<NonZeroUsize>,
    /// Do not load the bundled prelude.
    #[arg(long)]
    pub no_prelude: bool,
    /// Report parse, load and check times on stderr.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Replace,
    Append,
}

#[derive(Debug, Args)]
pub struct EnrichArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub results: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// `result` or `result=atom`; repeatable. Defaults to every result under
    /// its own name.
    #[arg(long = "map", value_name = "RESULT[=ATOM]")]
    pub mappings: Vec<String>,
    #[arg(long, value_enum, default_value = "replace")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EquivArg {
    Gamma,
    Eta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dot,
    Aut,
}

#[derive(Debug, Args)]
pub struct MinimiseArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value = "gamma")]
    pub mode: EquivArg,
    /// Partition as a result file, one `block<i>` entry per block.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Quotient LTS format; written to --lts.
    #[arg(long, value_enum, requires = "lts")]
    pub export: Option<FormatArg>,
    #[arg(long, requires = "export")]
    pub lts: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub results: PathBuf,
    /// Highlight colors (JSON).
    #[arg(long)]
    pub colors: PathBuf,
    /// Output .obj; the .mtl is written next to it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// The synthetic coral sheet as coral.obj and coral.mtl.
    Coral {
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// A tetrahedral maze of rooms and corridors.
    Maze {
        #[arg(long, default_value_t = 3)]
        rooms: usize,
        #[arg(long, default_value_t = 2)]
        room_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// The 19-cell hand-labelled sample model.
    Sample {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// print to stderr and return 1; `--help` and `--version` print to stdout
/// and return 0.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    init_logging(cli.verbose);
    match std::panic::catch_unwind(|| execute(cli.command)) {
        Ok(Ok(())) => EXIT_OK,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: internal failure, see the panic message above");
            EXIT_INTERNAL
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Convert(a) => convert(a),
        Command::Validate(a) => validate(a),
        Command::Check(a) => check(a),
        Command::Enrich(a) => enrich(a),
        Command::Minimise(a) => minimise_cmd(a),
        Command::Export(a) => export(a),
        Command::Generate { what } => generate(what),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_path_buf(),
        source,
    })?;
    info!("wrote {}", path.display());
    Ok(())
}

fn load_model(path: &Path) -> Result<PolyhedralModelFile, CliError> {
    Ok(parse_model(&read(path)?)?)
}

fn convert(a: ConvertArgs) -> Result<(), CliError> {
    let cfg = ConvertConfig::from_json(&read(&a.rules)?)?;
    let mtl = a.mtl.as_deref().map(read).transpose()?;
    let model = convert_text(&read(&a.obj)?, mtl.as_deref(), &cfg)?;
    info!(
        "{} points, {} cells",
        model.number_of_points,
        model.simplexes.len()
    );
    write(&a.out, &write_model(&model))
}

fn validate(a: ValidateArgs) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let report = validate_complex_with(&model, ValidateOptions { geometric: a.geometric });
    if report.is_empty() {
        info!("{}: {} cells, valid", a.model.display(), model.simplexes.len());
        return Ok(());
    }
    eprint!("{report}");
    Err(CliError::Invalid(format!(
        "{} violation(s) in {}",
        report.violations.len(),
        a.model.display()
    )))
}

fn check(a: CheckArgs) -> Result<(), CliError> {
    let opts = CheckOptions {
        workers: a
            .workers
            .map(NonZeroUsize::get)
            .unwrap_or(CheckOptions::default().workers),
        use_prelude: !a.no_prelude,
    };
    let report = check_script(&a.model, &read(&a.script)?, opts)?;
    for w in &report.warnings {
        warn!("{w}");
    }
    if a.timings {
        let t = &report.timings;
        eprintln!(
            "timings: parse {:.1} ms, load {:.1} ms, check {:.1} ms ({} cells, {} results, {} workers)",
            t.parse_ms,
            t.load_ms,
            t.check_ms,
            report.cell_count,
            report.results.len(),
            opts.workers
        );
    }
    write(&a.out, &write_results(&ResultFile::from_report(&report)))
}

fn parse_mapping(m: &str) -> (String, String) {
    match m.split_once('=') {
        Some((r, atom)) => (r.to_string(), atom.to_string()),
        None => (m.to_string(), m.to_string()),
    }
}

fn enrich(a: EnrichArgs) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let results = read_results(&read(&a.results)?, model.simplexes.len())?;
    let mappings = if a.mappings.is_empty() {
        results.names().into_iter().map(|n| (n.clone(), n)).collect()
    } else {
        a.mappings.iter().map(|m| parse_mapping(m)).collect()
    };
    let spec = EnrichSpec {
        mappings,
        mode: match a.mode {
            ModeArg::Replace => EnrichMode::Replace,
            ModeArg::Append => EnrichMode::Append,
        },
    };
    let enriched = enrich_model(&model, &results, &spec)?;
    write(&a.out, &write_model(&enriched))
}

fn minimise_cmd(a: MinimiseArgs) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let poset = build_poset(&model)?;
    let mode = match a.mode {
        EquivArg::Gamma => EquivalenceMode::Gamma,
        EquivArg::Eta => EquivalenceMode::Eta,
    };
    let partition = minimise(&poset, mode);
    eprintln!(
        "{mode}: {} cells -> {} blocks",
        poset.cell_count(),
        partition.block_count()
    );
    if let Some(out) = &a.out {
        write(out, &write_results(&partition.to_result_file()))?;
    }
    if let (Some(format), Some(path)) = (a.export, &a.lts) {
        let format = match format {
            FormatArg::Dot => LtsFormat::Dot,
            FormatArg::Aut => LtsFormat::Aut,
        };
        write(path, &export_lts(&quotient(&poset, &partition), format)?)?;
    }
    if a.out.is_none() && a.lts.is_none() {
        warn!("neither --out nor --lts given, nothing written");
    }
    Ok(())
}

fn export(a: ExportArgs) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let results = read_results(&read(&a.results)?, model.simplexes.len())?;
    let colors = ColorMap::from_json(&read(&a.colors)?)?;
    let mtl_path = a.out.with_extension("mtl");
    let mtl_name = mtl_path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::Invalid(format!("bad output name {}", a.out.display())))?;
    let mesh = export_colored_obj(&model, &results, &colors, mtl_name)?;
    for w in &mesh.warnings {
        warn!("{w}");
    }
    write(&a.out, &mesh.obj)?;
    write(&mtl_path, &mesh.mtl)
}

fn generate(what: Generate) -> Result<(), CliError> {
    match what {
        Generate::Coral { out_dir } => {
            std::fs::create_dir_all(&out_dir).map_err(|source| CliError::Write {
                path: out_dir.clone(),
                source,
            })?;
            let (obj, mtl) = synth::coral_obj();
            write(&out_dir.join("coral.obj"), &obj)?;
            write(&out_dir.join("coral.mtl"), &mtl)
        }
        Generate::Maze {
            rooms,
            room_size,
            out,
        } => {
            if rooms == 0 || room_size == 0 {
                return Err(CliError::Invalid("--rooms and --room-size must be positive".into()));
            }
            write(&out, &write_model(&synth::maze_model(rooms, room_size)))
        }
        Generate::Sample { out } => write(&out, &write_model(&synth::sample_model())),
    }
}
