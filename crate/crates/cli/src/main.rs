use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use koszul_core::commands::{
    self, FsplitArgs, GrassmannianArgs, Method, Settings, SplittingSource, CAP_ENV,
};
use koszul_core::flag::{PlueckerIndex, SchubertSpec};
use koszul_core::fsplit::ChartCase;
use koszul_core::koszul::TorEngine;
use koszul_core::report::{RunReport, Status};
use koszul_core::FieldSpec;

#[derive(Parser)]
#[command(name = "koszul", version, about = "Koszulity, Schubert and Frobenius splitting checks with exact arithmetic")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Coefficient field: `q` or `gf:P`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Highest degree to check.
    #[arg(long, global = true)]
    max_degree: Option<usize>,
    /// Lattice closure cap per weight block.
    #[arg(long, global = true, env = CAP_ENV)]
    cap: Option<usize>,
    /// Tor engine.
    #[arg(long, global = true, value_enum, default_value_t = EngineArg::Auto)]
    engine: EngineArg,
    /// Write the report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print and write the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Bar,
    Resolution,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Lattice,
    Bar,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Standard,
    Opposite,
}

#[derive(Subcommand)]
enum Command {
    /// Test a presentation file for Koszulity.
    CheckKoszul {
        presentation: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
    },
    /// Build Gr(k, n) and optionally a Schubert variety, then check them.
    Grassmannian {
        k: usize,
        n: usize,
        /// Schubert index such as `1,3`.
        #[arg(long)]
        schubert: Option<String>,
        #[arg(long, value_enum, default_value_t = SideArg::Standard)]
        side: SideArg,
        /// Highest homological and internal degree for Tor.
        #[arg(long)]
        tor_degree: Option<usize>,
        /// Directory for the emitted presentation and module files.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Tor of a right module and a left module over the same algebra.
    PairTor {
        right: PathBuf,
        left: PathBuf,
        /// Highest homological degree.
        #[arg(long)]
        hom_degree: Option<usize>,
    },
    /// Check a Frobenius splitting on a chart.
    Fsplit {
        /// Built-in chart: `p1` or `gr24`.
        #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
        case: Option<String>,
        /// Polynomial file whose first polynomial is σ.
        #[arg(long)]
        sigma: Option<PathBuf>,
        /// Characteristic.
        #[arg(long)]
        p: Option<u32>,
        /// Polynomial file listing the generators of one ideal.
        #[arg(long = "ideal")]
        ideals: Vec<PathBuf>,
        /// Degree bound for s(f^p) = f.
        #[arg(long, default_value_t = 15)]
        section_degree: u32,
        /// Skip the closure check on pairs of compatible ideals.
        #[arg(long)]
        no_closure: bool,
    },
    /// Lattice versus Tor agreement on seeded random presentations.
    Corpus {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        g_max: usize,
        /// Replay a recorded presentation instead of generating.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
}

fn input_error(msg: String) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(Status::InputError.code() as u8)
}

fn settings(common: &Common) -> Result<Settings, String> {
    let mut s = Settings::new(std::env::args().skip(1).collect());
    if let Some(f) = &common.field {
        s.field = Some(f.parse::<FieldSpec>().map_err(|e| e.to_string())?);
    }
    s.max_degree = common.max_degree;
    if let Some(c) = common.cap {
        if c == 0 {
            return Err("--cap must be positive".into());
        }
        s.cap = c;
    }
    s.engine = match common.engine {
        EngineArg::Bar => TorEngine::Bar,
        EngineArg::Resolution => TorEngine::Resolution,
        EngineArg::Auto => TorEngine::Auto,
    };
    Ok(s)
}

fn schubert_spec(text: &str, n: usize, side: SideArg) -> Result<SchubertSpec, String> {
    let entries = text
        .split(',')
        .map(|t| t.trim().parse::<u8>().map_err(|_| format!("bad Schubert index `{text}`")))
        .collect::<Result<Vec<_>, _>>()?;
    let w = PlueckerIndex::new(entries, n).map_err(|e| e.to_string())?;
    Ok(match side {
        SideArg::Standard => SchubertSpec::standard(w),
        SideArg::Opposite => SchubertSpec::opposite(w),
    })
}

fn dispatch(cli: &Cli, s: &Settings) -> Result<RunReport, String> {
    Ok(match &cli.command {
        Command::CheckKoszul { presentation, method } => {
            let m = match method {
                MethodArg::Lattice => Method::Lattice,
                MethodArg::Bar => Method::Bar,
                MethodArg::Both => Method::Both,
            };
            commands::check_koszul(s, presentation, m)
        }
        Command::Grassmannian { k, n, schubert, side, tor_degree, emit } => {
            let schubert = schubert.as_deref().map(|t| schubert_spec(t, *n, *side)).transpose()?;
            let args = GrassmannianArgs { k: *k, n: *n, schubert, tor_degree: *tor_degree, emit: emit.clone() };
            commands::grassmannian(s, &args)
        }
        Command::PairTor { right, left, hom_degree } => commands::pair_tor_cmd(s, right, left, *hom_degree),
        Command::Fsplit { case, sigma, p, ideals, section_degree, no_closure } => {
            let source = match (case, sigma) {
                (Some(c), _) => SplittingSource::Case(c.parse::<ChartCase>().map_err(|e| e.to_string())?),
                (None, Some(path)) => SplittingSource::Sigma(path.clone()),
                (None, None) => return Err("one of --case or --sigma is required".into()),
            };
            let args = FsplitArgs {
                source,
                p: *p,
                ideals: ideals.clone(),
                section_degree: *section_degree,
                closure: !no_closure,
            };
            commands::fsplit(s, &args)
        }
        Command::Corpus { seed, count, g_max, replay } => match replay {
            Some(path) => commands::corpus_replay(s, path),
            None => commands::corpus(s, *seed, *count, *g_max),
        },
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { Status::InputError.code() } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let s = match settings(&cli.common) {
        Ok(s) => s,
        Err(e) => return input_error(e),
    };
    let report = match dispatch(&cli, &s) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };
    if let Some(path) = &cli.common.out {
        if let Err(e) = report.write(path, cli.common.json) {
            return input_error(e.to_string());
        }
    }
    if cli.common.json {
        print!("{}", report.to_json());
    } else {
        print!("{}", report.summary_lines());
    }
    ExitCode::from(report.exit_code() as u8)
}
