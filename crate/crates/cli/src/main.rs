mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use fada_core::fada::Family;
use fada_core::fga::Ring;

use commands::Output;
use config::{ConfigError, FileConfig, JobConfig, MAX_WINDOW};

#[derive(Parser)]
#[command(name = "fada", version, about = "Formal affine Demazure algebras: expansions, GKM checks, Peterson subalgebra")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args)]
struct Global {
    /// JSON job file; the flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Finite type (`A1`, `A2`, `A3`, `B2`, `C2`, `G2`) or JSON (`{"cartan": [[2,-1],[-1,2]]}`).
    #[arg(long, global = true)]
    root: Option<String>,
    /// `additive`, `multiplicative`, `connective`, `hyperbolic`, or JSON.
    #[arg(long, global = true)]
    fgl: Option<String>,
    #[arg(long, global = true)]
    torus: Option<String>,
    /// Length bound on the affine Weyl group elements used.
    #[arg(long, global = true)]
    window: Option<u32>,
    /// Truncation degree of the series backend.
    #[arg(long, global = true)]
    degree: Option<u32>,
    /// Use the truncated series backend even for polynomial laws.
    #[arg(long, global = true)]
    series: bool,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Basis {
    X,
    Y,
}

impl From<Basis> for Family {
    fn from(b: Basis) -> Family {
        match b {
            Basis::X => Family::X,
            Basis::Y => Family::Y,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum A1Action {
    Table,
    Check,
}

#[derive(Subcommand)]
enum Command {
    /// η_w in the X (or Y) basis and back, on both tori.
    Expand {
        #[arg(long, value_enum, default_value = "x", ignore_case = true)]
        basis: Basis,
    },
    /// GKM and Grassmannian conditions for every X* in the window.
    Gkm {
        /// Highest power of x_α in the small-torus condition.
        #[arg(long, default_value_t = 2)]
        max_power: u32,
    },
    /// k(𝔛_u) in the X basis, with centralizer checks.
    Peterson {
        /// A minimal coset representative as a word, e.g. `010`.
        #[arg(long)]
        u: Option<String>,
        /// Also check the structure-constant identity.
        #[arg(long)]
        structure: bool,
    },
    /// The connective recursions and identities.
    Recurse {
        #[arg(long, value_enum, default_value = "x", ignore_case = true)]
        basis: Basis,
        #[arg(long, requires = "v")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        v: Option<String>,
    },
    /// Closed formulas for affine A1.
    A1hat {
        #[arg(value_enum, default_value = "table")]
        action: A1Action,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        /// `0`, `1` or `generic`.
        #[arg(long, default_value = "generic")]
        c: String,
    },
    /// Compares both sides of each braid relation among the X_i.
    BraidCheck {
        #[arg(long, requires = "j")]
        i: Option<usize>,
        #[arg(long, requires = "i")]
        j: Option<usize>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand { .. } => "expand",
            Command::Gkm { .. } => "gkm",
            Command::Peterson { .. } => "peterson",
            Command::Recurse { .. } => "recurse",
            Command::A1hat { .. } => "a1hat",
            Command::BraidCheck { .. } => "braid-check",
        }
    }
}

fn job(g: &Global) -> Result<(JobConfig, serde_json::Value), ConfigError> {
    let file = match &g.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let root = match &g.root {
        Some(s) => config::value_of("--root", s)?,
        None => file.root.unwrap_or_else(|| json!("A1")),
    };
    let fgl = match &g.fgl {
        Some(s) => config::value_of("--fgl", s)?,
        None => file.fgl.unwrap_or_else(|| json!("connective")),
    };
    let torus = g.torus.clone().or(file.torus).unwrap_or_else(|| "small".into());
    let window = g.window.or(file.window).unwrap_or(6);
    let degree = g.degree.or(file.degree).unwrap_or_else(Ring::default_degree);
    if window > MAX_WINDOW {
        return Err(ConfigError::field("window", format!("{window} exceeds the limit {MAX_WINDOW}")));
    }
    if degree == 0 {
        return Err(ConfigError::field("degree", "must be positive"));
    }
    let cfg = JobConfig {
        rs: Arc::new(config::parse_root("root", &root)?),
        fgl: config::parse_fgl("fgl", &fgl, degree)?,
        torus: config::parse_torus("torus", &torus)?,
        window,
        degree,
        series: g.series || file.series.unwrap_or(false),
    };
    let echo = json!({ "root": root, "fgl": fgl, "torus": torus, "window": window, "degree": degree, "series": cfg.series });
    Ok((cfg, echo))
}

fn run(cli: &Cli) -> Result<(Output, serde_json::Value), ConfigError> {
    let (cfg, echo) = job(&cli.global)?;
    let out = match &cli.cmd {
        Command::Expand { basis } => commands::expand(&cfg, (*basis).into())?,
        Command::Gkm { max_power } => commands::gkm(&cfg, *max_power)?,
        Command::Peterson { u, structure } => commands::peterson(&cfg, u.as_deref(), *structure)?,
        Command::Recurse { basis, i, v } => {
            let step = i.zip(v.as_deref());
            commands::recurse(&cfg, (*basis).into(), step)?
        }
        Command::A1hat { action, kmax, c } => {
            if *kmax > 12 {
                return Err(ConfigError::field("--kmax", "at most 12"));
            }
            commands::a1hat(*kmax, c, matches!(action, A1Action::Check))?
        }
        Command::BraidCheck { i, j } => commands::braid_check(&cfg, i.zip(*j))?,
    };
    Ok((out, echo))
}

/// Errors from bad input exit with 2; anything else is a failed verification.
fn exit_code(e: &ConfigError) -> u8 {
    use fada_core::Error as E;
    match e {
        ConfigError::Core(E::DenominatorRemains { .. } | E::ShapeViolation(_) | E::PrecisionUnderflow(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.global.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --jobs: {e}");
            return ExitCode::from(2);
        }
    }
    let (out, echo) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let doc = json!({
        "schema": 1,
        "command": cli.cmd.name(),
        "config": echo,
        "status": if out.ok { "pass" } else { "fail" },
        "result": out.body,
    });
    let text = match cli.global.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
        Format::Text => {
            let mut lines = Vec::new();
            commands::flatten("", &doc, &mut lines);
            lines.join("\n")
        }
    };
    // a closed pipe is not an error worth a panic
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
