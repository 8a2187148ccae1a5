use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod render;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Exact Drinfeld modular forms over F_q[T] and their Hecke operators")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Characteristic p of the constant field F_q.
    #[arg(long, global = true)]
    pub p: Option<u32>,
    /// Degree r of F_q over F_p.
    #[arg(long, global = true)]
    pub r: Option<u32>,
    /// Field order q = p^r, shorthand for --p/--r.
    #[arg(long, global = true, conflicts_with_all = ["p", "r"])]
    pub q: Option<u32>,
    /// Irreducible modulus defining F_q over F_p, as a polynomial in u (e.g. "u^2+u+1").
    #[arg(long, global = true)]
    pub modulus: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    pub format: Format,
    /// Worker threads for the separability scan (default: available cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormName {
    #[value(name = "g")]
    G,
    #[value(name = "h")]
    H,
    #[value(name = "E", alias = "e")]
    E,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// t-expansion of g, h or E through t^prec.
    Expand {
        #[arg(value_enum)]
        form: FormName,
        #[arg(long)]
        prec: usize,
        /// Reduce coefficients modulo T.
        #[arg(long)]
        mod_t: bool,
    },
    /// Goss polynomial G_{n,P} of the P-torsion lattice, over F_q(T) or modulo T.
    Goss {
        #[arg(long)]
        prime: String,
        #[arg(long)]
        n: usize,
        /// Print G_1, ..., G_n instead of G_n alone.
        #[arg(long)]
        upto: bool,
        /// Use the closed form modulo T.
        #[arg(long)]
        mod_t: bool,
    },
    /// Matrix of T_P on M_{k,m} in the basis g^i h^j.
    HeckeMatrix {
        #[arg(long)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        m: u64,
        #[arg(long)]
        prime: String,
        /// Reduce modulo T, on the basis of powers of h mod T (rows are image coordinates).
        #[arg(long)]
        mod_theta: bool,
    },
    /// Minimal polynomial over F_q(T) and its separability.
    Minpoly {
        #[arg(long, required_unless_present = "matrix")]
        k: Option<u64>,
        #[arg(long, default_value_t = 0)]
        m: u64,
        #[arg(long, required_unless_present = "matrix")]
        prime: Option<String>,
        /// JSON file holding a square matrix (array of rows of entry strings,
        /// or a hecke-matrix JSON output).
        #[arg(long, conflicts_with_all = ["k", "prime"])]
        matrix: Option<PathBuf>,
    },
    /// Whether h^n is an eigenform for T_P, exactly and modulo T.
    Eigencheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        prime: String,
    },
    /// Separability of the minimal polynomial of T_P for every weight and prime P != T.
    ScanSeparability {
        #[arg(long, default_value_t = 28)]
        k_max: u64,
        #[arg(long, default_value_t = 5)]
        prime_deg_max: usize,
        #[arg(long, default_value_t = 0)]
        m: u64,
    },
    /// Run a verification suite (or `all`).
    Verify {
        suite: String,
        /// Precision of the series identities checked.
        #[arg(long)]
        prec: Option<usize>,
        #[arg(long)]
        max_prime_degree: Option<usize>,
        #[arg(long)]
        k_max: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<render::Output, CliError> {
    let g = &cli.global;
    let fq = commands::field(g)?;
    match cli.cmd {
        Command::Expand { form, prec, mod_t } => commands::expand(&fq, g.format, form, prec, mod_t),
        Command::Goss { prime, n, upto, mod_t } => commands::goss(&fq, g.format, &prime, n, upto, mod_t),
        Command::HeckeMatrix { k, m, prime, mod_theta } => commands::hecke_matrix(&fq, g.format, k, m, &prime, mod_theta),
        Command::Minpoly { k, m, prime, matrix } => commands::minpoly(&fq, g.format, k, m, prime.as_deref(), matrix.as_deref()),
        Command::Eigencheck { n, prime } => commands::eigencheck(&fq, g.format, n, &prime),
        Command::ScanSeparability { k_max, prime_deg_max, m } => {
            let jobs = g.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            commands::scan(&fq, g.format, k_max, prime_deg_max, m, jobs)
        }
        Command::Verify { suite, prec, max_prime_degree, k_max } => {
            commands::verify(&fq, g.format, &suite, prec, max_prime_degree, k_max)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.clone();
    match run(cli).and_then(|o| o.write(out.as_deref()).map(|()| o.status)) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
