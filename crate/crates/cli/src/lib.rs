//! `mfpush`: the factorisation document format and the command-line front end.

pub mod commands;
pub mod doc;
pub mod error;
pub mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use doc::{DocumentData, MFDocument, RingOverrides};
pub use error::{CliError, CliResult};
pub use report::Report;

#[derive(Debug, Parser)]
#[command(name = "mfpush", version, about = "Exact finite models of matrix-factorisation pushforwards")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Monomial order (degrevlex or lex), overriding the document.
    #[arg(long, global = true)]
    pub order: Option<String>,
    /// Coefficient characteristic (0 or a prime), overriding the document.
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,
    /// Degree bound for homotopy searches and truncated expansions.
    #[arg(long, global = true)]
    pub degree_bound: Option<u32>,
    /// Positive weights of the integrated variables, comma-separated (e.g. 1/3,1/2).
    #[arg(long, global = true)]
    pub weights: Option<String>,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every factorisation (d² = W·1) and map in a document.
    Check { file: PathBuf },
    /// Tensor product of two factorisations, as a document.
    Tensor {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Dual factorisation of −W, as a document.
    Dual {
        file: PathBuf,
        factorisation: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Hom(A, B) as a factorisation of W_B − W_A, as a document.
    Hom {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        name: Option<String>,
    },
    /// Milnor number and monomial basis of the Jacobi algebra.
    Milnor {
        file: Option<PathBuf>,
        /// Potential given directly instead of a document.
        #[arg(long)]
        potential: Option<String>,
        /// Variables of `--potential`, comma-separated.
        #[arg(long)]
        vars: Option<String>,
    },
    /// Grothendieck residue Res[s·dr / t] by the trace formula and the transformation law.
    Residue {
        /// Integrated variables, comma-separated.
        #[arg(long)]
        vars: String,
        /// Base (parameter) variables, comma-separated.
        #[arg(long, default_value = "")]
        base: String,
        /// Denominators t_1, …, t_n (repeat the flag).
        #[arg(long = "t", required = true)]
        t: Vec<String>,
        /// Numerator s.
        #[arg(long)]
        numerator: String,
        /// Form numerators r_1, …, r_n (repeat the flag); default dy.
        #[arg(long = "r")]
        r: Vec<String>,
        /// Use r = t (the form dt).
        #[arg(long, conflicts_with = "r")]
        dt: bool,
    },
    /// Chern character ch(X) in the Jacobi algebra.
    Chern { file: PathBuf, factorisation: Option<String> },
    /// Euler characteristic of Hom(A, B) by residues, against the truncation oracle.
    Euler { file: PathBuf, a: String, b: String },
    /// Cardy condition str(β∘−∘α on Hom(A, B)) against the residue pairing.
    Cardy {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        beta: Option<String>,
    },
    /// Finite model X/tX of the pushforward along the integrated variables.
    Pushforward {
        file: PathBuf,
        factorisation: Option<String>,
        /// Integrated variables, comma-separated.
        #[arg(long)]
        integrate: String,
        /// The sequence t ⊂ k[y] (repeat the flag).
        #[arg(long = "t", required = true)]
        t: Vec<String>,
    },
    /// Convolution F ⋆ E of two kernels (factorisations with inputs/outputs).
    Fuse { file: PathBuf, f: String, e: String },
    /// Knörrer round trip Ψ(Φ(X)) and its splitting back to X.
    Knorrer {
        file: PathBuf,
        factorisation: Option<String>,
        #[arg(long, default_value = "u")]
        u: String,
        #[arg(long, default_value = "v")]
        v: String,
    },
    /// Run the invariant suites on seeded random data.
    Selftest {
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Run one invocation; returns the exit code.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok(out) => {
            let code = out.exit_code();
            let body = out.render(cli.flags.json);
            if let Some(path) = &cli.flags.out {
                if let Err(e) = std::fs::write(path, body) {
                    let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else {
                let _ = stdout.write_all(body.as_bytes());
            }
            for m in &out.diagnostics {
                let _ = writeln!(stderr, "{m}");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
