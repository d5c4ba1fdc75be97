use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fillsys::enumerate::{load_or_enumerate, Budget};
use fillsys::error::Error;
use fillsys::figures::{verify_paper, VerifyOptions};
use fillsys::{chain, render, ChordWord};

#[derive(Parser)]
#[command(
    name = "fillsys",
    version,
    about = "Chord-diagram filling systems: enumeration, boundary matrices, and the vanishing of the degree-zero coinvariants"
)]
struct Cli {
    /// Worker threads (default: all cores). Results are identical for any
    /// thread count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the basis of U_k at a genus and print or save it.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        k: usize,
        /// Write the basis file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Proceed past the 20-point enumeration budget.
        #[arg(long)]
        override_budget: bool,
        /// Directory of reusable basis caches.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Assemble d: U_k -> U_{k-1} and write MatrixMarket plus the
    /// .torsion sidecar.
    Differential {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        override_budget: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Compute the abelian group U_0 / d(U_1) at a genus.
    Coinvariants {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        override_budget: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run the full verification pipeline at a genus (>= 2).
    VerifyPaper {
        #[arg(long)]
        genus: usize,
        /// Streaming surjectivity certificate instead of the full
        /// cokernel (for genus 4).
        #[arg(long)]
        stretch: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        override_budget: bool,
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Canonicalize a chord word.
    Canonical {
        /// Space-separated labels, e.g. "2 1 2 1".
        #[arg(long)]
        word: String,
    },
    /// Render a chord word as a deterministic SVG.
    Render {
        #[arg(long)]
        word: String,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded(_) => 3,
        Error::MalformedDiagram(_)
        | Error::MalformedPermutation(_)
        | Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::ChordOutOfRange { .. } => 2,
        _ => 1,
    }
}

fn budget(override_budget: bool) -> Budget {
    if override_budget {
        Budget::unlimited()
    } else {
        Budget::default()
    }
}

fn run(command: Command) -> fillsys::Result<ExitCode> {
    match command {
        Command::Enumerate {
            genus,
            k,
            out,
            override_budget,
            cache,
        } => {
            let basis = load_or_enumerate(genus, k, budget(override_budget), cache.as_deref())?;
            match out {
                Some(path) => {
                    basis.write_cache(&path)?;
                    eprintln!(
                        "wrote {} ({} classes, {} torsion)",
                        path.display(),
                        basis.len(),
                        basis.torsion_ids().len()
                    );
                }
                None => {
                    print!("{}", basis.to_cache_string());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Differential {
            genus,
            k,
            out,
            override_budget,
            cache,
        } => {
            if k == 0 {
                return Err(Error::InvalidArgument("differential needs --k >= 1".into()));
            }
            let b = budget(override_budget);
            let rows = load_or_enumerate(genus, k - 1, b, cache.as_deref())?;
            let cols = load_or_enumerate(genus, k, b, cache.as_deref())?;
            let matrix = chain::assemble_matrix_with(rows, cols)?;
            matrix.write_matrix_market(&out)?;
            println!(
                "wrote {}: {} x {}, {} nonzeros, {} torsion rows (sidecar {})",
                out.display(),
                matrix.row_count(),
                matrix.col_count(),
                matrix.nnz(),
                matrix.torsion_rows().len(),
                chain::sidecar_path(&out).display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Coinvariants {
            genus,
            override_budget,
            cache,
        } => {
            let b = budget(override_budget);
            let u0 = load_or_enumerate(genus, 0, b, cache.as_deref())?;
            let u1 = load_or_enumerate(genus, 1, b, cache.as_deref())?;
            println!(
                "U_0(g={genus}): {} classes ({} torsion)",
                u0.len(),
                u0.torsion_ids().len()
            );
            println!(
                "U_1(g={genus}): {} classes ({} torsion)",
                u1.len(),
                u1.torsion_ids().len()
            );
            let matrix = chain::assemble_matrix_with(u0, u1)?;
            println!("cokernel U_0 / d(U_1): {}", matrix.cokernel());
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyPaper {
            genus,
            stretch,
            format,
            override_budget,
            cache,
        } => {
            let options = VerifyOptions {
                stretch,
                budget: Some(budget(override_budget)),
                cache_dir: cache,
            };
            let report = verify_paper(genus, &options)?;
            match format {
                Format::Text => println!("{report}"),
                Format::Machine => print!("{}", report.machine_lines()),
            }
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Canonical { word } => {
            let w = ChordWord::parse(&word)?;
            let (class, sign) = w.canonicalize();
            println!("canonical: {}", class.word());
            println!("sign: {}", if sign > 0 { "+1" } else { "-1" });
            println!("torsion: {}", class.torsion());
            Ok(ExitCode::SUCCESS)
        }
        Command::Render { word, out } => {
            let w = ChordWord::parse(&word)?;
            render::write_svg(&w, &out)?;
            let mut err = std::io::stderr();
            let _ = writeln!(err, "wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
