use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ihsat_core::check::{render_checks_csv, render_checks_text, run_checks};
use ihsat_core::{
    builtin_registry, circle_link_ih, make_stratification, render_csv, render_text, run_genus,
    taut_graded_dims, Error, Registry,
};

#[derive(Parser)]
#[command(
    name = "ihsat",
    version,
    about = "Intersection cohomology of Satake compactifications, stratum by stratum"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Directory of `.ihdat` files overriding the built-in datasets
    #[arg(long = "data", value_name = "DIR")]
    data_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition ledger, link table and IH of Sat_g
    Run {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        /// Also print the constraints left between link unknowns
        #[arg(long)]
        emit_constraints: bool,
        #[command(flatten)]
        common: Common,
    },
    /// IH^q(N_{g-1,g}) below the middle of the link
    Links {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=12))]
        genus: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Graded dimensions of the tautological ring
    Taut {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=20))]
        genus: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Defect of the map from the toroidal compactification, from the fiber datasets
    Defect {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        genus: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Run every acceptance criterion
    Check {
        #[command(flatten)]
        common: Common,
    },
}

enum Failure {
    Engine(Error),
    Checks,
}

fn registry(dir: &Option<PathBuf>) -> Result<Registry, Error> {
    let reg = builtin_registry();
    match dir {
        Some(d) => reg.with_overrides(d),
        None => Ok(reg),
    }
}

fn execute(cli: Cli) -> Result<String, (String, Failure)> {
    let engine = |e: Error| (String::new(), Failure::Engine(e));
    match cli.command {
        Command::Run {
            genus,
            emit_constraints,
            common,
        } => {
            let reg = registry(&common.data_dir).map_err(engine)?;
            let report = run_genus(genus, &reg).map_err(engine)?;
            Ok(match common.format {
                Format::Text => render_text(&report, emit_constraints),
                Format::Csv => render_csv(&report),
            })
        }
        Command::Links { genus, format } => {
            let row = circle_link_ih(genus);
            let mut out = String::new();
            match format {
                Format::Text => {
                    for q in 0..genus {
                        writeln!(out, "IH^{q}(N_{{{},{genus}}}) = {}", genus - 1, row.get(q))
                            .unwrap();
                    }
                }
                Format::Csv => {
                    out.push_str("degree,value\n");
                    for q in 0..genus {
                        writeln!(out, "{q},{}", row.get(q)).unwrap();
                    }
                }
            }
            Ok(out)
        }
        Command::Taut { genus, format } => {
            let dims = taut_graded_dims(genus);
            Ok(match format {
                Format::Text => dims.render(),
                Format::Csv => {
                    let mut out = String::from("degree,dimension\n");
                    for (j, d) in dims.dims.iter().enumerate() {
                        writeln!(out, "{j},{d}").unwrap();
                    }
                    out
                }
            })
        }
        Command::Defect { genus, common } => {
            let reg = registry(&common.data_dir).map_err(engine)?;
            let fibers = (0..genus)
                .map(|k| reg.fiber(genus, k).map(|f| f.extent().div_ceil(2) as i64))
                .collect::<Result<Vec<_>, _>>()
                .map_err(engine)?;
            let strat = make_stratification(genus, &fibers).map_err(engine)?;
            let d = ihsat_core::defect(&strat);
            Ok(match common.format {
                Format::Text => format!("defect of genus {genus}: {d}\n"),
                Format::Csv => format!("genus,defect\n{genus},{d}\n"),
            })
        }
        Command::Check { common } => {
            let reg = registry(&common.data_dir).map_err(engine)?;
            let results = run_checks(&reg);
            let out = match common.format {
                Format::Text => render_checks_text(&results),
                Format::Csv => render_checks_csv(&results),
            };
            if results.iter().all(|c| c.passed) {
                Ok(out)
            } else {
                Err((out, Failure::Checks))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match execute(cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err((out, failure)) => {
            let _ = stdout.write_all(out.as_bytes());
            match failure {
                Failure::Checks => {
                    eprintln!("ihsat: some acceptance criteria failed");
                    ExitCode::from(1)
                }
                Failure::Engine(e) => {
                    eprintln!("ihsat: error: {e}");
                    ExitCode::from(e.exit_code() as u8)
                }
            }
        }
    }
}
