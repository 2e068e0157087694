use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fuscat_core::linalg::Tolerance;
use fuscat_core::report::{analyze, lattice_dot, lattice_text, rounded_lattice, subcategories, subcategories_text};
use fuscat_core::subalg::{build_lattice, Category};
use fuscat_core::verify::{verify_battery, verify_category, Loaded, Source, VerifyReport};

/// Character theory and subalgebra lattices of fusion categories.
#[derive(Parser, Debug)]
#[command(name = "fuscat", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Seed for the randomized splitting steps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Absolute tolerance.
    #[arg(long, global = true, env = "FUSCAT_TOL")]
    abs_tol: Option<f64>,

    /// Relative tolerance.
    #[arg(long, global = true)]
    rel_tol: Option<f64>,

    /// Tolerance for snapping to integers and clustering eigenvalues.
    #[arg(long, global = true)]
    snap_tol: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Ring summary, Wedderburn blocks, cointegral and Fourier images.
    Analyze { source: String },
    /// Every fusion subcategory.
    Subcategories { source: String },
    /// The subcategory/subalgebra correspondence and its Hasse diagram.
    Lattice { source: String },
    /// Run the identity suite on one source or on the group battery.
    Verify {
        #[arg(required_unless_present = "battery")]
        source: Option<String>,
        #[arg(long, conflicts_with = "source")]
        battery: bool,
        /// Include symmetric:4 in the battery.
        #[arg(long, requires = "battery")]
        large: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

/// Exit status 1: some identity failed. Status 2: bad input.
enum Failure {
    Identity(String),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl Cli {
    fn tolerance(&self) -> anyhow::Result<Tolerance> {
        let d = Tolerance::default();
        Ok(Tolerance::new(
            self.abs_tol.unwrap_or(d.abs_tol),
            self.rel_tol.unwrap_or(d.rel_tol),
            self.snap_tol.unwrap_or(d.snap_tol),
        )?)
    }

    fn category(&self, source: &str, tol: &Tolerance) -> anyhow::Result<(Category, Loaded)> {
        let parsed: Source = source.parse()?;
        let loaded = parsed.load(self.seed, tol).with_context(|| format!("loading {source}"))?;
        let cat = Category::new(loaded.ring.clone(), self.seed, *tol).with_context(|| format!("decomposing {source}"))?;
        Ok((cat, loaded))
    }

    fn emit(&self, text: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn no_dot(cli: &Cli) -> anyhow::Result<()> {
    if cli.format == Format::Dot {
        bail!("--format dot is only available for the lattice command");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let tol = cli.tolerance()?;
    match &cli.command {
        Command::Analyze { source } => {
            no_dot(cli)?;
            let (cat, _) = cli.category(source, &tol)?;
            let report = analyze(source, &cat);
            let out = if cli.format == Format::Json { json(&report)? } else { report.to_text() };
            cli.emit(&out)?;
        }
        Command::Subcategories { source } => {
            no_dot(cli)?;
            let (cat, _) = cli.category(source, &tol)?;
            let rows = subcategories(&cat).map_err(|e| anyhow!(e))?;
            let out = if cli.format == Format::Json { json(&rows)? } else { subcategories_text(&rows) };
            cli.emit(&out)?;
        }
        Command::Lattice { source } => {
            let (cat, _) = cli.category(source, &tol)?;
            let lattice = build_lattice(&cat).map_err(|e| Failure::Identity(format!("lattice of {source}: {e}")))?;
            let report = rounded_lattice(lattice.report());
            let out = match cli.format {
                Format::Text => lattice_text(&report, cat.ring.labels()),
                Format::Json => json(&report)?,
                Format::Dot => lattice_dot(&report),
            };
            cli.emit(&out)?;
        }
        Command::Verify { source, battery, large } => {
            no_dot(cli)?;
            let categories = if *battery {
                verify_battery(*large, cli.seed, &tol)
            } else {
                let source = source.as_deref().expect("clap requires a source without --battery");
                let (cat, loaded) = cli.category(source, &tol)?;
                let group = loaded.group.as_ref().map(|(k, g)| (*k, g));
                vec![verify_category(source, &cat, group)]
            };
            let report = VerifyReport::new(cli.seed, categories);
            let out = if cli.format == Format::Json { json(&report)? } else { report.to_text() };
            cli.emit(&out)?;
            if !report.passed {
                return Err(Failure::Identity("some identities failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identity(msg)) => {
            eprintln!("fuscat: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("fuscat: {e:#}");
            ExitCode::from(2)
        }
    }
}
