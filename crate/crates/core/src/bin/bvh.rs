use std::io::Write;
use std::process::ExitCode;

use bvh_core::report::{emit_report, execute_command, Command, Format, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bvh", version, about = "BV operators and Hochschild cohomology of finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Group invariants
    Info(Args),
    /// Dimensions and bases of H^n(G, F_p)
    Cohomology(Args),
    /// Matrices of Δ_g for central g
    Delta(Args),
    /// The Lie algebra HH^1(kG) and its solubility
    #[command(name = "hh1-lie")]
    Hh1Lie(Args),
    /// Hochschild cohomology dimensions and degree-one products
    Hh(Args),
    /// Δ_g of extension classes against commutators of lifts
    ExtensionDelta(Args),
    /// Run the invariant suite
    Verify(Args),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Args {
    /// Catalog spec such as `dihedral:8`, or `@table.json`
    #[arg(long)]
    group: String,
    #[arg(long)]
    p: Option<u32>,
    /// Element name, label or word in the generators
    #[arg(long)]
    element: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Raise the work budget to 10^7 coordinates
    #[arg(long)]
    heavy: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::Info(a) => (Command::Info, a),
        Cmd::Cohomology(a) => (Command::Cohomology, a),
        Cmd::Delta(a) => (Command::Delta, a),
        Cmd::Hh1Lie(a) => (Command::Hh1Lie, a),
        Cmd::Hh(a) => (Command::Hh, a),
        Cmd::ExtensionDelta(a) => (Command::ExtensionDelta, a),
        Cmd::Verify(a) => (Command::Verify, a),
    };
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    let cfg = RunConfig {
        command,
        group: args.group,
        p: args.p,
        element: args.element,
        max_degree: args.max_degree,
        heavy: args.heavy,
        format,
        seed: args.seed,
    };
    match execute_command(&cfg) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(emit_report(&report, format).as_bytes());
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
