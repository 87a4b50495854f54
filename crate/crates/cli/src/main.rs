use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hahnroot::envelope::MaxExpMode;
use hahnroot_cli::{run, CliError, Command, Format, Input, Verb};

/// Root expansions of polynomials over F_p(t) and bounds on their roots.
#[derive(Parser)]
#[command(name = "hahnroot", version)]
struct Cli {
    #[command(subcommand)]
    verb: VerbArgs,
}

#[derive(Subcommand)]
enum VerbArgs {
    /// Expand the roots of f as generalized power series.
    Roots {
        #[command(flatten)]
        common: Common,
        /// Number of expansion steps per branch.
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// The additive polynomial divisible by f.
    Addpol {
        #[command(flatten)]
        common: Common,
    },
    /// Points where two or more lines of addpol(f) attain the minimum.
    Intersections {
        #[command(flatten)]
        common: Common,
    },
    /// Denominator, residue-field and order-type bounds for the roots of f.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Which residue-field bound to show in text output.
        #[arg(long, value_enum, default_value_t = Mode::Sharp)]
        mode: Mode,
    },
    /// The order-type bound ω^m alone.
    OrderBound {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// Characteristic of the coefficient field.
    #[arg(long)]
    p: u64,
    /// Polynomial in X with coefficients in F_p(t), e.g. "X^3 - X^2 - 1/t".
    #[arg(long, required_unless_present = "seed")]
    poly: Option<String>,
    /// Use a reproducible random polynomial instead of --poly.
    #[arg(long, conflicts_with = "poly")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Paper,
    Sharp,
}

fn command(cli: Cli) -> Command {
    let (verb, common, depth, mode) = match cli.verb {
        VerbArgs::Roots { common, depth } => (Verb::Roots, common, depth, Mode::Sharp),
        VerbArgs::Addpol { common } => (Verb::Addpol, common, 0, Mode::Sharp),
        VerbArgs::Intersections { common } => (Verb::Intersections, common, 0, Mode::Sharp),
        VerbArgs::Bounds { common, mode } => (Verb::Bounds, common, 0, mode),
        VerbArgs::OrderBound { common } => (Verb::OrderBound, common, 0, Mode::Sharp),
    };
    let input = match (common.poly, common.seed) {
        (Some(text), _) => Input::Text(text),
        (None, Some(seed)) => Input::Seed(seed),
        (None, None) => unreachable!("clap requires --poly or --seed"),
    };
    Command {
        verb,
        p: common.p,
        input,
        depth,
        format: match common.format {
            OutputFormat::Text => Format::Text,
            OutputFormat::Json => Format::Json,
        },
        mode: match mode {
            Mode::Paper => MaxExpMode::Paper,
            Mode::Sharp => MaxExpMode::Sharp,
        },
    }
}

fn report_error(e: &CliError, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&e.to_json()).expect("serializable error")),
        Format::Text => eprintln!("error: {e}"),
    }
}

fn main() -> ExitCode {
    let cmd = command(Cli::parse());
    match run(&cmd) {
        Ok(report) => {
            let out = report.render(cmd.format);
            print!("{out}");
            if !out.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_error(&e, cmd.format);
            ExitCode::FAILURE
        }
    }
}
