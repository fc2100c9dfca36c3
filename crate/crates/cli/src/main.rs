//! `ratcount`: exact conversions, orbits, enumerations and identity checks.

mod commands;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Format, System, Target};

#[derive(Parser)]
#[command(
    name = "ratcount",
    version,
    about = "Exact arithmetic for Newman's map, backward continued fractions, the dyadic odometer and Minkowski's question mark"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a rational in one numeration system.
    Expand {
        x: String,
        #[arg(long, value_enum, default_value_t = System::Bcf)]
        system: System,
        /// Number of digits to print for a non-dyadic binary expansion.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Rewrite an expansion of a number in another system.
    Convert {
        expansion: String,
        #[arg(long, value_enum)]
        to: System,
    },
    /// Value of an expansion written in any grammar.
    Eval { expansion: String },
    /// Orbit of x under a map (F, T, R, G, B, R2, J, D2).
    Orbit {
        map: String,
        x: String,
        #[arg(long, default_value_t = 10)]
        steps: u64,
    },
    /// Stream the counting sequence from index `from`.
    Enumerate {
        #[arg(long, value_enum, default_value_t = Target::Positive)]
        target: Target,
        #[arg(long, default_value_t = 10)]
        count: u64,
        /// First index; any size.
        #[arg(long, default_value = "0")]
        from: String,
    },
    /// Position of a number in the counting sequence.
    IndexOf {
        x: String,
        #[arg(long, value_enum, default_value_t = Target::Positive)]
        target: Target,
    },
    /// Minkowski's question mark at a rational in [0,1].
    Qmark {
        x: String,
        /// One of: bcf, mediant, denjoy.
        #[arg(long, default_value = "bcf")]
        algo: String,
    },
    /// Inverse question mark at a dyadic (j/2^k, 0.bits or p/q).
    QmarkInv { d: String },
    /// Points (x, m(x)) on the grid i/samples for plotting.
    GraphData {
        map: String,
        #[arg(long, default_value_t = 64)]
        samples: u64,
        /// Print decimal approximations instead of exact fractions.
        #[arg(long)]
        approx: bool,
    },
    /// Check identities exhaustively up to a bound.
    Verify {
        /// A suite name or `all`.
        suite: String,
        #[arg(long, default_value_t = 100)]
        bound: u64,
    },
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let fmt = cli.format;
    match cli.command {
        Command::Expand { x, system, depth } => commands::expand(out, fmt, &x, system, depth),
        Command::Convert { expansion, to } => commands::convert(out, fmt, &expansion, to),
        Command::Eval { expansion } => commands::eval(out, fmt, &expansion),
        Command::Orbit { map, x, steps } => commands::orbit(out, fmt, &map, &x, steps),
        Command::Enumerate {
            target,
            count,
            from,
        } => commands::enumerate(out, fmt, target, &from, count),
        Command::IndexOf { x, target } => commands::index_of(out, fmt, &x, target),
        Command::Qmark { x, algo } => commands::qmark(out, fmt, &x, &algo),
        Command::QmarkInv { d } => commands::qmark_inv(out, fmt, &d),
        Command::GraphData {
            map,
            samples,
            approx,
        } => commands::graph_data(out, fmt, &map, samples, approx),
        Command::Verify { suite, bound } => commands::verify(out, fmt, &suite, bound),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(failure) => {
            let _ = out.flush();
            eprintln!("ratcount: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
