use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use obdd_core::inputs::InputMode;
use obdd_core::{AddressMode, BlockLayout};
use obdd_lab::experiment;
use obdd_lab::ids::{FunctionId, ProgramId};
use obdd_lab::report::{emit_report, emit_suite, Format, Report, Saved};
use obdd_lab::{suite, LabError, Result};

#[derive(Parser)]
#[command(name = "obdd-lab", version, about = "Experiments on leveled decision diagrams and the block reordering transform")]
struct Cli {
    /// Report format: json or csv.
    #[arg(long, global = true, default_value = "json")]
    format: Format,
    /// Record wall-clock durations (reports are then no longer byte-stable).
    #[arg(long, global = true)]
    timing: bool,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct InputArgs {
    /// Check every input (n <= 16).
    #[arg(long, conflicts_with = "samples")]
    exhaustive: bool,
    /// Check N random inputs; requires --seed.
    #[arg(long, value_name = "N", requires = "seed")]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl InputArgs {
    fn mode(&self) -> InputMode {
        match (self.samples, self.seed) {
            (Some(count), Some(seed)) => InputMode::Sampled { count, seed },
            _ => InputMode::Exhaustive,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Truth table of a function (hex), or its value on --input.
    Eval {
        function: FunctionId,
        #[arg(long)]
        input: Option<String>,
    },
    /// Subfunction count at --cut of --order, or the maximum over cuts.
    Nsub {
        function: FunctionId,
        /// Comma-separated variable order, default 1,2,..,n.
        #[arg(long)]
        order: Option<String>,
        #[arg(long)]
        cut: Option<usize>,
    },
    /// Exact minimum width over all variable orders.
    WidthExact { function: FunctionId },
    /// Print a program: text for classical programs, JSON for quantum ones.
    Build { program: ProgramId },
    /// Reorder a program over a block layout and check it.
    Reorder {
        program: ProgramId,
        #[arg(long)]
        layout: BlockLayout,
        #[arg(long, default_value = "xor")]
        mode: AddressMode,
        #[command(flatten)]
        inputs: InputArgs,
        /// Print the reordered program instead of the report.
        #[arg(long)]
        emit_program: bool,
    },
    /// Check a program against a function with margin --epsilon.
    Verify {
        program: ProgramId,
        /// Defaults to the function the program is built for.
        #[arg(long)]
        against: Option<FunctionId>,
        #[arg(long, default_value_t = 1.0 / 6.0)]
        epsilon: f64,
        #[command(flatten)]
        inputs: InputArgs,
    },
    /// Run a named suite: paper-core or quick.
    Suite { id: String },
    /// Re-emit a saved JSON report in --format.
    Report { file: PathBuf },
}

fn finish(mut r: Report, timing: bool, start: Instant, format: Format) -> (String, bool) {
    if timing {
        r.duration_ms = Some(start.elapsed().as_millis() as u64);
    }
    (emit_report(&r, format), r.pass)
}

fn run(cli: &Cli) -> Result<(String, bool)> {
    let start = Instant::now();
    let (f, t) = (cli.format, cli.timing);
    Ok(match &cli.cmd {
        Cmd::Eval { function, input } => finish(experiment::eval(*function, input.as_deref())?, t, start, f),
        Cmd::Nsub { function, order, cut } => finish(experiment::nsub(*function, order.as_deref(), *cut)?, t, start, f),
        Cmd::WidthExact { function } => finish(experiment::width_exact(*function)?, t, start, f),
        Cmd::Build { program } => (program.build()?.serialize() + "\n", true),
        Cmd::Reorder { program, layout, mode, inputs, emit_program } => {
            let (r, out) = experiment::reorder(*program, *layout, *mode, inputs.mode())?;
            if *emit_program {
                (out.serialize() + "\n", r.pass)
            } else {
                finish(r, t, start, f)
            }
        }
        Cmd::Verify { program, against, epsilon, inputs } => finish(experiment::verify(*program, *against, *epsilon, inputs.mode())?, t, start, f),
        Cmd::Suite { id } => {
            let s = suite::run_suite(id, t)?;
            (emit_suite(&s, f), s.pass)
        }
        Cmd::Report { file } => {
            let saved = Saved::parse(&std::fs::read_to_string(file)?)?;
            (saved.emit(f), saved.pass())
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok((text, pass)) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, text).map_err(LabError::from),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code() as u8);
            }
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
