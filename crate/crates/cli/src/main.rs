use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hsmult::job::parse_field;
use hsmult::output::{render_report, write_error, write_outputs};
use hsmult::{run, CliError, Command, JobFile, Overrides};

/// Hilbert-Samuel multiplicities, filtered Koszul homology and the checks
/// built on them.
#[derive(Parser, Debug)]
#[command(name = "hsmult", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Job file.
    #[arg(long)]
    job: PathBuf,
    /// Directory for report.txt, summary.json and CSV tables.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest n tabulated.
    #[arg(long)]
    nmax: Option<i64>,
    /// Coefficient field, `Q` or `Fp:<p>`.
    #[arg(long)]
    field: Option<String>,
    /// Largest truncation level N.
    #[arg(long = "trunc-max")]
    trunc_max: Option<u32>,
}

fn execute(cli: &Cli) -> Result<i32, CliError> {
    let field = cli.field.as_deref().map(parse_field).transpose().map_err(CliError::Usage)?;
    let job = JobFile::load(&cli.job)?;
    let ov = Overrides {
        n_hi: cli.nmax,
        field,
        trunc_max: cli.trunc_max,
    };
    let outcome = run(&job, cli.command, &ov)?;
    print!("{}", render_report(&outcome));
    if let Some(dir) = &cli.out {
        write_outputs(dir, &outcome)?;
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            if let Some(dir) = &cli.out {
                let _ = write_error(dir, cli.command.name(), &e);
            }
            ExitCode::from(1)
        }
    }
}
