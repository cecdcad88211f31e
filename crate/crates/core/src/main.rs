use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use circnorm::cli::{self, OutputRecord};
use circnorm::sequences::{RecurrenceSpec, SequenceId};
use circnorm::spectral::{Method, DEFAULT_REL_TOL};

/// Spectral norms of circulant matrices built from integer recurrence sequences.
#[derive(Debug, Parser)]
#[command(name = "circnorm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the first n terms of a sequence.
    Seq(SeqArgs),
    /// Spectral norm of circ(x_0, ..., x_{n-1}) by the selected methods.
    Norm(NormArgs),
    /// Check closed-form sums and norm agreement for every n up to --n-max.
    Verify(VerifyArgs),
    /// Time each norm method.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdArg {
    Fibonacci,
    Lucas,
    Pell,
    Perrin,
    Custom,
    /// All four builtin sequences (verify only).
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Sum,
    Dft,
    Power,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct SequenceArgs {
    #[arg(long, value_enum)]
    id: IdArg,
    /// Custom recurrence: k=<order>;coef=<a1,...,ak>;init=<t0,...,tk-1>
    #[arg(long)]
    spec: Option<RecurrenceSpec>,
}

#[derive(Debug, Args)]
struct SeqArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Also report the direct prefix sum and, for builtins, the closed form.
    #[arg(long)]
    sum: bool,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    methods: Vec<MethodArg>,
    #[arg(long, default_value_t = DEFAULT_REL_TOL, value_parser = positive_f64)]
    rel_tol: f64,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n_max: u64,
    #[arg(long, default_value_t = DEFAULT_REL_TOL, value_parser = positive_f64)]
    rel_tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    seq: SequenceArgs,
    /// Comma-separated matrix orders.
    #[arg(long, value_delimiter = ',', required = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    n: Vec<u64>,
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    reps: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

impl SequenceArgs {
    fn resolve(&self, allow_all: bool) -> Vec<SequenceId> {
        let builtin = match self.id {
            IdArg::Fibonacci => SequenceId::Fibonacci,
            IdArg::Lucas => SequenceId::Lucas,
            IdArg::Pell => SequenceId::Pell,
            IdArg::Perrin => SequenceId::Perrin,
            IdArg::All if allow_all => return SequenceId::BUILTINS.to_vec(),
            IdArg::All => usage_error("`--id all` is only accepted by verify"),
            IdArg::Custom => match &self.spec {
                Some(spec) => return vec![SequenceId::Custom(spec.clone())],
                None => usage_error("`--id custom` requires --spec"),
            },
        };
        if self.spec.is_some() {
            usage_error("--spec is only meaningful with `--id custom`");
        }
        vec![builtin]
    }

    fn single(&self) -> SequenceId {
        self.resolve(false).remove(0)
    }
}

fn methods(args: &[MethodArg]) -> Vec<Method> {
    let mut out: Vec<Method> = Vec::new();
    for m in args {
        let add: &[Method] = match m {
            MethodArg::Sum => &[Method::Sum],
            MethodArg::Dft => &[Method::Dft],
            MethodArg::Power => &[Method::Power],
            MethodArg::All => &Method::ALL,
        };
        for &m in add {
            if !out.contains(&m) {
                out.push(m);
            }
        }
    }
    out.sort();
    out
}

fn emit(record: &OutputRecord, format: Format) -> ExitCode {
    let text = match format {
        Format::Csv => record.to_csv().unwrap_or_else(|| record.to_json() + "\n"),
        Format::Json => record.to_json() + "\n",
    };
    if let cli::Payload::Error(e) = &record.results {
        eprintln!("circnorm: {}", e.message);
    }
    let mut out = std::io::stdout().lock();
    if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
        return ExitCode::from(1);
    }
    ExitCode::from(record.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Seq(a) => emit(&cli::cmd_seq(&a.seq.single(), a.n as usize, a.sum), Format::Json),
        Command::Norm(a) => emit(
            &cli::cmd_norm(&a.seq.single(), a.n as usize, &methods(&a.methods), a.rel_tol),
            Format::Json,
        ),
        Command::Verify(a) => emit(
            &cli::cmd_verify(&a.seq.resolve(true), a.n_max as usize, a.rel_tol),
            a.format,
        ),
        Command::Bench(a) => {
            let orders: Vec<usize> = a.n.iter().map(|&n| n as usize).collect();
            emit(
                &cli::cmd_bench(&a.seq.single(), &orders, a.reps as usize),
                a.format,
            )
        }
    }
}
