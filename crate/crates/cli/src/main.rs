use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use kron_cli::{run, Command, Expect, GenKind, GenSpec, JobSpec};

/// Exact Kronecker reduction, simultaneous similarity and equivalence
/// decisions, and descent of certificates between fields.
#[derive(Parser)]
#[command(name = "kron", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Input document (standard input when omitted)
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,

    /// Output file (standard output when omitted)
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Include every intermediate certificate in descent output
    #[arg(long, global = true)]
    trace: bool,

    /// Exit 0 when the verdict matches, 1 when it does not
    #[arg(long, global = true, value_enum)]
    expect: Option<Verdict>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Verdict {
    Yes,
    No,
}

#[derive(Subcommand)]
enum Cmd {
    /// Kronecker form of a pencil with its witnesses
    ReducePencil,
    /// Decide simultaneous similarity of two square families
    DecideSim,
    /// Decide simultaneous equivalence of two rectangular families
    DecideEquiv,
    /// Bring a similarity certificate down to the families' field
    Descend,
    /// Bring an equivalence certificate down to the families' field
    DescendEquiv,
    /// Check a Kronecker form or a certificate against its input
    Verify,
    /// Write reproducible random instances
    GenRandom(GenArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Q, Q(sqrt d), F<q> or a JSON field descriptor
    #[arg(long)]
    field: String,
    /// Witness field for l-certified-pair
    #[arg(long)]
    extension: Option<String>,
    #[arg(short, default_value_t = 2)]
    n: usize,
    #[arg(short)]
    p: Option<usize>,
    /// Matrices per family
    #[arg(long, default_value_t = 2)]
    len: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Pencil,
    SimilarPair,
    EquivalentPair,
    LCertifiedPair,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::ReducePencil => Command::ReducePencil,
        Cmd::DecideSim => Command::DecideSim,
        Cmd::DecideEquiv => Command::DecideEquiv,
        Cmd::Descend => Command::Descend,
        Cmd::DescendEquiv => Command::DescendEquiv,
        Cmd::Verify => Command::Verify,
        Cmd::GenRandom(g) => Command::GenRandom(GenSpec {
            kind: match g.kind {
                Kind::Pencil => GenKind::Pencil,
                Kind::SimilarPair => GenKind::SimilarPair,
                Kind::EquivalentPair => GenKind::EquivalentPair,
                Kind::LCertifiedPair => GenKind::LCertifiedPair,
            },
            field: g.field,
            extension: g.extension,
            n: g.n,
            p: g.p,
            len: g.len,
            count: g.count,
        }),
    };
    let job = JobSpec {
        command,
        input: cli.input,
        output: cli.output,
        seed: cli.seed,
        trace: cli.trace,
        expect: cli.expect.map(|v| match v {
            Verdict::Yes => Expect::Yes,
            Verdict::No => Expect::No,
        }),
    };
    ExitCode::from(run(&job))
}
