use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "symsq", version, about = "Local symmetric-square factors for GL(2) over Q_p")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct ConfigArgs {
    /// Odd prime p.
    #[arg(long, global = true, default_value_t = 5)]
    pub p: u64,
    /// Working p-adic precision N.
    #[arg(long, global = true, default_value_t = 8)]
    pub precision: u32,
    /// Tolerance for complex comparisons.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Relative tolerance for identifying inverse roots.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub cluster_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Sample count for randomized batteries.
    #[arg(long, global = true, default_value_t = 2000)]
    pub samples: usize,
    /// Descriptor file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Hilbert symbols against the conic oracle, and their identities.
    Hilbert,
    /// Cocycle identity, BLS agreement and splitting over subgroups.
    CocycleTest,
    /// Weil indices γ(ψ_a) and μ_ψ(a).
    WeilIndex,
    /// Tate L, ε, γ with zeta-integral oracle agreement.
    Tate,
    /// L(s, π, Sym²) of one representation.
    Sym2L,
    /// L(s, π, Sym²) = L(s, Sym²ρ(π)).
    Equality,
    /// L(s, π × π) = L(s, ω_π) L(s, π, Sym²).
    Factorization,
    /// Exceptional and regular parts under general position.
    Decompose,
    /// γ, ε and Γ for Sym² of a twisted representation.
    Gamma,
    /// The two expressions for the Plancherel measure.
    Plancherel,
    /// Dependence of γ on ψ.
    PsiDep,
    /// Stability of γ under highly ramified twists.
    Stability,
    /// The metaplectic Bessel function in its asymptotic range.
    Bessel,
    /// Every subcommand with its default battery.
    Suite,
}

impl Command {
    pub const ALL: [Command; 13] = [
        Command::Hilbert,
        Command::CocycleTest,
        Command::WeilIndex,
        Command::Tate,
        Command::Sym2L,
        Command::Equality,
        Command::Factorization,
        Command::Decompose,
        Command::Gamma,
        Command::Plancherel,
        Command::PsiDep,
        Command::Stability,
        Command::Bessel,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Hilbert => "hilbert",
            Command::CocycleTest => "cocycle-test",
            Command::WeilIndex => "weil-index",
            Command::Tate => "tate",
            Command::Sym2L => "sym2-l",
            Command::Equality => "equality",
            Command::Factorization => "factorization",
            Command::Decompose => "decompose",
            Command::Gamma => "gamma",
            Command::Plancherel => "plancherel",
            Command::PsiDep => "psi-dep",
            Command::Stability => "stability",
            Command::Bessel => "bessel",
            Command::Suite => "suite",
        }
    }

    /// Per-command offset of the seed, so a command draws the same samples
    /// alone and inside `suite`.
    pub fn salt(&self) -> u64 {
        self.name().bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
    }
}
