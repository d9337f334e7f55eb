use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tamecut::groups::{GroupSpec, IntMatrix};
use tamecut::tamecuts::Construction;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "tamecut", version, about = "Tame cuts, word-metric balls and multiplier-norm certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Ball cache directory; defaults to ./.tamecut-cache.
    #[arg(long, global = true, env = tamecut::groups::CACHE_ENV)]
    pub cache_dir: Option<PathBuf>,
    /// Enumerate balls without reading or writing the cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Element budget for ball enumeration, or grid points for `anorm`.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Relative tolerance of certificates.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupKind {
    #[value(alias = "zd", alias = "free_abelian")]
    FreeAbelian,
    #[value(alias = "semidirect_zd")]
    Semidirect,
    Pq,
    Lamplighter,
    #[value(alias = "baumslag_solitar", alias = "baumslag-solitar")]
    Bs,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    /// Group family.
    #[arg(long, visible_alias = "family", value_enum)]
    pub group: GroupKind,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Rank of ℤᵈ (default 1).
    #[arg(long)]
    pub d: Option<usize>,
    /// Integer matrix, rows separated by `;`, e.g. "1,1;0,1".
    #[arg(long)]
    pub matrix: Option<String>,
}

impl GroupArgs {
    pub fn spec(&self) -> Result<GroupSpec, CliError> {
        let need = |v: Option<u64>, name: &str| v.ok_or_else(|| CliError::Usage(format!("--{name} is required")));
        let spec = match self.group {
            GroupKind::FreeAbelian => GroupSpec::FreeAbelian { d: self.d.unwrap_or(1) },
            GroupKind::Semidirect => {
                let text = self.matrix.as_deref().ok_or_else(|| CliError::Usage("--matrix is required".into()))?;
                GroupSpec::SemidirectZd { matrix: IntMatrix::parse(text).map_err(|e| CliError::Usage(e.to_string()))? }
            }
            GroupKind::Pq => GroupSpec::Pq { p: need(self.p, "p")?, q: need(self.q, "q")? },
            GroupKind::Lamplighter => {
                let p = need(self.p, "p")?;
                GroupSpec::Lamplighter {
                    p: u32::try_from(p).map_err(|_| CliError::Usage(format!("p = {p} too large")))?,
                }
            }
            GroupKind::Bs => GroupSpec::BaumslagSolitar { p: need(self.p, "p")?, q: need(self.q, "q")? },
        };
        spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(spec)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructionArg {
    /// The family's own construction (subgroup cut, or the product cut for BS).
    Standard,
    /// Indicator of the word ball.
    Ball,
    /// ℤ with length ln(1 + |k|).
    LogLength,
}

impl ConstructionArg {
    pub fn resolve(self) -> Construction {
        match self {
            ConstructionArg::Standard => Construction::Standard,
            ConstructionArg::Ball => Construction::Ball,
            ConstructionArg::LogLength => Construction::LogLength,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstructionArg::Standard => "standard",
            ConstructionArg::Ball => "ball",
            ConstructionArg::LogLength => "log-length",
        }
    }
}

#[derive(Debug, Args)]
pub struct CutArgs {
    #[command(flatten)]
    pub group: GroupArgs,
    /// Single index.
    #[arg(long, conflicts_with = "ns")]
    pub n: Option<u32>,
    /// Comma-separated indices.
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<u32>>,
    #[arg(long, value_enum, default_value_t = ConstructionArg::Standard)]
    pub construction: ConstructionArg,
    /// Extend subgroup cuts to the whole group over a coset section.
    #[arg(long)]
    pub extend: bool,
}

impl CutArgs {
    pub fn indices(&self) -> Result<Vec<u32>, CliError> {
        match (&self.n, &self.ns) {
            (Some(n), _) => Ok(vec![*n]),
            (None, Some(ns)) if !ns.is_empty() => {
                let mut v = ns.clone();
                v.sort_unstable();
                v.dedup();
                Ok(v)
            }
            _ => Err(CliError::Usage("give --n or --ns".into())),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the word ball B_n and report sphere sizes.
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        n: u32,
    },
    /// L¹ norm of the Dirichlet kernel D_n (n may exceed 64 bits).
    Dirichlet {
        #[arg(long)]
        n: String,
    },
    /// A-norm of a trigonometric polynomial on 𝕋ᵈ.
    Anorm {
        /// Terms "k1,k2=re:im;…"; the imaginary part is optional.
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// ‖1_B‖_A / ln|B| for a finite set B ⊂ ℤ.
    Hardy {
        /// Comma-separated integers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with_all = ["interval", "random"])]
        set: Option<Vec<i64>>,
        /// B = {0, …, size − 1}.
        #[arg(long, conflicts_with = "random")]
        interval: Option<usize>,
        /// Random subsets of this size drawn from [−range, range].
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 4096)]
        range: i64,
        /// Number of random subsets.
        #[arg(long, default_value_t = 1)]
        samples: usize,
    },
    /// Lower bound on ‖λ(f)‖ by power iteration on ℓ²(B_R).
    Lambda {
        #[command(flatten)]
        group: GroupArgs,
        /// Terms "word=re:im;…" with words like "a t a^-1"; "e" is the identity.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "ball_indicator")]
        coeffs: Option<String>,
        /// Use f = 1_{B_N}.
        #[arg(long)]
        ball_indicator: Option<u32>,
        #[arg(long, default_value_t = 16)]
        radius: u32,
    },
    /// Random rapid-decay samples on B_1 … B_n and a power fit of the worst ratios.
    RdFit {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10)]
        samples: usize,
    },
    /// Construct cuts.
    Cut(CutArgs),
    /// Construct cuts, check coverage exhaustively and bound norms from below.
    Verify {
        #[command(flatten)]
        cut: CutArgs,
        /// Random probes besides δ_e and the flat probe.
        #[arg(long, default_value_t = 4)]
        probes: usize,
        #[arg(long)]
        probe_radius: Option<u32>,
    },
    /// Fit ‖φ_n‖ ≤ C·n^a over certificate uppers.
    FitGrowth(CutArgs),
    /// Manage the ball cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    List,
    Clear,
    /// Enumerate and store B_n.
    Build {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        n: u32,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ball { .. } => "ball",
            Command::Dirichlet { .. } => "dirichlet",
            Command::Anorm { .. } => "anorm",
            Command::Hardy { .. } => "hardy",
            Command::Lambda { .. } => "lambda",
            Command::RdFit { .. } => "rd-fit",
            Command::Cut(_) => "cut",
            Command::Verify { .. } => "verify",
            Command::FitGrowth(_) => "fit-growth",
            Command::Cache { .. } => "cache",
        }
    }
}
