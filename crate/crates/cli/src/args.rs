use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "discgeom", version, about = "Spectral geometry on weighted point sets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureMode {
    Unit,
    Degree,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightMode {
    File,
    Gaussian,
    Bridge,
    Newton,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Where the space comes from.
#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Edge list, one "i j w" per line (0-based, whitespace separated).
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Point cloud CSV, one row per vertex.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Skip the first line of every CSV input.
    #[arg(long)]
    pub header: bool,
    #[arg(long, value_enum, default_value = "unit")]
    pub measure: MeasureMode,
    /// Measure file, one "i mu" per line; required with --measure file.
    #[arg(long)]
    pub measure_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "file")]
    pub weights: WeightMode,
    /// Gaussian weight scale C.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Gaussian weight width sigma.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Gravitational constant for --weights newton.
    #[arg(long, default_value_t = 1.0)]
    pub cg: f64,
    /// Write the result here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FilterName {
    Heat,
    Explicit,
    Taubin,
    Implicit,
    Biimplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SmoothName {
    Explicit,
    Taubin,
    Implicit,
    Biimplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmbedMethod {
    Eigenmaps,
    Commute,
    Pca,
    Lpp,
    Lle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommuteMethod {
    Hitting,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClusterModeArg {
    Eigenmaps,
    Kernel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Hooke,
    Newton,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and A-orthonormal eigenfunctions of the Laplacian.
    #[command(allow_negative_numbers = true)]
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Graph Fourier coefficients of each signal column.
    #[command(allow_negative_numbers = true)]
    Fourier {
        #[command(flatten)]
        input: Input,
        /// Signal CSV, one row per vertex.
        #[arg(long)]
        signal: PathBuf,
        /// Treat the signal as coefficients and synthesize.
        #[arg(long)]
        inverse: bool,
    },
    /// Spectral filter applied to each signal column.
    #[command(allow_negative_numbers = true)]
    Filter {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, value_enum)]
        kind: FilterName,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Walk constant for the heat filter; non-positive selects delta.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = -0.11)]
        eps2: f64,
        /// Chebyshev order; 0 applies the filter exactly.
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Heat flow exp(-t L / c) f, or S_c^k f with --steps.
    #[command(allow_negative_numbers = true)]
    Heat {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        signal: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Commute-time distance matrix.
    #[command(allow_negative_numbers = true)]
    Commute {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, value_enum, default_value = "hitting")]
        method: CommuteMethod,
    },
    /// Expected hitting times of a target vertex.
    #[command(allow_negative_numbers = true)]
    Hitting {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        target: usize,
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        /// Also estimate by simulating this many walks per start vertex.
        #[arg(long, default_value_t = 0)]
        walks: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Isoperimetric constant and eigenvalue bounds as JSON.
    #[command(allow_negative_numbers = true)]
    Bounds {
        #[command(flatten)]
        input: Input,
    },
    /// Low-dimensional embedding.
    #[command(allow_negative_numbers = true)]
    Embed {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        method: EmbedMethod,
        #[arg(long, default_value_t = 2)]
        dims: usize,
        /// Neighbor count for lle.
        #[arg(long, default_value_t = 4)]
        neighbors: usize,
        /// LLE regularization relative to the local Gram trace.
        #[arg(long)]
        reg: Option<f64>,
    },
    /// Spectral clustering.
    #[command(allow_negative_numbers = true)]
    Cluster {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "eigenmaps")]
        mode: ClusterModeArg,
        /// Kernel-mode walk constant; non-positive selects 2 rho_n.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[arg(long, default_value_t = discgeom::learning::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Curvature-flow smoothing of the point coordinates.
    #[command(allow_negative_numbers = true)]
    Smooth {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        method: SmoothName,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        eps2: f64,
        #[arg(long, default_value_t = 1)]
        iters: usize,
    },
    /// Harmonic extension of boundary values.
    #[command(allow_negative_numbers = true)]
    Dirichlet {
        #[command(flatten)]
        input: Input,
        /// One "i<TAB>v1,...,vd" per line.
        #[arg(long)]
        boundary: PathBuf,
    },
    /// Point-mass trajectories under springs or gravity.
    #[command(allow_negative_numbers = true)]
    Simulate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum)]
        law: Law,
        /// Leapfrog step for hooke (default: the stability bound).
        #[arg(long)]
        dt: Option<f64>,
        /// Flow step for newton.
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Record every this many steps.
        #[arg(long, default_value_t = 1)]
        every: usize,
        /// Initial velocities CSV for hooke (default zero).
        #[arg(long)]
        velocities: Option<PathBuf>,
    },
    /// Runs the identity suite on the input space.
    #[command(allow_negative_numbers = true)]
    Checks {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}
