use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "flatloop", version, about = "Loop-space Morse/Floer computations on flat tori")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Morse,
    Floer,
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Minus,
    Plus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical components G^k of the energy below an action bound.
    Geodesics {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bott-type Morse homology, Floer cohomology or sublevel homology.
    Homology {
        #[arg(long)]
        n: usize,
        /// Winding vector fixing the sublevel `2π²|k|²`, e.g. `1,0`.
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, value_enum, default_value_t = Side::Morse)]
        side: Side,
        /// Compute all three sides and fail unless they agree.
        #[arg(long)]
        check_all: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Conley–Zehnder indices of symplectic paths.
    #[command(group(ArgGroup::new("path").required(true).args(["shear", "quadratic", "exp_path", "rotation", "off_cycle", "perturbed"])))]
    Cz {
        /// Generalized index of the free linearized flow on R^{2n}.
        #[arg(long)]
        shear: bool,
        /// `ν(S) - n` for `S = diag(values)`.
        #[arg(long, allow_hyphen_values = true)]
        quadratic: Option<String>,
        /// Crossing sum of `exp(-tJ₀S)`, `S = diag(values)`.
        #[arg(long, allow_hyphen_values = true)]
        exp_path: Option<String>,
        /// Crossing sum of the rotation `exp(-2πtJ₀)`.
        #[arg(long)]
        rotation: bool,
        /// Crossing sum of the shear pushed off the Maslov cycle.
        #[arg(long)]
        off_cycle: bool,
        /// Crossing sum of the pendulum linearization at x^∓.
        #[arg(long, value_enum)]
        perturbed: Option<BranchArg>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = flatloop_core::symplectic::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = flatloop_core::symplectic::DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Critical pair, spectra, indices and connecting orbits of the pendulum perturbation.
    Perturb {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q0: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Trajectories of the χ ODE, Hamiltonian orbits or the parabolic cylinder flow.
    #[command(group(ArgGroup::new("kind").required(true).args(["chi", "orbit", "cylinder"])))]
    Flow {
        /// Integrate the χ ODE from this initial value.
        #[arg(long)]
        chi: Option<f64>,
        /// `s` window for `--chi`.
        #[arg(long, allow_hyphen_values = true, default_value = "-20,20")]
        range: String,
        #[arg(long)]
        orbit: bool,
        #[arg(long)]
        cylinder: bool,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Winding (orbit: lattice momentum `v/(2π)²`; cylinder: a single integer).
        #[arg(long, allow_hyphen_values = true)]
        k: Option<String>,
        /// Real momentum `v/(2π)²` for `--orbit`, overriding `--k`.
        #[arg(long, allow_hyphen_values = true)]
        momentum: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        chi0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        q0: f64,
        #[arg(long, default_value_t = 15.0)]
        s_max: f64,
        #[arg(long, default_value_t = 64)]
        t_points: usize,
        #[arg(long, default_value_t = 0.01)]
        s_step: f64,
        /// Amplitude of a `sin 2πt` bump added to the ansatz loop.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        bump: f64,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Trajectory export (CSV for `--chi`, JSON otherwise).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Recompute every anchored value and print PASS/FAIL per anchor.
    Paper {
        #[arg(long)]
        json: Option<PathBuf>,
        /// Restrict to one section: energy, homology, index, appendix.
        #[arg(long)]
        only: Option<String>,
    },
    /// Summarize a trajectory CSV (`s,chi`) or cylinder JSON export.
    Report {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sampled loop files.
    #[command(subcommand)]
    Loop(LoopCommand),
}

#[derive(Debug, Subcommand)]
pub enum LoopCommand {
    /// Write the geodesic `kt + q` as a loop file.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        k: String,
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the functionals on a loop file.
    Eval {
        #[arg(long)]
        input: PathBuf,
        /// Pendulum potential `k,q0` for the perturbed energy (circle loops only).
        #[arg(long, allow_hyphen_values = true)]
        potential: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}
