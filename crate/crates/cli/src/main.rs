use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod report;
mod suites;

use commands::{Profile, Tolerances};
use report::Format;
use suites::{Suite, VerifyOptions};

/// Spectra, signs, Green's functions and conformal-group checks on round spheres.
#[derive(Parser, Debug)]
#[command(name = "sphere-rigidity", version)]
struct Cli {
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Relative tolerance for radial ODE residuals.
    #[arg(long, default_value_t = 1e-8, global = true)]
    tol_ode: f64,
    /// Tolerance for closed form vs quadrature.
    #[arg(long, default_value_t = 1e-10, global = true)]
    tol_quad: f64,
    /// Tolerance for pairing invariance and Ahlfors covariance.
    #[arg(long, default_value_t = 1e-6, global = true)]
    tol_conf: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues of T₀ from the recursion and the closed form.
    Spectrum {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 10)]
        jmax: u32,
    },
    /// Sign chain for the determinant and ζ(0) functionals.
    Signs {
        #[arg(long, default_value_t = 9)]
        nmax: u32,
    },
    /// Closed-form regularized traces of L⁻² and D⁻².
    Traces {
        #[arg(long, default_value_t = 2)]
        kmax: u32,
        /// Add the numerical regular-part pipeline and its ratio.
        #[arg(long)]
        numeric: bool,
    },
    /// Radial Green's function profile with residual checks.
    Greens {
        #[arg(long)]
        dim: u32,
        #[arg(long, value_enum, default_value = "l")]
        profile: Profile,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Exact check of the Q-curvature Hessian symbol.
    Qsymbol {
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Dimension for the conformal-group suite (both 2 and 3 when omitted).
        #[arg(long)]
        dim: Option<usize>,
        /// Quadrature order of the sphere grids.
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = Tolerances { ode: cli.tol_ode, quad: cli.tol_quad, conf: cli.tol_conf };
    let result = match cli.command {
        Command::Spectrum { dim, jmax } => commands::spectrum(dim, jmax),
        Command::Signs { nmax } => commands::signs(nmax),
        Command::Traces { kmax, numeric } => commands::traces(kmax, numeric),
        Command::Greens { dim, profile, points } => commands::greens_cmd(dim, profile, points, &tol),
        Command::Qsymbol { dim, samples } => commands::qsymbol(dim, samples, cli.seed),
        Command::Verify { suite, dim, order } => {
            let dims = dim.map_or(vec![2, 3], |d| vec![d]);
            suites::verify(suite, &VerifyOptions { dims, seed: cli.seed, order, tol })
        }
    };
    match result {
        Ok(report) => {
            let (out, err) = report.render(cli.format);
            let _ = std::io::stdout().write_all(out.as_bytes());
            let _ = std::io::stderr().write_all(err.as_bytes());
            if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(2)
        }
    }
}
