//! Command-line front end: argument parsing, config resolution, sweep
//! dispatch, and output writing. Exit codes: 0 success, 1 domain or runtime
//! failure, 2 configuration or usage error.

pub mod config;
pub mod output;
pub mod selftest;
pub mod sweep;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{BasisChoice, OutputFormat, RunConfig};
use relpol::kinematics::{wigner_angle, Factor, FourVector};
use sweep::SweepRow;

#[derive(Parser, Debug)]
#[command(
    name = "relpol",
    version,
    about = "Photon polarization under Lorentz boosts: discrimination and information sweeps"
)]
struct Cli {
    /// TOML config file; built-in defaults apply when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file (stdout when omitted). Relative paths resolve under
    /// RELPOL_OUT_DIR when that variable is set.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,

    /// Detector basis for density-matrix sweeps.
    #[arg(long, global = true, value_enum)]
    basis_mode: Option<BasisChoice>,

    /// Seed for the Monte Carlo cross-check in selftest.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Wigner rotation angle of a composed transform at a null momentum.
    Wigner {
        /// One factor as KIND:VALUE with KIND in {boost-z, rot-y, rot-z};
        /// repeat to compose. The list is a matrix product, so the last
        /// factor acts on the momentum first.
        #[arg(long = "factor", value_name = "KIND:VALUE", required = true)]
        factors: Vec<String>,

        /// Forward-null four-momentum as T,X,Y,Z.
        #[arg(long, value_name = "T,X,Y,Z", default_value = "1,0,0,1", allow_hyphen_values = true)]
        k: String,
    },

    /// Unambiguous-discrimination probability over the (theta, v) grid.
    Unambiguous {
        /// Number of theta points over [0, pi] (overrides the config grid).
        #[arg(long)]
        theta_steps: Option<usize>,

        /// Number of v points over [v_min, v_max] (overrides the config grid).
        #[arg(long)]
        v_steps: Option<usize>,
    },

    /// Minimum-error probability for the packet pair over (W, v).
    Minerror,

    /// Critical detector velocity (interior maximum of the error) per width.
    Critical {
        /// Analyze a single width instead of the configured list.
        #[arg(long)]
        w: Option<f64>,
    },

    /// Holevo-bound tables: pure pair vs cos(theta'), packet pair vs v.
    Holevo {
        #[arg(long, value_enum, default_value_t = HolevoPart::Both)]
        part: HolevoPart,
    },

    /// Run the built-in invariant checks; nonzero exit iff any fail.
    Selftest,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum HolevoPart {
    Fig4,
    Fig5,
    Both,
}

enum RunError {
    Config(String),
    Domain(String),
}

fn parse_factor(s: &str) -> Result<Factor, String> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| format!("factor '{s}' is not KIND:VALUE"))?;
    let x: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("factor '{s}': {e}"))?;
    match kind.trim() {
        "boost-z" => Ok(Factor::BoostZ(x)),
        "rot-y" => Ok(Factor::RotY(x)),
        "rot-z" => Ok(Factor::RotZ(x)),
        other => Err(format!(
            "unknown factor kind '{other}' (expected boost-z, rot-y, rot-z)"
        )),
    }
}

fn parse_momentum(s: &str) -> Result<FourVector, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("momentum '{s}' needs exactly 4 comma-separated components"));
    }
    let mut c = [0.0f64; 4];
    for (slot, text) in c.iter_mut().zip(&parts) {
        *slot = text
            .trim()
            .parse()
            .map_err(|e| format!("momentum component '{}': {e}", text.trim()))?;
    }
    Ok(FourVector::new(c[0], c[1], c[2], c[3]))
}

fn emit_rows(rows: &[SweepRow], cfg: &RunConfig) -> Result<(), RunError> {
    let text = match cfg.output.format {
        OutputFormat::Csv => output::render_csv(rows),
        OutputFormat::Json => output::render_json(rows).map_err(RunError::Domain)?,
    };
    output::write_text(&text, cfg.output.path.as_deref()).map_err(RunError::Domain)
}

/// Run parameters on stderr, so output files stay pure data.
fn banner(cfg: &RunConfig, what: &str) {
    eprintln!("# relpol {what}");
    eprintln!(
        "# grids (artifact defaults unless configured): theta [0, pi] x{}, v [{}, {}] x{}, cos [-1, 1] x{}",
        cfg.grids.theta_points, cfg.grids.v_min, cfg.grids.v_max, cfg.grids.v_points, cfg.grids.cos_points
    );
    eprintln!(
        "# packet k0 = {}; quadrature {}x{} cutoff {}; basis {:?}",
        cfg.packet.k0,
        cfg.quadrature.n_radial,
        cfg.quadrature.n_azimuthal,
        cfg.quadrature.radial_cutoff,
        cfg.basis_mode
    );
}

fn run(cmd: Cmd, cfg: &RunConfig) -> Result<i32, RunError> {
    match cmd {
        Cmd::Wigner { factors, k } => {
            let factors = factors
                .iter()
                .map(|s| parse_factor(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(RunError::Config)?;
            let momentum = parse_momentum(&k).map_err(RunError::Config)?;
            let angle = wigner_angle(&factors, &momentum)
                .map_err(|e| RunError::Domain(e.to_string()))?;
            let text = match cfg.output.format {
                OutputFormat::Csv => format!("wigner_angle\n{}\n", output::format_f64(angle)),
                OutputFormat::Json => format!(
                    "{}\n",
                    serde_json::json!({ "wigner_angle": angle })
                ),
            };
            output::write_text(&text, cfg.output.path.as_deref()).map_err(RunError::Domain)?;
            Ok(0)
        }
        Cmd::Unambiguous {
            theta_steps,
            v_steps,
        } => {
            for (name, steps) in [("--theta-steps", theta_steps), ("--v-steps", v_steps)] {
                if let Some(n) = steps {
                    if n < 2 {
                        return Err(RunError::Config(format!("{name} must be >= 2, got {n}")));
                    }
                }
            }
            let theta_grid = match theta_steps {
                Some(n) => config::linspace(0.0, std::f64::consts::PI, n),
                None => cfg.theta_grid(),
            };
            let v_grid = match v_steps {
                Some(n) => config::linspace(cfg.grids.v_min, cfg.grids.v_max, n),
                None => cfg.v_grid(),
            };
            banner(cfg, "unambiguous");
            let rows = sweep::sweep_unambiguous(&theta_grid, &v_grid).map_err(RunError::Domain)?;
            emit_rows(&rows, cfg)?;
            Ok(0)
        }
        Cmd::Minerror => {
            banner(cfg, "minerror");
            let rows = sweep::sweep_min_error(cfg).map_err(RunError::Domain)?;
            emit_rows(&rows, cfg)?;
            Ok(0)
        }
        Cmd::Critical { w } => {
            let w_list = match w {
                Some(w) if w.is_finite() && w > 0.0 => vec![w],
                Some(w) => {
                    return Err(RunError::Config(format!("--w must be finite > 0, got {w}")))
                }
                None => cfg.grids.critical_w_list.clone(),
            };
            banner(cfg, "critical");
            let rows = sweep::sweep_critical(cfg, &w_list).map_err(RunError::Domain)?;
            emit_rows(&rows, cfg)?;
            Ok(0)
        }
        Cmd::Holevo { part } => {
            banner(cfg, "holevo");
            let mut rows = Vec::new();
            if part != HolevoPart::Fig5 {
                rows.extend(sweep::sweep_holevo_fig4(cfg).map_err(RunError::Domain)?);
            }
            if part != HolevoPart::Fig4 {
                rows.extend(sweep::sweep_holevo_fig5(cfg).map_err(RunError::Domain)?);
            }
            emit_rows(&rows, cfg)?;
            Ok(0)
        }
        Cmd::Selftest => Ok(selftest::run(cfg)),
    }
}

/// Parse arguments, resolve configuration, run the subcommand; returns the
/// process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut cfg = match cli.config.as_deref() {
        Some(path) => match RunConfig::load(path) {
            Ok(cfg) => cfg,
            Err(msg) => {
                eprintln!("config error: {msg}");
                return 2;
            }
        },
        None => RunConfig::default(),
    };
    if let Some(format) = cli.format {
        cfg.output.format = format;
    }
    if let Some(mode) = cli.basis_mode {
        cfg.basis_mode = mode;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.output.path = Some(out);
    }
    match run(cli.cmd, &cfg) {
        Ok(code) => code,
        Err(RunError::Config(msg)) => {
            eprintln!("config error: {msg}");
            2
        }
        Err(RunError::Domain(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}
