//! Run configuration: TOML schema, defaults, validation, and the grids the
//! sweeps iterate over.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use relpol::wavepacket::{BasisMode, QuadratureGrid};

/// Which detector bases a sweep emits rows for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Boosted,
    Literal,
    Both,
}

impl BasisChoice {
    pub fn modes(self) -> Vec<BasisMode> {
        match self {
            BasisChoice::Boosted => vec![BasisMode::Boosted],
            BasisChoice::Literal => vec![BasisMode::Literal],
            BasisChoice::Both => vec![BasisMode::Boosted, BasisMode::Literal],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Sweep grids. Velocities stay strictly inside (−1, 1); angles cover the
/// full [0, π]; the cosine grid covers [−1, 1] endpoints included.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    pub theta_points: usize,
    pub v_min: f64,
    pub v_max: f64,
    pub v_points: usize,
    pub w_list: Vec<f64>,
    pub critical_w_list: Vec<f64>,
    pub holevo_w_list: Vec<f64>,
    pub cos_points: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            theta_points: 61,
            v_min: -0.95,
            v_max: 0.95,
            v_points: 39,
            w_list: vec![0.01, 0.5, 1.0],
            critical_w_list: vec![0.25, 0.5, 0.75, 1.0],
            holevo_w_list: vec![0.5, 1.0],
            cos_points: 81,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Packet {
    /// Central momentum; packet spread is W·k0 per sweep point.
    pub k0: f64,
}

impl Default for Packet {
    fn default() -> Self {
        Self { k0: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Quadrature {
    pub n_radial: usize,
    pub n_azimuthal: usize,
    pub radial_cutoff: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            n_radial: 64,
            n_azimuthal: 64,
            radial_cutoff: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Optimizer {
    /// Coarse scan step over v ∈ (0, 1) before refinement.
    pub coarse_step: f64,
    /// Bracket width at which golden-section refinement stops.
    pub refine_tol: f64,
    /// Peak-to-peak variation under which the curve counts as flat.
    pub flat_tol: f64,
}

impl Default for Optimizer {
    fn default() -> Self {
        Self {
            coarse_step: 0.02,
            refine_tol: 1e-4,
            flat_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub format: OutputFormat,
    /// Output file; stdout when absent. A relative path is resolved against
    /// RELPOL_OUT_DIR when that variable is set.
    pub path: Option<PathBuf>,
}

impl Default for Output {
    fn default() -> Self {
        Self {
            format: OutputFormat::Csv,
            path: None,
        }
    }
}

/// Full run configuration; every field has a default, so an absent config
/// file or any subset of TOML tables is fine.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Seed for the Monte Carlo cross-check in `selftest`.
    pub seed: u64,
    pub basis_mode: BasisChoice,
    pub grids: Grids,
    pub packet: Packet,
    pub quadrature: Quadrature,
    pub optimizer: Optimizer,
    pub output: Output,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20240817,
            basis_mode: BasisChoice::Boosted,
            grids: Grids::default(),
            packet: Packet::default(),
            quadrature: Quadrature::default(),
            optimizer: Optimizer::default(),
            output: Output::default(),
        }
    }
}

impl RunConfig {
    /// Parse and validate a TOML config file. Parse errors carry the
    /// offending line/column; validation errors name the field.
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| format!("config {}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let g = &self.grids;
        if g.theta_points < 2 {
            return Err(format!("grids.theta_points = {} (need >= 2)", g.theta_points));
        }
        if g.v_points < 2 {
            return Err(format!("grids.v_points = {} (need >= 2)", g.v_points));
        }
        if g.cos_points < 2 {
            return Err(format!("grids.cos_points = {} (need >= 2)", g.cos_points));
        }
        if !(g.v_min.abs() < 1.0 && g.v_max.abs() < 1.0 && g.v_min <= g.v_max) {
            return Err(format!(
                "grids.v_min/v_max = {}/{} (need -1 < v_min <= v_max < 1)",
                g.v_min, g.v_max
            ));
        }
        for (name, list) in [
            ("grids.w_list", &g.w_list),
            ("grids.critical_w_list", &g.critical_w_list),
            ("grids.holevo_w_list", &g.holevo_w_list),
        ] {
            if list.is_empty() {
                return Err(format!("{name} is empty"));
            }
            if let Some(w) = list.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
                return Err(format!("{name} contains {w} (need finite > 0)"));
            }
        }
        if !(self.packet.k0.is_finite() && self.packet.k0 > 0.0) {
            return Err(format!("packet.k0 = {} (need finite > 0)", self.packet.k0));
        }
        self.quadrature_grid().map_err(|e| format!("quadrature: {e}"))?;
        let o = &self.optimizer;
        if !(o.coarse_step > 0.0 && o.coarse_step < 0.5) {
            return Err(format!("optimizer.coarse_step = {} (need in (0, 0.5))", o.coarse_step));
        }
        if !(o.refine_tol > 0.0) {
            return Err(format!("optimizer.refine_tol = {} (need > 0)", o.refine_tol));
        }
        if !(o.flat_tol >= 0.0) {
            return Err(format!("optimizer.flat_tol = {} (need >= 0)", o.flat_tol));
        }
        Ok(())
    }

    pub fn quadrature_grid(&self) -> relpol::Result<QuadratureGrid> {
        QuadratureGrid::new(
            self.quadrature.n_radial,
            self.quadrature.n_azimuthal,
            self.quadrature.radial_cutoff,
        )
    }

    pub fn theta_grid(&self) -> Vec<f64> {
        linspace(0.0, std::f64::consts::PI, self.grids.theta_points)
    }

    pub fn v_grid(&self) -> Vec<f64> {
        linspace(self.grids.v_min, self.grids.v_max, self.grids.v_points)
    }

    pub fn cos_grid(&self) -> Vec<f64> {
        linspace(-1.0, 1.0, self.grids.cos_points)
    }
}

/// `n` evenly spaced points with both endpoints included (`n >= 2`).
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 / (n - 1) as f64))
        .collect()
}
