//! Parameter sweeps over the discrimination pipeline, one function per
//! output table, plus the interior-maximum search for the critical velocity.
//!
//! Rows are emitted sorted by input tuple (outer loops first), so output
//! bytes depend only on the config.

use serde::Serialize;

use relpol::discrimination::{helstrom, p_opt_closed_form, p_opt_unambiguous};
use relpol::information::{holevo_bound, Ensemble};
use relpol::kinematics::{Factor, UnitDirection};
use relpol::polarization::{helicity_vector, transform_polarization};
use relpol::wavepacket::{effective_density_matrix, BasisMode, PacketSpec, PolDensityMatrix};

use crate::config::RunConfig;

pub fn mode_label(mode: BasisMode) -> &'static str {
    match mode {
        BasisMode::Boosted => "boosted",
        BasisMode::Literal => "literal",
    }
}

/// One output-table row; the variant is the scenario tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "scenario", rename_all = "lowercase")]
pub enum SweepRow {
    Fig1 {
        theta: f64,
        v: f64,
        p_opt: f64,
        p_opt_closed_form: f64,
    },
    Fig2 {
        w: f64,
        v: f64,
        basis_mode: &'static str,
        p_error: f64,
    },
    Fig3 {
        w: f64,
        basis_mode: &'static str,
        v_critical: Option<f64>,
        p_error_at_critical: Option<f64>,
    },
    Fig4 {
        cos_theta_prime: f64,
        chi: f64,
        p_opt: f64,
    },
    Fig5 {
        w: f64,
        v: f64,
        basis_mode: &'static str,
        chi: f64,
        p_success: f64,
    },
}

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Field {
    Num(f64),
    Text(&'static str),
    Missing,
}

impl SweepRow {
    pub fn scenario(&self) -> &'static str {
        match self {
            SweepRow::Fig1 { .. } => "fig1",
            SweepRow::Fig2 { .. } => "fig2",
            SweepRow::Fig3 { .. } => "fig3",
            SweepRow::Fig4 { .. } => "fig4",
            SweepRow::Fig5 { .. } => "fig5",
        }
    }

    /// Column name/value pairs in this scenario's canonical order (matches
    /// the serialized field order).
    pub fn fields(&self) -> Vec<(&'static str, Field)> {
        let opt = |o: Option<f64>| o.map_or(Field::Missing, Field::Num);
        match *self {
            SweepRow::Fig1 {
                theta,
                v,
                p_opt,
                p_opt_closed_form,
            } => vec![
                ("theta", Field::Num(theta)),
                ("v", Field::Num(v)),
                ("p_opt", Field::Num(p_opt)),
                ("p_opt_closed_form", Field::Num(p_opt_closed_form)),
            ],
            SweepRow::Fig2 {
                w,
                v,
                basis_mode,
                p_error,
            } => vec![
                ("w", Field::Num(w)),
                ("v", Field::Num(v)),
                ("basis_mode", Field::Text(basis_mode)),
                ("p_error", Field::Num(p_error)),
            ],
            SweepRow::Fig3 {
                w,
                basis_mode,
                v_critical,
                p_error_at_critical,
            } => vec![
                ("w", Field::Num(w)),
                ("basis_mode", Field::Text(basis_mode)),
                ("v_critical", opt(v_critical)),
                ("p_error_at_critical", opt(p_error_at_critical)),
            ],
            SweepRow::Fig4 {
                cos_theta_prime,
                chi,
                p_opt,
            } => vec![
                ("cos_theta_prime", Field::Num(cos_theta_prime)),
                ("chi", Field::Num(chi)),
                ("p_opt", Field::Num(p_opt)),
            ],
            SweepRow::Fig5 {
                w,
                v,
                basis_mode,
                chi,
                p_success,
            } => vec![
                ("w", Field::Num(w)),
                ("v", Field::Num(v)),
                ("basis_mode", Field::Text(basis_mode)),
                ("chi", Field::Num(chi)),
                ("p_success", Field::Num(p_success)),
            ],
        }
    }
}

/// The boosted view of the reference preparation: +1 helicity along z and
/// −1 helicity at polar angle ϑ, both carried through the boost pipeline.
pub fn boosted_helicity_pair(
    theta: f64,
    v: f64,
) -> relpol::Result<(
    relpol::polarization::PolarizationVector,
    relpol::polarization::PolarizationVector,
)> {
    let prep = relpol::polarization::MonochromaticPreparation::standard_pair(theta)?;
    let boost = [Factor::BoostZ(v)];
    let (_, b1) = transform_polarization(&boost, prep.dir1, &prep.pol1)?;
    let (_, b2) = transform_polarization(&boost, prep.dir2, &prep.pol2)?;
    Ok((b1, b2))
}

/// Unambiguous-discrimination table over (ϑ, v): pipeline value next to the
/// closed form for every cell.
pub fn sweep_unambiguous(theta_grid: &[f64], v_grid: &[f64]) -> Result<Vec<SweepRow>, String> {
    let mut rows = Vec::with_capacity(theta_grid.len() * v_grid.len());
    for &theta in theta_grid {
        for &v in v_grid {
            let cell = |e: relpol::Error| format!("fig1 cell (theta={theta}, v={v}): {e}");
            let (b1, b2) = boosted_helicity_pair(theta, v).map_err(cell)?;
            rows.push(SweepRow::Fig1 {
                theta,
                v,
                p_opt: p_opt_unambiguous(&b1, &b2).map_err(cell)?,
                p_opt_closed_form: p_opt_closed_form(theta, v).map_err(cell)?,
            });
        }
    }
    Ok(rows)
}

/// Effective ρ₊, ρ₋ of a width-W packet at detector velocity v.
pub fn density_pair(
    w: f64,
    v: f64,
    mode: BasisMode,
    cfg: &RunConfig,
) -> relpol::Result<(PolDensityMatrix, PolDensityMatrix)> {
    let spec = PacketSpec::new(cfg.packet.k0, w * cfg.packet.k0)?;
    let grid = cfg.quadrature_grid()?;
    let plus = effective_density_matrix(1, v, &spec, &grid, mode)?;
    let minus = effective_density_matrix(-1, v, &spec, &grid, mode)?;
    Ok((plus, minus))
}

/// Minimum-error probability for the helicity pair at (W, v).
pub fn min_error_probability(
    w: f64,
    v: f64,
    mode: BasisMode,
    cfg: &RunConfig,
) -> relpol::Result<f64> {
    let (plus, minus) = density_pair(w, v, mode, cfg)?;
    Ok(helstrom(&plus, &minus, (0.5, 0.5))?.p_error)
}

/// Minimum-error table over configured W values and the v grid.
pub fn sweep_min_error(cfg: &RunConfig) -> Result<Vec<SweepRow>, String> {
    let v_grid = cfg.v_grid();
    let modes = cfg.basis_mode.modes();
    let mut rows = Vec::new();
    for &w in &cfg.grids.w_list {
        for &v in &v_grid {
            for &mode in &modes {
                let p_error = min_error_probability(w, v, mode, cfg).map_err(|e| {
                    format!("fig2 cell (w={w}, v={v}, {}): {e}", mode_label(mode))
                })?;
                rows.push(SweepRow::Fig2 {
                    w,
                    v,
                    basis_mode: mode_label(mode),
                    p_error,
                });
            }
        }
    }
    Ok(rows)
}

/// An interior maximum located by the critical-point search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub v: f64,
    pub p_error: f64,
}

/// Golden-section maximization on [lo, hi] down to bracket width `tol`;
/// returns the best probed point. Assumes a single interior maximum.
pub fn golden_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64), String>
where
    F: FnMut(f64) -> Result<f64, String>,
{
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - INVPHI * (hi - lo);
    let mut x2 = lo + INVPHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INVPHI * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INVPHI * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}

/// Coarse scan of (0, 1) followed by golden-section refinement. Returns
/// `None` when the scan shows no interior maximum: best value at an edge of
/// the scanned range, or a curve flat to within `flat_tol`.
pub fn locate_interior_max<F>(
    mut f: F,
    coarse_step: f64,
    refine_tol: f64,
    flat_tol: f64,
) -> Result<Option<(f64, f64)>, String>
where
    F: FnMut(f64) -> Result<f64, String>,
{
    let mut vs = Vec::new();
    let mut i = 1usize;
    loop {
        let v = i as f64 * coarse_step;
        if v >= 1.0 - coarse_step / 2.0 {
            break;
        }
        vs.push(v);
        i += 1;
    }
    if vs.len() < 3 {
        return Err(format!("coarse step {coarse_step} leaves fewer than 3 scan points"));
    }
    let mut values = Vec::with_capacity(vs.len());
    for &v in &vs {
        values.push(f(v)?);
    }
    let (mut best, mut best_val) = (0usize, values[0]);
    let mut min_val = values[0];
    for (i, &val) in values.iter().enumerate() {
        if val > best_val {
            best = i;
            best_val = val;
        }
        min_val = min_val.min(val);
    }
    if best_val - min_val <= flat_tol || best == 0 || best == vs.len() - 1 {
        return Ok(None);
    }
    let (v, p) = golden_max(f, vs[best - 1], vs[best + 1], refine_tol)?;
    Ok(Some((v, p)))
}

/// Critical detector velocity for width W: the interior maximum of
/// v ↦ p_error(W, v) on (0, 1), or `None` when the curve has no interior
/// peak there.
pub fn find_critical_point(
    w: f64,
    mode: BasisMode,
    cfg: &RunConfig,
) -> Result<Option<CriticalPoint>, String> {
    let f = |v: f64| {
        min_error_probability(w, v, mode, cfg)
            .map_err(|e| format!("fig3 eval (w={w}, v={v}, {}): {e}", mode_label(mode)))
    };
    let o = &cfg.optimizer;
    Ok(locate_interior_max(f, o.coarse_step, o.refine_tol, o.flat_tol)?
        .map(|(v, p_error)| CriticalPoint { v, p_error }))
}

/// Critical-point table over the configured W list.
pub fn sweep_critical(cfg: &RunConfig, w_list: &[f64]) -> Result<Vec<SweepRow>, String> {
    let mut rows = Vec::new();
    for &w in w_list {
        for &mode in &cfg.basis_mode.modes() {
            let cp = find_critical_point(w, mode, cfg)?;
            rows.push(SweepRow::Fig3 {
                w,
                basis_mode: mode_label(mode),
                v_critical: cp.map(|c| c.v),
                p_error_at_critical: cp.map(|c| c.p_error),
            });
        }
    }
    Ok(rows)
}

/// Holevo bound and unambiguous success probability of the monochromatic
/// pure pair as a function of cosϑ′.
pub fn sweep_holevo_fig4(cfg: &RunConfig) -> Result<Vec<SweepRow>, String> {
    let mut rows = Vec::new();
    for &c in &cfg.cos_grid() {
        let cell = |e: relpol::Error| format!("fig4 cell (cos_theta_prime={c}): {e}");
        let theta = c.clamp(-1.0, 1.0).acos();
        let a1 = helicity_vector(UnitDirection::Z, 1).map_err(cell)?;
        let a2 =
            helicity_vector(UnitDirection::new(theta, 0.0).map_err(cell)?, -1).map_err(cell)?;
        let ensemble = Ensemble::equal_pair(
            PolDensityMatrix::from_pure(&a1).map_err(cell)?,
            PolDensityMatrix::from_pure(&a2).map_err(cell)?,
        )
        .map_err(cell)?;
        rows.push(SweepRow::Fig4 {
            cos_theta_prime: c,
            chi: holevo_bound(&ensemble).map_err(cell)?,
            p_opt: p_opt_unambiguous(&a1, &a2).map_err(cell)?,
        });
    }
    Ok(rows)
}

/// Holevo bound and minimum-error success probability of the packet pair
/// against detector velocity, for the configured widths.
pub fn sweep_holevo_fig5(cfg: &RunConfig) -> Result<Vec<SweepRow>, String> {
    let v_grid = cfg.v_grid();
    let modes = cfg.basis_mode.modes();
    let mut rows = Vec::new();
    for &w in &cfg.grids.holevo_w_list {
        for &v in &v_grid {
            for &mode in &modes {
                let cell = |e: String| format!("fig5 cell (w={w}, v={v}, {}): {e}", mode_label(mode));
                let (plus, minus) =
                    density_pair(w, v, mode, cfg).map_err(|e| cell(e.to_string()))?;
                let chi = holevo_bound(
                    &Ensemble::equal_pair(plus.clone(), minus.clone())
                        .map_err(|e| cell(e.to_string()))?,
                )
                .map_err(|e| cell(e.to_string()))?;
                let p_success = 1.0
                    - helstrom(&plus, &minus, (0.5, 0.5))
                        .map_err(|e| cell(e.to_string()))?
                        .p_error;
                rows.push(SweepRow::Fig5 {
                    w,
                    v,
                    basis_mode: mode_label(mode),
                    chi,
                    p_success,
                });
            }
        }
    }
    Ok(rows)
}
