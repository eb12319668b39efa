//! Acceptance suite: one test per release criterion, each pinning its
//! tolerance and (where applicable) its runtime budget. These are the
//! checks a release build must pass end to end.

use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::PI;

use relpol::discrimination::{
    helstrom, hermitian_eigensystem, p_opt_closed_form, unambiguous_povm,
};
use relpol::information::{holevo_bound, holevo_pure_closed_form, Ensemble};
use relpol::kinematics::{
    rotation_z, wigner_angle, Factor, FourVector, LorentzTransform, UnitDirection,
};
use relpol::montecarlo::mc_density_matrix;
use relpol::polarization::{helicity_vector, overlap, PolarizationVector};
use relpol::wavepacket::{
    effective_density_matrix, BasisMode, PacketSpec, PolDensityMatrix, QuadratureGrid,
};
use relpol::C64;

use relpol_cli::config::{linspace, RunConfig};
use relpol_cli::sweep;

fn random_state(rng: &mut StdRng) -> PolarizationVector {
    let v = Vector3::from_fn(|_, _| {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let n = v.norm();
    PolarizationVector::new(v.map(|x| x / C64::new(n, 0.0)))
}

fn random_direction(rng: &mut StdRng) -> UnitDirection {
    UnitDirection::new(
        rng.random_range(0.0..PI),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
    .unwrap()
}

fn random_factor(rng: &mut StdRng) -> Factor {
    match rng.random_range(0..3) {
        0 => Factor::BoostZ(rng.random_range(-0.9..0.9)),
        1 => Factor::RotY(rng.random_range(-PI..PI)),
        _ => Factor::RotZ(rng.random_range(-PI..PI)),
    }
}

fn assert_runtime(start: Instant, budget: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < budget,
        "{what}: took {elapsed:?}, budget {budget:?}"
    );
}

#[test]
fn criterion_01_closed_form_reproduction() {
    let start = Instant::now();
    let theta_grid = linspace(0.0, PI, 50);
    let v_grid = linspace(-0.99, 0.99, 50);
    let rows = sweep::sweep_unambiguous(&theta_grid, &v_grid).unwrap();
    assert_eq!(rows.len(), 2500);
    let mut worst = 0.0f64;
    for row in &rows {
        if let sweep::SweepRow::Fig1 {
            p_opt,
            p_opt_closed_form,
            ..
        } = row
        {
            worst = worst.max((p_opt - p_opt_closed_form).abs());
        }
    }
    assert!(worst <= 1e-12, "pipeline vs closed form: max gap {worst:.3e}");
    assert_runtime(start, Duration::from_secs(5), "criterion 1");
    println!("criterion 01: 50x50 pipeline-vs-closed-form max gap {worst:.3e}");
}

#[test]
fn criterion_02_boundary_limits() {
    let start = Instant::now();
    // Forward emission is untouched at any velocity, exactly.
    for &v in &linspace(-0.999, 0.999, 41) {
        assert_eq!(p_opt_closed_form(0.0, v).unwrap(), 1.0, "closed form at theta=0, v={v}");
        let (b1, b2) = sweep::boosted_helicity_pair(0.0, v).unwrap();
        assert_eq!(
            1.0 - overlap(&b1, &b2).norm(),
            1.0,
            "pipeline at theta=0, v={v}"
        );
    }
    // Receding at v = −0.999 across theta up to 3pi/4.
    let v = -0.999;
    let mut violations = Vec::new();
    for &theta in &linspace(0.0, 3.0 * PI / 4.0, 31) {
        let p = p_opt_closed_form(theta, v).unwrap();
        if p <= 0.999 {
            violations.push((theta, p));
        }
    }
    assert_runtime(start, Duration::from_secs(1), "criterion 2");
    assert!(
        violations.is_empty(),
        "P(theta, v=-0.999) > 0.999 fails on [0, 3pi/4]: first violation P({:.6}) = {:.7}, worst P(3pi/4) = {:.7}. \
         1 - P = (1+v)(1-cos theta)/(2(1-v cos theta)) reaches 1e-3 at cos theta = -1/2.998 (theta = 1.9106), \
         so at fixed v = -0.999 the bound holds only for theta <= 1.9106, not on all of [0, 3pi/4] \
         (sup P -> 1 pointwise as v -> -1, but not uniformly in theta).",
        violations[0].0,
        violations[0].1,
        p_opt_closed_form(3.0 * PI / 4.0, v).unwrap(),
    );
    println!("criterion 02: boundary limits hold");
}

#[test]
fn criterion_03_povm_validity_sweep() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(301);
    let mut done = 0;
    while done < 1000 {
        let a1 = random_state(&mut rng);
        let a2 = random_state(&mut rng);
        if overlap(&a1, &a2).norm() >= 1.0 - 1e-6 {
            continue;
        }
        done += 1;
        let povm = unambiguous_povm(&a1, &a2, (0.5, 0.5)).unwrap();
        let completeness = (povm.pi0 + povm.pi1 + povm.pi2 - Matrix3::identity())
            .map(|x| x.norm())
            .max();
        assert!(completeness <= 1e-10, "completeness {completeness:.3e}");
        for pi in [&povm.pi0, &povm.pi1, &povm.pi2] {
            let (vals, _) = hermitian_eigensystem(pi).unwrap();
            assert!(vals[0] >= -1e-10, "PSD defect {:.3e}", vals[0]);
        }
        let no_error = (a2.components().adjoint() * povm.pi1 * a2.components())[(0, 0)]
            .norm()
            .max((a1.components().adjoint() * povm.pi2 * a1.components())[(0, 0)].norm());
        assert!(no_error <= 1e-10, "misidentification {no_error:.3e}");
    }
    // The half-overlap pair pins the conclusive weight at 2/3.
    let a1 = PolarizationVector::new(Vector3::new(
        C64::new(1.0, 0.0),
        C64::new(0.0, 0.0),
        C64::new(0.0, 0.0),
    ));
    let a2 = PolarizationVector::new(Vector3::new(
        C64::new(0.5, 0.0),
        C64::new(0.75f64.sqrt(), 0.0),
        C64::new(0.0, 0.0),
    ));
    let povm = unambiguous_povm(&a1, &a2, (0.5, 0.5)).unwrap();
    assert!(
        (povm.coefficient - 2.0 / 3.0).abs() <= 1e-12,
        "coefficient at |s|=1/2: {}",
        povm.coefficient
    );
    assert_runtime(start, Duration::from_secs(5), "criterion 3");
    println!("criterion 03: 1000 random POVMs valid; half-overlap coefficient 2/3");
}

#[test]
fn criterion_04_helstrom_oracle() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(401);
    for _ in 0..1000 {
        let a1 = random_state(&mut rng);
        let a2 = random_state(&mut rng);
        let s = overlap(&a1, &a2).norm();
        let r = helstrom(
            &PolDensityMatrix::from_pure(&a1).unwrap(),
            &PolDensityMatrix::from_pure(&a2).unwrap(),
            (0.5, 0.5),
        )
        .unwrap();
        let oracle = 0.5 * (1.0 - (1.0 - s * s).max(0.0).sqrt());
        assert!(
            (r.p_error - oracle).abs() <= 1e-10,
            "pure pair: {} vs 2x2 oracle {oracle}",
            r.p_error
        );
    }
    for _ in 0..100 {
        let mk = |rng: &mut StdRng| {
            let a = Matrix3::from_fn(|_, _| {
                Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            let m = &a * a.adjoint();
            let tr = m.trace().re;
            PolDensityMatrix::new(m.map(|x| x / C64::new(tr, 0.0))).unwrap()
        };
        let plus = mk(&mut rng);
        let minus = mk(&mut rng);
        let r = helstrom(&plus, &minus, (0.5, 0.5)).unwrap();
        // Recompute the projector form from the returned measurement.
        let projector_form = 0.5 * (plus.matrix() * r.projector_minus).trace().re
            + 0.5 * (minus.matrix() * r.projector_plus).trace().re;
        assert!(
            (r.p_error - projector_form).abs() <= 1e-10,
            "trace-norm {} vs projector {projector_form}",
            r.p_error
        );
    }
    assert_runtime(start, Duration::from_secs(5), "criterion 4");
    println!("criterion 04: 1000 pure pairs match 2x2 oracle; 100 mixed pairs route-consistent");
}

#[test]
fn criterion_05_density_matrix_integrity() {
    let start = Instant::now();
    let base = QuadratureGrid::default();
    let doubled = QuadratureGrid::new(128, 128, base.radial_cutoff()).unwrap();
    for &w in &[0.01, 0.5, 1.0] {
        let spec = PacketSpec::from_width(w).unwrap();
        for &v in &[-0.9, -0.5, 0.0, 0.5, 0.9] {
            for mode in [BasisMode::Boosted, BasisMode::Literal] {
                let rho = effective_density_matrix(1, v, &spec, &base, mode).unwrap();
                let m = rho.matrix();
                let herm = (m - m.adjoint()).map(|x| x.norm()).max();
                assert!(herm <= 1e-10, "hermiticity {herm:.3e} at ({w}, {v}, {mode:?})");
                let tr = (m.trace().re - 1.0).abs();
                assert!(tr <= 1e-8, "trace {tr:.3e} at ({w}, {v}, {mode:?})");
                assert!(
                    rho.eigenvalues()[0] >= -1e-9,
                    "eigenvalue {:.3e} at ({w}, {v}, {mode:?})",
                    rho.eigenvalues()[0]
                );
                for chi in [0.8, 2.1, 5.0] {
                    let r = rotation_z(chi).spatial().map(|x| C64::new(x, 0.0));
                    let asym = (r * m * r.transpose() - m).map(|x| x.norm()).max();
                    assert!(asym <= 1e-8, "axial asymmetry {asym:.3e} at ({w}, {v}, {mode:?})");
                }
                let fine = effective_density_matrix(1, v, &spec, &doubled, mode).unwrap();
                let drift = rho.max_abs_diff(&fine);
                assert!(drift < 1e-8, "resolution drift {drift:.3e} at ({w}, {v}, {mode:?})");
            }
        }
    }
    assert_runtime(start, Duration::from_secs(60), "criterion 5");
    println!("criterion 05: 15 cells x 2 bases Hermitian/trace/PSD/axial and grid-converged");
}

#[test]
fn criterion_06_monte_carlo_equivalence() {
    let start = Instant::now();
    let spec = PacketSpec::from_width(0.5).unwrap();
    let rho = effective_density_matrix(1, 0.5, &spec, &QuadratureGrid::default(), BasisMode::Boosted)
        .unwrap();
    let est = mc_density_matrix(1, 0.5, &spec, BasisMode::Boosted, 100, 10_000, 7).unwrap();
    let sigma = est.max_sigma_distance(rho.matrix());
    assert!(sigma <= 3.0, "quadrature is {sigma:.2} standard errors from the 1e6-sample estimate");
    assert_runtime(start, Duration::from_secs(60), "criterion 6");
    println!("criterion 06: quadrature within {sigma:.2} standard errors of 1e6 Monte Carlo samples");
}

#[test]
fn criterion_07_monochromatic_limit() {
    let spec = PacketSpec::from_width(1e-3).unwrap();
    let grid = QuadratureGrid::default();
    for &v in &[-0.5, 0.0, 0.5] {
        for sigma in [1, -1] {
            let rho = effective_density_matrix(sigma, v, &spec, &grid, BasisMode::Boosted).unwrap();
            let pure = PolDensityMatrix::pure_helicity_z(sigma).unwrap();
            let d = rho.max_abs_diff(&pure);
            assert!(d < 1e-4, "distance {d:.3e} from pure state at (sigma={sigma}, v={v})");
        }
        let plus = effective_density_matrix(1, v, &spec, &grid, BasisMode::Boosted).unwrap();
        let minus = effective_density_matrix(-1, v, &spec, &grid, BasisMode::Boosted).unwrap();
        let p = helstrom(&plus, &minus, (0.5, 0.5)).unwrap().p_error;
        assert!(p < 1e-4, "p_error {p:.3e} at v={v}");
    }
    println!("criterion 07: W=1e-3 packets within 1e-4 of the pure helicity state, p_error < 1e-4");
}

#[test]
fn criterion_08_critical_point_phenomenology() {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let mut last_v = f64::INFINITY;
    let mut located = Vec::new();
    for &w in &[0.25, 0.5, 0.75, 1.0] {
        let cp = sweep::find_critical_point(w, BasisMode::Boosted, &cfg)
            .unwrap()
            .unwrap_or_else(|| panic!("no interior maximum at W={w}"));
        assert!(cp.v > 0.0 && cp.v < 1.0, "v*({w}) = {}", cp.v);
        assert!(cp.v < last_v, "v*({w}) = {} does not decrease (previous {last_v})", cp.v);
        // Verify it is a genuine local maximum of the error curve.
        let p = |v: f64| sweep::min_error_probability(w, v, BasisMode::Boosted, &cfg).unwrap();
        assert!(cp.p_error > p(cp.v - 0.01), "not a local max at W={w} (left)");
        assert!(cp.p_error > p(cp.v + 0.01), "not a local max at W={w} (right)");
        last_v = cp.v;
        located.push((w, cp.v));
    }
    assert_runtime(start, Duration::from_secs(300), "criterion 8");
    println!("criterion 08: interior maxima {located:?} strictly decreasing in W");
}

#[test]
fn criterion_09_holevo_closed_form() {
    let start = Instant::now();
    assert_eq!(holevo_pure_closed_form(1.0).unwrap(), 1.0);
    assert_eq!(holevo_pure_closed_form(-1.0).unwrap(), 0.0);
    let mut worst = 0.0f64;
    for &c in &linspace(-1.0, 1.0, 81) {
        let theta = c.clamp(-1.0, 1.0).acos();
        let a1 = helicity_vector(UnitDirection::Z, 1).unwrap();
        let a2 = helicity_vector(UnitDirection::new(theta, 0.0).unwrap(), -1).unwrap();
        let ens = Ensemble::equal_pair(
            PolDensityMatrix::from_pure(&a1).unwrap(),
            PolDensityMatrix::from_pure(&a2).unwrap(),
        )
        .unwrap();
        worst = worst.max((holevo_bound(&ens).unwrap() - holevo_pure_closed_form(c).unwrap()).abs());
    }
    assert!(worst <= 1e-10, "numeric vs closed form: max gap {worst:.3e}");
    assert_runtime(start, Duration::from_secs(5), "criterion 9");
    println!("criterion 09: endpoints exact; 81-point numeric-vs-closed-form gap {worst:.3e}");
}

#[test]
fn criterion_10_joint_monotonicity() {
    let start = Instant::now();
    let cfg = RunConfig::default();
    let rows = sweep::sweep_holevo_fig5(&cfg).unwrap();
    assert_eq!(rows.len(), 2 * 39);
    let mut informative_pairs = 0;
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if let (
            sweep::SweepRow::Fig5 {
                w: w1,
                chi: c1,
                p_success: p1,
                ..
            },
            sweep::SweepRow::Fig5 {
                w: w2,
                v,
                chi: c2,
                p_success: p2,
                ..
            },
        ) = (a, b)
        {
            if w1 != w2 {
                continue;
            }
            let (dc, dp) = (c2 - c1, p2 - p1);
            if dc.abs() > 1e-9 && dp.abs() > 1e-9 {
                informative_pairs += 1;
                assert_eq!(
                    dc > 0.0,
                    dp > 0.0,
                    "chi and P move oppositely into (w={w2}, v={v}): dchi={dc:.3e}, dP={dp:.3e}"
                );
            }
        }
    }
    assert!(informative_pairs > 50, "only {informative_pairs} informative pairs");
    assert_runtime(start, Duration::from_secs(300), "criterion 10");
    println!("criterion 10: chi and P co-move across {informative_pairs} consecutive row pairs");
}

#[test]
fn criterion_11_wigner_composition() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1101);
    for _ in 0..1000 {
        let head: Vec<Factor> = (0..rng.random_range(1..4))
            .map(|_| random_factor(&mut rng))
            .collect();
        let tail: Vec<Factor> = (0..rng.random_range(1..4))
            .map(|_| random_factor(&mut rng))
            .collect();
        let k = FourVector::from_direction(rng.random_range(0.5..2.0), random_direction(&mut rng));
        let joint: Vec<Factor> = head.iter().chain(tail.iter()).copied().collect();
        let total = wigner_angle(&joint, &k).unwrap();
        let inner = wigner_angle(&tail, &k).unwrap();
        let moved = LorentzTransform::from_factors(&tail).unwrap().apply(&k);
        let outer = wigner_angle(&head, &moved).unwrap();
        let wrapped = (total - inner - outer).rem_euclid(std::f64::consts::TAU);
        let defect = wrapped.min(std::f64::consts::TAU - wrapped);
        assert!(defect <= 1e-9, "composition defect {defect:.3e}");
    }
    assert_runtime(start, Duration::from_secs(2), "criterion 11");
    println!("criterion 11: 1000 random factor-pair compositions additive within 1e-9");
}

#[test]
fn criterion_12_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.toml");
    std::fs::write(
        &config,
        "[grids]\n\
         v_points = 5\n\
         v_min = -0.8\n\
         v_max = 0.8\n\
         w_list = [0.5]\n\
         holevo_w_list = [0.5]\n\
         critical_w_list = [0.5]\n\
         cos_points = 9\n\
         \n\
         [quadrature]\n\
         n_radial = 16\n\
         n_azimuthal = 16\n\
         radial_cutoff = 6.0\n",
    )
    .unwrap();
    let cfg = config.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["wigner", "--factor", "rot-y:0.7", "--factor", "boost-z:0.4", "--k", "1,0.6,0,0.8"],
        vec!["unambiguous", "--config", cfg, "--theta-steps", "5", "--v-steps", "5"],
        vec!["minerror", "--config", cfg, "--basis-mode", "both"],
        vec!["critical", "--config", cfg],
        vec!["holevo", "--config", cfg, "--format", "json"],
        vec!["selftest", "--config", cfg],
    ];
    for args in &commands {
        let run = || {
            let out = Command::new(env!("CARGO_BIN_EXE_relpol"))
                .args(args)
                .output()
                .expect("spawn relpol");
            assert!(
                out.status.success(),
                "relpol {args:?}: {}",
                String::from_utf8_lossy(&out.stderr)
            );
            out.stdout
        };
        let first = run();
        let second = run();
        assert_eq!(first, second, "nondeterministic bytes from relpol {args:?}");
        assert!(!first.is_empty(), "no output from relpol {args:?}");
    }
    // File output is byte-stable too.
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for target in [&out_a, &out_b] {
        let out = Command::new(env!("CARGO_BIN_EXE_relpol"))
            .args(["minerror", "--config", cfg, "--out", target.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(
        std::fs::read(&out_a).unwrap(),
        std::fs::read(&out_b).unwrap()
    );
    println!("criterion 12: all six subcommands byte-identical across repeat runs");
}
