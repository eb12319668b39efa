//! Built-in invariant suite: quick, deterministic spot checks of every
//! layer, runnable from the installed binary without the test harness.
//!
//! All randomness is internally seeded so the report is reproducible; only
//! the quadrature-versus-Monte-Carlo check honors the configured seed.

use nalgebra::{Matrix3, Vector3};
use num_complex::Complex;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::{PI, TAU};

use relpol::discrimination::{
    helstrom, hermitian_eigensystem, p_opt_closed_form, p_opt_unambiguous, unambiguous_povm,
};
use relpol::information::{holevo_bound, holevo_pure_closed_form, von_neumann_entropy, Ensemble};
use relpol::kinematics::{
    aberrate, rotation_z, wigner_angle, Factor, FourVector, LorentzTransform, UnitDirection,
};
use relpol::montecarlo::mc_density_matrix;
use relpol::polarization::{helicity_vector, overlap, transform_polarization, PolarizationVector};
use relpol::wavepacket::{effective_density_matrix, BasisMode, PacketSpec, PolDensityMatrix};
use relpol::C64;

use crate::config::RunConfig;
use crate::sweep::boosted_helicity_pair;

fn random_factor(rng: &mut StdRng) -> Factor {
    match rng.random_range(0..3) {
        0 => Factor::BoostZ(rng.random_range(-0.9..0.9)),
        1 => Factor::RotY(rng.random_range(-PI..PI)),
        _ => Factor::RotZ(rng.random_range(-PI..PI)),
    }
}

fn random_direction(rng: &mut StdRng) -> UnitDirection {
    UnitDirection::new(rng.random_range(0.0..PI), rng.random_range(0.0..TAU)).unwrap()
}

fn random_state(rng: &mut StdRng) -> PolarizationVector {
    let v = Vector3::from_fn(|_, _| {
        Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let n = v.norm();
    PolarizationVector::new(v.map(|x| x / C64::new(n, 0.0)))
}

fn check(condition: bool, detail: String) -> Result<(), String> {
    if condition {
        Ok(())
    } else {
        Err(detail)
    }
}

fn wigner_additivity() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(101);
    for _ in 0..200 {
        let head: Vec<Factor> = (0..rng.random_range(1..4))
            .map(|_| random_factor(&mut rng))
            .collect();
        let tail: Vec<Factor> = (0..rng.random_range(1..4))
            .map(|_| random_factor(&mut rng))
            .collect();
        let k = FourVector::from_direction(rng.random_range(0.5..2.0), random_direction(&mut rng));
        let joint: Vec<Factor> = head.iter().chain(tail.iter()).copied().collect();
        let total = wigner_angle(&joint, &k).map_err(|e| e.to_string())?;
        let inner = wigner_angle(&tail, &k).map_err(|e| e.to_string())?;
        let moved = LorentzTransform::from_factors(&tail)
            .map_err(|e| e.to_string())?
            .apply(&k);
        let outer = wigner_angle(&head, &moved).map_err(|e| e.to_string())?;
        let wrapped = (total - inner - outer).rem_euclid(TAU);
        let defect = wrapped.min(TAU - wrapped);
        check(defect < 1e-9, format!("composition defect {defect:.3e}"))?;
    }
    Ok(())
}

fn helicity_phase_covariance() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(102);
    for _ in 0..100 {
        let factors = [random_factor(&mut rng)];
        let dir = random_direction(&mut rng);
        let sigma = if rng.random_bool(0.5) { 1 } else { -1 };
        let pol = helicity_vector(dir, sigma).map_err(|e| e.to_string())?;
        let (new_dir, new_pol) =
            transform_polarization(&factors, dir, &pol).map_err(|e| e.to_string())?;
        let theta_w = wigner_angle(&factors, &FourVector::from_direction(1.0, dir))
            .map_err(|e| e.to_string())?;
        let phase = Complex::from_polar(1.0, -(sigma as f64) * theta_w);
        let expected = helicity_vector(new_dir, sigma).map_err(|e| e.to_string())?;
        let defect = (new_pol.components() - expected.components().map(|x| phase * x))
            .map(|x| x.norm())
            .max();
        check(defect < 1e-12, format!("phase defect {defect:.3e}"))?;
    }
    Ok(())
}

fn aberration_consistency() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(103);
    for _ in 0..100 {
        let v = rng.random_range(-0.95..0.95);
        let theta = rng.random_range(0.0..PI);
        let dir = UnitDirection::new(theta, rng.random_range(0.0..TAU)).unwrap();
        let moved = LorentzTransform::from_factors(&[Factor::BoostZ(v)])
            .map_err(|e| e.to_string())?
            .apply(&FourVector::from_direction(1.0, dir));
        let from_vector = moved.direction().map_err(|e| e.to_string())?.theta();
        let closed = aberrate(theta, v).map_err(|e| e.to_string())?;
        check(
            (from_vector - closed).abs() < 1e-12,
            format!("aberration mismatch {:.3e}", (from_vector - closed).abs()),
        )?;
    }
    Ok(())
}

fn unambiguous_closed_form() -> Result<(), String> {
    for i in 0..=20 {
        let theta = PI * i as f64 / 20.0;
        for j in 0..=20 {
            let v = -0.95 + 1.9 * j as f64 / 20.0;
            let (b1, b2) = boosted_helicity_pair(theta, v).map_err(|e| e.to_string())?;
            let pipeline = p_opt_unambiguous(&b1, &b2).map_err(|e| e.to_string())?;
            let closed = p_opt_closed_form(theta, v).map_err(|e| e.to_string())?;
            check(
                (pipeline - closed).abs() < 1e-12,
                format!("({theta}, {v}): pipeline {pipeline} vs closed {closed}"),
            )?;
        }
    }
    Ok(())
}

fn povm_validity() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(104);
    let mut done = 0;
    while done < 100 {
        let a1 = random_state(&mut rng);
        let a2 = random_state(&mut rng);
        if overlap(&a1, &a2).norm() >= 1.0 - 1e-6 {
            continue;
        }
        done += 1;
        let povm = unambiguous_povm(&a1, &a2, (0.5, 0.5)).map_err(|e| e.to_string())?;
        let sum = povm.pi0 + povm.pi1 + povm.pi2;
        let completeness = (sum - Matrix3::identity()).map(|x| x.norm()).max();
        check(completeness < 1e-10, format!("completeness {completeness:.3e}"))?;
        for pi in [&povm.pi0, &povm.pi1, &povm.pi2] {
            let (vals, _) = hermitian_eigensystem(pi).map_err(|e| e.to_string())?;
            check(vals[0] > -1e-10, format!("element eigenvalue {:.3e}", vals[0]))?;
        }
        let miss = (a2.components().adjoint() * povm.pi1 * a2.components())[(0, 0)]
            .norm()
            .max((a1.components().adjoint() * povm.pi2 * a1.components())[(0, 0)].norm());
        check(miss < 1e-10, format!("misidentification {miss:.3e}"))?;
        let gap = (povm.success_probability(&a1, &a2)
            - p_opt_unambiguous(&a1, &a2).map_err(|e| e.to_string())?)
        .abs();
        check(gap < 1e-12, format!("success gap {gap:.3e}"))?;
    }
    Ok(())
}

fn helstrom_pure_oracle() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(105);
    for _ in 0..200 {
        let a1 = random_state(&mut rng);
        let a2 = random_state(&mut rng);
        let s = overlap(&a1, &a2).norm();
        let result = helstrom(
            &PolDensityMatrix::from_pure(&a1).map_err(|e| e.to_string())?,
            &PolDensityMatrix::from_pure(&a2).map_err(|e| e.to_string())?,
            (0.5, 0.5),
        )
        .map_err(|e| e.to_string())?;
        let oracle = 0.5 * (1.0 - (1.0 - s * s).max(0.0).sqrt());
        check(
            (result.p_error - oracle).abs() < 1e-10,
            format!("p_error {} vs 2x2 oracle {oracle}", result.p_error),
        )?;
    }
    Ok(())
}

fn density_integrity(cfg: &RunConfig) -> Result<(), String> {
    let grid = cfg.quadrature_grid().map_err(|e| e.to_string())?;
    for &w in &[0.5, 1.0] {
        let spec = PacketSpec::new(cfg.packet.k0, w * cfg.packet.k0).map_err(|e| e.to_string())?;
        for &v in &[-0.5, 0.0, 0.5] {
            let plus = effective_density_matrix(1, v, &spec, &grid, BasisMode::Boosted)
                .map_err(|e| e.to_string())?;
            let m = plus.matrix();
            let herm = (m - m.adjoint()).map(|x| x.norm()).max();
            check(herm < 1e-10, format!("hermiticity {herm:.3e} at (W={w}, v={v})"))?;
            let tr = (m.trace().re - 1.0).abs();
            check(tr < 1e-8, format!("trace defect {tr:.3e} at (W={w}, v={v})"))?;
            for chi in [0.9, 2.3, 4.4] {
                let r = rotation_z(chi).spatial().map(|x| C64::new(x, 0.0));
                let asym = (r * m * r.transpose() - m).map(|x| x.norm()).max();
                check(asym < 1e-8, format!("axial asymmetry {asym:.3e} at (W={w}, v={v})"))?;
            }
            let minus = effective_density_matrix(-1, v, &spec, &grid, BasisMode::Boosted)
                .map_err(|e| e.to_string())?;
            let conj = (minus.matrix() - m.map(|x| x.conj())).map(|x| x.norm()).max();
            check(conj < 1e-12, format!("conjugation defect {conj:.3e} at (W={w}, v={v})"))?;
        }
    }
    Ok(())
}

fn quadrature_vs_montecarlo(cfg: &RunConfig) -> Result<(), String> {
    let spec = PacketSpec::new(cfg.packet.k0, 0.5 * cfg.packet.k0).map_err(|e| e.to_string())?;
    let grid = cfg.quadrature_grid().map_err(|e| e.to_string())?;
    let rho = effective_density_matrix(1, 0.5, &spec, &grid, BasisMode::Boosted)
        .map_err(|e| e.to_string())?;
    let est = mc_density_matrix(1, 0.5, &spec, BasisMode::Boosted, 50, 2000, cfg.seed)
        .map_err(|e| e.to_string())?;
    let sigma = est.max_sigma_distance(rho.matrix());
    // 5 sigma over 18 entry components keeps false alarms ~1e-5 per seed.
    check(
        sigma < 5.0,
        format!("quadrature {sigma:.2} standard errors from Monte Carlo (seed {})", cfg.seed),
    )
}

fn holevo_closed_form() -> Result<(), String> {
    for i in 0..=80 {
        let c = -1.0 + 2.0 * i as f64 / 80.0;
        let theta = c.clamp(-1.0, 1.0).acos();
        let a1 = helicity_vector(UnitDirection::Z, 1).map_err(|e| e.to_string())?;
        let a2 = helicity_vector(UnitDirection::new(theta, 0.0).unwrap(), -1)
            .map_err(|e| e.to_string())?;
        let ens = Ensemble::equal_pair(
            PolDensityMatrix::from_pure(&a1).map_err(|e| e.to_string())?,
            PolDensityMatrix::from_pure(&a2).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let numeric = holevo_bound(&ens).map_err(|e| e.to_string())?;
        let closed = holevo_pure_closed_form(c).map_err(|e| e.to_string())?;
        check(
            (numeric - closed).abs() < 1e-10,
            format!("chi({c}) numeric {numeric} vs closed {closed}"),
        )?;
    }
    Ok(())
}

fn entropy_rotation_invariance() -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(106);
    for _ in 0..50 {
        let a = Matrix3::from_fn(|_, _| {
            Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let m = &a * a.adjoint();
        let tr = m.trace().re;
        let rho =
            PolDensityMatrix::new(m.map(|x| x / C64::new(tr, 0.0))).map_err(|e| e.to_string())?;
        let r = relpol::kinematics::standard_rotation(random_direction(&mut rng))
            .spatial()
            .map(|x| C64::new(x, 0.0));
        let rotated = PolDensityMatrix::new(r * rho.matrix() * r.adjoint())
            .map_err(|e| e.to_string())?;
        let gap = (von_neumann_entropy(&rho).map_err(|e| e.to_string())?
            - von_neumann_entropy(&rotated).map_err(|e| e.to_string())?)
        .abs();
        check(gap < 1e-10, format!("entropy shift {gap:.3e}"))?;
    }
    Ok(())
}

/// Run every check, print one line per check, and return the exit code.
pub fn run(cfg: &RunConfig) -> i32 {
    let checks: Vec<(&str, Box<dyn Fn() -> Result<(), String>>)> = vec![
        ("wigner-additivity", Box::new(wigner_additivity)),
        ("helicity-phase-covariance", Box::new(helicity_phase_covariance)),
        ("aberration-closed-form", Box::new(aberration_consistency)),
        ("unambiguous-closed-form", Box::new(unambiguous_closed_form)),
        ("povm-validity", Box::new(povm_validity)),
        ("helstrom-pure-oracle", Box::new(helstrom_pure_oracle)),
        ("density-integrity", {
            let cfg = cfg.clone();
            Box::new(move || density_integrity(&cfg))
        }),
        ("quadrature-vs-montecarlo", {
            let cfg = cfg.clone();
            Box::new(move || quadrature_vs_montecarlo(&cfg))
        }),
        ("holevo-closed-form", Box::new(holevo_closed_form)),
        ("entropy-rotation-invariance", Box::new(entropy_rotation_invariance)),
    ];

    let total = checks.len();
    let mut failed = 0;
    for (name, run_check) in checks {
        match run_check() {
            Ok(()) => println!("ok {name}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        println!("selftest: {total} checks passed");
        0
    } else {
        println!("selftest: {failed} of {total} checks failed");
        1
    }
}
