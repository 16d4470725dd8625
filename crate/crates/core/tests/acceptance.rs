//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p qcohere --test acceptance`.

use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use qcohere::oracle::{central_difference, phase_state_expectation, torus_average};
use qcohere::{
    coherence_profile, covariance_check, density_matrix_distance, evolve, find_coherent_basis,
    hilbert_schmidt_coherence, joint_distribution, moment, multi_phase_distribution, random_basis,
    random_state, renyi_integral, single_phase_distribution, small_signal_quadratic,
    statistical_distance, statistics_derivative, susskind_glogower_moment, uncertainty_bound_check,
    wiener_kintchine_resolution, witness_search, BasisObservable, CMatrix, Complex64,
    DensityMatrix, GammaTriple, Povm, UnitarySignal, WitnessCertificate,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Files = Vec<(String, Vec<u8>)>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Random `(rho, basis)` with `N` in `[lo, hi]`, rank in `[1, N]`.
fn draw(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> (DensityMatrix, BasisObservable) {
    let n = rng.random_range(lo..=hi);
    let rank = rng.random_range(1..=n);
    let rho = random_state(n, rank, rng.random()).unwrap();
    let basis = random_basis(n, rng.random()).unwrap();
    (rho, basis)
}

fn random_generator(rng: &mut ChaCha8Rng, n: usize) -> BasisObservable {
    let eig = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    random_basis(n, rng.random())
        .unwrap()
        .with_eigenvalues(eig)
        .unwrap()
}

fn qubit_generator() -> BasisObservable {
    BasisObservable::computational(vec![1.0, 2.0]).unwrap()
}

fn sigma_y_povm() -> Povm {
    Povm::shifted_fourier(&BasisObservable::linear(2).unwrap()).unwrap()
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_analytic: f64 = 0.0;
    let mut worst_mc: f64 = 0.0;
    let mut mc_count = 0;
    for _ in 0..200 {
        let (rho, g) = draw(&mut rng, 2, 8);
        let dist = multi_phase_distribution(&rho, &g).unwrap();
        let renyi = renyi_integral(&dist);
        let chs = hilbert_schmidt_coherence(&coherence_profile(&rho, &g).unwrap());
        worst_analytic = worst_analytic.max((renyi - 1.0 - chs).abs());

        if rho.dim() <= 4 {
            let m = rho.in_basis(&g).unwrap();
            let mc = torus_average(rho.dim(), 1_000_000, rng.random(), 8, |p| {
                Complex64::new(phase_state_expectation(&m, p).powi(2), 0.0)
            })
            .re;
            worst_mc = worst_mc.max((mc - renyi).abs() / renyi);
            mc_count += 1;
        }
    }
    ensure(worst_analytic <= 1e-12, || {
        format!("analytic error {worst_analytic:e}")
    })?;
    ensure(worst_mc <= 1e-2, || {
        format!("Monte-Carlo relative error {worst_mc:e}")
    })?;
    Ok(format!(
        "max |∫P² - 1 - C_HS| = {worst_analytic:.1e}; MC rel err {worst_mc:.1e} over {mc_count} draws"
    ))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut certified = 0;
    let mut worst_value = f64::NEG_INFINITY;
    while certified < 500 {
        let (rho, g) = draw(&mut rng, 2, 8);
        let max_coherence = coherence_profile(&rho, &g).unwrap().max_modulus();
        if max_coherence <= 1e-6 {
            continue;
        }
        match witness_search(&rho, &g, 1e-9).unwrap() {
            WitnessCertificate::Nonclassical {
                subspace,
                gamma,
                y,
                z,
                value,
            } => {
                let [a, b, c] = gamma.as_array();
                ensure(a * a + b * b + c * c <= 1.0 + 1e-12, || {
                    "gamma outside ball".into()
                })?;
                let again = joint_distribution(&subspace, &gamma).unwrap().p(y, z);
                ensure((again - value).abs() <= 1e-12, || {
                    "certificate not reproducible".into()
                })?;
                ensure(value < 0.0, || format!("non-negative certificate {value}"))?;
                worst_value = worst_value.max(value);
            }
            other => {
                return Err(format!(
                    "no certificate for coherence {max_coherence:e}: {other:?}"
                ))
            }
        }
        certified += 1;
    }

    // converse: diagonal states against a 10^4-point grid of admissible triples
    let mut grid = Vec::new();
    for r in [0.25, 0.5, 0.75, 1.0] {
        for a in 0..50 {
            for b in 0..50 {
                let theta = PI * (a as f64 + 0.5) / 50.0;
                let psi = TAU * b as f64 / 50.0;
                let gy = r * theta.sin() * psi.cos();
                let gz = r * theta.sin() * psi.sin();
                let gyz = r * theta.cos();
                if let Ok(t) = GammaTriple::new(gy, gz, gyz) {
                    if gy.abs() >= 1e-6 && gz.abs() >= 1e-6 {
                        grid.push(t);
                    }
                }
            }
        }
    }
    let mut grid_min = f64::INFINITY;
    for s in 0..50 {
        let n = 2 + s % 7;
        let pops: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let total: f64 = pops.iter().sum();
        let pops: Vec<f64> = pops.iter().map(|p| p / total).collect();
        let diag = DensityMatrix::diagonal(&pops).unwrap();
        // diagonal in a random basis G
        let g = random_basis(n, rng.random()).unwrap();
        let rho = DensityMatrix::new(g.from_basis(diag.matrix())).unwrap();
        for j in 0..n {
            for k in (j + 1)..n {
                let sub = qcohere::pauli_subspace(&rho, &g, j, k).unwrap();
                for gamma in &grid {
                    grid_min = grid_min.min(joint_distribution(&sub, gamma).unwrap().minimum().2);
                }
            }
        }
    }
    ensure(grid_min >= -1e-12, || {
        format!("converse grid minimum {grid_min:e}")
    })?;
    Ok(format!(
        "500/500 certified (least negative p = {worst_value:.3e}); converse min p over {} triples = {grid_min:.3e}",
        grid.len()
    ))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    let mut via_rotation = 0;
    let mut attempt = 0;
    while tested < 200 {
        let n = rng.random_range(2..=8);
        let rho = match attempt % 3 {
            0 => random_state(n, rng.random_range(1..=n), rng.random()).unwrap(),
            1 => {
                let pops: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
                let total: f64 = pops.iter().sum();
                DensityMatrix::diagonal(&pops.iter().map(|p| p / total).collect::<Vec<_>>())
                    .unwrap()
            }
            _ => {
                // close to I/N
                let eps = rng.random_range(2e-3..1e-2);
                let sigma = random_state(n, n, rng.random()).unwrap();
                let mixed = CMatrix::identity(n, n).unscale(n as f64);
                DensityMatrix::new(mixed.scale(1.0 - eps) + sigma.matrix().scale(eps)).unwrap()
            }
        };
        attempt += 1;
        if rho.distance_from_mixed() <= 1e-3 {
            continue;
        }
        let found = find_coherent_basis(&rho, 1e-10).unwrap().ok_or_else(|| {
            format!(
                "no coherent basis for distance {:e}",
                rho.distance_from_mixed()
            )
        })?;
        if found.basis != BasisObservable::linear(n).unwrap() {
            via_rotation += 1;
        }
        let cert = witness_search(&rho, &found.basis, 1e-9).unwrap();
        ensure(cert.is_nonclassical() && cert.min_p() < 0.0, || {
            format!("pipeline failed: {cert:?}")
        })?;
        tested += 1;
    }
    for n in 1..=8 {
        let mixed = DensityMatrix::maximally_mixed(n).unwrap();
        ensure(
            find_coherent_basis(&mixed, 1e-10).unwrap().is_none(),
            || format!("I/{n} got a basis"),
        )?;
    }
    Ok(format!(
        "200/200 certified ({via_rotation} via two-level rotation); I/N -> none for N = 1..8"
    ))
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (rho, g) = draw(&mut rng, 2, 8);
        let dist = multi_phase_distribution(&rho, &g).unwrap();
        let n = rho.dim();
        for j in 0..n {
            for k in 0..n {
                if j == k {
                    continue;
                }
                let direct = (g.ket(j).adjoint() * rho.matrix() * g.ket(k))[(0, 0)];
                worst = worst.max((moment(&dist, j, k).unwrap() - direct).norm());
            }
        }
    }
    ensure(worst <= 1e-12, || format!("moment error {worst:e}"))?;
    Ok(format!(
        "max |moment - ⟨j|rho|k⟩| = {worst:.1e} over 100 states"
    ))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (rho, g) = draw(&mut rng, 2, 8);
        let n = rho.dim();
        let j = rng.random_range(0..n);
        let lambda = rng.random_range(-PI..PI);
        let phases: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
        let (a, b) = covariance_check(&rho, &g, j, lambda, &phases).unwrap();
        worst = worst.max((a - b).abs());
    }
    ensure(worst <= 1e-12, || format!("covariance error {worst:e}"))?;
    Ok(format!("max |P(𝛗; UρU†) - P(𝛗 + λe_j; ρ)| = {worst:.1e}"))
}

fn resolution(rho: &DensityMatrix) -> f64 {
    let g = BasisObservable::linear(rho.dim()).unwrap();
    wiener_kintchine_resolution(&single_phase_distribution(rho, &g).unwrap())
        .unwrap()
        .delta2_lambda
}

fn criterion_6() -> Outcome {
    let mixed = resolution(&DensityMatrix::maximally_mixed(2).unwrap());
    let plus = resolution(&DensityMatrix::plus(2).unwrap());
    ensure((mixed - PI.sqrt()).abs() <= 1e-12, || {
        format!("Δ²λ(I/2) = {mixed}")
    })?;
    ensure((plus - 2.0 / 3.0 * PI.sqrt()).abs() <= 1e-12, || {
        format!("Δ²λ(|+⟩) = {plus}")
    })?;
    let family: Vec<f64> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&q| {
            let m = DensityMatrix::plus(2).unwrap().matrix().scale(q)
                + CMatrix::identity(2, 2).unscale(2.0).scale(1.0 - q);
            resolution(&DensityMatrix::new(m).unwrap())
        })
        .collect();
    ensure(family.windows(2).all(|w| w[1] < w[0]), || {
        format!("not decreasing: {family:?}")
    })?;
    Ok(format!(
        "Δ²λ(I/2) = {mixed:.15}, Δ²λ(|+⟩) = {plus:.15}; ρ_q family strictly decreasing"
    ))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(2..=6);
        let rho = random_state(n, rng.random_range(1..=n), rng.random()).unwrap();
        let g = random_generator(&mut rng, n);
        let povm = Povm::projective(&random_basis(n, rng.random()).unwrap()).unwrap();
        let analytic = statistics_derivative(&rho, &g, &povm).unwrap();
        for (mu, op) in povm.outcomes().iter().enumerate() {
            let p = |lambda: f64| {
                let evolved = evolve(&rho, &UnitarySignal::new(g.clone(), lambda)).unwrap();
                (op * evolved.matrix()).trace().re
            };
            worst = worst.max((central_difference(p, 1e-5) - analytic[mu]).abs());
        }
    }
    ensure(worst <= 1e-8, || {
        format!("finite-difference mismatch {worst:e}")
    })?;
    let d = statistics_derivative(
        &DensityMatrix::plus(2).unwrap(),
        &qubit_generator(),
        &sigma_y_povm(),
    )
    .unwrap();
    ensure(
        (d[0] + 0.5).abs() <= 1e-12 && (d[1] - 0.5).abs() <= 1e-12,
        || format!("qubit p' = {d:?}"),
    )?;
    Ok(format!(
        "max |p' - FD| = {worst:.1e} over 100 instances; qubit p' = ({:.3}, {:.3})",
        d[0], d[1]
    ))
}

/// `err(λ) <= 1.5 C λ` along the schedule, with `C` fitted at the largest `λ`
/// and a small absolute floor for rounding.
fn first_order(errors: &[(f64, f64)]) -> bool {
    let floor = 1e-9;
    let c = errors[0].1 / errors[0].0;
    errors
        .iter()
        .all(|&(lambda, err)| err <= 1.5 * c * lambda + floor)
}

fn criterion_8() -> Outcome {
    let lambdas = [1e-2, 1e-3, 1e-4];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_final: f64 = 0.0;
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let rho = random_state(n, rng.random_range(1..=n), rng.random()).unwrap();
        let g = random_generator(&mut rng, n);
        let povm = Povm::projective(&random_basis(n, rng.random()).unwrap()).unwrap();
        let coeff = small_signal_quadratic(&rho, &g, &povm).unwrap();
        let dm_coeff = density_matrix_distance(&rho, &UnitarySignal::new(g.clone(), 0.0))
            .unwrap()
            .quadratic_coefficient;
        let mut d_err = Vec::new();
        let mut dm_err = Vec::new();
        for &lambda in &lambdas {
            let signal = UnitarySignal::new(g.clone(), lambda);
            let d2 = statistical_distance(&rho, &signal, &povm).unwrap();
            let dm = density_matrix_distance(&rho, &signal).unwrap().exact;
            d_err.push((lambda, (d2 / (lambda * lambda) - coeff).abs()));
            dm_err.push((lambda, (dm / (lambda * lambda) - dm_coeff).abs()));
        }
        ensure(first_order(&d_err), || {
            format!("d²/λ² not first order: {d_err:?}")
        })?;
        ensure(first_order(&dm_err), || {
            format!("D²/λ² not first order: {dm_err:?}")
        })?;
        worst_final = worst_final.max(d_err[2].1).max(dm_err[2].1);
    }
    let rho = DensityMatrix::plus(2).unwrap();
    let coeff = small_signal_quadratic(&rho, &qubit_generator(), &sigma_y_povm()).unwrap();
    ensure((coeff - 0.5).abs() <= 1e-12, || {
        format!("qubit coefficient {coeff}")
    })?;
    for lambda in [1e-4, 1e-2, 0.5, 2.0] {
        let d =
            density_matrix_distance(&rho, &UnitarySignal::new(qubit_generator(), lambda)).unwrap();
        ensure((d.exact - (1.0 - lambda.cos())).abs() <= 1e-12, || {
            format!("D²({lambda}) = {}", d.exact)
        })?;
        ensure((d.quadratic_coefficient - 0.5).abs() <= 1e-12, || {
            "qubit D² coefficient".into()
        })?;
    }
    Ok(format!("first-order convergence on 50 instances (err at λ=1e-4 ≤ {worst_final:.1e}); qubit cases exact"))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.random_range(2..=8);
        let rho = random_state(n, rng.random_range(1..=n), rng.random()).unwrap();
        let g = random_generator(&mut rng, n);
        let d = density_matrix_distance(&rho, &UnitarySignal::new(g, 0.1)).unwrap();
        worst = worst.max((d.commutator_coefficient - d.quadratic_coefficient).abs());
    }
    ensure(worst <= 1e-10, || format!("dual-route mismatch {worst:e}"))?;
    Ok(format!(
        "max |-tr([ρ,g]²) - Σ(g_k-g_j)²|ρ_jk|²| = {worst:.1e}"
    ))
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut tightest = f64::INFINITY;
    for i in 0..300 {
        let n = rng.random_range(2..=6);
        let rho = random_state(n, rng.random_range(1..=n), rng.random()).unwrap();
        let g = random_generator(&mut rng, n);
        let povm = Povm::projective(&random_basis(n, rng.random()).unwrap()).unwrap();
        let b = uncertainty_bound_check(&rho, &g, &povm).unwrap();
        ensure(b.satisfied(), || {
            format!("draw {i}: bound violated or undefined: {b:?}")
        })?;
        tightest = tightest.min(b.lhs - b.rhs.unwrap());
    }
    let b = uncertainty_bound_check(
        &DensityMatrix::plus(2).unwrap(),
        &qubit_generator(),
        &sigma_y_povm(),
    )
    .unwrap();
    ensure(
        (b.lhs - 1.0).abs() <= 1e-10 && (b.rhs.unwrap() - 1.0).abs() <= 1e-10,
        || format!("qubit case {b:?}"),
    )?;
    Ok(format!(
        "300/300 satisfied (min slack {tightest:.2e}); qubit lhs = rhs = 1"
    ))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (rho, g) = draw(&mut rng, 1, 8);
        let single = single_phase_distribution(&rho, &g).unwrap();
        let n = rho.dim() as i64;
        for tau in -(n - 1)..n {
            let sg = susskind_glogower_moment(&rho, &g, tau).unwrap();
            worst = worst.max((sg - single.gamma(tau)).norm());
        }
    }
    ensure(worst <= 1e-12, || {
        format!("Susskind-Glogower mismatch {worst:e}")
    })?;
    Ok(format!("max |tr(ρE^τ)/2π - Γ(τ)| = {worst:.1e}"))
}

fn run_cli(out: &Path) -> Result<(String, Files), String> {
    let scenario = out.with_extension("scenario.json");
    let scenarios = serde_json::json!([
        {"state": "plus", "observable": "linear", "dim": 2, "mc_samples": 20000, "seed": 3},
        {"state": "mixed", "observable": "linear", "dim": 4},
        {"state": "random:7:2", "observable": "hadamard", "dim": 3, "lambda": 0.01, "mc_samples": 20000},
    ]);
    std::fs::write(&scenario, scenarios.to_string()).map_err(|e| e.to_string())?;
    let output = Command::new(env!("CARGO_BIN_EXE_qcohere"))
        .arg("all")
        .arg("--scenario")
        .arg(&scenario)
        .arg("--out-dir")
        .arg(out)
        .env_remove("QCOHERE_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    if !output.status.success() {
        return Err(String::from_utf8_lossy(&output.stderr).into_owned());
    }
    let mut files: Files = std::fs::read_dir(out)
        .map_err(|e| e.to_string())?
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    Ok((String::from_utf8_lossy(&output.stdout).into_owned(), files))
}

fn criterion_12() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_cli(&tmp.path().join("a"))?;
    let second = run_cli(&tmp.path().join("b"))?;
    ensure(first == second, || "outputs differ between runs".into())?;
    let metrology = first
        .1
        .iter()
        .find(|(name, _)| name == "metrology.csv")
        .ok_or("metrology.csv missing")?;
    let text = String::from_utf8_lossy(&metrology.1);
    let plus: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(2)
        .map(|v| v.parse().unwrap())
        .collect();
    ensure((plus[0] - 0.5).abs() <= 1e-12, || {
        format!("C_HS = {}", plus[0])
    })?;
    ensure((plus[2] - 2.0 / 3.0 * PI.sqrt()).abs() <= 1e-12, || {
        format!("Δ²λ = {}", plus[2])
    })?;
    let mixed: Vec<&str> = text.lines().nth(2).unwrap().split(',').collect();
    ensure(mixed[2].parse::<f64>().unwrap() == 0.0, || {
        "mixed C_HS".into()
    })?;
    ensure(
        (mixed[4].parse::<f64>().unwrap() - PI.sqrt()).abs() <= 1e-12,
        || "mixed Δ²λ".into(),
    )?;
    Ok(format!(
        "{} files byte-identical across two runs",
        first.1.len()
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 12] = [
        ("Rényi integral equals 1 + C_HS", criterion_1),
        ("negativity witness and its converse", criterion_2),
        ("every state other than I/N is nonclassical", criterion_3),
        ("moment recovery of coherence terms", criterion_4),
        ("phase-shift covariance", criterion_5),
        ("Wiener-Kintchine resolution values", criterion_6),
        ("statistics derivative vs finite differences", criterion_7),
        ("small-signal scaling of d² and D²", criterion_8),
        ("commutator dual-route identity", criterion_9),
        ("variance bound audit", criterion_10),
        ("Susskind-Glogower route to Γ(τ)", criterion_11),
        ("CLI determinism", criterion_12),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({elapsed:.2}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {:>2}. {name}: {detail} ({elapsed:.2}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failures} failed in {:.1}s",
        criteria.len() - failures,
        start.elapsed().as_secs_f64()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
