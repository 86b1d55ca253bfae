//! Acceptance suite. Run with `--nocapture` to see one line per criterion.

mod common;

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use sosadmm::admm::{factorization_count, project_affine, AffineProjectorCache};
use sosadmm::assembly::{assemble_multi, to_sdpa, Cone, ConicProblem};
use sosadmm::baseline::{flop_model, solve_affine_cg, solve_affine_dense, DenseAffine};
use sosadmm::experiments::{
    check_lyapunov, field_from_parts, gen_pop, lyapunov_program, parse_problem, q_from_decision, spectral_abscissa,
};
use sosadmm::report::{run_generated, RunLabel};
use sosadmm::sparse::CscMatrix;
use sosadmm::{solve, AffineMethod, SolveStatus, SolverOptions};

/// `Ok((verdict, detail))`; a verdict other than PASS means the check ran but
/// the criterion is only partly attainable or could not be exercised.
type Outcome = Result<(&'static str, String), String>;

fn pass(detail: String) -> Outcome {
    Ok(("PASS", detail))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rows = 0;
    for seed in 0..200u64 {
        let mut r = rng(seed);
        let n = r.gen_range(1..=5);
        let d = r.gen_range(1..=3u32);
        let t = r.gen_range(0..=3);
        let p = assemble_multi(&[random_scalar_spec(&mut r, n, 2 * d, t)], &vec![0.0; t]).unwrap();
        // Entries of A_orth are nonnegative, so A_orth A_orthᵀ is diagonal
        // exactly when no orthogonal column touches two rows.
        let mut diag = vec![0.0; p.m()];
        for col in p.orth_cols() {
            let (rws, vals) = p.a().column(col);
            check(rws.len() <= 1, || format!("seed {seed}: column {col} touches rows {rws:?}"))?;
            for (&i, &v) in rws.iter().zip(vals) {
                diag[i] += v * v;
            }
        }
        for (i, label) in p.rows().iter().enumerate() {
            let expect = pair_count(&label.monomial, n, d) as f64;
            check(diag[i] == expect, || format!("seed {seed} row {i}: {} vs {expect}", diag[i]))?;
        }
        rows += p.m();
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(30), || format!("took {}", secs(el)))?;
    pass(format!("200 assemblies, {rows} rows exact, {}", secs(el)))
}

fn criterion_2() -> Outcome {
    for seed in 0..50u64 {
        let mut r = rng(1000 + seed);
        let rsz = r.gen_range(1..=3);
        let n = r.gen_range(1..=3);
        let d = r.gen_range(1..=2u32);
        let t = r.gen_range(0..=2);
        let p = assemble_multi(&[random_matrix_spec(&mut r, rsz, n, 2 * d, t)], &vec![0.0; t]).unwrap();
        let dense = p.a().to_dense();
        let w = p.lowrank_width();
        let orth = dense.columns(w, p.num_cols() - w).into_owned();
        let gram = &orth * orth.transpose();
        for i in 0..p.m() {
            for j in 0..p.m() {
                check(i == j || gram[(i, j)] == 0.0, || format!("seed {seed}: entry ({i},{j}) = {}", gram[(i, j)]))?;
            }
            let (a, b) = p.rows()[i].entry.unwrap_or((0, 0));
            let expect = if a == b { 1.0 } else { 2.0 } * pair_count(&p.rows()[i].monomial, n, d) as f64;
            check(gram[(i, i)] == expect, || format!("seed {seed} row {i}: {} vs {expect}", gram[(i, i)]))?;
        }
    }
    pass("50 matrix assemblies diagonal against dense A2A2'".into())
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let p = random_problem(5000 + seed);
        let mut r = rng(seed);
        let w = random_vec(&mut r, p.hsde_dim());
        let cache = AffineProjectorCache::build(&p).unwrap();
        let low = project_affine(&w, &cache, &p).unwrap();
        let dense = solve_affine_dense(&p, &w).unwrap();
        let (cg, info) = solve_affine_cg(&p, &w, 1e-12, 100_000).unwrap();
        check(info.converged, || format!("seed {seed}: CG did not converge"))?;
        let e = rel_diff(&low, &dense).max(rel_diff(&cg, &dense)).max(rel_diff(&low, &cg));
        check(e <= 1e-8, || format!("seed {seed}: relative difference {e:.2e}"))?;
        worst = worst.max(e);
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(60), || format!("took {}", secs(el)))?;
    pass(format!("100 instances, worst relative difference {worst:.2e}, {}", secs(el)))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..100u64 {
        let (p, full) = diag_plus_low_rank(seed);
        let cache = AffineProjectorCache::build(&p).unwrap();
        let m = p.m();
        let mut inv = DMatrix::zeros(m, m);
        for k in 0..m {
            let mut e = vec![0.0; m];
            e[k] = 1.0;
            inv.set_column(k, &DVector::from_vec(cache.solve_normal(&p, &e)));
        }
        let err = (&full * inv - DMatrix::identity(m, m)).amax();
        check(err <= 1e-10, || format!("seed {seed}: max residual {err:.2e}"))?;
        worst = worst.max(err);
    }
    pass(format!("100 cases, worst max residual {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut parts = Vec::new();
    for (n, reference) in [(10usize, -9.11), (12, -11.12), (14, -13.12)] {
        let start = Instant::now();
        let label = RunLabel {
            family: "pop".into(),
            n,
            seed: None,
        };
        let (report, _) = run_generated(&label, &gen_pop::<f64>(n).unwrap(), &SolverOptions::default(), |_| {}).unwrap();
        let el = start.elapsed();
        check(report.status == SolveStatus::Optimal, || format!("n={n}: status {}", report.status))?;
        let obj = report.objective.unwrap();
        let rel = ((obj - reference) / reference).abs();
        check(rel <= 5e-3, || format!("n={n}: {obj:.4} vs {reference} ({:.2}%)", 100.0 * rel))?;
        check(el < Duration::from_secs(120), || format!("n={n}: took {}", secs(el)))?;
        parts.push(format!("n={n} {obj:.4} ({:.2}%, {} it, {})", 100.0 * rel, report.iterations, secs(el)));
    }
    pass(parts.join("; "))
}

fn criterion_6() -> Outcome {
    let text = "nvars 1 ; degree 4\nobjective: -u1\nconstraint weighted[p=4 - x1^2]: x1^4 - 2*x1^2 - u1\n";
    let g = parse_problem::<f64>(text).unwrap().into_generated();
    let out = solve(&g.assemble().unwrap(), &SolverOptions::default()).unwrap();
    check(out.status == SolveStatus::Optimal, || format!("status {}", out.status))?;
    let bound = -g.model_objective(out.objective.unwrap());
    check((bound + 1.0).abs() <= 1e-2, || format!("bound {bound}"))?;
    pass(format!("lower bound {bound:.5}"))
}

/// Distance from `z` to {0}ᵗ × 𝕊₊ computed from a dense eigendecomposition.
fn dual_cone_distance(z: &[f64], cones: &[Cone]) -> f64 {
    let mut sq = 0.0;
    let mut off = 0;
    for &k in cones {
        let part = &z[off..off + k.dim()];
        match k {
            Cone::Free(_) => sq += part.iter().map(|v| v * v).sum::<f64>(),
            Cone::Psd(n) => {
                let m = DMatrix::from_column_slice(n, n, part);
                let sym = (&m + m.transpose()) * 0.5;
                let asym = (&m - m.transpose()) * 0.5;
                let neg: f64 = sym.symmetric_eigenvalues().iter().filter(|&&l| l < 0.0).map(|l| l * l).sum();
                sq += neg + asym.norm_squared();
            }
        }
        off += k.dim();
    }
    sq.sqrt()
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let g = parse_problem::<f64>("nvars 1 ; degree 2\nconstraint sos: -1 - x1^2\n").unwrap().into_generated();
    let p = g.assemble().unwrap();
    let options = SolverOptions::default();
    let out = solve(&p, &options).unwrap();
    let el = start.elapsed();
    check(out.status == SolveStatus::PrimalInfeasible, || format!("status {}", out.status))?;
    let cert = out.certificate.ok_or("no certificate")?;
    let y = &cert.normalized;
    let by: f64 = p.b().iter().zip(y).map(|(a, b)| a * b).sum();
    check((by - 1.0).abs() <= 1e-12, || format!("b'y = {by}"))?;
    let aty = p.a().mul_t_vec(y);
    let minus: Vec<f64> = aty.iter().map(|v| -v).collect();
    let dist = dual_cone_distance(&minus, p.cones());
    check(dist <= options.tol, || format!("dist(-A'y, K*) = {dist:.2e}"))?;
    check(el < Duration::from_secs(5), || format!("took {}", secs(el)))?;
    pass(format!("b'y = 1, dist(-A'y, K*) = {dist:.2e}, {}", secs(el)))
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let options = SolverOptions::default();
    let h = -DMatrix::<f64>::identity(3, 3);
    let f = field_from_parts::<f64>(&h, None).unwrap();
    let p = lyapunov_program(&f).unwrap().assemble().unwrap();
    let out = solve(&p, &options).unwrap();
    check(out.status == SolveStatus::Optimal, || format!("H=-I: status {}", out.status))?;
    let q = q_from_decision(3, &out.x.unwrap()[..p.t()]);
    let min_eig = ((&q + q.transpose()) * 0.5).symmetric_eigenvalues().min();
    check(min_eig > 0.0, || format!("H=-I: min eig(Q) = {min_eig}"))?;

    let mut unstable = vec![DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0, -1.0]))];
    for seed in 0..3u64 {
        let mut r = rng(seed);
        let raw = DMatrix::from_fn(3, 3, |_, _| r.gen_range(-1.0..1.0));
        let shift = spectral_abscissa(&raw) - 0.3;
        unstable.push(raw - DMatrix::identity(3, 3) * shift);
    }
    let mut statuses = Vec::new();
    for (k, hu) in unstable.iter().enumerate() {
        let fu = field_from_parts::<f64>(hu, None).unwrap();
        let pu = lyapunov_program(&fu).unwrap().assemble().unwrap();
        let ou = solve(&pu, &options).unwrap();
        if ou.status == SolveStatus::Optimal {
            let qu = q_from_decision(3, &ou.x.unwrap()[..pu.t()]);
            check(!check_lyapunov(&fu, &qu, 2000, k as u64).is_valid(0.0), || {
                format!("unstable draw {k} returned a valid V")
            })?;
        }
        statuses.push(ou.status.to_string());
    }
    let el = start.elapsed();
    check(el < Duration::from_secs(60), || format!("took {}", secs(el)))?;
    pass(format!(
        "H=-I optimal with min eig(Q) = {min_eig:.3}; unstable draws: {}; {}",
        statuses.join(", "),
        secs(el)
    ))
}

fn criterion_9() -> Outcome {
    let [low, _, _] = flop_model(1000, 66, 66, 1);
    check(low.flops_per_iteration == 17_969_134, || format!("closed form gives {}", low.flops_per_iteration))?;
    let mut failing = Vec::new();
    for m in [100u64, 1_000, 10_000] {
        for n_cg in 1..=50u64 {
            let [low, _, cg] = flop_model(m, 66, 66, n_cg);
            if low.flops_per_iteration >= cg.flops_per_iteration {
                failing.push((m, n_cg, low.flops_per_iteration, cg.flops_per_iteration));
            }
        }
    }
    // The stated dominance does not hold at m = 100 with a single CG
    // iteration; everything else in the sweep satisfies it.
    check(failing == [(100, 1, 1_808_734, 1_793_322)], || format!("dominance failures {failing:?}"))?;
    Ok((
        "PARTIAL",
        "closed form 17969134 exact; LowRank < CG on the sweep except m=100, n_cg=1 \
         (1808734 vs 1793322), where the dominance claim is unattainable"
            .into(),
    ))
}

/// Dense `m × t` low-rank block plus one scalar PSD column per row.
fn synthetic(m: usize, t: usize, seed: u64) -> ConicProblem<f64> {
    let mut r = rng(seed);
    let mut trip = Vec::with_capacity(m * (t + 1));
    for j in 0..t {
        for i in 0..m {
            trip.push((i, j, r.gen_range(-1.0..1.0)));
        }
    }
    for i in 0..m {
        trip.push((i, t + i, r.gen_range(0.5..2.0)));
    }
    let a = CscMatrix::from_triplets(m, t + m, &trip);
    let b = random_vec(&mut r, m);
    let c = random_vec(&mut r, t + m);
    let mut cones = vec![Cone::Free(t)];
    cones.extend(std::iter::repeat(Cone::Psd(1)).take(m));
    ConicProblem::new(a, b, c, cones, t, vec![]).unwrap()
}

/// Median over batches of the per-call time of `f`.
fn per_call(mut f: impl FnMut(), calls: usize) -> f64 {
    let mut samples: Vec<f64> = (0..9)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..calls {
                f();
            }
            start.elapsed().as_secs_f64() / calls as f64
        })
        .collect();
    samples.sort_by(f64::total_cmp);
    samples[samples.len() / 2]
}

fn criterion_10() -> Outcome {
    let t = 30;
    let mut times = Vec::new();
    for m in [4_000, 16_000] {
        let p = synthetic(m, t, m as u64);
        let cache = AffineProjectorCache::build(&p).unwrap();
        let w = random_vec(&mut rng(1), p.hsde_dim());
        times.push(per_call(
            || {
                std::hint::black_box(project_affine(&w, &cache, &p).unwrap());
            },
            20,
        ));
    }
    let low_ratio = times[1] / times[0];
    check(low_ratio <= 6.0, || format!("LowRank time ratio {low_ratio:.2} for 4x m"))?;

    let mut dense_times = Vec::new();
    for m in [200, 800] {
        let p = synthetic(m, t, m as u64);
        let dense = DenseAffine::build(&p).unwrap();
        let w = random_vec(&mut rng(2), p.hsde_dim());
        dense_times.push(per_call(
            || {
                std::hint::black_box(dense.solve(&w).unwrap());
            },
            5,
        ));
    }
    let dense_ratio = dense_times[1] / dense_times[0];

    let before = factorization_count();
    let pop = sosadmm::experiments::assemble_pop::<f64>(6).unwrap();
    let out = solve(&pop, &SolverOptions::default()).unwrap();
    let built = factorization_count() - before;
    check(out.stats.affine_method == AffineMethod::LowRank, || "wrong affine method".into())?;
    check(built == 1 && out.stats.factorizations == 1, || {
        format!("{built} factorizations over {} iterations", out.iterations)
    })?;
    pass(format!(
        "LowRank x{low_ratio:.2} for 4x m (t={t}); DenseDirect back-substitution x{dense_ratio:.1}; \
         1 factorization over {} iterations",
        out.iterations
    ))
}

fn criterion_11() -> Outcome {
    let script = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/sdpa_check.py");
    let g = gen_pop::<f64>(10).unwrap();
    let p = g.assemble().unwrap();
    let out = solve(&p, &SolverOptions::default()).unwrap();
    let internal = out.objective.unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pop10.dat-s");
    std::fs::write(&path, to_sdpa(&p)).unwrap();
    let run = match Command::new("python3").arg(&script).arg(&path).output() {
        Ok(run) => run,
        Err(_) => return Ok(("SKIP", "python3 not available".into())),
    };
    if run.status.code() == Some(3) {
        return Ok(("SKIP", "no external interior-point solver installed".into()));
    }
    check(run.status.success(), || {
        format!("external solve failed: {}", String::from_utf8_lossy(&run.stderr).trim())
    })?;
    let stdout = String::from_utf8_lossy(&run.stdout);
    let mut fields = stdout.split_whitespace();
    let value: f64 = fields.next().and_then(|v| v.parse().ok()).ok_or("unparsable solver output")?;
    let solver = fields.next().unwrap_or("?").to_string();
    let external = -value;
    let rel = (internal - external).abs() / external.abs();
    check(rel <= 1e-2, || format!("internal {internal:.5} vs {solver} {external:.5}"))?;
    pass(format!("internal {internal:.5} vs {solver} {external:.5} (relative {rel:.1e})"))
}

#[test]
fn acceptance() {
    let criteria: [fn() -> Outcome; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let mut failed = Vec::new();
    for (k, f) in criteria.iter().enumerate() {
        match f() {
            Ok((verdict, msg)) => println!("criterion {}: {verdict} {msg}", k + 1),
            Err(msg) => {
                println!("criterion {}: FAIL {msg}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
