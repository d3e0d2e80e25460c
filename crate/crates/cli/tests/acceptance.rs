//! Acceptance suite: one line per criterion, `[PASS]` or `[FAIL]`.
//!
//! Reference values are computed here from first principles (explicit sums,
//! an independent Gamma function) rather than through the library's own
//! kernel code. Seeds are fixed constants chosen before any run.
//!
//! The network-dependent Fashion MNIST comparison only runs with
//! `OPTRF_ACCEPTANCE_NETWORK=1`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use ndarray::{Array1, Array2, ArrayView1};
use optrf::convergence::{error_curve, exponent_ordering, sample_unit_pairs, streamed_estimates, tail_probability};
use optrf::data_io::{synthetic_blobs, BlobsConfig};
use optrf::model_selection::{grid_search, split, Estimator, GridSearchConfig, Hyperparameters, Pipeline};
use optrf::{
    append_bias, fit_dual, fit_primal, gram, k2s, FeatureMapSpec, Features, KernelSpec, PairSet, SolverConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde_json::{json, Value};
use statrs::function::gamma::gamma;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

const PAIRS_SEED: u64 = 1;
const PROJECTION_SEED: u64 = 2;

fn gaussian(rows: usize, cols: usize, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_simple_fn((rows, cols), || StandardNormal.sample(&mut rng))
}

fn dot(x: ArrayView1<f64>, y: ArrayView1<f64>) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| a * b).sum()
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).map(|j| (n - j) as f64 / (j + 1) as f64).product()
}

/// `|x|^2 |y|^2 + (x.y)^2`
fn quadratic_oracle(x: ArrayView1<f64>, y: ArrayView1<f64>) -> f64 {
    dot(x, x) * dot(y, y) + dot(x, y).powi(2)
}

/// Limit kernel for exponent `2s` as a sum over Gamma terms in
/// `cos^2 theta` and `sin^2 theta`, before collecting powers of `x.y`.
fn gamma_sum_oracle(x: ArrayView1<f64>, y: ArrayView1<f64>, s: u32) -> f64 {
    let nn = dot(x, x) * dot(y, y);
    let c = if nn == 0.0 { 0.0 } else { dot(x, y).powi(2) / nn };
    let total: f64 = (0..=s)
        .map(|i| {
            let (si, fi) = (s as f64, i as f64);
            binomial(s, i).powi(2)
                * c.powi(i as i32)
                * (1.0 - c).powi((s - i) as i32)
                * gamma(si + fi + 1.0)
                * gamma(si - fi + 1.0)
        })
        .sum();
    nn.powi(s as i32) * total
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn within_runtime(elapsed: Duration, limit_secs: u64) -> Result<(), String> {
    if elapsed <= Duration::from_secs(limit_secs) {
        Ok(())
    } else {
        Err(format!("runtime {:.1}s exceeds {limit_secs}s", elapsed.as_secs_f64()))
    }
}

fn c1_quadratic_kernel() -> Outcome {
    let start = Instant::now();
    let pairs = sample_unit_pairs(100, 20, PAIRS_SEED).map_err(|e| e.to_string())?;
    let est = streamed_estimates(PROJECTION_SEED, 2.0, &[100_000], &pairs).map_err(|e| e.to_string())?;
    let errors: Vec<f64> = (0..pairs.len())
        .map(|i| rel(est[[0, i]], quadratic_oracle(pairs.x.row(i), pairs.y.row(i))))
        .collect();
    let good = errors.iter().filter(|e| **e <= 0.05).count();
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    within_runtime(start.elapsed(), 60)?;
    let detail = format!("{good}/100 pairs within 5% at D=1e5 (worst {:.2}%)", 100.0 * worst);
    if good >= 95 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c2_even_exponents() -> Outcome {
    let start = Instant::now();
    let pairs = sample_unit_pairs(10, 20, PAIRS_SEED).map_err(|e| e.to_string())?;
    let mut worst = Vec::new();
    let mut misses = 0;
    for s in 1..=3u32 {
        let est =
            streamed_estimates(PROJECTION_SEED, 2.0 * s as f64, &[1_000_000], &pairs).map_err(|e| e.to_string())?;
        let errors: Vec<f64> = (0..pairs.len())
            .map(|i| rel(est[[0, i]], gamma_sum_oracle(pairs.x.row(i), pairs.y.row(i), s)))
            .collect();
        misses += errors.iter().filter(|e| **e > 0.05).count();
        worst.push(format!("s={s} worst {:.2}%", 100.0 * errors.iter().cloned().fold(0.0, f64::max)));
    }
    within_runtime(start.elapsed(), 300)?;
    let detail = format!("{misses} of 30 estimates outside 5% at D=1e6 ({})", worst.join(", "));
    if misses == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c3_gamma_sum_identity() -> Outcome {
    let start = Instant::now();
    let x = gaussian(50, 20, 31);
    let y = gaussian(50, 20, 32);
    let mut worst: f64 = 0.0;
    for s in 1..=4u32 {
        for i in 0..50 {
            let closed = k2s(x.row(i), y.row(i), s).map_err(|e| e.to_string())?;
            worst = worst.max(rel(closed, gamma_sum_oracle(x.row(i), y.row(i), s)));
        }
    }
    within_runtime(start.elapsed(), 1)?;
    let detail = format!("max relative difference {worst:.2e} over s<=4, 50 pairs");
    if worst <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c4_eighth_moment() -> Outcome {
    let mut e = Array2::<f64>::zeros((1, 20));
    e[[0, 0]] = 1.0;
    let closed = k2s(e.row(0), e.row(0), 2).map_err(|e| e.to_string())?;
    // phi(x).phi(x) with m = 4 is the sample mean of |u_j|^8 over D entries
    let phi = Features::new(FeatureMapSpec::optical(4.0, 1_000_000), PROJECTION_SEED, 20)
        .and_then(|f| f.transform(e.view()))
        .map_err(|e| e.to_string())?;
    let mc = dot(phi.row(0), phi.row(0));
    let detail = format!("closed form {closed}, Monte Carlo E|u|^8 = {mc:.3} over 1e6 draws");
    if closed == 24.0 && (22.8..=25.2).contains(&mc) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn check_references(report: &optrf::ConvergenceReport, pairs: &PairSet, s: u32) -> Result<(), String> {
    for r in &report.records {
        let oracle = gamma_sum_oracle(pairs.x.row(r.pair_id), pairs.y.row(r.pair_id), s);
        if rel(r.reference, oracle) > 1e-10 {
            return Err(format!("reference {} differs from oracle {oracle}", r.reference));
        }
    }
    Ok(())
}

fn c5_exponent_ordering() -> Outcome {
    let start = Instant::now();
    let pairs = sample_unit_pairs(20, 20, PAIRS_SEED).map_err(|e| e.to_string())?;
    let m2 = error_curve(2, &[10_000], &pairs, 20, PROJECTION_SEED).map_err(|e| e.to_string())?;
    let m4 = error_curve(4, &[10_000], &pairs, 20, PROJECTION_SEED).map_err(|e| e.to_string())?;
    check_references(&m2, &pairs, 1)?;
    check_references(&m4, &pairs, 2)?;
    let test = exponent_ordering(&m4, &m2, 10_000).map_err(|e| e.to_string())?;
    within_runtime(start.elapsed(), 120)?;
    let med = |r: &optrf::ConvergenceReport| r.summary(10_000).map(|s| s.median_rel_error).unwrap_or(f64::NAN);
    let detail = format!(
        "median rel. error m=4 {:.4} vs m=2 {:.4}; m=4 larger in {}/20 replicates, p = {:.2e}",
        med(&m4),
        med(&m2),
        test.positive,
        test.p_value
    );
    if test.significant(0.05) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c6_tail_monotonicity() -> Outcome {
    let pairs = sample_unit_pairs(20, 20, PAIRS_SEED).map_err(|e| e.to_string())?;
    let dims = [100, 1_000, 10_000];
    let mut lines = Vec::new();
    let mut ok = true;
    for (m, ts) in [(2u32, [0.05, 0.2, 0.5]), (4, [0.5, 2.0, 5.0])] {
        let table = tail_probability(m, &dims, &ts, &pairs, 100, PROJECTION_SEED).map_err(|e| e.to_string())?;
        for (t, fine) in table.non_increasing_in_dim() {
            ok &= fine;
            let probs: Vec<String> = dims
                .iter()
                .map(|&d| format!("{:.3}", table.entry(t, d).map(|e| e.probability).unwrap_or(f64::NAN)))
                .collect();
            lines.push(format!("m={m} t={t}: [{}]{}", probs.join(", "), if fine { "" } else { " INCREASE" }));
        }
    }
    let detail = format!("P(|err|>=t) over D=1e2,1e3,1e4: {}", lines.join("; "));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c7_solver_equivalence() -> Outcome {
    let start = Instant::now();
    let cg = SolverConfig::conjugate_gradient(1e-10);
    let chol = SolverConfig::cholesky();
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let n = 25 * (k as usize + 1);
        let g = gaussian(n, n, 100 + k);
        let spd = g.dot(&g.t()) / n as f64 + Array2::<f64>::eye(n) * 0.5;
        let rhs = gaussian(n, 3, 200 + k);
        let a = fit_dual(spd.view(), rhs.view(), 1e-3, &chol).map_err(|e| e.to_string())?;
        let b = fit_dual(spd.view(), rhs.view(), 1e-3, &cg).map_err(|e| e.to_string())?;
        let diff = &a.coefficients() - &b.coefficients();
        let norm = |m: &Array2<f64>| m.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(norm(&diff) / norm(&a.coefficients().to_owned()));
    }

    let inputs = gaussian(70, 10, 300);
    let phi_all = Features::new(FeatureMapSpec::optical(2.0, 80), PROJECTION_SEED, 10)
        .and_then(|f| f.transform(inputs.view()))
        .map_err(|e| e.to_string())?;
    let phi = phi_all.slice(ndarray::s![..50, ..]);
    let phi_new = phi_all.slice(ndarray::s![50.., ..]);
    let y = gaussian(50, 2, 301);
    let primal = fit_primal(phi, y.view(), 0.1, &chol).map_err(|e| e.to_string())?;
    let k = phi.dot(&phi.t());
    let dual = fit_dual(k.view(), y.view(), 0.1, &chol).map_err(|e| e.to_string())?;
    let mut pred_gap: f64 = 0.0;
    for (design, cross) in [(phi, phi.dot(&phi.t())), (phi_new, phi_new.dot(&phi.t()))] {
        let p = primal.predict(design).map_err(|e| e.to_string())?;
        let q = dual.predict(cross.view()).map_err(|e| e.to_string())?;
        let scale = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        pred_gap = pred_gap.max(p.iter().zip(q.iter()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / scale);
    }
    within_runtime(start.elapsed(), 30)?;
    let detail = format!(
        "Cholesky vs CG max rel. difference {worst:.2e} (20 systems, n<=500); primal vs dual {pred_gap:.2e} (n=50, D=80)"
    );
    if worst <= 1e-6 && pred_gap <= 1e-5 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn test_error(est: &Estimator, params: &Hyperparameters, train: &optrf::Dataset, test: &optrf::Dataset) -> Result<f64, String> {
    let fitted = Pipeline::fit(est, params, train, &SolverConfig::cholesky()).map_err(|e| e.to_string())?;
    Ok(1.0 - fitted.accuracy(test).map_err(|e| e.to_string())?)
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

fn c8_test_error_curve() -> Outcome {
    let start = Instant::now();
    let data = synthetic_blobs(&BlobsConfig {
        seed: 8,
        n: 2000,
        d: 20,
        classes: 2,
        separation: 2.0,
    })
    .map_err(|e| e.to_string())?;
    let (train, test) = split(&data, 0.25, 9).map_err(|e| e.to_string())?;
    let rf = |dim, seed| Estimator::RandomFeatures {
        features: FeatureMapSpec::optical(2.0, dim),
        seed,
    };

    // hyperparameters chosen once, at D = 1e3, on a validation split of the training rows
    let cfg = GridSearchConfig {
        scale_grid: vec![1.0],
        alpha_grid: vec![1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0],
        bias_grid: vec![0.0, 1.0, 10.0, 100.0],
        ..GridSearchConfig::new(10)
    };
    let search = grid_search(&train, &rf(1_000, PROJECTION_SEED), &cfg, &SolverConfig::cholesky())
        .map_err(|e| e.to_string())?;
    let params = search.best;

    let dims = [100, 1_000, 10_000];
    let seeds: Vec<u64> = (0..5).map(|i| PROJECTION_SEED + i).collect();
    let mut errors = vec![Vec::new(); dims.len()];
    for (j, &dim) in dims.iter().enumerate() {
        for &seed in &seeds {
            errors[j].push(test_error(&rf(dim, seed), &params, &train, &test)?);
        }
    }
    let exact = test_error(
        &Estimator::ExactKernel {
            kernel: KernelSpec::OpticalEven { s: 1 },
        },
        &params,
        &train,
        &test,
    )?;

    let mut ok = true;
    let mut steps = Vec::new();
    for j in 0..dims.len() - 1 {
        // an increase would show up as errors at the larger D beating those at the smaller one
        let increase = optrf::stats::SignTest::greater(&errors[j + 1], &errors[j]);
        let decrease = optrf::stats::SignTest::greater(&errors[j], &errors[j + 1]);
        ok &= !increase.significant(0.05);
        steps.push(format!(
            "D={}->{}: increase p={:.3}, decrease p={:.3}",
            dims[j],
            dims[j + 1],
            increase.p_value,
            decrease.p_value
        ));
    }
    let medians: Vec<String> = errors.iter().map(|e| format!("{:.2}%", 100.0 * median(e))).collect();
    let gap = (median(&errors[2]) - exact).abs();
    ok &= gap <= 0.02;
    within_runtime(start.elapsed(), 300)?;
    let detail = format!(
        "median test error [{}] at D=1e2,1e3,1e4; exact k2 {:.2}%, gap {:.2} points; {}; params scale={} alpha={} bias={}",
        medians.join(", "),
        100.0 * exact,
        100.0 * gap,
        steps.join("; "),
        params.scale,
        params.alpha,
        params.bias
    );
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c9_bias_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 0..10u64 {
        let x = gaussian(6 + k as usize, 3 + k as usize, 400 + k);
        let plain = gram(x.view(), None, &KernelSpec::Linear).map_err(|e| e.to_string())?.values;
        for nu in [0.0, 1.0, 4.0] {
            let xb = append_bias(x.view(), nu).map_err(|e| e.to_string())?;
            let biased = gram(xb.view(), None, &KernelSpec::Linear).map_err(|e| e.to_string())?.values;
            for i in 0..x.nrows() {
                for j in 0..x.nrows() {
                    // rounding budget of one extra term in an inner product of length d + 1
                    let mag: f64 = x.row(i).iter().zip(x.row(j)).map(|(a, b)| (a * b).abs()).sum::<f64>() + nu;
                    let budget = (x.ncols() + 2) as f64 * f64::EPSILON * mag;
                    let err = (biased[[i, j]] - (plain[[i, j]] + nu)).abs();
                    worst = worst.max(err / budget.max(f64::MIN_POSITIVE));
                }
            }
        }
    }
    let detail = format!("largest deviation is {worst:.2} of the rounding budget (10 matrices, nu in 0,1,4)");
    if worst <= 1.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c10_rbf_baseline() -> Outcome {
    let gamma_rbf = 0.5;
    let pairs = sample_unit_pairs(100, 20, PAIRS_SEED).map_err(|e| e.to_string())?;
    let map = Features::new(FeatureMapSpec::rbf_fourier(gamma_rbf, 100_000), PROJECTION_SEED, 20)
        .map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for chunk in 0..4 {
        let rows = chunk * 25..(chunk + 1) * 25;
        let fx = map.transform(pairs.x.slice(ndarray::s![rows.clone(), ..])).map_err(|e| e.to_string())?;
        let fy = map.transform(pairs.y.slice(ndarray::s![rows.clone(), ..])).map_err(|e| e.to_string())?;
        for (r, i) in rows.enumerate() {
            let diff: Array1<f64> = &pairs.x.row(i) - &pairs.y.row(i);
            let exact = (-gamma_rbf * dot(diff.view(), diff.view())).exp();
            worst = worst.max((dot(fx.row(r), fy.row(r)) - exact).abs());
        }
    }
    let detail = format!("max absolute error {worst:.4} over 100 pairs at D=1e5");
    if worst <= 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run_all_commands(dir: &Path, manifest: &Value) -> Result<(), String> {
    std::fs::write(dir.join("m.json"), serde_json::to_vec_pretty(manifest).unwrap()).map_err(|e| e.to_string())?;
    for cmd in ["features", "kernel", "train", "grid", "converge", "binarize"] {
        let out = Command::new(env!("CARGO_BIN_EXE_optrf"))
            .current_dir(dir)
            .args([cmd, "-m", "m.json"])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{cmd} failed: {}", String::from_utf8_lossy(&out.stderr)));
        }
    }
    Ok(())
}

fn strip_timings(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("timings");
    }
    v
}

fn c11_reproducibility() -> Outcome {
    let manifest = json!({
        "schema_version": 1,
        "output_dir": "out",
        "data": {
            "source": {"kind": "synthetic_blobs", "seed": 1, "n": 300, "d": 10, "classes": 3, "separation": 3.0},
            "split": {"test_fraction": 0.2, "seed": 7}
        },
        "features": {"seed": 3, "map": {"family": "optical", "exponent": 2.0, "dim": 256, "bias": 1.0}},
        "kernel": {"spec": {"kind": "optical_even", "s": 1}, "bias": 1.0},
        "ridge": {"alpha": 0.01},
        "grid": {"scale_grid": [0.1, 1.0], "alpha_grid": [0.001, 0.1], "bias_grid": [0.0, 1.0], "split_seed": 5},
        "convergence": {"exponents": [2, 4], "dims": [100, 1000], "pairs": 5, "pair_dim": 10,
                        "pairs_seed": 1, "replicates": 100, "base_seed": 11, "tail": {"t_values": [0.1, 0.5]}},
        "binarize": {"threshold": 0.0}
    });
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    run_all_commands(a.path(), &manifest)?;
    run_all_commands(b.path(), &manifest)?;

    let mut names: Vec<String> = std::fs::read_dir(a.path().join("out"))
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let (mut containers, mut reports, mut others) = (0, 0, 0);
    for name in &names {
        let x = std::fs::read(a.path().join("out").join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.path().join("out").join(name)).map_err(|e| format!("{name} missing in rerun: {e}"))?;
        if name.ends_with("_report.json") {
            let vx: Value = serde_json::from_slice(&x).map_err(|e| e.to_string())?;
            let vy: Value = serde_json::from_slice(&y).map_err(|e| e.to_string())?;
            if strip_timings(vx) != strip_timings(vy) {
                return Err(format!("{name} differs beyond timings"));
            }
            reports += 1;
        } else {
            if x != y {
                return Err(format!("{name} is not byte-identical"));
            }
            if name.ends_with(".oprf") {
                containers += 1;
            } else {
                others += 1;
            }
        }
    }
    if containers < 4 || reports < 6 {
        return Err(format!("expected every command's outputs, found {names:?}"));
    }
    Ok(format!(
        "{containers} containers and {others} other artifacts byte-identical, {reports} reports equal modulo timings"
    ))
}

#[cfg(not(feature = "fetch"))]
fn c12_fashion_mnist() -> Outcome {
    Err("built without the fetch feature".into())
}

/// Optional: Fashion MNIST subset, optical m=2 vs RBF Fourier, both at D=1e4
/// with grid-searched hyperparameters on binarized inputs.
#[cfg(feature = "fetch")]
fn c12_fashion_mnist() -> Outcome {
    use optrf::data_io::fetch::{fashion_mnist_subset, FetchSource};
    let cache = optrf::data_io::default_cache_dir();
    let (train, test) =
        fashion_mnist_subset(&FetchSource::default(), &cache, 10_000, 2_000).map_err(|e| e.to_string())?;
    let bin = |d: &optrf::Dataset| {
        let x = optrf::binarize(d.features(), &optrf::BinarizerConfig { threshold: 0.5 }).mapv(f64::from);
        optrf::Dataset::new(x, d.labels().to_vec(), d.num_classes()).unwrap()
    };
    let (train, test) = (bin(&train), bin(&test));
    let mut accs = Vec::new();
    for est in [
        Estimator::RandomFeatures {
            features: FeatureMapSpec::optical(2.0, 10_000),
            seed: PROJECTION_SEED,
        },
        Estimator::RandomFeatures {
            features: FeatureMapSpec::rbf_fourier(1.0 / 784.0, 10_000),
            seed: PROJECTION_SEED,
        },
    ] {
        let cfg = GridSearchConfig {
            scale_grid: vec![1.0],
            alpha_grid: vec![1e-2, 1.0, 100.0],
            bias_grid: vec![0.0, 10.0],
            gamma_grid: Some(vec![1e-3, 1e-2]),
            ..GridSearchConfig::new(10)
        };
        let best = grid_search(&train, &est, &cfg, &SolverConfig::cholesky()).map_err(|e| e.to_string())?.best;
        let fitted = Pipeline::fit(&est, &best, &train, &SolverConfig::cholesky()).map_err(|e| e.to_string())?;
        accs.push(fitted.accuracy(&test).map_err(|e| e.to_string())?);
    }
    let detail = format!("optical {:.2}% vs RBF {:.2}% test accuracy", 100.0 * accs[0], 100.0 * accs[1]);
    if (accs[0] - accs[1]).abs() <= 0.03 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("C1", "closed-form quadratic kernel match", c1_quadratic_kernel),
        ("C2", "even-exponent limit kernels at D=1e6", c2_even_exponents),
        ("C3", "combinatorial simplification", c3_gamma_sum_identity),
        ("C4", "moment identity", c4_eighth_moment),
        ("C5", "exponent ordering", c5_exponent_ordering),
        ("C6", "tail monotonicity", c6_tail_monotonicity),
        ("C7", "solver equivalence", c7_solver_equivalence),
        ("C8", "scaled test-error curve", c8_test_error_curve),
        ("C9", "bias identity", c9_bias_identity),
        ("C10", "RBF baseline", c10_rbf_baseline),
        ("C11", "CLI reproducibility", c11_reproducibility),
    ];
    let only = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if only.as_deref().is_some_and(|o| !id.eq_ignore_ascii_case(o)) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                println!("[FAIL] {id} {name}: {detail} ({secs:.1}s)");
                failed.push(id);
            }
        }
    }
    if only.is_none() || only.as_deref().is_some_and(|o| o.eq_ignore_ascii_case("C12")) {
        if std::env::var("OPTRF_ACCEPTANCE_NETWORK").as_deref() == Ok("1") {
            match catch_unwind(c12_fashion_mnist).unwrap_or_else(|_| Err("panicked".into())) {
                Ok(d) => println!("[PASS] C12 Fashion MNIST optical vs RBF (optional): {d}"),
                Err(d) => println!("[FAIL] C12 Fashion MNIST optical vs RBF (optional, non-gating): {d}"),
            }
        } else {
            println!("[SKIP] C12 Fashion MNIST optical vs RBF (optional; set OPTRF_ACCEPTANCE_NETWORK=1)");
        }
    }
    if !failed.is_empty() {
        println!("acceptance failures: {}", failed.join(", "));
        std::process::exit(1);
    }
}
