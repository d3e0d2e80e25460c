//! Behaviour of the public estimators on small problems, checked against
//! formulas written out independently here.

use ndarray::{array, s, Array2};
use optrf::data_io::{synthetic_blobs, BlobsConfig};
use optrf::model_selection::split;
use optrf::{
    k2s, Estimator, Features, FeaturesF32, FeatureMapSpec, FittedPipeline, FittedPipelineF32, Hyperparameters,
    KernelSpec, Projection, ProjectionF32, SolverConfig,
};

fn blobs(seed: u64, separation: f64) -> optrf::Dataset {
    synthetic_blobs(&BlobsConfig {
        seed,
        n: 400,
        d: 8,
        classes: 3,
        separation,
    })
    .unwrap()
}

#[test]
fn optical_m2_matches_the_quadratic_kernel_on_average() {
    let x = array![[0.6, 0.8, 0.0], [0.0, 0.6, 0.8]];
    let phi = Features::new(FeatureMapSpec::optical(2.0, 100_000), 17, 3)
        .unwrap()
        .transform(x.view())
        .unwrap();
    let est = phi.row(0).dot(&phi.row(1));
    // |x|^2 |y|^2 + (x.y)^2 with unit vectors and x.y = 0.48
    let exact = 1.0 + 0.48f64.powi(2);
    assert!((est - exact).abs() / exact < 0.03, "{est} vs {exact}");
    assert!((k2s(x.row(0), x.row(1), 1).unwrap() - exact).abs() < 1e-12);
}

#[test]
fn larger_projections_extend_smaller_ones() {
    let x = array![[1.0, 0.0, 1.0, 1.0], [0.0, 1.0, 1.0, 0.0]];
    let small = Projection::sample(5, 4, 300).unwrap();
    let large = Projection::sample(5, 4, 9000).unwrap();
    assert_eq!(small.real_part(), large.real_part().slice(s![..300, ..]));
    assert_eq!(small.imag_part(), large.imag_part().slice(s![..300, ..]));
    let a = small.intensities(x.view()).unwrap();
    let b = large.intensities(x.view()).unwrap();
    assert_eq!(a, b.slice(s![.., ..300]));
}

#[test]
fn single_precision_tracks_double_precision() {
    let x64 = array![[1.0, 0.0, 1.0], [0.0, 1.0, 1.0]];
    let x32 = x64.mapv(|v| v as f32);
    let p64 = Projection::sample(9, 3, 64).unwrap();
    let p32 = ProjectionF32::sample(9, 3, 64).unwrap();
    for (a, b) in p64.real_part().iter().zip(p32.real_part().iter()) {
        assert_eq!(*a as f32, *b);
    }
    let spec = FeatureMapSpec::optical(2.0, 64);
    let f64v = Features::new(spec, 9, 3).unwrap().transform(x64.view()).unwrap();
    let f32v = FeaturesF32::new(spec, 9, 3).unwrap().transform(x32.view()).unwrap();
    for (a, b) in f64v.iter().zip(f32v.iter()) {
        assert!((a - *b as f64).abs() <= 1e-5 * (1.0 + a.abs()), "{a} vs {b}");
    }
}

#[test]
fn pipelines_separate_well_separated_blobs() {
    let data = blobs(3, 8.0);
    let (train, test) = split(&data, 0.25, 4).unwrap();
    let params = Hyperparameters {
        scale: 1.0,
        alpha: 1e-2,
        bias: 1.0,
        gamma: None,
    };
    let rf = Estimator::RandomFeatures {
        features: FeatureMapSpec::optical(2.0, 500),
        seed: 1,
    };
    let exact = Estimator::ExactKernel {
        kernel: KernelSpec::OpticalEven { s: 1 },
    };
    for est in [rf, exact] {
        let fitted = FittedPipeline::fit(&est, &params, &train, &SolverConfig::cholesky()).unwrap();
        let acc = fitted.accuracy(&test).unwrap();
        assert!(acc > 0.95, "{est:?}: {acc}");
    }
}

#[test]
fn f32_pipeline_agrees_with_f64() {
    let data = blobs(8, 6.0);
    let (train, test) = split(&data, 0.25, 2).unwrap();
    let to32 = |d: &optrf::Dataset| {
        optrf::DatasetF32::new(d.features().mapv(|v| v as f32), d.labels().to_vec(), d.num_classes()).unwrap()
    };
    let est = Estimator::RandomFeatures {
        features: FeatureMapSpec::optical(2.0, 200),
        seed: 7,
    };
    let params = Hyperparameters {
        scale: 1.0,
        alpha: 1.0,
        bias: 1.0,
        gamma: None,
    };
    let cfg = SolverConfig::cholesky();
    let a = FittedPipeline::fit(&est, &params, &train, &cfg).unwrap().predict(test.features()).unwrap();
    let b = FittedPipelineF32::fit(&est, &params, &to32(&train), &cfg)
        .unwrap()
        .predict(to32(&test).features())
        .unwrap();
    let agree = a.iter().zip(&b).filter(|(x, y)| x == y).count();
    assert!(agree as f64 >= 0.98 * a.len() as f64, "{agree}/{}", a.len());
}

#[test]
fn rbf_features_approximate_the_gaussian_kernel() {
    let x: Array2<f64> = array![[0.1, 0.2, -0.3], [0.4, -0.1, 0.0]];
    let gamma = 0.7;
    let phi = Features::new(FeatureMapSpec::rbf_fourier(gamma, 50_000), 3, 3)
        .unwrap()
        .transform(x.view())
        .unwrap();
    let d2: f64 = (&x.row(0) - &x.row(1)).mapv(|v| v * v).sum();
    let exact = (-gamma * d2).exp();
    assert!((phi.row(0).dot(&phi.row(1)) - exact).abs() < 0.02);
}
