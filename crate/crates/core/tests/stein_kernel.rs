use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use steinkit::discrepancy::{stein_gram, SampleSet};
use steinkit::kernel::{Diffeomorphism, MatrixBaseKernel, ScalarKernel, TiltFunction};
use steinkit::quad::integrate;
use steinkit::stein::{apply_stein_operator, bounded_stein_base, FnField, SteinKernel};
use steinkit::target::Target;

fn mixture_1d() -> Target {
    Target::gaussian_mixture(vec![0.3, 0.7], vec![vec![-2.0], vec![1.5]], vec![vec![0.5], vec![1.0]]).unwrap()
}

/// Σᵢ [∂xᵢ∂yᵢK_ii + sᵢ(x)∂yᵢK_ii + sᵢ(y)∂xᵢK_ii + sᵢ(x)sᵢ(y)K_ii] with every
/// derivative of the base taken by central differences.
fn fd_stein_kernel(base: &MatrixBaseKernel, p: &Target, x: &[f64], y: &[f64]) -> f64 {
    let h = 1e-4;
    let (sx, sy) = (p.score(x).unwrap(), p.score(y).unwrap());
    let k = |i: usize, a: &[f64], b: &[f64]| base.entry(i).value(a, b).unwrap();
    let bump = |v: &[f64], i: usize, s: f64| {
        let mut o = v.to_vec();
        o[i] += s;
        o
    };
    (0..x.len())
        .map(|i| {
            let (xp, xm, yp, ym) = (bump(x, i, h), bump(x, i, -h), bump(y, i, h), bump(y, i, -h));
            let mixed = (k(i, &xp, &yp) - k(i, &xp, &ym) - k(i, &xm, &yp) + k(i, &xm, &ym)) / (4.0 * h * h);
            let gx = (k(i, &xp, y) - k(i, &xm, y)) / (2.0 * h);
            let gy = (k(i, x, &yp) - k(i, x, &ym)) / (2.0 * h);
            mixed + sx[i] * gy + sy[i] * gx + sx[i] * sy[i] * k(i, x, y)
        })
        .sum()
}

#[test]
fn combinator_kernels_match_finite_differences() {
    let p2 = Target::gaussian_mixture(vec![0.5, 0.5], vec![vec![-1.0, 0.0], vec![1.0, 1.0]], vec![vec![1.0, 0.5], vec![0.7, 1.0]]).unwrap();
    let g = ScalarKernel::gaussian(2, 1.3).unwrap();
    let bases: Vec<(&str, MatrixBaseKernel)> = vec![
        ("tilted imq", ScalarKernel::imq(2, 1.0, 0.5).unwrap().tilt(TiltFunction::inverse_multiquadric(1.0, 0.5).unwrap()).into()),
        ("composed gaussian", g.compose(Diffeomorphism::tanh_perturbation(0.3).unwrap()).into()),
        ("bounded construction", bounded_stein_base(&g, &TiltFunction::inverse_multiquadric(1.0, 1.0).unwrap()).unwrap()),
    ];
    let pts = [[0.3, -0.4], [1.7, 0.2], [-2.1, 1.1], [0.0, 0.0], [3.0, -2.5]];
    for (name, base) in bases {
        let sk = SteinKernel::new(base.clone(), p2.clone()).unwrap();
        for x in &pts {
            for y in &pts {
                let a = sk.eval(x, y).unwrap();
                let b = fd_stein_kernel(&base, &p2, x, y);
                let scale = (sk.diag(x).unwrap() * sk.diag(y).unwrap()).sqrt().max(1e-3);
                assert!((a - b).abs() <= 1e-5 * scale, "{name} at {x:?}, {y:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn stein_operator_has_zero_mean_on_a_mixture() {
    let p = mixture_1d();
    let v = FnField { value: |x: &[f64]| vec![x[0].sin() + 0.5 * x[0]], divergence: |x: &[f64]| x[0].cos() + 0.5 };
    let mean = integrate(|x| apply_stein_operator(&p, &v, &[x]).unwrap() * p.density(&[x]).unwrap(), -15.0, 15.0, 1e-12);
    assert!(mean.value.abs() < 1e-9, "{}", mean.value);
}

#[test]
fn diagonal_equals_zero_separation_value() {
    let sk = SteinKernel::new(ScalarKernel::matern32(1, 0.8).unwrap(), mixture_1d()).unwrap();
    for x in [-3.0, -0.2, 0.0, 2.5] {
        assert!((sk.diag(&[x]).unwrap() - sk.eval(&[x], &[x]).unwrap()).abs() < 1e-12);
    }
}

fn points(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-4.0..4.0f64, dim), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn stein_kernel_is_symmetric(pair in points(2, 2)) {
        let p = Target::student_t(3.0, vec![0.0, 0.5], 1.2).unwrap();
        for k in [ScalarKernel::imq(2, 1.0, 0.5).unwrap(), ScalarKernel::gaussian(2, 0.7).unwrap()] {
            let sk = SteinKernel::new(k, p.clone()).unwrap();
            let (a, b) = (sk.eval(&pair[0], &pair[1]).unwrap(), sk.eval(&pair[1], &pair[0]).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn stein_gram_is_positive_semidefinite(rows in points(2, 12)) {
        let p = Target::gaussian(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
        let q = SampleSet::from_rows(&rows).unwrap();
        for k in [ScalarKernel::imq(2, 1.0, 0.5).unwrap(), ScalarKernel::sech(2, 1.0).unwrap()] {
            let sk = SteinKernel::new(k, p.clone()).unwrap();
            let g = DMatrix::from_vec(12, 12, stein_gram(&sk, &q).unwrap());
            let min = SymmetricEigen::new(g.clone()).eigenvalues.min();
            prop_assert!(min >= -1e-9 * g.trace().max(1.0), "min eigenvalue {}", min);
        }
    }
}
