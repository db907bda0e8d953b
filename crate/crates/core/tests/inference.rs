use steinkit::inference::{gof_test, rank_samples, svgd_run, SvgdConfig};
use steinkit::kernel::ScalarKernel;
use steinkit::rng;
use steinkit::stein::SteinKernel;
use steinkit::target::Target;

#[test]
fn svgd_commutes_with_translation() {
    let p = Target::gaussian_mixture(vec![0.5, 0.5], vec![vec![-1.0, 0.0], vec![1.0, 0.5]], vec![vec![1.0, 1.0], vec![0.5, 1.0]]).unwrap();
    let shift = [3.0, -2.0];
    let k = ScalarKernel::gaussian(2, 1.0).unwrap();
    let init = Target::standard_normal(2).unwrap().sample(30, &mut rng::seeded(3)).unwrap();
    let cfg = SvgdConfig::new(0.1, 40).unwrap();
    let a = svgd_run(&p, &cfg, &init, &k).unwrap().translated(&shift).unwrap();
    let b = svgd_run(&p.translated(&shift).unwrap(), &cfg, &init.translated(&shift).unwrap(), &k).unwrap();
    for (u, v) in a.points().iter().zip(b.points()) {
        assert!((u - v).abs() < 1e-9, "{u} vs {v}");
    }
}

#[test]
fn null_p_values_are_roughly_uniform() {
    let p = Target::standard_normal(1).unwrap();
    let sk = SteinKernel::new(ScalarKernel::imq(1, 1.0, 0.5).unwrap(), p.clone()).unwrap();
    let reps = 150;
    let mut pv: Vec<f64> = (0..reps)
        .map(|r| gof_test(&sk, &p.sample(60, &mut rng::stream(21, r)).unwrap(), 0.05, 300, 500 + r).unwrap().p_value)
        .collect();
    pv.sort_by(f64::total_cmp);
    // Kolmogorov-Smirnov distance to the uniform law, 1% critical value
    let ks = pv
        .iter()
        .enumerate()
        .map(|(i, &v)| ((i + 1) as f64 / reps as f64 - v).abs().max((v - i as f64 / reps as f64).abs()))
        .fold(0.0, f64::max);
    assert!(ks < 1.63 / (reps as f64).sqrt(), "KS distance {ks}");
}

#[test]
fn ranking_prefers_the_sample_nearest_the_target() {
    let p = Target::standard_normal(1).unwrap();
    let sk = SteinKernel::new(ScalarKernel::imq(1, 1.0, 0.5).unwrap(), p.clone()).unwrap();
    let candidates: Vec<_> = [1.5, 0.0, 0.6]
        .iter()
        .map(|&m| Target::gaussian(vec![m], vec![1.0]).unwrap().sample(300, &mut rng::seeded(9)).unwrap())
        .collect();
    let ranked = rank_samples(&sk, &candidates).unwrap();
    assert_eq!(ranked.iter().map(|r| r.index).collect::<Vec<_>>(), vec![1, 2, 0]);
}
