use std::f64::consts::PI;

use haarw2::dpp::DppSampler;
use haarw2::ensembles::{ensemble_spec, kernel_eval, GroupId};
use haarw2::harness::{limit_law_experiment, reduction_test, ExperimentConfig};
use haarw2::rng::label_key;

#[test]
fn limit_law_report_is_identical_across_job_counts() {
    let mut c = ExperimentConfig::new(GroupId::SoEven, 8, 4000, 99);
    c.ladder = vec![4, 8];
    c.xi_reference = 50_000;
    let one = serde_json::to_vec(&limit_law_experiment(&c).unwrap()).unwrap();
    c.jobs = 8;
    let eight = serde_json::to_vec(&limit_law_experiment(&c).unwrap()).unwrap();
    assert_eq!(one, eight);
}

#[test]
fn o_minus_matches_usp() {
    let r = reduction_test(&ExperimentConfig::new(GroupId::OMinus, 5, 10_000, 3)).unwrap();
    assert!(r.passed, "{:?}", r.ks_statistics);
}

/// Bin counts of DPP draws against the one-point intensity K(x,x) integrated
/// over each bin (against dx/|I|), via a chi-square statistic.
#[test]
fn one_point_intensity_matches_kernel_diagonal() {
    const BINS: usize = 24;
    const DRAWS: u64 = 20_000;
    for g in [GroupId::U, GroupId::SoOdd, GroupId::SoEven, GroupId::Usp] {
        let spec = ensemble_spec(g, 3).unwrap();
        let (lo, hi) = spec.interval;
        let width = (hi - lo) / BINS as f64;
        let expected: Vec<f64> = (0..BINS)
            .map(|b| {
                let sub = 64;
                let h = width / sub as f64;
                let mass: f64 = (0..sub)
                    .map(|i| {
                        let x = lo + b as f64 * width + (i as f64 + 0.5) * h;
                        kernel_eval(&spec, x, x).unwrap().re * h / (hi - lo)
                    })
                    .sum();
                mass * DRAWS as f64
            })
            .collect();
        let mut counts = [0f64; BINS];
        let mut sampler = DppSampler::new(spec);
        let key = label_key("intensity");
        for r in 0..DRAWS {
            for &x in &sampler.draw_replicate(5, key, r).unwrap().angles {
                counts[(((x - lo) / width) as usize).min(BINS - 1)] += 1.0;
            }
        }
        let total: f64 = expected.iter().sum();
        assert!(
            (total - (spec.n as f64 * DRAWS as f64)).abs() < 1e-6 * total,
            "{g}"
        );
        // Counts within one draw are negatively correlated, so the Poisson
        // chi-square is conservative; 23 d.o.f., 0.1% point is about 49.7.
        let chi2: f64 = counts
            .iter()
            .zip(&expected)
            .map(|(c, e)| (c - e).powi(2) / e)
            .sum();
        assert!(chi2 < 49.7, "{g}: chi2 = {chi2}");
        assert!(lo == 0.0 && (hi == PI || hi == 2.0 * PI));
    }
}

/// Large-N moment check; about an hour on one core, so opt-in via
/// `cargo test -p haarw2 --test pipeline -- --ignored`.
#[test]
#[ignore]
fn exact_moments_at_n64_against_1e6_draws() {
    use haarw2::harness::mc_experiment;
    for g in GroupId::ALL {
        let mut c = ExperimentConfig::new(g, 64, 1_000_000, 64);
        c.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
        let r = mc_experiment(&c).unwrap();
        assert!(r.passed, "{g}: {:?}", r.statistics);
    }
}
