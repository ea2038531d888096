//! Monte Carlo experiments comparing simulation with the exact formulas.
//!
//! Replicates run on a rayon pool of `jobs` threads. Each replicate owns the
//! stream `(seed, purpose key, index)` and results are reduced in index
//! order, so reports do not depend on `jobs`.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::dpp::{angles_to_spectral_measure, DppSampler};
use crate::ensembles::{ensemble_spec, EnsembleSpec, GroupId, KernelFamily};
use crate::error::{Error, Result};
use crate::haar::{sample_haar_matrix, traces};
use crate::limit_laws::{xi_cf, xi_sampler, xi_u_cdf, DEFAULT_K_MAX};
use crate::moments::{exact_mean, exact_variance};
use crate::pi_oracle::{pi_closed, rational_to_f64, PiArgs};
use crate::rng::{label_key, replicate_rng};
use crate::stats::{empirical_cf, ks_one_sample, ks_p_value, ks_two_sample, z_score, Moments};
use crate::wasserstein::{w2_estimator, W2Params};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gates {
    /// Two-sided z-score bound for every moment comparison.
    pub z_max: f64,
    /// Bound on the KS distance to the limit law at the top of the ladder.
    pub ks_limit_max: f64,
    /// Bound on the two-sample KS distance between a group and its alias.
    pub ks_alias_max: f64,
    /// Bound on |empirical CF − closed CF| over the ξ grid.
    pub cf_max: f64,
    /// Bound on the KS distance of ξ_U draws to the closed CDF.
    pub ks_xi_max: f64,
}

impl Default for Gates {
    fn default() -> Self {
        Self {
            z_max: 4.0,
            ks_limit_max: 0.03,
            ks_alias_max: 0.03,
            cf_max: 0.01,
            ks_xi_max: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub group: GroupId,
    pub n: usize,
    pub replicates: usize,
    pub seed: u64,
    pub jobs: usize,
    pub tol: f64,
    pub gates: Gates,
    /// W₂ estimator registry name.
    pub w2_method: String,
    pub w2_k_max: usize,
    /// ξ sampler registry name and truncation.
    pub xi_sampler: String,
    pub xi_k_max: usize,
    /// Size of the ξ reference sample for groups without a closed CDF.
    pub xi_reference: usize,
    /// N values for the limit-law ladder; empty means just `n`.
    pub ladder: Vec<usize>,
    /// Highest matrix power in the trace experiment.
    pub trace_k_max: usize,
}

impl ExperimentConfig {
    pub fn new(group: GroupId, n: usize, replicates: usize, seed: u64) -> Self {
        Self {
            group,
            n,
            replicates,
            seed,
            jobs: 1,
            tol: 1e-10,
            gates: Gates::default(),
            w2_method: "closed".into(),
            w2_k_max: 100_000,
            xi_sampler: "fast".into(),
            xi_k_max: DEFAULT_K_MAX,
            xi_reference: 1_000_000,
            ladder: Vec::new(),
            trace_k_max: 4,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.replicates == 0 || self.n == 0 || self.jobs == 0 {
            return Err(Error::Domain(
                "n, replicates and jobs must be positive".into(),
            ));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::Domain("tol must be positive".into()));
        }
        Ok(())
    }
}

/// Moments of one simulated statistic against its exact values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub name: String,
    pub sample_mean: f64,
    pub sample_variance: f64,
    pub mean_se: f64,
    pub variance_se: f64,
    pub exact_mean: f64,
    pub exact_variance: f64,
    pub z_mean: f64,
    pub z_variance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_mean: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_variance: Option<f64>,
}

impl StatRow {
    fn new(name: impl Into<String>, m: &Moments, exact_mean: f64, exact_variance: f64) -> Self {
        let (mean_se, variance_se) = (m.mean_std_err(), m.variance_std_err());
        Self {
            name: name.into(),
            sample_mean: m.mean(),
            sample_variance: m.variance(),
            mean_se,
            variance_se,
            exact_mean,
            exact_variance,
            z_mean: z_score(m.mean(), exact_mean, mean_se),
            z_variance: z_score(m.variance(), exact_variance, variance_se),
            limit_mean: None,
            limit_variance: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsRow {
    pub label: String,
    pub n: usize,
    pub samples: usize,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Gate {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Gate {
    fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Self {
            name: name.into(),
            value,
            threshold,
            pass: value.abs() < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McReport {
    pub experiment: &'static str,
    pub group: GroupId,
    pub n: usize,
    pub n0: usize,
    pub replicates: usize,
    pub seed: u64,
    pub statistics: Vec<StatRow>,
    pub ks_statistics: Vec<KsRow>,
    pub gates: Vec<Gate>,
    pub passed: bool,
    /// Wall time; left out of the serialized report so that reports are a
    /// pure function of the configuration.
    #[serde(skip)]
    pub runtime: Duration,
}

impl McReport {
    fn new(experiment: &'static str, config: &ExperimentConfig, spec: &EnsembleSpec) -> Self {
        Self {
            experiment,
            group: config.group,
            n: spec.n,
            n0: spec.n0,
            replicates: config.replicates,
            seed: config.seed,
            statistics: Vec::new(),
            ks_statistics: Vec::new(),
            gates: Vec::new(),
            passed: false,
            runtime: Duration::ZERO,
        }
    }

    fn z_gates(&mut self, z_max: f64) {
        for row in &self.statistics {
            self.gates.push(Gate::below(
                format!("{} z_mean", row.name),
                row.z_mean,
                z_max,
            ));
            self.gates.push(Gate::below(
                format!("{} z_variance", row.name),
                row.z_variance,
                z_max,
            ));
        }
    }

    fn finish(mut self, start: Instant) -> Self {
        self.passed = self.gates.iter().all(|g| g.pass);
        self.runtime = start.elapsed();
        self
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

fn stream_key(purpose: &str, group: GroupId, n: usize) -> u64 {
    label_key(&format!("{purpose}/{group}/{n}"))
}

/// Per-replicate values of `f(sample)` for DPP draws, in replicate order.
fn dpp_values<T: Send>(
    config: &ExperimentConfig,
    spec: EnsembleSpec,
    purpose: &str,
    f: impl Fn(&crate::dpp::AngleSample) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let key = stream_key(purpose, spec.group, spec.n);
    let seed = config.seed;
    pool(config.jobs)?.install(|| {
        (0..config.replicates as u64)
            .into_par_iter()
            .map_init(
                || DppSampler::new(spec),
                |s, r| s.draw_replicate(seed, key, r).and_then(|a| f(&a)),
            )
            .collect()
    })
}

fn w2_values(config: &ExperimentConfig, spec: EnsembleSpec, purpose: &str) -> Result<Vec<f64>> {
    let est = w2_estimator(
        &config.w2_method,
        &W2Params {
            k_max: config.w2_k_max,
        },
    )?;
    dpp_values(config, spec, purpose, |a| {
        Ok(est.estimate(&angles_to_spectral_measure(a))?.value)
    })
}

/// Simulated W₂² against the exact mean and variance.
pub fn mc_experiment(config: &ExperimentConfig) -> Result<McReport> {
    let start = Instant::now();
    config.validate()?;
    let spec = ensemble_spec(config.group, config.n)?;
    let (mean, _) = exact_mean(&spec, config.tol)?;
    let (var, _) = exact_variance(&spec, config.tol)?;
    let values = w2_values(config, spec, "w2")?;
    let m: Moments = values.iter().copied().collect();
    let mut report = McReport::new("mc", config, &spec);
    report.statistics.push(StatRow::new("W2^2", &m, mean, var));
    report.z_gates(config.gates.z_max);
    Ok(report.finish(start))
}

/// Draws of ξ_G for the configured group.
pub fn xi_reference_sample(config: &ExperimentConfig, size: usize) -> Result<Vec<f64>> {
    let sampler = xi_sampler(&config.xi_sampler, config.group, config.xi_k_max)?;
    let key = label_key(&format!("xi/{}", config.group.limit_class().group()));
    let seed = config.seed;
    pool(config.jobs)?.install(|| {
        Ok((0..size as u64)
            .into_par_iter()
            .map(|r| sampler.sample(&mut replicate_rng(seed, key, r)))
            .collect())
    })
}

/// KS distance of N₀²W₂² − 2 log N₀ − c_G to ξ_G along a ladder of N.
pub fn limit_law_experiment(config: &ExperimentConfig) -> Result<McReport> {
    let start = Instant::now();
    config.validate()?;
    let ladder = if config.ladder.is_empty() {
        vec![config.n]
    } else {
        config.ladder.clone()
    };
    let top = ensemble_spec(config.group, *ladder.last().expect("nonempty"))?;
    let mut report = McReport::new("limitlaw", config, &top);

    let reference = if config.group.is_unitary() {
        None
    } else {
        Some(xi_reference_sample(config, config.xi_reference)?)
    };

    for &n in &ladder {
        let spec = ensemble_spec(config.group, n)?;
        let n0 = spec.n0 as f64;
        let shift = 2.0 * n0.ln() + spec.c_g();
        let centered: Vec<f64> = w2_values(config, spec, "w2")?
            .into_iter()
            .map(|w| n0 * n0 * w - shift)
            .collect();

        let (mean, _) = exact_mean(&spec, config.tol)?;
        let (var, _) = exact_variance(&spec, config.tol)?;
        let m: Moments = centered.iter().copied().collect();
        let mut row = StatRow::new(
            format!("centered N={n}"),
            &m,
            n0 * n0 * mean - shift,
            n0.powi(4) * var,
        );
        row.limit_mean = Some(0.0);
        row.limit_variance = Some(spec.sigma_g());
        report.statistics.push(row);

        let (d, ne) = match &reference {
            None => (ks_one_sample(&centered, xi_u_cdf), centered.len() as f64),
            Some(r) => {
                let (a, b) = (centered.len() as f64, r.len() as f64);
                (ks_two_sample(&centered, r), a * b / (a + b))
            }
        };
        report.ks_statistics.push(KsRow {
            label: format!("N={n}"),
            n,
            samples: centered.len(),
            statistic: d,
            p_value: ks_p_value(d, ne),
        });
    }

    let ks: Vec<f64> = report.ks_statistics.iter().map(|r| r.statistic).collect();
    if ks.len() > 1 {
        let worst_step = ks.windows(2).map(|w| w[1] - w[0]).fold(f64::MIN, f64::max);
        report.gates.push(Gate {
            name: "KS decreasing along ladder (max step)".into(),
            value: worst_step,
            threshold: 0.0,
            pass: worst_step < 0.0,
        });
    }
    report.gates.push(Gate::below(
        format!("KS at N={}", top.n),
        *ks.last().expect("nonempty"),
        config.gates.ks_limit_max,
    ));
    Ok(report.finish(start))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfRow {
    pub t: f64,
    pub re_cf_exact: f64,
    pub im_cf_exact: f64,
    pub re_cf_empirical: f64,
    pub im_cf_empirical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfReport {
    pub group: GroupId,
    pub sampler: String,
    pub k_max: usize,
    pub samples: usize,
    pub seed: u64,
    pub rows: Vec<CfRow>,
    pub max_abs_err: f64,
    /// Present for the unitary class, which has a closed CDF.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks: Option<KsRow>,
    pub gates: Vec<Gate>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime: Duration,
}

/// Parses `t0:t1:step` into grid points, inclusive of `t1` up to rounding.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Domain(format!("grid must be t0:t1:step, got {s:?}"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [t0, t1, step] = parts[..] else {
        return Err(bad());
    };
    if step.is_nan() || step <= 0.0 || !t0.is_finite() || !t1.is_finite() || t1 < t0 {
        return Err(bad());
    }
    let count = ((t1 - t0) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| t0 + i as f64 * step).collect())
}

/// Empirical CF of `replicates` truncated ξ_G draws against the closed CF.
pub fn cf_experiment(config: &ExperimentConfig, grid: &[f64]) -> Result<CfReport> {
    let start = Instant::now();
    config.validate()?;
    let samples = xi_reference_sample(config, config.replicates)?;
    let mut rows = Vec::with_capacity(grid.len());
    let mut max_abs_err = 0.0f64;
    for &t in grid {
        let exact = xi_cf(config.group, t)?;
        let emp = empirical_cf(&samples, t);
        max_abs_err = max_abs_err.max((exact - emp).norm());
        rows.push(CfRow {
            t,
            re_cf_exact: exact.re,
            im_cf_exact: exact.im,
            re_cf_empirical: emp.re,
            im_cf_empirical: emp.im,
        });
    }
    let mut gates = vec![Gate::below(
        "max |CF error|",
        max_abs_err,
        config.gates.cf_max,
    )];
    let ks = config.group.is_unitary().then(|| {
        let d = ks_one_sample(&samples, xi_u_cdf);
        gates.push(Gate::below("KS vs closed CDF", d, config.gates.ks_xi_max));
        KsRow {
            label: "xi_U".into(),
            n: 0,
            samples: samples.len(),
            statistic: d,
            p_value: ks_p_value(d, samples.len() as f64),
        }
    });
    let passed = gates.iter().all(|g| g.pass);
    Ok(CfReport {
        group: config.group,
        sampler: config.xi_sampler.clone(),
        k_max: config.xi_k_max,
        samples: samples.len(),
        seed: config.seed,
        rows,
        max_abs_err,
        ks,
        gates,
        passed,
        runtime: start.elapsed(),
    })
}

/// The alias pair exercised by the reduction test.
pub fn alias_pair(group: GroupId) -> Result<(GroupId, GroupId)> {
    match group.canonical() {
        GroupId::U => Ok((GroupId::U, GroupId::Su)),
        GroupId::SoOdd => Ok((GroupId::SoOdd, GroupId::OOdd)),
        GroupId::Usp => Ok((GroupId::Usp, GroupId::OMinus)),
        g => Err(Error::Domain(format!("{g} has no alias"))),
    }
}

/// Two-sample KS between W₂² under a group and under its alias.
pub fn reduction_test(config: &ExperimentConfig) -> Result<McReport> {
    let start = Instant::now();
    config.validate()?;
    let (a, b) = alias_pair(config.group)?;
    let sa = ensemble_spec(a, config.n)?;
    let sb = ensemble_spec(b, config.n)?;
    let va = w2_values(config, sa, "w2")?;
    let vb = w2_values(config, sb, "w2")?;
    let d = ks_two_sample(&va, &vb);
    let ne = va.len() as f64 * vb.len() as f64 / (va.len() + vb.len()) as f64;

    let mut report = McReport::new("reduce", config, &sa);
    let (mean, _) = exact_mean(&sa, config.tol)?;
    let (var, _) = exact_variance(&sa, config.tol)?;
    for (g, v) in [(a, &va), (b, &vb)] {
        let m: Moments = v.iter().copied().collect();
        report
            .statistics
            .push(StatRow::new(format!("W2^2 {g}"), &m, mean, var));
    }
    report.ks_statistics.push(KsRow {
        label: format!("{a} vs {b}"),
        n: config.n,
        samples: va.len() + vb.len(),
        statistic: d,
        p_value: if d == 0.0 { 1.0 } else { ks_p_value(d, ne) },
    });
    report
        .gates
        .push(Gate::below("two-sample KS", d, config.gates.ks_alias_max));
    Ok(report.finish(start))
}

/// Per replicate, (Re, Im) of Tr A^k for k = 1..=k_max.
type TraceRows = Vec<Vec<(f64, f64)>>;

/// Exact finite-N mean and variance of Tr A^k for the real families; the
/// nontrivial part is 2Σcos(kθ_n) whose moments follow from Π.
fn real_trace_moments(spec: &EnsembleSpec, k: i64) -> Result<(f64, f64)> {
    let pi = |args: Vec<i64>| -> Result<f64> {
        Ok(rational_to_f64(pi_closed(&PiArgs::new(*spec, args)?)?))
    };
    let n = spec.n as f64;
    let var_c = n / 2.0 + pi(vec![2 * k])? / 2.0 - pi(vec![k, k])?;
    let sign = if spec.group == GroupId::OOdd && k % 2 == 1 {
        -1.0
    } else {
        1.0
    };
    let trivial: f64 = spec.trivial().iter().map(|l| l.powi(k as i32)).sum();
    Ok((trivial + sign * 2.0 * pi(vec![k])?, 4.0 * var_c))
}

/// Limiting mean and per-component variance of Tr A^k as N grows.
fn trace_limit(group: GroupId, k: i64) -> (f64, f64) {
    let even = (k % 2 == 0) as i64 as f64;
    match group {
        GroupId::U | GroupId::Su => (0.0, k as f64 / 2.0),
        GroupId::Usp => (-even, k as f64),
        _ => (even, k as f64),
    }
}

/// Moments of Tr A^k, k ≤ `trace_k_max`: from Haar matrices where the group
/// has a matrix sampler, and from DPP angles (Σ over eigenvalues) for all
/// groups except SU.
pub fn trace_experiment(config: &ExperimentConfig) -> Result<McReport> {
    let start = Instant::now();
    config.validate()?;
    let group = config.group;
    if group == GroupId::Su {
        return Err(Error::UnsupportedGroup(group));
    }
    let spec = ensemble_spec(group, config.n)?;
    let kmax = config.trace_k_max.max(1);
    let mut report = McReport::new("trace", config, &spec);

    let mut paths: Vec<(&str, TraceRows)> = Vec::new();
    if group != GroupId::Usp {
        let key = stream_key("haar", group, config.n);
        let seed = config.seed;
        let rows: Result<Vec<Vec<(f64, f64)>>> = pool(config.jobs)?.install(|| {
            (0..config.replicates as u64)
                .into_par_iter()
                .map(|r| {
                    let mut rng = replicate_rng(seed, key, r);
                    let a = sample_haar_matrix(group, config.n, &mut rng)?;
                    Ok(traces(&a, kmax)?
                        .into_iter()
                        .map(|z| (z.re, z.im))
                        .collect())
                })
                .collect()
        });
        paths.push(("matrix", rows?));
    }
    let unitary = spec.kernel == KernelFamily::Exp;
    let odd_flip = group == GroupId::OOdd;
    let trivial = spec.trivial();
    let dpp_rows = dpp_values(config, spec, "trace", |a| {
        Ok((1..=kmax)
            .map(|k| {
                let kf = k as f64;
                if unitary {
                    a.angles.iter().fold((0.0, 0.0), |(re, im), &t| {
                        (re + (kf * t).cos(), im + (kf * t).sin())
                    })
                } else {
                    // O⁻(2N+1) is −SO(2N+1): angles shift by π
                    let sign = if odd_flip && k % 2 == 1 { -1.0 } else { 1.0 };
                    let c: f64 = a.angles.iter().map(|&t| (kf * t).cos()).sum();
                    let triv: f64 = trivial.iter().map(|l| l.powi(k as i32)).sum();
                    (triv + sign * 2.0 * c, 0.0)
                }
            })
            .collect())
    })?;
    paths.push(("dpp", dpp_rows));

    for (path, rows) in &paths {
        for k in 1..=kmax {
            let ki = k as i64;
            let (lim_mean, lim_var) = trace_limit(group, ki);
            if unitary {
                let exact_var = (k.min(config.n)) as f64 / 2.0;
                for (part, pick) in [("Re", 0usize), ("Im", 1)] {
                    let m: Moments = rows
                        .iter()
                        .map(|r| if pick == 0 { r[k - 1].0 } else { r[k - 1].1 })
                        .collect();
                    let mut row =
                        StatRow::new(format!("{path} {part} Tr A^{k}"), &m, 0.0, exact_var);
                    row.limit_mean = Some(lim_mean);
                    row.limit_variance = Some(lim_var);
                    report.statistics.push(row);
                }
            } else {
                let (mean, var) = real_trace_moments(&spec, ki)?;
                let m: Moments = rows.iter().map(|r| r[k - 1].0).collect();
                let mut row = StatRow::new(format!("{path} Tr A^{k}"), &m, mean, var);
                row.limit_mean = Some(lim_mean);
                row.limit_variance = Some(lim_var);
                report.statistics.push(row);
            }
        }
    }
    report.z_gates(config.gates.z_max);
    Ok(report.finish(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(g: GroupId, n: usize, reps: usize) -> ExperimentConfig {
        ExperimentConfig::new(g, n, reps, 2024)
    }

    #[test]
    fn degenerate_unitary_mc() {
        let r = mc_experiment(&cfg(GroupId::U, 1, 500)).unwrap();
        let row = &r.statistics[0];
        assert!((row.sample_mean - PI * PI / 3.0).abs() < 1e-12);
        assert!(row.sample_variance < 1e-24);
        assert!(r.passed);
    }

    #[test]
    fn mc_small_groups_pass() {
        for g in [GroupId::U, GroupId::SoOdd, GroupId::OMinus] {
            let r = mc_experiment(&cfg(g, 3, 20_000)).unwrap();
            assert!(r.passed, "{g}: {:?}", r.gates);
        }
    }

    #[test]
    fn reports_do_not_depend_on_jobs() {
        let mut c = cfg(GroupId::SoEven, 4, 3000);
        let one = serde_json::to_string(&mc_experiment(&c).unwrap()).unwrap();
        c.jobs = 3;
        let three = serde_json::to_string(&mc_experiment(&c).unwrap()).unwrap();
        assert_eq!(one, three);
        assert!(!one.contains("runtime"));
    }

    #[test]
    fn reduction_pairs() {
        let r = reduction_test(&cfg(GroupId::U, 1, 200)).unwrap();
        assert_eq!(r.ks_statistics[0].statistic, 0.0);
        let r = reduction_test(&cfg(GroupId::SoOdd, 4, 10_000)).unwrap();
        assert!(r.passed, "{:?}", r.ks_statistics);
        assert!(alias_pair(GroupId::SoEven).is_err());
    }

    #[test]
    fn trace_moments_small() {
        for g in [GroupId::U, GroupId::OOdd, GroupId::OMinus, GroupId::Usp] {
            let mut c = cfg(g, 3, 20_000);
            c.trace_k_max = 3;
            let r = trace_experiment(&c).unwrap();
            assert!(
                r.passed,
                "{g}: {:?}",
                r.gates.iter().filter(|x| !x.pass).collect::<Vec<_>>()
            );
        }
        assert!(trace_experiment(&cfg(GroupId::Su, 3, 10)).is_err());
    }

    #[test]
    fn limit_ladder_runs() {
        let mut c = cfg(GroupId::SoOdd, 4, 2000);
        c.ladder = vec![2, 4];
        c.xi_reference = 20_000;
        let r = limit_law_experiment(&c).unwrap();
        assert_eq!(r.ks_statistics.len(), 2);
        assert_eq!(r.statistics.len(), 2);
        assert!(r.gates.iter().any(|g| g.name.starts_with("KS at")));
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_grid("0:1:0.25").unwrap(),
            vec![0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_grid("0:3:1.5").unwrap().len(), 3);
        assert_eq!(parse_grid("0.1:0.3:0.1").unwrap().len(), 3);
        for bad in ["0:1", "1:0:0.1", "0:1:0", "a:b:c"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn cf_grid_small() {
        let mut c = cfg(GroupId::U, 1, 20_000);
        c.xi_k_max = 2000;
        let r = cf_experiment(&c, &parse_grid("0:2:0.5").unwrap()).unwrap();
        assert_eq!(r.rows.len(), 5);
        assert!((r.rows[0].re_cf_empirical - 1.0).abs() < 1e-12);
        assert!(r.max_abs_err < 0.03, "{}", r.max_abs_err);
        assert!(r.ks.is_some());
    }

    #[test]
    fn invalid_configs() {
        assert!(mc_experiment(&cfg(GroupId::U, 0, 10)).is_err());
        let mut c = cfg(GroupId::U, 2, 10);
        c.w2_method = "nope".into();
        assert!(mc_experiment(&c).is_err());
    }
}
