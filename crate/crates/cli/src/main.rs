use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use haarw2::dpp::DppSampler;
use haarw2::ensembles::{ensemble_spec, GroupId};
use haarw2::harness::{
    cf_experiment, limit_law_experiment, mc_experiment, parse_grid, reduction_test,
    trace_experiment, ExperimentConfig, McReport,
};
use haarw2::moments::moment_report;
use haarw2::pi_oracle::pi_check;
use haarw2::rng::label_key;

#[derive(Parser)]
#[command(
    name = "haarw2",
    version,
    about = "Wasserstein distance of Haar eigenvalues to uniformity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Jsonl,
    Csv,
    Table,
}

#[derive(Args, Clone)]
struct Common {
    /// u, su, so-odd, o-odd, so-even, o-minus or usp
    #[arg(long, default_value = "u")]
    group: GroupId,
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 10_000)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; results do not depend on this
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Two-sided z-score gate
    #[arg(long, default_value_t = 4.0)]
    z_max: f64,
}

impl Common {
    fn config(&self) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(self.group, self.n, self.reps, self.seed);
        c.jobs = self.jobs.max(1);
        c.tol = self.tol;
        c.gates.z_max = self.z_max;
        c
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        })
    }

    fn format(&self, default: Format, allowed: &[Format]) -> Result<Format> {
        let f = self.format.unwrap_or(default);
        if !allowed.contains(&f) {
            bail!("unsupported --format for this subcommand");
        }
        Ok(f)
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Subcommand)]
enum Command {
    /// Print the ensemble description as JSON
    Spec {
        #[command(flatten)]
        common: Common,
    },
    /// Draw eigen-angle samples as JSON lines
    Sample {
        #[command(flatten)]
        common: Common,
    },
    /// Exact and asymptotic mean and variance of W₂²
    Moments {
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo moments of W₂² against the exact values
    Mc {
        #[command(flatten)]
        common: Common,
        /// W₂ estimator: closed or fourier
        #[arg(long, default_value = "closed")]
        w2: String,
        #[arg(long, default_value_t = 100_000)]
        w2_kmax: usize,
    },
    /// Characteristic function of ξ_G, and optionally the finite-N ladder
    Limitlaw {
        #[command(flatten)]
        common: Common,
        /// CF grid as t0:t1:step
        #[arg(long, default_value = "0:3:0.25")]
        grid: String,
        /// Truncation of the ξ series
        #[arg(long, default_value_t = 100_000)]
        trunc: usize,
        /// ξ sampler: series or fast
        #[arg(long, default_value = "fast")]
        sampler: String,
        #[arg(long, default_value_t = 0.01)]
        cf_max: f64,
        #[arg(long, default_value_t = 0.01)]
        ks_max: f64,
        /// Comma separated N values; runs the centered-statistic KS ladder
        #[arg(long, value_delimiter = ',')]
        ladder: Vec<usize>,
        /// KS gate at the top of the ladder
        #[arg(long, default_value_t = 0.03)]
        ladder_ks_max: f64,
        /// ξ reference size for groups without a closed CDF
        #[arg(long, default_value_t = 1_000_000)]
        reference: usize,
    },
    /// Compare closed-form Π against quadrature
    PiCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 12)]
        kmax: i64,
    },
    /// Two-sample KS between a group and its alias
    ReduceTest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.03)]
        ks_max: f64,
    },
    /// Moments of Tr A^k from matrices and from DPP angles
    TraceTest {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
    },
}

fn write_json<T: Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

fn write_csv<T: Serialize>(w: &mut dyn Write, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

fn emit_mc(common: &Common, report: &McReport) -> Result<bool> {
    let mut w = common.writer()?;
    match common.format(Format::Json, &[Format::Json, Format::Csv])? {
        Format::Csv => {
            write_csv(&mut *w, &report.statistics)?;
            if !report.ks_statistics.is_empty() {
                writeln!(w)?;
                write_csv(&mut *w, &report.ks_statistics)?;
            }
        }
        _ => write_json(&mut *w, report)?,
    }
    w.flush()?;
    eprintln!(
        "{} {} N={}: {} ({:.2?})",
        report.experiment,
        report.group,
        report.n,
        if report.passed { "PASS" } else { "FAIL" },
        report.runtime
    );
    Ok(report.passed)
}

#[derive(Serialize)]
struct PiCsvRow<'a> {
    pattern: &'a str,
    args: String,
    quadrature: f64,
    closed: &'a str,
    abs_err: f64,
    pass: bool,
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Spec { common } => {
            let spec = ensemble_spec(common.group, common.n)?;
            let mut w = common.writer()?;
            write_json(&mut *w, &spec)?;
            w.flush()?;
            Ok(true)
        }
        Command::Sample { common } => {
            let spec = ensemble_spec(common.group, common.n)?;
            let fmt = common.format(Format::Jsonl, &[Format::Jsonl, Format::Json])?;
            let key = label_key(&format!("sample/{}/{}", spec.group, spec.n));
            let mut sampler = DppSampler::new(spec);
            let mut w = common.writer()?;
            if fmt == Format::Json {
                write!(w, "[")?;
            }
            for r in 0..common.reps as u64 {
                let s = sampler.draw_replicate(common.seed, key, r)?;
                if fmt == Format::Json {
                    write!(w, "{}{}", if r == 0 { "" } else { "," }, s.to_json_line())?;
                } else {
                    writeln!(w, "{}", s.to_json_line())?;
                }
            }
            if fmt == Format::Json {
                writeln!(w, "]")?;
            }
            w.flush()?;
            Ok(true)
        }
        Command::Moments { common } => {
            let spec = ensemble_spec(common.group, common.n)?;
            let report = moment_report(&spec, common.tol)?;
            let mut w = common.writer()?;
            match common.format(Format::Json, &[Format::Json, Format::Csv])? {
                Format::Csv => write_csv(&mut *w, [&report])?,
                _ => write_json(&mut *w, &report)?,
            }
            w.flush()?;
            Ok(true)
        }
        Command::Mc {
            common,
            w2,
            w2_kmax,
        } => {
            let mut config = common.config();
            config.w2_method = w2;
            config.w2_k_max = w2_kmax;
            emit_mc(&common, &mc_experiment(&config)?)
        }
        Command::Limitlaw {
            common,
            grid,
            trunc,
            sampler,
            cf_max,
            ks_max,
            ladder,
            ladder_ks_max,
            reference,
        } => {
            let mut config = common.config();
            config.xi_k_max = trunc;
            config.xi_sampler = sampler;
            config.xi_reference = reference;
            config.gates.cf_max = cf_max;
            config.gates.ks_xi_max = ks_max;
            config.gates.ks_limit_max = ladder_ks_max;
            config.ladder = ladder;
            let cf = cf_experiment(&config, &parse_grid(&grid)?)?;
            let ladder_report = if config.ladder.is_empty() {
                None
            } else {
                Some(limit_law_experiment(&config)?)
            };

            #[derive(Serialize)]
            struct Summary<'a> {
                cf: &'a haarw2::harness::CfReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                ladder: Option<&'a McReport>,
            }
            let summary = Summary {
                cf: &cf,
                ladder: ladder_report.as_ref(),
            };
            let mut w = common.writer()?;
            match common.format(Format::Csv, &[Format::Csv, Format::Json])? {
                Format::Csv => {
                    write_csv(&mut *w, &cf.rows)?;
                    // Summary goes to stderr so stdout stays plain CSV.
                    eprintln!("{}", serde_json::to_string_pretty(&summary)?);
                }
                _ => write_json(&mut *w, &summary)?,
            }
            w.flush()?;
            let passed = cf.passed && ladder_report.as_ref().is_none_or(|r| r.passed);
            eprintln!(
                "limitlaw {}: {}",
                config.group,
                if passed { "PASS" } else { "FAIL" }
            );
            Ok(passed)
        }
        Command::PiCheck { common, kmax } => {
            let spec = ensemble_spec(common.group, common.n)?;
            let report = pi_check(&spec, kmax, common.tol.max(1e-9))?;
            let mut w = common.writer()?;
            match common.format(Format::Table, &[Format::Table, Format::Json, Format::Csv])? {
                Format::Json => write_json(&mut *w, &report)?,
                Format::Csv => write_csv(
                    &mut *w,
                    report.rows.iter().map(|r| PiCsvRow {
                        pattern: r.pattern,
                        args: format!("{:?}", r.args),
                        quadrature: r.quadrature,
                        closed: &r.closed,
                        abs_err: r.abs_err,
                        pass: r.pass,
                    }),
                )?,
                _ => {
                    writeln!(
                        w,
                        "{:<14} {:<22} {:>22} {:>14} {:>10}  ok",
                        "pattern", "args", "quadrature", "closed", "abs_err"
                    )?;
                    for r in &report.rows {
                        writeln!(
                            w,
                            "{:<14} {:<22} {:>22.15e} {:>14} {:>10.2e}  {}",
                            r.pattern,
                            format!("{:?}", r.args),
                            r.quadrature,
                            r.closed,
                            r.abs_err,
                            if r.pass { "yes" } else { "NO" }
                        )?;
                    }
                    writeln!(
                        w,
                        "{} N={}: {} cases, {} failures, max |err| = {:.3e}",
                        report.group, report.n, report.cases, report.failures, report.max_abs_err
                    )?;
                }
            }
            w.flush()?;
            Ok(report.passed())
        }
        Command::ReduceTest { common, ks_max } => {
            let mut config = common.config();
            config.gates.ks_alias_max = ks_max;
            emit_mc(&common, &reduction_test(&config)?)
        }
        Command::TraceTest { common, kmax } => {
            let mut config = common.config();
            config.trace_k_max = kmax;
            emit_mc(&common, &trace_experiment(&config)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
