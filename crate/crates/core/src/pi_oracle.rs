//! Normalized trigonometric moments of kernel products,
//!
//! Π(a₁,…,a_m) = |I|^{-m} ∫_{I^m} Π_r f_{a_r}(x_r) K(x₁,x₂)K(x₂,x₃)⋯K(x_m,x₁) dx,
//!
//! with f_a = cos(a·) for the real families and f_a = e^{ia·} for the unitary
//! one. Two evaluators: exact quadrature and closed forms.

#![allow(clippy::int_plus_one)] // thresholds kept in their n − 1 form

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use serde::Serialize;

use crate::ensembles::{EnsembleSpec, GroupId, KernelFamily};
use crate::error::{Error, Result};
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq)]
pub struct PiArgs {
    pub spec: EnsembleSpec,
    pub args: Vec<i64>,
}

impl PiArgs {
    pub fn new(spec: EnsembleSpec, args: Vec<i64>) -> Result<Self> {
        if args.is_empty() || args.len() > 4 {
            return Err(Error::Arity(args.len()));
        }
        Ok(Self { spec, args })
    }
}

/// Π by a product midpoint rule. Every integrand is a trigonometric
/// polynomial, so with enough nodes the rule is exact. Each kernel is split
/// into its basis, reducing the m-fold integral to a trace of m small Gram
/// matrices G_a[p][q] = |I|⁻¹ ∫ conj(φ_p) f_a φ_q.
pub fn pi_quadrature(pa: &PiArgs) -> Result<f64> {
    if pa.args.is_empty() || pa.args.len() > 4 {
        return Err(Error::Arity(pa.args.len()));
    }
    let spec = &pa.spec;
    let n = spec.n;
    let kernel = spec.kernel_impl();
    let unitary = spec.kernel == KernelFamily::Exp;
    let span: i64 = pa.args.iter().map(|a| a.abs()).max().unwrap_or(0);
    // integrand frequency ≤ 2N + max|a| (in units of the interval's period)
    let m = 2 * n + span as usize + 4;
    let (a, b) = spec.interval;
    let xs: Vec<f64> = (0..m)
        .map(|j| a + (j as f64 + 0.5) * (b - a) / m as f64)
        .collect();
    let phi = DMatrix::from_fn(m, n, |i, j| kernel.basis(n, j, xs[i]));

    let gram = |freq: i64| {
        let w: Vec<Complex64> = xs
            .iter()
            .map(|&x| {
                if unitary {
                    Complex64::from_polar(1.0, freq as f64 * x)
                } else {
                    Complex64::new((freq as f64 * x).cos(), 0.0)
                }
            })
            .collect();
        DMatrix::from_fn(n, n, |p, q| {
            (0..m)
                .map(|i| phi[(i, p)].conj() * w[i] * phi[(i, q)])
                .sum::<Complex64>()
                / m as f64
        })
    };

    let mut prod = gram(pa.args[0]);
    for &arg in &pa.args[1..] {
        prod *= gram(arg);
    }
    Ok(prod.trace().re)
}

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn int(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

#[inline]
fn pos(x: i64) -> i64 {
    x.max(0)
}

#[inline]
fn ind(c: bool) -> i64 {
    c as i64
}

/// Unitary family: Π = 1{Σa = 0} (N − (max P − min P))⁺ over the partial
/// sums P_r = a₂ + ⋯ + a_r, P₁ = 0.
fn pi_closed_unitary(n: i64, args: &[i64]) -> Rational64 {
    if args.iter().sum::<i64>() != 0 {
        return int(0);
    }
    let mut p = 0;
    let (mut lo, mut hi) = (0, 0);
    for &a in &args[1..] {
        p += a;
        lo = lo.min(p);
        hi = hi.max(p);
    }
    int(pos(n - (hi - lo)))
}

struct RealFamily {
    family: KernelFamily,
    n: i64,
}

impl RealFamily {
    fn eps(&self, a: i64) -> i64 {
        let n = self.n;
        match self.family {
            KernelFamily::SinHalf => ind((1..=2 * n - 1).contains(&a) && a % 2 == 1),
            KernelFamily::Cos => ind((1..=2 * n - 2).contains(&a) && a % 2 == 0),
            _ => ind((1..=2 * n).contains(&a) && a % 2 == 0),
        }
    }

    fn alpha(&self, a: i64, b: i64, c: i64) -> i64 {
        let n = self.n;
        match self.family {
            KernelFamily::SinHalf => pos(a.min(n) + b.min(n) - c),
            KernelFamily::Cos => pos(a.min(n) + b.min(n) - c - 1),
            _ => pos((a - 1).min(n) + (b - 1).min(n) - c + 1),
        }
    }

    /// Sign of the one-point term: Π(k) = sign·ε(k)/2.
    fn sign(&self) -> i64 {
        if self.family == KernelFamily::Cos {
            1
        } else {
            -1
        }
    }

    fn pi2_diag(&self, k: i64) -> Rational64 {
        let n = self.n;
        match self.family {
            KernelFamily::SinHalf => rat(pos(2 * n - k), 4),
            KernelFamily::Cos => rat(pos(2 * n - k - 1), 4) + rat(ind(k <= n - 1), 2),
            _ => rat(pos(2 * n - k + 1), 4) - rat(ind(k <= n), 2),
        }
    }

    /// Closed form for one of the listed patterns, taken literally.
    fn pattern(&self, args: &[i64]) -> Option<Rational64> {
        let n = self.n;
        let s = self.sign();
        let e = |a| self.eps(a);
        let al = |a, b, c| self.alpha(a, b, c);
        let fam = self.family;
        let v = match *args {
            [0] | [0, 0] => int(n),
            [k] => rat(s * e(k), 2),
            [0, k] => rat(s * e(k), 2),
            [k, l] if k != l => rat(s * e(k + l), 2),
            [k, _] => self.pi2_diag(k),
            [0, k, l] if k == l => self.pi2_diag(k),
            [k, l, m] if l == m && k == 2 * l => match fam {
                KernelFamily::SinHalf => rat(pos(2 * n - k), 8),
                KernelFamily::Cos => rat(pos(2 * n - k), 8) + rat(3 * ind(k <= n - 1), 8),
                _ => rat(pos(2 * n - k), 8) - rat(3 * ind(k <= n), 8),
            },
            [k, l, m] if l == m && k > 0 => {
                rat(s * (3 * e(k + 2 * l) + e(k) * e((2 * l - k).abs())), 8)
            }
            [k, l, m] if m == k + l && k > 0 && l > 0 => {
                let base = rat(al(k + l, l, k + l) + al(k + l, k, k + l), 8);
                match fam {
                    KernelFamily::SinHalf => rat(pos(n - k - l), 4) + base,
                    KernelFamily::Cos => {
                        rat(pos(n - k - l - 1), 4)
                            + base
                            + rat(5 * ind(k + l <= n - 1), 8)
                            + rat(ind(k.max(l) <= n - 1), 4)
                    }
                    _ => rat(pos(n - k - l), 4) + base - rat(ind(k + l <= n), 8),
                }
            }
            [k, l, m, p] if k > 0 && k == l && l == m && m == p => match fam {
                KernelFamily::SinHalf => rat(pos(n - k), 4) + rat(pos(2 * n - k), 16),
                KernelFamily::Cos => {
                    rat(pos(2 * n - k - 1), 16)
                        + rat(pos(n - k), 4)
                        + rat(ind(k <= n - 1), 8)
                        + rat(ind(2 * k <= n - 1), 4)
                }
                _ => {
                    rat(pos(2 * n - k + 1), 16) + rat(pos(n - k), 4)
                        - rat(ind(k <= n), 8)
                        - rat(ind(2 * k <= n), 4)
                }
            },
            [k, k2, l, l2] if k > 0 && l > 0 && k == k2 && l == l2 && k != l => {
                let (mn, mx) = (k.min(l), k.max(l));
                let base = rat(al(mn, mx, mx), 16)
                    + rat(
                        al(k + l, l, k + l)
                            + al(k + l, k, k + l)
                            + al(l, l - k, l)
                            + al(k, k - l, k),
                        16,
                    );
                match fam {
                    KernelFamily::SinHalf => rat(pos(n - mx) + pos(n - k - l), 8) + base,
                    KernelFamily::Cos => {
                        let near = ind((k - l).abs() <= n - 1);
                        rat(pos(n - mx - 1) + pos(n - k - l - 1), 8)
                            + base
                            + rat(3 * ind(k + l <= n - 1), 8)
                            + rat(ind(mx <= n - 1), 4)
                            + rat(ind(k <= n - 1) * near + ind(l <= n - 1) * near, 8)
                    }
                    _ => rat(pos(n - mx) + pos(n - k - l), 8) + base - rat(ind(k + l <= n), 8),
                }
            }
            [k, l, k2, l2] if k > 0 && l > 0 && k == k2 && l == l2 && k != l => {
                let base =
                    rat(al(k + l, k.min(l), k + l), 4) + rat(al(k, k, k + l) + al(l, l, k + l), 8);
                match fam {
                    KernelFamily::SinHalf => rat(pos(n - k - l), 4) + base,
                    KernelFamily::Cos => {
                        rat(pos(n - k - l - 1), 4)
                            + base
                            + rat(ind(k + l <= n - 1), 2)
                            + rat(ind(k.max(l) <= n - 1), 2)
                    }
                    _ => rat(pos(n - k - l), 4) + base,
                }
            }
            _ => return None,
        };
        Some(v)
    }
}

/// Closed form as an exact rational. The argument list may be given in any
/// cyclic order or reversed (Π is invariant under both); for the real
/// families signs of arguments are ignored since Π is even in each.
pub fn pi_closed(pa: &PiArgs) -> Result<Rational64> {
    let arity = pa.args.len();
    if arity == 0 || arity > 4 {
        return Err(Error::Arity(arity));
    }
    let n = pa.spec.n as i64;
    if pa.spec.kernel == KernelFamily::Exp {
        return Ok(pi_closed_unitary(n, &pa.args));
    }
    let fam = RealFamily {
        family: pa.spec.kernel,
        n,
    };
    let abs: Vec<i64> = pa.args.iter().map(|a| a.abs()).collect();
    let mut candidates = Vec::with_capacity(2 * arity);
    for r in 0..arity {
        let mut rot = abs.clone();
        rot.rotate_left(r);
        candidates.push(rot.clone());
        rot.reverse();
        candidates.push(rot);
    }
    candidates
        .iter()
        .find_map(|c| fam.pattern(c))
        .ok_or_else(|| Error::Pattern(pa.args.clone()))
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// An evaluator of Π.
pub trait PiEvaluator: Send + Sync {
    fn name(&self) -> &'static str;
    fn eval(&self, pa: &PiArgs) -> Result<f64>;
}

pub struct Quadrature;
pub struct ClosedForm;

impl PiEvaluator for Quadrature {
    fn name(&self) -> &'static str {
        "quadrature"
    }
    fn eval(&self, pa: &PiArgs) -> Result<f64> {
        pi_quadrature(pa)
    }
}

impl PiEvaluator for ClosedForm {
    fn name(&self) -> &'static str {
        "closed"
    }
    fn eval(&self, pa: &PiArgs) -> Result<f64> {
        pi_closed(pa).map(rational_to_f64)
    }
}

static QUADRATURE: Quadrature = Quadrature;
static CLOSED: ClosedForm = ClosedForm;

pub fn pi_evaluators() -> &'static Registry<dyn PiEvaluator> {
    static REG: std::sync::OnceLock<Registry<dyn PiEvaluator>> = std::sync::OnceLock::new();
    REG.get_or_init(|| {
        Registry::<dyn PiEvaluator>::new("pi evaluator")
            .register("quadrature", &QUADRATURE)
            .register("closed", &CLOSED)
    })
}

/// The argument patterns checked for one kernel family, k, ℓ ∈ 1..=kmax.
pub fn check_patterns(family: KernelFamily, kmax: i64) -> Vec<(&'static str, Vec<i64>)> {
    let mut out: Vec<(&'static str, Vec<i64>)> = Vec::new();
    let ks = 1..=kmax;
    if family == KernelFamily::Exp {
        out.push(("(0)", vec![0]));
        for k in ks.clone() {
            out.push(("(k)", vec![k]));
            out.push(("(k,-k)", vec![k, -k]));
            out.push(("(0,k,-k)", vec![0, k, -k]));
            for l in ks.clone() {
                if k != l {
                    out.push(("(k,-l)", vec![k, -l]));
                    out.push(("(k,-k,l,-l)", vec![k, -k, l, -l]));
                    out.push(("(k,l,-k,-l)", vec![k, l, -k, -l]));
                }
                out.push(("(k,l,-k-l)", vec![k, l, -k - l]));
            }
        }
        return out;
    }
    out.push(("(0)", vec![0]));
    out.push(("(0,0)", vec![0, 0]));
    for k in ks.clone() {
        out.push(("(k)", vec![k]));
        out.push(("(0,k)", vec![0, k]));
        out.push(("(0,k,k)", vec![0, k, k]));
        out.push(("(k,k,k,k)", vec![k, k, k, k]));
        for l in ks.clone() {
            out.push(("(k,l)", vec![k, l]));
            out.push(("(k,l,l)", vec![k, l, l]));
            out.push(("(k,l,k+l)", vec![k, l, k + l]));
            if k != l {
                out.push(("(k,k,l,l)", vec![k, k, l, l]));
                out.push(("(k,l,k,l)", vec![k, l, k, l]));
            }
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct PiCheckRow {
    pub pattern: &'static str,
    pub args: Vec<i64>,
    pub quadrature: f64,
    pub closed: String,
    pub abs_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PiCheckReport {
    pub group: GroupId,
    pub n: usize,
    pub kmax: i64,
    pub tol: f64,
    pub cases: usize,
    pub failures: usize,
    pub max_abs_err: f64,
    pub rows: Vec<PiCheckRow>,
}

impl PiCheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Compare quadrature with the closed forms over every listed pattern.
pub fn pi_check(spec: &EnsembleSpec, kmax: i64, tol: f64) -> Result<PiCheckReport> {
    let mut rows = Vec::new();
    for (pattern, args) in check_patterns(spec.kernel, kmax) {
        let pa = PiArgs::new(*spec, args)?;
        let q = pi_quadrature(&pa)?;
        let c = pi_closed(&pa)?;
        let err = (q - rational_to_f64(c)).abs();
        rows.push(PiCheckRow {
            pattern,
            args: pa.args,
            quadrature: q,
            closed: c.to_string(),
            abs_err: err,
            pass: err < tol,
        });
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    let max_abs_err = rows.iter().map(|r| r.abs_err).fold(0.0, f64::max);
    Ok(PiCheckReport {
        group: spec.group,
        n: spec.n,
        kmax,
        tol,
        cases: rows.len(),
        failures,
        max_abs_err,
        rows,
    })
}
