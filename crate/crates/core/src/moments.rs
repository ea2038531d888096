//! Exact mean and variance of W₂²(μ_A, λ) for finite N.
//!
//! E W₂² = (2/N₀²) Σ_k (min(k,N₀) + η(k))/k² and
//! Var W₂² = (4/N₀⁴)[Σ_k T(k)/k⁴ + Σ_{k≠ℓ} (V(k,ℓ)+δ(k,ℓ))/(k²ℓ²)],
//! with integer tables η, T, V, δ depending on the kernel family.

#![allow(clippy::int_plus_one)] // thresholds kept in their n − 1 form

use serde::Serialize;

use crate::ensembles::{EnsembleSpec, GroupId, KernelFamily};
use crate::error::{Error, Result};
use crate::special::{harmonic_range, hurwitz_zeta, NeumaierSum};

#[inline]
fn pos(x: i64) -> i64 {
    x.max(0)
}

#[inline]
fn ind(c: bool) -> i64 {
    c as i64
}

/// The combinatorial tables for one kernel family and rank N.
#[derive(Debug, Clone, Copy)]
pub struct Tables {
    family: KernelFamily,
    n: i64,
}

impl Tables {
    pub fn new(spec: &EnsembleSpec) -> Self {
        Self {
            family: spec.kernel,
            n: spec.n as i64,
        }
    }

    /// Parity indicator ε(a) of the family (zero for the unitary case).
    pub fn eps(&self, a: i64) -> i64 {
        let n = self.n;
        match self.family {
            KernelFamily::Exp => 0,
            KernelFamily::SinHalf => ind((1..=2 * n - 1).contains(&a) && a % 2 == 1),
            KernelFamily::Cos => ind((1..=2 * n - 2).contains(&a) && a % 2 == 0),
            KernelFamily::Sin => ind((1..=2 * n).contains(&a) && a % 2 == 0),
        }
    }

    /// α(a, b, c); zero for the unitary case.
    pub fn alpha(&self, a: i64, b: i64, c: i64) -> i64 {
        let n = self.n;
        match self.family {
            KernelFamily::Exp => 0,
            KernelFamily::SinHalf => pos(a.min(n) + b.min(n) - c),
            KernelFamily::Cos => pos(a.min(n) + b.min(n) - c - 1),
            KernelFamily::Sin => pos((a - 1).min(n) + (b - 1).min(n) - c + 1),
        }
    }

    pub fn eta(&self, k: i64) -> i64 {
        let n = self.n;
        match self.family {
            KernelFamily::Exp => 0,
            KernelFamily::SinHalf => self.eps(k),
            KernelFamily::Cos => self.eps(k) + ind(k <= 2 * n - 1) - ind(k <= n - 1),
            KernelFamily::Sin => self.eps(k) + ind(k <= n) - ind(k <= 2 * n),
        }
    }

    pub fn big_t(&self, k: i64) -> i64 {
        let n = self.n;
        let e = |a| self.eps(a);
        match self.family {
            KernelFamily::Exp => (k * k).min(n * n) + (2 * k).min(n) - 2 * k.min(n),
            KernelFamily::SinHalf => {
                2 * (k * k).min(4 * n * n)
                    + 4 * e(k) * k.min(2 * n)
                    + 6 * (k.min(n) - k.min(2 * n))
                    + 4 * (e(3 * k) - e(k))
            }
            KernelFamily::Cos => {
                let small = ind(k <= n - 1);
                2 * ((k + 1) * (k + 1)).min(4 * n * n) + (6 + 2 * small) * pos(2 * n - k - 1)
                    - 6 * n * (1 + small)
                    - 4 * pos(n - k)
                    + 6 * small
                    + 4 * e(k) * ((k + 1).min(2 * n) - small)
                    + 4 * (e(3 * k) - e(k))
            }
            KernelFamily::Sin => {
                let small = ind(k <= n);
                2 * ((k - 1) * (k - 1)).min(4 * n * n) + (6 - 2 * small) * pos(2 * n - k + 1)
                    - 8 * pos(n - k)
                    - 8 * small
                    + 2 * ind(2 * k <= n)
                    + 4 * e(k) * ((k - 1).min(2 * n) + small)
                    - 6 * n * ind(k > n)
                    + 4 * (e(3 * k) - e(k))
            }
        }
    }

    /// The α-combination shared by the three real families.
    fn alpha_block(&self, k: i64, l: i64) -> i64 {
        let (mn, mx) = (k.min(l), k.max(l));
        let a = |x, y, z| self.alpha(x, y, z);
        4 * a(mn, mx, mx)
            + 4 * a(l, l - k, l)
            + 4 * a(k, k - l, k)
            + 4 * a(k + l, l, k + l)
            + 4 * a(k + l, k, k + l)
            - 8 * a(k + l, mn, k + l)
            - 4 * a(k, k, k + l)
            - 4 * a(l, l, k + l)
    }

    /// V(k, ℓ) for k ≠ ℓ (not checked).
    pub fn big_v_unchecked(&self, k: i64, l: i64) -> i64 {
        let n = self.n;
        let (mn, mx) = (k.min(l), k.max(l));
        let d = (k - l).abs();
        match self.family {
            KernelFamily::Exp => 2 * pos(n - mx) - pos(n - k - l) - pos(n - d),
            KernelFamily::SinHalf => {
                8 * pos(n - mx) - 2 * pos(2 * n - d) - 2 * pos(2 * n - k - l)
                    + self.alpha_block(k, l)
            }
            KernelFamily::Cos => {
                8 * pos(n - mx - 1) - 2 * pos(2 * n - d - 1) - 2 * pos(2 * n - k - l - 1)
                    + self.alpha_block(k, l)
                    - ind(k + l <= n - 1)
                    + 16 * ind(mx <= n - 1)
                    + ind(d <= n - 1)
                        * (-3 + 16 * ind(mn <= n - 1) - 6 * ind(k <= n - 1) - 6 * ind(l <= n - 1))
                    - 4 * ind((2 * k - l).abs() + l <= 2 * n - 2)
                    - 4 * ind((2 * l - k).abs() + k <= 2 * n - 2)
            }
            KernelFamily::Sin => {
                8 * pos(n - mx) - 2 * pos(2 * n - d + 1) - 2 * pos(2 * n - k - l + 1)
                    + self.alpha_block(k, l)
                    + ind(k + l <= n)
                    + 3 * ind(d <= n)
                    + 4 * ind((2 * k - l).abs() + l <= 2 * n)
                    + 4 * ind((2 * l - k).abs() + k <= 2 * n)
                    - 2 * ind(d <= n) * (ind(k <= n) + ind(l <= n))
            }
        }
    }

    /// δ(k, ℓ) for k ≠ ℓ (not checked).
    pub fn delta_unchecked(&self, k: i64, l: i64) -> i64 {
        let e = |a| self.eps(a);
        let (mn, mx) = (k.min(l), k.max(l));
        let d = (k - l).abs();
        match self.family {
            KernelFamily::Exp => 0,
            KernelFamily::SinHalf => {
                2 * (e(l) * e((2 * k - l).abs()) - e(2 * k + l))
                    + 2 * (e(k) * e((2 * l - k).abs()) - e(2 * l + k))
                    + 2 * (e(d) - e(k + l))
                    + 4 * e(l) * e((2 * k - l).abs())
                    + 4 * e(2 * k + l)
                    + 4 * e(k) * e((2 * l - k).abs())
                    + 4 * e(2 * l + k)
                    - 8 * e(2 * mx - mn)
                    - 8 * e(mx)
            }
            KernelFamily::Cos | KernelFamily::Sin => {
                let pair = if self.family == KernelFamily::Cos {
                    4 * e(k) * e(l) * (1 - e(k + l))
                } else {
                    4 * e(k) * e(l) * (e(k + l) - 1)
                };
                pair + 2 * (e(d) - e(k + l))
                    + ind(l != 2 * k)
                        * (6 * e(l) * e((2 * k - l).abs()) + 2 * e(2 * k + l) - 8 * e(d + k))
                    + ind(k != 2 * l)
                        * (6 * e(k) * e((2 * l - k).abs()) + 2 * e(2 * l + k) - 8 * e(d + l))
            }
        }
    }

    /// V + δ, the off-diagonal weight.
    pub fn weight(&self, k: i64, l: i64) -> i64 {
        self.big_v_unchecked(k, l) + self.delta_unchecked(k, l)
    }
}

fn check_index(k: i64) -> Result<()> {
    if k < 1 {
        Err(Error::Domain(format!("table index {k} must be ≥ 1")))
    } else {
        Ok(())
    }
}

fn check_pair(k: i64, l: i64) -> Result<()> {
    check_index(k)?;
    check_index(l)?;
    if k == l {
        return Err(Error::Domain(format!("V/δ need k ≠ ℓ, got {k} = {l}")));
    }
    Ok(())
}

pub fn eta(spec: &EnsembleSpec, k: i64) -> Result<i64> {
    check_index(k)?;
    Ok(Tables::new(spec).eta(k))
}

pub fn big_t(spec: &EnsembleSpec, k: i64) -> Result<i64> {
    check_index(k)?;
    Ok(Tables::new(spec).big_t(k))
}

pub fn big_v(spec: &EnsembleSpec, k: i64, l: i64) -> Result<i64> {
    check_pair(k, l)?;
    Ok(Tables::new(spec).big_v_unchecked(k, l))
}

pub fn delta(spec: &EnsembleSpec, k: i64, l: i64) -> Result<i64> {
    check_pair(k, l)?;
    Ok(Tables::new(spec).delta_unchecked(k, l))
}

/// Cut-off beyond which every table is constant along rows and diagonals.
fn cutoff(spec: &EnsembleSpec) -> i64 {
    4 * spec.n0 as i64 + 8
}

/// Off-diagonal weights vanish once |k − ℓ| reaches this width.
pub fn strip_width(spec: &EnsembleSpec) -> i64 {
    2 * spec.n0 as i64 + 2
}

fn check_tol(tol: f64, bound: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    if bound > tol {
        return Err(Error::Truncation {
            requested: tol,
            achieved: bound,
        });
    }
    Ok(())
}

fn constancy(what: &str, values: [i64; 3]) -> Result<i64> {
    if values[0] == values[1] && values[1] == values[2] {
        Ok(values[0])
    } else {
        Err(Error::Domain(format!(
            "{what} not constant past the cut-off: {values:?}"
        )))
    }
}

/// Exact E W₂² with an absolute error bound.
pub fn exact_mean(spec: &EnsembleSpec, tol: f64) -> Result<(f64, f64)> {
    let t = Tables::new(spec);
    let n0 = spec.n0 as i64;
    let kc = cutoff(spec);
    constancy("η", [t.eta(kc + 1), t.eta(kc + 2), t.eta(2 * kc)])?;
    let tail_coeff = n0 + t.eta(kc + 1);

    let mut sum = NeumaierSum::new();
    let mut abs = 0.0;
    for k in 1..=kc {
        let term = (k.min(n0) + t.eta(k)) as f64 / (k * k) as f64;
        sum.add(term);
        abs += term.abs();
    }
    let (z, zb) = hurwitz_zeta(2, (kc + 1) as f64);
    sum.add(tail_coeff as f64 * z);
    abs += (tail_coeff as f64 * z).abs();

    let scale = 2.0 / (n0 * n0) as f64;
    let value = scale * sum.value();
    let err = scale * (4.0 * f64::EPSILON * abs + tail_coeff.abs() as f64 * zb);
    check_tol(tol, err)?;
    Ok((value, err))
}

/// Σ_{k>K} 1/(k²(k+d)²) by partial fractions, with an error bound.
fn diagonal_tail(d: i64, k: i64) -> (f64, f64) {
    let df = d as f64;
    let (z1, b1) = hurwitz_zeta(2, (k + 1) as f64);
    let (z2, b2) = hurwitz_zeta(2, (k + d + 1) as f64);
    let h = harmonic_range(k as u64, (k + d) as u64);
    let v = (z1 + z2 - 2.0 * h / df) / (df * df);
    let round = 8.0 * f64::EPSILON * (z1 + z2 + 2.0 * h / df) / (df * df);
    (v, round + (b1 + b2) / (df * df))
}

/// Exact Var W₂² with an absolute error bound.
pub fn exact_variance(spec: &EnsembleSpec, tol: f64) -> Result<(f64, f64)> {
    let t = Tables::new(spec);
    let n0 = spec.n0 as f64;
    let kc = cutoff(spec);

    let mut sum = NeumaierSum::new();
    let mut abs = 0.0;
    let mut tail_err = 0.0;

    for k in 1..=kc {
        let kf = k as f64;
        let term = t.big_t(k) as f64 / (kf * kf * kf * kf);
        sum.add(term);
        abs += term.abs();
    }
    let t_inf = constancy("T", [t.big_t(kc + 1), t.big_t(kc + 2), t.big_t(2 * kc)])?;
    if t_inf != 0 {
        let (z, zb) = hurwitz_zeta(4, (kc + 1) as f64);
        sum.add(t_inf as f64 * z);
        abs += (t_inf as f64 * z).abs();
        tail_err += (t_inf as f64).abs() * zb;
    }

    // Off-diagonal pairs grouped by d = |k − ℓ|; both orders are summed.
    for d in 1..strip_width(spec) {
        let w = |k: i64| t.weight(k, k + d) + t.weight(k + d, k);
        for k in 1..=kc {
            let c = w(k);
            if c != 0 {
                let kf = k as f64;
                let lf = (k + d) as f64;
                let term = c as f64 / (kf * kf * lf * lf);
                sum.add(term);
                abs += term.abs();
            }
        }
        let c_inf = constancy("V+δ", [w(kc + 1), w(kc + 2), w(2 * kc)])?;
        if c_inf != 0 {
            let (s, sb) = diagonal_tail(d, kc);
            sum.add(c_inf as f64 * s);
            abs += (c_inf as f64 * s).abs();
            tail_err += (c_inf as f64).abs() * sb;
        }
    }

    let scale = 4.0 / (n0 * n0 * n0 * n0);
    let raw = sum.value();
    let err = scale * (4.0 * f64::EPSILON * abs + tail_err);
    check_tol(tol, err)?;
    // the variance is nonnegative; clip rounding noise at the degenerate N = 1
    let value = if raw.abs() * scale <= err {
        raw.max(0.0) * scale
    } else {
        raw * scale
    };
    Ok((value, err))
}

/// Leading-order (mean, variance): ((2 log N₀ + c_G)/N₀², σ_G/N₀⁴).
pub fn asymptotic_moments(spec: &EnsembleSpec) -> (f64, f64) {
    let n0 = spec.n0 as f64;
    (
        (2.0 * n0.ln() + spec.c_g()) / (n0 * n0),
        spec.sigma_g() / (n0 * n0 * n0 * n0),
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub group: GroupId,
    pub n: usize,
    pub n0: usize,
    pub mean_exact: f64,
    pub mean_err: f64,
    pub var_exact: f64,
    pub var_err: f64,
    pub mean_asymptotic: f64,
    pub var_asymptotic: f64,
}

pub fn moment_report(spec: &EnsembleSpec, tol: f64) -> Result<MomentReport> {
    let (mean_exact, mean_err) = exact_mean(spec, tol)?;
    let (var_exact, var_err) = exact_variance(spec, tol)?;
    let (mean_asymptotic, var_asymptotic) = asymptotic_moments(spec);
    Ok(MomentReport {
        group: spec.group,
        n: spec.n,
        n0: spec.n0,
        mean_exact,
        mean_err,
        var_exact,
        var_err,
        mean_asymptotic,
        var_asymptotic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{ensemble_spec, EULER_GAMMA, ZETA3};
    use std::f64::consts::PI;

    const TOL: f64 = 1e-10;
    const REAL: [GroupId; 3] = [GroupId::SoOdd, GroupId::SoEven, GroupId::Usp];

    fn spec(g: GroupId, n: usize) -> EnsembleSpec {
        ensemble_spec(g, n).unwrap()
    }

    #[test]
    fn table_spot_values() {
        let u3 = spec(GroupId::U, 3);
        assert_eq!(big_t(&u3, 1).unwrap(), 1);
        assert_eq!(big_v(&u3, 2, 4).unwrap(), -1);
        let so2 = spec(GroupId::SoOdd, 2);
        assert_eq!(
            [
                eta(&so2, 1).unwrap(),
                eta(&so2, 2).unwrap(),
                eta(&so2, 5).unwrap()
            ],
            [1, 0, 0]
        );
        let u1 = spec(GroupId::U, 1);
        assert!((1..500).all(|k| big_t(&u1, k).unwrap() == 0));
        assert!(big_v(&u3, 2, 2).is_err());
        assert!(delta(&u3, 0, 2).is_err());
        assert!(eta(&u3, 0).is_err());
    }

    #[test]
    fn unitary_tables_vanish_where_expected() {
        for n in 1..=12 {
            let s = spec(GroupId::U, n);
            let n = n as i64;
            for k in 1..60 {
                assert_eq!(eta(&s, k).unwrap(), 0);
                for l in 1..60 {
                    if k == l {
                        continue;
                    }
                    assert_eq!(delta(&s, k, l).unwrap(), 0);
                    if k + l <= n || (k.min(l) >= n && (k - l).abs() >= n) {
                        assert_eq!(big_v(&s, k, l).unwrap(), 0, "N={n} ({k},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn symmetry_of_v_and_delta() {
        for g in [GroupId::U, GroupId::SoOdd, GroupId::SoEven, GroupId::Usp] {
            for n in 1..=16 {
                let t = Tables::new(&spec(g, n));
                for k in 1..=200 {
                    for l in (k + 1)..=200 {
                        assert_eq!(
                            t.big_v_unchecked(k, l),
                            t.big_v_unchecked(l, k),
                            "{g} N={n} V({k},{l})"
                        );
                        assert_eq!(
                            t.delta_unchecked(k, l),
                            t.delta_unchecked(l, k),
                            "{g} N={n} δ({k},{l})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn so_odd_support_regions() {
        for n in 1..=12i64 {
            let t = Tables::new(&spec(GroupId::SoOdd, n as usize));
            for k in 1..=80 {
                for l in 1..=80 {
                    if k == l {
                        continue;
                    }
                    if k + l <= n {
                        assert_eq!(t.delta_unchecked(k, l), 0);
                    }
                    if k + l <= 2 * n || l >= 2 * n + k || k >= 2 * n + l {
                        assert_eq!(t.big_v_unchecked(k, l), 0, "N={n} ({k},{l})");
                    }
                }
            }
        }
    }

    #[test]
    fn weights_vanish_outside_strip_and_settle_past_cutoff() {
        for g in [GroupId::U, GroupId::SoOdd, GroupId::SoEven, GroupId::Usp] {
            for n in 1..=10 {
                let s = spec(g, n);
                let t = Tables::new(&s);
                let w = strip_width(&s);
                let kc = cutoff(&s);
                for k in 1..=3 * kc {
                    for d in w..w + 40 {
                        assert_eq!(t.weight(k, k + d), 0, "{g} N={n} k={k} d={d}");
                        assert_eq!(t.weight(k + d, k), 0);
                    }
                }
                for d in 1..w {
                    let c = t.weight(kc + 1, kc + 1 + d);
                    assert!((kc + 1..3 * kc).all(|k| t.weight(k, k + d) == c));
                }
                let tc = t.big_t(kc + 1);
                assert!((kc + 1..3 * kc).all(|k| t.big_t(k) == tc));
                assert!((kc + 1..3 * kc).all(|k| t.eta(k) == 0));
            }
        }
    }

    #[test]
    fn t_limits() {
        for n in 1..=10i64 {
            let big = 1000;
            assert_eq!(
                Tables::new(&spec(GroupId::U, n as usize)).big_t(big),
                n * n - n
            );
            for g in REAL {
                assert_eq!(
                    Tables::new(&spec(g, n as usize)).big_t(big),
                    8 * n * n - 6 * n,
                    "{g}"
                );
            }
        }
    }

    #[test]
    fn degenerate_unitary() {
        let s = spec(GroupId::U, 1);
        let (m, _) = exact_mean(&s, TOL).unwrap();
        assert!((m - PI * PI / 3.0).abs() < 1e-14);
        assert_eq!(exact_variance(&s, TOL).unwrap().0, 0.0);
    }

    #[test]
    fn symbolic_spot_values() {
        // Σ_{k≥1}(min(k,2))/k² = 1 + 2(ζ(2) − 1); halved by 2/N₀² = 1/2
        let s = spec(GroupId::U, 2);
        let (m, me) = exact_mean(&s, TOL).unwrap();
        assert!((m - (PI * PI / 6.0 - 0.5)).abs() < 1e-12);
        assert!(me < 1e-14);
        // T ≡ 2 for k ≥ 2, T(1) = 1: ΣT/k⁴ = 2ζ(4) − 1; V(k,k±1) = −1:
        // Σ_{k≠ℓ} V/(k²ℓ²) = −2Σ 1/(k²(k+1)²) = 6 − 2π²/3; times 4/16
        let (v, ve) = exact_variance(&s, TOL).unwrap();
        let want = PI.powi(4) / 180.0 + 1.25 - PI * PI / 6.0;
        assert!((v - want).abs() < 1e-12, "{v} vs {want}");
        assert!(ve < 1e-13);

        let so = spec(GroupId::SoOdd, 1);
        assert!((exact_mean(&so, TOL).unwrap().0 - PI * PI / 6.0).abs() < 1e-14);
    }

    #[test]
    fn mean_matches_brute_force() {
        // direct partial sums to 10⁶ plus the integral tail N₀/K
        for g in [GroupId::U, GroupId::SoOdd, GroupId::SoEven, GroupId::Usp] {
            for n in [1usize, 3, 8] {
                let s = spec(g, n);
                let t = Tables::new(&s);
                let n0 = s.n0 as i64;
                let kk = 1_000_000i64;
                let raw: NeumaierSum = (1..=kk)
                    .map(|k| (k.min(n0) + t.eta(k)) as f64 / (k as f64 * k as f64))
                    .collect();
                let brute = 2.0 / (n0 * n0) as f64 * (raw.value() + n0 as f64 / (kk as f64 + 0.5));
                let (m, _) = exact_mean(&s, TOL).unwrap();
                assert!((m - brute).abs() < 1e-12, "{g} N={n}: {m} vs {brute}");
            }
        }
    }

    #[test]
    fn variance_matches_brute_force_double_sum() {
        // full square k, ℓ ≤ L; neglected region contributes O(N/L³)
        let l_max = 3000i64;
        for g in [GroupId::U, GroupId::SoOdd, GroupId::SoEven, GroupId::Usp] {
            for n in [2usize, 5] {
                let s = spec(g, n);
                let t = Tables::new(&s);
                let n0 = s.n0 as f64;
                let mut acc = NeumaierSum::new();
                for k in 1..=l_max {
                    let kf = k as f64;
                    acc.add(t.big_t(k) as f64 / kf.powi(4));
                    for l in (k + 1)..=(k + strip_width(&s)).min(l_max) {
                        let lf = l as f64;
                        acc.add((t.weight(k, l) + t.weight(l, k)) as f64 / (kf * kf * lf * lf));
                    }
                }
                let brute = 4.0 / n0.powi(4) * acc.value();
                let (v, _) = exact_variance(&s, TOL).unwrap();
                assert!(
                    (v - brute).abs() < 1e-8 * v.max(1e-3),
                    "{g} N={n}: {v} vs {brute}"
                );
            }
        }
    }

    #[test]
    fn moments_are_positive() {
        for g in GroupId::ALL {
            for n in 1..=20 {
                let r = moment_report(&spec(g, n), TOL).unwrap();
                assert!(r.mean_exact > 0.0);
                assert!(r.var_exact >= 0.0);
                assert!(r.mean_err <= TOL && r.var_err <= TOL);
            }
        }
    }

    #[test]
    fn asymptotic_examples() {
        let (m, _) = asymptotic_moments(&spec(GroupId::U, 10));
        assert!((m - (2.0 * 10f64.ln() + 2.0 * EULER_GAMMA + 2.0) / 100.0).abs() < 1e-16);
        let (_, v) = asymptotic_moments(&spec(GroupId::SoOdd, 5));
        assert!((v - (4.0 * PI * PI / 3.0 + 14.0 * ZETA3) / 1e4).abs() < 1e-18);
        assert_eq!(
            asymptotic_moments(&spec(GroupId::Usp, 7)),
            asymptotic_moments(&spec(GroupId::OMinus, 7))
        );
    }

    #[test]
    fn unreachable_tolerance_is_reported() {
        match exact_mean(&spec(GroupId::U, 4), 1e-30) {
            Err(Error::Truncation { achieved, .. }) => assert!(achieved > 1e-30),
            other => panic!("expected truncation error, got {other:?}"),
        }
        assert!(exact_variance(&spec(GroupId::U, 4), -1.0).is_err());
    }

    #[test]
    fn report_json_fields() {
        let v = serde_json::to_value(moment_report(&spec(GroupId::Su, 3), TOL).unwrap()).unwrap();
        for key in [
            "group",
            "n",
            "n0",
            "mean_exact",
            "mean_err",
            "var_exact",
            "var_err",
            "mean_asymptotic",
            "var_asymptotic",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["group"], "su");
    }
}
