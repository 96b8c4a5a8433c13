//! Empirical CDFs, the two-sample Kolmogorov-Smirnov statistic, and
//! first/second-order stochastic dominance verdicts.
//!
//! ECDF comparisons use integer counts cross-multiplied by the other
//! sample's size, so FSD verdicts have no floating-point slack. The
//! second-order comparison uses the exact integral of each step function,
//! `n * G(x) = sum_i max(0, x - v_i)`, at every pooled support point; both
//! integrals are piecewise linear between support points, so checking the
//! points is sufficient.

use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::{sorted, PairedSample, StatsError};

/// Right-continuous step function `F(x) = #{v <= x} / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ecdf {
    /// Distinct sample values, ascending.
    pub support: Vec<f64>,
    /// `F` at each support point; the last entry is exactly 1.
    pub cumulative: Vec<f64>,
}

impl Ecdf {
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.support.partition_point(|&s| s <= x);
        if i == 0 {
            0.0
        } else {
            self.cumulative[i - 1]
        }
    }
}

pub fn ecdf(values: &[f64]) -> Result<Ecdf, StatsError> {
    if values.is_empty() {
        return Err(StatsError::Empty);
    }
    let v = sorted(values);
    let n = v.len();
    let mut support = Vec::new();
    let mut cumulative = Vec::new();
    for (i, &x) in v.iter().enumerate() {
        if i + 1 == n || v[i + 1] != x {
            support.push(x);
            cumulative.push((i + 1) as f64 / n as f64);
        }
    }
    Ok(Ecdf { support, cumulative })
}

fn pooled_support(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut p: Vec<f64> = a.iter().chain(b).copied().collect();
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

fn count_le(sorted: &[f64], x: f64) -> u64 {
    sorted.partition_point(|&v| v <= x) as u64
}

/// Asymptotic Kolmogorov upper tail `Q(lambda) = P(K > lambda)`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    use core::f64::consts::PI;
    if lambda <= 0.0 {
        return 1.0;
    }
    let p = if lambda < 1.18 {
        // Jacobi-transformed series, fast for small lambda
        let w = libm::sqrt(2.0 * PI) / lambda;
        let c = -PI * PI / (8.0 * lambda * lambda);
        let s: f64 = (1..=20)
            .map(|k| {
                let j = (2 * k - 1) as f64;
                libm::exp(c * j * j)
            })
            .sum();
        1.0 - w * s
    } else {
        let s: f64 = (1..=100)
            .map(|k| {
                let kf = k as f64;
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sign * libm::exp(-2.0 * kf * kf * lambda * lambda)
            })
            .sum();
        2.0 * s
    };
    p.clamp(0.0, 1.0)
}

/// Two-sample KS statistic `D = sup |F_a - F_b|` and its asymptotic p-value
/// with effective size `n_a n_b / (n_a + n_b)` and the usual small-sample
/// adjustment `lambda = (sqrt(en) + 0.12 + 0.11 / sqrt(en)) * D`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<(f64, f64), StatsError> {
    if a.is_empty() || b.is_empty() {
        return Err(StatsError::Empty);
    }
    let (sa, sb) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let gap = pooled_support(a, b)
        .into_iter()
        .map(|x| (count_le(&sa, x) * nb).abs_diff(count_le(&sb, x) * na))
        .max()
        .unwrap_or(0);
    let d = gap as f64 / (na * nb) as f64;
    let en = libm::sqrt((na * nb) as f64 / (na + nb) as f64);
    let lambda = (en + 0.12 + 0.11 / en) * d;
    Ok((d, kolmogorov_sf(lambda)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    ExpDominates,
    FtdDominates,
    None,
}

impl Dominance {
    fn from_pair(exp_wins: bool, ftd_wins: bool) -> Self {
        match (exp_wins, ftd_wins) {
            (true, false) => Dominance::ExpDominates,
            (false, true) => Dominance::FtdDominates,
            _ => Dominance::None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceVerdict {
    pub fsd: Dominance,
    pub ssd: Dominance,
    pub ks_statistic: f64,
    pub ks_p: f64,
}

/// `a` and `b` have different empirical distributions.
fn distributions_differ(sa: &[f64], sb: &[f64], support: &[f64]) -> bool {
    let (na, nb) = (sa.len() as u64, sb.len() as u64);
    support
        .iter()
        .any(|&x| count_le(sa, x) * nb != count_le(sb, x) * na)
}

/// `a` first-order dominates `b`: `F_a <= F_b` everywhere, strictly somewhere.
pub fn first_order_dominates(a: &[f64], b: &[f64]) -> bool {
    let (sa, sb) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as u64, b.len() as u64);
    let mut strict = false;
    for x in pooled_support(a, b) {
        let (fa, fb) = (count_le(&sa, x) * nb, count_le(&sb, x) * na);
        if fa > fb {
            return false;
        }
        strict |= fa < fb;
    }
    strict
}

fn shortfall_sum(sorted: &[f64], x: f64) -> f64 {
    sorted.iter().take_while(|&&v| v < x).map(|&v| x - v).sum()
}

/// `a` second-order dominates `b`: `int F_a <= int F_b` everywhere, with the
/// distributions differing.
pub fn second_order_dominates(a: &[f64], b: &[f64]) -> bool {
    let (sa, sb) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let support = pooled_support(a, b);
    let lo = support[0];
    let hi = support[support.len() - 1];
    let scale = na * nb * (hi - lo + hi.abs().max(lo.abs()) + 1.0);
    let tol = 1e-12 * scale;
    let below = support
        .iter()
        .all(|&x| shortfall_sum(&sa, x) * nb <= shortfall_sum(&sb, x) * na + tol);
    below && distributions_differ(&sa, &sb, &support)
}

fn require_two(s: &PairedSample) -> Result<(), StatsError> {
    s.require(2)
}

pub fn check_fsd(s: &PairedSample) -> Result<Dominance, StatsError> {
    require_two(s)?;
    let (e, f) = (s.exp_values(), s.ftd_values());
    Ok(Dominance::from_pair(first_order_dominates(e, f), first_order_dominates(f, e)))
}

pub fn check_ssd(s: &PairedSample) -> Result<Dominance, StatsError> {
    require_two(s)?;
    let (e, f) = (s.exp_values(), s.ftd_values());
    Ok(Dominance::from_pair(second_order_dominates(e, f), second_order_dominates(f, e)))
}

pub fn dominance_verdict(s: &PairedSample) -> Result<DominanceVerdict, StatsError> {
    let (ks_statistic, ks_p) = ks_two_sample(s.exp_values(), s.ftd_values())?;
    Ok(DominanceVerdict {
        fsd: check_fsd(s)?,
        ssd: check_ssd(s)?,
        ks_statistic,
        ks_p,
    })
}
