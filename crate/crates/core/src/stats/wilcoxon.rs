//! Wilcoxon signed-rank test, one-sided (median difference > 0).
//!
//! Zero differences are dropped; tied magnitudes share their average rank.
//! Ranks are carried doubled so that half-ranks stay integral, which lets
//! the exact null distribution be counted as integers.

use alloc::vec;
use alloc::vec::Vec;
use serde::{Deserialize, Serialize};

use super::dist::normal_sf;
use super::{Method, PairedSample, StatsError, TestResult};

/// Largest n for which exact enumeration is available.
pub const EXACT_MAX_N: usize = 25;
/// Largest n for which `Auto` chooses exact enumeration.
pub const AUTO_EXACT_MAX_N: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WilcoxonMode {
    /// Exact up to [`EXACT_MAX_N`], normal approximation beyond.
    Exact,
    NormalApprox,
    /// Exact up to [`AUTO_EXACT_MAX_N`].
    #[default]
    Auto,
}

/// Doubled average ranks of `|x|`, in input order.
pub fn doubled_ranks(xs: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].abs().total_cmp(&xs[b].abs()));
    let mut ranks = vec![0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]].abs() == xs[order[i]].abs() {
            j += 1;
        }
        // positions i..=j hold 1-based ranks i+1..=j+1; doubled average
        let r = (i + 1 + j + 1) as u64;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Number of sign assignments whose doubled positive rank sum is at least
/// `observed`, out of `2^ranks.len()`.
pub fn exact_upper_tail_count(ranks: &[u64], observed: u64) -> u64 {
    let total: u64 = ranks.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    let mut reach = 0usize;
    for &r in ranks {
        let r = r as usize;
        for s in (0..=reach).rev() {
            if counts[s] != 0 {
                counts[s + r] += counts[s];
            }
        }
        reach += r;
    }
    counts[(observed as usize).min(counts.len())..].iter().sum()
}

fn tie_term(xs: &[f64]) -> f64 {
    let mut mags: Vec<f64> = xs.iter().map(|x| x.abs()).collect();
    mags.sort_by(f64::total_cmp);
    mags.chunk_by(|a, b| a == b)
        .map(|g| {
            let t = g.len() as f64;
            t * t * t - t
        })
        .sum()
}

pub fn wilcoxon_signed_rank(s: &PairedSample, mode: WilcoxonMode) -> Result<TestResult, StatsError> {
    let nonzero: Vec<f64> = s.diffs().iter().copied().filter(|&x| x != 0.0).collect();
    if nonzero.is_empty() {
        return Err(StatsError::Degenerate("all paired differences are zero"));
    }
    let n = nonzero.len();
    let ranks = doubled_ranks(&nonzero);
    let w2: u64 = nonzero.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).map(|(_, r)| r).sum();
    let w_plus = w2 as f64 / 2.0;

    let exact = match mode {
        WilcoxonMode::Exact => n <= EXACT_MAX_N,
        WilcoxonMode::Auto => n <= AUTO_EXACT_MAX_N,
        WilcoxonMode::NormalApprox => false,
    };

    if exact {
        let count = exact_upper_tail_count(&ranks, w2);
        return Ok(TestResult {
            statistic: w_plus,
            p_value: count as f64 / (1u64 << n) as f64,
            df: None,
            method: Method::Exact,
        });
    }

    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term(&nonzero) / 48.0;
    let z = (w_plus - mean - 0.5) / libm::sqrt(var);
    Ok(TestResult {
        statistic: w_plus,
        p_value: normal_sf(z).clamp(0.0, 1.0),
        df: None,
        method: Method::NormalApprox,
    })
}
