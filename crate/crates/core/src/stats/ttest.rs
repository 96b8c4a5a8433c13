use super::dist::student_t_sf;
use super::{all_equal, mean, sample_sd, Method, PairedSample, StatsError, TestResult};

/// One-tailed paired t-test, H1: mean(exp - ftd) > 0.
pub fn paired_t_one_tailed(s: &PairedSample) -> Result<TestResult, StatsError> {
    s.require(2)?;
    let diffs = s.diffs();
    if all_equal(diffs) {
        return Err(StatsError::Degenerate("zero variance in paired differences"));
    }
    let n = diffs.len() as f64;
    let t = mean(diffs) / (sample_sd(diffs) / libm::sqrt(n));
    let df = n - 1.0;
    Ok(TestResult {
        statistic: t,
        p_value: student_t_sf(t, df).clamp(0.0, 1.0),
        df: Some(df),
        method: Method::Exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn symmetric_diffs() {
        let s = PairedSample::from_diffs(vec![1.0, -1.0]).unwrap();
        let r = paired_t_one_tailed(&s).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 0.5);
        assert_eq!(r.df, Some(1.0));
    }

    #[test]
    fn degenerate_inputs() {
        let s = PairedSample::from_diffs(vec![0.5, 0.5, 0.5]).unwrap();
        assert!(matches!(paired_t_one_tailed(&s), Err(StatsError::Degenerate(_))));
        let s = PairedSample::from_diffs(vec![0.5]).unwrap();
        assert_eq!(
            paired_t_one_tailed(&s),
            Err(StatsError::InsufficientData { n: 1, required: 2 })
        );
    }

    #[test]
    fn three_year_column() {
        let s = PairedSample::from_diffs(vec![0.49, 0.04, 0.17, 0.63, 0.27, -0.09, 0.38]).unwrap();
        let r = paired_t_one_tailed(&s).unwrap();
        // scipy.stats.ttest_1samp(..., alternative="greater")
        assert!((r.statistic - 2.828_889_127_513_804_6).abs() < 1e-12);
        assert!((r.p_value - 0.015_000_763_456_910_624).abs() < 1e-12);
    }
}
