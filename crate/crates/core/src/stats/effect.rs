use serde::{Deserialize, Serialize};

use super::{all_equal, mean, sample_sd, PairedSample, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EffectLabel {
    Negligible,
    Meaningful,
    Substantial,
    Large,
}

impl EffectLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            EffectLabel::Negligible => "negligible",
            EffectLabel::Meaningful => "meaningful",
            EffectLabel::Substantial => "substantial",
            EffectLabel::Large => "large",
        }
    }
}

/// Small-sample correction applied to Cohen's d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HedgesVariant {
    /// `1 - 3 / (4(n - 1) - 1)`.
    #[default]
    Standard,
    /// `1 - 3 / (4n - 9)`, the factor behind the published comparison table.
    PaperCompat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub cohens_d: f64,
    pub hedges_g: f64,
    pub variant: HedgesVariant,
    pub label: EffectLabel,
}

/// Paired Cohen's d: mean of differences over their sample sd.
pub fn cohens_d(s: &PairedSample) -> Result<f64, StatsError> {
    s.require(2)?;
    if all_equal(s.diffs()) {
        return Err(StatsError::Degenerate("zero variance in paired differences"));
    }
    Ok(mean(s.diffs()) / sample_sd(s.diffs()))
}

pub fn hedges_g(d: f64, n: usize, variant: HedgesVariant) -> Result<f64, StatsError> {
    if n < 3 {
        return Err(StatsError::InsufficientData { n, required: 3 });
    }
    let n = n as f64;
    let denom = match variant {
        HedgesVariant::Standard => 4.0 * (n - 1.0) - 1.0,
        HedgesVariant::PaperCompat => 4.0 * n - 9.0,
    };
    if denom <= 0.0 {
        return Err(StatsError::InvalidParameter("Hedges correction denominator not positive"));
    }
    Ok(d * (1.0 - 3.0 / denom))
}

/// Thresholds 0.2 / 0.5 / 0.8 on |d|; a boundary value maps to the higher
/// class.
pub fn classify_effect(d: f64) -> EffectLabel {
    let a = d.abs();
    if a >= 0.8 {
        EffectLabel::Large
    } else if a >= 0.5 {
        EffectLabel::Substantial
    } else if a >= 0.2 {
        EffectLabel::Meaningful
    } else {
        EffectLabel::Negligible
    }
}

pub fn effect_size(s: &PairedSample, variant: HedgesVariant) -> Result<EffectSize, StatsError> {
    let d = cohens_d(s)?;
    Ok(EffectSize {
        cohens_d: d,
        hedges_g: hedges_g(d, s.n(), variant)?,
        variant,
        label: classify_effect(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn hedges_examples() {
        let g = hedges_g(1.071, 7, HedgesVariant::PaperCompat).unwrap();
        assert!((g - 1.071 * (1.0 - 3.0 / 19.0)).abs() < 1e-15);
        assert!((g - 0.902).abs() < 5e-4);
        let g = hedges_g(4.069, 4, HedgesVariant::PaperCompat).unwrap();
        assert!((g - 2.325).abs() < 5e-4);
        for v in [HedgesVariant::Standard, HedgesVariant::PaperCompat] {
            assert_eq!(hedges_g(0.0, 5, v).unwrap(), 0.0);
            assert!(hedges_g(1.0, 2, v).is_err());
        }
        assert_eq!(hedges_g(2.0, 3, HedgesVariant::Standard).unwrap(), 2.0 * (1.0 - 3.0 / 7.0));
        assert_eq!(hedges_g(2.0, 3, HedgesVariant::PaperCompat).unwrap(), 0.0);
    }

    #[test]
    fn g_never_exceeds_d() {
        for n in 3..60 {
            for v in [HedgesVariant::Standard, HedgesVariant::PaperCompat] {
                let g = hedges_g(-1.3, n, v).unwrap();
                assert!(g.abs() <= 1.3);
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(classify_effect(0.697), EffectLabel::Substantial);
        assert_eq!(classify_effect(0.19), EffectLabel::Negligible);
        assert_eq!(classify_effect(4.069), EffectLabel::Large);
        assert_eq!(classify_effect(0.2), EffectLabel::Meaningful);
        assert_eq!(classify_effect(0.5), EffectLabel::Substantial);
        assert_eq!(classify_effect(-0.8), EffectLabel::Large);
    }

    #[test]
    fn d_examples() {
        let s = PairedSample::from_diffs(vec![-1.0, 1.0]).unwrap();
        assert_eq!(cohens_d(&s).unwrap(), 0.0);
        let s = PairedSample::from_diffs(vec![1.0, 1.0]).unwrap();
        assert!(cohens_d(&s).is_err());
    }
}
