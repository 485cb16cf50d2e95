use serde::Serialize;

use crate::error::{Error, Result};
use crate::hv::{rank_score, Codebook, HyperVector, Metric};

/// Cosine score below which a clean-up reports no match.
pub const DEFAULT_CLEANUP_THRESHOLD: f64 = 0.25;

/// Nearest-item lookup over a codebook.
#[derive(Clone, Debug)]
pub struct CleanupMemory {
    pub codebook: Codebook,
    pub metric: Metric,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CleanupMatch {
    /// Best stored item, `None` when its score is below the threshold.
    pub symbol: Option<String>,
    /// Best stored item regardless of threshold.
    pub nearest: String,
    pub index: usize,
    pub score: f64,
}

impl CleanupMemory {
    pub fn new(codebook: Codebook) -> Self {
        CleanupMemory {
            codebook,
            metric: Metric::Cosine,
            threshold: DEFAULT_CLEANUP_THRESHOLD,
        }
    }

    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self
    }

    /// Scores against every item in codebook order.
    pub fn scores(&self, v: &HyperVector) -> Result<Vec<f64>> {
        if self.codebook.is_empty() {
            return Err(Error::InvalidMemory(format!(
                "clean-up codebook {:?} is empty",
                self.codebook.name()
            )));
        }
        self.codebook
            .vectors()
            .iter()
            .map(|item| rank_score(v, item, self.metric))
            .collect()
    }

    /// Best item; ties resolve to the earlier item.
    pub fn cleanup(&self, v: &HyperVector) -> Result<CleanupMatch> {
        let scores = self.scores(v)?;
        let mut best = 0;
        for (i, s) in scores.iter().enumerate() {
            if *s > scores[best] {
                best = i;
            }
        }
        let nearest = self.codebook.symbols()[best].clone();
        let score = scores[best];
        Ok(CleanupMatch {
            symbol: (score >= self.threshold).then(|| nearest.clone()),
            nearest,
            index: best,
            score,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hv::{inject_noise, random_hv, Repr};

    #[test]
    fn snaps_noisy_item() {
        let cb = Codebook::with_symbols("cm", 1, 2000, Repr::Binary, ["a", "b", "c"]).unwrap();
        let mem = CleanupMemory::new(cb.clone());
        let noisy = inject_noise(cb.get("b").unwrap(), 0.2, 3).unwrap();
        let m = mem.cleanup(&noisy).unwrap();
        assert_eq!(m.symbol.as_deref(), Some("b"));
        let far = random_hv("x", "y", 0, 2000, Repr::Binary).unwrap();
        assert_eq!(mem.cleanup(&far).unwrap().symbol, None);
    }

    #[test]
    fn empty_memory_errors() {
        let cb = Codebook::new("cm", 1, 64, Repr::Binary).unwrap();
        let v = random_hv("x", "y", 0, 64, Repr::Binary).unwrap();
        assert!(matches!(CleanupMemory::new(cb).cleanup(&v), Err(Error::InvalidMemory(_))));
    }
}
