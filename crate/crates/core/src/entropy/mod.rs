//! Entropy-rate route: Lempel-Ziv entropy-rate estimate followed by
//! inversion of the Fano relation.

mod fano;
mod lz;

pub use fano::{binary_entropy, fano_rhs, fano_solve, FANO_TOLERANCE};
pub use lz::match_lengths;

use crate::error::{Error, Result};
use crate::estimate::{EstimateMeta, Method, PredictabilityEstimate};
use crate::series::Series;

/// Entropy-rate estimate in bits per symbol. Not clamped to `log2 M`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub bits_per_symbol: f64,
    pub n: usize,
}

/// Match-length entropy-rate estimate `n log2 n / sum(Λ_i)`.
pub fn lz_entropy_rate(series: &Series) -> Result<EntropyEstimate> {
    let n = series.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "entropy rate needs n >= 2, got {n}"
        )));
    }
    let total: u64 = match_lengths(series.states(), series.alphabet_size())
        .iter()
        .sum();
    let nf = n as f64;
    Ok(EntropyEstimate {
        bits_per_symbol: nf * nf.log2() / total as f64,
        n,
    })
}

/// Entropy-route predictability with the nominal alphabet size of the series.
pub fn entropy_predictability(series: &Series) -> Result<PredictabilityEstimate> {
    let h = lz_entropy_rate(series)?;
    let pi = fano_solve(h.bits_per_symbol, series.alphabet_size())?;
    let meta = EstimateMeta {
        alphabet_size: series.alphabet_size(),
        cutoff: None,
        n: series.len(),
        seed: None,
    };
    Ok(PredictabilityEstimate::exact(pi, Method::Entropy, meta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::StateId;

    #[test]
    fn needs_two_states() {
        let s = Series::from_indices(3, &[1]).unwrap();
        assert!(matches!(
            lz_entropy_rate(&s),
            Err(Error::InsufficientData(_))
        ));
        assert!(entropy_predictability(&s).is_err());
    }

    #[test]
    fn constant_series_has_near_zero_rate() {
        let s = Series::new(3, vec![StateId(2); 1 << 15]).unwrap();
        let h = lz_entropy_rate(&s).unwrap();
        assert!(h.bits_per_symbol <= 0.01, "{}", h.bits_per_symbol);
        let est = entropy_predictability(&s).unwrap();
        assert!(est.point >= 0.99);
        assert_eq!(est.lower, est.point);
        assert_eq!(est.upper, est.point);
        assert_eq!(est.method, Method::Entropy);
    }

    #[test]
    fn periodic_series_rate_decreases_with_length() {
        let abab = |n: usize| {
            Series::from_indices(2, &(0..n as u32).map(|i| i % 2).collect::<Vec<_>>()).unwrap()
        };
        let short = lz_entropy_rate(&abab(1 << 10)).unwrap().bits_per_symbol;
        let long = lz_entropy_rate(&abab(1 << 16)).unwrap().bits_per_symbol;
        assert!(long < short, "{long} !< {short}");
    }
}
