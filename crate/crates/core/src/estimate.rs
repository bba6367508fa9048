use std::fmt;

/// Which estimator produced a [`PredictabilityEstimate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Entropy,
    Ber,
    Empirical,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Entropy => "entropy",
            Method::Ber => "ber",
            Method::Empirical => "empirical",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entropy" => Ok(Method::Entropy),
            "ber" => Ok(Method::Ber),
            "empirical" => Ok(Method::Empirical),
            other => Err(format!(
                "unknown method {other:?} (expected entropy, ber or empirical)"
            )),
        }
    }
}

/// Where an estimate came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct EstimateMeta {
    pub alphabet_size: usize,
    /// History window length; `None` for the entropy route, which uses the
    /// whole past.
    pub cutoff: Option<usize>,
    pub n: usize,
    pub seed: Option<u64>,
}

/// Predictability bounds and point estimate, all in `[0, 1]`, with
/// `lower <= point <= upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictabilityEstimate {
    pub lower: f64,
    pub upper: f64,
    pub point: f64,
    pub method: Method,
    pub meta: EstimateMeta,
}

impl PredictabilityEstimate {
    /// A single-valued estimate (`lower == point == upper`).
    pub fn exact(value: f64, method: Method, meta: EstimateMeta) -> Self {
        PredictabilityEstimate {
            lower: value,
            upper: value,
            point: value,
            method,
            meta,
        }
    }

    /// Bounds with the midpoint as the point estimate.
    pub fn from_bounds(lower: f64, upper: f64, method: Method, meta: EstimateMeta) -> Self {
        debug_assert!(lower <= upper, "lower {lower} > upper {upper}");
        PredictabilityEstimate {
            lower,
            upper,
            point: 0.5 * (lower + upper),
            method,
            meta,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }
}
