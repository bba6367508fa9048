//! Bayes-error route.
//!
//! Next-state prediction with a window of `r` past states is a classification
//! problem whose Bayes error rate `R` equals `1 - predictability`. The error
//! of the Bayes rule is estimated with the plug-in (majority class per
//! window) rule on the observed counts. For `M' >= 3` observed classes the
//! multiclass error is bracketed from the errors `R_i` of the `M' - 1`-class
//! sub-problems obtained by dropping class `i`:
//!
//! ```text
//! S     = sum_i (1 - p_i) R_i
//! lower = (M'-1) / ((M'-2) M') * S
//! upper = min over a in {0, 1} of (S + 1 - a) / (M' - 2a)
//! ```
//!
//! `upper` is additionally clipped to the trivial bound `1 - max_i p_i`.
//! With exactly two observed classes the plug-in error is used directly.

use crate::dataset::{build_counts, normalize, CountsTable, LabeledDataset};
use crate::error::{Error, Result};
use crate::estimate::{EstimateMeta, Method, PredictabilityEstimate};
use crate::series::StateId;

/// Bounds on the multiclass Bayes error rate.
#[derive(Clone, Debug, PartialEq)]
pub struct BerBounds {
    pub lower: f64,
    pub upper: f64,
    /// Error of each leave-one-class-out sub-problem.
    pub sub_bers: Vec<f64>,
    pub priors: Vec<f64>,
    /// Set when the raw lower bound exceeded the (clipped) upper bound and
    /// both were replaced by their midpoint.
    pub degenerate: bool,
}

/// In-sample error of the majority-class-per-window rule restricted to the
/// classes in `subset`.
pub fn plugin_ber(counts: &CountsTable, subset: &[StateId]) -> Result<f64> {
    let m = counts.alphabet_size();
    let mut member = vec![false; m];
    for c in subset {
        if c.index() >= m {
            return Err(Error::param(
                "class_subset",
                format!("class {c} is outside [0, {m})"),
            ));
        }
        member[c.index()] = true;
    }
    let classes: Vec<usize> = (0..m).filter(|&i| member[i]).collect();
    if classes.len() < 2 {
        return Err(Error::param(
            "class_subset",
            format!("need at least 2 classes, got {}", classes.len()),
        ));
    }
    let (mut errors, mut total) = (0u64, 0u64);
    for (_, row) in counts.rows() {
        let (mut sum, mut max) = (0u64, 0u64);
        for &k in &classes {
            sum += row[k];
            max = max.max(row[k]);
        }
        errors += sum - max;
        total += sum;
    }
    if total == 0 {
        return Err(Error::EmptySubset);
    }
    Ok(errors as f64 / total as f64)
}

/// Plug-in error of every sub-problem `classes \ {i}`, for each `i` in
/// `classes`, in one pass over the table.
///
/// Equivalent to calling [`plugin_ber`] once per dropped class.
pub fn leave_one_out_bers(counts: &CountsTable, classes: &[StateId]) -> Result<Vec<f64>> {
    let m = counts.alphabet_size();
    let mut sorted: Vec<usize> = classes.iter().map(|c| c.index()).collect();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != classes.len() {
        return Err(Error::param("classes", "duplicate class"));
    }
    if let Some(&bad) = sorted.iter().find(|&&c| c >= m) {
        return Err(Error::param(
            "classes",
            format!("class {bad} is outside [0, {m})"),
        ));
    }
    if classes.len() < 3 {
        return Err(Error::param(
            "classes",
            format!("need at least 3 classes, got {}", classes.len()),
        ));
    }
    let k = classes.len();
    let idx: Vec<usize> = classes.iter().map(|c| c.index()).collect();
    let mut errors = vec![0u64; k];
    let mut totals = vec![0u64; k];
    for (_, row) in counts.rows() {
        let mut sum = 0u64;
        // Largest and second largest counts (ties allowed), and where the
        // largest sits.
        let (mut top, mut second, mut arg) = (0u64, 0u64, usize::MAX);
        for (j, &c) in idx.iter().enumerate() {
            let v = row[c];
            sum += v;
            if arg == usize::MAX || v > top {
                second = top;
                top = v;
                arg = j;
            } else if v > second {
                second = v;
            }
        }
        for (j, &c) in idx.iter().enumerate() {
            let rest = sum - row[c];
            let best = if j == arg { second } else { top };
            errors[j] += rest - best;
            totals[j] += rest;
        }
    }
    errors
        .iter()
        .zip(&totals)
        .map(|(&e, &t)| {
            if t == 0 {
                Err(Error::EmptySubset)
            } else {
                Ok(e as f64 / t as f64)
            }
        })
        .collect()
}

/// Multiclass error bounds from class priors and leave-one-class-out
/// sub-problem errors. Needs at least three classes.
pub fn multiclass_ber_bounds(priors: &[f64], sub_bers: &[f64]) -> Result<BerBounds> {
    let m = priors.len();
    if m < 3 {
        return Err(Error::param(
            "priors",
            format!("multiclass bounds need M >= 3, got {m}"),
        ));
    }
    if sub_bers.len() != m {
        return Err(Error::param(
            "sub_bers",
            format!("expected {m} values, got {}", sub_bers.len()),
        ));
    }
    if priors.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(Error::param("priors", "entries must lie in [0, 1]"));
    }
    let sum: f64 = priors.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::param(
            "priors",
            format!("must sum to 1, sum is {sum}"),
        ));
    }
    if sub_bers.iter().any(|r| !(0.0..=1.0).contains(r)) {
        return Err(Error::param("sub_bers", "entries must lie in [0, 1]"));
    }

    let mf = m as f64;
    let s: f64 = priors
        .iter()
        .zip(sub_bers)
        .map(|(p, r)| (1.0 - p) * r)
        .sum();
    let lower = (mf - 1.0) / ((mf - 2.0) * mf) * s;
    let upper = [0.0f64, 1.0]
        .iter()
        .map(|&alpha| (s + 1.0 - alpha) / (mf - 2.0 * alpha))
        .fold(f64::INFINITY, f64::min);
    let max_prior = priors.iter().copied().fold(0.0, f64::max);
    let upper = upper.min(1.0 - max_prior);

    let (lower, upper, degenerate) = if lower > upper {
        let mid = 0.5 * (lower + upper);
        (mid, mid, true)
    } else {
        (lower, upper, false)
    };
    Ok(BerBounds {
        lower,
        upper,
        sub_bers: sub_bers.to_vec(),
        priors: priors.to_vec(),
        degenerate,
    })
}

/// Bayes-error bounds together with the predictability estimate derived from
/// them.
#[derive(Clone, Debug, PartialEq)]
pub struct BerAnalysis {
    pub bounds: BerBounds,
    pub estimate: PredictabilityEstimate,
}

/// Runs the Bayes-error route on `dataset`.
///
/// Classes that never occur are left out of the bounds (their prior and
/// sub-problem error are reported as zero). Fewer than two observed classes
/// is a [`Error::DegenerateDataset`]: the series is trivially predictable and
/// the caller decides what to report.
pub fn ber_analysis(dataset: &LabeledDataset) -> Result<BerAnalysis> {
    let counts = build_counts(dataset)?;
    let m = counts.alphabet_size();
    let priors = normalize(counts.class_totals(), counts.total());
    let observed = counts.observed_classes();

    let bounds = match observed.len() {
        0 | 1 => return Err(Error::DegenerateDataset),
        2 => {
            let r = plugin_ber(&counts, &observed)?;
            BerBounds {
                lower: r,
                upper: r,
                sub_bers: vec![0.0; m],
                priors: priors.clone(),
                degenerate: false,
            }
        }
        _ => {
            let sub = leave_one_out_bers(&counts, &observed)?;
            let obs_priors: Vec<f64> = observed.iter().map(|c| priors[c.index()]).collect();
            let b = multiclass_ber_bounds(&obs_priors, &sub)?;
            let mut sub_bers = vec![0.0; m];
            for (c, r) in observed.iter().zip(&sub) {
                sub_bers[c.index()] = *r;
            }
            BerBounds {
                sub_bers,
                priors: priors.clone(),
                ..b
            }
        }
    };

    let meta = EstimateMeta {
        alphabet_size: m,
        cutoff: Some(dataset.cutoff()),
        n: dataset.len() + dataset.cutoff(),
        seed: None,
    };
    let estimate = PredictabilityEstimate::from_bounds(
        1.0 - bounds.upper,
        1.0 - bounds.lower,
        Method::Ber,
        meta,
    );
    Ok(BerAnalysis { bounds, estimate })
}

pub fn ber_predictability(dataset: &LabeledDataset) -> Result<PredictabilityEstimate> {
    ber_analysis(dataset).map(|a| a.estimate)
}

/// In-sample accuracy of the majority class per window, i.e. one minus the
/// plug-in error over the full class set.
pub fn empirical_predictability(dataset: &LabeledDataset) -> Result<f64> {
    let counts = build_counts(dataset)?;
    let all: Vec<StateId> = (0..counts.alphabet_size() as u32).map(StateId).collect();
    Ok(1.0 - plugin_ber(&counts, &all)?)
}
