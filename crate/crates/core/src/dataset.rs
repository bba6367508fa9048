//! The classification view of a series.
//!
//! Each position `t >= r` of a series becomes one sample whose feature is the
//! window of the `r` preceding states and whose class is the state at `t`.
//! The first `r` states only ever appear inside features.

use std::borrow::Borrow;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::series::{Series, StateId};

/// The `r` states preceding a predicted state, oldest first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureWindow(Box<[StateId]>);

impl FeatureWindow {
    pub fn new(states: impl Into<Box<[StateId]>>) -> Self {
        FeatureWindow(states.into())
    }

    pub fn from_indices(states: &[u32]) -> Self {
        FeatureWindow(states.iter().copied().map(StateId).collect())
    }

    pub fn states(&self) -> &[StateId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Borrow<[StateId]> for FeatureWindow {
    fn borrow(&self) -> &[StateId] {
        &self.0
    }
}

/// `(feature window, class)` samples sharing one cutoff `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledDataset {
    alphabet_size: usize,
    cutoff: usize,
    // Windows are stored back to back, `cutoff` states each.
    windows: Vec<StateId>,
    classes: Vec<StateId>,
}

impl LabeledDataset {
    /// Builds a dataset from explicit samples. Every window must have length
    /// `cutoff` and every state must lie in `[0, alphabet_size)`.
    pub fn from_samples<I>(alphabet_size: usize, cutoff: usize, samples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FeatureWindow, StateId)>,
    {
        if alphabet_size < 2 {
            return Err(Error::param(
                "M",
                format!("alphabet size must be >= 2, got {alphabet_size}"),
            ));
        }
        if cutoff < 1 {
            return Err(Error::param("r", "cutoff must be >= 1"));
        }
        let mut windows = Vec::new();
        let mut classes = Vec::new();
        for (i, (feature, class)) in samples.into_iter().enumerate() {
            if feature.len() != cutoff {
                return Err(Error::param(
                    "samples",
                    format!(
                        "sample {i} has a window of length {}, expected {cutoff}",
                        feature.len()
                    ),
                ));
            }
            if class.index() >= alphabet_size
                || feature.states().iter().any(|s| s.index() >= alphabet_size)
            {
                return Err(Error::param(
                    "samples",
                    format!("sample {i} has a state outside [0, {alphabet_size})"),
                ));
            }
            windows.extend_from_slice(feature.states());
            classes.push(class);
        }
        Ok(LabeledDataset {
            alphabet_size,
            cutoff,
            windows,
            classes,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[StateId] {
        &self.classes
    }

    /// Samples in order, as `(window, class)`.
    pub fn samples(&self) -> impl ExactSizeIterator<Item = (&[StateId], StateId)> + '_ {
        self.windows
            .chunks_exact(self.cutoff)
            .zip(self.classes.iter().copied())
    }
}

/// Extracts the `n - r` samples of `series` with cutoff `r`.
pub fn extract_features(series: &Series, r: usize) -> Result<LabeledDataset> {
    let n = series.len();
    if r < 1 || r >= n {
        return Err(Error::InvalidCutoff { r, n });
    }
    let states = series.states();
    let count = n - r;
    let mut windows = Vec::with_capacity(count * r);
    for i in 0..count {
        windows.extend_from_slice(&states[i..i + r]);
    }
    Ok(LabeledDataset {
        alphabet_size: series.alphabet_size(),
        cutoff: r,
        windows,
        classes: states[r..].to_vec(),
    })
}

/// Per-feature class counts: the sufficient statistic for every plug-in
/// estimate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountsTable {
    alphabet_size: usize,
    entries: HashMap<FeatureWindow, Vec<u64>>,
    class_totals: Vec<u64>,
    total: u64,
}

impl CountsTable {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Number of ingested samples.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Number of distinct feature windows.
    pub fn num_features(&self) -> usize {
        self.entries.len()
    }

    /// Count of samples per class, summed over features.
    pub fn class_totals(&self) -> &[u64] {
        &self.class_totals
    }

    pub fn get(&self, window: &[StateId]) -> Option<&[u64]> {
        self.entries.get(window).map(Vec::as_slice)
    }

    /// Rows in unspecified order.
    pub fn rows(&self) -> impl Iterator<Item = (&FeatureWindow, &[u64])> + '_ {
        self.entries.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Classes with a nonzero count, ascending.
    pub fn observed_classes(&self) -> Vec<StateId> {
        self.class_totals
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| StateId(i as u32))
            .collect()
    }
}

pub fn build_counts(dataset: &LabeledDataset) -> Result<CountsTable> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput("dataset has no samples"));
    }
    let m = dataset.alphabet_size();
    let mut entries: HashMap<FeatureWindow, Vec<u64>> = HashMap::new();
    let mut class_totals = vec![0u64; m];
    for (window, class) in dataset.samples() {
        match entries.get_mut(window) {
            Some(row) => row[class.index()] += 1,
            None => {
                let mut row = vec![0u64; m];
                row[class.index()] = 1;
                entries.insert(FeatureWindow::new(window), row);
            }
        }
        class_totals[class.index()] += 1;
    }
    Ok(CountsTable {
        alphabet_size: m,
        entries,
        class_totals,
        total: dataset.len() as u64,
    })
}

/// Class frequencies of the dataset.
pub fn empirical_priors(dataset: &LabeledDataset) -> Result<Vec<f64>> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput("dataset has no samples"));
    }
    let mut counts = vec![0u64; dataset.alphabet_size()];
    for c in dataset.classes() {
        counts[c.index()] += 1;
    }
    Ok(normalize(&counts, dataset.len() as u64))
}

pub(crate) fn normalize(counts: &[u64], total: u64) -> Vec<f64> {
    let total = total as f64;
    counts.iter().map(|&c| c as f64 / total).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(m: usize, states: &[u32]) -> Series {
        Series::from_indices(m, states).unwrap()
    }

    fn as_pairs(ds: &LabeledDataset) -> Vec<(Vec<u32>, u32)> {
        ds.samples()
            .map(|(w, c)| (w.iter().map(|s| s.0).collect(), c.0))
            .collect()
    }

    // A,B,B,C,A with r = 1.
    fn abbca() -> LabeledDataset {
        extract_features(&series(3, &[0, 1, 1, 2, 0]), 1).unwrap()
    }

    #[test]
    fn extract_r1() {
        assert_eq!(
            as_pairs(&abbca()),
            vec![(vec![0], 1), (vec![1], 1), (vec![1], 2), (vec![2], 0)]
        );
    }

    #[test]
    fn extract_r2() {
        let ds = extract_features(&series(3, &[0, 1, 2, 1, 0]), 2).unwrap();
        assert_eq!(
            as_pairs(&ds),
            vec![(vec![0, 1], 2), (vec![1, 2], 1), (vec![2, 1], 0)]
        );
    }

    #[test]
    fn extract_rejects_bad_cutoff() {
        let s = series(3, &[0, 1, 2]);
        assert!(matches!(
            extract_features(&s, 0),
            Err(Error::InvalidCutoff { r: 0, n: 3 })
        ));
        assert!(matches!(
            extract_features(&s, 3),
            Err(Error::InvalidCutoff { r: 3, n: 3 })
        ));
        assert!(extract_features(&s, 2).is_ok());
    }

    #[test]
    fn counts_small() {
        let t = build_counts(&abbca()).unwrap();
        assert_eq!(t.total(), 4);
        assert_eq!(t.num_features(), 3);
        assert_eq!(t.get(&[StateId(0)]), Some(&[0, 1, 0][..]));
        assert_eq!(t.get(&[StateId(1)]), Some(&[0, 1, 1][..]));
        assert_eq!(t.get(&[StateId(2)]), Some(&[1, 0, 0][..]));
        assert_eq!(t.class_totals(), &[1, 2, 1]);
    }

    #[test]
    fn counts_single_sample() {
        let ds = LabeledDataset::from_samples(
            4,
            2,
            [(FeatureWindow::from_indices(&[3, 1]), StateId(2))],
        )
        .unwrap();
        let t = build_counts(&ds).unwrap();
        assert_eq!(t.total(), 1);
        assert_eq!(t.num_features(), 1);
    }

    #[test]
    fn empty_dataset_errors() {
        let ds = LabeledDataset::from_samples(3, 1, std::iter::empty()).unwrap();
        assert!(matches!(build_counts(&ds), Err(Error::EmptyInput(_))));
        assert!(matches!(empirical_priors(&ds), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn priors_small() {
        assert_eq!(empirical_priors(&abbca()).unwrap(), vec![0.25, 0.5, 0.25]);
    }

    #[test]
    fn priors_single_class() {
        let ds = extract_features(&series(4, &[2, 2, 2, 2]), 1).unwrap();
        assert_eq!(empirical_priors(&ds).unwrap(), vec![0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn from_samples_validates() {
        let w = FeatureWindow::from_indices(&[0, 1]);
        assert!(LabeledDataset::from_samples(3, 1, [(w.clone(), StateId(0))]).is_err());
        assert!(LabeledDataset::from_samples(3, 2, [(w.clone(), StateId(3))]).is_err());
        assert!(LabeledDataset::from_samples(3, 0, std::iter::empty()).is_err());
        assert!(LabeledDataset::from_samples(3, 2, [(w, StateId(2))]).is_ok());
    }

    fn arb_series() -> impl Strategy<Value = Series> {
        (2usize..6).prop_flat_map(|m| {
            proptest::collection::vec(0..m as u32, 2..200).prop_map(move |v| series(m, &v))
        })
    }

    proptest! {
        #[test]
        fn extraction_is_lossless(s in arb_series(), r in 1usize..5) {
            prop_assume!(r < s.len());
            let ds = extract_features(&s, r).unwrap();
            prop_assert_eq!(ds.len(), s.len() - r);
            prop_assert_eq!(ds.classes(), &s.states()[r..]);
            for (i, (w, c)) in ds.samples().enumerate() {
                prop_assert_eq!(w, &s.states()[i..i + r]);
                prop_assert_eq!(c, s.states()[i + r]);
            }
        }

        #[test]
        fn counts_and_priors_ignore_sample_order(s in arb_series(), r in 1usize..4, shift in 0usize..1000) {
            prop_assume!(r < s.len());
            let ds = extract_features(&s, r).unwrap();
            let mut samples: Vec<_> = ds.samples().map(|(w, c)| (FeatureWindow::new(w), c)).collect();
            let k = shift % samples.len();
            samples.rotate_left(k);
            samples.reverse();
            let shuffled = LabeledDataset::from_samples(ds.alphabet_size(), r, samples).unwrap();
            let a = build_counts(&ds).unwrap();
            let b = build_counts(&shuffled).unwrap();
            prop_assert_eq!(a.total(), ds.len() as u64);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(empirical_priors(&ds).unwrap(), empirical_priors(&shuffled).unwrap());
            let sum: f64 = empirical_priors(&ds).unwrap().iter().sum();
            prop_assert!((sum - 1.0).abs() <= 1e-12);
        }
    }
}
