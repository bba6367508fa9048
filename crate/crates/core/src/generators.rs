//! Seeded synthetic series generators.
//!
//! Every series is drawn from a single `ChaCha8Rng` stream seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`. The generator, the order of draws and
//! the seeding are fixed: changing any of them changes every generated series
//! and breaks the golden prefixes pinned in the tests.
//!
//! Three processes are available:
//!
//! * `Markov3`: a first-order chain on three states. The next state repeats
//!   the current one with probability `q`, moves to the cyclic successor
//!   (0 -> 1 -> 2 -> 0) with probability `2(1-q)/3` and to the remaining state
//!   with probability `(1-q)/3`.
//! * `Additive`: with probability `q` the next state is determined by the two
//!   previous ones. With 1-based labels `S_i`, `S_j` (older first) it is
//!   `S_k`, `k = i + j`, wrapped once by `k -> k - M` when `k > M`. In 0-based
//!   indices this is `(i0 + j0 + 1) mod M`. Otherwise it is uniform.
//! * `Copy`: the next state copies the current state with probability `q1`,
//!   the previous one with `q2`, the one before that with `q3`, and is
//!   uniform otherwise.
//!
//! Initial states (one, two and three respectively) are uniform.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::series::{Series, StateId};

/// Which process to simulate, with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GeneratorKind {
    Markov3 { q: f64 },
    Additive { m: usize, q: f64 },
    Copy { m: usize, q1: f64, q2: f64, q3: f64 },
}

impl GeneratorKind {
    pub fn alphabet_size(&self) -> usize {
        match *self {
            GeneratorKind::Markov3 { .. } => 3,
            GeneratorKind::Additive { m, .. } | GeneratorKind::Copy { m, .. } => m,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            GeneratorKind::Markov3 { .. } => "markov3",
            GeneratorKind::Additive { .. } => "additive",
            GeneratorKind::Copy { .. } => "copy",
        }
    }

    /// Number of initial states drawn uniformly; also the Markov order of
    /// the process.
    pub fn memory(&self) -> usize {
        match self {
            GeneratorKind::Markov3 { .. } => 1,
            GeneratorKind::Additive { .. } => 2,
            GeneratorKind::Copy { .. } => 3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorKind::Markov3 { q } => check_prob("q", q),
            GeneratorKind::Additive { m, q } => {
                check_alphabet(m)?;
                check_prob("q", q)
            }
            GeneratorKind::Copy { m, q1, q2, q3 } => {
                check_alphabet(m)?;
                check_prob("q1", q1)?;
                check_prob("q2", q2)?;
                check_prob("q3", q3)?;
                let total = q1 + q2 + q3;
                if total > 1.0 + 1e-12 {
                    return Err(Error::param(
                        "q1+q2+q3",
                        format!("copy weights sum to {total} > 1"),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Probability of each next state given the last `memory()` states
    /// (oldest first). Writes into `out`, which must have length `M`.
    pub fn next_distribution(&self, history: &[StateId], out: &mut [f64]) {
        let m = self.alphabet_size();
        debug_assert_eq!(out.len(), m);
        debug_assert_eq!(history.len(), self.memory());
        match *self {
            GeneratorKind::Markov3 { q } => {
                let cur = history[0].index();
                out[cur] = q;
                out[(cur + 1) % 3] = 2.0 * (1.0 - q) / 3.0;
                out[(cur + 2) % 3] = (1.0 - q) / 3.0;
            }
            GeneratorKind::Additive { q, .. } => {
                out.fill((1.0 - q) / m as f64);
                out[additive_target(history[0], history[1], m).index()] += q;
            }
            GeneratorKind::Copy { q1, q2, q3, .. } => {
                out.fill((1.0 - q1 - q2 - q3).max(0.0) / m as f64);
                out[history[2].index()] += q1;
                out[history[1].index()] += q2;
                out[history[0].index()] += q3;
            }
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GeneratorKind::Markov3 { q } => write!(f, "markov3(q={q})"),
            GeneratorKind::Additive { m, q } => write!(f, "additive(M={m}, q={q})"),
            GeneratorKind::Copy { m, q1, q2, q3 } => {
                write!(f, "copy(M={m}, q1={q1}, q2={q2}, q3={q3})")
            }
        }
    }
}

/// A complete, reproducible description of one generated series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn markov3(q: f64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Markov3 { q },
            n,
            seed,
        }
    }

    pub fn additive(m: usize, q: f64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Additive { m, q },
            n,
            seed,
        }
    }

    pub fn copy(m: usize, q1: f64, q2: f64, q3: f64, n: usize, seed: u64) -> Self {
        GeneratorSpec {
            kind: GeneratorKind::Copy { m, q1, q2, q3 },
            n,
            seed,
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.kind.alphabet_size()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::param("n", "series length must be >= 1"));
        }
        self.kind.validate()
    }

    pub fn generate(&self) -> Result<Series> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let states = match self.kind {
            GeneratorKind::Markov3 { q } => markov3_states(q, self.n, &mut rng),
            GeneratorKind::Additive { m, q } => additive_states(m, q, self.n, &mut rng),
            GeneratorKind::Copy { m, q1, q2, q3 } => copy_states(m, [q1, q2, q3], self.n, &mut rng),
        };
        Ok(Series::from_trusted(self.alphabet_size(), states))
    }
}

pub fn gen_markov3(q: f64, n: usize, seed: u64) -> Result<Series> {
    GeneratorSpec::markov3(q, n, seed).generate()
}

pub fn gen_additive(m: usize, q: f64, n: usize, seed: u64) -> Result<Series> {
    GeneratorSpec::additive(m, q, n, seed).generate()
}

pub fn gen_copy(m: usize, q1: f64, q2: f64, q3: f64, n: usize, seed: u64) -> Result<Series> {
    GeneratorSpec::copy(m, q1, q2, q3, n, seed).generate()
}

/// Deterministic successor of the additive process: `older`, `newer` are
/// the two anterior states.
#[inline]
pub fn additive_target(older: StateId, newer: StateId, m: usize) -> StateId {
    StateId(((older.index() + newer.index() + 1) % m) as u32)
}

fn check_prob(name: &'static str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::param(
            name,
            format!("probability must lie in [0, 1], got {p}"),
        ))
    }
}

fn check_alphabet(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::param(
            "M",
            format!("alphabet size must be >= 2, got {m}"),
        ));
    }
    if m > u32::MAX as usize {
        return Err(Error::param("M", "alphabet size does not fit in 32 bits"));
    }
    Ok(())
}

#[inline]
fn uniform(rng: &mut ChaCha8Rng, m: usize) -> StateId {
    StateId(rng.random_range(0..m as u32))
}

fn markov3_states(q: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<StateId> {
    let to_next = q + 2.0 * (1.0 - q) / 3.0;
    let mut out = Vec::with_capacity(n);
    let mut cur = uniform(rng, 3).0;
    out.push(StateId(cur));
    for _ in 1..n {
        let u: f64 = rng.random();
        cur = if u < q {
            cur
        } else if u < to_next {
            (cur + 1) % 3
        } else {
            (cur + 2) % 3
        };
        out.push(StateId(cur));
    }
    out
}

fn additive_states(m: usize, q: f64, n: usize, rng: &mut ChaCha8Rng) -> Vec<StateId> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n.min(2) {
        out.push(uniform(rng, m));
    }
    for t in 2..n {
        let u: f64 = rng.random();
        let next = if u < q {
            additive_target(out[t - 2], out[t - 1], m)
        } else {
            uniform(rng, m)
        };
        out.push(next);
    }
    out
}

fn copy_states(m: usize, weights: [f64; 3], n: usize, rng: &mut ChaCha8Rng) -> Vec<StateId> {
    let [q1, q2, q3] = weights;
    let (c1, c2, c3) = (q1, q1 + q2, q1 + q2 + q3);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n.min(3) {
        out.push(uniform(rng, m));
    }
    for t in 3..n {
        let u: f64 = rng.random();
        let next = if u < c1 {
            out[t - 1]
        } else if u < c2 {
            out[t - 2]
        } else if u < c3 {
            out[t - 3]
        } else {
            uniform(rng, m)
        };
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(s: &Series) -> Vec<u32> {
        s.states().iter().map(|s| s.0).collect()
    }

    #[test]
    fn markov3_q1_is_constant() {
        for seed in 0..5 {
            let s = gen_markov3(1.0, 1000, seed).unwrap();
            assert!(s.states().iter().all(|&x| x == s.states()[0]));
        }
    }

    #[test]
    fn markov3_q0_never_repeats() {
        let s = gen_markov3(0.0, 1 << 15, 3).unwrap();
        assert!(s.states().windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn additive_wrap_rule_in_one_based_labels() {
        // S_2, S_3 -> S_5
        assert_eq!(additive_target(StateId(1), StateId(2), 10), StateId(4));
        // S_M, S_M -> k = 2M -> S_M
        for m in [2usize, 3, 7, 100] {
            let last = StateId(m as u32 - 1);
            assert_eq!(additive_target(last, last, m), last);
        }
        // S_1, S_M -> k = M + 1 -> S_1
        assert_eq!(additive_target(StateId(0), StateId(9), 10), StateId(0));
    }

    #[test]
    fn additive_q1_follows_rule() {
        let s = gen_additive(7, 1.0, 500, 11).unwrap();
        for w in s.states().windows(3) {
            assert_eq!(w[2], additive_target(w[0], w[1], 7));
        }
    }

    #[test]
    fn copy_q1_is_constant_after_first_states() {
        let s = gen_copy(20, 1.0, 0.0, 0.0, 300, 5).unwrap();
        let st = s.states();
        assert!(st[3..].iter().all(|&x| x == st[2]));
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            gen_markov3(1.5, 10, 0),
            Err(Error::Parameter { name: "q", .. })
        ));
        assert!(matches!(
            gen_markov3(-0.1, 10, 0),
            Err(Error::Parameter { name: "q", .. })
        ));
        assert!(matches!(
            gen_markov3(f64::NAN, 10, 0),
            Err(Error::Parameter { .. })
        ));
        assert!(matches!(
            gen_markov3(0.5, 0, 0),
            Err(Error::Parameter { name: "n", .. })
        ));
        assert!(matches!(
            gen_additive(1, 0.5, 10, 0),
            Err(Error::Parameter { name: "M", .. })
        ));
        assert!(matches!(
            gen_copy(20, 0.5, 0.4, 0.3, 10, 0),
            Err(Error::Parameter {
                name: "q1+q2+q3",
                ..
            })
        ));
        assert!(gen_copy(20, 0.5, 0.3, 0.2, 10, 0).is_ok());
    }

    #[test]
    fn short_series_are_valid() {
        for n in 1..5 {
            assert_eq!(gen_markov3(0.5, n, 1).unwrap().len(), n);
            assert_eq!(gen_additive(5, 0.5, n, 1).unwrap().len(), n);
            assert_eq!(gen_copy(5, 0.1, 0.2, 0.3, n, 1).unwrap().len(), n);
        }
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let a = gen_copy(20, 0.1, 0.2, 0.3, 4096, 99).unwrap();
        let b = gen_copy(20, 0.1, 0.2, 0.3, 4096, 99).unwrap();
        let c = gen_copy(20, 0.1, 0.2, 0.3, 4096, 100).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn next_distribution_sums_to_one() {
        let kinds = [
            GeneratorKind::Markov3 { q: 0.8 },
            GeneratorKind::Additive { m: 6, q: 0.3 },
            GeneratorKind::Copy {
                m: 6,
                q1: 0.1,
                q2: 0.2,
                q3: 0.3,
            },
        ];
        for kind in kinds {
            let m = kind.alphabet_size();
            let hist: Vec<StateId> = (0..kind.memory())
                .map(|i| StateId((i % 2) as u32))
                .collect();
            let mut out = vec![0.0; m];
            kind.next_distribution(&hist, &mut out);
            assert!((out.iter().sum::<f64>() - 1.0).abs() < 1e-12, "{kind}");
        }
        let mut out = vec![0.0; 3];
        GeneratorKind::Markov3 { q: 0.8 }.next_distribution(&[StateId(0)], &mut out);
        assert!((out[0] - 0.8).abs() < 1e-15);
        assert!((out[1] - 0.4 / 3.0).abs() < 1e-15);
        assert!((out[2] - 0.2 / 3.0).abs() < 1e-15);
    }

    // Golden prefixes: any change here means generated data changed.
    #[test]
    fn golden_prefixes() {
        let m3 = idx(&gen_markov3(0.8, 24, 7).unwrap());
        let ad = idx(&gen_additive(100, 0.6, 16, 7).unwrap());
        let cp = idx(&gen_copy(20, 0.1, 0.2, 0.3, 16, 7).unwrap());
        assert_eq!(m3, GOLDEN_MARKOV3);
        assert_eq!(ad, GOLDEN_ADDITIVE);
        assert_eq!(cp, GOLDEN_COPY);
    }

    const GOLDEN_MARKOV3: [u32; 24] = [
        0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 0, 2, 2, 2, 2, 2, 2, 2,
    ];
    const GOLDEN_ADDITIVE: [u32; 16] =
        [14, 15, 30, 3, 34, 35, 70, 35, 6, 42, 38, 81, 20, 2, 23, 26];
    const GOLDEN_COPY: [u32; 16] = [2, 3, 3, 3, 3, 3, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7];
}
