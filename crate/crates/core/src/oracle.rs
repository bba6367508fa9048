//! Ground truth for the synthetic generators.
//!
//! [`true_predictability`] gives the closed-form truth of each process with a
//! window of `r` states:
//!
//! * `Markov3`: `q` (valid for `q >= 0.4`, where the self-transition is the
//!   most likely next state from every state);
//! * `Additive`: `q + (1 - q) / M`, for `r >= 2`;
//! * `Copy`: `max(q1..q_min(r,3)) + (1 - q1 - q2 - q3) / M`.
//!
//! The `Copy` formula ignores coincidences among the last three states (when
//! two of them are equal their copy weights add up), so it underestimates the
//! real predictability at finite `M`. [`brute_force_ber`] computes the Bayes
//! error directly from the process definition, which lets tests measure that
//! gap instead of asserting the approximate formula.

use crate::error::{Error, Result};
use crate::generators::{GeneratorKind, GeneratorSpec};
use crate::series::StateId;

/// Largest window space `M^r` the brute-force oracle accepts.
pub const MAX_WINDOW_SPACE: u64 = 1_000_000;

// Work budget (tuple states times alphabet) for exact chain analysis.
const MAX_CHAIN_WORK: u64 = 50_000_000;
const MAX_POWER_ITERATIONS: usize = 100_000;
const STATIONARY_TOLERANCE: f64 = 1e-14;
const MC_BATCHES: usize = 100;

/// Closed-form truth for one generator and cutoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruthRecord {
    pub spec: GeneratorSpec,
    pub r: usize,
    pub true_predictability: f64,
    pub true_ber: f64,
}

impl TruthRecord {
    pub fn new(spec: GeneratorSpec, r: usize) -> Result<Self> {
        let p = true_predictability(&spec.kind, r)?;
        Ok(TruthRecord {
            spec,
            r,
            true_predictability: p,
            true_ber: 1.0 - p,
        })
    }
}

pub fn true_predictability(kind: &GeneratorKind, r: usize) -> Result<f64> {
    kind.validate()?;
    if r < 1 {
        return Err(Error::param("r", "cutoff must be >= 1"));
    }
    match *kind {
        GeneratorKind::Markov3 { q } => {
            if q < 0.4 {
                return Err(Error::OutOfValidatedRange(format!(
                    "markov3 truth is only established for q in [0.4, 1], got q={q}"
                )));
            }
            Ok(q)
        }
        GeneratorKind::Additive { m, q } => {
            if r < 2 {
                return Err(Error::InsufficientMemory(format!(
                    "additive truth needs both anterior states (r >= 2), got r={r}"
                )));
            }
            Ok(q + (1.0 - q) / m as f64)
        }
        GeneratorKind::Copy { m, q1, q2, q3 } => {
            let best = [q1, q2, q3][..r.min(3)].iter().copied().fold(0.0, f64::max);
            Ok(best + (1.0 - q1 - q2 - q3) / m as f64)
        }
    }
}

/// A Bayes error rate computed from the process definition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BerReference {
    pub ber: f64,
    /// Zero for exact computations; Monte Carlo standard error otherwise.
    pub std_error: f64,
    pub exact: bool,
}

/// Bayes error of predicting the next state from the last `r` states.
///
/// `Markov3` and `Additive` are solved exactly from the stationary law of the
/// process. `Copy` is estimated by Monte Carlo over one simulated path of
/// `horizon` steps seeded with `spec.seed`.
pub fn brute_force_ber(spec: &GeneratorSpec, r: usize, horizon: usize) -> Result<BerReference> {
    spec.kind.validate()?;
    check_window_space(spec.alphabet_size(), r)?;
    match spec.kind {
        GeneratorKind::Markov3 { .. } | GeneratorKind::Additive { .. } => Ok(BerReference {
            ber: exact_chain_ber(&spec.kind, r)?,
            std_error: 0.0,
            exact: true,
        }),
        GeneratorKind::Copy { .. } => monte_carlo_copy_ber(&spec.kind, r, horizon, spec.seed),
    }
}

/// Exact Bayes error for window length `r`, from the stationary law of the
/// process viewed as a first-order chain on tuples of its last `memory()`
/// states.
///
/// The stationary law is reached by propagating the process's own initial
/// law (uniform initial states). Works for every generator as long as
/// `M^memory * M` stays within the work budget.
pub fn exact_chain_ber(kind: &GeneratorKind, r: usize) -> Result<f64> {
    kind.validate()?;
    let m = kind.alphabet_size();
    check_window_space(m, r)?;
    let k = kind.memory();
    let tuples = checked_pow(m, k)
        .filter(|&t| t.saturating_mul(m as u64) <= MAX_CHAIN_WORK)
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "exact chain analysis over {m}^{k} tuples exceeds the work budget"
            ))
        })? as usize;

    // next[u * m + s] = P(next = s | tuple u)
    let mut next = vec![0.0; tuples * m];
    let mut hist = vec![StateId(0); k];
    for u in 0..tuples {
        decode(u, m, &mut hist);
        kind.next_distribution(&hist, &mut next[u * m..(u + 1) * m]);
    }

    let pi = stationary(&next, tuples, m)?;

    if r >= k {
        let mut acc = 0.0;
        for u in 0..tuples {
            let row = &next[u * m..(u + 1) * m];
            acc += pi[u] * row.iter().copied().fold(0.0, f64::max);
        }
        Ok((1.0 - acc).max(0.0))
    } else {
        // Marginalise the older k - r states out of each tuple.
        let windows = m.pow(r as u32);
        let mut joint = vec![0.0; windows * m];
        for u in 0..tuples {
            let w = u % windows;
            for s in 0..m {
                joint[w * m + s] += pi[u] * next[u * m + s];
            }
        }
        let acc: f64 = joint
            .chunks_exact(m)
            .map(|row| row.iter().copied().fold(0.0, f64::max))
            .sum();
        Ok((1.0 - acc).max(0.0))
    }
}

fn check_window_space(m: usize, r: usize) -> Result<()> {
    if r < 1 {
        return Err(Error::param("r", "cutoff must be >= 1"));
    }
    match checked_pow(m, r) {
        Some(space) if space <= MAX_WINDOW_SPACE => Ok(()),
        _ => Err(Error::Infeasible(format!(
            "window space {m}^{r} exceeds {MAX_WINDOW_SPACE}"
        ))),
    }
}

fn checked_pow(m: usize, k: usize) -> Option<u64> {
    (m as u64).checked_pow(k as u32)
}

// Tuple index is base-m, oldest state most significant.
fn decode(mut u: usize, m: usize, out: &mut [StateId]) {
    for slot in out.iter_mut().rev() {
        *slot = StateId((u % m) as u32);
        u /= m;
    }
}

fn stationary(next: &[f64], tuples: usize, m: usize) -> Result<Vec<f64>> {
    let shift = tuples / m;
    let mut pi = vec![1.0 / tuples as f64; tuples];
    let mut out = vec![0.0; tuples];
    for _ in 0..MAX_POWER_ITERATIONS {
        out.fill(0.0);
        for u in 0..tuples {
            let mass = pi[u];
            if mass == 0.0 {
                continue;
            }
            let base = (u % shift) * m;
            for s in 0..m {
                out[base + s] += mass * next[u * m + s];
            }
        }
        let diff: f64 = pi.iter().zip(&out).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut pi, &mut out);
        if diff < STATIONARY_TOLERANCE {
            return Ok(pi);
        }
    }
    Err(Error::Infeasible("stationary law did not converge".into()))
}

fn monte_carlo_copy_ber(
    kind: &GeneratorKind,
    r: usize,
    horizon: usize,
    seed: u64,
) -> Result<BerReference> {
    let GeneratorKind::Copy { m, .. } = *kind else {
        unreachable!("monte carlo oracle is only used for the copy process");
    };
    if horizon < 10 * MC_BATCHES {
        return Err(Error::param(
            "horizon",
            format!("need at least {} steps, got {horizon}", 10 * MC_BATCHES),
        ));
    }
    let path = GeneratorSpec {
        kind: *kind,
        n: horizon + 3,
        seed,
    }
    .generate()?;
    let states = path.states();
    // Steps t >= 3 have a full three-state history.
    let steps = states.len() - 3;

    // Per-step score: probability that the Bayes rule is right at step t.
    let scores: Vec<f64> = if r >= 3 {
        // The window determines the conditional law exactly; average its
        // maximum along the path.
        let mut dist = vec![0.0; m];
        (3..states.len())
            .map(|t| {
                kind.next_distribution(&states[t - 3..t], &mut dist);
                dist.iter().copied().fold(0.0, f64::max)
            })
            .collect()
    } else {
        // Fit the majority rule per window on the path, then score each step
        // by whether the rule would have been right.
        let windows = m.pow(r as u32);
        let window_of = |t: usize| {
            states[t - r..t]
                .iter()
                .fold(0usize, |acc, s| acc * m + s.index())
        };
        let mut counts = vec![0u64; windows * m];
        for t in 3..states.len() {
            counts[window_of(t) * m + states[t].index()] += 1;
        }
        let rule: Vec<usize> = counts
            .chunks_exact(m)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .max_by_key(|&(i, c)| (*c, std::cmp::Reverse(i)))
                    .map(|(i, _)| i)
                    .unwrap_or(0)
            })
            .collect();
        (3..states.len())
            .map(|t| {
                if rule[window_of(t)] == states[t].index() {
                    1.0
                } else {
                    0.0
                }
            })
            .collect()
    };

    let mean = scores.iter().sum::<f64>() / steps as f64;
    let batch = steps / MC_BATCHES;
    let batch_means: Vec<f64> = scores
        .chunks_exact(batch)
        .take(MC_BATCHES)
        .map(|c| c.iter().sum::<f64>() / batch as f64)
        .collect();
    let bm = batch_means.iter().sum::<f64>() / MC_BATCHES as f64;
    let var = batch_means.iter().map(|x| (x - bm).powi(2)).sum::<f64>() / (MC_BATCHES - 1) as f64;
    Ok(BerReference {
        ber: 1.0 - mean,
        std_error: (var / MC_BATCHES as f64).sqrt(),
        exact: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn markov3(q: f64) -> GeneratorKind {
        GeneratorKind::Markov3 { q }
    }

    const STANDARD_COPY: (f64, f64, f64) = (0.1, 0.2, 0.3);

    fn copy(m: usize) -> GeneratorKind {
        GeneratorKind::Copy {
            m,
            q1: STANDARD_COPY.0,
            q2: STANDARD_COPY.1,
            q3: STANDARD_COPY.2,
        }
    }

    #[test]
    fn closed_form_truths() {
        assert_eq!(true_predictability(&markov3(0.7), 1).unwrap(), 0.7);
        assert!(
            (true_predictability(&GeneratorKind::Additive { m: 100, q: 0.6 }, 2).unwrap() - 0.604)
                .abs()
                < 1e-15
        );
        assert!((true_predictability(&copy(20), 3).unwrap() - 0.32).abs() < 1e-15);
        assert!((true_predictability(&copy(20), 1).unwrap() - 0.12).abs() < 1e-15);
        assert!((true_predictability(&copy(20), 2).unwrap() - 0.22).abs() < 1e-15);
        assert!((true_predictability(&copy(20), 5).unwrap() - 0.32).abs() < 1e-15);
    }

    #[test]
    fn truth_errors() {
        assert!(matches!(
            true_predictability(&markov3(0.39), 1),
            Err(Error::OutOfValidatedRange(_))
        ));
        assert!(matches!(
            true_predictability(&GeneratorKind::Additive { m: 10, q: 0.5 }, 1),
            Err(Error::InsufficientMemory(_))
        ));
        assert!(true_predictability(&copy(20), 0).is_err());
        assert!(true_predictability(&markov3(1.2), 1).is_err());
    }

    #[test]
    fn truth_record_identity() {
        for (kind, r) in [
            (markov3(0.4), 1),
            (GeneratorKind::Additive { m: 7, q: 0.3 }, 2),
            (copy(5), 2),
        ] {
            let rec = TruthRecord::new(
                GeneratorSpec {
                    kind,
                    n: 10,
                    seed: 0,
                },
                r,
            )
            .unwrap();
            assert_eq!(rec.true_ber + rec.true_predictability, 1.0);
            assert!((0.0..=1.0).contains(&rec.true_ber));
        }
    }

    #[test]
    fn markov3_brute_force_is_one_minus_q() {
        for k in 0..=12 {
            let q = 0.4 + 0.05 * k as f64;
            let spec = GeneratorSpec {
                kind: markov3(q),
                n: 1,
                seed: 0,
            };
            let b = brute_force_ber(&spec, 1, 0).unwrap();
            assert!(b.exact);
            assert!((b.ber - (1.0 - q)).abs() < 1e-12, "q={q}: {}", b.ber);
            // Longer windows carry no extra information for a first-order chain.
            assert!((brute_force_ber(&spec, 3, 0).unwrap().ber - (1.0 - q)).abs() < 1e-12);
        }
        let b = brute_force_ber(
            &GeneratorSpec {
                kind: markov3(0.8),
                n: 1,
                seed: 0,
            },
            1,
            0,
        )
        .unwrap();
        assert!((b.ber - 0.2).abs() < 1e-12);
    }

    #[test]
    fn additive_brute_force() {
        let kind = GeneratorKind::Additive { m: 100, q: 0.6 };
        let spec = GeneratorSpec {
            kind,
            n: 1,
            seed: 0,
        };
        assert!((brute_force_ber(&spec, 2, 0).unwrap().ber - 0.396).abs() < 1e-12);
        // A single anterior state says nothing about the next one.
        assert!((brute_force_ber(&spec, 1, 0).unwrap().ber - 0.99).abs() < 1e-12);
    }

    #[test]
    fn more_history_never_hurts() {
        for kind in [GeneratorKind::Additive { m: 6, q: 0.5 }, copy(5), copy(8)] {
            let mut prev = 1.0;
            for r in 1..=5 {
                let b = exact_chain_ber(&kind, r).unwrap();
                assert!(b <= prev + 1e-12, "{kind} r={r}");
                prev = b;
            }
        }
    }

    #[test]
    fn infeasible_window_space() {
        let spec = GeneratorSpec {
            kind: copy(100),
            n: 1,
            seed: 0,
        };
        assert!(matches!(
            brute_force_ber(&spec, 4, 10_000),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            exact_chain_ber(&copy(1000), 1),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn copy_monte_carlo_agrees_with_exact_chain() {
        for (m, r) in [(5usize, 1usize), (5, 2), (5, 3), (10, 3)] {
            let spec = GeneratorSpec {
                kind: copy(m),
                n: 1,
                seed: 42,
            };
            let mc = brute_force_ber(&spec, r, 1_000_000).unwrap();
            let exact = exact_chain_ber(&spec.kind, r).unwrap();
            assert!(!mc.exact && mc.std_error > 0.0);
            // The plug-in fit on the path adds a small in-sample bias for r < 3.
            let slack = 4.0 * mc.std_error + if r < 3 { 2e-3 } else { 0.0 };
            assert!(
                (mc.ber - exact).abs() <= slack,
                "M={m} r={r}: mc={} exact={exact}",
                mc.ber
            );
        }
    }

    #[test]
    fn copy_formula_underestimates_predictability() {
        // Coincidences among the last three states only add predictability.
        for m in [5usize, 10, 20] {
            for r in 1..=3 {
                let exact = exact_chain_ber(&copy(m), r).unwrap();
                let formula = 1.0 - true_predictability(&copy(m), r).unwrap();
                assert!(exact <= formula + 1e-12, "M={m} r={r}");
            }
        }
    }
}
