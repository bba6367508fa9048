//! Discrete series and the plain-text series file format.
//!
//! A series file starts with a header line `M n`, followed by exactly `n`
//! whitespace-separated state indices in `[0, M)`:
//!
//! ```text
//! 3 5
//! 0 1 1 2 0
//! ```
//!
//! States are 0-based. A state written `S_k` (1-based) elsewhere is stored as
//! `k - 1`.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Index of a state in an alphabet of size `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for StateId {
    fn from(v: u32) -> Self {
        StateId(v)
    }
}

impl fmt::Display for StateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A finite, non-empty sequence of states over an alphabet of size `M >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    alphabet_size: usize,
    states: Vec<StateId>,
}

impl Series {
    pub fn new(alphabet_size: usize, states: Vec<StateId>) -> Result<Self> {
        if alphabet_size < 2 {
            return Err(Error::param(
                "M",
                format!("alphabet size must be >= 2, got {alphabet_size}"),
            ));
        }
        if alphabet_size > u32::MAX as usize {
            return Err(Error::param("M", "alphabet size does not fit in 32 bits"));
        }
        if states.is_empty() {
            return Err(Error::EmptyInput("series has no states"));
        }
        if let Some((pos, s)) = states
            .iter()
            .enumerate()
            .find(|(_, s)| s.index() >= alphabet_size)
        {
            return Err(Error::param(
                "states",
                format!("state {s} at position {pos} is outside [0, {alphabet_size})"),
            ));
        }
        Ok(Series {
            alphabet_size,
            states,
        })
    }

    pub fn from_indices(alphabet_size: usize, states: &[u32]) -> Result<Self> {
        Series::new(alphabet_size, states.iter().copied().map(StateId).collect())
    }

    /// Builds a series without re-checking the alphabet bound. Callers
    /// guarantee every state is `< alphabet_size`.
    pub(crate) fn from_trusted(alphabet_size: usize, states: Vec<StateId>) -> Self {
        debug_assert!(alphabet_size >= 2 && !states.is_empty());
        debug_assert!(states.iter().all(|s| s.index() < alphabet_size));
        Series {
            alphabet_size,
            states,
        }
    }

    #[inline]
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.states.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    #[inline]
    pub fn states(&self) -> &[StateId] {
        &self.states
    }

    pub fn into_states(self) -> Vec<StateId> {
        self.states
    }
}

const VALUES_PER_LINE: usize = 32;

/// Writes `series` in the text series format.
pub fn write_series<W: Write>(series: &Series, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", series.alphabet_size, series.len())?;
    for line in series.states.chunks(VALUES_PER_LINE) {
        let mut first = true;
        for s in line {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{s}")?;
            first = false;
        }
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a series in the text series format.
///
/// Parse errors name the offending line and, for state values, the 1-based
/// position of the value in the series.
pub fn read_series<R: BufRead>(input: R) -> Result<Series> {
    let mut lines = input.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line?,
        None => return Err(parse_err("line 1", "missing header `M n`")),
    };
    let mut parts = header.split(' ');
    let (Some(m), Some(n), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(parse_err(
            "line 1",
            format!("header must be `M n`, got {header:?}"),
        ));
    };
    let alphabet_size: usize = m
        .parse()
        .map_err(|_| parse_err("line 1", format!("invalid alphabet size {m:?}")))?;
    let n: usize = n
        .parse()
        .map_err(|_| parse_err("line 1", format!("invalid series length {n:?}")))?;
    if alphabet_size < 2 {
        return Err(parse_err(
            "line 1",
            format!("alphabet size must be >= 2, got {alphabet_size}"),
        ));
    }
    if alphabet_size > u32::MAX as usize {
        return Err(parse_err("line 1", "alphabet size does not fit in 32 bits"));
    }
    if n == 0 {
        return Err(parse_err("line 1", "series length must be >= 1"));
    }

    let mut states = Vec::with_capacity(n.min(1 << 24));
    for (idx, line) in lines {
        let line = line?;
        let line_no = idx + 1;
        for tok in line.split_whitespace() {
            let pos = states.len() + 1;
            if pos > n {
                return Err(parse_err(
                    format!("line {line_no}, value {pos}"),
                    format!("more than the declared {n} values"),
                ));
            }
            let v: u64 = tok.parse().map_err(|_| {
                parse_err(
                    format!("line {line_no}, value {pos}"),
                    format!("not a base-10 integer: {tok:?}"),
                )
            })?;
            if v >= alphabet_size as u64 {
                return Err(parse_err(
                    format!("line {line_no}, value {pos}"),
                    format!("state {v} is outside [0, {alphabet_size})"),
                ));
            }
            states.push(StateId(v as u32));
        }
    }
    if states.len() != n {
        return Err(parse_err(
            format!("value {}", states.len() + 1),
            format!("expected {n} values, found {}", states.len()),
        ));
    }
    Ok(Series::from_trusted(alphabet_size, states))
}

fn parse_err(position: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::Parse {
        position: position.into(),
        reason: reason.into(),
    }
}
