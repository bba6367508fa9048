//! Parameter sweeps comparing the entropy and Bayes-error routes on the
//! synthetic generators.
//!
//! A panel is a grid of generator settings. Each grid point produces one
//! *series cell* (generator parameters plus `n`), simulated once per run.
//! Every window length `r` of the panel is then evaluated on that same
//! series, so rows that differ only in `r` share their data and the entropy
//! estimate, which does not depend on `r`, is computed once and repeated.
//!
//! Seeds come from [`derive_seed`]: `splitmix64(splitmix64(splitmix64(base)
//! ^ cell) ^ run)` with `cell` the series-cell index in grid order and `run`
//! the run index. Output rows are sorted by analysis cell (series cell, then
//! `r`), then run, then method, so the CSV is independent of scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::ber::ber_predictability;
use crate::dataset::extract_features;
use crate::entropy::entropy_predictability;
use crate::error::{Error, Result};
use crate::estimate::Method;
use crate::generators::{GeneratorKind, GeneratorSpec};
use crate::oracle::true_predictability;

pub const RAW_HEADER: [&str; 16] = [
    "panel",
    "generator",
    "M",
    "q",
    "q1",
    "q2",
    "q3",
    "r",
    "n",
    "run",
    "method",
    "estimate",
    "lower",
    "upper",
    "truth",
    "abs_error",
];

pub const AGG_HEADER: [&str; 18] = [
    "panel",
    "generator",
    "M",
    "q",
    "q1",
    "q2",
    "q3",
    "r",
    "n",
    "runs",
    "method",
    "estimate",
    "lower",
    "upper",
    "truth",
    "abs_error",
    "mean",
    "stderr",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Panel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Panel {
    pub const ALL: [Panel; 6] = [Panel::A, Panel::B, Panel::C, Panel::D, Panel::E, Panel::F];

    pub fn letter(self) -> char {
        match self {
            Panel::A => 'A',
            Panel::B => 'B',
            Panel::C => 'C',
            Panel::D => 'D',
            Panel::E => 'E',
            Panel::F => 'F',
        }
    }

    pub fn generator(self) -> &'static str {
        match self {
            Panel::A | Panel::B => "markov3",
            Panel::C | Panel::D => "additive",
            Panel::E | Panel::F => "copy",
        }
    }
}

impl fmt::Display for Panel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Panel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Panel::A),
            "B" | "b" => Ok(Panel::B),
            "C" | "c" => Ok(Panel::C),
            "D" | "d" => Ok(Panel::D),
            "E" | "e" => Ok(Panel::E),
            "F" | "f" => Ok(Panel::F),
            other => Err(Error::param(
                "panel",
                format!("expected one of A-F, got {other:?}"),
            )),
        }
    }
}

/// Sweep definition for one panel.
#[derive(Clone, Debug, PartialEq)]
pub struct PanelConfig {
    pub panel: Panel,
    /// `q` grid (markov3, additive); ignored for copy.
    pub q_values: Vec<f64>,
    /// Alphabet sizes (additive, copy); markov3 always uses 3.
    pub m_values: Vec<usize>,
    /// Window lengths for the Bayes-error route. Empty for entropy-only panels.
    pub r_values: Vec<usize>,
    pub n_values: Vec<usize>,
    /// `(q1, q2, q3)` for the copy generator.
    pub copy_weights: [f64; 3],
    pub methods: Vec<Method>,
    pub runs: usize,
    pub base_seed: u64,
}

pub const DEFAULT_RUNS: usize = 10;
pub const DEFAULT_BASE_SEED: u64 = 1;
pub const DEFAULT_N: usize = 1 << 15;

fn grid(start: u32, end: u32, step: u32, scale: f64) -> Vec<f64> {
    (start..=end)
        .step_by(step as usize)
        .map(|k| k as f64 / scale)
        .collect()
}

fn n_sweep() -> Vec<usize> {
    (6..=20).map(|k| 1usize << k).collect()
}

impl PanelConfig {
    pub fn default_for(panel: Panel) -> Self {
        let both = vec![Method::Entropy, Method::Ber];
        let base = PanelConfig {
            panel,
            q_values: Vec::new(),
            m_values: Vec::new(),
            r_values: Vec::new(),
            n_values: vec![DEFAULT_N],
            copy_weights: [0.1, 0.2, 0.3],
            methods: both.clone(),
            runs: DEFAULT_RUNS,
            base_seed: DEFAULT_BASE_SEED,
        };
        match panel {
            Panel::A => PanelConfig {
                q_values: vec![0.4, 0.6, 0.8],
                m_values: vec![3],
                n_values: n_sweep(),
                methods: vec![Method::Entropy],
                ..base
            },
            Panel::B => PanelConfig {
                q_values: grid(40, 100, 5, 100.0),
                m_values: vec![3],
                r_values: vec![1],
                ..base
            },
            Panel::C => PanelConfig {
                q_values: vec![0.2, 0.4, 0.6, 0.8],
                m_values: vec![100],
                n_values: n_sweep(),
                methods: vec![Method::Entropy],
                ..base
            },
            Panel::D => PanelConfig {
                q_values: grid(0, 10, 1, 10.0),
                m_values: vec![100],
                r_values: vec![2],
                ..base
            },
            Panel::E => PanelConfig {
                m_values: vec![20],
                r_values: vec![1, 2, 3, 4, 5],
                ..base
            },
            Panel::F => PanelConfig {
                m_values: vec![5, 10, 20, 50, 100],
                r_values: vec![3],
                ..base
            },
        }
    }

    /// Parses a flat `key = value` file; keys not present keep the panel's
    /// defaults. Lists are comma separated, and `n` accepts `2^k`.
    ///
    /// ```text
    /// panel = B
    /// q = 0.4, 0.6, 0.8
    /// n = 2^15
    /// r = 1
    /// runs = 10
    /// base_seed = 7
    /// methods = entropy, ber
    /// ```
    ///
    /// Other keys: `M`, `q1`, `q2`, `q3`. `#` starts a comment.
    pub fn from_kv_text(text: &str, default_panel: Option<Panel>) -> Result<Self> {
        let mut pairs = Vec::new();
        let mut panel = default_panel;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_err(
                    i,
                    format!("expected `key = value`, got {line:?}"),
                ));
            };
            let (key, value) = (key.trim(), value.trim());
            if key == "panel" {
                let p: Panel = value
                    .parse()
                    .map_err(|e: Error| config_err(i, e.to_string()))?;
                if let Some(d) = default_panel {
                    if d != p {
                        return Err(config_err(
                            i,
                            format!("config is for panel {p}, but panel {d} was requested"),
                        ));
                    }
                }
                panel = Some(p);
            } else {
                pairs.push((i, key.to_string(), value.to_string()));
            }
        }
        let panel = panel.ok_or_else(|| Error::param("panel", "config does not name a panel"))?;
        let mut cfg = PanelConfig::default_for(panel);
        for (i, key, value) in pairs {
            let err = |e: String| config_err(i, format!("{key}: {e}"));
            match key.as_str() {
                "q" => cfg.q_values = parse_list(&value, parse_f64).map_err(err)?,
                "M" | "m" => cfg.m_values = parse_list(&value, parse_usize).map_err(err)?,
                "r" => cfg.r_values = parse_list(&value, parse_usize).map_err(err)?,
                "n" => cfg.n_values = parse_list(&value, parse_usize).map_err(err)?,
                "q1" => cfg.copy_weights[0] = parse_f64(&value).map_err(err)?,
                "q2" => cfg.copy_weights[1] = parse_f64(&value).map_err(err)?,
                "q3" => cfg.copy_weights[2] = parse_f64(&value).map_err(err)?,
                "runs" => cfg.runs = parse_usize(&value).map_err(err)?,
                "base_seed" => {
                    cfg.base_seed = value
                        .parse()
                        .map_err(|_| err(format!("invalid seed {value:?}")))?
                }
                "methods" => {
                    cfg.methods = parse_list(&value, |s| s.parse::<Method>()).map_err(err)?
                }
                _ => return Err(config_err(i, format!("unknown key {key:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs < 1 {
            return Err(Error::param("runs", "need at least one run"));
        }
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return Err(Error::param(
                "n",
                "need at least one positive series length",
            ));
        }
        if self.methods.is_empty() || self.methods.contains(&Method::Empirical) {
            return Err(Error::param(
                "methods",
                "methods must be a non-empty subset of {entropy, ber}",
            ));
        }
        if self.methods.contains(&Method::Ber) && self.r_values.is_empty() {
            return Err(Error::param(
                "r",
                "the ber method needs at least one window length",
            ));
        }
        if self.r_values.contains(&0) {
            return Err(Error::param("r", "window lengths must be >= 1"));
        }
        let kinds = self.series_kinds();
        if kinds.is_empty() {
            return Err(Error::param("grid", "the generator grid is empty"));
        }
        for kind in kinds {
            kind.validate()?;
        }
        Ok(())
    }

    fn series_kinds(&self) -> Vec<GeneratorKind> {
        match self.panel.generator() {
            "markov3" => self
                .q_values
                .iter()
                .map(|&q| GeneratorKind::Markov3 { q })
                .collect(),
            "additive" => self
                .m_values
                .iter()
                .flat_map(|&m| {
                    self.q_values
                        .iter()
                        .map(move |&q| GeneratorKind::Additive { m, q })
                })
                .collect(),
            _ => {
                let [q1, q2, q3] = self.copy_weights;
                self.m_values
                    .iter()
                    .map(|&m| GeneratorKind::Copy { m, q1, q2, q3 })
                    .collect()
            }
        }
    }

    /// Series cells in grid order: generator settings (outer) by `n` (inner).
    pub fn series_cells(&self) -> Vec<(GeneratorKind, usize)> {
        self.series_kinds()
            .into_iter()
            .flat_map(|kind| self.n_values.iter().map(move |&n| (kind, n)))
            .collect()
    }

    fn analysis_rs(&self) -> Vec<Option<usize>> {
        if self.r_values.is_empty() {
            vec![None]
        } else {
            self.r_values.iter().copied().map(Some).collect()
        }
    }
}

fn config_err(line: usize, reason: String) -> Error {
    Error::Parse {
        position: format!("config line {}", line + 1),
        reason,
    }
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("invalid number {s:?}"))
}

fn parse_usize(s: &str) -> std::result::Result<usize, String> {
    let s = s.trim();
    if let Some((base, exp)) = s.split_once('^') {
        let base: usize = base
            .trim()
            .parse()
            .map_err(|_| format!("invalid integer {s:?}"))?;
        let exp: u32 = exp
            .trim()
            .parse()
            .map_err(|_| format!("invalid integer {s:?}"))?;
        return base
            .checked_pow(exp)
            .ok_or_else(|| format!("{s} overflows"));
    }
    s.parse().map_err(|_| format!("invalid integer {s:?}"))
}

fn parse_list<T, E: ToString>(
    s: &str,
    f: impl Fn(&str) -> std::result::Result<T, E>,
) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|x| f(x.trim()).map_err(|e| e.to_string()))
        .collect()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the series simulated for series cell `cell`, run `run`.
pub fn derive_seed(base_seed: u64, cell: u64, run: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ cell) ^ run)
}

/// Estimate triple of one successful evaluation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Outcome {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

/// One estimator evaluated on one run of one cell. `outcome` is `None` when
/// the estimator failed on this cell; the failure is reported on stderr.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub panel: Panel,
    pub kind: GeneratorKind,
    pub r: Option<usize>,
    pub n: usize,
    pub run: usize,
    pub seed: u64,
    pub method: Method,
    pub outcome: Option<Outcome>,
    pub truth: Option<f64>,
    /// Index of the analysis cell (series cell, `r`) in grid order.
    pub cell: usize,
}

impl ResultRow {
    pub fn abs_error(&self) -> Option<f64> {
        Some((self.outcome?.estimate - self.truth?).abs())
    }
}

/// Runs every cell and run of `config` in parallel and returns the rows in
/// deterministic order.
pub fn run_panel(config: &PanelConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let cells = config.series_cells();
    let rs = config.analysis_rs();
    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..config.runs).map(move |run| (c, run)))
        .collect();

    let mut rows: Vec<ResultRow> = jobs
        .par_iter()
        .flat_map_iter(|&(c, run)| {
            let (kind, n) = cells[c];
            evaluate(config, kind, n, c, run, &rs)
        })
        .collect();
    rows.sort_by_key(|row| (row.cell, row.run, row.method));
    Ok(rows)
}

fn evaluate(
    config: &PanelConfig,
    kind: GeneratorKind,
    n: usize,
    c: usize,
    run: usize,
    rs: &[Option<usize>],
) -> Vec<ResultRow> {
    let seed = derive_seed(config.base_seed, c as u64, run as u64);
    let spec = GeneratorSpec { kind, n, seed };
    let report = |what: &str, e: &Error| {
        eprintln!(
            "panel {} {kind} n={n} run={run}: {what} failed: {e}",
            config.panel
        );
    };
    let series = spec.generate();
    if let Err(e) = &series {
        report("generation", e);
    }
    let series = series.ok();

    let entropy = if config.methods.contains(&Method::Entropy) {
        series
            .as_ref()
            .and_then(|s| match entropy_predictability(s) {
                Ok(est) => Some(Outcome {
                    estimate: est.point,
                    lower: est.lower,
                    upper: est.upper,
                }),
                Err(e) => {
                    report("entropy", &e);
                    None
                }
            })
    } else {
        None
    };

    let mut rows = Vec::new();
    for (ri, &r) in rs.iter().enumerate() {
        let truth = match true_predictability(&kind, r.unwrap_or(kind.memory())) {
            Ok(t) => Some(t),
            Err(e) => {
                report("truth", &e);
                None
            }
        };
        let cell = c * rs.len() + ri;
        let row = |method, outcome| ResultRow {
            panel: config.panel,
            kind,
            r,
            n,
            run,
            seed,
            method,
            outcome,
            truth,
            cell,
        };
        for &method in &config.methods {
            let outcome = match method {
                Method::Entropy => entropy,
                _ => series.as_ref().and_then(|s| {
                    let r = r.expect("validated: ber has window lengths");
                    match extract_features(s, r).and_then(|ds| ber_predictability(&ds)) {
                        Ok(est) => Some(Outcome {
                            estimate: est.point,
                            lower: est.lower,
                            upper: est.upper,
                        }),
                        // A single observed class is perfectly predictable.
                        Err(Error::DegenerateDataset) => Some(Outcome {
                            estimate: 1.0,
                            lower: 1.0,
                            upper: 1.0,
                        }),
                        Err(e) => {
                            report("ber", &e);
                            None
                        }
                    }
                }),
            };
            rows.push(row(method, outcome));
        }
    }
    rows
}

/// Mean and standard error over the runs of one (cell, method).
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRow {
    pub first: ResultRow,
    /// Successful runs.
    pub runs: usize,
    pub mean_estimate: Option<f64>,
    pub mean_lower: Option<f64>,
    pub mean_upper: Option<f64>,
    pub mean_abs_error: Option<f64>,
    /// `sd / sqrt(runs)` of the estimate, with the sample standard deviation;
    /// zero for a single run.
    pub stderr: Option<f64>,
}

pub fn aggregate(rows: &[ResultRow]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(usize, Method), Vec<&ResultRow>> = BTreeMap::new();
    for row in rows {
        groups.entry((row.cell, row.method)).or_default().push(row);
    }
    groups
        .into_values()
        .map(|group| {
            let ok: Vec<Outcome> = group.iter().filter_map(|r| r.outcome).collect();
            let errs: Vec<f64> = group.iter().filter_map(|r| r.abs_error()).collect();
            let k = ok.len();
            let mean =
                |f: fn(&Outcome) -> f64| (k > 0).then(|| ok.iter().map(f).sum::<f64>() / k as f64);
            let mean_estimate = mean(|o| o.estimate);
            let stderr = mean_estimate.map(|mu| {
                if k < 2 {
                    0.0
                } else {
                    let var =
                        ok.iter().map(|o| (o.estimate - mu).powi(2)).sum::<f64>() / (k - 1) as f64;
                    (var / k as f64).sqrt()
                }
            });
            AggregateRow {
                first: group[0].clone(),
                runs: k,
                mean_estimate,
                mean_lower: mean(|o| o.lower),
                mean_upper: mean(|o| o.upper),
                mean_abs_error: (!errs.is_empty())
                    .then(|| errs.iter().sum::<f64>() / errs.len() as f64),
                stderr,
            }
        })
        .collect()
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn param_fields(panel: Panel, kind: &GeneratorKind, r: Option<usize>, n: usize) -> Vec<String> {
    let (q, weights) = match *kind {
        GeneratorKind::Markov3 { q } | GeneratorKind::Additive { q, .. } => (Some(q), None),
        GeneratorKind::Copy { q1, q2, q3, .. } => (None, Some([q1, q2, q3])),
    };
    vec![
        panel.to_string(),
        kind.tag().to_string(),
        kind.alphabet_size().to_string(),
        opt(q),
        opt(weights.map(|w| w[0])),
        opt(weights.map(|w| w[1])),
        opt(weights.map(|w| w[2])),
        opt(r),
        n.to_string(),
    ]
}

pub fn write_raw_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RAW_HEADER).map_err(csv_err)?;
    for row in rows {
        let mut rec = param_fields(row.panel, &row.kind, row.r, row.n);
        rec.push(row.run.to_string());
        rec.push(row.method.to_string());
        rec.push(opt(row.outcome.map(|o| o.estimate)));
        rec.push(opt(row.outcome.map(|o| o.lower)));
        rec.push(opt(row.outcome.map(|o| o.upper)));
        rec.push(opt(row.truth));
        rec.push(opt(row.abs_error()));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_agg_csv<W: Write>(rows: &[AggregateRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(AGG_HEADER).map_err(csv_err)?;
    for agg in rows {
        let f = &agg.first;
        let mut rec = param_fields(f.panel, &f.kind, f.r, f.n);
        rec.push(agg.runs.to_string());
        rec.push(f.method.to_string());
        rec.push(opt(agg.mean_estimate));
        rec.push(opt(agg.mean_lower));
        rec.push(opt(agg.mean_upper));
        rec.push(opt(f.truth));
        rec.push(opt(agg.mean_abs_error));
        rec.push(opt(agg.mean_estimate));
        rec.push(opt(agg.stderr));
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}
