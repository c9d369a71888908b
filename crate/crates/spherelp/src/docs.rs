//! JSON documents for lattices, series, LP problems and LP solutions.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use spherelp_core::lpsearch::{LpSolution, SearchProblem};
use spherelp_core::simplex::LpStatus;
use spherelp_core::{CosineSeries, Lattice, Term};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Run configuration embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub command: String,
    pub flags: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
}

impl Meta {
    pub fn new<T: Serialize>(command: &str, flags: &T, seed: Option<u64>) -> Self {
        Meta {
            command: command.to_string(),
            flags: serde_json::to_value(flags).unwrap_or(serde_json::Value::Null),
            seed,
            version: VERSION.to_string(),
        }
    }

    /// The config as `#`-prefixed lines for CSV and plot files.
    pub fn comment_lines(&self) -> Vec<String> {
        let mut out = vec![
            format!("# spherelp {} {}", self.version, self.command),
            format!("# flags: {}", self.flags),
        ];
        if let Some(seed) = self.seed {
            out.push(format!("# seed: {seed}"));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub n: usize,
    pub m: u32,
    /// Basis vectors of the unscaled lattice.
    pub basis: Vec<Vec<f64>>,
}

impl LatticeDoc {
    pub fn from_lattice(l: &Lattice) -> Self {
        LatticeDoc {
            n: l.dim(),
            m: l.scale(),
            basis: l.basis(),
        }
    }

    pub fn to_lattice(&self) -> Result<Lattice> {
        if self.basis.len() != self.n || self.basis.iter().any(|v| v.len() != self.n) {
            bail!("lattice basis must be {0} vectors of length {0}", self.n);
        }
        Ok(Lattice::new(&self.basis, self.m)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub t: Vec<f64>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDoc {
    pub lattice: LatticeDoc,
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl SeriesDoc {
    pub fn from_series(s: &CosineSeries, name: Option<&str>, meta: Option<Meta>) -> Self {
        SeriesDoc {
            lattice: LatticeDoc::from_lattice(s.lattice()),
            terms: s
                .terms()
                .iter()
                .map(|t| TermDoc {
                    t: t.frequency.clone(),
                    c: t.coefficient,
                })
                .collect(),
            name: name.map(str::to_string),
            meta,
        }
    }

    pub fn to_series(&self) -> Result<CosineSeries> {
        let lattice = self.lattice.to_lattice()?;
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.t.clone(), t.c))
            .collect();
        Ok(CosineSeries::new(lattice, terms)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub lattice: LatticeDoc,
    pub frequencies: Vec<Vec<f64>>,
    pub points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

impl ProblemDoc {
    pub fn from_problem(p: &SearchProblem, meta: Option<Meta>) -> Self {
        ProblemDoc {
            lattice: LatticeDoc::from_lattice(&p.lattice),
            frequencies: p.frequencies.clone(),
            points: p.points.clone(),
            meta,
        }
    }

    pub fn to_problem(&self) -> Result<SearchProblem> {
        Ok(SearchProblem {
            lattice: self.lattice.to_lattice()?,
            frequencies: self.frequencies.clone(),
            empty_constraints: self.points.is_empty(),
            points: self.points.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub lattice: LatticeDoc,
    pub status: String,
    pub objective: Option<f64>,
    pub iterations: u64,
    pub terms: Vec<TermDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

pub fn status_name(s: LpStatus) -> &'static str {
    match s {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
        LpStatus::IterationLimit => "iteration-limit",
    }
}

impl SolutionDoc {
    pub fn from_solution(p: &SearchProblem, s: &LpSolution, meta: Option<Meta>) -> Self {
        SolutionDoc {
            lattice: LatticeDoc::from_lattice(&p.lattice),
            status: status_name(s.status).to_string(),
            objective: s.objective.is_finite().then_some(s.objective),
            iterations: s.iterations,
            terms: p
                .frequencies
                .iter()
                .zip(&s.coefficients)
                .map(|(t, &c)| TermDoc { t: t.clone(), c })
                .collect(),
            meta,
        }
    }

    /// The solution viewed as a series document, for `verify` and `bound`.
    pub fn series_doc(&self) -> SeriesDoc {
        SeriesDoc {
            lattice: self.lattice.clone(),
            terms: self.terms.clone(),
            name: Some("lp-solution".to_string()),
            meta: self.meta.clone(),
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

/// Reads a series document, or the series inside a solution document.
pub fn read_series(path: &Path) -> Result<(SeriesDoc, CosineSeries)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let doc: SeriesDoc = if value.get("status").is_some() {
        serde_json::from_value::<SolutionDoc>(value)
            .with_context(|| format!("parsing {}", path.display()))?
            .series_doc()
    } else {
        serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?
    };
    let series = doc
        .to_series()
        .with_context(|| format!("invalid series in {}", path.display()))?;
    Ok((doc, series))
}
