//! Center-density and packing-density bookkeeping.
//!
//! A sharp ratio `g^#` bounds the center density by `δ ≤ g^#/2ⁿ`; the
//! packing density is `Δ = π^{n/2}/Γ(n/2 + 1)·δ`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::auxfn::CosineSeries;
use crate::error::{Error, Result};
use crate::math::{powf, sqrt, PI};

pub const PER_M_NOTE: &str = "per-m bound: certifies only packings periodic under this scaled lattice; it is not the liminf bound over all m";

pub const LIMINF_NOTE: &str = "sequence bound: empirical liminf estimated as the minimum over the supplied m; it is conservative only if the sequence is eventually monotone";

/// `Γ(s)` for `s = two_s/2`, by factorials for integer `s` and the ladder
/// `Γ(k + 1/2) = (2k)!·√π / (4^k·k!)` otherwise.
pub fn gamma_half_integer(two_s: u32) -> f64 {
    if two_s == 0 {
        return f64::INFINITY;
    }
    if two_s % 2 == 0 {
        (1..two_s / 2).fold(1.0, |acc, k| acc * k as f64)
    } else {
        let k = (two_s - 1) / 2;
        // (2k)!/(4^k·k!) = Π_{j=1..k} (2j − 1)/2
        (1..=k).fold(sqrt(PI), |acc, j| acc * (2 * j - 1) as f64 / 2.0)
    }
}

/// `π^{n/2} / Γ(n/2 + 1)`, the volume of the unit ball in `ℝⁿ`.
pub fn packing_factor(n: usize) -> f64 {
    powf(PI, n as f64 / 2.0) / gamma_half_integer(n as u32 + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// From a single periodic function.
    PerM,
    /// From a sequence of functions over increasing `m`.
    SequenceLiminf,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::PerM => "per-m",
            BoundKind::SequenceLiminf => "sequence-liminf",
        }
    }

    pub fn note(&self) -> &'static str {
        match self {
            BoundKind::PerM => PER_M_NOTE,
            BoundKind::SequenceLiminf => LIMINF_NOTE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    /// Series name or LP run label.
    pub source: String,
    pub ms: Vec<u32>,
    pub kind: BoundKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityBound {
    pub n: usize,
    /// Center density bound.
    pub delta: f64,
    /// Packing density bound.
    pub big_delta: f64,
    pub provenance: Provenance,
}

impl DensityBound {
    pub fn from_sharp(n: usize, sharp: f64, provenance: Provenance) -> Self {
        let delta = sharp / powf(2.0, n as f64);
        DensityBound {
            n,
            delta,
            big_delta: packing_factor(n) * delta,
            provenance,
        }
    }

    /// A human-readable block ending with the note for this bound's kind.
    pub fn report(&self) -> String {
        let ms: Vec<String> = self.provenance.ms.iter().map(|m| format!("{m}")).collect();
        format!(
            "source: {}\nn: {}\nm: {}\ndelta <= {:.12}\nDelta <= {:.12}\nkind: {}\nnote: {}\n",
            self.provenance.source,
            self.n,
            ms.join(","),
            self.delta,
            self.big_delta,
            self.provenance.kind.as_str(),
            self.provenance.kind.note()
        )
    }
}

/// `δ ≤ sharp(s)/2ⁿ` for a single certified series, flagged per-m.
pub fn bound_from_series(s: &CosineSeries, source: &str) -> DensityBound {
    DensityBound::from_sharp(
        s.dim(),
        s.sharp(),
        Provenance {
            source: String::from(source),
            ms: alloc::vec![s.lattice().scale()],
            kind: BoundKind::PerM,
        },
    )
}

/// Empirical liminf of `(m, sharp)` pairs over strictly increasing `m`.
/// A single entry is per-m evidence only.
pub fn sequence_bound(n: usize, source: &str, entries: &[(u32, f64)]) -> Result<DensityBound> {
    if entries.is_empty() {
        return Err(Error::EmptyList);
    }
    if entries.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::NotIncreasing);
    }
    let min = entries.iter().map(|e| e.1).fold(f64::INFINITY, f64::min);
    let kind = if entries.len() == 1 {
        BoundKind::PerM
    } else {
        BoundKind::SequenceLiminf
    };
    Ok(DensityBound::from_sharp(
        n,
        min,
        Provenance {
            source: String::from(source),
            ms: entries.iter().map(|e| e.0).collect(),
            kind,
        },
    ))
}
