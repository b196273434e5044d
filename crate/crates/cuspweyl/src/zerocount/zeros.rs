use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;

/// A located zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroEntry {
    pub location: Complex64,
    pub multiplicity: u32,
    pub on_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct ZeroRecord {
    re: f64,
    im: f64,
    mult: u32,
    boundary: bool,
}

/// Zeros with multiplicities; flagged boundary zeros weigh 1/2 in sums.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ZeroList {
    pub entries: Vec<ZeroEntry>,
}

impl ZeroList {
    pub fn total_multiplicity(&self) -> u32 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_json(&self) -> Result<String> {
        let recs: Vec<ZeroRecord> = self
            .entries
            .iter()
            .map(|e| ZeroRecord {
                re: e.location.re,
                im: e.location.im,
                mult: e.multiplicity,
                boundary: e.on_boundary,
            })
            .collect();
        Ok(serde_json::to_string_pretty(&recs)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let recs: Vec<ZeroRecord> = serde_json::from_str(text)?;
        Ok(ZeroList {
            entries: recs
                .into_iter()
                .map(|r| ZeroEntry {
                    location: Complex64::new(r.re, r.im),
                    multiplicity: r.mult.max(1),
                    on_boundary: r.boundary,
                })
                .collect(),
        })
    }
}
