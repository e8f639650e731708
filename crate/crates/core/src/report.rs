// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::circuit::format_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportKind {
    Equivalence,
    Monotonicity,
    OneHot,
    Rail,
}

impl fmt::Display for ReportKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportKind::Equivalence => "EQUIVALENCE",
            ReportKind::Monotonicity => "MONOTONICITY",
            ReportKind::OneHot => "ONE_HOT",
            ReportKind::Rail => "RAIL",
        })
    }
}

/// A concrete discrepancy found by an exhaustive check.
///
/// The meaning of `witness`, `expected` and `observed` depends on `kind`:
///
/// - `Equivalence`: one assignment; reference outputs vs. candidate outputs.
/// - `Monotonicity`: two assignments `u <= v`; `expected` holds the outputs at
///   `u` (a lower bound for the outputs at `v`), `observed` the outputs at `v`.
/// - `Rail`: one target assignment; `expected` is the complement of the one
///   rail, `observed` the zero rail. `wire` names the source wire.
/// - `OneHot`: one assignment; `observed` is the indicator vector of the cell
///   named by `wire`, `expected` is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub kind: ReportKind,
    pub witness: Vec<Vec<bool>>,
    pub expected: Vec<bool>,
    pub observed: Vec<bool>,
    pub wire: Option<String>,
}

fn bits_or_dash(bits: &[bool]) -> String {
    if bits.is_empty() {
        "-".to_string()
    } else {
        format_bits(bits)
    }
}

/// `kind=<K> witness=<bits>[,<bits>] expected=<v> observed=<v>[ wire=<name>]`
impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let witness: Vec<String> = self.witness.iter().map(|w| bits_or_dash(w)).collect();
        write!(
            f,
            "kind={} witness={} expected={} observed={}",
            self.kind,
            witness.join(","),
            bits_or_dash(&self.expected),
            bits_or_dash(&self.observed)
        )?;
        if let Some(wire) = &self.wire {
            write!(f, " wire={wire}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let r = CounterexampleReport {
            kind: ReportKind::Monotonicity,
            witness: vec![vec![false], vec![true]],
            expected: vec![true],
            observed: vec![false],
            wire: None,
        };
        assert_eq!(r.to_string(), "kind=MONOTONICITY witness=0,1 expected=1 observed=0");
        let r = CounterexampleReport {
            kind: ReportKind::Rail,
            witness: vec![vec![]],
            expected: vec![true],
            observed: vec![true],
            wire: Some("g".into()),
        };
        assert_eq!(r.to_string(), "kind=RAIL witness=- expected=1 observed=1 wire=g");
    }
}
