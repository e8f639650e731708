// SPDX-License-Identifier: Apache-2.0

//! Exhaustive checks: monotone-function census, refutation of equality as a
//! monotone function, circuit equivalence, semantic monotonicity and size
//! accounting.
//!
//! All searches visit assignments in [`assignment_from_index`] order and
//! report the lowest-index witness, independent of how work is sharded.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{assignment_from_index, assignment_words, format_bits, Circuit, CircuitError};
use crate::dual_rail::flatten_bits;
pub use crate::report::{CounterexampleReport, ReportKind};

pub const MAX_TRUTH_TABLE_ARITY: usize = 5;
pub const MAX_CENSUS_ARITY: usize = 4;
pub const MAX_EQUIV_INPUTS: usize = 20;
pub const MAX_MONOTONE_INPUTS: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("arity {arity} is outside 0..={max}")]
    Arity { arity: usize, max: usize },
    #[error("equality refutation is defined for 1 or 2 bit pairs, got {0}")]
    EqPairs(usize),
    #[error("circuit has {found} inputs; at most {max} are supported")]
    TooManyInputs { found: usize, max: usize },
    #[error("input count mismatch: reference has {reference}, candidate has {candidate} ({mode} mode)")]
    InputMismatch {
        reference: usize,
        candidate: usize,
        mode: EquivMode,
    },
    #[error("output count mismatch: reference has {reference}, candidate has {candidate}")]
    OutputMismatch { reference: usize, candidate: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// A Boolean function of up to [`MAX_TRUTH_TABLE_ARITY`] inputs; entry `i`
/// is the value at `assignment_from_index(i, arity)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    arity: usize,
    bits: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, bits: Vec<bool>) -> Result<Self, VerifyError> {
        if arity > MAX_TRUTH_TABLE_ARITY {
            return Err(VerifyError::Arity {
                arity,
                max: MAX_TRUTH_TABLE_ARITY,
            });
        }
        assert_eq!(bits.len(), 1 << arity, "truth table length must be 2^arity");
        Ok(Self { arity, bits })
    }

    pub fn from_fn(arity: usize, f: impl Fn(&[bool]) -> bool) -> Result<Self, VerifyError> {
        let bits = (0..1u64 << arity)
            .map(|i| f(&assignment_from_index(i, arity)))
            .collect();
        Self::new(arity, bits)
    }

    /// Equality of the first and second halves of the input.
    pub fn equality(pairs: usize) -> Result<Self, VerifyError> {
        Self::from_fn(2 * pairs, |a| a[..pairs] == a[pairs..])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn value(&self, assignment: &[bool]) -> bool {
        let index = assignment.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        self.bits[index]
    }

    /// First single-bit raise `u -> v` with `f(u) > f(v)`, as indices.
    pub fn first_monotonicity_violation(&self) -> Option<(usize, usize)> {
        for u in 0..self.bits.len() {
            for k in 0..self.arity {
                let bit = 1 << (self.arity - 1 - k);
                if u & bit == 0 && self.bits[u] && !self.bits[u | bit] {
                    return Some((u, u | bit));
                }
            }
        }
        None
    }

    pub fn is_monotone(&self) -> bool {
        self.first_monotonicity_violation().is_none()
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(&self.bits))
    }
}

/// Every monotone function of `arity` inputs, ordered by their bit strings.
pub fn enumerate_monotone_functions(arity: usize) -> Result<Vec<TruthTable>, VerifyError> {
    if arity > MAX_CENSUS_ARITY {
        return Err(VerifyError::Arity {
            arity,
            max: MAX_CENSUS_ARITY,
        });
    }
    let len = 1usize << arity;
    let tables = (0..1u64 << len)
        .map(|code| {
            let bits = (0..len).map(|i| (code >> (len - 1 - i)) & 1 == 1).collect();
            TruthTable { arity, bits }
        })
        .filter(TruthTable::is_monotone)
        .collect();
    Ok(tables)
}

/// Concrete refutation that equality over `pairs`-bit halves is monotone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqRefutation {
    pub pairs: usize,
    pub census_size: usize,
    pub eq_in_census: bool,
    pub eq_table: TruthTable,
    /// `low <= mid <= high` pointwise, with equality true at `low` and `high`
    /// and false at `mid`.
    pub chain: [Vec<bool>; 3],
    /// Number of monotone functions that agree with equality at `low` and `high`.
    pub agreeing: usize,
    /// Whether every one of those is forced to 1 at `mid`.
    pub all_forced: bool,
    pub report: CounterexampleReport,
}

impl EqRefutation {
    pub fn holds(&self) -> bool {
        !self.eq_in_census && self.all_forced
    }

    fn tuple(&self, a: &[bool]) -> String {
        let (x, y) = a.split_at(self.pairs);
        format!("({},{})", format_bits(x), format_bits(y))
    }

    /// `(0,0) <= (0,1) <= (1,1)` for one pair.
    pub fn chain_text(&self) -> String {
        let parts: Vec<String> = self.chain.iter().map(|a| self.tuple(a)).collect();
        parts.join(" <= ")
    }
}

impl fmt::Display for EqRefutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arity = 2 * self.pairs;
        let [low, mid, high] = &self.chain;
        writeln!(f, "monotone functions of {arity} inputs: {}", self.census_size)?;
        writeln!(
            f,
            "EQ {} is monotone: {}",
            self.eq_table,
            if self.eq_in_census { "yes" } else { "no" }
        )?;
        writeln!(f, "chain {}", self.chain_text())?;
        writeln!(
            f,
            "EQ along chain: {} {} {}",
            u8::from(self.eq_table.value(low)),
            u8::from(self.eq_table.value(mid)),
            u8::from(self.eq_table.value(high))
        )?;
        writeln!(
            f,
            "monotone f with f{}=f{}=1: {}, all forced to f{}=1: {}",
            self.tuple(low),
            self.tuple(high),
            self.agreeing,
            self.tuple(mid),
            if self.all_forced { "yes" } else { "no" }
        )?;
        write!(f, "{}", self.report)
    }
}

pub fn refute_eq_monotone(pairs: usize) -> Result<EqRefutation, VerifyError> {
    if !(1..=2).contains(&pairs) {
        return Err(VerifyError::EqPairs(pairs));
    }
    let arity = 2 * pairs;
    let census = enumerate_monotone_functions(arity)?;
    let eq = TruthTable::equality(pairs)?;
    let eq_in_census = census.contains(&eq);

    // (0..0, 0..0) <= (0..0, 0..01) <= (0..01, 0..01)
    let low = vec![false; arity];
    let mut mid = low.clone();
    mid[arity - 1] = true;
    let mut high = mid.clone();
    high[pairs - 1] = true;

    let agreeing: Vec<&TruthTable> = census.iter().filter(|f| f.value(&low) && f.value(&high)).collect();
    let all_forced = agreeing.iter().all(|f| f.value(&mid));

    let report = CounterexampleReport {
        kind: ReportKind::Monotonicity,
        witness: vec![low.clone(), mid.clone()],
        expected: vec![eq.value(&low)],
        observed: vec![eq.value(&mid)],
        wire: None,
    };
    Ok(EqRefutation {
        pairs,
        census_size: census.len(),
        eq_in_census,
        eq_table: eq,
        chain: [low, mid, high],
        agreeing: agreeing.len(),
        all_forced,
        report,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivMode {
    /// Both circuits read the same assignment.
    Raw,
    /// The candidate reads the flattened assignment.
    Flattened,
}

impl fmt::Display for EquivMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquivMode::Raw => "RAW",
            EquivMode::Flattened => "FLATTENED",
        })
    }
}

fn candidate_words(words: &[u64], mode: EquivMode) -> Vec<u64> {
    match mode {
        EquivMode::Raw => words.to_vec(),
        EquivMode::Flattened => words.iter().flat_map(|&w| [!w, w]).collect(),
    }
}

fn candidate_assignment(x: &[bool], mode: EquivMode) -> Vec<bool> {
    match mode {
        EquivMode::Raw => x.to_vec(),
        EquivMode::Flattened => flatten_bits(x).into_bits(),
    }
}

/// Compares `reference` and `candidate` on every assignment of the
/// reference's inputs. `Ok(None)` means equivalent.
pub fn exhaustive_equiv(
    reference: &Circuit,
    candidate: &Circuit,
    mode: EquivMode,
) -> Result<Option<CounterexampleReport>, VerifyError> {
    let n = reference.input_count();
    if n > MAX_EQUIV_INPUTS {
        return Err(VerifyError::TooManyInputs {
            found: n,
            max: MAX_EQUIV_INPUTS,
        });
    }
    let expected_inputs = match mode {
        EquivMode::Raw => n,
        EquivMode::Flattened => 2 * n,
    };
    if candidate.input_count() != expected_inputs {
        return Err(VerifyError::InputMismatch {
            reference: n,
            candidate: candidate.input_count(),
            mode,
        });
    }
    if candidate.output_count() != reference.output_count() {
        return Err(VerifyError::OutputMismatch {
            reference: reference.output_count(),
            candidate: candidate.output_count(),
        });
    }

    let blocks = (1u64 << n).div_ceil(64);
    let first = (0..blocks).into_par_iter().find_map_first(|block| {
        let base = block * 64;
        let (words, mask) = assignment_words(n, base);
        let ref_values = reference.simulate_words(&words).expect("input count checked");
        let cand_values = candidate
            .simulate_words(&candidate_words(&words, mode))
            .expect("input count checked");
        let diff = reference
            .outputs()
            .iter()
            .zip(candidate.outputs())
            .fold(0u64, |acc, (r, c)| {
                acc | (ref_values[r.index()] ^ cand_values[c.index()])
            });
        let diff = diff & mask;
        (diff != 0).then(|| base + u64::from(diff.trailing_zeros()))
    });

    let Some(index) = first else {
        return Ok(None);
    };
    let x = assignment_from_index(index, n);
    Ok(Some(CounterexampleReport {
        kind: ReportKind::Equivalence,
        expected: reference.evaluate(&x)?,
        observed: candidate.evaluate(&candidate_assignment(&x, mode))?,
        witness: vec![x],
        wire: None,
    }))
}

/// Replays an equivalence report against the two circuits.
pub fn recheck_equivalence(
    report: &CounterexampleReport,
    reference: &Circuit,
    candidate: &Circuit,
    mode: EquivMode,
) -> Result<bool, VerifyError> {
    let [x] = report.witness.as_slice() else {
        return Ok(false);
    };
    let expected = reference.evaluate(x)?;
    let observed = candidate.evaluate(&candidate_assignment(x, mode))?;
    Ok(report.kind == ReportKind::Equivalence
        && expected != observed
        && report.expected == expected
        && report.observed == observed)
}

/// Checks `u <= v => c(u) <= c(v)` over all single-bit raises.
pub fn check_semantic_monotone(c: &Circuit) -> Result<Option<CounterexampleReport>, VerifyError> {
    let n = c.input_count();
    if n > MAX_MONOTONE_INPUTS {
        return Err(VerifyError::TooManyInputs {
            found: n,
            max: MAX_MONOTONE_INPUTS,
        });
    }
    let total = 1usize << n;
    // outputs[o][i]: output o at assignment i
    let mut outputs = vec![vec![false; total]; c.output_count()];
    for base in (0..total).step_by(64) {
        let (words, mask) = assignment_words(n, base as u64);
        let values = c.simulate_words(&words)?;
        for (o, &wire) in c.outputs().iter().enumerate() {
            let w = values[wire.index()] & mask;
            for lane in 0..(total - base).min(64) {
                outputs[o][base + lane] = (w >> lane) & 1 == 1;
            }
        }
    }
    for u in 0..total {
        for k in 0..n {
            let bit = 1 << (n - 1 - k);
            if u & bit != 0 {
                continue;
            }
            let v = u | bit;
            if outputs.iter().any(|out| out[u] && !out[v]) {
                let at = |i: usize| outputs.iter().map(|out| out[i]).collect::<Vec<_>>();
                return Ok(Some(CounterexampleReport {
                    kind: ReportKind::Monotonicity,
                    witness: vec![assignment_from_index(u as u64, n), assignment_from_index(v as u64, n)],
                    expected: at(u),
                    observed: at(v),
                    wire: None,
                }));
            }
        }
    }
    Ok(None)
}

/// Replays a monotonicity report: `u <= v` and some output drops.
pub fn recheck_monotonicity(report: &CounterexampleReport, c: &Circuit) -> Result<bool, VerifyError> {
    let [u, v] = report.witness.as_slice() else {
        return Ok(false);
    };
    if u.len() != v.len() || u.iter().zip(v).any(|(&a, &b)| a && !b) {
        return Ok(false);
    }
    let (fu, fv) = (c.evaluate(u)?, c.evaluate(v)?);
    Ok(report.kind == ReportKind::Monotonicity
        && fu.iter().zip(&fv).any(|(&a, &b)| a && !b)
        && report.expected == fu
        && report.observed == fv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SizeReport {
    pub source_gates: usize,
    pub target_gates: usize,
    pub ratio: f64,
    pub not_count_source: usize,
    pub not_count_target: usize,
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "source_gates={} target_gates={} ratio={:.4} not_source={} not_target={}",
            self.source_gates, self.target_gates, self.ratio, self.not_count_source, self.not_count_target
        )
    }
}

pub fn size_report(source: &Circuit, target: &Circuit) -> SizeReport {
    let (s, t) = (source.gate_count(), target.gate_count());
    SizeReport {
        source_gates: s,
        target_gates: t,
        ratio: if s == 0 { 1.0 } else { t as f64 / s as f64 },
        not_count_source: source.not_count(),
        not_count_target: target.not_count(),
    }
}
