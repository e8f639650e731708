// SPDX-License-Identifier: Apache-2.0

//! Dual-rail flattening of assignments and circuits.
//!
//! Each bit `b` becomes the pair `(!b, b)`: `0 -> 10`, `1 -> 01`. The zero
//! rail comes first everywhere. At circuit level every wire `w` is replaced by
//! rails `w__0` / `w__1`, which turns NOT gates into rail swaps and leaves a
//! circuit built from AND, OR and constants only.

use thiserror::Error;

use crate::circuit::{format_bits, Circuit, CircuitBuilder, CircuitError, GateKind, WireId};
use crate::report::{CounterexampleReport, ReportKind};

/// Separator between a source wire name and its rail index.
pub const RAIL_SEPARATOR: &str = "__";

/// Largest source input count accepted by [`validate_rail_complement`].
pub const MAX_RAIL_CHECK_INPUTS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DualRailError {
    #[error("flattened string has odd length {0}")]
    OddLength(usize),
    #[error("rail pair ({},{}) at position {position} is not exclusive", u8::from(.pair.0), u8::from(.pair.1))]
    Exclusivity { position: usize, pair: (bool, bool) },
    #[error("wire name `{0}` contains the reserved rail separator `__`")]
    ReservedName(String),
    #[error("classifier width must be at least 1")]
    ZeroWidth,
    #[error("rail check supports at most {MAX_RAIL_CHECK_INPUTS} source inputs, got {0}")]
    TooManyInputs(usize),
    #[error("rail `{0}` is missing from the transformed circuit")]
    MissingRail(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Names of the two rails of source wire `name`.
pub fn rail_names(name: &str) -> (String, String) {
    (format!("{name}__0"), format!("{name}__1"))
}

/// Rail pair carrying a source wire in the transformed circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RailPair {
    pub zero_rail: String,
    pub one_rail: String,
}

/// A flattened assignment; every consecutive pair is `(1,0)` or `(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlattenedAssignment(Vec<bool>);

impl FlattenedAssignment {
    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.0
    }
}

impl std::fmt::Display for FlattenedAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&format_bits(&self.0))
    }
}

pub fn flatten_bits(target: &[bool]) -> FlattenedAssignment {
    FlattenedAssignment(target.iter().flat_map(|&b| [!b, b]).collect())
}

pub fn unflatten_bits(flat: &[bool]) -> Result<Vec<bool>, DualRailError> {
    if !flat.len().is_multiple_of(2) {
        return Err(DualRailError::OddLength(flat.len()));
    }
    flat.chunks_exact(2)
        .enumerate()
        .map(|(i, pair)| match (pair[0], pair[1]) {
            (true, false) => Ok(false),
            (false, true) => Ok(true),
            pair => Err(DualRailError::Exclusivity { position: i, pair }),
        })
        .collect()
}

/// Monotone equality test over flattened `x` and `y` of `n` bits each.
///
/// For `n = 1` this is exactly `(x0 & y0) | (x1 & y1)` over inputs
/// `x0 x1 y0 y1`. Wider classifiers take `x{i}__0 x{i}__1` for every `i`,
/// then the same for `y`, and AND the per-position results.
pub fn build_eq_classifier(n: usize) -> Result<Circuit, DualRailError> {
    if n == 0 {
        return Err(DualRailError::ZeroWidth);
    }
    let mut b = CircuitBuilder::new();
    if n == 1 {
        let x0 = b.input("x0")?;
        let x1 = b.input("x1")?;
        let y0 = b.input("y0")?;
        let y1 = b.input("y1")?;
        let a = b.and("a", x0, y0)?;
        let bb = b.and("b", x1, y1)?;
        let e = b.or("e", a, bb)?;
        b.output(e);
        return Ok(b.finish());
    }
    let mut rails = Vec::with_capacity(2 * n);
    for side in ["x", "y"] {
        for i in 0..n {
            let (zero, one) = rail_names(&format!("{side}{i}"));
            rails.push((b.input(zero)?, b.input(one)?));
        }
    }
    let mut acc: Option<WireId> = None;
    for i in 0..n {
        let (x0, x1) = rails[i];
        let (y0, y1) = rails[n + i];
        let a = b.and(format!("a{i}"), x0, y0)?;
        let bb = b.and(format!("b{i}"), x1, y1)?;
        let e = b.or(format!("e{i}"), a, bb)?;
        acc = Some(match acc {
            None => e,
            Some(prev) if i + 1 == n => b.and("eq", prev, e)?,
            Some(prev) => b.and(format!("q{i}"), prev, e)?,
        });
    }
    b.output(acc.expect("n >= 1"));
    Ok(b.finish())
}

/// For each gate of `source`, the pair of gate names that carry its zero and
/// one rail in `dual_rail_transform(source)`. NOT gates resolve to their
/// operand's rails, swapped.
pub fn rail_map(source: &Circuit) -> Vec<RailPair> {
    let mut map: Vec<RailPair> = Vec::with_capacity(source.gate_count());
    for gate in source.gates() {
        let pair = match gate.kind {
            GateKind::Not(a) => {
                let inner = &map[a.index()];
                RailPair {
                    zero_rail: inner.one_rail.clone(),
                    one_rail: inner.zero_rail.clone(),
                }
            }
            _ => {
                let (zero_rail, one_rail) = rail_names(&gate.name);
                RailPair { zero_rail, one_rail }
            }
        };
        map.push(pair);
    }
    map
}

/// Rewrites `source` into a NOT-free circuit over rail-pair inputs that
/// computes the same function on flattened assignments.
pub fn dual_rail_transform(source: &Circuit) -> Result<Circuit, DualRailError> {
    if let Some(g) = source.gates().iter().find(|g| g.name.contains(RAIL_SEPARATOR)) {
        return Err(DualRailError::ReservedName(g.name.clone()));
    }
    let mut b = CircuitBuilder::new();
    // (zero, one) per source gate
    let mut rails: Vec<(WireId, WireId)> = Vec::with_capacity(source.gate_count());
    for gate in source.gates() {
        let (zero_name, one_name) = rail_names(&gate.name);
        let pair = match gate.kind {
            GateKind::Input => (b.input(zero_name)?, b.input(one_name)?),
            GateKind::Const(k) => (b.constant(zero_name, !k)?, b.constant(one_name, k)?),
            GateKind::Not(a) => {
                let (z, o) = rails[a.index()];
                (o, z)
            }
            GateKind::And(x, y) => {
                let (xz, xo) = rails[x.index()];
                let (yz, yo) = rails[y.index()];
                let zero = b.or(zero_name, xz, yz)?;
                let one = b.and(one_name, xo, yo)?;
                (zero, one)
            }
            GateKind::Or(x, y) => {
                let (xz, xo) = rails[x.index()];
                let (yz, yo) = rails[y.index()];
                let zero = b.and(zero_name, xz, yz)?;
                let one = b.or(one_name, xo, yo)?;
                (zero, one)
            }
        };
        rails.push(pair);
    }
    for o in source.outputs() {
        b.output(rails[o.index()].1);
    }
    Ok(b.finish())
}

/// Checks that every source wire's rails stay complementary on every valid
/// flattened assignment. Returns the first violation (lowest target
/// assignment, then source gate order).
pub fn validate_rail_complement(
    source: &Circuit,
    transformed: &Circuit,
) -> Result<Option<CounterexampleReport>, DualRailError> {
    let n = source.input_count();
    if n > MAX_RAIL_CHECK_INPUTS {
        return Err(DualRailError::TooManyInputs(n));
    }
    let rails = resolve_rails(source, transformed)?;
    for index in 0..1u64 << n {
        let target = crate::circuit::assignment_from_index(index, n);
        if let Some(report) = rail_violation(source, transformed, &rails, &target)? {
            return Ok(Some(report));
        }
    }
    Ok(None)
}

/// Re-evaluates a rail report's witness and confirms the discrepancy.
pub fn recheck_rail_report(
    report: &CounterexampleReport,
    source: &Circuit,
    transformed: &Circuit,
) -> Result<bool, DualRailError> {
    let (Some(wire), [target]) = (&report.wire, report.witness.as_slice()) else {
        return Ok(false);
    };
    let Some(id) = source.wire(wire) else {
        return Ok(false);
    };
    let rails = resolve_rails(source, transformed)?;
    let values = transformed.evaluate_all(flatten_bits(target).bits())?;
    let (z, o) = rails[id.index()];
    let (zero, one) = (values[z.index()], values[o.index()]);
    Ok(report.kind == ReportKind::Rail && zero == one && report.observed == [zero] && report.expected == [!one])
}

fn resolve_rails(source: &Circuit, transformed: &Circuit) -> Result<Vec<(WireId, WireId)>, DualRailError> {
    rail_map(source)
        .into_iter()
        .map(|pair| {
            let find = |name: &str| {
                transformed
                    .wire(name)
                    .ok_or_else(|| DualRailError::MissingRail(name.to_string()))
            };
            Ok((find(&pair.zero_rail)?, find(&pair.one_rail)?))
        })
        .collect()
}

fn rail_violation(
    source: &Circuit,
    transformed: &Circuit,
    rails: &[(WireId, WireId)],
    target: &[bool],
) -> Result<Option<CounterexampleReport>, DualRailError> {
    let values = transformed.evaluate_all(flatten_bits(target).bits())?;
    for (gate, &(z, o)) in source.gates().iter().zip(rails) {
        let (zero, one) = (values[z.index()], values[o.index()]);
        if zero == one {
            return Ok(Some(CounterexampleReport {
                kind: ReportKind::Rail,
                witness: vec![target.to_vec()],
                expected: vec![!one],
                observed: vec![zero],
                wire: Some(gate.name.clone()),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{assignment_from_index, parse_bits, parse_netlist};

    const EQ_NOT: &str = "input x\ninput y\nand p x y\nnot nx x\nnot ny y\nand q nx ny\nor e p q\noutput e\n";

    fn bits(s: &str) -> Vec<bool> {
        parse_bits(s).unwrap()
    }

    #[test]
    fn flatten_examples() {
        assert_eq!(flatten_bits(&bits("0")).bits(), bits("10"));
        assert_eq!(flatten_bits(&bits("1")).bits(), bits("01"));
        assert_eq!(flatten_bits(&[]).bits(), &[] as &[bool]);
        assert_eq!(flatten_bits(&bits("101")).to_string(), "011001");
    }

    #[test]
    fn unflatten_examples() {
        assert_eq!(unflatten_bits(&bits("10")).unwrap(), bits("0"));
        assert_eq!(unflatten_bits(&bits("011001")).unwrap(), bits("101"));
        assert_eq!(
            unflatten_bits(&bits("0011")).unwrap_err(),
            DualRailError::Exclusivity {
                position: 0,
                pair: (false, false)
            }
        );
        assert_eq!(unflatten_bits(&bits("011")).unwrap_err(), DualRailError::OddLength(3));
    }

    #[test]
    fn single_classifier_is_the_two_and_one_or_circuit() {
        let c = build_eq_classifier(1).unwrap();
        let text = "input x0\ninput x1\ninput y0\ninput y1\nand a x0 y0\nand b x1 y1\nor e a b\noutput e\n";
        assert_eq!(c.to_netlist(), text);
        assert_eq!(c.evaluate(&bits("1010")).unwrap(), vec![true]);
        assert_eq!(c.evaluate(&bits("0110")).unwrap(), vec![false]);
        assert_eq!(build_eq_classifier(0).unwrap_err(), DualRailError::ZeroWidth);
    }

    #[test]
    fn wide_classifier_matches_equality() {
        for n in 2..=3 {
            let c = build_eq_classifier(n).unwrap();
            assert!(c.is_structurally_monotone());
            assert_eq!(c.input_count(), 4 * n);
            for xi in 0..1u64 << n {
                for yi in 0..1u64 << n {
                    let x = assignment_from_index(xi, n);
                    let y = assignment_from_index(yi, n);
                    let mut input = flatten_bits(&x).into_bits();
                    input.extend(flatten_bits(&y).into_bits());
                    assert_eq!(c.evaluate(&input).unwrap(), vec![xi == yi]);
                }
            }
        }
    }

    #[test]
    fn not_becomes_rail_swap() {
        let b = parse_netlist("input x\nnot n x\noutput n").unwrap();
        let m = dual_rail_transform(&b).unwrap();
        let s = m.stats();
        assert_eq!((s.and, s.or, s.not), (0, 0, 0));
        assert_eq!(m.name(m.outputs()[0]), "x__0");
        assert_eq!(m.evaluate(&bits("10")).unwrap(), vec![true]);
    }

    #[test]
    fn eq_with_not_is_simulated() {
        let b = parse_netlist(EQ_NOT).unwrap();
        let m = dual_rail_transform(&b).unwrap();
        assert!(m.is_structurally_monotone());
        let names: Vec<&str> = m.inputs().iter().map(|&i| m.name(i)).collect();
        assert_eq!(names, ["x__0", "x__1", "y__0", "y__1"]);
        for i in 0..4 {
            let a = assignment_from_index(i, 2);
            assert_eq!(m.evaluate(flatten_bits(&a).bits()).unwrap(), b.evaluate(&a).unwrap());
        }
        let (bs, ms) = (b.stats(), m.stats());
        assert_eq!(ms.and_or(), 2 * bs.and_or());
        assert_eq!(validate_rail_complement(&b, &m).unwrap(), None);
    }

    #[test]
    fn constants_get_complementary_rails() {
        let b = parse_netlist("input x\nconst t 1\nand g x t\noutput g").unwrap();
        let m = dual_rail_transform(&b).unwrap();
        assert!(m.to_netlist().contains("const t__0 0\nconst t__1 1\n"));
        assert_eq!(validate_rail_complement(&b, &m).unwrap(), None);
    }

    #[test]
    fn reserved_separator_is_rejected() {
        let b = parse_netlist("input a__b\noutput a__b").unwrap();
        assert_eq!(
            dual_rail_transform(&b).unwrap_err(),
            DualRailError::ReservedName("a__b".into())
        );
    }

    #[test]
    fn identity_rails_are_inputs() {
        let b = parse_netlist("input x\noutput x").unwrap();
        let m = dual_rail_transform(&b).unwrap();
        assert_eq!(validate_rail_complement(&b, &m).unwrap(), None);
    }

    #[test]
    fn corrupted_rail_is_reported() {
        let b = parse_netlist(EQ_NOT).unwrap();
        let m = dual_rail_transform(&b).unwrap();
        // p__0 should be x__0 | y__0
        let corrupted = m.to_netlist().replace("or p__0 x__0 y__0", "and p__0 x__0 y__0");
        let bad = parse_netlist(&corrupted).unwrap();
        let report = validate_rail_complement(&b, &bad).unwrap().expect("violation");
        assert_eq!(report.wire.as_deref(), Some("p"));
        assert_eq!(report.witness, vec![bits("01")]);
        assert!(recheck_rail_report(&report, &b, &bad).unwrap());
        assert!(!recheck_rail_report(&report, &b, &m).unwrap());
    }
}
