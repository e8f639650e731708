// SPDX-License-Identifier: Apache-2.0

//! Gate-level Boolean circuit IR.
//!
//! A [`Circuit`] is an immutable DAG whose gate list is already in topological
//! order: every operand refers to a gate defined earlier. Construction goes
//! through [`CircuitBuilder`] (or [`parse_netlist`]), which enforces that order,
//! name uniqueness and identifier syntax.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

/// Index of a gate inside its circuit's gate list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WireId(pub(crate) u32);

impl WireId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Input,
    Const(bool),
    And(WireId, WireId),
    Or(WireId, WireId),
    Not(WireId),
}

impl GateKind {
    pub fn operands(&self) -> impl Iterator<Item = WireId> {
        let (a, b) = match *self {
            GateKind::Input | GateKind::Const(_) => (None, None),
            GateKind::And(a, b) | GateKind::Or(a, b) => (Some(a), Some(b)),
            GateKind::Not(a) => (Some(a), None),
        };
        a.into_iter().chain(b)
    }

    fn keyword(&self) -> &'static str {
        match self {
            GateKind::Input => "input",
            GateKind::Const(_) => "const",
            GateKind::And(..) => "and",
            GateKind::Or(..) => "or",
            GateKind::Not(_) => "not",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub name: String,
    pub kind: GateKind,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: duplicate definition of `{name}`")]
    Duplicate { line: usize, name: String },
    #[error("line {line}: undefined reference `{name}`")]
    Undefined { line: usize, name: String },
    #[error("line {line}: `{keyword}` expects {expected} operand(s), found {found}")]
    Arity {
        line: usize,
        keyword: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid identifier `{0}`")]
    InvalidName(String),
    #[error("duplicate gate name `{0}`")]
    DuplicateName(String),
    #[error("assignment has {found} bits but the circuit has {expected} inputs")]
    AssignmentLength { expected: usize, found: usize },
}

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone)]
pub struct Circuit {
    gates: Vec<Gate>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    names: HashMap<String, WireId>,
}

impl PartialEq for Circuit {
    fn eq(&self, other: &Self) -> bool {
        self.gates == other.gates && self.inputs == other.inputs && self.outputs == other.outputs
    }
}

impl Eq for Circuit {}

impl Circuit {
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: WireId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn input_count(&self) -> usize {
        self.inputs.len()
    }

    pub fn output_count(&self) -> usize {
        self.outputs.len()
    }

    pub fn gate_count(&self) -> usize {
        self.gates.len()
    }

    pub fn wire(&self, name: &str) -> Option<WireId> {
        self.names.get(name).copied()
    }

    pub fn name(&self, id: WireId) -> &str {
        &self.gates[id.index()].name
    }

    pub fn not_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g.kind, GateKind::Not(_))).count()
    }

    /// True iff the circuit contains no NOT gate.
    pub fn is_structurally_monotone(&self) -> bool {
        self.not_count() == 0
    }

    /// Output values for one assignment, positionally matched to [`Circuit::inputs`].
    pub fn evaluate(&self, assignment: &[bool]) -> Result<Vec<bool>, CircuitError> {
        let values = self.evaluate_all(assignment)?;
        Ok(self.outputs.iter().map(|o| values[o.index()]).collect())
    }

    /// Value of every gate, indexed like [`Circuit::gates`].
    pub fn evaluate_all(&self, assignment: &[bool]) -> Result<Vec<bool>, CircuitError> {
        self.check_assignment(assignment.len())?;
        let mut values = Vec::with_capacity(self.gates.len());
        let mut next_input = 0;
        for gate in &self.gates {
            let v = match gate.kind {
                GateKind::Input => {
                    next_input += 1;
                    assignment[next_input - 1]
                }
                GateKind::Const(bit) => bit,
                GateKind::And(a, b) => values[a.index()] && values[b.index()],
                GateKind::Or(a, b) => values[a.index()] || values[b.index()],
                GateKind::Not(a) => !values[a.index()],
            };
            values.push(v);
        }
        Ok(values)
    }

    /// Bit-parallel simulation: lane `l` of each word is an independent
    /// assignment. Returns one word per gate.
    pub fn simulate_words(&self, inputs: &[u64]) -> Result<Vec<u64>, CircuitError> {
        self.check_assignment(inputs.len())?;
        let mut values: Vec<u64> = Vec::with_capacity(self.gates.len());
        let mut next_input = 0;
        for gate in &self.gates {
            let v = match gate.kind {
                GateKind::Input => {
                    next_input += 1;
                    inputs[next_input - 1]
                }
                GateKind::Const(bit) => {
                    if bit {
                        u64::MAX
                    } else {
                        0
                    }
                }
                GateKind::And(a, b) => values[a.index()] & values[b.index()],
                GateKind::Or(a, b) => values[a.index()] | values[b.index()],
                GateKind::Not(a) => !values[a.index()],
            };
            values.push(v);
        }
        Ok(values)
    }

    fn check_assignment(&self, len: usize) -> Result<(), CircuitError> {
        if len != self.inputs.len() {
            return Err(CircuitError::AssignmentLength {
                expected: self.inputs.len(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn stats(&self) -> CircuitStats {
        let mut stats = CircuitStats {
            input_count: self.inputs.len(),
            output_count: self.outputs.len(),
            ..CircuitStats::default()
        };
        let mut level = vec![0usize; self.gates.len()];
        for (i, gate) in self.gates.iter().enumerate() {
            match gate.kind {
                GateKind::Input => stats.inputs += 1,
                GateKind::Const(_) => stats.consts += 1,
                GateKind::And(..) => stats.and += 1,
                GateKind::Or(..) => stats.or += 1,
                GateKind::Not(_) => stats.not += 1,
            }
            level[i] = gate.kind.operands().map(|op| level[op.index()] + 1).max().unwrap_or(0);
        }
        stats.depth = self.outputs.iter().map(|o| level[o.index()]).max().unwrap_or(0);
        stats
    }

    /// Canonical netlist text. `parse_netlist(&c.to_netlist())` equals `c`.
    pub fn to_netlist(&self) -> String {
        let mut out = String::new();
        for gate in &self.gates {
            out.push_str(gate.kind.keyword());
            out.push(' ');
            out.push_str(&gate.name);
            match gate.kind {
                GateKind::Input => {}
                GateKind::Const(bit) => out.push_str(if bit { " 1" } else { " 0" }),
                GateKind::And(a, b) | GateKind::Or(a, b) => {
                    let _ = write!(out, " {} {}", self.name(a), self.name(b));
                }
                GateKind::Not(a) => {
                    let _ = write!(out, " {}", self.name(a));
                }
            }
            out.push('\n');
        }
        for &o in &self.outputs {
            let _ = writeln!(out, "output {}", self.name(o));
        }
        out
    }

    /// Graphviz description: one node per gate, one edge per operand, plus a
    /// sink node per output.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph circuit {\n  rankdir=LR;\n");
        for (i, gate) in self.gates.iter().enumerate() {
            let (label, shape) = match gate.kind {
                GateKind::Input => (gate.name.to_string(), "invtriangle"),
                GateKind::Const(bit) => (format!("{}={}", gate.name, u8::from(bit)), "box"),
                GateKind::And(..) => (format!("AND {}", gate.name), "ellipse"),
                GateKind::Or(..) => (format!("OR {}", gate.name), "ellipse"),
                GateKind::Not(_) => (format!("NOT {}", gate.name), "diamond"),
            };
            let _ = writeln!(out, "  g{i} [label=\"{label}\", shape={shape}];");
        }
        for (i, gate) in self.gates.iter().enumerate() {
            for op in gate.kind.operands() {
                let _ = writeln!(out, "  g{} -> g{i};", op.index());
            }
        }
        for (k, o) in self.outputs.iter().enumerate() {
            let _ = writeln!(out, "  out{k} [label=\"{}\", shape=triangle];", self.name(*o));
            let _ = writeln!(out, "  g{} -> out{k};", o.index());
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_netlist())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CircuitStats {
    pub inputs: usize,
    pub consts: usize,
    pub and: usize,
    pub or: usize,
    pub not: usize,
    pub depth: usize,
    pub input_count: usize,
    pub output_count: usize,
}

impl CircuitStats {
    pub fn total(&self) -> usize {
        self.inputs + self.consts + self.and + self.or + self.not
    }

    pub fn and_or(&self) -> usize {
        self.and + self.or
    }
}

impl fmt::Display for CircuitStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "gates={} input={} const={} and={} or={} not={} depth={} inputs={} outputs={}",
            self.total(),
            self.inputs,
            self.consts,
            self.and,
            self.or,
            self.not,
            self.depth,
            self.input_count,
            self.output_count
        )
    }
}

/// Incremental, order-enforcing constructor for [`Circuit`].
#[derive(Debug, Default, Clone)]
pub struct CircuitBuilder {
    gates: Vec<Gate>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
    names: HashMap<String, WireId>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<WireId> {
        self.names.get(name).copied()
    }

    fn push(&mut self, name: impl Into<String>, kind: GateKind) -> Result<WireId, CircuitError> {
        let name = name.into();
        if !is_valid_identifier(&name) {
            return Err(CircuitError::InvalidName(name));
        }
        if self.names.contains_key(&name) {
            return Err(CircuitError::DuplicateName(name));
        }
        debug_assert!(kind.operands().all(|op| op.index() < self.gates.len()));
        let id = WireId(self.gates.len() as u32);
        self.names.insert(name.clone(), id);
        self.gates.push(Gate { name, kind });
        Ok(id)
    }

    pub fn input(&mut self, name: impl Into<String>) -> Result<WireId, CircuitError> {
        let id = self.push(name, GateKind::Input)?;
        self.inputs.push(id);
        Ok(id)
    }

    pub fn constant(&mut self, name: impl Into<String>, bit: bool) -> Result<WireId, CircuitError> {
        self.push(name, GateKind::Const(bit))
    }

    pub fn and(&mut self, name: impl Into<String>, a: WireId, b: WireId) -> Result<WireId, CircuitError> {
        self.push(name, GateKind::And(a, b))
    }

    pub fn or(&mut self, name: impl Into<String>, a: WireId, b: WireId) -> Result<WireId, CircuitError> {
        self.push(name, GateKind::Or(a, b))
    }

    pub fn not(&mut self, name: impl Into<String>, a: WireId) -> Result<WireId, CircuitError> {
        self.push(name, GateKind::Not(a))
    }

    pub fn output(&mut self, id: WireId) {
        assert!(id.index() < self.gates.len(), "output refers to an undefined wire");
        self.outputs.push(id);
    }

    pub fn finish(self) -> Circuit {
        Circuit {
            gates: self.gates,
            inputs: self.inputs,
            outputs: self.outputs,
            names: self.names,
        }
    }
}

/// Parses the line-oriented netlist format. Definitions must precede uses.
pub fn parse_netlist(text: &str) -> Result<Circuit, CircuitError> {
    let mut builder = CircuitBuilder::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_ascii_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else {
            continue;
        };
        let expected = match keyword {
            "input" | "output" => 1,
            "const" | "not" => 2,
            "and" | "or" => 3,
            other => {
                return Err(CircuitError::Syntax {
                    line,
                    message: format!("unknown keyword `{other}`"),
                })
            }
        };
        if rest.len() != expected {
            return Err(CircuitError::Arity {
                line,
                keyword: keyword.to_string(),
                expected,
                found: rest.len(),
            });
        }
        let names = if keyword == "const" { &rest[..1] } else { rest };
        for name in names {
            if !is_valid_identifier(name) {
                return Err(CircuitError::Syntax {
                    line,
                    message: format!("invalid identifier `{name}`"),
                });
            }
        }
        let resolve = |name: &str| {
            builder.lookup(name).ok_or_else(|| CircuitError::Undefined {
                line,
                name: name.to_string(),
            })
        };
        let kind = match keyword {
            "output" => {
                let id = resolve(rest[0])?;
                builder.output(id);
                continue;
            }
            "input" => GateKind::Input,
            "const" => match rest[1] {
                "0" => GateKind::Const(false),
                "1" => GateKind::Const(true),
                other => {
                    return Err(CircuitError::Syntax {
                        line,
                        message: format!("constant must be 0 or 1, found `{other}`"),
                    })
                }
            },
            "not" => GateKind::Not(resolve(rest[1])?),
            "and" => GateKind::And(resolve(rest[1])?, resolve(rest[2])?),
            "or" => GateKind::Or(resolve(rest[1])?, resolve(rest[2])?),
            _ => unreachable!(),
        };
        let name = rest[0];
        if builder.lookup(name).is_some() {
            return Err(CircuitError::Duplicate {
                line,
                name: name.to_string(),
            });
        }
        let result = match kind {
            GateKind::Input => builder.input(name),
            kind => builder.push(name, kind),
        };
        result.map_err(|e| CircuitError::Syntax {
            line,
            message: e.to_string(),
        })?;
    }
    Ok(builder.finish())
}

/// Renders `bits` as a `0`/`1` string.
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid bit character {found:?} at position {position}")]
pub struct BitParseError {
    pub position: usize,
    pub found: char,
}

/// Parses a `0`/`1` string. Any other character is rejected.
pub fn parse_bits(text: &str) -> Result<Vec<bool>, BitParseError> {
    text.chars()
        .enumerate()
        .map(|(position, c)| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            found => Err(BitParseError { position, found }),
        })
        .collect()
}

/// Assignment number `index` over `n` inputs, first input most significant.
pub fn assignment_from_index(index: u64, n: usize) -> Vec<bool> {
    (0..n).map(|k| (index >> (n - 1 - k)) & 1 == 1).collect()
}

/// Input words for the 64 consecutive assignments starting at `base`
/// (a multiple of 64), in [`assignment_from_index`] order. The returned mask
/// has a bit set for every lane below `2^n`.
pub fn assignment_words(n: usize, base: u64) -> (Vec<u64>, u64) {
    let total: u128 = 1u128 << n;
    let lanes = (total.saturating_sub(base as u128)).min(64) as u32;
    let mask = if lanes == 64 { u64::MAX } else { (1u64 << lanes) - 1 };
    let words = (0..n)
        .map(|k| {
            let shift = n - 1 - k;
            let mut word = 0u64;
            for lane in 0..lanes as u64 {
                if ((base + lane) >> shift) & 1 == 1 {
                    word |= 1 << lane;
                }
            }
            word
        })
        .collect();
    (words, mask)
}
