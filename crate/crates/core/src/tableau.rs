// SPDX-License-Identifier: Apache-2.0

//! Tableau compilation of a Turing machine into a Boolean circuit.
//!
//! The circuit materializes the `(t+1) x (t+1)` configuration history. Every
//! cell holds a one-hot vector over the [`CellAlphabet`]: plain tape symbols
//! followed by every `(state, symbol)` head marker. Row 0 is the initial
//! configuration; row `r+1` is computed from the three cells above each
//! column. Cell `(r, j, k)` is the gate named `c_{r}_{j}_{k}`.
//!
//! In standard mode the only NOT gates are the `n` input complements in the
//! row-0 layer. In flattened mode those complements are read from the zero
//! rail of a flattened input pair instead, so the circuit has no NOT gates at
//! all; every other gate is identical between the two modes.
//!
//! The window rules are grouped by neighbour class rather than enumerated as
//! explicit symbol triples. For target cell `j`:
//!
//! - tape symbol `a` survives when the cell holds `a` and no head enters from
//!   either side (`a & no_right_mover(j-1) & no_left_mover(j+1)`);
//! - a head at `j` that writes `a` and moves away leaves `a` behind;
//! - head `(q', a)` appears when a head moving into `j` switches to `q'` and
//!   the cell holds `a`, when a head at the left wall moves L, or when a
//!   halting head sits still (accept and reject are absorbing).
//!
//! Because the row above is one-hot and holds at most one head, every term is
//! a conjunction of positive wires and exactly one term fires per cell.

use std::fmt;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, CircuitError, WireId};
use crate::dual_rail::rail_names;
use crate::report::{CounterexampleReport, ReportKind};
use crate::tm::{Configuration, Move, StateId, SymbolId, TuringMachine};

pub const DEFAULT_GATE_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableauError {
    #[error("step bound must be at least 1")]
    ZeroSteps,
    #[error("input length {n} exceeds the tableau width {cols}")]
    InputTooLong { n: usize, cols: usize },
    #[error("compiled circuit would exceed the gate cap of {cap}")]
    GateCap { cap: usize },
    #[error("cell ({row}, {col}) is not one-hot ({hot} symbols set)")]
    NotOneHot { row: usize, col: usize, hot: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Content of one tableau cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellSymbol {
    Tape(SymbolId),
    Head(StateId, SymbolId),
}

impl CellSymbol {
    pub fn display<'a>(&self, tm: &'a TuringMachine) -> CellDisplay<'a> {
        CellDisplay { tm, symbol: *self }
    }
}

pub struct CellDisplay<'a> {
    tm: &'a TuringMachine,
    symbol: CellSymbol,
}

impl fmt::Display for CellDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.symbol {
            CellSymbol::Tape(s) => f.write_str(self.tm.symbol_name(s)),
            CellSymbol::Head(q, s) => {
                write!(f, "({},{})", self.tm.state_name(q), self.tm.symbol_name(s))
            }
        }
    }
}

/// Tape symbols in declaration order, then `(q, s)` for every state `q` and
/// symbol `s`, both in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellAlphabet {
    symbols: usize,
    states: usize,
}

impl CellAlphabet {
    pub fn new(tm: &TuringMachine) -> Self {
        Self {
            symbols: tm.alphabet().len(),
            states: tm.states().len(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols + self.states * self.symbols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, symbol: CellSymbol) -> usize {
        match symbol {
            CellSymbol::Tape(s) => s.0,
            CellSymbol::Head(q, s) => self.symbols + q.0 * self.symbols + s.0,
        }
    }

    pub fn entry(&self, index: usize) -> CellSymbol {
        assert!(index < self.len(), "cell symbol index out of range");
        if index < self.symbols {
            CellSymbol::Tape(SymbolId(index))
        } else {
            let rest = index - self.symbols;
            CellSymbol::Head(StateId(rest / self.symbols), SymbolId(rest % self.symbols))
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = CellSymbol> + '_ {
        (0..self.len()).map(|k| self.entry(k))
    }
}

/// Wire layout of a compiled tableau.
#[derive(Debug, Clone)]
pub struct TableauSchema {
    pub rows: usize,
    pub cols: usize,
    pub n: usize,
    pub alphabet: CellAlphabet,
    wires: Vec<WireId>,
}

impl TableauSchema {
    pub fn wire_name(row: usize, col: usize, symbol_index: usize) -> String {
        format!("c_{row}_{col}_{symbol_index}")
    }

    /// Gate carrying cell `(row, col)`'s indicator for `symbol_index`.
    pub fn wire(&self, row: usize, col: usize, symbol_index: usize) -> WireId {
        let width = self.alphabet.len();
        self.wires[(row * self.cols + col) * width + symbol_index]
    }

    /// Decodes every cell from a full gate-value vector of the compiled circuit.
    pub fn decode(&self, values: &[bool]) -> Result<Vec<Vec<CellSymbol>>, TableauError> {
        (0..self.rows)
            .map(|row| {
                (0..self.cols)
                    .map(|col| {
                        let hot: Vec<usize> = (0..self.alphabet.len())
                            .filter(|&k| values[self.wire(row, col, k).index()])
                            .collect();
                        match hot.as_slice() {
                            [k] => Ok(self.alphabet.entry(*k)),
                            _ => Err(TableauError::NotOneHot {
                                row,
                                col,
                                hot: hot.len(),
                            }),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// First cell whose indicator vector is not one-hot, as a report.
    pub fn one_hot_violation(&self, witness: &[bool], values: &[bool]) -> Option<CounterexampleReport> {
        for row in 0..self.rows {
            for col in 0..self.cols {
                let indicators: Vec<bool> = (0..self.alphabet.len())
                    .map(|k| values[self.wire(row, col, k).index()])
                    .collect();
                if indicators.iter().filter(|&&b| b).count() != 1 {
                    return Some(CounterexampleReport {
                        kind: ReportKind::OneHot,
                        witness: vec![witness.to_vec()],
                        expected: Vec::new(),
                        observed: indicators,
                        wire: Some(format!("c_{row}_{col}")),
                    });
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputMode {
    /// `n` raw inputs `x{i}`, complemented by NOT gates `nx{i}`.
    Standard,
    /// `2n` rail inputs `x{i}__0`, `x{i}__1`.
    Flattened,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub gate_cap: usize,
}

impl Default for CompileOptions {
    fn default() -> Self {
        Self {
            gate_cap: DEFAULT_GATE_CAP,
        }
    }
}

pub fn compile(tm: &TuringMachine, n: usize, t: usize) -> Result<Circuit, TableauError> {
    compile_with(tm, n, t, InputMode::Standard, &CompileOptions::default()).map(|(c, _)| c)
}

pub fn compile_flattened(tm: &TuringMachine, n: usize, t: usize) -> Result<Circuit, TableauError> {
    compile_with(tm, n, t, InputMode::Flattened, &CompileOptions::default()).map(|(c, _)| c)
}

/// Decoded tableau rows for input `x` with step bound `t`.
pub fn tableau_trace(tm: &TuringMachine, x: &[bool], t: usize) -> Result<Vec<Vec<CellSymbol>>, TableauError> {
    let (circuit, schema) = compile_with(tm, x.len(), t, InputMode::Standard, &CompileOptions::default())?;
    let values = circuit.evaluate_all(x)?;
    schema.decode(&values)
}

/// Renders a configuration as `width` tableau cells.
pub fn render_configuration(tm: &TuringMachine, c: &Configuration, width: usize) -> Vec<CellSymbol> {
    let blank = tm.blank();
    (0..width)
        .map(|j| {
            let s = c.cell(j, blank);
            if j == c.head {
                CellSymbol::Head(c.state, s)
            } else {
                CellSymbol::Tape(s)
            }
        })
        .collect()
}

/// Window rule tables derived once per machine.
struct Rules {
    alphabet: CellAlphabet,
    /// Cell symbols that are not a head about to move right.
    not_right_mover: Vec<usize>,
    /// Cell symbols that are not a head about to move left.
    not_left_mover: Vec<usize>,
    /// Per next state: right-moving heads that switch to it.
    right_into: Vec<Vec<usize>>,
    /// Per next state: left-moving heads that switch to it.
    left_into: Vec<Vec<usize>>,
    /// Per tape symbol: active heads that write it (any direction).
    writers: Vec<Vec<(usize, Move)>>,
    /// Per cell symbol index of a head `(q', a)`: left-moving heads that
    /// write `a` and switch to `q'` (stays put at the wall).
    wall: Vec<Vec<usize>>,
    halting: Vec<bool>,
}

impl Rules {
    fn new(tm: &TuringMachine) -> Self {
        let alphabet = CellAlphabet::new(tm);
        let states = tm.states().len();
        let symbols = tm.alphabet().len();
        let mut rules = Rules {
            alphabet,
            not_right_mover: Vec::new(),
            not_left_mover: Vec::new(),
            right_into: vec![Vec::new(); states],
            left_into: vec![Vec::new(); states],
            writers: vec![Vec::new(); symbols],
            wall: vec![Vec::new(); alphabet.len()],
            halting: (0..states).map(|q| tm.is_halting(StateId(q))).collect(),
        };
        for (k, entry) in alphabet.entries().enumerate() {
            let step = match entry {
                CellSymbol::Head(q, s) => tm.transition(q, s),
                CellSymbol::Tape(_) => None,
            };
            match step {
                Some(tr) => {
                    rules.writers[tr.write.0].push((k, tr.dir));
                    match tr.dir {
                        Move::Right => {
                            rules.right_into[tr.next.0].push(k);
                            rules.not_left_mover.push(k);
                        }
                        Move::Left => {
                            rules.left_into[tr.next.0].push(k);
                            rules.not_right_mover.push(k);
                            rules.wall[alphabet.index(CellSymbol::Head(tr.next, tr.write))].push(k);
                        }
                    }
                }
                None => {
                    rules.not_right_mover.push(k);
                    rules.not_left_mover.push(k);
                }
            }
        }
        rules
    }
}

struct Emitter {
    builder: CircuitBuilder,
    cap: usize,
    fresh: usize,
}

impl Emitter {
    fn check_cap(&self) -> Result<(), TableauError> {
        if self.builder.len() > self.cap {
            return Err(TableauError::GateCap { cap: self.cap });
        }
        Ok(())
    }

    fn fresh_name(&mut self) -> String {
        self.fresh += 1;
        format!("g{}", self.fresh)
    }

    fn and(&mut self, name: String, a: WireId, b: WireId) -> Result<WireId, TableauError> {
        Ok(self.builder.and(name, a, b)?)
    }

    fn or(&mut self, name: String, a: WireId, b: WireId) -> Result<WireId, TableauError> {
        Ok(self.builder.or(name, a, b)?)
    }

    /// OR of `wires`, without naming the result. `None` when empty.
    fn or_anon(&mut self, wires: &[WireId]) -> Result<Option<WireId>, TableauError> {
        let Some((&first, rest)) = wires.split_first() else {
            return Ok(None);
        };
        let mut acc = first;
        for &w in rest {
            let name = self.fresh_name();
            acc = self.or(name, acc, w)?;
        }
        Ok(Some(acc))
    }

    /// AND of up to two optional wires; `None` means constant true.
    fn and_opt(&mut self, a: Option<WireId>, b: Option<WireId>, name: String) -> Result<Option<WireId>, TableauError> {
        Ok(match (a, b) {
            (Some(a), Some(b)) => Some(self.and(name, a, b)?),
            (a, b) => a.or(b),
        })
    }

    /// OR of `wires` landing on a gate called `name`. Empty ORs become a
    /// constant 0 and singletons a buffer.
    fn or_named(&mut self, name: String, wires: &[WireId]) -> Result<WireId, TableauError> {
        match wires {
            [] => Ok(self.builder.constant(name, false)?),
            [w] => self.and(name, *w, *w),
            [init @ .., last] => {
                let acc = self.or_anon(init)?.expect("non-empty");
                self.or(name, acc, *last)
            }
        }
    }
}

/// Compiles `tm` for inputs of length `n` and `t` steps.
pub fn compile_with(
    tm: &TuringMachine,
    n: usize,
    t: usize,
    mode: InputMode,
    options: &CompileOptions,
) -> Result<(Circuit, TableauSchema), TableauError> {
    if t == 0 {
        return Err(TableauError::ZeroSteps);
    }
    let size = t + 1;
    if n > size {
        return Err(TableauError::InputTooLong { n, cols: size });
    }
    let rules = Rules::new(tm);
    let width = rules.alphabet.len();
    // Every cell-symbol wire is a gate, so this is a lower bound.
    let lower_bound = size.saturating_mul(size).saturating_mul(width);
    if lower_bound > options.gate_cap {
        return Err(TableauError::GateCap { cap: options.gate_cap });
    }

    let mut em = Emitter {
        builder: CircuitBuilder::new(),
        cap: options.gate_cap,
        fresh: 0,
    };

    // Input layer: (zero, one) per input bit.
    let bits: Vec<(WireId, WireId)> = match mode {
        InputMode::Standard => {
            let raw: Vec<WireId> = (0..n)
                .map(|i| em.builder.input(format!("x{i}")))
                .collect::<Result<_, _>>()?;
            raw.iter()
                .enumerate()
                .map(|(i, &x)| Ok((em.builder.not(format!("nx{i}"), x)?, x)))
                .collect::<Result<_, TableauError>>()?
        }
        InputMode::Flattened => (0..n)
            .map(|i| {
                let (zero, one) = rail_names(&format!("x{i}"));
                Ok((em.builder.input(zero)?, em.builder.input(one)?))
            })
            .collect::<Result<_, TableauError>>()?,
    };

    let mut wires: Vec<WireId> = Vec::with_capacity(size * size * width);

    // Row 0: input bits in cells 0..n, blanks after, head in start state at 0.
    let start = tm.start();
    let (zero_sym, one_sym, blank) = (tm.bit_symbol(false), tm.bit_symbol(true), tm.blank());
    for col in 0..size {
        let content: Option<(WireId, WireId)> = bits.get(col).copied();
        for k in 0..width {
            let name = TableauSchema::wire_name(0, col, k);
            let entry = rules.alphabet.entry(k);
            let source = match (entry, content) {
                (CellSymbol::Tape(s), Some((z, o))) if col > 0 => select(s, zero_sym, one_sym, z, o),
                (CellSymbol::Head(q, s), Some((z, o))) if col == 0 && q == start => select(s, zero_sym, one_sym, z, o),
                _ => None,
            };
            let wire = match source {
                Some(w) => em.and(name, w, w)?,
                None => {
                    let hot = content.is_none()
                        && match entry {
                            CellSymbol::Tape(s) => col > 0 && s == blank,
                            CellSymbol::Head(q, s) => col == 0 && q == start && s == blank,
                        };
                    em.builder.constant(name, hot)?
                }
            };
            wires.push(wire);
        }
        em.check_cap()?;
    }

    let symbols = tm.alphabet().len();
    for row in 1..size {
        let above = (row - 1) * size * width;
        let cell = |col: usize, k: usize| wires[above + col * width + k];

        let mut no_right = Vec::with_capacity(size);
        let mut no_left = Vec::with_capacity(size);
        for col in 0..size {
            let nr: Vec<WireId> = rules.not_right_mover.iter().map(|&k| cell(col, k)).collect();
            let nl: Vec<WireId> = rules.not_left_mover.iter().map(|&k| cell(col, k)).collect();
            let nr = em.or_named(format!("nr_{}_{col}", row - 1), &nr)?;
            let nl = em.or_named(format!("nl_{}_{col}", row - 1), &nl)?;
            no_right.push(nr);
            no_left.push(nl);
        }

        let mut next_row: Vec<WireId> = Vec::with_capacity(size * width);
        for col in 0..size {
            let from_left = col.checked_sub(1);
            let from_right = (col + 1 < size).then_some(col + 1);
            let quiet = em.and_opt(
                from_left.map(|j| no_right[j]),
                from_right.map(|j| no_left[j]),
                format!("quiet_{row}_{col}"),
            )?;

            // Incoming head per next state.
            let mut incoming: Vec<Option<WireId>> = Vec::with_capacity(rules.right_into.len());
            for q in 0..rules.right_into.len() {
                let mut sources: Vec<WireId> = Vec::new();
                if let Some(j) = from_left {
                    sources.extend(rules.right_into[q].iter().map(|&k| cell(j, k)));
                }
                if let Some(j) = from_right {
                    sources.extend(rules.left_into[q].iter().map(|&k| cell(j, k)));
                }
                incoming.push(em.or_anon(&sources)?);
            }

            for k in 0..width {
                let mut terms: Vec<WireId> = Vec::new();
                match rules.alphabet.entry(k) {
                    CellSymbol::Tape(a) => {
                        let stay = match quiet {
                            Some(q) => {
                                let name = em.fresh_name();
                                em.and(name, cell(col, k), q)?
                            }
                            None => cell(col, k),
                        };
                        terms.push(stay);
                        for &(h, dir) in &rules.writers[a.0] {
                            if !(col == 0 && dir == Move::Left) {
                                terms.push(cell(col, h));
                            }
                        }
                    }
                    CellSymbol::Head(q, a) => {
                        if let Some(inc) = incoming[q.0] {
                            let name = em.fresh_name();
                            terms.push(em.and(name, inc, cell(col, a.0))?);
                        }
                        if col == 0 {
                            terms.extend(rules.wall[k].iter().map(|&h| cell(0, h)));
                        }
                        if rules.halting[q.0] {
                            terms.push(cell(col, k));
                        }
                    }
                }
                let wire = em.or_named(TableauSchema::wire_name(row, col, k), &terms)?;
                next_row.push(wire);
            }
            em.check_cap()?;
        }
        wires.extend(next_row);
    }

    let last = (size - 1) * size * width;
    let accept = tm.accept();
    let accepting: Vec<WireId> = (0..size)
        .flat_map(|col| (0..symbols).map(move |s| (col, rules.alphabet.index(CellSymbol::Head(accept, SymbolId(s))))))
        .map(|(col, k)| wires[last + col * width + k])
        .collect();
    let out = em.or_named("accept".to_string(), &accepting)?;
    em.builder.output(out);
    em.check_cap()?;

    let schema = TableauSchema {
        rows: size,
        cols: size,
        n,
        alphabet: rules.alphabet,
        wires,
    };
    Ok((em.builder.finish(), schema))
}

fn select(s: SymbolId, zero_sym: SymbolId, one_sym: SymbolId, zero: WireId, one: WireId) -> Option<WireId> {
    if s == zero_sym {
        Some(zero)
    } else if s == one_sym {
        Some(one)
    } else {
        None
    }
}
