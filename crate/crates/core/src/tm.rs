// SPDX-License-Identifier: Apache-2.0

//! Deterministic single-tape Turing machines: description format and
//! simulator. The tape is bounded on the left; an L move at cell 0 leaves
//! the head in place.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub const BLANK: &str = "_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    pub write: SymbolId,
    pub dir: Move,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}:` declaration")]
    MissingField(&'static str),
    #[error("line {line}: unknown state `{name}`")]
    UnknownState { line: usize, name: String },
    #[error("line {line}: unknown symbol `{name}`")]
    UnknownSymbol { line: usize, name: String },
    #[error("missing transition ({state}, {symbol})")]
    MissingTransition { state: String, symbol: String },
    #[error("line {line}: duplicate transition ({state}, {symbol})")]
    DuplicateTransition { line: usize, state: String, symbol: String },
    #[error("line {line}: halting state `{state}` cannot have transitions")]
    HaltingTransition { line: usize, state: String },
    #[error("accept and reject must be distinct states")]
    AcceptIsReject,
    #[error("alphabet must contain `0`, `1` and `_`")]
    MissingRequiredSymbol,
    #[error("duplicate entry `{0}`")]
    DuplicateEntry(String),
    #[error("configuration is already halted in state `{0}`")]
    Halted(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    alphabet: Vec<String>,
    start: StateId,
    accept: StateId,
    reject: StateId,
    // indexed by state * |alphabet| + symbol; None only for halting states
    delta: Vec<Option<Transition>>,
}

impl TuringMachine {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> StateId {
        self.reject
    }

    pub fn is_halting(&self, q: StateId) -> bool {
        q == self.accept || q == self.reject
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q.0]
    }

    pub fn symbol_name(&self, s: SymbolId) -> &str {
        &self.alphabet[s.0]
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.alphabet.iter().position(|s| s == name).map(SymbolId)
    }

    pub fn blank(&self) -> SymbolId {
        self.symbol(BLANK).expect("alphabet contains the blank")
    }

    /// Symbol used for input bit `b`.
    pub fn bit_symbol(&self, b: bool) -> SymbolId {
        self.symbol(if b { "1" } else { "0" })
            .expect("alphabet contains 0 and 1")
    }

    /// `None` for halting states.
    pub fn transition(&self, q: StateId, s: SymbolId) -> Option<Transition> {
        self.delta[q.0 * self.alphabet.len() + s.0]
    }

    pub fn initial(&self, input: &[bool]) -> Configuration {
        let mut tape: Vec<SymbolId> = input.iter().map(|&b| self.bit_symbol(b)).collect();
        if tape.is_empty() {
            tape.push(self.blank());
        }
        Configuration {
            tape,
            head: 0,
            state: self.start,
            steps_taken: 0,
        }
    }

    pub fn step(&self, c: &Configuration) -> Result<Configuration, TmError> {
        let Some(t) = self.transition(c.state, c.read(self.blank())) else {
            return Err(TmError::Halted(self.state_name(c.state).to_string()));
        };
        let mut next = c.clone();
        while next.tape.len() <= next.head {
            next.tape.push(self.blank());
        }
        next.tape[next.head] = t.write;
        next.head = match t.dir {
            Move::Left => next.head.saturating_sub(1),
            Move::Right => next.head + 1,
        };
        next.state = t.next;
        next.steps_taken += 1;
        Ok(next)
    }

    /// Runs at most `max_steps` steps from the initial configuration on `input`.
    pub fn run(&self, input: &[bool], max_steps: usize) -> (Verdict, Configuration) {
        let mut c = self.initial(input);
        loop {
            if c.state == self.accept {
                return (Verdict::Accept, c);
            }
            if c.state == self.reject {
                return (Verdict::Reject, c);
            }
            if c.steps_taken >= max_steps {
                return (Verdict::Timeout, c);
            }
            c = self.step(&c).expect("non-halting state has a transition");
        }
    }

    /// Canonical source text; parses back to an equal machine.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("states: {}\n", self.states.join(" ")));
        out.push_str(&format!("alphabet: {}\n", self.alphabet.join(" ")));
        out.push_str(&format!("start: {}\n", self.state_name(self.start)));
        out.push_str(&format!("accept: {}\n", self.state_name(self.accept)));
        out.push_str(&format!("reject: {}\n", self.state_name(self.reject)));
        for q in 0..self.states.len() {
            for s in 0..self.alphabet.len() {
                if let Some(t) = self.transition(StateId(q), SymbolId(s)) {
                    out.push_str(&format!(
                        "delta: {} {} -> {} {} {}\n",
                        self.states[q],
                        self.alphabet[s],
                        self.state_name(t.next),
                        self.symbol_name(t.write),
                        match t.dir {
                            Move::Left => "L",
                            Move::Right => "R",
                        }
                    ));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
    Timeout,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "ACCEPT",
            Verdict::Reject => "REJECT",
            Verdict::Timeout => "TIMEOUT",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    /// Written region; cells past the end read as blank.
    pub tape: Vec<SymbolId>,
    pub head: usize,
    pub state: StateId,
    pub steps_taken: usize,
}

impl Configuration {
    pub fn read(&self, blank: SymbolId) -> SymbolId {
        self.cell(self.head, blank)
    }

    pub fn cell(&self, index: usize, blank: SymbolId) -> SymbolId {
        self.tape.get(index).copied().unwrap_or(blank)
    }
}

fn split_field(line: &str) -> Option<(&str, &str)> {
    let (key, value) = line.split_once(':')?;
    Some((key.trim(), value.trim()))
}

/// Parses the `states:` / `alphabet:` / `start:` / `accept:` / `reject:` /
/// `delta:` line format. `#` starts a comment.
pub fn parse_tm(text: &str) -> Result<TuringMachine, TmError> {
    let mut states: Option<Vec<String>> = None;
    let mut alphabet: Option<Vec<String>> = None;
    let mut start = None;
    let mut accept = None;
    let mut reject = None;
    let mut deltas: Vec<(usize, Vec<String>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = split_field(content) else {
            return Err(TmError::Syntax {
                line,
                message: format!("expected `key: value`, found `{content}`"),
            });
        };
        let words: Vec<String> = value.split_ascii_whitespace().map(str::to_string).collect();
        let single = |words: &[String]| -> Result<(usize, String), TmError> {
            match words {
                [w] => Ok((line, w.clone())),
                _ => Err(TmError::Syntax {
                    line,
                    message: format!("`{key}` takes exactly one value"),
                }),
            }
        };
        match key {
            "states" => states = Some(words),
            "alphabet" => alphabet = Some(words),
            "start" => start = Some(single(&words)?),
            "accept" => accept = Some(single(&words)?),
            "reject" => reject = Some(single(&words)?),
            "delta" => deltas.push((line, words)),
            other => {
                return Err(TmError::Syntax {
                    line,
                    message: format!("unknown field `{other}`"),
                })
            }
        }
    }

    let states = states.ok_or(TmError::MissingField("states"))?;
    let alphabet = alphabet.ok_or(TmError::MissingField("alphabet"))?;
    for list in [&states, &alphabet] {
        for (i, name) in list.iter().enumerate() {
            if list[..i].contains(name) {
                return Err(TmError::DuplicateEntry(name.clone()));
            }
        }
    }
    if !["0", "1", BLANK].iter().all(|s| alphabet.iter().any(|a| a == s)) {
        return Err(TmError::MissingRequiredSymbol);
    }
    let state_index: HashMap<&str, StateId> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), StateId(i)))
        .collect();
    let symbol_index: HashMap<&str, SymbolId> = alphabet
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), SymbolId(i)))
        .collect();
    let lookup_state = |(line, name): &(usize, String)| {
        state_index
            .get(name.as_str())
            .copied()
            .ok_or_else(|| TmError::UnknownState {
                line: *line,
                name: name.clone(),
            })
    };
    let start = lookup_state(&start.ok_or(TmError::MissingField("start"))?)?;
    let accept = lookup_state(&accept.ok_or(TmError::MissingField("accept"))?)?;
    let reject = lookup_state(&reject.ok_or(TmError::MissingField("reject"))?)?;
    if accept == reject {
        return Err(TmError::AcceptIsReject);
    }

    let width = alphabet.len();
    let mut delta: Vec<Option<Transition>> = vec![None; states.len() * width];
    for (line, words) in deltas {
        let [q, s, arrow, q2, s2, dir] = words.as_slice() else {
            return Err(TmError::Syntax {
                line,
                message: "expected `delta: <state> <symbol> -> <state> <symbol> L|R`".into(),
            });
        };
        if arrow != "->" {
            return Err(TmError::Syntax {
                line,
                message: format!("expected `->`, found `{arrow}`"),
            });
        }
        let q = lookup_state(&(line, q.clone()))?;
        let next = lookup_state(&(line, q2.clone()))?;
        let sym = |name: &String| {
            symbol_index
                .get(name.as_str())
                .copied()
                .ok_or_else(|| TmError::UnknownSymbol {
                    line,
                    name: name.clone(),
                })
        };
        let (s, write) = (sym(s)?, sym(s2)?);
        let dir = match dir.as_str() {
            "L" => Move::Left,
            "R" => Move::Right,
            other => {
                return Err(TmError::Syntax {
                    line,
                    message: format!("direction must be L or R, found `{other}`"),
                })
            }
        };
        if q == accept || q == reject {
            return Err(TmError::HaltingTransition {
                line,
                state: states[q.0].clone(),
            });
        }
        let slot = &mut delta[q.0 * width + s.0];
        if slot.is_some() {
            return Err(TmError::DuplicateTransition {
                line,
                state: states[q.0].clone(),
                symbol: alphabet[s.0].clone(),
            });
        }
        *slot = Some(Transition { next, write, dir });
    }
    for q in 0..states.len() {
        if q == accept.0 || q == reject.0 {
            continue;
        }
        for s in 0..width {
            if delta[q * width + s].is_none() {
                return Err(TmError::MissingTransition {
                    state: states[q].clone(),
                    symbol: alphabet[s].clone(),
                });
            }
        }
    }
    Ok(TuringMachine {
        states,
        alphabet,
        start,
        accept,
        reject,
        delta,
    })
}
