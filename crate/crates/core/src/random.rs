// SPDX-License-Identifier: Apache-2.0

//! Seeded random circuits for property checks.

use rand::Rng;

use crate::circuit::{Circuit, CircuitBuilder, WireId};

#[derive(Debug, Clone, Copy)]
pub struct RandomCircuitParams {
    pub max_inputs: usize,
    pub max_gates: usize,
    /// Probability that an internal gate is a NOT. Zero gives monotone circuits.
    pub not_probability: f64,
    pub const_probability: f64,
    pub max_outputs: usize,
}

impl Default for RandomCircuitParams {
    fn default() -> Self {
        Self {
            max_inputs: 10,
            max_gates: 60,
            not_probability: 0.25,
            const_probability: 0.03,
            max_outputs: 2,
        }
    }
}

/// Draws a circuit with `1..=max_inputs` inputs and at most `max_gates`
/// gates in total. The last gate is always an output.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, params: &RandomCircuitParams) -> Circuit {
    let inputs = rng.gen_range(1..=params.max_inputs.max(1));
    let internal_max = params.max_gates.saturating_sub(inputs);
    let internal = if internal_max == 0 {
        0
    } else {
        rng.gen_range(1..=internal_max)
    };
    let mut b = CircuitBuilder::new();
    let mut wires: Vec<WireId> = (0..inputs)
        .map(|i| b.input(format!("i{i}")).expect("fresh name"))
        .collect();
    for g in 0..internal {
        let name = format!("g{g}");
        let pick = |rng: &mut R| wires[rng.gen_range(0..wires.len())];
        let roll: f64 = rng.gen();
        let id = if roll < params.const_probability {
            b.constant(name, rng.gen())
        } else if roll < params.const_probability + params.not_probability {
            let a = pick(rng);
            b.not(name, a)
        } else if rng.gen_bool(0.5) {
            let (x, y) = (pick(rng), pick(rng));
            b.and(name, x, y)
        } else {
            let (x, y) = (pick(rng), pick(rng));
            b.or(name, x, y)
        }
        .expect("fresh name");
        wires.push(id);
    }
    let last = *wires.last().expect("at least one input");
    b.output(last);
    let extra = rng.gen_range(0..params.max_outputs.max(1));
    for _ in 0..extra {
        b.output(wires[rng.gen_range(0..wires.len())]);
    }
    b.finish()
}
