// SPDX-License-Identifier: Apache-2.0

use std::cell::RefCell;

use monoflat::circuit::{assignment_from_index, assignment_words};
use monoflat::dual_rail::{recheck_rail_report, validate_rail_complement};
use monoflat::random::{random_circuit, RandomCircuitParams};
use monoflat::transducer::{stream_flatten, CONTROL_BITS};
use monoflat::verifier::{check_semantic_monotone, recheck_equivalence, recheck_monotonicity};
use monoflat::{
    dual_rail_transform, exhaustive_equiv, flatten_bits, parse_netlist, unflatten_bits, Circuit, EquivMode,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn circuit(seed: u64, max_inputs: usize, not_probability: f64) -> Circuit {
    let params = RandomCircuitParams {
        max_inputs,
        max_gates: 40,
        not_probability,
        ..RandomCircuitParams::default()
    };
    random_circuit(&mut ChaCha8Rng::seed_from_u64(seed), &params)
}

/// Swaps the kind of the first AND or OR line, keeping every name.
fn mutate(c: &Circuit) -> Option<Circuit> {
    let text = c.to_netlist();
    let mut done = false;
    let lines: Vec<String> = text
        .lines()
        .map(|line| {
            if done {
                return line.to_string();
            }
            if let Some(rest) = line.strip_prefix("and ") {
                done = true;
                format!("or {rest}")
            } else if let Some(rest) = line.strip_prefix("or ") {
                done = true;
                format!("and {rest}")
            } else {
                line.to_string()
            }
        })
        .collect();
    done.then(|| parse_netlist(&(lines.join("\n") + "\n")).unwrap())
}

fn all_outputs(c: &Circuit) -> Vec<Vec<bool>> {
    let n = c.input_count();
    (0..1u64 << n)
        .map(|i| c.evaluate(&assignment_from_index(i, n)).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn netlist_round_trip(seed in any::<u64>()) {
        let c = circuit(seed, 6, 0.25);
        let text = c.to_netlist();
        let again = parse_netlist(&text).unwrap();
        prop_assert_eq!(again.to_netlist(), text);
        prop_assert_eq!(all_outputs(&again), all_outputs(&c));
    }

    #[test]
    fn transform_is_deterministic(seed in any::<u64>()) {
        let c = circuit(seed, 6, 0.25);
        prop_assert_eq!(
            dual_rail_transform(&c).unwrap().to_netlist(),
            dual_rail_transform(&c).unwrap().to_netlist()
        );
    }

    #[test]
    fn structural_implies_semantic_monotone(seed in any::<u64>()) {
        let c = circuit(seed, 12, 0.0);
        prop_assert!(c.is_structurally_monotone());
        prop_assert!(check_semantic_monotone(&c).unwrap().is_none());
    }

    #[test]
    fn transform_simulates_source(seed in any::<u64>(), x_seed in any::<u64>()) {
        let b = circuit(seed, 10, 0.3);
        let m = dual_rail_transform(&b).unwrap();
        prop_assert_eq!(m.not_count(), 0);
        prop_assert_eq!(m.input_count(), 2 * b.input_count());
        prop_assert!(m.gate_count() <= 2 * b.gate_count());
        let x = assignment_from_index(x_seed % (1 << b.input_count()), b.input_count());
        prop_assert_eq!(m.evaluate(flatten_bits(&x).bits()).unwrap(), b.evaluate(&x).unwrap());
        prop_assert!(validate_rail_complement(&b, &m).unwrap().is_none());
    }

    #[test]
    fn transform_is_semantically_monotone(seed in any::<u64>()) {
        // Over every rail assignment, valid or not.
        let b = circuit(seed, 6, 0.3);
        let m = dual_rail_transform(&b).unwrap();
        prop_assert!(check_semantic_monotone(&m).unwrap().is_none());
    }

    #[test]
    fn flatten_unflatten_inverse(x in proptest::collection::vec(any::<bool>(), 0..64)) {
        let flat = flatten_bits(&x);
        prop_assert_eq!(flat.bits().len(), 2 * x.len());
        prop_assert!(flat.bits().chunks(2).all(|p| p[0] != p[1]));
        prop_assert_eq!(unflatten_bits(flat.bits()).unwrap(), x);
    }

    #[test]
    fn unflatten_rejects_equal_rails(x in proptest::collection::vec(any::<bool>(), 1..16), at in any::<prop::sample::Index>(), hot in any::<bool>()) {
        let mut flat = flatten_bits(&x).into_bits();
        let i = at.index(x.len());
        flat[2 * i] = hot;
        flat[2 * i + 1] = hot;
        prop_assert!(unflatten_bits(&flat).is_err());
    }

    #[test]
    fn packed_matches_scalar(seed in any::<u64>(), base in 0u64..4) {
        let c = circuit(seed, 8, 0.25);
        let n = c.input_count();
        let base = (base * 64) % (1 << n).max(64);
        let (words, mask) = assignment_words(n, base);
        let packed = c.simulate_words(&words).unwrap();
        for lane in 0..64u64 {
            if mask >> lane & 1 == 0 {
                continue;
            }
            let x = assignment_from_index(base + lane, n);
            let values = c.evaluate_all(&x).unwrap();
            for (id, &word) in packed.iter().enumerate() {
                prop_assert_eq!(word >> lane & 1 == 1, values[id]);
            }
        }
    }

    #[test]
    fn raw_equivalence_is_symmetric(seed in any::<u64>()) {
        let a = circuit(seed, 8, 0.25);
        if let Some(b) = mutate(&a) {
            let ab = exhaustive_equiv(&a, &b, EquivMode::Raw).unwrap();
            let ba = exhaustive_equiv(&b, &a, EquivMode::Raw).unwrap();
            prop_assert_eq!(ab.is_none(), ba.is_none());
            prop_assert_eq!(ab.is_none(), all_outputs(&a) == all_outputs(&b));
            if let (Some(ab), Some(ba)) = (ab, ba) {
                prop_assert_eq!(&ab.witness, &ba.witness);
                prop_assert!(recheck_equivalence(&ab, &a, &b, EquivMode::Raw).unwrap());
            }
        }
        prop_assert!(exhaustive_equiv(&a, &a, EquivMode::Raw).unwrap().is_none());
    }

    #[test]
    fn reports_are_self_certifying(seed in any::<u64>()) {
        let b = circuit(seed, 6, 0.3);
        if let Some(report) = check_semantic_monotone(&b).unwrap() {
            prop_assert!(recheck_monotonicity(&report, &b).unwrap());
        }
        let m = dual_rail_transform(&b).unwrap();
        if let Some(bad) = mutate(&m) {
            if let Some(report) = exhaustive_equiv(&b, &bad, EquivMode::Flattened).unwrap() {
                prop_assert!(recheck_equivalence(&report, &b, &bad, EquivMode::Flattened).unwrap());
            }
            if let Some(report) = validate_rail_complement(&b, &bad).unwrap() {
                prop_assert!(recheck_rail_report(&report, &b, &bad).unwrap());
            }
        }
    }

    #[test]
    fn streaming_matches_flatten_bits(x in proptest::collection::vec(any::<bool>(), 0..512)) {
        let mut out = Vec::new();
        let stats = stream_flatten(x.iter().map(|&b| if b { b'1' } else { b'0' }), |b| out.push(b == b'1')).unwrap();
        prop_assert_eq!(out, flatten_bits(&x).into_bits());
        prop_assert_eq!(stats.input_bits_read, x.len() as u64);
        prop_assert_eq!(stats.output_bits_written, 2 * x.len() as u64);
        let counter_bits = u64::BITS - (x.len() as u64).leading_zeros();
        prop_assert_eq!(stats.peak_state_bits, counter_bits + CONTROL_BITS);
    }

    #[test]
    fn streaming_is_single_pass_and_local(x in proptest::collection::vec(any::<bool>(), 0..256)) {
        // Each symbol is pulled once, in order, and its two output symbols
        // are emitted before the next symbol is pulled.
        let pulled = RefCell::new(0usize);
        let emitted = RefCell::new(Vec::new());
        let source = x.iter().map(|&b| {
            let i = *pulled.borrow();
            assert_eq!(emitted.borrow().len(), 2 * i);
            *pulled.borrow_mut() += 1;
            if b { b'1' } else { b'0' }
        });
        stream_flatten(source, |b| emitted.borrow_mut().push(b)).unwrap();
        prop_assert_eq!(*pulled.borrow(), x.len());
        prop_assert_eq!(emitted.borrow().len(), 2 * x.len());
    }
}
