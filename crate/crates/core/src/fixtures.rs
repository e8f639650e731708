// SPDX-License-Identifier: Apache-2.0

//! Sources of the files under `fixtures/`, embedded for tests and examples.

/// Accepts iff the input contains a 1.
pub const CONTAINS_ONE: &str = include_str!("../fixtures/contains_one.tm");

/// Five states; accepts iff the input has an even number of 1s.
pub const PARITY: &str = include_str!("../fixtures/parity.tm");

/// `(x & y) | (!x & !y)`.
pub const EQ_NOT: &str = include_str!("../fixtures/eq_not.net");

/// `(x0 & y0) | (x1 & y1)` over flattened inputs.
pub const EQ_FLAT: &str = include_str!("../fixtures/eq_flat.net");

/// A single NOT gate.
pub const NOT: &str = include_str!("../fixtures/not.net");
