// SPDX-License-Identifier: Apache-2.0

//! Prints compiled tableau sizes for the shipped machines as `t` grows.

use monoflat::fixtures::{CONTAINS_ONE, PARITY};
use monoflat::tableau::CellAlphabet;
use monoflat::{compile, parse_tm};

fn main() {
    for (name, source) in [("contains_one", CONTAINS_ONE), ("parity", PARITY)] {
        let tm = parse_tm(source).expect("fixture parses");
        let width = CellAlphabet::new(&tm).len();
        println!("{name} (cell alphabet {width})");
        for t in [4usize, 8, 16, 32, 64] {
            let stats = compile(&tm, 2, t).expect("compiles").stats();
            let total = stats.total();
            println!(
                "  t={t:>3} gates={total:>7} gates/t^2={:>8.2} gates/((t+1)^2*|A|^3)={:.5}",
                total as f64 / (t * t) as f64,
                total as f64 / ((t + 1) * (t + 1) * width.pow(3)) as f64
            );
        }
    }
}
