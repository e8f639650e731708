// SPDX-License-Identifier: Apache-2.0

use std::path::Path;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let crate_dir = std::env::var("CARGO_MANIFEST_DIR").expect("set by cargo");
    let header = Path::new(&crate_dir).join("include").join("monoflat.h");
    cbindgen::generate(&crate_dir)
        .expect("Unable to generate bindings")
        .write_to_file(header);
}
