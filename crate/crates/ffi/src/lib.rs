// SPDX-License-Identifier: Apache-2.0

//! C ABI for monoflat.
//!
//! Circuits and machines cross the boundary as opaque handles created by a
//! `*_parse` / compile function and released with the matching `*_free`.
//! Every fallible call returns an [`MfStatus`]; on failure a description is
//! available from [`mf_last_error_message`] on the same thread. Strings
//! returned through `char **` out-parameters must be released with
//! [`mf_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use monoflat::tableau::{compile_with, CompileOptions, InputMode, TableauError};
use monoflat::verifier::{check_semantic_monotone, exhaustive_equiv, EquivMode};
use monoflat::{dual_rail_transform, flatten_bits, parse_netlist, parse_tm, Circuit, TuringMachine};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    GateCapExceeded = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque circuit handle.
pub struct MfCircuit {
    inner: Circuit,
}

/// Opaque Turing machine handle.
pub struct MfMachine {
    inner: TuringMachine,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

type Failure = (MfStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MfStatus {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".to_string());
        Err((MfStatus::Panic, message))
    });
    match outcome {
        Ok(()) => MfStatus::Ok,
        Err((status, message)) => {
            set_last_error(message);
            status
        }
    }
}

fn null(what: &str) -> Failure {
    (MfStatus::NullPointer, format!("`{what}` is NULL"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (MfStatus::InvalidUtf8, format!("`{what}`: {e}")))
}

unsafe fn read_bits<'a>(p: *const u8, len: usize, what: &str) -> Result<&'a [u8], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    let bits = std::slice::from_raw_parts(p, len);
    if let Some(pos) = bits.iter().position(|&b| b > 1) {
        return Err((
            MfStatus::InvalidArgument,
            format!("`{what}`[{pos}] = {} is not 0 or 1", bits[pos]),
        ));
    }
    Ok(bits)
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, text: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(text).map_err(|e| (MfStatus::InvalidArgument, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Static, NUL-terminated name of a status code.
#[no_mangle]
pub extern "C" fn mf_status_name(status: MfStatus) -> *const c_char {
    let name: &'static CStr = match status {
        MfStatus::Ok => c"ok",
        MfStatus::NullPointer => c"null pointer",
        MfStatus::InvalidUtf8 => c"invalid utf-8",
        MfStatus::ParseError => c"parse error",
        MfStatus::InvalidArgument => c"invalid argument",
        MfStatus::GateCapExceeded => c"gate cap exceeded",
        MfStatus::BufferTooSmall => c"buffer too small",
        MfStatus::Panic => c"panic",
    };
    name.as_ptr()
}

/// Releases a string returned by this library. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses netlist text into a new circuit handle stored in `*out`.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_parse(text: *const c_char, out: *mut *mut MfCircuit) -> MfStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let inner = parse_netlist(text).map_err(|e| (MfStatus::ParseError, e.to_string()))?;
        write_out(out, MfCircuit { inner })
    })
}

/// Releases a circuit handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_free(circuit: *mut MfCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Canonical netlist text; release with `mf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_to_netlist(circuit: *const MfCircuit, out: *mut *mut c_char) -> MfStatus {
    guard(|| {
        let c = borrow(circuit, "circuit")?;
        write_string(out, c.inner.to_netlist())
    })
}

/// Graphviz description; release with `mf_string_free`.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_to_dot(circuit: *const MfCircuit, out: *mut *mut c_char) -> MfStatus {
    guard(|| {
        let c = borrow(circuit, "circuit")?;
        write_string(out, c.inner.to_dot())
    })
}

/// Number of inputs, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_input_count(circuit: *const MfCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.input_count())
}

/// Number of outputs, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_output_count(circuit: *const MfCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.output_count())
}

/// Total number of gates, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_gate_count(circuit: *const MfCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.gate_count())
}

/// Number of NOT gates, or 0 for NULL.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_not_count(circuit: *const MfCircuit) -> usize {
    circuit.as_ref().map_or(0, |c| c.inner.not_count())
}

/// Evaluates the circuit. `inputs` holds one 0/1 byte per input; one 0/1
/// byte per output is written to `outputs`.
#[no_mangle]
pub unsafe extern "C" fn mf_circuit_evaluate(
    circuit: *const MfCircuit,
    inputs: *const u8,
    input_len: usize,
    outputs: *mut u8,
    output_len: usize,
) -> MfStatus {
    guard(|| {
        let c = &borrow(circuit, "circuit")?.inner;
        let bits: Vec<bool> = read_bits(inputs, input_len, "inputs")?
            .iter()
            .map(|&b| b == 1)
            .collect();
        if output_len < c.output_count() {
            return Err((
                MfStatus::BufferTooSmall,
                format!("need {} output bytes, got {output_len}", c.output_count()),
            ));
        }
        let values = c
            .evaluate(&bits)
            .map_err(|e| (MfStatus::InvalidArgument, e.to_string()))?;
        if !values.is_empty() {
            if outputs.is_null() {
                return Err(null("outputs"));
            }
            for (i, v) in values.into_iter().enumerate() {
                *outputs.add(i) = u8::from(v);
            }
        }
        Ok(())
    })
}

/// NOT-free dual-rail version of `circuit`, as a new handle.
#[no_mangle]
pub unsafe extern "C" fn mf_dual_rail_transform(circuit: *const MfCircuit, out: *mut *mut MfCircuit) -> MfStatus {
    guard(|| {
        let c = borrow(circuit, "circuit")?;
        let inner = dual_rail_transform(&c.inner).map_err(|e| (MfStatus::InvalidArgument, e.to_string()))?;
        write_out(out, MfCircuit { inner })
    })
}

/// Writes `2 * len` rail bytes for `len` input bits.
#[no_mangle]
pub unsafe extern "C" fn mf_flatten_bits(bits: *const u8, len: usize, out: *mut u8, out_len: usize) -> MfStatus {
    guard(|| {
        let input: Vec<bool> = read_bits(bits, len, "bits")?.iter().map(|&b| b == 1).collect();
        let flat = flatten_bits(&input);
        if out_len < flat.bits().len() {
            return Err((
                MfStatus::BufferTooSmall,
                format!("need {} output bytes, got {out_len}", flat.bits().len()),
            ));
        }
        if flat.bits().is_empty() {
            return Ok(());
        }
        if out.is_null() {
            return Err(null("out"));
        }
        for (i, &b) in flat.bits().iter().enumerate() {
            *out.add(i) = u8::from(b);
        }
        Ok(())
    })
}

/// Parses a Turing machine description into a new handle.
#[no_mangle]
pub unsafe extern "C" fn mf_machine_parse(text: *const c_char, out: *mut *mut MfMachine) -> MfStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let inner = parse_tm(text).map_err(|e| (MfStatus::ParseError, e.to_string()))?;
        write_out(out, MfMachine { inner })
    })
}

/// Releases a machine handle. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mf_machine_free(machine: *mut MfMachine) {
    if !machine.is_null() {
        drop(Box::from_raw(machine));
    }
}

/// Compiles the machine's tableau for inputs of length `n` and `t` steps.
/// With `flattened`, the circuit reads `2n` rail inputs and has no NOT gates.
#[no_mangle]
pub unsafe extern "C" fn mf_compile_tableau(
    machine: *const MfMachine,
    n: usize,
    t: usize,
    flattened: bool,
    gate_cap: usize,
    out: *mut *mut MfCircuit,
) -> MfStatus {
    guard(|| {
        let m = borrow(machine, "machine")?;
        let mode = if flattened {
            InputMode::Flattened
        } else {
            InputMode::Standard
        };
        let (inner, _) = compile_with(&m.inner, n, t, mode, &CompileOptions { gate_cap }).map_err(|e| {
            let status = match e {
                TableauError::GateCap { .. } => MfStatus::GateCapExceeded,
                _ => MfStatus::InvalidArgument,
            };
            (status, e.to_string())
        })?;
        write_out(out, MfCircuit { inner })
    })
}

/// Exhaustive equivalence. With `flattened`, `candidate` reads flattened
/// assignments of `reference`'s inputs.
#[no_mangle]
pub unsafe extern "C" fn mf_check_equivalence(
    reference: *const MfCircuit,
    candidate: *const MfCircuit,
    flattened: bool,
    equivalent: *mut bool,
) -> MfStatus {
    guard(|| {
        let (b, m) = (borrow(reference, "reference")?, borrow(candidate, "candidate")?);
        let mode = if flattened {
            EquivMode::Flattened
        } else {
            EquivMode::Raw
        };
        let report =
            exhaustive_equiv(&b.inner, &m.inner, mode).map_err(|e| (MfStatus::InvalidArgument, e.to_string()))?;
        if equivalent.is_null() {
            return Err(null("equivalent"));
        }
        *equivalent = report.is_none();
        if let Some(report) = report {
            set_last_error(report.to_string());
        }
        Ok(())
    })
}

/// Exhaustive semantic monotonicity.
#[no_mangle]
pub unsafe extern "C" fn mf_check_monotone(circuit: *const MfCircuit, monotone: *mut bool) -> MfStatus {
    guard(|| {
        let c = borrow(circuit, "circuit")?;
        let report = check_semantic_monotone(&c.inner).map_err(|e| (MfStatus::InvalidArgument, e.to_string()))?;
        if monotone.is_null() {
            return Err(null("monotone"));
        }
        *monotone = report.is_none();
        if let Some(report) = report {
            set_last_error(report.to_string());
        }
        Ok(())
    })
}
