/* SPDX-License-Identifier: Apache-2.0 */

#ifndef MONOFLAT_H
#define MONOFLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum MfStatus {
  MF_STATUS_OK = 0,
  MF_STATUS_NULL_POINTER = 1,
  MF_STATUS_INVALID_UTF8 = 2,
  MF_STATUS_PARSE_ERROR = 3,
  MF_STATUS_INVALID_ARGUMENT = 4,
  MF_STATUS_GATE_CAP_EXCEEDED = 5,
  MF_STATUS_BUFFER_TOO_SMALL = 6,
  MF_STATUS_PANIC = 7,
} MfStatus;

// Opaque circuit handle.
typedef struct MfCircuit MfCircuit;

// Opaque Turing machine handle.
typedef struct MfMachine MfMachine;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *mf_last_error_message(void);

// Static, NUL-terminated name of a status code.
const char *mf_status_name(enum MfStatus status);

// Releases a string returned by this library. NULL is ignored.
void mf_string_free(char *s);

// Parses netlist text into a new circuit handle stored in `*out`.
enum MfStatus mf_circuit_parse(const char *text, struct MfCircuit **out);

// Releases a circuit handle. NULL is ignored.
void mf_circuit_free(struct MfCircuit *circuit);

// Canonical netlist text; release with `mf_string_free`.
enum MfStatus mf_circuit_to_netlist(const struct MfCircuit *circuit, char **out);

// Graphviz description; release with `mf_string_free`.
enum MfStatus mf_circuit_to_dot(const struct MfCircuit *circuit, char **out);

// Number of inputs, or 0 for NULL.
size_t mf_circuit_input_count(const struct MfCircuit *circuit);

// Number of outputs, or 0 for NULL.
size_t mf_circuit_output_count(const struct MfCircuit *circuit);

// Total number of gates, or 0 for NULL.
size_t mf_circuit_gate_count(const struct MfCircuit *circuit);

// Number of NOT gates, or 0 for NULL.
size_t mf_circuit_not_count(const struct MfCircuit *circuit);

// Evaluates the circuit. `inputs` holds one 0/1 byte per input; one 0/1
// byte per output is written to `outputs`.
enum MfStatus mf_circuit_evaluate(const struct MfCircuit *circuit,
                                  const uint8_t *inputs,
                                  size_t input_len,
                                  uint8_t *outputs,
                                  size_t output_len);

// NOT-free dual-rail version of `circuit`, as a new handle.
enum MfStatus mf_dual_rail_transform(const struct MfCircuit *circuit, struct MfCircuit **out);

// Writes `2 * len` rail bytes for `len` input bits.
enum MfStatus mf_flatten_bits(const uint8_t *bits, size_t len, uint8_t *out, size_t out_len);

// Parses a Turing machine description into a new handle.
enum MfStatus mf_machine_parse(const char *text, struct MfMachine **out);

// Releases a machine handle. NULL is ignored.
void mf_machine_free(struct MfMachine *machine);

// Compiles the machine's tableau for inputs of length `n` and `t` steps.
// With `flattened`, the circuit reads `2n` rail inputs and has no NOT gates.
enum MfStatus mf_compile_tableau(const struct MfMachine *machine,
                                 size_t n,
                                 size_t t,
                                 bool flattened,
                                 size_t gate_cap,
                                 struct MfCircuit **out);

// Exhaustive equivalence. With `flattened`, `candidate` reads flattened
// assignments of `reference`'s inputs.
enum MfStatus mf_check_equivalence(const struct MfCircuit *reference,
                                   const struct MfCircuit *candidate,
                                   bool flattened,
                                   bool *equivalent);

// Exhaustive semantic monotonicity.
enum MfStatus mf_check_monotone(const struct MfCircuit *circuit, bool *monotone);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MONOFLAT_H */
