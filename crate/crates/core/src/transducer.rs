// SPDX-License-Identifier: Apache-2.0

//! One-pass flattening transducer with working-memory accounting.
//!
//! Working memory is the bit width of the input position counter plus
//! [`CONTROL_BITS`] of control state. The read-only input and write-only
//! output streams are not counted.

use std::io::{self, Read, Write};

use thiserror::Error;

/// Control state: a phase in `{read, emit zero rail, emit one rail}`.
pub const CONTROL_BITS: u32 = 2;

#[derive(Debug, Error)]
pub enum TransducerError {
    #[error("non-bit symbol {found:?} at input position {position}")]
    InvalidSymbol { position: u64, found: char },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransducerStats {
    pub input_bits_read: u64,
    pub output_bits_written: u64,
    pub peak_state_bits: u32,
}

impl std::fmt::Display for TransducerStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "read={} written={} peak_state_bits={}",
            self.input_bits_read, self.output_bits_written, self.peak_state_bits
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Read,
    EmitZero,
    EmitOne,
}

#[derive(Debug)]
pub struct FlattenTransducer {
    position: u64,
    written: u64,
    phase: Phase,
    peak: u32,
}

impl Default for FlattenTransducer {
    fn default() -> Self {
        Self::new()
    }
}

impl FlattenTransducer {
    pub fn new() -> Self {
        Self {
            position: 0,
            written: 0,
            phase: Phase::Read,
            peak: CONTROL_BITS,
        }
    }

    fn state_bits(&self) -> u32 {
        (u64::BITS - self.position.leading_zeros()) + CONTROL_BITS
    }

    /// Consumes one input bit and hands its rail pair to `emit`, zero rail
    /// first, before returning.
    pub fn feed(&mut self, bit: bool, mut emit: impl FnMut(bool)) {
        debug_assert_eq!(self.phase, Phase::Read);
        self.position += 1;
        self.peak = self.peak.max(self.state_bits());
        self.phase = Phase::EmitZero;
        emit(!bit);
        self.phase = Phase::EmitOne;
        emit(bit);
        self.phase = Phase::Read;
        self.written += 2;
    }

    pub fn stats(&self) -> TransducerStats {
        TransducerStats {
            input_bits_read: self.position,
            output_bits_written: self.written,
            peak_state_bits: self.peak,
        }
    }
}

/// Flattens `source` symbol by symbol into `sink`. Symbols are `b'0'` and
/// `b'1'`; line feeds are skipped; anything else is an error.
pub fn stream_flatten<I, S>(source: I, mut sink: S) -> Result<TransducerStats, TransducerError>
where
    I: IntoIterator<Item = u8>,
    S: FnMut(u8),
{
    let mut transducer = FlattenTransducer::new();
    for symbol in source {
        let bit = match symbol {
            b'0' => false,
            b'1' => true,
            b'\n' => continue,
            other => {
                return Err(TransducerError::InvalidSymbol {
                    position: transducer.position,
                    found: other as char,
                })
            }
        };
        transducer.feed(bit, |b| sink(if b { b'1' } else { b'0' }));
    }
    Ok(transducer.stats())
}

/// [`stream_flatten`] over byte streams, in buffered chunks.
pub fn stream_flatten_io<R: Read, W: Write>(mut source: R, sink: W) -> Result<TransducerStats, TransducerError> {
    let mut sink = io::BufWriter::new(sink);
    let mut transducer = FlattenTransducer::new();
    let mut buf = [0u8; 8192];
    let mut out = Vec::with_capacity(2 * buf.len());
    loop {
        let read = match source.read(&mut buf) {
            Ok(0) => break,
            Ok(k) => k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        out.clear();
        for &symbol in &buf[..read] {
            let bit = match symbol {
                b'0' => false,
                b'1' => true,
                b'\n' => continue,
                other => {
                    sink.write_all(&out)?;
                    sink.flush()?;
                    return Err(TransducerError::InvalidSymbol {
                        position: transducer.position,
                        found: other as char,
                    });
                }
            };
            transducer.feed(bit, |b| out.push(if b { b'1' } else { b'0' }));
        }
        sink.write_all(&out)?;
    }
    sink.flush()?;
    Ok(transducer.stats())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &str) -> (String, TransducerStats) {
        let mut out = Vec::new();
        let stats = stream_flatten(input.bytes(), |b| out.push(b)).unwrap();
        (String::from_utf8(out).unwrap(), stats)
    }

    #[test]
    fn single_zero() {
        let (out, stats) = run("0");
        assert_eq!(out, "10");
        assert_eq!((stats.input_bits_read, stats.output_bits_written), (1, 2));
        assert!(stats.peak_state_bits <= CONTROL_BITS + 1);
    }

    #[test]
    fn empty_source() {
        let (out, stats) = run("");
        assert_eq!(out, "");
        assert_eq!((stats.input_bits_read, stats.output_bits_written), (0, 0));
        assert_eq!(stats.peak_state_bits, CONTROL_BITS);
    }

    #[test]
    fn rejects_non_bits() {
        let err = stream_flatten("10a".bytes(), |_| {}).unwrap_err();
        assert!(matches!(
            err,
            TransducerError::InvalidSymbol {
                position: 2,
                found: 'a'
            }
        ));
    }

    #[test]
    fn line_feeds_are_skipped() {
        assert_eq!(run("1\n0\n").0, "0110");
    }

    #[test]
    fn interleaves_output_with_reads() {
        let mut t = FlattenTransducer::new();
        let mut seen = Vec::new();
        for bit in [true, false] {
            t.feed(bit, |b| seen.push(b));
            assert_eq!(seen.len() as u64, t.stats().output_bits_written);
        }
        assert_eq!(seen, [false, true, true, false]);
    }

    #[test]
    fn io_driver_matches() {
        let mut out = Vec::new();
        let stats = stream_flatten_io("101\n".as_bytes(), &mut out).unwrap();
        assert_eq!(out, b"011001");
        assert_eq!(stats.to_string(), "read=3 written=6 peak_state_bits=4");
    }
}
