//! graph6 codec for graphs of order at most 62.
//!
//! Layout: one byte `n + 63`, then the upper triangle in column-major order
//! (`x(0,1), x(0,2), x(1,2), x(0,3), ..`), six bits per byte, each byte `+63`,
//! zero-padded to a multiple of six.

use thiserror::Error;

use crate::graph::{Graph, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 line")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside 63..=126")]
    BadByte { offset: usize, byte: u8 },
    #[error("order {order} (offset 0) is above the supported maximum of {max}", max = MAX_N)]
    OrderTooLarge { order: usize },
    #[error("truncated: expected {expected} bytes, got {got} (offset {got})")]
    Truncated { expected: usize, got: usize },
    #[error("{extra} trailing bytes starting at offset {offset}")]
    Trailing { offset: usize, extra: usize },
    #[error("non-zero padding bits in final byte at offset {offset}")]
    Padding { offset: usize },
}

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn encode(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = acc << 1 | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn decode(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.trim_end_matches(['\n', '\r']).as_bytes();
    let (&first, _) = bytes.split_first().ok_or(Graph6Error::Empty)?;
    for (offset, &byte) in bytes.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(Graph6Error::BadByte { offset, byte });
        }
    }
    let n = (first - 63) as usize;
    if n > MAX_N {
        return Err(Graph6Error::OrderTooLarge { order: n });
    }
    let expected = 1 + body_len(n);
    if bytes.len() < expected {
        return Err(Graph6Error::Truncated { expected, got: bytes.len() });
    }
    if bytes.len() > expected {
        return Err(Graph6Error::Trailing { offset: expected, extra: bytes.len() - expected });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let bit = |i: usize| (bytes[1 + i / 6] - 63) >> (5 - i % 6) & 1 == 1;
    if !bits.is_multiple_of(6) {
        let last = bytes[expected - 1] - 63;
        if last & ((1u8 << (6 - bits % 6)) - 1) != 0 {
            return Err(Graph6Error::Padding { offset: expected - 1 });
        }
    }
    let mut edges = Vec::new();
    let mut i = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(i) {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("decoded pairs are in range and loop-free"))
}
