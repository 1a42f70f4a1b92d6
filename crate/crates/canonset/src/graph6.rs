//! The graph6 text format.

use canonset_core::GraphAssignment;

use crate::error::{Error, Result};

/// Largest order representable with the short and medium size prefixes.
pub const MAX_N: usize = 258_047;

fn push_bits(out: &mut String, bits: impl Iterator<Item = bool>) {
    let mut acc = 0u8;
    let mut k = 0;
    for b in bits {
        acc = (acc << 1) | u8::from(b);
        k += 1;
        if k == 6 {
            out.push(char::from(acc + 63));
            acc = 0;
            k = 0;
        }
    }
    if k > 0 {
        out.push(char::from((acc << (6 - k)) + 63));
    }
}

/// Encodes `g`. The graph6 bit order is the upper triangle column by column:
/// `(1,2), (1,3), (2,3), (1,4), …`.
pub fn encode(g: &GraphAssignment) -> String {
    let n = g.n();
    assert!(n <= MAX_N, "graph6 supports at most {MAX_N} vertices");
    let mut out = String::new();
    if n <= 62 {
        out.push(char::from(n as u8 + 63));
    } else {
        out.push('~');
        push_bits(&mut out, (0..18).rev().map(|k| (n >> k) & 1 == 1));
    }
    push_bits(&mut out, (1..n).flat_map(|j| (0..j).map(move |i| g.adjacent(i, j))));
    out
}

pub fn decode(s: &str) -> Result<GraphAssignment> {
    let bytes = s.trim_end().as_bytes();
    let err = |msg: &str| Error::parse("graph6", 0, format!("{msg} in {s:?}"));
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(err("invalid character"));
    }
    let (n, body) = match bytes {
        [] => return Err(err("empty string")),
        [b'~', b'~', ..] => return Err(err("orders above 258047 are not supported")),
        [b'~', rest @ ..] if rest.len() >= 3 => {
            let n = rest[..3].iter().fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63));
            (n, &rest[3..])
        }
        [b'~', ..] => return Err(err("truncated size")),
        [first, rest @ ..] => (usize::from(first - 63), rest),
    };
    let m = n * n.saturating_sub(1) / 2;
    if body.len() != m.div_ceil(6) {
        return Err(err("wrong length"));
    }
    let mut bits = body.iter().flat_map(|&b| (0..6).rev().map(move |k| ((b - 63) >> k) & 1 == 1));
    let mut g = GraphAssignment::empty(n);
    for j in 1..n {
        for i in 0..j {
            if bits.next().expect("length checked") {
                g.set_edge(i + 1, j + 1, true)?;
            }
        }
    }
    if bits.any(|b| b) {
        return Err(err("nonzero padding"));
    }
    Ok(g)
}
