//! Rewriting operators on binary strings that model welfare-preserving
//! swaps at distance one (`f3: 0x1 -> 1x̄0`) and two (`f4: 0xy1 -> 1ȳx̄0`)
//! on the edge sequence of a path.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A binary string of at most 64 symbols. Symbol 0 is the most significant
/// bit, so equal-length strings compare lexicographically as integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: u8,
    bits: u64,
}

impl BitString {
    pub fn new(symbols: &[bool]) -> Result<Self> {
        if symbols.len() > 64 {
            return Err(Error::InvalidParameter(format!(
                "bit strings hold at most 64 symbols, got {}",
                symbols.len()
            )));
        }
        let bits = symbols.iter().fold(0u64, |acc, &b| acc << 1 | u64::from(b));
        Ok(Self {
            len: symbols.len() as u8,
            bits,
        })
    }

    pub fn len(&self) -> usize {
        usize::from(self.len)
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> (self.len() - 1 - i) & 1 == 1
    }

    fn set(&mut self, i: usize, v: bool) {
        let mask = 1u64 << (self.len() - 1 - i);
        if v {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
    }

    /// `0...01` of the given length.
    pub fn one_at_end(len: usize) -> Self {
        Self {
            len: len as u8,
            bits: 1,
        }
    }

    /// `10...0` of the given length.
    pub fn one_at_start(len: usize) -> Self {
        Self {
            len: len as u8,
            bits: 1u64 << (len - 1),
        }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("`{other}` is not a binary digit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&symbols)
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operator {
    F3,
    F4,
}

impl Operator {
    pub fn width(self) -> usize {
        match self {
            Operator::F3 => 3,
            Operator::F4 => 4,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Operator::F3 => "f3",
            Operator::F4 => "f4",
        })
    }
}

/// Applies `op` to the window starting at 0-based position `pos`.
///
/// ```
/// use seating::dynamics::{apply_f, Operator};
///
/// let s = "0011".parse().unwrap();
/// assert_eq!(apply_f(Operator::F4, s, 0).unwrap().to_string(), "1010");
/// ```
pub fn apply_f(op: Operator, s: BitString, pos: usize) -> Result<BitString> {
    let w = op.width();
    if pos + w > s.len() {
        return Err(Error::PatternMismatch(format!(
            "{op} at {pos} runs past the end of a string of length {}",
            s.len()
        )));
    }
    if s.get(pos) || !s.get(pos + w - 1) {
        return Err(Error::PatternMismatch(format!(
            "{op} needs 0…1 at {pos}, found {s}"
        )));
    }
    let mut out = s;
    out.set(pos, true);
    out.set(pos + w - 1, false);
    // the inner symbols are complemented and reversed
    for k in 1..w - 1 {
        out.set(pos + k, !s.get(pos + w - 1 - k));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub op: Operator,
    /// 0-based start of the rewritten window.
    pub pos: usize,
    pub before: BitString,
    pub after: BitString,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteTrace {
    pub k: usize,
    pub steps: Vec<RewriteStep>,
}

impl RewriteTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Largest `k` accepted by [`expand_chain`].
pub const MAX_CHAIN_K: usize = 20;

/// Operations `(op, 0-based position)` that take `0…01` to `10…0` on the
/// window of length `3k - 1` starting at `offset`.
fn chain_ops(k: usize, offset: usize, out: &mut Vec<(Operator, usize)>) {
    if k == 3 {
        out.extend(
            [
                (Operator::F3, 5),
                (Operator::F4, 2),
                (Operator::F4, 1),
                (Operator::F4, 3),
                (Operator::F4, 2),
                (Operator::F3, 0),
            ]
            .map(|(op, p)| (op, p + offset)),
        );
        return;
    }
    out.push((Operator::F3, offset + 3 * (k - 1) - 1));
    chain_ops(k - 1, offset + 1, out);
    chain_ops(k - 1, offset + 2, out);
    out.push((Operator::F3, offset));
}

/// The rewriting chain taking `0^(3k-2) 1` to `1 0^(3k-2)` with
/// `2^k - 2` operator uses, each one validated.
pub fn expand_chain(k: usize) -> Result<RewriteTrace> {
    if !(3..=MAX_CHAIN_K).contains(&k) {
        return Err(Error::InvalidParameter(format!(
            "chain parameter must lie in 3..={MAX_CHAIN_K}, got {k}"
        )));
    }
    let len = 3 * k - 1;
    let mut ops = Vec::with_capacity((1 << k) - 2);
    chain_ops(k, 0, &mut ops);
    let mut s = BitString::one_at_end(len);
    let mut steps = Vec::with_capacity(ops.len());
    for (op, pos) in ops {
        let after = apply_f(op, s, pos)?;
        if after <= s {
            return Err(Error::Internal(format!(
                "{op} at {pos} did not increase {s}"
            )));
        }
        steps.push(RewriteStep {
            op,
            pos,
            before: s,
            after,
        });
        s = after;
    }
    if s != BitString::one_at_start(len) {
        return Err(Error::Internal(format!("chain for k = {k} ended at {s}")));
    }
    Ok(RewriteTrace { k, steps })
}
