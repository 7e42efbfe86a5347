use alloc::string::String;
use alloc::vec::Vec;

use crate::qcore::PauliOp;
use crate::{Error, Result};

/// How many message bits each sender carries per GHZ symbol.
///
/// The default layout gives the first sender two bits (a full Pauli) and
/// every other sender one bit (`I` or `X`), so a symbol carries `N` bits for
/// `N` users: exactly what one GHZ measurement plus one X publication can
/// resolve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolLayout {
    widths: Vec<u8>,
}

impl SymbolLayout {
    pub fn for_users(n_users: usize) -> Result<Self> {
        if n_users < 2 {
            return Err(Error::TooFewUsers(n_users));
        }
        let mut widths = alloc::vec![1u8; n_users - 1];
        widths[0] = 2;
        Ok(Self { widths })
    }

    /// Arbitrary per-sender widths, each 1 or 2.
    pub fn new(widths: Vec<u8>) -> Result<Self> {
        if widths.is_empty() {
            return Err(Error::TooFewUsers(1));
        }
        if let Some(&w) = widths.iter().find(|&&w| w != 1 && w != 2) {
            return Err(Error::OutOfRange { name: "sender width", value: f64::from(w) });
        }
        Ok(Self { widths })
    }

    pub fn n_users(&self) -> usize {
        self.widths.len() + 1
    }

    pub fn senders(&self) -> usize {
        self.widths.len()
    }

    pub fn widths(&self) -> &[u8] {
        &self.widths
    }

    /// Bits per symbol.
    pub fn width(&self) -> usize {
        self.widths.iter().map(|&w| usize::from(w)).sum()
    }

    /// Big-endian bits of a symbol value.
    pub fn bits_of(&self, value: u32) -> Vec<bool> {
        let w = self.width();
        (0..w).map(|k| value >> (w - 1 - k) & 1 == 1).collect()
    }

    pub fn value_of(&self, bits: &[bool]) -> u32 {
        bits.iter().fold(0, |acc, &b| acc << 1 | u32::from(b))
    }
}

/// Each sender's Pauli for one symbol: two bits map `00→I, 01→X, 10→Y,
/// 11→Z`; one bit maps `0→I, 1→X`.
pub fn encode_symbol(layout: &SymbolLayout, bits: &[bool]) -> Result<Vec<PauliOp>> {
    if bits.len() != layout.width() {
        return Err(Error::SymbolWidth { expected: layout.width(), got: bits.len() });
    }
    let mut ops = Vec::with_capacity(layout.senders());
    let mut rest = bits;
    for &w in layout.widths() {
        let (head, tail) = rest.split_at(usize::from(w));
        ops.push(match head {
            [hi, lo] => PauliOp::from_bits(*hi, *lo),
            [b] => PauliOp::from_bits(false, *b),
            _ => unreachable!("widths are 1 or 2"),
        });
        rest = tail;
    }
    Ok(ops)
}

/// A plain message as a bit string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    bits: Vec<bool>,
}

impl Message {
    /// Accepts a string of `0`/`1`, or hex with a `0x` prefix.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let bits: Vec<bool> = if let Some(hex) = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")) {
            let mut bits = Vec::with_capacity(hex.len() * 4);
            for ch in hex.chars() {
                let d = ch.to_digit(16).ok_or(Error::InvalidMessage("not a hex digit"))?;
                bits.extend((0..4).rev().map(|k| d >> k & 1 == 1));
            }
            bits
        } else {
            text.chars()
                .map(|ch| match ch {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::InvalidMessage("expected 0/1 digits or 0x-prefixed hex")),
                })
                .collect::<Result<_>>()?
        };
        if bits.is_empty() {
            return Err(Error::InvalidMessage("empty message"));
        }
        Ok(Self { bits })
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Splits into symbol values, zero-padding the tail. Returns the symbols
    /// and the pad length.
    pub fn frame(&self, layout: &SymbolLayout) -> (Vec<u32>, usize) {
        let w = layout.width();
        let pad = (w - self.bits.len() % w) % w;
        let mut padded = self.bits.clone();
        padded.resize(self.bits.len() + pad, false);
        (padded.chunks(w).map(|ch| layout.value_of(ch)).collect(), pad)
    }
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}
