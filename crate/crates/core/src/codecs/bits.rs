use std::fmt;
use std::ops::Not;

use rand::Rng;

/// An immutable sequence of payload bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitSequence(Vec<bool>);

impl BitSequence {
    pub fn new(bits: Vec<bool>) -> Self {
        BitSequence(bits)
    }

    pub fn zeros(len: usize) -> Self {
        BitSequence(vec![false; len])
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        BitSequence((0..len).map(|_| rng.random()).collect())
    }

    /// Bits of `bytes`, most significant bit of each byte first, truncated
    /// to `len` bits when given.
    pub fn from_bytes_msb(bytes: &[u8], len: Option<usize>) -> Self {
        let total = bytes.len() * 8;
        let len = len.map_or(total, |l| l.min(total));
        BitSequence((0..len).map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0).collect())
    }

    /// Pack MSB-first; the final partial byte is zero padded.
    pub fn to_bytes_msb(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.0.len().div_ceil(8)];
        for (i, &b) in self.0.iter().enumerate() {
            if b {
                out[i / 8] |= 0x80 >> (i % 8);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.0.get(i).copied()
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }
}

impl FromIterator<bool> for BitSequence {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitSequence(iter.into_iter().collect())
    }
}

impl Not for &BitSequence {
    type Output = BitSequence;

    fn not(self) -> BitSequence {
        self.iter().map(|b| !b).collect()
    }
}

impl fmt::Display for BitSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}
