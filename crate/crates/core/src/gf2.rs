//! GF(2) row vectors and the polar transform.
//!
//! Vectors are packed into `u64` words, bit `j` living in word `j / 64` at
//! position `j % 64`. Bits past `len` are always zero.
//!
//! The generator matrix is `G_N = B_N F^{⊗n}` with `F = [[1,0],[1,1]]` and
//! `B_N` the bit-reversal permutation. No `N×N` matrix is ever built; rows
//! are produced on demand by encoding unit vectors.

use std::fmt;
use std::ops::BitXor;
use std::str::FromStr;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    /// Builds a vector from `0`/`1` bytes; any non-zero byte counts as 1.
    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (j, &b) in bits.iter().enumerate() {
            if b != 0 {
                v.set(j, true);
            }
        }
        v
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<u8> = bits.into_iter().map(u8::from).collect();
        Self::from_bits(&bits)
    }

    /// The unit vector with a single one at `index`.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(index, true);
        v
    }

    pub(crate) fn from_words(words: Vec<u64>, len: usize) -> Self {
        let mut v = Self { words, len };
        v.words.resize(len.div_ceil(WORD), 0);
        v.clear_tail();
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, j: usize) -> bool {
        assert!(j < self.len, "bit index {j} out of range {}", self.len);
        (self.words[j / WORD] >> (j % WORD)) & 1 == 1
    }

    #[inline]
    pub fn bit(&self, j: usize) -> u8 {
        u8::from(self.get(j))
    }

    #[inline]
    pub fn set(&mut self, j: usize, value: bool) {
        assert!(j < self.len, "bit index {j} out of range {}", self.len);
        let mask = 1u64 << (j % WORD);
        if value {
            self.words[j / WORD] |= mask;
        } else {
            self.words[j / WORD] &= !mask;
        }
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |j| self.get(j))
    }

    pub fn to_bits(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                expected: self.len,
                actual: other.len,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a ^ b)
            .collect();
        Ok(BitVector {
            words,
            len: self.len,
        })
    }

    /// Gathers the bits at `indices` (0-based) into a new vector.
    pub fn select(&self, indices: &[usize]) -> BitVector {
        BitVector::from_bools(indices.iter().map(|&j| self.get(j)))
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }
}

impl BitXor for &BitVector {
    type Output = BitVector;

    /// Panics on length mismatch; use [`BitVector::xor`] for a checked form.
    fn bitxor(self, rhs: &BitVector) -> BitVector {
        self.xor(rhs).expect("xor of unequal-length bit vectors")
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for (pos, c) in s.trim().chars().enumerate() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => {
                    return Err(Error::Parse(format!(
                        "unexpected character {other:?} at column {}",
                        pos + 1
                    )))
                }
            }
        }
        Ok(BitVector::from_bits(&bits))
    }
}

/// Block length `N = 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockLen {
    n: u32,
}

impl BlockLen {
    pub const MAX_EXPONENT: u32 = 30;

    pub fn new(n: u32) -> Result<Self> {
        if n > Self::MAX_EXPONENT {
            return Err(Error::InvalidParameter(format!(
                "exponent {n} exceeds {}",
                Self::MAX_EXPONENT
            )));
        }
        Ok(Self { n })
    }

    pub fn from_len(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidLength(len));
        }
        Self::new(len.trailing_zeros())
    }

    pub fn exponent(self) -> u32 {
        self.n
    }

    pub fn len(self) -> usize {
        1usize << self.n
    }
}

/// Reverses the low `n` bits of `index`.
#[inline]
pub fn reverse_index(index: usize, n: u32) -> usize {
    if n == 0 {
        0
    } else {
        index.reverse_bits() >> (usize::BITS - n)
    }
}

/// `u B_N`: moves the bit at index `b_1…b_n` to index `b_n…b_1`.
pub fn bit_reverse_permute(u: &BitVector) -> Result<BitVector> {
    let n = BlockLen::from_len(u.len())?.exponent();
    let mut out = BitVector::zeros(u.len());
    for (w, &word) in u.words().iter().enumerate() {
        let mut rest = word;
        while rest != 0 {
            let j = w * WORD + rest.trailing_zeros() as usize;
            out.set(reverse_index(j, n), true);
            rest &= rest - 1;
        }
    }
    Ok(out)
}

// mask of positions j (mod 64) with bit `log2(s)` of j clear, for s < 64
const STAGE_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// `u F^{⊗n}` via the in-place butterfly network: at stride `s`, every
/// position `j` with `j & s == 0` absorbs `j + s`.
pub fn apply_fn(u: &BitVector) -> Result<BitVector> {
    let n = BlockLen::from_len(u.len())?.exponent() as usize;
    let mut words = u.words().to_vec();
    for stage in 0..n {
        let stride = 1usize << stage;
        if stride < WORD {
            let mask = STAGE_MASKS[stage];
            for w in words.iter_mut() {
                *w ^= (*w >> stride) & mask;
            }
        } else {
            let ws = stride / WORD;
            for a in 0..words.len() {
                if a & ws == 0 {
                    words[a] ^= words[a + ws];
                }
            }
        }
    }
    Ok(BitVector::from_words(words, u.len()))
}

/// `x = u G_N = u B_N F^{⊗n}`.
pub fn encode(u: &BitVector) -> Result<BitVector> {
    apply_fn(&bit_reverse_permute(u)?)
}

/// Row `index` (0-based) of `G_N`.
pub fn generator_row(len: usize, index: usize) -> Result<BitVector> {
    encode(&BitVector::unit(len, index))
}

/// Hamming weight of the `G_N` row with bit-index `index`, i.e. `2^{w_H}`.
pub fn row_weight(index: usize) -> usize {
    1usize << index.count_ones()
}
