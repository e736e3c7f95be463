//! Successive-cancellation decoding in the log-likelihood domain.
//!
//! Since `G_N = F^{⊗n} B_N`, the decoder bit-reverses the channel LLRs once
//! and then runs the natural-order `F^{⊗n}` recursion. The split-channel LLR
//! of `u_i` is obtained by the depth-first schedule: leaf `i` recomputes the
//! levels below the lowest set bit of `i` (one `g` step, then `f` steps),
//! and completed subtrees fold their re-encoded bits upward. The schedule is
//! a loop over leaves, so no recursion depth is involved.
//!
//! Storage: LLR level `k` (`0 ≤ k ≤ n`) holds `2^k` values, `2N − 1` in all,
//! level `n` being the channel. Partial sums for level `k < n` hold `2^{k+1}`
//! bits: the left and right children of the level-`k+1` node under
//! assembly.

use crate::channels::Channel;
use crate::construction::CodeSpec;
use crate::error::{Error, Result};
use crate::gf2::{encode, reverse_index, BitVector, BlockLen};

/// Per-position channel LLRs `ln(W(y_j|0)/W(y_j|1))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation {
    llr: Vec<f64>,
}

impl Observation {
    pub fn new(llr: Vec<f64>) -> Result<Self> {
        if let Some(pos) = llr.iter().position(|v| v.is_nan()) {
            return Err(Error::NanObservation(pos));
        }
        Ok(Self { llr })
    }

    pub fn llrs(&self) -> &[f64] {
        &self.llr
    }

    pub fn len(&self) -> usize {
        self.llr.len()
    }

    pub fn is_empty(&self) -> bool {
        self.llr.is_empty()
    }
}

pub fn llr_from_output(ch: &Channel, y: &[usize]) -> Result<Observation> {
    let llr = y.iter().map(|&s| ch.llr(s)).collect::<Result<Vec<_>>>()?;
    Observation::new(llr)
}

/// Exact check-node combine: the log of `(e^{a+b} + 1) / (e^a + e^b)`.
/// Evaluated as `sign(a) sign(b) f(|a|, |b|)`, so it is exactly odd in each
/// argument and symmetric.
#[inline]
pub fn check_combine(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let (x, y) = (a.abs(), b.abs());
    let mag = if x.is_infinite() {
        y
    } else if y.is_infinite() {
        x
    } else {
        x.min(y) + (-(x + y)).exp().ln_1p() - (-(x - y).abs()).exp().ln_1p()
    };
    if (a < 0.0) != (b < 0.0) {
        -mag
    } else {
        mag
    }
}

/// Variable-node combine `b + (1 − 2u) a`. Contradicting certainties
/// (`+∞` against `−∞`) only arise after a wrong earlier decision; the
/// result then carries no information and is 0.
#[inline]
pub fn variable_combine(a: f64, b: f64, u: u8) -> f64 {
    let v = if u == 0 { b + a } else { b - a };
    if v.is_nan() {
        0.0
    } else {
        v
    }
}

/// Decoder scratch for one block length; reusable across decodes.
#[derive(Clone, Debug)]
pub struct LlrWorkspace {
    n: u32,
    llr: Vec<f64>,
    psum: Vec<u8>,
    evaluations: u64,
}

#[inline]
fn llr_offset(level: u32) -> usize {
    (1usize << level) - 1
}

#[inline]
fn psum_offset(level: u32) -> usize {
    (1usize << (level + 1)) - 2
}

impl LlrWorkspace {
    pub fn new(len: BlockLen) -> Self {
        let n = len.exponent();
        let size = len.len();
        Self {
            n,
            llr: vec![0.0; 2 * size - 1],
            psum: vec![0; 2 * size - 2],
            evaluations: 0,
        }
    }

    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    pub fn llr_slots(&self) -> usize {
        self.llr.len()
    }

    /// LR evaluations (channel loads plus combines) in the last decode.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    fn check_obs(&self, obs: &Observation) -> Result<()> {
        if obs.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                actual: obs.len(),
            });
        }
        Ok(())
    }

    /// Runs one SC pass. `decide(i, llr)` receives the decision LLR of
    /// `u_{i+1}` and returns the bit fed to later stages.
    pub fn run<F>(&mut self, obs: &Observation, mut decide: F) -> Result<BitVector>
    where
        F: FnMut(usize, f64) -> u8,
    {
        self.check_obs(obs)?;
        let n = self.n;
        let len = self.block_len();
        let top = llr_offset(n);
        for j in 0..len {
            self.llr[top + j] = obs.llr[reverse_index(j, n)];
        }
        self.evaluations = len as u64;
        let mut u_hat = BitVector::zeros(len);
        if n == 0 {
            if decide(0, self.llr[0]) != 0 {
                u_hat.set(0, true);
            }
            return Ok(u_hat);
        }

        for i in 0..len {
            let start = if i == 0 { n - 1 } else { i.trailing_zeros() };
            for level in (0..=start).rev() {
                let half = 1usize << level;
                let (lo, hi) = self.llr.split_at_mut(llr_offset(level + 1));
                let dst = &mut lo[llr_offset(level)..llr_offset(level) + half];
                let src = &hi[..2 * half];
                if i != 0 && level == start {
                    let left = &self.psum[psum_offset(level)..psum_offset(level) + half];
                    for j in 0..half {
                        dst[j] = variable_combine(src[j], src[j + half], left[j]);
                    }
                } else {
                    for j in 0..half {
                        dst[j] = check_combine(src[j], src[j + half]);
                    }
                }
                self.evaluations += half as u64;
            }

            let bit = decide(i, self.llr[0]) & 1;
            if bit == 1 {
                u_hat.set(i, true);
            }
            self.fold_partial_sums(i, bit);
        }
        Ok(u_hat)
    }

    fn fold_partial_sums(&mut self, leaf: usize, bit: u8) {
        let n = self.n;
        let mut level = 0u32;
        let mut node = leaf;
        self.psum[psum_offset(0) + (node & 1)] = bit;
        while node & 1 == 1 {
            let half = 1usize << level;
            let off = psum_offset(level);
            for j in 0..half {
                self.psum[off + j] ^= self.psum[off + half + j];
            }
            if level + 1 == n {
                break;
            }
            let parent = node >> 1;
            let dst = psum_offset(level + 1) + (parent & 1) * 2 * half;
            self.psum.copy_within(off..off + 2 * half, dst);
            level += 1;
            node = parent;
        }
    }

    /// SC decoding: frozen positions take their known values, the rest are
    /// 0 iff the decision LLR is `≥ 0`.
    pub fn decode(&mut self, code: &CodeSpec, obs: &Observation) -> Result<Decoded> {
        if code.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                actual: code.len(),
            });
        }
        let frozen = code.frozen_block();
        let info = code.info_mask();
        let u_hat = self.run(obs, |i, llr| {
            if info[i] {
                u8::from(llr < 0.0)
            } else {
                frozen.bit(i)
            }
        })?;
        let x_hat = encode(&u_hat)?;
        Ok(Decoded { u_hat, x_hat })
    }

    /// Genie-aided pass: every stage is fed the true bit. Returns the
    /// decision LLR of every index.
    pub fn genie_llrs(&mut self, obs: &Observation, true_u: &BitVector) -> Result<Vec<f64>> {
        if true_u.len() != self.block_len() {
            return Err(Error::LengthMismatch {
                expected: self.block_len(),
                actual: true_u.len(),
            });
        }
        let mut llrs = vec![0.0; self.block_len()];
        self.run(obs, |i, llr| {
            llrs[i] = llr;
            true_u.bit(i)
        })?;
        Ok(llrs)
    }

    /// Flags the indices `i ∈ A` where the genie-aided statistic does not
    /// strictly favor the true bit, i.e.
    /// `W_N^{(i)}(y, u_1^{i-1} | u_i) ≤ W_N^{(i)}(y, u_1^{i-1} | u_i ⊕ 1)`.
    pub fn genie_trace(
        &mut self,
        code: &CodeSpec,
        obs: &Observation,
        true_u: &BitVector,
    ) -> Result<Vec<bool>> {
        let llrs = self.genie_llrs(obs, true_u)?;
        let info = code.info_mask();
        Ok(llrs
            .iter()
            .enumerate()
            .map(|(i, &l)| info[i] && favours_wrong_bit(l, true_u.bit(i)))
            .collect())
    }
}

/// `(1 − 2u) · llr ≤ 0`.
#[inline]
pub fn favours_wrong_bit(llr: f64, u: u8) -> bool {
    if u == 0 {
        llr <= 0.0
    } else {
        llr >= 0.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub u_hat: BitVector,
    pub x_hat: BitVector,
}

pub fn sc_decode(code: &CodeSpec, obs: &Observation) -> Result<Decoded> {
    let len = BlockLen::from_len(code.len())?;
    LlrWorkspace::new(len).decode(code, obs)
}

pub fn genie_trace(code: &CodeSpec, obs: &Observation, true_u: &BitVector) -> Result<Vec<bool>> {
    let len = BlockLen::from_len(code.len())?;
    LlrWorkspace::new(len).genie_trace(code, obs, true_u)
}
