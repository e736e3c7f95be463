//! Channel combining and splitting.
//!
//! A split channel `W_N^{(i)}` has outputs `(y_1^N, u_1^{i-1})`. These are
//! encoded as a single integer `ybase · 2^{i-1} + ubits`, where `ybase` is
//! the mixed-radix value of `y_1 … y_N` (base `y_count`, `y_1` most
//! significant) and `ubits` the binary value of `u_1 … u_{i-1}` (`u_1` most
//! significant). Both the recursive construction and the brute-force oracle
//! use this encoding, so their tables compare element-wise.
//!
//! Exact tables grow as `y_count^N · 2^{i-1}`; they are capped at `N ≤ 8`
//! and `y_count ≤ 4`. Large-`N` work goes through [`bec_profile`] or the
//! Monte-Carlo estimator in [`crate::construction`].

use crate::channels::{bhattacharyya, symmetric_capacity, Channel, DmcTable};
use crate::error::{Error, Result};
use crate::gf2::reverse_index;

pub const MAX_EXACT_LEVEL: u32 = 3;
pub const MAX_EXACT_Y: usize = 4;
pub const MAX_BEC_LEVEL: u32 = 25;

const SYNTH_ROW_TOL: f64 = 1e-10;

/// Explicit table of `W_N^{(i)}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitChannel {
    pub table: DmcTable,
    /// Level `n`, with `N = 2^n`.
    pub n: u32,
    /// 1-based channel index.
    pub index: usize,
    /// Output alphabet size of the underlying channel.
    pub base_y: usize,
}

impl SplitChannel {
    pub fn block_len(&self) -> usize {
        1 << self.n
    }

    /// Symbol id of the output `(y_1^N, u_1^{i-1})`.
    pub fn symbol(&self, y: &[usize], u_prefix: &[u8]) -> usize {
        assert_eq!(y.len(), self.block_len());
        assert_eq!(u_prefix.len(), self.index - 1);
        let ybase = y.iter().fold(0, |acc, &s| acc * self.base_y + s);
        let ubits = u_prefix.iter().fold(0, |acc, &b| (acc << 1) | b as usize);
        (ybase << (self.index - 1)) | ubits
    }

    pub fn bhattacharyya(&self) -> f64 {
        bhattacharyya(&self.table)
    }

    pub fn capacity(&self) -> f64 {
        symmetric_capacity(&self.table)
    }
}

fn check_exact_limits(w: &DmcTable, n: u32, index: usize) -> Result<()> {
    if n > MAX_EXACT_LEVEL {
        return Err(Error::ResourceLimit(format!(
            "exact synthesis supports N <= {}, got N = {}",
            1 << MAX_EXACT_LEVEL,
            1u64 << n.min(63)
        )));
    }
    if w.y_count() > MAX_EXACT_Y {
        return Err(Error::ResourceLimit(format!(
            "exact synthesis supports y_count <= {MAX_EXACT_Y}, got {}",
            w.y_count()
        )));
    }
    if index == 0 || index > (1 << n) {
        return Err(Error::InvalidParameter(format!(
            "index {index} outside 1..={}",
            1 << n
        )));
    }
    Ok(())
}

/// One transform step `W_M^{(j)} ↦ W_{2M}^{(2j-1)}` (`plus = false`) or
/// `W_{2M}^{(2j)}` (`plus = true`), with canonical symbols on both sides.
fn transform(t: &DmcTable, base_y: usize, m: usize, j: usize, plus: bool) -> Result<DmcTable> {
    let half_y = base_y.pow(m as u32);
    let prev_u = j - 1; // u bits carried by the input channel
    let carried = 2 * j - 2; // u_1 .. u_{2j-2}
    let out_u = if plus { carried + 1 } else { carried };
    let out_len = (half_y * half_y) << out_u;
    let mut p0 = vec![0.0; out_len];
    let mut p1 = vec![0.0; out_len];
    let prob = |s: usize, x: u8| t.prob(s, x);
    for a in 0..half_y {
        for b in 0..half_y {
            let ybase = a * half_y + b;
            for ubits in 0..(1usize << carried) {
                // u_k is bit (carried - k) of ubits, k = 1..carried
                let mut odd = 0usize;
                let mut even = 0usize;
                for k in 1..=prev_u {
                    let uo = (ubits >> (carried - (2 * k - 1))) & 1;
                    let ue = (ubits >> (carried - 2 * k)) & 1;
                    odd = (odd << 1) | (uo ^ ue);
                    even = (even << 1) | ue;
                }
                let s1 = (a << prev_u) | odd;
                let s2 = (b << prev_u) | even;
                let base = ((ybase << carried) | ubits) << (out_u - carried);
                if plus {
                    for u1 in 0..2u8 {
                        let sym = base | u1 as usize;
                        p0[sym] = 0.5 * prob(s1, u1) * prob(s2, 0);
                        p1[sym] = 0.5 * prob(s1, u1 ^ 1) * prob(s2, 1);
                    }
                } else {
                    p0[base] = 0.5 * (prob(s1, 0) * prob(s2, 0) + prob(s1, 1) * prob(s2, 1));
                    p1[base] = 0.5 * (prob(s1, 1) * prob(s2, 0) + prob(s1, 0) * prob(s2, 1));
                }
            }
        }
    }
    DmcTable::with_tolerance(p0, p1, SYNTH_ROW_TOL)
}

/// `(W,W) ↦ (W⁻, W⁺)` with `W⁻` on `Y²` and `W⁺` on `Y² × X`.
pub fn single_step(w: &DmcTable) -> Result<(DmcTable, DmcTable)> {
    let y = w.y_count();
    Ok((transform(w, y, 1, 1, false)?, transform(w, y, 1, 1, true)?))
}

/// Builds `W_N^{(i)}` by walking the path bits of `i - 1` (most significant
/// first): bit 0 takes the `W⁻` branch, bit 1 the `W⁺` branch.
pub fn synthesize_exact(w: &DmcTable, n: u32, index: usize) -> Result<SplitChannel> {
    check_exact_limits(w, n, index)?;
    let mut table = w.clone();
    let mut j = 1usize;
    for level in 0..n {
        let bit = ((index - 1) >> (n - 1 - level)) & 1;
        table = transform(&table, w.y_count(), 1 << level, j, bit == 1)?;
        j = 2 * j - 1 + bit;
    }
    debug_assert_eq!(j, index);
    Ok(SplitChannel {
        table,
        n,
        index,
        base_y: w.y_count(),
    })
}

/// Entry of `G_N` at (row, col): 1 iff `col ⊆ reverse(row)` bitwise.
#[inline]
fn gn_entry(n: u32, row: usize, col: usize) -> bool {
    col & !reverse_index(row, n) == 0
}

/// Codeword `u G_N` as a bitmask (bit `j` = `x_{j+1}`), by direct summation
/// of generator rows.
fn gn_codeword(n: u32, u: usize) -> usize {
    let len = 1usize << n;
    let mut x = 0usize;
    for row in 0..len {
        if (u >> row) & 1 == 1 {
            for col in 0..len {
                if gn_entry(n, row, col) {
                    x ^= 1 << col;
                }
            }
        }
    }
    x
}

/// Oracle: evaluates `W_N^{(i)}(y, u_1^{i-1} | u_i) = Σ 2^{-(N-1)} W^N(y | u G_N)`
/// by enumerating every input block and every output block.
pub fn brute_force_split(w: &DmcTable, n: u32, index: usize) -> Result<SplitChannel> {
    check_exact_limits(w, n, index)?;
    let len = 1usize << n;
    let ny = w.y_count();
    let ycount = ny.pow(len as u32);
    let out_len = ycount << (index - 1);
    let mut p0 = vec![0.0; out_len];
    let mut p1 = vec![0.0; out_len];
    let scale = 0.5f64.powi(len as i32 - 1);
    let mut ys = vec![0usize; len];
    for u in 0..(1usize << len) {
        // u_k is bit k-1 of `u`
        let x = gn_codeword(n, u);
        let ubits = (0..index - 1).fold(0usize, |acc, k| (acc << 1) | ((u >> k) & 1));
        let ui = (u >> (index - 1)) & 1;
        let row = if ui == 0 { &mut p0 } else { &mut p1 };
        for ybase in 0..ycount {
            let mut rest = ybase;
            for pos in (0..len).rev() {
                ys[pos] = rest % ny;
                rest /= ny;
            }
            let mut p = scale;
            for (pos, &y) in ys.iter().enumerate() {
                p *= w.prob(y, ((x >> pos) & 1) as u8);
            }
            row[(ybase << (index - 1)) | ubits] += p;
        }
    }
    Ok(SplitChannel {
        table: DmcTable::with_tolerance(p0, p1, SYNTH_ROW_TOL)?,
        n,
        index,
        base_y: ny,
    })
}

/// Erasure probabilities (equivalently Bhattacharyya parameters) of the
/// `N` split channels of a BEC.
#[derive(Clone, Debug, PartialEq)]
pub struct BecProfile {
    pub n: u32,
    pub epsilon: f64,
    /// `z[k]` for channel `k + 1`.
    pub z: Vec<f64>,
    /// `1 - z[k]`.
    pub i: Vec<f64>,
}

impl BecProfile {
    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// CSV with header `index,z,i`; indices are 1-based.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,z,i")?;
        for (k, (z, i)) in self.z.iter().zip(&self.i).enumerate() {
            writeln!(out, "{},{},{}", k + 1, z, i)?;
        }
        Ok(())
    }
}

/// `Z(W_{2M}^{(2j-1)}) = 2Z − Z²`, `Z(W_{2M}^{(2j)}) = Z²` from `Z = Z(W_M^{(j)})`.
pub fn bec_profile(epsilon: f64, n: u32) -> Result<BecProfile> {
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside [0,1]")));
    }
    if n > MAX_BEC_LEVEL {
        return Err(Error::ResourceLimit(format!(
            "BEC profile level {n} exceeds {MAX_BEC_LEVEL}"
        )));
    }
    let mut z = Vec::with_capacity(1 << n);
    z.push(epsilon);
    for _ in 0..n {
        let prev = std::mem::take(&mut z);
        z.reserve(prev.len() * 2);
        for v in prev {
            z.push(2.0 * v - v * v);
            z.push(v * v);
        }
    }
    let i = z.iter().map(|v| 1.0 - v).collect();
    Ok(BecProfile { n, epsilon, z, i })
}

/// `Z(W_N^{(i)})` for a symmetric channel via orbit representatives.
///
/// The group `{a G_N : a_1^i = 0}` acts on `Y^N` componentwise through the
/// channel's output involution. The sum runs over one representative per
/// orbit, weighted by orbit size, using `W_N^{(i)}(y, 0^{i-1} | ·)` only.
pub fn symmetric_z(ch: &Channel, n: u32, index: usize) -> Result<f64> {
    let perm = ch.symmetry().ok_or_else(|| {
        Error::Unsupported(format!("{ch} is not a known symmetric channel"))
    })?;
    let w = ch.table();
    check_exact_limits(&w, n, index)?;
    let len = 1usize << n;
    let ny = w.y_count();
    let ycount = ny.pow(len as u32);
    let scale = 0.5f64.powi(len as i32 - 1);

    let digits = |ybase: usize| -> Vec<usize> {
        let mut ys = vec![0; len];
        let mut rest = ybase;
        for pos in (0..len).rev() {
            ys[pos] = rest % ny;
            rest /= ny;
        }
        ys
    };
    let pack = |ys: &[usize]| ys.iter().fold(0, |acc, &s| acc * ny + s);

    // W_N^{(i)}(y, 0^{i-1} | ui), summed over the free tail u_{i+1}^N.
    let split_prob = |ys: &[usize], ui: usize| -> f64 {
        let free = len - index;
        let mut total = 0.0;
        for tail in 0..(1usize << free) {
            let u = (ui << (index - 1)) | (tail << index);
            let x = gn_codeword(n, u);
            let mut p = scale;
            for (pos, &y) in ys.iter().enumerate() {
                p *= w.prob(y, ((x >> pos) & 1) as u8);
            }
            total += p;
        }
        total
    };

    // generators of the acting group: rows i+1..N of G_N
    let generators: Vec<usize> = (index..len).map(|row| gn_codeword(n, 1 << row)).collect();
    let mut visited = vec![false; ycount];
    let mut z = 0.0;
    for rep in 0..ycount {
        if visited[rep] {
            continue;
        }
        let ys = digits(rep);
        let mut orbit_size = 0usize;
        for combo in 0..(1usize << generators.len()) {
            let c = generators
                .iter()
                .enumerate()
                .filter(|(g, _)| (combo >> g) & 1 == 1)
                .fold(0, |acc, (_, &row)| acc ^ row);
            let moved: Vec<usize> = ys
                .iter()
                .enumerate()
                .map(|(pos, &y)| if (c >> pos) & 1 == 1 { perm[y] } else { y })
                .collect();
            let id = pack(&moved);
            if !visited[id] {
                visited[id] = true;
                orbit_size += 1;
            }
        }
        let a = split_prob(&ys, 0);
        let b = split_prob(&ys, 1);
        z += orbit_size as f64 * (a * b).sqrt();
    }
    Ok(z * (1u64 << (index - 1)) as f64)
}
