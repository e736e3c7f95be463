//! Seeded Monte-Carlo evaluation and the figure data feeds.

use std::io::Write;
use std::time::Instant;

use log::info;

use crate::channels::Channel;
use crate::construction::{construct_polar, draw_trial, construct_rm, CodeSpec, Method, ProfileMethod, ReliabilityProfile};
use crate::decoder::{favours_wrong_bit, llr_from_output, LlrWorkspace, Observation};
use crate::error::{Error, Result};
use crate::exec::{trial_rng, Exec};
use crate::gf2::{encode, BitVector, BlockLen};
use crate::synthesis::bec_profile;

#[derive(Clone, Debug)]
pub struct TrialReport {
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub stderr: f64,
    /// `Σ_{i∈A} ẑ_i` when the code carries a profile.
    pub bound_sum: Option<f64>,
    /// Per index (0-based): trials whose first genie-flagged information
    /// index was this one.
    pub first_error_hist: Vec<u64>,
    pub seed: u64,
    pub wall_time: f64,
}

// wall time is measurement noise, not part of the outcome
impl PartialEq for TrialReport {
    fn eq(&self, other: &Self) -> bool {
        self.trials == other.trials
            && self.block_errors == other.block_errors
            && self.bler == other.bler
            && self.stderr == other.stderr
            && self.bound_sum == other.bound_sum
            && self.first_error_hist == other.first_error_hist
            && self.seed == other.seed
    }
}

impl TrialReport {
    /// CSV with header `trials,errors,bler,stderr,bound_sum`. Wall time is
    /// left out so that reruns are byte-identical.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "trials,errors,bler,stderr,bound_sum")?;
        self.write_csv_row(&mut out)
    }

    pub fn write_csv_row<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let bound = self.bound_sum.map_or(String::new(), |b| b.to_string());
        writeln!(
            out,
            "{},{},{},{},{}",
            self.trials, self.block_errors, self.bler, self.stderr, bound
        )
    }

    pub fn write_hist_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,first_errors")?;
        for (i, c) in self.first_error_hist.iter().enumerate() {
            writeln!(out, "{},{}", i + 1, c)?;
        }
        Ok(())
    }
}

struct ChunkTally {
    errors: u64,
    hist: Vec<u64>,
}

/// Block-error rate of `code` under SC decoding over `trials` seeded trials.
///
/// Each trial draws uniform data bits for `A`, keeps the frozen bits,
/// encodes, transmits, decodes, and counts a block error when
/// `û_A ≠ u_A`. A genie-aided pass on the same observation records the
/// first information index whose statistic does not favor the true bit.
pub fn run_bler(code: &CodeSpec, trials: u64, seed: u64, exec: Exec) -> Result<TrialReport> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let start = Instant::now();
    let block = BlockLen::new(code.n())?;
    let len = block.len();
    let ch = code.channel();
    let frozen = code.frozen_block();
    let info = code.info_mask();
    if code.k() == 0 {
        info!("rate-0 code: block error rate is 0 by convention");
    }
    let tallies = exec.map_chunks(trials, |range| -> Result<ChunkTally> {
        let mut ws = LlrWorkspace::new(block);
        let mut tally = ChunkTally {
            errors: 0,
            hist: vec![0; len],
        };
        for t in range {
            let mut rng = trial_rng(seed, t);
            let (uniforms, bits) = draw_trial(len, &mut rng);
            let mut u = frozen.clone();
            for &i in code.info_set() {
                u.set(i, bits.get(i));
            }
            let x = encode(&u)?;
            let y: Vec<usize> = (0..len).map(|j| ch.transmit(x.bit(j), uniforms[j])).collect();
            let obs = llr_from_output(ch, &y)?;
            let decoded = ws.decode(code, &obs)?;
            if code.info_set().iter().any(|&i| decoded.u_hat.get(i) != u.get(i)) {
                tally.errors += 1;
            }
            let llrs = ws.genie_llrs(&obs, &u)?;
            if let Some(first) = (0..len).find(|&i| info[i] && favours_wrong_bit(llrs[i], u.bit(i))) {
                tally.hist[first] += 1;
            }
        }
        Ok(tally)
    });
    let mut block_errors = 0;
    let mut first_error_hist = vec![0u64; len];
    for tally in tallies {
        let tally = tally?;
        block_errors += tally.errors;
        for (h, c) in first_error_hist.iter_mut().zip(tally.hist) {
            *h += c;
        }
    }
    let bler = block_errors as f64 / trials as f64;
    Ok(TrialReport {
        trials,
        block_errors,
        bler,
        stderr: (bler * (1.0 - bler) / trials as f64).sqrt(),
        bound_sum: code.bound_sum(),
        first_error_hist,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationStats {
    /// Fraction of indices with `I ∈ (1−δ, 1]`.
    pub frac_high: f64,
    /// Fraction of indices with `I ∈ [0, δ)`.
    pub frac_low: f64,
}

pub fn polarization_stats(epsilon: f64, n: u32, delta: f64) -> Result<PolarizationStats> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0,1)")));
    }
    let profile = bec_profile(epsilon, n)?;
    Ok(fractions(&profile.i, delta))
}

pub fn fractions(capacities: &[f64], delta: f64) -> PolarizationStats {
    let total = capacities.len() as f64;
    let high = capacities.iter().filter(|&&i| i > 1.0 - delta).count();
    let low = capacities.iter().filter(|&&i| i < delta).count();
    PolarizationStats {
        frac_high: high as f64 / total,
        frac_low: low as f64 / total,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub eta: f64,
    /// `|A(η)| / N`.
    pub rate: f64,
    /// `Σ_{i∈A(η)} z_i`.
    pub bound: f64,
    /// `max_{i∈A(η)} z_i`, 0 for an empty set.
    pub max_z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RateReliabilityCurve {
    pub points: Vec<CurvePoint>,
}

impl RateReliabilityCurve {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "eta,R,B,L")?;
        for p in &self.points {
            writeln!(out, "{},{},{},{}", p.eta, p.rate, p.bound, p.max_z)?;
        }
        Ok(())
    }
}

/// Sorted z values with prefix sums, for repeated threshold queries.
struct SortedProfile {
    z: Vec<f64>,
    prefix: Vec<f64>,
}

impl SortedProfile {
    fn new(profile: &ReliabilityProfile) -> Self {
        let mut z = profile.z_hat.clone();
        z.sort_by(f64::total_cmp);
        let mut prefix = Vec::with_capacity(z.len() + 1);
        prefix.push(0.0);
        let mut acc = 0.0;
        for v in &z {
            acc += v;
            prefix.push(acc);
        }
        Self { z, prefix }
    }

    fn point(&self, eta: f64, count: usize) -> CurvePoint {
        CurvePoint {
            eta,
            rate: count as f64 / self.z.len() as f64,
            bound: self.prefix[count],
            max_z: if count == 0 { 0.0 } else { self.z[count - 1] },
        }
    }
}

/// `(R, B, L)` of `A(η) = {i : z_i < η}` for every `η` in the grid.
pub fn rate_reliability_curve(profile: &ReliabilityProfile, eta_grid: &[f64]) -> RateReliabilityCurve {
    let sorted = SortedProfile::new(profile);
    let points = eta_grid
        .iter()
        .map(|&eta| sorted.point(eta, sorted.z.partition_point(|&z| z < eta)))
        .collect();
    RateReliabilityCurve { points }
}

/// Curve point for the `⌊rate · N⌋` most reliable indices; `eta` is the
/// smallest threshold selecting them (the next larger z, or 1 past the end).
pub fn point_at_rate(profile: &ReliabilityProfile, rate: f64) -> CurvePoint {
    let sorted = SortedProfile::new(profile);
    let count = ((rate * sorted.z.len() as f64).floor() as usize).min(sorted.z.len());
    let eta = sorted.z.get(count).copied().unwrap_or(1.0);
    sorted.point(eta, count)
}

/// Logarithmic grid of `points` thresholds from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![hi];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..points)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (points - 1) as f64))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairedReport {
    pub polar: CodeSpec,
    pub rm: CodeSpec,
    pub polar_report: TrialReport,
    pub rm_report: TrialReport,
}

impl PairedReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "rule,trials,errors,bler,stderr,bound_sum")?;
        for (name, r) in [("polar", &self.polar_report), ("rm", &self.rm_report)] {
            write!(out, "{name},")?;
            r.write_csv_row(&mut out)?;
        }
        Ok(())
    }
}

/// Polar and RM codes of the same `(N, K)` on a BEC, simulated with common
/// random numbers. Both carry the exact BEC profile for their bound sums.
pub fn rm_vs_polar(epsilon: f64, n: u32, k: usize, trials: u64, seed: u64, exec: Exec) -> Result<PairedReport> {
    let ch = Channel::bec(epsilon)?;
    let polar = construct_polar(&ch, n, k, Method::ExactBec)?;
    let profile = ReliabilityProfile::exact(bec_profile(epsilon, n)?.z, ProfileMethod::ExactBec);
    let rm = construct_rm(&ch, n, k)?.with_profile(profile)?;
    let polar_report = run_bler(&polar, trials, seed, exec)?;
    let rm_report = run_bler(&rm, trials, seed, exec)?;
    Ok(PairedReport {
        polar,
        rm,
        polar_report,
        rm_report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalingRow {
    pub len: usize,
    pub encode_ns: f64,
    pub decode_ns: f64,
    pub evaluations: u64,
}

pub fn write_scaling_csv<W: Write>(rows: &[ScalingRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "N,encode_ns_per_block,decode_ns_per_block")?;
    for r in rows {
        writeln!(out, "{},{:.0},{:.0}", r.len, r.encode_ns, r.decode_ns)?;
    }
    Ok(())
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

/// Median per-block encode and decode wall times for each `n` in `n_list`
/// (single-threaded). Decoding uses a half-rate code with the upper half of
/// the indices as information set; the choice does not affect the work.
pub fn scaling_probe(ch: &Channel, n_list: &[u32], trials_per_n: usize, seed: u64) -> Result<Vec<ScalingRow>> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n_list must be strictly ascending".into()));
    }
    if trials_per_n == 0 {
        return Err(Error::InvalidParameter("trials_per_n must be >= 1".into()));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let block = BlockLen::new(n)?;
        let len = block.len();
        let code = CodeSpec::from_info_set(ch, n, (len / 2..len).collect())?;
        let mut blocks: Vec<(BitVector, Observation)> = Vec::with_capacity(trials_per_n);
        for t in 0..trials_per_n as u64 {
            let mut rng = trial_rng(seed, t);
            let (uniforms, u) = draw_trial(len, &mut rng);
            let x = encode(&u)?;
            let y: Vec<usize> = (0..len).map(|j| ch.transmit(x.bit(j), uniforms[j])).collect();
            blocks.push((u, llr_from_output(ch, &y)?));
        }
        let mut ws = LlrWorkspace::new(block);
        // warm-up
        ws.decode(&code, &blocks[0].1)?;
        let mut enc = Vec::with_capacity(trials_per_n);
        let mut dec = Vec::with_capacity(trials_per_n);
        let mut evaluations = 0;
        for (u, obs) in &blocks {
            let t0 = Instant::now();
            let x = encode(u)?;
            enc.push(t0.elapsed().as_nanos() as f64);
            std::hint::black_box(x);
            let t1 = Instant::now();
            let d = ws.decode(&code, obs)?;
            dec.push(t1.elapsed().as_nanos() as f64);
            std::hint::black_box(d);
            evaluations = ws.evaluations();
        }
        rows.push(ScalingRow {
            len,
            encode_ns: median(enc),
            decode_ns: median(dec),
            evaluations,
        });
    }
    Ok(rows)
}
