//! Information-set selection and the persisted code description.

use std::fmt;
use std::str::FromStr;

use log::{info, warn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::channels::Channel;
use crate::decoder::{llr_from_output, LlrWorkspace};
use crate::error::{Error, Result};
use crate::exec::{trial_rng, Exec};
use crate::gf2::{encode, BitVector, BlockLen};
use crate::synthesis::{bec_profile, synthesize_exact, MAX_EXACT_LEVEL};

/// How a reliability profile was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileMethod {
    ExactBec,
    ExactTable,
    MonteCarlo,
}

impl ProfileMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ProfileMethod::ExactBec => "exact-bec",
            ProfileMethod::ExactTable => "exact-table",
            ProfileMethod::MonteCarlo => "monte-carlo",
        }
    }
}

impl FromStr for ProfileMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-bec" => Ok(ProfileMethod::ExactBec),
            "exact-table" => Ok(ProfileMethod::ExactTable),
            "monte-carlo" => Ok(ProfileMethod::MonteCarlo),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for ProfileMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Construction request.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    ExactBec,
    ExactTable,
    MonteCarlo { samples: u64, seed: u64 },
}

/// Estimated `Z(W_N^{(i)})` for every index (0-based storage).
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityProfile {
    pub z_hat: Vec<f64>,
    /// Standard errors, Monte-Carlo only.
    pub stderr: Option<Vec<f64>>,
    pub method: ProfileMethod,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

impl ReliabilityProfile {
    pub fn exact(z_hat: Vec<f64>, method: ProfileMethod) -> Self {
        Self {
            z_hat,
            stderr: None,
            method,
            samples: None,
            seed: None,
        }
    }

    pub fn len(&self) -> usize {
        self.z_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z_hat.is_empty()
    }
}

pub fn reliability_profile(ch: &Channel, n: u32, method: Method, exec: Exec) -> Result<ReliabilityProfile> {
    match method {
        Method::ExactBec => match ch {
            Channel::Bec(e) => Ok(ReliabilityProfile::exact(
                bec_profile(*e, n)?.z,
                ProfileMethod::ExactBec,
            )),
            _ => Err(Error::InvalidParameter(format!(
                "exact-bec construction needs a BEC, got {ch}"
            ))),
        },
        Method::ExactTable => {
            if n > MAX_EXACT_LEVEL {
                return Err(Error::InvalidParameter(format!(
                    "exact-table construction supports n <= {MAX_EXACT_LEVEL}, got n = {n}"
                )));
            }
            let w = ch.table();
            let z = (1..=1usize << n)
                .map(|i| synthesize_exact(&w, n, i).map(|s| s.bhattacharyya()))
                .collect::<Result<Vec<_>>>()?;
            Ok(ReliabilityProfile::exact(z, ProfileMethod::ExactTable))
        }
        Method::MonteCarlo { samples, seed } => monte_carlo_profile(ch, n, samples, seed, exec),
    }
}

/// Per-trial randomness: `len` channel uniforms, then `len` message bits.
pub(crate) fn draw_trial(len: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, BitVector) {
    let uniforms: Vec<f64> = (0..len).map(|_| rng.gen()).collect();
    let u = BitVector::from_bools((0..len).map(|_| rng.gen::<bool>()));
    (uniforms, u)
}

/// Monte-Carlo estimate of every `Z(W_N^{(i)})` as the sample mean of
/// `√(W_N^{(i)}(y,u_1^{i-1}|u_i⊕1) / W_N^{(i)}(y,u_1^{i-1}|u_i))`, i.e.
/// `exp(−(1−2u_i)Λ_i/2)` with `Λ_i` the genie-aided decision LLR.
///
/// The reported standard error is floored at `1/samples`: a sample of that
/// size cannot resolve deviations below it, and an all-equal sample would
/// otherwise report zero uncertainty.
pub fn monte_carlo_profile(
    ch: &Channel,
    n: u32,
    samples: u64,
    seed: u64,
    exec: Exec,
) -> Result<ReliabilityProfile> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let block = BlockLen::new(n)?;
    let len = block.len();
    let chunks = exec.map_chunks(samples, |range| -> Result<(Vec<f64>, Vec<f64>, u64)> {
        let mut ws = LlrWorkspace::new(block);
        let mut sum = vec![0.0; len];
        let mut sumsq = vec![0.0; len];
        let mut guarded = 0u64;
        for t in range {
            let mut rng = trial_rng(seed, t);
            let (uniforms, u) = draw_trial(len, &mut rng);
            let x = encode(&u)?;
            let y: Vec<usize> = (0..len).map(|j| ch.transmit(x.bit(j), uniforms[j])).collect();
            let llrs = ws.genie_llrs(&llr_from_output(ch, &y)?, &u)?;
            for (j, &l) in llrs.iter().enumerate() {
                let signed = if u.bit(j) == 0 { l } else { -l };
                let mut v = (-0.5 * signed).exp();
                if !v.is_finite() {
                    // certainty against the true bit has probability zero
                    guarded += 1;
                    v = 1.0;
                }
                sum[j] += v;
                sumsq[j] += v * v;
            }
        }
        Ok((sum, sumsq, guarded))
    });
    let mut sum = vec![0.0; len];
    let mut sumsq = vec![0.0; len];
    let mut guarded = 0;
    for chunk in chunks {
        let (s, q, g) = chunk?;
        for j in 0..len {
            sum[j] += s[j];
            sumsq[j] += q[j];
        }
        guarded += g;
    }
    if guarded > 0 {
        warn!("monte-carlo profile: {guarded} infinite samples replaced by 1");
    }
    let count = samples as f64;
    let mut clamped = 0;
    let mut z_hat = Vec::with_capacity(len);
    let mut stderr = Vec::with_capacity(len);
    for j in 0..len {
        let mean = sum[j] / count;
        let var = if samples > 1 {
            ((sumsq[j] - count * mean * mean) / (count - 1.0)).max(0.0)
        } else {
            0.0
        };
        stderr.push((var / count).sqrt().max(1.0 / count));
        if !(0.0..=1.0).contains(&mean) {
            clamped += 1;
        }
        z_hat.push(mean.clamp(0.0, 1.0));
    }
    if clamped > 0 {
        info!("monte-carlo profile: clamped {clamped} estimates into [0,1]");
    }
    Ok(ReliabilityProfile {
        z_hat,
        stderr: Some(stderr),
        method: ProfileMethod::MonteCarlo,
        samples: Some(samples),
        seed: Some(seed),
    })
}

/// `A_γ = {i : ẑ_i < γ}`, 0-based.
pub fn threshold_set(profile: &ReliabilityProfile, gamma: f64) -> Vec<usize> {
    profile
        .z_hat
        .iter()
        .enumerate()
        .filter(|(_, &z)| z < gamma)
        .map(|(i, _)| i)
        .collect()
}

/// The `k` indices with the smallest `ẑ`, ties to the smaller index;
/// returned sorted.
pub fn polar_info_set(z_hat: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..z_hat.len()).collect();
    order.sort_by(|&a, &b| z_hat[a].total_cmp(&z_hat[b]).then(a.cmp(&b)));
    let mut set: Vec<usize> = order.into_iter().take(k).collect();
    set.sort_unstable();
    set
}

/// Which rule chose the information set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    Polar,
    ReedMuller,
    Custom,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Polar => "polar",
            Rule::ReedMuller => "rm",
            Rule::Custom => "custom",
        }
    }
}

impl FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(Rule::Polar),
            "rm" => Ok(Rule::ReedMuller),
            "custom" => Ok(Rule::Custom),
            other => Err(Error::Parse(format!("unknown rule {other:?}"))),
        }
    }
}

/// A `G_N`-coset code `(N, K, A, u_{A^c})` with the channel and reliability
/// profile it was built for.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    n: u32,
    info_set: Vec<usize>,
    info_mask: Vec<bool>,
    frozen_values: BitVector,
    channel: Channel,
    profile: Option<ReliabilityProfile>,
    rule: Rule,
}

impl CodeSpec {
    /// Code with the given (0-based) information set and an all-zero frozen
    /// vector.
    pub fn from_info_set(ch: &Channel, n: u32, mut info_set: Vec<usize>) -> Result<Self> {
        let len = BlockLen::new(n)?.len();
        info_set.sort_unstable();
        info_set.dedup();
        if let Some(&bad) = info_set.iter().find(|&&i| i >= len) {
            return Err(Error::InvalidParameter(format!(
                "information index {} outside 1..={len}",
                bad + 1
            )));
        }
        let mut info_mask = vec![false; len];
        for &i in &info_set {
            info_mask[i] = true;
        }
        Ok(Self {
            n,
            frozen_values: BitVector::zeros(len - info_set.len()),
            info_set,
            info_mask,
            channel: ch.clone(),
            profile: None,
            rule: Rule::Custom,
        })
    }

    pub fn with_profile(mut self, profile: ReliabilityProfile) -> Result<Self> {
        if profile.len() != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: profile.len(),
            });
        }
        self.profile = Some(profile);
        self.validate_rule()?;
        Ok(self)
    }

    pub fn with_rule(mut self, rule: Rule) -> Result<Self> {
        self.rule = rule;
        self.validate_rule()?;
        Ok(self)
    }

    pub fn with_frozen(mut self, frozen: BitVector) -> Result<Self> {
        if frozen.len() != self.len() - self.k() {
            return Err(Error::LengthMismatch {
                expected: self.len() - self.k(),
                actual: frozen.len(),
            });
        }
        self.frozen_values = frozen;
        Ok(self)
    }

    /// Replaces the frozen vector with seeded uniform bits.
    pub fn with_random_frozen(self, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = self.len() - self.k();
        let frozen = BitVector::from_bools((0..count).map(|_| rng.gen::<bool>()));
        self.with_frozen(frozen)
    }

    fn validate_rule(&self) -> Result<()> {
        if self.rule != Rule::Polar {
            return Ok(());
        }
        if let Some(p) = &self.profile {
            let worst_in = self.info_set.iter().map(|&i| p.z_hat[i]).fold(f64::NEG_INFINITY, f64::max);
            let best_out = (0..self.len())
                .filter(|&i| !self.info_mask[i])
                .map(|i| p.z_hat[i])
                .fold(f64::INFINITY, f64::min);
            if worst_in > best_out {
                return Err(Error::InvalidParameter(format!(
                    "polar rule violated: max z over A = {worst_in} > min z over A^c = {best_out}"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k(&self) -> usize {
        self.info_set.len()
    }

    /// 0-based, ascending.
    pub fn info_set(&self) -> &[usize] {
        &self.info_set
    }

    pub fn info_mask(&self) -> &[bool] {
        &self.info_mask
    }

    /// Frozen bits of `A^c` in index order.
    pub fn frozen_values(&self) -> &BitVector {
        &self.frozen_values
    }

    /// Length-`N` vector with the frozen bits in place and zeros on `A`.
    pub fn frozen_block(&self) -> BitVector {
        let mut u = BitVector::zeros(self.len());
        let mut next = 0;
        for i in 0..self.len() {
            if !self.info_mask[i] {
                u.set(i, self.frozen_values.get(next));
                next += 1;
            }
        }
        u
    }

    /// Places `u_A` into the frozen block.
    pub fn source_block(&self, data: &BitVector) -> Result<BitVector> {
        if data.len() != self.k() {
            return Err(Error::LengthMismatch {
                expected: self.k(),
                actual: data.len(),
            });
        }
        let mut u = self.frozen_block();
        for (pos, &i) in self.info_set.iter().enumerate() {
            u.set(i, data.get(pos));
        }
        Ok(u)
    }

    pub fn encode_data(&self, data: &BitVector) -> Result<BitVector> {
        encode(&self.source_block(data)?)
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn profile(&self) -> Option<&ReliabilityProfile> {
        self.profile.as_ref()
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    /// `Σ_{i∈A} ẑ_i`, the block-error bound under the stored profile.
    pub fn bound_sum(&self) -> Option<f64> {
        self.profile
            .as_ref()
            .map(|p| self.info_set.iter().map(|&i| p.z_hat[i]).sum())
    }

    /// JSON form. Field order is fixed, indices are 1-based and reals carry
    /// 17 significant digits.
    pub fn to_json(&self) -> String {
        let reals = |v: &[f64]| {
            let items: Vec<String> = v.iter().map(|x| format!("{x:.16e}")).collect();
            format!("[{}]", items.join(","))
        };
        let opt_u64 = |v: Option<u64>| v.map_or("null".to_string(), |x| x.to_string());
        let info: Vec<String> = self.info_set.iter().map(|i| (i + 1).to_string()).collect();
        let (method, z_hat, samples, seed, stderr) = match &self.profile {
            Some(p) => (
                format!("\"{}\"", p.method),
                reals(&p.z_hat),
                opt_u64(p.samples),
                opt_u64(p.seed),
                p.stderr.as_deref().map_or("null".to_string(), reals),
            ),
            None => ("null".into(), "[]".into(), "null".into(), "null".into(), "null".into()),
        };
        format!(
            "{{\"version\":1,\"N\":{},\"K\":{},\"channel\":{},\"method\":{},\"info_set\":[{}],\"frozen_values\":\"{}\",\"z_hat\":{},\"samples\":{},\"seed\":{},\"stderr\":{},\"rule\":\"{}\"}}",
            self.len(),
            self.k(),
            serde_json::to_string(&self.channel.to_string()).expect("string serialization"),
            method,
            info.join(","),
            self.frozen_values,
            z_hat,
            samples,
            seed,
            stderr,
            self.rule.as_str(),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            version: u32,
            #[serde(rename = "N")]
            len: usize,
            #[serde(rename = "K")]
            k: usize,
            channel: String,
            method: Option<String>,
            info_set: Vec<usize>,
            frozen_values: String,
            z_hat: Vec<f64>,
            samples: Option<u64>,
            seed: Option<u64>,
            #[serde(default)]
            stderr: Option<Vec<f64>>,
            #[serde(default)]
            rule: Option<String>,
        }
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("code spec: {e}")))?;
        if raw.version != 1 {
            return Err(Error::Parse(format!("unsupported code spec version {}", raw.version)));
        }
        let block = BlockLen::from_len(raw.len)?;
        let channel: Channel = raw.channel.parse()?;
        if raw.info_set.len() != raw.k || raw.info_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("info_set must hold K strictly ascending indices".into()));
        }
        if raw.info_set.first() == Some(&0) {
            return Err(Error::Parse("info_set indices are 1-based".into()));
        }
        let info = raw.info_set.iter().map(|i| i - 1).collect();
        let mut spec = CodeSpec::from_info_set(&channel, block.exponent(), info)?
            .with_frozen(raw.frozen_values.parse()?)?;
        if let Some(m) = raw.method {
            let method: ProfileMethod = m.parse()?;
            if let Some(se) = &raw.stderr {
                if se.len() != raw.z_hat.len() {
                    return Err(Error::Parse("stderr and z_hat lengths differ".into()));
                }
            }
            spec = spec.with_profile(ReliabilityProfile {
                z_hat: raw.z_hat,
                stderr: raw.stderr,
                method,
                samples: raw.samples,
                seed: raw.seed,
            })?;
        }
        let rule = raw.rule.as_deref().unwrap_or("polar").parse()?;
        spec.with_rule(rule)
    }
}

/// Polar rule: the `k` indices of smallest `ẑ` under the chosen method.
pub fn construct_polar(ch: &Channel, n: u32, k: usize, method: Method) -> Result<CodeSpec> {
    construct_polar_with(ch, n, k, method, Exec::default())
}

pub fn construct_polar_with(ch: &Channel, n: u32, k: usize, method: Method, exec: Exec) -> Result<CodeSpec> {
    let len = BlockLen::new(n)?.len();
    if k > len {
        return Err(Error::InvalidParameter(format!("K = {k} exceeds N = {len}")));
    }
    let profile = reliability_profile(ch, n, method, exec)?;
    polar_from_profile(ch, n, k, profile)
}

pub fn polar_from_profile(ch: &Channel, n: u32, k: usize, profile: ReliabilityProfile) -> Result<CodeSpec> {
    let info = polar_info_set(&profile.z_hat, k);
    CodeSpec::from_info_set(ch, n, info)?
        .with_profile(profile)?
        .with_rule(Rule::Polar)
}

/// The weight threshold `r` of the RM rule: the smallest `r` with
/// `Σ_{w=r}^{n} C(n,w) ≤ K`. Ranges over `0..=n+1`.
pub fn rm_threshold(n: u32, k: usize) -> u32 {
    let binom = |w: u32| -> usize {
        (0..w).fold(1usize, |acc, j| acc * (n - j) as usize / (j + 1) as usize)
    };
    let mut tail = 0usize; // Σ_{w=r}^{n} C(n,w)
    let mut r = n + 1;
    while r > 0 {
        let next = tail + binom(r - 1);
        if next > k {
            break;
        }
        tail = next;
        r -= 1;
    }
    r
}

/// RM rule: every index of weight `≥ r`, completed with weight-`(r−1)`
/// indices in ascending index order. Frozen bits are zero.
pub fn rm_info_set(n: u32, k: usize) -> Result<Vec<usize>> {
    let len = BlockLen::new(n)?.len();
    if k > len {
        return Err(Error::InvalidParameter(format!("K = {k} exceeds N = {len}")));
    }
    let r = rm_threshold(n, k);
    let mut set: Vec<usize> = (0..len).filter(|i| i.count_ones() >= r).collect();
    let missing = k - set.len();
    if missing > 0 {
        set.extend((0..len).filter(|i| i.count_ones() + 1 == r).take(missing));
    }
    set.sort_unstable();
    Ok(set)
}

pub fn construct_rm(ch: &Channel, n: u32, k: usize) -> Result<CodeSpec> {
    CodeSpec::from_info_set(ch, n, rm_info_set(n, k)?)?.with_rule(Rule::ReedMuller)
}

/// `2^r (1−ε)^{2^{n−r}}`, an upper bound on `I(W_{0^{n−r}1^r})` for a BEC.
pub fn rm_pathology_bound(epsilon: f64, n: u32, r: u32) -> Result<f64> {
    if r > n {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds n = {n}")));
    }
    let mut v = 1.0 - epsilon;
    for _ in 0..n - r {
        v *= v;
    }
    Ok(v * 2f64.powi(r as i32))
}

/// Exact `I(W_{0^{n−r}1^r})` for a BEC: `n−r` squarings of `I(W)`
/// followed by `r` steps `I ↦ 2I − I²`.
pub fn rm_path_capacity(epsilon: f64, n: u32, r: u32) -> Result<f64> {
    if r > n {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds n = {n}")));
    }
    let mut v = 1.0 - epsilon;
    for _ in 0..n - r {
        v *= v;
    }
    for _ in 0..r {
        v = 2.0 * v - v * v;
    }
    Ok(v)
}

/// Returns `(exact, bound)` after checking `exact ≤ bound`.
pub fn rm_pathology_check(epsilon: f64, n: u32, r: u32) -> Result<(f64, f64)> {
    let exact = rm_path_capacity(epsilon, n, r)?;
    let bound = rm_pathology_bound(epsilon, n, r)?;
    if exact > bound {
        return Err(Error::BoundViolation(format!(
            "I(W_0^(n-r)1^r) = {exact} exceeds {bound} (eps={epsilon}, n={n}, r={r})"
        )));
    }
    Ok((exact, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_based(set: &[usize]) -> Vec<usize> {
        set.iter().map(|i| i + 1).collect()
    }

    #[test]
    fn polar_bec_n8() {
        let code = construct_polar(&Channel::Bec(0.5), 3, 4, Method::ExactBec).unwrap();
        assert_eq!(one_based(code.info_set()), [4, 6, 7, 8]);
        assert_eq!(code.frozen_values().to_string(), "0000");
    }

    #[test]
    fn polar_degenerate_rates() {
        let full = construct_polar(&Channel::Bsc(0.2), 3, 8, Method::ExactTable).unwrap();
        assert_eq!(one_based(full.info_set()), (1..=8).collect::<Vec<_>>());
        let empty = construct_polar(&Channel::Bec(0.2), 4, 0, Method::ExactBec).unwrap();
        assert!(empty.info_set().is_empty());
        assert_eq!(empty.frozen_values().len(), 16);
    }

    #[test]
    fn infeasible_methods() {
        assert!(construct_polar(&Channel::Bsc(0.1), 4, 4, Method::ExactTable).is_err());
        assert!(construct_polar(&Channel::Bsc(0.1), 3, 4, Method::ExactBec).is_err());
        assert!(construct_polar(&Channel::Bec(0.1), 3, 9, Method::ExactBec).is_err());
        assert!(monte_carlo_profile(&Channel::Bec(0.1), 3, 0, 1, Exec::Sequential).is_err());
    }

    #[test]
    fn ties_prefer_smaller_index() {
        assert_eq!(polar_info_set(&[0.5, 0.1, 0.5, 0.5], 2), [0, 1]);
    }

    #[test]
    fn threshold_examples() {
        let p = ReliabilityProfile::exact(bec_profile(0.5, 3).unwrap().z, ProfileMethod::ExactBec);
        assert!(threshold_set(&p, 0.0).is_empty());
        assert_eq!(threshold_set(&p, 1.0).len(), 8);
        assert_eq!(one_based(&threshold_set(&p, 0.2)), [6, 7, 8]);
    }

    #[test]
    fn rm_examples() {
        assert_eq!(one_based(&rm_info_set(2, 2).unwrap()), [2, 4]);
        assert_eq!(rm_threshold(2, 4), 0);
        assert_eq!(one_based(&rm_info_set(2, 4).unwrap()), [1, 2, 3, 4]);
        assert_eq!(one_based(&rm_info_set(3, 4).unwrap()), [4, 6, 7, 8]);
        assert!(rm_info_set(3, 0).unwrap().is_empty());
        assert_eq!(rm_threshold(3, 0), 4);
        assert_eq!(rm_threshold(8, 128), 5);
        for n in 0..=8u32 {
            for k in 0..=1usize << n {
                let set = rm_info_set(n, k).unwrap();
                assert_eq!(set.len(), k);
                let r = rm_threshold(n, k);
                assert!(set.iter().all(|i| i.count_ones() + 1 >= r));
            }
        }
    }

    #[test]
    fn rm_pathology_examples() {
        let (exact, bound) = rm_pathology_check(0.3, 6, 6).unwrap();
        assert_eq!(bound, 64.0 * 0.7);
        assert!(exact <= bound);
        let (exact, bound) = rm_pathology_check(0.5, 10, 5).unwrap();
        assert!((bound - 32.0 * 0.5f64.powi(32)).abs() < 1e-24);
        assert!((bound - 7.45e-9).abs() < 1e-11);
        assert!(exact <= bound);
        let (exact, bound) = rm_pathology_check(0.0, 10, 5).unwrap();
        assert_eq!(bound, 32.0);
        assert!(exact <= 1.0);
        assert!(rm_pathology_bound(0.5, 3, 4).is_err());
    }

    #[test]
    fn json_round_trip_and_layout() {
        let code = construct_polar(&Channel::Bec(0.5), 3, 4, Method::ExactBec).unwrap();
        let json = code.to_json();
        assert!(json.starts_with(
            "{\"version\":1,\"N\":8,\"K\":4,\"channel\":\"bec:0.5\",\"method\":\"exact-bec\",\"info_set\":[4,6,7,8],\"frozen_values\":\"0000\",\"z_hat\":[9.9609375000000000e-1,"
        ));
        assert_eq!(CodeSpec::from_json(&json).unwrap(), code);
        let mc = construct_polar(&Channel::Bsc(0.1), 2, 2, Method::MonteCarlo { samples: 50, seed: 3 })
            .unwrap()
            .with_random_frozen(4)
            .unwrap();
        assert_eq!(CodeSpec::from_json(&mc.to_json()).unwrap(), mc);
        let rm = construct_rm(&Channel::Bec(0.5), 2, 2).unwrap();
        assert_eq!(CodeSpec::from_json(&rm.to_json()).unwrap(), rm);
    }

    #[test]
    fn json_rejects_bad_specs() {
        let good = construct_polar(&Channel::Bec(0.5), 3, 4, Method::ExactBec).unwrap().to_json();
        assert!(CodeSpec::from_json(&good.replace("[4,6,7,8]", "[0,6,7,8]")).is_err());
        assert!(CodeSpec::from_json(&good.replace("[4,6,7,8]", "[1,6,7,8]")).is_err(), "polar rule");
        assert!(CodeSpec::from_json(&good.replace("\"N\":8", "\"N\":6")).is_err());
        assert!(CodeSpec::from_json(&good.replace("\"version\":1", "\"version\":2")).is_err());
        assert!(CodeSpec::from_json(&good.replace("\"rule\"", "\"extra\":0,\"rule\"")).is_err());
    }

    #[test]
    fn source_block_places_data() {
        let code = CodeSpec::from_info_set(&Channel::Bec(0.5), 2, vec![1, 3])
            .unwrap()
            .with_frozen("10".parse().unwrap())
            .unwrap();
        assert_eq!(code.source_block(&"11".parse().unwrap()).unwrap().to_string(), "1101");
        assert_eq!(code.encode_data(&"11".parse().unwrap()).unwrap().to_string(), "1101");
    }

    #[test]
    fn perfect_channel_profile_is_zero() {
        let p = monte_carlo_profile(&Channel::Bsc(0.0), 4, 100, 1, Exec::Sequential).unwrap();
        assert!(p.z_hat.iter().all(|&z| z == 0.0));
    }
}
