//! Binary-input discrete memoryless channels and their scalar parameters.
//!
//! Output symbols are integer ids `0..y_count`. The BEC is materialized with
//! three symbols: `0` (received 0), `1` (erasure), `2` (received 1).

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-sum tolerance for user-supplied tables.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Tolerance for the bound chain in [`check_bounds`].
pub const BOUND_TOL: f64 = 1e-9;

pub const BEC_ERASURE: usize = 1;

/// Explicit transition matrix: `p0[y] = W(y|0)`, `p1[y] = W(y|1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmcTable {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl DmcTable {
    pub fn new(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(p0, p1, ROW_SUM_TOL)
    }

    pub(crate) fn with_tolerance(p0: Vec<f64>, p1: Vec<f64>, tol: f64) -> Result<Self> {
        if p0.is_empty() {
            return Err(Error::InvalidTable("empty output alphabet".into()));
        }
        if p0.len() != p1.len() {
            return Err(Error::InvalidTable(format!(
                "row lengths differ: {} vs {}",
                p0.len(),
                p1.len()
            )));
        }
        for (x, row) in [&p0, &p1].into_iter().enumerate() {
            if let Some(y) = row.iter().position(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::InvalidTable(format!(
                    "W({y}|{x}) = {} is not a probability",
                    row[y]
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::InvalidTable(format!(
                    "row {x} sums to {sum}, not 1"
                )));
            }
        }
        Ok(Self { p0, p1 })
    }

    pub fn bec(epsilon: f64) -> Self {
        Self {
            p0: vec![1.0 - epsilon, epsilon, 0.0],
            p1: vec![0.0, epsilon, 1.0 - epsilon],
        }
    }

    pub fn bsc(p: f64) -> Self {
        Self {
            p0: vec![1.0 - p, p],
            p1: vec![p, 1.0 - p],
        }
    }

    pub fn perfect() -> Self {
        Self {
            p0: vec![1.0, 0.0],
            p1: vec![0.0, 1.0],
        }
    }

    /// Random table with `y_count` symbols. Each entry is zeroed with
    /// probability `zero_prob` (at least one entry per row survives), the
    /// rest are exponential draws, and rows are normalized.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, y_count: usize, zero_prob: f64) -> Self {
        let row = |rng: &mut R| -> Vec<f64> {
            loop {
                let r: Vec<f64> = (0..y_count)
                    .map(|_| {
                        if rng.gen::<f64>() < zero_prob {
                            0.0
                        } else {
                            -(1.0 - rng.gen::<f64>()).ln()
                        }
                    })
                    .collect();
                let sum: f64 = r.iter().sum();
                if sum > 0.0 {
                    return r.into_iter().map(|p| p / sum).collect();
                }
            }
        };
        let p0 = row(rng);
        let p1 = row(rng);
        Self { p0, p1 }
    }

    /// `Σ_j q_j W_j`.
    pub fn mixture(tables: &[DmcTable], weights: &[f64]) -> Result<Self> {
        let first = tables
            .first()
            .ok_or_else(|| Error::InvalidParameter("mixture of zero channels".into()))?;
        if tables.len() != weights.len() {
            return Err(Error::InvalidParameter(format!(
                "{} channels but {} weights",
                tables.len(),
                weights.len()
            )));
        }
        let y_count = first.y_count();
        if let Some(t) = tables.iter().find(|t| t.y_count() != y_count) {
            return Err(Error::InvalidParameter(format!(
                "output alphabets differ: {y_count} vs {}",
                t.y_count()
            )));
        }
        if weights.iter().any(|&q| !(q >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > ROW_SUM_TOL {
            return Err(Error::InvalidParameter("mixture weights must be a distribution".into()));
        }
        let mut p0 = vec![0.0; y_count];
        let mut p1 = vec![0.0; y_count];
        for (t, &q) in tables.iter().zip(weights) {
            for y in 0..y_count {
                p0[y] += q * t.p0[y];
                p1[y] += q * t.p1[y];
            }
        }
        Self::new(p0, p1)
    }

    pub fn y_count(&self) -> usize {
        self.p0.len()
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    #[inline]
    pub fn prob(&self, y: usize, x: u8) -> f64 {
        if x == 0 {
            self.p0[y]
        } else {
            self.p1[y]
        }
    }

    /// `ln(W(y|0)/W(y|1))`, infinite when one side is zero. A symbol with
    /// zero probability under both inputs carries no information and maps
    /// to 0.
    pub fn llr(&self, y: usize) -> Result<f64> {
        if y >= self.y_count() {
            return Err(Error::SymbolOutOfRange {
                symbol: y,
                alphabet: self.y_count(),
            });
        }
        let (a, b) = (self.p0[y], self.p1[y]);
        Ok(match (a > 0.0, b > 0.0) {
            (true, true) => (a / b).ln(),
            (true, false) => f64::INFINITY,
            (false, true) => f64::NEG_INFINITY,
            (false, false) => 0.0,
        })
    }

    /// Inverse-CDF draw of an output symbol for input `x`.
    pub fn sample(&self, x: u8, uniform: f64) -> usize {
        let row = if x == 0 { &self.p0 } else { &self.p1 };
        let mut acc = 0.0;
        for (y, &p) in row.iter().enumerate() {
            acc += p;
            if uniform < acc {
                return y;
            }
        }
        // rounding left uniform above the accumulated mass
        row.iter().rposition(|&p| p > 0.0).unwrap_or(0)
    }
}

/// Channel descriptor: `bec:<ε>`, `bsc:<p>` or `table:<path>`.
#[derive(Clone, Debug, PartialEq)]
pub enum Channel {
    Bec(f64),
    Bsc(f64),
    Table { path: PathBuf, table: DmcTable },
}

#[derive(Deserialize)]
struct TableFile {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl Channel {
    pub fn bec(epsilon: f64) -> Result<Self> {
        check_unit("erasure probability", epsilon)?;
        Ok(Channel::Bec(epsilon))
    }

    pub fn bsc(p: f64) -> Result<Self> {
        check_unit("crossover probability", p)?;
        Ok(Channel::Bsc(p))
    }

    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: TableFile = serde_json::from_str(&text)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Ok(Channel::Table {
            path: path.to_path_buf(),
            table: DmcTable::new(file.p0, file.p1)?,
        })
    }

    pub fn table(&self) -> DmcTable {
        match self {
            Channel::Bec(e) => DmcTable::bec(*e),
            Channel::Bsc(p) => DmcTable::bsc(*p),
            Channel::Table { table, .. } => table.clone(),
        }
    }

    pub fn is_bec(&self) -> bool {
        matches!(self, Channel::Bec(_))
    }

    /// The involutive output permutation `π` with `W(y|1) = W(π(y)|0)`,
    /// known only for the built-in kinds.
    pub fn symmetry(&self) -> Option<Vec<usize>> {
        match self {
            Channel::Bec(_) => Some(vec![2, 1, 0]),
            Channel::Bsc(_) => Some(vec![1, 0]),
            Channel::Table { .. } => None,
        }
    }

    /// Draws an output for input `x` from one uniform variate. For the BEC
    /// and BSC the noise event (erasure, flip) depends on `uniform` alone,
    /// so paired simulations of different codewords share noise patterns.
    #[inline]
    pub fn transmit(&self, x: u8, uniform: f64) -> usize {
        match self {
            Channel::Bec(e) => {
                if uniform < *e {
                    BEC_ERASURE
                } else {
                    2 * x as usize
                }
            }
            Channel::Bsc(p) => (x ^ u8::from(uniform < *p)) as usize,
            Channel::Table { table, .. } => table.sample(x, uniform),
        }
    }

    /// Channel LLR `ln(W(y|0)/W(y|1))` for one output symbol.
    #[inline]
    pub fn llr(&self, y: usize) -> Result<f64> {
        match self {
            Channel::Bec(_) => match y {
                0 => Ok(f64::INFINITY),
                1 => Ok(0.0),
                2 => Ok(f64::NEG_INFINITY),
                _ => Err(Error::SymbolOutOfRange { symbol: y, alphabet: 3 }),
            },
            Channel::Bsc(p) => {
                if y > 1 {
                    return Err(Error::SymbolOutOfRange { symbol: y, alphabet: 2 });
                }
                let l = if *p == 0.0 {
                    f64::INFINITY
                } else if *p == 1.0 {
                    f64::NEG_INFINITY
                } else {
                    ((1.0 - p) / p).ln()
                };
                Ok(if y == 0 { l } else { -l })
            }
            Channel::Table { table, .. } => table.llr(y),
        }
    }
}

fn check_unit(what: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} {v} outside [0,1]")))
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Bec(e) => write!(f, "bec:{e}"),
            Channel::Bsc(p) => write!(f, "bsc:{p}"),
            Channel::Table { path, .. } => write!(f, "table:{}", path.display()),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    /// Parses a descriptor. `table:` descriptors read the referenced file.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("channel {s:?}: expected <kind>:<arg>")))?;
        let number = || {
            arg.parse::<f64>()
                .map_err(|_| Error::Parse(format!("channel {s:?}: bad number {arg:?}")))
        };
        match kind {
            "bec" => Channel::bec(number()?),
            "bsc" => Channel::bsc(number()?),
            "table" => Channel::from_table_file(Path::new(arg)),
            other => Err(Error::Parse(format!("unknown channel kind {other:?}"))),
        }
    }
}

/// Symmetric capacity `I(W)` in bits.
pub fn symmetric_capacity(w: &DmcTable) -> f64 {
    let mut sum = 0.0;
    for y in 0..w.y_count() {
        let q = 0.5 * (w.p0[y] + w.p1[y]);
        for p in [w.p0[y], w.p1[y]] {
            if p > 0.0 {
                sum += 0.5 * p * (p / q).log2();
            }
        }
    }
    sum.clamp(0.0, 1.0)
}

/// Bhattacharyya parameter `Z(W) = Σ_y √(W(y|0) W(y|1))`.
pub fn bhattacharyya(w: &DmcTable) -> f64 {
    w.p0.iter()
        .zip(&w.p1)
        .map(|(a, b)| (a * b).sqrt())
        .sum::<f64>()
        .min(1.0)
}

/// `d(W) = ½ Σ_y |W(y|0) − W(y|1)|`.
pub fn variational_distance(w: &DmcTable) -> f64 {
    (0.5 * w.p0.iter().zip(&w.p1).map(|(a, b)| (a - b).abs()).sum::<f64>()).min(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelParams {
    pub i: f64,
    pub z: f64,
    pub d: f64,
}

/// Computes `(I, Z, d)` and checks, to [`BOUND_TOL`]:
/// `log2(2/(1+Z)) ≤ I ≤ √(1−Z²)`, `I + Z ≥ 1`, `I ≤ d ≤ √(1−Z²)`.
pub fn check_bounds(w: &DmcTable) -> Result<ChannelParams> {
    let i = symmetric_capacity(w);
    let z = bhattacharyya(w);
    let d = variational_distance(w);
    let upper = (1.0 - z * z).max(0.0).sqrt();
    let lower = (2.0 / (1.0 + z)).log2();
    let checks = [
        (lower <= i + BOUND_TOL, "I >= log2(2/(1+Z))"),
        (i <= upper + BOUND_TOL, "I <= sqrt(1-Z^2)"),
        (i + z >= 1.0 - BOUND_TOL, "I + Z >= 1"),
        (i <= d + BOUND_TOL, "I <= d"),
        (d <= upper + BOUND_TOL, "d <= sqrt(1-Z^2)"),
    ];
    for (ok, what) in checks {
        if !ok {
            return Err(Error::BoundViolation(format!("{what} fails: I={i}, Z={z}, d={d}")));
        }
    }
    Ok(ChannelParams { i, z, d })
}

/// Returns `(Σ_j q_j Z(W_j), Z(Σ_j q_j W_j))`; the first never exceeds the
/// second.
pub fn z_convexity_probe(tables: &[DmcTable], weights: &[f64]) -> Result<(f64, f64)> {
    let mixture = DmcTable::mixture(tables, weights)?;
    let lhs = tables
        .iter()
        .zip(weights)
        .map(|(t, q)| q * bhattacharyya(t))
        .sum();
    Ok((lhs, bhattacharyya(&mixture)))
}
