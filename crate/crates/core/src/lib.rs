//! Channel polarization toolkit.
//!
//! * [`gf2`]: packed GF(2) vectors, bit reversal, the `F^{⊗n}` butterfly and
//!   the encoder `x = u G_N`.
//! * [`channels`]: binary-input DMCs, `I(W)`, `Z(W)`, `d(W)` and their bounds.
//! * [`synthesis`]: the single-step transform, exact split channels for small
//!   `N`, the brute-force oracle and BEC recursions.
//! * [`decoder`]: log-domain successive-cancellation decoding.
//! * [`construction`]: polar and RM information sets, Monte-Carlo profiles.
//! * [`simulate`]: seeded block-error simulation and figure data.
//!
//! Indices are 0-based in the API and 1-based in every file format.
//!
//! With the default `parallel` feature, Monte-Carlo trials run on rayon;
//! without it everything runs sequentially. Results are identical either
//! way (see [`exec`]).

pub mod bitio;
pub mod channels;
pub mod construction;
pub mod decoder;
pub mod error;
pub mod exec;
pub mod gf2;
pub mod simulate;
pub mod synthesis;

pub use channels::{Channel, DmcTable};
pub use construction::{CodeSpec, Method, ReliabilityProfile};
pub use decoder::{LlrWorkspace, Observation};
pub use error::{Error, Result};
pub use exec::Exec;
pub use gf2::{BitVector, BlockLen};
