//! Differential decode-and-forward (D-DF) relaying over Rayleigh block fading.
//!
//! The crate covers one source, one relay and one destination exchanging
//! differentially encoded BPSK. At the destination the direct-link and
//! relay-link decision variables are merged by one of four rules:
//!
//! * [`SchemeId::Sc`]: plain selection combining,
//! * [`SchemeId::Wsc1`]: weighted selection with a fixed weight (usually the
//!   ABER-optimal one from [`analysis::optimize_beta`]),
//! * [`SchemeId::Wsc2`]: weighted selection with the adaptive weight
//!   `min(1, gamma1 / gamma_bar2)`,
//! * [`SchemeId::Lar`]: link-adaptive relaying baseline, which scales the
//!   relay transmit power instead.
//!
//! [`analysis`] evaluates the exact closed-form average bit-error rates and
//! the independent numerical-integration oracles used to check them,
//! [`sim`] runs seeded, worker-count-independent Monte Carlo.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod channel;
pub mod combiner;
mod error;
pub mod link;
pub mod sim;
pub mod validate;

pub use analysis::ClosedFormContext;
pub use channel::{ComplexSample, FadingGains, RngStream};
pub use combiner::{Branch, SchemeId, Selection, WeightFactor};
pub use error::{Error, Result};
pub use link::{BlockObservables, SnrMode, SystemParams};
pub use sim::{BerEstimate, SchemeResult, SimConfig, SweepAxis, SweepPoint, SweepResult, Wsc1Beta};
