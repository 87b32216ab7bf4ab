//! Outage and secrecy-outage probabilities for fading wireless links.
//!
//! Interference-limited and interference-plus-noise outage (`outage`) and the
//! secrecy metrics P_s, P_so and P_s⁺ (`secrecy`) share one evaluation path:
//! a secrecy problem is rewritten as an interference problem by rescaling the
//! eavesdropper branches, and both are evaluated from the derivative series of
//! a product of MGFs (`mgf_product`). Every analytic quantity has a seeded
//! Monte Carlo counterpart in `mc`.
//!
//! The crate is `no_std` (with `alloc`) when built without the `std` feature.

#![cfg_attr(not(feature = "std"), no_std)]
// NaN must fail every parameter check, hence `!(x > 0.0)` throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

mod error;
pub mod fading;
pub mod logspace;
pub mod mc;
pub mod mgf_product;
pub mod outage;
pub mod secrecy;
pub mod special;

pub use error::{Error, Result};
pub use fading::{Family, FadingModel, FadingSampler, MomentGenerating, ScaledModel};
pub use logspace::SignedLog;
pub use mc::{Estimate, McConfig, McScenario, Metric, Tally};
pub use mgf_product::{factor_series, product_series, TiltedMomentSeries};
pub use outage::{op_i, op_n, op_ni, InterferenceScenario, Probability};
pub use secrecy::{duality_map, p_s, p_s_plus, p_so, DualityMap, SecrecyScenario};

/// Highest MGF derivative order any operation will evaluate.
pub const DEFAULT_MAX_ORDER: usize = 128;
