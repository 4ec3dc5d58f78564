//! Exact computation of saddle values for `p:-q` resonant planar polynomial
//! vector fields
//!
//! ```text
//! x' = p x + P(x, y),    y' = -q y + Q(x, y)
//! ```
//!
//! together with constructive witnesses for lower bounds on the maximal
//! saddle order and first-order ideal non-membership certificates.
//!
//! Everything runs over exact rationals (or truncated power series in a
//! perturbation parameter with rational coefficients); there is no floating
//! point anywhere in the crate.

pub mod acceptance;
pub mod document;
mod error;
pub mod exactpoly;
pub mod perturb;
pub mod resonance;
pub mod saddle;
pub mod witness;

pub use error::{Error, Result};
pub use exactpoly::{
    binomial, format_rational, geom_series, parse_rational, rat, BivarPoly, Jet, Monomial, Rational,
    Scalar, UniPoly,
};
pub use perturb::{EpsForm, PerturbFamily};
pub use saddle::{Method, SaddleOrder, SaddleSystem, SaddleValueRecord};
pub use document::SystemDocument;
pub use resonance::{resonance_data, row_index, ResonanceData, RowIndexData};
pub use witness::{
    synth_theorem1, synth_theorem2, theorem3_certificate, theorem4_certificate, CoeffMatrix, NonMembershipCertificate,
    SynthOptions, WitnessReport,
};
