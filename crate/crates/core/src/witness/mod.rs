//! Witness constructions: the coefficient matrix `A` of the linearized
//! saddle values, its rank certificate, witness systems of high saddle
//! order and first-order ideal non-membership certificates.

mod certificate;
mod choose;
mod matrix;
mod rank;
mod synth;

pub use certificate::{theorem3_certificate, theorem4_certificate, BinomialForm, LiftedCertificate, NonMembershipCertificate};
pub use choose::{build_u, build_u_symbolic, choose_g, f_poly, random_g, GBranch, GChoice};
pub use matrix::{build_matrix_a, build_matrix_rows, closed_form_rows, CoeffMatrix};
pub use rank::{mu_candidates, rank_exact, rank_polynomial, rank_symbolic, solve_target, RankMethod, RankResult, Solution, SymbolicRank};
pub use synth::{
    certify_unit, witness_pq, instantiate, synth_theorem1, synth_theorem2, transcript_has_shape, LiftReport, RankCertificate,
    SynthOptions, UnitChoice, WitnessReport, MAX_FALLBACK_ATTEMPTS,
};
