//! Sublattice constructions: splittings of `L(1)^G`, shifts modulo `2N`,
//! and witness sublattices with their independent verification.

mod decompose;
mod shift;
mod verify;
mod witness;

pub use decompose::{
    decompose_anti_invariant, AntiInvariantDecomposition, DecompositionForm, HyperbolicPlane,
    RiderReport,
};
pub use shift::{
    hyperbolic_signature_shift, nondegenerate_shift, nondegenerate_shift_traced, radical_rank,
    HyperbolicShift, ShiftStep, ShiftTrace,
};
pub use verify::{verify_certificate, CertificateChecks};
pub use witness::{
    polarization_k0, witness_count_lower_bound, witness_full, witness_polarized, witness_rank_k,
    WitnessCertificate,
};
pub(crate) use witness::{check_polarized_range, check_unpolarized_range};
