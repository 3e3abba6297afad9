//! Reachability, the localization protocol, pulse compilation and unitary
//! synthesis.

mod compile;
mod protocol;
mod reachability;
mod rotation;
mod synthesis;

pub use compile::{
    decompose_su2, isolation_infidelity_estimate, su2_to_pulses, EquatorialPulse, Gradient, PulseCompiler};
pub use protocol::{
    localization_sequence, localized_population, preparation_sequence, Localization, Preparation,
    DEGENERATE_EDGE, EXTENT_TOL,
};
pub use reachability::{
    reachability_check, translation_overlap, ReachabilityReport, TranslationOverlap,
    REACHABILITY_TOL,
};
pub use rotation::{apply_rotations, flip, pair_rotation, Su2Rotation};
pub use synthesis::{
    synthesize_unitary, verify_map, FourierSeries, QFidelity, Synthesis, SynthesisTarget,
    VerificationReport, SUPPORT_TOL, VERIFICATION_SCHEMA,
};
