//! Tight-binding dynamics of the spinor chain.

mod bloch;
mod evolve;
mod frame;
mod generator;
mod hn;
pub mod linalg;
mod pulse;
mod state;

pub use bloch::{bloch_block_map, evolve_bloch, segment_block, uniform_q_grid, BlochBlockMap};
pub use evolve::{evolve, evolve_trajectory, evolve_with, propagator, Chain, EvolveOptions};
pub use frame::{
    apply_displacement, gradient_frame, interaction_block, interaction_map, lab_map, Displaced,
    GradientFrame, Resampling,
};
pub use generator::{bloch_generator, build_tb_generator, site_index, Boundary};
pub use hn::{
    compare_hn, hn_propagator, scalar_chain_evolve, HnComparison, HnPropagator, ScalarSchedule,
    ScalarSegment, SCALAR_SCHEDULE_SCHEMA,
};
pub use pulse::{ControlSegment, Coupling, PulseSequence, PULSE_SEQUENCE_SCHEMA};
pub use state::{SpinorState, NORM_TOLERANCE, SPINOR_STATE_SCHEMA, TRIM_THRESHOLD};
