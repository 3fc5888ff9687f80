//! Pivot strategies: the modified modulus stepper that drives the solver,
//! the classical orderings, and the equivalence relations between them.

mod equivalence;
mod ordering;
mod stepper;

pub use equivalence::{
    shift_ordering, trace_equivalent, validate_coverage, weakly_equivalent_modulus_rowcyclic,
    CoverageFailure, CoverageReport, WeakEquivalence,
};
pub use ordering::{
    enumerate_antidiagonal, enumerate_classic_modulus, enumerate_modified_modulus,
    enumerate_row_cyclic, Pair, PivotOrdering,
};
pub use stepper::{BlockCursor, StepperState};
