//! CFLOBDDs: context-free-language ordered binary decision diagrams.
//!
//! A CFLOBDD is a canonical, hash-consed representation of a function
//! `{0,1}^(2^k) -> V` built from a hierarchy of *groupings*. A grouping at
//! level 0 is either a fork (reads one bit and distinguishes the outcomes)
//! or a don't-care (reads one bit and ignores it). A grouping at level k
//! splits its 2^k variables in half, routes the first half through an
//! A-connection at level k-1, and routes the second half through one of
//! several B-connections chosen by the A-connection's exit. Matched paths
//! through this structure can be double-exponentially more concise than the
//! corresponding decision tree.
//!
//! The crate provides:
//!
//! * [`kernel`]: the [`kernel::Manager`] arena with hash-consing,
//!   structural invariant checking, evaluation, folding between decision
//!   trees and CFLOBDDs, size accounting, and text/DOT serialization.
//! * [`construct`]: base constructions (constants, projections, standard
//!   basis vectors, the equality relation, a ripple-carry addition relation).
//! * [`apply`]: the product/reduce machinery behind pointwise operations,
//!   Boolean connectives, if-then-else, restriction, and quantification.
//! * [`linalg`]: matrices with interleaved row/column variables: Hadamard
//!   and identity families, Kronecker products, matrix multiplication, and
//!   the controlled gates used by quantum circuits.
//! * [`distribution`]: exact path counting and seeded weighted sampling.
//! * [`quantum`]: exact amplitude arithmetic and end-to-end quantum
//!   algorithm simulations (GHZ, Bernstein-Vazirani, Deutsch-Jozsa, Simon,
//!   Grover, QFT).
//!
//! Handles ([`CflobddId`], [`GroupingId`]) are indices into a [`Manager`];
//! two functions are equal iff their handles are equal, so structural
//! equality checks are O(1).

pub mod apply;
pub mod construct;
pub mod distribution;
pub mod kernel;
pub mod linalg;
pub mod quantum;

pub use apply::{
    apply_boolean, apply_numeric, apply_via_ite, complement, exists, flip_value_tuple, ite,
    restrict, scalar_multiply, BoolOp, NumOp,
};
pub use construct::{
    add_relation, constant, eq_relation, false_, no_distinction_proto, parity, projection,
    standard_basis_vector, standard_basis_vector_big, true_,
};
pub use distribution::{
    count_paths, count_paths_grouping, exit_descent_weights, path_counts_log, sample_assignment,
    sample_assignment_with,
};
pub use kernel::{
    assignment_from_index, identity_tuple, num_vars, parse_text, serialize_text, to_dot,
    CflobddError, CflobddId, DecisionTree, Grouping, GroupingId, InternalGrouping, Invariant,
    Level, Manager, ReturnTuple, SizeReport, TerminalValue, Violation,
};
pub use linalg::{
    cnot, cnot_interleaved, column1_matrix, controlled_phase, hadamard, identity,
    kronecker_v1, kronecker_v2_interleaved, matrix_mult, matrix_mult_symbolic, not_matrix, swap,
    vector_to_matrix, BilinearPoly, MatMultTuple,
};
pub use quantum::{
    bv, dj, gf2_null_space, ghz, grover, measure, measure_bits, product_state, qft, simon,
    AmpMode, BvRun, DjOracle, DjRun, DjVerdict, ExactAmplitude, Gf2System, GroverRun, QftRun,
    QuantumRun, QubitInit, SimonRun, StepTrace, GRID_BITS,
};
