//! Base constructions: constants, projections, standard basis vectors, and
//! the equality and addition relations.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::kernel::{
    num_vars, CflobddError, CflobddId, Grouping, GroupingId, InternalGrouping, Level, Manager,
    TerminalValue,
};

/// The constant function of `level` mapping every assignment to `value`.
pub fn constant(
    mgr: &mut Manager,
    level: Level,
    value: TerminalValue,
) -> Result<CflobddId, CflobddError> {
    if level > mgr.max_level() {
        return Err(CflobddError::LevelGuard {
            requested: level,
            limit: mgr.max_level(),
        });
    }
    let g = mgr.no_distinction(level);
    mgr.representative_cflobdd(g, vec![value])
}

/// The all-true function (`true` is a keyword, hence the underscore).
pub fn true_(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    constant(mgr, level, TerminalValue::Bool(true))
}

/// The all-false function.
pub fn false_(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    constant(mgr, level, TerminalValue::Bool(false))
}

/// The single-exit grouping at `level` that never distinguishes anything.
/// Exposed as a free function alongside the other direct constructions;
/// the manager interns one per level.
pub fn no_distinction_proto(mgr: &mut Manager, level: Level) -> GroupingId {
    mgr.no_distinction(level)
}

/// The projection function `f(x_0, ..) = x_var` at the given level.
pub fn projection(
    mgr: &mut Manager,
    level: Level,
    var: usize,
) -> Result<CflobddId, CflobddError> {
    if var >= num_vars(level) {
        return Err(CflobddError::Range(format!(
            "variable {} out of range for {} variables",
            var,
            num_vars(level)
        )));
    }
    let g = projection_grouping(mgr, level, var)?;
    mgr.representative_cflobdd(
        g,
        vec![TerminalValue::Bool(false), TerminalValue::Bool(true)],
    )
}

/// Two-exit grouping whose exit is decided by variable `var` alone (exit 1
/// when the variable is 0).
pub(crate) fn projection_grouping(
    mgr: &mut Manager,
    level: Level,
    var: usize,
) -> Result<GroupingId, CflobddError> {
    if level == 0 {
        return Ok(mgr.fork());
    }
    let half = num_vars(level) / 2;
    let nd = mgr.no_distinction(level - 1);
    let g = if var < half {
        let a = projection_grouping(mgr, level - 1, var)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![nd, nd],
            b_return_tuples: vec![vec![1], vec![2]],
            number_of_exits: 2,
        }
    } else {
        let b = projection_grouping(mgr, level - 1, var - half)?;
        InternalGrouping {
            level,
            a_connection: nd,
            a_return_tuple: vec![1],
            b_connections: vec![b],
            b_return_tuples: vec![vec![1, 2]],
            number_of_exits: 2,
        }
    };
    mgr.representative_grouping(Grouping::Internal(g))
}

/// Two-exit grouping distinguishing the single assignment spelling `index`
/// (most significant variable first) from all others. Exit 1 is whichever
/// class the all-zeros assignment hits first.
fn basis_grouping(
    mgr: &mut Manager,
    level: Level,
    index: &BigUint,
) -> Result<GroupingId, CflobddError> {
    if level == 0 {
        return Ok(mgr.fork());
    }
    let half_bits = num_vars(level - 1);
    let high = index >> half_bits;
    let low = index - (&high << half_bits);
    let nd = mgr.no_distinction(level - 1);
    let g = if high.is_zero() {
        // The prefix selector's first exit is the match class, so the
        // suffix selector plugs in with an order-preserving return tuple.
        let a = basis_grouping(mgr, level - 1, &high)?;
        let b = basis_grouping(mgr, level - 1, &low)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2], vec![if low.is_zero() { 2 } else { 1 }]],
            number_of_exits: 2,
        }
    } else {
        // The prefix mismatch class comes first, so the no-distinction
        // middle claims exit 1.
        let a = basis_grouping(mgr, level - 1, &high)?;
        let b = basis_grouping(mgr, level - 1, &low)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![nd, b],
            b_return_tuples: vec![
                vec![1],
                if low.is_zero() { vec![2, 1] } else { vec![1, 2] },
            ],
            number_of_exits: 2,
        }
    };
    mgr.representative_grouping(Grouping::Internal(g))
}

/// The `index`-th standard basis vector over all `2^level` variables:
/// terminal 1 on the single assignment spelling `index`, 0 elsewhere.
pub fn standard_basis_vector(
    mgr: &mut Manager,
    level: Level,
    index: u64,
) -> Result<CflobddId, CflobddError> {
    standard_basis_vector_with(
        mgr,
        level,
        &BigUint::from(index),
        TerminalValue::int(1),
        TerminalValue::int(0),
    )
}

/// Standard basis vector with an index too large for `u64`.
pub fn standard_basis_vector_big(
    mgr: &mut Manager,
    level: Level,
    index: &BigUint,
) -> Result<CflobddId, CflobddError> {
    standard_basis_vector_with(mgr, level, index, TerminalValue::int(1), TerminalValue::int(0))
}

/// Standard basis vector with caller-chosen terminal values for the hit
/// and miss classes.
pub(crate) fn standard_basis_vector_with(
    mgr: &mut Manager,
    level: Level,
    index: &BigUint,
    one: TerminalValue,
    zero: TerminalValue,
) -> Result<CflobddId, CflobddError> {
    if index.bits() > num_vars(level) as u64 {
        return Err(CflobddError::Range(format!(
            "basis index needs {} bits but level {} has {} variables",
            index.bits(),
            level,
            num_vars(level)
        )));
    }
    let g = basis_grouping(mgr, level, index)?;
    let values = if index.is_zero() {
        vec![one, zero]
    } else {
        vec![zero, one]
    };
    mgr.representative_cflobdd(g, values)
}

/// Equality of the two bit vectors read alternately: with variables
/// interleaved x0 y0 x1 y1 ..., true exactly when x == y. Shares its
/// grouping with the identity matrix.
pub fn eq_relation(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    if level == 0 {
        return Err(CflobddError::Range(
            "the equality relation needs at least one variable pair (level >= 1)".into(),
        ));
    }
    let g = crate::linalg::identity_grouping(mgr, level)?;
    mgr.representative_cflobdd(
        g,
        vec![TerminalValue::Bool(true), TerminalValue::Bool(false)],
    )
}

/// Shared level-1 building block for the addition relation: reads a bit of
/// x and a bit of y and exposes their sum (0, 1, or 2) as three exits.
fn bit_sum_grouping(mgr: &mut Manager) -> Result<GroupingId, CflobddError> {
    let fork = mgr.fork();
    mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: 1,
        a_connection: fork,
        a_return_tuple: vec![1, 2],
        b_connections: vec![fork, fork],
        b_return_tuples: vec![vec![1, 2], vec![2, 3]],
        number_of_exits: 3,
    }))
}

/// Carry-chain groupings for the addition relation at `level`, verifying
/// z = x + y with carry-in 0 and 1 respectively. Exits of the carry-0
/// family are [accept carry 0, reject, accept carry 1]; the carry-1 family
/// orders them [reject, accept carry 0, accept carry 1].
fn carry_groupings(
    mgr: &mut Manager,
    level: Level,
) -> Result<(GroupingId, GroupingId), CflobddError> {
    let sum = bit_sum_grouping(mgr)?;
    let zbit = projection_grouping(mgr, 1, 0)?;
    let build = |mgr: &mut Manager,
                 level: Level,
                 a: GroupingId,
                 arity: usize,
                 bs: Vec<GroupingId>,
                 brts: Vec<Vec<usize>>|
     -> Result<GroupingId, CflobddError> {
        mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: (1..=arity).collect(),
            b_connections: bs,
            b_return_tuples: brts,
            number_of_exits: 3,
        }))
    };
    // Base: one (x, y, z, dummy) quadruple. With carry-in 0, z must equal
    // the low bit of x + y; with carry-in 1, of x + y + 1.
    let mut c0 = build(
        mgr,
        2,
        sum,
        3,
        vec![zbit, zbit, zbit],
        vec![vec![1, 2], vec![2, 1], vec![3, 2]],
    )?;
    let mut c1 = build(
        mgr,
        2,
        sum,
        3,
        vec![zbit, zbit, zbit],
        vec![vec![1, 2], vec![3, 1], vec![1, 3]],
    )?;
    for l in 3..=level {
        let nd = mgr.no_distinction(l - 1);
        // The A-half holds the less significant bits; its carry feeds the
        // B-half.
        let next_c0 = build(
            mgr,
            l,
            c0,
            3,
            vec![c0, nd, c1],
            vec![vec![1, 2, 3], vec![2], vec![2, 1, 3]],
        )?;
        let next_c1 = build(
            mgr,
            l,
            c1,
            3,
            vec![nd, c0, c1],
            vec![vec![1], vec![2, 1, 3], vec![1, 2, 3]],
        )?;
        c0 = next_c0;
        c1 = next_c1;
    }
    Ok((c0, c1))
}

/// The addition relation over `2^l`-bit words: variables form quadruples
/// (x_i, y_i, z_i, dummy_i) with bit position 0 first, and the function is
/// true exactly when z = (x + y) mod 2^(2^l). The top grouping sits at
/// level `l + 2` (four variables per word bit).
pub fn add_relation(mgr: &mut Manager, l: Level) -> Result<CflobddId, CflobddError> {
    let level = l + 2;
    let (c0, _c1) = carry_groupings(mgr, level)?;
    // Addition is modular, so the final carry is discarded: both accepting
    // exits collapse to one.
    let g = crate::apply::reduce(mgr, c0, &[1, 2, 1]);
    mgr.representative_cflobdd(
        g,
        vec![TerminalValue::Bool(true), TerminalValue::Bool(false)],
    )
}

/// Convenience used by benchmarks and examples: the parity of all
/// `2^level` variables, built by folding exclusive-or over projections.
pub fn parity(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let mut acc = projection(mgr, level, 0)?;
    for var in 1..num_vars(level) {
        let p = projection(mgr, level, var)?;
        acc = crate::apply::apply_boolean(mgr, acc, p, crate::apply::BoolOp::Xor)?;
    }
    Ok(acc)
}

/// `one` and `zero` terminals matching the numeric type of `v`.
pub(crate) fn one_zero_like(v: &TerminalValue) -> Result<(TerminalValue, TerminalValue), CflobddError> {
    match v {
        TerminalValue::Int(_) => Ok((TerminalValue::int(1), TerminalValue::int(0))),
        TerminalValue::Amp(_) => Ok((
            TerminalValue::Amp(crate::quantum::ExactAmplitude::one()),
            TerminalValue::Amp(crate::quantum::ExactAmplitude::zero()),
        )),
        TerminalValue::Bool(_) => Err(CflobddError::Value(
            "expected numeric terminal values, found booleans".into(),
        )),
    }
}
