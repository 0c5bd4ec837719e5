//! Matrix and vector algebra over CFLOBDDs: standard matrix families,
//! Kronecker products, matrix multiplication via bilinear polynomials, and
//! the two-argument quantum gates.
//!
//! A level-`l` matrix is `2^(2^(l-1)) x 2^(2^(l-1))`: the `2^(l-1)` row
//! bits and `2^(l-1)` column bits are interleaved x0 y0 x1 y1 ... with the
//! most significant bits first, so qubit `k` of a gate occupies variable
//! positions `2k` (row) and `2k+1` (column). Vectors use all `2^l`
//! variables as row bits.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::rc::Rc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::apply::{apply_values, collapse_classes_leftmost, reduce, NumOp};
use crate::kernel::{
    identity_tuple, CflobddError, CflobddId, Grouping, GroupingId, InternalBuilder,
    InternalGrouping, Level, Manager, ShiftKind, TerminalValue,
};
use crate::quantum::ExactAmplitude;

// ---------------------------------------------------------------------------
// Bilinear polynomials and symbolic matrix multiplication tuples.
// ---------------------------------------------------------------------------

/// A sum of products of one left and one right exit indicator, with
/// nonnegative integer coefficients: the symbolic value of one exit of a
/// matrix product before terminal values are substituted. Zero-coefficient
/// entries are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BilinearPoly(BTreeMap<(usize, usize), BigUint>);

impl BilinearPoly {
    pub fn zero() -> Self {
        BilinearPoly(BTreeMap::new())
    }

    /// The single term `1 * (left exit i) * (right exit j)`, 1-based.
    pub fn single(i: usize, j: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert((i, j), BigUint::one());
        BilinearPoly(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (k, c) in &other.0 {
            *out.entry(*k).or_default() += c;
        }
        BilinearPoly(out)
    }

    /// Multiply every coefficient by `k` (zero clears the polynomial).
    pub fn scale(&self, k: &BigUint) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        BilinearPoly(self.0.iter().map(|(key, c)| (*key, c * k)).collect())
    }

    /// Rename exits through a pair of return tuples: term `(i, j)` becomes
    /// `(rt1[i-1], rt2[j-1])`. Collisions add.
    pub fn remap(&self, rt1: &[usize], rt2: &[usize]) -> Self {
        let mut out: BTreeMap<(usize, usize), BigUint> = BTreeMap::new();
        for (&(i, j), c) in &self.0 {
            *out.entry((rt1[i - 1], rt2[j - 1])).or_default() += c;
        }
        BilinearPoly(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &BigUint)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Substitute terminal values: `sum coeff * vt1[i-1] * vt2[j-1]`, with
    /// `zero` as the empty sum.
    pub fn evaluate(
        &self,
        vt1: &[TerminalValue],
        vt2: &[TerminalValue],
        zero: &TerminalValue,
    ) -> Result<TerminalValue, CflobddError> {
        let mut acc: Option<TerminalValue> = None;
        for (&(i, j), c) in &self.0 {
            let term = vt1[i - 1].mul(&vt2[j - 1])?.mul_nat(c)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| zero.clone()))
    }
}

/// Symbolic product entries produced by matrix multiplication, one
/// bilinear polynomial per exit of the product grouping.
pub type MatMultTuple = Vec<BilinearPoly>;

// ---------------------------------------------------------------------------
// Standard matrix families.
// ---------------------------------------------------------------------------

/// Proto-grouping of the Walsh-Hadamard family: exits [plus class, minus
/// class].
pub(crate) fn hadamard_grouping(
    mgr: &mut Manager,
    level: Level,
) -> Result<GroupingId, CflobddError> {
    if level == 0 {
        return Err(CflobddError::Range(
            "matrices need at least one row and one column bit (level >= 1)".into(),
        ));
    }
    let fork = mgr.fork();
    let dc = mgr.dont_care();
    let mut g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: 1,
        a_connection: fork,
        a_return_tuple: vec![1, 2],
        b_connections: vec![dc, fork],
        b_return_tuples: vec![vec![1], vec![1, 2]],
        number_of_exits: 2,
    }))?;
    for l in 2..=level {
        // H_{2n} = [[H_n, H_n], [H_n, -H_n]]: the B-side reuses the same
        // structure, sign-flipped when the A-side lands in the minus class.
        g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: l,
            a_connection: g,
            a_return_tuple: vec![1, 2],
            b_connections: vec![g, g],
            b_return_tuples: vec![vec![1, 2], vec![2, 1]],
            number_of_exits: 2,
        }))?;
    }
    Ok(g)
}

/// The Walsh-Hadamard matrix `H_{2^(2^(l-1))}` with integer entries
/// (unnormalized: terminal values 1 and -1).
pub fn hadamard(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let g = hadamard_grouping(mgr, level)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(-1)])
}

/// Proto-grouping of the identity family: exits [diagonal, off-diagonal].
pub(crate) fn identity_grouping(
    mgr: &mut Manager,
    level: Level,
) -> Result<GroupingId, CflobddError> {
    if level == 0 {
        return Err(CflobddError::Range(
            "matrices need at least one row and one column bit (level >= 1)".into(),
        ));
    }
    let fork = mgr.fork();
    let mut g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: 1,
        a_connection: fork,
        a_return_tuple: vec![1, 2],
        b_connections: vec![fork, fork],
        b_return_tuples: vec![vec![1, 2], vec![2, 1]],
        number_of_exits: 2,
    }))?;
    for l in 2..=level {
        let nd = mgr.no_distinction(l - 1);
        g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: l,
            a_connection: g,
            a_return_tuple: vec![1, 2],
            b_connections: vec![g, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }))?;
    }
    Ok(g)
}

/// The identity matrix with integer entries.
pub fn identity(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let g = identity_grouping(mgr, level)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(0)])
}

/// The identity matrix with amplitude entries (used when composing with
/// phase gates).
pub(crate) fn identity_amp(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let g = identity_grouping(mgr, level)?;
    mgr.representative_cflobdd(
        g,
        vec![
            TerminalValue::Amp(ExactAmplitude::one()),
            TerminalValue::Amp(ExactAmplitude::zero()),
        ],
    )
}

/// The 2x2 NOT matrix: the identity proto-grouping with the value tuple
/// swapped to [0, 1] (the diagonal class maps to 0).
pub fn not_matrix(mgr: &mut Manager) -> Result<CflobddId, CflobddError> {
    let g = identity_grouping(mgr, 1)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(0), TerminalValue::int(1)])
}

/// Proto-grouping with exits [column 0, other columns].
pub(crate) fn column1_grouping(
    mgr: &mut Manager,
    level: Level,
) -> Result<GroupingId, CflobddError> {
    if level == 0 {
        return Err(CflobddError::Range(
            "matrices need at least one row and one column bit (level >= 1)".into(),
        ));
    }
    let fork = mgr.fork();
    let dc = mgr.dont_care();
    let mut g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: 1,
        a_connection: dc,
        a_return_tuple: vec![1],
        b_connections: vec![fork],
        b_return_tuples: vec![vec![1, 2]],
        number_of_exits: 2,
    }))?;
    for l in 2..=level {
        let nd = mgr.no_distinction(l - 1);
        g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: l,
            a_connection: g,
            a_return_tuple: vec![1, 2],
            b_connections: vec![g, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }))?;
    }
    Ok(g)
}

/// The matrix whose first column is all ones and whose remaining entries
/// are zero.
pub fn column1_matrix(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let g = column1_grouping(mgr, level)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(0)])
}

fn column1_with(
    mgr: &mut Manager,
    level: Level,
    one: TerminalValue,
    zero: TerminalValue,
) -> Result<CflobddId, CflobddError> {
    let g = column1_grouping(mgr, level)?;
    mgr.representative_cflobdd(g, vec![one, zero])
}

// ---------------------------------------------------------------------------
// Kronecker products.
// ---------------------------------------------------------------------------

/// Wrap `g` one level up with its variables in the first half.
pub(crate) fn shift_to_a(mgr: &mut Manager, g: GroupingId) -> Result<GroupingId, CflobddError> {
    if let Some(&hit) = mgr.shift_cache.get(&(g, ShiftKind::ToA)) {
        return Ok(hit);
    }
    let level = mgr.level(g);
    let n = mgr.exits(g);
    let nd = mgr.no_distinction(level);
    let out = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: level + 1,
        a_connection: g,
        a_return_tuple: identity_tuple(n),
        b_connections: vec![nd; n],
        b_return_tuples: (1..=n).map(|j| vec![j]).collect(),
        number_of_exits: n,
    }))?;
    mgr.shift_cache.insert((g, ShiftKind::ToA), out);
    Ok(out)
}

/// Wrap `g` one level up with its variables in the second half.
pub(crate) fn shift_to_b(mgr: &mut Manager, g: GroupingId) -> Result<GroupingId, CflobddError> {
    if let Some(&hit) = mgr.shift_cache.get(&(g, ShiftKind::ToB)) {
        return Ok(hit);
    }
    let level = mgr.level(g);
    let n = mgr.exits(g);
    let nd = mgr.no_distinction(level);
    let out = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level: level + 1,
        a_connection: nd,
        a_return_tuple: vec![1],
        b_connections: vec![g],
        b_return_tuples: vec![identity_tuple(n)],
        number_of_exits: n,
    }))?;
    mgr.shift_cache.insert((g, ShiftKind::ToB), out);
    Ok(out)
}

fn check_same_level(mgr: &Manager, c1: CflobddId, c2: CflobddId) -> Result<(), CflobddError> {
    let (l1, l2) = (mgr.cflobdd_level(c1), mgr.cflobdd_level(c2));
    if l1 != l2 {
        return Err(CflobddError::LevelMismatch(format!(
            "Kronecker operands at levels {} and {}",
            l1, l2
        )));
    }
    Ok(())
}

fn multiply_terminals(
    mgr: &mut Manager,
    g1: GroupingId,
    vt1: &[TerminalValue],
    g2: GroupingId,
    vt2: &[TerminalValue],
) -> Result<CflobddId, CflobddError> {
    let (g, values) = apply_values(mgr, g1, vt1, g2, vt2, |x, y| x.mul(y))?;
    mgr.representative_cflobdd(g, values)
}

/// Kronecker product placing `c1`'s variables before `c2`'s: for matrices
/// in interleaved order, entry `(ii', jj') = c1[i,j] * c2[i',j']` with
/// `c1` on the more significant qubits. Result level is one higher.
pub fn kronecker_v1(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    if let Some(&hit) = mgr.apply_cache.get(&(c1, c2, "kronecker-v1")) {
        return Ok(hit);
    }
    let g1 = shift_to_a(mgr, mgr.grouping_of(c1))?;
    let g2 = shift_to_b(mgr, mgr.grouping_of(c2))?;
    let vt1 = mgr.values_of(c1).to_vec();
    let vt2 = mgr.values_of(c2).to_vec();
    let out = multiply_terminals(mgr, g1, &vt1, g2, &vt2)?;
    mgr.apply_cache.insert((c1, c2, "kronecker-v1"), out);
    Ok(out)
}

/// Interpose no-distinction dummies at level 1 so that `g`'s level-1
/// blocks occupy the first (ToA) or second (ToB) halves of the new level-2
/// blocks; all higher structure is copied one level up.
fn shift_at_level_one(
    mgr: &mut Manager,
    g: GroupingId,
    kind: ShiftKind,
) -> Result<GroupingId, CflobddError> {
    if let Some(&hit) = mgr.shift_cache.get(&(g, kind)) {
        return Ok(hit);
    }
    let level = mgr.level(g);
    let out = if level == 1 {
        let n = mgr.exits(g);
        let nd = mgr.no_distinction(1);
        let ig = match kind {
            ShiftKind::ToAAtLevelOne => InternalGrouping {
                level: 2,
                a_connection: g,
                a_return_tuple: identity_tuple(n),
                b_connections: vec![nd; n],
                b_return_tuples: (1..=n).map(|j| vec![j]).collect(),
                number_of_exits: n,
            },
            ShiftKind::ToBAtLevelOne => InternalGrouping {
                level: 2,
                a_connection: nd,
                a_return_tuple: vec![1],
                b_connections: vec![g],
                b_return_tuples: vec![identity_tuple(n)],
                number_of_exits: n,
            },
            _ => unreachable!("shift_at_level_one only handles level-one kinds"),
        };
        mgr.representative_grouping(Grouping::Internal(ig))?
    } else {
        let ig = mgr.internal(g).clone();
        let a = shift_at_level_one(mgr, ig.a_connection, kind)?;
        let mut bs = Vec::with_capacity(ig.b_connections.len());
        for &b in &ig.b_connections {
            bs.push(shift_at_level_one(mgr, b, kind)?);
        }
        mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: ig.level + 1,
            a_connection: a,
            a_return_tuple: ig.a_return_tuple,
            b_connections: bs,
            b_return_tuples: ig.b_return_tuples,
            number_of_exits: ig.number_of_exits,
        }))?
    };
    mgr.shift_cache.insert((g, kind), out);
    Ok(out)
}

/// Kronecker product that interleaves the operands' variable blocks
/// pairwise: for matrices, qubit `k` of `c1` becomes qubit `2k` of the
/// result and qubit `k` of `c2` becomes qubit `2k+1`. Operands must be at
/// the same level >= 1; the result is one level higher.
pub fn kronecker_v2_interleaved(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    if mgr.cflobdd_level(c1) == 0 {
        return Err(CflobddError::Range(
            "interleaved Kronecker needs operands at level >= 1".into(),
        ));
    }
    if let Some(&hit) = mgr.apply_cache.get(&(c1, c2, "kronecker-v2")) {
        return Ok(hit);
    }
    let g1 = shift_at_level_one(mgr, mgr.grouping_of(c1), ShiftKind::ToAAtLevelOne)?;
    let g2 = shift_at_level_one(mgr, mgr.grouping_of(c2), ShiftKind::ToBAtLevelOne)?;
    let vt1 = mgr.values_of(c1).to_vec();
    let vt2 = mgr.values_of(c2).to_vec();
    let out = multiply_terminals(mgr, g1, &vt1, g2, &vt2)?;
    mgr.apply_cache.insert((c1, c2, "kronecker-v2"), out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Vector-to-matrix conversion.
// ---------------------------------------------------------------------------

/// Lift a vector grouping one level by routing each of its variables to
/// the row slot of a fresh (row, column) pair: the result, read as a
/// matrix, has every column equal to the vector.
pub(crate) fn broadcast_grouping(
    mgr: &mut Manager,
    g: GroupingId,
) -> Result<GroupingId, CflobddError> {
    if let Some(&hit) = mgr.shift_cache.get(&(g, ShiftKind::Broadcast)) {
        return Ok(hit);
    }
    let out = match mgr.node(g).clone() {
        Grouping::DontCare => mgr.no_distinction(1),
        Grouping::Fork => {
            let fork = mgr.fork();
            let dc = mgr.dont_care();
            mgr.representative_grouping(Grouping::Internal(InternalGrouping {
                level: 1,
                a_connection: fork,
                a_return_tuple: vec![1, 2],
                b_connections: vec![dc, dc],
                b_return_tuples: vec![vec![1], vec![2]],
                number_of_exits: 2,
            }))?
        }
        Grouping::Internal(ig) => {
            let a = broadcast_grouping(mgr, ig.a_connection)?;
            let mut bs = Vec::with_capacity(ig.b_connections.len());
            for &b in &ig.b_connections {
                bs.push(broadcast_grouping(mgr, b)?);
            }
            mgr.representative_grouping(Grouping::Internal(InternalGrouping {
                level: ig.level + 1,
                a_connection: a,
                a_return_tuple: ig.a_return_tuple,
                b_connections: bs,
                b_return_tuples: ig.b_return_tuples,
                number_of_exits: ig.number_of_exits,
            }))?
        }
    };
    mgr.shift_cache.insert((g, ShiftKind::Broadcast), out);
    Ok(out)
}

/// Convert a level-`k` vector into the level-`k+1` matrix whose first
/// column is the vector and whose other entries are zero, so that gate
/// application becomes matrix multiplication.
pub fn vector_to_matrix(mgr: &mut Manager, v: CflobddId) -> Result<CflobddId, CflobddError> {
    if let Some(&hit) = mgr.apply_cache.get(&(v, v, "vector-to-matrix")) {
        return Ok(hit);
    }
    let (one, zero) = crate::construct::one_zero_like(&mgr.values_of(v)[0])?;
    let g = broadcast_grouping(mgr, mgr.grouping_of(v))?;
    let values = mgr.values_of(v).to_vec();
    let every_column = mgr.representative_cflobdd(g, values)?;
    let level = mgr.cflobdd_level(every_column);
    let col1 = column1_with(mgr, level, one, zero)?;
    let out = crate::apply::apply_numeric(mgr, every_column, col1, NumOp::Times)?;
    mgr.apply_cache.insert((v, v, "vector-to-matrix"), out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Matrix multiplication.
// ---------------------------------------------------------------------------

/// Multiply two equal-level matrix groupings symbolically: the result
/// grouping's exits are labeled by bilinear polynomials in the operands'
/// exits. Memoized per manager.
pub fn matrix_mult_symbolic(
    mgr: &mut Manager,
    g1: GroupingId,
    g2: GroupingId,
) -> Result<(GroupingId, Rc<MatMultTuple>), CflobddError> {
    if let Some(hit) = mgr.matmult_cache.get(&(g1, g2)) {
        return Ok(hit.clone());
    }
    let level = mgr.level(g1);
    debug_assert_eq!(level, mgr.level(g2));
    debug_assert!(level >= 1);
    let out = if level == 1 {
        // One row bit, one column bit: enumerate the four entries of the
        // 2x2 product, each a sum over the inner index.
        let mut entries = [[0usize; 2]; 2];
        let mut entries2 = [[0usize; 2]; 2];
        for (r, row) in entries.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = mgr.interpret_grouping(g1, &[r == 1, c == 1]);
            }
        }
        for (r, row) in entries2.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = mgr.interpret_grouping(g2, &[r == 1, c == 1]);
            }
        }
        let mut items = Vec::with_capacity(4);
        for r in 0..2 {
            for c in 0..2 {
                let p = BilinearPoly::single(entries[r][0], entries2[0][c])
                    .add(&BilinearPoly::single(entries[r][1], entries2[1][c]));
                items.push(p);
            }
        }
        let (g, values) = mgr.fold_items(1, &items)?;
        (g, Rc::new(values))
    } else {
        let ig1 = mgr.internal(g1).clone();
        let ig2 = mgr.internal(g2).clone();
        let (ga, ma) = matrix_mult_symbolic(mgr, ig1.a_connection, ig2.a_connection)?;
        let nd = mgr.no_distinction(level - 1);
        let mut builder = InternalBuilder::new(level);
        let mut concat: MatMultTuple = Vec::new();
        for poly in ma.iter() {
            // The A-product's exit polynomial says which B-pairs are
            // reachable and with what multiplicity; accumulate their
            // products pointwise.
            let mut acc_g = nd;
            let mut acc_vt = vec![BilinearPoly::zero()];
            for (&(k1, k2), coeff) in poly.terms() {
                let (gb, mb) =
                    matrix_mult_symbolic(mgr, ig1.b_connections[k1 - 1], ig2.b_connections[k2 - 1])?;
                let rt1 = &ig1.b_return_tuples[k1 - 1];
                let rt2 = &ig2.b_return_tuples[k2 - 1];
                let mapped: Vec<BilinearPoly> =
                    mb.iter().map(|p| p.remap(rt1, rt2).scale(coeff)).collect();
                let (g_next, vt_next) =
                    apply_values(mgr, acc_g, &acc_vt, gb, &mapped, |x, y| Ok(x.add(y)))?;
                acc_g = g_next;
                acc_vt = vt_next;
            }
            let start = concat.len();
            let rt: Vec<usize> = (start + 1..=start + acc_vt.len()).collect();
            let pos = builder.insert_b_connection(acc_g, rt);
            debug_assert_eq!(pos, builder.len());
            concat.extend(acc_vt);
        }
        let parent = builder.finish(mgr, ga, concat.len())?;
        let (values, renumbered) = collapse_classes_leftmost(&concat);
        let g = reduce(mgr, parent, &renumbered);
        (g, Rc::new(values))
    };
    mgr.matmult_cache.insert((g1, g2), out.clone());
    Ok(out)
}

/// Multiply two equal-level matrices. Terminal values must support
/// multiplication and addition (integers or amplitudes).
pub fn matrix_mult(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    if mgr.cflobdd_level(c1) == 0 {
        return Err(CflobddError::Range(
            "matrix multiplication needs operands at level >= 1".into(),
        ));
    }
    if let Some(&hit) = mgr.apply_cache.get(&(c1, c2, "matrix-mult")) {
        return Ok(hit);
    }
    let (_, zero) = crate::construct::one_zero_like(&mgr.values_of(c1)[0])?;
    let (g, polys) = matrix_mult_symbolic(mgr, mgr.grouping_of(c1), mgr.grouping_of(c2))?;
    let vt1 = mgr.values_of(c1).to_vec();
    let vt2 = mgr.values_of(c2).to_vec();
    let mut deduced = Vec::with_capacity(polys.len());
    for p in polys.iter() {
        deduced.push(p.evaluate(&vt1, &vt2, &zero)?);
    }
    let (values, renumbered) = collapse_classes_leftmost(&deduced);
    let g = reduce(mgr, g, &renumbered);
    let out = mgr.representative_cflobdd(g, values)?;
    mgr.apply_cache.insert((c1, c2, "matrix-mult"), out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// CNOT.
// ---------------------------------------------------------------------------

fn qubits_at(level: Level) -> usize {
    1usize << (level - 1)
}

/// Control-half partial: the identity on this half's qubits, with the
/// diagonal split by the control bit. Exits [diagonal with control 0,
/// zero entry, diagonal with control 1].
fn control_flag_grouping(
    mgr: &mut Manager,
    level: Level,
    i: usize,
) -> Result<GroupingId, CflobddError> {
    if level == 1 {
        let fork = mgr.fork();
        return mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: 1,
            a_connection: fork,
            a_return_tuple: vec![1, 2],
            b_connections: vec![fork, fork],
            b_return_tuples: vec![vec![1, 2], vec![2, 3]],
            number_of_exits: 3,
        }));
    }
    let half = qubits_at(level - 1);
    let id = identity_grouping(mgr, level - 1)?;
    let nd = mgr.no_distinction(level - 1);
    let ig = if i < half {
        let a = control_flag_grouping(mgr, level - 1, i)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2, 3],
            b_connections: vec![id, nd, id],
            b_return_tuples: vec![vec![1, 2], vec![2], vec![3, 2]],
            number_of_exits: 3,
        }
    } else {
        let b = control_flag_grouping(mgr, level - 1, i - half)?;
        InternalGrouping {
            level,
            a_connection: id,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2, 3], vec![2]],
            number_of_exits: 3,
        }
    };
    mgr.representative_grouping(Grouping::Internal(ig))
}

/// Target-half partial: NOT on qubit `j` of this half, identity on the
/// rest. Exits [zero entry, one entry] (the all-zeros path misses the
/// flipped diagonal).
fn target_flip_grouping(
    mgr: &mut Manager,
    level: Level,
    j: usize,
) -> Result<GroupingId, CflobddError> {
    if level == 1 {
        return identity_grouping(mgr, 1);
    }
    let half = qubits_at(level - 1);
    let id = identity_grouping(mgr, level - 1)?;
    let nd = mgr.no_distinction(level - 1);
    let ig = if j < half {
        let a = target_flip_grouping(mgr, level - 1, j)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![nd, id],
            b_return_tuples: vec![vec![1], vec![2, 1]],
            number_of_exits: 2,
        }
    } else {
        let b = target_flip_grouping(mgr, level - 1, j - half)?;
        InternalGrouping {
            level,
            a_connection: id,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2], vec![1]],
            number_of_exits: 2,
        }
    };
    mgr.representative_grouping(Grouping::Internal(ig))
}

/// Full CNOT grouping: exits [one entry, zero entry].
pub(crate) fn cnot_grouping(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<GroupingId, CflobddError> {
    let half = qubits_at(level - 1);
    let nd = mgr.no_distinction(level - 1);
    let ig = if j < half {
        let a = cnot_grouping(mgr, level - 1, i, j)?;
        let id = identity_grouping(mgr, level - 1)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![id, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }
    } else if i >= half {
        let b = cnot_grouping(mgr, level - 1, i - half, j - half)?;
        let id = identity_grouping(mgr, level - 1)?;
        InternalGrouping {
            level,
            a_connection: id,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }
    } else {
        // Control in the first half, target in the second: the control
        // half flags whether the target half must be the identity or NOT.
        let a = control_flag_grouping(mgr, level - 1, i)?;
        let id = identity_grouping(mgr, level - 1)?;
        let flip = target_flip_grouping(mgr, level - 1, j - half)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2, 3],
            b_connections: vec![id, nd, flip],
            b_return_tuples: vec![vec![1, 2], vec![2], vec![2, 1]],
            number_of_exits: 2,
        }
    };
    mgr.representative_grouping(Grouping::Internal(ig))
}

fn check_qubit_pair(level: Level, i: usize, j: usize) -> Result<(), CflobddError> {
    if level < 2 {
        return Err(CflobddError::Range(
            "two-qubit gates need at least two qubits (level >= 2)".into(),
        ));
    }
    let q = qubits_at(level);
    if i == j || i >= q || j >= q {
        return Err(CflobddError::Range(format!(
            "qubit pair ({}, {}) out of range for {} qubits",
            i, j, q
        )));
    }
    Ok(())
}

/// CNOT with control qubit `i` and target qubit `j` (0-based, `i < j`) on
/// the `2^(level-1)` qubits of a level-`level` matrix. Value tuple [1, 0].
pub fn cnot(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<CflobddId, CflobddError> {
    check_qubit_pair(level, i, j)?;
    if i > j {
        return Err(CflobddError::Range(format!(
            "the control must precede the target, got control {} > target {}",
            i, j
        )));
    }
    let g = cnot_grouping(mgr, level, i, j)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(0)])
}

/// Simultaneous CNOT from each even qubit to the following odd qubit:
/// the Kronecker power CNOT_2 tensor ... tensor CNOT_2. Exits [1, 0].
pub(crate) fn cnot_interleaved_grouping(
    mgr: &mut Manager,
    level: Level,
) -> Result<GroupingId, CflobddError> {
    if level == 2 {
        return cnot_grouping(mgr, 2, 0, 1);
    }
    let g = cnot_interleaved_grouping(mgr, level - 1)?;
    let nd = mgr.no_distinction(level - 1);
    mgr.representative_grouping(Grouping::Internal(InternalGrouping {
        level,
        a_connection: g,
        a_return_tuple: vec![1, 2],
        b_connections: vec![g, nd],
        b_return_tuples: vec![vec![1, 2], vec![2]],
        number_of_exits: 2,
    }))
}

/// CNOT applied to every adjacent (even, odd) qubit pair at once.
pub fn cnot_interleaved(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    if level < 2 {
        return Err(CflobddError::Range(
            "the interleaved CNOT needs at least one qubit pair (level >= 2)".into(),
        ));
    }
    let g = cnot_interleaved_grouping(mgr, level)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(0)])
}

// ---------------------------------------------------------------------------
// Controlled-phase.
// ---------------------------------------------------------------------------

/// Controlled-phase grouping: exits [plain diagonal, zero entry, phased
/// diagonal (both controls 1)]. Symmetric in the two qubits.
fn cp_grouping(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<GroupingId, CflobddError> {
    let half = qubits_at(level - 1);
    let nd = mgr.no_distinction(level - 1);
    let ig = if j < half {
        let a = cp_grouping(mgr, level - 1, i, j)?;
        let id = identity_grouping(mgr, level - 1)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2, 3],
            b_connections: vec![id, nd, id],
            b_return_tuples: vec![vec![1, 2], vec![2], vec![3, 2]],
            number_of_exits: 3,
        }
    } else if i >= half {
        let b = cp_grouping(mgr, level - 1, i - half, j - half)?;
        let id = identity_grouping(mgr, level - 1)?;
        InternalGrouping {
            level,
            a_connection: id,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2, 3], vec![2]],
            number_of_exits: 3,
        }
    } else {
        // One control per half; the phase applies only when both flag 1.
        let a = control_flag_grouping(mgr, level - 1, i)?;
        let id = identity_grouping(mgr, level - 1)?;
        let b = control_flag_grouping(mgr, level - 1, j - half)?;
        InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2, 3],
            b_connections: vec![id, nd, b],
            b_return_tuples: vec![vec![1, 2], vec![2], vec![1, 2, 3]],
            number_of_exits: 3,
        }
    };
    mgr.representative_grouping(Grouping::Internal(ig))
}

/// Controlled-phase gate on qubits `i` and `j` (order irrelevant) with
/// phase `e^(2 pi sqrt(-1) val / size)`, `size` a power of two. The value
/// tuple is [1, 0, phase]; a trivial phase yields the identity.
pub fn controlled_phase(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
    val: u64,
    size: u64,
) -> Result<CflobddId, CflobddError> {
    check_qubit_pair(level, i, j)?;
    if size == 0 || !size.is_power_of_two() {
        return Err(CflobddError::Range(format!(
            "phase denominator must be a power of two, got {}",
            size
        )));
    }
    let phase = ExactAmplitude::root_of_unity(val % size, size);
    if phase == ExactAmplitude::one() {
        return identity_amp(mgr, level);
    }
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let g = cp_grouping(mgr, level, i, j)?;
    mgr.representative_cflobdd(
        g,
        vec![
            TerminalValue::Amp(ExactAmplitude::one()),
            TerminalValue::Amp(ExactAmplitude::zero()),
            TerminalValue::Amp(phase),
        ],
    )
}

// ---------------------------------------------------------------------------
// Swap.
// ---------------------------------------------------------------------------

/// (row bit, column bit) pattern of one swapped qubit inside a partial
/// matrix, or the zero block.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum SwapPattern {
    P00,
    P01,
    P10,
    P11,
    Off,
}

/// Exit meaning of a partial that only distinguishes entry present/absent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum OnOff {
    On,
    Off,
}

/// Assigns exits to meanings in first-occurrence order, keeping the
/// contiguity invariant satisfied by construction.
struct MeaningWirer<M> {
    order: Vec<M>,
    index: HashMap<M, usize>,
}

impl<M: Eq + Hash + Copy> MeaningWirer<M> {
    fn new() -> Self {
        MeaningWirer {
            order: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn exit_of(&mut self, m: M) -> usize {
        if let Some(&e) = self.index.get(&m) {
            return e;
        }
        self.order.push(m);
        let e = self.order.len();
        self.index.insert(m, e);
        e
    }

    fn map(&mut self, ms: &[M]) -> Vec<usize> {
        ms.iter().map(|&m| self.exit_of(m)).collect()
    }
}

/// Partial matrix on the half containing the first swapped qubit `i`:
/// identity on all other qubits, every (row, column) combination kept on
/// qubit `i`. Exits are classified by qubit `i`'s bit pattern.
fn swap_i_block(
    mgr: &mut Manager,
    level: Level,
    i: usize,
) -> Result<(GroupingId, Vec<SwapPattern>), CflobddError> {
    if level == 1 {
        let fork = mgr.fork();
        let g = mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level: 1,
            a_connection: fork,
            a_return_tuple: vec![1, 2],
            b_connections: vec![fork, fork],
            b_return_tuples: vec![vec![1, 2], vec![3, 4]],
            number_of_exits: 4,
        }))?;
        return Ok((
            g,
            vec![
                SwapPattern::P00,
                SwapPattern::P01,
                SwapPattern::P10,
                SwapPattern::P11,
            ],
        ));
    }
    let half = qubits_at(level - 1);
    let nd = mgr.no_distinction(level - 1);
    let mut wirer = MeaningWirer::new();
    let mut builder = InternalBuilder::new(level);
    let a;
    if i < half {
        let (sub, meanings) = swap_i_block(mgr, level - 1, i)?;
        a = sub;
        let id = identity_grouping(mgr, level - 1)?;
        for m in meanings {
            match m {
                SwapPattern::Off => {
                    let rt = wirer.map(&[SwapPattern::Off]);
                    builder.insert_b_connection(nd, rt);
                }
                p => {
                    let rt = wirer.map(&[p, SwapPattern::Off]);
                    builder.insert_b_connection(id, rt);
                }
            }
        }
    } else {
        a = identity_grouping(mgr, level - 1)?;
        let (sub, meanings) = swap_i_block(mgr, level - 1, i - half)?;
        let rt = wirer.map(&meanings);
        builder.insert_b_connection(sub, rt);
        let rt = wirer.map(&[SwapPattern::Off]);
        builder.insert_b_connection(nd, rt);
    }
    let exits = wirer.order.len();
    let g = builder.finish(mgr, a, exits)?;
    Ok((g, wirer.order))
}

/// Partial matrix on the half containing the second swapped qubit `j`,
/// specialized to one bit pattern of the first qubit: qubit `j` must show
/// the transposed pattern, everything else the identity.
fn swap_j_block(
    mgr: &mut Manager,
    level: Level,
    j: usize,
    pattern: SwapPattern,
) -> Result<(GroupingId, Vec<OnOff>), CflobddError> {
    if level == 1 {
        let fork = mgr.fork();
        let dc = mgr.dont_care();
        // The partner pattern transposes (row, col): qubit i shows (a, b)
        // exactly when qubit j shows (b, a).
        let (g, meanings) = match pattern {
            SwapPattern::P00 => (
                InternalGrouping {
                    level: 1,
                    a_connection: fork,
                    a_return_tuple: vec![1, 2],
                    b_connections: vec![fork, dc],
                    b_return_tuples: vec![vec![1, 2], vec![2]],
                    number_of_exits: 2,
                },
                vec![OnOff::On, OnOff::Off],
            ),
            SwapPattern::P01 => (
                InternalGrouping {
                    level: 1,
                    a_connection: fork,
                    a_return_tuple: vec![1, 2],
                    b_connections: vec![dc, fork],
                    b_return_tuples: vec![vec![1], vec![2, 1]],
                    number_of_exits: 2,
                },
                vec![OnOff::Off, OnOff::On],
            ),
            SwapPattern::P10 => (
                InternalGrouping {
                    level: 1,
                    a_connection: fork,
                    a_return_tuple: vec![1, 2],
                    b_connections: vec![fork, dc],
                    b_return_tuples: vec![vec![1, 2], vec![1]],
                    number_of_exits: 2,
                },
                vec![OnOff::Off, OnOff::On],
            ),
            SwapPattern::P11 => (
                InternalGrouping {
                    level: 1,
                    a_connection: fork,
                    a_return_tuple: vec![1, 2],
                    b_connections: vec![dc, fork],
                    b_return_tuples: vec![vec![1], vec![1, 2]],
                    number_of_exits: 2,
                },
                vec![OnOff::Off, OnOff::On],
            ),
            SwapPattern::Off => unreachable!("the zero block has no partner pattern"),
        };
        let g = mgr.representative_grouping(Grouping::Internal(g))?;
        return Ok((g, meanings));
    }
    let half = qubits_at(level - 1);
    let nd = mgr.no_distinction(level - 1);
    let mut wirer = MeaningWirer::new();
    let mut builder = InternalBuilder::new(level);
    let a;
    if j < half {
        let (sub, meanings) = swap_j_block(mgr, level - 1, j, pattern)?;
        a = sub;
        let id = identity_grouping(mgr, level - 1)?;
        for m in meanings {
            match m {
                OnOff::On => {
                    let rt = wirer.map(&[OnOff::On, OnOff::Off]);
                    builder.insert_b_connection(id, rt);
                }
                OnOff::Off => {
                    let rt = wirer.map(&[OnOff::Off]);
                    builder.insert_b_connection(nd, rt);
                }
            }
        }
    } else {
        a = identity_grouping(mgr, level - 1)?;
        let (sub, meanings) = swap_j_block(mgr, level - 1, j - half, pattern)?;
        let rt = wirer.map(&meanings);
        builder.insert_b_connection(sub, rt);
        let rt = wirer.map(&[OnOff::Off]);
        builder.insert_b_connection(nd, rt);
    }
    let exits = wirer.order.len();
    let g = builder.finish(mgr, a, exits)?;
    Ok((g, wirer.order))
}

/// Swap grouping: exits [one entry, zero entry].
pub(crate) fn swap_grouping(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<GroupingId, CflobddError> {
    let half = qubits_at(level - 1);
    let nd = mgr.no_distinction(level - 1);
    if j < half {
        let a = swap_grouping(mgr, level - 1, i, j)?;
        let id = identity_grouping(mgr, level - 1)?;
        return mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: vec![1, 2],
            b_connections: vec![id, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }));
    }
    if i >= half {
        let b = swap_grouping(mgr, level - 1, i - half, j - half)?;
        let id = identity_grouping(mgr, level - 1)?;
        return mgr.representative_grouping(Grouping::Internal(InternalGrouping {
            level,
            a_connection: id,
            a_return_tuple: vec![1, 2],
            b_connections: vec![b, nd],
            b_return_tuples: vec![vec![1, 2], vec![2]],
            number_of_exits: 2,
        }));
    }
    // One qubit per half: the first half records qubit i's bit pattern,
    // the second half demands the transposed pattern on qubit j.
    let (a, meanings) = swap_i_block(mgr, level - 1, i)?;
    let mut wirer = MeaningWirer::new();
    let mut builder = InternalBuilder::new(level);
    for m in meanings {
        match m {
            SwapPattern::Off => {
                let rt = wirer.map(&[OnOff::Off]);
                builder.insert_b_connection(nd, rt);
            }
            p => {
                let (b, sub_meanings) = swap_j_block(mgr, level - 1, j - half, p)?;
                let rt = wirer.map(&sub_meanings);
                builder.insert_b_connection(b, rt);
            }
        }
    }
    let exits = wirer.order.len();
    debug_assert_eq!(wirer.order, vec![OnOff::On, OnOff::Off]);
    builder.finish(mgr, a, exits)
}

/// Swap gate on qubits `i` and `j` (order irrelevant). Value tuple [1, 0].
pub fn swap(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<CflobddId, CflobddError> {
    check_qubit_pair(level, i, j)?;
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let g = swap_grouping(mgr, level, i, j)?;
    mgr.representative_cflobdd(g, vec![TerminalValue::int(1), TerminalValue::int(0)])
}
