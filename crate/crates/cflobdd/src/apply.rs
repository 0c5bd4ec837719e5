//! Product constructions and the reduce/apply pipeline: pair and triple
//! products, class collapsing, reduction, the sixteen binary Boolean
//! operations, if-then-else, restriction, and quantification.

use std::collections::HashMap;
use std::hash::Hash;
use std::rc::Rc;

use crate::kernel::{
    num_vars, CflobddError, CflobddId, GroupingId, InternalBuilder, Manager, TerminalValue,
};

/// Collapse a tuple to its distinct items in first-occurrence order,
/// together with the 1-based class index of every input position. The
/// renumbering is leftmost-normalized: class n + 1 first appears only
/// after classes 1..n.
pub fn collapse_classes_leftmost<T: Eq + Hash + Clone>(items: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut projected: Vec<T> = Vec::new();
    let mut renumbered = Vec::with_capacity(items.len());
    for it in items {
        let next = projected.len();
        let class = *index.entry(it.clone()).or_insert_with(|| {
            projected.push(it.clone());
            next
        });
        renumbered.push(class + 1);
    }
    (projected, renumbered)
}

#[cfg(debug_assertions)]
fn is_leftmost_normalized(rt: &[usize]) -> bool {
    let mut max = 0;
    for &v in rt {
        if v > max {
            if v != max + 1 {
                return false;
            }
            max = v;
        }
    }
    true
}

/// Simultaneously traverse two same-level groupings, returning the product
/// grouping and, per product exit, the pair of original exits it stands
/// for. Exits are numbered in matched-path first-visit order.
pub fn pair_product(
    mgr: &mut Manager,
    g1: GroupingId,
    g2: GroupingId,
) -> (GroupingId, Rc<Vec<(usize, usize)>>) {
    debug_assert_eq!(mgr.level(g1), mgr.level(g2));
    if mgr.is_no_distinction(g1) {
        let pt = (1..=mgr.exits(g2)).map(|j| (1, j)).collect();
        return (g2, Rc::new(pt));
    }
    if mgr.is_no_distinction(g2) {
        let pt = (1..=mgr.exits(g1)).map(|i| (i, 1)).collect();
        return (g1, Rc::new(pt));
    }
    if mgr.level(g1) == 0 {
        // Both are forks.
        return (g1, Rc::new(vec![(1, 1), (2, 2)]));
    }
    if let Some(hit) = mgr.pair_cache.get(&(g1, g2)) {
        return hit.clone();
    }
    let ig1 = mgr.internal(g1).clone();
    let ig2 = mgr.internal(g2).clone();
    let (ga, pta) = pair_product(mgr, ig1.a_connection, ig2.a_connection);
    let mut builder = InternalBuilder::new(ig1.level);
    let mut exit_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pt_ans: Vec<(usize, usize)> = Vec::new();
    for (m, &(i1, i2)) in pta.iter().enumerate() {
        let rt1 = &ig1.b_return_tuples[i1 - 1];
        let rt2 = &ig2.b_return_tuples[i2 - 1];
        let (gb, ptb) = pair_product(
            mgr,
            ig1.b_connections[i1 - 1],
            ig2.b_connections[i2 - 1],
        );
        let mut brt = Vec::with_capacity(ptb.len());
        for &(j1, j2) in ptb.iter() {
            let pair = (rt1[j1 - 1], rt2[j2 - 1]);
            let next = pt_ans.len();
            let class = *exit_index.entry(pair).or_insert_with(|| {
                pt_ans.push(pair);
                next
            });
            brt.push(class + 1);
        }
        let pos = builder.insert_b_connection(gb, brt);
        debug_assert_eq!(pos, m + 1, "product middle vertices must be distinct");
    }
    let exits = pt_ans.len();
    let g = builder
        .finish(mgr, ga, exits)
        .expect("pair product of canonical groupings satisfies the invariants");
    let result = (g, Rc::new(pt_ans));
    mgr.pair_cache.insert((g1, g2), result.clone());
    result
}

/// Three-way product; see [`pair_product`]. A no-distinction argument
/// defers to the pair product of the other two.
pub fn triple_product(
    mgr: &mut Manager,
    g1: GroupingId,
    g2: GroupingId,
    g3: GroupingId,
) -> (GroupingId, Rc<Vec<(usize, usize, usize)>>) {
    debug_assert_eq!(mgr.level(g1), mgr.level(g2));
    debug_assert_eq!(mgr.level(g1), mgr.level(g3));
    if mgr.is_no_distinction(g1) {
        let (g, pt) = pair_product(mgr, g2, g3);
        return (g, Rc::new(pt.iter().map(|&(j, k)| (1, j, k)).collect()));
    }
    if mgr.is_no_distinction(g2) {
        let (g, pt) = pair_product(mgr, g1, g3);
        return (g, Rc::new(pt.iter().map(|&(i, k)| (i, 1, k)).collect()));
    }
    if mgr.is_no_distinction(g3) {
        let (g, pt) = pair_product(mgr, g1, g2);
        return (g, Rc::new(pt.iter().map(|&(i, j)| (i, j, 1)).collect()));
    }
    if mgr.level(g1) == 0 {
        return (g1, Rc::new(vec![(1, 1, 1), (2, 2, 2)]));
    }
    if let Some(hit) = mgr.triple_cache.get(&(g1, g2, g3)) {
        return hit.clone();
    }
    let ig1 = mgr.internal(g1).clone();
    let ig2 = mgr.internal(g2).clone();
    let ig3 = mgr.internal(g3).clone();
    let (ga, pta) = triple_product(mgr, ig1.a_connection, ig2.a_connection, ig3.a_connection);
    let mut builder = InternalBuilder::new(ig1.level);
    let mut exit_index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut pt_ans: Vec<(usize, usize, usize)> = Vec::new();
    for (m, &(i1, i2, i3)) in pta.iter().enumerate() {
        let rt1 = &ig1.b_return_tuples[i1 - 1];
        let rt2 = &ig2.b_return_tuples[i2 - 1];
        let rt3 = &ig3.b_return_tuples[i3 - 1];
        let (gb, ptb) = triple_product(
            mgr,
            ig1.b_connections[i1 - 1],
            ig2.b_connections[i2 - 1],
            ig3.b_connections[i3 - 1],
        );
        let mut brt = Vec::with_capacity(ptb.len());
        for &(j1, j2, j3) in ptb.iter() {
            let triple = (rt1[j1 - 1], rt2[j2 - 1], rt3[j3 - 1]);
            let next = pt_ans.len();
            let class = *exit_index.entry(triple).or_insert_with(|| {
                pt_ans.push(triple);
                next
            });
            brt.push(class + 1);
        }
        let pos = builder.insert_b_connection(gb, brt);
        debug_assert_eq!(pos, m + 1, "product middle vertices must be distinct");
    }
    let exits = pt_ans.len();
    let g = builder
        .finish(mgr, ga, exits)
        .expect("triple product of canonical groupings satisfies the invariants");
    let result = (g, Rc::new(pt_ans));
    mgr.triple_cache.insert((g1, g2, g3), result.clone());
    result
}

/// Fold exit classes of `g` together according to `rt` (which must be
/// leftmost-normalized) and return the canonical grouping with
/// `max(rt)` exits. `rt[e - 1]` names the class of old exit `e`.
pub fn reduce(mgr: &mut Manager, g: GroupingId, rt: &[usize]) -> GroupingId {
    debug_assert_eq!(rt.len(), mgr.exits(g));
    #[cfg(debug_assertions)]
    debug_assert!(is_leftmost_normalized(rt), "reduce needs a normalized tuple");
    let exits = rt.iter().copied().max().unwrap_or(0);
    if rt.iter().enumerate().all(|(i, &v)| v == i + 1) {
        return g;
    }
    if exits == 1 {
        return mgr.no_distinction(mgr.level(g));
    }
    let key = (g, rt.to_vec());
    if let Some(&hit) = mgr.reduce_cache.get(&key) {
        return hit;
    }
    let ig = mgr.internal(g).clone();
    let mut builder = InternalBuilder::new(ig.level);
    let mut positions = Vec::with_capacity(ig.b_connections.len());
    for (b, brt) in ig.b_connections.iter().zip(ig.b_return_tuples.iter()) {
        let deduced: Vec<usize> = brt.iter().map(|&v| rt[v - 1]).collect();
        let (projected, renumbered) = collapse_classes_leftmost(&deduced);
        let b_reduced = reduce(mgr, *b, &renumbered);
        positions.push(builder.insert_b_connection(b_reduced, projected));
    }
    let a_reduced = reduce(mgr, ig.a_connection, &positions);
    let g_new = builder
        .finish(mgr, a_reduced, exits)
        .expect("reduction of a canonical grouping satisfies the invariants");
    mgr.reduce_cache.insert(key, g_new);
    g_new
}

/// Product, value combination, collapse, and reduce in one step: the
/// internal engine behind every binary apply. Returns the reduced grouping
/// and its distinct value tuple.
pub(crate) fn apply_values<T, F>(
    mgr: &mut Manager,
    g1: GroupingId,
    vt1: &[T],
    g2: GroupingId,
    vt2: &[T],
    mut op: F,
) -> Result<(GroupingId, Vec<T>), CflobddError>
where
    T: Eq + Hash + Clone,
    F: FnMut(&T, &T) -> Result<T, CflobddError>,
{
    let (g, pt) = pair_product(mgr, g1, g2);
    let mut deduced = Vec::with_capacity(pt.len());
    for &(i, j) in pt.iter() {
        deduced.push(op(&vt1[i - 1], &vt2[j - 1])?);
    }
    let (values, renumbered) = collapse_classes_leftmost(&deduced);
    let reduced = reduce(mgr, g, &renumbered);
    Ok((reduced, values))
}

/// The sixteen binary Boolean operations, numbered by truth table: bit
/// `3 - (2a + b)` of the discriminant is the value on arguments `(a, b)`,
/// so `And = 0b0001`, `Or = 0b0111`, `Xor = 0b0110`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
#[repr(u8)]
pub enum BoolOp {
    False = 0,
    And = 1,
    OnlyFirst = 2,
    First = 3,
    OnlySecond = 4,
    Second = 5,
    Xor = 6,
    Or = 7,
    Nor = 8,
    Xnor = 9,
    NotSecond = 10,
    ConverseImplication = 11,
    NotFirst = 12,
    Implication = 13,
    Nand = 14,
    True = 15,
}

impl BoolOp {
    pub const ALL: [BoolOp; 16] = [
        BoolOp::False,
        BoolOp::And,
        BoolOp::OnlyFirst,
        BoolOp::First,
        BoolOp::OnlySecond,
        BoolOp::Second,
        BoolOp::Xor,
        BoolOp::Or,
        BoolOp::Nor,
        BoolOp::Xnor,
        BoolOp::NotSecond,
        BoolOp::ConverseImplication,
        BoolOp::NotFirst,
        BoolOp::Implication,
        BoolOp::Nand,
        BoolOp::True,
    ];

    pub fn from_table(bits: u8) -> BoolOp {
        Self::ALL[(bits & 15) as usize]
    }

    pub fn table(self) -> u8 {
        self as u8
    }

    pub fn eval(self, a: bool, b: bool) -> bool {
        let shift = 3 - ((a as u8) << 1 | b as u8);
        (self as u8 >> shift) & 1 == 1
    }

    pub fn name(self) -> &'static str {
        const NAMES: [&str; 16] = [
            "false",
            "and",
            "only-first",
            "first",
            "only-second",
            "second",
            "xor",
            "or",
            "nor",
            "xnor",
            "not-second",
            "converse-implication",
            "not-first",
            "implication",
            "nand",
            "true",
        ];
        NAMES[self as usize]
    }
}

/// Pointwise numeric operations for multi-terminal CFLOBDDs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum NumOp {
    Plus,
    Minus,
    Times,
}

impl NumOp {
    pub fn name(self) -> &'static str {
        match self {
            NumOp::Plus => "plus",
            NumOp::Minus => "minus",
            NumOp::Times => "times",
        }
    }
}

fn check_same_level(mgr: &Manager, c1: CflobddId, c2: CflobddId) -> Result<(), CflobddError> {
    let (l1, l2) = (mgr.cflobdd_level(c1), mgr.cflobdd_level(c2));
    if l1 != l2 {
        return Err(CflobddError::LevelMismatch(format!(
            "operands at levels {} and {}",
            l1, l2
        )));
    }
    Ok(())
}

/// Apply one of the sixteen Boolean operations pointwise.
pub fn apply_boolean(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
    op: BoolOp,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    if let Some(&hit) = mgr.apply_cache.get(&(c1, c2, op.name())) {
        return Ok(hit);
    }
    let vt1 = mgr.values_of(c1).to_vec();
    let vt2 = mgr.values_of(c2).to_vec();
    let (g, values) = apply_values(
        mgr,
        mgr.grouping_of(c1),
        &vt1,
        mgr.grouping_of(c2),
        &vt2,
        |x, y| match (x, y) {
            (TerminalValue::Bool(a), TerminalValue::Bool(b)) => {
                Ok(TerminalValue::Bool(op.eval(*a, *b)))
            }
            _ => Err(CflobddError::Value(
                "boolean operation on non-boolean terminal values".into(),
            )),
        },
    )?;
    let out = mgr.representative_cflobdd(g, values)?;
    mgr.apply_cache.insert((c1, c2, op.name()), out);
    Ok(out)
}

/// Apply a pointwise numeric operation (addition, subtraction, or
/// multiplication of terminal values).
pub fn apply_numeric(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
    op: NumOp,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    if let Some(&hit) = mgr.apply_cache.get(&(c1, c2, op.name())) {
        return Ok(hit);
    }
    let vt1 = mgr.values_of(c1).to_vec();
    let vt2 = mgr.values_of(c2).to_vec();
    let (g, values) = apply_values(
        mgr,
        mgr.grouping_of(c1),
        &vt1,
        mgr.grouping_of(c2),
        &vt2,
        |x, y| match op {
            NumOp::Plus => x.add(y),
            NumOp::Minus => x.sub(y),
            NumOp::Times => x.mul(y),
        },
    )?;
    let out = mgr.representative_cflobdd(g, values)?;
    mgr.apply_cache.insert((c1, c2, op.name()), out);
    Ok(out)
}

/// Ternary if-then-else: the condition must be Boolean; the branches may
/// carry any terminal type.
pub fn ite(
    mgr: &mut Manager,
    cond: CflobddId,
    then_c: CflobddId,
    else_c: CflobddId,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, cond, then_c)?;
    check_same_level(mgr, cond, else_c)?;
    if let Some(&hit) = mgr.ternary_cache.get(&(cond, then_c, else_c, "ite")) {
        return Ok(hit);
    }
    let (g, pt) = triple_product(
        mgr,
        mgr.grouping_of(cond),
        mgr.grouping_of(then_c),
        mgr.grouping_of(else_c),
    );
    let vt_c = mgr.values_of(cond).to_vec();
    let vt_t = mgr.values_of(then_c).to_vec();
    let vt_e = mgr.values_of(else_c).to_vec();
    let mut deduced = Vec::with_capacity(pt.len());
    for &(i, j, k) in pt.iter() {
        let picked = match &vt_c[i - 1] {
            TerminalValue::Bool(true) => vt_t[j - 1].clone(),
            TerminalValue::Bool(false) => vt_e[k - 1].clone(),
            other => {
                return Err(CflobddError::Value(format!(
                    "if-then-else condition must be boolean, got {}",
                    other
                )))
            }
        };
        deduced.push(picked);
    }
    let (values, renumbered) = collapse_classes_leftmost(&deduced);
    let reduced = reduce(mgr, g, &renumbered);
    let out = mgr.representative_cflobdd(reduced, values)?;
    mgr.ternary_cache.insert((cond, then_c, else_c, "ite"), out);
    Ok(out)
}

/// Express a binary Boolean operation through if-then-else on its first
/// argument: `op(a, b) = ite(a, op(true, b), op(false, b))`, with each
/// residual being one of false, true, `b`, or `not b`.
pub fn apply_via_ite(
    mgr: &mut Manager,
    c1: CflobddId,
    c2: CflobddId,
    op: BoolOp,
) -> Result<CflobddId, CflobddError> {
    check_same_level(mgr, c1, c2)?;
    let level = mgr.cflobdd_level(c1);
    let mut residual = |on_false: bool, on_true: bool| -> Result<CflobddId, CflobddError> {
        match (on_false, on_true) {
            (false, false) => crate::construct::false_(mgr, level),
            (true, true) => crate::construct::true_(mgr, level),
            (false, true) => Ok(c2),
            (true, false) => complement(mgr, c2),
        }
    };
    let when_true = residual(op.eval(true, false), op.eval(true, true))?;
    let when_false = residual(op.eval(false, false), op.eval(false, true))?;
    ite(mgr, c1, when_true, when_false)
}

/// Negate a Boolean CFLOBDD by complementing its value tuple.
pub fn complement(mgr: &mut Manager, c: CflobddId) -> Result<CflobddId, CflobddError> {
    let values: Result<Vec<_>, _> = mgr
        .values_of(c)
        .iter()
        .map(|v| match v {
            TerminalValue::Bool(b) => Ok(TerminalValue::Bool(!b)),
            other => Err(CflobddError::Value(format!(
                "complement of a non-boolean terminal value {}",
                other
            ))),
        })
        .collect();
    mgr.representative_cflobdd(mgr.grouping_of(c), values?)
}

/// Swap the two entries of a two-valued CFLOBDD's value tuple.
pub fn flip_value_tuple(mgr: &mut Manager, c: CflobddId) -> Result<CflobddId, CflobddError> {
    let values = mgr.values_of(c);
    if values.len() != 2 {
        return Err(CflobddError::Range(format!(
            "flip needs exactly two terminal values, got {}",
            values.len()
        )));
    }
    let flipped = vec![values[1].clone(), values[0].clone()];
    mgr.representative_cflobdd(mgr.grouping_of(c), flipped)
}

/// Multiply every terminal value by the scalar `k`. Multiplication by zero
/// yields the constant-zero function of the same level.
pub fn scalar_multiply(
    mgr: &mut Manager,
    c: CflobddId,
    k: &TerminalValue,
) -> Result<CflobddId, CflobddError> {
    let level = mgr.cflobdd_level(c);
    if k.is_zero() {
        return crate::construct::constant(mgr, level, k.clone());
    }
    let scaled: Result<Vec<_>, _> = mgr.values_of(c).iter().map(|v| k.mul(v)).collect();
    let (values, renumbered) = collapse_classes_leftmost(&scaled?);
    let g = reduce(mgr, mgr.grouping_of(c), &renumbered);
    mgr.representative_cflobdd(g, values)
}

/// Fix variable `var` (0-based) to `val`. The variable slot remains; the
/// result no longer depends on it.
pub fn restrict(
    mgr: &mut Manager,
    c: CflobddId,
    var: usize,
    val: bool,
) -> Result<CflobddId, CflobddError> {
    let g = mgr.grouping_of(c);
    let nv = num_vars(mgr.level(g));
    if var >= nv {
        return Err(CflobddError::Range(format!(
            "variable {} out of range for {} variables",
            var, nv
        )));
    }
    let (g2, translation) = restrict_grouping(mgr, g, var, val);
    let values: Vec<TerminalValue> = translation
        .iter()
        .map(|&e| mgr.values_of(c)[e - 1].clone())
        .collect();
    mgr.representative_cflobdd(g2, values)
}

/// Restrict a grouping, returning the result and, per new exit, the old
/// exit it came from (new exits in first-occurrence order, so the
/// translation is injective and increasing on first appearances).
fn restrict_grouping(
    mgr: &mut Manager,
    g: GroupingId,
    var: usize,
    val: bool,
) -> (GroupingId, Rc<Vec<usize>>) {
    if mgr.is_no_distinction(g) {
        return (g, Rc::new(vec![1]));
    }
    if mgr.level(g) == 0 {
        // A fork with its only variable fixed.
        let d = mgr.dont_care();
        return (d, Rc::new(vec![if val { 2 } else { 1 }]));
    }
    if let Some(hit) = mgr.restrict_cache.get(&(g, var, val)) {
        return hit.clone();
    }
    let ig = mgr.internal(g).clone();
    let half = num_vars(ig.level) / 2;
    let result = if var < half {
        let (aa, apt) = restrict_grouping(mgr, ig.a_connection, var, val);
        let mut builder = InternalBuilder::new(ig.level);
        let mut exit_map: HashMap<usize, usize> = HashMap::new();
        let mut translation: Vec<usize> = Vec::new();
        for (m, &mid) in apt.iter().enumerate() {
            let rt = &ig.b_return_tuples[mid - 1];
            let new_rt: Vec<usize> = rt
                .iter()
                .map(|&e| {
                    let next = translation.len();
                    *exit_map.entry(e).or_insert_with(|| {
                        translation.push(e);
                        next
                    }) + 1
                })
                .collect();
            let pos = builder.insert_b_connection(ig.b_connections[mid - 1], new_rt);
            debug_assert_eq!(pos, m + 1, "restricted middles must stay distinct");
        }
        let exits = translation.len();
        let g2 = builder
            .finish(mgr, aa, exits)
            .expect("restriction of a canonical grouping satisfies the invariants");
        (g2, Rc::new(translation))
    } else {
        // The variable lives in the B-connections; restrict each, collapse
        // middles that became equal, and renumber surviving exits.
        let mut pair_index: HashMap<(GroupingId, Vec<usize>), usize> = HashMap::new();
        let mut pairs: Vec<(GroupingId, Vec<usize>)> = Vec::new();
        let mut a_rt = Vec::with_capacity(ig.b_connections.len());
        for (b, rt) in ig.b_connections.iter().zip(ig.b_return_tuples.iter()) {
            let (bb, bpt) = restrict_grouping(mgr, *b, var - half, val);
            let mapped: Vec<usize> = bpt.iter().map(|&p| rt[p - 1]).collect();
            let next = pairs.len();
            let class = *pair_index.entry((bb, mapped.clone())).or_insert_with(|| {
                pairs.push((bb, mapped));
                next
            });
            a_rt.push(class + 1);
        }
        let aa = reduce(mgr, ig.a_connection, &a_rt);
        let mut builder = InternalBuilder::new(ig.level);
        let mut exit_map: HashMap<usize, usize> = HashMap::new();
        let mut translation: Vec<usize> = Vec::new();
        for (m, (bb, mapped)) in pairs.iter().enumerate() {
            let new_rt: Vec<usize> = mapped
                .iter()
                .map(|&e| {
                    let next = translation.len();
                    *exit_map.entry(e).or_insert_with(|| {
                        translation.push(e);
                        next
                    }) + 1
                })
                .collect();
            let pos = builder.insert_b_connection(*bb, new_rt);
            debug_assert_eq!(pos, m + 1, "restricted middles must stay distinct");
        }
        let exits = translation.len();
        let g2 = builder
            .finish(mgr, aa, exits)
            .expect("restriction of a canonical grouping satisfies the invariants");
        (g2, Rc::new(translation))
    };
    mgr.restrict_cache.insert((g, var, val), result.clone());
    result
}

/// Existential quantification over one variable:
/// `exists(f, i) = restrict(f, i, false) OR restrict(f, i, true)`.
pub fn exists(mgr: &mut Manager, c: CflobddId, var: usize) -> Result<CflobddId, CflobddError> {
    let on_false = restrict(mgr, c, var, false)?;
    let on_true = restrict(mgr, c, var, true)?;
    apply_boolean(mgr, on_false, on_true, BoolOp::Or)
}
