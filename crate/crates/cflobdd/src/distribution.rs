//! Path counting and weighted sampling.
//!
//! Every exit of a grouping is reached by some number of matched paths
//! (assignments to the grouping's `2^level` variables). Those counts grow
//! doubly exponentially with the level, so they are kept as `BigUint`.
//! Sampling draws an assignment with probability proportional to the weight
//! of the terminal value it reaches, using exact integer arithmetic so that
//! the distribution is the stated one, not a rounded approximation.

use std::rc::Rc;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::kernel::{
    num_vars, CflobddError, CflobddId, Grouping, GroupingId, Manager, TerminalValue,
};

/// Number of matched paths from the entry of `g` to each of its exits.
/// Index `i` holds the count for exit `i + 1`; the entries sum to
/// `2^(2^level)`.
pub fn count_paths_grouping(mgr: &mut Manager, g: GroupingId) -> Rc<Vec<BigUint>> {
    if let Some(hit) = mgr.path_count_cache.get(&g) {
        return Rc::clone(hit);
    }
    let counts = match mgr.node(g).clone() {
        Grouping::DontCare => vec![BigUint::from(2u32)],
        Grouping::Fork => vec![BigUint::from(1u32), BigUint::from(1u32)],
        Grouping::Internal(ig) => {
            let a_counts = count_paths_grouping(mgr, ig.a_connection);
            let mut out = vec![BigUint::zero(); ig.number_of_exits];
            for (m, (&b, rt)) in ig
                .b_connections
                .iter()
                .zip(ig.b_return_tuples.iter())
                .enumerate()
            {
                let b_counts = count_paths_grouping(mgr, b);
                for (k, &exit) in rt.iter().enumerate() {
                    out[exit - 1] += &a_counts[m] * &b_counts[k];
                }
            }
            out
        }
    };
    let counts = Rc::new(counts);
    mgr.path_count_cache.insert(g, Rc::clone(&counts));
    counts
}

/// Number of assignments mapped to each terminal value of `c`, in value
/// tuple order.
pub fn count_paths(mgr: &mut Manager, c: CflobddId) -> Vec<BigUint> {
    let g = mgr.grouping_of(c);
    count_paths_grouping(mgr, g).to_vec()
}

/// Natural logarithms of the per-exit path counts, computed without
/// materializing the counts as floats (they overflow `f64` past level 5).
/// Index `i` holds `ln(count of exit i + 1)`, with `-inf` for zero.
pub fn path_counts_log(mgr: &mut Manager, c: CflobddId) -> Vec<f64> {
    count_paths(mgr, c)
        .iter()
        .map(|n| {
            if n.is_zero() {
                f64::NEG_INFINITY
            } else {
                // ln(n) = ln(mantissa) + shift * ln(2), taking the top 64
                // bits of n as the mantissa.
                let bits = n.bits();
                let shift = bits.saturating_sub(64);
                let top: u64 = (n >> shift).try_into().expect("top 64 bits fit");
                (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
            }
        })
        .collect()
}

/// Draws one assignment of `c`'s `2^level` variables, weighting each
/// assignment by the squared modulus of the terminal value it reaches
/// (`1`/`0` for booleans, `v^2` for integers). Returns the drawn assignment,
/// most significant variable first.
pub fn sample_assignment(mgr: &mut Manager, c: CflobddId) -> Result<Vec<bool>, CflobddError> {
    sample_assignment_with(mgr, c, TerminalValue::weight)
}

/// As [`sample_assignment`], with a caller-chosen weight for each terminal
/// value. A weight is a dyadic rational `numerator / 2^denominator_log`;
/// the common power of two cancels, so only ratios matter.
pub fn sample_assignment_with<F>(
    mgr: &mut Manager,
    c: CflobddId,
    weight: F,
) -> Result<Vec<bool>, CflobddError>
where
    F: Fn(&TerminalValue) -> (BigUint, u32),
{
    let g = mgr.grouping_of(c);
    let weights: Vec<(BigUint, u32)> = mgr.values_of(c).iter().map(&weight).collect();
    let common = weights.iter().map(|&(_, h)| h).max().unwrap_or(0);
    let counts = count_paths_grouping(mgr, g);
    let scores: Vec<BigUint> = weights
        .iter()
        .zip(counts.iter())
        .map(|(&(ref num, h), count)| (num << (common - h)) * count)
        .collect();
    let total: BigUint = scores.iter().sum();
    if total.is_zero() {
        return Err(CflobddError::AllZeroWeights);
    }
    let mut r = mgr.rng.gen_biguint_below(&total);
    let mut exit = scores.len();
    for (i, s) in scores.iter().enumerate() {
        if r < *s {
            exit = i + 1;
            break;
        }
        r -= s;
    }
    let level = mgr.level(g);
    let mut bits = vec![false; num_vars(level)];
    descend(mgr, g, exit, &mut bits, 0);
    Ok(bits)
}

/// Weights with which the descent through `g` distributes the paths bound
/// for `exit` over `(middle vertex, B-connection exit)` choices: entry
/// `(m, k)` is present iff middle vertex `m + 1`'s return tuple maps B-exit
/// `k + 1` to `exit`, weighted by the number of matched paths through that
/// choice. Exposed so tests can pin down the exact sampling distribution.
pub fn exit_descent_weights(
    mgr: &mut Manager,
    g: GroupingId,
    exit: usize,
) -> Vec<((usize, usize), BigUint)> {
    let ig = match mgr.node(g) {
        Grouping::Internal(ig) => ig.clone(),
        _ => return Vec::new(),
    };
    let a_counts = count_paths_grouping(mgr, ig.a_connection);
    let mut options = Vec::new();
    for (m, (&b, rt)) in ig
        .b_connections
        .iter()
        .zip(ig.b_return_tuples.iter())
        .enumerate()
    {
        let b_counts = count_paths_grouping(mgr, b);
        for (k, &e) in rt.iter().enumerate() {
            if e == exit {
                options.push(((m, k), &a_counts[m] * &b_counts[k]));
            }
        }
    }
    options
}

/// Fills `bits[offset ..]` with a uniformly random matched path of `g` that
/// lands on `exit`.
fn descend(mgr: &mut Manager, g: GroupingId, exit: usize, bits: &mut [bool], offset: usize) {
    match mgr.node(g).clone() {
        Grouping::DontCare => {
            bits[offset] = mgr.rng.gen::<bool>();
        }
        Grouping::Fork => {
            bits[offset] = exit == 2;
        }
        Grouping::Internal(ig) => {
            let options = exit_descent_weights(mgr, g, exit);
            let total: BigUint = options.iter().map(|(_, w)| w).sum();
            debug_assert!(!total.is_zero(), "exit {exit} is unreachable");
            let mut r = mgr.rng.gen_biguint_below(&total);
            let mut choice = options[options.len() - 1].0;
            for ((m, k), w) in &options {
                if r < *w {
                    choice = (*m, *k);
                    break;
                }
                r -= w;
            }
            let (m, k) = choice;
            let half = num_vars(ig.level - 1);
            descend(mgr, ig.a_connection, m + 1, bits, offset);
            descend(mgr, ig.b_connections[m], k + 1, bits, offset + half);
        }
    }
}
