//! Generator of structures that each break exactly one representation
//! invariant, for exercising `check_invariants`. Built through the mock
//! installers, which skip validation on purpose.

#![allow(dead_code)]

use cflobdd::{
    projection, CflobddId, Grouping, GroupingId, InternalGrouping, Invariant, Level, Manager,
    TerminalValue,
};
use rand::Rng;

fn internal(
    level: Level,
    a: GroupingId,
    art: Vec<usize>,
    bs: Vec<GroupingId>,
    brts: Vec<Vec<usize>>,
    exits: usize,
) -> Grouping {
    Grouping::Internal(InternalGrouping {
        level,
        a_connection: a,
        a_return_tuple: art,
        b_connections: bs,
        b_return_tuples: brts,
        number_of_exits: exits,
    })
}

/// Pairwise distinct terminal values for `n` exits, offset by `salt` so
/// different mocks in one manager do not look alike.
fn distinct_values(n: usize, salt: i64) -> Vec<TerminalValue> {
    (0..n).map(|i| TerminalValue::int(salt * 100 + i as i64)).collect()
}

/// Valid two-exit children one level below `level` (level-0: fork; level-1:
/// a projection grouping), plus the matching one-exit no-distinction child.
struct Children {
    two: GroupingId,
    one: GroupingId,
}

fn children(mgr: &mut Manager, level: Level, rng: &mut impl Rng) -> Children {
    if level == 1 {
        Children {
            two: mgr.fork(),
            one: mgr.dont_care(),
        }
    } else {
        let var = rng.gen_range(0..cflobdd::num_vars(level - 1));
        let p = projection(mgr, level - 1, var).unwrap();
        Children {
            two: mgr.grouping_of(p),
            one: mgr.no_distinction(level - 1),
        }
    }
}

/// Install a structure violating the requested invariant and return the
/// handle to check. Every other aspect of the structure is kept legal so
/// the reported violation is unambiguous.
pub fn inject(mgr: &mut Manager, rng: &mut impl Rng, which: Invariant, salt: i64) -> CflobddId {
    let level = rng.gen_range(1..=2u32);
    let ch = children(mgr, level, rng);
    let (g, exits) = match which {
        Invariant::ArtIdentity => match rng.gen_range(0..4u8) {
            0 => (
                // A-return tuple swapped out of identity order.
                internal(
                    level,
                    ch.two,
                    vec![2, 1],
                    vec![ch.one, ch.one],
                    vec![vec![1], vec![2]],
                    2,
                ),
                2,
            ),
            1 => (
                // A-return tuple repeats an entry.
                internal(
                    level,
                    ch.two,
                    vec![1, 1],
                    vec![ch.one, ch.one],
                    vec![vec![1], vec![2]],
                    2,
                ),
                2,
            ),
            2 => (
                // A-return tuple shorter than the A-connection's exits.
                internal(level, ch.two, vec![1], vec![ch.one], vec![vec![1]], 1),
                1,
            ),
            _ => (
                // One middle vertex too many for the A-connection.
                internal(
                    level,
                    ch.two,
                    vec![1, 2],
                    vec![ch.one, ch.one, ch.one],
                    vec![vec![1], vec![2], vec![1]],
                    2,
                ),
                2,
            ),
        },
        Invariant::BrtEntries => match rng.gen_range(0..3u8) {
            0 => (
                // Duplicate entry inside one B-return tuple.
                internal(level, ch.one, vec![1], vec![ch.two], vec![vec![1, 1]], 1),
                1,
            ),
            1 => (
                // Zero entry (exits are 1-based).
                internal(level, ch.one, vec![1], vec![ch.two], vec![vec![0, 1]], 1),
                1,
            ),
            _ => {
                // Entry beyond the declared exit count.
                let big = 3 + rng.gen_range(0..5usize);
                (
                    internal(level, ch.one, vec![1], vec![ch.two], vec![vec![1, big]], 2),
                    2,
                )
            }
        },
        Invariant::BrtContiguous => match rng.gen_range(0..3u8) {
            0 => (
                // First visited exit is 2, not 1.
                internal(level, ch.one, vec![1], vec![ch.two], vec![vec![2, 1]], 2),
                2,
            ),
            1 => (
                // Exit 2 first appears before exit 1 across tuples.
                internal(
                    level,
                    ch.two,
                    vec![1, 2],
                    vec![ch.one, ch.two],
                    vec![vec![2], vec![1, 3]],
                    3,
                ),
                3,
            ),
            _ => (
                // Exit 3 appears while the running maximum is 1.
                internal(
                    level,
                    ch.two,
                    vec![1, 2],
                    vec![ch.two, ch.one],
                    vec![vec![1, 3], vec![2]],
                    3,
                ),
                3,
            ),
        },
        Invariant::DuplicateBPair => {
            if rng.gen_bool(0.5) {
                (
                    internal(
                        level,
                        ch.two,
                        vec![1, 2],
                        vec![ch.one, ch.one],
                        vec![vec![1], vec![1]],
                        1,
                    ),
                    1,
                )
            } else {
                (
                    internal(
                        level,
                        ch.two,
                        vec![1, 2],
                        vec![ch.two, ch.two],
                        vec![vec![1, 2], vec![1, 2]],
                        2,
                    ),
                    2,
                )
            }
        }
        Invariant::ValueDistinct => {
            // A perfectly valid grouping whose value tuple repeats.
            let var = rng.gen_range(0..cflobdd::num_vars(level));
            let p = projection(mgr, level, var).unwrap();
            let g = mgr.grouping_of(p);
            let v = if rng.gen_bool(0.5) {
                TerminalValue::Bool(true)
            } else {
                TerminalValue::int(salt)
            };
            return mgr.install_mock_cflobdd(g, vec![v.clone(), v]);
        }
        other => panic!("no injection recipe for {other:?}"),
    };
    let id = mgr.install_mock_grouping(g);
    mgr.install_mock_cflobdd(id, distinct_values(exits, salt))
}

/// The five invariants covered by the injection recipes.
pub const INJECTABLE: [Invariant; 5] = [
    Invariant::ArtIdentity,
    Invariant::BrtEntries,
    Invariant::BrtContiguous,
    Invariant::DuplicateBPair,
    Invariant::ValueDistinct,
];
