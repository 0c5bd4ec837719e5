//! Core types: groupings, the hash-consing manager, structural invariants,
//! evaluation, decision-tree folding, size reports, and serialization.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::rc::Rc;

use num_bigint::{BigInt, BigUint};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use thiserror::Error;

use crate::quantum::ExactAmplitude;

/// Grouping level. A grouping at level `k` reads `2^k` Boolean variables.
pub type Level = u32;

/// 1-based exit indices of a child grouping mapped into the parent.
pub type ReturnTuple = Vec<usize>;

/// Handle to an interned grouping. Equal handles mean structurally (and
/// therefore semantically) equal proto-CFLOBDDs within one [`Manager`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupingId(pub(crate) u32);

/// Handle to an interned CFLOBDD (a grouping plus a tuple of terminal
/// values). Equal handles mean equal functions.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CflobddId(pub(crate) u32);

/// A grouping: the proto-CFLOBDD building block.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Grouping {
    /// Level-0 grouping that distinguishes its variable: exit 1 for `false`,
    /// exit 2 for `true`.
    Fork,
    /// Level-0 grouping that ignores its variable: always exit 1.
    DontCare,
    /// Grouping at level >= 1.
    Internal(InternalGrouping),
}

/// A grouping at level `k >= 1`: the first `2^(k-1)` variables route through
/// the A-connection, whose exit selects a middle vertex; the middle vertex's
/// B-connection consumes the remaining variables, and the B-connection's
/// exit maps through the corresponding return tuple to an exit of this
/// grouping.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct InternalGrouping {
    pub level: Level,
    pub a_connection: GroupingId,
    pub a_return_tuple: ReturnTuple,
    pub b_connections: Vec<GroupingId>,
    pub b_return_tuples: Vec<ReturnTuple>,
    pub number_of_exits: usize,
}

/// A terminal value at an exit of a top-level grouping.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TerminalValue {
    Bool(bool),
    Int(BigInt),
    Amp(ExactAmplitude),
}

impl TerminalValue {
    pub fn int(v: i64) -> Self {
        TerminalValue::Int(BigInt::from(v))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            TerminalValue::Bool(b) => !b,
            TerminalValue::Int(v) => v.sign() == num_bigint::Sign::NoSign,
            TerminalValue::Amp(a) => a.is_zero(),
        }
    }

    fn type_name(&self) -> &'static str {
        match self {
            TerminalValue::Bool(_) => "boolean",
            TerminalValue::Int(_) => "integer",
            TerminalValue::Amp(_) => "amplitude",
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, CflobddError> {
        match (self, other) {
            (TerminalValue::Int(a), TerminalValue::Int(b)) => Ok(TerminalValue::Int(a + b)),
            (TerminalValue::Amp(a), TerminalValue::Amp(b)) => {
                Ok(TerminalValue::Amp(a.add(b).map_err(CflobddError::Value)?))
            }
            _ => Err(CflobddError::Value(format!(
                "cannot add {} and {}",
                self.type_name(),
                other.type_name()
            ))),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, CflobddError> {
        match (self, other) {
            (TerminalValue::Int(a), TerminalValue::Int(b)) => Ok(TerminalValue::Int(a - b)),
            (TerminalValue::Amp(a), TerminalValue::Amp(b)) => Ok(TerminalValue::Amp(
                a.add(&b.neg()).map_err(CflobddError::Value)?,
            )),
            _ => Err(CflobddError::Value(format!(
                "cannot subtract {} from {}",
                other.type_name(),
                self.type_name()
            ))),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, CflobddError> {
        match (self, other) {
            (TerminalValue::Int(a), TerminalValue::Int(b)) => Ok(TerminalValue::Int(a * b)),
            (TerminalValue::Amp(a), TerminalValue::Amp(b)) => Ok(TerminalValue::Amp(a.mul(b))),
            _ => Err(CflobddError::Value(format!(
                "cannot multiply {} by {}",
                self.type_name(),
                other.type_name()
            ))),
        }
    }

    /// Multiply by a natural number (used when evaluating bilinear
    /// polynomials produced by matrix multiplication).
    pub fn mul_nat(&self, n: &BigUint) -> Result<Self, CflobddError> {
        match self {
            TerminalValue::Int(a) => Ok(TerminalValue::Int(a * BigInt::from(n.clone()))),
            TerminalValue::Amp(a) => Ok(TerminalValue::Amp(a.mul_nat(n))),
            TerminalValue::Bool(_) => Err(CflobddError::Value(
                "cannot scale a boolean terminal value".into(),
            )),
        }
    }

    /// Sampling weight as an exact dyadic rational `numerator / 2^den_pow2`.
    /// Booleans weigh 1 (true) or 0 (false); numbers weigh their squared
    /// magnitude.
    pub fn weight(&self) -> (BigUint, u32) {
        match self {
            TerminalValue::Bool(b) => (BigUint::from(*b as u8), 0),
            TerminalValue::Int(v) => ((v * v).magnitude().clone(), 0),
            TerminalValue::Amp(a) => a.squared_modulus(),
        }
    }
}

impl fmt::Display for TerminalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TerminalValue::Bool(true) => write!(f, "T"),
            TerminalValue::Bool(false) => write!(f, "F"),
            TerminalValue::Int(v) => write!(f, "{}", v),
            TerminalValue::Amp(a) => write!(f, "{}", a),
        }
    }
}

/// Structural invariants a well-formed CFLOBDD must satisfy. The names
/// follow the numbering used throughout the crate's diagnostics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Invariant {
    /// Inv 1: the A-return tuple is the identity `[1..k]` where `k` is the
    /// A-connection's exit count, and there are exactly `k` B-connections.
    ArtIdentity,
    /// Inv 2a: each B-return tuple is duplicate-free with entries in
    /// `[1..numberOfExits]`.
    BrtEntries,
    /// Inv 2b: scanning B-return tuples left to right, an entry exceeding
    /// the running maximum must be exactly `max + 1`.
    BrtContiguous,
    /// Inv 3: no two distinct stored groupings are structurally equal.
    UniqueTable,
    /// Inv 4: no two middle vertices share the same (B-connection,
    /// B-return-tuple) pair.
    DuplicateBPair,
    /// Inv 5: the value tuple has one entry per top-level exit.
    ValueArity,
    /// Inv 6: terminal values are pairwise distinct.
    ValueDistinct,
    /// Every exit index is hit by at least one return-tuple entry.
    ExitCoverage,
    /// Shape errors: child level off by one, tuple length mismatches.
    Structure,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Invariant::ArtIdentity => "Inv 1",
            Invariant::BrtEntries => "Inv 2a",
            Invariant::BrtContiguous => "Inv 2b",
            Invariant::UniqueTable => "Inv 3",
            Invariant::DuplicateBPair => "Inv 4",
            Invariant::ValueArity => "Inv 5",
            Invariant::ValueDistinct => "Inv 6",
            Invariant::ExitCoverage => "exit coverage",
            Invariant::Structure => "structure",
        };
        write!(f, "{}", name)
    }
}

/// One detected invariant violation.
#[derive(Clone, Debug)]
pub struct Violation {
    pub invariant: Invariant,
    pub grouping: Option<GroupingId>,
    /// Offending middle-vertex or tuple index (1-based) when applicable.
    pub index: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.invariant)?;
        if let Some(g) = self.grouping {
            write!(f, " at grouping {}", g.0)?;
        }
        if let Some(i) = self.index {
            write!(f, " index {}", i)?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Error, Debug)]
pub enum CflobddError {
    #[error("invariant violation: {0}")]
    Invariant(Violation),
    #[error("level mismatch: {0}")]
    LevelMismatch(String),
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("level {requested} exceeds the manager's limit {limit}")]
    LevelGuard { requested: Level, limit: Level },
    #[error("value error: {0}")]
    Value(String),
    #[error("all terminal weights are zero; nothing to sample")]
    AllZeroWeights,
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl From<Violation> for CflobddError {
    fn from(v: Violation) -> Self {
        CflobddError::Invariant(v)
    }
}

/// An explicit `{0,1}^(2^k) -> V` function table: `leaves[p]` is the value
/// at the assignment whose bits, most significant first, spell `p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecisionTree {
    pub level: Level,
    pub leaves: Vec<TerminalValue>,
}

/// Structure size summary. Vertices and edges follow the drawing
/// conventions: a grouping contributes an entry vertex, one vertex per
/// middle vertex, and one per exit; a level-0 grouping has two branch
/// edges; an internal grouping has one A-connection edge, one edge per
/// A-return-tuple entry, one edge per B-connection, and one per
/// B-return-tuple entry. `value_edges` counts the terminal-value edges of
/// the top-level grouping.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize)]
pub struct SizeReport {
    pub groupings: u64,
    pub vertices: u64,
    pub edges: u64,
    pub value_edges: u64,
}

pub(crate) struct NodeMeta {
    pub level: Level,
    pub exits: usize,
    pub is_no_distinction: bool,
}

struct CflobddNode {
    grouping: GroupingId,
    values: Vec<TerminalValue>,
}

/// Operation tag used to key operation caches. Operations are registered
/// under stable names so that cached results are well-defined.
pub(crate) type OpTag = &'static str;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) enum ShiftKind {
    ToA,
    ToB,
    ToAAtLevelOne,
    ToBAtLevelOne,
    Broadcast,
}

/// Arena, unique tables, and operation caches for one family of CFLOBDDs.
/// All handles are scoped to the manager that produced them; managers are
/// independent and must not be shared across threads without external
/// synchronization.
pub struct Manager {
    nodes: Vec<Grouping>,
    meta: Vec<NodeMeta>,
    unique: HashMap<Grouping, GroupingId>,
    cflobdds: Vec<CflobddNode>,
    cflobdd_unique: HashMap<(GroupingId, Vec<TerminalValue>), CflobddId>,
    no_distinction: Vec<Option<GroupingId>>,
    max_level: Level,
    pub(crate) rng: ChaCha12Rng,
    pub(crate) pair_cache: HashMap<(GroupingId, GroupingId), (GroupingId, Rc<Vec<(usize, usize)>>)>,
    #[allow(clippy::type_complexity)]
    pub(crate) triple_cache:
        HashMap<(GroupingId, GroupingId, GroupingId), (GroupingId, Rc<Vec<(usize, usize, usize)>>)>,
    pub(crate) reduce_cache: HashMap<(GroupingId, ReturnTuple), GroupingId>,
    pub(crate) apply_cache: HashMap<(CflobddId, CflobddId, OpTag), CflobddId>,
    pub(crate) ternary_cache: HashMap<(CflobddId, CflobddId, CflobddId, OpTag), CflobddId>,
    pub(crate) restrict_cache: HashMap<(GroupingId, usize, bool), (GroupingId, Rc<Vec<usize>>)>,
    pub(crate) shift_cache: HashMap<(GroupingId, ShiftKind), GroupingId>,
    #[allow(clippy::type_complexity)]
    pub(crate) matmult_cache:
        HashMap<(GroupingId, GroupingId), (GroupingId, Rc<crate::linalg::MatMultTuple>)>,
    pub(crate) path_count_cache: HashMap<GroupingId, Rc<Vec<BigUint>>>,
}

impl Manager {
    pub fn new() -> Self {
        Self::with_seed(0)
    }

    /// Create a manager whose sampling RNG starts from `seed`.
    pub fn with_seed(seed: u64) -> Self {
        Manager {
            nodes: Vec::new(),
            meta: Vec::new(),
            unique: HashMap::new(),
            cflobdds: Vec::new(),
            cflobdd_unique: HashMap::new(),
            no_distinction: Vec::new(),
            max_level: 24,
            rng: ChaCha12Rng::seed_from_u64(seed),
            pair_cache: HashMap::new(),
            triple_cache: HashMap::new(),
            reduce_cache: HashMap::new(),
            apply_cache: HashMap::new(),
            ternary_cache: HashMap::new(),
            restrict_cache: HashMap::new(),
            shift_cache: HashMap::new(),
            matmult_cache: HashMap::new(),
            path_count_cache: HashMap::new(),
        }
    }

    /// Reseed the sampling RNG.
    pub fn reseed(&mut self, seed: u64) {
        self.rng = ChaCha12Rng::seed_from_u64(seed);
    }

    pub fn max_level(&self) -> Level {
        self.max_level
    }

    /// Set the largest level `representative_grouping` will accept.
    pub fn set_max_level(&mut self, limit: Level) {
        self.max_level = limit;
    }

    /// Drop all operation caches (unique tables are kept, so handles stay
    /// valid). Recomputing any operation afterwards must produce identical
    /// handles; tests use this to check memoization soundness.
    pub fn clear_caches(&mut self) {
        self.pair_cache.clear();
        self.triple_cache.clear();
        self.reduce_cache.clear();
        self.apply_cache.clear();
        self.ternary_cache.clear();
        self.restrict_cache.clear();
        self.shift_cache.clear();
        self.matmult_cache.clear();
        self.path_count_cache.clear();
    }

    pub fn num_groupings(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, g: GroupingId) -> &Grouping {
        &self.nodes[g.0 as usize]
    }

    pub(crate) fn internal(&self, g: GroupingId) -> &InternalGrouping {
        match self.node(g) {
            Grouping::Internal(ig) => ig,
            _ => panic!("expected an internal grouping"),
        }
    }

    pub fn level(&self, g: GroupingId) -> Level {
        self.meta[g.0 as usize].level
    }

    pub fn exits(&self, g: GroupingId) -> usize {
        self.meta[g.0 as usize].exits
    }

    /// Whether `g` is the no-distinction proto-CFLOBDD of its level.
    pub fn is_no_distinction(&self, g: GroupingId) -> bool {
        self.meta[g.0 as usize].is_no_distinction
    }

    pub fn grouping_of(&self, c: CflobddId) -> GroupingId {
        self.cflobdds[c.0 as usize].grouping
    }

    pub fn values_of(&self, c: CflobddId) -> &[TerminalValue] {
        &self.cflobdds[c.0 as usize].values
    }

    pub fn cflobdd_level(&self, c: CflobddId) -> Level {
        self.level(self.grouping_of(c))
    }

    /// Validate a candidate grouping against the structural invariants and
    /// intern it, returning the canonical handle. Structurally equal
    /// candidates always return the same handle.
    pub fn representative_grouping(&mut self, g: Grouping) -> Result<GroupingId, CflobddError> {
        if let Some(&id) = self.unique.get(&g) {
            return Ok(id);
        }
        if let Grouping::Internal(ref ig) = g {
            if ig.level > self.max_level {
                return Err(CflobddError::LevelGuard {
                    requested: ig.level,
                    limit: self.max_level,
                });
            }
            self.validate_internal(ig)?;
        }
        Ok(self.intern_unchecked(g))
    }

    fn intern_unchecked(&mut self, g: Grouping) -> GroupingId {
        if let Some(&id) = self.unique.get(&g) {
            return id;
        }
        let id = GroupingId(self.nodes.len() as u32);
        let meta = match &g {
            Grouping::Fork => NodeMeta {
                level: 0,
                exits: 2,
                is_no_distinction: false,
            },
            Grouping::DontCare => NodeMeta {
                level: 0,
                exits: 1,
                is_no_distinction: true,
            },
            Grouping::Internal(ig) => NodeMeta {
                level: ig.level,
                exits: ig.number_of_exits,
                is_no_distinction: ig.number_of_exits == 1
                    && self.is_no_distinction(ig.a_connection)
                    && ig.b_connections.len() == 1
                    && self.is_no_distinction(ig.b_connections[0]),
            },
        };
        self.meta.push(meta);
        self.nodes.push(g.clone());
        self.unique.insert(g, id);
        id
    }

    /// Install a grouping without validation or unique-table consultation.
    /// Intended for diagnostics and tests that need structures violating
    /// the invariants; `check_invariants` will report on them.
    pub fn install_mock_grouping(&mut self, g: Grouping) -> GroupingId {
        let id = GroupingId(self.nodes.len() as u32);
        let meta = match &g {
            Grouping::Fork => NodeMeta {
                level: 0,
                exits: 2,
                is_no_distinction: false,
            },
            Grouping::DontCare => NodeMeta {
                level: 0,
                exits: 1,
                is_no_distinction: true,
            },
            Grouping::Internal(ig) => NodeMeta {
                level: ig.level,
                exits: ig.number_of_exits,
                is_no_distinction: false,
            },
        };
        self.meta.push(meta);
        self.nodes.push(g);
        id
    }

    /// Install a CFLOBDD without validation; see `install_mock_grouping`.
    pub fn install_mock_cflobdd(
        &mut self,
        grouping: GroupingId,
        values: Vec<TerminalValue>,
    ) -> CflobddId {
        let id = CflobddId(self.cflobdds.len() as u32);
        self.cflobdds.push(CflobddNode { grouping, values });
        id
    }

    fn validate_internal(&self, ig: &InternalGrouping) -> Result<(), Violation> {
        let fail = |invariant, index, message: String| {
            Err(Violation {
                invariant,
                grouping: None,
                index,
                message,
            })
        };
        if ig.level == 0 {
            return fail(
                Invariant::Structure,
                None,
                "internal groupings require level >= 1".into(),
            );
        }
        let want_child = ig.level - 1;
        if self.level(ig.a_connection) != want_child {
            return fail(
                Invariant::Structure,
                None,
                format!(
                    "A-connection level {} under a level-{} grouping",
                    self.level(ig.a_connection),
                    ig.level
                ),
            );
        }
        let a_exits = self.exits(ig.a_connection);
        let identity: Vec<usize> = (1..=a_exits).collect();
        if ig.a_return_tuple != identity {
            return fail(
                Invariant::ArtIdentity,
                None,
                format!(
                    "A-return tuple {:?} must be the identity [1..{}]",
                    ig.a_return_tuple, a_exits
                ),
            );
        }
        if ig.b_connections.len() != a_exits {
            return fail(
                Invariant::ArtIdentity,
                None,
                format!(
                    "{} B-connections for an A-connection with {} exits",
                    ig.b_connections.len(),
                    a_exits
                ),
            );
        }
        if ig.b_return_tuples.len() != ig.b_connections.len() {
            return fail(
                Invariant::Structure,
                None,
                "one return tuple is required per B-connection".into(),
            );
        }
        let mut seen_pairs = HashSet::new();
        let mut running_max = 0usize;
        let mut covered = vec![false; ig.number_of_exits];
        for (i, (b, rt)) in ig
            .b_connections
            .iter()
            .zip(ig.b_return_tuples.iter())
            .enumerate()
        {
            let idx = Some(i + 1);
            if self.level(*b) != want_child {
                return fail(
                    Invariant::Structure,
                    idx,
                    format!(
                        "B-connection level {} under a level-{} grouping",
                        self.level(*b),
                        ig.level
                    ),
                );
            }
            if rt.len() != self.exits(*b) {
                return fail(
                    Invariant::Structure,
                    idx,
                    format!(
                        "return tuple length {} for a B-connection with {} exits",
                        rt.len(),
                        self.exits(*b)
                    ),
                );
            }
            let mut seen_entries = HashSet::new();
            for &e in rt {
                if e == 0 || e > ig.number_of_exits {
                    return fail(
                        Invariant::BrtEntries,
                        idx,
                        format!("entry {} outside [1..{}]", e, ig.number_of_exits),
                    );
                }
                if !seen_entries.insert(e) {
                    return fail(
                        Invariant::BrtEntries,
                        idx,
                        format!("duplicate entry {} in one return tuple", e),
                    );
                }
                if e > running_max {
                    if e != running_max + 1 {
                        return fail(
                            Invariant::BrtContiguous,
                            idx,
                            format!("entry {} skips past running maximum {}", e, running_max),
                        );
                    }
                    running_max = e;
                }
                covered[e - 1] = true;
            }
            if !seen_pairs.insert((*b, rt.clone())) {
                return fail(
                    Invariant::DuplicateBPair,
                    idx,
                    "two middle vertices share a (B-connection, return tuple) pair".into(),
                );
            }
        }
        if let Some(miss) = covered.iter().position(|c| !c) {
            return fail(
                Invariant::ExitCoverage,
                None,
                format!("exit {} is not hit by any return-tuple entry", miss + 1),
            );
        }
        Ok(())
    }

    /// Validate a (grouping, value tuple) pair and intern it.
    pub fn representative_cflobdd(
        &mut self,
        grouping: GroupingId,
        values: Vec<TerminalValue>,
    ) -> Result<CflobddId, CflobddError> {
        if values.len() != self.exits(grouping) {
            return Err(Violation {
                invariant: Invariant::ValueArity,
                grouping: Some(grouping),
                index: None,
                message: format!(
                    "{} terminal values for a grouping with {} exits",
                    values.len(),
                    self.exits(grouping)
                ),
            }
            .into());
        }
        let mut seen = HashSet::new();
        for (i, v) in values.iter().enumerate() {
            if !seen.insert(v.clone()) {
                return Err(Violation {
                    invariant: Invariant::ValueDistinct,
                    grouping: Some(grouping),
                    index: Some(i + 1),
                    message: format!("terminal value {} appears twice", v),
                }
                .into());
            }
        }
        let key = (grouping, values);
        if let Some(&id) = self.cflobdd_unique.get(&key) {
            return Ok(id);
        }
        let id = CflobddId(self.cflobdds.len() as u32);
        self.cflobdds.push(CflobddNode {
            grouping: key.0,
            values: key.1.clone(),
        });
        self.cflobdd_unique.insert(key, id);
        Ok(id)
    }

    /// The no-distinction proto-CFLOBDD of `level`: a single exit reached by
    /// every assignment.
    pub fn no_distinction(&mut self, level: Level) -> GroupingId {
        if let Some(Some(id)) = self.no_distinction.get(level as usize) {
            return *id;
        }
        let id = if level == 0 {
            self.intern_unchecked(Grouping::DontCare)
        } else {
            let child = self.no_distinction(level - 1);
            self.intern_unchecked(Grouping::Internal(InternalGrouping {
                level,
                a_connection: child,
                a_return_tuple: vec![1],
                b_connections: vec![child],
                b_return_tuples: vec![vec![1]],
                number_of_exits: 1,
            }))
        };
        if self.no_distinction.len() <= level as usize {
            self.no_distinction.resize(level as usize + 1, None);
        }
        self.no_distinction[level as usize] = Some(id);
        id
    }

    pub fn fork(&mut self) -> GroupingId {
        self.intern_unchecked(Grouping::Fork)
    }

    pub fn dont_care(&mut self) -> GroupingId {
        self.intern_unchecked(Grouping::DontCare)
    }

    /// Walk all groupings reachable from `c` and report every invariant
    /// violation found, including duplicate stored structures (Inv 3) and
    /// value-tuple problems (Inv 5, Inv 6).
    pub fn check_invariants(&self, c: CflobddId) -> Vec<Violation> {
        let mut violations = Vec::new();
        let top = self.grouping_of(c);
        let values = self.values_of(c);
        let mut reachable = Vec::new();
        let mut seen = HashSet::new();
        let mut stack = vec![top];
        while let Some(g) = stack.pop() {
            if !seen.insert(g) {
                continue;
            }
            reachable.push(g);
            if let Grouping::Internal(ig) = self.node(g) {
                stack.push(ig.a_connection);
                stack.extend(ig.b_connections.iter().copied());
            }
        }
        reachable.sort();
        for &g in &reachable {
            if let Grouping::Internal(ig) = self.node(g) {
                if let Err(mut v) = self.validate_internal(ig) {
                    v.grouping = Some(g);
                    violations.push(v);
                }
            }
        }
        let mut by_structure: HashMap<&Grouping, GroupingId> = HashMap::new();
        for &g in &reachable {
            if let Some(&first) = by_structure.get(self.node(g)) {
                violations.push(Violation {
                    invariant: Invariant::UniqueTable,
                    grouping: Some(g),
                    index: None,
                    message: format!(
                        "structurally equal to grouping {} but stored separately",
                        first.0
                    ),
                });
            } else {
                by_structure.insert(self.node(g), g);
            }
        }
        if values.len() != self.exits(top) {
            violations.push(Violation {
                invariant: Invariant::ValueArity,
                grouping: Some(top),
                index: None,
                message: format!(
                    "{} terminal values for a grouping with {} exits",
                    values.len(),
                    self.exits(top)
                ),
            });
        }
        let mut seen_values = HashSet::new();
        for (i, v) in values.iter().enumerate() {
            if !seen_values.insert(v.clone()) {
                violations.push(Violation {
                    invariant: Invariant::ValueDistinct,
                    grouping: Some(top),
                    index: Some(i + 1),
                    message: format!("terminal value {} appears twice", v),
                });
            }
        }
        violations
    }

    /// Evaluate `c` on an assignment (one bool per variable, first variable
    /// first), returning the terminal value it reaches.
    pub fn interpret(&self, c: CflobddId, assignment: &[bool]) -> Result<&TerminalValue, CflobddError> {
        let g = self.grouping_of(c);
        let want = num_vars(self.level(g));
        if assignment.len() != want {
            return Err(CflobddError::Range(format!(
                "assignment has {} bits but level {} reads {}",
                assignment.len(),
                self.level(g),
                want
            )));
        }
        let exit = self.interpret_grouping(g, assignment);
        Ok(&self.values_of(c)[exit - 1])
    }

    /// Exit index (1-based) reached by an assignment through grouping `g`.
    pub fn interpret_grouping(&self, g: GroupingId, assignment: &[bool]) -> usize {
        match self.node(g) {
            Grouping::Fork => {
                if assignment[0] {
                    2
                } else {
                    1
                }
            }
            Grouping::DontCare => 1,
            Grouping::Internal(ig) => {
                let half = assignment.len() / 2;
                let a_exit = self.interpret_grouping(ig.a_connection, &assignment[..half]);
                let middle = ig.a_return_tuple[a_exit - 1];
                let b_exit = self.interpret_grouping(ig.b_connections[middle - 1], &assignment[half..]);
                ig.b_return_tuples[middle - 1][b_exit - 1]
            }
        }
    }

    /// Enumerate the full function: for each terminal value, the set of
    /// accepted bit strings. Guarded to level <= 4.
    pub fn denotation(
        &self,
        c: CflobddId,
    ) -> Result<Vec<(TerminalValue, BTreeSet<String>)>, CflobddError> {
        let level = self.cflobdd_level(c);
        if level > 4 {
            return Err(CflobddError::Range(format!(
                "denotation is limited to level <= 4, got {}",
                level
            )));
        }
        let g = self.grouping_of(c);
        let vals = self.values_of(c);
        let mut out: Vec<(TerminalValue, BTreeSet<String>)> = vals
            .iter()
            .map(|v| (v.clone(), BTreeSet::new()))
            .collect();
        let nv = num_vars(level);
        for idx in 0..(1u64 << nv) {
            let asn = assignment_from_index(level, idx);
            let exit = self.interpret_grouping(g, &asn);
            let bits: String = asn.iter().map(|&b| if b { '1' } else { '0' }).collect();
            out[exit - 1].1.insert(bits);
        }
        Ok(out)
    }

    /// Expand `c` into its decision tree. Guarded to level <= 4.
    pub fn unfold(&self, c: CflobddId) -> Result<DecisionTree, CflobddError> {
        let level = self.cflobdd_level(c);
        if level > 4 {
            return Err(CflobddError::Range(format!(
                "unfold is limited to level <= 4, got {}",
                level
            )));
        }
        let g = self.grouping_of(c);
        let vals = self.values_of(c);
        let nv = num_vars(level);
        let mut leaves = Vec::with_capacity(1usize << nv);
        for idx in 0..(1u64 << nv) {
            let asn = assignment_from_index(level, idx);
            let exit = self.interpret_grouping(g, &asn);
            leaves.push(vals[exit - 1].clone());
        }
        Ok(DecisionTree { level, leaves })
    }

    /// Build the canonical CFLOBDD for a decision tree. Inverse of
    /// [`Manager::unfold`]: `fold(unfold(c))` returns a handle equal to `c`.
    /// Guarded to level <= 4.
    pub fn fold(&mut self, tree: &DecisionTree) -> Result<CflobddId, CflobddError> {
        if tree.level > 4 {
            return Err(CflobddError::Range(format!(
                "fold is limited to level <= 4, got {}",
                tree.level
            )));
        }
        let want = 1usize << num_vars(tree.level);
        if tree.leaves.len() != want {
            return Err(CflobddError::Range(format!(
                "level {} needs {} leaves, got {}",
                tree.level,
                want,
                tree.leaves.len()
            )));
        }
        let (g, values) = self.fold_items(tree.level, &tree.leaves)?;
        self.representative_cflobdd(g, values)
    }

    /// Fold a sequence of `2^(2^level)` items into the canonical grouping
    /// that distinguishes exactly the item classes, returning the grouping
    /// and the distinct items in exit order (leftmost first occurrence).
    pub(crate) fn fold_items<L: Eq + std::hash::Hash + Clone>(
        &mut self,
        level: Level,
        items: &[L],
    ) -> Result<(GroupingId, Vec<L>), CflobddError> {
        if level == 0 {
            debug_assert_eq!(items.len(), 2);
            if items[0] == items[1] {
                return Ok((self.dont_care(), vec![items[0].clone()]));
            }
            return Ok((self.fork(), vec![items[0].clone(), items[1].clone()]));
        }
        let chunk = 1usize << num_vars(level - 1);
        // Fold each half-sized block and partition the blocks into classes.
        let mut class_of_block: Vec<usize> = Vec::with_capacity(items.len() / chunk);
        let mut class_keys: HashMap<(GroupingId, Vec<L>), usize> = HashMap::new();
        let mut reps: Vec<(GroupingId, Vec<L>)> = Vec::new();
        for block in items.chunks(chunk) {
            let folded = self.fold_items(level - 1, block)?;
            let next = reps.len();
            match class_keys.entry(folded.clone()) {
                std::collections::hash_map::Entry::Occupied(o) => class_of_block.push(*o.get() + 1),
                std::collections::hash_map::Entry::Vacant(v) => {
                    v.insert(next);
                    reps.push(folded);
                    class_of_block.push(next + 1);
                }
            }
        }
        // The upper half reads the class labels; first occurrences are in
        // increasing order, so the A-return tuple is the identity.
        let (a, a_exits) = self.fold_items(level - 1, &class_of_block)?;
        debug_assert_eq!(a_exits, (1..=reps.len()).collect::<Vec<_>>());
        let mut values: Vec<L> = Vec::new();
        let mut value_index: HashMap<L, usize> = HashMap::new();
        let mut b_connections = Vec::with_capacity(reps.len());
        let mut b_return_tuples = Vec::with_capacity(reps.len());
        for (b, exits) in &reps {
            let mut rt = Vec::with_capacity(exits.len());
            for v in exits {
                let next = values.len();
                let idx = *value_index.entry(v.clone()).or_insert_with(|| {
                    values.push(v.clone());
                    next
                });
                rt.push(idx + 1);
            }
            b_connections.push(*b);
            b_return_tuples.push(rt);
        }
        let g = self.representative_grouping(Grouping::Internal(InternalGrouping {
            level,
            a_connection: a,
            a_return_tuple: (1..=reps.len()).collect(),
            b_connections,
            b_return_tuples,
            number_of_exits: values.len(),
        }))?;
        Ok((g, values))
    }

    /// First-visit order of `c`'s top-level exits over assignments in
    /// lexicographic order. For a canonical CFLOBDD this is the identity
    /// `[1..numberOfExits]`. Guarded to level <= 3.
    pub fn lex_first_visit_order(&self, c: CflobddId) -> Result<Vec<usize>, CflobddError> {
        let level = self.cflobdd_level(c);
        if level > 3 {
            return Err(CflobddError::Range(format!(
                "lex_first_visit_order is limited to level <= 3, got {}",
                level
            )));
        }
        self.lex_first_visit_order_grouping(self.grouping_of(c))
    }

    /// First-visit order of any grouping's exits over lexicographic
    /// assignment order.
    pub fn lex_first_visit_order_grouping(
        &self,
        g: GroupingId,
    ) -> Result<Vec<usize>, CflobddError> {
        let level = self.level(g);
        if level > 3 {
            return Err(CflobddError::Range(format!(
                "lex_first_visit_order is limited to level <= 3, got {}",
                level
            )));
        }
        let nv = num_vars(level);
        let mut order = Vec::new();
        let mut seen = HashSet::new();
        for idx in 0..(1u64 << nv) {
            let asn = assignment_from_index(level, idx);
            let exit = self.interpret_grouping(g, &asn);
            if seen.insert(exit) {
                order.push(exit);
            }
            if order.len() == self.exits(g) {
                break;
            }
        }
        Ok(order)
    }

    /// Count unique reachable groupings, vertices, and edges.
    pub fn size_report(&self, c: CflobddId) -> SizeReport {
        let mut report = SizeReport {
            value_edges: self.values_of(c).len() as u64,
            ..SizeReport::default()
        };
        let mut seen = HashSet::new();
        let mut stack = vec![self.grouping_of(c)];
        while let Some(g) = stack.pop() {
            if !seen.insert(g) {
                continue;
            }
            report.groupings += 1;
            match self.node(g) {
                Grouping::Fork => {
                    report.vertices += 3;
                    report.edges += 2;
                }
                Grouping::DontCare => {
                    report.vertices += 2;
                    report.edges += 2;
                }
                Grouping::Internal(ig) => {
                    let middles = ig.b_connections.len() as u64;
                    report.vertices += 1 + middles + ig.number_of_exits as u64;
                    let return_entries: u64 = ig
                        .b_return_tuples
                        .iter()
                        .map(|rt| rt.len() as u64)
                        .sum::<u64>()
                        + ig.a_return_tuple.len() as u64;
                    report.edges += 1 + middles + return_entries;
                    stack.push(ig.a_connection);
                    stack.extend(ig.b_connections.iter().copied());
                }
            }
        }
        report
    }
}

impl Default for Manager {
    fn default() -> Self {
        Self::new()
    }
}

/// Number of Boolean variables a level-`k` grouping reads.
pub fn num_vars(level: Level) -> usize {
    1usize << level
}

/// The `idx`-th assignment in lexicographic order (most significant bit is
/// the first variable). Supports level <= 6.
pub fn assignment_from_index(level: Level, idx: u64) -> Vec<bool> {
    let nv = num_vars(level);
    assert!(nv <= 64, "assignment enumeration is limited to 64 variables");
    (0..nv).map(|i| (idx >> (nv - 1 - i)) & 1 == 1).collect()
}

/// Identity return tuple `[1..=n]`.
pub fn identity_tuple(n: usize) -> ReturnTuple {
    (1..=n).collect()
}

/// Incremental builder for an internal grouping. `insert_b_connection`
/// deduplicates (B-connection, return tuple) pairs, returning the 1-based
/// position of the pair, so Inv 4 holds by construction.
pub struct InternalBuilder {
    level: Level,
    b_connections: Vec<GroupingId>,
    b_return_tuples: Vec<ReturnTuple>,
    index: HashMap<(GroupingId, ReturnTuple), usize>,
}

impl InternalBuilder {
    pub fn new(level: Level) -> Self {
        InternalBuilder {
            level,
            b_connections: Vec::new(),
            b_return_tuples: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Add a (B-connection, return tuple) pair unless an equal pair is
    /// already present; returns the pair's 1-based middle-vertex position.
    pub fn insert_b_connection(&mut self, b: GroupingId, rt: ReturnTuple) -> usize {
        if let Some(&pos) = self.index.get(&(b, rt.clone())) {
            return pos;
        }
        self.b_connections.push(b);
        self.b_return_tuples.push(rt.clone());
        let pos = self.b_connections.len();
        self.index.insert((b, rt), pos);
        pos
    }

    pub fn len(&self) -> usize {
        self.b_connections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b_connections.is_empty()
    }

    /// Finish with A-connection `a` (A-return tuple is the identity, as
    /// Inv 1 requires) and the stated exit count, validating and interning.
    pub fn finish(
        self,
        manager: &mut Manager,
        a: GroupingId,
        number_of_exits: usize,
    ) -> Result<GroupingId, CflobddError> {
        let middles = self.b_connections.len();
        manager.representative_grouping(Grouping::Internal(InternalGrouping {
            level: self.level,
            a_connection: a,
            a_return_tuple: identity_tuple(middles),
            b_connections: self.b_connections,
            b_return_tuples: self.b_return_tuples,
            number_of_exits,
        }))
    }
}

// ---------------------------------------------------------------------------
// Text serialization, parsing, and DOT export.
// ---------------------------------------------------------------------------

fn format_tuple(rt: &[usize]) -> String {
    let parts: Vec<String> = rt.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

/// Serialize to a line-oriented text form: one line per unique grouping in
/// topological order (children first, ids are line positions), then one
/// `values:` line. Parsing the output reconstructs an identical handle.
pub fn serialize_text(manager: &Manager, c: CflobddId) -> String {
    let mut order = Vec::new();
    let mut index: HashMap<GroupingId, usize> = HashMap::new();
    fn visit(
        manager: &Manager,
        g: GroupingId,
        order: &mut Vec<GroupingId>,
        index: &mut HashMap<GroupingId, usize>,
    ) {
        if index.contains_key(&g) {
            return;
        }
        if let Grouping::Internal(ig) = manager.node(g) {
            visit(manager, ig.a_connection, order, index);
            for &b in &ig.b_connections {
                visit(manager, b, order, index);
            }
        }
        index.insert(g, order.len());
        order.push(g);
    }
    visit(manager, manager.grouping_of(c), &mut order, &mut index);
    let mut out = String::new();
    for &g in &order {
        match manager.node(g) {
            Grouping::Fork => out.push_str("level:0 kind:F exits:2\n"),
            Grouping::DontCare => out.push_str("level:0 kind:D exits:1\n"),
            Grouping::Internal(ig) => {
                let bs: Vec<String> = ig
                    .b_connections
                    .iter()
                    .map(|b| index[b].to_string())
                    .collect();
                let brts: Vec<String> = ig.b_return_tuples.iter().map(|rt| format_tuple(rt)).collect();
                out.push_str(&format!(
                    "level:{} kind:I A:{} ART:{} B:[{}] BRT:[{}] exits:{}\n",
                    ig.level,
                    index[&ig.a_connection],
                    format_tuple(&ig.a_return_tuple),
                    bs.join(","),
                    brts.join(","),
                    ig.number_of_exits
                ));
            }
        }
    }
    let values: Vec<String> = manager
        .values_of(c)
        .iter()
        .map(|v| serialize_value(v))
        .collect();
    out.push_str(&format!("values:[{}]\n", values.join(",")));
    out
}

pub fn serialize_value(v: &TerminalValue) -> String {
    match v {
        TerminalValue::Bool(true) => "T".into(),
        TerminalValue::Bool(false) => "F".into(),
        TerminalValue::Int(i) => i.to_string(),
        TerminalValue::Amp(a) => a.serialize_text(),
    }
}

pub fn parse_value(s: &str) -> Result<TerminalValue, String> {
    let s = s.trim();
    match s {
        "T" => return Ok(TerminalValue::Bool(true)),
        "F" => return Ok(TerminalValue::Bool(false)),
        _ => {}
    }
    if s.starts_with("dy(") || s.starts_with("rou(") || s.starts_with("fl(") {
        return ExactAmplitude::parse_text(s).map(TerminalValue::Amp);
    }
    s.parse::<BigInt>()
        .map(TerminalValue::Int)
        .map_err(|e| format!("bad terminal value {:?}: {}", s, e))
}

fn parse_usize_list(s: &str, line: usize) -> Result<Vec<usize>, CflobddError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or(CflobddError::Parse {
            line,
            message: format!("expected a bracketed list, got {:?}", s),
        })?;
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            p.trim().parse::<usize>().map_err(|e| CflobddError::Parse {
                line,
                message: format!("bad number {:?}: {}", p, e),
            })
        })
        .collect()
}

/// Split `[[1,2],[3]]` into `["[1,2]", "[3]"]`.
fn split_nested_lists(s: &str, line: usize) -> Result<Vec<String>, CflobddError> {
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or(CflobddError::Parse {
            line,
            message: format!("expected a bracketed list, got {:?}", s),
        })?;
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in inner.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => {
                depth = depth.checked_sub(1).ok_or(CflobddError::Parse {
                    line,
                    message: "unbalanced brackets".into(),
                })?
            }
            ',' if depth == 0 => {
                parts.push(inner[start..i].trim().to_string());
                start = i + 1;
            }
            _ => {}
        }
    }
    if !inner[start..].trim().is_empty() {
        parts.push(inner[start..].trim().to_string());
    }
    Ok(parts)
}

/// Parse the text form produced by [`serialize_text`], interning every
/// grouping; round-trips to an identical handle.
pub fn parse_text(manager: &mut Manager, text: &str) -> Result<CflobddId, CflobddError> {
    let mut ids: Vec<GroupingId> = Vec::new();
    let mut values: Option<Vec<TerminalValue>> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let ln = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("values:") {
            let parts = split_nested_lists(rest, ln)?;
            let mut vals = Vec::with_capacity(parts.len());
            for p in parts {
                vals.push(parse_value(&p).map_err(|message| CflobddError::Parse { line: ln, message })?);
            }
            values = Some(vals);
            continue;
        }
        let mut fields: HashMap<&str, &str> = HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once(':').ok_or(CflobddError::Parse {
                line: ln,
                message: format!("expected key:value, got {:?}", tok),
            })?;
            fields.insert(k, v);
        }
        let kind = *fields.get("kind").ok_or(CflobddError::Parse {
            line: ln,
            message: "missing kind".into(),
        })?;
        match kind {
            "F" => ids.push(manager.fork()),
            "D" => ids.push(manager.dont_care()),
            "I" => {
                let get = |k: &str| -> Result<&str, CflobddError> {
                    fields.get(k).copied().ok_or(CflobddError::Parse {
                        line: ln,
                        message: format!("missing field {}", k),
                    })
                };
                let level: Level = get("level")?.parse().map_err(|e| CflobddError::Parse {
                    line: ln,
                    message: format!("bad level: {}", e),
                })?;
                let a_idx: usize = get("A")?.parse().map_err(|e| CflobddError::Parse {
                    line: ln,
                    message: format!("bad A reference: {}", e),
                })?;
                let art = parse_usize_list(get("ART")?, ln)?;
                let b_idx = parse_usize_list(get("B")?, ln)?;
                let brt_parts = split_nested_lists(get("BRT")?, ln)?;
                let exits: usize = get("exits")?.parse().map_err(|e| CflobddError::Parse {
                    line: ln,
                    message: format!("bad exits: {}", e),
                })?;
                let resolve = |i: usize| -> Result<GroupingId, CflobddError> {
                    ids.get(i).copied().ok_or(CflobddError::Parse {
                        line: ln,
                        message: format!("forward or dangling grouping reference {}", i),
                    })
                };
                let a = resolve(a_idx)?;
                let mut bs = Vec::with_capacity(b_idx.len());
                for i in b_idx {
                    bs.push(resolve(i)?);
                }
                let mut brts = Vec::with_capacity(brt_parts.len());
                for p in &brt_parts {
                    brts.push(parse_usize_list(p, ln)?);
                }
                let g = manager.representative_grouping(Grouping::Internal(InternalGrouping {
                    level,
                    a_connection: a,
                    a_return_tuple: art,
                    b_connections: bs,
                    b_return_tuples: brts,
                    number_of_exits: exits,
                }))?;
                ids.push(g);
            }
            other => {
                return Err(CflobddError::Parse {
                    line: ln,
                    message: format!("unknown kind {:?}", other),
                })
            }
        }
    }
    let top = *ids.last().ok_or(CflobddError::Parse {
        line: 0,
        message: "no groupings".into(),
    })?;
    let values = values.ok_or(CflobddError::Parse {
        line: 0,
        message: "missing values line".into(),
    })?;
    manager.representative_cflobdd(top, values)
}

/// Render to Graphviz DOT: one cluster per unique grouping with entry,
/// middle, and exit vertices; solid A-connection edges, dashed
/// B-connection edges, dotted return edges.
pub fn to_dot(manager: &Manager, c: CflobddId) -> String {
    let mut order = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![manager.grouping_of(c)];
    while let Some(g) = stack.pop() {
        if !seen.insert(g) {
            continue;
        }
        order.push(g);
        if let Grouping::Internal(ig) = manager.node(g) {
            stack.push(ig.a_connection);
            stack.extend(ig.b_connections.iter().copied());
        }
    }
    let name = |g: GroupingId| format!("g{}", g.0);
    let mut out = String::from("digraph cflobdd {\n  rankdir=TB;\n  node [shape=circle, fontsize=10];\n");
    for &g in &order {
        let n = name(g);
        out.push_str(&format!("  subgraph cluster_{} {{\n", n));
        match manager.node(g) {
            Grouping::Fork => {
                out.push_str(&format!("    label=\"{}: fork\";\n", n));
                out.push_str(&format!("    {}_entry [label=\"\"];\n", n));
                out.push_str(&format!("    {}_x1 [label=\"1\", shape=square];\n", n));
                out.push_str(&format!("    {}_x2 [label=\"2\", shape=square];\n", n));
            }
            Grouping::DontCare => {
                out.push_str(&format!("    label=\"{}: don't care\";\n", n));
                out.push_str(&format!("    {}_entry [label=\"\"];\n", n));
                out.push_str(&format!("    {}_x1 [label=\"1\", shape=square];\n", n));
            }
            Grouping::Internal(ig) => {
                out.push_str(&format!("    label=\"{}: level {}\";\n", n, ig.level));
                out.push_str(&format!("    {}_entry [label=\"\"];\n", n));
                for m in 1..=ig.b_connections.len() {
                    out.push_str(&format!("    {}_m{} [label=\"m{}\"];\n", n, m, m));
                }
                for x in 1..=ig.number_of_exits {
                    out.push_str(&format!("    {}_x{} [label=\"{}\", shape=square];\n", n, x, x));
                }
            }
        }
        out.push_str("  }\n");
    }
    for &g in &order {
        let n = name(g);
        match manager.node(g) {
            Grouping::Fork => {
                out.push_str(&format!("  {}_entry -> {}_x1 [label=\"0\"];\n", n, n));
                out.push_str(&format!("  {}_entry -> {}_x2 [label=\"1\"];\n", n, n));
            }
            Grouping::DontCare => {
                out.push_str(&format!("  {}_entry -> {}_x1 [label=\"0\"];\n", n, n));
                out.push_str(&format!("  {}_entry -> {}_x1 [label=\"1\"];\n", n, n));
            }
            Grouping::Internal(ig) => {
                let an = name(ig.a_connection);
                out.push_str(&format!("  {}_entry -> {}_entry [style=solid];\n", n, an));
                for (i, &m) in ig.a_return_tuple.iter().enumerate() {
                    out.push_str(&format!(
                        "  {}_x{} -> {}_m{} [style=dotted];\n",
                        an,
                        i + 1,
                        n,
                        m
                    ));
                }
                for (m, (&b, rt)) in ig
                    .b_connections
                    .iter()
                    .zip(ig.b_return_tuples.iter())
                    .enumerate()
                {
                    let bn = name(b);
                    out.push_str(&format!(
                        "  {}_m{} -> {}_entry [style=dashed];\n",
                        n,
                        m + 1,
                        bn
                    ));
                    for (j, &x) in rt.iter().enumerate() {
                        out.push_str(&format!(
                            "  {}_x{} -> {}_x{} [style=dotted, label=\"m{}\"];\n",
                            bn,
                            j + 1,
                            n,
                            x,
                            m + 1
                        ));
                    }
                }
            }
        }
    }
    let top = name(manager.grouping_of(c));
    for (i, v) in manager.values_of(c).iter().enumerate() {
        out.push_str(&format!(
            "  v{} [shape=box, label=\"{}\"];\n  {}_x{} -> v{};\n",
            i + 1,
            v,
            top,
            i + 1,
            i + 1
        ));
    }
    out.push_str("}\n");
    out
}
