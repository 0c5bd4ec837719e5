//! Shared test oracles: dense reference implementations and frozen expected
//! values. Everything here is deliberately naive (tables, enumeration,
//! O(n^2) scans) so it can serve as an independent check on the library's
//! structured algorithms. The only library entry points used are
//! `interpret`/`interpret_grouping`, which anchor the semantics.

#![allow(dead_code)]

use cflobdd::{CflobddId, Manager, TerminalValue};
use num_complex::Complex64;

// ---------------------------------------------------------------------------
// Assignments
// ---------------------------------------------------------------------------

/// The `idx`-th assignment of `nvars` variables in lexicographic order
/// (first variable is the most significant bit).
pub fn index_assignment(nvars: usize, idx: u64) -> Vec<bool> {
    assert!(nvars <= 63);
    (0..nvars).map(|i| (idx >> (nvars - 1 - i)) & 1 == 1).collect()
}

/// Matrix-entry assignment for a level with `bits_per_side` row bits: row
/// and column bits interleaved as x0 y0 x1 y1 ..., each most significant
/// first.
pub fn interleave_rc(bits_per_side: usize, r: u64, c: u64) -> Vec<bool> {
    let rb = index_assignment(bits_per_side, r);
    let cb = index_assignment(bits_per_side, c);
    let mut out = Vec::with_capacity(2 * bits_per_side);
    for i in 0..bits_per_side {
        out.push(rb[i]);
        out.push(cb[i]);
    }
    out
}

// ---------------------------------------------------------------------------
// Boolean truth tables
// ---------------------------------------------------------------------------

/// Explicit truth table over `nvars` variables; `bits[idx]` is the value on
/// the `idx`-th lexicographic assignment.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruthTable {
    pub nvars: usize,
    pub bits: Vec<bool>,
}

impl TruthTable {
    pub fn from_fn(nvars: usize, f: impl Fn(&[bool]) -> bool) -> Self {
        let bits = (0..1u64 << nvars)
            .map(|i| f(&index_assignment(nvars, i)))
            .collect();
        TruthTable { nvars, bits }
    }

    pub fn constant(nvars: usize, b: bool) -> Self {
        TruthTable {
            nvars,
            bits: vec![b; 1 << nvars],
        }
    }

    pub fn projection(nvars: usize, var: usize) -> Self {
        Self::from_fn(nvars, |a| a[var])
    }

    pub fn eval(&self, asn: &[bool]) -> bool {
        let mut idx = 0usize;
        for &b in asn {
            idx = idx << 1 | b as usize;
        }
        self.bits[idx]
    }

    pub fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.nvars, other.nvars);
        TruthTable {
            nvars: self.nvars,
            bits: self
                .bits
                .iter()
                .zip(other.bits.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn not(&self) -> Self {
        TruthTable {
            nvars: self.nvars,
            bits: self.bits.iter().map(|&b| !b).collect(),
        }
    }

    pub fn ite(&self, t: &Self, e: &Self) -> Self {
        assert_eq!(self.nvars, t.nvars);
        assert_eq!(self.nvars, e.nvars);
        TruthTable {
            nvars: self.nvars,
            bits: (0..self.bits.len())
                .map(|i| if self.bits[i] { t.bits[i] } else { e.bits[i] })
                .collect(),
        }
    }

    /// Fix variable `var` to `val`; the variable slot remains but the
    /// function no longer depends on it.
    pub fn restrict(&self, var: usize, val: bool) -> Self {
        Self::from_fn(self.nvars, |a| {
            let mut a = a.to_vec();
            a[var] = val;
            self.eval(&a)
        })
    }

    pub fn exists(&self, var: usize) -> Self {
        self.restrict(var, false)
            .zip(&self.restrict(var, true), |a, b| a || b)
    }
}

/// Read a Boolean CFLOBDD into an explicit truth table.
pub fn table_of(mgr: &Manager, c: CflobddId) -> TruthTable {
    let level = mgr.cflobdd_level(c);
    let nvars = 1usize << level;
    assert!(nvars <= 20, "table_of is for small levels only");
    let bits = (0..1u64 << nvars)
        .map(|i| match mgr.interpret(c, &index_assignment(nvars, i)).unwrap() {
            TerminalValue::Bool(b) => *b,
            other => panic!("expected a boolean terminal, got {}", other),
        })
        .collect();
    TruthTable { nvars, bits }
}

// ---------------------------------------------------------------------------
// Dense views of multi-terminal functions
// ---------------------------------------------------------------------------

/// All terminal values in lexicographic assignment order.
pub fn dense_values(mgr: &Manager, c: CflobddId) -> Vec<TerminalValue> {
    let nvars = 1usize << mgr.cflobdd_level(c);
    assert!(nvars <= 20);
    (0..1u64 << nvars)
        .map(|i| mgr.interpret(c, &index_assignment(nvars, i)).unwrap().clone())
        .collect()
}

/// Dense matrix view of a level-`l` matrix CFLOBDD (interleaved row and
/// column bits).
pub fn dense_matrix(mgr: &Manager, c: CflobddId) -> Vec<Vec<TerminalValue>> {
    let level = mgr.cflobdd_level(c);
    assert!(level >= 1);
    let side_bits = 1usize << (level - 1);
    assert!(side_bits <= 10);
    let n = 1u64 << side_bits;
    (0..n)
        .map(|r| {
            (0..n)
                .map(|cix| {
                    mgr.interpret(c, &interleave_rc(side_bits, r, cix))
                        .unwrap()
                        .clone()
                })
                .collect()
        })
        .collect()
}

/// Dense vector view of a vector CFLOBDD (all variables are row bits).
pub fn dense_vector(mgr: &Manager, c: CflobddId) -> Vec<TerminalValue> {
    dense_values(mgr, c)
}

/// Count, by enumeration, how many assignments reach each terminal-value
/// position of `c`.
pub fn ref_value_counts(mgr: &Manager, c: CflobddId) -> Vec<u64> {
    let nvars = 1usize << mgr.cflobdd_level(c);
    assert!(nvars <= 20);
    let values = mgr.values_of(c);
    let mut counts = vec![0u64; values.len()];
    for i in 0..1u64 << nvars {
        let v = mgr.interpret(c, &index_assignment(nvars, i)).unwrap();
        let pos = values.iter().position(|w| w == v).unwrap();
        counts[pos] += 1;
    }
    counts
}

// ---------------------------------------------------------------------------
// Integer dense linear algebra
// ---------------------------------------------------------------------------

pub type IMat = Vec<Vec<i64>>;

pub fn imat_of(mgr: &Manager, c: CflobddId) -> IMat {
    dense_matrix(mgr, c)
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    TerminalValue::Int(i) => i64::try_from(&i).expect("entry fits in i64"),
                    other => panic!("expected an integer terminal, got {}", other),
                })
                .collect()
        })
        .collect()
}

pub fn imat_mul(a: &IMat, b: &IMat) -> IMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    assert_eq!(a[0].len(), k);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn imat_kron(a: &IMat, b: &IMat) -> IMat {
    let (ar, ac) = (a.len(), a[0].len());
    let (br, bc) = (b.len(), b[0].len());
    let mut out = vec![vec![0i64; ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            for p in 0..br {
                for q in 0..bc {
                    out[i * br + p][j * bc + q] = a[i][j] * b[p][q];
                }
            }
        }
    }
    out
}

pub fn imat_identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// Complex dense linear algebra and a tiny statevector simulator
// ---------------------------------------------------------------------------

pub type CMat = Vec<Vec<Complex64>>;
pub type CVec = Vec<Complex64>;

pub fn amp_to_c64(v: &TerminalValue) -> Complex64 {
    match v {
        TerminalValue::Amp(a) => {
            let (re, im) = a.to_complex_f64();
            Complex64::new(re, im)
        }
        TerminalValue::Int(i) => Complex64::new(i64::try_from(i).unwrap() as f64, 0.0),
        TerminalValue::Bool(b) => Complex64::new(*b as u8 as f64, 0.0),
    }
}

pub fn cmat_of(mgr: &Manager, c: CflobddId) -> CMat {
    dense_matrix(mgr, c)
        .into_iter()
        .map(|row| row.iter().map(amp_to_c64).collect())
        .collect()
}

pub fn cvec_of(mgr: &Manager, c: CflobddId) -> CVec {
    dense_vector(mgr, c).iter().map(amp_to_c64).collect()
}

pub fn cmat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    assert_eq!(a[0].len(), k);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn cmat_vec(a: &CMat, v: &CVec) -> CVec {
    assert_eq!(a[0].len(), v.len());
    a.iter()
        .map(|row| row.iter().zip(v.iter()).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn cmat_kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = (a.len(), a[0].len());
    let (br, bc) = (b.len(), b[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            for p in 0..br {
                for q in 0..bc {
                    out[i * br + p][j * bc + q] = a[i][j] * b[p][q];
                }
            }
        }
    }
    out
}

pub fn cmat_identity(n: usize) -> CMat {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new((i == j) as u8 as f64, 0.0))
                .collect()
        })
        .collect()
}

pub fn dense_h() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)],
        vec![Complex64::new(s, 0.0), Complex64::new(-s, 0.0)],
    ]
}

pub fn dense_x() -> CMat {
    vec![
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    ]
}

/// Qubit `k` of basis index `b` over `q` qubits; qubit 0 is the most
/// significant bit.
pub fn qubit_bit(q: usize, b: u64, k: usize) -> bool {
    (b >> (q - 1 - k)) & 1 == 1
}

fn set_qubit(q: usize, b: u64, k: usize, v: bool) -> u64 {
    let mask = 1u64 << (q - 1 - k);
    if v {
        b | mask
    } else {
        b & !mask
    }
}

/// Dense CNOT over `q` qubits with control `i` and target `j`.
pub fn dense_cnot(q: usize, i: usize, j: usize) -> CMat {
    let n = 1u64 << q;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n as usize]; n as usize];
    for c in 0..n {
        let r = if qubit_bit(q, c, i) {
            set_qubit(q, c, j, !qubit_bit(q, c, j))
        } else {
            c
        };
        m[r as usize][c as usize] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Dense controlled-phase over `q` qubits: multiplies by `e^(i theta)` when
/// qubits `i` and `j` are both 1.
pub fn dense_cp(q: usize, i: usize, j: usize, theta: f64) -> CMat {
    let n = 1u64 << q;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n as usize]; n as usize];
    for c in 0..n {
        m[c as usize][c as usize] = if qubit_bit(q, c, i) && qubit_bit(q, c, j) {
            Complex64::from_polar(1.0, theta)
        } else {
            Complex64::new(1.0, 0.0)
        };
    }
    m
}

/// Dense SWAP of qubits `i` and `j` over `q` qubits.
pub fn dense_swap(q: usize, i: usize, j: usize) -> CMat {
    let n = 1u64 << q;
    let mut m = vec![vec![Complex64::new(0.0, 0.0); n as usize]; n as usize];
    for c in 0..n {
        let bi = qubit_bit(q, c, i);
        let bj = qubit_bit(q, c, j);
        let r = set_qubit(q, set_qubit(q, c, i, bj), j, bi);
        m[r as usize][c as usize] = Complex64::new(1.0, 0.0);
    }
    m
}

/// Embed a one-qubit gate at qubit `idx` of a `q`-qubit system.
pub fn embed_1q(q: usize, idx: usize, g: &CMat) -> CMat {
    let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
    for k in 0..q {
        let f = if k == idx { g.clone() } else { cmat_identity(2) };
        m = cmat_kron(&m, &f);
    }
    m
}

/// The unitary discrete Fourier transform on `2^n` points:
/// `F[y][x] = 2^(-n/2) * exp(2 pi i x y / 2^n)`.
pub fn dense_dft(n: usize) -> CMat {
    let size = 1u64 << n;
    let scale = 1.0 / (size as f64).sqrt();
    (0..size)
        .map(|y| {
            (0..size)
                .map(|x| {
                    let theta =
                        2.0 * std::f64::consts::PI * ((x * y) % size) as f64 / size as f64;
                    Complex64::from_polar(scale, theta)
                })
                .collect()
        })
        .collect()
}

pub fn cmat_approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b.iter()).all(|(ra, rb)| {
            ra.len() == rb.len()
                && ra.iter().zip(rb.iter()).all(|(x, y)| (x - y).norm() <= tol)
        })
}

pub fn cvec_approx_eq(a: &CVec, b: &CVec, tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| (x - y).norm() <= tol)
}

// ---------------------------------------------------------------------------
// Reference class collapsing
// ---------------------------------------------------------------------------

/// Leftmost-first class collapse by quadratic scan: returns the distinct
/// items in first-occurrence order and, for each input position, the
/// 1-based index of its class.
pub fn ref_collapse<T: Eq + Clone>(items: &[T]) -> (Vec<T>, Vec<usize>) {
    let mut projected: Vec<T> = Vec::new();
    let mut renumbered = Vec::with_capacity(items.len());
    for it in items {
        match projected.iter().position(|p| p == it) {
            Some(i) => renumbered.push(i + 1),
            None => {
                projected.push(it.clone());
                renumbered.push(projected.len());
            }
        }
    }
    (projected, renumbered)
}

// ---------------------------------------------------------------------------
// Ripple-carry addition oracle
// ---------------------------------------------------------------------------

/// Whether `z == (x + y) mod 2^m`.
pub fn add_ok(m: usize, x: u64, y: u64, z: u64) -> bool {
    let mask = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    (x.wrapping_add(y)) & mask == z & mask
}

/// Assignment for the addition relation over `m`-bit words: variables are
/// quadruples (x_i, y_i, z_i, dummy_i) with bit position 0 (least
/// significant) first.
pub fn add_assignment(m: usize, x: u64, y: u64, z: u64, dummies: u64) -> Vec<bool> {
    let mut out = Vec::with_capacity(4 * m);
    for i in 0..m {
        out.push((x >> i) & 1 == 1);
        out.push((y >> i) & 1 == 1);
        out.push((z >> i) & 1 == 1);
        out.push((dummies >> i) & 1 == 1);
    }
    out
}

// ---------------------------------------------------------------------------
// GF(2) brute force
// ---------------------------------------------------------------------------

/// All `x` in `[0, 2^n)` satisfying `eq . x = 0` (parity) for every
/// equation.
pub fn gf2_solutions_brute(n: u32, eqs: &[u64]) -> Vec<u64> {
    assert!(n <= 20);
    (0..1u64 << n)
        .filter(|x| eqs.iter().all(|e| (e & x).count_ones() % 2 == 0))
        .collect()
}

// ---------------------------------------------------------------------------
// Frozen expected values
// ---------------------------------------------------------------------------

/// Class-collapse worked example.
pub const COLLAPSE_EXAMPLE_INPUT: [usize; 7] = [2, 2, 1, 1, 4, 1, 1];
pub const COLLAPSE_EXAMPLE_PROJECTED: [usize; 3] = [2, 1, 4];
pub const COLLAPSE_EXAMPLE_RENUMBERED: [usize; 7] = [1, 1, 2, 2, 3, 2, 2];

/// Size of the 2-variable equality relation (one level-1 grouping over a
/// fork, sharing structure): 2 groupings, 8 vertices, 11 edges.
pub const EQ2_GROUPINGS: u64 = 2;
pub const EQ2_VERTICES: u64 = 8;
pub const EQ2_EDGES: u64 = 11;

/// Path counts for (w AND x) OR (y AND z), exits in first-visit order
/// [false, true]; the top-level A-connection (the AND pattern, shared with
/// the first B-connection) counts [3, 1]; the second B-connection (no
/// distinction) counts [4]; level-0 counts are fork [1, 1] and don't-care
/// [2].
pub const PATHS_EXAMPLE_TOP: [u64; 2] = [9, 7];
pub const PATHS_EXAMPLE_AND: [u64; 2] = [3, 1];
pub const PATHS_EXAMPLE_NODIST: [u64; 1] = [4];
pub const PATHS_EXAMPLE_FORK: [u64; 2] = [1, 1];
pub const PATHS_EXAMPLE_DONTCARE: [u64; 1] = [2];

/// Sampling the true exit of the same function descends through one of two
/// (middle, B-exit) choices with exact probabilities 3/7 and 4/7.
pub const SAMPLING_EXAMPLE_WEIGHTS: [u64; 2] = [3, 4];
pub const SAMPLING_EXAMPLE_TOTAL: u64 = 7;

/// The parity function of 2^15 variables occupies exactly 16 groupings
/// (fork plus one internal grouping per level 1..=15).
pub const XOR_LEVEL15_GROUPINGS: u64 = 16;

/// Broadcasting the vector [2, 3, 5, 0] into a matrix puts the vector in
/// column 0 and zero elsewhere.
pub const V2M_EXAMPLE_VECTOR: [i64; 4] = [2, 3, 5, 0];

/// Grover at n = 4: floor(pi/4 * 2^(n/2)) = 3 iterations; the success
/// probability is sin^2((2k+1) asin(2^(-n/2))) which exceeds 0.96.
pub const GROVER_N4_ITERATIONS: u32 = 3;

pub fn grover_expected_success(n: u32, k: u32) -> f64 {
    let theta = (1.0 / (1u64 << n) as f64).sqrt().asin();
    ((2 * k + 1) as f64 * theta).sin().powi(2)
}
