//! Quantum-circuit simulation: exact amplitude arithmetic, the standard
//! small-circuit algorithms (GHZ, Bernstein-Vazirani, Deutsch-Jozsa, Simon,
//! Grover, QFT), and the GF(2) linear algebra Simon's algorithm needs.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::apply::{apply_numeric, scalar_multiply, NumOp};
use crate::distribution::sample_assignment;
use crate::kernel::{
    num_vars, CflobddError, CflobddId, DecisionTree, Level, Manager, TerminalValue,
};
use crate::linalg::{
    cnot_grouping, cnot_interleaved_grouping, controlled_phase, hadamard_grouping,
    identity_amp, identity_grouping, kronecker_v1, kronecker_v2_interleaved, matrix_mult,
    swap_grouping, vector_to_matrix,
};

/// Grid resolution for the approximate amplitude form: values are integer
/// multiples of `2^-GRID_BITS`.
pub const GRID_BITS: u32 = 40;

/// A complex amplitude in one of three closed forms:
///
/// * dyadic: `(a + b i) * 2^(-h/2)` with integer `a`, `b`;
/// * scaled root of unity: `(a + b i) * 2^(-h/2) * e^(2 pi i val/size)` with
///   `size` a power of two;
/// * grid: complex numbers at resolution `2^-40`.
///
/// Every value is kept in a canonical form, so structural equality is
/// semantic equality: dyadics with `h >= 2` never have both parts even;
/// roots of unity keep `size >= 16` (a power of two), `val` odd, and
/// `0 < val < size/8`. Phases that are multiples of pi/4 live inside the
/// dyadic ring already (`e^(i pi/4) = (1 + i)/sqrt(2)`), so they are
/// folded into the dyadic scale.
/// Addition is partial: sums that leave the closed form (such as mixing
/// incompatible phases) report an error instead of silently approximating.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactAmplitude(Repr);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
enum Repr {
    Dyadic {
        a: BigInt,
        b: BigInt,
        h: u32,
    },
    RootOfUnity {
        a: BigInt,
        b: BigInt,
        h: u32,
        val: u64,
        size: u64,
    },
    Float {
        re: i64,
        im: i64,
    },
}

fn normalize_dyadic(mut a: BigInt, mut b: BigInt, mut h: u32) -> Repr {
    if a.is_zero() && b.is_zero() {
        return Repr::Dyadic {
            a,
            b,
            h: 0,
        };
    }
    let two = BigInt::from(2);
    while h >= 2 {
        let (qa, ra) = (&a / &two, &a % &two);
        let (qb, rb) = (&b / &two, &b % &two);
        if ra.is_zero() && rb.is_zero() {
            a = qa;
            b = qb;
            h -= 2;
        } else {
            break;
        }
    }
    Repr::Dyadic { a, b, h }
}

fn normalize_rou(a: BigInt, b: BigInt, h: u32, mut val: u64, mut size: u64) -> Repr {
    assert!(size.is_power_of_two(), "phase denominator must be a power of two");
    val %= size;
    if a.is_zero() && b.is_zero() {
        return normalize_dyadic(a, b, 0);
    }
    while val % 2 == 0 && size > 1 {
        if val == 0 {
            size = 1;
            break;
        }
        val /= 2;
        size /= 2;
    }
    match size {
        1 => normalize_dyadic(a, b, h),
        2 => normalize_dyadic(-a, -b, h),
        4 => {
            // e^(i pi/2) = i multiplies (a + b i) into (-b + a i).
            if val == 1 {
                normalize_dyadic(-b, a, h)
            } else {
                normalize_dyadic(b, -a, h)
            }
        }
        8 => {
            // e^(i pi/4) = (1 + i)/sqrt(2) multiplies (a + b i) into
            // ((a - b) + (a + b) i)/sqrt(2), staying inside the ring.
            let (mut a, mut b, mut h) = (a, b, h);
            for _ in 0..val {
                let (re, im) = (&a - &b, &a + &b);
                a = re;
                b = im;
                h += 1;
            }
            normalize_dyadic(a, b, h)
        }
        _ => {
            // Phases coarser than 2 pi/16 live inside the dyadic ring, so
            // peel whole multiples of e^(i pi/4) off the exponent until
            // 0 < val < size/8. val stays odd because size/8 is even.
            let eighths = val / (size / 8);
            val %= size / 8;
            let (mut a, mut b, mut h) = (a, b, h);
            for _ in 0..eighths {
                let (re, im) = (&a - &b, &a + &b);
                a = re;
                b = im;
                h += 1;
            }
            let Repr::Dyadic { a, b, h } = normalize_dyadic(a, b, h) else {
                unreachable!()
            };
            Repr::RootOfUnity { a, b, h, val, size }
        }
    }
}

fn grid_round(x: f64) -> i64 {
    (x * (1u64 << GRID_BITS) as f64).round() as i64
}

/// Multiply two grid coordinates, rescaling back to the grid with rounding
/// half away from zero.
fn grid_mul(x: i64, y: i64) -> i64 {
    let p = x as i128 * y as i128;
    let half = 1i128 << (GRID_BITS - 1);
    let adj = if p >= 0 { half } else { -half };
    ((p + adj) >> GRID_BITS) as i64
}

impl ExactAmplitude {
    pub fn zero() -> Self {
        ExactAmplitude(normalize_dyadic(BigInt::zero(), BigInt::zero(), 0))
    }

    pub fn one() -> Self {
        ExactAmplitude(normalize_dyadic(BigInt::from(1), BigInt::zero(), 0))
    }

    /// `(a + b i) * 2^(-h/2)`.
    pub fn dyadic(a: i64, b: i64, h: u32) -> Self {
        ExactAmplitude(normalize_dyadic(BigInt::from(a), BigInt::from(b), h))
    }

    pub fn dyadic_big(a: BigInt, b: BigInt, h: u32) -> Self {
        ExactAmplitude(normalize_dyadic(a, b, h))
    }

    /// `e^(2 pi i val/size)`; `size` must be a power of two.
    pub fn root_of_unity(val: u64, size: u64) -> Self {
        ExactAmplitude(normalize_rou(BigInt::from(1), BigInt::zero(), 0, val, size))
    }

    /// `(a + b i) * 2^(-h/2) * e^(2 pi i val/size)`.
    pub fn scaled_root_of_unity(a: i64, b: i64, h: u32, val: u64, size: u64) -> Self {
        ExactAmplitude(normalize_rou(BigInt::from(a), BigInt::from(b), h, val, size))
    }

    /// Nearest grid amplitude to `re + im i`.
    pub fn grid(re: f64, im: f64) -> Self {
        ExactAmplitude(Repr::Float {
            re: grid_round(re),
            im: grid_round(im),
        })
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Dyadic { a, b, .. } => a.is_zero() && b.is_zero(),
            Repr::RootOfUnity { .. } => false,
            Repr::Float { re, im } => *re == 0 && *im == 0,
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self.0, Repr::Float { .. })
    }

    pub fn neg(&self) -> Self {
        match &self.0 {
            Repr::Dyadic { a, b, h } => ExactAmplitude(normalize_dyadic(-a, -b, *h)),
            Repr::RootOfUnity { a, b, h, val, size } => {
                ExactAmplitude(normalize_rou(-a, -b, *h, *val, *size))
            }
            Repr::Float { re, im } => ExactAmplitude(Repr::Float { re: -re, im: -im }),
        }
    }

    /// Add within the closed forms. Errors when the sum cannot be
    /// represented exactly: dyadics whose `sqrt(2)` exponents differ in
    /// parity, roots of unity with different phases, or a mix of exact and
    /// grid amplitudes.
    pub fn add(&self, other: &Self) -> Result<Self, String> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        match (&self.0, &other.0) {
            (
                Repr::Dyadic { a, b, h },
                Repr::Dyadic {
                    a: a2,
                    b: b2,
                    h: h2,
                },
            ) => {
                if h % 2 != h2 % 2 {
                    return Err(format!(
                        "cannot add dyadic amplitudes with sqrt(2) exponents {} and {}: \
                         the sum leaves the dyadic form",
                        h, h2
                    ));
                }
                let hm = (*h).max(*h2);
                let s1 = BigInt::from(1) << ((hm - h) / 2);
                let s2 = BigInt::from(1) << ((hm - h2) / 2);
                Ok(ExactAmplitude(normalize_dyadic(
                    a * &s1 + a2 * &s2,
                    b * &s1 + b2 * &s2,
                    hm,
                )))
            }
            (
                Repr::RootOfUnity { a, b, h, val, size },
                Repr::RootOfUnity {
                    a: a2,
                    b: b2,
                    h: h2,
                    val: v2,
                    size: s2,
                },
            ) => {
                if val != v2 || size != s2 {
                    return Err(format!(
                        "cannot add root-of-unity amplitudes with phases {}/{} and {}/{}",
                        val, size, v2, s2
                    ));
                }
                if h % 2 != h2 % 2 {
                    return Err(format!(
                        "cannot add root-of-unity scales with sqrt(2) exponents {} and {}",
                        h, h2
                    ));
                }
                let hm = (*h).max(*h2);
                let f1 = BigInt::from(1) << ((hm - h) / 2);
                let f2 = BigInt::from(1) << ((hm - h2) / 2);
                Ok(ExactAmplitude(normalize_rou(
                    a * &f1 + a2 * &f2,
                    b * &f1 + b2 * &f2,
                    hm,
                    *val,
                    *size,
                )))
            }
            (Repr::Float { re, im }, Repr::Float { re: re2, im: im2 }) => {
                let re = re.checked_add(*re2).ok_or("grid amplitude overflow")?;
                let im = im.checked_add(*im2).ok_or("grid amplitude overflow")?;
                Ok(ExactAmplitude(Repr::Float { re, im }))
            }
            (Repr::Float { .. }, _) | (_, Repr::Float { .. }) => {
                Err("cannot add a grid amplitude to an exact amplitude".into())
            }
            _ => Err("cannot add a dyadic amplitude to a root-of-unity amplitude".into()),
        }
    }

    /// Multiply. Total within each form; a grid amplitude times an exact
    /// amplitude rounds the exact factor to the grid first.
    pub fn mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (
                Repr::Dyadic { a, b, h },
                Repr::Dyadic {
                    a: a2,
                    b: b2,
                    h: h2,
                },
            ) => ExactAmplitude(normalize_dyadic(
                a * a2 - b * b2,
                a * b2 + b * a2,
                h + h2,
            )),
            (
                Repr::Dyadic { a, b, h },
                Repr::RootOfUnity {
                    a: a2,
                    b: b2,
                    h: h2,
                    val,
                    size,
                },
            )
            | (
                Repr::RootOfUnity {
                    a: a2,
                    b: b2,
                    h: h2,
                    val,
                    size,
                },
                Repr::Dyadic { a, b, h },
            ) => ExactAmplitude(normalize_rou(
                a * a2 - b * b2,
                a * b2 + b * a2,
                h + h2,
                *val,
                *size,
            )),
            (
                Repr::RootOfUnity { a, b, h, val, size },
                Repr::RootOfUnity {
                    a: a2,
                    b: b2,
                    h: h2,
                    val: v2,
                    size: s2,
                },
            ) => {
                let common = (*size).max(*s2);
                let v = (val * (common / size) + v2 * (common / s2)) % common;
                ExactAmplitude(normalize_rou(
                    a * a2 - b * b2,
                    a * b2 + b * a2,
                    h + h2,
                    v,
                    common,
                ))
            }
            (Repr::Float { re, im }, Repr::Float { re: re2, im: im2 }) => {
                ExactAmplitude(Repr::Float {
                    re: grid_mul(*re, *re2) - grid_mul(*im, *im2),
                    im: grid_mul(*re, *im2) + grid_mul(*im, *re2),
                })
            }
            (Repr::Float { .. }, _) => {
                let (re, im) = other.to_complex_f64();
                self.mul(&ExactAmplitude::grid(re, im))
            }
            (_, Repr::Float { .. }) => {
                let (re, im) = self.to_complex_f64();
                ExactAmplitude::grid(re, im).mul(other)
            }
        }
    }

    /// Multiply by a natural number.
    pub fn mul_nat(&self, n: &BigUint) -> Self {
        let n = BigInt::from(n.clone());
        match &self.0 {
            Repr::Dyadic { a, b, h } => ExactAmplitude(normalize_dyadic(a * &n, b * &n, *h)),
            Repr::RootOfUnity { a, b, h, val, size } => {
                ExactAmplitude(normalize_rou(a * &n, b * &n, *h, *val, *size))
            }
            Repr::Float { re, im } => {
                let n = n.to_i128().expect("grid scaling factor out of range");
                let re = (*re as i128 * n) as i64;
                let im = (*im as i128 * n) as i64;
                ExactAmplitude(Repr::Float { re, im })
            }
        }
    }

    /// Exact squared modulus as `numerator / 2^pow2`. Grid amplitudes are
    /// exact rationals too, at denominator `2^(2 * GRID_BITS)`.
    pub fn squared_modulus(&self) -> (BigUint, u32) {
        match &self.0 {
            Repr::Dyadic { a, b, h } | Repr::RootOfUnity { a, b, h, .. } => {
                ((a * a + b * b).magnitude().clone(), *h)
            }
            Repr::Float { re, im } => {
                let re = BigInt::from(*re);
                let im = BigInt::from(*im);
                ((&re * &re + &im * &im).magnitude().clone(), 2 * GRID_BITS)
            }
        }
    }

    /// Approximate complex value.
    pub fn to_complex_f64(&self) -> (f64, f64) {
        match &self.0 {
            Repr::Dyadic { a, b, h } => {
                let s = 0.5f64.powf(*h as f64 / 2.0);
                (
                    a.to_f64().unwrap_or(f64::NAN) * s,
                    b.to_f64().unwrap_or(f64::NAN) * s,
                )
            }
            Repr::RootOfUnity { a, b, h, val, size } => {
                let s = 0.5f64.powf(*h as f64 / 2.0);
                let (sr, si) = (
                    a.to_f64().unwrap_or(f64::NAN) * s,
                    b.to_f64().unwrap_or(f64::NAN) * s,
                );
                let theta = 2.0 * std::f64::consts::PI * (*val as f64) / (*size as f64);
                let (cos, sin) = (theta.cos(), theta.sin());
                (sr * cos - si * sin, sr * sin + si * cos)
            }
            Repr::Float { re, im } => {
                let s = 1.0 / (1u64 << GRID_BITS) as f64;
                (*re as f64 * s, *im as f64 * s)
            }
        }
    }

    pub fn serialize_text(&self) -> String {
        match &self.0 {
            Repr::Dyadic { a, b, h } => format!("dy({},{},{})", a, b, h),
            Repr::RootOfUnity { a, b, h, val, size } => {
                format!("rou({},{},{},{},{})", val, size, a, b, h)
            }
            Repr::Float { re, im } => format!("fl({},{})", re, im),
        }
    }

    pub fn parse_text(s: &str) -> Result<Self, String> {
        let (kind, rest) = s.split_once('(').ok_or_else(|| format!("bad amplitude {:?}", s))?;
        let inner = rest
            .strip_suffix(')')
            .ok_or_else(|| format!("bad amplitude {:?}", s))?;
        let parts: Vec<&str> = inner.split(',').map(|p| p.trim()).collect();
        let big = |p: &str| -> Result<BigInt, String> {
            p.parse::<BigInt>().map_err(|e| format!("bad integer {:?}: {}", p, e))
        };
        match (kind, parts.as_slice()) {
            ("dy", [a, b, h]) => Ok(ExactAmplitude(normalize_dyadic(
                big(a)?,
                big(b)?,
                h.parse().map_err(|e| format!("bad exponent: {}", e))?,
            ))),
            ("rou", [val, size, a, b, h]) => {
                let size: u64 = size.parse().map_err(|e| format!("bad phase size: {}", e))?;
                if !size.is_power_of_two() {
                    return Err(format!("phase denominator {} is not a power of two", size));
                }
                Ok(ExactAmplitude(normalize_rou(
                    big(a)?,
                    big(b)?,
                    h.parse().map_err(|e| format!("bad exponent: {}", e))?,
                    val.parse().map_err(|e| format!("bad phase: {}", e))?,
                    size,
                )))
            }
            ("fl", [re, im]) => Ok(ExactAmplitude(Repr::Float {
                re: re.parse().map_err(|e| format!("bad grid value: {}", e))?,
                im: im.parse().map_err(|e| format!("bad grid value: {}", e))?,
            })),
            _ => Err(format!("bad amplitude {:?}", s)),
        }
    }
}

impl fmt::Display for ExactAmplitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Dyadic { a, b, h } => {
                if *h == 0 && b.is_zero() {
                    return write!(f, "{}", a);
                }
                write!(f, "{}", self.serialize_text())
            }
            _ => write!(f, "{}", self.serialize_text()),
        }
    }
}

/// Parity of the GF(2) inner product of two bit vectors.
pub fn gf2_dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Incremental GF(2) linear system over `n`-bit vectors, kept in reduced
/// row-echelon form.
pub struct Gf2System {
    n: u32,
    /// Rows paired with their pivot bit positions; each pivot appears in
    /// exactly one row.
    rows: Vec<(u32, u64)>,
}

impl Gf2System {
    pub fn new(n: u32) -> Self {
        assert!(n <= 64);
        Gf2System { n, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert the homogeneous equation `row . x = 0`. Returns whether the
    /// equation was independent of those already present.
    pub fn add_equation(&mut self, mut row: u64) -> bool {
        for &(p, r) in &self.rows {
            if row >> p & 1 == 1 {
                row ^= r;
            }
        }
        if row == 0 {
            return false;
        }
        let pivot = 63 - row.leading_zeros();
        for (_, r) in self.rows.iter_mut() {
            if *r >> pivot & 1 == 1 {
                *r ^= row;
            }
        }
        self.rows.push((pivot, row));
        true
    }

    /// Basis of the solution space `{ x : row . x = 0 for all rows }`.
    pub fn null_space(&self) -> Vec<u64> {
        let mut is_pivot = vec![false; self.n as usize];
        for &(p, _) in &self.rows {
            is_pivot[p as usize] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.n {
            if is_pivot[free as usize] {
                continue;
            }
            let mut x = 1u64 << free;
            for &(p, r) in &self.rows {
                if r >> free & 1 == 1 {
                    x |= 1u64 << p;
                }
            }
            basis.push(x);
        }
        basis
    }
}

#[derive(Clone, Debug)]
pub struct StepTrace {
    pub label: String,
    pub size: crate::kernel::SizeReport,
}

// ---------------------------------------------------------------------------
// States, gates, and measurement.
// ---------------------------------------------------------------------------

/// Initial value of one qubit in a product state.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QubitInit {
    /// `|0>`.
    Zero,
    /// `|1>`.
    One,
    /// `(|0> + |1>) / sqrt(2)`: the qubit after a Hadamard, with the
    /// normalization folded into the amplitudes.
    PlusScaled,
}

/// Result of running a quantum pipeline: the final state in matrix
/// (first-column) form, the wire counts, and the per-step size trace.
#[derive(Clone, Debug)]
pub struct QuantumRun {
    pub state: CflobddId,
    /// Wires carrying the algorithm's answer (the register that gets
    /// measured), always the lowest-numbered qubits.
    pub data_qubits: usize,
    /// All wires including ancillas and the padding that rounds the count
    /// up to a power of two.
    pub total_qubits: usize,
    pub steps: Vec<StepTrace>,
}

fn amp(a: ExactAmplitude) -> TerminalValue {
    TerminalValue::Amp(a)
}

fn push_trace(mgr: &Manager, steps: &mut Vec<StepTrace>, label: String, c: CflobddId) {
    steps.push(StepTrace {
        label,
        size: mgr.size_report(c),
    });
}

/// Tensor product of single-qubit states; the slice length must be a power
/// of two (qubit 0 is the most significant). Returns a vector-form state
/// over `inits.len()` variables.
pub fn product_state(
    mgr: &mut Manager,
    inits: &[QubitInit],
) -> Result<CflobddId, CflobddError> {
    if inits.is_empty() || !inits.len().is_power_of_two() {
        return Err(CflobddError::Range(format!(
            "a product state needs a power-of-two number of qubits, got {}",
            inits.len()
        )));
    }
    let one = amp(ExactAmplitude::one());
    let zero = amp(ExactAmplitude::zero());
    let half = amp(ExactAmplitude::dyadic(1, 0, 1));
    let mut layer: Vec<CflobddId> = Vec::with_capacity(inits.len());
    for init in inits {
        let c = match init {
            QubitInit::Zero => {
                let g = mgr.fork();
                mgr.representative_cflobdd(g, vec![one.clone(), zero.clone()])?
            }
            QubitInit::One => {
                let g = mgr.fork();
                mgr.representative_cflobdd(g, vec![zero.clone(), one.clone()])?
            }
            QubitInit::PlusScaled => {
                let g = mgr.dont_care();
                mgr.representative_cflobdd(g, vec![half.clone()])?
            }
        };
        layer.push(c);
    }
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len() / 2);
        for pair in layer.chunks(2) {
            next.push(kronecker_v1(mgr, pair[0], pair[1])?);
        }
        layer = next;
    }
    Ok(layer[0])
}

/// Draw one measurement of the first `first` qubits of a matrix-form state,
/// most significant qubit first.
pub fn measure_bits(
    mgr: &mut Manager,
    state: CflobddId,
    first: usize,
) -> Result<Vec<bool>, CflobddError> {
    let assignment = sample_assignment(mgr, state)?;
    Ok((0..first).map(|q| assignment[2 * q]).collect())
}

/// As [`measure_bits`], packed into an integer (so `first` is capped at 64
/// bits).
pub fn measure(mgr: &mut Manager, state: CflobddId, first: usize) -> Result<u64, CflobddError> {
    if first > 64 {
        return Err(CflobddError::Range(format!(
            "measure packs at most 64 bits, got {}; use measure_bits",
            first
        )));
    }
    let bits = measure_bits(mgr, state, first)?;
    Ok(bits.iter().fold(0u64, |acc, &b| acc << 1 | b as u64))
}

fn qubits_at(level: Level) -> usize {
    1usize << (level - 1)
}

/// The Hadamard transform on all `2^(level-1)` qubits, including the
/// `2^(-q/2)` normalization.
fn hadamard_amp(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let q = qubits_at(level) as u32;
    let g = hadamard_grouping(mgr, level)?;
    mgr.representative_cflobdd(
        g,
        vec![
            amp(ExactAmplitude::dyadic(1, 0, q)),
            amp(ExactAmplitude::dyadic(-1, 0, q)),
        ],
    )
}

/// Hadamard on the first `k` qubits, identity on the rest.
fn h_prefix(mgr: &mut Manager, level: Level, k: usize) -> Result<CflobddId, CflobddError> {
    let q = qubits_at(level);
    debug_assert!(k <= q);
    if k == 0 {
        return identity_amp(mgr, level);
    }
    if k == q {
        return hadamard_amp(mgr, level);
    }
    let half = q / 2;
    let left = h_prefix(mgr, level - 1, k.min(half))?;
    let right = h_prefix(mgr, level - 1, k.saturating_sub(half))?;
    kronecker_v1(mgr, left, right)
}

/// Place a single-qubit gate (a level-1 matrix) on qubit `pos`, identity
/// elsewhere.
fn gate_on_qubit(
    mgr: &mut Manager,
    level: Level,
    pos: usize,
    gate: CflobddId,
) -> Result<CflobddId, CflobddError> {
    if level == 1 {
        debug_assert_eq!(pos, 0);
        return Ok(gate);
    }
    let half = qubits_at(level - 1);
    if pos < half {
        let left = gate_on_qubit(mgr, level - 1, pos, gate)?;
        let right = identity_amp(mgr, level - 1)?;
        kronecker_v1(mgr, left, right)
    } else {
        let left = identity_amp(mgr, level - 1)?;
        let right = gate_on_qubit(mgr, level - 1, pos - half, gate)?;
        kronecker_v1(mgr, left, right)
    }
}

/// The 2x2 NOT gate with amplitude entries.
fn x_gate(mgr: &mut Manager) -> Result<CflobddId, CflobddError> {
    let g = identity_grouping(mgr, 1)?;
    mgr.representative_cflobdd(
        g,
        vec![amp(ExactAmplitude::zero()), amp(ExactAmplitude::one())],
    )
}

fn cnot_amp(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<CflobddId, CflobddError> {
    let g = cnot_grouping(mgr, level, i, j)?;
    mgr.representative_cflobdd(
        g,
        vec![amp(ExactAmplitude::one()), amp(ExactAmplitude::zero())],
    )
}

fn cnot_interleaved_amp(mgr: &mut Manager, level: Level) -> Result<CflobddId, CflobddError> {
    let g = cnot_interleaved_grouping(mgr, level)?;
    mgr.representative_cflobdd(
        g,
        vec![amp(ExactAmplitude::one()), amp(ExactAmplitude::zero())],
    )
}

fn swap_amp(
    mgr: &mut Manager,
    level: Level,
    i: usize,
    j: usize,
) -> Result<CflobddId, CflobddError> {
    let g = swap_grouping(mgr, level, i, j)?;
    mgr.representative_cflobdd(
        g,
        vec![amp(ExactAmplitude::one()), amp(ExactAmplitude::zero())],
    )
}

/// Wires needed for `n` data qubits plus `extra` ancillas, rounded up to a
/// power of two, together with the matrix level that holds them.
fn padded_wires(n: usize, extra: usize) -> (usize, Level) {
    let wires = (n + extra).next_power_of_two();
    (wires, wires.trailing_zeros() + 1)
}

// ---------------------------------------------------------------------------
// GHZ.
// ---------------------------------------------------------------------------

/// Prepare the (n+1)-qubit GHZ pipeline: Hadamards and an X on the ancilla,
/// a CNOT from every data qubit into the ancilla, then a final Hadamard
/// layer. Measuring the first `n` qubits of the result yields all zeros or
/// all ones, each with probability 1/2.
pub fn ghz(mgr: &mut Manager, n: usize) -> Result<QuantumRun, CflobddError> {
    if n == 0 {
        return Err(CflobddError::Range("ghz needs at least one qubit".into()));
    }
    let (wires, level) = padded_wires(n, 1);
    let mut steps = Vec::new();
    let mut inits = vec![QubitInit::PlusScaled; n];
    inits.push(QubitInit::One);
    inits.resize(wires, QubitInit::Zero);
    let v = product_state(mgr, &inits)?;
    let mut state = vector_to_matrix(mgr, v)?;
    push_trace(mgr, &mut steps, "initial".into(), state);
    for i in 0..n {
        let gate = cnot_amp(mgr, level, i, n)?;
        state = matrix_mult(mgr, gate, state)?;
        push_trace(mgr, &mut steps, format!("cnot {} {}", i, n), state);
    }
    let h = h_prefix(mgr, level, n + 1)?;
    state = matrix_mult(mgr, h, state)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);
    Ok(QuantumRun {
        state,
        data_qubits: n,
        total_qubits: wires,
        steps,
    })
}

// ---------------------------------------------------------------------------
// Bernstein-Vazirani.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct BvRun {
    pub run: QuantumRun,
    pub secret: u64,
    pub recovered: u64,
}

/// Recover the secret of the dot-product oracle `f(x) = s . x`. The oracle
/// is the product of a CNOT into the ancilla for every set bit of `s`; the
/// pipeline is a Hadamard layer, the oracle, and another Hadamard layer on
/// a zero-initialized register. Measuring the data qubits yields `0^n` or
/// `s` with equal probability, so the secret is read off by re-measuring
/// the final state until a nonzero string appears (`s = 0` measures zero
/// forever, and is reported after a fixed number of draws).
pub fn bv(mgr: &mut Manager, n: usize, s: u64) -> Result<BvRun, CflobddError> {
    if n == 0 || n > 63 {
        return Err(CflobddError::Range(format!(
            "bv supports 1..=63 data qubits, got {}",
            n
        )));
    }
    if s >> n != 0 {
        return Err(CflobddError::Range(format!(
            "secret {:#x} does not fit in {} bits",
            s, n
        )));
    }
    let (wires, level) = padded_wires(n, 1);
    let mut steps = Vec::new();
    // H (x) I applied to the zero state, built directly.
    let mut inits = vec![QubitInit::PlusScaled; n];
    inits.resize(wires, QubitInit::Zero);
    let v = product_state(mgr, &inits)?;
    let mut state = vector_to_matrix(mgr, v)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);
    for i in 0..n {
        if s >> (n - 1 - i) & 1 == 1 {
            let gate = cnot_amp(mgr, level, i, n)?;
            state = matrix_mult(mgr, gate, state)?;
        }
    }
    push_trace(mgr, &mut steps, "oracle".into(), state);
    let h = h_prefix(mgr, level, n)?;
    state = matrix_mult(mgr, h, state)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);
    let mut recovered = 0;
    for _ in 0..64 {
        recovered = measure(mgr, state, n)?;
        if recovered != 0 {
            break;
        }
    }
    Ok(BvRun {
        run: QuantumRun {
            state,
            data_qubits: n,
            total_qubits: wires,
            steps,
        },
        secret: s,
        recovered,
    })
}

// ---------------------------------------------------------------------------
// Deutsch-Jozsa.
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DjOracle {
    /// `f(x) = 0`: the identity on all wires.
    Constant0,
    /// `f(x) = 1`: an X on the ancilla.
    Constant1,
    /// `f(x) = x_0`: a CNOT from the first data qubit into the ancilla.
    BalancedFirstBit,
}

impl DjOracle {
    pub fn name(self) -> &'static str {
        match self {
            DjOracle::Constant0 => "constant0",
            DjOracle::Constant1 => "constant1",
            DjOracle::BalancedFirstBit => "balanced-first-bit",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DjVerdict {
    Constant,
    Balanced,
}

#[derive(Clone, Debug)]
pub struct DjRun {
    pub run: QuantumRun,
    pub oracle: DjOracle,
    pub verdict: DjVerdict,
}

/// Classify an oracle as constant or balanced: prepare `|0^n 1>`, apply a
/// Hadamard layer on all n+1 wires, the oracle, and a Hadamard layer on the
/// data qubits; the data register then measures to `0^n` exactly when the
/// oracle is constant. The verdict is decided from the exact probability of
/// the all-zero outcome rather than from samples.
pub fn dj(mgr: &mut Manager, n: usize, oracle: DjOracle) -> Result<DjRun, CflobddError> {
    if n == 0 {
        return Err(CflobddError::Range("dj needs at least one qubit".into()));
    }
    let (wires, level) = padded_wires(n, 1);
    let mut steps = Vec::new();
    let mut inits = vec![QubitInit::Zero; n];
    inits.push(QubitInit::One);
    inits.resize(wires, QubitInit::Zero);
    let v = product_state(mgr, &inits)?;
    let mut state = vector_to_matrix(mgr, v)?;
    push_trace(mgr, &mut steps, "initial".into(), state);
    let h_all = h_prefix(mgr, level, n + 1)?;
    state = matrix_mult(mgr, h_all, state)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);
    match oracle {
        DjOracle::Constant0 => {}
        DjOracle::Constant1 => {
            let x = x_gate(mgr)?;
            let gate = gate_on_qubit(mgr, level, n, x)?;
            state = matrix_mult(mgr, gate, state)?;
        }
        DjOracle::BalancedFirstBit => {
            let gate = cnot_amp(mgr, level, 0, n)?;
            state = matrix_mult(mgr, gate, state)?;
        }
    }
    push_trace(mgr, &mut steps, "oracle".into(), state);
    let h_data = h_prefix(mgr, level, n)?;
    state = matrix_mult(mgr, h_data, state)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);

    // P(data register = 0^n) is |amp(0^n, 0, pads)|^2 + |amp(0^n, 1, pads)|^2,
    // read from the first column. For these oracles it is exactly 1 or 0.
    let nv = num_vars(mgr.cflobdd_level(state));
    let mut assignment = vec![false; nv];
    let w0 = mgr.interpret(state, &assignment)?.weight();
    assignment[2 * n] = true;
    let w1 = mgr.interpret(state, &assignment)?.weight();
    let h = w0.1.max(w1.1);
    let total = (&w0.0 << (h - w0.1)) + (&w1.0 << (h - w1.1));
    let verdict = if total == BigUint::from(1u32) << h {
        DjVerdict::Constant
    } else if total.is_zero() {
        DjVerdict::Balanced
    } else {
        return Err(CflobddError::Value(format!(
            "oracle {} is neither constant nor balanced",
            oracle.name()
        )));
    };
    Ok(DjRun {
        run: QuantumRun {
            state,
            data_qubits: n,
            total_qubits: wires,
            steps,
        },
        oracle,
        verdict,
    })
}

// ---------------------------------------------------------------------------
// Simon.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct SimonRun {
    pub run: QuantumRun,
    pub secret: u64,
    pub recovered: u64,
    /// Measurements drawn before the constraint system reached full rank.
    pub samples_used: usize,
}

/// Recover the hidden shift of a 2-to-1 oracle `f` with `f(x) = f(x ^ s)`,
/// instantiated as `f(x) = min(x, x ^ s)` and folded into a matrix from its
/// function table. The pipeline interleaves the `x` and `y` registers
/// (`x_k` on qubit `2k`, `y_k` on qubit `2k + 1`) so the copy step is a
/// single Kronecker power of CNOT, and fuses the oracle into the final
/// Hadamard layer: `(H (x)i U)(CNOT)(H (x)i I) e_0`. Each measurement of
/// the `x` register yields a string orthogonal to `s` over GF(2); sampling
/// continues until `n - 1` independent constraints pin down `s`, with a
/// budget of `4n` draws.
pub fn simon(mgr: &mut Manager, n: usize, s: u64) -> Result<SimonRun, CflobddError> {
    if n == 0 || n > 8 {
        return Err(CflobddError::Range(format!(
            "simon's fold-built oracle supports 1..=8 data qubits, got {}",
            n
        )));
    }
    if s == 0 || s >> n != 0 {
        return Err(CflobddError::Range(format!(
            "the hidden shift must be a nonzero {}-bit string, got {:#x}",
            n, s
        )));
    }
    let xq = n.next_power_of_two();
    let pad_bits = xq - n;
    let sub_level = xq.trailing_zeros() + 1;
    let wires = 2 * xq;
    let level = sub_level + 1;
    let mut steps = Vec::new();

    let v = product_state(mgr, &vec![QubitInit::Zero; wires])?;
    let mut state = vector_to_matrix(mgr, v)?;
    push_trace(mgr, &mut steps, "initial".into(), state);

    let hx = h_prefix(mgr, sub_level, n)?;
    let idx = identity_amp(mgr, sub_level)?;
    let h_layer = kronecker_v2_interleaved(mgr, hx, idx)?;
    state = matrix_mult(mgr, h_layer, state)?;
    push_trace(mgr, &mut steps, "hadamard".into(), state);

    let copy = cnot_interleaved_amp(mgr, level)?;
    state = matrix_mult(mgr, copy, state)?;
    push_trace(mgr, &mut steps, "copy".into(), state);

    // Oracle on the y register, fused with the final Hadamard on x.
    let f = |x: u64| x.min(x ^ s);
    let one = amp(ExactAmplitude::one());
    let zero = amp(ExactAmplitude::zero());
    let mut leaves = Vec::with_capacity(1usize << (2 * xq));
    for p in 0..1u64 << (2 * xq) {
        let mut row = 0u64;
        let mut col = 0u64;
        for k in 0..xq {
            row = row << 1 | p >> (2 * xq - 1 - 2 * k) & 1;
            col = col << 1 | p >> (2 * xq - 2 - 2 * k) & 1;
        }
        let (x, pad) = (col >> pad_bits, col & ((1 << pad_bits) - 1));
        let image = f(x) << pad_bits | pad;
        leaves.push(if row == image { one.clone() } else { zero.clone() });
    }
    let oracle = mgr.fold(&DecisionTree {
        level: sub_level,
        leaves,
    })?;
    let fused = kronecker_v2_interleaved(mgr, hx, oracle)?;
    state = matrix_mult(mgr, fused, state)?;
    push_trace(mgr, &mut steps, "oracle+hadamard".into(), state);

    let mut sys = Gf2System::new(n as u32);
    let mut samples_used = 0;
    while sys.rank() < n - 1 && samples_used < 4 * n {
        let assignment = sample_assignment(mgr, state)?;
        let z = (0..n).fold(0u64, |acc, k| acc << 1 | assignment[4 * k] as u64);
        sys.add_equation(z);
        samples_used += 1;
    }
    if sys.rank() < n - 1 {
        return Err(CflobddError::Inconclusive(format!(
            "simon's constraint system reached rank {} of {} after {} samples",
            sys.rank(),
            n - 1,
            samples_used
        )));
    }
    let basis = sys.null_space();
    debug_assert_eq!(basis.len(), 1);
    Ok(SimonRun {
        run: QuantumRun {
            state,
            data_qubits: n,
            total_qubits: wires,
            steps,
        },
        secret: s,
        recovered: basis[0],
        samples_used,
    })
}

/// Basis of the null space of a GF(2) constraint system.
pub fn gf2_null_space(sys: &Gf2System) -> Vec<u64> {
    sys.null_space()
}

// ---------------------------------------------------------------------------
// Grover.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct GroverRun {
    pub run: QuantumRun,
    pub marked: u64,
    pub iterations: u64,
    pub measured: u64,
}

/// Amplify the marked index `w` in an unstructured search over `2^n`
/// entries. The oracle `2 Diag(e_w) - I` flips every phase except `w`'s;
/// the diffusion operator is the identity proto-grouping with value tuple
/// `[2/N - 1, 2/N]`; their product is raised to the `floor(pi/4 sqrt(N))`
/// power by repeated squaring and applied to the uniform state (built
/// directly as an all-equal vector). The qubit count must be a power of two
/// so the diffusion operator spans the whole register; the classic ceiling
/// prescription overshoots the amplitude peak at these sizes (at N = 16 it
/// gives 4 iterations with success 0.58 where 3 reach 0.96), so the floor
/// is used.
pub fn grover(mgr: &mut Manager, n: usize, w: u64) -> Result<GroverRun, CflobddError> {
    if n == 0 || !n.is_power_of_two() || n > 32 {
        return Err(CflobddError::Range(format!(
            "grover needs a power-of-two qubit count in 1..=32, got {}",
            n
        )));
    }
    if n < 64 && w >> n != 0 {
        return Err(CflobddError::Range(format!(
            "marked index {:#x} does not fit in {} bits",
            w, n
        )));
    }
    let level = n.trailing_zeros() + 1;
    let mut steps = Vec::new();

    let uniform = {
        let g = mgr.no_distinction(level - 1);
        mgr.representative_cflobdd(g, vec![amp(ExactAmplitude::dyadic(1, 0, n as u32))])?
    };
    let mut state = vector_to_matrix(mgr, uniform)?;
    push_trace(mgr, &mut steps, "initial".into(), state);

    // Oracle: 2 Diag(e_w) - I, the marked-index selector doubled minus the
    // identity.
    let selector = {
        let one = amp(ExactAmplitude::one());
        let zero = amp(ExactAmplitude::zero());
        let mut layer = Vec::with_capacity(n);
        for k in 0..n {
            let bit = w >> (n - 1 - k) & 1;
            let leaves = if bit == 0 {
                vec![one.clone(), zero.clone(), zero.clone(), zero.clone()]
            } else {
                vec![zero.clone(), zero.clone(), zero.clone(), one.clone()]
            };
            layer.push(mgr.fold(&DecisionTree { level: 1, leaves })?);
        }
        while layer.len() > 1 {
            let mut next = Vec::with_capacity(layer.len() / 2);
            for pair in layer.chunks(2) {
                next.push(kronecker_v1(mgr, pair[0], pair[1])?);
            }
            layer = next;
        }
        layer[0]
    };
    let doubled = scalar_multiply(mgr, selector, &amp(ExactAmplitude::dyadic(2, 0, 0)))?;
    let id = identity_amp(mgr, level)?;
    let oracle = apply_numeric(mgr, doubled, id, NumOp::Minus)?;
    push_trace(mgr, &mut steps, "oracle".into(), oracle);

    let diffusion = {
        let g = identity_grouping(mgr, level)?;
        let diag = BigInt::from(2) - (BigInt::one() << n);
        mgr.representative_cflobdd(
            g,
            vec![
                amp(ExactAmplitude::dyadic_big(diag, BigInt::zero(), 2 * n as u32)),
                amp(ExactAmplitude::dyadic(2, 0, 2 * n as u32)),
            ],
        )?
    };
    let iterate = matrix_mult(mgr, diffusion, oracle)?;
    push_trace(mgr, &mut steps, "iterate".into(), iterate);

    let iterations = (std::f64::consts::FRAC_PI_4 * 2f64.powf(n as f64 / 2.0)).floor() as u64;
    let mut power: Option<CflobddId> = None;
    let mut base = iterate;
    let mut e = iterations;
    while e > 0 {
        if e & 1 == 1 {
            power = Some(match power {
                None => base,
                Some(p) => {
                    let q = matrix_mult(mgr, base, p)?;
                    push_trace(mgr, &mut steps, "multiply".into(), q);
                    q
                }
            });
        }
        e >>= 1;
        if e > 0 {
            base = matrix_mult(mgr, base, base)?;
            push_trace(mgr, &mut steps, "square".into(), base);
        }
    }
    if let Some(p) = power {
        state = matrix_mult(mgr, p, state)?;
    }
    push_trace(mgr, &mut steps, "amplified".into(), state);

    let measured = measure(mgr, state, n)?;
    Ok(GroverRun {
        run: QuantumRun {
            state,
            data_qubits: n,
            total_qubits: n,
            steps,
        },
        marked: w,
        iterations,
        measured,
    })
}

// ---------------------------------------------------------------------------
// QFT.
// ---------------------------------------------------------------------------

/// Which amplitude representation a phase-bearing circuit runs in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AmpMode {
    /// Scaled roots of unity; equality of amplitudes is exact.
    Exact,
    /// Complex numbers on the `2^-40` grid; equality is up to the grid.
    Grid,
}

#[derive(Clone, Debug)]
pub struct QftRun {
    pub run: QuantumRun,
    pub input: u64,
}

/// Convert every terminal amplitude to the grid form, re-merging any values
/// that collide.
fn to_grid(mgr: &mut Manager, c: CflobddId) -> Result<CflobddId, CflobddError> {
    let values: Result<Vec<TerminalValue>, CflobddError> = mgr
        .values_of(c)
        .to_vec()
        .iter()
        .map(|v| match v {
            TerminalValue::Amp(a) => {
                let (re, im) = a.to_complex_f64();
                Ok(amp(ExactAmplitude::grid(re, im)))
            }
            other => Err(CflobddError::Value(format!(
                "grid mode needs amplitude terminals, got {}",
                other
            ))),
        })
        .collect();
    let (values, renumbered) = crate::apply::collapse_classes_leftmost(&values?);
    let g = mgr.grouping_of(c);
    let g = crate::apply::reduce(mgr, g, &renumbered);
    mgr.representative_cflobdd(g, values)
}

/// The quantum Fourier transform of the basis state `e_x` over `n` qubits:
/// per qubit a Hadamard followed by controlled phases from each later
/// qubit, then the reversing swap network. The final amplitudes are
/// `omega^(x y) / sqrt(2^n)` with `omega = e^(2 pi i / 2^n)`.
pub fn qft(mgr: &mut Manager, n: usize, x: u64, mode: AmpMode) -> Result<QftRun, CflobddError> {
    if n == 0 || n > 63 {
        return Err(CflobddError::Range(format!(
            "qft supports 1..=63 qubits, got {}",
            n
        )));
    }
    if x >> n != 0 {
        return Err(CflobddError::Range(format!(
            "basis index {:#x} does not fit in {} bits",
            x, n
        )));
    }
    let (wires, level) = padded_wires(n, 0);
    let mut steps = Vec::new();
    let one = amp(ExactAmplitude::one());
    let zero = amp(ExactAmplitude::zero());
    let v = crate::construct::standard_basis_vector_with(
        mgr,
        level - 1,
        &BigUint::from(x << (wires - n)),
        one,
        zero,
    )?;
    let mut state = vector_to_matrix(mgr, v)?;
    if mode == AmpMode::Grid {
        state = to_grid(mgr, state)?;
    }
    push_trace(mgr, &mut steps, "initial".into(), state);
    let apply_gate =
        |mgr: &mut Manager, steps: &mut Vec<StepTrace>, state: CflobddId, gate: CflobddId, label: String| {
            let gate = if mode == AmpMode::Grid {
                to_grid(mgr, gate)?
            } else {
                gate
            };
            let next = matrix_mult(mgr, gate, state)?;
            push_trace(mgr, steps, label, next);
            Ok::<CflobddId, CflobddError>(next)
        };
    let h1 = hadamard_amp(mgr, 1)?;
    for i in 1..=n {
        let h = gate_on_qubit(mgr, level, i - 1, h1)?;
        state = apply_gate(mgr, &mut steps, state, h, format!("h {}", i - 1))?;
        for j in i + 1..=n {
            let cp = controlled_phase(mgr, level, i - 1, j - 1, 1, 1 << (j - i + 1))?;
            state = apply_gate(
                mgr,
                &mut steps,
                state,
                cp,
                format!("cp {} {}", i - 1, j - 1),
            )?;
        }
    }
    for i in 1..=n / 2 {
        let sw = swap_amp(mgr, level, i - 1, n - i)?;
        state = apply_gate(mgr, &mut steps, state, sw, format!("swap {} {}", i - 1, n - i))?;
    }
    Ok(QftRun {
        run: QuantumRun {
            state,
            data_qubits: n,
            total_qubits: wires,
            steps,
        },
        input: x,
    })
}
