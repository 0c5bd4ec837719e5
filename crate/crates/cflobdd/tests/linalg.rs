//! Matrix and vector algebra in interleaved variable order, checked
//! against dense references.

mod common;

use cflobdd::{
    cnot, cnot_interleaved, column1_matrix, controlled_phase, hadamard, identity, kronecker_v1,
    kronecker_v2_interleaved, matrix_mult, matrix_mult_symbolic, not_matrix, projection,
    scalar_multiply, swap, vector_to_matrix, BilinearPoly, CflobddError, CflobddId,
    DecisionTree, Manager, TerminalValue,
};
use common::*;
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Build the level-`level` integer matrix with the given dense entries:
/// leaf order interleaves row and column bits.
fn matrix_from(mgr: &mut Manager, level: u32, m: &IMat) -> CflobddId {
    let nv = cflobdd::num_vars(level);
    let side_bits = nv / 2;
    let leaves = (0..1usize << nv)
        .map(|idx| {
            let (mut r, mut c) = (0usize, 0usize);
            for p in 0..nv {
                let bit = idx >> (nv - 1 - p) & 1;
                if p % 2 == 0 {
                    r = r << 1 | bit;
                } else {
                    c = c << 1 | bit;
                }
            }
            let _ = side_bits;
            TerminalValue::int(m[r][c])
        })
        .collect();
    mgr.fold(&DecisionTree { level, leaves }).unwrap()
}

fn random_imat(rng: &mut ChaCha12Rng, n: usize, span: i64) -> IMat {
    (0..n)
        .map(|_| (0..n).map(|_| rng.gen_range(-span..=span)).collect())
        .collect()
}

#[test]
fn hadamard_matches_the_walsh_pattern() {
    let mut mgr = Manager::new();
    for level in 1..=3u32 {
        let h = hadamard(&mut mgr, level).unwrap();
        let got = imat_of(&mgr, h);
        let n = 1usize << (1 << (level - 1));
        for r in 0..n {
            for c in 0..n {
                let want = if (r & c).count_ones() % 2 == 0 { 1 } else { -1 };
                assert_eq!(got[r][c], want, "level {level}, entry ({r}, {c})");
            }
        }
    }
}

#[test]
fn identity_and_not_have_their_dense_forms() {
    let mut mgr = Manager::new();
    for level in 1..=3u32 {
        let id = identity(&mut mgr, level).unwrap();
        let n = 1usize << (1 << (level - 1));
        assert_eq!(imat_of(&mgr, id), imat_identity(n));
    }
    let x = not_matrix(&mut mgr).unwrap();
    assert_eq!(imat_of(&mgr, x), vec![vec![0, 1], vec![1, 0]]);
}

#[test]
fn kronecker_product_of_hadamards_is_the_next_hadamard() {
    let mut mgr = Manager::new();
    let h1 = hadamard(&mut mgr, 1).unwrap();
    let h2 = hadamard(&mut mgr, 2).unwrap();
    let kron = kronecker_v1(&mut mgr, h1, h1).unwrap();
    assert_eq!(kron, h2);
    let h3 = hadamard(&mut mgr, 3).unwrap();
    assert_eq!(kronecker_v1(&mut mgr, h2, h2).unwrap(), h3);
}

#[test]
fn kronecker_v1_matches_the_dense_product() {
    let mut mgr = Manager::new();
    let mut rng = ChaCha12Rng::seed_from_u64(31);
    for _ in 0..40 {
        let a = random_imat(&mut rng, 2, 4);
        let b = random_imat(&mut rng, 2, 4);
        let ca = matrix_from(&mut mgr, 1, &a);
        let cb = matrix_from(&mut mgr, 1, &b);
        let kron = kronecker_v1(&mut mgr, ca, cb).unwrap();
        assert_eq!(imat_of(&mgr, kron), imat_kron(&a, &b));
    }
    for _ in 0..10 {
        let a = random_imat(&mut rng, 4, 3);
        let b = random_imat(&mut rng, 4, 3);
        let ca = matrix_from(&mut mgr, 2, &a);
        let cb = matrix_from(&mut mgr, 2, &b);
        let kron = kronecker_v1(&mut mgr, ca, cb).unwrap();
        assert_eq!(imat_of(&mgr, kron), imat_kron(&a, &b));
    }
}

#[test]
fn interleaved_kronecker_wires_qubits_alternately() {
    let mut mgr = Manager::new();
    let mut rng = ChaCha12Rng::seed_from_u64(32);
    for level in 1..=2u32 {
        let sb = 1usize << (level - 1);
        let n = 1usize << sb;
        for _ in 0..20 {
            let a = random_imat(&mut rng, n, 4);
            let b = random_imat(&mut rng, n, 4);
            let ca = matrix_from(&mut mgr, level, &a);
            let cb = matrix_from(&mut mgr, level, &b);
            let kron = kronecker_v2_interleaved(&mut mgr, ca, cb).unwrap();
            let got = imat_of(&mgr, kron);
            // Qubit k of the first operand lands on result qubit 2k, of
            // the second on 2k + 1.
            for r in 0..n * n {
                for c in 0..n * n {
                    let (mut ra, mut rb, mut ca_, mut cb_) = (0, 0, 0, 0);
                    for p in 0..2 * sb {
                        let rbit = r >> (2 * sb - 1 - p) & 1;
                        let cbit = c >> (2 * sb - 1 - p) & 1;
                        if p % 2 == 0 {
                            ra = ra << 1 | rbit;
                            ca_ = ca_ << 1 | cbit;
                        } else {
                            rb = rb << 1 | rbit;
                            cb_ = cb_ << 1 | cbit;
                        }
                    }
                    assert_eq!(got[r][c], a[ra][ca_] * b[rb][cb_]);
                }
            }
        }
    }
}

#[test]
fn matrix_multiplication_matches_dense_products() {
    let mut mgr = Manager::new();
    let mut rng = ChaCha12Rng::seed_from_u64(33);
    for round in 0..200 {
        let a = random_imat(&mut rng, 4, 9);
        let b = random_imat(&mut rng, 4, 9);
        let ca = matrix_from(&mut mgr, 2, &a);
        let cb = matrix_from(&mut mgr, 2, &b);
        let prod = matrix_mult(&mut mgr, ca, cb).unwrap();
        assert_eq!(imat_of(&mgr, prod), imat_mul(&a, &b), "round {round}");
    }
}

#[test]
fn hadamard_squares_to_a_scaled_identity() {
    let mut mgr = Manager::new();
    for level in 1..=2u32 {
        let h = hadamard(&mut mgr, level).unwrap();
        let hh = matrix_mult(&mut mgr, h, h).unwrap();
        let id = identity(&mut mgr, level).unwrap();
        let n = 1i64 << (1 << (level - 1));
        let scaled = scalar_multiply(&mut mgr, id, &TerminalValue::int(n)).unwrap();
        assert_eq!(hh, scaled);
    }
}

#[test]
fn two_qubit_gates_match_their_dense_forms_on_four_qubits() {
    let mut mgr = Manager::new();
    let q = 4usize;
    for i in 0..q {
        for j in 0..q {
            if i == j {
                continue;
            }
            if i < j {
                let gate = cnot(&mut mgr, 3, i, j).unwrap();
                let want: IMat = dense_cnot(q, i, j)
                    .iter()
                    .map(|row| row.iter().map(|z| z.re.round() as i64).collect())
                    .collect();
                assert_eq!(imat_of(&mgr, gate), want, "cnot({i}, {j})");
            }
            let gate = swap(&mut mgr, 3, i, j).unwrap();
            let want: IMat = dense_swap(q, i, j)
                .iter()
                .map(|row| row.iter().map(|z| z.re.round() as i64).collect())
                .collect();
            assert_eq!(imat_of(&mgr, gate), want, "swap({i}, {j})");
        }
    }
}

#[test]
fn controlled_phase_places_exact_roots_of_unity() {
    let mut mgr = Manager::new();
    let q = 4usize;
    let n = 1u64 << q;
    for (i, j, val, size) in [(0usize, 1usize, 1u64, 4u64), (1, 3, 3, 8), (0, 3, 1, 16), (2, 3, 1, 2)] {
        let gate = controlled_phase(&mut mgr, 3, i, j, val, size).unwrap();
        let theta = 2.0 * std::f64::consts::PI * val as f64 / size as f64;
        let want = dense_cp(q, i, j, theta);
        let got = cmat_of(&mgr, gate);
        assert!(cmat_approx_eq(&got, &want, 1e-12), "cp({i}, {j}, {val}/{size})");
        // The terminal values themselves are exact: 1, 0, and the root.
        let dense = dense_matrix(&mgr, gate);
        for r in 0..n {
            for c in 0..n {
                let both = qubit_bit(q, r, i) && qubit_bit(q, r, j);
                let want_v = if r != c {
                    TerminalValue::Amp(cflobdd::ExactAmplitude::zero())
                } else if both {
                    TerminalValue::Amp(cflobdd::ExactAmplitude::root_of_unity(val, size))
                } else {
                    TerminalValue::Amp(cflobdd::ExactAmplitude::one())
                };
                assert_eq!(dense[r as usize][c as usize], want_v);
            }
        }
    }
    // Symmetry in the two qubits.
    let a = controlled_phase(&mut mgr, 3, 1, 2, 1, 8).unwrap();
    let b = controlled_phase(&mut mgr, 3, 2, 1, 1, 8).unwrap();
    assert_eq!(a, b);
}

#[test]
fn interleaved_cnot_is_the_kronecker_power_of_cnot() {
    let mut mgr = Manager::new();
    let base = cnot(&mut mgr, 2, 0, 1).unwrap();
    assert_eq!(cnot_interleaved(&mut mgr, 2).unwrap(), base);
    let squared = kronecker_v1(&mut mgr, base, base).unwrap();
    assert_eq!(cnot_interleaved(&mut mgr, 3).unwrap(), squared);
    // Same thing densely: one CNOT on each adjacent (even, odd) pair.
    let want = imat_mul(
        &dense_cnot(4, 0, 1)
            .iter()
            .map(|row| row.iter().map(|z| z.re.round() as i64).collect())
            .collect(),
        &dense_cnot(4, 2, 3)
            .iter()
            .map(|row| row.iter().map(|z| z.re.round() as i64).collect())
            .collect(),
    );
    assert_eq!(imat_of(&mgr, squared), want);
}

#[test]
fn symbolic_product_exits_are_bilinear_polynomials() {
    let mut mgr = Manager::new();
    // Left matrix [[7, 7], [9, 9]] has exit values [7, 9]; right matrix
    // [[1, 2], [1, 3]] has exit values [1, 2, 3]. Their product's four
    // entries, in visit order, are the polynomials below.
    let left = matrix_from(&mut mgr, 1, &vec![vec![7, 7], vec![9, 9]]);
    let right = matrix_from(&mut mgr, 1, &vec![vec![1, 2], vec![1, 3]]);
    let (gl, gr) = (mgr.grouping_of(left), mgr.grouping_of(right));
    let (g, tuple) = matrix_mult_symbolic(&mut mgr, gl, gr).unwrap();
    assert_eq!(mgr.exits(g), 4);
    let two = BigUint::from(2u32);
    let expected = vec![
        BilinearPoly::single(1, 1).scale(&two),
        BilinearPoly::single(1, 2).add(&BilinearPoly::single(1, 3)),
        BilinearPoly::single(2, 1).scale(&two),
        BilinearPoly::single(2, 2).add(&BilinearPoly::single(2, 3)),
    ];
    assert_eq!(*tuple, expected);

    // Substituting the value tuples gives the concrete product.
    let zero = TerminalValue::int(0);
    let vt1 = mgr.values_of(left).to_vec();
    let vt2 = mgr.values_of(right).to_vec();
    let values: Vec<TerminalValue> = tuple
        .iter()
        .map(|p| p.evaluate(&vt1, &vt2, &zero).unwrap())
        .collect();
    assert_eq!(
        values,
        vec![
            TerminalValue::int(14),
            TerminalValue::int(35),
            TerminalValue::int(18),
            TerminalValue::int(45),
        ]
    );
}

#[test]
fn bilinear_polynomials_remap_and_evaluate() {
    let p = BilinearPoly::single(1, 1)
        .scale(&BigUint::from(2u32))
        .add(&BilinearPoly::single(2, 3));
    // Renaming through return tuples merges colliding terms.
    let q = p.remap(&[5, 2], &[6, 1, 2]);
    let mut terms: Vec<((usize, usize), u64)> = q
        .terms()
        .map(|(&k, c)| (k, u64::try_from(c).unwrap()))
        .collect();
    terms.sort();
    assert_eq!(terms, vec![((2, 2), 1), ((5, 6), 2)]);

    let collide = BilinearPoly::single(1, 1).add(&BilinearPoly::single(2, 2));
    let merged = collide.remap(&[3, 3], &[4, 4]);
    assert_eq!(merged.len(), 1);
    assert_eq!(
        merged
            .evaluate(
                &vec![TerminalValue::int(0); 3],
                &vec![TerminalValue::int(0); 4],
                &TerminalValue::int(0)
            )
            .unwrap(),
        TerminalValue::int(0)
    );

    let vt1 = vec![TerminalValue::int(10), TerminalValue::int(20)];
    let vt2 = vec![
        TerminalValue::int(1),
        TerminalValue::int(2),
        TerminalValue::int(3),
    ];
    assert_eq!(
        p.evaluate(&vt1, &vt2, &TerminalValue::int(0)).unwrap(),
        TerminalValue::int(2 * 10 * 1 + 20 * 3)
    );
    assert!(BilinearPoly::zero().is_zero());
    assert_eq!(
        BilinearPoly::zero()
            .evaluate(&vt1, &vt2, &TerminalValue::int(0))
            .unwrap(),
        TerminalValue::int(0)
    );
}

#[test]
fn vector_to_matrix_puts_the_vector_in_column_zero() {
    let mut mgr = Manager::new();
    let leaves: Vec<TerminalValue> = V2M_EXAMPLE_VECTOR
        .iter()
        .map(|&v| TerminalValue::int(v))
        .collect();
    let v = mgr.fold(&DecisionTree { level: 1, leaves }).unwrap();
    let m = vector_to_matrix(&mut mgr, v).unwrap();
    assert_eq!(mgr.cflobdd_level(m), 2);
    let dense = imat_of(&mgr, m);
    for r in 0..4 {
        for c in 0..4 {
            let want = if c == 0 { V2M_EXAMPLE_VECTOR[r] } else { 0 };
            assert_eq!(dense[r][c], want);
        }
    }
}

#[test]
fn column_one_matrix_selects_the_first_column() {
    let mut mgr = Manager::new();
    let m = column1_matrix(&mut mgr, 2).unwrap();
    let dense = imat_of(&mgr, m);
    for r in 0..4 {
        for c in 0..4 {
            assert_eq!(dense[r][c], (c == 0) as i64);
        }
    }
}

#[test]
fn gate_constructors_check_their_arguments() {
    let mut mgr = Manager::new();
    assert!(matches!(cnot(&mut mgr, 1, 0, 1), Err(CflobddError::Range(_))));
    assert!(matches!(cnot(&mut mgr, 3, 2, 1), Err(CflobddError::Range(_))));
    assert!(matches!(cnot(&mut mgr, 3, 1, 1), Err(CflobddError::Range(_))));
    assert!(matches!(cnot(&mut mgr, 3, 0, 9), Err(CflobddError::Range(_))));
    assert!(matches!(
        controlled_phase(&mut mgr, 3, 0, 1, 1, 3),
        Err(CflobddError::Range(_))
    ));
    let id_amp = controlled_phase(&mut mgr, 2, 0, 1, 0, 4).unwrap();
    let dense = dense_matrix(&mgr, id_amp);
    assert_eq!(
        dense[3][3],
        TerminalValue::Amp(cflobdd::ExactAmplitude::one())
    );
    let p1 = projection(&mut mgr, 1, 0).unwrap();
    let p2 = projection(&mut mgr, 2, 0).unwrap();
    assert!(matches!(
        kronecker_v1(&mut mgr, p1, p2),
        Err(CflobddError::LevelMismatch(_))
    ));
}
