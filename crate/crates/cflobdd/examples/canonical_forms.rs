//! Hash-consing makes structural equality semantic equality: any two
//! routes to the same function meet at the same handle, and every
//! structure round-trips through its explicit decision tree.

use cflobdd::{
    apply_boolean, complement, eq_relation, parity, projection, BoolOp, CflobddError, Manager,
};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::new();

    // Parity of four variables, straight from the library.
    let direct = parity(&mut mgr, 2)?;

    // The same function folded together from projections.
    let mut folded = projection(&mut mgr, 2, 0)?;
    for i in 1..4 {
        let p = projection(&mut mgr, 2, i)?;
        folded = apply_boolean(&mut mgr, folded, p, BoolOp::Xor)?;
    }
    println!("parity == fold of xors: {}", direct == folded);

    // De Morgan: !(a & b) built two ways.
    let a = projection(&mut mgr, 1, 0)?;
    let b = projection(&mut mgr, 1, 1)?;
    let ab = apply_boolean(&mut mgr, a, b, BoolOp::And)?;
    let lhs = complement(&mut mgr, ab)?;
    let rhs = apply_boolean(&mut mgr, a, b, BoolOp::Nand)?;
    println!("!(a & b) == a nand b: {}", lhs == rhs);

    // Unfold to the full 2^4-leaf decision tree and fold back.
    let eq = eq_relation(&mut mgr, 2)?;
    let tree = mgr.unfold(eq)?;
    let back = mgr.fold(&tree)?;
    println!(
        "eq_relation(2) -> {} leaves -> same handle: {}",
        tree.leaves.len(),
        back == eq
    );

    // Well-formedness is checkable at any time.
    let violations = mgr.check_invariants(eq);
    println!("invariant violations: {}", violations.len());

    // Caches can be dropped without disturbing canonicity.
    mgr.clear_caches();
    let again = parity(&mut mgr, 2)?;
    println!("parity after cache clear is the same handle: {}", again == direct);

    Ok(())
}
