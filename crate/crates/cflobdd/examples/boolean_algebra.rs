//! Build Boolean functions over four variables and combine them with the
//! binary operations, if-then-else, restriction, and quantification.

use cflobdd::{
    apply_boolean, apply_via_ite, complement, exists, ite, projection, restrict, BoolOp,
    CflobddError, Manager,
};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::new();

    // Level 2 structures range over four variables w, x, y, z.
    let w = projection(&mut mgr, 2, 0)?;
    let x = projection(&mut mgr, 2, 1)?;
    let y = projection(&mut mgr, 2, 2)?;
    let z = projection(&mut mgr, 2, 3)?;

    let wx = apply_boolean(&mut mgr, w, x, BoolOp::And)?;
    let yz = apply_boolean(&mut mgr, y, z, BoolOp::And)?;
    let f = apply_boolean(&mut mgr, wx, yz, BoolOp::Or)?;

    println!("f = (w & x) | (y & z)");
    for (value, assignments) in mgr.denotation(f)? {
        println!("  {} on {} assignments", value, assignments.len());
    }

    // The same operation expressed through ITE lands on the same handle.
    let via_ite = apply_via_ite(&mut mgr, wx, yz, BoolOp::Or)?;
    println!("or via ITE is the same handle: {}", via_ite == f);

    // ITE with a fresh condition.
    let g = ite(&mut mgr, w, yz, x)?;
    let not_g = complement(&mut mgr, g)?;
    println!("ite(w, y & z, x) has {} exits, complement swaps them", mgr.values_of(g).len());
    assert_ne!(g, not_g);

    // Restrict w to true: f becomes x | (y & z).
    let f_w1 = restrict(&mut mgr, f, 0, true)?;
    let x_or_yz = apply_boolean(&mut mgr, x, yz, BoolOp::Or)?;
    println!("f[w:=1] == x | (y & z): {}", f_w1 == x_or_yz);

    // Quantify x away: exists x. f == w | (y & z).
    let ex = exists(&mut mgr, f, 1)?;
    let w_or_yz = apply_boolean(&mut mgr, w, yz, BoolOp::Or)?;
    println!("exists x. f == w | (y & z): {}", ex == w_or_yz);

    Ok(())
}
