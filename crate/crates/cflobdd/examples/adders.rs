//! The addition relation ADD(X, Y, Z) = [Z = X + Y mod 2^bits] and its
//! constant-per-level growth.

use cflobdd::{add_relation, CflobddError, Manager, TerminalValue};

/// Evaluate the relation on concrete operands. Each bit triple occupies one
/// four-variable block (x_i, y_i, z_i, dummy), least significant first.
fn holds(mgr: &Manager, c: cflobdd::CflobddId, bits: u32, x: u64, y: u64, z: u64) -> bool {
    let mut asn = vec![false; 4 * bits as usize];
    for i in 0..bits {
        asn[4 * i as usize] = x >> i & 1 == 1;
        asn[4 * i as usize + 1] = y >> i & 1 == 1;
        asn[4 * i as usize + 2] = z >> i & 1 == 1;
    }
    matches!(mgr.interpret(c, &asn), Ok(TerminalValue::Bool(true)))
}

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::new();

    // l = 2 gives 4-bit operands: 2^(l+2) = 16 variables.
    let add4 = add_relation(&mut mgr, 2)?;
    println!("3 + 9 = 12: {}", holds(&mgr, add4, 4, 3, 9, 12));
    println!("3 + 9 = 13: {}", holds(&mgr, add4, 4, 3, 9, 13));
    println!("15 + 1 = 0 (wraps): {}", holds(&mgr, add4, 4, 15, 1, 0));

    // Count solutions: every (x, y) pair has exactly one sum, and each
    // dummy variable doubles the count.
    let counts = cflobdd::count_paths(&mut mgr, add4);
    let values = mgr.values_of(add4).to_vec();
    let t = values
        .iter()
        .position(|v| matches!(v, TerminalValue::Bool(true)))
        .expect("the relation is satisfiable");
    println!("satisfying paths: {} (of {})", counts[t], 1u64 << 16);

    // The structure grows by a constant number of groupings per level.
    println!("level growth:");
    let mut last = 0;
    for l in 1..=10 {
        let c = add_relation(&mut mgr, l)?;
        let size = mgr.size_report(c);
        println!(
            "  l={:2} ({:4}-bit operands): groupings={:3} (+{})",
            l,
            1u64 << l,
            size.groupings,
            size.groupings - last
        );
        last = size.groupings;
    }
    Ok(())
}
