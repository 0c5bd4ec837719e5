//! Matrices with interleaved row/column variables: Kronecker products,
//! symbolic matrix multiplication, and the Walsh-Hadamard family.

use cflobdd::{
    hadamard, identity, kronecker_v1, kronecker_v2_interleaved, matrix_mult, not_matrix,
    scalar_multiply, CflobddError, CflobddId, Manager, TerminalValue,
};

/// Print a level-l matrix by evaluating every (row, column) pair. Row bit k
/// lives on variable 2k, column bit k on variable 2k + 1.
fn print_matrix(mgr: &Manager, c: CflobddId, label: &str) -> Result<(), CflobddError> {
    let level = mgr.cflobdd_level(c);
    let bits = 1usize << (level - 1);
    let side = 1usize << bits;
    println!("{} ({}x{}):", label, side, side);
    for r in 0..side {
        let mut row = String::new();
        for col in 0..side {
            let mut asn = vec![false; 2 * bits];
            for k in 0..bits {
                asn[2 * k] = r >> (bits - 1 - k) & 1 == 1;
                asn[2 * k + 1] = col >> (bits - 1 - k) & 1 == 1;
            }
            row.push_str(&format!("{:>4}", mgr.interpret(c, &asn)?.to_string()));
        }
        println!("  {}", row);
    }
    Ok(())
}

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::new();

    let h1 = hadamard(&mut mgr, 1)?;
    print_matrix(&mgr, h1, "H")?;

    // Blocked Kronecker product: H (x) H is the level-2 Hadamard.
    let hh = kronecker_v1(&mut mgr, h1, h1)?;
    let h2 = hadamard(&mut mgr, 2)?;
    println!("kron(H, H) == hadamard(2): {}", hh == h2);

    // Interleaved variant: qubit k of the left factor lands on qubit 2k.
    let x = not_matrix(&mut mgr)?;
    let hx = kronecker_v2_interleaved(&mut mgr, h1, x)?;
    print_matrix(&mgr, hx, "H (x)i X")?;

    // H * H = N * I, symbolically.
    let prod = matrix_mult(&mut mgr, h2, h2)?;
    let id = identity(&mut mgr, 2)?;
    let scaled = scalar_multiply(&mut mgr, id, &TerminalValue::int(4))?;
    println!("H2 * H2 == 4 * I: {}", prod == scaled);
    print_matrix(&mgr, prod, "H2 * H2")?;

    // The whole level-20 Hadamard (a 2^(2^19) square matrix) is tiny.
    let big = hadamard(&mut mgr, 20)?;
    let size = mgr.size_report(big);
    println!(
        "hadamard(20): groupings={} vertices={} edges={}",
        size.groupings, size.vertices, size.edges
    );
    Ok(())
}
