//! The quantum Fourier transform of a basis state, with amplitudes kept as
//! exact scaled roots of unity.

use cflobdd::{qft, AmpMode, CflobddError, Manager};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::with_seed(1);
    let n = 4;
    let x = 6;

    let run = qft(&mut mgr, n, x, AmpMode::Exact)?;
    println!("qft of |{}> on {} qubits", x, n);

    // Read amplitude <y|QFT|x> for each output index y. The state is kept
    // as the first column of a matrix, so row bit k sits on variable 2k.
    let wires = run.run.total_qubits;
    for y in 0..1u64 << n {
        let mut asn = vec![false; 2 * wires];
        for q in 0..n {
            asn[2 * q] = y >> (n - 1 - q) & 1 == 1;
        }
        let amp = mgr.interpret(run.run.state, &asn)?;
        println!("  <{:2}|F|{}> = {}", y, x, amp);
    }

    // The grid-arithmetic mode computes the same state numerically.
    let grid = qft(&mut mgr, n, x, AmpMode::Grid)?;
    let size = mgr.size_report(grid.run.state);
    println!("grid mode size: groupings={} vertices={}", size.groupings, size.vertices);
    Ok(())
}
