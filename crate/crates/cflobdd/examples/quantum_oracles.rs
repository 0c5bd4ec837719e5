//! The three oracle-query algorithms: Bernstein-Vazirani reads a hidden
//! dot-product mask, Deutsch-Jozsa classifies an oracle as constant or
//! balanced, and Simon finds a hidden xor shift.

use cflobdd::{bv, dj, simon, CflobddError, DjOracle, Manager};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::with_seed(5);

    // Bernstein-Vazirani: f(x) = s . x, one query.
    let secret = 0b1101_0110_1001;
    let run = bv(&mut mgr, 12, secret)?;
    println!(
        "bv: planted {:#014b}, recovered {:#014b} ({})",
        secret,
        run.recovered,
        if run.recovered == secret { "ok" } else { "mismatch" }
    );

    // Deutsch-Jozsa: the verdict is read off the exact probability of the
    // all-zero outcome, so it is deterministic.
    for oracle in [DjOracle::Constant0, DjOracle::Constant1, DjOracle::BalancedFirstBit] {
        let run = dj(&mut mgr, 16, oracle)?;
        println!("dj: {:?} classified {:?}", oracle, run.verdict);
    }

    // Simon: measurements of the fused pipeline are orthogonal to the
    // shift; a GF(2) solve pins it down.
    let shift = 0b101101;
    let run = simon(&mut mgr, 6, shift)?;
    println!(
        "simon: planted {:#08b}, recovered {:#08b} after {} samples",
        shift, run.recovered, run.samples_used
    );
    Ok(())
}
