//! Grover's search over 256 entries: amplify the marked index and watch
//! its measurement frequency.

use cflobdd::{grover, measure, CflobddError, Manager};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::with_seed(42);
    let n = 8;
    let marked = 0b1011_0010;

    let run = grover(&mut mgr, n, marked)?;
    println!(
        "{} iterations over 2^{} entries, final size: {:?}",
        run.iterations,
        n,
        mgr.size_report(run.run.state)
    );

    let shots = 500;
    let mut hits = 0;
    for _ in 0..shots {
        if measure(&mut mgr, run.run.state, n)? == marked {
            hits += 1;
        }
    }
    println!(
        "measured {:#010b} in {}/{} shots ({:.1}%)",
        marked,
        hits,
        shots,
        100.0 * hits as f64 / shots as f64
    );
    Ok(())
}
