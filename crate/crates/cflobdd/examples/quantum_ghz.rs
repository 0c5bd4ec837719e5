//! Prepare the GHZ state on 64 qubits and sample it: every draw comes out
//! all zeros or all ones.

use std::collections::BTreeMap;

use cflobdd::{ghz, measure_bits, CflobddError, Manager};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::with_seed(1);
    let n = 64;
    let run = ghz(&mut mgr, n)?;

    println!("circuit steps:");
    for step in &run.steps {
        println!(
            "  {:12} groupings={:3} vertices={:4} edges={:4}",
            step.label, step.size.groupings, step.size.vertices, step.size.edges
        );
    }

    let mut histogram: BTreeMap<String, u32> = BTreeMap::new();
    for _ in 0..1000 {
        let bits = measure_bits(&mut mgr, run.state, n)?;
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        *histogram.entry(s).or_insert(0) += 1;
    }
    println!("1000 measurements of {} qubits:", n);
    for (bits, count) in &histogram {
        println!("  {} x{}", bits, count);
    }
    assert_eq!(histogram.len(), 2, "only the two entangled outcomes appear");
    Ok(())
}
