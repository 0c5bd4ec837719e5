//! Count satisfying assignments per terminal value, then draw weighted
//! random assignments in proportion to them.

use std::collections::BTreeMap;

use cflobdd::{apply_boolean, count_paths, projection, sample_assignment, BoolOp, CflobddError, Manager};

fn main() -> Result<(), CflobddError> {
    let mut mgr = Manager::with_seed(7);

    // f = (w & x) | (y & z): 7 of the 16 assignments are satisfying.
    let w = projection(&mut mgr, 2, 0)?;
    let x = projection(&mut mgr, 2, 1)?;
    let y = projection(&mut mgr, 2, 2)?;
    let z = projection(&mut mgr, 2, 3)?;
    let wx = apply_boolean(&mut mgr, w, x, BoolOp::And)?;
    let yz = apply_boolean(&mut mgr, y, z, BoolOp::And)?;
    let f = apply_boolean(&mut mgr, wx, yz, BoolOp::Or)?;

    let counts = count_paths(&mut mgr, f);
    let values = mgr.values_of(f).to_vec();
    for (value, count) in values.iter().zip(&counts) {
        println!("{}: {} assignments", value, count);
    }

    // Boolean sampling weights F as 0 and T as 1, so draws are uniform
    // over the satisfying assignments.
    let mut histogram: BTreeMap<String, u32> = BTreeMap::new();
    for _ in 0..7000 {
        let asn = sample_assignment(&mut mgr, f)?;
        let bits: String = asn.iter().map(|&b| if b { '1' } else { '0' }).collect();
        *histogram.entry(bits).or_insert(0) += 1;
    }
    println!("7000 draws over the {} satisfying assignments:", counts[1]);
    for (bits, n) in &histogram {
        println!("  {}: {}", bits, n);
    }
    assert_eq!(histogram.len() as u64, 7);

    Ok(())
}
