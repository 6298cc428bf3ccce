//! Thresholds r_k(n) for a range of n, plus the monotonicity summary.

use geocut::rootfind::{check_monotonicity, threshold_table};

fn main() -> geocut::error::Result<()> {
    let tables: Vec<_> = (6..=20).map(threshold_table).collect::<Result<_, _>>()?;
    for t in &tables {
        let row: Vec<String> = t.thresholds().map(|(_, r)| format!("{r:.6}")).collect();
        println!("n = {:2}: {}", t.n, row.join(" "));
    }
    let wide: Vec<_> = (6..=50).map(threshold_table).collect::<Result<_, _>>()?;
    let m = check_monotonicity(&wide)?;
    println!("decreasing in k: {}", m.decreasing_in_k);
    println!("r_1 decreasing in n: {}", m.r1_decreasing_in_n);
    println!("r_2(9) > r_2(8): {:?}", m.r2_9_exceeds_r2_8);
    println!("{} steps with r_k(n+1) > r_k(n)", m.increases_in_n.len());
    Ok(())
}
