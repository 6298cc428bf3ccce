//! r_k(n) - 1 against the exponent-gap approximation.

use geocut::analysis::{delta_gap, scaling_error_table, SCALING_SAMPLE};

fn main() -> geocut::error::Result<()> {
    println!("{:>3} {:>2} {:>8} {:>8} {:>7}  delta", "n", "k", "actual", "approx", "err %");
    for row in scaling_error_table(&SCALING_SAMPLE)? {
        println!(
            "{:>3} {:>2} {:>8.4} {:>8.4} {:>7.1}  {}",
            row.n,
            row.k,
            row.actual,
            row.predicted,
            row.error_percent,
            delta_gap(row.n, row.k)?
        );
    }
    Ok(())
}
