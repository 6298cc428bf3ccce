//! Checks that isolated cuts win, exhaustively for small n and against
//! near-isolated rivals for larger n.

use geocut::enumerate::Grid;
use geocut::verify::{verify_exhaustive, verify_near_isolated};

fn main() -> geocut::error::Result<()> {
    let ex = verify_exhaustive(7, 12, &Grid::standard())?;
    println!(
        "exhaustive n = 7..12: {} points, {} violations, {:.1?}",
        ex.checked_count,
        ex.violations.len(),
        ex.elapsed
    );
    let ni = verify_near_isolated(7, 60, 20)?;
    println!(
        "near-isolated n = 7..60: {} comparisons, {} settled exactly, {} violations, {:.1?}",
        ni.checked_count,
        ni.resolved_exactly,
        ni.violations.len(),
        ni.elapsed
    );
    Ok(())
}
