//! Winner of the exhaustive Max-Cut across r for one n.

use geocut::enumerate::{phase_diagram, Grid};

fn main() -> geocut::error::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let pd = phase_diagram(n, &Grid::standard())?;
    println!("n = {n}, {} grid points", pd.points.len());
    for s in &pd.segments {
        println!("  {:>6}  r in [{:.3}, {:.3}]  members {:?}", s.class.to_string(), s.r_first, s.r_last, s.winner.members());
    }
    let ties = pd.points.iter().filter(|p| p.tied).count();
    println!("  {ties} points with a tie at the top");
    Ok(())
}
