//! Generic Max-Cut lower bounds next to the exact optimum.

use geocut::analysis::{bound_comparison, max_weight_matching, min_spanning_tree, poljak_turzik_bound};

fn main() -> geocut::error::Result<()> {
    for (n, r) in [(8, 1.05), (8, 1.10), (8, 1.50), (10, 1.20)] {
        let b = bound_comparison(n, r)?;
        println!(
            "n = {n}, r = {r:.2}: C_{} = {:.4}, GY = {:.4} ({:.2}% below), PT = {:.4}",
            b.optimal_k, b.optimum, b.gy_bound, b.gap_gy, b.pt_bound
        );
    }
    let m = max_weight_matching(8, 1.05)?;
    println!("maximum matching on K_8 at r = 1.05: {:?}", m.edges);
    let t = min_spanning_tree(6, 2.0)?;
    println!("minimum spanning tree of K_6 at r = 2: {:?}", t.edges);
    println!("PT bound K_6 at r = 2: {}", poljak_turzik_bound(6, 2.0)?);
    Ok(())
}
