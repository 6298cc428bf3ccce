//! For n = 4, 5, 6 a near-isolated cut wins somewhere in (1, 2).

use geocut::verify::{n4_gap_forms, small_n_counterexamples};

fn main() -> geocut::error::Result<()> {
    for s in small_n_counterexamples()? {
        let names: Vec<String> = s.classes.iter().map(|c| c.to_string()).collect();
        let bounds: Vec<String> = s.boundaries.iter().map(|b| format!("{b:.6}")).collect();
        println!("n = {}: {} (boundaries {})", s.n, names.join(" -> "), bounds.join(", "));
    }
    for r in [1.1, 1.3, 1.5] {
        let (expanded, factored) = n4_gap_forms(r)?;
        println!("W(C_1) - W(S*_1) on K_4 at r = {r}: {expanded:.6} = {factored:.6}");
    }
    Ok(())
}
