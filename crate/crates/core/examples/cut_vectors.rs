//! Cut vectors of K_4 and of the isolated cuts of K_7, with weights.

use geocut::cutmodel::{cut_vector, cut_weight, isolated_cut, near_isolated_cut, CutSpec};

fn main() -> geocut::error::Result<()> {
    println!("K_4, r = 1.5");
    for t in 0..8u32 {
        let x = format!("1{:03b}", t);
        let cut = CutSpec::from_indicator(&x)?;
        let w = cut_weight(&cut, 1.5)?;
        println!("  x = {x}  members {:?}  vector {}  W = {:.5}", cut.members(), cut_vector(&cut), w.value());
    }

    println!("K_7 isolated and near-isolated cuts");
    for k in 1..=3 {
        let c = isolated_cut(k, 7)?;
        let s = near_isolated_cut(k, 7)?;
        println!("  C_{k}  {}", cut_vector(&c));
        println!("  S*_{k} {}", cut_vector(&s));
    }
    Ok(())
}
