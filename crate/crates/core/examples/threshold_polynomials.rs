//! Builds P^{n,k} three ways and evaluates it.

use geocut::poly::{
    poly_from_cuts, separation_gap, threshold_polynomial, threshold_polynomial_recursive, Precision,
};

fn main() -> geocut::error::Result<()> {
    let (n, k) = (7, 2);
    let p = threshold_polynomial(n, k)?;
    println!("P^{{{n},{k}}} = {p}");
    println!("  positive exponents {:?}, negative {:?}", p.pos(), p.neg());
    println!("  recursive route agrees: {}", threshold_polynomial_recursive(n, k)? == p);
    let c = poly_from_cuts(n, k)?;
    println!("  cut-difference route agrees: {}", c.pos() == p.pos() && c.neg() == p.neg());
    println!("  P(1) = {}, sign changes = {}", p.value_at_one(), p.sign_changes());
    let g = separation_gap(n, k)?;
    println!("  a_k = {}, b_1 = {}, gap = {}", g.a_k, g.b_1, g.gap);

    // near r = 1 the double evaluation loses the sign; the exact one does not
    let big = threshold_polynomial(60, 1)?;
    for r in [1.0001, 1.05, 1.5] {
        let d = big.eval_log(r, Precision::Double);
        let e = big.eval_log(r, Precision::Extended);
        println!("P^{{60,1}}({r}): double {:?} / exact {:?}, ln|P| = {:.6}", d.sign, e.sign, e.log_abs);
    }
    Ok(())
}
