//! Minimal forms under signed row and column permutations, with the
//! monomial pair that maps the input onto its minimal form.

use piw::canon::{canonical, fast_minclass_with_stats, minclass};
use piw::IntegerMatrix;

fn main() -> piw::Result<()> {
    let m = IntegerMatrix::from_rows(&[[2, 1, 2, 0], [-1, 2, 0, 2], [2, 0, -2, -1]])?;
    println!("input:\n{m}\n");

    let exact = minclass(&m, true)?;
    println!("minimal form:\n{}\n", exact.minimal);

    let w = exact.witness.expect("witness requested");
    println!("row monomial: perm {:?} signs {:?}", w.row_op.perm(), w.row_op.signs());
    println!("col monomial: perm {:?} signs {:?}", w.col_op.perm(), w.col_op.signs());
    assert_eq!(w.apply(&m)?, exact.minimal);

    // the branching minimizer agrees and scales to larger row counts
    let (fast, stats) = fast_minclass_with_stats(&m, false)?;
    assert_eq!(fast.minimal, exact.minimal);
    println!(
        "fast minimizer: same result, at most {} live branches ({} in total)",
        stats.max_branches, stats.total_branches
    );

    let scalar = IntegerMatrix::scalar(6, 5)?;
    println!("\nMin(5 I_6):\n{}", canonical(&scalar));
    Ok(())
}
