//! Representations of an integer as a sum of squares.
//!
//! ```text
//! cargo run --example sums_of_squares -- 25 7
//! ```

use piw::nsoks::nsoks;

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().expect("integer argument"));
    let n = args.next().unwrap_or(25);
    let r = args.next().unwrap_or(7) as u32;

    let reps = nsoks(n, r, None);
    for rep in &reps {
        // the smallest row with this entry multiset, as used by the search
        let row = rep.to_minimal_row(r as usize).unwrap();
        println!("{:<24} {row:?}", rep.to_string());
    }
    println!("{} representations of {n} as {r} squares", reps.len());

    // capping the largest square
    let capped = nsoks(n, r, Some(3));
    println!("{} with every square at most 3^2", capped.len());
}
