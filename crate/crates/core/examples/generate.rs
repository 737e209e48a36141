//! Hadamard representatives of PIW(m, n, k) by prefix search.
//!
//! ```text
//! cargo run --release --example generate -- 4 6 9 2
//! ```
//! Arguments: m n k [mindepth]. A smaller mindepth skips minimality tests on
//! deep prefixes and returns a larger, redundant list.

use piw::search::{search, SearchOptions};

fn main() -> piw::Result<()> {
    let args: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer argument"))
        .collect();
    let (m, n, k) = match args[..] {
        [m, n, k, ..] => (m as usize, n as usize, k),
        _ => (4, 4, 9),
    };
    let mindepth = args.get(3).map_or(m, |&d| d as usize);

    let mut opts = SearchOptions::new(mindepth);
    opts.threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let out = search(m, n, k, &opts)?;

    for level in &out.levels {
        println!(
            "level {}: {} nodes, {} minimality tests, {:.1?}",
            level.level, level.nodes, level.minimality_tests, level.elapsed
        );
    }
    for x in out.matrices.iter().take(3) {
        println!("\n{x}");
    }
    println!("\n{} matrices in PIW({m},{n},{k}) at mindepth {mindepth}", out.matrices.len());
    Ok(())
}
