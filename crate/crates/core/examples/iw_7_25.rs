//! Complete classification of the integer weighing matrices of order 7 and
//! weight 25: search, invariant split, exact classes, transposes and block
//! structure.
//!
//! ```text
//! cargo run --release --example iw_7_25 -- [output-dir]
//! ```

use piw::classify::DisplayMode;
use piw::pipeline::{run_pipeline, PipelineConfig};

fn main() {
    let mut cfg = PipelineConfig::new(7, 7, 25);
    cfg.mindepth = 4;
    cfg.invariant_depth = 3;
    cfg.threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    cfg.output_dir = std::env::args().nth(1).map(Into::into);
    cfg.display = DisplayMode::Canonical;

    let out = match run_pipeline(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    };
    println!(
        "{} generated, {} invariant groups, {} H-classes",
        out.generated.len(),
        out.partition.len(),
        out.h_classes.len()
    );
    print!("{}", out.report.table_text());

    let primitive: Vec<&str> = out
        .report
        .classes
        .iter()
        .filter(|c| c.primitive == Some(true))
        .filter_map(|c| c.label.as_deref())
        .collect();
    println!("primitive: {}", primitive.join(" "));
}
