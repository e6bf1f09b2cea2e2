//! Prints Quot-scheme point counts for a few small `(d, r, q)`.
//!
//! Run with `cargo run --release --example census_table`.

use quotforge::census::{quot_point_count, CensusOptions};

fn main() {
    let runs = [
        (2, 1, 2, false),
        (2, 1, 3, false),
        (2, 2, 3, false),
        (3, 1, 2, false),
        (3, 2, 2, false),
        (3, 1, 5, true),
        (4, 1, 2, true),
    ];
    println!(
        "{:>2} {:>2} {:>2} {:>10} {:>8} {:>8} {:>9}",
        "d", "r", "q", "mode", "quot", "W", "time"
    );
    for (d, r, q, factorized) in runs {
        let opts = CensusOptions {
            factorized,
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            ..Default::default()
        };
        match quot_point_count(d, r, q, &opts) {
            Ok(rep) => println!(
                "{d:>2} {r:>2} {q:>2} {:>10} {:>8} {:>8} {:>8.2?}",
                if factorized { "factorized" } else { "raw" },
                rep.quot_points,
                rep.w_points,
                rep.elapsed
            ),
            Err(e) => println!("{d:>2} {r:>2} {q:>2}: {e}"),
        }
    }
}
