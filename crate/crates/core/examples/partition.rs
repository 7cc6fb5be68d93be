//! Partitions sampled points on a few bundled varieties and prints the
//! per-round class sizes.
//!
//! cargo run --release -p polymethod --example partition

use polymethod::fixtures;
use polymethod::partition::partition;
use polymethod::profile::Constants;

fn main() -> polymethod::Result<()> {
    for name in ["plane", "circle", "twisted-cubic"] {
        let v = fixtures::variety(name)?;
        let points = v.sample_points(64)?;
        let (chain, report) = partition(&v, &points, 4, &Constants::default())?;
        let classes: Vec<usize> = report.rounds.iter().map(|r| r.max_class).collect();
        println!("{name:>14}: degrees {:?}, largest class per round {classes:?}", chain.degrees);
    }
    Ok(())
}
