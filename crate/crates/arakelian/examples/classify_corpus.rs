//! Classify every bundled corpus scene and print verdict vs ground truth.

use arakelian::geometry::rasterize;
use arakelian::scenes;
use arakelian::topology::is_arakelian;

fn main() {
    for entry in scenes::corpus() {
        let set = rasterize(&entry.scene, entry.window).unwrap();
        let t0 = std::time::Instant::now();
        match is_arakelian(&set, entry.n_max) {
            Ok(r) => println!(
                "{:24} -> {:?} (expected {:?})  [{} ms]  {}",
                entry.name,
                r.verdict,
                entry.expected,
                t0.elapsed().as_millis(),
                r.reason
            ),
            Err(e) => println!("{:24} -> ERROR {e}", entry.name),
        }
    }
}
