//! Times the pipeline on generated instances of increasing size.
//!
//! `cargo run --release --example scale`

use std::time::Instant;

use outerplanar_aug::{augment, generate, GenSpec};

fn main() {
    for n in [25_000, 50_000, 100_000] {
        let g = generate(&GenSpec { seed: 9, n, ..GenSpec::default() });
        let clock = Instant::now();
        let a = augment(&g).expect("generated graphs are outerplanar");
        println!("n={n} total={:?} width={} {:?}", clock.elapsed(), a.stage3.width(), a.timings);
    }
}
