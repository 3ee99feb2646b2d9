//! Counting pointed fusion categories of dimension p·q up to equivalence.
//!
//! cargo run --example classification

use moddata::cohomology::{classify_pointed, square_orbits};

fn main() {
    for p in [2, 3, 5, 7] {
        println!("orbits of Z_{p} under squares of units: {:?}", square_orbits(p));
    }
    for (p, q) in [(5, 11), (3, 5), (2, 7), (3, 7), (7, 29)] {
        let c = classify_pointed(p, q).unwrap();
        println!(
            "p={p:<2} q={q:<3} cyclic {:>2} + nonabelian {:>2} = {:>2}  ({:?})",
            c.abelian, c.nonabelian, c.total, c.branch
        );
    }
}
