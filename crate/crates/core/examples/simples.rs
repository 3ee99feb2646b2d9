//! Simple objects (g, χ) of the twisted double: class representatives with
//! projective characters of their centralizers.
//!
//! cargo run --example simples -- 3 7 1

use moddata::cohomology::{inflate, kappa};
use moddata::groups::Group;
use moddata::simples::{enumerate_simples, global_dimension};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, q, u) = match args[..] {
        [p, q, u] => (p, q, u),
        _ => (3, 7, 1),
    };
    let g = Group::metacyclic(p, q, None).unwrap();
    let simples = enumerate_simples(&inflate(&kappa(p, u).unwrap(), &g).unwrap()).unwrap();
    println!("{} with u = {u}: rank {}", g.spec(), simples.len());
    for s in &simples {
        println!(
            "  #{:<3} class {:<6} char {:<2} dim {:>2}  chi(g) = {}",
            s.index,
            g.format_element(s.class_rep),
            s.char_index,
            s.dimension(),
            s.character.eval(s.class_rep)
        );
    }
    println!("sum of squared dimensions = {} = |G|^2", global_dimension(&simples));
}
