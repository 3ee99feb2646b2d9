//! Compute (S, T) for a twisted double and check the modular axioms.
//!
//! cargo run --release --example modular_data -- 3 7 1

use moddata::cohomology::{inflate, kappa};
use moddata::groups::Group;
use moddata::modular::{compute_modular_data, verify_modular, VerlindePolicy};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer")).collect();
    let (p, q, u) = match args[..] {
        [p, q, u] => (p, q, u),
        _ => (3, 7, 1),
    };
    let g = Group::metacyclic(p, q, None).unwrap();
    let (md, _) = compute_modular_data(&inflate(&kappa(p, u).unwrap(), &g).unwrap()).unwrap();
    println!("rank {}, conductor {}, {} distinct entries", md.rank(), md.conductor(), md.values().len());
    for i in 0..md.rank().min(8) {
        println!("  T[{i}] = {:<12} S[0][{i}] = {}", md.t(i).to_string(), md.s(0, i));
    }
    println!("  S[1][1] = {}", md.s(1, 1));
    let report = verify_modular(&md, VerlindePolicy::Full);
    for c in &report.checks {
        println!("  {:<20} {} {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
    }
}
