//! Galois action on modular data: the permutation σ̂ of simples and the
//! relabeling between Galois-conjugate twists.
//!
//! cargo run --release --example galois

use moddata::cohomology::{inflate, kappa};
use moddata::equiv::{cocycle_galois_orbits, galois_permutation, galois_twist_relabel};
use moddata::groups::Group;
use moddata::modular::compute_modular_data;

fn main() {
    let g = Group::metacyclic(5, 11, None).unwrap();
    let (md, _) = compute_modular_data(&inflate(&kappa(5, 1).unwrap(), &g).unwrap()).unwrap();
    let n = md.conductor() as i64;
    for t in [2, 3, n - 1] {
        let sigma = galois_permutation(&md, t).unwrap();
        println!("t = {t:>3}: sigma_hat = {}", serde_json::to_string(&sigma).unwrap());
    }
    let (relabel, report) = galois_twist_relabel(&g, 1, 2).unwrap();
    println!("relabel u=1 -> u={}: {}", report.target_twist, serde_json::to_string(&relabel).unwrap());
    println!("  S identity {} ({} entries), T identity {}", report.s_identity, report.s_entries_checked, report.t_identity);
    println!("orbits of twists under units mod 5: {:?}", cocycle_galois_orbits(5, false).orbits);
}
