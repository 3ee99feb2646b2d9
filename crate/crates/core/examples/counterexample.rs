//! Inequivalent twisted doubles with identical modular data: G(5,11) with
//! u = 1 and u = 4 share (S, T) up to relabeling, u = 1 and u = 2 do not.
//!
//! cargo run --release --example counterexample

use moddata::cohomology::{inflate, kappa};
use moddata::equiv::{equivalence_classes, find_equivalence};
use moddata::groups::Group;
use moddata::modular::{compute_modular_data, ModularData};

fn main() {
    let g = Group::metacyclic(5, 11, None).unwrap();
    let data: Vec<ModularData> =
        (0..5).map(|u| compute_modular_data(&inflate(&kappa(5, u).unwrap(), &g).unwrap()).unwrap().0).collect();
    for (a, b) in [(1, 4), (2, 3), (1, 2)] {
        match find_equivalence(&data[a], &data[b]) {
            Some(pi) => println!("u={a} ~ u={b}: relabeling {}", serde_json::to_string(&pi).unwrap()),
            None => println!("u={a} and u={b}: no relabeling"),
        }
    }
    let refs: Vec<&ModularData> = data.iter().collect();
    println!("classes of modular data over u = 0..4: {:?}", equivalence_classes(&refs));
}
