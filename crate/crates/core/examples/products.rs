//! Direct products G_q × G_r with product cocycles: the data computed on
//! the product equals the Kronecker product of the factor data.
//!
//! cargo run --release --example products            (rank 1625, ~20 s)

use std::time::Instant;

use moddata::cohomology::{inflate, kappa, product_cocycle};
use moddata::equiv::cocycle_galois_orbits;
use moddata::groups::Group;
use moddata::modular::{compute_modular_data, kronecker};
use moddata::reproduce::matches_kronecker;

fn main() {
    let (p, q, r, u, v) = (3, 7, 13, 1, 1);
    let gq = Group::metacyclic(p, q, None).unwrap();
    let gr = Group::metacyclic(p, r, None).unwrap();
    let start = Instant::now();
    let left = compute_modular_data(&inflate(&kappa(p, u).unwrap(), &gq).unwrap()).unwrap().0;
    let right = compute_modular_data(&inflate(&kappa(p, v).unwrap(), &gr).unwrap()).unwrap().0;
    let kron = kronecker(&left, &right);
    println!("kronecker: rank {} in {:?}", kron.rank(), start.elapsed());

    let start = Instant::now();
    let (md, simples) = compute_modular_data(&product_cocycle(&gq, &gr, u, v).unwrap()).unwrap();
    println!("direct: rank {}, {} distinct entries, in {:?}", md.rank(), md.values().len(), start.elapsed());
    println!("direct equals kronecker: {}", matches_kronecker(&md, &simples, &kron));

    let orbits = cocycle_galois_orbits(p, true);
    println!("Galois orbits of pairs (u, v) mod {p}: {} {:?}", orbits.count, orbits.orbits);
}
