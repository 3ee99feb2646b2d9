//! 3-cocycles inflated from Z_p, their transgressions α_g and the
//! trivializing 1-cochains μ.
//!
//! cargo run --example cocycles

use moddata::cohomology::{inflate, kappa, solve_mu, transgress_alpha};
use moddata::groups::Group;

fn main() {
    let (p, q, u) = (5, 11, 2);
    let g = Group::metacyclic(p, q, None).unwrap();
    let omega = inflate(&kappa(p, u).unwrap(), &g).unwrap();
    omega.verify_exhaustive().map(|_| println!("cocycle identity holds on all of G^4")).unwrap_or_else(|w| {
        println!("cocycle identity fails at {w:?}");
    });

    let b = g.meta(0, 1);
    let a = g.meta(1, 0);
    println!("omega(b,b,b^4) = {}", omega.eval(b, b, g.pow(b, 4)).to_cyclotomic());
    println!("omega(a,b,b)   = {}", omega.eval(a, b, b).to_cyclotomic());

    for class in g.conjugacy_classes() {
        let alpha = transgress_alpha(&omega, class.representative);
        // the generic solver needs a cyclic centralizer; C(1) = G is not
        let values: Vec<String> = match solve_mu(&alpha, None) {
            Ok(mu) => alpha.domain().elements.iter().take(5).map(|&x| mu.eval(x).to_cyclotomic().to_string()).collect(),
            Err(e) => vec![format!("({e})")],
        };
        println!(
            "  g = {:<5} alpha trivial: {:<5}  mu on first elements: {}",
            g.format_element(class.representative),
            alpha.is_trivial(),
            values.join(", ")
        );
    }
}
