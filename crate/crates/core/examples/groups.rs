//! Metacyclic groups Z_q ⋊ Z_p: conjugacy classes and centralizers.
//!
//! cargo run --example groups -- pq:5,11

use moddata::groups::Group;

fn main() {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "pq:5,11".into());
    let g: Group = spec.parse().expect("group spec like pq:5,11 or cyclic:12");
    println!("{} of order {}", g.spec(), g.order());
    for class in g.conjugacy_classes() {
        let c = g.centralizer(class.representative);
        let gens: Vec<String> = c.generators.iter().map(|&x| g.format_element(x)).collect();
        println!(
            "  class of {:<6} size {:>3}  centralizer order {:>3}  generated by {}",
            g.format_element(class.representative),
            class.members.len(),
            c.elements.len(),
            gens.join(", ")
        );
    }
}
