//! Exact arithmetic in cyclotomic fields.
//!
//! cargo run --example cyclotomic

use moddata::cyclo::Cyclotomic;

fn main() {
    let z5 = Cyclotomic::root_of_unity(5, 1);
    // 1 + ζ + ζ² + ζ³ + ζ⁴ = 0
    let sum = (0..5).fold(Cyclotomic::zero(), |acc, k| &acc + &Cyclotomic::root_of_unity(5, k));
    println!("sum of fifth roots of unity: {sum} (zero: {})", sum.is_zero());

    // the golden ratio ζ + ζ⁴ + 1 lives in Q(ζ_5) and is real
    let phi = &(&z5 + &Cyclotomic::root_of_unity(5, 4)) + &Cyclotomic::one();
    println!("phi = {phi}, phi^2 - phi = {}", &(&phi * &phi) - &phi);

    // canonical forms pick the minimal conductor: ζ_8² = ζ_4 = i
    let i = Cyclotomic::root_of_unity(8, 2);
    println!("zeta_8^2 = {i}, conductor {}", i.conductor());

    // ζ_3 is written in the basis {ζ_3, ζ_3²}: -1 - ζ_3 = ζ_3²
    let w = &Cyclotomic::from_integer(-1) - &Cyclotomic::root_of_unity(3, 1);
    println!("-1 - E(3) = {w}");

    let x = &Cyclotomic::root_of_unity(25, 3) + &Cyclotomic::from_fraction(1, 2);
    println!("x = {x}");
    println!("sigma_2(x) = {}", x.galois_apply(2).unwrap());
    println!("conj(x) = {}", x.conjugate());
    println!("x as complex = {:?}", x.to_complex());
    println!("json: {}", serde_json::to_string(&x).unwrap());
}
