//! The exact polynomial layer underlying all symbolic checks: rationals,
//! sparse bivariate polynomials, text and JSON forms.
//!
//! Run with: cargo run --example polynomial_algebra

use elmatch::poly::{Poly2, Rational};

fn main() {
    // Build 5/4 s^2 - 2/3 k + 2 three ways.
    let built = Poly2::from_terms([
        (2, 0, Rational::new(5, 4)),
        (0, 1, Rational::new(-2, 3)),
        (0, 0, Rational::new(2, 1)),
    ]);
    let parsed: Poly2 = "5/4*s^2 - 2/3*k + 2".parse().unwrap();
    let s = Poly2::var_s();
    let k = Poly2::var_k();
    let composed = &(&(&s * &s).scale(&Rational::new(5, 4)) - &k.scale(&Rational::new(2, 3)))
        + &Poly2::from_int(2);
    assert_eq!(built, parsed);
    assert_eq!(built, composed);
    println!("lambda        = {built}");

    // Exact arithmetic: derivative, product, evaluation.
    println!("d lambda / ds = {}", built.deriv_s());
    let chi: Poly2 = "-1/2*s".parse().unwrap();
    println!("chi^2         = {}", &chi * &chi);
    println!("lambda(0, 3)  = {}", built.eval(0.0, 3.0));
    println!("lambda(2, 9)  = {}", built.eval(2.0, 9.0));
    println!(
        "exact at (2/3, 10/3): {}",
        built.eval_exact(&Rational::new(2, 3), &Rational::new(10, 3))
    );

    // Zero never hides: cancellation empties the term map.
    let diff = &built - &parsed;
    println!("lambda - lambda is zero: {} ({} terms)", diff.is_zero(), diff.num_terms());

    // JSON form used by the family file interface.
    println!("\nJSON: {}", serde_json::to_string(&built).unwrap());
}
