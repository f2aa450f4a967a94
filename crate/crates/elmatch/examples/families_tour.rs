//! Tour of the likelihood family constructors: the three parametric
//! subclasses, the usual empirical likelihood they share, and the family
//! singled out by the data-free matching theory.
//!
//! Run with: cargo run --example families_tour

use elmatch::likelihood::LikelihoodFamily;
use elmatch::poly::Rational;

fn show(family: &LikelihoodFamily) {
    println!("{}", family.name);
    println!("  a1 = {}", family.a1);
    println!("  a3 = {}", family.a3);
    println!("  b0 = {}", family.b0);
    println!("  b2 = {}", family.b2);
    println!("  b4 = {}", family.b4);
    println!("  b6 = {}", family.b6);
}

fn main() {
    let el = LikelihoodFamily::empirical_likelihood();
    show(&el);
    println!();
    show(&LikelihoodFamily::schennach());
    println!();
    show(&LikelihoodFamily::data_free_matching());
    println!();

    // The usual empirical likelihood is the common member of all three
    // subclasses.
    let members = [
        LikelihoodFamily::cressie_read(Rational::new(1, 3), Rational::new(1, 4)),
        LikelihoodFamily::gel(Rational::new(1, 3), Rational::new(1, 4)),
        LikelihoodFamily::geef(Rational::new(1, 4)),
    ];
    for m in &members {
        println!(
            "{} reduces to the empirical likelihood: {}",
            m.name,
            m.same_coefficients(&el)
        );
    }

    // Families parse from spec strings, including JSON files.
    let parsed: LikelihoodFamily = "geef:mu=1/8".parse().unwrap();
    println!("\nparsed `geef:mu=1/8`: b4 = {}", parsed.b4);
}
