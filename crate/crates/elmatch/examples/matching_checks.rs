//! Symbolic matching checks: which families admit a data-dependent prior
//! making their posterior quantiles frequentist-valid, at which margin, and
//! what that prior is.
//!
//! Run with: cargo run --example matching_checks

use elmatch::matching::{check, MatchOrder, MatchingReport, PriorClass};
use elmatch::likelihood::LikelihoodFamily;
use elmatch::poly::Rational;

fn report(rep: &MatchingReport) {
    println!(
        "{} / order {:?} / {:?} priors:",
        rep.family, rep.order, rep.prior_class
    );
    for c in &rep.conditions {
        println!(
            "  {}: {} (residual {})",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.residual
        );
    }
    if rep.feasible {
        if let Some(chi) = &rep.chi {
            println!("  derived chi    = {chi}");
        }
        if let Some(lambda) = &rep.lambda {
            println!("  derived lambda = {lambda}");
        }
    } else {
        println!("  no matching prior in this class at this margin");
    }
    println!();
}

fn main() {
    let el = LikelihoodFamily::empirical_likelihood();
    let schennach = LikelihoodFamily::schennach();
    let off_slope = LikelihoodFamily::cressie_read(Rational::new(1, 2), Rational::new(1, 4));
    let fm = LikelihoodFamily::data_free_matching();

    // Order √n: a single condition on the cubic coefficient. Every member
    // of the exponential-family subclass passes with chi = -s/2.
    report(&check(&el, MatchOrder::Half, PriorClass::Simple));
    report(&check(&off_slope, MatchOrder::Half, PriorClass::Simple));

    // Order 1/n over simple priors: no standard likelihood passes; the
    // data-free-matching family does, and its derived prior is flat.
    report(&check(&el, MatchOrder::One, PriorClass::Simple));
    report(&check(&fm, MatchOrder::One, PriorClass::Simple));

    // Order 1/n over elaborate priors: the b2 condition disappears, and the
    // usual empirical likelihood becomes feasible with a quadratic prior.
    report(&check(&el, MatchOrder::One, PriorClass::Elaborate));
    report(&check(&schennach, MatchOrder::One, PriorClass::Elaborate));
}
