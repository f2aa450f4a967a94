//! Monte Carlo coverage of the posterior quantiles versus the expansion's
//! prediction, at modest replication counts.
//!
//! Run with: cargo run --example coverage_simulation

use elmatch::edgeworth::predict_coverage;
use elmatch::likelihood::LikelihoodFamily;
use elmatch::matching::MatchOrder;
use elmatch::moments::Distribution;
use elmatch::posterior::QuantileOrder;
use elmatch::prior::PriorSpec;
use elmatch::simulate::{run_coverage, SimConfig};

fn main() {
    let family = LikelihoodFamily::empirical_likelihood();
    let prior = PriorSpec::skew_correcting();
    let dist = Distribution::Exponential;
    let alpha = 0.05;
    let reps = 20_000;
    let seed = 42;

    println!(
        "{} population, nominal {:.2}, {} replications, seed {}\n",
        dist,
        1.0 - alpha,
        reps,
        seed
    );
    println!(
        "{:>5} {:>10} {:>10} {:>10} {:>10}",
        "n", "order-1", "order-2", "predicted", "mc se"
    );
    for n in [10usize, 20, 50, 100, 200] {
        let mut config = SimConfig::new(
            dist,
            n,
            alpha,
            reps,
            family.clone(),
            prior.clone(),
            QuantileOrder::First,
            seed,
        )
        .unwrap();
        let first = run_coverage(&config, None);
        config.order = QuantileOrder::Second;
        let second = run_coverage(&config, None);
        let predicted =
            predict_coverage(&family, &prior, &dist.moments(), n, alpha, MatchOrder::One)
                .unwrap()
                .predicted_coverage;
        println!(
            "{:>5} {:>10.4} {:>10.4} {:>10.4} {:>10.4}",
            n, first.coverage, second.coverage, predicted, second.mc_stderr
        );
    }

    println!(
        "\nThe second-order quantile under the matched prior tracks the\n\
         prediction as n grows; the first-order one converges more slowly\n\
         on this heavily skewed population."
    );
}
