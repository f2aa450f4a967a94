//! Posterior quantiles of the mean from a concrete data set, under
//! different priors and both expansion orders.
//!
//! Run with: cargo run --example quantiles_from_data

use elmatch::likelihood::LikelihoodFamily;
use elmatch::posterior::{quantile, QuantileOrder};
use elmatch::prior::PriorSpec;
use elmatch::summarize;

fn main() {
    // Waiting times (minutes), right-skewed.
    let data = [
        0.37, 1.8, 0.12, 3.4, 0.95, 2.21, 0.48, 5.7, 1.02, 0.26, 1.54, 0.88, 2.9, 0.41, 1.17,
        0.65, 4.2, 0.19, 1.73, 0.52, 2.45, 0.98, 0.31, 1.4, 3.05, 0.77, 1.9, 0.58, 2.6, 1.12,
    ];
    let summary = summarize(&data).unwrap();
    println!(
        "n = {}, mean = {:.4}, m2 = {:.4}, g3 = {:.4}, g4 = {:.4}\n",
        summary.n, summary.mean, summary.m2, summary.g3, summary.g4
    );

    let family = LikelihoodFamily::empirical_likelihood();
    let priors = [
        ("flat", PriorSpec::Flat),
        ("skew-correcting", PriorSpec::skew_correcting()),
        ("skew+kurtosis", PriorSpec::skew_kurtosis_correcting()),
    ];

    for alpha in [0.05, 0.5, 0.95] {
        println!("alpha = {alpha} (the {:.0}% posterior quantile):", (1.0 - alpha) * 100.0);
        for (name, prior) in &priors {
            let q = quantile(&family, prior, &summary, alpha, QuantileOrder::Second).unwrap();
            println!(
                "  {name:16} theta1 = {:.5}  theta2 = {:.5}  (u1 = {:+.4}, u2 = {:+.4})",
                q.theta1, q.theta2, q.u1, q.u2
            );
        }
        println!();
    }

    // The upper credible bound shifts right under the skewness prior for
    // right-skewed data, exactly the correction frequentist validity needs.
    let flat = quantile(&family, &PriorSpec::Flat, &summary, 0.05, QuantileOrder::First).unwrap();
    let skew = quantile(
        &family,
        &PriorSpec::skew_correcting(),
        &summary,
        0.05,
        QuantileOrder::First,
    )
    .unwrap();
    println!(
        "95% upper bound: flat {:.5} vs skew-corrected {:.5} (shift {:+.5})",
        flat.theta1,
        skew.theta1,
        skew.theta1 - flat.theta1
    );
}
