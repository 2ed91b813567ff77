//! Exponential sums of the running example: direct evaluation, the expansion
//! through zeta coefficients, and the decay of max |E| against p^{beta m}.
use igusa::expsum::{decay_report, exp_sum_denef_many, exp_sum_direct, DecayOptions, DEFAULT_POINT_BUDGET};
use igusa::padic::MeasureOptions;
use igusa::zeta::example_polynomial;

fn main() {
    let f = example_polynomial();
    let p = 5;
    for m in 1..=3 {
        for r in exp_sum_denef_many(&f, p, m, &[1, 2], &MeasureOptions::default()).unwrap() {
            let d = exp_sum_direct(&f, p, m, r.u, DEFAULT_POINT_BUDGET).unwrap();
            println!("m={m} u={}  denef {:.10}  direct {:.10}", r.u, r.value(), d.value());
        }
    }
    let report = decay_report(&f, p, 4, &DecayOptions::default()).unwrap();
    for row in &report.rows {
        println!("m={} max|E|={:.6e} ratio={:.4}", row.m, row.max_abs, row.ratio);
    }
    println!("beta = {}, rho = {:.4}, violated: {}", report.beta, report.rho, report.violated);
}
