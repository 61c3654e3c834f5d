// Analytic backpropagation-through-time gradients against central finite
// differences on a small random model, then the same check with a
// deliberately corrupted gradient.
//
// ```text
// cargo run --release --example gradient_check
// ```

use emogru::nn::{gradient_check, GradCheckConfig, GradCheckReport, Problem};

pub fn run_example() -> emogru::Result<(GradCheckReport, GradCheckReport)> {
    let cfg = GradCheckConfig {
        seed: 3,
        ..Default::default()
    };
    let clean = gradient_check(&Problem::random(&cfg), &cfg)?;
    for t in &clean.tensors {
        println!(
            "{:<14} {:>5} scalars  max rel err {:.2e}",
            t.name, t.checked, t.max_rel_error
        );
    }
    println!(
        "clean:   max {:.2e} passed={}",
        clean.max_rel_error,
        clean.passed()
    );

    let bad = GradCheckConfig {
        corrupt: true,
        ..cfg
    };
    let corrupted = gradient_check(&Problem::random(&bad), &bad)?;
    println!(
        "corrupt: max {:.2e} passed={}",
        corrupted.max_rel_error,
        corrupted.passed()
    );
    Ok((clean, corrupted))
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
