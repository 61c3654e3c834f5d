// Confusion counts, F1 and the comparison-table layout, fed with
// published per-emotion scores of a feature-engineered baseline and a
// recurrent model.
//
// ```text
// cargo run --example report_tables
// ```

use emogru::eval::{f1, report_table, ConfusionCounts, EvalReport};
use emogru::Emotion::*;

pub fn run_example() -> String {
    let counts =
        ConfusionCounts::from_pairs([(true, true), (true, false), (false, true), (true, true)]);
    let s = f1(&counts);
    println!(
        "{counts:?} -> precision {:.3} recall {:.3} f1 {:.3}\n",
        s.precision, s.recall, s.f1
    );

    let baseline = EvalReport::from_f1([
        (Joy, 0.721),
        (Sadness, 0.647),
        (Anger, 0.715),
        (Love, 0.515),
        (Fear, 0.439),
        (Thankfulness, 0.571),
        (Surprise, 0.139),
    ]);
    let ours = EvalReport::from_f1([
        (Joy, 0.821),
        (Sadness, 0.792),
        (Anger, 0.837),
        (Love, 0.803),
        (Fear, 0.781),
        (Thankfulness, 0.836),
        (Surprise, 0.756),
    ]);
    let table = report_table(&ours, Some(&baseline));
    print!("{table}");
    table
}

fn main() {
    run_example();
}
