use std::fmt::Write;

use super::EvalReport;

fn pct(x: f64) -> String {
    format!("{:.1}", 100.0 * x)
}

/// Plain-text F1 table in percent, one row per emotion and an `Average`
/// row. With a baseline, adds baseline and difference columns; emotions the
/// baseline lacks show `-`.
pub fn report_table(report: &EvalReport, baseline: Option<&EvalReport>) -> String {
    let mut out = String::new();
    let row = |out: &mut String, name: &str, cells: &[String]| {
        let _ = write!(out, "{name:<14}");
        for c in cells {
            let _ = write!(out, " {c:>12}");
        }
        out.push('\n');
    };
    match baseline {
        None => row(&mut out, "Emotion", &["Ours%".into()]),
        Some(_) => row(
            &mut out,
            "Emotion",
            &["Baseline%".into(), "Ours%".into(), "Difference%".into()],
        ),
    }
    for (emotion, m) in &report.per_emotion {
        let cells = match baseline {
            None => vec![pct(m.f1)],
            Some(b) => match b.per_emotion.get(emotion) {
                Some(bm) => vec![pct(bm.f1), pct(m.f1), pct(m.f1 - bm.f1)],
                None => vec!["-".into(), pct(m.f1), "-".into()],
            },
        };
        row(&mut out, emotion.as_str(), &cells);
    }
    let cells = match baseline {
        None => vec![pct(report.macro_f1)],
        Some(b) => vec![
            pct(b.macro_f1),
            pct(report.macro_f1),
            pct(report.macro_f1 - b.macro_f1),
        ],
    };
    row(&mut out, "Average", &cells);
    out
}
