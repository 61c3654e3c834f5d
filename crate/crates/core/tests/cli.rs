mod common;

use std::fs;

use common::{data, run, vectors, zero_checkpoint};
use emogru::train::save_checkpoint;
use emogru::Emotion;

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn curate_prints_seven_emotions_and_total() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.tsv");
    let r = run(
        &[
            "curate",
            "--input",
            s(&data("tweets.txt")),
            "--lexicon",
            s(&data("lexicon.tsv")),
            "--output",
            s(&out),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 9);
    for (line, e) in lines[1..8].iter().zip(Emotion::ALL) {
        assert_eq!(line.split_whitespace().next(), Some(e.as_str()));
    }
    let total: usize = lines[8]
        .split_whitespace()
        .nth(1)
        .unwrap()
        .replace(',', "")
        .parse()
        .unwrap();
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), total);
    assert!(total > 0);
}

#[test]
fn curate_empty_input_and_missing_lexicon() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.txt");
    fs::write(&input, "").unwrap();
    let out = dir.path().join("c.tsv");
    let r = run(
        &[
            "curate",
            "--input",
            s(&input),
            "--lexicon",
            s(&data("lexicon.tsv")),
            "--output",
            s(&out),
        ],
        "",
    );
    assert_eq!(r.code, 0);
    assert_eq!(fs::read_to_string(&out).unwrap(), "");
    assert!(r.stdout.lines().skip(1).all(|l| l.ends_with(" 0")));

    let r = run(
        &[
            "curate",
            "--input",
            s(&input),
            "--lexicon",
            s(&dir.path().join("none.tsv")),
            "--output",
            s(&out),
        ],
        "",
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("none.tsv"));
}

#[test]
fn train_with_fixed_seed_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let stem = dir.path().join(name);
        let r = run(
            &[
                "train",
                "--data",
                s(&data("keyword.tsv")),
                "--emotion",
                "joy",
                "--embeddings",
                s(&data("vectors.vec")),
                "--out",
                s(&stem),
                "--seed",
                "1",
                "--epochs",
                "3",
                "--hidden",
                "8",
            ],
            "",
        );
        assert_eq!(r.code, 0, "{}", r.stderr);
        assert_eq!(
            r.stdout.lines().filter(|l| l.contains(" epoch ")).count(),
            3
        );
        outputs.push((
            r.stdout,
            fs::read(dir.path().join(format!("{name}.manifest.json"))).unwrap(),
            fs::read(dir.path().join(format!("{name}.weights.bin"))).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# small run\nepochs=2\nhidden=6\nno-mask=true\n").unwrap();
    let stem = dir.path().join("m");
    let r = run(
        &[
            "train",
            "--config",
            s(&cfg),
            "--epochs",
            "1",
            "--data",
            s(&data("keyword.tsv")),
            "--emotion",
            "joy",
            "--embeddings",
            s(&data("vectors.vec")),
            "--out",
            s(&stem),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("m.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["config"]["epochs"], 1);
    assert_eq!(manifest["config"]["hidden_size"], 6);
    assert_eq!(manifest["config"]["mask_aware"], false);

    fs::write(&cfg, "epochs=2\nwarp=9\n").unwrap();
    let r = run(&["gradcheck", "--config", s(&cfg)], "");
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("unknown config key"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"], "").code, 1);
    assert_eq!(run(&["train", "--data", "x"], "").code, 1);
    assert_eq!(
        run(
            &[
                "baseline",
                "--data",
                "x",
                "--emotion",
                "joy",
                "--ngram",
                "3"
            ],
            ""
        )
        .code,
        1
    );
    let r = run(
        &[
            "train",
            "--data",
            "x",
            "--emotion",
            "joy",
            "--embeddings",
            "y",
            "--out",
            "z",
            "--epochs",
            "0",
        ],
        "",
    );
    assert_eq!(r.code, 1);
    assert_eq!(run(&["--help"], "").code, 0);
}

#[test]
fn predict_zero_model_scores_half() {
    let dir = tempfile::tempdir().unwrap();
    let vectors = vectors();
    let stem = dir.path().join("joy");
    save_checkpoint(&zero_checkpoint(Emotion::Joy, &vectors), &stem).unwrap();
    let stem2 = dir.path().join("fear");
    save_checkpoint(&zero_checkpoint(Emotion::Fear, &vectors), &stem2).unwrap();
    let vec_path = data("vectors.vec");
    let args = [
        "predict",
        "--checkpoint",
        s(&stem),
        "--checkpoint",
        s(&stem2),
        "--embeddings",
        s(&vec_path),
    ];

    let r = run(&args, "a good day\nunseen words only!\n");
    assert_eq!(r.code, 0, "{}", r.stderr);
    let lines: Vec<serde_json::Value> = r
        .stdout
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["text"], "a good day");
    for line in &lines {
        assert_eq!(line["scores"]["joy"], 0.5);
        assert_eq!(line["scores"]["fear"], 0.5);
    }

    let r = run(&args, "");
    assert_eq!((r.code, r.stdout.as_str()), (0, ""));
}

#[test]
fn checkpoint_against_wrong_embeddings_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("joy");
    save_checkpoint(&zero_checkpoint(Emotion::Joy, &vectors()), &stem).unwrap();
    let other = dir.path().join("other.vec");
    fs::write(&other, "good 1 2 3\nday 4 5 6\n").unwrap();
    let r = run(
        &[
            "predict",
            "--checkpoint",
            s(&stem),
            "--embeddings",
            s(&other),
        ],
        "hi\n",
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("checksum"), "{}", r.stderr);
}

#[test]
fn gradcheck_exit_codes() {
    let r = run(&["gradcheck", "--seeds", "1"], "");
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("PASS"));
    assert_eq!(r.stdout.lines().filter(|l| l.starts_with("  ")).count(), 22);

    let r = run(&["gradcheck", "--seeds", "1", "--corrupt"], "");
    assert_eq!(r.code, 3);
    assert!(r.stdout.contains("FAIL"));
}

#[test]
fn baseline_and_cross_eval() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("bow.json");
    let dump = dir.path().join("dump");
    let r = run(
        &[
            "baseline",
            "--data",
            s(&data("negation.tsv")),
            "--emotion",
            "sadness",
            "--ngram",
            "1",
            "--report",
            s(&report),
            "--dump",
            s(&dump),
        ],
        "",
    );
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.lines().last().unwrap().starts_with("Average"));
    let weights: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dump.join("sadness.json")).unwrap()).unwrap();
    assert!(weights["weights"].get("not_good").is_none());
    assert!(weights["weights"].get("not").is_some());

    // Cross evaluation needs a classifier for every mapped emotion.
    let vectors = vectors();
    let stem = dir.path().join("joy");
    save_checkpoint(&zero_checkpoint(Emotion::Joy, &vectors), &stem).unwrap();
    let r = run(
        &[
            "eval",
            "--checkpoint",
            s(&stem),
            "--data",
            s(&data("cross.tsv")),
            "--embeddings",
            s(&data("vectors.vec")),
            "--mapping",
            s(&data("cross.map")),
        ],
        "",
    );
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("no classifier for mapped emotion"));
}
