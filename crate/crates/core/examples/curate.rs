// Distant labeling of raw tweets by their final hashtag.
//
// Reads the bundled `tweets.txt`, keeps tweets that pass the quality
// filters, optionally normalizes them and prints the per-emotion counts.
//
// ```text
// cargo run --example curate
// ```

use std::collections::BTreeMap;
use std::path::Path;

use emogru::cli::count_table;
use emogru::corpus::{load_lexicon, preprocess, wang_curate, wang_normalize};

pub fn run_example() -> emogru::Result<BTreeMap<emogru::Emotion, u64>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let lexicon = load_lexicon(data.join("lexicon.tsv"))?;
    let tweets = std::fs::read_to_string(data.join("tweets.txt"))
        .map_err(|e| emogru::Error::io("tweets.txt", e))?;

    let mut counts = BTreeMap::new();
    for (i, tweet) in tweets.lines().enumerate() {
        let Some((text, emotion)) = wang_curate(tweet, &lexicon) else {
            continue;
        };
        *counts.entry(emotion).or_insert(0) += 1;
        if i < 12 {
            println!("{emotion:<13} {}", preprocess(&wang_normalize(&text)));
        }
    }
    println!();
    print!("{}", count_table(&counts));
    Ok(counts)
}

fn main() -> emogru::Result<()> {
    run_example().map(|_| ())
}
