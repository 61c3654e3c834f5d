//! Small deterministic corpora for tests, examples and the bundled `data/`
//! directory.
//!
//! Every generator is a pure function of its size and seed; the bundled
//! files are exactly [`bundle`] at [`BUNDLE_SEED`].

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::RawRecord;
use crate::{Emotion, Error, Result};

pub const BUNDLE_SEED: u64 = 2018;

/// Emotion-neutral words used to pad every synthetic text.
pub const FILLER: [&str; 32] = [
    "the", "a", "today", "was", "my", "day", "at", "work", "we", "went", "to", "see", "movie",
    "with", "friends", "and", "then", "home", "it", "is", "this", "that", "so", "really", "just",
    "one", "more", "time", "again", "week", "morning", "night",
];

/// One cue word per emotion for the seven-emotion corpus.
pub const EMOTION_CUES: [(Emotion, &str); 7] = [
    (Emotion::Joy, "happy"),
    (Emotion::Sadness, "sad"),
    (Emotion::Anger, "angry"),
    (Emotion::Love, "adore"),
    (Emotion::Fear, "scared"),
    (Emotion::Thankfulness, "grateful"),
    (Emotion::Surprise, "wow"),
];

fn cue(emotion: Emotion) -> &'static str {
    EMOTION_CUES
        .iter()
        .find(|(e, _)| *e == emotion)
        .map(|(_, c)| *c)
        .expect("every emotion has a cue")
}

fn fillers(rng: &mut impl Rng, n: usize) -> Vec<&'static str> {
    (0..n)
        .map(|_| *FILLER.choose(rng).expect("non-empty"))
        .collect()
}

fn record(label: impl Into<String>, words: &[&str]) -> RawRecord {
    RawRecord::new(label, words.join(" ")).expect("synthetic text is non-blank")
}

/// Texts of length `len` with `words` placed at sorted random positions.
fn with_words(rng: &mut impl Rng, len: usize, words: &[&'static str]) -> Vec<&'static str> {
    let mut text = fillers(rng, len - words.len());
    let mut slots: Vec<usize> = rand::seq::index::sample(rng, len, words.len()).into_vec();
    slots.sort_unstable();
    for (&slot, &w) in slots.iter().zip(words) {
        text.insert(slot, w);
    }
    text
}

/// Half the texts contain `good` and are labeled joy, the rest sadness.
pub fn keyword_corpus(n: usize, seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let len = rng.gen_range(5..=10);
            if i % 2 == 0 {
                record("joy", &with_words(&mut rng, len, &["good"]))
            } else {
                record("sadness", &fillers(&mut rng, len))
            }
        })
        .collect()
}

/// Every text contains `not` and `good` exactly once; it is labeled sadness
/// when `not` comes first and joy otherwise. Both classes draw their other
/// words from the same distribution, so unigram counts carry no signal.
pub fn negation_corpus(n: usize, seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            let len = rng.gen_range(6..=10);
            if i % 2 == 0 {
                record("sadness", &with_words(&mut rng, len, &["not", "good"]))
            } else {
                record("joy", &with_words(&mut rng, len, &["good", "not"]))
            }
        })
        .collect()
}

/// `per_emotion` texts for each of the seven emotions, each carrying that
/// emotion's cue word.
pub fn emotion_corpus(per_emotion: usize, seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_emotion * 7);
    for _ in 0..per_emotion {
        for (emotion, word) in EMOTION_CUES {
            let len = rng.gen_range(5..=10);
            out.push(record(
                emotion.as_str(),
                &with_words(&mut rng, len, &[word]),
            ));
        }
    }
    out
}

/// Source labels of the cross-dataset toy set and the cue each text carries.
/// `neutral` and `fun` have no counterpart among the seven emotions.
pub const CROSS_LABELS: [(&str, Option<Emotion>); 8] = [
    ("sadness", Some(Emotion::Sadness)),
    ("worry", Some(Emotion::Fear)),
    ("happiness", Some(Emotion::Joy)),
    ("love", Some(Emotion::Love)),
    ("surprise", Some(Emotion::Surprise)),
    ("anger", Some(Emotion::Anger)),
    ("neutral", None),
    ("fun", None),
];

/// Toy stand-in for a differently-labeled source dataset.
pub fn cross_corpus(per_label: usize, seed: u64) -> Vec<RawRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(per_label * CROSS_LABELS.len());
    for _ in 0..per_label {
        for (label, emotion) in CROSS_LABELS {
            let len = rng.gen_range(5..=10);
            let words = match emotion {
                Some(e) => with_words(&mut rng, len, &[cue(e)]),
                None if label == "fun" => with_words(&mut rng, len, &["fun"]),
                None => fillers(&mut rng, len),
            };
            out.push(record(label, &words));
        }
    }
    out
}

/// Label mapping file for [`cross_corpus`].
pub fn cross_mapping() -> String {
    let mut out = String::from("# source label = emotion\n");
    for (label, emotion) in CROSS_LABELS {
        if let Some(e) = emotion {
            out.push_str(&format!("{label}={e}\n"));
        }
    }
    out
}

/// Hashtag lexicon for [`raw_tweets`].
pub fn lexicon() -> String {
    [
        ("#happy", "joy"),
        ("#sad", "sadness"),
        ("#angry", "anger"),
        ("#love", "love"),
        ("#scared", "fear"),
        ("#thankful", "thankfulness"),
        ("#surprised", "surprise"),
    ]
    .iter()
    .map(|(t, e)| format!("{t}\t{e}\n"))
    .collect()
}

/// Raw hashtag-labeled tweets, one per line. Roughly a third fail one of the
/// curation filters.
pub fn raw_tweets(n: usize, seed: u64) -> String {
    const TAGS: [&str; 7] = [
        "#happy",
        "#sad",
        "#angry",
        "#love",
        "#scared",
        "#thankful",
        "#surprised",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::new();
    for i in 0..n {
        let len = rng.gen_range(5..=9);
        let mut words: Vec<String> = fillers(&mut rng, len)
            .into_iter()
            .map(String::from)
            .collect();
        if rng.gen_bool(0.3) {
            words.insert(0, "@someone".into());
        }
        if rng.gen_bool(0.2) {
            words.push("sooooo".into());
        }
        let tag = TAGS.choose(&mut rng).expect("non-empty");
        match i % 9 {
            0 => words.push("http://t.co/x".into()),
            1 => words[0] = format!("\"{}\"", words[0]),
            2 => words.truncate(2),
            3 => {
                words.push(tag.to_string());
                words.push("#nofilter".into());
                out.push_str(&words.join(" "));
                out.push('\n');
                continue;
            }
            _ => {}
        }
        words.push(tag.to_string());
        if rng.gen_bool(0.25) {
            words.push("#blessed".into());
            let n = words.len();
            words.swap(n - 1, n - 2);
        }
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

/// Every word the generators emit except `fun`, which is left out so that
/// it falls back to a random row.
pub fn vector_words() -> Vec<&'static str> {
    let mut words: Vec<&str> = FILLER.to_vec();
    words.extend(["good", "not"]);
    words.extend(EMOTION_CUES.iter().map(|(_, c)| *c));
    words
}

/// Entry range of filler-word vectors relative to content words, loosely
/// mimicking the small norms of frequent function words in trained vectors.
pub const FILLER_SCALE: f32 = 0.25;

/// `.vec`-format text with a `count dim` header, written to five decimals.
/// Content words get uniform ±1 entries, fillers ±[`FILLER_SCALE`].
pub fn word_vectors(dim: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words = vector_words();
    let mut out = format!("{} {dim}\n", words.len());
    for w in words {
        let scale = if FILLER.contains(&w) {
            FILLER_SCALE
        } else {
            1.0
        };
        out.push_str(w);
        for _ in 0..dim {
            out.push_str(&format!(" {:.5}", scale * rng.gen_range(-1.0f32..1.0)));
        }
        out.push('\n');
    }
    out
}

pub fn to_tsv(records: &[RawRecord]) -> String {
    records
        .iter()
        .map(|r| format!("{}\t{}\n", r.label, r.text))
        .collect()
}

pub const VECTOR_DIM: usize = 32;

/// File name and contents of every bundled data file.
pub fn bundle(seed: u64) -> Vec<(&'static str, String)> {
    vec![
        ("keyword.tsv", to_tsv(&keyword_corpus(200, seed))),
        ("negation.tsv", to_tsv(&negation_corpus(1000, seed + 1))),
        ("emotions.tsv", to_tsv(&emotion_corpus(60, seed + 2))),
        ("cross.tsv", to_tsv(&cross_corpus(15, seed + 3))),
        ("cross.map", cross_mapping()),
        ("tweets.txt", raw_tweets(120, seed + 4)),
        ("lexicon.tsv", lexicon()),
        ("vectors.vec", word_vectors(VECTOR_DIM, seed + 5)),
    ]
}

pub fn write_bundle(dir: impl AsRef<Path>, seed: u64) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, content) in bundle(seed) {
        let path = dir.join(name);
        fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
