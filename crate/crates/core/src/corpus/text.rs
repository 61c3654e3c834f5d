//! Text-level rules: hashtag curation, normalization, preprocessing and
//! tokenization.

use std::collections::HashMap;

use unicode_general_category::get_general_category;

use super::Emotion;

/// Hashtag (lowercase, with leading `#`) to emotion.
pub type HashtagLexicon = HashMap<String, Emotion>;

fn is_punct(c: char) -> bool {
    matches!(
        get_general_category(c).abbreviation().as_bytes()[0],
        b'P' | b'S'
    )
}

fn is_hashtag(token: &str) -> bool {
    token.starts_with('#')
}

fn strip_trailing_hashtags(tokens: &mut Vec<&str>) {
    while tokens.last().is_some_and(|t| is_hashtag(t)) {
        tokens.pop();
    }
}

/// Hashtag-based distant labeling with the quality filters used to build the
/// source corpus: no quotations, no URLs, at least five terms, and an
/// emotional hashtag as the final term.
///
/// Returns the text without its trailing hashtags and the emotion of the
/// final hashtag.
pub fn wang_curate(text: &str, lexicon: &HashtagLexicon) -> Option<(String, Emotion)> {
    if text.contains(['"', '\u{201c}', '\u{201d}']) {
        return None;
    }
    let lowered = text.to_lowercase();
    if ["http://", "https://", "www."]
        .iter()
        .any(|u| lowered.contains(u))
    {
        return None;
    }
    let mut tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() < 5 {
        return None;
    }
    let emotion = *lexicon.get(&tokens.last()?.to_lowercase())?;
    strip_trailing_hashtags(&mut tokens);
    if tokens.is_empty() {
        return None;
    }
    Some((tokens.join(" "), emotion))
}

/// Collapses every run of more than `max` identical characters to `max`.
fn collapse_repeats(s: &str, max: usize) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev = None;
    let mut run = 0;
    for c in s.chars() {
        if Some(c) == prev {
            run += 1;
        } else {
            prev = Some(c);
            run = 1;
        }
        if run <= max {
            out.push(c);
        }
    }
    out
}

/// Lowercases, replaces user mentions with `@user`, strips hash symbols and
/// squeezes any character repeated more than twice down to two.
pub fn wang_normalize(text: &str) -> String {
    let lowered = text.to_lowercase();
    let tokens: Vec<String> = lowered
        .split_whitespace()
        .filter_map(|tok| {
            let tok = if tok.starts_with('@') {
                "@user".to_string()
            } else {
                collapse_repeats(&tok.replace('#', ""), 2)
            };
            (!tok.is_empty()).then_some(tok)
        })
        .collect();
    tokens.join(" ")
}

/// Splits a whitespace-free token into maximal runs of punctuation and of
/// everything else.
fn punct_runs(token: &str) -> impl Iterator<Item = &str> {
    let mut rest = token;
    std::iter::from_fn(move || {
        let first = rest.chars().next()?;
        let kind = is_punct(first);
        let end = rest
            .char_indices()
            .find(|&(_, c)| is_punct(c) != kind)
            .map_or(rest.len(), |(i, _)| i);
        let (run, tail) = rest.split_at(end);
        rest = tail;
        Some(run)
    })
}

/// Minimal tweet preprocessing: lowercase, commas and line breaks to
/// spaces, trailing hashtags removed, punctuation runs split off the words
/// they touch (`awesome!!` becomes `awesome !!`), whitespace collapsed.
///
/// Hashtags in the middle of a text are kept, with the `#` split off as
/// punctuation. Apostrophes count as punctuation, so `don't` becomes
/// `don ' t`.
pub fn preprocess(text: &str) -> String {
    let lowered = text.to_lowercase().replace(',', " ");
    let mut tokens: Vec<&str> = lowered.split_whitespace().collect();
    strip_trailing_hashtags(&mut tokens);
    let mut pieces: Vec<&str> = tokens.into_iter().flat_map(punct_runs).collect();
    // a `#` glued to the end of a word surfaces as a trailing `#` run
    strip_trailing_hashtags(&mut pieces);
    pieces.join(" ")
}

/// Splits preprocessed text on whitespace.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().map(str::to_owned).collect()
}
