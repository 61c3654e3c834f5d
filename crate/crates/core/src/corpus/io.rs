//! Line-oriented file formats: `label<TAB>text` datasets, hashtag
//! lexicons and vocabulary files.

use std::fs;
use std::path::Path;

use super::{Emotion, HashtagLexicon, RawRecord, Vocabulary};
use crate::{Error, Result};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn lines(content: &str) -> impl Iterator<Item = (usize, &str)> {
    content
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Parses `label<TAB>text` records; blank lines are skipped.
pub fn parse_tsv(content: &str) -> Result<Vec<RawRecord>> {
    lines(content)
        .map(|(n, line)| {
            let (label, text) = line
                .split_once('\t')
                .ok_or_else(|| Error::Format(format!("line {n}: missing tab separator")))?;
            RawRecord::new(label.trim(), text)
                .map_err(|_| Error::Format(format!("line {n}: empty text")))
        })
        .collect()
}

pub fn load_tsv(path: impl AsRef<Path>) -> Result<Vec<RawRecord>> {
    let path = path.as_ref();
    parse_tsv(&read(path)?).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// Parses `#hashtag<TAB>emotion` lines. Hashtags are lowercased.
pub fn parse_lexicon(content: &str) -> Result<HashtagLexicon> {
    let mut lex = HashtagLexicon::new();
    for (n, line) in lines(content) {
        let (tag, emotion) = line
            .split_once('\t')
            .ok_or_else(|| Error::Format(format!("line {n}: missing tab separator")))?;
        let tag = tag.trim().to_lowercase();
        if !tag.starts_with('#') || tag.len() < 2 {
            return Err(Error::Format(format!(
                "line {n}: hashtag must start with '#'"
            )));
        }
        let emotion: Emotion = emotion
            .trim()
            .parse()
            .map_err(|e| Error::Format(format!("line {n}: {e}")))?;
        lex.insert(tag, emotion);
    }
    if lex.is_empty() {
        return Err(Error::Format("hashtag lexicon is empty".into()));
    }
    Ok(lex)
}

pub fn load_lexicon(path: impl AsRef<Path>) -> Result<HashtagLexicon> {
    let path = path.as_ref();
    parse_lexicon(&read(path)?).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// One token per line, in index order from index 2.
pub fn write_vocabulary(vocab: &Vocabulary, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    for tok in vocab.tokens() {
        out.push_str(tok);
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_vocabulary(path: impl AsRef<Path>, cap: usize) -> Result<Vocabulary> {
    let path = path.as_ref();
    let tokens = read(path)?.lines().map(str::to_owned).collect();
    Vocabulary::from_tokens(tokens, cap)
}
