//! Evaluation on a foreign dataset whose labels are mapped onto the seven
//! emotions.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::{ConfusionCounts, EmotionMetrics, EvalReport, TextScorer};
use crate::corpus::RawRecord;
use crate::{Emotion, Error, Result};

/// Where a source label lands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MappedLabel {
    Emotion(Emotion),
    /// Not mapped: a negative for every classifier (or dropped).
    Unmapped,
}

/// Source-label to emotion translation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMapping {
    map: BTreeMap<String, Emotion>,
}

impl LabelMapping {
    pub fn new() -> Self {
        Self::default()
    }

    /// The CrowdFlower mapping: sadness, worry→fear, happiness→joy, love,
    /// surprise and anger.
    pub fn crowdflower() -> Self {
        let mut m = Self::new();
        for (src, e) in [
            ("sadness", Emotion::Sadness),
            ("worry", Emotion::Fear),
            ("happiness", Emotion::Joy),
            ("love", Emotion::Love),
            ("surprise", Emotion::Surprise),
            ("anger", Emotion::Anger),
        ] {
            m.insert(src, e).expect("distinct labels");
        }
        m
    }

    /// Adds `source → emotion`. Re-adding the same pair is allowed; mapping
    /// one source label to two emotions is not.
    pub fn insert(&mut self, source: &str, emotion: Emotion) -> Result<()> {
        match self.map.insert(source.to_string(), emotion) {
            Some(prev) if prev != emotion => Err(Error::Format(format!(
                "label {source:?} mapped to both {prev} and {emotion}"
            ))),
            _ => Ok(()),
        }
    }

    /// Parses `source=emotion` lines; `#` starts a comment.
    pub fn parse(content: &str) -> Result<Self> {
        let mut m = Self::new();
        for (n, line) in content.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (src, emotion) = line
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("line {}: expected source=emotion", n + 1)))?;
            let emotion = emotion
                .trim()
                .parse()
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 1)))?;
            m.insert(src.trim(), emotion)
                .map_err(|e| Error::Format(format!("line {}: {e}", n + 1)))?;
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let content = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&content)
    }

    pub fn get(&self, source: &str) -> MappedLabel {
        self.map
            .get(source)
            .map_or(MappedLabel::Unmapped, |&e| MappedLabel::Emotion(e))
    }

    /// Emotions that some source label maps to.
    pub fn range(&self) -> BTreeSet<Emotion> {
        self.map.values().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossOptions {
    pub threshold: f64,
    /// Discard records with unmapped labels instead of counting them as
    /// negatives for every emotion.
    pub drop_unmapped: bool,
}

impl Default for CrossOptions {
    fn default() -> Self {
        CrossOptions {
            threshold: 0.5,
            drop_unmapped: false,
        }
    }
}

/// One-vs-rest evaluation of per-emotion scorers on mapped records. Only
/// emotions in the mapping's range are evaluated; each needs a scorer.
pub fn evaluate_cross(
    scorers: &[&dyn TextScorer],
    records: &[RawRecord],
    mapping: &LabelMapping,
    opts: CrossOptions,
) -> Result<EvalReport> {
    let mut by_emotion: BTreeMap<Emotion, &dyn TextScorer> = BTreeMap::new();
    for &s in scorers {
        by_emotion.insert(s.emotion(), s);
    }
    let targets = mapping.range();
    if let Some(missing) = targets.iter().find(|e| !by_emotion.contains_key(e)) {
        return Err(Error::Data(format!(
            "no classifier for mapped emotion {missing}"
        )));
    }

    let gold: Vec<(usize, MappedLabel)> = records
        .iter()
        .enumerate()
        .map(|(i, r)| (i, mapping.get(&r.label)))
        .filter(|(_, g)| !(opts.drop_unmapped && *g == MappedLabel::Unmapped))
        .collect();

    let mut per_emotion = BTreeMap::new();
    for &emotion in &targets {
        let scorer = by_emotion[&emotion];
        let scores: Vec<f64> = gold
            .par_iter()
            .map(|(i, _)| scorer.score(&records[*i].text))
            .collect::<Result<_>>()?;
        let counts = ConfusionCounts::from_pairs(
            scores
                .iter()
                .zip(&gold)
                .map(|(&s, (_, g))| (s >= opts.threshold, *g == MappedLabel::Emotion(emotion))),
        );
        per_emotion.insert(emotion, EmotionMetrics::from(counts));
    }
    Ok(EvalReport::new(per_emotion))
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Keyword(Emotion, &'static str);

    impl TextScorer for Keyword {
        fn emotion(&self) -> Emotion {
            self.0
        }
        fn score(&self, text: &str) -> Result<f64> {
            Ok(if text.contains(self.1) { 0.9 } else { 0.1 })
        }
    }

    fn rec(label: &str, text: &str) -> RawRecord {
        RawRecord::new(label, text).unwrap()
    }

    #[test]
    fn crowdflower_mapping() {
        let m = LabelMapping::crowdflower();
        assert_eq!(m.get("worry"), MappedLabel::Emotion(Emotion::Fear));
        assert_eq!(m.get("happiness"), MappedLabel::Emotion(Emotion::Joy));
        assert_eq!(m.get("neutral"), MappedLabel::Unmapped);
        assert_eq!(m.range().len(), 6);
        assert!(!m.range().contains(&Emotion::Thankfulness));
    }

    #[test]
    fn parse_mapping_file() {
        let m = LabelMapping::parse("# cf labels\nworry=fear\nhappiness = joy\n\n").unwrap();
        assert_eq!(m.get("worry"), MappedLabel::Emotion(Emotion::Fear));
        assert_eq!(m.range().len(), 2);
        assert!(LabelMapping::parse("worry=fear\nworry=joy").is_err());
        assert!(LabelMapping::parse("worry fear").is_err());
        assert!(LabelMapping::parse("worry=boredom").is_err());
        assert!(LabelMapping::parse("worry=fear\nworry=fear").is_ok());
    }

    #[test]
    fn neutral_is_negative_everywhere() {
        let fear = Keyword(Emotion::Fear, "scared");
        let mut m = LabelMapping::new();
        m.insert("worry", Emotion::Fear).unwrap();
        let records = [
            rec("worry", "so scared"),
            rec("neutral", "meh"),
            rec("neutral", "scared cat"),
        ];
        let r = evaluate_cross(&[&fear], &records, &m, CrossOptions::default()).unwrap();
        let c = r.per_emotion[&Emotion::Fear].counts;
        assert_eq!((c.tp, c.fp, c.tn, c.fn_), (1, 1, 1, 0));
        let dropped = evaluate_cross(
            &[&fear],
            &records,
            &m,
            CrossOptions {
                drop_unmapped: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(dropped.per_emotion[&Emotion::Fear].counts.total(), 1);
    }

    #[test]
    fn missing_scorer_is_an_error() {
        let fear = Keyword(Emotion::Fear, "scared");
        let err = evaluate_cross(
            &[&fear],
            &[rec("sadness", "x")],
            &LabelMapping::crowdflower(),
            CrossOptions::default(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("no classifier"), "{err}");
    }
}
