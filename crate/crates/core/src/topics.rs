//! Weighted-lexicon topic assignment.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{DatasetRecord, TopicScore};
use crate::tsv;

pub const TOPICS_FILE: &str = "topics.tsv";

#[derive(Debug, Clone, PartialEq)]
pub struct TopicPhrase {
    /// Space-joined lower-case tokens.
    pub phrase: String,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topic {
    pub id: String,
    pub phrases: Vec<TopicPhrase>,
}

/// Topics in first-appearance order, each with its weighted phrases.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TopicLexicon {
    topics: Vec<Topic>,
}

impl TopicLexicon {
    /// Parses `topic<TAB>phrase<TAB>weight` lines.
    pub fn parse(content: &str) -> Result<Self> {
        let mut topics: Vec<Topic> = Vec::new();
        for line in tsv::lines(content) {
            line.expect(TOPICS_FILE, 3, 3)?;
            let id = line.fields[0];
            let raw_phrase = line.fields[1];
            if raw_phrase != raw_phrase.to_lowercase() {
                return Err(Error::config(TOPICS_FILE, line.number, format!("phrase {raw_phrase:?} is not lower-case")));
            }
            let phrase = tokens(raw_phrase);
            if phrase.is_empty() {
                return Err(Error::config(TOPICS_FILE, line.number, "phrase has no words"));
            }
            let weight = line.parse_f64(TOPICS_FILE, 2)?;
            if weight <= 0.0 {
                return Err(Error::config(TOPICS_FILE, line.number, "weight must be positive"));
            }
            let topic = match topics.iter_mut().position(|t| t.id == id) {
                Some(i) => &mut topics[i],
                None => {
                    topics.push(Topic {
                        id: id.to_string(),
                        phrases: Vec::new(),
                    });
                    topics.last_mut().unwrap()
                }
            };
            if topic.phrases.iter().any(|p| p.phrase == phrase) {
                return Err(Error::config(TOPICS_FILE, line.number, format!("duplicate phrase {phrase:?} for {id}")));
            }
            topic.phrases.push(TopicPhrase { phrase, weight });
        }
        Ok(TopicLexicon { topics })
    }

    pub fn topics(&self) -> &[Topic] {
        &self.topics
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.topics.iter().map(|t| t.id.as_str())
    }
}

/// Multipliers for matches found in each field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldWeights {
    pub title: f64,
    pub description: f64,
    pub keywords: f64,
    pub page_text: f64,
}

impl Default for FieldWeights {
    fn default() -> Self {
        FieldWeights {
            title: 3.0,
            description: 2.0,
            keywords: 2.0,
            page_text: 1.0,
        }
    }
}

fn tokens(text: &str) -> String {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Text prepared for whole-word phrase lookup.
struct Field {
    padded: String,
    weight: f64,
}

impl Field {
    fn new(text: &str, weight: f64) -> Self {
        Field {
            padded: format!(" {} ", tokens(text)),
            weight,
        }
    }

    fn contains(&self, phrase: &str) -> bool {
        self.padded.contains(&format!(" {phrase} "))
    }
}

/// Unnormalized topic weights: for every phrase present in a field,
/// phrase weight times field weight.
pub fn raw_topic_weights(
    record: &DatasetRecord,
    page_text: Option<&str>,
    lexicon: &TopicLexicon,
    weights: FieldWeights,
) -> BTreeMap<String, f64> {
    let fields = [
        Field::new(&record.title, weights.title),
        Field::new(&record.description, weights.description),
        Field::new(&record.keywords.join(" , "), weights.keywords),
        Field::new(page_text.unwrap_or_default(), weights.page_text),
    ];
    let mut out = BTreeMap::new();
    for topic in &lexicon.topics {
        let mut total = 0.0;
        for p in &topic.phrases {
            for f in &fields {
                if f.contains(&p.phrase) {
                    total += p.weight * f.weight;
                }
            }
        }
        if total > 0.0 {
            out.insert(topic.id.clone(), total);
        }
    }
    out
}

/// Topic scores as shares of the total matched weight, keeping those at or
/// above `threshold`. Sorted by score descending, then topic id.
pub fn assign_topics(
    record: &DatasetRecord,
    page_text: Option<&str>,
    lexicon: &TopicLexicon,
    weights: FieldWeights,
    threshold: f64,
) -> Vec<TopicScore> {
    let raw = raw_topic_weights(record, page_text, lexicon, weights);
    let total: f64 = raw.values().sum();
    if total <= 0.0 {
        return Vec::new();
    }
    let mut scores: Vec<TopicScore> = raw
        .into_iter()
        .map(|(topic, w)| TopicScore { topic, score: w / total })
        .filter(|t| t.score >= threshold)
        .collect();
    scores.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.topic.cmp(&b.topic)));
    scores
}
