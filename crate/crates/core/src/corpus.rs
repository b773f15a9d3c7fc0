//! Pre-lemmatized corpus loading, filtering and frequency indexing.
//!
//! Input is line-oriented UTF-8 text: one sentence per line, tokens separated
//! by whitespace, each token either `lemma` or `lemma/POS`. Lemmatization and
//! tagging happen upstream; this module only filters and counts.

use std::borrow::Borrow;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lemmatized word form. Non-empty, contains no whitespace.
///
/// Comparison is exact string equality; loaders lowercase before
/// constructing, no further normalization is applied.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Lemma(String);

impl Lemma {
    pub fn new(text: impl Into<String>) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::InvalidLemma {
                text,
                reason: "empty",
            });
        }
        if text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidLemma {
                text,
                reason: "contains whitespace",
            });
        }
        Ok(Lemma(text))
    }

    /// Lowercases `text` and constructs a lemma, the normalization every
    /// loader applies.
    pub fn lowercased(text: &str) -> Result<Self> {
        Self::new(text.to_lowercase())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Lemma {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl Borrow<str> for Lemma {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Lemma {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Lemma::new(value)
    }
}

impl TryFrom<&str> for Lemma {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Lemma::new(value)
    }
}

impl From<Lemma> for String {
    fn from(value: Lemma) -> Self {
        value.0
    }
}

/// POS tags accepted by the default filter: plain `N`, Universal `NOUN` and
/// the national-corpus style `S`.
pub const DEFAULT_NOUN_TAGS: &[&str] = &["N", "NOUN", "S"];

/// Token-level filter applied while loading a corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterConfig {
    /// Lemmas dropped regardless of tag.
    pub stopwords: HashSet<Lemma>,
    /// When present, only tokens whose POS tag is in the set survive
    /// (untagged tokens are dropped). `None` keeps every token.
    pub keep_pos: Option<HashSet<String>>,
    /// Drop sentences that contain no Cyrillic characters at all.
    pub require_cyrillic: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            stopwords: HashSet::new(),
            keep_pos: Some(DEFAULT_NOUN_TAGS.iter().map(|t| t.to_string()).collect()),
            require_cyrillic: false,
        }
    }
}

impl FilterConfig {
    /// Keeps every token: no stopwords, no POS restriction.
    pub fn keep_all() -> Self {
        FilterConfig {
            stopwords: HashSet::new(),
            keep_pos: None,
            require_cyrillic: false,
        }
    }
}

/// A filtered corpus: sentences of lemmas plus the token frequency index.
///
/// Immutable after loading; safe to share across threads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    sentences: Vec<Vec<Lemma>>,
    token_count: usize,
    frequency_index: HashMap<Lemma, u64>,
}

impl Corpus {
    pub fn sentences(&self) -> &[Vec<Lemma>] {
        &self.sentences
    }

    pub fn token_count(&self) -> usize {
        self.token_count
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }

    /// Number of distinct lemmas.
    pub fn vocabulary_size(&self) -> usize {
        self.frequency_index.len()
    }

    /// Absolute frequency of `w`, 0 when absent.
    pub fn frequency(&self, w: &Lemma) -> u64 {
        self.frequency_index.get(w).copied().unwrap_or(0)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = (&Lemma, u64)> {
        self.frequency_index.iter().map(|(l, &f)| (l, f))
    }

    /// Appends another corpus; frequencies are summed.
    pub fn merge(&mut self, other: Corpus) {
        self.token_count += other.token_count;
        self.sentences.extend(other.sentences);
        for (lemma, count) in other.frequency_index {
            *self.frequency_index.entry(lemma).or_insert(0) += count;
        }
    }

    fn push_sentence(&mut self, sentence: Vec<Lemma>) {
        self.token_count += sentence.len();
        for lemma in &sentence {
            *self.frequency_index.entry(lemma.clone()).or_insert(0) += 1;
        }
        self.sentences.push(sentence);
    }
}

fn is_cyrillic(c: char) -> bool {
    ('\u{0400}'..='\u{04FF}').contains(&c) || ('\u{0500}'..='\u{052F}').contains(&c)
}

/// Splits a raw token into `(lemma, tag)`. At most one `/` separator is
/// allowed and the lemma part must be non-empty.
fn split_token(token: &str) -> std::result::Result<(&str, Option<&str>), String> {
    let mut parts = token.splitn(3, '/');
    let lemma = parts.next().unwrap_or("");
    let tag = parts.next();
    if parts.next().is_some() {
        return Err(format!("token {token:?} has more than one '/' separator"));
    }
    if lemma.is_empty() {
        return Err(format!("token {token:?} has an empty lemma"));
    }
    Ok((lemma, tag))
}

/// Loads a corpus from a line-oriented stream, applying `config`.
///
/// Empty lines and sentences that become empty after filtering are dropped
/// silently; malformed tokens abort with the 1-based line number.
pub fn load_corpus<R: BufRead>(reader: R, config: &FilterConfig) -> Result<Corpus> {
    let mut corpus = Corpus::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        load_line(&line, line_no, config, &mut corpus)?;
    }
    Ok(corpus)
}

fn load_line(line: &str, line_no: usize, config: &FilterConfig, corpus: &mut Corpus) -> Result<()> {
    let mut tokens = Vec::new();
    for raw in line.split_whitespace() {
        let (lemma, tag) = split_token(raw).map_err(|message| Error::InputFormat {
            line: line_no,
            message,
        })?;
        tokens.push((lemma.to_lowercase(), tag));
    }
    if config.require_cyrillic && !tokens.iter().any(|(l, _)| l.chars().any(is_cyrillic)) {
        return Ok(());
    }
    let mut sentence = Vec::new();
    for (lemma, tag) in tokens {
        if let Some(keep) = &config.keep_pos {
            if !tag.is_some_and(|t| keep.contains(t)) {
                continue;
            }
        }
        if config.stopwords.contains(lemma.as_str()) {
            continue;
        }
        let lemma = Lemma::new(lemma).map_err(|e| Error::InputFormat {
            line: line_no,
            message: e.to_string(),
        })?;
        sentence.push(lemma);
    }
    if !sentence.is_empty() {
        corpus.push_sentence(sentence);
    }
    Ok(())
}

/// Loads a stopword list: one lemma per line, lowercased, blank lines skipped.
pub fn load_stopwords<R: BufRead>(reader: R) -> Result<HashSet<Lemma>> {
    let mut stopwords = HashSet::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let word = line.trim();
        if word.is_empty() {
            continue;
        }
        let lemma = Lemma::lowercased(word).map_err(|e| Error::InputFormat {
            line: idx + 1,
            message: e.to_string(),
        })?;
        stopwords.insert(lemma);
    }
    Ok(stopwords)
}
