//! Word/phrase lexicons (sentiment, vulgar, stopwords, topic terms).
//!
//! File format: UTF-8, one entry per line, `#` starts a comment, blank lines
//! ignored. Entries are normalized with the same mapping as tweet text, so a
//! lexicon compiled from raw word lists matches normalized tokens directly.

use std::collections::HashSet;
use std::io::BufRead;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::normalize::{normalize_text, Token};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchMode {
    /// Entries are single tokens; a hit is one matching token.
    Word,
    /// Entries may span several tokens; multi-word entries match exact
    /// consecutive token sequences (no stemming, no gaps).
    Phrase,
}

/// A normalized word/phrase list with a name for reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lexicon {
    pub name: String,
    pub match_mode: MatchMode,
    words: HashSet<String>,
    /// Multi-token entries, each stored as its token sequence.
    phrases: Vec<Vec<String>>,
}

impl Lexicon {
    pub fn new<I, S>(name: &str, match_mode: MatchMode, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut words = HashSet::new();
        let mut phrases = Vec::new();
        for entry in entries {
            let normalized = normalize_text(entry.as_ref());
            let parts: Vec<String> = normalized
                .split_whitespace()
                .map(|s| s.to_string())
                .collect();
            match parts.len() {
                0 => continue,
                1 => {
                    words.insert(parts.into_iter().next().unwrap());
                }
                _ if match_mode == MatchMode::Phrase => phrases.push(parts),
                // word mode flattens multi-word lines into individual words
                _ => words.extend(parts),
            }
        }
        if words.is_empty() && phrases.is_empty() {
            return Err(Error::InvalidConfig(format!("lexicon {name} is empty")));
        }
        phrases.sort();
        phrases.dedup();
        Ok(Lexicon {
            name: name.to_string(),
            match_mode,
            words,
            phrases,
        })
    }

    pub fn from_reader<R: BufRead>(name: &str, match_mode: MatchMode, reader: R) -> Result<Self> {
        let mut entries = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = match line.find('#') {
                Some(pos) => &line[..pos],
                None => &line[..],
            };
            let line = line.trim();
            if !line.is_empty() {
                entries.push(line.to_string());
            }
        }
        Lexicon::new(name, match_mode, entries)
    }

    pub fn from_path(name: &str, match_mode: MatchMode, path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Lexicon::from_reader(name, match_mode, std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.words.len() + self.phrases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    /// True when the token stream hits any entry. Word tokens are matched
    /// against single-word entries; phrase entries match consecutive word
    /// tokens only (hashtags and mentions break a phrase).
    pub fn matches_tokens(&self, tokens: &[Token]) -> bool {
        for t in tokens {
            if let Token::Word(w) = t {
                if self.words.contains(w) {
                    return true;
                }
            }
        }
        if self.phrases.is_empty() {
            return false;
        }
        // phrase scan over maximal runs of word tokens
        let mut run: Vec<&str> = Vec::new();
        for t in tokens.iter().chain(std::iter::once(&Token::Hashtag(String::new()))) {
            match t {
                Token::Word(w) => run.push(w),
                _ => {
                    if !run.is_empty() && self.phrase_in_run(&run) {
                        return true;
                    }
                    run.clear();
                }
            }
        }
        false
    }

    fn phrase_in_run(&self, run: &[&str]) -> bool {
        self.phrases.iter().any(|phrase| {
            phrase.len() <= run.len()
                && run
                    .windows(phrase.len())
                    .any(|w| w.iter().zip(phrase).all(|(a, b)| *a == b))
        })
    }
}

/// Built-in Arabic + English stopword list; callers may load their own file
/// instead. Includes the retweet marker "rt".
pub fn default_stopwords() -> Lexicon {
    Lexicon::from_reader(
        "stopwords",
        MatchMode::Word,
        std::io::Cursor::new(include_str!("../../fixtures/stopwords_default.txt")),
    )
    .expect("built-in stopword list is non-empty")
}
