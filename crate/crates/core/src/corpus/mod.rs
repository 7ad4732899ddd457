//! Corpus ingestion: record parsing, text normalization, religious-autopost
//! filtering, per-user aggregation, and group-level reports.

pub mod aggregate;
pub mod filter;
pub mod ingest;
pub mod lexicon;
pub mod normalize;
pub mod record;
pub mod reports;

pub use aggregate::UserAggregate;
pub use filter::{is_religious_autopost, FilterConfig};
pub use ingest::{Corpus, IngestConfig, IngestOutput, IngestStats};
pub use lexicon::{default_stopwords, Lexicon, MatchMode};
pub use normalize::{normalize_and_tokenize, normalize_text, Token};
pub use record::{FieldMap, RawRecord};
pub use reports::{group_stats, location_breakdown, top_retweeted, GroupStats};

use serde::{Deserialize, Serialize};

/// One normalized tweet. `hashtags`/`mentions` keep per-occurrence
/// duplicates (campaign volume counts occurrences); aggregates dedupe per
/// tweet where the statistic calls for tweet-level containment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: String,
    pub user_id: String,
    pub username: String,
    /// UTC seconds.
    pub timestamp: i64,
    /// Day offset from the corpus start date.
    pub day_index: u32,
    pub text: String,
    pub tokens: Vec<Token>,
    pub hashtags: Vec<String>,
    pub mentions: Vec<String>,
    pub urls: Vec<String>,
    pub has_media: bool,
    /// Author of the retweeted status; present iff the record is a retweet.
    pub retweet_of: Option<String>,
    pub self_declared_location: Option<String>,
}

impl Tweet {
    /// Distinct normalized word tokens, stopwords excluded.
    pub fn distinct_words<'a>(&'a self, stopwords: &Lexicon) -> Vec<&'a str> {
        let mut words: Vec<&str> = self
            .tokens
            .iter()
            .filter_map(|t| match t {
                Token::Word(w) if !stopwords.contains_word(w) => Some(w.as_str()),
                _ => None,
            })
            .collect();
        words.sort_unstable();
        words.dedup();
        words
    }

    /// True when any word token, hashtag, or mention matches a topic term.
    pub fn mentions_topic(&self, topic: &Lexicon) -> bool {
        if topic.matches_tokens(&self.tokens) {
            return true;
        }
        self.hashtags.iter().any(|h| topic.contains_word(h))
            || self.mentions.iter().any(|m| topic.contains_word(m))
    }

    #[doc(hidden)]
    pub fn test_stub(tweet_id: &str, user_id: &str, username: &str) -> Tweet {
        Tweet {
            tweet_id: tweet_id.into(),
            user_id: user_id.into(),
            username: username.into(),
            timestamp: 0,
            day_index: 0,
            text: String::new(),
            tokens: Vec::new(),
            hashtags: Vec::new(),
            mentions: Vec::new(),
            urls: Vec::new(),
            has_media: false,
            retweet_of: None,
            self_declared_location: None,
        }
    }
}
