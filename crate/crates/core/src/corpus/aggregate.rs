//! Per-user aggregates.
//!
//! An aggregate holds everything needed to compute a user's full feature
//! vector without re-reading the corpus. Plain tallies are not enough for
//! the top-n coverage features ("tweets containing at least one of the
//! user's n most-used items"): a tweet with two top hashtags must count
//! once. So besides the tallies, the aggregate keeps one compact record per
//! tweet with its distinct items, interned against a per-user vocabulary.
//!
//! Merging two aggregates for the same user is associative and commutative
//! up to internal ordering; `PartialEq` compares the canonical form, so
//! sharded ingestion equals single-pass ingestion exactly.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::corpus::lexicon::Lexicon;
use crate::corpus::Tweet;

/// Item classes tracked per tweet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ItemClass {
    Retweeted,
    Mentioned,
    Hashtags,
    Words,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct TweetItems {
    #[serde(rename = "r", skip_serializing_if = "Option::is_none", default)]
    retweet: Option<u32>,
    #[serde(rename = "h", skip_serializing_if = "Vec::is_empty", default)]
    hashtags: Vec<u32>,
    #[serde(rename = "m", skip_serializing_if = "Vec::is_empty", default)]
    mentions: Vec<u32>,
    #[serde(rename = "w", skip_serializing_if = "Vec::is_empty", default)]
    words: Vec<u32>,
}

impl TweetItems {
    fn of_class(&self, class: ItemClass) -> &[u32] {
        match class {
            ItemClass::Retweeted => self.retweet.as_slice(),
            ItemClass::Mentioned => &self.mentions,
            ItemClass::Hashtags => &self.hashtags,
            ItemClass::Words => &self.words,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ItemLog {
    vocab: Vec<String>,
    tweets: Vec<TweetItems>,
    #[serde(skip)]
    lookup: HashMap<String, u32>,
}

impl ItemLog {
    fn ensure_lookup(&mut self) {
        if self.lookup.len() != self.vocab.len() {
            self.lookup = self
                .vocab
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect();
        }
    }

    fn intern(&mut self, item: &str) -> u32 {
        if let Some(&id) = self.lookup.get(item) {
            return id;
        }
        let id = self.vocab.len() as u32;
        self.vocab.push(item.to_string());
        self.lookup.insert(item.to_string(), id);
        id
    }

    fn merge(&mut self, other: &ItemLog) {
        self.ensure_lookup();
        let remap: Vec<u32> = other.vocab.iter().map(|s| self.intern(s)).collect();
        for t in &other.tweets {
            self.tweets.push(TweetItems {
                retweet: t.retweet.map(|id| remap[id as usize]),
                hashtags: t.hashtags.iter().map(|&id| remap[id as usize]).collect(),
                mentions: t.mentions.iter().map(|&id| remap[id as usize]).collect(),
                words: t.words.iter().map(|&id| remap[id as usize]).collect(),
            });
        }
    }

    fn resolve(&self, ids: &[u32]) -> Vec<&str> {
        let mut v: Vec<&str> = ids.iter().map(|&id| self.vocab[id as usize].as_str()).collect();
        v.sort_unstable();
        v
    }

    fn canonical(&self) -> Vec<(Option<&str>, Vec<&str>, Vec<&str>, Vec<&str>)> {
        let mut all: Vec<_> = self
            .tweets
            .iter()
            .map(|t| {
                (
                    t.retweet.map(|id| self.vocab[id as usize].as_str()),
                    self.resolve(&t.hashtags),
                    self.resolve(&t.mentions),
                    self.resolve(&t.words),
                )
            })
            .collect();
        all.sort();
        all
    }
}

/// Most recent self-declared location, keyed so merges are order-free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationStamp {
    pub timestamp: i64,
    pub tweet_id: String,
    pub location: String,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct UserAggregate {
    pub user_id: String,
    /// Tweets surviving the religious-autopost filter.
    pub total_tweets: u64,
    pub retweet_count: u64,
    pub url_count: u64,
    pub hashtag_tweet_count: u64,
    pub mention_tweet_count: u64,
    pub media_count: u64,
    pub sentiment_tweet_count: u64,
    pub vulgar_tweet_count: u64,
    /// Religious auto-posts removed for this user; they touch nothing else.
    pub filtered_out_count: u64,
    /// username -> tweets retweeting that account.
    pub retweeted_account_tally: BTreeMap<String, u64>,
    /// username -> tweets mentioning that account (once per tweet).
    pub mentioned_account_tally: BTreeMap<String, u64>,
    /// hashtag -> tweets containing it (once per tweet).
    pub hashtag_tally: BTreeMap<String, u64>,
    /// word -> tweets containing it (once per tweet), stopwords excluded.
    pub word_tally: BTreeMap<String, u64>,
    pub self_declared_location: Option<LocationStamp>,
    items: ItemLog,
}

fn bump(map: &mut BTreeMap<String, u64>, key: &str) {
    *map.entry(key.to_string()).or_insert(0) += 1;
}

impl UserAggregate {
    pub fn new(user_id: &str) -> Self {
        UserAggregate {
            user_id: user_id.to_string(),
            ..Default::default()
        }
    }

    /// Count one surviving tweet into every tally.
    pub fn add_tweet(
        &mut self,
        tweet: &Tweet,
        sentiment: &Lexicon,
        vulgar: &Lexicon,
        stopwords: &Lexicon,
    ) {
        self.items.ensure_lookup();
        self.total_tweets += 1;
        let mut rec = TweetItems::default();

        if let Some(source) = &tweet.retweet_of {
            self.retweet_count += 1;
            bump(&mut self.retweeted_account_tally, source);
            rec.retweet = Some(self.items.intern(source));
        }
        if !tweet.urls.is_empty() {
            self.url_count += 1;
        }
        if tweet.has_media {
            self.media_count += 1;
        }

        let mut hashtags: Vec<&str> = tweet.hashtags.iter().map(|s| s.as_str()).collect();
        hashtags.sort_unstable();
        hashtags.dedup();
        if !hashtags.is_empty() {
            self.hashtag_tweet_count += 1;
            for h in &hashtags {
                bump(&mut self.hashtag_tally, h);
                rec.hashtags.push(self.items.intern(h));
            }
        }

        let mut mentions: Vec<&str> = tweet.mentions.iter().map(|s| s.as_str()).collect();
        mentions.sort_unstable();
        mentions.dedup();
        if !mentions.is_empty() {
            self.mention_tweet_count += 1;
            for m in &mentions {
                bump(&mut self.mentioned_account_tally, m);
                rec.mentions.push(self.items.intern(m));
            }
        }

        for w in tweet.distinct_words(stopwords) {
            bump(&mut self.word_tally, w);
            rec.words.push(self.items.intern(w));
        }

        if sentiment.matches_tokens(&tweet.tokens) {
            self.sentiment_tweet_count += 1;
        }
        if vulgar.matches_tokens(&tweet.tokens) {
            self.vulgar_tweet_count += 1;
        }

        if let Some(loc) = &tweet.self_declared_location {
            let candidate = LocationStamp {
                timestamp: tweet.timestamp,
                tweet_id: tweet.tweet_id.clone(),
                location: loc.clone(),
            };
            let newer = match &self.self_declared_location {
                Some(cur) => {
                    (candidate.timestamp, &candidate.tweet_id) > (cur.timestamp, &cur.tweet_id)
                }
                None => true,
            };
            if newer {
                self.self_declared_location = Some(candidate);
            }
        }

        self.items.tweets.push(rec);
    }

    /// Count one religious auto-post: only the filtered counter moves.
    pub fn record_filtered(&mut self) {
        self.filtered_out_count += 1;
    }

    /// Fold another aggregate for the same user into this one.
    pub fn merge(&mut self, other: &UserAggregate) {
        debug_assert_eq!(self.user_id, other.user_id);
        self.total_tweets += other.total_tweets;
        self.retweet_count += other.retweet_count;
        self.url_count += other.url_count;
        self.hashtag_tweet_count += other.hashtag_tweet_count;
        self.mention_tweet_count += other.mention_tweet_count;
        self.media_count += other.media_count;
        self.sentiment_tweet_count += other.sentiment_tweet_count;
        self.vulgar_tweet_count += other.vulgar_tweet_count;
        self.filtered_out_count += other.filtered_out_count;
        for (k, v) in &other.retweeted_account_tally {
            *self.retweeted_account_tally.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.mentioned_account_tally {
            *self.mentioned_account_tally.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.hashtag_tally {
            *self.hashtag_tally.entry(k.clone()).or_insert(0) += v;
        }
        for (k, v) in &other.word_tally {
            *self.word_tally.entry(k.clone()).or_insert(0) += v;
        }
        let newer = match (&self.self_declared_location, &other.self_declared_location) {
            (Some(a), Some(b)) => (b.timestamp, &b.tweet_id) > (a.timestamp, &a.tweet_id),
            (None, Some(_)) => true,
            _ => false,
        };
        if newer {
            self.self_declared_location = other.self_declared_location.clone();
        }
        self.items.merge(&other.items);
    }

    pub fn tally(&self, class: ItemClass) -> &BTreeMap<String, u64> {
        match class {
            ItemClass::Retweeted => &self.retweeted_account_tally,
            ItemClass::Mentioned => &self.mentioned_account_tally,
            ItemClass::Hashtags => &self.hashtag_tally,
            ItemClass::Words => &self.word_tally,
        }
    }

    /// Items of a class ranked by count descending, ties by item ascending.
    pub fn ranked_items(&self, class: ItemClass) -> Vec<(&str, u64)> {
        let mut items: Vec<(&str, u64)> =
            self.tally(class).iter().map(|(k, &v)| (k.as_str(), v)).collect();
        items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        items
    }

    /// For each `n` in `ns`: how many tweets contain at least one of the
    /// user's top-n items of `class`.
    pub fn coverage_of_top(&self, class: ItemClass, ns: &[usize]) -> Vec<u64> {
        let ranked = self.ranked_items(class);
        let mut rank_of: HashMap<&str, usize> = HashMap::with_capacity(ranked.len());
        for (rank, (item, _)) in ranked.iter().enumerate() {
            rank_of.insert(*item, rank);
        }
        let mut counts = vec![0u64; ns.len()];
        for t in &self.items.tweets {
            let best = t
                .of_class(class)
                .iter()
                .filter_map(|&id| rank_of.get(self.items.vocab[id as usize].as_str()))
                .min();
            if let Some(&best) = best {
                for (slot, &n) in ns.iter().enumerate() {
                    if best < n {
                        counts[slot] += 1;
                    }
                }
            }
        }
        counts
    }

    /// Tweets with at least one item of the class (for the alternative
    /// feature denominator).
    pub fn class_tweet_count(&self, class: ItemClass) -> u64 {
        match class {
            ItemClass::Retweeted => self.retweet_count,
            ItemClass::Mentioned => self.mention_tweet_count,
            ItemClass::Hashtags => self.hashtag_tweet_count,
            ItemClass::Words => self
                .items
                .tweets
                .iter()
                .filter(|t| !t.words.is_empty())
                .count() as u64,
        }
    }

    /// Tweets whose words, hashtags, or mentions hit a topic term. Only
    /// single-word topic entries can match here (phrases need raw text).
    pub fn topic_tweet_count(&self, topic: &Lexicon) -> u64 {
        self.items
            .tweets
            .iter()
            .filter(|t| {
                t.words
                    .iter()
                    .chain(t.hashtags.iter())
                    .chain(t.mentions.iter())
                    .any(|&id| topic.contains_word(&self.items.vocab[id as usize]))
            })
            .count() as u64
    }

    /// Rebuild transient lookup state after deserialization.
    pub fn finalize(&mut self) {
        self.items.ensure_lookup();
    }
}

impl PartialEq for UserAggregate {
    fn eq(&self, other: &Self) -> bool {
        self.user_id == other.user_id
            && self.total_tweets == other.total_tweets
            && self.retweet_count == other.retweet_count
            && self.url_count == other.url_count
            && self.hashtag_tweet_count == other.hashtag_tweet_count
            && self.mention_tweet_count == other.mention_tweet_count
            && self.media_count == other.media_count
            && self.sentiment_tweet_count == other.sentiment_tweet_count
            && self.vulgar_tweet_count == other.vulgar_tweet_count
            && self.filtered_out_count == other.filtered_out_count
            && self.retweeted_account_tally == other.retweeted_account_tally
            && self.mentioned_account_tally == other.mentioned_account_tally
            && self.hashtag_tally == other.hashtag_tally
            && self.word_tally == other.word_tally
            && self.self_declared_location == other.self_declared_location
            && self.items.canonical() == other.items.canonical()
    }
}
