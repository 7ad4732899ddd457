//! Group-level reporting over aggregates: headline stats, top retweeted
//! accounts, and self-declared location breakdowns.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::aggregate::UserAggregate;
use crate::corpus::lexicon::Lexicon;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupStats {
    pub user_count: u64,
    pub tweet_count: u64,
    /// Mean tweets per user, rounded to one decimal.
    pub avg_tweets_per_user: f64,
    pub topic_tweet_count: u64,
    pub avg_topic_tweets_per_user: f64,
}

fn one_decimal(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

/// Headline statistics for a user group. Topic matching is single-token
/// (words, hashtags, mentions); multi-word topic entries need the raw
/// corpus and are ignored here.
pub fn group_stats<'a, I>(
    users: I,
    aggregates: &BTreeMap<String, UserAggregate>,
    topic_terms: &Lexicon,
) -> Result<GroupStats>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut user_count = 0u64;
    let mut tweet_count = 0u64;
    let mut topic_tweet_count = 0u64;
    for user in users {
        let agg = aggregates
            .get(user)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown user in group: {user}")))?;
        user_count += 1;
        tweet_count += agg.total_tweets;
        topic_tweet_count += agg.topic_tweet_count(topic_terms);
    }
    if user_count == 0 {
        return Err(Error::EmptyGroup);
    }
    Ok(GroupStats {
        user_count,
        tweet_count,
        avg_tweets_per_user: one_decimal(tweet_count as f64 / user_count as f64),
        topic_tweet_count,
        avg_topic_tweets_per_user: one_decimal(topic_tweet_count as f64 / user_count as f64),
    })
}

/// Accounts most retweeted by the group, descending; ties by username.
/// Fewer than `k` distinct accounts yields a shorter list.
pub fn top_retweeted<'a, I>(
    users: I,
    aggregates: &BTreeMap<String, UserAggregate>,
    k: usize,
) -> Vec<(String, u64)>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut totals: BTreeMap<&str, u64> = BTreeMap::new();
    for user in users {
        if let Some(agg) = aggregates.get(user) {
            for (account, count) in &agg.retweeted_account_tally {
                *totals.entry(account).or_insert(0) += count;
            }
        }
    }
    let mut ranked: Vec<(String, u64)> =
        totals.into_iter().map(|(a, c)| (a.to_string(), c)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocationBucket {
    pub location: String,
    pub user_count: u64,
    pub tweet_count: u64,
}

/// Users bucketed by self-declared location ("undeclared" when absent),
/// ranked by tweet count descending.
pub fn location_breakdown<'a, I>(
    users: I,
    aggregates: &BTreeMap<String, UserAggregate>,
    k: usize,
) -> Vec<LocationBucket>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut buckets: BTreeMap<String, (u64, u64)> = BTreeMap::new();
    for user in users {
        if let Some(agg) = aggregates.get(user) {
            let loc = agg
                .self_declared_location
                .as_ref()
                .map(|l| l.location.clone())
                .unwrap_or_else(|| "undeclared".to_string());
            let entry = buckets.entry(loc).or_insert((0, 0));
            entry.0 += 1;
            entry.1 += agg.total_tweets;
        }
    }
    let mut ranked: Vec<LocationBucket> = buckets
        .into_iter()
        .map(|(location, (user_count, tweet_count))| LocationBucket {
            location,
            user_count,
            tweet_count,
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.tweet_count
            .cmp(&a.tweet_count)
            .then_with(|| a.location.cmp(&b.location))
    });
    ranked.truncate(k);
    ranked
}
