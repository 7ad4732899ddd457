//! Hashtag campaign detection and mainstream-penetration statistics.
//!
//! A campaign hashtag combines high volume with a bursty day-to-day
//! profile, so hashtags are scored by the population standard deviation of
//! their daily counts divided by total volume. Scores are scale-free:
//! multiplying every daily count by a constant leaves the score unchanged,
//! so rankings compare burst shape, not raw volume.
//!
//! Volume here counts occurrences: a tweet using the tag twice contributes
//! two. (Feature tallies elsewhere count once per tweet.)

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::par;

/// Inclusive day-index window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayWindow {
    pub start: u32,
    pub end: u32,
}

impl DayWindow {
    pub fn new(start: u32, end: u32) -> Result<DayWindow> {
        if end < start {
            return Err(Error::EmptyWindow);
        }
        Ok(DayWindow { start, end })
    }

    pub fn len(&self) -> usize {
        (self.end - self.start + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, day: u32) -> bool {
        day >= self.start && day <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignScore {
    pub hashtag: String,
    pub daily_counts: Vec<u64>,
    pub total: u64,
    /// Population standard deviation over the whole window, zero days
    /// included.
    pub sigma: f64,
    /// sigma / total.
    pub score: f64,
}

/// Per-day occurrence counts of one hashtag in the group's tweets.
pub fn daily_series(
    corpus: &Corpus,
    users: &BTreeSet<String>,
    hashtag: &str,
    window: DayWindow,
) -> Vec<u64> {
    let mut counts = vec![0u64; window.len()];
    for user in users {
        for tweet in corpus.tweets_of(user) {
            if !window.contains(tweet.day_index) {
                continue;
            }
            let hits = tweet.hashtags.iter().filter(|h| *h == hashtag).count() as u64;
            counts[(tweet.day_index - window.start) as usize] += hits;
        }
    }
    counts
}

fn population_sigma(counts: &[u64]) -> f64 {
    let n = counts.len() as f64;
    let total: u64 = counts.iter().sum();
    let mean = total as f64 / n;
    let ss: f64 = counts
        .iter()
        .map(|&c| {
            let d = c as f64 - mean;
            d * d
        })
        .sum();
    (ss / n).sqrt()
}

/// Score one day series; errors when the series has no volume.
pub fn campaign_score(hashtag: &str, daily_counts: Vec<u64>) -> Result<CampaignScore> {
    let total: u64 = daily_counts.iter().sum();
    if total == 0 {
        return Err(Error::NoVolume);
    }
    let sigma = population_sigma(&daily_counts);
    Ok(CampaignScore {
        hashtag: hashtag.to_string(),
        score: sigma / total as f64,
        sigma,
        total,
        daily_counts,
    })
}

/// Per-hashtag day series for every hashtag a group used in the window.
fn group_series(
    corpus: &Corpus,
    users: &BTreeSet<String>,
    window: DayWindow,
) -> BTreeMap<String, Vec<u64>> {
    let mut series: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for user in users {
        for tweet in corpus.tweets_of(user) {
            if !window.contains(tweet.day_index) {
                continue;
            }
            let slot = (tweet.day_index - window.start) as usize;
            for hashtag in &tweet.hashtags {
                series
                    .entry(hashtag.clone())
                    .or_insert_with(|| vec![0u64; window.len()])[slot] += 1;
            }
        }
    }
    series
}

/// Hashtags with at least `min_volume` uses, scored and ranked descending;
/// ties by volume then tag. Returns at most `k` entries.
pub fn rank_campaigns(
    corpus: &Corpus,
    users: &BTreeSet<String>,
    window: DayWindow,
    min_volume: u64,
    k: usize,
) -> Result<Vec<CampaignScore>> {
    if min_volume == 0 {
        return Err(Error::InvalidConfig("min_volume must be positive".into()));
    }
    let series: Vec<(String, Vec<u64>)> = group_series(corpus, users, window)
        .into_iter()
        .filter(|(_, counts)| counts.iter().sum::<u64>() >= min_volume)
        .collect();
    let mut scored: Vec<CampaignScore> = par::map_collect(&series, |(hashtag, counts)| {
        campaign_score(hashtag, counts.clone()).expect("volume checked above")
    });
    scored.sort_by(|a, b| {
        b.score
            .partial_cmp(&a.score)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| b.total.cmp(&a.total))
            .then_with(|| a.hashtag.cmp(&b.hashtag))
    });
    scored.truncate(k);
    Ok(scored)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenetrationReport {
    /// Fraction of the seminar group's top-K hashtags present in the
    /// reference group's list.
    pub appearance_pct: f64,
    /// Mean 1-based rank of the shared hashtags in the reference list;
    /// absent when nothing is shared.
    pub avg_rank: Option<f64>,
    /// Reference volume over seminar volume, summed across shared hashtags.
    pub volume_magnification: Option<f64>,
    pub shared: Vec<String>,
    pub seminar_list_len: usize,
    pub reference_list_len: usize,
}

/// A group's top-K hashtags: volume-ranked after dropping scores at or
/// below the floor. Returns (hashtag, volume) pairs.
pub fn top_hashtags(
    corpus: &Corpus,
    users: &BTreeSet<String>,
    window: DayWindow,
    k: usize,
    score_floor: f64,
) -> Vec<(String, u64)> {
    let mut qualified: Vec<(String, u64)> = group_series(corpus, users, window)
        .into_iter()
        .filter_map(|(hashtag, counts)| {
            let total: u64 = counts.iter().sum();
            if total == 0 {
                return None;
            }
            let score = population_sigma(&counts) / total as f64;
            (score > score_floor).then_some((hashtag, total))
        })
        .collect();
    qualified.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    qualified.truncate(k);
    qualified
}

/// How far a seminar group's top hashtags penetrate a reference group's
/// list: appearance share, mean rank there, and volume magnification.
pub fn penetration(
    seminar_group: &BTreeSet<String>,
    reference_group: &BTreeSet<String>,
    corpus: &Corpus,
    window: DayWindow,
    k: usize,
    score_floor: f64,
) -> Result<PenetrationReport> {
    if k == 0 {
        return Err(Error::InvalidConfig("K must be at least 1".into()));
    }
    let seminar_list = top_hashtags(corpus, seminar_group, window, k, score_floor);
    if seminar_list.is_empty() {
        return Err(Error::EmptySeminarList);
    }
    let reference_list = top_hashtags(corpus, reference_group, window, k, score_floor);
    let reference_rank: BTreeMap<&str, (usize, u64)> = reference_list
        .iter()
        .enumerate()
        .map(|(i, (h, v))| (h.as_str(), (i + 1, *v)))
        .collect();

    let mut shared = Vec::new();
    let mut rank_sum = 0usize;
    let mut seminar_volume = 0u64;
    let mut reference_volume = 0u64;
    for (hashtag, volume) in &seminar_list {
        if let Some((rank, ref_volume)) = reference_rank.get(hashtag.as_str()) {
            shared.push(hashtag.clone());
            rank_sum += rank;
            seminar_volume += volume;
            reference_volume += ref_volume;
        }
    }
    let appearance_pct = shared.len() as f64 / seminar_list.len() as f64;
    let avg_rank = (!shared.is_empty()).then(|| rank_sum as f64 / shared.len() as f64);
    let volume_magnification = (seminar_volume > 0)
        .then(|| reference_volume as f64 / seminar_volume as f64);
    Ok(PenetrationReport {
        appearance_pct,
        avg_rank,
        volume_magnification,
        shared,
        seminar_list_len: seminar_list.len(),
        reference_list_len: reference_list.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharedHashtag {
    pub hashtag: String,
    pub volume_a: u64,
    pub volume_b: u64,
    /// Group A's share of the combined volume.
    pub share_a: f64,
    pub share_b: f64,
}

/// Intersection of the two groups' top-K most used hashtags (no score
/// floor), with each camp's usage share. Ordered by combined volume.
pub fn shared_hashtags(
    group_a: &BTreeSet<String>,
    group_b: &BTreeSet<String>,
    corpus: &Corpus,
    window: DayWindow,
    k: usize,
) -> Vec<SharedHashtag> {
    let top = |group: &BTreeSet<String>| -> Vec<(String, u64)> {
        let mut list: Vec<(String, u64)> = group_series(corpus, group, window)
            .into_iter()
            .map(|(h, counts)| (h, counts.iter().sum::<u64>()))
            .filter(|(_, v)| *v > 0)
            .collect();
        list.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        list.truncate(k);
        list
    };
    let top_a = top(group_a);
    let top_b: BTreeMap<String, u64> = top(group_b).into_iter().collect();
    let mut out: Vec<SharedHashtag> = top_a
        .into_iter()
        .filter_map(|(hashtag, volume_a)| {
            top_b.get(&hashtag).map(|&volume_b| {
                let combined = (volume_a + volume_b) as f64;
                SharedHashtag {
                    share_a: volume_a as f64 / combined,
                    share_b: volume_b as f64 / combined,
                    hashtag,
                    volume_a,
                    volume_b,
                }
            })
        })
        .collect();
    out.sort_by(|a, b| {
        (b.volume_a + b.volume_b)
            .cmp(&(a.volume_a + a.volume_b))
            .then_with(|| a.hashtag.cmp(&b.hashtag))
    });
    out
}

/// Campaign report: tag, totals, score, and the day series.
pub fn write_campaign_report<W: Write>(
    mut writer: W,
    campaigns: &[CampaignScore],
) -> Result<()> {
    writeln!(writer, "hashtag\ttotal\tsigma\tscore\tdaily_counts")?;
    for c in campaigns {
        let days: Vec<String> = c.daily_counts.iter().map(|d| d.to_string()).collect();
        writeln!(
            writer,
            "{}\t{}\t{}\t{}\t{}",
            c.hashtag,
            c.total,
            c.sigma,
            c.score,
            days.join(",")
        )?;
    }
    Ok(())
}
