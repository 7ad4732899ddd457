//! Streaming ingestion of line-delimited tweet archives.
//!
//! Two entry points: [`ingest_stream`] folds records straight into per-user
//! aggregates without retaining tweets (constant memory in corpus size);
//! [`Corpus::load`] keeps the surviving tweets for the analysis stages that
//! need them (stance propagation, campaigns, networks).
//!
//! Lines are processed in fixed-size chunks. With the `parallel` feature the
//! chunks of a read window run concurrently and are merged back in input
//! order, so the result is identical to the sequential pass at any thread
//! count.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::corpus::aggregate::UserAggregate;
use crate::corpus::filter::{is_religious_autopost, FilterConfig};
use crate::corpus::lexicon::Lexicon;
use crate::corpus::record::{to_tweet, FieldMap, ParseProblem, RawRecord};
use crate::corpus::Tweet;
use crate::error::Result;
use crate::par;

const WINDOW_LINES: usize = 65_536;
const CHUNK_LINES: usize = 4_096;

/// The three lexicons consulted during aggregation.
#[derive(Debug, Clone)]
pub struct Lexicons {
    pub sentiment: Lexicon,
    pub vulgar: Lexicon,
    pub stopwords: Lexicon,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IngestConfig {
    /// UTC seconds anchoring day 0. Records before it are dropped (counted).
    /// Zero means day indexes count from the unix epoch.
    pub start_epoch: i64,
    pub filter: FilterConfig,
    pub field_map: FieldMap,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            start_epoch: 0,
            filter: FilterConfig::default(),
            field_map: FieldMap::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub lines: u64,
    pub ingested: u64,
    pub malformed: u64,
    pub before_start: u64,
    pub filtered_religious: u64,
}

impl IngestStats {
    fn absorb(&mut self, other: &IngestStats) {
        self.lines += other.lines;
        self.ingested += other.ingested;
        self.malformed += other.malformed;
        self.before_start += other.before_start;
        self.filtered_religious += other.filtered_religious;
    }
}

#[derive(Debug, Default)]
pub struct IngestOutput {
    pub aggregates: BTreeMap<String, UserAggregate>,
    pub stats: IngestStats,
}

fn process_chunk(
    lines: &[String],
    lexicons: &Lexicons,
    cfg: &IngestConfig,
) -> (BTreeMap<String, UserAggregate>, IngestStats) {
    let mut aggregates: BTreeMap<String, UserAggregate> = BTreeMap::new();
    let mut stats = IngestStats::default();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        stats.lines += 1;
        let raw = match RawRecord::parse(line, &cfg.field_map) {
            Ok(r) => r,
            Err(_) => {
                stats.malformed += 1;
                continue;
            }
        };
        let tweet = match to_tweet(raw, cfg.start_epoch, &cfg.filter.image_hosts) {
            Ok(t) => t,
            Err(ParseProblem::BeforeStart) => {
                stats.before_start += 1;
                continue;
            }
            Err(ParseProblem::Malformed(_)) => {
                stats.malformed += 1;
                continue;
            }
        };
        let entry = aggregates
            .entry(tweet.user_id.clone())
            .or_insert_with(|| UserAggregate::new(&tweet.user_id));
        if is_religious_autopost(&tweet, &cfg.filter) {
            entry.record_filtered();
            stats.filtered_religious += 1;
        } else {
            entry.add_tweet(&tweet, &lexicons.sentiment, &lexicons.vulgar, &lexicons.stopwords);
            stats.ingested += 1;
        }
    }
    (aggregates, stats)
}

fn merge_partials(
    output: &mut IngestOutput,
    partials: Vec<(BTreeMap<String, UserAggregate>, IngestStats)>,
) {
    for (aggregates, stats) in partials {
        output.stats.absorb(&stats);
        for (user_id, agg) in aggregates {
            match output.aggregates.entry(user_id) {
                std::collections::btree_map::Entry::Occupied(mut e) => e.get_mut().merge(&agg),
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(agg);
                }
            }
        }
    }
}

fn read_window<R: BufRead>(reader: &mut R, buf: &mut Vec<String>) -> Result<()> {
    buf.clear();
    let mut line = String::new();
    while buf.len() < WINDOW_LINES {
        line.clear();
        if reader.read_line(&mut line)? == 0 {
            break;
        }
        buf.push(line.trim_end_matches(['\n', '\r']).to_string());
    }
    Ok(())
}

/// Aggregate every record of the stream into per-user tallies.
///
/// Per-line failures are counted in the stats, never fatal; an unreadable
/// source is. Output is independent of chunking and thread count.
pub fn ingest_stream<R: BufRead>(
    mut reader: R,
    lexicons: &Lexicons,
    cfg: &IngestConfig,
) -> Result<IngestOutput> {
    let mut output = IngestOutput::default();
    let mut window = Vec::with_capacity(WINDOW_LINES);
    loop {
        read_window(&mut reader, &mut window)?;
        if window.is_empty() {
            break;
        }
        let chunks: Vec<&[String]> = window.chunks(CHUNK_LINES).collect();
        let partials = par::map_collect(&chunks, |chunk| process_chunk(chunk, lexicons, cfg));
        merge_partials(&mut output, partials);
    }
    Ok(output)
}

pub fn ingest_path(
    path: &std::path::Path,
    lexicons: &Lexicons,
    cfg: &IngestConfig,
) -> Result<IngestOutput> {
    let file = std::fs::File::open(path)?;
    ingest_stream(std::io::BufReader::new(file), lexicons, cfg)
}

/// Write aggregates as one JSON object per line, sorted by user id.
pub fn write_aggregates<W: Write>(
    aggregates: &BTreeMap<String, UserAggregate>,
    mut writer: W,
) -> Result<()> {
    for agg in aggregates.values() {
        serde_json::to_writer(&mut writer, agg)
            .map_err(|e| crate::Error::InvalidConfig(format!("serialize aggregate: {e}")))?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_aggregates<R: BufRead>(reader: R) -> Result<BTreeMap<String, UserAggregate>> {
    let mut out = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut agg: UserAggregate =
            serde_json::from_str(&line).map_err(|e| crate::Error::MalformedFile {
                what: "aggregates",
                line: idx + 1,
                message: e.to_string(),
            })?;
        agg.finalize();
        out.insert(agg.user_id.clone(), agg);
    }
    Ok(out)
}

/// An in-memory corpus of surviving (non-religious) tweets plus indexes for
/// the analysis stages.
#[derive(Debug, Default)]
pub struct Corpus {
    pub tweets: Vec<Tweet>,
    pub stats: IngestStats,
    by_user: BTreeMap<String, Vec<usize>>,
    usernames: BTreeMap<String, Vec<String>>,
}

impl Corpus {
    pub fn load<R: BufRead>(mut reader: R, cfg: &IngestConfig) -> Result<Corpus> {
        let mut tweets = Vec::new();
        let mut stats = IngestStats::default();
        let mut window = Vec::with_capacity(WINDOW_LINES);
        loop {
            read_window(&mut reader, &mut window)?;
            if window.is_empty() {
                break;
            }
            let chunks: Vec<&[String]> = window.chunks(CHUNK_LINES).collect();
            let partials = par::map_collect(&chunks, |chunk| {
                let mut kept = Vec::new();
                let mut stats = IngestStats::default();
                for line in chunk.iter() {
                    if line.trim().is_empty() {
                        continue;
                    }
                    stats.lines += 1;
                    match RawRecord::parse(line, &cfg.field_map)
                        .and_then(|raw| to_tweet(raw, cfg.start_epoch, &cfg.filter.image_hosts))
                    {
                        Ok(t) => {
                            if is_religious_autopost(&t, &cfg.filter) {
                                stats.filtered_religious += 1;
                            } else {
                                stats.ingested += 1;
                                kept.push(t);
                            }
                        }
                        Err(ParseProblem::BeforeStart) => stats.before_start += 1,
                        Err(ParseProblem::Malformed(_)) => stats.malformed += 1,
                    }
                }
                (kept, stats)
            });
            for (kept, partial) in partials {
                stats.absorb(&partial);
                tweets.extend(kept);
            }
        }
        let mut c = Corpus::from_tweets(tweets);
        c.stats = stats;
        Ok(c)
    }

    pub fn load_path(path: &std::path::Path, cfg: &IngestConfig) -> Result<Corpus> {
        let file = std::fs::File::open(path)?;
        Corpus::load(std::io::BufReader::new(file), cfg)
    }

    pub fn from_tweets(tweets: Vec<Tweet>) -> Corpus {
        let mut by_user: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut usernames: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, t) in tweets.iter().enumerate() {
            by_user.entry(t.user_id.clone()).or_default().push(i);
            let ids = usernames.entry(t.username.clone()).or_default();
            if !ids.contains(&t.user_id) {
                ids.push(t.user_id.clone());
            }
        }
        for ids in usernames.values_mut() {
            ids.sort();
        }
        Corpus {
            tweets,
            stats: IngestStats::default(),
            by_user,
            usernames,
        }
    }

    pub fn user_ids(&self) -> impl Iterator<Item = &String> {
        self.by_user.keys()
    }

    pub fn tweets_of(&self, user_id: &str) -> impl Iterator<Item = &Tweet> {
        self.by_user
            .get(user_id)
            .into_iter()
            .flatten()
            .map(move |&i| &self.tweets[i])
    }

    /// User ids that have posted under the given (normalized) username.
    pub fn user_ids_for_username(&self, username: &str) -> &[String] {
        self.usernames
            .get(username)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn max_day(&self) -> u32 {
        self.tweets.iter().map(|t| t.day_index).max().unwrap_or(0)
    }
}
