//! Line-delimited record parsing.
//!
//! The canonical input is one JSON object per line with fields `id`,
//! `user_id`, `username`, `created_at` (ISO-8601 or unix seconds), `text`,
//! `hashtags[]`, `mentions[]`, `urls[]`, `has_media`, `retweet_of`
//! (nullable), `location` (nullable). A [`FieldMap`] redirects every
//! canonical field to a path inside some other schema, which is how raw
//! Twitter-API archives are ingested without conversion.

use std::collections::BTreeMap;

use chrono::DateTime;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::corpus::normalize::{normalize_and_tokenize, normalize_text, Token};
use crate::corpus::Tweet;

/// Why a line was rejected. Rejections are counted, never fatal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseProblem {
    Malformed(String),
    /// Timestamp earlier than the configured corpus start date.
    BeforeStart,
}

/// Maps canonical field names to dotted paths in the incoming JSON.
/// `a.b` descends through objects; a segment written `name[]` iterates an
/// array, so `entities.hashtags[].text` collects every hashtag text.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMap(pub BTreeMap<String, String>);

impl Default for FieldMap {
    fn default() -> Self {
        let pairs = [
            ("id", "id"),
            ("user_id", "user_id"),
            ("username", "username"),
            ("created_at", "created_at"),
            ("text", "text"),
            ("hashtags", "hashtags[]"),
            ("mentions", "mentions[]"),
            ("urls", "urls[]"),
            ("has_media", "has_media"),
            ("retweet_of", "retweet_of"),
            ("location", "location"),
        ];
        FieldMap(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }
}

impl FieldMap {
    /// The conventional mapping for raw Twitter streaming-API records.
    pub fn twitter_api() -> Self {
        let pairs = [
            ("id", "id_str"),
            ("user_id", "user.id_str"),
            ("username", "user.screen_name"),
            ("created_at", "created_at"),
            ("text", "text"),
            ("hashtags", "entities.hashtags[].text"),
            ("mentions", "entities.user_mentions[].screen_name"),
            ("urls", "entities.urls[].expanded_url"),
            ("has_media", "entities.media"),
            ("retweet_of", "retweeted_status.user.screen_name"),
            ("location", "user.location"),
        ];
        FieldMap(
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        )
    }

    pub fn from_path(path: &std::path::Path) -> crate::Result<Self> {
        let file = std::fs::File::open(path)?;
        let map: BTreeMap<String, String> =
            serde_json::from_reader(std::io::BufReader::new(file))
                .map_err(|e| crate::Error::InvalidConfig(format!("field map: {e}")))?;
        let mut merged = FieldMap::default().0;
        merged.extend(map);
        Ok(FieldMap(merged))
    }

    fn path(&self, field: &str) -> Option<&str> {
        self.0.get(field).map(|s| s.as_str())
    }
}

/// A parsed but not yet normalized record.
#[derive(Debug, Clone)]
pub struct RawRecord {
    pub id: String,
    pub user_id: String,
    pub username: String,
    pub timestamp: i64,
    pub text: String,
    pub hashtags: Option<Vec<String>>,
    pub mentions: Option<Vec<String>>,
    pub urls: Vec<String>,
    pub has_media: bool,
    pub retweet_of: Option<String>,
    pub location: Option<String>,
}

fn resolve<'a>(value: &'a Value, path: &str, out: &mut Vec<&'a Value>) -> bool {
    let mut current = vec![value];
    let mut found_array = false;
    for segment in path.split('.') {
        let (name, is_array) = match segment.strip_suffix("[]") {
            Some(n) => (n, true),
            None => (segment, false),
        };
        let mut next = Vec::new();
        for v in current {
            let v = if name.is_empty() { Some(v) } else { v.get(name) };
            match v {
                Some(Value::Array(items)) if is_array => {
                    found_array = true;
                    next.extend(items.iter());
                }
                Some(other) if !is_array => next.push(other),
                _ => {}
            }
        }
        current = next;
        if current.is_empty() {
            break;
        }
    }
    out.extend(current.iter().filter(|v| !v.is_null()));
    found_array
}

fn scalar<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    let mut out = Vec::new();
    resolve(value, path, &mut out);
    out.into_iter().next()
}

fn string_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn parse_timestamp(v: &Value) -> Option<i64> {
    match v {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => {
            if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
                return Some(dt.timestamp());
            }
            // Twitter API format: "Wed Dec 09 12:34:56 +0000 2015"
            DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y")
                .ok()
                .map(|dt| dt.timestamp())
        }
        _ => None,
    }
}

fn truthy(v: &Value) -> bool {
    match v {
        Value::Bool(b) => *b,
        Value::Null => false,
        Value::Array(a) => !a.is_empty(),
        Value::Object(o) => !o.is_empty(),
        Value::String(s) => !s.is_empty(),
        Value::Number(n) => n.as_f64().map(|f| f != 0.0).unwrap_or(false),
    }
}

impl RawRecord {
    pub fn parse(line: &str, map: &FieldMap) -> Result<RawRecord, ParseProblem> {
        let value: Value = serde_json::from_str(line)
            .map_err(|e| ParseProblem::Malformed(format!("json: {e}")))?;
        let field = |name: &str| map.path(name).and_then(|p| scalar(&value, p));

        let id = field("id")
            .and_then(string_of)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ParseProblem::Malformed("missing id".into()))?;
        let user_id = field("user_id")
            .and_then(string_of)
            .filter(|s| !s.is_empty())
            .ok_or_else(|| ParseProblem::Malformed("missing user_id".into()))?;
        let username = field("username")
            .and_then(string_of)
            .unwrap_or_else(|| user_id.clone());
        let timestamp = field("created_at")
            .and_then(parse_timestamp)
            .ok_or_else(|| ParseProblem::Malformed("bad created_at".into()))?;
        let text = field("text")
            .and_then(string_of)
            .ok_or_else(|| ParseProblem::Malformed("missing text".into()))?;

        let list = |name: &str| -> Option<Vec<String>> {
            let path = map.path(name)?;
            let mut out = Vec::new();
            let found = resolve(&value, path, &mut out);
            if !found && out.is_empty() {
                return None;
            }
            Some(out.iter().filter_map(|v| string_of(v)).collect())
        };

        Ok(RawRecord {
            id,
            user_id,
            username,
            timestamp,
            text,
            hashtags: list("hashtags"),
            mentions: list("mentions"),
            urls: list("urls").unwrap_or_default(),
            has_media: field("has_media").map(truthy).unwrap_or(false),
            retweet_of: field("retweet_of").and_then(string_of),
            location: field("location")
                .and_then(string_of)
                .filter(|s| !s.trim().is_empty()),
        })
    }
}

fn clean_item(raw: &str) -> Option<String> {
    let trimmed: String = raw
        .trim_start_matches(['#', '@'])
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect();
    let normalized = normalize_text(&trimmed);
    if normalized.is_empty() {
        None
    } else {
        Some(normalized)
    }
}

/// Turn a raw record into a normalized [`Tweet`].
///
/// Hashtag/mention fields are trusted when present (normalized, `#`/`@`
/// stripped); when absent they are recovered from the tokenized text.
/// `start_date` anchors `day_index`; records before it are rejected.
pub fn to_tweet(
    raw: RawRecord,
    start_epoch: i64,
    image_hosts: &std::collections::BTreeSet<String>,
) -> Result<Tweet, ParseProblem> {
    if raw.timestamp < start_epoch {
        return Err(ParseProblem::BeforeStart);
    }
    let day_index = ((raw.timestamp - start_epoch) / 86_400) as u32;
    let tokens = normalize_and_tokenize(&raw.text);

    let hashtags = match raw.hashtags {
        Some(list) => list.iter().filter_map(|h| clean_item(h)).collect(),
        None => tokens
            .iter()
            .filter_map(|t| match t {
                Token::Hashtag(h) => Some(h.clone()),
                _ => None,
            })
            .collect(),
    };
    let mentions = match raw.mentions {
        Some(list) => list.iter().filter_map(|m| clean_item(m)).collect(),
        None => tokens
            .iter()
            .filter_map(|t| match t {
                Token::Mention(m) => Some(m.clone()),
                _ => None,
            })
            .collect(),
    };

    let has_media = raw.has_media
        || raw.urls.iter().any(|u| {
            crate::corpus::filter::url_host(u)
                .map(|h| image_hosts.iter().any(|d| h == *d || h.ends_with(&format!(".{d}"))))
                .unwrap_or(false)
        });

    Ok(Tweet {
        tweet_id: raw.id,
        user_id: raw.user_id,
        username: raw.username.to_lowercase(),
        timestamp: raw.timestamp,
        day_index,
        text: raw.text,
        tokens,
        hashtags,
        mentions,
        urls: raw.urls,
        has_media,
        retweet_of: raw.retweet_of.as_deref().and_then(clean_item),
        self_declared_location: raw.location,
    })
}
