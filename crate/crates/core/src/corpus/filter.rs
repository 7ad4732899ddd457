//! Filtering of auto-generated religious content.
//!
//! Many accounts subscribe to services that tweet prayers on their behalf;
//! those tweets say nothing about the account holder's own behavior and are
//! removed before any counting. A tweet is filtered when it links to a known
//! service domain, carries a banned hashtag, or retweets a banned source.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::corpus::Tweet;

/// The prayer-service domains that get filtered by default.
pub const DEFAULT_SERVICE_DOMAINS: [&str; 7] = [
    "du3a.org",
    "ghared.com",
    "7asnat.com",
    "mezani.net",
    "d3waapp.org",
    "zad-muslim.com",
    "rtw8.com",
];

/// Hashtags marking religious auto-posts (compared after normalization).
pub const DEFAULT_BANNED_HASHTAGS: [&str; 2] = ["quran", "hadith"];

/// Image hosts whose links count as embedded media.
pub const DEFAULT_IMAGE_HOSTS: [&str; 4] = [
    "pic.twitter.com",
    "pbs.twimg.com",
    "twitpic.com",
    "instagram.com",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct FilterConfig {
    pub service_domains: BTreeSet<String>,
    pub banned_hashtags: BTreeSet<String>,
    /// Accounts whose retweets indicate religious content. No default list
    /// ships; supply your own.
    pub banned_retweet_sources: BTreeSet<String>,
    /// Hosts that make a URL count as an embedded image.
    pub image_hosts: BTreeSet<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            service_domains: DEFAULT_SERVICE_DOMAINS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            banned_hashtags: DEFAULT_BANNED_HASHTAGS
                .iter()
                .map(|s| s.to_string())
                .collect(),
            banned_retweet_sources: BTreeSet::new(),
            image_hosts: DEFAULT_IMAGE_HOSTS.iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl FilterConfig {
    pub fn from_path(path: &std::path::Path) -> crate::Result<Self> {
        let file = std::fs::File::open(path)?;
        let cfg: FilterConfig = serde_json::from_reader(std::io::BufReader::new(file))
            .map_err(|e| crate::Error::InvalidConfig(format!("filter config: {e}")))?;
        Ok(cfg)
    }

    pub fn is_image_url(&self, url: &str) -> bool {
        match url_host(url) {
            Some(host) => host_matches(&host, &self.image_hosts),
            None => false,
        }
    }
}

/// Extract the lowercased host from a URL without a full URL parser. Accepts
/// scheme-less inputs ("du3a.org/x") since archives carry both forms.
pub fn url_host(url: &str) -> Option<String> {
    let rest = url
        .split_once("://")
        .map(|(_, r)| r)
        .unwrap_or(url)
        .trim_start_matches("www.");
    let host = rest
        .split(['/', '?', '#'])
        .next()?
        .split('@')
        .last()?
        .split(':')
        .next()?;
    if host.is_empty() || !host.contains('.') {
        None
    } else {
        Some(host.to_ascii_lowercase())
    }
}

fn host_matches(host: &str, domains: &BTreeSet<String>) -> bool {
    domains
        .iter()
        .any(|d| host == d || host.ends_with(&format!(".{d}")))
}

/// True when the tweet is an auto-generated religious post per the config:
/// URL host on a service domain, banned hashtag, or banned retweet source.
pub fn is_religious_autopost(tweet: &Tweet, cfg: &FilterConfig) -> bool {
    if tweet
        .urls
        .iter()
        .filter_map(|u| url_host(u))
        .any(|h| host_matches(&h, &cfg.service_domains))
    {
        return true;
    }
    if tweet
        .hashtags
        .iter()
        .any(|h| cfg.banned_hashtags.contains(h.as_str()))
    {
        return true;
    }
    match &tweet.retweet_of {
        Some(source) => cfg.banned_retweet_sources.contains(source.as_str()),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tweet;

    fn tweet() -> Tweet {
        Tweet::test_stub("t1", "u1", "user1")
    }

    #[test]
    fn service_url_triggers_filter() {
        let mut t = tweet();
        t.urls.push("http://du3a.org/abc".into());
        assert!(is_religious_autopost(&t, &FilterConfig::default()));
    }

    #[test]
    fn subdomain_of_service_counts() {
        let mut t = tweet();
        t.urls.push("https://m.zad-muslim.com/x".into());
        assert!(is_religious_autopost(&t, &FilterConfig::default()));
    }

    #[test]
    fn banned_hashtag_triggers_filter() {
        let mut t = tweet();
        t.hashtags.push("quran".into());
        assert!(is_religious_autopost(&t, &FilterConfig::default()));
    }

    #[test]
    fn plain_tweet_passes() {
        assert!(!is_religious_autopost(&tweet(), &FilterConfig::default()));
    }

    #[test]
    fn banned_retweet_source() {
        let mut cfg = FilterConfig::default();
        cfg.banned_retweet_sources.insert("prayerbot".into());
        let mut t = tweet();
        t.retweet_of = Some("prayerbot".into());
        assert!(is_religious_autopost(&t, &cfg));
    }

    #[test]
    fn unrelated_domain_passes() {
        let mut t = tweet();
        t.urls.push("https://example.com/du3a.org".into());
        assert!(!is_religious_autopost(&t, &FilterConfig::default()));
    }

    #[test]
    fn host_extraction() {
        assert_eq!(url_host("http://Du3a.org/x?q=1"), Some("du3a.org".into()));
        assert_eq!(url_host("ghared.com"), Some("ghared.com".into()));
        assert_eq!(url_host("https://www.rtw8.com:8080/p"), Some("rtw8.com".into()));
        assert_eq!(url_host("not a url"), None);
    }
}
