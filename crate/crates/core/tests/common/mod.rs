//! Independent oracles for the acceptance suite.
//!
//! Everything here recomputes results through a deliberately naive route:
//! features by a two-pass recount over raw JSONL, the SVM dual by zoomed
//! grid search, burst scores by the alternative variance formula. None of
//! it shares counting or optimization code with the library paths it
//! checks.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet};

use seminar_core::corpus::normalize::{normalize_and_tokenize, normalize_text, Token};

/// Naive per-user recount of all 20 features straight from JSONL text.
/// Tokenization is shared with the library (it is a fixed text mapping);
/// every count, rank, and coverage is recomputed from scratch.
pub fn oracle_features(
    jsonl: &str,
    sentiment: &HashSet<String>,
    vulgar: &HashSet<String>,
    stopwords: &HashSet<String>,
    min_tweets: u64,
) -> BTreeMap<String, Vec<f64>> {
    const SERVICE_DOMAINS: [&str; 7] = [
        "du3a.org",
        "ghared.com",
        "7asnat.com",
        "mezani.net",
        "d3waapp.org",
        "zad-muslim.com",
        "rtw8.com",
    ];
    const IMAGE_HOSTS: [&str; 4] = [
        "pic.twitter.com",
        "pbs.twimg.com",
        "twitpic.com",
        "instagram.com",
    ];

    struct OracleTweet {
        retweet: Option<String>,
        urls: bool,
        hashtags: Vec<String>,
        mentions: Vec<String>,
        words: Vec<String>,
        media: bool,
        sentiment_hit: bool,
        vulgar_hit: bool,
    }

    fn host_of(url: &str) -> Option<String> {
        let rest = url.split("://").nth(1).unwrap_or(url);
        let rest = rest.trim_start_matches("www.");
        let host = rest.split(['/', '?', '#']).next()?.split(':').next()?;
        host.contains('.').then(|| host.to_ascii_lowercase())
    }

    let mut per_user: BTreeMap<String, Vec<OracleTweet>> = BTreeMap::new();
    for line in jsonl.lines() {
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value = serde_json::from_str(line).expect("oracle parses fixture");
        let user = value["user_id"].as_str().expect("user_id").to_string();
        let text = value["text"].as_str().unwrap_or_default();
        let urls: Vec<String> = value["urls"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|v| v.as_str().map(|s| s.to_string()))
                    .collect()
            })
            .unwrap_or_default();
        let raw_hashtags: Vec<String> = value["hashtags"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|v| v.as_str())
                    .map(|s| normalize_text(s.trim_start_matches('#')))
                    .collect()
            })
            .unwrap_or_default();
        let raw_mentions: Vec<String> = value["mentions"]
            .as_array()
            .map(|a| {
                a.iter()
                    .filter_map(|v| v.as_str())
                    .map(|s| normalize_text(s.trim_start_matches('@')))
                    .collect()
            })
            .unwrap_or_default();
        let retweet = value["retweet_of"]
            .as_str()
            .map(|s| normalize_text(s))
            .filter(|s| !s.is_empty());

        // religious auto-post filter, recomputed from scratch
        let service_hit = urls.iter().filter_map(|u| host_of(u)).any(|h| {
            SERVICE_DOMAINS
                .iter()
                .any(|d| h == *d || h.ends_with(&format!(".{d}")))
        });
        let banned_tag = raw_hashtags.iter().any(|h| h == "quran" || h == "hadith");
        if service_hit || banned_tag {
            continue;
        }

        let tokens = normalize_and_tokenize(text);
        let mut words: Vec<String> = tokens
            .iter()
            .filter_map(|t| match t {
                Token::Word(w) if !stopwords.contains(w.as_str()) => Some(w.clone()),
                _ => None,
            })
            .collect();
        words.sort();
        words.dedup();
        let sentiment_hit = tokens.iter().any(|t| match t {
            Token::Word(w) => sentiment.contains(w.as_str()),
            _ => false,
        });
        let vulgar_hit = tokens.iter().any(|t| match t {
            Token::Word(w) => vulgar.contains(w.as_str()),
            _ => false,
        });
        let media = value["has_media"].as_bool().unwrap_or(false)
            || urls.iter().filter_map(|u| host_of(u)).any(|h| {
                IMAGE_HOSTS
                    .iter()
                    .any(|d| h == *d || h.ends_with(&format!(".{d}")))
            });

        let mut hashtags = raw_hashtags;
        hashtags.sort();
        hashtags.dedup();
        let mut mentions = raw_mentions;
        mentions.sort();
        mentions.dedup();

        per_user.entry(user).or_default().push(OracleTweet {
            retweet,
            urls: !urls.is_empty(),
            hashtags,
            mentions,
            words,
            media,
            sentiment_hit,
            vulgar_hit,
        });
    }

    fn coverage(
        tweets: &[Vec<String>],
        total: u64,
        ns: &[usize],
        out: &mut Vec<f64>,
    ) {
        // rank items by (tweets containing them desc, name asc)
        let mut tally: BTreeMap<&str, u64> = BTreeMap::new();
        for items in tweets {
            for item in items {
                *tally.entry(item).or_insert(0) += 1;
            }
        }
        let mut ranked: Vec<(&str, u64)> = tally.into_iter().collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        for &n in ns {
            let top: HashSet<&str> = ranked.iter().take(n).map(|(i, _)| *i).collect();
            let covered = tweets
                .iter()
                .filter(|items| items.iter().any(|i| top.contains(i.as_str())))
                .count() as u64;
            out.push(if total == 0 {
                0.0
            } else {
                covered as f64 / total as f64
            });
        }
    }

    let mut features = BTreeMap::new();
    for (user, tweets) in per_user {
        let total = tweets.len() as u64;
        if total < min_tweets.max(1) {
            continue;
        }
        let frac = |count: usize| count as f64 / total as f64;
        let mut v = Vec::with_capacity(20);
        v.push(frac(tweets.iter().filter(|t| t.retweet.is_some()).count()));
        v.push(frac(tweets.iter().filter(|t| t.urls).count()));
        v.push(frac(tweets.iter().filter(|t| !t.hashtags.is_empty()).count()));
        v.push(frac(tweets.iter().filter(|t| !t.mentions.is_empty()).count()));
        v.push(frac(tweets.iter().filter(|t| t.media).count()));

        let retweet_sets: Vec<Vec<String>> = tweets
            .iter()
            .map(|t| t.retweet.iter().cloned().collect())
            .collect();
        let mention_sets: Vec<Vec<String>> = tweets.iter().map(|t| t.mentions.clone()).collect();
        let hashtag_sets: Vec<Vec<String>> = tweets.iter().map(|t| t.hashtags.clone()).collect();
        let word_sets: Vec<Vec<String>> = tweets.iter().map(|t| t.words.clone()).collect();
        coverage(&retweet_sets, total, &[1, 3, 10, 20], &mut v);
        coverage(&mention_sets, total, &[1, 3, 10, 20], &mut v);
        coverage(&hashtag_sets, total, &[5, 15], &mut v);
        coverage(&word_sets, total, &[10, 30, 50], &mut v);

        v.push(frac(tweets.iter().filter(|t| t.sentiment_hit).count()));
        v.push(frac(tweets.iter().filter(|t| t.vulgar_hit).count()));
        features.insert(user, v);
    }
    features
}

/// Dual objective sum(a) - 1/2 sum a_i a_j y_i y_j K_ij, recomputed from raw
/// vectors.
pub fn oracle_dual_objective(xs: &[Vec<f64>], ys: &[f64], gamma: f64, alphas: &[f64]) -> f64 {
    let k = |a: &[f64], b: &[f64]| {
        let d2: f64 = a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
        (-gamma * d2).exp()
    };
    let n = xs.len();
    let mut linear = 0.0;
    let mut quad = 0.0;
    for i in 0..n {
        linear += alphas[i];
        for j in 0..n {
            quad += alphas[i] * alphas[j] * ys[i] * ys[j] * k(&xs[i], &xs[j]);
        }
    }
    linear - 0.5 * quad
}

/// Exhaustive zoomed grid search over the dual feasible region. The first
/// n-1 coefficients run over a shrinking grid; the last one is solved from
/// the equality constraint and must land inside the box.
pub fn oracle_grid_search(xs: &[Vec<f64>], ys: &[f64], c: f64, gamma: f64) -> f64 {
    let n = xs.len();
    assert!(n >= 2 && n <= 6, "grid oracle is for toy problems");
    let free = n - 1;
    const POINTS: usize = 7;
    let mut center = vec![c / 2.0; free];
    let mut span = c / 2.0;
    let mut best = f64::NEG_INFINITY;
    let mut best_alphas = vec![0.0; n];

    for _round in 0..16 {
        let mut index = vec![0usize; free];
        loop {
            let mut alphas = vec![0.0; n];
            for d in 0..free {
                let offset = (index[d] as f64 / (POINTS - 1) as f64) * 2.0 - 1.0;
                alphas[d] = (center[d] + offset * span).clamp(0.0, c);
            }
            let partial: f64 = (0..free).map(|d| alphas[d] * ys[d]).sum();
            let last = -partial * ys[n - 1];
            if (-1e-12..=c + 1e-12).contains(&last) {
                alphas[n - 1] = last.clamp(0.0, c);
                let objective = oracle_dual_objective(xs, ys, gamma, &alphas);
                if objective > best {
                    best = objective;
                    best_alphas = alphas.clone();
                }
            }
            // advance mixed-radix counter
            let mut d = 0;
            loop {
                if d == free {
                    break;
                }
                index[d] += 1;
                if index[d] < POINTS {
                    break;
                }
                index[d] = 0;
                d += 1;
            }
            if d == free {
                break;
            }
        }
        center.copy_from_slice(&best_alphas[..free]);
        span *= 0.55;
    }
    best
}

/// Population standard deviation via the alternative E[x^2] - mu^2 route.
pub fn oracle_campaign_score(counts: &[u64]) -> (f64, f64) {
    let n = counts.len() as f64;
    let total: u64 = counts.iter().sum();
    let mean = total as f64 / n;
    let mean_sq = counts.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>() / n;
    let sigma = (mean_sq - mean * mean).max(0.0).sqrt();
    (sigma, sigma / total as f64)
}

/// All-pairs cosine graph by direct double loop over sorted users.
pub fn oracle_pair_similarities(
    vectors: &[(String, BTreeMap<String, f64>)],
) -> Vec<(String, String, f64)> {
    let mut sorted: Vec<&(String, BTreeMap<String, f64>)> = vectors.iter().collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            let (ua, wa) = sorted[i];
            let (ub, wb) = sorted[j];
            if wa.is_empty() || wb.is_empty() {
                continue;
            }
            let dot: f64 = wa
                .iter()
                .filter_map(|(k, v)| wb.get(k).map(|w| v * w))
                .sum();
            let na: f64 = wa.values().map(|v| v * v).sum::<f64>().sqrt();
            let nb: f64 = wb.values().map(|v| v * v).sum::<f64>().sqrt();
            out.push((ua.clone(), ub.clone(), dot / (na * nb)));
        }
    }
    out
}
