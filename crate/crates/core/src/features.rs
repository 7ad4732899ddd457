//! Per-user behavioral feature vectors.
//!
//! Three families over one user's aggregate, all fractions in [0,1]:
//!
//! * interaction — share of tweets containing retweets, URLs, hashtags,
//!   mentions, embedded images (5 features);
//! * diversity — share of tweets covered by the user's own top-n retweeted
//!   accounts, mentioned accounts, hashtags, and words (13 features with the
//!   default n lists); low diversity signals scripted behavior;
//! * style — share of tweets hitting the sentiment and vulgar lexicons
//!   (2 features).

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::aggregate::{ItemClass, UserAggregate};
use crate::error::{Error, Result};
use crate::par;

/// Denominator for the diversity fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Denominator {
    /// All of the user's surviving tweets (default).
    AllTweets,
    /// Only tweets containing at least one item of the class.
    ClassTweets,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeatureConfig {
    pub retweet_mention_top_n: Vec<usize>,
    pub hashtag_top_n: Vec<usize>,
    pub word_top_n: Vec<usize>,
    /// Users with fewer surviving tweets cannot be featurized.
    pub min_tweets: u64,
    pub denominator: Denominator,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            retweet_mention_top_n: vec![1, 3, 10, 20],
            hashtag_top_n: vec![5, 15],
            word_top_n: vec![10, 30, 50],
            min_tweets: 10,
            denominator: Denominator::AllTweets,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        for list in [
            &self.retweet_mention_top_n,
            &self.hashtag_top_n,
            &self.word_top_n,
        ] {
            if list.is_empty() {
                return Err(Error::InvalidConfig("empty top-n list".into()));
            }
            if list[0] == 0 || list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidConfig(
                    "top-n lists must be positive and strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }

    /// Column names and family ranges implied by this config.
    pub fn schema(&self) -> FeatureSchema {
        let mut names = vec![
            "pct_retweets".to_string(),
            "pct_urls".to_string(),
            "pct_hashtags".to_string(),
            "pct_mentions".to_string(),
            "pct_media".to_string(),
        ];
        let interaction = 0..names.len();
        for n in &self.retweet_mention_top_n {
            names.push(format!("top{n}_retweeted"));
        }
        for n in &self.retweet_mention_top_n {
            names.push(format!("top{n}_mentioned"));
        }
        for n in &self.hashtag_top_n {
            names.push(format!("top{n}_hashtags"));
        }
        for n in &self.word_top_n {
            names.push(format!("top{n}_words"));
        }
        let diversity = interaction.end..names.len();
        names.push("pct_sentiment".to_string());
        names.push("pct_vulgar".to_string());
        let style = diversity.end..names.len();
        FeatureSchema {
            names,
            interaction,
            diversity,
            style,
        }
    }
}

/// Canonical column layout for one `FeatureConfig`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSchema {
    pub names: Vec<String>,
    pub interaction: Range<usize>,
    pub diversity: Range<usize>,
    pub style: Range<usize>,
}

impl FeatureSchema {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

fn check_history(agg: &UserAggregate, cfg: &FeatureConfig) -> Result<()> {
    if agg.total_tweets < cfg.min_tweets.max(1) {
        return Err(Error::InsufficientHistory {
            user_id: agg.user_id.clone(),
            have: agg.total_tweets,
            need: cfg.min_tweets.max(1),
        });
    }
    Ok(())
}

fn fraction(count: u64, denom: u64) -> f64 {
    if denom == 0 {
        0.0
    } else {
        count as f64 / denom as f64
    }
}

/// Share of tweets containing retweets, URLs, hashtags, mentions, media.
pub fn interaction_features(agg: &UserAggregate, cfg: &FeatureConfig) -> Result<[f64; 5]> {
    check_history(agg, cfg)?;
    let t = agg.total_tweets;
    Ok([
        fraction(agg.retweet_count, t),
        fraction(agg.url_count, t),
        fraction(agg.hashtag_tweet_count, t),
        fraction(agg.mention_tweet_count, t),
        fraction(agg.media_count, t),
    ])
}

fn class_coverage(
    agg: &UserAggregate,
    class: ItemClass,
    ns: &[usize],
    cfg: &FeatureConfig,
    out: &mut Vec<f64>,
) {
    let denom = match cfg.denominator {
        Denominator::AllTweets => agg.total_tweets,
        Denominator::ClassTweets => agg.class_tweet_count(class),
    };
    for covered in agg.coverage_of_top(class, ns) {
        out.push(fraction(covered, denom));
    }
}

/// Coverage of the user's own most-used accounts, hashtags, and words.
/// Within each family the values are monotone in n by construction.
pub fn diversity_features(agg: &UserAggregate, cfg: &FeatureConfig) -> Result<Vec<f64>> {
    check_history(agg, cfg)?;
    let mut out = Vec::with_capacity(
        2 * cfg.retweet_mention_top_n.len() + cfg.hashtag_top_n.len() + cfg.word_top_n.len(),
    );
    class_coverage(agg, ItemClass::Retweeted, &cfg.retweet_mention_top_n, cfg, &mut out);
    class_coverage(agg, ItemClass::Mentioned, &cfg.retweet_mention_top_n, cfg, &mut out);
    class_coverage(agg, ItemClass::Hashtags, &cfg.hashtag_top_n, cfg, &mut out);
    class_coverage(agg, ItemClass::Words, &cfg.word_top_n, cfg, &mut out);
    Ok(out)
}

/// Share of tweets hitting the sentiment and vulgar lexicons. The lexicons
/// were consulted at ingestion time; only the counters are read here.
pub fn style_features(agg: &UserAggregate, cfg: &FeatureConfig) -> Result<[f64; 2]> {
    check_history(agg, cfg)?;
    Ok([
        fraction(agg.sentiment_tweet_count, agg.total_tweets),
        fraction(agg.vulgar_tweet_count, agg.total_tweets),
    ])
}

/// The full vector: interaction ++ diversity ++ style, in schema order.
pub fn featurize(agg: &UserAggregate, cfg: &FeatureConfig) -> Result<FeatureVector> {
    let mut values = Vec::with_capacity(cfg.schema().len());
    values.extend(interaction_features(agg, cfg)?);
    values.extend(diversity_features(agg, cfg)?);
    values.extend(style_features(agg, cfg)?);
    Ok(FeatureVector(values))
}

/// Featurize every aggregate with enough history; returns the vectors and
/// the user ids skipped for insufficient history.
pub fn featurize_all(
    aggregates: &BTreeMap<String, UserAggregate>,
    cfg: &FeatureConfig,
) -> (BTreeMap<String, FeatureVector>, Vec<String>) {
    let aggs: Vec<&UserAggregate> = aggregates.values().collect();
    let results = par::map_collect(&aggs, |agg| featurize(agg, cfg));
    let mut vectors = BTreeMap::new();
    let mut skipped = Vec::new();
    for (agg, result) in aggs.iter().zip(results) {
        match result {
            Ok(v) => {
                vectors.insert(agg.user_id.clone(), v);
            }
            Err(_) => skipped.push(agg.user_id.clone()),
        }
    }
    (vectors, skipped)
}

/// Write the feature matrix as TSV: header `user_id` + column names, one
/// row per user in id order. Floats use the shortest round-trip form.
pub fn write_matrix<W: Write>(
    mut writer: W,
    schema: &FeatureSchema,
    rows: &BTreeMap<String, FeatureVector>,
) -> Result<()> {
    write!(writer, "user_id")?;
    for name in &schema.names {
        write!(writer, "\t{name}")?;
    }
    writeln!(writer)?;
    for (user, vector) in rows {
        write!(writer, "{user}")?;
        for v in vector.values() {
            write!(writer, "\t{v}")?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// Read a matrix produced by [`write_matrix`] (or any tool following the
/// same header convention).
pub fn read_matrix<R: BufRead>(reader: R) -> Result<(Vec<String>, Vec<(String, Vec<f64>)>)> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => {
            return Err(Error::MalformedFile {
                what: "feature matrix",
                line: 1,
                message: "empty file".into(),
            })
        }
    };
    let mut cols = header.split('\t');
    if cols.next() != Some("user_id") {
        return Err(Error::MalformedFile {
            what: "feature matrix",
            line: 1,
            message: "header must start with user_id".into(),
        });
    }
    let names: Vec<String> = cols.map(|s| s.to_string()).collect();
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split('\t');
        let user = parts.next().unwrap_or_default().to_string();
        let values: Vec<f64> = parts
            .map(|p| {
                p.parse::<f64>().map_err(|e| Error::MalformedFile {
                    what: "feature matrix",
                    line: idx + 1,
                    message: format!("bad value {p:?}: {e}"),
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != names.len() {
            return Err(Error::MalformedFile {
                what: "feature matrix",
                line: idx + 1,
                message: format!("expected {} values, got {}", names.len(), values.len()),
            });
        }
        rows.push((user, values));
    }
    Ok((names, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lexicon::{default_stopwords, Lexicon, MatchMode};
    use crate::corpus::normalize::normalize_and_tokenize;
    use crate::corpus::Tweet;

    fn cfg(min_tweets: u64) -> FeatureConfig {
        FeatureConfig {
            min_tweets,
            ..Default::default()
        }
    }

    struct Builder {
        agg: UserAggregate,
        sent: Lexicon,
        vulg: Lexicon,
        stop: Lexicon,
        n: usize,
    }

    impl Builder {
        fn new(user: &str) -> Self {
            Builder {
                agg: UserAggregate::new(user),
                sent: Lexicon::new("s", MatchMode::Word, ["goodword"]).unwrap(),
                vulg: Lexicon::new("v", MatchMode::Word, ["badword"]).unwrap(),
                stop: default_stopwords(),
                n: 0,
            }
        }

        fn tweet(&mut self, text: &str, retweet_of: Option<&str>, url: bool) -> &mut Self {
            self.n += 1;
            let user = self.agg.user_id.clone();
            let mut t = Tweet::test_stub(&format!("t{}", self.n), &user, "u");
            t.text = text.to_string();
            t.tokens = normalize_and_tokenize(text);
            t.hashtags = t
                .tokens
                .iter()
                .filter_map(|tok| match tok {
                    crate::corpus::Token::Hashtag(h) => Some(h.clone()),
                    _ => None,
                })
                .collect();
            t.mentions = t
                .tokens
                .iter()
                .filter_map(|tok| match tok {
                    crate::corpus::Token::Mention(m) => Some(m.clone()),
                    _ => None,
                })
                .collect();
            t.retweet_of = retweet_of.map(|s| s.to_string());
            if url {
                t.urls.push("http://example.com/x".into());
            }
            let (s, v, st) = (self.sent.clone(), self.vulg.clone(), self.stop.clone());
            self.agg.add_tweet(&t, &s, &v, &st);
            self
        }
    }

    #[test]
    fn interaction_fractions() {
        let mut b = Builder::new("u1");
        for i in 0..10 {
            b.tweet("plain", (i < 4).then_some("src"), false);
        }
        let f = interaction_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f[0], 0.4);
        assert_eq!(f[1], 0.0);
    }

    #[test]
    fn url_saturation() {
        let mut b = Builder::new("u1");
        for _ in 0..3 {
            b.tweet("x", None, true);
        }
        let f = interaction_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f[1], 1.0);
    }

    #[test]
    fn insufficient_history_rejected() {
        let mut b = Builder::new("u1");
        b.tweet("only one", None, false);
        assert!(matches!(
            featurize(&b.agg, &cfg(10)),
            Err(Error::InsufficientHistory { .. })
        ));
        let empty = UserAggregate::new("u2");
        assert!(featurize(&empty, &cfg(0)).is_err());
    }

    #[test]
    fn top1_retweeted_coverage() {
        // 3 retweets [A, A, B] among 6 tweets -> top1 covers 2/6
        let mut b = Builder::new("u1");
        b.tweet("1", Some("a"), false)
            .tweet("2", Some("a"), false)
            .tweet("3", Some("b"), false)
            .tweet("4", None, false)
            .tweet("5", None, false)
            .tweet("6", None, false);
        let f = diversity_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f[0], 2.0 / 6.0); // top1_retweeted
        assert_eq!(f[1], 3.0 / 6.0); // top3_retweeted
    }

    #[test]
    fn missing_class_yields_zero() {
        let mut b = Builder::new("u1");
        for _ in 0..5 {
            b.tweet("taglessness", None, false);
        }
        let f = diversity_features(&b.agg, &cfg(1)).unwrap();
        // hashtag slots come after the 2*4 account slots
        assert_eq!(f[8], 0.0);
        assert_eq!(f[9], 0.0);
    }

    #[test]
    fn single_word_every_tweet_saturates() {
        let mut b = Builder::new("u1");
        for _ in 0..4 {
            b.tweet("constant", None, false);
        }
        let f = diversity_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f[10], 1.0); // top10_words
    }

    #[test]
    fn style_counts() {
        let mut b = Builder::new("u1");
        for i in 0..20 {
            let text = if i < 5 { "goodword here" } else { "neutral" };
            b.tweet(text, None, false);
        }
        let f = style_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f[0], 0.25);
        assert_eq!(f[1], 0.0);
    }

    #[test]
    fn both_lexicons_in_one_tweet_count_once_each() {
        let mut b = Builder::new("u1");
        b.tweet("goodword badword", None, false);
        let f = style_features(&b.agg, &cfg(1)).unwrap();
        assert_eq!(f, [1.0, 1.0]);
    }

    #[test]
    fn featurize_is_concatenation() {
        let mut b = Builder::new("u1");
        b.tweet("#x goodword", Some("a"), true)
            .tweet("@m plain", None, false)
            .tweet("#x again", None, false);
        let c = cfg(1);
        let full = featurize(&b.agg, &c).unwrap();
        let mut manual = Vec::new();
        manual.extend(interaction_features(&b.agg, &c).unwrap());
        manual.extend(diversity_features(&b.agg, &c).unwrap());
        manual.extend(style_features(&b.agg, &c).unwrap());
        assert_eq!(full.values(), &manual[..]);
        assert_eq!(full.values().len(), 20);
    }

    #[test]
    fn doubling_leaves_vector_unchanged() {
        let mut b = Builder::new("u1");
        b.tweet("#x goodword", Some("a"), true)
            .tweet("@m plain words", None, false)
            .tweet("#y more", Some("b"), false);
        let c = cfg(1);
        let once = featurize(&b.agg, &c).unwrap();
        let mut doubled = b.agg.clone();
        doubled.merge(&b.agg);
        let twice = featurize(&doubled, &c).unwrap();
        assert_eq!(once, twice);
    }

    #[test]
    fn monotone_in_n() {
        let mut b = Builder::new("u1");
        let tags = ["#a", "#b #c", "#d", "#a #e", "#f", "plain"];
        for t in tags {
            b.tweet(t, None, false);
        }
        let c = cfg(1);
        let f = diversity_features(&b.agg, &c).unwrap();
        let schema = c.schema();
        let names = &schema.names[schema.diversity.clone()];
        for i in 1..names.len() {
            let same_family =
                names[i - 1].split('_').next_back() == names[i].split('_').next_back();
            if same_family {
                assert!(f[i - 1] <= f[i], "{} > {}", names[i - 1], names[i]);
            }
        }
    }

    #[test]
    fn schema_and_matrix_round_trip() {
        let c = cfg(1);
        let schema = c.schema();
        assert_eq!(schema.len(), 20);
        assert_eq!(schema.names[0], "pct_retweets");
        assert_eq!(schema.names[5], "top1_retweeted");
        assert_eq!(schema.names[13], "top5_hashtags");
        assert_eq!(schema.names[19], "pct_vulgar");
        assert_eq!(schema.interaction, 0..5);
        assert_eq!(schema.diversity, 5..18);
        assert_eq!(schema.style, 18..20);

        let mut b = Builder::new("u1");
        b.tweet("#x goodword", Some("a"), true).tweet("y", None, false);
        let mut rows = BTreeMap::new();
        rows.insert("u1".to_string(), featurize(&b.agg, &c).unwrap());
        let mut buf = Vec::new();
        write_matrix(&mut buf, &schema, &rows).unwrap();
        let (names, parsed) = read_matrix(std::io::Cursor::new(buf)).unwrap();
        assert_eq!(names, schema.names);
        assert_eq!(parsed[0].0, "u1");
        assert_eq!(parsed[0].1, rows["u1"].values());
    }

    #[test]
    fn config_validation() {
        let mut c = FeatureConfig::default();
        c.word_top_n = vec![10, 10];
        assert!(c.validate().is_err());
        c.word_top_n = vec![0];
        assert!(c.validate().is_err());
        assert!(FeatureConfig::default().validate().is_ok());
    }
}
