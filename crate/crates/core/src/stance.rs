//! Semi-supervised pro/anti stance labeling.
//!
//! Starting from a small hand-labeled seed set, each round (1) tags every
//! topic-mentioning tweet of a labeled user with that user's stance, then
//! (2) labels every unlabeled user whose retweets of tagged topic tweets are
//! consistent with a single stance. Labels are write-once: once assigned, a
//! user's stance never flips, and the round that added it is retained as an
//! audit trail.
//!
//! The wire format carries only the retweeted author's username, so "user U
//! retweeted a tagged tweet" is resolved as: U's retweet itself mentions the
//! topic and its source username belongs to a tagged author. Sources whose
//! username maps to conflicting stances are ignored as evidence.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, Lexicon};
use crate::error::{Error, Result};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Pro,
    Anti,
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stance::Pro => "pro",
            Stance::Anti => "anti",
        })
    }
}

impl FromStr for Stance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Stance> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pro" => Ok(Stance::Pro),
            "anti" => Ok(Stance::Anti),
            other => Err(Error::InvalidConfig(format!("unknown stance {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StanceState {
    pub labels: BTreeMap<String, Stance>,
    /// Round that labeled each user; 0 marks a seed.
    pub iteration_added: BTreeMap<String, u32>,
    pub tagged_tweets: BTreeMap<String, Stance>,
}

impl StanceState {
    pub fn from_seeds(seeds: &BTreeMap<String, Stance>) -> StanceState {
        StanceState {
            labels: seeds.clone(),
            iteration_added: seeds.keys().map(|u| (u.clone(), 0)).collect(),
            tagged_tweets: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PropagationConfig {
    pub topic: Lexicon,
    pub max_iterations: u32,
    /// Minimum stance-tagged retweets before a user can be labeled.
    pub min_evidence: u32,
    /// Minimum fraction of that evidence agreeing on one stance.
    pub consistency: f64,
}

impl PropagationConfig {
    pub fn new(topic: Lexicon) -> PropagationConfig {
        PropagationConfig {
            topic,
            max_iterations: 3,
            min_evidence: 5,
            consistency: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.consistency > 0.5 && self.consistency <= 1.0) {
            return Err(Error::InvalidConfig(
                "consistency must be in (0.5, 1.0]".into(),
            ));
        }
        if self.min_evidence == 0 {
            return Err(Error::InvalidConfig("min_evidence must be >= 1".into()));
        }
        Ok(())
    }
}

/// Tag every topic-mentioning tweet authored by a labeled user with that
/// user's stance. Idempotent; re-tagging after new labels only adds tags.
pub fn tag_topic_tweets(state: &mut StanceState, corpus: &Corpus, topic: &Lexicon) {
    for tweet in &corpus.tweets {
        if let Some(stance) = state.labels.get(&tweet.user_id) {
            if tweet.mentions_topic(topic) {
                state.tagged_tweets.insert(tweet.tweet_id.clone(), *stance);
            }
        }
    }
}

/// Usernames of tagged authors and their stance; `None` marks a username
/// shared by authors with conflicting stances.
fn tagged_source_stances(
    state: &StanceState,
    corpus: &Corpus,
) -> BTreeMap<String, Option<Stance>> {
    let mut sources: BTreeMap<String, Option<Stance>> = BTreeMap::new();
    for tweet in &corpus.tweets {
        if let Some(stance) = state.tagged_tweets.get(&tweet.tweet_id) {
            sources
                .entry(tweet.username.clone())
                .and_modify(|existing| {
                    if *existing != Some(*stance) {
                        *existing = None;
                    }
                })
                .or_insert(Some(*stance));
        }
    }
    sources
}

/// One propagation round: find unlabeled users whose topic retweets give
/// enough consistent evidence. Does not mutate the state; callers commit.
pub fn propagate_step(
    state: &StanceState,
    corpus: &Corpus,
    cfg: &PropagationConfig,
) -> Vec<(String, Stance)> {
    let sources = tagged_source_stances(state, corpus);
    let candidates: Vec<&String> = corpus
        .user_ids()
        .filter(|u| !state.labels.contains_key(*u))
        .collect();
    let decisions = par::map_collect(&candidates, |user| {
        let mut pro = 0u64;
        let mut anti = 0u64;
        for tweet in corpus.tweets_of(user) {
            let source = match &tweet.retweet_of {
                Some(s) => s,
                None => continue,
            };
            if !tweet.mentions_topic(&cfg.topic) {
                continue;
            }
            match sources.get(source) {
                Some(Some(Stance::Pro)) => pro += 1,
                Some(Some(Stance::Anti)) => anti += 1,
                _ => {}
            }
        }
        let total = pro + anti;
        if total < cfg.min_evidence as u64 {
            return None;
        }
        let total_f = total as f64;
        if pro as f64 / total_f >= cfg.consistency {
            Some(Stance::Pro)
        } else if anti as f64 / total_f >= cfg.consistency {
            Some(Stance::Anti)
        } else {
            None
        }
    });
    candidates
        .into_iter()
        .zip(decisions)
        .filter_map(|(user, stance)| stance.map(|s| (user.clone(), s)))
        .collect()
}

/// Run tagging and propagation rounds from the seed labels until the
/// iteration cap or a fixpoint. Seeds are never relabeled.
pub fn propagate(
    seeds: &BTreeMap<String, Stance>,
    corpus: &Corpus,
    cfg: &PropagationConfig,
) -> Result<StanceState> {
    cfg.validate()?;
    if seeds.is_empty() {
        return Err(Error::EmptySeeds);
    }
    let has = |s: Stance| seeds.values().any(|v| *v == s);
    if !has(Stance::Pro) || !has(Stance::Anti) {
        return Err(Error::MissingStance);
    }
    let mut state = StanceState::from_seeds(seeds);
    for round in 1..=cfg.max_iterations {
        tag_topic_tweets(&mut state, corpus, &cfg.topic);
        let newly = propagate_step(&state, corpus, cfg);
        if newly.is_empty() {
            break;
        }
        for (user, stance) in newly {
            state.labels.insert(user.clone(), stance);
            state.iteration_added.insert(user, round);
        }
    }
    // leave tags consistent with the final labels
    tag_topic_tweets(&mut state, corpus, &cfg.topic);
    Ok(state)
}

/// Uniform sample of labeled users without replacement, reproducible from
/// the seed (for manual validation of the propagated labels).
pub fn sample_for_validation(state: &StanceState, k: usize, seed: u64) -> Result<Vec<String>> {
    let mut users: Vec<String> = state.labels.keys().cloned().collect();
    if k > users.len() {
        return Err(Error::SampleTooLarge {
            k,
            labeled: users.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..k {
        let remaining = users.len() - i;
        let j = i + (rng.next_u64() % remaining as u64) as usize;
        users.swap(i, j);
    }
    users.truncate(k);
    Ok(users)
}

/// Seed file: `user_id<TAB>stance`, `#` comments allowed.
pub fn read_seeds<R: BufRead>(reader: R) -> Result<BTreeMap<String, Stance>> {
    let mut seeds = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (user, stance) = match (parts.next(), parts.next()) {
            (Some(u), Some(s)) => (u, s),
            _ => {
                return Err(Error::MalformedFile {
                    what: "seeds",
                    line: idx + 1,
                    message: "expected: user_id stance".into(),
                })
            }
        };
        seeds.insert(user.to_string(), stance.parse()?);
    }
    Ok(seeds)
}

/// Output file: `user_id<TAB>stance<TAB>iteration_added`, sorted by user.
pub fn write_stance_file<W: Write>(state: &StanceState, mut writer: W) -> Result<()> {
    writeln!(writer, "user_id\tstance\titeration_added")?;
    for (user, stance) in &state.labels {
        let round = state.iteration_added.get(user).copied().unwrap_or(0);
        writeln!(writer, "{user}\t{stance}\t{round}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lexicon::MatchMode;
    use crate::corpus::normalize::normalize_and_tokenize;
    use crate::corpus::Tweet;

    fn topic() -> Lexicon {
        Lexicon::new("topic", MatchMode::Word, ["sisi"]).unwrap()
    }

    fn tweet(id: &str, user: &str, text: &str, retweet_of: Option<&str>) -> Tweet {
        let mut t = Tweet::test_stub(id, user, user);
        t.text = text.to_string();
        t.tokens = normalize_and_tokenize(text);
        t.retweet_of = retweet_of.map(|s| s.to_string());
        t
    }

    fn seeds(pairs: &[(&str, Stance)]) -> BTreeMap<String, Stance> {
        pairs.iter().map(|(u, s)| (u.to_string(), *s)).collect()
    }

    #[test]
    fn tagging_honors_topic_and_labels() {
        let corpus = Corpus::from_tweets(vec![
            tweet("t1", "seed_pro", "sisi is great", None),
            tweet("t2", "seed_pro", "lunch today", None),
            tweet("t3", "stranger", "sisi yes", None),
        ]);
        let mut state = StanceState::from_seeds(&seeds(&[("seed_pro", Stance::Pro)]));
        tag_topic_tweets(&mut state, &corpus, &topic());
        assert_eq!(state.tagged_tweets.get("t1"), Some(&Stance::Pro));
        assert!(!state.tagged_tweets.contains_key("t2")); // off-topic
        assert!(!state.tagged_tweets.contains_key("t3")); // unlabeled author
    }

    /// Build a corpus where `user` retweets `n_pro` pro-tagged and `n_anti`
    /// anti-tagged topic tweets.
    fn evidence_corpus(n_pro: u32, n_anti: u32) -> Corpus {
        let mut tweets = vec![
            tweet("p0", "seed_pro", "sisi original pro", None),
            tweet("a0", "seed_anti", "sisi original anti", None),
        ];
        for i in 0..n_pro {
            tweets.push(tweet(
                &format!("rp{i}"),
                "candidate",
                "rt sisi original pro",
                Some("seed_pro"),
            ));
        }
        for i in 0..n_anti {
            tweets.push(tweet(
                &format!("ra{i}"),
                "candidate",
                "rt sisi original anti",
                Some("seed_anti"),
            ));
        }
        Corpus::from_tweets(tweets)
    }

    fn base_seeds() -> BTreeMap<String, Stance> {
        seeds(&[("seed_pro", Stance::Pro), ("seed_anti", Stance::Anti)])
    }

    #[test]
    fn unanimous_evidence_labels_user() {
        let corpus = evidence_corpus(5, 0);
        let cfg = PropagationConfig::new(topic());
        let mut state = StanceState::from_seeds(&base_seeds());
        tag_topic_tweets(&mut state, &corpus, &cfg.topic);
        let newly = propagate_step(&state, &corpus, &cfg);
        assert_eq!(newly, vec![("candidate".to_string(), Stance::Pro)]);
    }

    #[test]
    fn mixed_evidence_stays_unlabeled_under_unanimity() {
        let corpus = evidence_corpus(3, 2);
        let cfg = PropagationConfig::new(topic());
        let mut state = StanceState::from_seeds(&base_seeds());
        tag_topic_tweets(&mut state, &corpus, &cfg.topic);
        assert!(propagate_step(&state, &corpus, &cfg).is_empty());
        // lowering consistency to 0.6 admits the 3/5 majority
        let lax = PropagationConfig {
            consistency: 0.6,
            ..cfg
        };
        assert_eq!(
            propagate_step(&state, &corpus, &lax),
            vec![("candidate".to_string(), Stance::Pro)]
        );
    }

    #[test]
    fn no_evidence_stays_unlabeled() {
        let corpus = evidence_corpus(0, 0);
        let cfg = PropagationConfig::new(topic());
        let mut state = StanceState::from_seeds(&base_seeds());
        tag_topic_tweets(&mut state, &corpus, &cfg.topic);
        assert!(propagate_step(&state, &corpus, &cfg).is_empty());
    }

    #[test]
    fn off_topic_retweets_are_not_evidence() {
        let mut tweets = vec![tweet("p0", "seed_pro", "sisi pro", None)];
        for i in 0..5 {
            // retweets of the pro seed that do not mention the topic
            tweets.push(tweet(
                &format!("r{i}"),
                "candidate",
                "rt unrelated chatter",
                Some("seed_pro"),
            ));
        }
        let corpus = Corpus::from_tweets(tweets);
        let cfg = PropagationConfig::new(topic());
        let mut state = StanceState::from_seeds(&base_seeds());
        tag_topic_tweets(&mut state, &corpus, &cfg.topic);
        assert!(propagate_step(&state, &corpus, &cfg).is_empty());
    }

    #[test]
    fn seeds_without_retweets_reach_fixpoint_at_round_zero() {
        let corpus = Corpus::from_tweets(vec![
            tweet("t1", "seed_pro", "sisi text", None),
            tweet("t2", "seed_anti", "sisi other", None),
            tweet("t3", "bystander", "plain", None),
        ]);
        let state = propagate(&base_seeds(), &corpus, &PropagationConfig::new(topic())).unwrap();
        assert_eq!(state.labels.len(), 2);
        assert!(state.labels.contains_key("seed_pro"));
    }

    #[test]
    fn chain_propagates_round_by_round() {
        // seed -> layer1 (retweets seed) -> layer2 (retweets layer1)
        let mut cfg = PropagationConfig::new(topic());
        cfg.min_evidence = 1;
        let tweets = vec![
            tweet("s1", "seed_pro", "sisi origin", None),
            tweet("s2", "seed_anti", "sisi counter", None),
            tweet("l1a", "layer1", "rt sisi origin", Some("seed_pro")),
            tweet("l1b", "layer1", "sisi my own words", None),
            tweet("l2a", "layer2", "rt sisi my own words", Some("layer1")),
        ];
        let corpus = Corpus::from_tweets(tweets);
        let state = propagate(&base_seeds(), &corpus, &cfg).unwrap();
        assert_eq!(state.labels.get("layer1"), Some(&Stance::Pro));
        assert_eq!(state.labels.get("layer2"), Some(&Stance::Pro));
        assert_eq!(state.iteration_added.get("layer1"), Some(&1));
        assert_eq!(state.iteration_added.get("layer2"), Some(&2));
        // audit trail for seeds
        assert_eq!(state.iteration_added.get("seed_pro"), Some(&0));
    }

    #[test]
    fn iteration_cap_stops_the_chain() {
        let mut cfg = PropagationConfig::new(topic());
        cfg.min_evidence = 1;
        cfg.max_iterations = 1;
        let tweets = vec![
            tweet("s1", "seed_pro", "sisi origin", None),
            tweet("s2", "seed_anti", "sisi counter", None),
            tweet("l1a", "layer1", "rt sisi origin", Some("seed_pro")),
            tweet("l1b", "layer1", "sisi own", None),
            tweet("l2a", "layer2", "rt sisi own", Some("layer1")),
        ];
        let corpus = Corpus::from_tweets(tweets);
        let state = propagate(&base_seeds(), &corpus, &cfg).unwrap();
        assert!(state.labels.contains_key("layer1"));
        assert!(!state.labels.contains_key("layer2"));
    }

    #[test]
    fn empty_or_one_sided_seeds_rejected() {
        let corpus = evidence_corpus(1, 0);
        let cfg = PropagationConfig::new(topic());
        assert!(matches!(
            propagate(&BTreeMap::new(), &corpus, &cfg),
            Err(Error::EmptySeeds)
        ));
        assert!(matches!(
            propagate(&seeds(&[("seed_pro", Stance::Pro)]), &corpus, &cfg),
            Err(Error::MissingStance)
        ));
    }

    #[test]
    fn corpus_permutation_does_not_change_outcome() {
        let mut cfg = PropagationConfig::new(topic());
        cfg.min_evidence = 2;
        let mut tweets = vec![
            tweet("s1", "seed_pro", "sisi one", None),
            tweet("s2", "seed_anti", "sisi two", None),
            tweet("r1", "cand", "rt sisi one", Some("seed_pro")),
            tweet("r2", "cand", "rt sisi one again", Some("seed_pro")),
        ];
        let forward = propagate(&base_seeds(), &Corpus::from_tweets(tweets.clone()), &cfg).unwrap();
        tweets.reverse();
        let backward = propagate(&base_seeds(), &Corpus::from_tweets(tweets), &cfg).unwrap();
        assert_eq!(forward.labels, backward.labels);
        assert_eq!(forward.iteration_added, backward.iteration_added);
    }

    #[test]
    fn sampling_is_reproducible_and_bounded() {
        let mut state = StanceState::default();
        for i in 0..100 {
            state.labels.insert(format!("user{i:03}"), Stance::Pro);
        }
        let a = sample_for_validation(&state, 10, 42).unwrap();
        let b = sample_for_validation(&state, 10, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 10);
        let all = sample_for_validation(&state, 100, 7).unwrap();
        assert_eq!(all.len(), 100);
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 100); // without replacement
        assert!(sample_for_validation(&state, 101, 1).is_err());
    }

    #[test]
    fn seed_file_round_trip() {
        let text = "# seeds\nu1\tpro\nu2\tanti\n";
        let seeds = read_seeds(std::io::Cursor::new(text)).unwrap();
        assert_eq!(seeds.len(), 2);
        assert_eq!(seeds["u2"], Stance::Anti);
        let corpus = Corpus::from_tweets(vec![tweet("t", "u1", "sisi", None)]);
        let state = propagate(&seeds, &corpus, &PropagationConfig::new(topic())).unwrap();
        let mut buf = Vec::new();
        write_stance_file(&state, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("user_id\tstance\titeration_added\n"));
        assert!(text.contains("u1\tpro\t0"));
    }

    #[test]
    fn config_validation() {
        let mut cfg = PropagationConfig::new(topic());
        cfg.consistency = 0.5;
        assert!(cfg.validate().is_err());
        cfg.consistency = 1.0;
        cfg.min_evidence = 0;
        assert!(cfg.validate().is_err());
    }
}
