//! Deterministic synthetic corpora with planted ground truth.
//!
//! The generator plants seminar cliques (concentrated retweet/hashtag/word
//! behavior), diverse normal users, optional hashtag campaign bursts, and an
//! optional layered stance structure, and emits the canonical JSONL record
//! format plus gold files for every planted structure. Generation is
//! single-threaded over one seeded stream, so equal configs produce
//! byte-identical output.

use std::collections::BTreeMap;
use std::io::Write;

use chrono::{DateTime, SecondsFormat};
use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct BehaviorRates {
    pub retweet: f64,
    pub url: f64,
    pub media: f64,
    pub mention: f64,
    pub hashtag: f64,
    pub sentiment: f64,
    pub vulgar: f64,
}

#[derive(Debug, Clone)]
pub struct CliqueSpec {
    pub name: String,
    /// Size of the clique's shared hashtag and account pools.
    pub hashtag_pool: usize,
    pub account_pool: usize,
    /// Probability of drawing the pool's top item instead of a uniform one.
    pub concentration: f64,
}

#[derive(Debug, Clone)]
pub struct CampaignSpec {
    pub hashtag: String,
    pub day: u32,
    pub tweets: u64,
    pub by_seminar: bool,
}

#[derive(Debug, Clone)]
pub struct StanceSpec {
    pub pro_seeds: usize,
    pub anti_seeds: usize,
    /// Users added per propagation layer (each camp gets this many).
    pub layers: Vec<usize>,
    /// Topic retweets each layered user makes of the previous layer.
    pub evidence_per_user: u32,
    pub topic_term: String,
}

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub seed: u64,
    pub n_seminar: usize,
    pub n_normal: usize,
    /// Inclusive uniform range of background tweets per user.
    pub tweets_per_user: (u32, u32),
    pub n_days: u32,
    pub start_epoch: i64,
    pub cliques: Vec<CliqueSpec>,
    pub campaigns: Vec<CampaignSpec>,
    pub stance: Option<StanceSpec>,
    pub seminar_rates: BehaviorRates,
    pub normal_rates: BehaviorRates,
    /// Half-width of the per-user uniform perturbation applied to every
    /// behavior rate; overlap between the groups makes them imperfectly
    /// separable.
    pub rate_jitter: f64,
    /// Per-user perturbation of pool concentrations.
    pub concentration_jitter: f64,
    /// Concentration normal users put on their personal favorites.
    pub normal_concentration: f64,
    /// Probability a seminar user's word comes from the clique word slice
    /// rather than the shared vocabulary.
    pub seminar_word_focus: f64,
    /// Per-user discipline of each habit family, drawn independently as
    /// mean +- spread (triangular). A seminar user weak in one family is
    /// usually still exposed by the others, which is what makes the
    /// families complementary evidence rather than copies of one signal.
    pub interaction_strength: (f64, f64),
    pub diversity_strength: (f64, f64),
    pub style_strength: (f64, f64),
    /// Word vocabulary sizes: (seminar per-clique slice, normal universe).
    pub vocab_words: (usize, usize),
    /// Normal users' hashtag and account universe sizes.
    pub normal_universe: (usize, usize),
    /// Personal pool sizes for normal users (favorite tags/accounts).
    pub normal_pools: (usize, usize),
    pub sentiment_words: usize,
    pub vulgar_words: usize,
}

impl SynthConfig {
    /// A well-separated corpus for classifier verification: seminar users
    /// concentrate heavily on clique accounts and hashtags and hit the
    /// style lexicons more often; normal users spread out.
    pub fn separable(n_seminar: usize, n_normal: usize, seed: u64) -> SynthConfig {
        SynthConfig {
            seed,
            n_seminar,
            n_normal,
            tweets_per_user: (25, 45),
            n_days: 56,
            start_epoch: 1_448_928_000, // 2015-12-01T00:00:00Z
            cliques: vec![
                CliqueSpec {
                    name: "alpha".into(),
                    hashtag_pool: 6,
                    account_pool: 5,
                    concentration: 0.82,
                },
                CliqueSpec {
                    name: "beta".into(),
                    hashtag_pool: 8,
                    account_pool: 6,
                    concentration: 0.78,
                },
                CliqueSpec {
                    name: "gamma".into(),
                    hashtag_pool: 7,
                    account_pool: 5,
                    concentration: 0.8,
                },
            ],
            campaigns: Vec::new(),
            stance: None,
            // retweet/mention/hashtag gaps stay small: those rates cap the
            // top-n coverage features, so wide gaps would leak interaction
            // signal into the diversity family. Links and media carry most
            // of the interaction signal instead.
            seminar_rates: BehaviorRates {
                retweet: 0.45,
                url: 0.55,
                media: 0.48,
                mention: 0.44,
                hashtag: 0.56,
                sentiment: 0.38,
                vulgar: 0.18,
            },
            normal_rates: BehaviorRates {
                retweet: 0.35,
                url: 0.2,
                media: 0.12,
                mention: 0.36,
                hashtag: 0.48,
                sentiment: 0.22,
                vulgar: 0.08,
            },
            rate_jitter: 0.12,
            concentration_jitter: 0.1,
            normal_concentration: 0.3,
            seminar_word_focus: 0.7,
            interaction_strength: (0.72, 0.38),
            diversity_strength: (0.5, 0.45),
            style_strength: (0.5, 0.42),
            vocab_words: (25, 1500),
            normal_universe: (60, 150),
            normal_pools: (10, 10),
            sentiment_words: 25,
            vulgar_words: 15,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check_rate = |v: f64, what: &str| -> Result<()> {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!("{what} must be in [0,1]")));
            }
            Ok(())
        };
        for (rates, who) in [(&self.seminar_rates, "seminar"), (&self.normal_rates, "normal")] {
            for (v, what) in [
                (rates.retweet, "retweet rate"),
                (rates.url, "url rate"),
                (rates.media, "media rate"),
                (rates.mention, "mention rate"),
                (rates.hashtag, "hashtag rate"),
                (rates.sentiment, "sentiment rate"),
                (rates.vulgar, "vulgar rate"),
            ] {
                check_rate(v, &format!("{who} {what}"))?;
            }
        }
        check_rate(self.rate_jitter, "rate_jitter")?;
        check_rate(self.concentration_jitter, "concentration_jitter")?;
        check_rate(self.normal_concentration, "normal_concentration")?;
        check_rate(self.seminar_word_focus, "seminar_word_focus")?;
        for (mean, spread) in [
            self.interaction_strength,
            self.diversity_strength,
            self.style_strength,
        ] {
            check_rate(mean, "family strength mean")?;
            check_rate(spread, "family strength spread")?;
        }
        for clique in &self.cliques {
            check_rate(clique.concentration, "clique concentration")?;
            if clique.hashtag_pool == 0 || clique.account_pool == 0 {
                return Err(Error::InvalidConfig("clique pools must be non-empty".into()));
            }
        }
        if self.n_seminar > 0 && self.cliques.is_empty() {
            return Err(Error::InvalidConfig(
                "seminar users need at least one clique".into(),
            ));
        }
        if self.tweets_per_user.0 > self.tweets_per_user.1 {
            return Err(Error::InvalidConfig("tweets_per_user range inverted".into()));
        }
        if self.n_days == 0 {
            return Err(Error::InvalidConfig("n_days must be >= 1".into()));
        }
        for campaign in &self.campaigns {
            if campaign.day >= self.n_days {
                return Err(Error::InvalidConfig(format!(
                    "campaign {} day {} outside corpus window",
                    campaign.hashtag, campaign.day
                )));
            }
            let group_size = if campaign.by_seminar {
                self.n_seminar
            } else {
                self.n_normal
            };
            if campaign.tweets > 0 && group_size == 0 {
                return Err(Error::InvalidConfig(format!(
                    "campaign {} has no users to post it",
                    campaign.hashtag
                )));
            }
        }
        if let Some(stance) = &self.stance {
            if stance.pro_seeds == 0 || stance.anti_seeds == 0 {
                return Err(Error::InvalidConfig(
                    "stance spec needs seeds on both sides".into(),
                ));
            }
            if stance.evidence_per_user == 0 {
                return Err(Error::InvalidConfig("evidence_per_user must be >= 1".into()));
            }
            if stance.topic_term.trim().is_empty() {
                return Err(Error::InvalidConfig("empty stance topic term".into()));
            }
        }
        Ok(())
    }
}

/// Gold files describing the planted structure, in the formats the rest of
/// the pipeline consumes.
#[derive(Debug, Clone, Default)]
pub struct GoldFiles {
    /// user_id<TAB>seminar|normal
    pub labels: String,
    /// clique member list: user_id<TAB>clique
    pub cliques: String,
    /// planted campaign day series: hashtag<TAB>day,counts,...
    pub campaigns: String,
    /// seed users for propagation: user_id<TAB>stance
    pub stance_seeds: String,
    /// expected propagation outcome: user_id<TAB>stance<TAB>layer
    pub stance_gold: String,
    /// lexicon files matching the generated text
    pub sentiment_lexicon: String,
    pub vulgar_lexicon: String,
    pub stats: SynthStats,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthStats {
    pub tweets: u64,
    pub users: u64,
}

#[derive(Serialize)]
struct Record<'a> {
    id: &'a str,
    user_id: &'a str,
    username: &'a str,
    created_at: String,
    text: &'a str,
    hashtags: &'a [String],
    mentions: &'a [String],
    urls: &'a [String],
    has_media: bool,
    retweet_of: Option<&'a str>,
    location: Option<&'a str>,
}

struct Rng(ChaCha8Rng);

impl Rng {
    fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    fn chance(&mut self, p: f64) -> bool {
        self.unit() < p
    }

    fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n.max(1) as u64) as usize
    }

    fn range(&mut self, lo: u32, hi: u32) -> u32 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as u32
    }
}

struct Emitter<'a, W: Write> {
    out: &'a mut W,
    seq: u64,
    cfg: &'a SynthConfig,
    tweets_written: u64,
}

impl<'a, W: Write> Emitter<'a, W> {
    #[allow(clippy::too_many_arguments)]
    fn emit(
        &mut self,
        user: &str,
        day: u32,
        second_of_day: u32,
        text: &str,
        hashtags: &[String],
        mentions: &[String],
        urls: &[String],
        has_media: bool,
        retweet_of: Option<&str>,
        location: Option<&str>,
    ) -> Result<()> {
        self.seq += 1;
        let ts = self.cfg.start_epoch + day as i64 * 86_400 + second_of_day as i64;
        let id = format!("t{:09}", self.seq);
        let record = Record {
            id: &id,
            user_id: user,
            username: user,
            created_at: DateTime::from_timestamp(ts, 0)
                .expect("valid synthetic timestamp")
                .to_rfc3339_opts(SecondsFormat::Secs, true),
            text,
            hashtags,
            mentions,
            urls,
            has_media,
            retweet_of,
            location,
        };
        serde_json::to_writer(&mut *self.out, &record)
            .map_err(|e| Error::InvalidConfig(format!("serialize record: {e}")))?;
        self.out.write_all(b"\n")?;
        self.tweets_written += 1;
        Ok(())
    }
}

fn pool_draw(rng: &mut Rng, pool: &[String], concentration: f64) -> String {
    if pool.len() == 1 || rng.chance(concentration) {
        pool[0].clone()
    } else {
        pool[rng.below(pool.len())].clone()
    }
}

const LOCATIONS: [&str; 5] = ["Egypt", "UAE", "KSA", "Yemen", "London"];

fn draw_favorites(rng: &mut Rng, universe: &[String], n: usize) -> Vec<String> {
    (0..n).map(|_| universe[rng.below(universe.len())].clone()).collect()
}

/// Generate the corpus into `corpus_out` and return the gold files.
pub fn generate_to<W: Write>(cfg: &SynthConfig, corpus_out: &mut W) -> Result<GoldFiles> {
    cfg.validate()?;
    let mut rng = Rng(ChaCha8Rng::seed_from_u64(cfg.seed));
    let mut gold = GoldFiles::default();

    // shared vocabularies
    let sentiment: Vec<String> = (0..cfg.sentiment_words)
        .map(|i| format!("sentword{i:03}"))
        .collect();
    let vulgar: Vec<String> = (0..cfg.vulgar_words)
        .map(|i| format!("vulgword{i:03}"))
        .collect();
    gold.sentiment_lexicon = sentiment.join("\n") + "\n";
    gold.vulgar_lexicon = vulgar.join("\n") + "\n";
    let normal_words: Vec<String> = (0..cfg.vocab_words.1).map(|i| format!("w{i:04}")).collect();
    let normal_tags: Vec<String> = (0..cfg.normal_universe.0)
        .map(|i| format!("tag{i:03}"))
        .collect();
    let normal_accounts: Vec<String> = (0..cfg.normal_universe.1)
        .map(|i| format!("acc{i:03}"))
        .collect();

    struct CliquePools {
        hashtags: Vec<String>,
        accounts: Vec<String>,
        words: Vec<String>,
        concentration: f64,
        location: &'static str,
    }
    let clique_pools: Vec<CliquePools> = cfg
        .cliques
        .iter()
        .enumerate()
        .map(|(ci, c)| CliquePools {
            hashtags: (0..c.hashtag_pool)
                .map(|i| format!("cq{ci}tag{i:02}"))
                .collect(),
            accounts: (0..c.account_pool)
                .map(|i| format!("cq{ci}acc{i:02}"))
                .collect(),
            words: (0..cfg.vocab_words.0)
                .map(|i| format!("cq{ci}word{i:03}"))
                .collect(),
            concentration: c.concentration,
            location: LOCATIONS[ci % LOCATIONS.len()],
        })
        .collect();

    let mut emitter = Emitter {
        out: corpus_out,
        seq: 0,
        cfg,
        tweets_written: 0,
    };

    let mut labels = String::new();
    let mut cliques_gold = String::new();

    // one resolved behavior context per background user
    struct UserCtx {
        seminar: bool,
        rates: BehaviorRates,
        concentration: f64,
        tags: Vec<String>,
        accounts: Vec<String>,
        /// clique word slice and the probability of drawing from it
        word_slice: Option<(Vec<String>, f64)>,
        location: Option<&'static str>,
    }

    let mut users: Vec<(String, UserCtx)> = Vec::new();
    for i in 0..cfg.n_seminar {
        let clique_index = i % clique_pools.len();
        let pool = &clique_pools[clique_index];
        let user = format!("sem{i:04}");
        labels.push_str(&format!("{user}\tseminar\n"));
        cliques_gold.push_str(&format!("{user}\t{}\n", cfg.cliques[clique_index].name));

        let strength = |rng: &mut Rng, (mean, spread): (f64, f64)| {
            // triangular around the mean, clipped to [0,1]
            let t = (rng.unit() + rng.unit()) - 1.0;
            (mean + t * spread).clamp(0.0, 1.0)
        };
        let s_interaction = strength(&mut rng, cfg.interaction_strength);
        let s_diversity = strength(&mut rng, cfg.diversity_strength);
        let s_style = strength(&mut rng, cfg.style_strength);
        let lerp = |a: f64, b: f64, t: f64| a + (b - a) * t;
        let rates = BehaviorRates {
            retweet: lerp(cfg.normal_rates.retweet, cfg.seminar_rates.retweet, s_interaction),
            url: lerp(cfg.normal_rates.url, cfg.seminar_rates.url, s_interaction),
            media: lerp(cfg.normal_rates.media, cfg.seminar_rates.media, s_interaction),
            mention: lerp(cfg.normal_rates.mention, cfg.seminar_rates.mention, s_interaction),
            hashtag: lerp(cfg.normal_rates.hashtag, cfg.seminar_rates.hashtag, s_interaction),
            sentiment: lerp(cfg.normal_rates.sentiment, cfg.seminar_rates.sentiment, s_style),
            vulgar: lerp(cfg.normal_rates.vulgar, cfg.seminar_rates.vulgar, s_style),
        };
        let concentration = lerp(cfg.normal_concentration, pool.concentration, s_diversity);
        // a weak-diversity user ranges over personal favorites like anyone
        // else; a disciplined one recycles the clique pools and vocabulary
        let ctx = if s_diversity < 0.3 {
            UserCtx {
                seminar: true,
                rates,
                concentration,
                tags: draw_favorites(&mut rng, &normal_tags, cfg.normal_pools.0),
                accounts: draw_favorites(&mut rng, &normal_accounts, cfg.normal_pools.1),
                word_slice: None,
                location: Some(pool.location),
            }
        } else {
            UserCtx {
                seminar: true,
                rates,
                concentration,
                tags: pool.hashtags.clone(),
                accounts: pool.accounts.clone(),
                word_slice: Some((pool.words.clone(), cfg.seminar_word_focus * s_diversity)),
                location: Some(pool.location),
            }
        };
        users.push((user, ctx));
    }
    for i in 0..cfg.n_normal {
        let user = format!("nrm{i:04}");
        labels.push_str(&format!("{user}\tnormal\n"));
        let location = if rng.chance(0.3) {
            Some(LOCATIONS[rng.below(LOCATIONS.len())])
        } else {
            None
        };
        users.push((
            user,
            UserCtx {
                seminar: false,
                rates: cfg.normal_rates.clone(),
                concentration: cfg.normal_concentration,
                tags: draw_favorites(&mut rng, &normal_tags, cfg.normal_pools.0),
                accounts: draw_favorites(&mut rng, &normal_accounts, cfg.normal_pools.1),
                word_slice: None,
                location,
            },
        ));
    }
    gold.labels = labels;
    gold.cliques = cliques_gold;

    for (user, ctx) in &users {
        let n_tweets = rng.range(cfg.tweets_per_user.0, cfg.tweets_per_user.1);
        let mut wobble = |v: f64, width: f64| {
            let offset = (rng.unit() * 2.0 - 1.0) * width;
            (v + offset).clamp(0.02, 0.98)
        };
        let rates = BehaviorRates {
            retweet: wobble(ctx.rates.retweet, cfg.rate_jitter),
            url: wobble(ctx.rates.url, cfg.rate_jitter),
            media: wobble(ctx.rates.media, cfg.rate_jitter),
            mention: wobble(ctx.rates.mention, cfg.rate_jitter),
            hashtag: wobble(ctx.rates.hashtag, cfg.rate_jitter),
            sentiment: wobble(ctx.rates.sentiment, cfg.rate_jitter),
            vulgar: wobble(ctx.rates.vulgar, cfg.rate_jitter),
        };
        let concentration = wobble(ctx.concentration, cfg.concentration_jitter);
        for _ in 0..n_tweets {
            let day = rng.range(0, cfg.n_days - 1);
            let second = rng.range(0, 86_399);
            let mut words: Vec<String> = Vec::new();
            let word_count = rng.range(6, 10);
            for _ in 0..word_count {
                let w = match &ctx.word_slice {
                    Some((slice, focus)) if rng.chance(*focus) => {
                        slice[rng.below(slice.len())].clone()
                    }
                    _ => normal_words[rng.below(normal_words.len())].clone(),
                };
                words.push(w);
            }
            if rng.chance(rates.sentiment) {
                words.push(sentiment[rng.below(sentiment.len())].clone());
            }
            if rng.chance(rates.vulgar) {
                words.push(vulgar[rng.below(vulgar.len())].clone());
            }

            let mut hashtags = Vec::new();
            if rng.chance(rates.hashtag) {
                hashtags.push(pool_draw(&mut rng, &ctx.tags, concentration));
                if rng.chance(0.25) {
                    hashtags.push(pool_draw(&mut rng, &ctx.tags, concentration));
                }
            }

            let mut mentions = Vec::new();
            if rng.chance(rates.mention) {
                mentions.push(pool_draw(&mut rng, &ctx.accounts, concentration));
            }

            let retweet_of = if rng.chance(rates.retweet) {
                Some(pool_draw(&mut rng, &ctx.accounts, concentration))
            } else {
                None
            };

            let mut urls = Vec::new();
            if rng.chance(rates.url) {
                urls.push(format!("https://example.com/p{}", rng.below(100_000)));
            }
            let has_media = rng.chance(rates.media);

            let mut text = String::new();
            if let Some(src) = &retweet_of {
                text.push_str("rt @");
                text.push_str(src);
                text.push(' ');
            }
            text.push_str(&words.join(" "));
            for tag in &hashtags {
                text.push_str(" #");
                text.push_str(tag);
            }

            emitter.emit(
                user,
                day,
                second,
                &text,
                &hashtags,
                &mentions,
                &urls,
                has_media,
                retweet_of.as_deref(),
                ctx.location,
            )?;
        }
    }

    // planted campaign bursts: extra tweets on the campaign day, round-robin
    // over the posting group; gold counts come from the emission loop itself
    let mut campaign_series: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    for campaign in &cfg.campaigns {
        let series = campaign_series
            .entry(campaign.hashtag.clone())
            .or_insert_with(|| vec![0u64; cfg.n_days as usize]);
        let group: Vec<&String> = users
            .iter()
            .filter(|(_, ctx)| ctx.seminar == campaign.by_seminar)
            .map(|(u, _)| u)
            .collect();
        for i in 0..campaign.tweets {
            let user = group[i as usize % group.len()];
            let second = rng.range(0, 86_399);
            let hashtags = vec![campaign.hashtag.clone()];
            let text = format!("join the wave #{}", campaign.hashtag);
            emitter.emit(
                user,
                campaign.day,
                second,
                &text,
                &hashtags,
                &[],
                &[],
                false,
                None,
                None,
            )?;
            series[campaign.day as usize] += 1;
        }
    }
    let mut campaigns_gold = String::new();
    for (hashtag, series) in &campaign_series {
        let csv: Vec<String> = series.iter().map(|c| c.to_string()).collect();
        campaigns_gold.push_str(&format!("{hashtag}\t{}\n", csv.join(",")));
    }
    gold.campaigns = campaigns_gold;

    // layered stance structure
    if let Some(stance) = &cfg.stance {
        let mut seeds_gold = String::new();
        let mut stance_gold = String::new();
        let topic = &stance.topic_term;
        let mut previous: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
        for (camp, n_seeds) in [("pro", stance.pro_seeds), ("anti", stance.anti_seeds)] {
            let mut layer0 = Vec::new();
            for i in 0..n_seeds {
                let user = format!("{camp}seed{i:03}");
                seeds_gold.push_str(&format!("{user}\t{camp}\n"));
                stance_gold.push_str(&format!("{user}\t{camp}\t0\n"));
                // the seed's own on-topic statement, retweetable by layer 1
                for j in 0..stance.evidence_per_user {
                    let second = rng.range(0, 86_399);
                    let text = format!("{topic} position statement {j} by {user}");
                    emitter.emit(
                        &user,
                        rng.range(0, cfg.n_days - 1),
                        second,
                        &text,
                        &[],
                        &[],
                        &[],
                        false,
                        None,
                        None,
                    )?;
                }
                layer0.push(user);
            }
            previous.insert(camp, layer0);
        }
        for (layer_index, &layer_size) in stance.layers.iter().enumerate() {
            let round = layer_index as u32 + 1;
            for camp in ["pro", "anti"] {
                let prev = previous.get(camp).expect("camp initialized").clone();
                let mut this_layer = Vec::new();
                for i in 0..layer_size {
                    let user = format!("{camp}l{round}u{i:03}");
                    stance_gold.push_str(&format!("{user}\t{camp}\t{round}\n"));
                    for j in 0..stance.evidence_per_user {
                        let source = &prev[(i + j as usize) % prev.len()];
                        let second = rng.range(0, 86_399);
                        let text = format!("rt @{source} {topic} position statement");
                        emitter.emit(
                            &user,
                            rng.range(0, cfg.n_days - 1),
                            second,
                            &text,
                            &[],
                            &[],
                            &[],
                            false,
                            Some(source),
                            None,
                        )?;
                    }
                    this_layer.push(user);
                }
                previous.insert(camp, this_layer);
            }
        }
        gold.stance_seeds = seeds_gold;
        gold.stance_gold = stance_gold;
    }

    gold.stats = SynthStats {
        tweets: emitter.tweets_written,
        users: users.len() as u64,
    };
    Ok(gold)
}

/// In-memory convenience wrapper around [`generate_to`].
pub fn generate(cfg: &SynthConfig) -> Result<(String, GoldFiles)> {
    let mut buf = Vec::new();
    let gold = generate_to(cfg, &mut buf)?;
    Ok((String::from_utf8(buf).expect("generator writes UTF-8"), gold))
}
