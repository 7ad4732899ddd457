//! One function per subcommand. Artifacts are files; stdout carries a
//! short human summary of what was written.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context as _, Result};
use clap::Args;

use seminar_core::campaigns::{self, DayWindow};
use seminar_core::corpus::ingest::{self, Corpus};
use seminar_core::corpus::lexicon::{Lexicon, MatchMode};
use seminar_core::features::{self, Denominator, FeatureConfig};
use seminar_core::network::{
    build_graph, components, export_graph, layout_force_directed, write_component_report, Band,
    ExportFormat, ExportOptions, HashtagVector,
};
use seminar_core::stance::{self, PropagationConfig};
use seminar_core::svm::{
    evaluate, grid_search, loocv as run_loocv, render_table, train_smo, write_report_tsv,
    EvalReport, FeatureSubset, KernelSvmModel, Label, SmoParams, TrainingRow, TrainingSet,
    DEFAULT_GRID_C, DEFAULT_GRID_GAMMA,
};
use seminar_core::synth::{CampaignSpec, StanceSpec, SynthConfig};

use crate::context::{
    ensure_out_dir, ingest_setup, open_reader, read_group, read_labels, require, resolve, usage,
    write_artifact, Context,
};

// ---------------------------------------------------------------- ingest

#[derive(Args)]
pub struct IngestArgs {
    /// Line-delimited tweet archive (JSONL).
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corpus start date (YYYY-MM-DD) anchoring day 0.
    #[arg(long)]
    start_date: Option<String>,
    /// Sentiment lexicon file.
    #[arg(long)]
    sentiment: Option<PathBuf>,
    /// Vulgar/combative lexicon file.
    #[arg(long)]
    vulgar: Option<PathBuf>,
    /// Stopword file (defaults to the built-in Arabic+English list).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Religious-service filter config (JSON).
    #[arg(long)]
    filter_config: Option<PathBuf>,
    /// Field mapping: "twitter" or a JSON file of canonical-field -> path.
    #[arg(long)]
    field_map: Option<String>,
}

pub fn ingest(args: IngestArgs, ctx: &Context) -> Result<()> {
    let corpus = require(args.corpus, ctx.path("ingest", "corpus"), "corpus")?;
    let out = require(args.out, ctx.path("ingest", "out"), "out")?;
    let setup = ingest_setup(
        args.start_date.or(ctx.string("ingest", "start_date")),
        args.filter_config.or(ctx.path("ingest", "filter_config")),
        args.field_map.or(ctx.string("ingest", "field_map")),
        args.sentiment.or(ctx.path("ingest", "sentiment")),
        args.vulgar.or(ctx.path("ingest", "vulgar")),
        args.stopwords.or(ctx.path("ingest", "stopwords")),
    )?;
    ensure_out_dir(&out)?;

    let output = ingest::ingest_path(&corpus, &setup.lexicons, &setup.config)?;
    let aggregates_path = out.join("aggregates.jsonl");
    write_artifact(&aggregates_path, |w| {
        ingest::write_aggregates(&output.aggregates, w)?;
        Ok(())
    })?;
    let s = output.stats;
    println!(
        "ingested {} tweets from {} users ({} religious auto-posts filtered, {} malformed, {} before start date)",
        s.ingested,
        output.aggregates.len(),
        s.filtered_religious,
        s.malformed,
        s.before_start
    );
    println!("wrote {}", aggregates_path.display());
    Ok(())
}

// ------------------------------------------------------------- featurize

#[derive(Args)]
pub struct FeaturizeArgs {
    /// aggregates.jsonl from `ingest`.
    #[arg(long)]
    aggregates: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Minimum tweets a user needs to be featurized.
    #[arg(long)]
    min_tweets: Option<u64>,
    /// Diversity denominator: "all" tweets or "class" tweets.
    #[arg(long)]
    denominator: Option<String>,
}

pub fn featurize(args: FeaturizeArgs, ctx: &Context) -> Result<()> {
    let aggregates_path = require(
        args.aggregates,
        ctx.path("featurize", "aggregates"),
        "aggregates",
    )?;
    let out = require(args.out, ctx.path("featurize", "out"), "out")?;
    let mut cfg = FeatureConfig {
        min_tweets: resolve(args.min_tweets, ctx.u64("featurize", "min_tweets"), 10),
        ..Default::default()
    };
    match resolve(
        args.denominator,
        ctx.string("featurize", "denominator"),
        "all".into(),
    )
    .as_str()
    {
        "all" => cfg.denominator = Denominator::AllTweets,
        "class" => cfg.denominator = Denominator::ClassTweets,
        other => return Err(usage(format!("--denominator must be all or class, got {other}"))),
    }
    cfg.validate()?;
    ensure_out_dir(&out)?;

    let aggregates = ingest::read_aggregates(open_reader(&aggregates_path)?)?;
    let (vectors, skipped) = features::featurize_all(&aggregates, &cfg);
    let matrix_path = out.join("features.tsv");
    write_artifact(&matrix_path, |w| {
        features::write_matrix(w, &cfg.schema(), &vectors)?;
        Ok(())
    })?;
    println!(
        "featurized {} users ({} skipped for history shorter than {} tweets)",
        vectors.len(),
        skipped.len(),
        cfg.min_tweets
    );
    println!("wrote {}", matrix_path.display());
    Ok(())
}

// ------------------------------------------------- shared training setup

fn load_training_set(
    features_path: &PathBuf,
    labels_path: &PathBuf,
    subset: &FeatureSubset,
) -> Result<TrainingSet> {
    let (names, rows) = features::read_matrix(open_reader(features_path)?)?;
    let labels = read_labels(labels_path)?;
    let mut training_rows = Vec::new();
    for (user, values) in rows {
        if let Some(label) = labels.get(&user) {
            training_rows.push(TrainingRow {
                user_id: user,
                features: values,
                label: *label,
            });
        }
    }
    let ts = TrainingSet::new(names, training_rows)?;
    Ok(ts.project(subset))
}

fn parse_subset(cli: Option<String>, cfg: Option<String>) -> Result<FeatureSubset> {
    Ok(resolve(cli, cfg, "all".to_string()).parse()?)
}

fn smo_params(c: Option<f64>, gamma: Option<f64>) -> SmoParams {
    SmoParams {
        c: c.unwrap_or(1.0),
        gamma,
        ..Default::default()
    }
}

// ----------------------------------------------------------------- train

#[derive(Args)]
pub struct TrainArgs {
    /// features.tsv from `featurize`.
    #[arg(long)]
    features: Option<PathBuf>,
    /// Gold labels: user_id<TAB>seminar|normal.
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Feature subset: all, interaction, diversity, style, or unions like
    /// interaction+diversity.
    #[arg(long)]
    subset: Option<String>,
    /// Box constraint (default 1.0).
    #[arg(long)]
    c: Option<f64>,
    /// RBF width (default 1/dimension).
    #[arg(long)]
    gamma: Option<f64>,
    /// Select C and gamma by stratified 5-fold grid search first.
    #[arg(long)]
    grid: bool,
}

pub fn train(args: TrainArgs, ctx: &Context) -> Result<()> {
    let features_path = require(args.features, ctx.path("train", "features"), "features")?;
    let labels_path = require(args.labels, ctx.path("train", "labels"), "labels")?;
    let out = require(args.out, ctx.path("train", "out"), "out")?;
    let subset = parse_subset(args.subset, ctx.string("train", "subset"))?;
    ensure_out_dir(&out)?;

    let ts = load_training_set(&features_path, &labels_path, &subset)?;
    let mut params = smo_params(
        args.c.or(ctx.f64("train", "c")),
        args.gamma.or(ctx.f64("train", "gamma")),
    );
    if args.grid || ctx.bool("train", "grid").unwrap_or(false) {
        let choice = grid_search(&ts, &DEFAULT_GRID_C, &DEFAULT_GRID_GAMMA, 5)?;
        println!(
            "grid search chose C={} gamma={} (macro-F1 {:.1} on training folds)",
            choice.c, choice.gamma, choice.macro_f1
        );
        params.c = choice.c;
        params.gamma = Some(choice.gamma);
    }
    let result = train_smo(&ts, &params)?;
    if !result.converged {
        eprintln!("warning: solver hit its step budget before meeting the KKT conditions");
    }
    let model_path = out.join("model.svm");
    write_artifact(&model_path, |w| {
        result.model.save(w)?;
        Ok(())
    })?;
    println!(
        "trained on {} rows ({} features, subset {}); {} support vectors, bias {:.6}",
        ts.rows.len(),
        ts.dimension(),
        subset,
        result.model.support.len(),
        result.model.bias
    );
    println!("wrote {}", model_path.display());
    Ok(())
}

// ----------------------------------------------------------------- loocv

#[derive(Args)]
pub struct LoocvArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    #[arg(long)]
    labels: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evaluate one feature subset (default all).
    #[arg(long, conflicts_with = "ablation")]
    subset: Option<String>,
    /// Evaluate every subset: interaction, diversity, style,
    /// interaction+diversity, all.
    #[arg(long)]
    ablation: bool,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

pub fn loocv(args: LoocvArgs, ctx: &Context) -> Result<()> {
    let features_path = require(args.features, ctx.path("loocv", "features"), "features")?;
    let labels_path = require(args.labels, ctx.path("loocv", "labels"), "labels")?;
    let out = require(args.out, ctx.path("loocv", "out"), "out")?;
    let params = smo_params(
        args.c.or(ctx.f64("loocv", "c")),
        args.gamma.or(ctx.f64("loocv", "gamma")),
    );
    ensure_out_dir(&out)?;

    let subsets = if args.ablation || ctx.bool("loocv", "ablation").unwrap_or(false) {
        FeatureSubset::ablation_order()
    } else {
        vec![parse_subset(args.subset, ctx.string("loocv", "subset"))?]
    };

    let mut reports: Vec<(String, EvalReport)> = Vec::new();
    let mut held_out_lines = vec!["subset\tuser_id\tgold\tpredicted\tmargin".to_string()];
    for subset in &subsets {
        let ts = load_training_set(&features_path, &labels_path, subset)?;
        let outcome = run_loocv(&ts, &params)?;
        if outcome.non_converged_folds > 0 {
            eprintln!(
                "warning: {} folds hit the step budget for subset {subset}",
                outcome.non_converged_folds
            );
        }
        for p in &outcome.predictions {
            held_out_lines.push(format!(
                "{subset}\t{}\t{}\t{}\t{}",
                p.user_id, p.gold, p.predicted, p.margin
            ));
        }
        reports.push((subset.to_string(), outcome.report));
    }

    let table = render_table(&reports);
    print!("{table}");
    write_artifact(&out.join("eval.txt"), |w| {
        w.write_all(table.as_bytes())?;
        Ok(())
    })?;
    write_artifact(&out.join("eval.tsv"), |w| {
        write_report_tsv(w, &reports)?;
        Ok(())
    })?;
    write_artifact(&out.join("held_out.tsv"), |w| {
        for line in &held_out_lines {
            writeln!(w, "{line}")?;
        }
        Ok(())
    })?;
    println!(
        "wrote {}, {}, {}",
        out.join("eval.txt").display(),
        out.join("eval.tsv").display(),
        out.join("held_out.tsv").display()
    );
    Ok(())
}

// --------------------------------------------------------------- predict

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long)]
    features: Option<PathBuf>,
    /// model.svm from `train`.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional gold labels; when given, an evaluation report is printed.
    #[arg(long)]
    labels: Option<PathBuf>,
}

pub fn predict(args: PredictArgs, ctx: &Context) -> Result<()> {
    let features_path = require(args.features, ctx.path("predict", "features"), "features")?;
    let model_path = require(args.model, ctx.path("predict", "model"), "model")?;
    let out = require(args.out, ctx.path("predict", "out"), "out")?;
    ensure_out_dir(&out)?;

    let model = KernelSvmModel::load(open_reader(&model_path)?)?;
    let (names, rows) = features::read_matrix(open_reader(&features_path)?)?;
    let mut predictions: Vec<(String, Label, f64)> = Vec::with_capacity(rows.len());
    for (user, values) in rows {
        let projected = model.project_row(&names, &values)?;
        let (label, margin) = model.predict(&projected)?;
        predictions.push((user, label, margin));
    }
    let path = out.join("predictions.tsv");
    write_artifact(&path, |w| {
        writeln!(w, "user_id\tlabel\tmargin")?;
        for (user, label, margin) in &predictions {
            writeln!(w, "{user}\t{label}\t{margin}")?;
        }
        Ok(())
    })?;
    let seminar = predictions.iter().filter(|(_, l, _)| *l == Label::Seminar).count();
    println!(
        "classified {} users: {} seminar, {} normal",
        predictions.len(),
        seminar,
        predictions.len() - seminar
    );

    if let Some(labels_path) = args.labels.or(ctx.path("predict", "labels")) {
        let gold = read_labels(&labels_path)?;
        let pairs: Vec<(Label, Label)> = predictions
            .iter()
            .filter_map(|(user, label, _)| gold.get(user).map(|g| (*label, *g)))
            .collect();
        let report = evaluate(
            &pairs.iter().map(|(p, _)| *p).collect::<Vec<_>>(),
            &pairs.iter().map(|(_, g)| *g).collect::<Vec<_>>(),
        )?;
        print!("{}", render_table(&[("predictions".to_string(), report)]));
    }
    println!("wrote {}", path.display());
    Ok(())
}

// ------------------------------------------------------------- propagate

#[derive(Args)]
pub struct PropagateArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Seed labels: user_id<TAB>pro|anti.
    #[arg(long)]
    seeds: Option<PathBuf>,
    /// Topic terms file (one term or phrase per line).
    #[arg(long)]
    topic_terms: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    start_date: Option<String>,
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long)]
    min_evidence: Option<u64>,
    /// Minimum agreeing fraction of the evidence, in (0.5, 1.0].
    #[arg(long)]
    consistency: Option<f64>,
    /// Export a reproducible validation sample of this size.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn propagate(args: PropagateArgs, ctx: &Context) -> Result<()> {
    let corpus_path = require(args.corpus, ctx.path("propagate", "corpus"), "corpus")?;
    let seeds_path = require(args.seeds, ctx.path("propagate", "seeds"), "seeds")?;
    let topic_path = require(
        args.topic_terms,
        ctx.path("propagate", "topic_terms"),
        "topic-terms",
    )?;
    let out = require(args.out, ctx.path("propagate", "out"), "out")?;
    ensure_out_dir(&out)?;

    let setup = ingest_setup(
        args.start_date.or(ctx.string("propagate", "start_date")),
        None,
        None,
        None,
        None,
        None,
    )?;
    let corpus = Corpus::load_path(&corpus_path, &setup.config)?;
    let seeds = stance::read_seeds(open_reader(&seeds_path)?)?;
    let mut cfg = PropagationConfig::new(Lexicon::from_path(
        "topic",
        MatchMode::Phrase,
        &topic_path,
    )?);
    cfg.max_iterations = resolve(
        args.max_iterations,
        ctx.u64("propagate", "max_iterations"),
        3,
    ) as u32;
    cfg.min_evidence =
        resolve(args.min_evidence, ctx.u64("propagate", "min_evidence"), 5) as u32;
    cfg.consistency = resolve(args.consistency, ctx.f64("propagate", "consistency"), 1.0);

    let state = stance::propagate(&seeds, &corpus, &cfg)?;
    let stance_path = out.join("stance.tsv");
    write_artifact(&stance_path, |w| {
        stance::write_stance_file(&state, w)?;
        Ok(())
    })?;
    let per_round: BTreeMap<u32, usize> =
        state
            .iteration_added
            .values()
            .fold(BTreeMap::new(), |mut acc, round| {
                *acc.entry(*round).or_insert(0) += 1;
                acc
            });
    let growth: Vec<String> = per_round
        .iter()
        .map(|(round, n)| format!("round {round}: {n}"))
        .collect();
    println!(
        "labeled {} users ({}); {} tweets tagged",
        state.labels.len(),
        growth.join(", "),
        state.tagged_tweets.len()
    );

    if let Some(k) = args.sample.or(ctx.u64("propagate", "sample")) {
        let seed = resolve(args.seed, ctx.u64("propagate", "seed"), 0);
        let sample = stance::sample_for_validation(&state, k as usize, seed)?;
        let sample_path = out.join("validation_sample.tsv");
        write_artifact(&sample_path, |w| {
            for user in &sample {
                writeln!(w, "{user}\t{}", state.labels[user])?;
            }
            Ok(())
        })?;
        println!("wrote {}", sample_path.display());
    }
    println!("wrote {}", stance_path.display());
    Ok(())
}

// ------------------------------------------------------------- campaigns

fn default_window(corpus: &Corpus) -> Result<DayWindow> {
    let min_day = corpus.tweets.iter().map(|t| t.day_index).min().unwrap_or(0);
    Ok(DayWindow::new(min_day, corpus.max_day())?)
}

fn window_from_flags(
    corpus: &Corpus,
    start: Option<u64>,
    end: Option<u64>,
) -> Result<DayWindow> {
    match (start, end) {
        (Some(s), Some(e)) => Ok(DayWindow::new(s as u32, e as u32)?),
        (None, None) => default_window(corpus),
        _ => Err(usage(
            "--window-start and --window-end must be given together",
        )),
    }
}

#[derive(Args)]
pub struct CampaignsArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Group file restricting which users count (default: everyone).
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    start_date: Option<String>,
    /// Day-index window (inclusive); defaults to the observed range.
    #[arg(long)]
    window_start: Option<u64>,
    #[arg(long)]
    window_end: Option<u64>,
    /// Minimum total uses for a hashtag to qualify.
    #[arg(long)]
    min_volume: Option<u64>,
    /// Report the top K campaigns.
    #[arg(long)]
    top: Option<u64>,
    /// Also write one day-series file per reported campaign here.
    #[arg(long)]
    series_dir: Option<PathBuf>,
}

pub fn campaigns(args: CampaignsArgs, ctx: &Context) -> Result<()> {
    let corpus_path = require(args.corpus, ctx.path("campaigns", "corpus"), "corpus")?;
    let out = require(args.out, ctx.path("campaigns", "out"), "out")?;
    ensure_out_dir(&out)?;
    let setup = ingest_setup(
        args.start_date.or(ctx.string("campaigns", "start_date")),
        None,
        None,
        None,
        None,
        None,
    )?;
    let corpus = Corpus::load_path(&corpus_path, &setup.config)?;
    let group = match args.group.or(ctx.path("campaigns", "group")) {
        Some(p) => read_group(&p)?,
        None => corpus.user_ids().cloned().collect(),
    };
    let window = window_from_flags(
        &corpus,
        args.window_start.or(ctx.u64("campaigns", "window_start")),
        args.window_end.or(ctx.u64("campaigns", "window_end")),
    )?;
    let min_volume = resolve(args.min_volume, ctx.u64("campaigns", "min_volume"), 100);
    let top = resolve(args.top, ctx.u64("campaigns", "top"), 15) as usize;

    let ranked = campaigns::rank_campaigns(&corpus, &group, window, min_volume, top)?;
    let report_path = out.join("campaigns.tsv");
    write_artifact(&report_path, |w| {
        campaigns::write_campaign_report(w, &ranked)?;
        Ok(())
    })?;
    if let Some(series_dir) = args.series_dir.or(ctx.path("campaigns", "series_dir")) {
        ensure_out_dir(&series_dir)?;
        for campaign in &ranked {
            let path = series_dir.join(format!("{}.tsv", campaign.hashtag));
            write_artifact(&path, |w| {
                writeln!(w, "day\tcount")?;
                for (offset, count) in campaign.daily_counts.iter().enumerate() {
                    writeln!(w, "{}\t{count}", window.start as usize + offset)?;
                }
                Ok(())
            })?;
        }
        println!("wrote {} series files to {}", ranked.len(), series_dir.display());
    }
    println!(
        "ranked {} campaigns (volume >= {min_volume}, days {}..={})",
        ranked.len(),
        window.start,
        window.end
    );
    println!("wrote {}", report_path.display());
    Ok(())
}

// ----------------------------------------------------------- penetration

#[derive(Args)]
pub struct PenetrationArgs {
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// The seminar-classified user group.
    #[arg(long)]
    seminar_group: Option<PathBuf>,
    /// The reference (non-seminar) user group.
    #[arg(long)]
    reference_group: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    start_date: Option<String>,
    #[arg(long)]
    window_start: Option<u64>,
    #[arg(long)]
    window_end: Option<u64>,
    /// Top-list size compared across groups.
    #[arg(long)]
    top: Option<u64>,
    /// Campaign-score floor a hashtag must exceed to enter a list.
    #[arg(long)]
    score_floor: Option<f64>,
}

pub fn penetration(args: PenetrationArgs, ctx: &Context) -> Result<()> {
    let corpus_path = require(args.corpus, ctx.path("penetration", "corpus"), "corpus")?;
    let seminar_path = require(
        args.seminar_group,
        ctx.path("penetration", "seminar_group"),
        "seminar-group",
    )?;
    let reference_path = require(
        args.reference_group,
        ctx.path("penetration", "reference_group"),
        "reference-group",
    )?;
    let out = require(args.out, ctx.path("penetration", "out"), "out")?;
    ensure_out_dir(&out)?;

    let setup = ingest_setup(
        args.start_date.or(ctx.string("penetration", "start_date")),
        None,
        None,
        None,
        None,
        None,
    )?;
    let corpus = Corpus::load_path(&corpus_path, &setup.config)?;
    let seminar_group = read_group(&seminar_path)?;
    let reference_group = read_group(&reference_path)?;
    let window = window_from_flags(
        &corpus,
        args.window_start.or(ctx.u64("penetration", "window_start")),
        args.window_end.or(ctx.u64("penetration", "window_end")),
    )?;
    let top = resolve(args.top, ctx.u64("penetration", "top"), 100) as usize;
    let score_floor = resolve(args.score_floor, ctx.f64("penetration", "score_floor"), 0.02);

    let report = campaigns::penetration(
        &seminar_group,
        &reference_group,
        &corpus,
        window,
        top,
        score_floor,
    )?;
    let report_path = out.join("penetration.tsv");
    write_artifact(&report_path, |w| {
        writeln!(
            w,
            "appearance_pct\tavg_rank\tvolume_magnification\tshared\tseminar_list\treference_list"
        )?;
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}",
            report.appearance_pct,
            report.avg_rank.map_or("-".into(), |v| v.to_string()),
            report
                .volume_magnification
                .map_or("-".into(), |v| v.to_string()),
            report.shared.join(","),
            report.seminar_list_len,
            report.reference_list_len
        )?;
        Ok(())
    })?;
    println!(
        "penetration: {:.1}% of the seminar top-{} appear in the reference list (avg rank {}, volume magnification {})",
        report.appearance_pct * 100.0,
        report.seminar_list_len,
        report.avg_rank.map_or("-".into(), |v| format!("{v:.1}")),
        report
            .volume_magnification
            .map_or("-".into(), |v| format!("{v:.1}x")),
    );

    let shared = campaigns::shared_hashtags(&seminar_group, &reference_group, &corpus, window, top);
    let shared_path = out.join("shared_hashtags.tsv");
    write_artifact(&shared_path, |w| {
        writeln!(w, "hashtag\tvolume_a\tvolume_b\tshare_a\tshare_b")?;
        for s in &shared {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                s.hashtag, s.volume_a, s.volume_b, s.share_a, s.share_b
            )?;
        }
        Ok(())
    })?;
    println!(
        "{} hashtags shared between the two groups' top-{top} lists",
        shared.len()
    );
    println!("wrote {}, {}", report_path.display(), shared_path.display());
    Ok(())
}

// --------------------------------------------------------------- network

#[derive(Args)]
pub struct NetworkArgs {
    /// aggregates.jsonl from `ingest` (hashtag profiles come from here).
    #[arg(long)]
    aggregates: Option<PathBuf>,
    /// Group file restricting which users enter the graph.
    #[arg(long)]
    group: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Similarity floor for keeping an edge at all.
    #[arg(long)]
    min_similarity: Option<f64>,
    /// Similarity floor for writing an edge to the export files.
    #[arg(long)]
    export_min_similarity: Option<f64>,
    /// Export format: dot, graphml, or both.
    #[arg(long)]
    format: Option<String>,
    /// Band for the connected-component report: weak, medium, strong.
    #[arg(long)]
    band_floor: Option<String>,
    /// Compute a force-directed layout and embed positions.
    #[arg(long)]
    layout: bool,
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn network(args: NetworkArgs, ctx: &Context) -> Result<()> {
    let aggregates_path = require(
        args.aggregates,
        ctx.path("network", "aggregates"),
        "aggregates",
    )?;
    let out = require(args.out, ctx.path("network", "out"), "out")?;
    ensure_out_dir(&out)?;

    let aggregates = ingest::read_aggregates(open_reader(&aggregates_path)?)?;
    let group = args.group.or(ctx.path("network", "group"));
    let vectors: Vec<HashtagVector> = match group {
        Some(p) => {
            let members = read_group(&p)?;
            aggregates
                .values()
                .filter(|a| members.contains(&a.user_id))
                .map(HashtagVector::from_aggregate)
                .collect()
        }
        None => aggregates.values().map(HashtagVector::from_aggregate).collect(),
    };
    let min_similarity = resolve(
        args.min_similarity,
        ctx.f64("network", "min_similarity"),
        0.0,
    );
    let graph = build_graph(&vectors, min_similarity)?;

    let band_floor = match resolve(
        args.band_floor,
        ctx.string("network", "band_floor"),
        "strong".into(),
    )
    .as_str()
    {
        "weak" => Band::Weak,
        "medium" => Band::Medium,
        "strong" => Band::Strong,
        other => return Err(usage(format!("unknown band {other:?}"))),
    };
    let (assignment, sizes) = components(&graph, band_floor);
    write_artifact(&out.join("components.tsv"), |w| {
        write_component_report(&graph, &assignment, &sizes, band_floor, w)?;
        Ok(())
    })?;

    let positions = if args.layout || ctx.bool("network", "layout").unwrap_or(false) {
        let iterations = resolve(args.iterations, ctx.u64("network", "iterations"), 100);
        let seed = resolve(args.seed, ctx.u64("network", "seed"), 0);
        Some(layout_force_directed(&graph, iterations as usize, seed)?)
    } else {
        None
    };

    let export_options = ExportOptions {
        min_similarity: resolve(
            args.export_min_similarity,
            ctx.f64("network", "export_min_similarity"),
            0.3,
        ),
    };
    let format = resolve(args.format, ctx.string("network", "format"), "both".into());
    let mut written = vec![out.join("components.tsv").display().to_string()];
    if format == "dot" || format == "both" {
        let path = out.join("graph.dot");
        write_artifact(&path, |w| {
            export_graph(&graph, positions.as_deref(), ExportFormat::Dot, &export_options, w)?;
            Ok(())
        })?;
        written.push(path.display().to_string());
    }
    if format == "graphml" || format == "both" {
        let path = out.join("graph.graphml");
        write_artifact(&path, |w| {
            export_graph(
                &graph,
                positions.as_deref(),
                ExportFormat::GraphMl,
                &export_options,
                w,
            )?;
            Ok(())
        })?;
        written.push(path.display().to_string());
    }
    if !["dot", "graphml", "both"].contains(&format.as_str()) {
        return Err(usage(format!("unknown format {format:?}")));
    }

    let strong = graph.edges.iter().filter(|e| e.band == Band::Strong).count();
    println!(
        "graph: {} nodes, {} edges ({} strong); {} components at band >= {}",
        graph.node_count(),
        graph.edges.len(),
        strong,
        sizes.len(),
        band_floor.name()
    );
    println!("wrote {}", written.join(", "));
    Ok(())
}

// ----------------------------------------------------------------- synth

#[derive(Args)]
pub struct SynthArgs {
    #[arg(long)]
    out: Option<PathBuf>,
    /// Corpus blueprint: "separable" (clean classifier corpus) or "demo"
    /// (adds planted campaigns and a stance structure).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    seminar: Option<u64>,
    #[arg(long)]
    normal: Option<u64>,
    #[arg(long)]
    days: Option<u64>,
}

pub fn synth(args: SynthArgs, ctx: &Context) -> Result<()> {
    let out = require(args.out, ctx.path("synth", "out"), "out")?;
    ensure_out_dir(&out)?;
    let preset = resolve(args.preset, ctx.string("synth", "preset"), "separable".into());
    let seed = resolve(args.seed, ctx.u64("synth", "seed"), 42);
    let n_seminar = resolve(args.seminar, ctx.u64("synth", "seminar"), 71) as usize;
    let n_normal = resolve(args.normal, ctx.u64("synth", "normal"), 79) as usize;

    let mut cfg = SynthConfig::separable(n_seminar, n_normal, seed);
    if let Some(days) = args.days.or(ctx.u64("synth", "days")) {
        cfg.n_days = days as u32;
    }
    match preset.as_str() {
        "separable" => {}
        "demo" => {
            cfg.campaigns = vec![
                CampaignSpec {
                    hashtag: "holdingfirm".into(),
                    day: cfg.n_days / 4,
                    tweets: 400,
                    by_seminar: true,
                },
                CampaignSpec {
                    hashtag: "strongreject".into(),
                    day: cfg.n_days / 2,
                    tweets: 600,
                    by_seminar: true,
                },
                CampaignSpec {
                    hashtag: "cityfire".into(),
                    day: cfg.n_days / 2,
                    tweets: 300,
                    by_seminar: false,
                },
            ];
            cfg.stance = Some(StanceSpec {
                pro_seeds: 5,
                anti_seeds: 5,
                layers: vec![12, 8, 6],
                evidence_per_user: 5,
                topic_term: "leaderx".into(),
            });
        }
        other => return Err(usage(format!("unknown preset {other:?}"))),
    }

    let corpus_path = out.join("corpus.jsonl");
    let file = std::fs::File::create(&corpus_path)
        .with_context(|| format!("create {corpus_path:?}"))?;
    let mut writer = std::io::BufWriter::new(file);
    let gold = seminar_core::synth::generate_to(&cfg, &mut writer)?;
    writer.flush()?;

    let text_files = [
        ("labels.tsv", &gold.labels),
        ("cliques_gold.tsv", &gold.cliques),
        ("campaigns_gold.tsv", &gold.campaigns),
        ("stance_seeds.tsv", &gold.stance_seeds),
        ("stance_gold.tsv", &gold.stance_gold),
        ("sentiment.txt", &gold.sentiment_lexicon),
        ("vulgar.txt", &gold.vulgar_lexicon),
    ];
    let mut written = vec![corpus_path.display().to_string()];
    for (name, content) in text_files {
        if content.is_empty() {
            continue;
        }
        let path = out.join(name);
        write_artifact(&path, |w| {
            w.write_all(content.as_bytes())?;
            Ok(())
        })?;
        written.push(path.display().to_string());
    }
    if cfg.stance.is_some() {
        let path = out.join("topic_terms.txt");
        write_artifact(&path, |w| {
            writeln!(w, "{}", cfg.stance.as_ref().expect("checked").topic_term)?;
            Ok(())
        })?;
        written.push(path.display().to_string());
    }

    println!(
        "generated {} tweets for {} users (preset {preset}, seed {seed}, start date 2015-12-01)",
        gold.stats.tweets, gold.stats.users
    );
    println!("wrote {}", written.join(", "));
    Ok(())
}
