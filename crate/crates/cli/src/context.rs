//! Shared plumbing: the JSON defaults file, flag resolution, and the small
//! file formats every subcommand reads (labels, groups, lexicons).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context as _, Result};
use seminar_core::corpus::{default_stopwords, FilterConfig, Lexicon, MatchMode};
use seminar_core::corpus::ingest::{IngestConfig, Lexicons};
use seminar_core::corpus::record::FieldMap;
use seminar_core::svm::Label;

/// A flag the user had to supply (directly or via the config file) but did
/// not. Mapped to exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

/// Defaults loaded from `--config`: one JSON object per subcommand.
pub struct Context {
    values: serde_json::Value,
}

impl Context {
    pub fn load(path: Option<&Path>) -> Result<Context> {
        let values = match path {
            Some(p) => serde_json::from_reader(
                BufReader::new(File::open(p).with_context(|| format!("open config {p:?}"))?),
            )
            .with_context(|| format!("parse config {p:?}"))?,
            None => serde_json::Value::Null,
        };
        Ok(Context { values })
    }

    fn get(&self, section: &str, key: &str) -> Option<&serde_json::Value> {
        self.values.get(section)?.get(key)
    }

    pub fn string(&self, section: &str, key: &str) -> Option<String> {
        self.get(section, key)?.as_str().map(|s| s.to_string())
    }

    pub fn path(&self, section: &str, key: &str) -> Option<PathBuf> {
        self.string(section, key).map(PathBuf::from)
    }

    pub fn f64(&self, section: &str, key: &str) -> Option<f64> {
        self.get(section, key)?.as_f64()
    }

    pub fn u64(&self, section: &str, key: &str) -> Option<u64> {
        self.get(section, key)?.as_u64()
    }

    pub fn bool(&self, section: &str, key: &str) -> Option<bool> {
        self.get(section, key)?.as_bool()
    }
}

/// CLI flag if present, else config value, else error.
pub fn require<T>(cli: Option<T>, cfg: Option<T>, what: &str) -> Result<T> {
    cli.or(cfg)
        .ok_or_else(|| usage(format!("missing required flag --{what} (or config entry)")))
}

pub fn resolve<T>(cli: Option<T>, cfg: Option<T>, default: T) -> T {
    cli.or(cfg).unwrap_or(default)
}

pub fn ensure_out_dir(out: &Path) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("create output directory {out:?}"))
}

pub fn open_reader(path: &Path) -> Result<BufReader<File>> {
    Ok(BufReader::new(
        File::open(path).with_context(|| format!("open {path:?}"))?,
    ))
}

pub fn write_artifact(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
    let file = File::create(path).with_context(|| format!("create {path:?}"))?;
    let mut writer = BufWriter::new(file);
    f(&mut writer)?;
    writer.flush()?;
    Ok(())
}

/// `YYYY-MM-DD` (UTC midnight) to unix seconds.
pub fn parse_start_date(s: &str) -> Result<i64> {
    let date = chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .with_context(|| format!("bad date {s:?}, expected YYYY-MM-DD"))?;
    Ok(date
        .and_hms_opt(0, 0, 0)
        .expect("midnight exists")
        .and_utc()
        .timestamp())
}

pub struct IngestSetup {
    pub config: IngestConfig,
    pub lexicons: Lexicons,
}

#[allow(clippy::too_many_arguments)]
pub fn ingest_setup(
    start_date: Option<String>,
    filter_config: Option<PathBuf>,
    field_map: Option<String>,
    sentiment: Option<PathBuf>,
    vulgar: Option<PathBuf>,
    stopwords: Option<PathBuf>,
) -> Result<IngestSetup> {
    let start_epoch = match start_date {
        Some(s) => parse_start_date(&s)?,
        None => 0,
    };
    let filter = match filter_config {
        Some(p) => FilterConfig::from_path(&p)?,
        None => FilterConfig::default(),
    };
    let field_map = match field_map.as_deref() {
        None => FieldMap::default(),
        Some("twitter") => FieldMap::twitter_api(),
        Some(path) => FieldMap::from_path(Path::new(path))?,
    };
    let load = |name: &'static str, path: Option<PathBuf>, mode| -> Result<Lexicon> {
        match path {
            Some(p) => Ok(Lexicon::from_path(name, mode, &p)?),
            // single unmatchable placeholder entry: counts stay zero
            None => Ok(Lexicon::new(name, mode, ["\u{0}unset"])?),
        }
    };
    Ok(IngestSetup {
        config: IngestConfig {
            start_epoch,
            filter,
            field_map,
        },
        lexicons: Lexicons {
            sentiment: load("sentiment", sentiment, MatchMode::Word)?,
            vulgar: load("vulgar", vulgar, MatchMode::Phrase)?,
            stopwords: match stopwords {
                Some(p) => Lexicon::from_path("stopwords", MatchMode::Word, &p)?,
                None => default_stopwords(),
            },
        },
    })
}

/// Label file: `user_id<TAB>seminar|normal`, `#` comments allowed.
pub fn read_labels(path: &Path) -> Result<BTreeMap<String, Label>> {
    let mut labels = BTreeMap::new();
    for (idx, line) in open_reader(path)?.lines().enumerate() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        match (parts.next(), parts.next()) {
            (Some(user), Some(label)) => {
                labels.insert(user.to_string(), label.parse::<Label>()?);
            }
            _ => anyhow::bail!("{path:?} line {}: expected user_id<TAB>label", idx + 1),
        }
    }
    Ok(labels)
}

/// Group file: one user id per line, `#` comments allowed.
pub fn read_group(path: &Path) -> Result<BTreeSet<String>> {
    let mut group = BTreeSet::new();
    for line in open_reader(path)?.lines() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            group.insert(line.to_string());
        }
    }
    Ok(group)
}
