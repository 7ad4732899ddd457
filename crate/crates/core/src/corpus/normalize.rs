//! Arabic letter normalization and tweet tokenization.
//!
//! Normalization is deliberately minimal: strip diacritics and tatweel,
//! collapse the alef variants to bare alef, map ta-marbuta to ha and
//! alef-maqsura to ya, and case-fold Latin text. The same normalization is
//! applied to tweets, lexicon entries, stopwords, and topic terms so that
//! matching is consistent everywhere.

use serde::{Deserialize, Serialize};

/// One token of a normalized tweet. Hashtags and mentions keep their class
/// so word statistics never mix with tag or account statistics.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Token {
    Word(String),
    Hashtag(String),
    Mention(String),
}

impl Token {
    pub fn text(&self) -> &str {
        match self {
            Token::Word(s) | Token::Hashtag(s) | Token::Mention(s) => s,
        }
    }
}

// Arabic combining marks (fathatan..sukun), the superscript alef, and
// tatweel all disappear; the alef family collapses to bare alef.
const ALEF: char = '\u{0627}';
const TA_MARBUTA: char = '\u{0629}';
const HA: char = '\u{0647}';
const ALEF_MAQSURA: char = '\u{0649}';
const YA: char = '\u{064A}';

fn is_removed(c: char) -> bool {
    matches!(c, '\u{064B}'..='\u{065F}' | '\u{0670}' | '\u{0640}')
}

fn map_char(c: char) -> char {
    match c {
        '\u{0622}' | '\u{0623}' | '\u{0625}' => ALEF,
        TA_MARBUTA => HA,
        ALEF_MAQSURA => YA,
        _ => c,
    }
}

/// Normalize a string at the character level: remove diacritics/tatweel,
/// collapse alef variants, ta-marbuta → ha, alef-maqsura → ya, lowercase
/// everything else. Idempotent: the image of the mapping is fixed under it.
pub fn normalize_text(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if is_removed(c) {
            continue;
        }
        let c = map_char(c);
        if c.is_uppercase() {
            out.extend(c.to_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn looks_like_url(chunk: &str) -> bool {
    let lower = chunk.to_ascii_lowercase();
    lower.starts_with("http://") || lower.starts_with("https://") || lower.starts_with("www.")
}

/// Split normalized text into classed tokens.
///
/// Whitespace and punctuation separate tokens; `#` and `@` open hashtag and
/// mention tokens (Twitter alphanumeric-plus-underscore rules); URL chunks
/// are dropped entirely (they are carried by the record's `urls` field).
pub fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        if looks_like_url(chunk) {
            continue;
        }
        let chunk = normalize_text(chunk);
        let mut chars = chunk.chars().peekable();
        while let Some(c) = chars.next() {
            if c == '#' || c == '@' {
                let mut body = String::new();
                while let Some(&n) = chars.peek() {
                    if is_token_char(n) {
                        body.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                if !body.is_empty() {
                    tokens.push(if c == '#' {
                        Token::Hashtag(body)
                    } else {
                        Token::Mention(body)
                    });
                }
            } else if is_token_char(c) {
                let mut body = String::new();
                body.push(c);
                while let Some(&n) = chars.peek() {
                    if is_token_char(n) {
                        body.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Word(body));
            }
            // anything else is punctuation: token boundary
        }
    }
    tokens
}

/// Normalize then tokenize; empty input yields an empty list.
pub fn normalize_and_tokenize(text: &str) -> Vec<Token> {
    tokenize(text)
}
