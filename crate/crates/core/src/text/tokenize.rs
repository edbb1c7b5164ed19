use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TokenizerMode {
    /// Split on Unicode whitespace.
    #[default]
    Whitespace,
    /// Whitespace split, plus every punctuation or symbol character becomes
    /// its own token.
    Intl,
    /// One token per non-whitespace character.
    Char,
}

impl FromStr for TokenizerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "whitespace" | "ws" => Ok(TokenizerMode::Whitespace),
            "intl" => Ok(TokenizerMode::Intl),
            "char" => Ok(TokenizerMode::Char),
            _ => Err(Error::Param(format!("unknown tokenizer `{s}` (expected whitespace, intl or char)"))),
        }
    }
}

impl fmt::Display for TokenizerMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TokenizerMode::Whitespace => "whitespace",
            TokenizerMode::Intl => "intl",
            TokenizerMode::Char => "char",
        })
    }
}

static INTL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"[\p{P}\p{S}]|[^\s\p{P}\p{S}]+").expect("valid pattern"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Tokenizer {
    pub mode: TokenizerMode,
    /// Apply NFC before splitting.
    pub normalize: bool,
    pub lowercase: bool,
}

impl Default for Tokenizer {
    fn default() -> Self {
        Self { mode: TokenizerMode::Whitespace, normalize: true, lowercase: false }
    }
}

impl Tokenizer {
    pub fn new(mode: TokenizerMode) -> Self {
        Self { mode, ..Self::default() }
    }

    pub fn lowercased(mut self) -> Self {
        self.lowercase = true;
        self
    }

    pub fn tokenize(&self, text: &str) -> Vec<String> {
        let text = self.prepare(text);
        match self.mode {
            TokenizerMode::Whitespace => text.split_whitespace().map(str::to_owned).collect(),
            TokenizerMode::Intl => INTL.find_iter(&text).map(|m| m.as_str().to_owned()).collect(),
            TokenizerMode::Char => text.chars().filter(|c| !c.is_whitespace()).map(String::from).collect(),
        }
    }

    /// NFC and case folding per configuration.
    pub fn prepare<'a>(&self, text: &'a str) -> Cow<'a, str> {
        let mut text = Cow::Borrowed(text);
        if self.normalize && is_nfc_quick(text.chars()) != IsNormalized::Yes {
            text = Cow::Owned(text.nfc().collect());
        }
        if self.lowercase && text.chars().any(char::is_uppercase) {
            text = Cow::Owned(text.to_lowercase());
        }
        text
    }
}
