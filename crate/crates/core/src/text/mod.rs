//! Text processing shared by the generation metrics.

mod ngram;
mod stem;
mod tokenize;

pub use ngram::{ngram_total, NGramProfile};
pub use stem::stem;
pub use tokenize::{Tokenizer, TokenizerMode};
