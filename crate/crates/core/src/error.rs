use thiserror::Error;

/// Everything that can go wrong while building, analysing or searching a word.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid word spec ({rule}): {detail}")]
    InvalidSpec { rule: &'static str, detail: String },

    #[error("prefix of length {requested} exceeds the resource bound of {limit} letters")]
    PrefixLimit { requested: usize, limit: usize },

    #[error("operation needs a two-letter alphabet, word uses {alphabet} letters")]
    NotBinary { alphabet: usize },

    #[error("neither aa nor bb occurs in the first {bound} letters")]
    TypeUndetermined { bound: usize },

    #[error("both aa and bb occur in the first {bound} letters: the word is not balanced")]
    Unbalanced { bound: usize },

    #[error("{factor:?} is not a factor of {spec}")]
    NotAFactor { factor: String, spec: String },

    #[error("factor table of length {length} for {spec} could not be certified: {reason}")]
    Uncertified {
        spec: String,
        length: usize,
        reason: String,
    },

    #[error("{spec} is not Sturmian: {reason}")]
    NotSturmian { spec: String, reason: String },

    #[error("richness of {factor:?} is undefined: rich letters = [{rich}]")]
    RichnessUndefined { factor: String, rich: String },

    #[error("word is not decodable under {morphism} at position {position}")]
    NotDecodable { morphism: String, position: usize },

    #[error("precondition violated: {0}")]
    Contract(String),

    #[error("factorization fits neither case (blocks {blocks:?})")]
    NeitherCase { blocks: Vec<usize> },

    #[error("descent assertion failed: {0}")]
    Descent(Box<DescentCounterexample>),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

/// Structured record of a failed descent assertion.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DescentCounterexample {
    pub assertion: &'static str,
    pub spec: String,
    pub blocks: Vec<usize>,
    pub block_index: Option<usize>,
    pub detail: String,
}

impl std::fmt::Display for DescentCounterexample {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} on {} blocks {:?}",
            self.assertion, self.spec, self.blocks
        )?;
        if let Some(i) = self.block_index {
            write!(f, " (block {i})")?;
        }
        write!(f, ": {}", self.detail)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
