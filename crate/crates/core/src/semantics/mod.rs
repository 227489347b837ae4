//! Lexicon-driven semantic construction: utterances become λ-DRSs plus a
//! speech act, with prepositional attachments checked by instance checking.

mod lexicon;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dl::DlError;

pub use lexicon::{load_lexicon, LexEntry, Lexicon};
pub use parser::{
    classify_speech_act, is_bare_name, normalize_token, parse_utterance, ActContext, ParsedUtterance,
    SemanticParser, UtteranceFeatures,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpeechAct {
    Inform,
    Query,
    Suggest,
    Accept,
    Reject,
}

impl SpeechAct {
    pub fn as_str(self) -> &'static str {
        match self {
            SpeechAct::Inform => "inform",
            SpeechAct::Query => "query",
            SpeechAct::Suggest => "suggest",
            SpeechAct::Accept => "accept",
            SpeechAct::Reject => "reject",
        }
    }
}

impl fmt::Display for SpeechAct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("UnknownLexeme: {0}")]
    UnknownLexeme(String),
    #[error("AttachmentRejected: {object} cannot fill {role} (needs {restriction})")]
    AttachmentRejected {
        role: String,
        object: String,
        restriction: String,
    },
    #[error("EmptyUtterance")]
    EmptyUtterance,
    #[error("DanglingPreposition: `{0}` has no object")]
    DanglingPreposition(String),
    #[error(transparent)]
    Dl(#[from] DlError),
}
