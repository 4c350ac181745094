//! Front end for the supported Java subset: lexing, parsing, printing.

pub mod lexer;
mod parser;
pub mod printer;
pub mod tree;

use serde::Serialize;
use thiserror::Error;

pub use lexer::token_texts;
pub use printer::{compact, header_text, print_node, print_unit};
pub use tree::{NodeId, NodeKind, Pos, Span, SyntaxNode};

#[derive(Debug, Clone, Error, PartialEq, Eq, Serialize)]
#[error("{path}:{line}:{col}: {message}")]
pub struct SyntaxError {
    pub path: String,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("malformed tree at {id} ({kind:?}): {message}")]
pub struct MalformedTree {
    pub id: NodeId,
    pub kind: NodeKind,
    pub message: String,
}

/// A parsed source file. `path` is relative to the version root and uses `/`.
#[derive(Debug, Clone)]
pub struct SourceFile {
    pub path: String,
    pub text: String,
    pub tree: SyntaxNode,
}

pub fn parse_unit(path: &str, text: &str) -> Result<SourceFile, SyntaxError> {
    let tree = parser::parse_compilation_unit(path, text)?;
    Ok(SourceFile {
        path: path.to_string(),
        text: text.to_string(),
        tree,
    })
}

/// Whether two sources have identical token sequences. Unparsable input is
/// never equal.
pub fn token_equal(a: &str, b: &str) -> bool {
    match (token_texts("a", a), token_texts("b", b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}
