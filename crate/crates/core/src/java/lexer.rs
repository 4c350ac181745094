use super::tree::Pos;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Keyword,
    /// String, char, number, boolean and `null` literals.
    Literal,
    Punct,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub start: Pos,
    pub end: Pos,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        matches!(self.kind, TokenKind::Punct | TokenKind::Keyword) && self.text == text
    }
}

const KEYWORDS: &[&str] = &[
    "abstract", "boolean", "break", "byte", "case", "catch", "char", "class", "continue",
    "default", "do", "double", "else", "enum", "extends", "final", "finally", "float", "for",
    "if", "implements", "import", "instanceof", "int", "interface", "long", "native", "new",
    "package", "private", "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try", "void",
    "volatile", "while",
];

const PUNCT3: &[&str] = &["...", "<<=", ">>="];
const PUNCT2: &[&str] = &[
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=",
    "^=", "->", "::",
];
const PUNCT1: &str = "(){}[];,.@=<>!~?:+-*/&|^%";

pub fn tokenize(path: &str, text: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut line = 1u32;
    let mut col = 1u32;

    let err = |line: u32, col: u32, msg: String| SyntaxError {
        path: path.to_string(),
        line,
        col,
        message: msg,
    };

    macro_rules! advance {
        ($n:expr) => {
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        };
    }

    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            advance!(1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance!(1);
            }
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'*') {
            let (l0, c0) = (line, col);
            advance!(2);
            loop {
                if i + 1 >= chars.len() {
                    return Err(err(l0, c0, "unterminated comment".into()));
                }
                if chars[i] == '*' && chars[i + 1] == '/' {
                    advance!(2);
                    break;
                }
                advance!(1);
            }
            continue;
        }
        let start = Pos { line, col };
        let begin = i;
        let kind;
        if c.is_alphabetic() || c == '_' || c == '$' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '$')
            {
                advance!(1);
            }
            let word: String = chars[begin..i].iter().collect();
            kind = if matches!(word.as_str(), "true" | "false" | "null") {
                TokenKind::Literal
            } else if KEYWORDS.contains(&word.as_str()) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
        } else if c.is_ascii_digit()
            || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '.' || chars[i] == '_')
            {
                // stop at a member access following an integer, e.g. `1.toString` is not J0
                advance!(1);
            }
            kind = TokenKind::Literal;
        } else if c == '"' || c == '\'' {
            advance!(1);
            loop {
                if i >= chars.len() || chars[i] == '\n' {
                    return Err(err(start.line, start.col, "unterminated literal".into()));
                }
                if chars[i] == '\\' {
                    advance!(2);
                    continue;
                }
                if chars[i] == c {
                    advance!(1);
                    break;
                }
                advance!(1);
            }
            kind = TokenKind::Literal;
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let n = if PUNCT3.iter().any(|p| rest.starts_with(p)) {
                3
            } else if PUNCT2.iter().any(|p| rest.starts_with(p)) {
                2
            } else if PUNCT1.contains(c) {
                1
            } else {
                return Err(err(line, col, format!("unexpected character {c:?}")));
            };
            advance!(n);
            kind = TokenKind::Punct;
        }
        toks.push(Token {
            kind,
            text: chars[begin..i].iter().collect(),
            start,
            end: Pos { line, col },
        });
    }
    toks.push(Token {
        kind: TokenKind::Eof,
        text: String::new(),
        start: Pos { line, col },
        end: Pos { line, col },
    });
    Ok(toks)
}

/// Token texts of a source file with whitespace and comments dropped; the
/// basis of formatting-insensitive comparison.
pub fn token_texts(path: &str, text: &str) -> Result<Vec<String>, SyntaxError> {
    Ok(tokenize(path, text)?
        .into_iter()
        .filter(|t| t.kind != TokenKind::Eof)
        .map(|t| t.text)
        .collect())
}
