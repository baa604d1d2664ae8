use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    Dot,
    Comma,
    Not,
    Dia,
    Nec,
    At,
    And,
    Or,
    Arrow,
    Eq,
    /// `'name`
    Quoted(String),
    /// `?name`
    Question(String),
    Ident(String),
    False,
    True,
    Down,
    Exists,
    Forall,
    End,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Not => "`~`".into(),
            Tok::Dia => "`<>`".into(),
            Tok::Nec => "`[]`".into(),
            Tok::At => "`@`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Quoted(s) => format!("`'{s}`"),
            Tok::Question(x) => format!("`?{x}`"),
            Tok::Ident(x) => format!("`{x}`"),
            Tok::False => "`false`".into(),
            Tok::True => "`true`".into(),
            Tok::Down => "`down`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub offset: usize,
}

fn ident_end(bytes: &[u8], start: usize) -> usize {
    let mut i = start;
    while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
        i += 1;
    }
    i
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let two = bytes.get(i..i + 2);
        let tok = match b {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => Tok::Dot,
            b',' => Tok::Comma,
            b'~' => Tok::Not,
            b'@' => Tok::At,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'=' => Tok::Eq,
            b'<' if two == Some(b"<>") => Tok::Dia,
            b'[' if two == Some(b"[]") => Tok::Nec,
            b'-' if two == Some(b"->") => Tok::Arrow,
            b'\'' | b'?' => {
                let first = bytes.get(i + 1).copied();
                if !first.is_some_and(|c| c.is_ascii_alphabetic() || c == b'_') {
                    let found = text[i + 1..].chars().next().unwrap_or(' ');
                    return Err(ParseError::Lexical {
                        offset: i + 1,
                        found,
                    });
                }
                let end = ident_end(bytes, i + 1);
                let name = text[i + 1..end].to_string();
                i = end;
                out.push(Token {
                    tok: if b == b'\'' { Tok::Quoted(name) } else { Tok::Question(name) },
                    offset: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let end = ident_end(bytes, i);
                let word = &text[i..end];
                i = end;
                let tok = match word {
                    "false" => Tok::False,
                    "true" => Tok::True,
                    "down" => Tok::Down,
                    "exists" => Tok::Exists,
                    "forall" => Tok::Forall,
                    _ => Tok::Ident(word.to_string()),
                };
                out.push(Token { tok, offset: start });
                continue;
            }
            _ => {
                let found = text[i..].chars().next().unwrap_or(' ');
                return Err(ParseError::Lexical { offset: i, found });
            }
        };
        i += if matches!(tok, Tok::Dia | Tok::Nec | Tok::Arrow) { 2 } else { 1 };
        out.push(Token { tok, offset: start });
    }
    out.push(Token {
        tok: Tok::End,
        offset: text.len(),
    });
    Ok(out)
}
