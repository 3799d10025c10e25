use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    Colon,
    Slash,
    Comma,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Not => "`~`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Comma => "`,`".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    /// 1-based character column.
    pub col: usize,
}

/// Tokenizes `text`, which starts at character column `col0` of `line`.
pub(crate) fn lex(text: &str, line: usize, col0: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        let single = |tok| Token { tok, col };
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => out.push(single(Tok::Not)),
            '&' => out.push(single(Tok::And)),
            '|' => out.push(single(Tok::Or)),
            '(' => out.push(single(Tok::LParen)),
            ')' => out.push(single(Tok::RParen)),
            ':' => out.push(single(Tok::Colon)),
            '/' => out.push(single(Tok::Slash)),
            ',' => out.push(single(Tok::Comma)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(single(Tok::Implies));
                i += 2;
                continue;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                out.push(single(Tok::Iff));
                i += 3;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
                continue;
            }
            c => {
                return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
            }
        }
        i += 1;
    }
    Ok(out)
}
