use super::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(u64),
    Ident(String),
    Punct(char),
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Punct(c) => format!("'{c}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

const PUNCT: &str = ";,{}[]()+-*/^=";

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let (l, cl) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c == '#' {
            while chars.peek().is_some_and(|&c| c != '\n') {
                bump(&mut chars);
            }
        } else if c.is_whitespace() {
            bump(&mut chars);
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(bump(&mut chars).expect("peeked"));
            }
            let n = s.parse().map_err(|_| ParseError::new(l, cl, format!("integer {s} is too large")))?;
            out.push(Token { tok: Tok::Int(n), line: l, col: cl });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                s.push(bump(&mut chars).expect("peeked"));
            }
            out.push(Token { tok: Tok::Ident(s), line: l, col: cl });
        } else if PUNCT.contains(c) {
            bump(&mut chars);
            out.push(Token { tok: Tok::Punct(c), line: l, col: cl });
        } else {
            return Err(ParseError::new(l, cl, format!("unexpected character '{c}'")));
        }
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}
