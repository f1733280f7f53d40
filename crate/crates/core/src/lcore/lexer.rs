//! Tokenizer for ℒ source. Maximal munch; whitespace is space or newline.

use super::ast::in_sigma;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Args,
    If,
    Else,
    While,
    Halt,
    HeadOpen,
    TailOpen,
    Ident(String),
    Nat(String),
    Str(Vec<u8>),
    Semi,
    Assign,
    EqEq,
    Neq,
    LBrace,
    RBrace,
    RParen,
    Dot,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Args => "`args`".into(),
            Tok::If => "`if`".into(),
            Tok::Else => "`else`".into(),
            Tok::While => "`while`".into(),
            Tok::Halt => "`halt`".into(),
            Tok::HeadOpen => "`head(`".into(),
            Tok::TailOpen => "`tail(`".into(),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Nat(s) => format!("numeral `{s}`"),
            Tok::Str(_) => "string literal".into(),
            Tok::Semi => "`;`".into(),
            Tok::Assign => "`=`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Neq => "`!=`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexeme {
    pub tok: Tok,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LexErrorKind {
    /// Input ended in the middle of a token.
    Incomplete,
    UnexpectedChar(u8),
    BadEscape,
    NonCanonicalNumeral,
    MissingParen,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LexError {
    pub pos: usize,
    pub kind: LexErrorKind,
}

impl std::fmt::Display for LexError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            LexErrorKind::Incomplete => write!(f, "unexpected end of input inside a token"),
            LexErrorKind::UnexpectedChar(b) if b.is_ascii_graphic() || b == b' ' => {
                write!(f, "unexpected character `{}`", b as char)
            }
            LexErrorKind::UnexpectedChar(b) => write!(f, "unexpected byte 0x{b:02x}"),
            LexErrorKind::BadEscape => write!(f, "invalid escape in string literal"),
            LexErrorKind::NonCanonicalNumeral => write!(f, "numeral with leading zero"),
            LexErrorKind::MissingParen => write!(f, "`head`/`tail` must be followed by `(`"),
        }
    }
}

pub fn is_space(b: u8) -> bool {
    b == b' ' || b == b'\n'
}

pub fn is_word_byte(b: u8) -> bool {
    b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_'
}

/// Skips whitespace from `pos`.
pub fn skip_space(src: &[u8], mut pos: usize) -> usize {
    while pos < src.len() && is_space(src[pos]) {
        pos += 1;
    }
    pos
}

/// Reads the next token at or after `pos`. `Ok(None)` at end of input.
pub fn next_token(src: &[u8], pos: usize) -> Result<Option<Lexeme>, LexError> {
    let start = skip_space(src, pos);
    if start >= src.len() {
        return Ok(None);
    }
    let err = |pos, kind| Err(LexError { pos, kind });
    let b = src[start];
    let single = |tok| Ok(Some(Lexeme { tok, start, end: start + 1 }));
    match b {
        b'a'..=b'z' => {
            let mut end = start;
            while end < src.len() && is_word_byte(src[end]) {
                end += 1;
            }
            let word = std::str::from_utf8(&src[start..end]).expect("ascii");
            let tok = match word {
                "args" => Tok::Args,
                "if" => Tok::If,
                "else" => Tok::Else,
                "while" => Tok::While,
                "halt" => Tok::Halt,
                "head" | "tail" => {
                    if end >= src.len() {
                        return err(end, LexErrorKind::Incomplete);
                    }
                    if src[end] != b'(' {
                        return err(end, LexErrorKind::MissingParen);
                    }
                    let tok = if word == "head" { Tok::HeadOpen } else { Tok::TailOpen };
                    return Ok(Some(Lexeme { tok, start, end: end + 1 }));
                }
                _ => Tok::Ident(word.to_string()),
            };
            Ok(Some(Lexeme { tok, start, end }))
        }
        b'0'..=b'9' => {
            let mut end = start;
            while end < src.len() && src[end].is_ascii_digit() {
                end += 1;
            }
            if end - start > 1 && b == b'0' {
                return err(start, LexErrorKind::NonCanonicalNumeral);
            }
            let digits = std::str::from_utf8(&src[start..end]).expect("ascii").to_string();
            Ok(Some(Lexeme { tok: Tok::Nat(digits), start, end }))
        }
        b'"' => {
            let mut value = Vec::new();
            let mut i = start + 1;
            loop {
                if i >= src.len() {
                    return err(i, LexErrorKind::Incomplete);
                }
                match src[i] {
                    b'"' => break,
                    b'\\' => {
                        if i + 1 >= src.len() {
                            return err(i + 1, LexErrorKind::Incomplete);
                        }
                        match src[i + 1] {
                            c @ (b'"' | b'\\') => value.push(c),
                            _ => return err(i, LexErrorKind::BadEscape),
                        }
                        i += 2;
                    }
                    c if in_sigma(c) => {
                        value.push(c);
                        i += 1;
                    }
                    c => return err(i, LexErrorKind::UnexpectedChar(c)),
                }
            }
            Ok(Some(Lexeme { tok: Tok::Str(value), start, end: i + 1 }))
        }
        b';' => single(Tok::Semi),
        b'{' => single(Tok::LBrace),
        b'}' => single(Tok::RBrace),
        b')' => single(Tok::RParen),
        b'.' => single(Tok::Dot),
        b'=' => {
            if src.get(start + 1) == Some(&b'=') {
                Ok(Some(Lexeme { tok: Tok::EqEq, start, end: start + 2 }))
            } else {
                single(Tok::Assign)
            }
        }
        b'!' => match src.get(start + 1) {
            Some(b'=') => Ok(Some(Lexeme { tok: Tok::Neq, start, end: start + 2 })),
            Some(_) => err(start, LexErrorKind::UnexpectedChar(b'!')),
            None => err(start + 1, LexErrorKind::Incomplete),
        },
        other => err(start, LexErrorKind::UnexpectedChar(other)),
    }
}

/// Tokenizes a complete source text.
pub fn tokenize(src: &[u8]) -> Result<Vec<Lexeme>, LexError> {
    let mut out = Vec::new();
    let mut pos = 0;
    while let Some(lx) = next_token(src, pos)? {
        pos = lx.end;
        out.push(lx);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<Tok> {
        tokenize(s.as_bytes()).unwrap().into_iter().map(|l| l.tok).collect()
    }

    #[test]
    fn maximal_munch_merges_words() {
        assert_eq!(toks("args1"), vec![Tok::Ident("args1".into())]);
        assert_eq!(toks("ifx"), vec![Tok::Ident("ifx".into())]);
        assert_eq!(toks("if x"), vec![Tok::If, Tok::Ident("x".into())]);
        assert_eq!(toks("a==b"), vec![Tok::Ident("a".into()), Tok::EqEq, Tok::Ident("b".into())]);
    }

    #[test]
    fn head_requires_paren() {
        assert_eq!(toks("head(x)"), vec![Tok::HeadOpen, Tok::Ident("x".into()), Tok::RParen]);
        let e = tokenize(b"head (x)").unwrap_err();
        assert_eq!(e.kind, LexErrorKind::MissingParen);
        assert_eq!(toks("heads"), vec![Tok::Ident("heads".into())]);
    }

    #[test]
    fn string_escapes() {
        assert_eq!(toks(r#""a\"b\\""#), vec![Tok::Str(br#"a"b\"#.to_vec())]);
        assert_eq!(tokenize(br#""\n""#).unwrap_err().kind, LexErrorKind::BadEscape);
        assert_eq!(tokenize(br#""abc"#).unwrap_err().kind, LexErrorKind::Incomplete);
    }

    #[test]
    fn numerals_are_canonical() {
        assert_eq!(toks("10"), vec![Tok::Nat("10".into())]);
        assert_eq!(tokenize(b"01").unwrap_err().kind, LexErrorKind::NonCanonicalNumeral);
    }
}
