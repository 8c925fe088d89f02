//! Hand-rolled FlatZinc tokenizer with line/column tracking.

use crate::rational::Rat;

use super::error::FznError;

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(i64),
    Float(Rat),
    Str(String),
    Colon,
    DoubleColon,
    Semi,
    Comma,
    Eq,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    DotDot,
    Minus,
    Eof,
}

#[derive(Debug, Clone)]
pub struct Spanned {
    pub tok: Tok,
    pub line: u32,
    pub col: u32,
}

pub struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> FznError {
        FznError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) {
        loop {
            match self.peek() {
                Some(b) if b.is_ascii_whitespace() => {
                    self.bump();
                }
                Some(b'%') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn number(&mut self, neg: bool) -> Result<Tok, FznError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        let mut is_float = false;
        // A '.' starts a fraction part only when followed by a digit,
        // otherwise it is the start of a `..` range.
        if self.peek() == Some(b'.') && self.peek2().is_some_and(|b| b.is_ascii_digit()) {
            is_float = true;
            self.bump();
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let next = self.peek2();
            let after_sign = self.src.get(self.pos + 2).copied();
            let ok = match next {
                Some(b'+') | Some(b'-') => after_sign.is_some_and(|b| b.is_ascii_digit()),
                Some(b) => b.is_ascii_digit(),
                None => false,
            };
            if ok {
                is_float = true;
                self.bump();
                if matches!(self.peek(), Some(b'+' | b'-')) {
                    self.bump();
                }
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.bump();
                }
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        if is_float {
            let r = Rat::from_decimal_str(text).map_err(|e| self.err(e.to_string()))?;
            Ok(Tok::Float(if neg { -r } else { r }))
        } else {
            let v: i64 = text
                .parse()
                .map_err(|_| self.err(format!("integer literal `{text}` out of range")))?;
            Ok(Tok::Int(if neg { -v } else { v }))
        }
    }

    pub fn next_token(&mut self) -> Result<Spanned, FznError> {
        self.skip_trivia();
        let line = self.line;
        let col = self.col;
        let spanned = |tok| Spanned { tok, line, col };
        let Some(b) = self.peek() else {
            return Ok(spanned(Tok::Eof));
        };
        let tok = match b {
            b'0'..=b'9' => self.number(false)?,
            b'-' => {
                self.bump();
                if self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.number(true)?
                } else {
                    Tok::Minus
                }
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.bump();
                }
                Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            b'"' => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|b| b != b'"' && b != b'\n') {
                    self.bump();
                }
                if self.peek() != Some(b'"') {
                    return Err(self.err("unterminated string literal"));
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                self.bump();
                Tok::Str(s)
            }
            b':' => {
                self.bump();
                if self.peek() == Some(b':') {
                    self.bump();
                    Tok::DoubleColon
                } else {
                    Tok::Colon
                }
            }
            b'.' => {
                self.bump();
                if self.peek() == Some(b'.') {
                    self.bump();
                    Tok::DotDot
                } else {
                    return Err(self.err("unexpected `.`"));
                }
            }
            b';' => {
                self.bump();
                Tok::Semi
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b'=' => {
                self.bump();
                Tok::Eq
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'[' => {
                self.bump();
                Tok::LBracket
            }
            b']' => {
                self.bump();
                Tok::RBracket
            }
            b'{' => {
                self.bump();
                Tok::LBrace
            }
            b'}' => {
                self.bump();
                Tok::RBrace
            }
            other => return Err(self.err(format!("unexpected character `{}`", other as char))),
        };
        Ok(spanned(tok))
    }

    pub fn tokenize(src: &'a str) -> Result<Vec<Spanned>, FznError> {
        let mut lx = Lexer::new(src);
        let mut out = Vec::new();
        loop {
            let t = lx.next_token()?;
            let done = t.tok == Tok::Eof;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_tokens() {
        let toks = Lexer::tokenize("var 1..3: x; % comment\nsolve satisfy;").unwrap();
        let kinds: Vec<_> = toks.iter().map(|t| &t.tok).collect();
        assert!(matches!(kinds[0], Tok::Ident(s) if s == "var"));
        assert!(matches!(kinds[1], Tok::Int(1)));
        assert!(matches!(kinds[2], Tok::DotDot));
        assert!(matches!(kinds[3], Tok::Int(3)));
    }

    #[test]
    fn float_vs_range() {
        let toks = Lexer::tokenize("0.5..2.5 1..3 1.5e2").unwrap();
        assert!(matches!(&toks[0].tok, Tok::Float(r) if *r == Rat::from_i64_fraction(1, 2)));
        assert!(matches!(&toks[1].tok, Tok::DotDot));
        assert!(matches!(&toks[3].tok, Tok::Int(1)));
        assert!(matches!(&toks[4].tok, Tok::DotDot));
        assert!(matches!(&toks[6].tok, Tok::Float(r) if *r == Rat::from_int(150)));
    }

    #[test]
    fn negative_literals() {
        let toks = Lexer::tokenize("-5 -0.25").unwrap();
        assert!(matches!(&toks[0].tok, Tok::Int(-5)));
        assert!(matches!(&toks[1].tok, Tok::Float(r) if *r == Rat::from_i64_fraction(-1, 4)));
    }

    #[test]
    fn error_position() {
        let err = Lexer::tokenize("var\n  #").unwrap_err();
        match err {
            FznError::Syntax { line, col, .. } => {
                assert_eq!((line, col), (2, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
