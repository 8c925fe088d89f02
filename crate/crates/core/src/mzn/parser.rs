//! Parser for the emitted MiniZinc subset (declarations, constraints,
//! solve items, `include`). Used by the built-in flattener and the
//! differential tests that re-ingest emitted models.

use num_bigint::BigInt;
use thiserror::Error;

use crate::rational::Rat;

use super::ast::*;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{line}:{col}: {msg}")]
pub struct MznParseError {
    pub line: u32,
    pub col: u32,
    pub msg: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Float(Rat),
    Str(String),
    Sym(&'static str),
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> MznParseError {
        MznParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<u8> {
        self.src.get(self.pos + k).copied()
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

    fn bump_n(&mut self, n: usize) {
        for _ in 0..n {
            self.bump();
        }
    }

    fn skip_trivia(&mut self) -> Result<(), MznParseError> {
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
                Some(b'/') if self.peek_at(1) == Some(b'*') => {
                    self.bump_n(2);
                    loop {
                        match self.peek() {
                            Some(b'*') if self.peek_at(1) == Some(b'/') => {
                                self.bump_n(2);
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                            None => return Err(self.err("unterminated block comment")),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn number(&mut self) -> Result<Tok, MznParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.bump();
        }
        let mut is_float = false;
        if self.peek() == Some(b'.') && self.peek_at(1).is_some_and(|b| b.is_ascii_digit()) {
            is_float = true;
            self.bump();
            while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                self.bump();
            }
        }
        if matches!(self.peek(), Some(b'e' | b'E')) {
            let next = self.peek_at(1);
            let after = self.peek_at(2);
            let ok = match next {
                Some(b'+') | Some(b'-') => after.is_some_and(|b| b.is_ascii_digit()),
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
            Ok(Tok::Float(
                Rat::from_decimal_str(text).map_err(|e| self.err(e.to_string()))?,
            ))
        } else {
            Ok(Tok::Int(text.parse().unwrap()))
        }
    }

    fn next_token(&mut self) -> Result<(Tok, u32, u32), MznParseError> {
        self.skip_trivia()?;
        let (line, col) = (self.line, self.col);
        let Some(b) = self.peek() else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = match b {
            b'0'..=b'9' => self.number()?,
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
                while self.peek().is_some_and(|b| b != b'"') {
                    self.bump();
                }
                if self.peek() != Some(b'"') {
                    return Err(self.err("unterminated string"));
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                self.bump();
                Tok::Str(s)
            }
            _ => {
                let two = |lx: &Lexer| -> Option<&'static str> {
                    let a = lx.peek()?;
                    let b = lx.peek_at(1)?;
                    match (a, b) {
                        (b'<', b'-') if lx.peek_at(2) == Some(b'>') => Some("<->"),
                        (b'-', b'>') => Some("->"),
                        (b'\\', b'/') => Some("\\/"),
                        (b'/', b'\\') => Some("/\\"),
                        (b'=', b'=') => Some("=="),
                        (b'!', b'=') => Some("!="),
                        (b'<', b'=') => Some("<="),
                        (b'>', b'=') => Some(">="),
                        (b'.', b'.') => Some(".."),
                        (b':', b':') => Some("::"),
                        _ => None,
                    }
                };
                if let Some(s) = two(self) {
                    self.bump_n(s.len());
                    Tok::Sym(s)
                } else {
                    let s = match b {
                        b'=' => "=",
                        b'<' => "<",
                        b'>' => ">",
                        b'+' => "+",
                        b'-' => "-",
                        b'*' => "*",
                        b'/' => "/",
                        b':' => ":",
                        b';' => ";",
                        b',' => ",",
                        b'(' => "(",
                        b')' => ")",
                        b'[' => "[",
                        b']' => "]",
                        other => {
                            return Err(self.err(format!("unexpected `{}`", other as char)))
                        }
                    };
                    self.bump();
                    Tok::Sym(s)
                }
            }
        };
        Ok((tok, line, col))
    }
}

pub struct MznParser {
    toks: Vec<(Tok, u32, u32)>,
    pos: usize,
}

pub fn parse_mzn(text: &str) -> Result<MznModel, MznParseError> {
    let mut lx = Lexer::new(text);
    let mut toks = Vec::new();
    loop {
        let t = lx.next_token()?;
        let done = t.0 == Tok::Eof;
        toks.push(t);
        if done {
            break;
        }
    }
    let mut p = MznParser { toks, pos: 0 };
    let mut model = MznModel::default();
    while p.peek() != &Tok::Eof {
        model.items.push(p.item()?);
    }
    Ok(model)
}

impl MznParser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> MznParseError {
        let (_, line, col) = self.toks[self.pos.min(self.toks.len() - 1)];
        MznParseError {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect_sym(&mut self, s: &'static str) -> Result<(), MznParseError> {
        if *self.peek() == Tok::Sym(s) {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn item(&mut self) -> Result<MznItem, MznParseError> {
        if self.eat_kw("include") {
            let Tok::Str(path) = self.bump() else {
                return Err(self.err("expected a string after `include`"));
            };
            self.expect_sym(";")?;
            return Ok(MznItem::Include(path));
        }
        if self.eat_kw("var") {
            let (ty, domain) = self.var_type()?;
            self.expect_sym(":")?;
            let Tok::Ident(name) = self.bump() else {
                return Err(self.err("expected a variable name"));
            };
            self.expect_sym(";")?;
            return Ok(MznItem::VarDecl(MznVarDecl { name, ty, domain }));
        }
        if self.eat_kw("constraint") {
            let e = self.expr(0)?;
            self.expect_sym(";")?;
            return Ok(MznItem::Constraint(e));
        }
        if self.eat_kw("solve") {
            let s = if self.eat_kw("satisfy") {
                MznSolve::Satisfy
            } else if self.eat_kw("minimize") {
                MznSolve::Minimize(self.expr(0)?)
            } else if self.eat_kw("maximize") {
                MznSolve::Maximize(self.expr(0)?)
            } else if self.eat_kw("search") {
                if !self.eat_kw("lex_minimize") {
                    return Err(self.err("expected `lex_minimize` after `search`"));
                }
                self.expect_sym("(")?;
                self.expect_sym("[")?;
                let mut objs = Vec::new();
                if *self.peek() != Tok::Sym("]") {
                    loop {
                        objs.push(self.expr(0)?);
                        if *self.peek() == Tok::Sym(",") {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                self.expect_sym(")")?;
                MznSolve::LexMinimize(objs)
            } else {
                return Err(self.err("expected `satisfy`, `minimize`, `maximize` or `search`"));
            };
            self.expect_sym(";")?;
            return Ok(MznItem::Solve(s));
        }
        Err(self.err("expected an item"))
    }

    fn signed_int(&mut self) -> Result<BigInt, MznParseError> {
        let neg = if *self.peek() == Tok::Sym("-") {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(v) => Ok(if neg { -v } else { v }),
            _ => Err(self.err("expected an integer")),
        }
    }

    fn var_type(&mut self) -> Result<(MznType, Option<MznDomain>), MznParseError> {
        if self.eat_kw("bool") {
            return Ok((MznType::Bool, None));
        }
        if self.eat_kw("int") {
            return Ok((MznType::Int, None));
        }
        if self.eat_kw("float") {
            return Ok((MznType::Float, None));
        }
        // numeric range, possibly signed
        let save = self.pos;
        let neg = if *self.peek() == Tok::Sym("-") {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            Tok::Int(lo) => {
                let lo = if neg { -lo } else { lo };
                self.expect_sym("..")?;
                let hi = self.signed_int()?;
                Ok((MznType::Int, Some(MznDomain::IntRange(lo, hi))))
            }
            Tok::Float(lo) => {
                let lo = if neg { -lo } else { lo };
                self.expect_sym("..")?;
                let hneg = if *self.peek() == Tok::Sym("-") {
                    self.bump();
                    true
                } else {
                    false
                };
                match self.bump() {
                    Tok::Float(hi) => Ok((
                        MznType::Float,
                        Some(MznDomain::FloatRange(lo, if hneg { -hi } else { hi })),
                    )),
                    _ => Err(self.err("expected a float upper bound")),
                }
            }
            _ => {
                self.pos = save;
                Err(self.err("expected a type or domain"))
            }
        }
    }

    /// Precedence climbing; `min_level` is the loosest level allowed.
    /// Levels, loosest to tightest:
    /// 0 `<->`, 1 `->`, 2 `\/`/`xor`, 3 `/\`, 4 comparisons,
    /// 5 `+`/`-`, 6 `*`/`/`/`div`/`mod`, then unary and atoms.
    fn expr(&mut self, min_level: u8) -> Result<MznExpr, MznParseError> {
        let mut lhs = self.unary()?;
        loop {
            let (op, level, right_assoc) = match self.peek() {
                Tok::Sym("<->") => (BinOp::Iff, 0, false),
                Tok::Sym("->") => (BinOp::Imp, 1, true),
                Tok::Sym("\\/") => (BinOp::Or, 2, false),
                Tok::Ident(s) if s == "xor" => (BinOp::Xor, 2, false),
                Tok::Sym("/\\") => (BinOp::And, 3, false),
                Tok::Sym("=") | Tok::Sym("==") => (BinOp::Eq, 4, false),
                Tok::Sym("!=") => (BinOp::Ne, 4, false),
                Tok::Sym("<") => (BinOp::Lt, 4, false),
                Tok::Sym("<=") => (BinOp::Le, 4, false),
                Tok::Sym(">") => (BinOp::Gt, 4, false),
                Tok::Sym(">=") => (BinOp::Ge, 4, false),
                Tok::Sym("+") => (BinOp::Add, 5, false),
                Tok::Sym("-") => (BinOp::Sub, 5, false),
                Tok::Sym("*") => (BinOp::Mul, 6, false),
                Tok::Sym("/") => (BinOp::FDiv, 6, false),
                Tok::Ident(s) if s == "div" => (BinOp::IDiv, 6, false),
                Tok::Ident(s) if s == "mod" => (BinOp::Mod, 6, false),
                _ => break,
            };
            if level < min_level {
                break;
            }
            self.bump();
            let next_level = if right_assoc { level } else { level + 1 };
            let rhs = self.expr(next_level)?;
            lhs = MznExpr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<MznExpr, MznParseError> {
        if self.eat_kw("not") {
            return Ok(MznExpr::Not(Box::new(self.unary()?)));
        }
        if *self.peek() == Tok::Sym("-") {
            self.bump();
            return Ok(MznExpr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<MznExpr, MznParseError> {
        match self.bump() {
            Tok::Int(v) => Ok(MznExpr::IntLit(v)),
            Tok::Float(r) => Ok(MznExpr::FloatLit(r)),
            Tok::Ident(s) => match s.as_str() {
                "true" => Ok(MznExpr::BoolLit(true)),
                "false" => Ok(MznExpr::BoolLit(false)),
                "if" => {
                    let c = self.expr(0)?;
                    if !self.eat_kw("then") {
                        return Err(self.err("expected `then`"));
                    }
                    let t = self.expr(0)?;
                    if !self.eat_kw("else") {
                        return Err(self.err("expected `else`"));
                    }
                    let f = self.expr(0)?;
                    if !self.eat_kw("endif") {
                        return Err(self.err("expected `endif`"));
                    }
                    Ok(MznExpr::Ite(Box::new(c), Box::new(t), Box::new(f)))
                }
                _ => Ok(MznExpr::Ident(s)),
            },
            Tok::Sym("(") => {
                let e = self.expr(0)?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.err("expected an expression")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::print::print_mzn;
    use super::*;

    #[test]
    fn declarations_and_constraints() {
        let m = parse_mzn(
            "var int: x;\nvar -5..5: y;\nvar bool: b;\n\
             constraint (x >= 0) /\\ (x <= 9);\nconstraint b <-> (y < x);\nsolve minimize x;",
        )
        .unwrap();
        assert_eq!(m.decls().count(), 3);
        assert_eq!(m.constraints().count(), 2);
        assert!(matches!(m.solve(), Some(MznSolve::Minimize(_))));
    }

    #[test]
    fn precedence() {
        let m = parse_mzn("var bool: a; var int: x; constraint a \\/ x + 1 < 3 /\\ a; solve satisfy;")
            .unwrap();
        // parses as a \/ ((x+1 < 3) /\ a)
        let c = m.constraints().next().unwrap();
        match c {
            MznExpr::Bin(BinOp::Or, _, rhs) => match rhs.as_ref() {
                MznExpr::Bin(BinOp::And, lhs, _) => {
                    assert!(matches!(lhs.as_ref(), MznExpr::Bin(BinOp::Lt, _, _)));
                }
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn roundtrip_through_printer() {
        let text = "include \"minisearch.mzn\";\nvar 0..7: x;\nvar 0.0..2.5: f;\n\
                    constraint ((x mod 2) = 1) -> (f > 1.5);\n\
                    constraint (if x > 3 then 1 else 0 endif) <= 1;\n\
                    solve search lex_minimize([x, (-x)]);";
        let m1 = parse_mzn(text).unwrap();
        let printed = print_mzn(&m1);
        let m2 = parse_mzn(&printed).unwrap();
        assert_eq!(m1, m2, "printed:\n{printed}");
    }

    #[test]
    fn fraction_literals() {
        let m = parse_mzn("var float: f; constraint f = (1.0 / 3.0); solve satisfy;").unwrap();
        let c = m.constraints().next().unwrap();
        assert!(matches!(c, MznExpr::Bin(BinOp::Eq, _, rhs)
            if matches!(rhs.as_ref(), MznExpr::Bin(BinOp::FDiv, _, _))));
    }

    #[test]
    fn negative_domains() {
        let m = parse_mzn("var -3.5..-1.25: f; var -10..-2: x; solve satisfy;").unwrap();
        let decls: Vec<_> = m.decls().collect();
        assert_eq!(
            decls[0].domain,
            Some(MznDomain::FloatRange(
                Rat::from_i64_fraction(-7, 2),
                Rat::from_i64_fraction(-5, 4)
            ))
        );
    }
}
