//! Parser for optimization-extended SMT-LIB v2 scripts.
//!
//! Recognized commands: `set-logic`, `declare-fun` (zero arity),
//! `declare-const`, `assert`, `assert-soft` (with `:weight` / `:id`),
//! `minimize` / `maximize` (with `:signed` / `:id`), `set-option`
//! (objective combination; other options are ignored), `set-info`
//! (ignored), and the inert `check-sat` / `get-objectives` / `exit`.
//!
//! `let` bindings are inlined while building the DAG; hash consing
//! restores the sharing, so every downstream pass sees a binder-free DAG.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::Num;

use crate::rational::Rat;

use super::error::SmtError;
use super::script::{Combination, InertCommand, ObjDirection, SmtScript};
use super::term::{Op, Sort, TermId};

#[derive(Debug, Clone, PartialEq)]
enum Atom {
    Sym(String),
    Kw(String),
    Num(BigInt),
    Dec(Rat),
    Bv(BigUint, u32),
    Str(String),
}

#[derive(Debug, Clone)]
enum SExpr {
    Atom(Atom, u32, u32),
    List(Vec<SExpr>, u32, u32),
}

impl SExpr {
    fn span(&self) -> (u32, u32) {
        match self {
            SExpr::Atom(_, l, c) | SExpr::List(_, l, c) => (*l, *c),
        }
    }

    fn as_sym(&self) -> Option<&str> {
        match self {
            SExpr::Atom(Atom::Sym(s), ..) => Some(s),
            _ => None,
        }
    }
}

struct SexprLexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> SexprLexer<'a> {
    fn new(src: &'a str) -> Self {
        SexprLexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn err(&self, msg: impl Into<String>) -> SmtError {
        SmtError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
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
                Some(b';') => {
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

    fn is_sym_char(b: u8) -> bool {
        b.is_ascii_alphanumeric()
            || matches!(
                b,
                b'_' | b'-' | b'+' | b'*' | b'/' | b'=' | b'<' | b'>' | b'!' | b'?' | b'.' | b'$'
                    | b'%' | b'&' | b'^' | b'~' | b'@' | b'#'
            )
    }

    /// Next s-expression, or `None` at end of input.
    fn sexpr(&mut self) -> Result<Option<SExpr>, SmtError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(b) = self.peek() else {
            return Ok(None);
        };
        match b {
            b'(' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.peek() {
                        Some(b')') => {
                            self.bump();
                            return Ok(Some(SExpr::List(items, line, col)));
                        }
                        Some(_) => match self.sexpr()? {
                            Some(e) => items.push(e),
                            None => return Err(self.err("unterminated list")),
                        },
                        None => return Err(self.err("unterminated list")),
                    }
                }
            }
            b')' => Err(self.err("unexpected `)`")),
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
                Ok(Some(SExpr::Atom(Atom::Str(s), line, col)))
            }
            b'|' => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(|b| b != b'|') {
                    self.bump();
                }
                if self.peek() != Some(b'|') {
                    return Err(self.err("unterminated quoted symbol"));
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                self.bump();
                Ok(Some(SExpr::Atom(Atom::Sym(s), line, col)))
            }
            b':' => {
                self.bump();
                let start = self.pos;
                while self.peek().is_some_and(Self::is_sym_char) {
                    self.bump();
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                Ok(Some(SExpr::Atom(Atom::Kw(s), line, col)))
            }
            b'#' => {
                self.bump();
                match self.peek() {
                    Some(b'b') => {
                        self.bump();
                        let start = self.pos;
                        while self.peek().is_some_and(|b| b == b'0' || b == b'1') {
                            self.bump();
                        }
                        let bits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                        if bits.is_empty() {
                            return Err(self.err("empty binary literal"));
                        }
                        let value = BigUint::from_str_radix(bits, 2).unwrap();
                        Ok(Some(SExpr::Atom(
                            Atom::Bv(value, bits.len() as u32),
                            line,
                            col,
                        )))
                    }
                    Some(b'x') => {
                        self.bump();
                        let start = self.pos;
                        while self.peek().is_some_and(|b| b.is_ascii_hexdigit()) {
                            self.bump();
                        }
                        let hex = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                        if hex.is_empty() {
                            return Err(self.err("empty hex literal"));
                        }
                        let value = BigUint::from_str_radix(hex, 16).unwrap();
                        Ok(Some(SExpr::Atom(
                            Atom::Bv(value, 4 * hex.len() as u32),
                            line,
                            col,
                        )))
                    }
                    _ => Err(self.err("expected `#b` or `#x` literal")),
                }
            }
            b'0'..=b'9' => {
                let start = self.pos;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.bump();
                }
                if self.peek() == Some(b'.') {
                    self.bump();
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.bump();
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let r = Rat::from_decimal_str(text).map_err(|e| self.err(e.to_string()))?;
                    Ok(Some(SExpr::Atom(Atom::Dec(r), line, col)))
                } else {
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let v = BigInt::from_str_radix(text, 10).unwrap();
                    Ok(Some(SExpr::Atom(Atom::Num(v), line, col)))
                }
            }
            b if SexprLexer::is_sym_char(b) => {
                let start = self.pos;
                while self.peek().is_some_and(Self::is_sym_char) {
                    self.bump();
                }
                let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                Ok(Some(SExpr::Atom(Atom::Sym(s), line, col)))
            }
            other => Err(self.err(format!("unexpected character `{}`", other as char))),
        }
    }
}

/// Parses a full script.
pub fn parse_smt2(text: &str) -> Result<SmtScript, SmtError> {
    let mut lexer = SexprLexer::new(text);
    let mut script = SmtScript::new();
    let mut p = ScriptParser {
        script: &mut script,
    };
    while let Some(e) = lexer.sexpr()? {
        p.command(&e)?;
    }
    Ok(script)
}

struct ScriptParser<'a> {
    script: &'a mut SmtScript,
}

type LetEnv = Vec<HashMap<String, TermId>>;

impl ScriptParser<'_> {
    fn syntax(&self, e: &SExpr, msg: impl Into<String>) -> SmtError {
        let (line, col) = e.span();
        SmtError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn command(&mut self, e: &SExpr) -> Result<(), SmtError> {
        let SExpr::List(items, ..) = e else {
            return Err(self.syntax(e, "expected a command"));
        };
        let Some(head) = items.first().and_then(|h| h.as_sym()) else {
            return Err(self.syntax(e, "expected a command name"));
        };
        match head {
            "set-logic" => {
                let name = items
                    .get(1)
                    .and_then(|e| e.as_sym())
                    .ok_or_else(|| self.syntax(e, "expected a logic name"))?;
                self.script.logic = Some(name.to_string());
                Ok(())
            }
            "set-info" => Ok(()),
            "set-option" => self.set_option(e, &items[1..]),
            "declare-fun" => {
                let [_, name, params, sort] = items.as_slice() else {
                    return Err(self.syntax(e, "expected (declare-fun name () sort)"));
                };
                let name = name
                    .as_sym()
                    .ok_or_else(|| self.syntax(e, "expected a symbol"))?;
                match params {
                    SExpr::List(ps, ..) if ps.is_empty() => {}
                    _ => {
                        return Err(SmtError::OutOfScope(format!(
                            "{name} (uninterpreted functions)"
                        )))
                    }
                }
                let sort = self.sort(sort)?;
                self.script.declare(name, sort)?;
                Ok(())
            }
            "declare-const" => {
                let [_, name, sort] = items.as_slice() else {
                    return Err(self.syntax(e, "expected (declare-const name sort)"));
                };
                let name = name
                    .as_sym()
                    .ok_or_else(|| self.syntax(e, "expected a symbol"))?;
                let sort = self.sort(sort)?;
                self.script.declare(name, sort)?;
                Ok(())
            }
            "assert" => {
                let [_, t] = items.as_slice() else {
                    return Err(self.syntax(e, "expected (assert term)"));
                };
                let mut env = Vec::new();
                let t = self.term(t, &mut env)?;
                self.script.assert(t)
            }
            "assert-soft" => {
                if items.len() < 2 {
                    return Err(self.syntax(e, "expected (assert-soft term ...)"));
                }
                let mut env = Vec::new();
                let t = self.term(&items[1], &mut env)?;
                let mut weight = Rat::one();
                let mut group = String::new();
                let mut i = 2;
                while i < items.len() {
                    match &items[i] {
                        SExpr::Atom(Atom::Kw(k), ..) if k == "weight" => {
                            let v = items
                                .get(i + 1)
                                .ok_or_else(|| self.syntax(e, "missing :weight value"))?;
                            weight = self.const_rat(v)?;
                            i += 2;
                        }
                        SExpr::Atom(Atom::Kw(k), ..) if k == "id" => {
                            let v = items
                                .get(i + 1)
                                .and_then(|e| e.as_sym())
                                .ok_or_else(|| self.syntax(e, "missing :id symbol"))?;
                            group = v.to_string();
                            i += 2;
                        }
                        other => {
                            return Err(self.syntax(other, "unexpected assert-soft attribute"))
                        }
                    }
                }
                self.script.assert_soft(t, weight, &group)
            }
            "minimize" | "maximize" => {
                if items.len() < 2 {
                    return Err(self.syntax(e, "expected an objective term"));
                }
                let direction = if head == "minimize" {
                    ObjDirection::Minimize
                } else {
                    ObjDirection::Maximize
                };
                let mut env = Vec::new();
                let t = self.term(&items[1], &mut env)?;
                let mut signed = false;
                let mut name = None;
                let mut i = 2;
                while i < items.len() {
                    match &items[i] {
                        SExpr::Atom(Atom::Kw(k), ..) if k == "signed" => {
                            signed = true;
                            i += 1;
                        }
                        SExpr::Atom(Atom::Kw(k), ..) if k == "id" => {
                            let v = items
                                .get(i + 1)
                                .and_then(|e| e.as_sym())
                                .ok_or_else(|| self.syntax(e, "missing :id symbol"))?;
                            name = Some(v.to_string());
                            i += 2;
                        }
                        other => return Err(self.syntax(other, "unexpected objective attribute")),
                    }
                }
                self.script.add_objective(direction, t, signed, name)
            }
            "check-sat" => {
                self.script.inert.push(InertCommand::CheckSat);
                Ok(())
            }
            "get-objectives" => {
                self.script.inert.push(InertCommand::GetObjectives);
                Ok(())
            }
            "exit" => {
                self.script.inert.push(InertCommand::Exit);
                Ok(())
            }
            other => Err(SmtError::UnknownCommand(other.to_string())),
        }
    }

    fn set_option(&mut self, e: &SExpr, args: &[SExpr]) -> Result<(), SmtError> {
        let Some(SExpr::Atom(Atom::Kw(key), ..)) = args.first() else {
            return Err(self.syntax(e, "expected an option keyword"));
        };
        if key == "opt.priority" || key == "priority" {
            let value = args
                .get(1)
                .and_then(|e| e.as_sym())
                .ok_or_else(|| self.syntax(e, "expected an option value"))?;
            self.script.combination = match value {
                "lex" => Combination::Lexicographic,
                "box" => Combination::Independent,
                "par" | "pareto" => {
                    return Err(SmtError::OutOfScope("pareto objective combination".into()))
                }
                other => {
                    return Err(self.syntax(e, format!("unknown objective priority `{other}`")))
                }
            };
        }
        // All other options are accepted and dropped.
        Ok(())
    }

    fn sort(&self, e: &SExpr) -> Result<Sort, SmtError> {
        match e {
            SExpr::Atom(Atom::Sym(s), ..) => match s.as_str() {
                "Bool" => Ok(Sort::Bool),
                "Int" => Ok(Sort::Int),
                "Real" => Ok(Sort::Real),
                other => Err(SmtError::OutOfScope(other.to_string())),
            },
            SExpr::List(items, ..) => {
                // (_ BitVec w)
                if let [u, bv, w] = items.as_slice() {
                    if u.as_sym() == Some("_") && bv.as_sym() == Some("BitVec") {
                        if let SExpr::Atom(Atom::Num(n), ..) = w {
                            let w: u32 = n
                                .try_into()
                                .map_err(|_| self.syntax(e, "bad bit-vector width"))?;
                            if w == 0 {
                                return Err(self.syntax(e, "bit-vector width must be positive"));
                            }
                            return Ok(Sort::BitVec(w));
                        }
                    }
                }
                let name = items
                    .first()
                    .and_then(|h| h.as_sym())
                    .unwrap_or("?")
                    .to_string();
                Err(SmtError::OutOfScope(name))
            }
            _ => Err(self.syntax(e, "expected a sort")),
        }
    }

    /// Evaluates a constant rational expression: numeral, decimal,
    /// `(/ a b)` or `(- x)`.
    fn const_rat(&self, e: &SExpr) -> Result<Rat, SmtError> {
        match e {
            SExpr::Atom(Atom::Num(n), ..) => Ok(Rat::from_bigint(n.clone())),
            SExpr::Atom(Atom::Dec(r), ..) => Ok(r.clone()),
            SExpr::List(items, ..) => match items.first().and_then(|h| h.as_sym()) {
                Some("/") if items.len() == 3 => {
                    let a = self.const_rat(&items[1])?;
                    let b = self.const_rat(&items[2])?;
                    if b.is_zero() {
                        return Err(self.syntax(e, "division by zero"));
                    }
                    Ok(a / b)
                }
                Some("-") if items.len() == 2 => Ok(-self.const_rat(&items[1])?),
                _ => Err(self.syntax(e, "expected a constant rational")),
            },
            _ => Err(self.syntax(e, "expected a constant rational")),
        }
    }

    fn lookup(&self, name: &str, env: &LetEnv) -> Option<TermId> {
        for scope in env.iter().rev() {
            if let Some(&t) = scope.get(name) {
                return Some(t);
            }
        }
        None
    }

    fn term(&mut self, e: &SExpr, env: &mut LetEnv) -> Result<TermId, SmtError> {
        match e {
            SExpr::Atom(Atom::Num(n), ..) => Ok(self.script.arena.int_const(n.clone())),
            SExpr::Atom(Atom::Dec(r), ..) => Ok(self.script.arena.real_const(r.clone())),
            SExpr::Atom(Atom::Bv(v, w), ..) => Ok(self.script.arena.bv_const(v.clone(), *w)),
            SExpr::Atom(Atom::Sym(s), ..) => match s.as_str() {
                "true" => Ok(self.script.arena.true_()),
                "false" => Ok(self.script.arena.false_()),
                name => {
                    if let Some(t) = self.lookup(name, env) {
                        return Ok(t);
                    }
                    match self.script.sort_of(name) {
                        Some(sort) => Ok(self.script.arena.var(name, sort)),
                        None => Err(SmtError::UnknownSymbol(name.to_string())),
                    }
                }
            },
            SExpr::List(items, ..) => self.apply(e, items, env),
            _ => Err(self.syntax(e, "expected a term")),
        }
    }

    fn terms(&mut self, items: &[SExpr], env: &mut LetEnv) -> Result<Vec<TermId>, SmtError> {
        items.iter().map(|e| self.term(e, env)).collect()
    }

    fn apply(&mut self, e: &SExpr, items: &[SExpr], env: &mut LetEnv) -> Result<TermId, SmtError> {
        if items.is_empty() {
            return Err(self.syntax(e, "empty application"));
        }
        // Indexed operators: ((_ zero_extend k) t), (_ bvN w)
        if let SExpr::List(index, ..) = &items[0] {
            return self.indexed(e, index, &items[1..], env);
        }
        if items[0].as_sym() == Some("_") {
            return self.underscore(e, items);
        }
        let head = items[0]
            .as_sym()
            .ok_or_else(|| self.syntax(e, "expected an operator"))?
            .to_string();
        let args = &items[1..];
        match head.as_str() {
            "let" => {
                let [bindings, body] = args else {
                    return Err(self.syntax(e, "expected (let (bindings) body)"));
                };
                let SExpr::List(pairs, ..) = bindings else {
                    return Err(self.syntax(e, "expected a binding list"));
                };
                let mut scope = HashMap::new();
                for pair in pairs {
                    let SExpr::List(kv, ..) = pair else {
                        return Err(self.syntax(pair, "expected (name term)"));
                    };
                    let [name, value] = kv.as_slice() else {
                        return Err(self.syntax(pair, "expected (name term)"));
                    };
                    let name = name
                        .as_sym()
                        .ok_or_else(|| self.syntax(pair, "expected a symbol"))?;
                    // Parallel let: values see the outer scope only.
                    let t = self.term(value, env)?;
                    scope.insert(name.to_string(), t);
                }
                env.push(scope);
                let t = self.term(body, env);
                env.pop();
                t
            }
            "forall" | "exists" => Err(SmtError::OutOfScope(format!("{head} (quantifiers)"))),
            "!" => {
                // Annotated term: keep the term, drop the attributes.
                if args.is_empty() {
                    return Err(self.syntax(e, "expected an annotated term"));
                }
                self.term(&args[0], env)
            }
            "not" => {
                let ts = self.terms(args, env)?;
                let [t] = ts.as_slice() else {
                    return Err(self.syntax(e, "not takes one argument"));
                };
                self.script.arena.not(*t)
            }
            "and" => {
                let ts = self.terms(args, env)?;
                self.script.arena.and(ts)
            }
            "or" => {
                let ts = self.terms(args, env)?;
                self.script.arena.or(ts)
            }
            "xor" => {
                let ts = self.terms(args, env)?;
                if ts.len() < 2 {
                    return Err(self.syntax(e, "xor takes at least two arguments"));
                }
                let mut acc = ts[0];
                for &t in &ts[1..] {
                    acc = self.script.arena.xor(acc, t)?;
                }
                Ok(acc)
            }
            "=>" => {
                let ts = self.terms(args, env)?;
                if ts.len() < 2 {
                    return Err(self.syntax(e, "=> takes at least two arguments"));
                }
                let mut acc = *ts.last().unwrap();
                for &t in ts[..ts.len() - 1].iter().rev() {
                    acc = self.script.arena.implies(t, acc)?;
                }
                Ok(acc)
            }
            "ite" => {
                let ts = self.terms(args, env)?;
                let [c, t, f] = ts.as_slice() else {
                    return Err(self.syntax(e, "ite takes three arguments"));
                };
                self.script.arena.ite(*c, *t, *f)
            }
            "=" => {
                let ts = self.terms(args, env)?;
                self.script.arena.eq(ts)
            }
            "distinct" => {
                let ts = self.terms(args, env)?;
                self.script.arena.distinct(ts)
            }
            "+" => {
                let ts = self.terms(args, env)?;
                self.script.arena.add(ts)
            }
            "-" => {
                let ts = self.terms(args, env)?;
                match ts.len() {
                    1 => self.script.arena.neg(ts[0]),
                    0 => Err(self.syntax(e, "- takes arguments")),
                    _ => self.script.arena.sub(ts),
                }
            }
            "*" => {
                let ts = self.terms(args, env)?;
                self.script.arena.mul(ts)
            }
            "/" => {
                let ts = self.terms(args, env)?;
                if ts.len() < 2 {
                    return Err(self.syntax(e, "/ takes at least two arguments"));
                }
                let mut acc = ts[0];
                for &t in &ts[1..] {
                    acc = self.script.arena.div(acc, t)?;
                }
                Ok(acc)
            }
            "to_real" => {
                let ts = self.terms(args, env)?;
                let [t] = ts.as_slice() else {
                    return Err(self.syntax(e, "to_real takes one argument"));
                };
                self.script.arena.to_real(*t)
            }
            "<=" | "<" | ">=" | ">" => {
                let ts = self.terms(args, env)?;
                if ts.len() < 2 {
                    return Err(self.syntax(e, "comparison takes at least two arguments"));
                }
                // Chained comparisons become a conjunction of adjacent pairs.
                let mut conj = Vec::new();
                for w in ts.windows(2) {
                    let c = match head.as_str() {
                        "<=" => self.script.arena.le(w[0], w[1])?,
                        "<" => self.script.arena.lt(w[0], w[1])?,
                        ">=" => self.script.arena.ge(w[0], w[1])?,
                        _ => self.script.arena.gt(w[0], w[1])?,
                    };
                    conj.push(c);
                }
                self.script.arena.and(conj)
            }
            "bvneg" | "bvnot" => {
                let ts = self.terms(args, env)?;
                let [t] = ts.as_slice() else {
                    return Err(self.syntax(e, "expected one argument"));
                };
                let op = if head == "bvneg" { Op::BvNeg } else { Op::BvNot };
                self.script.arena.bv_unary(op, *t)
            }
            "bvadd" | "bvsub" | "bvmul" | "bvand" | "bvor" | "bvxor" => {
                let ts = self.terms(args, env)?;
                if ts.len() < 2 {
                    return Err(self.syntax(e, "expected at least two arguments"));
                }
                let op = match head.as_str() {
                    "bvadd" => Op::BvAdd,
                    "bvsub" => Op::BvSub,
                    "bvmul" => Op::BvMul,
                    "bvand" => Op::BvAnd,
                    "bvor" => Op::BvOr,
                    _ => Op::BvXor,
                };
                let mut acc = ts[0];
                for &t in &ts[1..] {
                    acc = self.script.arena.bv_binary(op.clone(), acc, t)?;
                }
                Ok(acc)
            }
            "bvshl" | "bvlshr" | "bvashr" | "bvult" | "bvule" | "bvugt" | "bvuge" | "bvslt"
            | "bvsle" | "bvsgt" | "bvsge" => {
                let ts = self.terms(args, env)?;
                let [a, b] = ts.as_slice() else {
                    return Err(self.syntax(e, "expected two arguments"));
                };
                let op = match head.as_str() {
                    "bvshl" => Op::BvShl,
                    "bvlshr" => Op::BvLshr,
                    "bvashr" => Op::BvAshr,
                    "bvult" => Op::BvUlt,
                    "bvule" => Op::BvUle,
                    "bvugt" => Op::BvUgt,
                    "bvuge" => Op::BvUge,
                    "bvslt" => Op::BvSlt,
                    "bvsle" => Op::BvSle,
                    "bvsgt" => Op::BvSgt,
                    _ => Op::BvSge,
                };
                self.script.arena.bv_binary(op, *a, *b)
            }
            other => Err(SmtError::OutOfScope(other.to_string())),
        }
    }

    fn underscore(&mut self, e: &SExpr, items: &[SExpr]) -> Result<TermId, SmtError> {
        // (_ bvN w)
        if let [_, name, w] = items {
            if let (Some(n), SExpr::Atom(Atom::Num(width), ..)) = (name.as_sym(), w) {
                if let Some(digits) = n.strip_prefix("bv") {
                    if let Ok(value) = BigUint::from_str_radix(digits, 10) {
                        let w: u32 = width
                            .try_into()
                            .map_err(|_| self.syntax(e, "bad bit-vector width"))?;
                        if w == 0 {
                            return Err(self.syntax(e, "bit-vector width must be positive"));
                        }
                        return Ok(self.script.arena.bv_const(value, w));
                    }
                }
            }
        }
        Err(self.syntax(e, "unsupported indexed literal"))
    }

    fn indexed(
        &mut self,
        e: &SExpr,
        index: &[SExpr],
        args: &[SExpr],
        env: &mut LetEnv,
    ) -> Result<TermId, SmtError> {
        if index.first().and_then(|h| h.as_sym()) != Some("_") {
            return Err(self.syntax(e, "expected an indexed operator"));
        }
        let name = index
            .get(1)
            .and_then(|h| h.as_sym())
            .ok_or_else(|| self.syntax(e, "expected an indexed operator name"))?;
        match name {
            "zero_extend" | "sign_extend" => {
                let SExpr::Atom(Atom::Num(k), ..) = &index[2] else {
                    return Err(self.syntax(e, "expected an extension width"));
                };
                let k: u32 = k
                    .try_into()
                    .map_err(|_| self.syntax(e, "bad extension width"))?;
                let ts = self.terms(args, env)?;
                let [t] = ts.as_slice() else {
                    return Err(self.syntax(e, "expected one argument"));
                };
                self.script.arena.bv_extend(name == "sign_extend", k, *t)
            }
            other => Err(SmtError::OutOfScope(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::script::father_counts;
    use super::*;

    #[test]
    fn minimal_script() {
        let s = parse_smt2("(declare-const x Int)(assert (<= 0 x))(minimize x)").unwrap();
        assert_eq!(s.decls, vec![("x".to_string(), Sort::Int)]);
        assert_eq!(s.assertions.len(), 1);
        assert_eq!(s.objectives.len(), 1);
        assert_eq!(s.objectives[0].direction, ObjDirection::Minimize);
    }

    #[test]
    fn hash_consing_in_parsed_scripts() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)(assert (or (and a b) (and a b)))",
        )
        .unwrap();
        let or = s.assertions[0];
        let children = &s.arena.node(or).children;
        assert_eq!(children[0], children[1], "the (and a b) node is shared");
        let counts = father_counts(&s);
        assert_eq!(counts[&children[0]], 2);
    }

    #[test]
    fn array_sort_out_of_scope() {
        let err = parse_smt2("(declare-const A (Array Int Int))").unwrap_err();
        assert_eq!(err, SmtError::OutOfScope("Array".to_string()));
    }

    #[test]
    fn quantifiers_rejected() {
        let err =
            parse_smt2("(declare-const x Int)(assert (forall ((y Int)) (= x y)))").unwrap_err();
        assert!(matches!(err, SmtError::OutOfScope(s) if s.contains("forall")));
    }

    #[test]
    fn let_bindings_are_inlined() {
        let s = parse_smt2(
            "(declare-const a Bool)(declare-const b Bool)\
             (assert (let ((x (and a b))) (or x x)))",
        )
        .unwrap();
        let or = s.assertions[0];
        let children = &s.arena.node(or).children;
        assert_eq!(children[0], children[1]);
        assert!(matches!(s.arena.node(children[0]).op, Op::And));
    }

    #[test]
    fn soft_assertions_and_weights() {
        let s = parse_smt2(
            "(declare-const a Bool)\
             (assert-soft a :weight (/ 5 2) :id goal)\
             (assert-soft a)",
        )
        .unwrap();
        assert_eq!(s.soft_assertions[0].weight, Rat::from_i64_fraction(5, 2));
        assert_eq!(s.soft_assertions[0].group, "goal");
        assert_eq!(s.soft_assertions[1].weight, Rat::one());
        let err = parse_smt2("(declare-const a Bool)(assert-soft a :weight 0)").unwrap_err();
        assert!(matches!(err, SmtError::BadWeight(_)));
    }

    #[test]
    fn objective_combination_option() {
        let s = parse_smt2("(set-option :opt.priority lex)").unwrap();
        assert_eq!(s.combination, Combination::Lexicographic);
        let s = parse_smt2("(set-option :opt.priority box)").unwrap();
        assert_eq!(s.combination, Combination::Independent);
        assert!(parse_smt2("(set-option :opt.priority par)").is_err());
    }

    #[test]
    fn bv_literals() {
        let s = parse_smt2(
            "(declare-const v (_ BitVec 8))(assert (bvult v #x1F))(assert (bvult v #b101w))",
        );
        assert!(s.is_err(), "trailing junk in binary literal");
        let s = parse_smt2("(declare-const v (_ BitVec 8))(assert (= v (_ bv255 8)))").unwrap();
        assert_eq!(s.assertions.len(), 1);
    }

    #[test]
    fn undeclared_symbol() {
        let err = parse_smt2("(assert (<= 0 x))").unwrap_err();
        assert_eq!(err, SmtError::UnknownSymbol("x".to_string()));
    }

    #[test]
    fn nonlinear_rejected() {
        let err = parse_smt2(
            "(declare-const x Int)(declare-const y Int)(assert (= (* x y) 4))",
        )
        .unwrap_err();
        assert!(matches!(err, SmtError::Nonlinear(_)));
    }

    #[test]
    fn signed_objective_attribute() {
        let s = parse_smt2("(declare-const v (_ BitVec 4))(maximize v :signed)").unwrap();
        assert!(s.objectives[0].signed);
    }

    #[test]
    fn rational_objective_constants() {
        let s = parse_smt2(
            "(declare-const x Int)(assert (<= 0 x))(assert (<= x 3))\
             (minimize (+ (* (/ 7 2) (to_real x)) 0.5))",
        )
        .unwrap();
        assert_eq!(s.arena.sort(s.objectives[0].term), Sort::Real);
    }
}
