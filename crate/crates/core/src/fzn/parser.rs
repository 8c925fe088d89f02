//! Recursive-descent parser for the supported FlatZinc subset.
//!
//! Parameters are substituted into constraint arguments as they are read,
//! and named arrays are expanded inline, so downstream passes only deal
//! with literals and variable identifiers. Validation (identifier scoping,
//! builtin signatures, domain sanity) happens during the same pass.

use std::collections::HashMap;

use super::ast::*;
use super::builtins::{canonical_name, signatures, Kind};
use super::error::FznError;
use super::lexer::{Lexer, Spanned, Tok};

#[derive(Debug, Clone)]
enum Symbol {
    Var(FznVarType),
    Param(FznLit),
    Array(Vec<FznAtom>),
}

pub struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    allow_multi: bool,
    symbols: HashMap<String, Symbol>,
    model: FznModel,
}

/// Parses and validates a FlatZinc document.
///
/// With `allow_multi_objective` set, repeated `solve` items are accepted
/// and collected in order; otherwise a second `solve` item is an error.
pub fn parse_fzn(text: &str, allow_multi_objective: bool) -> Result<FznModel, FznError> {
    let toks = Lexer::tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        allow_multi: allow_multi_objective,
        symbols: HashMap::new(),
        model: FznModel::default(),
    };
    p.document()?;
    Ok(p.model)
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> (u32, u32) {
        let s = &self.toks[self.pos.min(self.toks.len() - 1)];
        (s.line, s.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, msg: impl Into<String>) -> FznError {
        let (line, col) = self.span();
        FznError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FznError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, FznError> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                Tok::Ident(s) => Ok(s),
                _ => unreachable!(),
            },
            _ => Err(self.syntax(format!("expected {what}"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn declare(&mut self, name: &str, sym: Symbol) -> Result<(), FznError> {
        if self.symbols.insert(name.to_string(), sym).is_some() {
            return Err(FznError::DuplicateIdent(name.to_string()));
        }
        Ok(())
    }

    fn document(&mut self) -> Result<(), FznError> {
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::Ident(kw) => match kw.as_str() {
                    "predicate" => self.skip_predicate()?,
                    "var" => self.var_decl()?,
                    "array" => self.array_decl()?,
                    "bool" | "int" | "float" | "set" => self.param_decl()?,
                    "constraint" => self.constraint()?,
                    "solve" => self.solve_item()?,
                    other => return Err(self.syntax(format!("unexpected item `{other}`"))),
                },
                _ => return Err(self.syntax("expected an item")),
            }
        }
        if self.model.solve_items.is_empty() {
            return Err(FznError::MissingSolveItem);
        }
        Ok(())
    }

    fn skip_predicate(&mut self) -> Result<(), FznError> {
        self.bump();
        loop {
            match self.peek() {
                Tok::Semi => {
                    self.bump();
                    return Ok(());
                }
                Tok::Eof => return Err(self.syntax("unterminated predicate item")),
                _ => {
                    self.bump();
                }
            }
        }
    }

    /// `var <type-or-domain>: name [annotations] [= atom];`
    fn var_decl(&mut self) -> Result<(), FznError> {
        self.bump(); // var
        let (ty, domain) = self.var_type()?;
        self.expect(Tok::Colon, "`:`")?;
        let name = self.ident("variable name")?;
        self.check_domain(&name, &domain)?;
        let annotations = self.annotations()?;
        let assigned = if *self.peek() == Tok::Eq {
            self.bump();
            let atom = self.atom()?;
            self.check_assignment(&name, ty, &atom)?;
            Some(atom)
        } else {
            None
        };
        self.expect(Tok::Semi, "`;`")?;
        self.declare(&name, Symbol::Var(ty))?;
        self.model.vars.push(FznVarDecl {
            name,
            ty,
            domain,
            annotations,
            assigned,
        });
        Ok(())
    }

    fn var_type(&mut self) -> Result<(FznVarType, Option<FznDomain>), FznError> {
        match self.peek().clone() {
            Tok::Ident(kw) => match kw.as_str() {
                "bool" => {
                    self.bump();
                    Ok((FznVarType::Bool, None))
                }
                "int" => {
                    self.bump();
                    Ok((FznVarType::Int, None))
                }
                "float" => {
                    self.bump();
                    Ok((FznVarType::Float, None))
                }
                "set" => {
                    self.bump();
                    if !self.eat_keyword("of") {
                        return Err(self.syntax("expected `of` after `set`"));
                    }
                    if self.eat_keyword("int") {
                        return Ok((FznVarType::SetOfInt, None));
                    }
                    let sv = self.set_like()?;
                    Ok((FznVarType::SetOfInt, Some(FznDomain::SetUniverse(sv))))
                }
                other => Err(self.syntax(format!("unknown type `{other}`"))),
            },
            Tok::Int(lo) => {
                self.bump();
                self.expect(Tok::DotDot, "`..`")?;
                match self.bump() {
                    Tok::Int(hi) => Ok((FznVarType::Int, Some(FznDomain::Int(SetVal::Range(lo, hi))))),
                    _ => Err(self.syntax("expected integer upper bound")),
                }
            }
            Tok::Float(lo) => {
                self.bump();
                self.expect(Tok::DotDot, "`..`")?;
                match self.bump() {
                    Tok::Float(hi) => Ok((FznVarType::Float, Some(FznDomain::Float(lo, hi)))),
                    _ => Err(self.syntax("expected float upper bound")),
                }
            }
            Tok::LBrace => {
                let sv = self.set_literal()?;
                Ok((FznVarType::Int, Some(FznDomain::Int(sv))))
            }
            _ => Err(self.syntax("expected a type")),
        }
    }

    /// `a..b` or `{e, ...}`.
    fn set_like(&mut self) -> Result<SetVal, FznError> {
        match self.peek().clone() {
            Tok::Int(lo) => {
                self.bump();
                self.expect(Tok::DotDot, "`..`")?;
                match self.bump() {
                    Tok::Int(hi) => Ok(SetVal::Range(lo, hi)),
                    _ => Err(self.syntax("expected integer upper bound")),
                }
            }
            Tok::LBrace => self.set_literal(),
            _ => Err(self.syntax("expected a set")),
        }
    }

    fn set_literal(&mut self) -> Result<SetVal, FznError> {
        self.expect(Tok::LBrace, "`{`")?;
        let mut elems = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                match self.bump() {
                    Tok::Int(v) => elems.push(v),
                    _ => return Err(self.syntax("expected integer set element")),
                }
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBrace, "`}`")?;
        Ok(SetVal::from_elems(elems))
    }

    fn check_domain(&self, name: &str, domain: &Option<FznDomain>) -> Result<(), FznError> {
        let bad = |msg: &str| FznError::BadDomain {
            name: name.to_string(),
            msg: msg.to_string(),
        };
        match domain {
            Some(FznDomain::Int(SetVal::Range(lo, hi))) if lo > hi => {
                Err(bad("interval lower bound exceeds upper bound"))
            }
            Some(FznDomain::Int(SetVal::Elems(es))) if es.is_empty() => {
                Err(bad("explicit domain is empty"))
            }
            Some(FznDomain::Float(lo, hi)) if lo > hi => {
                Err(bad("interval lower bound exceeds upper bound"))
            }
            Some(FznDomain::SetUniverse(sv)) if sv.is_empty() => {
                Err(bad("set universe is empty"))
            }
            _ => Ok(()),
        }
    }

    fn check_assignment(&self, name: &str, ty: FznVarType, atom: &FznAtom) -> Result<(), FznError> {
        let ok = match atom {
            FznAtom::Lit(lit) => match (ty, lit) {
                (FznVarType::Bool, FznLit::Bool(_))
                | (FznVarType::Int, FznLit::Int(_))
                | (FznVarType::Float, FznLit::Float(_))
                | (FznVarType::SetOfInt, FznLit::Set(_)) => true,
                _ => false,
            },
            FznAtom::Id(id) => match self.symbols.get(id) {
                Some(Symbol::Var(t)) => *t == ty,
                Some(_) => false,
                None => return Err(FznError::UndeclaredIdent(id.clone())),
            },
        };
        if ok {
            Ok(())
        } else {
            Err(FznError::ArgType {
                name: format!("= (declaration of {name})"),
                index: 0,
                msg: "assignment type mismatch".to_string(),
            })
        }
    }

    /// `array [1..n] of [var] <type>: name [annotations] = [elems];`
    fn array_decl(&mut self) -> Result<(), FznError> {
        self.bump(); // array
        self.expect(Tok::LBracket, "`[`")?;
        let lo = match self.bump() {
            Tok::Int(v) => v,
            _ => return Err(self.syntax("expected index range")),
        };
        self.expect(Tok::DotDot, "`..`")?;
        let hi = match self.bump() {
            Tok::Int(v) => v,
            _ => return Err(self.syntax("expected index range upper bound")),
        };
        self.expect(Tok::RBracket, "`]`")?;
        if !self.eat_keyword("of") {
            return Err(self.syntax("expected `of`"));
        }
        if lo != 1 {
            return Err(self.syntax("array index sets must start at 1"));
        }
        let declared_len = if hi >= 1 { hi as usize } else { 0 };
        let is_var = self.eat_keyword("var");
        let elem = if is_var {
            // Element domains on var arrays are redundant with the element
            // declarations; parse and discard.
            let (ty, _) = self.var_type()?;
            match ty {
                FznVarType::Bool => FznScalar::Bool,
                FznVarType::Int => FznScalar::Int,
                FznVarType::Float => FznScalar::Float,
                FznVarType::SetOfInt => {
                    return Err(self.syntax("arrays of sets are not supported"))
                }
            }
        } else if self.eat_keyword("bool") {
            FznScalar::Bool
        } else if self.eat_keyword("int") {
            FznScalar::Int
        } else if self.eat_keyword("float") {
            FznScalar::Float
        } else {
            return Err(self.syntax("expected array element type"));
        };
        self.expect(Tok::Colon, "`:`")?;
        let name = self.ident("array name")?;
        let annotations = self.annotations()?;
        if *self.peek() != Tok::Eq {
            return Err(FznError::UnassignedArray(name));
        }
        self.bump();
        self.expect(Tok::LBracket, "`[`")?;
        let mut elems = Vec::new();
        if *self.peek() != Tok::RBracket {
            loop {
                let atom = self.atom()?;
                self.check_array_elem(&name, elem, is_var, &atom)?;
                elems.push(atom);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        self.expect(Tok::Semi, "`;`")?;
        if elems.len() != declared_len {
            return Err(FznError::ArrayLenMismatch {
                name,
                declared: declared_len,
                actual: elems.len(),
            });
        }
        self.declare(&name, Symbol::Array(elems.clone()))?;
        self.model.arrays.push(FznArray {
            name,
            is_var,
            elem,
            elems,
            annotations,
        });
        Ok(())
    }

    fn check_array_elem(
        &self,
        name: &str,
        elem: FznScalar,
        is_var: bool,
        atom: &FznAtom,
    ) -> Result<(), FznError> {
        let mismatch = || FznError::ArgType {
            name: format!("array {name}"),
            index: 0,
            msg: "element type mismatch".to_string(),
        };
        match atom {
            FznAtom::Lit(lit) => {
                if lit.scalar() == Some(elem) {
                    Ok(())
                } else {
                    Err(mismatch())
                }
            }
            FznAtom::Id(id) => {
                if !is_var {
                    return Err(mismatch());
                }
                match self.symbols.get(id) {
                    Some(Symbol::Var(t)) => {
                        let scalar = match t {
                            FznVarType::Bool => FznScalar::Bool,
                            FznVarType::Int => FznScalar::Int,
                            FznVarType::Float => FznScalar::Float,
                            FznVarType::SetOfInt => return Err(mismatch()),
                        };
                        if scalar == elem {
                            Ok(())
                        } else {
                            Err(mismatch())
                        }
                    }
                    Some(_) => Err(mismatch()),
                    None => Err(FznError::UndeclaredIdent(id.clone())),
                }
            }
        }
    }

    /// `<type>: name = literal;`
    fn param_decl(&mut self) -> Result<(), FznError> {
        let ty = if self.eat_keyword("bool") {
            FznVarType::Bool
        } else if self.eat_keyword("int") {
            FznVarType::Int
        } else if self.eat_keyword("float") {
            FznVarType::Float
        } else {
            self.bump(); // set
            if !self.eat_keyword("of") || !self.eat_keyword("int") {
                return Err(self.syntax("expected `set of int`"));
            }
            FznVarType::SetOfInt
        };
        self.expect(Tok::Colon, "`:`")?;
        let name = self.ident("parameter name")?;
        self.expect(Tok::Eq, "`=` (parameters must be assigned)")?;
        let value = match (ty, self.peek().clone()) {
            (FznVarType::Bool, Tok::Ident(s)) if s == "true" || s == "false" => {
                self.bump();
                FznLit::Bool(s == "true")
            }
            (FznVarType::Int, Tok::Int(v)) => {
                self.bump();
                FznLit::Int(v)
            }
            (FznVarType::Float, Tok::Float(r)) => {
                self.bump();
                FznLit::Float(r)
            }
            (FznVarType::SetOfInt, Tok::Int(_) | Tok::LBrace) => FznLit::Set(self.set_like()?),
            _ => return Err(self.syntax("parameter value does not match its type")),
        };
        self.expect(Tok::Semi, "`;`")?;
        self.declare(&name, Symbol::Param(value.clone()))?;
        self.model.params.push(FznParam { name, ty, value });
        Ok(())
    }

    /// A literal or identifier; parameters are substituted here.
    fn atom(&mut self) -> Result<FznAtom, FznError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                if *self.peek() == Tok::DotDot {
                    self.bump();
                    match self.bump() {
                        Tok::Int(hi) => Ok(FznAtom::Lit(FznLit::Set(SetVal::Range(v, hi)))),
                        _ => Err(self.syntax("expected integer upper bound")),
                    }
                } else {
                    Ok(FznAtom::int(v))
                }
            }
            Tok::Float(r) => {
                self.bump();
                Ok(FznAtom::Lit(FznLit::Float(r)))
            }
            Tok::LBrace => Ok(FznAtom::Lit(FznLit::Set(self.set_literal()?))),
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "true" => return Ok(FznAtom::boolean(true)),
                    "false" => return Ok(FznAtom::boolean(false)),
                    _ => {}
                }
                match self.symbols.get(&s) {
                    Some(Symbol::Param(lit)) => Ok(FznAtom::Lit(lit.clone())),
                    Some(Symbol::Var(_)) => Ok(FznAtom::Id(s)),
                    Some(Symbol::Array(_)) => Err(self.syntax(format!(
                        "array `{s}` used where a scalar is expected"
                    ))),
                    None => Err(FznError::UndeclaredIdent(s)),
                }
            }
            _ => Err(self.syntax("expected a literal or identifier")),
        }
    }

    /// A constraint argument: atom, inline array, or named array.
    fn arg(&mut self) -> Result<FznArg, FznError> {
        match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                let mut elems = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        elems.push(self.atom()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(FznArg::Array(elems))
            }
            Tok::Ident(s)
                if matches!(self.symbols.get(&s), Some(Symbol::Array(_)))
                    && s != "true"
                    && s != "false" =>
            {
                self.bump();
                match self.symbols.get(&s) {
                    Some(Symbol::Array(elems)) => Ok(FznArg::Array(elems.clone())),
                    _ => unreachable!(),
                }
            }
            _ => Ok(FznArg::Atom(self.atom()?)),
        }
    }

    fn constraint(&mut self) -> Result<(), FznError> {
        self.bump(); // constraint
        let (line, col) = self.span();
        let raw_name = self.ident("builtin name")?;
        let canonical = canonical_name(&raw_name).to_string();
        let sigs = signatures(&canonical);
        if sigs.is_empty() {
            return Err(FznError::UnknownBuiltin {
                line,
                col,
                name: raw_name,
            });
        }
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.arg()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        let annotations = self.annotations()?;
        self.expect(Tok::Semi, "`;`")?;

        let sig = sigs
            .iter()
            .find(|s| s.args.len() == args.len())
            .ok_or_else(|| FznError::Arity {
                name: canonical.clone(),
                expected: sigs[0].args.len(),
                found: args.len(),
            })?;
        for (i, (kind, arg)) in sig.args.iter().zip(&args).enumerate() {
            self.check_arg(&canonical, i, *kind, arg)?;
        }
        self.model.constraints.push(FznConstraint {
            name: canonical,
            args,
            annotations,
        });
        Ok(())
    }

    fn atom_matches(&self, kind: Kind, atom: &FznAtom) -> bool {
        let var_ty = |id: &str| match self.symbols.get(id) {
            Some(Symbol::Var(t)) => Some(*t),
            _ => None,
        };
        match kind {
            Kind::Bool => match atom {
                FznAtom::Lit(FznLit::Bool(_)) => true,
                FznAtom::Id(id) => var_ty(id) == Some(FznVarType::Bool),
                _ => false,
            },
            Kind::Int => match atom {
                FznAtom::Lit(FznLit::Int(_)) => true,
                FznAtom::Id(id) => var_ty(id) == Some(FznVarType::Int),
                _ => false,
            },
            Kind::Float => match atom {
                FznAtom::Lit(FznLit::Float(_)) => true,
                FznAtom::Id(id) => var_ty(id) == Some(FznVarType::Float),
                _ => false,
            },
            Kind::Set => match atom {
                FznAtom::Lit(FznLit::Set(_)) => true,
                FznAtom::Id(id) => var_ty(id) == Some(FznVarType::SetOfInt),
                _ => false,
            },
            Kind::ParInt => matches!(atom, FznAtom::Lit(FznLit::Int(_))),
            Kind::ParSet => matches!(atom, FznAtom::Lit(FznLit::Set(_))),
            _ => false,
        }
    }

    fn check_arg(&self, name: &str, index: usize, kind: Kind, arg: &FznArg) -> Result<(), FznError> {
        let fail = |msg: &str| FznError::ArgType {
            name: name.to_string(),
            index: index + 1,
            msg: msg.to_string(),
        };
        let elem_kind = match kind {
            Kind::ArrBool => Some(Kind::Bool),
            Kind::ArrInt => Some(Kind::Int),
            Kind::ArrFloat => Some(Kind::Float),
            Kind::ArrParBool => Some(Kind::Bool),
            Kind::ArrParInt => Some(Kind::ParInt),
            Kind::ArrParFloat => Some(Kind::Float),
            _ => None,
        };
        match elem_kind {
            Some(ek) => {
                let FznArg::Array(elems) = arg else {
                    return Err(fail("expected an array"));
                };
                let par_only = matches!(kind, Kind::ArrParBool | Kind::ArrParInt | Kind::ArrParFloat);
                for a in elems {
                    if par_only && matches!(a, FznAtom::Id(_)) {
                        return Err(fail("expected a parameter (constant) array"));
                    }
                    if !self.atom_matches(ek, a) {
                        return Err(fail("array element type mismatch"));
                    }
                }
                Ok(())
            }
            None => {
                let FznArg::Atom(atom) = arg else {
                    return Err(fail("unexpected array"));
                };
                if self.atom_matches(kind, atom) {
                    Ok(())
                } else {
                    Err(fail("argument type mismatch"))
                }
            }
        }
    }

    fn solve_item(&mut self) -> Result<(), FznError> {
        self.bump(); // solve
        let annotations = self.annotations()?;
        let goal = if self.eat_keyword("satisfy") {
            FznSolveGoal {
                kind: FznGoalKind::Satisfy,
                objective: None,
                annotations,
            }
        } else {
            let kind = if self.eat_keyword("minimize") {
                FznGoalKind::Minimize
            } else if self.eat_keyword("maximize") {
                FznGoalKind::Maximize
            } else {
                return Err(self.syntax("expected `satisfy`, `minimize` or `maximize`"));
            };
            let atom = self.atom()?;
            let numeric = match &atom {
                FznAtom::Lit(FznLit::Int(_)) | FznAtom::Lit(FznLit::Float(_)) => true,
                FznAtom::Id(id) => matches!(
                    self.symbols.get(id),
                    Some(Symbol::Var(FznVarType::Int)) | Some(Symbol::Var(FznVarType::Float))
                ),
                _ => false,
            };
            if !numeric {
                let kw = if kind == FznGoalKind::Minimize {
                    "minimize"
                } else {
                    "maximize"
                };
                return Err(FznError::BadObjective(kw.to_string()));
            }
            FznSolveGoal {
                kind,
                objective: Some(atom),
                annotations,
            }
        };
        self.expect(Tok::Semi, "`;`")?;
        if !self.model.solve_items.is_empty() && !self.allow_multi {
            return Err(FznError::SecondSolveItem);
        }
        self.model.solve_items.push(goal);
        Ok(())
    }

    fn annotations(&mut self) -> Result<Vec<FznAnnotation>, FznError> {
        let mut anns = Vec::new();
        while *self.peek() == Tok::DoubleColon {
            self.bump();
            let name = self.ident("annotation name")?;
            let args = if *self.peek() == Tok::LParen {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.ann_arg()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`)`")?;
                args
            } else {
                Vec::new()
            };
            anns.push(FznAnnotation { name, args });
        }
        Ok(anns)
    }

    fn ann_arg(&mut self) -> Result<AnnArg, FznError> {
        match self.peek().clone() {
            Tok::Str(s) => {
                self.bump();
                Ok(AnnArg::Str(s))
            }
            Tok::LBracket => {
                self.bump();
                let mut elems = Vec::new();
                if *self.peek() != Tok::RBracket {
                    loop {
                        elems.push(self.ann_arg()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBracket, "`]`")?;
                Ok(AnnArg::Array(elems))
            }
            Tok::Int(lo) => {
                self.bump();
                if *self.peek() == Tok::DotDot {
                    self.bump();
                    match self.bump() {
                        Tok::Int(hi) => Ok(AnnArg::Range(lo, hi)),
                        _ => Err(self.syntax("expected integer upper bound")),
                    }
                } else {
                    Ok(AnnArg::Atom(FznAtom::int(lo)))
                }
            }
            Tok::Float(r) => {
                self.bump();
                Ok(AnnArg::Atom(FznAtom::Lit(FznLit::Float(r))))
            }
            Tok::LBrace => Ok(AnnArg::Atom(FznAtom::Lit(FznLit::Set(self.set_literal()?)))),
            Tok::Ident(s) => {
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if *self.peek() != Tok::RParen {
                        loop {
                            args.push(self.ann_arg()?);
                            if *self.peek() == Tok::Comma {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(AnnArg::Call(s, args))
                } else {
                    // Annotation identifiers are not subject to scoping.
                    Ok(AnnArg::Atom(FznAtom::Id(s)))
                }
            }
            _ => Err(self.syntax("expected an annotation argument")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rat;

    #[test]
    fn one_var_satisfy() {
        let m = parse_fzn("var 1..3: x; solve satisfy;", false).unwrap();
        assert_eq!(m.vars.len(), 1);
        assert_eq!(m.vars[0].ty, FznVarType::Int);
        assert_eq!(m.vars[0].domain, Some(FznDomain::Int(SetVal::Range(1, 3))));
        assert_eq!(m.solve_items[0].kind, FznGoalKind::Satisfy);
    }

    #[test]
    fn bool2int_constraint() {
        let m = parse_fzn(
            "var bool: b; var 0..1: x; constraint bool2int(b, x); solve satisfy;",
            false,
        )
        .unwrap();
        assert_eq!(m.constraints.len(), 1);
        assert_eq!(m.constraints[0].name, "bool2int");
    }

    #[test]
    fn undeclared_objective() {
        let err = parse_fzn("solve minimize y;", false).unwrap_err();
        assert_eq!(err, FznError::UndeclaredIdent("y".to_string()));
    }

    #[test]
    fn unknown_builtin_is_hard_error() {
        let err = parse_fzn(
            "var 1..2: x; constraint int_frobnicate(x); solve satisfy;",
            false,
        )
        .unwrap_err();
        assert!(matches!(err, FznError::UnknownBuiltin { name, .. } if name == "int_frobnicate"));
    }

    #[test]
    fn param_resolution() {
        let m = parse_fzn(
            "int: n = 5; var 1..10: x; constraint int_eq(x, n); solve satisfy;",
            false,
        )
        .unwrap();
        assert_eq!(
            m.constraints[0].args[1],
            FznArg::Atom(FznAtom::int(5))
        );
    }

    #[test]
    fn array_expansion() {
        let m = parse_fzn(
            "var 0..5: x; var 0..5: y; array [1..2] of var int: xs = [x, y]; \
             constraint all_different_int(xs); solve satisfy;",
            false,
        )
        .unwrap();
        assert_eq!(
            m.constraints[0].args[0],
            FznArg::Array(vec![FznAtom::Id("x".into()), FznAtom::Id("y".into())])
        );
    }

    #[test]
    fn second_solve_item_needs_flag() {
        let text = "var 1..3: x; var 1..3: y; solve minimize x; solve maximize y;";
        assert_eq!(parse_fzn(text, false).unwrap_err(), FznError::SecondSolveItem);
        let m = parse_fzn(text, true).unwrap();
        assert_eq!(m.solve_items.len(), 2);
    }

    #[test]
    fn arity_and_type_mismatch() {
        let err = parse_fzn("var 1..2: x; constraint int_eq(x); solve satisfy;", false).unwrap_err();
        assert!(matches!(err, FznError::Arity { .. }));
        let err = parse_fzn(
            "var 1..2: x; constraint int_eq(x, true); solve satisfy;",
            false,
        )
        .unwrap_err();
        assert!(matches!(err, FznError::ArgType { .. }));
    }

    #[test]
    fn duplicate_identifier() {
        let err = parse_fzn("var 1..2: x; var bool: x; solve satisfy;", false).unwrap_err();
        assert_eq!(err, FznError::DuplicateIdent("x".to_string()));
    }

    #[test]
    fn empty_interval_rejected() {
        let err = parse_fzn("var 3..1: x; solve satisfy;", false).unwrap_err();
        assert!(matches!(err, FznError::BadDomain { .. }));
    }

    #[test]
    fn float_literals_exact() {
        let m = parse_fzn("var float: f; constraint float_eq(f, 0.1); solve satisfy;", false)
            .unwrap();
        match &m.constraints[0].args[1] {
            FznArg::Atom(FznAtom::Lit(FznLit::Float(r))) => {
                assert_eq!(*r, Rat::from_i64_fraction(1, 10));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fzn_prefixed_aliases() {
        let m = parse_fzn(
            "var 1..2: x; var 1..2: y; constraint fzn_all_different_int([x, y]); solve satisfy;",
            false,
        )
        .unwrap();
        assert_eq!(m.constraints[0].name, "all_different_int");
    }

    #[test]
    fn annotations_preserved() {
        let m = parse_fzn(
            "var 1..3: x :: output_var; constraint int_eq(x, 1) :: defines_var(x); solve satisfy;",
            false,
        )
        .unwrap();
        assert!(m.vars[0].is_output());
        assert_eq!(m.constraints[0].annotations[0].defines_var(), Some("x"));
    }
}
