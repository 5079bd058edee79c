//! Concrete syntax.
//!
//! ```text
//! program    := item*
//! item       := quant? ("at" path ":")? "def"? IDENT "(" patterns? ")" "=" expr ";"
//! quant      := ("forall" | "pforall") IDENT ("," IDENT)* "."
//! path       := ("/" IDENT ("[" pattern "]")?)+
//! pattern    := "-"? INT | "true" | "false" | "top" | IDENT ("+" INT)?
//! expr       := sum (("=" | "<" | "<=") sum)?
//! sum        := product (("+" | "-") product)*
//! product    := unary ("*" unary)*
//! unary      := "-" unary | atom
//! atom       := INT | "true" | "false" | "top" | IDENT | IDENT "(" args? ")"
//!             | path "." IDENT "(" args? ")" | "(" expr ")"
//! ```
//!
//! `--` starts a comment that runs to the end of the line. Infix operators
//! are sugar for the builtins `eq`, `lt`, `leq`, `add`, `sub` and `mul`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::ast::{
    positive, Clause, Constant, Definition, Expr, Ident, LocationPath, Pattern,
    Program, QuantKind, Quantifier, Segment,
};
use crate::builtins::{is_builtin, Builtin};
use crate::locations::{ClassEntry, ObjectStore};

const KEYWORDS: [&str; 7] = ["def", "forall", "pforall", "at", "top", "true", "false"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Syntax,
    Scope,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{position}: {} error: {message}", match .kind { ErrorKind::Syntax => "syntax", ErrorKind::Scope => "scope" })]
pub struct ParseError {
    pub kind: ErrorKind,
    pub position: Position,
    pub message: String,
}

/// Where a parsed definition ended up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DefLocation {
    /// Index into the flat program.
    Flat(usize),
    /// Index into the definitions of the object at a path.
    Object(LocationPath, usize),
    /// Index into the class entries.
    Class(usize),
}

/// A parsed source file: flat definitions, located definitions and the
/// position of each definition.
#[derive(Clone, Debug, Default)]
pub struct SourceProgram {
    pub program: Program,
    pub store: ObjectStore,
    pub source_map: Vec<(DefLocation, Position)>,
}

impl SourceProgram {
    /// Parseable text for the whole file: flat definitions first, then
    /// located definitions by path, then classes.
    pub fn to_source(&self) -> String {
        format!("{}{}", self.program, self.store.to_source())
    }

    pub fn force_kind(&self, kind: QuantKind, only: Option<&BTreeSet<Ident>>) -> SourceProgram {
        SourceProgram {
            program: self.program.force_kind(kind, only),
            store: self.store.force_kind(kind, only),
            source_map: self.source_map.clone(),
        }
    }

    pub fn position_of(&self, location: &DefLocation) -> Option<Position> {
        self.source_map
            .iter()
            .find(|(l, _)| l == location)
            .map(|(_, p)| *p)
    }
}

impl PartialEq for SourceProgram {
    fn eq(&self, other: &Self) -> bool {
        self.program == other.program && self.store == other.store
    }
}

pub fn parse_program(text: &str) -> Result<SourceProgram, ParseError> {
    let mut parser = Parser::new(text)?;
    let mut out = SourceProgram::default();
    while !parser.at_end() {
        parser.item(&mut out)?;
    }
    Ok(out)
}

/// Parses a single closed expression.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser::new(text)?;
    let expr = parser.expr()?;
    if !parser.at_end() {
        return Err(parser.unexpected("end of input"));
    }
    if let Some((name, pos)) = parser.var_uses.first() {
        return Err(ParseError {
            kind: ErrorKind::Scope,
            position: *pos,
            message: format!("free variable `{name}`"),
        });
    }
    Ok(expr)
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(i) => write!(f, "`{i}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
        }
    }
}

const SYMBOLS: [&str; 15] = [
    "<=", "(", ")", ",", ";", "=", ".", ":", "[", "]", "/", "+", "-", "*", "<",
];

fn lex(text: &str) -> Result<Vec<(Tok, Position)>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut rest = text;
    while let Some(c) = rest.chars().next() {
        let pos = Position { line, column };
        let len = if c == '\n' {
            line += 1;
            column = 1;
            rest = &rest[1..];
            continue;
        } else if c.is_whitespace() {
            c.len_utf8()
        } else if rest.starts_with("--") {
            rest.find('\n').unwrap_or(rest.len())
        } else if c.is_ascii_digit() {
            let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            out.push((Tok::Int(rest[..n].parse().expect("digits")), pos));
            n
        } else if c.is_alphabetic() || c == '_' {
            let n = rest
                .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '\''))
                .unwrap_or(rest.len());
            out.push((Tok::Ident(rest[..n].to_owned()), pos));
            n
        } else if let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            out.push((Tok::Sym(sym), pos));
            sym.len()
        } else {
            return Err(ParseError {
                kind: ErrorKind::Syntax,
                position: pos,
                message: format!("unexpected character `{c}`"),
            });
        };
        column += rest[..len].chars().count();
        rest = &rest[len..];
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, Position)>,
    pos: usize,
    end: Position,
    /// Variable occurrences in the current expression.
    var_uses: Vec<(Ident, Position)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        let tokens = lex(text)?;
        let lines = text.split('\n').count();
        let last = text.rsplit('\n').next().unwrap_or("");
        Ok(Parser {
            tokens,
            pos: 0,
            end: Position {
                line: lines,
                column: last.chars().count() + 1,
            },
            var_uses: Vec::new(),
        })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, offset: usize) -> Option<&Tok> {
        self.tokens.get(self.pos + offset).map(|(t, _)| t)
    }

    fn position(&self) -> Position {
        self.tokens.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        tok
    }

    fn is_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym)
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn eat_sym(&mut self, sym: &str) -> bool {
        let hit = self.is_sym(sym);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        let hit = self.is_kw(kw);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".into(),
        };
        syntax(self.position(), format!("expected {expected}, found {found}"))
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), ParseError> {
        if self.eat_sym(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(Ident, Position), ParseError> {
        let pos = self.position();
        match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let s = s.clone();
                self.pos += 1;
                Ok((s, pos))
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn item(&mut self, out: &mut SourceProgram) -> Result<(), ParseError> {
        let start = self.position();
        self.var_uses.clear();

        let quant = if self.is_kw("forall") || self.is_kw("pforall") {
            let parallel = self.is_kw("pforall");
            self.pos += 1;
            let mut vars: Vec<(Ident, Position)> = vec![self.ident("a variable")?];
            while self.eat_sym(",") {
                vars.push(self.ident("a variable")?);
            }
            self.expect_sym(".")?;
            Some((parallel, vars))
        } else {
            None
        };

        let path = if self.eat_kw("at") {
            let path = self.path()?;
            self.expect_sym(":")?;
            Some(path)
        } else {
            None
        };

        self.eat_kw("def");
        let (head, head_pos) = self.ident("a function name")?;
        if is_builtin(&head) {
            return Err(scope(head_pos, format!("`{head}` is a builtin and cannot be defined")));
        }
        self.expect_sym("(")?;
        let mut params = Vec::new();
        if !self.is_sym(")") {
            params.push(self.pattern()?);
            while self.eat_sym(",") {
                params.push(self.pattern()?);
            }
        }
        self.expect_sym(")")?;
        self.expect_sym("=")?;
        self.var_uses.clear();
        let body = self.expr()?;
        self.expect_sym(";")?;

        // Scope checks: linear heads, quantified variables exactly those of
        // the head and path, closed bodies.
        let mut bound: Vec<(Ident, Position)> = Vec::new();
        let mut check_linear = |vars: Vec<(Ident, Position)>, what: &str| -> Result<(), ParseError> {
            let mut seen = BTreeSet::new();
            for (v, p) in vars {
                if !seen.insert(v.clone()) {
                    return Err(scope(p, format!("variable `{v}` occurs twice in the {what}")));
                }
                if !bound.iter().any(|(b, _)| *b == v) {
                    bound.push((v, p));
                }
            }
            Ok(())
        };
        let path_vars: Vec<(Ident, Position)> = path
            .as_ref()
            .map(|(p, positions)| {
                p.segments
                    .iter()
                    .zip(positions)
                    .filter_map(|(s, pos)| s.index.as_ref()?.var_name().map(|v| (v.to_owned(), *pos)))
                    .collect()
            })
            .unwrap_or_default();
        check_linear(path_vars, "path")?;
        let head_vars: Vec<(Ident, Position)> = params
            .iter()
            .filter_map(|(p, pos): &(Pattern, Position)| p.var_name().map(|v| (v.to_owned(), *pos)))
            .collect();
        check_linear(head_vars, "head")?;

        let quantified: Vec<(Ident, Position)> = quant.as_ref().map(|(_, v)| v.clone()).unwrap_or_default();
        let mut seen = BTreeSet::new();
        for (v, p) in &quantified {
            if !seen.insert(v) {
                return Err(scope(*p, format!("variable `{v}` is quantified twice")));
            }
            if !bound.iter().any(|(b, _)| b == v) {
                return Err(scope(*p, format!("quantified variable `{v}` does not occur in the head")));
            }
        }
        if let Some((v, p)) = bound.iter().find(|(b, _)| !seen.contains(b)) {
            return Err(scope(*p, format!("variable `{v}` is not quantified")));
        }
        if let Some((v, p)) = self.var_uses.iter().find(|(v, _)| !seen.contains(v)) {
            return Err(scope(*p, format!("unbound variable `{v}`")));
        }

        let names: Vec<Ident> = quantified.into_iter().map(|(v, _)| v).collect();
        let quantifier = match quant {
            None => Quantifier::Ground,
            Some((true, _)) => Quantifier::Parallel(names),
            Some((false, _)) => Quantifier::Blind(names),
        };
        let clause = Clause::new(head, params.into_iter().map(|(p, _)| p).collect(), body);

        let location = match path {
            None => {
                out.program.push(Definition::new(quantifier, clause));
                DefLocation::Flat(out.program.len() - 1)
            }
            Some((path, _)) if path.is_concrete() => {
                out.store.add_definition(&path, Definition::new(quantifier, clause));
                let index = out.store.resolve(&path).map_or(0, |n| n.defs.len() - 1);
                DefLocation::Object(path, index)
            }
            Some((path, _)) => {
                out.store.add_class(ClassEntry {
                    path,
                    quantifier,
                    clause,
                });
                DefLocation::Class(out.store.classes().len() - 1)
            }
        };
        out.source_map.push((location, start));
        Ok(())
    }

    fn literal(&mut self) -> Option<Constant> {
        let c = match self.peek()? {
            Tok::Int(i) => Constant::Int(i.clone()),
            Tok::Ident(s) if s == "true" => Constant::Bool(true),
            Tok::Ident(s) if s == "false" => Constant::Bool(false),
            Tok::Ident(s) if s == "top" => Constant::Top,
            _ => return None,
        };
        self.pos += 1;
        Some(c)
    }

    fn negative_literal(&mut self) -> Option<Constant> {
        if self.is_sym("-") {
            if let Some(Tok::Int(i)) = self.peek_at(1) {
                let c = Constant::Int(-i.clone());
                self.pos += 2;
                return Some(c);
            }
        }
        None
    }

    fn pattern(&mut self) -> Result<(Pattern, Position), ParseError> {
        let pos = self.position();
        if let Some(c) = self.negative_literal().or_else(|| self.literal()) {
            return Ok((Pattern::Lit(c), pos));
        }
        let (name, pos) = self.ident("a pattern")?;
        if self.eat_sym("+") {
            let k_pos = self.position();
            match self.bump() {
                Some(Tok::Int(k)) if positive(&k) => return Ok((Pattern::Succ(name, k), pos)),
                Some(Tok::Int(_)) => return Err(syntax(k_pos, "successor offset must be at least 1")),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("an integer offset"));
                }
            }
        }
        Ok((Pattern::Var(name), pos))
    }

    /// A path with the position of each segment's index.
    fn path(&mut self) -> Result<(LocationPath, Vec<Position>), ParseError> {
        let mut segments = Vec::new();
        let mut positions = Vec::new();
        while self.eat_sym("/") {
            let (name, pos) = self.ident("an object name")?;
            let mut index_pos = pos;
            let index = if self.eat_sym("[") {
                let (p, pos) = self.pattern()?;
                index_pos = pos;
                self.expect_sym("]")?;
                Some(p)
            } else {
                None
            };
            segments.push(Segment::new(name, index));
            positions.push(index_pos);
        }
        if segments.is_empty() {
            return Err(self.unexpected("`/`"));
        }
        Ok((LocationPath::new(segments), positions))
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.sum()?;
        for op in [Builtin::Leq, Builtin::Lt, Builtin::Eq] {
            if self.eat_sym(op.symbol().expect("infix")) {
                let rhs = self.sum()?;
                if [Builtin::Leq, Builtin::Lt, Builtin::Eq]
                    .iter()
                    .any(|o| self.is_sym(o.symbol().expect("infix")))
                {
                    return Err(syntax(self.position(), "comparisons do not chain; add parentheses"));
                }
                return Ok(Expr::call(op.name(), vec![lhs, rhs]));
            }
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            let op = if self.eat_sym("+") {
                Builtin::Add
            } else if self.eat_sym("-") {
                Builtin::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.product()?;
            lhs = Expr::call(op.name(), vec![lhs, rhs]);
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.eat_sym("*") {
            let rhs = self.unary()?;
            lhs = Expr::call(Builtin::Mul.name(), vec![lhs, rhs]);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(c) = self.negative_literal() {
            return Ok(Expr::Const(c));
        }
        if self.eat_sym("-") {
            let operand = self.unary()?;
            return Ok(Expr::call(Builtin::Sub.name(), vec![Expr::int(0), operand]));
        }
        self.atom()
    }

    fn args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect_sym("(")?;
        let mut args = Vec::new();
        if !self.is_sym(")") {
            args.push(self.expr()?);
            while self.eat_sym(",") {
                args.push(self.expr()?);
            }
        }
        self.expect_sym(")")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        if let Some(c) = self.literal() {
            return Ok(Expr::constant(c));
        }
        if self.eat_sym("(") {
            let e = self.expr()?;
            self.expect_sym(")")?;
            return Ok(e);
        }
        if self.is_sym("/") {
            let (path, positions) = self.path()?;
            for (seg, pos) in path.segments.iter().zip(positions) {
                if let Some(v) = seg.index.as_ref().and_then(Pattern::var_name) {
                    self.var_uses.push((v.to_owned(), pos));
                }
            }
            self.expect_sym(".")?;
            let (head, _) = self.ident("a method name")?;
            let args = self.args()?;
            return Ok(Expr::located(path, head, args));
        }
        let (name, pos) = self.ident("an expression")?;
        if self.is_sym("(") {
            let args = self.args()?;
            if let Some(op) = Builtin::from_name(&name) {
                if op.arity() != args.len() {
                    return Err(syntax(
                        pos,
                        format!("`{name}` takes {} arguments, got {}", op.arity(), args.len()),
                    ));
                }
            }
            return Ok(Expr::call(name, args));
        }
        self.var_uses.push((name.clone(), pos));
        Ok(Expr::Var(name))
    }
}

fn syntax(position: Position, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ErrorKind::Syntax,
        position,
        message: message.into(),
    }
}

fn scope(position: Position, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ErrorKind::Scope,
        position,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_def(text: &str) -> Definition {
        let src = parse_program(text).unwrap();
        assert_eq!(src.program.len(), 1);
        Definition::clone(src.program.get(0).unwrap())
    }

    #[test]
    fn ground_definition() {
        let d = one_def("def fib(0) = 1;");
        assert_eq!(d.kind(), QuantKind::Ground);
        assert_eq!(d.to_string(), "fib(0) = 1;");
    }

    #[test]
    fn parallel_definition() {
        let d = one_def("pforall x. def fib(x+2) = fib(x+1) + fib(x);");
        assert_eq!(d.quantifier, Quantifier::Parallel(vec!["x".into()]));
        assert_eq!(d.to_string(), "pforall x. fib(x+2) = fib(x+1) + fib(x);");
        // `def` is optional, so printed programs read back.
        assert_eq!(one_def(&d.to_string()), d);
    }

    #[test]
    fn unbound_body_variable() {
        let err = parse_program("def f(x) = y;").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Scope);
        // `x` is reported first: it is not quantified.
        assert_eq!(err.position, Position { line: 1, column: 7 });

        let err = parse_program("forall x. def f(x) = y;").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Scope);
        assert_eq!(err.position, Position { line: 1, column: 22 });
        assert!(err.message.contains("`y`"));
    }

    #[test]
    fn scope_errors() {
        for bad in [
            "forall x. def f(x, x) = x;",
            "forall x, y. def f(x) = x;",
            "forall x, x. def f(x) = x;",
            "def add(1) = 1;",
            "at /a[x]: def f(1) = 1;",
        ] {
            let err = parse_program(bad).unwrap_err();
            assert_eq!(err.kind, ErrorKind::Scope, "{bad}: {err}");
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_program("def f(1) = 1;\ndef g(2) = ;").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        assert_eq!(err.position, Position { line: 2, column: 12 });
        let err = parse_program("forall x. def f(x+0) = x;").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        let err = parse_program("def f(1) = add(1);").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        let err = parse_program("def f(1) = 1 < 2 < 3;").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Syntax);
        let err = parse_program("def f(1) = 1 # 2;").unwrap_err();
        assert_eq!(err.position, Position { line: 1, column: 14 });
    }

    #[test]
    fn expressions() {
        assert_eq!(parse_expr("fib(3)").unwrap(), Expr::call("fib", vec![Expr::int(3)]));
        let e = parse_expr("/fib.fib(4)").unwrap();
        assert_eq!(e.to_string(), "/fib.fib(4)");
        assert!(matches!(e, Expr::Located { ref head, .. } if head == "fib"));
        assert_eq!(
            parse_expr("1 + 2 * 3").unwrap(),
            Expr::call("add", vec![Expr::int(1), Expr::call("mul", vec![Expr::int(2), Expr::int(3)])])
        );
        assert_eq!(parse_expr("-5").unwrap(), Expr::int(-5));
        assert_eq!(parse_expr("top").unwrap(), Expr::Top);
        assert_eq!(parse_expr("f()").unwrap(), Expr::call("f", vec![]));
        assert_eq!(parse_expr("1 - 2 - 3").unwrap().to_string(), "1-2 - 3");
        let err = parse_expr("f(x)").unwrap_err();
        assert_eq!(err.kind, ErrorKind::Scope);
        assert!(parse_expr("f(1) g").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let src = parse_program("-- the base\ndef f(0) = 1; -- trailing\n").unwrap();
        assert_eq!(src.program.len(), 1);
        assert_eq!(src.source_map[0].1, Position { line: 2, column: 1 });
    }

    #[test]
    fn located_and_class_definitions() {
        let src = parse_program(
            "at /a[1]: def fib(1) = 1;\n\
             at /a[2]: def fib(2) = 1;\n\
             pforall x. at /a[x+2]: def fib(x+2) = /a[x+1].fib(x+1) + /a[x].fib(x);\n\
             forall n. at /fib: def fib(n) = /a[n].fib(n);\n",
        )
        .unwrap();
        assert!(src.program.is_empty());
        assert_eq!(src.store.classes().len(), 1);
        assert_eq!(src.store.paths().len(), 3);
        assert_eq!(
            src.store.classes()[0].clause.to_string(),
            "fib(x+2) = /a[x+1].fib(x+1) + /a[x].fib(x);"
        );
        assert_eq!(src.position_of(&DefLocation::Class(0)), Some(Position { line: 3, column: 1 }));
        let again = parse_program(&src.to_source()).unwrap();
        assert_eq!(again, src);
    }

    #[test]
    fn negative_pattern_literals_read_back() {
        let d = one_def("def f(-1) = 0 - 1;");
        assert_eq!(d.to_string(), "f(-1) = 0-1;");
        assert_eq!(one_def(&d.to_string()), d);
    }
}
