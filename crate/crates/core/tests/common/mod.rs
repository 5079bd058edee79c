//! Shared test support: closed-form oracles and a small reference
//! interpreter that is written independently of the machine in `src/eval.rs`.
//!
//! The reference evaluates bodies under an environment instead of by
//! substitution and recurses on the host stack, so it is only used on small
//! inputs. It supports two ways of combining the programs produced while
//! evaluating call arguments: threading one program through them in order,
//! or evaluating every argument against the same incoming program and
//! concatenating the results.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use puq::{Constant, Expr, Pattern, Program, QuantKind, SourceProgram};

pub fn program_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs").join(name)
}

pub fn load(name: &str) -> SourceProgram {
    let text = std::fs::read_to_string(program_path(name)).expect("read program");
    puq::parse_program(&text).expect("parse program")
}

pub fn int(n: i64) -> Constant {
    Constant::int(n)
}

/// One program per grammar feature.
pub const CORPUS: &[&str] = &[
    // ground definitions only
    "def answer() = 42; def pair(1, 2) = 3;",
    // classical recursion with several variables
    "forall x, y. def add2(x, y) = x + y; forall n. def twice(n) = add2(n, n);",
    // memoizing recursion with successor patterns
    "def fib(0) = 1; def fib(1) = 1; pforall x. def fib(x+2) = fib(x+1) + fib(x);",
    // booleans, top and every builtin
    "def t() = top; def yes() = true; forall a, b. def ops(a, b) = \
     ite(a < b, min(a, b) * 2, max(a, b) - div(a, 3)) + mod(b, 5);",
    "forall a, b. def cmp(a, b) = (a <= b) = (b = a); def flag(true) = false;",
    // precedence, associativity, unary minus and negative literals
    "forall a, b, c. def mix(a, b, c) = a - (b - c) * -2 + (a + b) * c - -3; def neg(-4) = -1;",
    // located definitions at concrete paths
    "at /a[1]: def fib(1) = 1; at /a[2]: def fib(2) = 1; forall n. at /fib: def fib(n) = /a[n].fib(n);",
    // a class object
    "pforall x. at /a[x+2]: def fib(x+2) = /a[x+1].fib(x+1) + /a[x].fib(x);",
    // nested objects and a nested class
    "at /a/b[1]: def g(1) = 1; pforall x. at /a/b[x+1]: def g(x+1) = 2 * /a/b[x].g(x);",
    // a class with a plain variable index and a blind quantifier
    "forall k. at /sq[k]: def area(k) = k * k; at /scene: def total() = /sq[3].area(3) + /sq[4].area(4);",
    // comments, whitespace and the optional `def` keyword
    "-- leading comment\nfib(0) = 1; -- trailing\n\n  pforall x . fib ( x + 1 ) = fib(x) * 2 ;",
];

/// The inline corpus followed by every program shipped in `programs/`.
pub fn corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = CORPUS
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("corpus[{i}]"), s.to_string()))
        .collect();
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("programs");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in files {
        out.push((f.display().to_string(), std::fs::read_to_string(&f).unwrap()));
    }
    out
}

// ---------------------------------------------------------------------------
// Oracles

/// Fibonacci with F(0) = F(1) = 1, computed iteratively.
pub fn fib(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(1));
    for _ in 0..n {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

/// Tribonacci with T(0) = T(1) = 0 and T(2) = 1, computed iteratively.
pub fn trib(n: u64) -> BigInt {
    let mut t = [BigInt::from(0), BigInt::from(0), BigInt::from(1)];
    for _ in 0..n {
        let next = &t[0] + &t[1] + &t[2];
        t = [t[1].clone(), t[2].clone(), next];
    }
    t[0].clone()
}

/// Binomial coefficient by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Monotone lattice paths from (0, 0) to (r, c).
pub fn grid_paths(r: u64, c: u64) -> BigInt {
    binomial(r + c, r)
}

/// Number of fib clause evaluations made by classical recursion, in closed
/// form: every call evaluates exactly one clause and the call tree of
/// fib(n) has 2·F(n) − 1 nodes.
pub fn bq_fib_clause_evals(n: u64) -> BigInt {
    2 * fib(n) - 1
}

/// The same count by its own recurrence, used to cross-check the closed
/// form.
pub fn bq_fib_calls_recurrence(n: u64) -> u64 {
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..n {
        let next = 1 + a + b;
        a = std::mem::replace(&mut b, next);
    }
    a
}

// ---------------------------------------------------------------------------
// Reference interpreter

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combine {
    /// Arguments are evaluated in order, each one seeing the program left by
    /// the previous one.
    Threaded,
    /// Every argument is evaluated against the same incoming program and the
    /// resulting programs are concatenated.
    Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefDef {
    pub kind: QuantKind,
    pub head: String,
    pub params: Vec<Pattern>,
    pub body: Expr,
}

impl RefDef {
    pub fn is_ground_entry(&self) -> bool {
        self.kind == QuantKind::Ground && self.params.iter().all(|p| matches!(p, Pattern::Lit(_)))
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum RefError {
    NoMatch(String),
    OutOfFuel,
    Builtin(String),
}

#[derive(Default, Debug)]
pub struct RefStats {
    pub puq_evals: u64,
    pub bq_evals: u64,
    pub ground_evals: u64,
}

pub struct Reference {
    pub combine: Combine,
    /// Treat every quantified definition as classical recursion.
    pub no_memo: bool,
    pub fuel: u64,
    pub stats: RefStats,
}

pub fn ref_program(program: &Program) -> Vec<RefDef> {
    program
        .iter()
        .map(|d| RefDef {
            kind: d.kind(),
            head: d.clause.head.clone(),
            params: d.clause.params.clone(),
            body: d.clause.body.clone(),
        })
        .collect()
}

impl Reference {
    pub fn new(combine: Combine) -> Self {
        Reference {
            combine,
            no_memo: false,
            fuel: 5_000_000,
            stats: RefStats::default(),
        }
    }

    pub fn no_memo() -> Self {
        Reference {
            no_memo: true,
            ..Reference::new(Combine::Threaded)
        }
    }

    /// Evaluates a closed expression, returning its value and the program
    /// afterwards.
    pub fn run(&mut self, program: Vec<RefDef>, expr: &Expr) -> Result<(Constant, Vec<RefDef>), RefError> {
        self.eval(program, expr, &HashMap::new())
    }

    fn tick(&mut self) -> Result<(), RefError> {
        if self.fuel == 0 {
            return Err(RefError::OutOfFuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(
        &mut self,
        program: Vec<RefDef>,
        expr: &Expr,
        env: &HashMap<String, Constant>,
    ) -> Result<(Constant, Vec<RefDef>), RefError> {
        self.tick()?;
        match expr {
            Expr::Const(c) => Ok((c.clone(), program)),
            Expr::Top => Ok((Constant::Top, program)),
            Expr::Var(x) => Ok((env.get(x).cloned().expect("bound variable"), program)),
            Expr::Located { .. } => panic!("the reference interpreter is flat only"),
            Expr::Call { head, args } => {
                let (values, program) = self.eval_args(program, args, env)?;
                match reference_builtin(head, &values) {
                    Some(result) => Ok((result?, program)),
                    None => self.call(program, head, values),
                }
            }
        }
    }

    fn eval_args(
        &mut self,
        program: Vec<RefDef>,
        args: &[Expr],
        env: &HashMap<String, Constant>,
    ) -> Result<(Vec<Constant>, Vec<RefDef>), RefError> {
        let mut values = Vec::new();
        match self.combine {
            Combine::Threaded => {
                let mut program = program;
                for arg in args {
                    let (v, next) = self.eval(program, arg, env)?;
                    values.push(v);
                    program = next;
                }
                Ok((values, program))
            }
            Combine::Literal => {
                if args.is_empty() {
                    return Ok((values, program));
                }
                let mut combined = Vec::new();
                for arg in args {
                    let (v, next) = self.eval(program.clone(), arg, env)?;
                    values.push(v);
                    combined.extend(next);
                }
                Ok((values, combined))
            }
        }
    }

    fn call(&mut self, program: Vec<RefDef>, head: &str, args: Vec<Constant>) -> Result<(Constant, Vec<RefDef>), RefError> {
        let Some((def, env)) = program.iter().find_map(|d| {
            if d.head != head {
                return None;
            }
            reference_match(&d.params, &args).map(|env| (d.clone(), env))
        }) else {
            return Err(RefError::NoMatch(format!("{head}({args:?})")));
        };
        let kind = if self.no_memo && def.kind == QuantKind::Parallel { QuantKind::Blind } else { def.kind };
        match kind {
            QuantKind::Ground => self.stats.ground_evals += 1,
            QuantKind::Blind => self.stats.bq_evals += 1,
            QuantKind::Parallel => self.stats.puq_evals += 1,
        }
        let (value, mut program) = self.eval(program, &def.body, &env)?;
        if kind == QuantKind::Parallel {
            program.insert(
                0,
                RefDef {
                    kind: QuantKind::Ground,
                    head: head.to_owned(),
                    params: args.into_iter().map(Pattern::Lit).collect(),
                    body: Expr::constant(value.clone()),
                },
            );
        }
        Ok((value, program))
    }
}

fn reference_match(params: &[Pattern], args: &[Constant]) -> Option<HashMap<String, Constant>> {
    if params.len() != args.len() {
        return None;
    }
    let mut env = HashMap::new();
    for (p, a) in params.iter().zip(args) {
        match p {
            Pattern::Lit(c) => {
                if c != a {
                    return None;
                }
            }
            Pattern::Var(x) => {
                env.insert(x.clone(), a.clone());
            }
            Pattern::Succ(x, k) => {
                let Constant::Int(n) = a else { return None };
                if n < k {
                    return None;
                }
                env.insert(x.clone(), Constant::Int(n - k));
            }
        }
    }
    Some(env)
}

fn reference_builtin(head: &str, args: &[Constant]) -> Option<Result<Constant, RefError>> {
    let ints = || -> Result<(BigInt, BigInt), RefError> {
        match args {
            [Constant::Int(a), Constant::Int(b)] => Ok((a.clone(), b.clone())),
            _ => Err(RefError::Builtin(format!("{head} expects two integers"))),
        }
    };
    let result = match head {
        "add" => ints().map(|(a, b)| Constant::Int(a + b)),
        "sub" => ints().map(|(a, b)| Constant::Int(a - b)),
        "mul" => ints().map(|(a, b)| Constant::Int(a * b)),
        "div" => ints().and_then(|(a, b)| {
            if b == BigInt::from(0) {
                Err(RefError::Builtin("division by zero".into()))
            } else {
                Ok(Constant::Int(a / b))
            }
        }),
        "mod" => ints().and_then(|(a, b)| {
            if b == BigInt::from(0) {
                Err(RefError::Builtin("division by zero".into()))
            } else {
                Ok(Constant::Int(a % b))
            }
        }),
        "min" => ints().map(|(a, b)| Constant::Int(a.min(b))),
        "max" => ints().map(|(a, b)| Constant::Int(a.max(b))),
        "lt" => ints().map(|(a, b)| Constant::Bool(a < b)),
        "leq" => ints().map(|(a, b)| Constant::Bool(a <= b)),
        "eq" => Ok(Constant::Bool(args[0] == args[1])),
        "ite" => match &args[0] {
            Constant::Bool(true) => Ok(args[1].clone()),
            Constant::Bool(false) => Ok(args[2].clone()),
            _ => Err(RefError::Builtin("ite expects a boolean".into())),
        },
        _ => return None,
    };
    Some(result)
}
