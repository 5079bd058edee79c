//! Abstract syntax: constants, expressions, parameter patterns, quantified
//! definitions, programs and location paths.
//!
//! Every type here is an immutable value. A [`Program`] is an ordered
//! sequence of shared definitions; evaluation only ever prepends to it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::builtins::Builtin;

pub type Ident = String;

/// Variable binding produced by pattern matching.
pub type Binding = BTreeMap<Ident, Constant>;

/// A ground value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constant {
    Int(BigInt),
    Bool(bool),
    /// The always-successful value `top`.
    Top,
}

impl Constant {
    pub fn int(value: impl Into<BigInt>) -> Self {
        Constant::Int(value.into())
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Constant::Int(i) => Some(i),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Constant::Int(_) => "integer",
            Constant::Bool(_) => "boolean",
            Constant::Top => "top",
        }
    }
}

impl From<i64> for Constant {
    fn from(value: i64) -> Self {
        Constant::Int(value.into())
    }
}

impl From<bool> for Constant {
    fn from(value: bool) -> Self {
        Constant::Bool(value)
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant::Int(i) => write!(f, "{i}"),
            Constant::Bool(b) => write!(f, "{b}"),
            Constant::Top => f.write_str("top"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Constant),
    Var(Ident),
    Call {
        head: Ident,
        args: Vec<Expr>,
    },
    /// A method call addressed to an object, `/a[3].fib(3)`.
    Located {
        path: LocationPath,
        head: Ident,
        args: Vec<Expr>,
    },
    Top,
}

impl Expr {
    /// Lifts a constant into an expression; `top` becomes [`Expr::Top`] so
    /// that there is a single representation of it in the tree.
    pub fn constant(c: Constant) -> Self {
        match c {
            Constant::Top => Expr::Top,
            c => Expr::Const(c),
        }
    }

    pub fn int(value: impl Into<BigInt>) -> Self {
        Expr::Const(Constant::Int(value.into()))
    }

    pub fn var(name: impl Into<Ident>) -> Self {
        Expr::Var(name.into())
    }

    pub fn call(head: impl Into<Ident>, args: Vec<Expr>) -> Self {
        Expr::Call {
            head: head.into(),
            args,
        }
    }

    pub fn located(path: LocationPath, head: impl Into<Ident>, args: Vec<Expr>) -> Self {
        Expr::Located {
            path,
            head: head.into(),
            args,
        }
    }

    /// The constant this expression denotes, if it is already a value.
    pub fn as_constant(&self) -> Option<Constant> {
        match self {
            Expr::Const(c) => Some(c.clone()),
            Expr::Top => Some(Constant::Top),
            _ => None,
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Expr::Const(_) | Expr::Var(_) | Expr::Top)
    }

    pub fn free_vars(&self) -> BTreeSet<Ident> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Ident>) {
        match self {
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Call { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
            Expr::Located { path, args, .. } => {
                out.extend(path.vars());
                args.iter().for_each(|a| a.collect_vars(out));
            }
            Expr::Const(_) | Expr::Top => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces every bound variable by its constant. Unbound variables are
    /// left in place.
    pub fn substitute(&self, binding: &Binding) -> Result<Expr, SubstError> {
        Ok(match self {
            Expr::Var(x) => match binding.get(x) {
                Some(c) => Expr::constant(c.clone()),
                None => Expr::Var(x.clone()),
            },
            Expr::Call { head, args } => Expr::Call {
                head: head.clone(),
                args: subst_all(args, binding)?,
            },
            Expr::Located { path, head, args } => Expr::Located {
                path: path.substitute(binding)?,
                head: head.clone(),
                args: subst_all(args, binding)?,
            },
            Expr::Const(_) | Expr::Top => self.clone(),
        })
    }
}

fn subst_all(args: &[Expr], binding: &Binding) -> Result<Vec<Expr>, SubstError> {
    args.iter().map(|a| a.substitute(binding)).collect()
}

/// A parameter pattern in a clause head: a literal, a variable, or a
/// successor pattern `x+k` over the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Pattern {
    Lit(Constant),
    Var(Ident),
    /// `x+k` with `k >= 1`; matches integers `c >= k` binding `x` to `c - k`.
    Succ(Ident, BigInt),
}

impl Pattern {
    pub fn var_name(&self) -> Option<&str> {
        match self {
            Pattern::Var(x) | Pattern::Succ(x, _) => Some(x),
            Pattern::Lit(_) => None,
        }
    }

    pub fn as_constant(&self) -> Option<&Constant> {
        match self {
            Pattern::Lit(c) => Some(c),
            _ => None,
        }
    }

    pub fn substitute(&self, binding: &Binding) -> Result<Pattern, SubstError> {
        match self {
            Pattern::Lit(_) => Ok(self.clone()),
            Pattern::Var(x) => Ok(binding
                .get(x)
                .map_or_else(|| self.clone(), |c| Pattern::Lit(c.clone()))),
            Pattern::Succ(x, k) => match binding.get(x) {
                None => Ok(self.clone()),
                Some(Constant::Int(c)) => Ok(Pattern::Lit(Constant::Int(c + k))),
                Some(other) => Err(SubstError::NotAnInteger {
                    var: x.clone(),
                    value: other.clone(),
                }),
            },
        }
    }
}

/// Matches one pattern against one constant.
///
/// A successor pattern `x+k` only matches integers `c >= k`, so base
/// clauses stay reachable and negative arguments fail to match instead of
/// recursing forever.
pub fn match_pattern(pattern: &Pattern, value: &Constant) -> Option<Binding> {
    match pattern {
        Pattern::Lit(c) => (c == value).then(Binding::new),
        Pattern::Var(x) => Some(Binding::from([(x.clone(), value.clone())])),
        Pattern::Succ(x, k) => match value {
            Constant::Int(c) if c >= k => {
                Some(Binding::from([(x.clone(), Constant::Int(c - k))]))
            }
            _ => None,
        },
    }
}

/// Matches a whole parameter list. Patterns are linear, so the partial
/// bindings never overlap.
pub fn match_params(params: &[Pattern], args: &[Constant]) -> Option<Binding> {
    if params.len() != args.len() {
        return None;
    }
    let mut binding = Binding::new();
    for (p, c) in params.iter().zip(args) {
        match (p, c) {
            (Pattern::Lit(l), c) if l == c => {}
            (Pattern::Lit(_), _) => return None,
            (Pattern::Var(x), c) => {
                binding.insert(x.clone(), c.clone());
            }
            (Pattern::Succ(x, k), Constant::Int(c)) if c >= k => {
                binding.insert(x.clone(), Constant::Int(c - k));
            }
            (Pattern::Succ(..), _) => return None,
        }
    }
    Some(binding)
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("variable `{0}` is unbound after substitution")]
    Unbound(Ident),
    #[error("successor pattern on `{var}` applied to non-integer {value}")]
    NotAnInteger { var: Ident, value: Constant },
}

/// `head(params) = body`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub head: Ident,
    pub params: Vec<Pattern>,
    pub body: Expr,
}

impl Clause {
    pub fn new(head: impl Into<Ident>, params: Vec<Pattern>, body: Expr) -> Self {
        Clause {
            head: head.into(),
            params,
            body,
        }
    }

    /// Pattern variables of the head, in parameter order.
    pub fn pattern_vars(&self) -> Vec<Ident> {
        self.params
            .iter()
            .filter_map(|p| p.var_name().map(str::to_owned))
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        self.params.iter().all(|p| matches!(p, Pattern::Lit(_))) && self.body.is_closed()
    }

    /// The constant arguments of a ground head.
    pub fn ground_args(&self) -> Option<Vec<Constant>> {
        self.params.iter().map(|p| p.as_constant().cloned()).collect()
    }

    /// Replaces the bound variables, leaving any others in place.
    pub fn substitute_partial(&self, binding: &Binding) -> Result<Clause, SubstError> {
        Ok(Clause {
            head: self.head.clone(),
            params: self
                .params
                .iter()
                .map(|p| p.substitute(binding))
                .collect::<Result<_, _>>()?,
            body: self.body.substitute(binding)?,
        })
    }
}

/// Instantiates a clause: the result must be ground.
pub fn substitute(clause: &Clause, binding: &Binding) -> Result<Clause, SubstError> {
    let out = clause.substitute_partial(binding)?;
    let leftover = out
        .pattern_vars()
        .into_iter()
        .chain(out.body.free_vars())
        .next();
    match leftover {
        Some(x) => Err(SubstError::Unbound(x)),
        None => Ok(out),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QuantKind {
    Ground,
    /// Classical `forall`: instances are created, used and discarded.
    Blind,
    /// `pforall`: every computed instance is kept in front of the program.
    Parallel,
}

impl fmt::Display for QuantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuantKind::Ground => "ground",
            QuantKind::Blind => "bq",
            QuantKind::Parallel => "puq",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Ground,
    Blind(Vec<Ident>),
    Parallel(Vec<Ident>),
}

impl Quantifier {
    pub fn kind(&self) -> QuantKind {
        match self {
            Quantifier::Ground => QuantKind::Ground,
            Quantifier::Blind(_) => QuantKind::Blind,
            Quantifier::Parallel(_) => QuantKind::Parallel,
        }
    }

    pub fn vars(&self) -> &[Ident] {
        match self {
            Quantifier::Ground => &[],
            Quantifier::Blind(v) | Quantifier::Parallel(v) => v,
        }
    }

    /// Same variables under a different quantifier kind. Ground stays ground.
    pub fn with_kind(&self, kind: QuantKind) -> Quantifier {
        match (self, kind) {
            (Quantifier::Ground, _) => Quantifier::Ground,
            (_, QuantKind::Ground) => self.clone(),
            (q, QuantKind::Blind) => Quantifier::Blind(q.vars().to_vec()),
            (q, QuantKind::Parallel) => Quantifier::Parallel(q.vars().to_vec()),
        }
    }

    fn restricted_to(&self, keep: &BTreeSet<Ident>) -> Quantifier {
        let vars: Vec<Ident> = self.vars().iter().filter(|v| keep.contains(*v)).cloned().collect();
        match (self, vars.is_empty()) {
            (_, true) | (Quantifier::Ground, _) => Quantifier::Ground,
            (Quantifier::Blind(_), false) => Quantifier::Blind(vars),
            (Quantifier::Parallel(_), false) => Quantifier::Parallel(vars),
        }
    }
}

/// Where a definition came from. Not part of the surface syntax, so it is
/// ignored by equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Origin {
    #[default]
    Source,
    /// Added by a completed `pforall` instance.
    Memo,
    /// Produced when a class object was instantiated.
    ClassInstance { parallel: bool },
}

#[derive(Clone, Debug, Eq)]
pub struct Definition {
    pub quantifier: Quantifier,
    pub clause: Clause,
    pub origin: Origin,
}

impl PartialEq for Definition {
    fn eq(&self, other: &Self) -> bool {
        self.quantifier == other.quantifier && self.clause == other.clause
    }
}

impl Definition {
    pub fn new(quantifier: Quantifier, clause: Clause) -> Self {
        Definition {
            quantifier,
            clause,
            origin: Origin::Source,
        }
    }

    pub fn ground(clause: Clause) -> Self {
        Definition::new(Quantifier::Ground, clause)
    }

    /// The ground entry `head(args) = value` recorded after a `pforall`
    /// instance finishes.
    pub fn memo(head: &str, args: &[Constant], value: Constant) -> Self {
        Definition {
            quantifier: Quantifier::Ground,
            clause: Clause::new(
                head,
                args.iter().cloned().map(Pattern::Lit).collect(),
                Expr::constant(value),
            ),
            origin: Origin::Memo,
        }
    }

    pub fn kind(&self) -> QuantKind {
        self.quantifier.kind()
    }

    pub fn is_memo(&self) -> bool {
        self.origin == Origin::Memo
    }

    /// True if the definition's head can match a call `head/arity`.
    pub fn defines(&self, head: &str, arity: usize) -> bool {
        self.clause.head == head && self.clause.params.len() == arity
    }

    /// Partially instantiates the definition, dropping the quantified
    /// variables that the binding covers.
    pub fn instantiate(&self, binding: &Binding) -> Result<Definition, SubstError> {
        let clause = self.clause.substitute_partial(binding)?;
        let remaining: BTreeSet<Ident> = clause
            .pattern_vars()
            .into_iter()
            .chain(clause.body.free_vars())
            .collect();
        Ok(Definition {
            quantifier: self.quantifier.restricted_to(&remaining),
            clause,
            origin: self.origin,
        })
    }
}

/// An ordered sequence of definitions. Selection is first-match, and
/// evolution only prepends.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    defs: VecDeque<Arc<Definition>>,
}

impl Program {
    pub fn new() -> Self {
        Program::default()
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Arc<Definition>> {
        self.defs.get(index)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Arc<Definition>> + ExactSizeIterator {
        self.defs.iter()
    }

    pub fn push(&mut self, def: Definition) {
        self.defs.push_back(Arc::new(def));
    }

    pub fn prepend(&mut self, def: Definition) {
        self.defs.push_front(Arc::new(def));
    }

    /// First definition whose head matches the call, with its binding.
    pub fn select(&self, head: &str, args: &[Constant]) -> Option<(usize, &Arc<Definition>, Binding)> {
        self.defs.iter().enumerate().find_map(|(i, d)| {
            if !d.defines(head, args.len()) {
                return None;
            }
            match_params(&d.clause.params, args).map(|b| (i, d, b))
        })
    }

    /// True when `suffix` is a suffix of this program.
    pub fn ends_with(&self, suffix: &Program) -> bool {
        suffix.len() <= self.len()
            && self
                .defs
                .iter()
                .rev()
                .zip(suffix.defs.iter().rev())
                .all(|(a, b)| a == b)
    }

    /// Rewrites the quantifier kind of quantified definitions, optionally
    /// only those with the given heads.
    pub fn force_kind(&self, kind: QuantKind, only: Option<&BTreeSet<Ident>>) -> Program {
        let defs = self
            .defs
            .iter()
            .map(|d| {
                let selected = only.is_none_or(|names| names.contains(&d.clause.head));
                if selected && d.kind() != QuantKind::Ground {
                    Arc::new(Definition {
                        quantifier: d.quantifier.with_kind(kind),
                        ..Definition::clone(d)
                    })
                } else {
                    Arc::clone(d)
                }
            })
            .collect();
        Program { defs }
    }
}

impl FromIterator<Definition> for Program {
    fn from_iter<I: IntoIterator<Item = Definition>>(iter: I) -> Self {
        Program {
            defs: iter.into_iter().map(Arc::new).collect(),
        }
    }
}

/// One path segment, `/name` or `/name[index]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub name: Ident,
    pub index: Option<Pattern>,
}

impl Segment {
    pub fn new(name: impl Into<Ident>, index: Option<Pattern>) -> Self {
        Segment {
            name: name.into(),
            index,
        }
    }

    pub fn is_concrete(&self) -> bool {
        !matches!(self.index, Some(Pattern::Var(_) | Pattern::Succ(..)))
    }

    pub fn key(&self) -> Option<SegmentKey> {
        let index = match &self.index {
            None => None,
            Some(Pattern::Lit(c)) => Some(c.clone()),
            Some(_) => return None,
        };
        Some(SegmentKey {
            name: self.name.clone(),
            index,
        })
    }
}

/// Key of a concrete segment. Orders by name, then numerically by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentKey {
    pub name: Ident,
    pub index: Option<Constant>,
}

impl SegmentKey {
    pub fn segment(&self) -> Segment {
        Segment::new(self.name.clone(), self.index.clone().map(Pattern::Lit))
    }
}

/// A hierarchical object address such as `/a/b[3]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocationPath {
    pub segments: Vec<Segment>,
}

impl LocationPath {
    pub fn new(segments: Vec<Segment>) -> Self {
        assert!(!segments.is_empty(), "location paths are nonempty");
        LocationPath { segments }
    }

    pub fn from_keys(keys: &[SegmentKey]) -> Self {
        LocationPath::new(keys.iter().map(SegmentKey::segment).collect())
    }

    pub fn is_concrete(&self) -> bool {
        self.segments.iter().all(Segment::is_concrete)
    }

    pub fn keys(&self) -> Option<Vec<SegmentKey>> {
        self.segments.iter().map(Segment::key).collect()
    }

    pub fn vars(&self) -> Vec<Ident> {
        self.segments
            .iter()
            .filter_map(|s| s.index.as_ref().and_then(|p| p.var_name().map(str::to_owned)))
            .collect()
    }

    pub fn substitute(&self, binding: &Binding) -> Result<LocationPath, SubstError> {
        Ok(LocationPath {
            segments: self
                .segments
                .iter()
                .map(|s| {
                    Ok(Segment {
                        name: s.name.clone(),
                        index: s.index.as_ref().map(|p| p.substitute(binding)).transpose()?,
                    })
                })
                .collect::<Result<_, SubstError>>()?,
        })
    }
}

// ---------------------------------------------------------------------------
// Printing

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{item}")?;
    }
    Ok(())
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Lit(c) => write!(f, "{c}"),
            Pattern::Var(x) => f.write_str(x),
            Pattern::Succ(x, k) => write!(f, "{x}+{k}"),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "/{}", self.name)?;
        if let Some(index) = &self.index {
            write!(f, "[{index}]")?;
        }
        Ok(())
    }
}

impl fmt::Display for LocationPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.segments.iter().try_for_each(|s| write!(f, "{s}"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Assoc {
    Left,
    None,
}

fn infix_of(head: &str, arity: usize) -> Option<(&'static str, u8, Assoc)> {
    if arity != 2 {
        return None;
    }
    let op = Builtin::from_name(head)?;
    let prec = match op {
        Builtin::Eq | Builtin::Lt | Builtin::Leq => (1, Assoc::None),
        Builtin::Add | Builtin::Sub => (2, Assoc::Left),
        Builtin::Mul => (3, Assoc::Left),
        _ => return None,
    };
    Some((op.symbol()?, prec.0, prec.1))
}

fn is_negative_literal(e: &Expr) -> bool {
    matches!(e, Expr::Const(Constant::Int(i)) if i.is_negative())
}

impl Expr {
    fn infix_prec(&self) -> Option<(u8, Assoc)> {
        match self {
            Expr::Call { head, args } => infix_of(head, args.len()).map(|(_, p, a)| (p, a)),
            _ => None,
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(x) => f.write_str(x),
            Expr::Top => f.write_str("top"),
            Expr::Call { head, args } => {
                if let Some((sym, prec, assoc)) = infix_of(head, args.len()) {
                    let (lhs, rhs) = (&args[0], &args[1]);
                    let lhs_parens = lhs
                        .infix_prec()
                        .is_some_and(|(p, _)| p < prec || (p == prec && assoc == Assoc::None));
                    let rhs_parens =
                        rhs.infix_prec().is_some_and(|(p, _)| p <= prec) || is_negative_literal(rhs);
                    lhs.fmt_operand(f, lhs_parens)?;
                    if lhs.is_atomic() && rhs.is_atomic() {
                        f.write_str(sym)?;
                    } else {
                        write!(f, " {sym} ")?;
                    }
                    return rhs.fmt_operand(f, rhs_parens);
                }
                write!(f, "{head}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
            Expr::Located { path, head, args } => {
                write!(f, "{path}.{head}(")?;
                write_list(f, args)?;
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.head)?;
        write_list(f, &self.params)?;
        write!(f, ") = {};", self.body)
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kw, vars) = match self {
            Quantifier::Ground => return Ok(()),
            Quantifier::Blind(v) => ("forall", v),
            Quantifier::Parallel(v) => ("pforall", v),
        };
        write!(f, "{kw} {}. ", vars.join(", "))
    }
}

impl fmt::Display for Definition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.quantifier, self.clause)
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.defs.iter().try_for_each(|d| writeln!(f, "{d}"))
    }
}

/// Renders a program one definition per line, in program order.
pub fn pretty_print(program: &Program) -> String {
    program.to_string()
}

/// `head(a, b)` with constant arguments, as used in diagnostics.
pub(crate) fn format_call(path: Option<&LocationPath>, head: &str, args: &[Constant]) -> String {
    let args: Vec<String> = args.iter().map(Constant::to_string).collect();
    match path {
        Some(p) => format!("{p}.{head}({})", args.join(", ")),
        None => format!("{head}({})", args.join(", ")),
    }
}

pub(crate) fn positive(k: &BigInt) -> bool {
    k >= &BigInt::one()
}
