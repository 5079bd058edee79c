//! The evaluator.
//!
//! Execution alternates between an evaluation phase, which reduces an
//! expression to a constant, and a backchaining phase, which resolves a
//! ground call against the first matching definition:
//!
//! * a ground definition evaluates its body in place;
//! * a `forall` (blind) definition is instantiated with the call's
//!   arguments, its body evaluated, and the instance discarded;
//! * a `pforall` (parallel) definition is instantiated and evaluated the
//!   same way, but on completion the entry `head(args) = value` is prepended
//!   to the program, so later calls with the same arguments hit it first.
//!
//! Arguments are evaluated left to right and the evolving program is
//! threaded through them: the second argument already sees entries added
//! while evaluating the first.
//!
//! The machine keeps its own work stack, so recursion depth is limited by
//! [`Budget::max_depth`] and not by the host stack.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::ast::{
    substitute, Clause, Constant, Definition, Expr, Ident, LocationPath, Origin, Program,
    QuantKind, Quantifier, SubstError,
};
use crate::builtins::{Builtin, BuiltinError};
use crate::locations::{Instance, ObjectNode, ObjectStore};
use crate::trace::{TraceEvent, TraceSink};

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_steps: Option<u64>,
    pub max_depth: Option<usize>,
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        max_steps: None,
        max_depth: None,
    };

    pub fn new(max_steps: u64, max_depth: usize) -> Self {
        Budget {
            max_steps: Some(max_steps),
            max_depth: Some(max_depth),
        }
    }

    pub fn steps(max_steps: u64) -> Self {
        Budget {
            max_steps: Some(max_steps),
            ..Budget::default()
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_MAX_STEPS, DEFAULT_MAX_DEPTH)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resource {
    Steps,
    Depth,
}

impl fmt::Display for Resource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Resource::Steps => "step",
            Resource::Depth => "depth",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no matching clause for {call}")]
    NoMatchingClause { call: String },
    #[error("unknown location {path} in {call}")]
    UnknownLocation { path: String, call: String },
    #[error(transparent)]
    Builtin(#[from] BuiltinError),
    #[error("{resource} budget of {limit} exceeded{}", .call.as_ref().map(|c| format!(" in {c}")).unwrap_or_default())]
    BudgetExceeded {
        resource: Resource,
        limit: u64,
        call: Option<String>,
    },
    #[error("free variable `{0}` in evaluated expression")]
    FreeVariable(Ident),
    #[error(transparent)]
    Substitution(#[from] SubstError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl EvalError {
    pub fn is_budget(&self) -> bool {
        matches!(self, EvalError::BudgetExceeded { .. })
    }
}

/// Instrumentation gathered during one evaluation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub body_evals_bq: u64,
    pub body_evals_puq: u64,
    pub body_evals_ground: u64,
    pub memo_adds: u64,
    pub memo_hits: u64,
    pub steps: u64,
    pub peak_depth: u64,
    /// Concrete-path lookups performed by located calls.
    pub resolutions: u64,
    /// Class entries examined while matching paths.
    pub class_scans: u64,
    pub instantiations: u64,
    /// Clause body evaluations per function head (memo hits excluded).
    pub clause_evals: BTreeMap<Ident, u64>,
}

impl Counters {
    pub fn body_evals(&self) -> u64 {
        self.body_evals_bq + self.body_evals_puq + self.body_evals_ground
    }

    pub fn clause_evals_of(&self, head: &str) -> u64 {
        self.clause_evals.get(head).copied().unwrap_or(0)
    }

    /// All counters as `(name, value)` pairs in a fixed order.
    pub fn fields(&self) -> Vec<(String, u64)> {
        let mut out: Vec<(String, u64)> = [
            ("steps", self.steps),
            ("body_evals_bq", self.body_evals_bq),
            ("body_evals_puq", self.body_evals_puq),
            ("body_evals_ground", self.body_evals_ground),
            ("clause_evals", self.body_evals()),
            ("memo_adds", self.memo_adds),
            ("memo_hits", self.memo_hits),
            ("peak_depth", self.peak_depth),
            ("resolutions", self.resolutions),
            ("class_scans", self.class_scans),
            ("instantiations", self.instantiations),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v))
        .collect();
        out.extend(
            self.clause_evals
                .iter()
                .map(|(head, n)| (format!("clause_evals.{head}"), *n)),
        );
        out
    }
}

/// Value of an evaluation together with the evolved program and store.
#[derive(Clone, Debug)]
pub struct EvalOutcome {
    pub value: Constant,
    pub evolved: Program,
    pub store: ObjectStore,
    pub stats: Counters,
}

/// Evaluates a closed expression against a flat program.
pub fn eval(program: &Program, expr: &Expr, budget: Budget) -> Result<EvalOutcome, EvalError> {
    eval_with(program, &ObjectStore::new(), expr, budget, None)
}

/// Evaluates against a program and an object store, optionally streaming
/// trace events.
pub fn eval_with(
    program: &Program,
    store: &ObjectStore,
    expr: &Expr,
    budget: Budget,
    sink: Option<&mut dyn TraceSink>,
) -> Result<EvalOutcome, EvalError> {
    let mut machine = Machine::new(program.clone(), store.clone(), budget);
    if let Some(sink) = sink {
        machine = machine.with_sink(sink);
    }
    let value = machine.eval(expr)?;
    let (evolved, store, stats) = machine.into_parts();
    Ok(EvalOutcome {
        value,
        evolved,
        store,
        stats,
    })
}

#[derive(Clone, Debug)]
enum Scope {
    /// Unqualified calls resolve in the flat program.
    Flat,
    /// Unqualified calls resolve within the stored object.
    Object(Arc<LocationPath>),
    /// Index into the transient objects of blind classes.
    Transient(usize),
}

#[derive(Clone, Debug)]
struct CallSite {
    path: Option<LocationPath>,
    head: Ident,
    args: Vec<Constant>,
}

impl fmt::Display for CallSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::ast::format_call(self.path.as_ref(), &self.head, &self.args))
    }
}

#[derive(Debug)]
struct Frame {
    site: CallSite,
    /// Where to prepend `head(args) = value` when the body completes.
    memo: Option<Scope>,
}

#[derive(Debug)]
enum Work {
    Eval(Expr, Scope),
    Builtin(Builtin, usize),
    Call {
        head: Ident,
        arity: usize,
        scope: Scope,
    },
    LocatedCall {
        path: LocationPath,
        head: Ident,
        arity: usize,
    },
    Return(Frame),
    DropTransient,
}

/// An evaluation in progress: the evolving program and store, counters,
/// and the work stack.
pub struct Machine<'t> {
    program: Program,
    store: ObjectStore,
    budget: Budget,
    counters: Counters,
    sink: Option<&'t mut dyn TraceSink>,
    work: Vec<Work>,
    values: Vec<Constant>,
    transients: Vec<(LocationPath, ObjectNode)>,
    depth: u64,
}

impl<'t> Machine<'t> {
    pub fn new(program: Program, store: ObjectStore, budget: Budget) -> Self {
        Machine {
            program,
            store,
            budget,
            counters: Counters::default(),
            sink: None,
            work: Vec::new(),
            values: Vec::new(),
            transients: Vec::new(),
            depth: 0,
        }
    }

    pub fn with_sink(mut self, sink: &'t mut dyn TraceSink) -> Self {
        self.sink = Some(sink);
        self
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn store(&self) -> &ObjectStore {
        &self.store
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn reset_counters(&mut self) {
        self.counters = Counters::default();
    }

    pub fn into_parts(self) -> (Program, ObjectStore, Counters) {
        (self.program, self.store, self.counters)
    }

    /// Evaluates a closed expression.
    pub fn eval(&mut self, expr: &Expr) -> Result<Constant, EvalError> {
        if let Some(x) = expr.free_vars().into_iter().next() {
            return Err(EvalError::FreeVariable(x));
        }
        let mut out = self.drive(|m| {
            m.work.push(Work::Eval(expr.clone(), Scope::Flat));
            Ok(())
        })?;
        Ok(out.pop().expect("one value"))
    }

    /// Evaluates arguments left to right, each under the program evolved
    /// by the ones before it.
    pub fn eval_args(&mut self, args: &[Expr]) -> Result<Vec<Constant>, EvalError> {
        if let Some(x) = args.iter().flat_map(Expr::free_vars).next() {
            return Err(EvalError::FreeVariable(x));
        }
        self.drive(|m| {
            m.push_args(args.to_vec(), &Scope::Flat);
            Ok(())
        })
    }

    /// Resolves a ground call against the program, first match wins.
    pub fn backchain(&mut self, head: &str, args: &[Constant]) -> Result<Constant, EvalError> {
        let site = CallSite {
            path: None,
            head: head.to_owned(),
            args: args.to_vec(),
        };
        self.drive_one(|m| m.backchain_in(Scope::Flat, site))
    }

    /// Applies a ground definition whose head equals the call.
    pub fn apply_ground(&mut self, def: &Definition, args: &[Constant]) -> Result<Constant, EvalError> {
        let head_args = def.clause.ground_args();
        if def.kind() != QuantKind::Ground || head_args.as_deref() != Some(args) {
            return Err(EvalError::Internal(format!(
                "`{def}` is not a ground definition for these arguments"
            )));
        }
        let site = CallSite {
            path: None,
            head: def.clause.head.clone(),
            args: args.to_vec(),
        };
        let def = Arc::new(def.clone());
        self.drive_one(|m| m.dispatch(0, def, Default::default(), Scope::Flat, site))
    }

    /// Evaluates a blind instance; the instance is not kept.
    pub fn bc_b(&mut self, instance: &Clause) -> Result<Constant, EvalError> {
        self.run_instance(instance, false)
    }

    /// Evaluates a parallel instance and prepends `head(args) = value` to
    /// the program.
    pub fn bc_p(&mut self, instance: &Clause) -> Result<Constant, EvalError> {
        self.run_instance(instance, true)
    }

    fn run_instance(&mut self, instance: &Clause, parallel: bool) -> Result<Constant, EvalError> {
        let args = instance
            .ground_args()
            .filter(|_| instance.body.is_closed())
            .ok_or_else(|| EvalError::Internal(format!("`{instance}` is not a ground instance")))?;
        let site = CallSite {
            path: None,
            head: instance.head.clone(),
            args,
        };
        let kind = if parallel { QuantKind::Parallel } else { QuantKind::Blind };
        self.drive_one(|m| {
            m.count_body(kind, &site.head);
            m.enter(site, parallel.then_some(Scope::Flat))?;
            m.work.push(Work::Eval(instance.body.clone(), Scope::Flat));
            Ok(())
        })
    }

    /// Evaluates `path.head(args)` with ground arguments.
    pub fn located_call(
        &mut self,
        path: &LocationPath,
        head: &str,
        args: &[Constant],
    ) -> Result<Constant, EvalError> {
        if let Some(x) = path.vars().into_iter().next() {
            return Err(EvalError::FreeVariable(x));
        }
        let (path, head, args) = (path.clone(), head.to_owned(), args.to_vec());
        self.drive_one(|m| m.dispatch_located(path, head, args))
    }

    fn drive_one(
        &mut self,
        seed: impl FnOnce(&mut Self) -> Result<(), EvalError>,
    ) -> Result<Constant, EvalError> {
        let mut out = self.drive(seed)?;
        out.pop()
            .ok_or_else(|| EvalError::Internal("evaluation produced no value".into()))
    }

    /// Seeds the work stack, runs it back down to its starting height and
    /// returns the values produced. On error the stacks are unwound; the
    /// program keeps any entries already completed.
    fn drive(
        &mut self,
        seed: impl FnOnce(&mut Self) -> Result<(), EvalError>,
    ) -> Result<Vec<Constant>, EvalError> {
        let (work_base, value_base, transient_base, depth_base) =
            (self.work.len(), self.values.len(), self.transients.len(), self.depth);
        match seed(self).and_then(|()| self.run(work_base)) {
            Ok(()) => Ok(self.values.split_off(value_base)),
            Err(e) => {
                self.work.truncate(work_base);
                self.values.truncate(value_base);
                self.transients.truncate(transient_base);
                self.depth = depth_base;
                Err(e)
            }
        }
    }

    fn run(&mut self, base: usize) -> Result<(), EvalError> {
        while self.work.len() > base {
            self.tick()?;
            match self.work.pop().expect("nonempty") {
                Work::Eval(expr, scope) => self.step_eval(expr, scope)?,
                Work::Builtin(op, arity) => {
                    let args = self.pop_values(arity)?;
                    let result = op.apply(&args)?;
                    self.emit(|| TraceEvent::BuiltinApply {
                        name: op.name(),
                        args,
                        result: result.clone(),
                    });
                    self.values.push(result);
                }
                Work::Call { head, arity, scope } => {
                    let args = self.pop_values(arity)?;
                    let site = CallSite {
                        path: self.scope_path(&scope),
                        head,
                        args,
                    };
                    self.backchain_in(scope, site)?;
                }
                Work::LocatedCall { path, head, arity } => {
                    let args = self.pop_values(arity)?;
                    self.dispatch_located(path, head, args)?;
                }
                Work::Return(frame) => self.finish(frame)?,
                Work::DropTransient => {
                    self.transients.pop();
                }
            }
        }
        Ok(())
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.counters.steps += 1;
        match self.budget.max_steps {
            Some(limit) if self.counters.steps > limit => Err(EvalError::BudgetExceeded {
                resource: Resource::Steps,
                limit,
                call: self.innermost_call(),
            }),
            _ => Ok(()),
        }
    }

    fn innermost_call(&self) -> Option<String> {
        self.work.iter().rev().find_map(|w| match w {
            Work::Return(frame) => Some(frame.site.to_string()),
            _ => None,
        })
    }

    fn emit(&mut self, event: impl FnOnce() -> TraceEvent) {
        if let Some(sink) = self.sink.as_deref_mut() {
            sink.event(&event());
        }
    }

    fn pop_values(&mut self, n: usize) -> Result<Vec<Constant>, EvalError> {
        let len = self.values.len();
        if n > len {
            return Err(EvalError::Internal("value stack underflow".into()));
        }
        Ok(self.values.split_off(len - n))
    }

    fn push_args(&mut self, args: Vec<Expr>, scope: &Scope) {
        self.work
            .extend(args.into_iter().rev().map(|a| Work::Eval(a, scope.clone())));
    }

    fn scope_path(&self, scope: &Scope) -> Option<LocationPath> {
        match scope {
            Scope::Flat => None,
            Scope::Object(p) => Some(LocationPath::clone(p)),
            Scope::Transient(i) => Some(self.transients[*i].0.clone()),
        }
    }

    fn step_eval(&mut self, expr: Expr, scope: Scope) -> Result<(), EvalError> {
        if self.sink.is_some() {
            self.emit(|| TraceEvent::EvalEnter(expr.clone()));
        }
        match expr {
            Expr::Const(c) => self.values.push(c),
            Expr::Top => self.values.push(Constant::Top),
            Expr::Var(x) => return Err(EvalError::FreeVariable(x)),
            Expr::Call { head, args } => {
                let arity = args.len();
                match Builtin::from_name(&head) {
                    Some(op) => self.work.push(Work::Builtin(op, arity)),
                    None => self.work.push(Work::Call {
                        head,
                        arity,
                        scope: scope.clone(),
                    }),
                }
                self.push_args(args, &scope);
            }
            Expr::Located { path, head, args } => {
                if let Some(x) = path.vars().into_iter().next() {
                    return Err(EvalError::FreeVariable(x));
                }
                let arity = args.len();
                self.work.push(Work::LocatedCall { path, head, arity });
                self.push_args(args, &scope);
            }
        }
        Ok(())
    }

    fn defs(&self, scope: &Scope) -> Result<&Program, EvalError> {
        match scope {
            Scope::Flat => Ok(&self.program),
            Scope::Object(path) => self
                .store
                .resolve(path)
                .map(|n| &n.defs)
                .ok_or_else(|| EvalError::Internal(format!("object {path} vanished"))),
            Scope::Transient(i) => Ok(&self.transients[*i].1.defs),
        }
    }

    fn defs_mut(&mut self, scope: &Scope) -> Result<&mut Program, EvalError> {
        match scope {
            Scope::Flat => Ok(&mut self.program),
            Scope::Object(path) => self
                .store
                .resolve_mut(path)
                .map(|n| &mut n.defs)
                .ok_or_else(|| EvalError::Internal(format!("object {path} vanished"))),
            Scope::Transient(i) => Ok(&mut self.transients[*i].1.defs),
        }
    }

    fn backchain_in(&mut self, scope: Scope, site: CallSite) -> Result<(), EvalError> {
        let found = self
            .defs(&scope)?
            .select(&site.head, &site.args)
            .map(|(i, d, b)| (i, Arc::clone(d), b));
        match found {
            Some((index, def, binding)) => self.dispatch(index, def, binding, scope, site),
            None => Err(EvalError::NoMatchingClause {
                call: site.to_string(),
            }),
        }
    }

    fn dispatch(
        &mut self,
        index: usize,
        def: Arc<Definition>,
        binding: crate::ast::Binding,
        scope: Scope,
        site: CallSite,
    ) -> Result<(), EvalError> {
        self.emit(|| TraceEvent::BackchainMatch {
            index,
            kind: def.kind(),
            call: site.to_string(),
        });
        let (kind, body) = match (&def.quantifier, def.origin) {
            (Quantifier::Ground, Origin::Memo) if def.clause.body.as_constant().is_some() => {
                let value = def.clause.body.as_constant().expect("constant body");
                self.counters.memo_hits += 1;
                self.emit(|| TraceEvent::MemoHit {
                    call: site.to_string(),
                    value: value.clone(),
                });
                self.values.push(value);
                return Ok(());
            }
            (Quantifier::Ground, Origin::ClassInstance { parallel: true }) => {
                (QuantKind::Parallel, def.clause.body.clone())
            }
            (Quantifier::Ground, Origin::ClassInstance { parallel: false }) => {
                (QuantKind::Blind, def.clause.body.clone())
            }
            (Quantifier::Ground, _) => (QuantKind::Ground, def.clause.body.clone()),
            (q, _) => (q.kind(), substitute(&def.clause, &binding)?.body),
        };
        self.count_body(kind, &site.head);
        let memo = (kind == QuantKind::Parallel).then(|| scope.clone());
        self.enter(site, memo)?;
        self.work.push(Work::Eval(body, scope));
        Ok(())
    }

    fn count_body(&mut self, kind: QuantKind, head: &str) {
        match kind {
            QuantKind::Ground => self.counters.body_evals_ground += 1,
            QuantKind::Blind => self.counters.body_evals_bq += 1,
            QuantKind::Parallel => self.counters.body_evals_puq += 1,
        }
        match self.counters.clause_evals.get_mut(head) {
            Some(n) => *n += 1,
            None => {
                self.counters.clause_evals.insert(head.to_owned(), 1);
            }
        }
    }

    fn enter(&mut self, site: CallSite, memo: Option<Scope>) -> Result<(), EvalError> {
        self.depth += 1;
        self.counters.peak_depth = self.counters.peak_depth.max(self.depth);
        if let Some(limit) = self.budget.max_depth {
            if self.depth > limit as u64 {
                return Err(EvalError::BudgetExceeded {
                    resource: Resource::Depth,
                    limit: limit as u64,
                    call: Some(site.to_string()),
                });
            }
        }
        self.work.push(Work::Return(Frame { site, memo }));
        Ok(())
    }

    fn finish(&mut self, frame: Frame) -> Result<(), EvalError> {
        self.depth -= 1;
        let Some(target) = frame.memo else {
            return Ok(());
        };
        let value = self
            .values
            .last()
            .cloned()
            .ok_or_else(|| EvalError::Internal("missing return value".into()))?;
        let entry = Definition::memo(&frame.site.head, &frame.site.args, value);
        if self.sink.is_some() {
            let shown = entry.clone();
            self.emit(|| TraceEvent::MemoAdd(shown));
        }
        self.counters.memo_adds += 1;
        self.defs_mut(&target)?.prepend(entry);
        Ok(())
    }

    fn dispatch_located(
        &mut self,
        path: LocationPath,
        head: Ident,
        args: Vec<Constant>,
    ) -> Result<(), EvalError> {
        self.counters.resolutions += 1;
        let site = CallSite {
            path: Some(path.clone()),
            head,
            args,
        };
        if self.store.resolve(&path).is_some() {
            return self.backchain_in(Scope::Object(Arc::new(path)), site);
        }
        let matched = self.store.match_class(&path).map(|(i, _, b)| (i, b));
        self.counters.class_scans += match &matched {
            Some((i, _)) => *i as u64 + 1,
            None => self.store.classes().len() as u64,
        };
        let Some((class_index, binding)) = matched else {
            return Err(EvalError::UnknownLocation {
                path: path.to_string(),
                call: site.to_string(),
            });
        };
        match self.store.instantiate(class_index, &binding, &path)? {
            Instance::Stored => {
                self.counters.instantiations += 1;
                self.backchain_in(Scope::Object(Arc::new(path)), site)
            }
            Instance::Existing => self.backchain_in(Scope::Object(Arc::new(path)), site),
            Instance::Transient(node) => {
                self.counters.instantiations += 1;
                self.transients.push((path, node));
                self.work.push(Work::DropTransient);
                self.backchain_in(Scope::Transient(self.transients.len() - 1), site)
            }
        }
    }
}

/// A program and store that persist and evolve across evaluations, with
/// the parsed source kept for resetting.
#[derive(Clone, Debug)]
pub struct Session {
    source_program: Program,
    source_store: ObjectStore,
    program: Program,
    store: ObjectStore,
    budget: Budget,
}

impl Session {
    pub fn new(program: Program, store: ObjectStore, budget: Budget) -> Self {
        Session {
            source_program: program.clone(),
            source_store: store.clone(),
            program,
            store,
            budget,
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    pub fn store(&self) -> &ObjectStore {
        &self.store
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    /// Restores the program and store to the source.
    pub fn reset(&mut self) {
        self.program = self.source_program.clone();
        self.store = self.source_store.clone();
    }

    pub fn eval(&mut self, expr: &Expr) -> Result<(Constant, Counters), EvalError> {
        self.eval_traced(expr, None)
    }

    /// Evaluates with a fresh step budget. Entries completed before an
    /// error are kept.
    pub fn eval_traced(
        &mut self,
        expr: &Expr,
        sink: Option<&mut dyn TraceSink>,
    ) -> Result<(Constant, Counters), EvalError> {
        let program = std::mem::take(&mut self.program);
        let store = std::mem::take(&mut self.store);
        let mut machine = Machine::new(program, store, self.budget);
        if let Some(sink) = sink {
            machine = machine.with_sink(sink);
        }
        let result = machine.eval(expr);
        let (program, store, counters) = machine.into_parts();
        self.program = program;
        self.store = store;
        result.map(|v| (v, counters))
    }
}
