//! An interpreter for evolving recursive definitions.
//!
//! Definitions are quantified in one of two ways. A `forall` definition is
//! classical recursion: each call instantiates the clause, evaluates it and
//! forgets the instance. A `pforall` definition keeps every instance it
//! computes, prepending `head(args) = value` to the program, which gives
//! top-down dynamic programming without any explicit memo table.
//!
//! Definitions can also be placed at locations such as `/a[3]`, turning the
//! program into a store of objects with direct lookup, lazily instantiated
//! class objects and nesting.
//!
//! ```
//! use puq::{parse_expr, parse_program, Budget, Session};
//!
//! let src = parse_program(
//!     "def fib(0) = 1;
//!      def fib(1) = 1;
//!      pforall x. def fib(x+2) = fib(x+1) + fib(x);",
//! ).unwrap();
//! let mut session = Session::new(src.program, src.store, Budget::default());
//! let (value, stats) = session.eval(&parse_expr("fib(30)").unwrap()).unwrap();
//! assert_eq!(value.to_string(), "1346269");
//! assert_eq!(stats.memo_adds, 29);
//! ```

pub mod ast;
pub mod builtins;
pub mod cli;
pub mod eval;
pub mod locations;
pub mod parser;
pub mod trace;

pub use ast::{
    match_pattern, pretty_print, substitute, Binding, Clause, Constant, Definition, Expr,
    LocationPath, Pattern, Program, QuantKind, Quantifier, Segment,
};
pub use builtins::{apply_builtin, is_builtin, Builtin, BuiltinError};
pub use eval::{eval, eval_with, Budget, Counters, EvalError, EvalOutcome, Machine, Session};
pub use locations::{eval_located_call, ClassEntry, ObjectNode, ObjectStore};
pub use parser::{parse_expr, parse_program, ParseError, Position, SourceProgram};
pub use trace::{TraceEvent, TraceSink};
