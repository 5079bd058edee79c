//! Streaming evaluation events to a sink.
//!
//! `cargo run --example trace_events`

use puq::trace::{summary_line, LineSink};
use puq::{eval_with, parse_expr, parse_program, Budget, TraceEvent};

fn main() {
    let source = parse_program(include_str!("../programs/fib.puq")).expect("parse");
    let query = parse_expr("fib(4)").unwrap();

    // Any closure over events is a sink.
    let mut added = Vec::new();
    let mut collect = |event: &TraceEvent| {
        if let TraceEvent::MemoAdd(def) = event {
            added.push(def.to_string());
        }
    };
    eval_with(&source.program, &source.store, &query, Budget::default(), Some(&mut collect)).expect("eval");
    println!("entries in completion order: {added:?}\n");

    // The line format used by `puq trace`.
    let mut sink = LineSink::new(Vec::new());
    let out = eval_with(&source.program, &source.store, &parse_expr("fib(2)").unwrap(), Budget::default(), Some(&mut sink))
        .expect("eval");
    let text = String::from_utf8(sink.finish().expect("write")).unwrap();
    print!("{text}");
    println!("{}", summary_line(&out.stats));
}
