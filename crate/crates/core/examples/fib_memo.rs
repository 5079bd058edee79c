//! Memoizing recursion versus classical recursion on the same program.
//!
//! `cargo run --example fib_memo`

use puq::{parse_expr, parse_program, pretty_print, Budget, QuantKind};

fn main() {
    let source = parse_program(include_str!("../programs/fib.puq")).expect("parse");
    let query = parse_expr("fib(3)").unwrap();

    let out = puq::eval(&source.program, &query, Budget::default()).expect("eval");
    println!("pforall: fib(3) = {}", out.value);
    println!("evolved program:\n{}", pretty_print(&out.evolved));

    let classical = source.force_kind(QuantKind::Blind, None).program;
    let out = puq::eval(&classical, &query, Budget::default()).expect("eval");
    println!("forall:  fib(3) = {}", out.value);
    println!("program afterwards:\n{}", pretty_print(&out.evolved));

    let big = parse_expr("fib(150)").unwrap();
    let out = puq::eval(&source.program, &big, Budget::default()).expect("eval");
    println!(
        "fib(150) = {} after {} body evaluations and {} memo hits",
        out.value,
        out.stats.body_evals(),
        out.stats.memo_hits
    );
}
