//! Counters for classical and memoizing recursion side by side.
//!
//! `cargo run --release --example bench_modes`

use std::time::Instant;

use puq::{parse_expr, parse_program, Budget, QuantKind};

fn main() {
    let source = parse_program(include_str!("../programs/fib.puq")).expect("parse");
    println!("{:>4} {:>6} {:>12} {:>12} {:>10} {:>10}", "n", "mode", "clause_evals", "steps", "memo_adds", "wall_us");
    for n in [5, 10, 15, 20, 25] {
        for kind in [QuantKind::Blind, QuantKind::Parallel] {
            let program = source.force_kind(kind, None).program;
            let query = parse_expr(&format!("fib({n})")).unwrap();
            let start = Instant::now();
            let out = puq::eval(&program, &query, Budget::default()).expect("eval");
            let wall = start.elapsed().as_micros();
            println!(
                "{n:>4} {:>6} {:>12} {:>12} {:>10} {wall:>10}",
                kind.to_string(),
                out.stats.clause_evals_of("fib"),
                out.stats.steps,
                out.stats.memo_adds
            );
        }
    }

    // Classical recursion runs into the step budget instead of hanging.
    let classical = source.force_kind(QuantKind::Blind, None).program;
    let err = puq::eval(&classical, &parse_expr("fib(60)").unwrap(), Budget::steps(1_000_000)).unwrap_err();
    println!("\nforall fib(60): {err}");
}
