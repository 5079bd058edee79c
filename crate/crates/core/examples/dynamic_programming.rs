//! Top-down dynamic programming without a memo table: a `pforall` clause
//! keeps every solved subproblem in front of the program.
//!
//! `cargo run --example dynamic_programming`

use puq::{parse_expr, parse_program, Budget, Session};

fn run(name: &str, source: &str, queries: &[&str]) {
    let parsed = parse_program(source).expect("parse");
    let mut session = Session::new(parsed.program, parsed.store, Budget::default());
    println!("{name}:");
    for q in queries {
        let (value, stats) = session.eval(&parse_expr(q).unwrap()).expect("eval");
        println!("  {q} = {value} ({} new entries, {} hits)", stats.memo_adds, stats.memo_hits);
    }
    println!("  program now holds {} definitions", session.program().len());
}

fn main() {
    run("lattice paths", include_str!("../programs/grid.puq"), &["paths(10, 10)", "paths(12, 12)", "paths(30, 30)"]);
    run("binomials", include_str!("../programs/binomial.puq"), &["choose(30, 15)", "choose(60, 30)"]);
    run("tribonacci", include_str!("../programs/tribonacci.puq"), &["trib(50)", "trib(100)"]);
    // Later queries reuse what earlier ones left behind.
    run("collatz", include_str!("../programs/collatz.puq"), &["steps(27)", "steps(54)", "steps(97)"]);
}
