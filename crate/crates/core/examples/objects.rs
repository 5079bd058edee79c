//! Definitions at locations: plain objects, a class whose instances are
//! created on first use, and a forwarding object.
//!
//! `cargo run --example objects`

use puq::{parse_expr, parse_program, Budget, Session};

fn main() {
    let source = parse_program(include_str!("../programs/fib_oop.puq")).expect("parse");
    println!("store before evaluation:\n{}", source.store.dump());

    let mut session = Session::new(source.program, source.store, Budget::default());
    let (value, stats) = session.eval(&parse_expr("/fib.fib(4)").unwrap()).expect("eval");
    println!("/fib.fib(4) = {value}");
    println!(
        "{} objects instantiated, {} lookups, {} class entries scanned",
        stats.instantiations, stats.resolutions, stats.class_scans
    );
    println!("store after evaluation:\n{}", session.store().dump());

    // Every object now exists, so a repeated call is answered by direct
    // lookup and the stored entries.
    let (_, again) = session.eval(&parse_expr("/fib.fib(4)").unwrap()).expect("eval");
    println!("second call: {} instantiations, {} memo hits", again.instantiations, again.memo_hits);

    let shapes = parse_program(include_str!("../programs/shapes.puq")).expect("parse");
    let mut session = Session::new(shapes.program, shapes.store, Budget::default());
    let (total, _) = session.eval(&parse_expr("/scene.total()").unwrap()).expect("eval");
    println!("/scene.total() = {total}");
}
