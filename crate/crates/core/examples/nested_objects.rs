//! Objects inside objects: `/a/b[n]` refines the method `g` of `/a`.
//!
//! `cargo run --example nested_objects`

use puq::{parse_expr, parse_program, Budget, Session};

fn main() {
    let source = parse_program(include_str!("../programs/nested.puq")).expect("parse");
    let mut session = Session::new(source.program, source.store, Budget::default());
    for n in [3, 6, 10] {
        let before = session.store().paths().len();
        let (value, stats) = session
            .eval(&parse_expr(&format!("/a/b[{n}].g({n})")).unwrap())
            .expect("eval");
        println!(
            "/a/b[{n}].g({n}) = {value}: {} new objects ({} paths before)",
            stats.instantiations, before
        );
    }
    println!("\n{}", session.store().dump());
}
