//! Objects at locations: direct lookup, lazy class instantiation, nesting.

mod common;

use common::{int, load};
use puq::{
    eval_located_call, parse_expr, parse_program, Budget, Constant, Definition, EvalError, Expr,
    LocationPath, ObjectStore, Session, SourceProgram,
};

fn path(text: &str) -> LocationPath {
    match parse_expr(&format!("{text}.f()")).unwrap() {
        Expr::Located { path, .. } => path,
        other => panic!("not a located call: {other}"),
    }
}

fn session(src: SourceProgram) -> Session {
    Session::new(src.program, src.store, Budget::default())
}

fn eval(session: &mut Session, text: &str) -> (Constant, puq::Counters) {
    session.eval(&parse_expr(text).unwrap()).unwrap()
}

fn path_strings(store: &ObjectStore) -> Vec<String> {
    store.paths().iter().map(LocationPath::to_string).collect()
}

/// Fibonacci objects with bases at /a[0] and /a[1], so that /fib.fib(n)
/// lines up with the flat fib(n).
const LOCATED_FIB: &str = "
    at /a[0]: def fib(0) = 1;
    at /a[1]: def fib(1) = 1;
    pforall x. at /a[x+2]: def fib(x+2) = /a[x+1].fib(x+1) + /a[x].fib(x);
    forall n. at /fib: def fib(n) = /a[n].fib(n);
";

#[test]
fn golden_fib_objects() {
    let mut s = session(load("fib_oop.puq"));
    let before = path_strings(s.store());
    assert_eq!(before, ["/a[1]", "/a[2]", "/fib"]);
    let (value, stats) = eval(&mut s, "/fib.fib(4)");
    assert_eq!(value, int(3));
    assert_eq!(path_strings(s.store()), ["/a[1]", "/a[2]", "/a[3]", "/a[4]", "/fib"]);
    let a3 = s.store().resolve(&path("/a[3]")).unwrap();
    let a4 = s.store().resolve(&path("/a[4]")).unwrap();
    assert_eq!(**a3.defs.get(0).unwrap(), Definition::memo("fib", &[int(3)], int(2)));
    assert_eq!(**a4.defs.get(0).unwrap(), Definition::memo("fib", &[int(4)], int(3)));
    for k in 5..=12 {
        assert!(s.store().resolve(&path(&format!("/a[{k}]"))).is_none(), "/a[{k}]");
    }
    assert_eq!(stats.instantiations, 2);
    assert_eq!(stats.memo_adds, 2);
    // The flat program is untouched: all evolution happens inside objects.
    assert!(s.program().is_empty());
}

#[test]
fn resolve_is_direct_and_never_instantiates() {
    let src = load("fib_oop.puq");
    let store = src.store;
    let a1 = store.resolve(&path("/a[1]")).unwrap();
    assert_eq!(a1.defs.len(), 1);
    assert!(store.resolve(&path("/a[7]")).is_none());
    assert!(store.resolve(&path("/b[1]")).is_none());
    assert_eq!(path_strings(&store), ["/a[1]", "/a[2]", "/fib"]);
    let (_, binding) = {
        let (i, _, b) = store.match_class(&path("/a[4]")).unwrap();
        (i, b)
    };
    assert_eq!(binding.get("x"), Some(&int(2)));
    assert!(store.match_class(&path("/a[1]")).is_none());
    assert!(store.match_class(&path("/c[4]")).is_none());
}

#[test]
fn instantiation_is_lazy_and_exactly_covers_the_demand() {
    for n in 3..=40i64 {
        let mut s = session(load("fib_oop.puq"));
        let (_, stats) = eval(&mut s, &format!("/fib.fib({n})"));
        let expected: Vec<String> = (1..=n)
            .map(|k| format!("/a[{k}]"))
            .chain(["/fib".to_owned()])
            .collect();
        let mut got = path_strings(s.store());
        got.sort_by_key(|p| (p.len(), p.clone()));
        let mut want = expected.clone();
        want.sort_by_key(|p| (p.len(), p.clone()));
        assert_eq!(got, want, "n = {n}");
        assert_eq!(stats.instantiations, n as u64 - 2);
    }
}

#[test]
fn class_scans_are_bounded_by_instantiations() {
    let mut s = session(load("fib_oop.puq"));
    let classes = s.store().classes().len() as u64;
    let (_, stats) = eval(&mut s, "/fib.fib(60)");
    assert!(stats.class_scans <= classes * stats.instantiations);
    assert!(stats.resolutions > stats.instantiations);
    // Every object now exists, so lookups go straight to them.
    let (_, again) = eval(&mut s, "/fib.fib(60)");
    assert_eq!(again.class_scans, 0);
    assert_eq!(again.instantiations, 0);
    assert_eq!(again.body_evals_puq, 0);
}

#[test]
fn stores_without_classes_only_use_direct_lookup() {
    let mut s = session(load("shapes.puq"));
    assert!(s.store().classes().is_empty());
    let (value, stats) = eval(&mut s, "/scene.total()");
    assert_eq!(value, int(22));
    assert_eq!(stats.class_scans, 0);
    assert_eq!(stats.instantiations, 0);
    assert_eq!(eval(&mut s, "/square.area(1)").0, int(1));
    assert_eq!(eval(&mut s, "/square.area(9)").0, int(81));
    let err = s.eval(&parse_expr("/circle.area(1)").unwrap()).unwrap_err();
    assert!(matches!(err, EvalError::UnknownLocation { .. }), "{err}");
    let err = s.eval(&parse_expr("/rect[2].area(4)").unwrap()).unwrap_err();
    assert!(matches!(err, EvalError::NoMatchingClause { .. }), "{err}");
}

#[test]
fn located_fib_agrees_with_flat_fib() {
    let flat = load("fib.puq");
    for n in 0..=30u64 {
        let mut located = session(parse_program(LOCATED_FIB).unwrap());
        let (value, stats) = eval(&mut located, &format!("/fib.fib({n})"));
        let mut plain = session(flat.clone());
        let (expected, flat_stats) = eval(&mut plain, &format!("fib({n})"));
        assert_eq!(value, expected, "n = {n}");
        assert_eq!(value, Constant::Int(common::fib(n)));
        assert_eq!(stats.body_evals_puq, flat_stats.body_evals_puq, "n = {n}");
        assert_eq!(stats.instantiations, n.saturating_sub(1));
    }
}

#[test]
fn one_based_objects_are_flat_fib_shifted_by_one() {
    for n in 1..=30u64 {
        let mut s = session(load("fib_oop.puq"));
        let (value, _) = eval(&mut s, &format!("/fib.fib({n})"));
        assert_eq!(value, Constant::Int(common::fib(n - 1)), "n = {n}");
    }
}

#[test]
fn nested_objects_instantiate_exactly_the_needed_children() {
    let mut s = session(load("nested.puq"));
    assert_eq!(path_strings(s.store()), ["/a", "/a/b[1]"]);
    let (value, stats) = eval(&mut s, "/a/b[3].g(3)");
    assert_eq!(value, int(4));
    assert_eq!(path_strings(s.store()), ["/a", "/a/b[1]", "/a/b[2]", "/a/b[3]"]);
    assert_eq!(stats.instantiations, 2);
    let (value, _) = eval(&mut s, "/a/b[10].g(10)");
    assert_eq!(value, int(512));
}

#[test]
fn blind_classes_leave_no_objects_behind() {
    let src = parse_program(
        "forall x. at /sq[x]: def v(x) = x * x;
         at /sq[3]: def v(3) = 0;",
    )
    .unwrap();
    let mut s = session(src);
    let (value, stats) = eval(&mut s, "/sq[5].v(5)");
    assert_eq!(value, int(25));
    assert_eq!(stats.instantiations, 1);
    assert_eq!(stats.memo_adds, 0);
    assert_eq!(path_strings(s.store()), ["/sq[3]"]);
    // A concrete object shadows the class.
    assert_eq!(eval(&mut s, "/sq[3].v(3)").0, int(0));
}

#[test]
fn first_matching_class_wins() {
    let src = parse_program(
        "pforall x. at /n[x+10]: def size(x+10) = 2;
         pforall x. at /n[x]: def size(x) = 1;",
    )
    .unwrap();
    let mut s = session(src);
    assert_eq!(eval(&mut s, "/n[3].size(3)").0, int(1));
    assert_eq!(eval(&mut s, "/n[12].size(12)").0, int(2));
}

#[test]
fn located_call_entry_point_returns_the_evolved_store() {
    let src = load("fib_oop.puq");
    let (value, store, stats) =
        eval_located_call(src.store.clone(), &path("/a[6]"), "fib", &[int(6)], Budget::default()).unwrap();
    assert_eq!(value, Constant::Int(common::fib(5)));
    assert_eq!(stats.instantiations, 4);
    assert!(store.resolve(&path("/a[6]")).is_some());
    assert!(src.store.resolve(&path("/a[6]")).is_none());
}

#[test]
fn store_listing_round_trips_through_the_parser() {
    let mut s = session(load("fib_oop.puq"));
    eval(&mut s, "/fib.fib(6)");
    let text = s.store().to_source();
    let reparsed = parse_program(&text).unwrap();
    assert_eq!(reparsed.store.paths(), s.store().paths());
    for p in s.store().paths() {
        assert_eq!(
            reparsed.store.resolve(&p).map(|n| &n.defs),
            s.store().resolve(&p).map(|n| &n.defs),
            "{p}"
        );
    }
    assert!(s.store().dump().contains("at /a[6]:"));
}
