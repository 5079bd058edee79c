//! Building programs as values, keeping state across evaluations, and
//! handling errors and budgets.
//!
//! `cargo run --example embedding`

use puq::{
    parse_expr, pretty_print, Budget, Clause, Definition, EvalError, Expr, Pattern, Program,
    Quantifier, Session,
};

fn main() {
    // pforall n. def sum(n+1) = n + 1 + sum(n);  def sum(0) = 0;
    let n = || Expr::var("n");
    let rec = Clause::new(
        "sum",
        vec![Pattern::Succ("n".into(), 1.into())],
        Expr::call("add", vec![Expr::call("add", vec![n(), Expr::int(1)]), Expr::call("sum", vec![n()])]),
    );
    let program: Program = [
        Definition::ground(Clause::new("sum", vec![Pattern::Lit(0.into())], Expr::int(0))),
        Definition::new(Quantifier::Parallel(vec!["n".into()]), rec),
    ]
    .into_iter()
    .collect();
    print!("{}", pretty_print(&program));

    let mut session = Session::new(program, Default::default(), Budget::new(1_000_000, 5_000));
    for q in ["sum(10)", "sum(4) + sum(10)", "sum(-1)", "sum(100000)", "sum(4000)"] {
        match session.eval(&parse_expr(q).unwrap()) {
            Ok((value, stats)) => println!("{q} = {value} ({} body evaluations)", stats.body_evals()),
            Err(e @ EvalError::BudgetExceeded { .. }) => println!("{q}: out of budget: {e}"),
            Err(e) => println!("{q}: {e}"),
        }
    }
    println!("program holds {} definitions", session.program().len());
    session.reset();
    println!("after reset: {}", session.program().len());
}
