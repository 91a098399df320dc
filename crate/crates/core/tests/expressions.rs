use std::collections::HashMap;

use hybridfrac::expr::{parse, BinOp, Expr, ExprError, Func};
use proptest::prelude::*;

fn env(pairs: &[(&str, f64)]) -> HashMap<String, f64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn eval(text: &str, pairs: &[(&str, f64)]) -> f64 {
    parse(text).unwrap().eval(&env(pairs)).unwrap()
}

#[test]
fn fixed_corpus() {
    let (x, y, t) = (1.7f64, -0.4f64, 0.3f64);
    let vars = [("x", x), ("y", y), ("t", t)];
    let corpus: [(&str, f64); 20] = [
        ("1 + 2 * 3", 7.0),
        ("(1 + 2) * 3", 9.0),
        ("2 ^ 3 ^ 2", 512.0),
        ("-2 ^ 2", -4.0),
        ("2 * -3", -6.0),
        ("10 / 4 / 5", 0.5),
        ("8 - 3 - 2", 3.0),
        ("x * y + t", x * y + t),
        ("x ^ 2 + y ^ 2", x * x + y * y),
        ("sin(x) * cos(y)", x.sin() * y.cos()),
        ("exp(t) - 1", t.exp() - 1.0),
        ("ln(x) / ln(10)", x.ln() / 10f64.ln()),
        ("sqrt(x * x + 1)", (x * x + 1.0).sqrt()),
        ("abs(y) + abs(-x)", y.abs() + x.abs()),
        ("pow(x, 1.5)", x.powf(1.5)),
        ("pow(y, 3)", y.powi(3)),
        ("1.5e-3 * x", 1.5e-3 * x),
        ("-(x - y) * -t", -(x - y) * -t),
        ("exp(sin(t)) ^ 2", t.sin().exp().powi(2)),
        ("x / (1 + y ^ 2) - t * 2.5E1", x / (1.0 + y * y) - t * 25.0),
    ];
    for (text, want) in corpus {
        let got = eval(text, &vars);
        assert!(
            (got - want).abs() <= 1e-14 * want.abs().max(1.0),
            "{text}: {got} vs {want}"
        );
    }
}

#[test]
fn documented_examples() {
    let shape = parse("y1 + y2^2").unwrap();
    let want = Expr::Binary(
        BinOp::Add,
        Box::new(Expr::Var("y1".into())),
        Box::new(Expr::Binary(
            BinOp::Pow,
            Box::new(Expr::Var("y2".into())),
            Box::new(Expr::Num(2.0)),
        )),
    );
    assert_eq!(shape, want);
    assert_eq!(eval("t*x", &[("t", 0.5), ("x", 4.0)]), 2.0);
    assert!((eval("exp(1)", &[]) - std::f64::consts::E).abs() <= 1e-15);
    assert_eq!(eval("2*y2^2", &[("y2", 3.0)]), 18.0);
    assert_eq!(eval("1/0", &[]), f64::INFINITY);
}

#[test]
fn error_cases() {
    assert!(matches!(
        parse("sin("),
        Err(ExprError::Syntax { pos: 4, .. })
    ));
    assert!(matches!(
        parse("foo(1)"),
        Err(ExprError::UnknownFunction { .. })
    ));
    assert!(matches!(parse("pow(1)"), Err(ExprError::Arity { .. })));
    assert!(matches!(parse("1 +"), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse("(1"), Err(ExprError::Syntax { .. })));
    assert!(matches!(parse(""), Err(ExprError::Syntax { .. })));
    match parse("q + 1").unwrap().eval(&HashMap::new()) {
        Err(ExprError::Unbound(name)) => assert_eq!(name, "q"),
        other => panic!("{other:?}"),
    }
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..10_000, 0u32..4).prop_map(|(m, e)| Expr::Num(m as f64 / 10f64.powi(e as i32))),
        prop::sample::select(vec!["t", "y1", "y2", "beta", "mu"])
            .prop_map(|s| Expr::Var(s.to_string())),
    ]
}

fn tree() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        let op = prop::sample::select(vec![
            BinOp::Add,
            BinOp::Sub,
            BinOp::Mul,
            BinOp::Div,
            BinOp::Pow,
        ]);
        let func = prop::sample::select(vec![
            Func::Sin,
            Func::Cos,
            Func::Exp,
            Func::Ln,
            Func::Sqrt,
            Func::Abs,
        ]);
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (op, inner.clone(), inner.clone()).prop_map(|(o, a, b)| Expr::Binary(
                o,
                Box::new(a),
                Box::new(b)
            )),
            (func, inner.clone()).prop_map(|(f, a)| Expr::Call(f, vec![a])),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Call(Func::Pow, vec![a, b])),
        ]
    })
}

proptest! {
    #[test]
    fn print_parse_round_trip(e in tree()) {
        let printed = e.to_string();
        let reparsed = parse(&printed).unwrap();
        prop_assert_eq!(&reparsed, &e, "printed as {}", printed);
        prop_assert_eq!(parse(&reparsed.to_string()).unwrap(), reparsed);
    }

    #[test]
    fn whitespace_is_insignificant(e in tree()) {
        let printed = e.to_string();
        let squeezed: String = printed.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(parse(&squeezed).unwrap(), e);
    }
}
