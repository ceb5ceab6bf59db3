//! Parser properties: print/parse round trips on generated expressions and
//! finite-difference agreement of the symbolic derivative.

use proptest::prelude::*;
use waves_cli::expr::{Expr, ExprKind};
use waves_cli::{differentiate, parse_expression};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-4.0..4.0f64).prop_map(|c| Expr::synthetic(ExprKind::Const((c * 16.0).round() / 16.0))),
        Just(Expr::synthetic(ExprKind::Var)),
        Just(Expr::synthetic(ExprKind::Pi)),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 48, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::synthetic(ExprKind::Add(
                Box::new(a),
                Box::new(b)
            ))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::synthetic(ExprKind::Sub(
                Box::new(a),
                Box::new(b)
            ))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::synthetic(ExprKind::Mul(
                Box::new(a),
                Box::new(b)
            ))),
            inner
                .clone()
                .prop_map(|a| Expr::synthetic(ExprKind::Neg(Box::new(a)))),
            (inner.clone(), 0..4i32)
                .prop_map(|(a, n)| Expr::synthetic(ExprKind::Pow(Box::new(a), n))),
            inner
                .clone()
                .prop_map(|a| Expr::synthetic(ExprKind::Sin(Box::new(a)))),
            inner
                .clone()
                .prop_map(|a| Expr::synthetic(ExprKind::Cos(Box::new(a)))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// pretty-print then parse reproduces the tree, and printing again
    /// reproduces the text (identity up to whitespace)
    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let printed = format!("{e}");
        let parsed = parse_expression(&printed).unwrap();
        prop_assert_eq!(&parsed, &e);
        prop_assert_eq!(format!("{parsed}"), printed);
    }

    /// symbolic derivatives agree with central differences
    #[test]
    fn derivative_matches_finite_difference(e in arb_expr(), u in -1.5..1.5f64) {
        let d1 = differentiate(&e, 1);
        let h = 1e-6;
        let fd = (e.eval(u + h) - e.eval(u - h)) / (2.0 * h);
        let exact = d1.eval(u);
        if fd.is_finite() && exact.is_finite() {
            let scale = 1.0 + fd.abs().max(exact.abs());
            prop_assert!((fd - exact).abs() <= 1e-5 * scale, "{} vs {}", fd, exact);
        }
    }
}
