//! Exact symbolic differentiation with light simplification, and the
//! bridge from expressions to the smooth-function interface of the wave
//! library.

use std::sync::Arc;

use waves_core::{Nonlinearity, SmoothFn};

use crate::expr::{Expr, ExprKind, SyntaxError};

fn boxed(kind: ExprKind) -> Box<Expr> {
    Box::new(Expr::synthetic(kind))
}

fn constant(c: f64) -> ExprKind {
    ExprKind::Const(c)
}

fn is_zero(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Const(c) if c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e.kind, ExprKind::Const(c) if c == 1.0)
}

/// Constant folding and unit/zero elimination.
pub fn simplify(e: &Expr) -> Expr {
    use ExprKind::*;
    let kind = match &e.kind {
        Const(c) => Const(*c),
        Pi => Pi,
        Var => Var,
        Neg(a) => {
            let a = simplify(a);
            match a.kind {
                Const(c) => Const(-c),
                Neg(inner) => inner.kind,
                _ => Neg(Box::new(a)),
            }
        }
        Add(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a.kind, &b.kind) {
                (Const(x), Const(y)) => Const(x + y),
                _ if is_zero(&a) => b.kind,
                _ if is_zero(&b) => a.kind,
                _ => Add(Box::new(a), Box::new(b)),
            }
        }
        Sub(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a.kind, &b.kind) {
                (Const(x), Const(y)) => Const(x - y),
                _ if is_zero(&b) => a.kind,
                _ if is_zero(&a) => Neg(Box::new(b)),
                _ => Sub(Box::new(a), Box::new(b)),
            }
        }
        Mul(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a.kind, &b.kind) {
                (Const(x), Const(y)) => Const(x * y),
                _ if is_zero(&a) || is_zero(&b) => constant(0.0),
                _ if is_one(&a) => b.kind,
                _ if is_one(&b) => a.kind,
                _ => Mul(Box::new(a), Box::new(b)),
            }
        }
        Div(a, b) => {
            let (a, b) = (simplify(a), simplify(b));
            match (&a.kind, &b.kind) {
                (Const(x), Const(y)) if *y != 0.0 => Const(x / y),
                _ if is_zero(&a) => constant(0.0),
                _ if is_one(&b) => a.kind,
                _ => Div(Box::new(a), Box::new(b)),
            }
        }
        Pow(a, n) => {
            let a = simplify(a);
            match (&a.kind, n) {
                (_, 0) => constant(1.0),
                (_, 1) => a.kind,
                (Const(c), n) => Const(c.powi(*n)),
                _ => Pow(Box::new(a), *n),
            }
        }
        Sin(a) => Sin(Box::new(simplify(a))),
        Cos(a) => Cos(Box::new(simplify(a))),
        Exp(a) => Exp(Box::new(simplify(a))),
        Ln(a) => Ln(Box::new(simplify(a))),
    };
    Expr::synthetic(kind)
}

fn d(e: &Expr) -> Expr {
    use ExprKind::*;
    let kind = match &e.kind {
        Const(_) | Pi => constant(0.0),
        Var => constant(1.0),
        Neg(a) => Neg(Box::new(d(a))),
        Add(a, b) => Add(Box::new(d(a)), Box::new(d(b))),
        Sub(a, b) => Sub(Box::new(d(a)), Box::new(d(b))),
        Mul(a, b) => Add(
            boxed(Mul(Box::new(d(a)), b.clone())),
            boxed(Mul(a.clone(), Box::new(d(b)))),
        ),
        Div(a, b) => Div(
            boxed(Sub(
                boxed(Mul(Box::new(d(a)), b.clone())),
                boxed(Mul(a.clone(), Box::new(d(b)))),
            )),
            boxed(Pow(b.clone(), 2)),
        ),
        Pow(a, n) => Mul(
            boxed(Mul(
                boxed(constant(*n as f64)),
                boxed(Pow(a.clone(), n - 1)),
            )),
            Box::new(d(a)),
        ),
        Sin(a) => Mul(boxed(Cos(a.clone())), Box::new(d(a))),
        Cos(a) => Neg(boxed(Mul(boxed(Sin(a.clone())), Box::new(d(a))))),
        Exp(a) => Mul(boxed(Exp(a.clone())), Box::new(d(a))),
        Ln(a) => Div(Box::new(d(a)), a.clone()),
    };
    Expr::synthetic(kind)
}

/// Exact symbolic derivative of the given order.
pub fn differentiate(e: &Expr, order: usize) -> Expr {
    let mut cur = simplify(e);
    for _ in 0..order {
        cur = simplify(&d(&cur));
    }
    cur
}

/// An expression with its precomputed derivatives, usable as a smooth
/// function of the wave library.
pub struct ExprFn {
    derivs: Vec<Expr>,
}

pub const EXPR_MAX_ORDER: usize = 8;

impl ExprFn {
    pub fn new(e: &Expr) -> Self {
        let mut derivs = Vec::with_capacity(EXPR_MAX_ORDER + 1);
        derivs.push(simplify(e));
        for k in 1..=EXPR_MAX_ORDER {
            let next = simplify(&d(&derivs[k - 1]));
            derivs.push(next);
        }
        Self { derivs }
    }
}

impl SmoothFn for ExprFn {
    fn max_order(&self) -> usize {
        EXPR_MAX_ORDER
    }
    fn eval_deriv(&self, order: usize, u: f64) -> f64 {
        self.derivs[order].eval(u)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ExprNonlinearityError {
    #[error("{which}: {err}")]
    Parse { which: &'static str, err: SyntaxError },
    #[error("{which}: denominator vanishes near u={at} (expression span {span:?})")]
    DenominatorVanishes {
        which: &'static str,
        at: f64,
        span: (usize, usize),
    },
    #[error("{0}")]
    Core(#[from] waves_core::CoreError),
}

/// Build a validated nonlinearity from flux/source expressions.
pub fn nonlinearity_from_expressions(
    f_text: &str,
    g_text: &str,
    domain: (f64, f64),
) -> Result<Nonlinearity, ExprNonlinearityError> {
    let f = crate::expr::parse_expression(f_text)
        .map_err(|err| ExprNonlinearityError::Parse { which: "f", err })?;
    let g = crate::expr::parse_expression(g_text)
        .map_err(|err| ExprNonlinearityError::Parse { which: "g", err })?;
    // denominator sample check on the working interval
    for (which, e, text) in [("f", &f, f_text), ("g", &g, g_text)] {
        let _ = text;
        for span in e.division_spans() {
            // re-parse the denominator region is involved; instead sample
            // the whole expression for non-finite values
            for i in 0..=1000 {
                let u = domain.0 + (domain.1 - domain.0) * i as f64 / 1000.0;
                if !e.eval(u).is_finite() {
                    return Err(ExprNonlinearityError::DenominatorVanishes {
                        which,
                        at: u,
                        span,
                    });
                }
            }
        }
    }
    let nl = Nonlinearity::new(
        Arc::new(ExprFn::new(&f)),
        Arc::new(ExprFn::new(&g)),
        domain,
    )?;
    Ok(nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expression;

    #[test]
    fn figure_flux_derivative() {
        let e = parse_expression("-cos(7/4*u)").unwrap();
        let de = differentiate(&e, 1);
        // (7/4) sin(7u/4) at u=1
        assert!((de.eval(1.0) - 1.75 * (1.75f64).sin()).abs() < 1e-14);
        assert!((de.eval(1.0) - 1.72199).abs() < 5e-5);
    }

    #[test]
    fn constant_derivative_is_zero() {
        let e = parse_expression("3.5").unwrap();
        assert_eq!(differentiate(&e, 1).eval(10.0), 0.0);
    }

    #[test]
    fn odd_function_second_derivative_at_zero() {
        let e = parse_expression("sin(pi*u)").unwrap();
        let d2 = differentiate(&e, 2);
        assert!(d2.eval(0.0).abs() < 1e-15);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let texts = [
            "-cos(7/4*u)",
            "u**2*(u-2)**2/4",
            "exp(-u**2)*sin(2*u)",
            "ln(u+4)",
        ];
        for text in texts {
            let e = parse_expression(text).unwrap();
            for order in 1..=4usize {
                let dk = differentiate(&e, order);
                let dk1 = differentiate(&e, order - 1);
                for i in 0..=20 {
                    let u = -1.5 + 3.0 * i as f64 / 20.0;
                    let h = 1e-5;
                    let fd = (dk1.eval(u + h) - dk1.eval(u - h)) / (2.0 * h);
                    let exact = dk.eval(u);
                    assert!(
                        (fd - exact).abs() <= 1e-6 * (1.0 + exact.abs().max(fd.abs())),
                        "{text} order {order} at {u}: {fd} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn expression_nonlinearity_matches_catalog() {
        let nl = nonlinearity_from_expressions("-cos(7/4*u)", "sin(pi*u)", (-4.0, 4.0)).unwrap();
        let cat = waves_core::catalog::figure().unwrap();
        for i in 0..=40 {
            let u = -2.0 + 4.0 * i as f64 / 40.0;
            assert!((nl.f(u) - cat.f(u)).abs() < 1e-14);
            assert!((nl.g1(u) - cat.g1(u)).abs() < 1e-13);
            assert!((nl.f_deriv(5, u).unwrap() - cat.f_deriv(5, u).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn vanishing_denominator_is_rejected() {
        let err = nonlinearity_from_expressions("1/(u-1)", "sin(pi*u)", (-4.0, 4.0)).unwrap_err();
        assert!(matches!(
            err,
            ExprNonlinearityError::DenominatorVanishes { which: "f", .. }
        ));
    }
}
