//! Closed-form expressions in one state variable `u`: recursive-descent
//! parser with position-accurate errors, evaluation, pretty printing.
//!
//! Grammar (standard precedence, `**` binds tightest, integer exponents):
//!   expr   := term (('+' | '-') term)*
//!   term   := unary (('*' | '/') unary)*
//!   unary  := '-' unary | power
//!   power  := atom ('**' integer)?
//!   atom   := number | 'pi' | 'u' | name '(' expr ')' | '(' expr ')'
//! with names sin, cos, exp, ln.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Const(f64),
    Pi,
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// integer exponent
    Pow(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Ln(Box<Expr>),
}

/// One AST node with its source byte span.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: (usize, usize),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    fn new(kind: ExprKind, span: (usize, usize)) -> Self {
        Self { kind, span }
    }

    pub fn synthetic(kind: ExprKind) -> Self {
        Self {
            kind,
            span: (0, 0),
        }
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.kind {
            ExprKind::Const(c) => *c,
            ExprKind::Pi => std::f64::consts::PI,
            ExprKind::Var => u,
            ExprKind::Neg(a) => -a.eval(u),
            ExprKind::Add(a, b) => a.eval(u) + b.eval(u),
            ExprKind::Sub(a, b) => a.eval(u) - b.eval(u),
            ExprKind::Mul(a, b) => a.eval(u) * b.eval(u),
            ExprKind::Div(a, b) => a.eval(u) / b.eval(u),
            ExprKind::Pow(a, n) => a.eval(u).powi(*n),
            ExprKind::Sin(a) => a.eval(u).sin(),
            ExprKind::Cos(a) => a.eval(u).cos(),
            ExprKind::Exp(a) => a.eval(u).exp(),
            ExprKind::Ln(a) => a.eval(u).ln(),
        }
    }

    /// Source spans of all division nodes (for the denominator check).
    pub fn division_spans(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if matches!(e.kind, ExprKind::Div(..)) {
                out.push(e.span);
            }
        });
        out
    }

    fn walk<F: FnMut(&Expr)>(&self, f: &mut F) {
        f(self);
        match &self.kind {
            ExprKind::Neg(a)
            | ExprKind::Pow(a, _)
            | ExprKind::Sin(a)
            | ExprKind::Cos(a)
            | ExprKind::Exp(a)
            | ExprKind::Ln(a) => a.walk(f),
            ExprKind::Add(a, b)
            | ExprKind::Sub(a, b)
            | ExprKind::Mul(a, b)
            | ExprKind::Div(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            _ => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self.kind {
            ExprKind::Add(..) | ExprKind::Sub(..) => 1,
            ExprKind::Mul(..) | ExprKind::Div(..) => 2,
            ExprKind::Neg(..) => 3,
            ExprKind::Pow(..) => 4,
            _ => 5,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match &self.kind {
            ExprKind::Const(c) => write!(f, "{c}"),
            ExprKind::Pi => write!(f, "pi"),
            ExprKind::Var => write!(f, "u"),
            ExprKind::Neg(a) => {
                write!(f, "-")?;
                wrap(f, a, 3)
            }
            ExprKind::Add(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "+")?;
                wrap(f, b, 2)
            }
            ExprKind::Sub(a, b) => {
                wrap(f, a, 1)?;
                write!(f, "-")?;
                wrap(f, b, 2)
            }
            ExprKind::Mul(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "*")?;
                wrap(f, b, 3)
            }
            ExprKind::Div(a, b) => {
                wrap(f, a, 2)?;
                write!(f, "/")?;
                wrap(f, b, 3)
            }
            ExprKind::Pow(a, n) => {
                wrap(f, a, 5)?;
                if *n < 0 {
                    write!(f, "**({n})")
                } else {
                    write!(f, "**{n}")
                }
            }
            ExprKind::Sin(a) => write!(f, "sin({a})"),
            ExprKind::Cos(a) => write!(f, "cos({a})"),
            ExprKind::Exp(a) => write!(f, "exp({a})"),
            ExprKind::Ln(a) => write!(f, "ln({a})"),
        }
    }
}

/// Parse failure at a byte position with the set of expected items.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at position {position}: expected {expected}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: String,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, ch: u8) -> Result<(), SyntaxError> {
        if self.peek() == Some(ch) {
            self.pos += 1;
            Ok(())
        } else {
            Err(SyntaxError {
                position: self.pos,
                expected: format!("'{}'", ch as char),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Expr::new(
                        ExprKind::Add(Box::new(acc), Box::new(rhs)),
                        (start, self.pos),
                    );
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = Expr::new(
                        ExprKind::Sub(Box::new(acc), Box::new(rhs)),
                        (start, self.pos),
                    );
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') if self.text.get(self.pos + 1) != Some(&b'*') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = Expr::new(
                        ExprKind::Mul(Box::new(acc), Box::new(rhs)),
                        (start, self.pos),
                    );
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = Expr::new(
                        ExprKind::Div(Box::new(acc), Box::new(rhs)),
                        (start, self.pos),
                    );
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), (start, self.pos)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let start = self.pos;
        let base = self.atom()?;
        if self.peek() == Some(b'*') && self.text.get(self.pos + 1) == Some(&b'*') {
            self.pos += 2;
            let n = self.integer()?;
            return Ok(Expr::new(
                ExprKind::Pow(Box::new(base), n),
                (start, self.pos),
            ));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<i32, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let mut negative = false;
        let mut pos = self.pos;
        if self.text.get(pos) == Some(&b'(') {
            // parenthesized negative exponent
            pos += 1;
            if self.text.get(pos) == Some(&b'-') {
                negative = true;
                pos += 1;
            }
            let d0 = pos;
            while pos < self.text.len() && self.text[pos].is_ascii_digit() {
                pos += 1;
            }
            if pos == d0 || self.text.get(pos) != Some(&b')') {
                return Err(SyntaxError {
                    position: start,
                    expected: "integer exponent".into(),
                });
            }
            let n: i32 = std::str::from_utf8(&self.text[d0..pos])
                .unwrap()
                .parse()
                .map_err(|_| SyntaxError {
                    position: start,
                    expected: "integer exponent".into(),
                })?;
            self.pos = pos + 1;
            return Ok(if negative { -n } else { n });
        }
        let d0 = pos;
        while pos < self.text.len() && self.text[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == d0 {
            return Err(SyntaxError {
                position: start,
                expected: "integer exponent".into(),
            });
        }
        let n: i32 = std::str::from_utf8(&self.text[d0..pos])
            .unwrap()
            .parse()
            .map_err(|_| SyntaxError {
                position: start,
                expected: "integer exponent".into(),
            })?;
        self.pos = pos;
        let _ = negative;
        Ok(n)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(Expr::new(inner.kind, (start, self.pos)))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let mut pos = self.pos;
                while pos < self.text.len()
                    && (self.text[pos].is_ascii_digit()
                        || self.text[pos] == b'.'
                        || self.text[pos] == b'e'
                        || self.text[pos] == b'E'
                        || ((self.text[pos] == b'+' || self.text[pos] == b'-')
                            && pos > self.pos
                            && (self.text[pos - 1] == b'e' || self.text[pos - 1] == b'E')))
                {
                    pos += 1;
                }
                let s = std::str::from_utf8(&self.text[self.pos..pos]).unwrap();
                let value: f64 = s.parse().map_err(|_| SyntaxError {
                    position: start,
                    expected: "number".into(),
                })?;
                self.pos = pos;
                Ok(Expr::new(ExprKind::Const(value), (start, self.pos)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let mut pos = self.pos;
                while pos < self.text.len() && self.text[pos].is_ascii_alphabetic() {
                    pos += 1;
                }
                let name = std::str::from_utf8(&self.text[self.pos..pos]).unwrap();
                self.pos = pos;
                match name {
                    "u" => Ok(Expr::new(ExprKind::Var, (start, self.pos))),
                    "pi" => Ok(Expr::new(ExprKind::Pi, (start, self.pos))),
                    "sin" | "cos" | "exp" | "ln" => {
                        self.expect(b'(')?;
                        let inner = Box::new(self.expr()?);
                        self.expect(b')')?;
                        let kind = match name {
                            "sin" => ExprKind::Sin(inner),
                            "cos" => ExprKind::Cos(inner),
                            "exp" => ExprKind::Exp(inner),
                            _ => ExprKind::Ln(inner),
                        };
                        Ok(Expr::new(kind, (start, self.pos)))
                    }
                    other => Err(SyntaxError {
                        position: start,
                        expected: format!(
                            "one of u, pi, sin, cos, exp, ln (found '{other}')"
                        ),
                    }),
                }
            }
            _ => Err(SyntaxError {
                position: self.pos,
                expected: "number, 'u', 'pi', function or '('".into(),
            }),
        }
    }
}

/// Parse a closed-form expression in `u`.
pub fn parse_expression(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(SyntaxError {
            position: p.pos,
            expected: "end of input".into(),
        });
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_flux_parses_and_evaluates() {
        let e = parse_expression("-cos(7/4*u)").unwrap();
        assert_eq!(e.eval(0.0), -1.0);
        assert!((e.eval(1.0) + (1.75f64).cos()).abs() < 1e-15);
    }

    #[test]
    fn pi_constant() {
        let e = parse_expression("sin(pi*u)").unwrap();
        assert!(e.eval(1.0).abs() < 1e-15);
        assert!((e.eval(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dangling_power_reports_position_three() {
        let err = parse_expression("u**").unwrap_err();
        assert_eq!(err.position, 3);
        assert!(err.expected.contains("integer"));
    }

    #[test]
    fn precedence_and_parens() {
        let e = parse_expression("1+2*u**2").unwrap();
        assert_eq!(e.eval(3.0), 19.0);
        let e = parse_expression("(1+2*u)**2").unwrap();
        assert_eq!(e.eval(3.0), 49.0);
        let e = parse_expression("-u**2").unwrap();
        // unary minus binds looser than the power
        assert_eq!(e.eval(3.0), -9.0);
        let e = parse_expression("6/2/3").unwrap();
        assert_eq!(e.eval(0.0), 1.0);
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "-cos(7/4*u)",
            "sin(pi*u)",
            "u**2*(u-2)**2/4",
            "1-(u+2)*exp(-u**2)",
            "ln(u+3)/(u**2+1)",
        ] {
            let e = parse_expression(text).unwrap();
            let printed = format!("{e}");
            let e2 = parse_expression(&printed).unwrap();
            assert_eq!(e, e2, "{text} -> {printed}");
            assert_eq!(printed, format!("{e2}"));
        }
    }

    #[test]
    fn division_spans_are_tracked() {
        let e = parse_expression("sin(u)/(u+2)+1/4*u").unwrap();
        assert_eq!(e.division_spans().len(), 2);
    }
}
