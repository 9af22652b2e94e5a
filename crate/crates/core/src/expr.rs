//! Expressions over `u[i,j]`, `x[i,j]`, `v`, `q`, integers, `+ - * ^ ( )`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? INT)*
//! atom  := INT | 'v' | 'q' | ('u' | 'x') '[' INT ',' INT ']' | '(' expr ')'
//! ```
//!
//! `q` is replaced by `v^(2n)` while parsing.

use std::fmt;

use num_traits::One;

use crate::coeff::{LaurentScalar, Rational};
use crate::error::{Error, Result};
use crate::frobenius::CommutativeSlnPoly;
use crate::ncalg::{GeneratorId, NcMonomial, NcPolynomial};
use crate::qsln::ExponentMatrix;

/// Largest accepted exponent magnitude.
pub const MAX_EXPONENT: i64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenKind {
    /// `u[i,j]`, noncommuting.
    Quantum,
    /// `x[i,j]`, commuting.
    Classical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    V,
    Gen { kind: GenKind, row: usize, col: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn has_generator(&self) -> bool {
        match self {
            Expr::Int(_) | Expr::V => false,
            Expr::Gen { .. } => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_generator(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_generator() || b.has_generator(),
        }
    }

    fn has_kind(&self, k: GenKind) -> bool {
        match self {
            Expr::Int(_) | Expr::V => false,
            Expr::Gen { kind, .. } => *kind == k,
            Expr::Neg(a) | Expr::Pow(a, _) => a.has_kind(k),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => a.has_kind(k) || b.has_kind(k),
        }
    }
}

/// Fully parenthesized; re-parses to an equal tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::V => f.write_str("v"),
            Expr::Gen { kind: GenKind::Quantum, row, col } => write!(f, "u[{row},{col}]"),
            Expr::Gen { kind: GenKind::Classical, row, col } => write!(f, "x[{row},{col}]"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Pow(a, e) => write!(f, "({a}^{e})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(char),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut p = 0;
    while p < bytes.len() {
        let c = bytes[p];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                p += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = p;
                while p < bytes.len() && bytes[p].is_ascii_digit() {
                    p += 1;
                }
                let k = text[start..p]
                    .parse()
                    .map_err(|_| Error::Parse { pos: start, msg: "integer literal too large".into() })?;
                out.push((start, Tok::Int(k)));
                continue;
            }
            b'u' | b'x' | b'v' | b'q' => Tok::Ident(c as char),
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            _ => {
                let ch = text[p..].chars().next().unwrap_or('?');
                return Err(Error::Parse { pos: p, msg: format!("unexpected character {ch:?}") });
            }
        };
        out.push((p, tok));
        p += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
    depth: usize,
}

const MAX_DEPTH: usize = 200;

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.into() })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn int(&mut self) -> Result<u64> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(k)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("expression nested too deeply");
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::Star) {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(Tok::Minus) {
            self.pos += 1;
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let mut base = self.atom()?;
        while self.peek() == Some(Tok::Caret) {
            let caret = self.here();
            self.pos += 1;
            let neg = if self.peek() == Some(Tok::Minus) {
                self.pos += 1;
                true
            } else {
                false
            };
            let k = self.int()?;
            if k > MAX_EXPONENT as u64 {
                return Err(Error::Parse { pos: caret, msg: format!("exponent exceeds {MAX_EXPONENT}") });
            }
            let e = if neg { -(k as i64) } else { k as i64 };
            if e < 0 && base.has_generator() {
                return Err(Error::Parse { pos: caret, msg: "negative exponent on a generator".into() });
            }
            base = Expr::Pow(Box::new(base), e);
        }
        Ok(base)
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.here();
        let k = self.int()?;
        if k == 0 || k > self.n as u64 {
            return Err(Error::Parse { pos: at, msg: format!("index {k} outside 1..{}", self.n) });
        }
        Ok(k as usize)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Expr::Int(k))
            }
            Some(Tok::Ident('v')) => {
                self.pos += 1;
                Ok(Expr::V)
            }
            Some(Tok::Ident('q')) => {
                self.pos += 1;
                Ok(Expr::Pow(Box::new(Expr::V), 2 * self.n as i64))
            }
            Some(Tok::Ident(c @ ('u' | 'x'))) => {
                self.pos += 1;
                self.expect(Tok::LBracket, "'['")?;
                let row = self.index()?;
                self.expect(Tok::Comma, "','")?;
                let col = self.index()?;
                self.expect(Tok::RBracket, "']'")?;
                let kind = if c == 'u' { GenKind::Quantum } else { GenKind::Classical };
                Ok(Expr::Gen { kind, row, col })
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(_) => self.err("expected an operand"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` for rank `n`; positions in errors are byte offsets.
pub fn parse_expression(text: &str, n: usize) -> Result<Expr> {
    if n == 0 || n > 255 {
        return Err(Error::Precondition(format!("rank {n} outside 1..255")));
    }
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), n, depth: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

fn scalar_of(p: &NcPolynomial<LaurentScalar>) -> Option<LaurentScalar> {
    match p.num_terms() {
        0 => Some(LaurentScalar::zero()),
        1 => p.coeff(&NcMonomial::one()).cloned(),
        _ => None,
    }
}

/// Evaluates into the free algebra over `Q[v, v^-1]`, applying `reduce`
/// after every product so powers stay small.
pub fn eval_noncommutative(
    e: &Expr,
    reduce: &dyn Fn(&NcPolynomial<LaurentScalar>) -> Result<NcPolynomial<LaurentScalar>>,
) -> Result<NcPolynomial<LaurentScalar>> {
    if e.has_kind(GenKind::Classical) {
        return Err(Error::Precondition("x[i,j] is not available in a noncommutative algebra".into()));
    }
    fn go(
        e: &Expr,
        reduce: &dyn Fn(&NcPolynomial<LaurentScalar>) -> Result<NcPolynomial<LaurentScalar>>,
    ) -> Result<NcPolynomial<LaurentScalar>> {
        let one = LaurentScalar::one();
        Ok(match e {
            Expr::Int(k) => NcPolynomial::constant(LaurentScalar::from_int(*k as i64)),
            Expr::V => NcPolynomial::constant(LaurentScalar::v_pow(1)),
            Expr::Gen { row, col, .. } => NcPolynomial::gen(GeneratorId::new(*row, *col), one),
            Expr::Neg(a) => go(a, reduce)?.neg(),
            Expr::Add(a, b) => go(a, reduce)?.add(&go(b, reduce)?)?,
            Expr::Sub(a, b) => go(a, reduce)?.sub(&go(b, reduce)?)?,
            Expr::Mul(a, b) => reduce(&go(a, reduce)?.multiply(&go(b, reduce)?)?)?,
            Expr::Pow(a, k) => {
                let base = go(a, reduce)?;
                if *k < 0 {
                    let s = scalar_of(&base)
                        .and_then(|s| s.pow(*k))
                        .ok_or_else(|| Error::Precondition(format!("{a} is not invertible")))?;
                    NcPolynomial::constant(s)
                } else {
                    let mut acc = NcPolynomial::constant(one);
                    for _ in 0..*k {
                        acc = reduce(&acc.multiply(&base)?)?;
                    }
                    acc
                }
            }
        })
    }
    go(e, reduce)
}

/// Evaluates into `O(SLn)` at `v = 1` (so `q = 1`), reducing modulo
/// `det X = 1` after every product.
pub fn eval_classical(e: &Expr, n: usize) -> Result<CommutativeSlnPoly> {
    use crate::frobenius::classical_normal_form;
    if e.has_kind(GenKind::Quantum) {
        return Err(Error::Precondition("u[i,j] is not available in the classical algebra; use x[i,j]".into()));
    }
    let constant = |c: Rational| CommutativeSlnPoly::monomial(ExponentMatrix::zero(n), c);
    let minus_one = constant(-Rational::one());
    fn go(e: &Expr, n: usize, constant: &dyn Fn(Rational) -> CommutativeSlnPoly, m1: &CommutativeSlnPoly) -> Result<CommutativeSlnPoly> {
        Ok(match e {
            Expr::Int(k) => constant(Rational::from_integer((*k).into())),
            Expr::V => CommutativeSlnPoly::one(n),
            Expr::Gen { row, col, .. } => CommutativeSlnPoly::x(n, *row, *col),
            Expr::Neg(a) => go(a, n, constant, m1)?.mul(m1),
            Expr::Add(a, b) => go(a, n, constant, m1)?.add(&go(b, n, constant, m1)?),
            Expr::Sub(a, b) => go(a, n, constant, m1)?.add(&go(b, n, constant, m1)?.mul(m1)),
            Expr::Mul(a, b) => classical_normal_form(&go(a, n, constant, m1)?.mul(&go(b, n, constant, m1)?)),
            Expr::Pow(a, k) => {
                let base = go(a, n, constant, m1)?;
                if *k < 0 {
                    let terms: Vec<_> = base.terms().collect();
                    let c = match terms.as_slice() {
                        [(m, c)] if m.degree() == 0 => (*c).clone(),
                        _ => return Err(Error::Precondition(format!("{a} is not invertible"))),
                    };
                    let inv = num_traits::Inv::inv(c);
                    let mut acc = CommutativeSlnPoly::one(n);
                    for _ in 0..-*k {
                        acc = acc.mul(&constant(inv.clone()));
                    }
                    acc
                } else {
                    let mut acc = CommutativeSlnPoly::one(n);
                    for _ in 0..*k {
                        acc = classical_normal_form(&acc.mul(&base));
                    }
                    acc
                }
            }
        })
    }
    Ok(classical_normal_form(&go(e, n, &constant, &minus_one)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn det_q_expression() {
        let e = parse_expression("u[1,1]*u[2,2] - q*u[1,2]*u[2,1]", 2).unwrap();
        let p = eval_noncommutative(&e, &|p| Ok(p.clone())).unwrap();
        assert_eq!(p, crate::qmatrix::quantum_det(2, crate::qmatrix::DetForm::Column));
    }

    #[test]
    fn unit_scalar() {
        let e = parse_expression("v^0", 3).unwrap();
        assert_eq!(e, Expr::Pow(Box::new(Expr::V), 0));
        let p = eval_noncommutative(&e, &|p| Ok(p.clone())).unwrap();
        assert_eq!(p, NcPolynomial::constant(LaurentScalar::one()));
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse_expression("u[3,1]", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expression("u[1,1]^-1", 2), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_expression("1 + ", 2), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_expression("1 $ 2", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expression("(1", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expression("1 2", 2), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_expression("v^1001", 2).is_err());
        assert!(parse_expression(&"(".repeat(1000), 2).is_err());
        assert!(parse_expression(&"-".repeat(1000), 2).is_err());
    }

    #[test]
    fn precedence() {
        let e = parse_expression("-u[1,1]^2*v + 1", 2).unwrap();
        assert_eq!(e.to_string(), "(((-(u[1,1]^2)) * v) + 1)");
        assert_eq!(parse_expression("q", 3).unwrap().to_string(), "(v^6)");
    }

    #[test]
    fn scalar_inverse() {
        let e = parse_expression("(2*v)^-2 * u[1,2]", 2).unwrap();
        let p = eval_noncommutative(&e, &|p| Ok(p.clone())).unwrap();
        let c = LaurentScalar::monomial(Rational::new(1.into(), 4.into()), -2);
        assert_eq!(p, NcPolynomial::gen(GeneratorId::new(1, 2), c));
        let bad = parse_expression("(1 + v)^-1", 2).unwrap();
        assert!(eval_noncommutative(&bad, &|p| Ok(p.clone())).is_err());
    }

    #[test]
    fn classical_evaluation() {
        let e = parse_expression("x[1,1]*x[2,2] - x[1,2]*x[2,1]", 2).unwrap();
        assert_eq!(eval_classical(&e, 2).unwrap(), CommutativeSlnPoly::one(2));
        assert!(eval_classical(&parse_expression("u[1,1]", 2).unwrap(), 2).is_err());
        assert!(eval_noncommutative(&parse_expression("x[1,1]", 2).unwrap(), &|p| Ok(p.clone())).is_err());
        let h = parse_expression("2^-1 * x[1,2] - x[1,2] * 3^-1", 2).unwrap();
        let want = CommutativeSlnPoly::monomial(ExponentMatrix::unit(2, 1, 2), Rational::new(1.into(), 6.into()));
        assert_eq!(eval_classical(&h, 2).unwrap(), want);
    }

    fn arb_expr(n: usize) -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(Expr::Int),
            Just(Expr::V),
            (1..=n, 1..=n, any::<bool>()).prop_map(|(row, col, q)| Expr::Gen {
                kind: if q { GenKind::Quantum } else { GenKind::Classical },
                row,
                col
            }),
        ];
        leaf.prop_recursive(6, 64, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner, -20i64..20).prop_map(|(a, e)| {
                    let e = if a.has_generator() { e.abs() } else { e };
                    Expr::Pow(Box::new(a), e)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_roundtrip(e in arb_expr(3)) {
            let printed = e.to_string();
            prop_assert_eq!(parse_expression(&printed, 3).unwrap(), e);
        }

        #[test]
        fn parser_never_panics(s in "[uxvq0-9+*^()\\[\\], -]{0,40}") {
            let _ = parse_expression(&s, 3);
        }
    }
}
