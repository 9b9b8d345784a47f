//! Surface syntax for states: parsing, printing and evaluation.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := rational [factor] | factor
//! factor := rational | '|0>' | name ['{' ident '}'] ['(' int ')' [factor]]
//!         | ':' factor factor ':' | '(' expr '@' int expr ')'
//!         | 'D' ['^' nat] '(' expr ')' | '(' expr 'ox' expr ')' | '(' expr ')'
//! ```
//!
//! A mode application `x(k)` immediately followed (no whitespace) by a factor
//! other than a bare Wick product acts on it, so the printed monomial
//! `b{1}(-1)c{1}(-2)` parses back to the state it came from. Literal coefficients are non-negative; signs live in
//! sums.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{FreeFieldAlgebra, GenId, State};
use crate::engine;
use crate::equivariant::{SgtModule, WeilTensor};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::weil::WeilAlgebra;

#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    /// byte range in the source text; ignored by equality
    pub span: (usize, usize),
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(Scalar),
    Vacuum,
    /// generator or named constant, optionally applied as a mode
    Name { name: String, index: Option<String>, mode: Option<i32>, arg: Option<Box<Expr>> },
    Wick(Box<Expr>, Box<Expr>),
    Circle(Box<Expr>, i32, Box<Expr>),
    Deriv(u32, Box<Expr>),
    Tensor(Box<Expr>, Box<Expr>),
    /// `c x` with c ≥ 0
    Scale(Scalar, Box<Expr>),
    /// signed terms; more than one, or a single negated one
    Sum(Vec<(bool, Expr)>),
}

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Expr { kind, span: (0, 0) }
    }
}

// ---------------------------------------------------------------- printing

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Sum(terms) => {
                for (i, (neg, t)) in terms.iter().enumerate() {
                    match (i, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    write!(f, "{}", Term(t))?;
                }
                Ok(())
            }
            _ => write!(f, "{}", Term(self)),
        }
    }
}

/// An expression in term position: sums get parenthesized.
struct Term<'a>(&'a Expr);
/// An expression in factor position: sums and scalings get parenthesized.
struct Factor<'a>(&'a Expr);

impl fmt::Display for Term<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            ExprKind::Sum(_) => write!(f, "({})", self.0),
            ExprKind::Scale(c, x) => write!(f, "{c} {}", Factor(x)),
            _ => write!(f, "{}", Factor(self.0)),
        }
    }
}

impl fmt::Display for Factor<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            ExprKind::Sum(_) | ExprKind::Scale(..) => write!(f, "({})", self.0),
            ExprKind::Num(c) => write!(f, "{c}"),
            ExprKind::Vacuum => write!(f, "|0>"),
            ExprKind::Name { name, index, mode, arg } => {
                write!(f, "{name}")?;
                if let Some(i) = index {
                    write!(f, "{{{i}}}")?;
                }
                if let Some(k) = mode {
                    write!(f, "({k})")?;
                    match arg.as_deref() {
                        // a bare ':' here would read as the end of an enclosing Wick product
                        Some(a @ Expr { kind: ExprKind::Wick(..), .. }) => write!(f, "({a})")?,
                        Some(a) => write!(f, "{}", Factor(a))?,
                        None => {}
                    }
                }
                Ok(())
            }
            ExprKind::Wick(a, b) => write!(f, ":{} {}:", Factor(a), Factor(b)),
            ExprKind::Circle(a, n, b) => write!(f, "({} @{n} {})", a, b),
            ExprKind::Deriv(1, a) => write!(f, "D({a})"),
            ExprKind::Deriv(k, a) => write!(f, "D^{k}({a})"),
            ExprKind::Tensor(a, b) => write!(f, "({a} ox {b})"),
        }
    }
}

// ---------------------------------------------------------------- parsing

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

fn is_ident(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.ws();
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn at_keyword_ox(&self) -> bool {
        self.s[self.pos..].starts_with(b"ox") && !self.s.get(self.pos + 2).copied().is_some_and(is_ident)
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Some(b':') | Some(b'(') | Some(b'|') => true,
            Some(c) if is_ident(c) => !self.at_keyword_ox(),
            _ => false,
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        self.ws();
        let start = self.pos;
        let mut terms = Vec::new();
        let mut neg = false;
        if self.eat(b'-') {
            neg = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let t = self.term()?;
            terms.push((neg, t));
            self.ws();
            match self.peek() {
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                _ => break,
            }
            self.pos += 1;
        }
        if terms.len() == 1 && !terms[0].0 {
            return Ok(terms.pop().unwrap().1);
        }
        Ok(Expr { kind: ExprKind::Sum(terms), span: (start, self.pos) })
    }

    fn term(&mut self) -> Result<Expr> {
        self.ws();
        let start = self.pos;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.number()?;
            self.ws();
            if self.starts_factor() {
                let x = self.factor()?;
                return Ok(Expr { kind: ExprKind::Scale(c, Box::new(x)), span: (start, self.pos) });
            }
            return Ok(Expr { kind: ExprKind::Num(c), span: (start, self.pos) });
        }
        self.factor()
    }

    fn number(&mut self) -> Result<Scalar> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let d0 = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if d0 == self.pos {
                return Err(self.err("expected denominator"));
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse::<Scalar>().map_err(|_| Error::Syntax { pos: start, msg: format!("bad rational '{text}'") })
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        self.eat(b'-');
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        text.parse::<i64>().map_err(|_| Error::Syntax { pos: start, msg: "expected integer".into() })
    }

    fn int32(&mut self) -> Result<i32> {
        let start = self.pos;
        let v = self.int()?;
        i32::try_from(v).map_err(|_| Error::Syntax { pos: start, msg: "integer out of range".into() })
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(is_ident) {
            self.pos += 1;
        }
        String::from_utf8(self.s[start..self.pos].to_vec()).unwrap()
    }

    fn factor(&mut self) -> Result<Expr> {
        self.ws();
        let start = self.pos;
        let kind = match self.peek() {
            None => return Err(self.err("unexpected end of input")),
            Some(c) if c.is_ascii_digit() => ExprKind::Num(self.number()?),
            Some(b'|') => {
                if self.s[self.pos..].starts_with(b"|0>") {
                    self.pos += 3;
                    ExprKind::Vacuum
                } else {
                    return Err(self.err("expected '|0>'"));
                }
            }
            Some(b':') => {
                self.pos += 1;
                let a = self.factor()?;
                self.ws();
                let b = self.factor()?;
                self.expect(b':')?;
                ExprKind::Wick(Box::new(a), Box::new(b))
            }
            Some(b'(') => {
                self.pos += 1;
                let a = self.expr()?;
                self.ws();
                if self.eat(b'@') {
                    let n = self.int32()?;
                    let b = self.expr()?;
                    self.expect(b')')?;
                    ExprKind::Circle(Box::new(a), n, Box::new(b))
                } else if self.at_keyword_ox() {
                    self.pos += 2;
                    let b = self.expr()?;
                    self.expect(b')')?;
                    ExprKind::Tensor(Box::new(a), Box::new(b))
                } else {
                    self.expect(b')')?;
                    return Ok(a);
                }
            }
            Some(c) if is_ident(c) && !self.at_keyword_ox() => {
                let name = self.ident();
                if name == "D" && matches!(self.peek(), Some(b'(') | Some(b'^')) {
                    let k = if self.eat(b'^') {
                        let p = self.pos;
                        let v = self.int()?;
                        u32::try_from(v).map_err(|_| Error::Syntax { pos: p, msg: "expected natural number".into() })?
                    } else {
                        1
                    };
                    self.expect(b'(')?;
                    let a = self.expr()?;
                    self.expect(b')')?;
                    ExprKind::Deriv(k, Box::new(a))
                } else {
                    let index = if self.eat(b'{') {
                        let i = self.ident();
                        if i.is_empty() {
                            return Err(self.err("expected index"));
                        }
                        if !self.eat(b'}') {
                            return Err(self.err("expected '}'"));
                        }
                        Some(i)
                    } else {
                        None
                    };
                    let (mut mode, mut arg) = (None, None);
                    if self.eat(b'(') {
                        mode = Some(self.int32()?);
                        self.expect(b')')?;
                        if self.starts_factor() && self.peek() != Some(b':') {
                            arg = Some(Box::new(self.factor()?));
                        }
                    }
                    ExprKind::Name { name, index, mode, arg }
                }
            }
            Some(_) => return Err(self.err("expected a factor")),
        };
        Ok(Expr { kind, span: (start, self.pos) })
    }
}

// ---------------------------------------------------------------- evaluation

/// Names, generators and (for W(g)⊗A) the two factors.
#[derive(Clone, Debug)]
pub struct EvalContext {
    pub algebra: FreeFieldAlgebra,
    /// keys like "bigL" or "ThetaW{1}"
    pub named: BTreeMap<String, State>,
    pub factors: Option<Box<(EvalContext, EvalContext, GenId)>>,
}

fn add_indexed(named: &mut BTreeMap<String, State>, labels: &[String], name: &str, states: &[State]) {
    for (i, s) in states.iter().enumerate() {
        named.insert(format!("{name}{{{}}}", i + 1), s.clone());
        if let Some(l) = labels.get(i) {
            if l.parse::<usize>().is_err() {
                named.insert(format!("{name}{{{l}}}"), s.clone());
            }
        }
    }
}

impl EvalContext {
    pub fn plain(algebra: &FreeFieldAlgebra) -> Self {
        EvalContext { algebra: algebra.clone(), named: BTreeMap::new(), factors: None }
    }

    pub fn weil(w: &WeilAlgebra) -> Self {
        let mut named = BTreeMap::new();
        let labels = &w.lie.basis;
        add_indexed(&mut named, labels, "ThetaE", &w.theta_e);
        add_indexed(&mut named, labels, "ThetaS", &w.theta_s);
        add_indexed(&mut named, labels, "ThetaW", &w.theta_w);
        let bs: Vec<State> = (0..w.dim()).map(|i| w.gen_state(w.b(i))).collect();
        let cs: Vec<State> = (0..w.dim()).map(|i| w.gen_state(w.c(i))).collect();
        add_indexed(&mut named, labels, "iota", &bs);
        add_indexed(&mut named, labels, "L", &w.theta_w);
        add_indexed(&mut named, labels, "theta", &cs);
        named.insert("LW".into(), w.virasoro_lw());
        named.insert("gW".into(), w.g_w());
        named.insert("bigL".into(), w.big_l());
        named.insert("q".into(), w.q_class());
        named.insert("dW".into(), w.d_current.clone());
        EvalContext { algebra: w.algebra.clone(), named, factors: None }
    }

    pub fn module(m: &SgtModule) -> Self {
        let mut named = BTreeMap::new();
        let labels = &m.lie.basis;
        add_indexed(&mut named, labels, "iota", &m.iota);
        add_indexed(&mut named, labels, "L", &m.l);
        if let Some(cf) = &m.chiral_free {
            add_indexed(&mut named, labels, "theta", &cf.theta);
        }
        if let Some(g) = m.connection() {
            add_indexed(&mut named, labels, "Gamma", &g);
        }
        if let Some(h) = &m.half_tva {
            named.insert("g".into(), h.g.clone());
        }
        named.insert("dA".into(), m.d.clone());
        EvalContext { algebra: m.ambient.clone(), named, factors: None }
    }

    /// W(g)⊗A: W names as in [`EvalContext::weil`] (embedded by w ↦ w⊗1),
    /// totals for iota and L, and `(x ox y)` for x ∈ W, y ∈ A.
    pub fn tensor(t: &WeilTensor) -> Self {
        let left = EvalContext::weil(&t.weil);
        let right = EvalContext::module(&t.a);
        let mut named = left.named.clone();
        let labels = &t.total.lie.basis;
        add_indexed(&mut named, labels, "iota", &t.total.iota);
        add_indexed(&mut named, labels, "L", &t.total.l);
        named.insert("d".into(), t.total.d.clone());
        EvalContext { algebra: t.total.ambient.clone(), named, factors: Some(Box::new((left, right, t.offset))) }
    }

    pub fn eval(&self, e: &Expr) -> Result<State> {
        let alg = &self.algebra;
        let pos = e.span.0;
        Ok(match &e.kind {
            ExprKind::Num(c) => State::scalar(c.clone()),
            ExprKind::Vacuum => State::vacuum(),
            ExprKind::Name { name, index, mode, arg } => {
                let key = match index {
                    Some(i) => format!("{name}{{{i}}}"),
                    None => name.clone(),
                };
                let target = match arg {
                    Some(a) => self.eval(a)?,
                    None => State::vacuum(),
                };
                if let Some(g) = alg.lookup(&key) {
                    match mode {
                        Some(k) => engine::apply_mode(alg, g, *k, &target),
                        None => alg.generator_state(g),
                    }
                } else if let Some(s) = self.named.get(&key) {
                    match mode {
                        Some(k) => engine::circle_product(alg, s, *k, &target),
                        None => s.clone(),
                    }
                } else {
                    return Err(Error::UnknownName { pos, name: key });
                }
            }
            ExprKind::Wick(a, b) => engine::wick(alg, &self.eval(a)?, &self.eval(b)?),
            ExprKind::Circle(a, n, b) => engine::circle_product(alg, &self.eval(a)?, *n, &self.eval(b)?),
            ExprKind::Deriv(k, a) => engine::derivative_pow(alg, &self.eval(a)?, *k),
            ExprKind::Tensor(a, b) => {
                let Some(f) = &self.factors else {
                    return Err(Error::GradeError { pos, msg: "'ox' needs a tensor product context".into() });
                };
                let (l, r, off) = (&f.0, &f.1, f.2);
                let x = l.eval(a)?;
                let y = r.eval(b)?.map_gens(|g| g + off);
                engine::wick(alg, &x, &y)
            }
            ExprKind::Scale(c, a) => self.eval(a)?.scale(c),
            ExprKind::Sum(terms) => {
                let mut out = State::zero();
                let mut parity: Option<bool> = None;
                for (neg, t) in terms {
                    let s = self.eval(t)?;
                    for m in s.terms.keys() {
                        let odd = alg.monomial_odd(m);
                        if *parity.get_or_insert(odd) != odd {
                            return Err(Error::GradeError { pos: t.span.0, msg: "sum mixes even and odd terms".into() });
                        }
                    }
                    out.add_scaled(&s, &Scalar::sign(*neg));
                }
                out
            }
        })
    }

    pub fn eval_str(&self, text: &str) -> Result<State> {
        self.eval(&parse_expr(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;

    fn w1() -> EvalContext {
        EvalContext::weil(&WeilAlgebra::build(&LieAlgebraData::abelian(1)).unwrap())
    }

    #[test]
    fn generator_mode() {
        let cx = w1();
        let g = cx.algebra.lookup("gamma{1}").unwrap();
        assert_eq!(cx.eval_str("gamma{1}(-1)").unwrap(), cx.algebra.generator_state(g));
        assert_eq!(cx.eval_str("gamma{1}").unwrap(), cx.algebra.generator_state(g));
    }

    #[test]
    fn pairing_is_vacuum() {
        assert_eq!(w1().eval_str("(b{1} @0 c{1})").unwrap(), State::vacuum());
    }

    #[test]
    fn printed_states_reparse() {
        let cx = w1();
        for name in ["LW", "gW", "q", "bigL"] {
            let s = cx.named[name].clone();
            let text = cx.algebra.format_state(&s);
            assert_eq!(cx.eval_str(&text).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn errors_carry_positions() {
        let cx = w1();
        assert!(matches!(cx.eval_str("b{1} + nope{1}"), Err(Error::UnknownName { pos: 7, .. })));
        assert!(matches!(parse_expr(":b{1} c{1}"), Err(Error::Syntax { .. })));
        assert!(matches!(cx.eval_str("b{1} + beta{1}"), Err(Error::GradeError { pos: 7, .. })));
        assert!(matches!(cx.eval_str("(b{1} ox c{1})"), Err(Error::GradeError { .. })));
    }

    #[test]
    fn print_shapes() {
        for t in [
            "-2 :beta{1} D(c{1}):",
            "(b{1} @0 c{1}) - 1/2 ThetaW{1}",
            "D^3(gamma{1}) + b{1}(-1)c{1}(-2)",
            "b{1}(0)(:c{1} beta{1}:)",
            "(gamma{1} ox 1)",
        ] {
            assert_eq!(parse_expr(t).unwrap().to_string(), t);
        }
    }
}
