//! Text front end: real expressions in one variable, mapping specifications
//! and membership predicates.
//!
//! Expressions follow the usual precedence with unary minus binding tightest,
//! so `-x^2` is `(-x)^2`:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := unary ('^' factor)?
//! unary  := '-' unary | atom
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Mapping specifications are chains `m1|m2|…` applied left to right, each
//! item a catalog name with optional constant arguments.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::mappings::{catalog, compose, Mapping};
use crate::numerics::Interval;
use crate::realfn::RealFn;

/// Named constants substituted while parsing.
pub type Bindings = HashMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Ln,
    Log10,
    Exp,
    Sqrt,
    Abs,
    Sinh,
    Cosh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "ln" => Func::Ln,
            "log10" => Func::Log10,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Ln => "ln",
            Func::Log10 => "log10",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn apply(self, v: f64) -> Option<f64> {
        let r = match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Ln if v > 0.0 => v.ln(),
            Func::Log10 if v > 0.0 => v.log10(),
            Func::Ln | Func::Log10 => return None,
            Func::Exp => v.exp(),
            Func::Sqrt if v >= 0.0 => v.sqrt(),
            Func::Sqrt => return None,
            Func::Abs => v.abs(),
            Func::Sinh => v.sinh(),
            Func::Cosh => v.cosh(),
        };
        r.is_finite().then_some(r)
    }
}

/// Expression tree over indexed variables.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// Sign function; appears only in derivatives of `abs`.
    Sgn(Box<Expr>),
}

fn num(v: f64) -> Expr {
    Expr::Num(v)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Num(v) => num(-v),
        Expr::Neg(inner) => *inner,
        a => Expr::Neg(Box::new(a)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => num(x + y),
        (Expr::Num(z), e) | (e, Expr::Num(z)) if z == 0.0 => e,
        (a, b) => Expr::Add(Box::new(a), Box::new(b)),
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => num(x - y),
        (e, Expr::Num(z)) if z == 0.0 => e,
        (Expr::Num(z), e) if z == 0.0 => neg(e),
        (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(x), Expr::Num(y)) => num(x * y),
        (Expr::Num(z), _) | (_, Expr::Num(z)) if z == 0.0 => num(0.0),
        (Expr::Num(o), e) | (e, Expr::Num(o)) if o == 1.0 => e,
        (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (Expr::Num(z), _) if z == 0.0 => num(0.0),
        (e, Expr::Num(o)) if o == 1.0 => e,
        (a, b) => Expr::Div(Box::new(a), Box::new(b)),
    }
}

fn pow(a: Expr, b: Expr) -> Expr {
    match (a, b) {
        (_, Expr::Num(z)) if z == 0.0 => num(1.0),
        (e, Expr::Num(o)) if o == 1.0 => e,
        (a, b) => Expr::Pow(Box::new(a), Box::new(b)),
    }
}

fn call(f: Func, a: Expr) -> Expr {
    Expr::Call(f, Box::new(a))
}

impl Expr {
    /// Evaluates at the variable values `vars`; `None` where undefined.
    pub fn eval(&self, vars: &[f64]) -> Option<f64> {
        let r = match self {
            Expr::Num(v) => *v,
            Expr::Var(i) => *vars.get(*i)?,
            Expr::Neg(a) => -a.eval(vars)?,
            Expr::Add(a, b) => a.eval(vars)? + b.eval(vars)?,
            Expr::Sub(a, b) => a.eval(vars)? - b.eval(vars)?,
            Expr::Mul(a, b) => a.eval(vars)? * b.eval(vars)?,
            Expr::Div(a, b) => {
                let d = b.eval(vars)?;
                if d == 0.0 {
                    return None;
                }
                a.eval(vars)? / d
            }
            Expr::Pow(a, b) => a.eval(vars)?.powf(b.eval(vars)?),
            Expr::Call(f, a) => return f.apply(a.eval(vars)?),
            Expr::Sgn(a) => {
                let v = a.eval(vars)?;
                if v == 0.0 {
                    return None;
                }
                v.signum()
            }
        };
        r.is_finite().then_some(r)
    }

    /// Whether variable `i` occurs.
    pub fn depends_on(&self, i: usize) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(j) => *j == i,
            Expr::Neg(a) | Expr::Call(_, a) | Expr::Sgn(a) => a.depends_on(i),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.depends_on(i) || b.depends_on(i)
            }
        }
    }

    /// Symbolic partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Expr {
        let d = |e: &Expr| e.derivative(i);
        match self {
            Expr::Num(_) => num(0.0),
            Expr::Var(j) => num(if *j == i { 1.0 } else { 0.0 }),
            Expr::Neg(a) => neg(d(a)),
            Expr::Add(a, b) => add(d(a), d(b)),
            Expr::Sub(a, b) => sub(d(a), d(b)),
            Expr::Mul(a, b) => add(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))),
            Expr::Div(a, b) => div(
                sub(mul(d(a), (**b).clone()), mul((**a).clone(), d(b))),
                pow((**b).clone(), num(2.0)),
            ),
            Expr::Pow(a, b) => {
                let (a, b) = ((**a).clone(), (**b).clone());
                if !b.depends_on(i) {
                    mul(mul(b.clone(), pow(a.clone(), sub(b, num(1.0)))), d(&a))
                } else if !a.depends_on(i) {
                    mul(mul(pow(a.clone(), b.clone()), call(Func::Ln, a)), d(&b))
                } else {
                    let rate = add(mul(d(&b), call(Func::Ln, a.clone())), div(mul(b.clone(), d(&a)), a.clone()));
                    mul(pow(a, b), rate)
                }
            }
            Expr::Call(f, a) => {
                let inner = (**a).clone();
                let outer = match f {
                    Func::Sin => call(Func::Cos, inner),
                    Func::Cos => neg(call(Func::Sin, inner)),
                    Func::Tan => div(num(1.0), pow(call(Func::Cos, inner), num(2.0))),
                    Func::Ln => div(num(1.0), inner),
                    Func::Log10 => div(num(1.0), mul(inner, num(std::f64::consts::LN_10))),
                    Func::Exp => call(Func::Exp, inner),
                    Func::Sqrt => div(num(0.5), call(Func::Sqrt, inner)),
                    Func::Abs => Expr::Sgn(Box::new(inner)),
                    Func::Sinh => call(Func::Cosh, inner),
                    Func::Cosh => call(Func::Sinh, inner),
                };
                mul(outer, d(a))
            }
            Expr::Sgn(_) => num(0.0),
        }
    }

    /// Renders the tree with the given variable names.
    pub fn render(&self, names: &[&str]) -> String {
        Rendered { expr: self, names }.to_string()
    }
}

struct Rendered<'a> {
    expr: &'a Expr,
    names: &'a [&'a str],
}

impl<'a> fmt::Display for Rendered<'a> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names;
        let r = |e: &'a Expr| Rendered { expr: e, names };
        match self.expr {
            Expr::Num(v) if *v < 0.0 => write!(f, "(-{})", -v),
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(i) => f.write_str(self.names.get(*i).copied().unwrap_or("?")),
            Expr::Neg(a) => write!(f, "(-{})", r(a)),
            Expr::Add(a, b) => write!(f, "({} + {})", r(a), r(b)),
            Expr::Sub(a, b) => write!(f, "({} - {})", r(a), r(b)),
            Expr::Mul(a, b) => write!(f, "({} * {})", r(a), r(b)),
            Expr::Div(a, b) => write!(f, "({} / {})", r(a), r(b)),
            Expr::Pow(a, b) => write!(f, "({}^{})", r(a), r(b)),
            Expr::Call(func, a) => write!(f, "{}({})", func.name(), r(a)),
            Expr::Sgn(a) => write!(f, "(abs({0}) / {0})", r(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    Cmp(&'static str),
    And,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::Cmp(s) => format!("`{s}`"),
            Tok::And => "`&&`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_digit() || chars[i].1 == '.') {
                i += 1;
            }
            // An exponent only when digits follow, so `2e` stays number then `e`.
            if i < chars.len() && matches!(chars[i].1, 'e' | 'E') {
                let mut j = i + 1;
                if j < chars.len() && matches!(chars[j].1, '+' | '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].1.is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].1.is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let end = chars.get(i).map_or(text.len(), |c| c.0);
            let lit = &text[pos..end];
            let v: f64 = lit.parse().map_err(|_| Error::Syntax {
                position: chars[start].0,
                expected: "a number".into(),
            })?;
            out.push((Tok::Num(v), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let end = chars.get(i).map_or(text.len(), |c| c.0);
            out.push((Tok::Ident(text[pos..end].to_string()), pos));
            continue;
        }
        let next = chars.get(i + 1).map(|c| c.1);
        let (tok, width) = match (c, next) {
            ('&', Some('&')) => (Tok::And, 2),
            ('<', Some('=')) => (Tok::Cmp("<="), 2),
            ('>', Some('=')) => (Tok::Cmp(">="), 2),
            ('<', _) => (Tok::Cmp("<"), 1),
            ('>', _) => (Tok::Cmp(">"), 1),
            ('+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' | '|', _) => (Tok::Op(c), 1),
            _ => {
                return Err(Error::Syntax {
                    position: pos,
                    expected: "an operator, number, identifier or parenthesis".into(),
                })
            }
        };
        out.push((tok, pos));
        i += width;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    at: usize,
    vars: &'a [&'a str],
    bindings: &'a Bindings,
}

impl<'a> Parser<'a> {
    fn new(text: &str, vars: &'a [&'a str], bindings: &'a Bindings) -> Result<Self> {
        Ok(Parser { toks: lex(text)?, at: 0, vars, bindings })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos(),
            expected: format!("{expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(&format!("`{c}`"))
        }
    }

    fn finish(&self) -> Result<()> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            self.fail("an operator or end of input")
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Tok::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Tok::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.unary()?;
        if *self.peek() == Tok::Op('^') {
            self.bump();
            let exp = self.factor()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v) => Ok(Expr::Num(v)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if *self.peek() == Tok::Op('(') || Func::from_name(&name).is_some() {
                    return self.call(name, pos);
                }
                if let Some(i) = self.vars.iter().position(|v| *v == name) {
                    return Ok(Expr::Var(i));
                }
                if let Some(v) = self.bindings.get(&name) {
                    return Ok(Expr::Num(*v));
                }
                match name.as_str() {
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "e" => Ok(Expr::Num(std::f64::consts::E)),
                    _ => Err(Error::UnknownIdentifier { name, position: pos }),
                }
            }
            _ => {
                self.at = self.at.saturating_sub(1);
                self.fail("a number, identifier, `-` or `(`")
            }
        }
    }

    fn call(&mut self, name: String, pos: usize) -> Result<Expr> {
        let func = Func::from_name(&name).ok_or(Error::UnknownIdentifier { name, position: pos })?;
        self.expect('(')?;
        let arg = self.expr()?;
        self.expect(')')?;
        Ok(call(func, arg))
    }

    fn args(&mut self) -> Result<Vec<Expr>> {
        self.expect('(')?;
        let mut out = vec![self.expr()?];
        while *self.peek() == Tok::Op(',') {
            self.bump();
            out.push(self.expr()?);
        }
        self.expect(')')?;
        Ok(out)
    }
}

/// Parses `text` over the variables `vars` with the given constants.
pub fn parse_ast(text: &str, vars: &[&str], bindings: &Bindings) -> Result<Expr> {
    let mut p = Parser::new(text, vars, bindings)?;
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a function of `x` with no extra bindings.
pub fn parse_expr(text: &str) -> Result<RealFn> {
    parse_expr_with(text, &Bindings::new(), None)
}

/// Parses a function of `x`, substituting `bindings` and intersecting the
/// inferred domain with `declared`.
pub fn parse_expr_with(text: &str, bindings: &Bindings, declared: Option<Interval>) -> Result<RealFn> {
    let ast = parse_ast(text, &["x"], bindings)?;
    let mut domain = inferred_domain(&ast);
    if let Some(d) = declared {
        domain = domain
            .intersect(&d)
            .ok_or_else(|| Error::DomainMismatch(format!("{d} misses the natural domain {domain} of {text}")))?;
    }
    let identity = ast == Expr::Var(0);
    let deriv = ast.derivative(0);
    let f = RealFn::partial(text.trim(), domain, move |x| ast.eval(&[x]))
        .with_partial_derivative(move |x| deriv.eval(&[x]));
    Ok(if identity { f.mark_identity() } else { f })
}

/// Interval hull implied by logarithms and square roots taken directly of
/// `x`; other restrictions surface as undefined points during evaluation.
fn inferred_domain(e: &Expr) -> Interval {
    let mut d = Interval::real_line();
    let mut visit = |e: &Expr| {
        if let Expr::Call(f, a) = e {
            if **a == Expr::Var(0) {
                let r = match f {
                    Func::Ln | Func::Log10 => Interval::positive(),
                    Func::Sqrt => Interval::non_negative(),
                    _ => return,
                };
                d = d.intersect(&r).unwrap_or(d);
            }
        }
    };
    walk(e, &mut visit);
    d
}

fn walk(e: &Expr, visit: &mut dyn FnMut(&Expr)) {
    visit(e);
    match e {
        Expr::Num(_) | Expr::Var(_) => {}
        Expr::Neg(a) | Expr::Call(_, a) | Expr::Sgn(a) => walk(a, visit),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
            walk(a, visit);
            walk(b, visit);
        }
    }
}

/// Parses a mapping chain such as `affine(2,1)|ln`.
pub fn parse_mapping(text: &str) -> Result<Mapping> {
    parse_mapping_with(text, &Bindings::new())
}

pub fn parse_mapping_with(text: &str, bindings: &Bindings) -> Result<Mapping> {
    let mut p = Parser::new(text, &[], bindings)?;
    let mut chain = mapping_item(&mut p)?;
    while *p.peek() == Tok::Op('|') {
        p.bump();
        let next = mapping_item(&mut p)?;
        chain = compose(&next, &chain)?;
    }
    p.finish()?;
    Ok(chain)
}

fn mapping_item(p: &mut Parser<'_>) -> Result<Mapping> {
    let Tok::Ident(name) = p.peek().clone() else {
        return p.fail("a mapping name");
    };
    p.bump();
    let mut params = Vec::new();
    if *p.peek() == Tok::Op('(') {
        for e in p.args()? {
            params.push(e.eval(&[]).ok_or_else(|| {
                Error::InvalidParam(format!("argument of {name} does not evaluate to a finite number"))
            })?);
        }
    }
    catalog(&name, &params)
}

/// Conjunction of comparisons between expressions in several variables.
#[derive(Debug, Clone)]
pub struct Predicate {
    clauses: Vec<(Expr, &'static str, Expr)>,
}

impl Predicate {
    /// True when every clause holds; undefined sides count as false.
    pub fn test(&self, vars: &[f64]) -> bool {
        self.clauses.iter().all(|(l, op, r)| match (l.eval(vars), r.eval(vars)) {
            (Some(a), Some(b)) => match *op {
                "<" => a < b,
                "<=" => a <= b,
                ">" => a > b,
                _ => a >= b,
            },
            _ => false,
        })
    }
}

/// Parses `cmp ('&&' cmp)*` where `cmp := expr ('<'|'<='|'>'|'>=') expr`.
pub fn parse_predicate(text: &str, vars: &[&str], bindings: &Bindings) -> Result<Predicate> {
    let mut p = Parser::new(text, vars, bindings)?;
    let mut clauses = Vec::new();
    loop {
        let lhs = p.expr()?;
        let Tok::Cmp(op) = p.peek().clone() else {
            return p.fail("a comparison");
        };
        p.bump();
        let rhs = p.expr()?;
        clauses.push((lhs, op, rhs));
        if *p.peek() == Tok::And {
            p.bump();
        } else {
            break;
        }
    }
    p.finish()?;
    Ok(Predicate { clauses })
}
