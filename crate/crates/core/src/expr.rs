//! Holomorphic expressions in one complex variable `z`.
//!
//! The language is deliberately small: complex constants, `z`, the four
//! arithmetic operators, integer powers, a handful of elementary functions and
//! the Schwarz conjugate `sconj(e)`, which denotes `z ↦ conj(e(conj z))`.
//! Every reflection formula produced by [`crate::extension`] is an [`Expr`]
//! built from the user's `f` and `g` with `sconj` nodes, so the grammar is
//! closed under everything the rest of the crate needs.
//!
//! Grammar (loosest to tightest binding):
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' int)?          int := ['+'|'-'] digits | '(' ['+'|'-'] digits ')'
//! atom    := number | 'i' | 'pi' | 'z' | func '(' sum ')' | 'sconj' '(' sum ')' | '(' sum ')'
//! ```
//!
//! `log` and `sqrt` use principal branches.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::ops;

use num_complex::Complex64;
use num_traits::{One, Zero};

/// Elementary functions understood by the parser.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Tanh,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 8] =
        [Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh, Func::Tanh, Func::Sqrt];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }

    /// Whether `conj(F(conj w)) == F(w)` holds for every `w`, branch cuts
    /// included. False for the principal `log` and `sqrt`, which flip sign
    /// across the negative real axis.
    fn commutes_with_conj(self) -> bool {
        !matches!(self, Func::Log | Func::Sqrt)
    }

    fn apply(self, w: Complex64) -> Complex64 {
        match self {
            Func::Exp => w.exp(),
            Func::Log => w.ln(),
            Func::Sin => w.sin(),
            Func::Cos => w.cos(),
            Func::Sinh => w.sinh(),
            Func::Cosh => w.cosh(),
            Func::Tanh => w.tanh(),
            Func::Sqrt => w.sqrt(),
        }
    }
}

/// Expression tree. Immutable once built; cloning is a deep copy.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Func, Box<Expr>),
    /// Schwarz conjugate: `z ↦ conj(e(conj z))`.
    Sconj(Box<Expr>),
}

/// Evaluation fault, carrying the printed form of the offending node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    DivisionByZero { node: String },
    LogOfZero { node: String },
    NonFinite { node: String },
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::DivisionByZero { node } => write!(f, "division by zero in `{node}`"),
            EvalError::LogOfZero { node } => write!(f, "logarithm of zero in `{node}`"),
            EvalError::NonFinite { node } => write!(f, "non-finite value in `{node}`"),
        }
    }
}

/// Malformed input: byte offset into the source and what the parser wanted there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expected {} at offset {}", self.expected, self.offset)
    }
}

impl Expr {
    pub fn constant(c: Complex64) -> Expr {
        Expr::Const(c)
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn z() -> Expr {
        Expr::Var
    }

    pub fn powi(self, n: i32) -> Expr {
        Expr::Pow(Box::new(self), n)
    }

    pub fn call(self, func: Func) -> Expr {
        Expr::Call(func, Box::new(self))
    }

    /// Schwarz conjugate. `sconj(sconj(e))` collapses to `e`, and constants
    /// and `z` are conjugated in place; nothing else is rewritten.
    pub fn sconj(self) -> Expr {
        match self {
            Expr::Sconj(inner) => *inner,
            Expr::Const(c) => Expr::Const(c.conj()),
            Expr::Var => Expr::Var,
            other => Expr::Sconj(Box::new(other)),
        }
    }

    /// Push every `sconj` down to the leaves, where it conjugates constants
    /// and disappears on `z`. Nodes under `log`/`sqrt` keep an explicit
    /// `sconj` wrapper so that values on the branch cut are preserved.
    pub fn push_sconj(&self) -> Expr {
        self.push_sconj_inner(false)
    }

    fn push_sconj_inner(&self, conj: bool) -> Expr {
        use Expr::*;
        let rec = |e: &Expr| Box::new(e.push_sconj_inner(conj));
        match self {
            Const(c) => Const(if conj { c.conj() } else { *c }),
            Var => Var,
            Neg(a) => Neg(rec(a)),
            Add(a, b) => Add(rec(a), rec(b)),
            Sub(a, b) => Sub(rec(a), rec(b)),
            Mul(a, b) => Mul(rec(a), rec(b)),
            Div(a, b) => Div(rec(a), rec(b)),
            Pow(a, n) => Pow(rec(a), *n),
            Call(func, a) if func.commutes_with_conj() || !conj => Call(*func, rec(a)),
            Call(func, a) => Sconj(Box::new(Call(*func, Box::new(a.push_sconj_inner(false))))),
            Sconj(a) => a.push_sconj_inner(!conj),
        }
    }

    /// Substitute `inner` for `z`.
    pub fn compose(&self, inner: &Expr) -> Expr {
        use Expr::*;
        let rec = |e: &Expr| Box::new(e.compose(inner));
        match self {
            Const(c) => Const(*c),
            Var => inner.clone(),
            Neg(a) => Neg(rec(a)),
            Add(a, b) => Add(rec(a), rec(b)),
            Sub(a, b) => Sub(rec(a), rec(b)),
            Mul(a, b) => Mul(rec(a), rec(b)),
            Div(a, b) => Div(rec(a), rec(b)),
            Pow(a, n) => Pow(rec(a), *n),
            Call(func, a) => Call(*func, rec(a)),
            // sconj(e)(h(z)) = conj(e(conj h(z))) = sconj(e ∘ sconj(h))(z)
            Sconj(a) => Sconj(Box::new(a.compose(&inner.clone().sconj()))),
        }
    }

    /// True when the tree never mentions `z`.
    pub fn is_constant(&self) -> bool {
        use Expr::*;
        match self {
            Const(_) => true,
            Var => false,
            Neg(a) | Pow(a, _) | Call(_, a) | Sconj(a) => a.is_constant(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let value = self.eval_node(z)?;
        if value.re.is_finite() && value.im.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite { node: self.to_string() })
        }
    }

    fn eval_node(&self, z: Complex64) -> Result<Complex64, EvalError> {
        use Expr::*;
        Ok(match self {
            Const(c) => *c,
            Var => z,
            Neg(a) => -a.eval_node(z)?,
            Add(a, b) => a.eval_node(z)? + b.eval_node(z)?,
            Sub(a, b) => a.eval_node(z)? - b.eval_node(z)?,
            Mul(a, b) => a.eval_node(z)? * b.eval_node(z)?,
            Div(a, b) => {
                let num = a.eval_node(z)?;
                let den = b.eval_node(z)?;
                if den.is_zero() {
                    return Err(EvalError::DivisionByZero { node: self.to_string() });
                }
                num / den
            }
            Pow(a, n) => {
                let base = a.eval_node(z)?;
                if *n < 0 && base.is_zero() {
                    return Err(EvalError::DivisionByZero { node: self.to_string() });
                }
                base.powi(*n)
            }
            Call(func, a) => {
                let arg = a.eval_node(z)?;
                if *func == Func::Log && arg.is_zero() {
                    return Err(EvalError::LogOfZero { node: self.to_string() });
                }
                func.apply(arg)
            }
            Sconj(a) => a.eval_node(z.conj())?.conj(),
        })
    }

    /// Symbolic d/dz. Structural zeros and ones produced by the rules are
    /// pruned; no other simplification happens.
    pub fn differentiate(&self) -> Expr {
        use Expr::*;
        match self {
            Const(_) => zero(),
            Var => one(),
            Neg(a) => neg(a.differentiate()),
            Add(a, b) => add(a.differentiate(), b.differentiate()),
            Sub(a, b) => sub(a.differentiate(), b.differentiate()),
            Mul(a, b) => add(mul(a.differentiate(), (**b).clone()), mul((**a).clone(), b.differentiate())),
            Div(a, b) => {
                let num = sub(mul(a.differentiate(), (**b).clone()), mul((**a).clone(), b.differentiate()));
                div(num, (**b).clone().powi(2))
            }
            Pow(_, 0) => zero(),
            Pow(a, n) => {
                let outer = if *n == 1 {
                    one()
                } else {
                    let base = if *n == 2 { (**a).clone() } else { (**a).clone().powi(n - 1) };
                    mul(Expr::real(f64::from(*n)), base)
                };
                mul(outer, a.differentiate())
            }
            Call(func, a) => {
                let arg = (**a).clone();
                let outer = match func {
                    Func::Exp => arg.call(Func::Exp),
                    Func::Log => div(one(), arg),
                    Func::Sin => arg.call(Func::Cos),
                    Func::Cos => neg(arg.call(Func::Sin)),
                    Func::Sinh => arg.call(Func::Cosh),
                    Func::Cosh => arg.call(Func::Sinh),
                    Func::Tanh => div(one(), arg.call(Func::Cosh).powi(2)),
                    Func::Sqrt => div(one(), mul(Expr::real(2.0), arg.call(Func::Sqrt))),
                };
                mul(outer, a.differentiate())
            }
            Sconj(a) => a.differentiate().sconj(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Call(..) | Expr::Sconj(_) => 5,
        }
    }
}

fn zero() -> Expr {
    Expr::Const(Complex64::zero())
}

fn one() -> Expr {
    Expr::Const(Complex64::one())
}

fn is_const(e: &Expr, value: f64) -> bool {
    matches!(e, Expr::Const(c) if c.re == value && c.im == 0.0)
}

fn neg(a: Expr) -> Expr {
    match a {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

fn add(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        b
    } else if is_const(&b, 0.0) {
        a
    } else {
        Expr::Add(Box::new(a), Box::new(b))
    }
}

fn sub(a: Expr, b: Expr) -> Expr {
    if is_const(&b, 0.0) {
        a
    } else if is_const(&a, 0.0) {
        neg(b)
    } else {
        Expr::Sub(Box::new(a), Box::new(b))
    }
}

fn mul(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) || is_const(&b, 0.0) {
        zero()
    } else if is_const(&a, 1.0) {
        b
    } else if is_const(&b, 1.0) {
        a
    } else {
        Expr::Mul(Box::new(a), Box::new(b))
    }
}

fn div(a: Expr, b: Expr) -> Expr {
    if is_const(&a, 0.0) {
        zero()
    } else if is_const(&b, 1.0) {
        a
    } else {
        Expr::Div(Box::new(a), Box::new(b))
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl From<f64> for Expr {
    fn from(x: f64) -> Expr {
        Expr::real(x)
    }
}

impl From<Complex64> for Expr {
    fn from(c: Complex64) -> Expr {
        Expr::Const(c)
    }
}

// ---------------------------------------------------------------------------
// Printing

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    let mag = x.abs();
    if mag == 0.0 || (1e-5..1e16).contains(&mag) {
        write!(f, "{x}")
    } else {
        write!(f, "{x:e}")
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    let real_only = c.im == 0.0 && c.im.is_sign_positive();
    if real_only {
        if c.re.is_sign_negative() {
            f.write_str("(")?;
            write_real(f, c.re)?;
            return f.write_str(")");
        }
        return write_real(f, c.re);
    }
    if c.re == 0.0 && c.re.is_sign_positive() && c.im == 1.0 {
        return f.write_str("i");
    }
    f.write_str("(")?;
    write_real(f, c.re)?;
    if c.im.is_sign_negative() {
        f.write_str("-")?;
    } else {
        f.write_str("+")?;
    }
    write_real(f, c.im.abs())?;
    f.write_str("*i)")
}

impl Expr {
    fn write_child(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.precedence() < min_prec {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    /// Right operands: parenthesize anything that is not strictly tighter,
    /// and any negation, so `a-(b-c)` and `a*(-b)` print unambiguously.
    fn write_right(&self, f: &mut fmt::Formatter<'_>, op_prec: u8) -> fmt::Result {
        if self.precedence() <= op_prec || matches!(self, Expr::Neg(_)) {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Expr::*;
        match self {
            Const(c) => write_const(f, *c),
            Var => f.write_str("z"),
            Neg(a) => match **a {
                // `-2` would read back as the constant -2.
                Const(c) if c.im == 0.0 && c.re.is_sign_positive() => {
                    f.write_str("-(")?;
                    write_const(f, c)?;
                    f.write_str(")")
                }
                _ => {
                    f.write_str("-")?;
                    a.write_child(f, 3)
                }
            },
            Add(a, b) => {
                a.write_child(f, 1)?;
                f.write_str("+")?;
                b.write_right(f, 1)
            }
            Sub(a, b) => {
                a.write_child(f, 1)?;
                f.write_str("-")?;
                b.write_right(f, 1)
            }
            Mul(a, b) => {
                a.write_child(f, 2)?;
                f.write_str("*")?;
                b.write_right(f, 2)
            }
            Div(a, b) => {
                a.write_child(f, 2)?;
                f.write_str("/")?;
                b.write_right(f, 2)
            }
            Pow(a, n) => {
                a.write_child(f, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Call(func, a) => write!(f, "{}({a})", func.name()),
            Sconj(a) => write!(f, "sconj({a})"),
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing

/// `(a+b*i)` and `(a-b*i)`, as printed for complex constants, read back as
/// a single constant.
fn fold_complex_literal(e: Expr) -> Expr {
    let real = |e: &Expr| match e {
        Expr::Const(c) if c.im == 0.0 => Some(c.re),
        _ => None,
    };
    let imag = |e: &Expr| match e {
        Expr::Mul(a, b) if matches!(**b, Expr::Const(c) if c == Complex64::i()) => real(a),
        _ => None,
    };
    let folded = match &e {
        Expr::Add(a, b) => real(a).zip(imag(b)).map(|(re, im)| Complex64::new(re, im)),
        Expr::Sub(a, b) => real(a).zip(imag(b)).map(|(re, im)| Complex64::new(re, -im)),
        _ => None,
    };
    folded.map(Expr::Const).unwrap_or(e)
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let expr = parser.sum()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("end of input"));
    }
    Ok(expr)
}

impl core::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Expr, ParseError> {
        parse(s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> ParseError {
        ParseError { offset: self.pos, expected: expected.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(&format!("'{}'", byte as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat(b'+') {
                lhs = lhs + self.product()?;
            } else if self.eat(b'-') {
                lhs = lhs - self.product()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = lhs * self.unary()?;
            } else if self.eat(b'/') {
                lhs = lhs / self.unary()?;
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            // A bare negative literal becomes a negative constant, so printed
            // constants such as `(-2)` re-parse bit-for-bit.
            let bare = matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == b'.');
            let operand = self.unary()?;
            return Ok(match operand {
                Expr::Const(c) if bare && c.im == 0.0 => Expr::Const(Complex64::new(-c.re, c.im)),
                other => -other,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let parenthesized = self.eat(b'(');
            let exponent = self.signed_int()?;
            if parenthesized {
                self.expect(b')')?;
            }
            return Ok(base.powi(exponent));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<i32, ParseError> {
        let negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer exponent"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        let magnitude: i64 = digits
            .parse()
            .map_err(|_| ParseError { offset: start, expected: "exponent within i32 range".to_string() })?;
        let value = if negative { -magnitude } else { magnitude };
        i32::try_from(value)
            .map_err(|_| ParseError { offset: start, expected: "exponent within i32 range".to_string() })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(fold_complex_literal(inner))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.identifier(),
            _ => Err(self.error("expression")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        let src = self.src;
        let digits = |mut p: usize| {
            while p < src.len() && src[p].is_ascii_digit() {
                p += 1;
            }
            p
        };
        let mut end = digits(start);
        if end < src.len() && src[end] == b'.' {
            end = digits(end + 1);
        }
        if end < src.len() && (src[end] == b'e' || src[end] == b'E') {
            let mut p = end + 1;
            if p < src.len() && (src[p] == b'+' || src[p] == b'-') {
                p += 1;
            }
            let exp_end = digits(p);
            if exp_end > p {
                end = exp_end;
            }
        }
        let text = core::str::from_utf8(&src[start..end]).expect("ascii literal");
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos = end;
                Ok(Expr::real(x))
            }
            _ => Err(ParseError { offset: start, expected: "finite decimal literal".to_string() }),
        }
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
        match name {
            "z" => Ok(Expr::Var),
            "i" => Ok(Expr::Const(Complex64::i())),
            "pi" => Ok(Expr::real(core::f64::consts::PI)),
            "sconj" => Ok(self.call_argument()?.sconj()),
            _ => match Func::from_name(name) {
                Some(func) => Ok(self.call_argument()?.call(func)),
                None => {
                    self.pos = start;
                    Err(self.error("expression"))
                }
            },
        }
    }

    fn call_argument(&mut self) -> Result<Expr, ParseError> {
        self.expect(b'(')?;
        let arg = self.sum()?;
        self.expect(b')')?;
        Ok(arg)
    }
}
