//! Scalar expressions over chart coordinates.
//!
//! Grammar (`^` binds tighter than unary minus; implicit multiplication is
//! rejected; the exponent of `^` must be a numeric literal):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | power
//! power    := atom ('^' exponent)?
//! exponent := ['-'] NUMBER | '(' ['-'] NUMBER ')'
//! atom     := NUMBER | COORD | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! Functions: `sin cos tan exp log sqrt sinh cosh` (`log` is natural log).
//! Number literals start with a digit and may use scientific notation.
//! Unary minus applied directly to a literal folds into the constant, so
//! `-2` parses to the constant −2.
//!
//! Evaluation is generic over the dual-number order: the same tree walk
//! yields plain values, gradients, or gradients plus Hessians. Non-finite
//! results and domain violations are hard errors carrying the byte offset
//! of the offending node.

use crate::chart::{ChartSpec, Point};
use crate::dual::{Dual2, DualNum, Jet1, Jet2};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Parsed expression tree. `offset` fields are byte positions in the source
/// used for error reporting; they are ignored by equality.
#[derive(Debug, Clone)]
pub enum Expr {
    Constant {
        value: f64,
        offset: usize,
    },
    /// Reference to chart coordinate `index`.
    Coord {
        index: usize,
        offset: usize,
    },
    Unary {
        op: UnaryOp,
        arg: Box<Expr>,
        offset: usize,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        offset: usize,
    },
    /// `base ^ exponent` with a constant exponent.
    Pow {
        base: Box<Expr>,
        exponent: f64,
        offset: usize,
    },
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        use Expr::*;
        match (self, other) {
            (Constant { value: a, .. }, Constant { value: b, .. }) => a == b,
            (Coord { index: a, .. }, Coord { index: b, .. }) => a == b,
            (
                Unary {
                    op: oa, arg: aa, ..
                },
                Unary {
                    op: ob, arg: ab, ..
                },
            ) => oa == ob && aa == ab,
            (
                Binary {
                    op: oa,
                    lhs: la,
                    rhs: ra,
                    ..
                },
                Binary {
                    op: ob,
                    lhs: lb,
                    rhs: rb,
                    ..
                },
            ) => oa == ob && la == lb && ra == rb,
            (
                Pow {
                    base: ba,
                    exponent: ea,
                    ..
                },
                Pow {
                    base: bb,
                    exponent: eb,
                    ..
                },
            ) => ea == eb && ba == bb,
            _ => false,
        }
    }
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Constant { value, offset: 0 }
    }

    pub fn coord(index: usize) -> Expr {
        Expr::Coord { index, offset: 0 }
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Expr {
        Expr::Unary {
            op,
            arg: Box::new(arg),
            offset: 0,
        }
    }

    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            offset: 0,
        }
    }

    pub fn pow(base: Expr, exponent: f64) -> Expr {
        Expr::Pow {
            base: Box::new(base),
            exponent,
            offset: 0,
        }
    }

    fn offset(&self) -> usize {
        match self {
            Expr::Constant { offset, .. }
            | Expr::Coord { offset, .. }
            | Expr::Unary { offset, .. }
            | Expr::Binary { offset, .. }
            | Expr::Pow { offset, .. } => *offset,
        }
    }
}

const FUNCTIONS: &[(&str, UnaryOp)] = &[
    ("sin", UnaryOp::Sin),
    ("cos", UnaryOp::Cos),
    ("tan", UnaryOp::Tan),
    ("exp", UnaryOp::Exp),
    ("log", UnaryOp::Log),
    ("sqrt", UnaryOp::Sqrt),
    ("sinh", UnaryOp::Sinh),
    ("cosh", UnaryOp::Cosh),
];

pub(crate) fn is_function_name(name: &str) -> bool {
    FUNCTIONS.iter().any(|(f, _)| *f == name)
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Number(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let offset = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => tokens.push(Token {
                tok: Tok::Plus,
                offset,
            }),
            b'-' => tokens.push(Token {
                tok: Tok::Minus,
                offset,
            }),
            b'*' => tokens.push(Token {
                tok: Tok::Star,
                offset,
            }),
            b'/' => tokens.push(Token {
                tok: Tok::Slash,
                offset,
            }),
            b'^' => tokens.push(Token {
                tok: Tok::Caret,
                offset,
            }),
            b'(' => tokens.push(Token {
                tok: Tok::LParen,
                offset,
            }),
            b')' => tokens.push(Token {
                tok: Tok::RParen,
                offset,
            }),
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                if j < bytes.len() && bytes[j] == b'.' {
                    j += 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                // exponent part only if actually followed by digits
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        j = k;
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                    }
                }
                let text = &src[i..j];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset,
                    message: format!("malformed number literal `{text}`"),
                })?;
                tokens.push(Token {
                    tok: Tok::Number(value),
                    offset,
                });
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                tokens.push(Token {
                    tok: Tok::Ident(src[i..j].to_string()),
                    offset,
                });
                i = j;
                continue;
            }
            _ => {
                return Err(Error::Syntax {
                    offset,
                    message: format!("unexpected character `{}`", &src[i..i + 1]),
                })
            }
        }
        i += 1;
    }
    tokens.push(Token {
        tok: Tok::Eof,
        offset: src.len(),
    });
    Ok(tokens)
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    chart: &'a ChartSpec,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.peek().offset,
            message: message.into(),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => break,
            };
            let offset = self.bump().offset;
            let rhs = self.parse_term()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                offset,
            };
        }
        Ok(lhs)
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => break,
            };
            let offset = self.bump().offset;
            let rhs = self.parse_factor()?;
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                offset,
            };
        }
        Ok(lhs)
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        if matches!(self.peek().tok, Tok::Minus) {
            let offset = self.bump().offset;
            let arg = self.parse_factor()?;
            // fold a negated literal into the constant
            if let Expr::Constant { value, .. } = arg {
                return Ok(Expr::Constant {
                    value: -value,
                    offset,
                });
            }
            return Ok(Expr::Unary {
                op: UnaryOp::Neg,
                arg: Box::new(arg),
                offset,
            });
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if matches!(self.peek().tok, Tok::Caret) {
            let offset = self.bump().offset;
            let exponent = self.parse_exponent()?;
            return Ok(Expr::Pow {
                base: Box::new(base),
                exponent,
                offset,
            });
        }
        Ok(base)
    }

    fn parse_exponent(&mut self) -> Result<f64> {
        let parenthesized = if matches!(self.peek().tok, Tok::LParen) {
            self.bump();
            true
        } else {
            false
        };
        let negative = if matches!(self.peek().tok, Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let value = match self.peek().tok {
            Tok::Number(v) => {
                self.bump();
                v
            }
            _ => return Err(self.syntax("exponent must be a numeric literal")),
        };
        if parenthesized && !matches!(self.bump().tok, Tok::RParen) {
            self.pos -= 1;
            return Err(self.syntax("expected `)` after exponent"));
        }
        Ok(if negative { -value } else { value })
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        let token = self.bump();
        match token.tok {
            Tok::Number(value) => Ok(Expr::Constant {
                value,
                offset: token.offset,
            }),
            Tok::Ident(name) => {
                if matches!(self.peek().tok, Tok::LParen) {
                    let op = FUNCTIONS
                        .iter()
                        .find(|(f, _)| *f == name)
                        .map(|(_, op)| *op)
                        .ok_or(Error::UnknownFunction {
                            name: name.clone(),
                            offset: token.offset,
                        })?;
                    self.bump(); // '('
                    let arg = self.parse_expr()?;
                    if !matches!(self.bump().tok, Tok::RParen) {
                        self.pos -= 1;
                        return Err(self.syntax("expected `)` to close function call"));
                    }
                    Ok(Expr::Unary {
                        op,
                        arg: Box::new(arg),
                        offset: token.offset,
                    })
                } else {
                    let index =
                        self.chart
                            .coordinate_index(&name)
                            .ok_or(Error::UnknownIdentifier {
                                name,
                                offset: token.offset,
                            })?;
                    Ok(Expr::Coord {
                        index,
                        offset: token.offset,
                    })
                }
            }
            Tok::LParen => {
                let inner = self.parse_expr()?;
                if !matches!(self.bump().tok, Tok::RParen) {
                    self.pos -= 1;
                    return Err(self.syntax("expected `)`"));
                }
                Ok(inner)
            }
            Tok::Eof => Err(Error::Syntax {
                offset: token.offset,
                message: "unexpected end of input".into(),
            }),
            _ => Err(Error::Syntax {
                offset: token.offset,
                message: "expected a number, coordinate, function call, or `(`".into(),
            }),
        }
    }
}

/// Parse `source` against the coordinates of `chart`.
pub fn parse(source: &str, chart: &ChartSpec) -> Result<Expr> {
    if source.trim().is_empty() {
        return Err(Error::Syntax {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        chart,
    };
    let expr = parser.parse_expr()?;
    if !matches!(parser.peek().tok, Tok::Eof) {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(expr)
}

// ---------------------------------------------------------------------------
// Pretty-printing
// ---------------------------------------------------------------------------

fn format_number(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:?}")
    }
}

/// Precedence used for parenthesization: `+ -` = 1, `* /` = 2, unary `-` = 3,
/// `^` = 4, atoms = 5. Negative constants print like negations.
fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Constant { value, .. } => {
            if *value < 0.0 {
                3
            } else {
                5
            }
        }
        Expr::Coord { .. } => 5,
        Expr::Unary {
            op: UnaryOp::Neg, ..
        } => 3,
        Expr::Unary { .. } => 5,
        Expr::Binary { op, .. } => match op {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        },
        Expr::Pow { .. } => 4,
    }
}

fn print_at(e: &Expr, chart: &ChartSpec, required: u8, out: &mut String) {
    let wrap = prec(e) < required;
    if wrap {
        out.push('(');
    }
    match e {
        Expr::Constant { value, .. } => out.push_str(&format_number(*value)),
        Expr::Coord { index, .. } => out.push_str(&chart.coordinate_names()[*index]),
        Expr::Unary { op, arg, .. } => match op {
            UnaryOp::Neg => {
                out.push('-');
                print_at(arg, chart, 3, out);
            }
            _ => {
                let name = FUNCTIONS
                    .iter()
                    .find(|(_, o)| o == op)
                    .map(|(n, _)| *n)
                    .expect("function table covers all non-neg unary ops");
                out.push_str(name);
                out.push('(');
                print_at(arg, chart, 0, out);
                out.push(')');
            }
        },
        Expr::Binary { op, lhs, rhs, .. } => {
            let (sym, level) = match op {
                BinaryOp::Add => (" + ", 1),
                BinaryOp::Sub => (" - ", 1),
                BinaryOp::Mul => ("*", 2),
                BinaryOp::Div => ("/", 2),
            };
            print_at(lhs, chart, level, out);
            out.push_str(sym);
            print_at(rhs, chart, level + 1, out);
        }
        Expr::Pow { base, exponent, .. } => {
            print_at(base, chart, 5, out);
            out.push('^');
            out.push_str(&format_number(*exponent));
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Render the tree to source that parses back to an equal tree.
pub fn pretty(e: &Expr, chart: &ChartSpec) -> String {
    let mut out = String::new();
    print_at(e, chart, 0, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

pub(crate) fn eval_with<T: DualNum>(e: &Expr, coords: &[f64]) -> Result<T> {
    let value: T = match e {
        Expr::Constant { value, .. } => T::constant(*value),
        Expr::Coord { index, offset } => {
            if *index >= coords.len() {
                return Err(Error::Domain {
                    offset: *offset,
                    message: format!(
                        "coordinate index {index} out of range for a {}-dimensional point",
                        coords.len()
                    ),
                });
            }
            T::coordinate(coords[*index], *index)
        }
        Expr::Unary { op, arg, offset } => {
            let a: T = eval_with(arg, coords)?;
            match op {
                UnaryOp::Neg => -a,
                UnaryOp::Sin => a.sin(),
                UnaryOp::Cos => a.cos(),
                UnaryOp::Tan => a.tan(),
                UnaryOp::Exp => a.exp(),
                UnaryOp::Sinh => a.sinh(),
                UnaryOp::Cosh => a.cosh(),
                UnaryOp::Log => {
                    if a.value() <= 0.0 {
                        return Err(Error::Domain {
                            offset: *offset,
                            message: format!("log of non-positive value {}", a.value()),
                        });
                    }
                    a.ln()
                }
                UnaryOp::Sqrt => {
                    if a.value() < 0.0 {
                        return Err(Error::Domain {
                            offset: *offset,
                            message: format!("square root of negative value {}", a.value()),
                        });
                    }
                    a.sqrt()
                }
            }
        }
        Expr::Binary {
            op,
            lhs,
            rhs,
            offset,
        } => {
            let a: T = eval_with(lhs, coords)?;
            let b: T = eval_with(rhs, coords)?;
            match op {
                BinaryOp::Add => a + b,
                BinaryOp::Sub => a - b,
                BinaryOp::Mul => a * b,
                BinaryOp::Div => {
                    if b.value() == 0.0 {
                        return Err(Error::Domain {
                            offset: *offset,
                            message: "division by zero".into(),
                        });
                    }
                    a / b
                }
            }
        }
        Expr::Pow {
            base,
            exponent,
            offset,
        } => {
            let b: T = eval_with(base, coords)?;
            if exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64 {
                let k = *exponent as i32;
                if b.value() == 0.0 && k < 0 {
                    return Err(Error::Domain {
                        offset: *offset,
                        message: "zero raised to a negative power".into(),
                    });
                }
                b.powi(k)
            } else {
                if b.value() <= 0.0 {
                    return Err(Error::Domain {
                        offset: *offset,
                        message: format!("non-integer power of non-positive base {}", b.value()),
                    });
                }
                b.powf(*exponent)
            }
        }
    };
    if !value.all_finite() {
        return Err(Error::Domain {
            offset: e.offset(),
            message: "non-finite value or derivative".into(),
        });
    }
    Ok(value)
}

/// Plain IEEE-double evaluation at a point.
pub fn eval(e: &Expr, coords: &[f64]) -> Result<f64> {
    eval_with::<f64>(e, coords)
}

/// Evaluation on second-order duals: exact value, gradient, and Hessian.
///
/// The value agrees bit for bit with [`eval`]. Points where a derivative is
/// undefined (e.g. `sqrt` at zero) are domain errors here even though plain
/// evaluation succeeds.
pub fn eval_dual2(e: &Expr, point: &Point) -> Result<Dual2> {
    let jet: Jet2 = eval_with(e, point.coords())?;
    Ok(Dual2::from_jet(&jet, point.dim()))
}

pub(crate) fn eval_jet1(e: &Expr, coords: &[f64]) -> Result<Jet1> {
    eval_with(e, coords)
}

pub(crate) fn eval_jet2(e: &Expr, coords: &[f64]) -> Result<Jet2> {
    eval_with(e, coords)
}
