//! Input documents and their canonical text rendering.

use std::fmt;

use crate::framed::HomotopyMode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }

    pub fn variables(&self, into: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(v) => {
                if !into.contains(v) {
                    into.push(v.clone());
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.variables(into),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.variables(into);
                b.variables(into);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_operand(f, 4)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_operand(f, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                b.write_operand(f, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_operand(f, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                b.write_operand(f, 3)
            }
            Expr::Pow(a, e) => {
                a.write_operand(f, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

/// `F<q>`, optionally a rational function field `F<q>(var)`, optionally with
/// an explicit modulus for the extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub order: u64,
    pub function_var: Option<String>,
    pub modulus: Option<Expr>,
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.order)?;
        if let Some(v) = &self.function_var {
            write!(f, "({v})")?;
        }
        if let Some(m) = &self.modulus {
            write!(f, " mod {m}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolExpr {
    /// `(coefficient, entries)` terms in input order.
    pub terms: Vec<(i64, Vec<Expr>)>,
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (c, entries)) in self.terms.iter().enumerate() {
            if *c < 0 {
                f.write_str("-")?;
            } else if i > 0 {
                f.write_str("+")?;
            }
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            let body: Vec<String> = entries.iter().map(Expr::to_string).collect();
            write!(f, "{{{}}}", body.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceExpr {
    Finite(Expr),
    Infinity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Request {
    Normalize(SymbolExpr),
    Tame { symbol: SymbolExpr, place: PlaceExpr },
    Reciprocity(SymbolExpr),
    Smooth { f: Expr, g: Vec<Expr> },
    Rho { f: Expr, g: Vec<Expr> },
    Homotopy { family: Expr, g: Vec<Expr>, mode: Option<HomotopyMode> },
    Matrix(Vec<Vec<Expr>>),
}

impl Request {
    /// The subcommand that serves this request.
    pub fn command(&self) -> &'static str {
        match self {
            Request::Normalize(_) => "normalize",
            Request::Tame { .. } => "tame",
            Request::Reciprocity(_) | Request::Smooth { .. } => "reciprocity",
            Request::Rho { .. } => "rho",
            Request::Homotopy { .. } => "homotopy",
            Request::Matrix(_) => "reduce-framing",
        }
    }
}

fn list(items: &[Expr]) -> String {
    format!("[{}]", items.iter().map(Expr::to_string).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Request::Normalize(s) => write!(f, "symbol {s};"),
            Request::Tame { symbol, place } => match place {
                PlaceExpr::Finite(p) => write!(f, "tame {symbol} at {p};"),
                PlaceExpr::Infinity => write!(f, "tame {symbol} at inf;"),
            },
            Request::Reciprocity(s) => write!(f, "reciprocity {s};"),
            Request::Smooth { f: fr, g } => write!(f, "smooth f = {fr}; g = {};", list(g)),
            Request::Rho { f: fr, g } => write!(f, "rho f = {fr}; g = {};", list(g)),
            Request::Homotopy { family, g, mode } => {
                write!(f, "homotopy F = {family}; g = {};", list(g))?;
                if let Some(m) = mode {
                    write!(f, " mode {};", m.name())?;
                }
                Ok(())
            }
            Request::Matrix(rows) => {
                let rows: Vec<String> = rows.iter().map(|r| list(r).replace(", ", ",")).collect();
                write!(f, "matrix [{}];", rows.join(","))
            }
        }
    }
}

/// One field declaration and one request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub field: FieldSpec,
    pub request: Request,
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "field {};", self.field)?;
        writeln!(f, "{}", self.request)
    }
}
