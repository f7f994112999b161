use super::ast::{Document, Expr, FieldSpec, PlaceExpr, Request, SymbolExpr};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;
use crate::framed::HomotopyMode;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = self.here();
        Err(ParseError::new(t.line, t.col, msg))
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, c: char) -> bool {
        *self.peek() == Tok::Punct(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{c}', found {}", self.peek().describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> PResult<()> {
        if self.is_keyword(kw) {
            self.advance();
            Ok(())
        } else {
            self.error(format!("expected '{kw}', found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.advance();
                Ok(s)
            }
            other => self.error(format!("expected a name, found {}", other.describe())),
        }
    }

    fn int(&mut self) -> PResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(n)
            }
            other => self.error(format!("expected an integer, found {}", other.describe())),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let negative = self.eat('-');
            let e = self.int()?;
            let e = i64::try_from(e).or_else(|_| self.error("exponent too large"))?;
            return Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.advance();
                Ok(Expr::Var(s))
            }
            Tok::Punct('(') => {
                self.advance();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            other => self.error(format!("expected an expression, found {}", other.describe())),
        }
    }

    fn expr_list(&mut self) -> PResult<Vec<Expr>> {
        self.expect('[')?;
        let mut out = Vec::new();
        if !self.eat(']') {
            loop {
                out.push(self.expr()?);
                if self.eat(']') {
                    break;
                }
                self.expect(',')?;
            }
        }
        Ok(out)
    }

    fn symbol_sum(&mut self) -> PResult<SymbolExpr> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let sign = if self.eat('-') {
                -1
            } else if self.eat('+') || first {
                1
            } else {
                break;
            };
            first = false;
            let mut coeff = 1i64;
            if let Tok::Int(n) = *self.peek() {
                self.advance();
                self.expect('*')?;
                coeff = i64::try_from(n).or_else(|_| self.error("coefficient too large"))?;
            }
            self.expect('{')?;
            let mut entries = Vec::new();
            if !self.eat('}') {
                loop {
                    entries.push(self.expr()?);
                    if self.eat('}') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
            terms.push((sign * coeff, entries));
        }
        Ok(SymbolExpr { terms })
    }

    fn field_spec(&mut self) -> PResult<FieldSpec> {
        let (line, col) = (self.here().line, self.here().col);
        let name = self.ident()?;
        let Some(order) = name.strip_prefix('F').and_then(|d| d.parse::<u64>().ok()).filter(|q| *q >= 2) else {
            return Err(ParseError::new(line, col, format!("expected a field like F7, found '{name}'")));
        };
        let mut spec = FieldSpec { order, function_var: None, modulus: None };
        if self.eat('(') {
            spec.function_var = Some(self.ident()?);
            self.expect(')')?;
        }
        if self.is_keyword("mod") {
            self.advance();
            spec.modulus = Some(self.expr()?);
        }
        Ok(spec)
    }

    /// `name = <expr>;`
    fn assignment(&mut self, name: &str) -> PResult<Expr> {
        self.expect_keyword(name)?;
        self.expect('=')?;
        let e = self.expr()?;
        self.expect(';')?;
        Ok(e)
    }

    fn targets(&mut self) -> PResult<Vec<Expr>> {
        self.expect_keyword("g")?;
        self.expect('=')?;
        let g = self.expr_list()?;
        self.expect(';')?;
        Ok(g)
    }

    fn request(&mut self) -> PResult<Request> {
        let kw = self.ident()?;
        let req = match kw.as_str() {
            "symbol" => Request::Normalize(self.symbol_sum()?),
            "reciprocity" => Request::Reciprocity(self.symbol_sum()?),
            "tame" => {
                let symbol = self.symbol_sum()?;
                self.expect_keyword("at")?;
                let place = if self.is_keyword("inf") && *self.peek_at(1) == Tok::Punct(';') {
                    self.advance();
                    PlaceExpr::Infinity
                } else {
                    PlaceExpr::Finite(self.expr()?)
                };
                Request::Tame { symbol, place }
            }
            "rho" | "smooth" => {
                let f = self.assignment("f")?;
                let g = self.targets()?;
                return Ok(if kw == "rho" { Request::Rho { f, g } } else { Request::Smooth { f, g } });
            }
            "homotopy" => {
                let family = self.assignment("F")?;
                let g = self.targets()?;
                let mut mode = None;
                if self.is_keyword("mode") {
                    self.advance();
                    mode = Some(match self.ident()?.as_str() {
                        "strict" => HomotopyMode::Strict,
                        "endpoint" => HomotopyMode::Endpoint,
                        other => return self.error(format!("unknown mode '{other}'")),
                    });
                    self.expect(';')?;
                }
                return Ok(Request::Homotopy { family, g, mode });
            }
            "matrix" => {
                self.expect('[')?;
                let mut rows = vec![self.expr_list()?];
                while self.eat(',') {
                    rows.push(self.expr_list()?);
                }
                self.expect(']')?;
                Request::Matrix(rows)
            }
            other => {
                self.pos -= 1;
                return self.error(format!("unknown statement '{other}'"));
            }
        };
        self.expect(';')?;
        Ok(req)
    }
}

/// Parses a document: one `field` statement and one request, in either order.
pub fn parse(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let mut field = None;
    let mut request = None;
    while *p.peek() != Tok::Eof {
        if p.is_keyword("field") {
            if field.is_some() {
                return p.error("duplicate field statement");
            }
            p.advance();
            field = Some(p.field_spec()?);
            p.expect(';')?;
        } else {
            if request.is_some() {
                return p.error("a document holds a single request");
            }
            request = Some(p.request()?);
        }
    }
    match (field, request) {
        (Some(field), Some(request)) => Ok(Document { field, request }),
        (None, _) => p.error("missing field statement"),
        (_, None) => p.error("missing request"),
    }
}

/// Parses a bare field descriptor such as `F9 mod y^2+1` or `F5(t)`.
pub fn parse_field(text: &str) -> Result<FieldSpec, ParseError> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let spec = p.field_spec()?;
    p.eat(';');
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {}", p.peek().describe()));
    }
    Ok(spec)
}
