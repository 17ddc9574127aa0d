use super::{BinOp, Expression, Func, Predicate, Relop};

/// Parse failure with a one-based line/column position.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("function `{name}` takes {expected} argument(s), got {found}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Rel(Relop),
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    let err = |line, column, msg: String| ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text
                .parse()
                .map_err(|_| err(tl, tc, format!("malformed number `{text}`")))?;
            if !value.is_finite() {
                return Err(err(tl, tc, format!("number `{text}` is out of range")));
            }
            Tok::Num(value)
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, len) = match (c, next) {
                ('<', Some('=')) => (Tok::Rel(Relop::Le), 2),
                ('>', Some('=')) => (Tok::Rel(Relop::Ge), 2),
                ('!', Some('=')) => (Tok::Rel(Relop::Ne), 2),
                ('=', Some('=')) => (Tok::Rel(Relop::Eq), 2),
                ('<', _) => (Tok::Rel(Relop::Lt), 1),
                ('>', _) => (Tok::Rel(Relop::Gt), 1),
                ('≤', _) => (Tok::Rel(Relop::Le), 1),
                ('≥', _) => (Tok::Rel(Relop::Ge), 1),
                ('≠', _) => (Tok::Rel(Relop::Ne), 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) | ('−', _) => (Tok::Minus, 1),
                ('*', _) => (Tok::Star, 1),
                ('/', _) => (Tok::Slash, 1),
                ('^', _) => (Tok::Caret, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
            };
            i += len;
            tok
        };
        column += i - start;
        out.push(Token {
            tok,
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, pos: usize, kind: ParseErrorKind) -> ParseError {
        let t = &self.tokens[pos];
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.pos, ParseErrorKind::Syntax(msg.into()))
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::End => "end of input".into(),
            Tok::Num(v) => format!("number {v}"),
            Tok::Ident(s) => format!("`{s}`"),
            other => format!("{other:?}"),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}, found {}", self.describe())))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expression::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expression, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expression::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := atom ('^' exponent)?      exponent := '-' exponent | power
    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exponent = self.exponent()?;
        Ok(Expression::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)))
    }

    fn exponent(&mut self) -> Result<Expression, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expression::Neg(Box::new(self.exponent()?)));
        }
        self.power()
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        let at = self.pos;
        match self.bump() {
            Tok::Num(v) => Ok(Expression::Num(v)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => self.identifier(at, name),
            _ => {
                self.pos = at;
                Err(self.syntax(format!("expected an expression, found {}", self.describe())))
            }
        }
    }

    fn identifier(&mut self, at: usize, name: String) -> Result<Expression, ParseError> {
        if name == "t" {
            return Ok(Expression::Time);
        }
        if name == "pi" {
            return Ok(Expression::Num(std::f64::consts::PI));
        }
        if let Some(index) = name
            .strip_prefix('x')
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) && !d.starts_with('0'))
            .and_then(|d| d.parse::<usize>().ok())
        {
            return Ok(Expression::Var(index - 1));
        }
        let Some(func) = Func::from_name(&name) else {
            return Err(self.error_at(at, ParseErrorKind::UnknownIdentifier(name)));
        };
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.expr()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        if args.len() != func.arity() {
            return Err(self.error_at(
                at,
                ParseErrorKind::Arity {
                    name,
                    expected: func.arity(),
                    found: args.len(),
                },
            ));
        }
        Ok(Expression::Call(func, args))
    }

    // pred := conj ('or' conj)*
    fn predicate(&mut self) -> Result<Predicate, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.is_keyword("or") {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Predicate::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // conj := negation ('and' negation)*
    fn conjunction(&mut self) -> Result<Predicate, ParseError> {
        let mut lhs = self.negation()?;
        while self.is_keyword("and") {
            self.bump();
            let rhs = self.negation()?;
            lhs = Predicate::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    // negation := 'not' negation | 'true' | 'false' | comparison | '(' pred ')'
    fn negation(&mut self) -> Result<Predicate, ParseError> {
        if self.is_keyword("not") {
            self.bump();
            return Ok(Predicate::Not(Box::new(self.negation()?)));
        }
        if self.is_keyword("true") || self.is_keyword("false") {
            let value = self.is_keyword("true");
            self.bump();
            return Ok(Predicate::Const(value));
        }
        if *self.peek() != Tok::LParen {
            return self.comparison();
        }
        // A leading `(` opens either an arithmetic operand or a grouped
        // predicate; try the comparison first and fall back.
        let start = self.pos;
        let as_comparison = self.comparison();
        match as_comparison {
            Ok(p) => Ok(p),
            Err(cmp_err) => {
                self.pos = start;
                self.bump();
                let grouped = self.predicate().and_then(|p| {
                    self.expect(Tok::RParen, "`)`")?;
                    Ok(p)
                });
                match grouped {
                    Ok(p) => Ok(p),
                    Err(group_err) => {
                        let later = |e: &ParseError| (e.line, e.column);
                        Err(if later(&group_err) >= later(&cmp_err) {
                            group_err
                        } else {
                            cmp_err
                        })
                    }
                }
            }
        }
    }

    fn comparison(&mut self) -> Result<Predicate, ParseError> {
        let lhs = self.expr()?;
        let Tok::Rel(op) = self.peek().clone() else {
            return Err(self.syntax(format!("expected a comparison operator, found {}", self.describe())));
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Predicate::Compare(op, lhs, rhs))
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.syntax(format!("unexpected trailing {}", self.describe())))
        }
    }
}

/// Parses an arithmetic expression such as `x1/(1 - t*x1)`.
pub fn parse_expression(source: &str) -> Result<Expression, ParseError> {
    let mut p = Parser {
        tokens: lex(source)?,
        pos: 0,
    };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parses a predicate such as `x1 != 0 or abs(x2) > 1`.
pub fn parse_predicate(source: &str) -> Result<Predicate, ParseError> {
    let mut p = Parser {
        tokens: lex(source)?,
        pos: 0,
    };
    let pred = p.predicate()?;
    p.finish()?;
    Ok(pred)
}
