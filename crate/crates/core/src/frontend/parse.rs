//! Tokens and a Pratt parser for the expression language.

use num_bigint::BigInt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl Span {
    pub fn error(self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.col, msg)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    Define,
    Sep,
    Eof,
}

#[derive(Clone, Debug, PartialEq)]
struct Token {
    tok: Tok,
    span: Span,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        match c {
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
            }
            '\n' | ';' => {
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Sep,
                    span,
                });
            }
            c if c.is_whitespace() => {
                bump(&mut chars);
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(bump(&mut chars).expect("peeked"));
                }
                if chars.peek() == Some(&'.') {
                    return Err(span
                        .error("decimal numbers are not supported; write fractions such as 3/2"));
                }
                out.push(Token {
                    tok: Tok::Int(s.parse().expect("digits")),
                    span,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                while chars
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    s.push(bump(&mut chars).expect("peeked"));
                }
                out.push(Token {
                    tok: Tok::Ident(s),
                    span,
                });
            }
            ':' => {
                bump(&mut chars);
                if chars.peek() != Some(&'=') {
                    return Err(span.error("expected `:=`"));
                }
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Define,
                    span,
                });
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' | ',' => {
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Op(c),
                    span,
                });
            }
            '\u{2212}' => {
                bump(&mut chars);
                out.push(Token {
                    tok: Tok::Op('-'),
                    span,
                });
            }
            other => return Err(span.error(format!("unexpected character `{other}`"))),
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Name(String),
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(String, Vec<Node>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub expr: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub name: String,
    pub span: Span,
    pub body: Node,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

fn binding_power(op: char) -> Option<(u8, u8)> {
    match op {
        '+' | '-' => Some((10, 11)),
        '*' | '/' => Some((20, 21)),
        '^' => Some((41, 40)),
        _ => None,
    }
}

const PREFIX_MINUS: u8 = 30;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_op(&mut self, op: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Op(op) {
            Ok(())
        } else {
            Err(t
                .span
                .error(format!("expected `{op}`, found {}", describe(&t.tok))))
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Node> {
        let t = self.next();
        let mut lhs = match t.tok {
            Tok::Int(n) => Node {
                expr: Expr::Int(n),
                span: t.span,
            },
            Tok::Ident(name) => {
                if self.peek().tok == Tok::Op('(') {
                    self.next();
                    let mut args = vec![self.expr(0)?];
                    while self.peek().tok == Tok::Op(',') {
                        self.next();
                        args.push(self.expr(0)?);
                    }
                    self.expect_op(')')?;
                    Node {
                        expr: Expr::Call(name, args),
                        span: t.span,
                    }
                } else {
                    Node {
                        expr: Expr::Name(name),
                        span: t.span,
                    }
                }
            }
            Tok::Op('(') => {
                let inner = self.expr(0)?;
                self.expect_op(')')?;
                inner
            }
            Tok::Op('-') => {
                let inner = self.expr(PREFIX_MINUS)?;
                Node {
                    expr: Expr::Neg(Box::new(inner)),
                    span: t.span,
                }
            }
            Tok::Op('+') => self.expr(PREFIX_MINUS)?,
            other => {
                return Err(t.span.error(format!(
                    "expected an expression, found {}",
                    describe(&other)
                )))
            }
        };
        loop {
            let t = self.peek().clone();
            let Tok::Op(op) = t.tok else { break };
            let Some((lbp, rbp)) = binding_power(op) else {
                break;
            };
            if lbp < min_bp {
                break;
            }
            self.next();
            let rhs = self.expr(rbp)?;
            lhs = Node {
                expr: Expr::Bin(op, Box::new(lhs), Box::new(rhs)),
                span: t.span,
            };
        }
        Ok(lhs)
    }

    fn statement(&mut self) -> Result<Statement> {
        let t = self.next();
        let Tok::Ident(name) = t.tok else {
            return Err(t.span.error(format!(
                "expected a definition `name := ...`, found {}",
                describe(&t.tok)
            )));
        };
        // optional `(z)` after the name
        if self.peek().tok == Tok::Op('(') {
            self.next();
            let v = self.next();
            if v.tok != Tok::Ident("z".into()) {
                return Err(v.span.error("only `(z)` may follow a defined name"));
            }
            self.expect_op(')')?;
        }
        let d = self.next();
        if d.tok != Tok::Define {
            return Err(d
                .span
                .error(format!("expected `:=`, found {}", describe(&d.tok))));
        }
        let body = self.expr(0)?;
        let end = self.peek();
        if !matches!(end.tok, Tok::Sep | Tok::Eof) {
            return Err(end.span.error(format!("unexpected {}", describe(&end.tok))));
        }
        Ok(Statement {
            name,
            span: t.span,
            body,
        })
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(s) => format!("name `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
        Tok::Define => "`:=`".into(),
        Tok::Sep => "end of statement".into(),
        Tok::Eof => "end of input".into(),
    }
}

pub fn parse_statements(src: &str) -> Result<Vec<Statement>> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        while p.peek().tok == Tok::Sep {
            p.next();
        }
        if p.peek().tok == Tok::Eof {
            return Ok(out);
        }
        out.push(p.statement()?);
    }
}

pub fn parse_expression(src: &str) -> Result<Node> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
    };
    let e = p.expr(0)?;
    let end = p.peek();
    if end.tok != Tok::Eof {
        return Err(end.span.error(format!("unexpected {}", describe(&end.tok))));
    }
    Ok(e)
}
