use std::collections::BTreeMap;
use std::sync::Arc;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

const MAX_NESTING: usize = 200;

pub struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    file: Arc<str>,
    next_id: u32,
    source_map: BTreeMap<StmtId, SourceLoc>,
    depth: usize,
}

impl Parser {
    pub fn new(src: &str, file: &str) -> Result<Parser, ParseError> {
        Ok(Parser {
            tokens: tokenize(src)?,
            pos: 0,
            file: Arc::from(file),
            next_id: 0,
            source_map: BTreeMap::new(),
            depth: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let idx = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[idx].tok
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: impl Into<String>) -> ParseError {
        let t = &self.tokens[self.pos];
        ParseError {
            line: t.line,
            col: t.col,
            expected: expected.into(),
            found: t.tok.describe(),
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.advance())
        } else {
            Err(self.error(tok.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.advance();
                Ok(name)
            }
            _ => Err(self.error("an identifier")),
        }
    }

    fn new_id(&mut self, tok: &Token) -> StmtId {
        let id = StmtId(self.next_id);
        self.next_id += 1;
        self.source_map.insert(
            id,
            SourceLoc {
                file: self.file.clone(),
                line: tok.line,
                col: tok.col,
            },
        );
        id
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.error(format!("nesting depth at most {MAX_NESTING}")));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    pub fn parse_program(mut self) -> Result<Program, ParseError> {
        let mut globals = Vec::new();
        let mut functions = Vec::new();
        let mut end_assumes = Vec::new();
        loop {
            match self.peek() {
                Tok::Eof => break,
                Tok::KwInt => {
                    let start = self.advance();
                    let id = self.new_id(&start);
                    let (name, size, init) = self.decl_rest()?;
                    self.expect(Tok::Semi)?;
                    globals.push(VarDecl {
                        id,
                        name,
                        size,
                        init,
                    });
                }
                Tok::KwFunc => functions.push(self.function()?),
                Tok::KwAssumeAtEnd => {
                    let start = self.advance();
                    let id = self.new_id(&start);
                    self.expect(Tok::LParen)?;
                    let cond = self.expr()?;
                    self.expect(Tok::RParen)?;
                    self.expect(Tok::Semi)?;
                    end_assumes.push(EndAssume { id, cond });
                }
                _ => return Err(self.error("`int`, `func` or `assume_at_end`")),
            }
        }
        Ok(Program {
            globals,
            functions,
            end_assumes,
            entry: "main".to_string(),
            source_map: self.source_map,
            origins: BTreeMap::new(),
            next_id: self.next_id,
        })
    }

    /// After `int`: `name`, `name = e` or `name[e]`.
    fn decl_rest(&mut self) -> Result<(String, Option<Expr>, Option<Expr>), ParseError> {
        let name = self.ident()?;
        match self.peek() {
            Tok::LBracket => {
                self.advance();
                let size = self.expr()?;
                self.expect(Tok::RBracket)?;
                Ok((name, Some(size), None))
            }
            Tok::Assign => {
                self.advance();
                let init = self.expr()?;
                Ok((name, None, Some(init)))
            }
            _ => Ok((name, None, None)),
        }
    }

    fn function(&mut self) -> Result<FunctionDef, ParseError> {
        let start = self.expect(Tok::KwFunc)?;
        let id = self.new_id(&start);
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        let mut params = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                self.expect(Tok::KwInt)?;
                params.push(self.ident()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        let body = self.block()?;
        Ok(FunctionDef {
            id,
            name,
            params,
            body,
        })
    }

    fn block(&mut self) -> Result<Vec<Stmt>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut stmts = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(self.error("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        self.advance();
        Ok(stmts)
    }

    /// A braced block or a single statement.
    fn body(&mut self) -> Result<Vec<Stmt>, ParseError> {
        if *self.peek() == Tok::LBrace {
            self.block()
        } else {
            Ok(vec![self.stmt()?])
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        self.enter()?;
        let result = self.stmt_inner();
        self.leave();
        result
    }

    fn stmt_inner(&mut self) -> Result<Stmt, ParseError> {
        let start = self.tokens[self.pos].clone();
        match start.tok {
            Tok::KwInt => {
                self.advance();
                let id = self.new_id(&start);
                let (name, size, init) = self.decl_rest()?;
                self.expect(Tok::Semi)?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Decl { name, size, init },
                })
            }
            Tok::KwIf => {
                self.advance();
                let id = self.new_id(&start);
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let then_branch = self.body()?;
                let else_branch = if *self.peek() == Tok::KwElse {
                    self.advance();
                    self.body()?
                } else {
                    Vec::new()
                };
                Ok(Stmt {
                    id,
                    kind: StmtKind::If {
                        cond,
                        then_branch,
                        else_branch,
                    },
                })
            }
            Tok::KwWhile => {
                self.advance();
                let id = self.new_id(&start);
                self.expect(Tok::LParen)?;
                let cond = self.expr()?;
                self.expect(Tok::RParen)?;
                let body = self.body()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::While { cond, body },
                })
            }
            Tok::KwFor => {
                self.advance();
                let id = self.new_id(&start);
                self.expect(Tok::LParen)?;
                let init = if *self.peek() == Tok::Semi {
                    None
                } else {
                    Some(Box::new(self.simple_stmt(true)?))
                };
                self.expect(Tok::Semi)?;
                let cond = self.expr()?;
                self.expect(Tok::Semi)?;
                let step = if *self.peek() == Tok::RParen {
                    None
                } else {
                    Some(Box::new(self.simple_stmt(false)?))
                };
                self.expect(Tok::RParen)?;
                let body = self.body()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::For {
                        init,
                        cond,
                        step,
                        body,
                    },
                })
            }
            Tok::KwReturn => {
                self.advance();
                let id = self.new_id(&start);
                let value = if *self.peek() == Tok::Semi {
                    None
                } else {
                    Some(self.expr()?)
                };
                self.expect(Tok::Semi)?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Return(value),
                })
            }
            Tok::KwAssert | Tok::KwAssume => {
                self.advance();
                let id = self.new_id(&start);
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Semi)?;
                let kind = if start.tok == Tok::KwAssert {
                    StmtKind::Assert(e)
                } else {
                    StmtKind::Assume(e)
                };
                Ok(Stmt { id, kind })
            }
            Tok::KwLog => {
                self.advance();
                let id = self.new_id(&start);
                self.expect(Tok::LParen)?;
                let label = match self.peek().clone() {
                    Tok::Str(s) => {
                        self.advance();
                        s
                    }
                    _ => return Err(self.error("a string literal label")),
                };
                self.expect(Tok::RParen)?;
                self.expect(Tok::Semi)?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Log(label),
                })
            }
            Tok::Ident(_) => {
                let s = self.simple_stmt(false)?;
                self.expect(Tok::Semi)?;
                Ok(s)
            }
            _ => Err(self.error("a statement")),
        }
    }

    /// Assignment-like statements usable as `for` init/step and as ordinary
    /// statements (without the trailing `;`).
    fn simple_stmt(&mut self, allow_decl: bool) -> Result<Stmt, ParseError> {
        let start = self.tokens[self.pos].clone();
        if start.tok == Tok::KwInt {
            if !allow_decl {
                return Err(self.error("an assignment"));
            }
            self.advance();
            let id = self.new_id(&start);
            let name = self.ident()?;
            self.expect(Tok::Assign)?;
            let init = self.expr()?;
            return Ok(Stmt {
                id,
                kind: StmtKind::Decl {
                    name,
                    size: None,
                    init: Some(init),
                },
            });
        }
        let name = self.ident()?;
        let id = self.new_id(&start);
        match self.peek() {
            Tok::LParen => {
                let args = self.call_args()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Call {
                        dest: None,
                        func: name,
                        args,
                    },
                })
            }
            Tok::LBracket => {
                self.advance();
                let index = self.expr()?;
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Assign)?;
                let value = self.expr()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Assign {
                        target: LValue::Index(name, index),
                        value,
                    },
                })
            }
            Tok::Assign => {
                self.advance();
                if *self.peek() == Tok::KwHavoc {
                    self.advance();
                    self.expect(Tok::LParen)?;
                    self.expect(Tok::RParen)?;
                    return Ok(Stmt {
                        id,
                        kind: StmtKind::Havoc(name),
                    });
                }
                if let (Tok::Ident(func), Tok::LParen) = (self.peek().clone(), self.peek_at(1)) {
                    self.advance();
                    let args = self.call_args()?;
                    return Ok(Stmt {
                        id,
                        kind: StmtKind::Call {
                            dest: Some(name),
                            func,
                            args,
                        },
                    });
                }
                let value = self.expr()?;
                Ok(Stmt {
                    id,
                    kind: StmtKind::Assign {
                        target: LValue::Var(name),
                        value,
                    },
                })
            }
            _ => Err(self.error("`=`, `[` or `(`")),
        }
    }

    fn call_args(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.expr()?);
                if *self.peek() == Tok::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(args)
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::OrOr => BinOp::Or,
            Tok::AndAnd => BinOp::And,
            Tok::EqEq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            Tok::Plus => BinOp::Add,
            Tok::Minus => BinOp::Sub,
            Tok::Star => BinOp::Mul,
            Tok::Slash => BinOp::Div,
            Tok::Percent => BinOp::Rem,
            _ => return None,
        })
    }

    fn binary(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            self.advance();
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let result = match self.peek() {
            Tok::Minus => {
                self.advance();
                self.unary()
                    .map(|e| Expr::Unary(UnOp::Neg, Box::new(e)))
            }
            Tok::Bang => {
                self.advance();
                self.unary().map(|e| Expr::Unary(UnOp::Not, Box::new(e)))
            }
            _ => self.primary(),
        };
        self.leave();
        result
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.advance();
                Ok(Expr::Int(v))
            }
            Tok::KwTrue => {
                self.advance();
                Ok(Expr::Bool(true))
            }
            Tok::KwFalse => {
                self.advance();
                Ok(Expr::Bool(false))
            }
            Tok::Ident(name) => {
                self.advance();
                if *self.peek() == Tok::LBracket {
                    self.advance();
                    let index = self.expr()?;
                    self.expect(Tok::RBracket)?;
                    Ok(Expr::Index(name, Box::new(index)))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::LParen => {
                self.advance();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.error("an expression")),
        }
    }
}
