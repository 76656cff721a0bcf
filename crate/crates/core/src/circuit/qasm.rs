//! OpenQASM 2.0 subset reader and writer.
//!
//! Accepted: one `qreg`, any number of `creg`s, `include`, the gates of
//! [`GateKind`], and `barrier`/`measure` statements, which are dropped.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, CircuitError, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unsupported gate `{name}`")]
    UnsupportedGate { name: String, line: usize, col: usize },
    #[error("{line}:{col}: unsupported statement `{name}`")]
    UnsupportedStatement { name: String, line: usize, col: usize },
    #[error("{line}:{col}: only a single quantum register is supported")]
    MultipleRegisters { line: usize, col: usize },
    #[error("{line}:{col}: unknown register `{name}`")]
    UnknownRegister { name: String, line: usize, col: usize },
    #[error("no quantum register declared")]
    MissingRegister,
    #[error("{line}:{col}: {source}")]
    Invalid {
        line: usize,
        col: usize,
        #[source]
        source: CircuitError,
    },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Sym(char),
    Arrow,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, QasmError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, msg: &str| QasmError::Syntax {
        line,
        col,
        msg: msg.to_string(),
    };
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_alphabetic() || c == '_' {
            let s = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - s;
            out.push(Token {
                tok: Tok::Ident(chars[s..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let s = i;
            let mut is_real = false;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                is_real = true;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    is_real = true;
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let lexeme: String = chars[s..i].iter().collect();
            col += i - s;
            let tok = if is_real {
                Tok::Real(
                    lexeme
                        .parse()
                        .map_err(|_| syntax(start_line, start_col, "malformed real literal"))?,
                )
            } else {
                Tok::Int(
                    lexeme
                        .parse()
                        .map_err(|_| syntax(start_line, start_col, "integer literal too large"))?,
                )
            };
            out.push(Token {
                tok,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c == '"' {
            let s = i + 1;
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(syntax(start_line, start_col, "unterminated string"));
            }
            let lit: String = chars[s..i].iter().collect();
            i += 1;
            col += i - s + 1;
            out.push(Token {
                tok: Tok::Str(lit),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            i += 2;
            col += 2;
            out.push(Token {
                tok: Tok::Arrow,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if "()[];,+-*/^".contains(c) {
            i += 1;
            col += 1;
            out.push(Token {
                tok: Tok::Sym(c),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        return Err(syntax(line, col, &format!("unexpected character {c:?}")));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Operand reference: a register, optionally indexed.
struct Operand {
    reg: String,
    index: Option<u64>,
    line: usize,
    col: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    qreg: Option<(String, usize)>,
    cregs: Vec<String>,
    gates: Vec<Gate>,
}

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

    fn err_at(&self, t: &Token, msg: impl Into<String>) -> QasmError {
        QasmError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), QasmError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            Err(self.err_at(&t, format!("expected `{c}`")))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect_ident(&mut self) -> Result<(String, Token), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            _ => Err(self.err_at(&t, "expected identifier")),
        }
    }

    fn expect_int(&mut self) -> Result<u64, QasmError> {
        let t = self.next();
        match t.tok {
            Tok::Int(v) => Ok(v),
            _ => Err(self.err_at(&t, "expected integer")),
        }
    }

    fn header(&mut self) -> Result<(), QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) if s == "OPENQASM" => {}
            _ => return Err(self.err_at(&t, "expected `OPENQASM 2.0;` header")),
        }
        let v = self.next();
        match v.tok {
            Tok::Real(x) if (x - 2.0).abs() < 1e-12 => {}
            Tok::Int(2) => {}
            _ => return Err(self.err_at(&v, "only OpenQASM 2.0 is supported")),
        }
        self.expect_sym(';')
    }

    fn program(&mut self) -> Result<(), QasmError> {
        self.header()?;
        loop {
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(word) => {
                    let word = word.clone();
                    self.statement(&word, &t)?;
                }
                _ => return Err(self.err_at(&t, "expected statement")),
            }
        }
    }

    fn statement(&mut self, word: &str, at: &Token) -> Result<(), QasmError> {
        match word {
            "include" => {
                self.next();
                let s = self.next();
                if !matches!(s.tok, Tok::Str(_)) {
                    return Err(self.err_at(&s, "expected file name string"));
                }
                self.expect_sym(';')
            }
            "qreg" => {
                self.next();
                let (name, _) = self.expect_ident()?;
                self.expect_sym('[')?;
                let size = self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                if self.qreg.is_some() {
                    return Err(QasmError::MultipleRegisters {
                        line: at.line,
                        col: at.col,
                    });
                }
                if size == 0 {
                    return Err(self.err_at(at, "register size must be positive"));
                }
                self.qreg = Some((name, size as usize));
                Ok(())
            }
            "creg" => {
                self.next();
                let (name, _) = self.expect_ident()?;
                self.expect_sym('[')?;
                self.expect_int()?;
                self.expect_sym(']')?;
                self.expect_sym(';')?;
                self.cregs.push(name);
                Ok(())
            }
            "barrier" => {
                self.next();
                self.operand_list()?;
                self.expect_sym(';')
            }
            "measure" => {
                self.next();
                self.operand()?;
                let t = self.next();
                if t.tok != Tok::Arrow {
                    return Err(self.err_at(&t, "expected `->`"));
                }
                self.operand()?;
                self.expect_sym(';')
            }
            "gate" | "opaque" | "reset" | "if" => Err(QasmError::UnsupportedStatement {
                name: word.to_string(),
                line: at.line,
                col: at.col,
            }),
            _ => self.gate_call(word, at),
        }
    }

    fn operand(&mut self) -> Result<Operand, QasmError> {
        let (reg, t) = self.expect_ident()?;
        let index = if self.eat_sym('[') {
            let i = self.expect_int()?;
            self.expect_sym(']')?;
            Some(i)
        } else {
            None
        };
        Ok(Operand {
            reg,
            index,
            line: t.line,
            col: t.col,
        })
    }

    fn operand_list(&mut self) -> Result<Vec<Operand>, QasmError> {
        let mut ops = vec![self.operand()?];
        while self.eat_sym(',') {
            ops.push(self.operand()?);
        }
        Ok(ops)
    }

    fn gate_call(&mut self, name: &str, at: &Token) -> Result<(), QasmError> {
        self.next();
        let kind = GateKind::from_name(name).ok_or_else(|| QasmError::UnsupportedGate {
            name: name.to_string(),
            line: at.line,
            col: at.col,
        })?;
        let mut params = Vec::new();
        if self.eat_sym('(') && !self.eat_sym(')') {
            params.push(self.expr()?);
            while self.eat_sym(',') {
                params.push(self.expr()?);
            }
            self.expect_sym(')')?;
        }
        let operands = self.operand_list()?;
        self.expect_sym(';')?;

        let (qname, size) = match &self.qreg {
            Some((n, s)) => (n.clone(), *s),
            None => {
                return Err(QasmError::UnknownRegister {
                    name: operands[0].reg.clone(),
                    line: operands[0].line,
                    col: operands[0].col,
                })
            }
        };
        for op in &operands {
            if op.reg != qname {
                return Err(QasmError::UnknownRegister {
                    name: op.reg.clone(),
                    line: op.line,
                    col: op.col,
                });
            }
            if let Some(i) = op.index {
                if i as usize >= size {
                    return Err(QasmError::Invalid {
                        line: op.line,
                        col: op.col,
                        source: CircuitError::QubitOutOfRange {
                            qubit: i as usize,
                            num_qubits: size,
                        },
                    });
                }
            }
        }
        let invalid = |source| QasmError::Invalid {
            line: at.line,
            col: at.col,
            source,
        };
        // Whole-register broadcast of a single-qubit gate.
        if operands.len() == 1 && operands[0].index.is_none() && kind.arity() == 1 {
            for q in 0..size {
                self.gates
                    .push(Gate::new(kind, params.clone(), vec![q]).map_err(invalid)?);
            }
            return Ok(());
        }
        let mut qubits = Vec::with_capacity(operands.len());
        for op in &operands {
            match op.index {
                Some(i) => qubits.push(i as usize),
                None => {
                    return Err(QasmError::Syntax {
                        line: op.line,
                        col: op.col,
                        msg: "register broadcast is only supported for single-qubit gates".into(),
                    })
                }
            }
        }
        self.gates.push(Gate::new(kind, params, qubits).map_err(invalid)?);
        Ok(())
    }

    fn expr(&mut self) -> Result<f64, QasmError> {
        let mut v = self.term()?;
        loop {
            if self.eat_sym('+') {
                v += self.term()?;
            } else if self.eat_sym('-') {
                v -= self.term()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<f64, QasmError> {
        let mut v = self.factor()?;
        loop {
            if self.eat_sym('*') {
                v *= self.factor()?;
            } else if self.eat_sym('/') {
                v /= self.factor()?;
            } else {
                return Ok(v);
            }
        }
    }

    fn factor(&mut self) -> Result<f64, QasmError> {
        if self.eat_sym('-') {
            return Ok(-self.factor()?);
        }
        if self.eat_sym('+') {
            return self.factor();
        }
        let base = self.primary()?;
        if self.eat_sym('^') {
            let exp = self.factor()?;
            return Ok(base.powf(exp));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<f64, QasmError> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(*v as f64),
            Tok::Real(v) => Ok(*v),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(v)
            }
            Tok::Ident(s) if s == "pi" => Ok(std::f64::consts::PI),
            Tok::Ident(s) => {
                let f: fn(f64) -> f64 = match s.as_str() {
                    "sin" => f64::sin,
                    "cos" => f64::cos,
                    "tan" => f64::tan,
                    "exp" => f64::exp,
                    "ln" => f64::ln,
                    "sqrt" => f64::sqrt,
                    _ => return Err(self.err_at(&t, format!("unknown identifier `{s}` in expression"))),
                };
                self.expect_sym('(')?;
                let v = self.expr()?;
                self.expect_sym(')')?;
                Ok(f(v))
            }
            _ => Err(self.err_at(&t, "expected expression")),
        }
    }
}

/// Parses an OpenQASM 2.0 program with a single quantum register.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        qreg: None,
        cregs: Vec::new(),
        gates: Vec::new(),
    };
    p.program()?;
    let (_, size) = p.qreg.ok_or(QasmError::MissingRegister)?;
    Circuit::from_gates(size, p.gates).map_err(|source| QasmError::Invalid {
        line: 0,
        col: 0,
        source,
    })
}

/// Serializes a circuit as OpenQASM 2.0 over register `q`.
pub fn write_qasm(c: &Circuit) -> String {
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{}];", c.num_qubits());
    for g in c.gates() {
        out.push_str(g.name());
        if !g.params.is_empty() {
            let ps: Vec<String> = g.params.iter().map(|p| format!("{p:?}")).collect();
            let _ = write!(out, "({})", ps.join(","));
        }
        let qs: Vec<String> = g.qubits.iter().map(|q| format!("q[{q}]")).collect();
        let _ = writeln!(out, " {};", qs.join(","));
    }
    out
}
