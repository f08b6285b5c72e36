//! Recursive-descent parser for the formula language.
//!
//! ```text
//! formula   := implies
//! implies   := or ( "->" implies )?
//! or        := and ( "|" and )*
//! and       := temporal ( "&" temporal )*
//! temporal  := unary ( ("U"|"W"|"(+)") temporal )?    // one operator per chain
//! unary     := ("!"|"X"|"F"|"G") unary | primary
//! primary   := "true" | "false" | IDENT | "(" formula ")"
//! ```

use super::{Formula, Prop};
use crate::error::FormulaError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Not,
    And,
    Or,
    Arrow,
    Comp,
    LParen,
    RParen,
    True,
    False,
    Next,
    Finally,
    Globally,
    Until,
    WeakUntil,
    Ident(String),
    Eof,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Not => "!".into(),
            Tok::And => "&".into(),
            Tok::Or => "|".into(),
            Tok::Arrow => "->".into(),
            Tok::Comp => "(+)".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::True => "true".into(),
            Tok::False => "false".into(),
            Tok::Next => "X".into(),
            Tok::Finally => "F".into(),
            Tok::Globally => "G".into(),
            Tok::Until => "U".into(),
            Tok::WeakUntil => "W".into(),
            Tok::Ident(s) => s.clone(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const OPERATOR_CHARS: &str = "&|-<>=~+*/%^:;,.?@$\\";

fn lex(text: &str) -> Result<Vec<Spanned>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0, 1, 1);

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, column);
        let push = |tok: Tok, out: &mut Vec<Spanned>| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            })
        };
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        let width = match c {
            '!' => {
                push(Tok::Not, &mut out);
                1
            }
            ')' => {
                push(Tok::RParen, &mut out);
                1
            }
            '(' if chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') => {
                push(Tok::Comp, &mut out);
                3
            }
            '(' => {
                push(Tok::LParen, &mut out);
                1
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = match word.as_str() {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "X" => Tok::Next,
                    "F" => Tok::Finally,
                    "G" => Tok::Globally,
                    "U" => Tok::Until,
                    "W" => Tok::WeakUntil,
                    _ => Tok::Ident(word),
                };
                push(tok, &mut out);
                j - i
            }
            c if OPERATOR_CHARS.contains(c) => {
                let mut j = i;
                while j < chars.len() && OPERATOR_CHARS.contains(chars[j]) {
                    j += 1;
                }
                let run: String = chars[i..j].iter().collect();
                let tok = match run.as_str() {
                    "&" => Tok::And,
                    "|" => Tok::Or,
                    "->" => Tok::Arrow,
                    _ => {
                        return Err(FormulaError::UnknownOperator {
                            line,
                            column,
                            token: run,
                        })
                    }
                };
                push(tok, &mut out);
                j - i
            }
            other => {
                return Err(FormulaError::UnknownOperator {
                    line,
                    column,
                    token: other.to_string(),
                })
            }
        };
        i += width;
        column += width;
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: &Spanned, message: &str) -> FormulaError {
        FormulaError::Syntax {
            line: at.line,
            column: at.column,
            token: at.tok.text(),
            message: message.to_string(),
        }
    }

    fn implies(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.or()?;
        if self.peek().tok == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, FormulaError> {
        let mut lhs = self.temporal()?;
        while self.peek().tok == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, FormulaError> {
        let mut operands = vec![self.unary()?];
        let mut chain_op: Option<Tok> = None;
        loop {
            let next = self.peek().clone();
            if !matches!(next.tok, Tok::Until | Tok::WeakUntil | Tok::Comp) {
                break;
            }
            match &chain_op {
                Some(op) if *op != next.tok => {
                    return Err(self.error(
                        &next,
                        "different binary temporal operators cannot be chained without parentheses",
                    ))
                }
                _ => chain_op = Some(next.tok.clone()),
            }
            self.bump();
            operands.push(self.unary()?);
        }
        let Some(op) = chain_op else {
            return Ok(operands.pop().unwrap());
        };
        let build = match op {
            Tok::Until => Formula::until,
            Tok::WeakUntil => Formula::weak_until,
            _ => Formula::comp,
        };
        let last = operands.pop().unwrap();
        Ok(operands
            .into_iter()
            .rev()
            .fold(last, |acc, f| build(f, acc)))
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        let build = match self.peek().tok {
            Tok::Not => Formula::not,
            Tok::Next => Formula::next,
            Tok::Finally => Formula::finally,
            Tok::Globally => Formula::globally,
            _ => return self.primary(),
        };
        self.bump();
        Ok(build(self.unary()?))
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        let t = self.bump();
        match t.tok {
            Tok::True => Ok(Formula::True),
            Tok::False => Ok(Formula::False),
            Tok::Ident(name) => Ok(Formula::Atom(Prop::new(&name)?)),
            Tok::LParen => {
                let inner = self.implies()?;
                let close = self.bump();
                if close.tok != Tok::RParen {
                    return Err(self.error(&close, "expected ')'"));
                }
                Ok(inner)
            }
            _ => Err(self.error(
                &t,
                "expected a proposition, constant, unary operator or '('",
            )),
        }
    }
}

/// Parses a single formula.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.implies()?;
    let rest = p.peek().clone();
    if rest.tok != Tok::Eof {
        return Err(p.error(&rest, "unexpected token after formula"));
    }
    Ok(f)
}

/// Parses one formula per non-blank line; `#` starts a comment. Error
/// positions are reported relative to the whole text.
pub fn parse_formula_list(text: &str) -> Result<Vec<Formula>, FormulaError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let f = parse_formula(body).map_err(|e| match e {
            FormulaError::Syntax {
                column,
                token,
                message,
                ..
            } => FormulaError::Syntax {
                line: idx + 1,
                column,
                token,
                message,
            },
            FormulaError::UnknownOperator { column, token, .. } => FormulaError::UnknownOperator {
                line: idx + 1,
                column,
                token,
            },
            other => other,
        })?;
        out.push(f);
    }
    Ok(out)
}
