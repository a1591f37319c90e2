//! Multi-agent epistemic formulas and their concrete syntax.
//!
//! ```text
//! iff     := implies ("<->" implies)*
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | MODAL "{" agents "}" unary | "(" iff ")" | VAR
//! MODAL   := "K" | "E" | "D" | "box" | "dia"
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {position}: {message}")]
pub struct SyntaxError {
    /// Character offset into the input.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `K{i}`; also the target of `box{i}`.
    Know(String, Box<Formula>),
    /// `E{G}`: everyone in the group knows.
    Mutual(BTreeSet<String>, Box<Formula>),
    /// `D{G}`: the group's pooled knowledge.
    Distributed(BTreeSet<String>, Box<Formula>),
}

impl Formula {
    pub fn var(name: impl Into<String>) -> Self {
        Formula::Var(name.into())
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn know(agent: impl Into<String>, f: Formula) -> Self {
        Formula::Know(agent.into(), Box::new(f))
    }

    /// `¬K{i}¬f`.
    pub fn possible(agent: impl Into<String>, f: Formula) -> Self {
        Formula::not(Formula::know(agent, Formula::not(f)))
    }

    pub fn mutual<I, S>(agents: I, f: Formula) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::Mutual(agents.into_iter().map(Into::into).collect(), Box::new(f))
    }

    pub fn distributed<I, S>(agents: I, f: Formula) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Formula::Distributed(agents.into_iter().map(Into::into).collect(), Box::new(f))
    }

    /// Nesting depth of connectives and modalities; variables have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::Not(f) | Formula::Know(_, f) | Formula::Mutual(_, f) | Formula::Distributed(_, f) => {
                1 + f.depth()
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.depth().max(b.depth())
            }
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| {
            if let Formula::Var(v) = f {
                out.insert(v.as_str());
            }
        });
        out
    }

    pub fn agents(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Know(a, _) => {
                out.insert(a.as_str());
            }
            Formula::Mutual(g, _) | Formula::Distributed(g, _) => {
                out.extend(g.iter().map(String::as_str));
            }
            _ => {}
        });
        out
    }

    fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::Var(_) => {}
            Formula::Not(f) | Formula::Know(_, f) | Formula::Mutual(_, f) | Formula::Distributed(_, f) => {
                f.walk(visit)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.walk(visit);
                b.walk(visit);
            }
        }
    }
}

fn write_group(f: &mut fmt::Formatter<'_>, op: char, group: &BTreeSet<String>) -> fmt::Result {
    write!(f, "{op}{{")?;
    for (i, a) in group.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        f.write_str(a)?;
    }
    f.write_str("} ")
}

/// Prints binary connectives fully parenthesized, so printing then parsing
/// returns the same tree.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::Not(x) => write!(f, "!{x}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Formula::Know(a, x) => write!(f, "K{{{a}}} {x}"),
            Formula::Mutual(g, x) => {
                write_group(f, 'E', g)?;
                write!(f, "{x}")
            }
            Formula::Distributed(g, x) => {
                write_group(f, 'D', g)?;
                write!(f, "{x}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Modal {
    Know,
    Mutual,
    Distributed,
    Possible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Var(String),
    Modal(Modal, Vec<String>),
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
}

fn is_variable(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let err = |position: usize, message: &str| SyntaxError {
        position,
        message: message.to_string(),
    };
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => i += 1,
            '!' => {
                tokens.push((start, Token::Not));
                i += 1;
            }
            '&' => {
                tokens.push((start, Token::And));
                i += 1;
            }
            '|' => {
                tokens.push((start, Token::Or));
                i += 1;
            }
            '(' => {
                tokens.push((start, Token::LParen));
                i += 1;
            }
            ')' => {
                tokens.push((start, Token::RParen));
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((start, Token::Implies));
                i += 2;
            }
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                tokens.push((start, Token::Iff));
                i += 3;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let modal = match word.as_str() {
                    "K" | "box" => Some(Modal::Know),
                    "E" => Some(Modal::Mutual),
                    "D" => Some(Modal::Distributed),
                    "dia" => Some(Modal::Possible),
                    _ => None,
                };
                if let Some(modal) = modal {
                    if chars.get(i) != Some(&'{') {
                        return Err(err(i, &format!("expected '{{' after {word}")));
                    }
                    let close = chars[i..]
                        .iter()
                        .position(|c| *c == '}')
                        .map(|p| p + i)
                        .ok_or_else(|| err(chars.len(), "unclosed agent list"))?;
                    let mut agents = Vec::new();
                    let mut offset = i + 1;
                    for part in chars[i + 1..close].split(|c| *c == ',') {
                        let name: String = part.iter().collect::<String>().trim().to_string();
                        if name.is_empty()
                            || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            return Err(err(offset, "invalid agent name"));
                        }
                        agents.push(name);
                        offset += part.len() + 1;
                    }
                    if matches!(modal, Modal::Know | Modal::Possible) && agents.len() != 1 {
                        return Err(err(i, &format!("{word} takes exactly one agent")));
                    }
                    tokens.push((start, Token::Modal(modal, agents)));
                    i = close + 1;
                } else if is_variable(&word) {
                    tokens.push((start, Token::Var(word)));
                } else {
                    return Err(err(start, &format!("invalid identifier '{word}'")));
                }
            }
            other => return Err(err(start, &format!("unexpected character '{other}'"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn error(&self, message: &str) -> SyntaxError {
        SyntaxError {
            position: self.offset(),
            message: message.to_string(),
        }
    }

    fn eat(&mut self, token: &Token) -> bool {
        if self.peek() == Some(token) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.implies()?;
        while self.eat(&Token::Iff) {
            left = Formula::iff(left, self.implies()?);
        }
        Ok(left)
    }

    fn implies(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.or()?;
        if self.eat(&Token::Implies) {
            return Ok(Formula::implies(left, self.implies()?));
        }
        Ok(left)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.and()?;
        while self.eat(&Token::Or) {
            left = Formula::or(left, self.and()?);
        }
        Ok(left)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.unary()?;
        while self.eat(&Token::And) {
            left = Formula::and(left, self.unary()?);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let token = self.peek().cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        match token {
            Token::Var(v) => Ok(Formula::Var(v)),
            Token::Not => Ok(Formula::not(self.unary()?)),
            Token::Modal(modal, mut agents) => {
                let body = self.unary()?;
                Ok(match modal {
                    Modal::Know => Formula::know(agents.remove(0), body),
                    Modal::Possible => Formula::possible(agents.remove(0), body),
                    Modal::Mutual => Formula::mutual(agents, body),
                    Modal::Distributed => Formula::distributed(agents, body),
                })
            }
            Token::LParen => {
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                Err(self.error("expected a formula"))
            }
        }
    }
}

/// Parses a formula; `box{i}` becomes `K{i}` and `dia{i} f` becomes
/// `!K{i} !f`.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    let mut parser = Parser {
        tokens: lex(text)?,
        pos: 0,
        end: text.chars().count(),
    };
    let formula = parser.iff()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(formula)
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
