//! Rule-file parser.
//!
//! ```text
//! file     := { line }
//! line     := blank | '#' comment | rule
//! rule     := { slot } '|' IDENT '->' { term } '|' IDENT
//! slot     := '0' | 'S' IDENT | IDENT
//! term     := DECIMAL | IDENT | 'S' '(' term ')'
//! ```
//!
//! `S` is reserved. Line and column numbers in errors are 1-based.

use alloc::string::String;
use alloc::vec::Vec;

use super::{Mode, Pattern, RewriteRule, RewriteSystem, RuleError, Slot, Template, Term};
use crate::nat::Nat;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseErrorKind {
    #[error("unexpected {found}, expected {expected}")]
    Unexpected {
        found: String,
        expected: &'static str,
    },
    #[error("invalid character {0:?}")]
    BadChar(char),
    #[error("only 0 is allowed as a literal in a pattern, found {0}")]
    PatternLiteral(String),
    #[error(transparent)]
    Rule(#[from] RuleError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    LParen,
    RParen,
    Bar,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => alloc::format!("identifier {s:?}"),
            Tok::Number(s) => alloc::format!("number {s}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Bar => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::End => "end of line".into(),
        }
    }
}

fn tokenize(line: &str) -> Result<Vec<(usize, Tok)>, (usize, ParseErrorKind)> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '|' => Tok::Bar,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                    i += 1;
                }
                Tok::Number(chars[start..=i].iter().collect())
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while chars
                    .get(i + 1)
                    .is_some_and(|d| d.is_alphanumeric() || *d == '_' || *d == '\'')
                {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            other => return Err((col, ParseErrorKind::BadChar(other))),
        };
        out.push((col, tok));
        i += 1;
    }
    out.push((chars.len() + 1, Tok::End));
    Ok(out)
}

struct Cursor {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type Res<T> = Result<T, (usize, ParseErrorKind)>;

impl Cursor {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn column(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &'static str) -> Res<T> {
        Err((
            self.column(),
            ParseErrorKind::Unexpected {
                found: self.peek().describe(),
                expected,
            },
        ))
    }

    fn expect(&mut self, want: Tok, expected: &'static str) -> Res<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.unexpected(expected)
        }
    }

    fn variable(&mut self) -> Res<String> {
        match self.peek() {
            Tok::Ident(v) if v != "S" => {
                let v = v.clone();
                self.bump();
                Ok(v)
            }
            _ => self.unexpected("a variable"),
        }
    }

    fn slot(&mut self) -> Res<Slot> {
        match self.peek().clone() {
            Tok::Number(n) => {
                if n.bytes().all(|b| b == b'0') {
                    self.bump();
                    Ok(Slot::Zero)
                } else {
                    Err((self.column(), ParseErrorKind::PatternLiteral(n)))
                }
            }
            Tok::Ident(s) if s == "S" => {
                self.bump();
                Ok(Slot::Succ(self.variable()?))
            }
            Tok::Ident(_) => Ok(Slot::Var(self.variable()?)),
            _ => self.unexpected("a pattern slot or '|'"),
        }
    }

    // Iterative over nested S( ... ) so deep nesting cannot overflow.
    fn term(&mut self) -> Res<Term> {
        let mut depth = 0u64;
        while matches!(self.peek(), Tok::Ident(s) if s == "S") {
            self.bump();
            self.expect(Tok::LParen, "'(' after S")?;
            depth += 1;
        }
        let mut term = match self.peek().clone() {
            Tok::Number(n) => {
                self.bump();
                Term::literal(n.parse::<Nat>().expect("lexer only emits digits"))
            }
            Tok::Ident(_) => Term::var(&self.variable()?),
            _ => return self.unexpected("a term"),
        };
        for _ in 0..depth {
            self.expect(Tok::RParen, "')'")?;
            term = term.succ();
        }
        Ok(term)
    }

    fn rule(&mut self) -> Res<(Pattern, Template)> {
        let mut slots = Vec::new();
        while *self.peek() != Tok::Bar {
            slots.push(self.slot()?);
        }
        self.bump();
        let tail = self.variable()?;
        self.expect(Tok::Arrow, "'->'")?;
        let mut terms = Vec::new();
        while *self.peek() != Tok::Bar {
            if *self.peek() == Tok::End {
                return self.unexpected("a term or '|'");
            }
            terms.push(self.term()?);
        }
        self.bump();
        let rhs_tail = self.variable()?;
        self.expect(Tok::End, "end of line")?;
        Ok((
            Pattern { slots, tail },
            Template {
                terms,
                tail: rhs_tail,
            },
        ))
    }
}

/// Parses a rule file. The result is in [`Mode::Anchored`]; use
/// [`RewriteSystem::with_mode`] to switch.
pub fn parse_rules(text: &str) -> Result<RewriteSystem, ParseError> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let at = |(column, kind)| ParseError {
            line: idx + 1,
            column,
            kind,
        };
        let toks = tokenize(line).map_err(at)?;
        let first_col = toks[0].0;
        let mut cur = Cursor { toks, pos: 0 };
        let (pattern, template) = cur.rule().map_err(at)?;
        let rule = RewriteRule::new(pattern, template).map_err(|e| {
            let column = match &e {
                RuleError::UnboundVariable(v) | RuleError::DuplicateVariable(v) => {
                    column_of_last(line, v).unwrap_or(first_col)
                }
                _ => first_col,
            };
            at((column, e.into()))
        })?;
        rules.push(rule);
    }
    Ok(RewriteSystem::new(rules, Mode::Anchored))
}

// Column of the last whole-word occurrence of `name` in `line`.
fn column_of_last(line: &str, name: &str) -> Option<usize> {
    let chars: Vec<char> = line.chars().collect();
    let needle: Vec<char> = name.chars().collect();
    let is_word =
        |c: Option<&char>| c.is_some_and(|c| c.is_alphanumeric() || *c == '_' || *c == '\'');
    (0..chars.len().saturating_sub(needle.len() - 1))
        .rev()
        .find(|&i| {
            chars[i..].starts_with(&needle)
                && !is_word(i.checked_sub(1).and_then(|j| chars.get(j)))
                && !is_word(chars.get(i + needle.len()))
        })
        .map(|i| i + 1)
}
