use super::formula::Formula;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    WeakNeg,
    StrongNeg,
    Ball,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(name) => format!("atom `{name}`"),
            Token::WeakNeg => "`~`".into(),
            Token::StrongNeg => "`~*`".into(),
            Token::Ball => "`@`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

/// Tokens paired with their 1-based column.
fn tokenize(text: &str) -> Result<Vec<(Token, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '~' => {
                if chars.get(i + 1) == Some(&'*') {
                    tokens.push((Token::StrongNeg, column));
                    i += 2;
                } else {
                    tokens.push((Token::WeakNeg, column));
                    i += 1;
                }
                continue;
            }
            '@' => tokens.push((Token::Ball, column)),
            '&' => tokens.push((Token::And, column)),
            '|' => tokens.push((Token::Or, column)),
            '(' => tokens.push((Token::LParen, column)),
            ')' => tokens.push((Token::RParen, column)),
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    tokens.push((Token::Arrow, column));
                    i += 2;
                    continue;
                }
                return Err(ParseError::Syntax {
                    column,
                    message: "expected `->`".into(),
                });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                tokens.push((Token::Ident(name), column));
                continue;
            }
            other => {
                return Err(ParseError::Syntax {
                    column,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(Token, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_column)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    fn binary_precedence(token: &Token) -> Option<u8> {
        match token {
            Token::Arrow => Some(1),
            Token::Or => Some(2),
            Token::And => Some(3),
            _ => None,
        }
    }

    // Precedence climbing; every binary connective is left-associative.
    fn expression(&mut self, min_prec: u8) -> Result<Formula, ParseError> {
        let mut left = self.unary()?;
        while let Some(prec) = self.peek().and_then(Self::binary_precedence) {
            if prec < min_prec {
                break;
            }
            let op = self.tokens[self.pos].0.clone();
            self.pos += 1;
            let right = self.expression(prec + 1)?;
            left = match op {
                Token::And => Formula::conj(left, right),
                Token::Or => Formula::disj(left, right),
                _ => Formula::implies(left, right),
            };
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(Token::WeakNeg) => {
                self.pos += 1;
                Ok(Formula::weak_neg(self.unary()?))
            }
            Some(Token::StrongNeg) => {
                self.pos += 1;
                Ok(Formula::strong_neg(self.unary()?))
            }
            Some(Token::Ball) => {
                self.pos += 1;
                Ok(Formula::ball(self.unary()?))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Atom(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expression(1)?;
                if self.peek() != Some(&Token::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(other) => self.error(format!("expected a formula, found {}", other.describe())),
            None => self.error("unexpected end of input"),
        }
    }
}

/// Parses the ASCII surface syntax: `~` weak negation, `~*` strong
/// negation, `@` consistency, then `&`, `|`, `->` in decreasing binding
/// strength.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end_column: text.chars().count() + 1,
    };
    let formula = parser.expression(1)?;
    if let Some(tok) = parser.peek() {
        let msg = format!("unexpected {} after complete formula", tok.describe());
        return parser.error(msg);
    }
    Ok(formula)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}
