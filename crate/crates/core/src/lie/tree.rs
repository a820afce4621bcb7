use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::parse_rational;
use crate::freealg::Alphabet;
use crate::lie::{bracket, LieElem};
use crate::Q;

/// A bracket expression in JSON form: a letter name, or a two-element array
/// `[left, right]` standing for `[left, right]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BracketTree {
    Letter(String),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

/// One summand of a weighted sum of brackets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedTree {
    pub coeff: String,
    pub bracket: BracketTree,
}

/// Either a single bracket tree or a list of `{"coeff", "bracket"}` terms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LieInput {
    Sum(Vec<WeightedTree>),
    Tree(BracketTree),
}

impl BracketTree {
    pub fn eval(&self, alphabet: &Alphabet) -> Result<LieElem> {
        match self {
            BracketTree::Letter(name) => {
                let i = alphabet
                    .index_of(name)
                    .ok_or_else(|| Error::Parse(format!("unknown letter `{name}`")))?;
                Ok(LieElem::generator(alphabet.len(), i as usize))
            }
            BracketTree::Bracket(a, b) => bracket(&a.eval(alphabet)?, &b.eval(alphabet)?),
        }
    }
}

impl LieInput {
    pub fn eval(&self, alphabet: &Alphabet) -> Result<LieElem> {
        match self {
            LieInput::Tree(t) => t.eval(alphabet),
            LieInput::Sum(terms) => {
                let mut out = LieElem::zero(alphabet.len());
                for t in terms {
                    let c = parse_rational(&t.coeff)?;
                    out.add_scaled(&t.bracket.eval(alphabet)?, &c);
                }
                Ok(out)
            }
        }
    }
}

/// Reads a Lie element from JSON bracket input.
pub fn lie_from_json(text: &str, alphabet: &Alphabet) -> Result<LieElem> {
    let input: LieInput = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    input.eval(alphabet)
}

/// Parses bracket notation such as `2[x,[x,y]] - [y,[y,x]]`.
///
/// Coefficients are rationals written before a term, optionally followed
/// by `*`. Sums may appear inside brackets and parentheses.
pub fn parse_bracket_expr(alphabet: &Alphabet, text: &str) -> Result<LieElem> {
    let mut p = Parser {
        alphabet,
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != p.chars.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    alphabet: &'a Alphabet,
    chars: Vec<char>,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let rest: String = self.chars[self.pos.min(self.chars.len())..]
            .iter()
            .collect();
        Error::Parse(format!("{what} at `{rest}`"))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<LieElem> {
        let mut sign = Q::from_integer(1.into());
        match self.peek() {
            Some('-') => {
                sign = -sign;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let mut out = self.term()?.scale(&sign);
        loop {
            let s = match self.peek() {
                Some('+') => 1,
                Some('-') => -1,
                _ => break,
            };
            self.pos += 1;
            let t = self.term()?;
            out.add_scaled(&t, &Q::from_integer(s.into()));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<LieElem> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '/') {
            self.pos += 1;
        }
        let coeff = if self.pos > start {
            let s: String = self.chars[start..self.pos].iter().collect();
            let c = parse_rational(&s)?;
            if self.peek() == Some('*') {
                self.pos += 1;
            }
            Some(c)
        } else {
            None
        };
        let atom = self.atom()?;
        Ok(match coeff {
            Some(c) => atom.scale(&c),
            None => atom,
        })
    }

    fn atom(&mut self) -> Result<LieElem> {
        match self.peek() {
            Some('[') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(']')?;
                bracket(&a, &b)
            }
            Some('(') => {
                self.pos += 1;
                let a = self.expr()?;
                self.expect(')')?;
                Ok(a)
            }
            Some(_) => {
                let rest: String = self.chars[self.pos..].iter().collect();
                let best = self
                    .alphabet
                    .names()
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len());
                match best {
                    Some((i, name)) => {
                        self.pos += name.chars().count();
                        Ok(LieElem::generator(self.alphabet.len(), i))
                    }
                    None => Err(self.error("expected a letter")),
                }
            }
            None => Err(self.error("unexpected end")),
        }
    }
}
