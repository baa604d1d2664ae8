//! Recursive-descent parsers for the hybrid and first-order concrete syntax.
//!
//! ```text
//! formula := binder | impl
//! binder  := ("down" | "exists" | "forall") VAR "." formula
//! impl    := disj ["->" formula]
//! disj    := conj {"|" conj}
//! conj    := unary {"&" unary}
//! unary   := "~" unary | "<>" unary | "[]" unary | "@" place unary | binder | atom
//! ```
//!
//! `forall` and the atoms `P(t)`, `R(t,t)`, `t = t` belong to the
//! first-order layer; `<>`, `[]`, `@` and `?x` to the hybrid one. A binder
//! in unary position is accepted and extends maximally to the right.

use super::fol::prop_of_predicate;
use super::lexer::{tokenize, Tok, Token};
use super::{is_prop_name, FolFormula, FolSignature, HybridFormula, Place, Signature, SignatureError, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at byte {offset}")]
    Lexical { offset: usize, found: char },
    #[error("unknown proposition `{name}` at byte {offset}")]
    UnknownProp { name: String, offset: usize },
    #[error("unknown nominal `'{name}` at byte {offset}")]
    UnknownNom { name: String, offset: usize },
    #[error("unbalanced parentheses at byte {offset}")]
    Unbalanced { offset: usize },
    #[error("expected {expected} at byte {offset}, found {found}")]
    Unexpected {
        offset: usize,
        expected: String,
        found: String,
    },
    #[error("`{name}` takes {expected} argument(s), found {found} at byte {offset}")]
    Arity {
        name: String,
        expected: usize,
        found: usize,
        offset: usize,
    },
    #[error("unknown predicate `{name}` at byte {offset}")]
    UnknownPredicate { name: String, offset: usize },
    #[error("unknown constant `'{name}` at byte {offset}")]
    UnknownConstant { name: String, offset: usize },
    #[error("inconsistent symbols: {0}")]
    Signature(#[from] SignatureError),
}

impl ParseError {
    /// Byte offset of the error, when it has one.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ParseError::Lexical { offset, .. }
            | ParseError::UnknownProp { offset, .. }
            | ParseError::UnknownNom { offset, .. }
            | ParseError::Unbalanced { offset }
            | ParseError::Unexpected { offset, .. }
            | ParseError::Arity { offset, .. }
            | ParseError::UnknownPredicate { offset, .. }
            | ParseError::UnknownConstant { offset, .. } => Some(*offset),
            ParseError::Signature(_) => None,
        }
    }
}

struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.pos + ahead).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::Unexpected {
            offset: self.offset(),
            expected: expected.to_string(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: &Tok, expected: &str) -> Result<(), ParseError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn close_paren(&mut self, open: usize) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::End => Err(ParseError::Unbalanced { offset: open }),
            _ => Err(self.unexpected("`)`")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::End => Ok(()),
            Tok::RParen => Err(ParseError::Unbalanced {
                offset: self.offset(),
            }),
            _ => Err(self.unexpected("end of input")),
        }
    }

    fn binder_var(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) | Tok::Question(x) => {
                self.bump();
                Ok(x)
            }
            _ => Err(self.unexpected("a variable")),
        }
    }
}

enum HybridNames<'a> {
    Strict(&'a Signature),
    Infer { props: Vec<String>, noms: Vec<String> },
}

impl HybridNames<'_> {
    fn prop(&mut self, name: &str, offset: usize) -> Result<(), ParseError> {
        match self {
            HybridNames::Strict(sig) if sig.has_prop(name) => Ok(()),
            HybridNames::Infer { props, .. } if is_prop_name(name) => {
                if !props.iter().any(|p| p == name) {
                    props.push(name.to_string());
                }
                Ok(())
            }
            _ => Err(ParseError::UnknownProp {
                name: name.to_string(),
                offset,
            }),
        }
    }

    fn nom(&mut self, name: &str, offset: usize) -> Result<(), ParseError> {
        match self {
            HybridNames::Strict(sig) if sig.has_nom(name) => Ok(()),
            HybridNames::Strict(_) => Err(ParseError::UnknownNom {
                name: name.to_string(),
                offset,
            }),
            HybridNames::Infer { noms, .. } => {
                if !noms.iter().any(|s| s == name) {
                    noms.push(name.to_string());
                }
                Ok(())
            }
        }
    }
}

struct HybridParser<'a> {
    cur: Cursor,
    names: HybridNames<'a>,
}

impl HybridParser<'_> {
    fn formula(&mut self) -> Result<HybridFormula, ParseError> {
        match self.cur.peek() {
            Tok::Down | Tok::Exists => self.binder(),
            _ => self.implication(),
        }
    }

    fn binder(&mut self) -> Result<HybridFormula, ParseError> {
        let down = self.cur.bump().tok == Tok::Down;
        let x = self.cur.binder_var()?;
        self.cur.expect(&Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if down {
            HybridFormula::down(x, body)
        } else {
            HybridFormula::exists(x, body)
        })
    }

    fn implication(&mut self) -> Result<HybridFormula, ParseError> {
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(HybridFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<HybridFormula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.cur.eat(&Tok::Or) {
            acc = HybridFormula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<HybridFormula, ParseError> {
        let mut acc = self.unary()?;
        while self.cur.eat(&Tok::And) {
            acc = HybridFormula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<HybridFormula, ParseError> {
        match self.cur.peek().clone() {
            Tok::Not => {
                self.cur.bump();
                Ok(HybridFormula::not(self.unary()?))
            }
            Tok::Dia => {
                self.cur.bump();
                Ok(HybridFormula::dia(self.unary()?))
            }
            Tok::Nec => {
                self.cur.bump();
                Ok(HybridFormula::nec(self.unary()?))
            }
            Tok::At => {
                self.cur.bump();
                let offset = self.cur.offset();
                let place = match self.cur.peek().clone() {
                    Tok::Quoted(s) => {
                        self.names.nom(&s, offset)?;
                        Place::Nom(s)
                    }
                    Tok::Question(x) => Place::Var(x),
                    _ => return Err(self.cur.unexpected("a nominal or world variable after `@`")),
                };
                self.cur.bump();
                Ok(HybridFormula::at(place, self.unary()?))
            }
            Tok::Down | Tok::Exists => self.binder(),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<HybridFormula, ParseError> {
        let offset = self.cur.offset();
        match self.cur.peek().clone() {
            Tok::False => {
                self.cur.bump();
                Ok(HybridFormula::Bot)
            }
            Tok::True => {
                self.cur.bump();
                Ok(HybridFormula::Top)
            }
            Tok::Ident(p) => {
                self.names.prop(&p, offset)?;
                self.cur.bump();
                Ok(HybridFormula::Prop(p))
            }
            Tok::Quoted(s) => {
                self.names.nom(&s, offset)?;
                self.cur.bump();
                Ok(HybridFormula::Nom(s))
            }
            Tok::Question(x) => {
                self.cur.bump();
                Ok(HybridFormula::WVar(x))
            }
            Tok::LParen => {
                self.cur.bump();
                let inner = self.formula()?;
                self.cur.close_paren(offset)?;
                Ok(inner)
            }
            Tok::RParen => Err(ParseError::Unbalanced { offset }),
            _ => Err(self.cur.unexpected("a formula")),
        }
    }
}

/// Parse a hybrid formula; every proposition and nominal must be in `sig`.
pub fn parse_hybrid(text: &str, sig: &Signature) -> Result<HybridFormula, ParseError> {
    let mut p = HybridParser {
        cur: Cursor::new(text)?,
        names: HybridNames::Strict(sig),
    };
    let f = p.formula()?;
    p.cur.finish()?;
    Ok(f)
}

/// Parse a hybrid formula, collecting its propositions and nominals into a
/// signature in order of first occurrence.
pub fn infer_hybrid(text: &str) -> Result<(HybridFormula, Signature), ParseError> {
    let mut p = HybridParser {
        cur: Cursor::new(text)?,
        names: HybridNames::Infer {
            props: Vec::new(),
            noms: Vec::new(),
        },
    };
    let f = p.formula()?;
    p.cur.finish()?;
    let HybridNames::Infer { props, noms } = p.names else {
        unreachable!()
    };
    Ok((f, Signature::new(props, noms)?))
}

enum FolNames<'a> {
    Strict(&'a FolSignature),
    Infer { props: Vec<String>, noms: Vec<String> },
}

enum App {
    Pred(String),
    Rel,
}

impl FolNames<'_> {
    fn application(&mut self, name: &str, arity: usize, offset: usize) -> Result<App, ParseError> {
        let arity_error = |expected| ParseError::Arity {
            name: name.to_string(),
            expected,
            found: arity,
            offset,
        };
        let unknown = || ParseError::UnknownPredicate {
            name: name.to_string(),
            offset,
        };
        let known = match self {
            FolNames::Strict(sig) => sig.is_predicate(name),
            FolNames::Infer { props, .. } => {
                let upper = name.chars().next().is_some_and(|c| c.is_ascii_uppercase());
                let prop = prop_of_predicate(name);
                if upper && is_prop_name(&prop) && (arity == 1 || name != "R") {
                    if arity == 1 && !props.contains(&prop) {
                        props.push(prop);
                    }
                    true
                } else {
                    false
                }
            }
        };
        match (name == "R", arity) {
            (true, 2) => Ok(App::Rel),
            (_, 1) if known => Ok(App::Pred(name.to_string())),
            (true, _) => Err(arity_error(2)),
            (false, _) if known => Err(arity_error(1)),
            _ => Err(unknown()),
        }
    }

    fn quoted(&mut self, name: &str, offset: usize) -> Result<(), ParseError> {
        match self {
            FolNames::Strict(sig) if sig.is_constant(name) => Ok(()),
            FolNames::Strict(_) => Err(ParseError::UnknownConstant {
                name: name.to_string(),
                offset,
            }),
            FolNames::Infer { noms, .. } => {
                if !noms.iter().any(|s| s == name) {
                    noms.push(name.to_string());
                }
                Ok(())
            }
        }
    }

    fn bare_constant(&self, name: &str) -> bool {
        matches!(self, FolNames::Strict(sig) if sig.is_extra_constant(name))
    }
}

struct FolParser<'a> {
    cur: Cursor,
    names: FolNames<'a>,
}

impl FolParser<'_> {
    fn formula(&mut self) -> Result<FolFormula, ParseError> {
        match self.cur.peek() {
            Tok::Exists | Tok::Forall => self.binder(),
            _ => self.implication(),
        }
    }

    fn binder(&mut self) -> Result<FolFormula, ParseError> {
        let exists = self.cur.bump().tok == Tok::Exists;
        let v = match self.cur.peek().clone() {
            Tok::Ident(x) => {
                self.cur.bump();
                x
            }
            _ => return Err(self.cur.unexpected("a variable")),
        };
        self.cur.expect(&Tok::Dot, "`.`")?;
        let body = self.formula()?;
        Ok(if exists {
            FolFormula::exists(v, body)
        } else {
            FolFormula::forall(v, body)
        })
    }

    fn implication(&mut self) -> Result<FolFormula, ParseError> {
        let lhs = self.disjunction()?;
        if self.cur.eat(&Tok::Arrow) {
            let rhs = self.formula()?;
            return Ok(FolFormula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<FolFormula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.cur.eat(&Tok::Or) {
            acc = FolFormula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<FolFormula, ParseError> {
        let mut acc = self.unary()?;
        while self.cur.eat(&Tok::And) {
            acc = FolFormula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FolFormula, ParseError> {
        match self.cur.peek() {
            Tok::Not => {
                self.cur.bump();
                Ok(FolFormula::not(self.unary()?))
            }
            Tok::Exists | Tok::Forall => self.binder(),
            _ => self.atom(),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let offset = self.cur.offset();
        match self.cur.peek().clone() {
            Tok::Ident(x) => {
                self.cur.bump();
                if self.names.bare_constant(&x) {
                    Ok(Term::Const(x))
                } else {
                    Ok(Term::Var(x))
                }
            }
            Tok::Quoted(c) => {
                self.names.quoted(&c, offset)?;
                self.cur.bump();
                Ok(Term::Const(c))
            }
            _ => Err(self.cur.unexpected("a term")),
        }
    }

    fn atom(&mut self) -> Result<FolFormula, ParseError> {
        let offset = self.cur.offset();
        match self.cur.peek().clone() {
            Tok::False => {
                self.cur.bump();
                Ok(FolFormula::Bot)
            }
            Tok::True => {
                self.cur.bump();
                Ok(FolFormula::Top)
            }
            Tok::LParen => {
                self.cur.bump();
                let inner = self.formula()?;
                self.cur.close_paren(offset)?;
                Ok(inner)
            }
            Tok::RParen => Err(ParseError::Unbalanced { offset }),
            Tok::Ident(name) if *self.cur.peek_at(1) == Tok::LParen => {
                self.cur.bump();
                let open = self.cur.offset();
                self.cur.bump();
                let mut args = vec![self.term()?];
                while self.cur.eat(&Tok::Comma) {
                    args.push(self.term()?);
                }
                self.cur.close_paren(open)?;
                match self.names.application(&name, args.len(), offset)? {
                    App::Rel => {
                        let b = args.pop().unwrap();
                        let a = args.pop().unwrap();
                        Ok(FolFormula::Rel(a, b))
                    }
                    App::Pred(p) => Ok(FolFormula::Pred(p, args.pop().unwrap())),
                }
            }
            Tok::Ident(_) | Tok::Quoted(_) => {
                let a = self.term()?;
                self.cur.expect(&Tok::Eq, "`=`")?;
                let b = self.term()?;
                Ok(FolFormula::Eq(a, b))
            }
            _ => Err(self.cur.unexpected("a formula")),
        }
    }
}

/// Parse a first-order formula over `sig`.
pub fn parse_fol(text: &str, sig: &FolSignature) -> Result<FolFormula, ParseError> {
    let mut p = FolParser {
        cur: Cursor::new(text)?,
        names: FolNames::Strict(sig),
    };
    let f = p.formula()?;
    p.cur.finish()?;
    Ok(f)
}

/// Parse a first-order formula, reading predicates as propositions and
/// quoted constants as nominals.
pub fn infer_fol(text: &str) -> Result<(FolFormula, FolSignature), ParseError> {
    let mut p = FolParser {
        cur: Cursor::new(text)?,
        names: FolNames::Infer {
            props: Vec::new(),
            noms: Vec::new(),
        },
    };
    let f = p.formula()?;
    p.cur.finish()?;
    let FolNames::Infer { props, noms } = p.names else {
        unreachable!()
    };
    Ok((f, FolSignature::new(Signature::new(props, noms)?)))
}
