//! Signatures, formulas, sequents and their concrete syntax.
//!
//! ```text
//! sequent  := formula "|-" formula
//! formula  := conj ("\/" conj)*
//! conj     := unary ("/\" unary)*
//! unary    := NAME unary            (declared unary connective, prefix form)
//!           | NAME "(" args? ")"    (declared connective, call form)
//!           | "top" | "bot" | LETTER | "(" formula ")"
//! ```

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tone {
    #[serde(rename = "+")]
    Monotone,
    #[serde(rename = "-")]
    Antitone,
}

/// Whether a connective is join-preserving (`F`) or meet-preserving (`G`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    F,
    G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connective {
    pub name: String,
    pub family: Family,
    pub tones: Vec<Tone>,
}

impl Connective {
    pub fn new(name: &str, family: Family, tones: &[Tone]) -> Self {
        Self {
            name: name.to_string(),
            family,
            tones: tones.to_vec(),
        }
    }

    pub fn arity(&self) -> usize {
        self.tones.len()
    }
}

const KEYWORDS: [&str; 2] = ["top", "bot"];
pub const DML_NAMES: [&str; 4] = ["box", "dia", "lhd", "rhd"];

fn valid_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some('a'..='z')) && c.all(|ch| ch.is_ascii_lowercase() || ch.is_ascii_digit() || ch == '_')
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    connectives: Vec<Connective>,
}

impl Signature {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(connectives: Vec<Connective>) -> Result<Self> {
        let mut seen = HashSet::new();
        for c in &connectives {
            if !valid_ident(&c.name) || KEYWORDS.contains(&c.name.as_str()) {
                return Err(Error::Invalid(format!("`{}` is not a usable connective name", c.name)));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::DuplicateIdentifier {
                    kind: "connective",
                    name: c.name.clone(),
                });
            }
            if let Some(b) = Self::builtin(&c.name) {
                if b != *c {
                    return Err(Error::Invalid(format!(
                        "`{}` is reserved for the built-in connective",
                        c.name
                    )));
                }
            }
        }
        Ok(Self { connectives })
    }

    /// The built-in connective with this name, if any.
    pub fn builtin(name: &str) -> Option<Connective> {
        use Family::*;
        use Tone::*;
        match name {
            "dia" => Some(Connective::new("dia", F, &[Monotone])),
            "lhd" => Some(Connective::new("lhd", F, &[Antitone])),
            "box" => Some(Connective::new("box", G, &[Monotone])),
            "rhd" => Some(Connective::new("rhd", G, &[Antitone])),
            _ => None,
        }
    }

    /// `F = {dia, lhd}`, `G = {box, rhd}`, all unary.
    pub fn dml() -> Self {
        Self::with_builtins(&["dia", "lhd", "box", "rhd"])
    }

    /// A signature made of the named built-ins.
    pub fn with_builtins(names: &[&str]) -> Self {
        let cs = names
            .iter()
            .map(|n| Self::builtin(n).unwrap_or_else(|| panic!("`{n}` is not built in")))
            .collect();
        Self::new(cs).expect("built-ins are distinct")
    }

    pub fn connectives(&self) -> &[Connective] {
        &self.connectives
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.connectives.iter().position(|c| c.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&Connective> {
        self.connectives.iter().find(|c| c.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.position(name).is_some()
    }

    pub fn is_dml(&self) -> bool {
        let mut names: Vec<&str> = self.connectives.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        names == ["box", "dia", "lhd", "rhd"]
    }

    /// Signature restricted to the connectives a formula set uses, in declaration order.
    pub fn restrict_to(&self, used: &HashSet<String>) -> Signature {
        Signature {
            connectives: self
                .connectives
                .iter()
                .filter(|c| used.contains(&c.name))
                .cloned()
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    App(String, Vec<Formula>),
}

impl Formula {
    pub fn var(p: &str) -> Self {
        Formula::Var(p.to_string())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn app(name: &str, args: Vec<Formula>) -> Self {
        Formula::App(name.to_string(), args)
    }

    pub fn unary(name: &str, a: Formula) -> Self {
        Formula::App(name.to_string(), vec![a])
    }

    /// Proposition letters in order of first occurrence.
    pub fn prop_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Formula::Var(p) => {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
            Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Distinct subformulas in post-order (children before parents).
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out: Vec<&Formula> = Vec::new();
        self.collect_subs(&mut out);
        out
    }

    fn collect_subs<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_subs(out);
                b.collect_subs(out);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_subs(out)),
        }
        if !out.contains(&self) {
            out.push(self);
        }
    }

    pub fn connectives_used(&self, out: &mut HashSet<String>) {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => {}
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.connectives_used(out);
                b.connectives_used(out);
            }
            Formula::App(n, args) => {
                out.insert(n.clone());
                args.iter().for_each(|a| a.connectives_used(out));
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 0,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::App(_, args) => 1 + args.iter().map(|a| a.depth()).max().unwrap_or(0),
        }
    }

    /// Checks every application against the signature.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => Ok(()),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check(sig)?;
                b.check(sig)
            }
            Formula::App(n, args) => {
                let c = sig.get(n).ok_or_else(|| Error::UnknownConnective(n.clone()))?;
                if c.arity() != args.len() {
                    return Err(Error::Arity {
                        name: n.clone(),
                        expected: c.arity(),
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Renames proposition letters.
    pub fn rename(&self, f: &impl Fn(&str) -> String) -> Formula {
        match self {
            Formula::Var(p) => Formula::Var(f(p)),
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::And(a, b) => Formula::and(a.rename(f), b.rename(f)),
            Formula::Or(a, b) => Formula::or(a.rename(f), b.rename(f)),
            Formula::App(n, args) => Formula::App(n.clone(), args.iter().map(|a| a.rename(f)).collect()),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::App(_, args) if args.len() == 1 => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.prec() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::Var(p) => f.write_str(p)?,
            Formula::Top => f.write_str("top")?,
            Formula::Bot => f.write_str("bot")?,
            Formula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" \\/ ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" /\\ ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::App(n, args) if args.len() == 1 => {
                write!(f, "{n} ")?;
                args[0].fmt_prec(f, 3)?;
            }
            Formula::App(n, args) => {
                write!(f, "{n}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.fmt_prec(f, 0)?;
                }
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sequent {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Sequent {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Self { lhs, rhs }
    }

    /// Letters of the left side, then new letters of the right side.
    pub fn prop_vars(&self) -> Vec<String> {
        let mut v = self.lhs.prop_vars();
        for p in self.rhs.prop_vars() {
            if !v.contains(&p) {
                v.push(p);
            }
        }
        v
    }

    pub fn connectives_used(&self) -> HashSet<String> {
        let mut s = HashSet::new();
        self.lhs.connectives_used(&mut s);
        self.rhs.connectives_used(&mut s);
        s
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    And,
    Or,
    Turnstile,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let two = bytes.get(i..i + 2);
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            b',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            _ if two == Some(b"/\\") => {
                out.push((i, Tok::And));
                i += 2;
            }
            _ if two == Some(b"\\/") => {
                out.push((i, Tok::Or));
                i += 2;
            }
            _ if two == Some(b"|-") => {
                out.push((i, Tok::Turnstile));
                i += 2;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i], b'a'..=b'z' | b'0'..=b'9' | b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Parse {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    sig: &'a Signature,
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.peek() == Some(&Tok::Or) {
            self.at += 1;
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.at += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "top" => return Ok(Formula::Top),
                    "bot" => return Ok(Formula::Bot),
                    _ => {}
                }
                let Some(c) = self.sig.get(&name) else {
                    if self.peek() == Some(&Tok::LParen) {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("unknown connective `{name}`"),
                        });
                    }
                    if DML_NAMES.contains(&name.as_str()) {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("connective `{name}` is not in the signature"),
                        });
                    }
                    return Ok(Formula::Var(name));
                };
                let arity = c.arity();
                if self.peek() == Some(&Tok::LParen) {
                    self.at += 1;
                    let mut args = Vec::new();
                    if self.peek() != Some(&Tok::RParen) {
                        args.push(self.formula()?);
                        while self.peek() == Some(&Tok::Comma) {
                            self.at += 1;
                            args.push(self.formula()?);
                        }
                    }
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    if args.len() != arity {
                        return Err(Error::Parse {
                            pos,
                            msg: format!("`{name}` expects {arity} argument(s), got {}", args.len()),
                        });
                    }
                    return Ok(Formula::App(name, args));
                }
                match arity {
                    1 => Ok(Formula::App(name, vec![self.unary()?])),
                    0 => Ok(Formula::App(name, vec![])),
                    n => Err(Error::Parse {
                        pos,
                        msg: format!("`{name}` expects {n} arguments in call form `{name}(...)`"),
                    }),
                }
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_formula(sig: &Signature, text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "empty formula".into(),
        });
    }
    let mut p = Parser {
        sig,
        toks,
        at: 0,
        end: text.len(),
    };
    let f = p.formula()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(f)
}

pub fn parse_sequent(sig: &Signature, text: &str) -> Result<Sequent> {
    let toks = lex(text)?;
    let turnstiles: Vec<usize> = toks
        .iter()
        .filter(|(_, t)| *t == Tok::Turnstile)
        .map(|(p, _)| *p)
        .collect();
    match turnstiles.as_slice() {
        [] => Err(Error::Parse {
            pos: text.len(),
            msg: "missing `|-`".into(),
        }),
        [at] => Ok(Sequent::new(
            parse_formula(sig, &text[..*at])?,
            parse_formula(sig, &text[at + 2..]).map_err(|e| shift(e, at + 2))?,
        )),
        [_, second, ..] => Err(Error::Parse {
            pos: *second,
            msg: "more than one `|-`".into(),
        }),
    }
}

fn shift(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

/// Axioms of the basic logic: the propositional group plus, for every declared
/// built-in modality, its two normality axioms.
pub fn axioms_of_base_logic(sig: &Signature) -> Vec<Sequent> {
    let mut text = vec![
        "p |- p",
        "bot |- p",
        "p |- top",
        "p |- p \\/ q",
        "q |- p \\/ q",
        "p /\\ q |- p",
        "p /\\ q |- q",
    ];
    for (name, axioms) in [
        ("box", ["top |- box top", "box p /\\ box q |- box (p /\\ q)"]),
        ("dia", ["dia bot |- bot", "dia (p \\/ q) |- dia p \\/ dia q"]),
        ("rhd", ["top |- rhd bot", "rhd p /\\ rhd q |- rhd (p \\/ q)"]),
        ("lhd", ["lhd top |- bot", "lhd (p /\\ q) |- lhd p \\/ lhd q"]),
    ] {
        if sig.get(name).is_some_and(|c| Some(c.clone()) == Signature::builtin(name)) {
            text.extend(axioms);
        }
    }
    text.into_iter()
        .map(|t| parse_sequent(sig, t).expect("axiom text parses"))
        .collect()
}
