//! A typeable encoding of the subcube notation: blocks `[a,b,...]` over
//! `{0,1,*}`, juxtaposition for concatenation, `^` powers with integer
//! expressions, `~( ... )` for the block-permutation operator, and `|` for
//! union.
//!
//! Grammar:
//! ```text
//! expr    := concat ('|' concat)*
//! concat  := factor+
//! factor  := atom ('^' power)?
//! atom    := '[' sym (',' sym)* ']' | '~' '(' concat ')' | ident | '(' expr ')'
//! sym     := '0' | '1' | '*'
//! power   := INT | ident | '(' intExpr ')'
//! intExpr := intTerm (('+'|'-') intTerm)*
//! intTerm := intAtom (('*'|'/') intAtom)*
//! intAtom := INT | ident | '-' intAtom | '(' intExpr ')'
//! ```
//! Whitespace is insignificant. Identifiers may contain an apostrophe so
//! that bindings like `d'` read as in handwritten notation. Division must
//! be exact.

use std::collections::HashMap;

use crate::hypercube::WordSet;
use crate::{Error, Result};

/// Maximum number of distinct factor values inside one `~( ... )`.
const PERM_DISTINCT_CAP: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sym {
    Zero,
    One,
    Star,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SubcubeExpr {
    Block(Vec<Sym>),
    Concat(Vec<SubcubeExpr>),
    Power(Box<SubcubeExpr>, IntExpr),
    Perm(Vec<SubcubeExpr>),
    Union(Vec<SubcubeExpr>),
    Name(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntExpr {
    Lit(i64),
    Var(String),
    Neg(Box<IntExpr>),
    Add(Box<IntExpr>, Box<IntExpr>),
    Sub(Box<IntExpr>, Box<IntExpr>),
    Mul(Box<IntExpr>, Box<IntExpr>),
    Div(Box<IntExpr>, Box<IntExpr>),
}

/// Integer and word-set bindings available during evaluation.
#[derive(Clone, Default, Debug)]
pub struct Env {
    ints: HashMap<String, i64>,
    sets: HashMap<String, WordSet>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind_int(&mut self, name: impl Into<String>, value: i64) {
        self.ints.insert(name.into(), value);
    }

    pub fn bind_set(&mut self, name: impl Into<String>, value: WordSet) {
        self.sets.insert(name.into(), value);
    }

    pub fn int(&self, name: &str) -> Option<i64> {
        self.ints.get(name).copied()
    }

    pub fn set(&self, name: &str) -> Option<&WordSet> {
        self.sets.get(name)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.err(format!("expected {:?}, found {:?}", c as char, got as char))),
            None => Err(self.err(format!("expected {:?}, found end of input", c as char))),
        }
    }

    fn is_ident_start(c: u8) -> bool {
        c.is_ascii_alphabetic() || c == b'_'
    }

    fn is_ident_continue(c: u8) -> bool {
        c.is_ascii_alphanumeric() || c == b'_' || c == b'\''
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(&c) if Self::is_ident_start(c) => self.pos += 1,
            _ => return Err(self.err("expected identifier")),
        }
        while let Some(&c) = self.src.get(self.pos) {
            if Self::is_ident_continue(c) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .to_string())
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse::<i64>()
            .map_err(|e| self.err(format!("integer literal: {e}")))
    }

    fn expr(&mut self) -> Result<SubcubeExpr> {
        let mut parts = vec![self.concat()?];
        while self.peek() == Some(b'|') {
            self.pos += 1;
            parts.push(self.concat()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            SubcubeExpr::Union(parts)
        })
    }

    fn concat(&mut self) -> Result<SubcubeExpr> {
        let mut factors = vec![self.factor()?];
        while let Some(c) = self.peek() {
            if c == b'[' || c == b'~' || c == b'(' || Self::is_ident_start(c) {
                factors.push(self.factor()?);
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            SubcubeExpr::Concat(factors)
        })
    }

    fn factor(&mut self) -> Result<SubcubeExpr> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.power_exponent()?;
            Ok(SubcubeExpr::Power(Box::new(atom), exp))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<SubcubeExpr> {
        match self.peek() {
            Some(b'[') => self.block(),
            Some(b'~') => {
                self.pos += 1;
                self.expect(b'(')?;
                let inner = self.concat()?;
                self.expect(b')')?;
                let factors = match inner {
                    SubcubeExpr::Concat(fs) => fs,
                    single => vec![single],
                };
                Ok(SubcubeExpr::Perm(factors))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if Self::is_ident_start(c) => Ok(SubcubeExpr::Name(self.ident()?)),
            Some(c) => Err(self.err(format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn block(&mut self) -> Result<SubcubeExpr> {
        self.expect(b'[')?;
        let mut syms = vec![self.sym()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            syms.push(self.sym()?);
        }
        self.expect(b']')?;
        Ok(SubcubeExpr::Block(syms))
    }

    fn sym(&mut self) -> Result<Sym> {
        match self.bump() {
            Some(b'0') => Ok(Sym::Zero),
            Some(b'1') => Ok(Sym::One),
            Some(b'*') => Ok(Sym::Star),
            Some(c) => {
                self.pos -= 1;
                Err(self.err(format!("symbol {:?} not in {{0,1,*}}", c as char)))
            }
            None => Err(self.err("expected symbol, found end of input")),
        }
    }

    fn power_exponent(&mut self) -> Result<IntExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.int_expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(IntExpr::Lit(self.integer()?)),
            Some(c) if Self::is_ident_start(c) => Ok(IntExpr::Var(self.ident()?)),
            _ => Err(self.err("expected exponent")),
        }
    }

    fn int_expr(&mut self) -> Result<IntExpr> {
        let mut lhs = self.int_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = IntExpr::Add(Box::new(lhs), Box::new(self.int_term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = IntExpr::Sub(Box::new(lhs), Box::new(self.int_term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn int_term(&mut self) -> Result<IntExpr> {
        let mut lhs = self.int_atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = IntExpr::Mul(Box::new(lhs), Box::new(self.int_atom()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = IntExpr::Div(Box::new(lhs), Box::new(self.int_atom()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn int_atom(&mut self) -> Result<IntExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.int_expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(IntExpr::Neg(Box::new(self.int_atom()?)))
            }
            Some(c) if c.is_ascii_digit() => Ok(IntExpr::Lit(self.integer()?)),
            Some(c) if Self::is_ident_start(c) => Ok(IntExpr::Var(self.ident()?)),
            _ => Err(self.err("expected integer expression")),
        }
    }
}

/// Parses a subcube expression; errors carry the byte position.
pub fn parse(text: &str) -> Result<SubcubeExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn eval_int(e: &IntExpr, env: &Env) -> Result<i64> {
    Ok(match e {
        IntExpr::Lit(n) => *n,
        IntExpr::Var(name) => env
            .int(name)
            .ok_or_else(|| Error::Eval(format!("unbound integer {name:?}")))?,
        IntExpr::Neg(a) => -eval_int(a, env)?,
        IntExpr::Add(a, b) => eval_int(a, env)? + eval_int(b, env)?,
        IntExpr::Sub(a, b) => eval_int(a, env)? - eval_int(b, env)?,
        IntExpr::Mul(a, b) => eval_int(a, env)? * eval_int(b, env)?,
        IntExpr::Div(a, b) => {
            let a = eval_int(a, env)?;
            let b = eval_int(b, env)?;
            if b == 0 {
                return Err(Error::Eval("division by zero".into()));
            }
            if a % b != 0 {
                return Err(Error::Eval(format!("inexact division {a}/{b}")));
            }
            a / b
        }
    })
}

fn eval_block(syms: &[Sym]) -> WordSet {
    let mut set = WordSet::empty_word_singleton();
    for &s in syms {
        let bit = match s {
            Sym::Zero => WordSet::from_words(1, [0]).unwrap(),
            Sym::One => WordSet::from_words(1, [1]).unwrap(),
            Sym::Star => WordSet::from_words(1, [0, 1]).unwrap(),
        };
        set = set.concat(&bit).expect("block dimension fits");
    }
    set
}

fn exponent_value(e: &IntExpr, env: &Env) -> Result<u32> {
    let n = eval_int(e, env)?;
    if n < 0 {
        return Err(Error::Eval(format!("negative exponent {n}")));
    }
    u32::try_from(n).map_err(|_| Error::Eval(format!("exponent {n} too large")))
}

/// Expands one Perm factor into its repetition list. Powers expand before
/// permuting, so `~([1,1][0,0]^k)` permutes `k+1` whole blocks.
fn expand_perm_factor(f: &SubcubeExpr, env: &Env, out: &mut Vec<WordSet>) -> Result<()> {
    if let SubcubeExpr::Power(inner, exp) = f {
        let n = exponent_value(exp, env)?;
        let mut one = Vec::new();
        expand_perm_factor(inner, env, &mut one)?;
        for _ in 0..n {
            out.extend(one.iter().cloned());
        }
        Ok(())
    } else {
        out.push(eval(f, env)?);
        Ok(())
    }
}

/// Next lexicographic permutation in place; false once the sequence is the
/// last one.
fn next_permutation(ids: &mut [usize]) -> bool {
    if ids.len() < 2 {
        return false;
    }
    let mut i = ids.len() - 1;
    while i > 0 && ids[i - 1] >= ids[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = ids.len() - 1;
    while ids[j] <= ids[i - 1] {
        j -= 1;
    }
    ids.swap(i - 1, j);
    ids[i..].reverse();
    true
}

fn eval_perm(factors: &[SubcubeExpr], env: &Env) -> Result<WordSet> {
    let mut parts = Vec::new();
    for f in factors {
        expand_perm_factor(f, env, &mut parts)?;
    }
    if parts.is_empty() {
        return Ok(WordSet::empty_word_singleton());
    }
    // Identify equal factors so permutations are enumerated over the
    // multiset, not over n! raw orderings.
    let mut classes: Vec<WordSet> = Vec::new();
    let mut ids: Vec<usize> = Vec::new();
    for p in parts {
        match classes.iter().position(|c| *c == p) {
            Some(i) => ids.push(i),
            None => {
                classes.push(p);
                ids.push(classes.len() - 1);
            }
        }
    }
    if classes.len() > PERM_DISTINCT_CAP {
        return Err(Error::Eval(format!(
            "permutation operator over {} distinct factors exceeds the cap of {PERM_DISTINCT_CAP}",
            classes.len()
        )));
    }
    ids.sort_unstable();
    let mut result: Option<WordSet> = None;
    loop {
        let mut ordered = WordSet::empty_word_singleton();
        for &id in &ids {
            ordered = ordered.concat(&classes[id])?;
        }
        result = Some(match result {
            None => ordered,
            Some(acc) => acc.union(&ordered)?,
        });
        if !next_permutation(&mut ids) {
            break;
        }
    }
    Ok(result.expect("at least one ordering"))
}

/// Evaluates an expression to an explicit word set.
pub fn eval(e: &SubcubeExpr, env: &Env) -> Result<WordSet> {
    match e {
        SubcubeExpr::Block(syms) => Ok(eval_block(syms)),
        SubcubeExpr::Concat(parts) => {
            let mut acc = WordSet::empty_word_singleton();
            for p in parts {
                acc = acc.concat(&eval(p, env)?)?;
            }
            Ok(acc)
        }
        SubcubeExpr::Power(inner, exp) => {
            let n = exponent_value(exp, env)?;
            let base = eval(inner, env)?;
            let mut acc = WordSet::empty_word_singleton();
            for _ in 0..n {
                acc = acc.concat(&base)?;
            }
            Ok(acc)
        }
        SubcubeExpr::Perm(factors) => eval_perm(factors, env),
        SubcubeExpr::Union(parts) => {
            let mut acc: Option<WordSet> = None;
            for p in parts {
                let s = eval(p, env)?;
                acc = Some(match acc {
                    None => s,
                    Some(a) => a.union(&s)?,
                });
            }
            Ok(acc.expect("union is nonempty"))
        }
        SubcubeExpr::Name(name) => env
            .set(name)
            .cloned()
            .ok_or_else(|| Error::Eval(format!("unbound name {name:?}"))),
    }
}

/// Convenience wrapper: parse then evaluate.
pub fn eval_str(text: &str, env: &Env) -> Result<WordSet> {
    eval(&parse(text)?, env)
}
