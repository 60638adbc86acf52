//! A small textual language for defining custom problems: an integer
//! color range, a weight algebra, a cost expression over the own color,
//! and a check expression that reads neighbors only through symmetric
//! aggregates (`count`, `sum`). Compiled problems run on the counting
//! neighborhood system with inferred or declared per-color caps.
//!
//! Grammar:
//! ```text
//! spec   := "colors:" range ";" "algebra:" name ";" "cost:" expr ";"
//!           "check:" bexpr ";" ("cap" INT "at" INT ";")*
//! range  := INT ".." INT
//! bexpr  := bexpr ("and"|"or") bexpr | "not" bexpr | bexpr "->" bexpr
//!         | cmp | "(" bexpr ")"
//! cmp    := aexpr ("="|"!="|"<="|">="|"<"|">") aexpr
//! aexpr  := INT | "c(v)" | "count(u in " ("N(v)"|"N[v]") " | " bexprU ")"
//!         | "sum(u in " ("N(v)"|"N[v]") " | c(u))" | aexpr ("+"|"-") aexpr
//! bexprU := "c(u)" ("="|"!="|"<="|">="|"<"|">") INT | bexprU ("and"|"or") bexprU
//! ```

use crate::algebra::WeightAlgebra;
use crate::graph::LabeledGraph;
use crate::instance::{ColorId, ProblemInstance};
use crate::pns::{counting_pns, SharedSystem};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("symmetry violation at {line}:{col}: c(u) may only appear inside count/sum aggregates")]
    SymmetryViolation { line: usize, col: usize },
    #[error("cap {cap} for color {color} is below the compared constant {bound}")]
    CapTooSmall { color: i64, cap: u16, bound: i64 },
    #[error("color {0} outside the declared range")]
    CapColorOutOfRange(i64),
    #[error("cost expression may not contain aggregates")]
    AggregateInCost,
    #[error("declared caps are unsupported when aggregates appear under subtraction")]
    CapsWithSubtraction,
    #[error("empty color range")]
    EmptyRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
}

impl CmpOp {
    fn eval(self, a: i64, b: i64) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Le => a <= b,
            CmpOp::Ge => a >= b,
            CmpOp::Lt => a < b,
            CmpOp::Gt => a > b,
        }
    }
}

/// Neighbor predicate inside a `count` aggregate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Upred {
    Cmp(CmpOp, i64),
    And(Box<Upred>, Box<Upred>),
    Or(Box<Upred>, Box<Upred>),
}

impl Upred {
    fn eval(&self, color: i64) -> bool {
        match self {
            Upred::Cmp(op, k) => op.eval(color, *k),
            Upred::And(a, b) => a.eval(color) && b.eval(color),
            Upred::Or(a, b) => a.eval(color) || b.eval(color),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Aexpr {
    Int(i64),
    SelfColor,
    Count { closed: bool, pred: Upred },
    Sum { closed: bool },
    Add(Box<Aexpr>, Box<Aexpr>),
    Sub(Box<Aexpr>, Box<Aexpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bexpr {
    Cmp(Aexpr, CmpOp, Aexpr),
    And(Box<Bexpr>, Box<Bexpr>),
    Or(Box<Bexpr>, Box<Bexpr>),
    Not(Box<Bexpr>),
    Implies(Box<Bexpr>, Box<Bexpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub lo: i64,
    pub hi: i64,
    pub algebra: WeightAlgebra,
    pub cost: Aexpr,
    pub check: Bexpr,
    pub caps: Vec<(i64, u16)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Colon,
    Semi,
    DotDot,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Pipe,
    Arrow,
    Plus,
    Minus,
    Cmp(CmpOp),
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer, DslError> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let bytes: Vec<char> = text.chars().collect();
    let mut i = 0usize;
    while i < bytes.len() {
        let c = bytes[i];
        let (l, co) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' => advance(1, &mut i, &mut col),
            '#' => {
                while i < bytes.len() && bytes[i] != '\n' {
                    i += 1;
                }
            }
            ':' => {
                toks.push((Tok::Colon, l, co));
                advance(1, &mut i, &mut col);
            }
            ';' => {
                toks.push((Tok::Semi, l, co));
                advance(1, &mut i, &mut col);
            }
            '(' => {
                toks.push((Tok::LParen, l, co));
                advance(1, &mut i, &mut col);
            }
            ')' => {
                toks.push((Tok::RParen, l, co));
                advance(1, &mut i, &mut col);
            }
            '[' => {
                toks.push((Tok::LBracket, l, co));
                advance(1, &mut i, &mut col);
            }
            ']' => {
                toks.push((Tok::RBracket, l, co));
                advance(1, &mut i, &mut col);
            }
            '|' => {
                toks.push((Tok::Pipe, l, co));
                advance(1, &mut i, &mut col);
            }
            '+' => {
                toks.push((Tok::Plus, l, co));
                advance(1, &mut i, &mut col);
            }
            '-' => {
                if i + 1 < bytes.len() && bytes[i + 1] == '>' {
                    toks.push((Tok::Arrow, l, co));
                    advance(2, &mut i, &mut col);
                } else {
                    toks.push((Tok::Minus, l, co));
                    advance(1, &mut i, &mut col);
                }
            }
            '.' => {
                if i + 1 < bytes.len() && bytes[i + 1] == '.' {
                    toks.push((Tok::DotDot, l, co));
                    advance(2, &mut i, &mut col);
                } else {
                    return Err(DslError::Syntax {
                        line: l,
                        col: co,
                        msg: "unexpected `.`".into(),
                    });
                }
            }
            '=' => {
                toks.push((Tok::Cmp(CmpOp::Eq), l, co));
                advance(1, &mut i, &mut col);
            }
            '!' => {
                if i + 1 < bytes.len() && bytes[i + 1] == '=' {
                    toks.push((Tok::Cmp(CmpOp::Ne), l, co));
                    advance(2, &mut i, &mut col);
                } else {
                    return Err(DslError::Syntax {
                        line: l,
                        col: co,
                        msg: "unexpected `!`".into(),
                    });
                }
            }
            '<' => {
                if i + 1 < bytes.len() && bytes[i + 1] == '=' {
                    toks.push((Tok::Cmp(CmpOp::Le), l, co));
                    advance(2, &mut i, &mut col);
                } else {
                    toks.push((Tok::Cmp(CmpOp::Lt), l, co));
                    advance(1, &mut i, &mut col);
                }
            }
            '>' => {
                if i + 1 < bytes.len() && bytes[i + 1] == '=' {
                    toks.push((Tok::Cmp(CmpOp::Ge), l, co));
                    advance(2, &mut i, &mut col);
                } else {
                    toks.push((Tok::Cmp(CmpOp::Gt), l, co));
                    advance(1, &mut i, &mut col);
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                col += i - start;
                toks.push((
                    Tok::Int(s.parse().map_err(|_| DslError::Syntax {
                        line: l,
                        col: co,
                        msg: "integer too large".into(),
                    })?),
                    l,
                    co,
                ));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '-') {
                    // an ident may contain hyphens (algebra names) but a
                    // trailing `->` belongs to the arrow token
                    if bytes[i] == '-' && bytes.get(i + 1) == Some(&'>') {
                        break;
                    }
                    i += 1;
                }
                let s: String = bytes[start..i].iter().collect();
                col += i - start;
                toks.push((Tok::Ident(s), l, co));
            }
            _ => {
                return Err(DslError::Syntax {
                    line: l,
                    col: co,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn loc(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        self.pos += 1;
        t
    }

    fn err(&self, msg: impl Into<String>) -> DslError {
        let (line, col) = self.loc();
        DslError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), DslError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => {
                self.pos -= 1;
                Err(self.err(format!("expected {what}")))
            }
        }
    }

    fn expect_ident(&mut self, want: &str) -> Result<(), DslError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == want => {
                self.next();
                Ok(())
            }
            _ => Err(self.err(format!("expected `{want}`"))),
        }
    }

    fn expect_int(&mut self) -> Result<i64, DslError> {
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = *n;
                self.next();
                Ok(n)
            }
            _ => Err(self.err("expected an integer")),
        }
    }
}

/// Parses a problem definition, or reports a diagnostic with location.
pub fn parse_problem(text: &str) -> Result<ProblemSpec, DslError> {
    let mut lx = lex(text)?;
    lx.expect_ident("colors")?;
    lx.expect(Tok::Colon, "`:`")?;
    let lo = lx.expect_int()?;
    lx.expect(Tok::DotDot, "`..`")?;
    let hi = lx.expect_int()?;
    lx.expect(Tok::Semi, "`;`")?;
    if lo > hi {
        return Err(DslError::EmptyRange);
    }
    lx.expect_ident("algebra")?;
    lx.expect(Tok::Colon, "`:`")?;
    let algebra = match lx.next() {
        Some(Tok::Ident(name)) => WeightAlgebra::by_name(&name).ok_or_else(|| {
            lx.err(format!("unknown algebra `{name}`"))
        })?,
        _ => return Err(lx.err("expected an algebra name")),
    };
    lx.expect(Tok::Semi, "`;`")?;
    lx.expect_ident("cost")?;
    lx.expect(Tok::Colon, "`:`")?;
    let cost = parse_aexpr(&mut lx)?;
    lx.expect(Tok::Semi, "`;`")?;
    lx.expect_ident("check")?;
    lx.expect(Tok::Colon, "`:`")?;
    if lx.peek() == Some(&Tok::Semi) || lx.peek().is_none() {
        return Err(lx.err("empty check expression"));
    }
    let check = parse_bexpr(&mut lx)?;
    lx.expect(Tok::Semi, "`;`")?;
    let mut caps = Vec::new();
    while let Some(Tok::Ident(s)) = lx.peek() {
        if s != "cap" {
            break;
        }
        lx.next();
        let color = lx.expect_int()?;
        lx.expect_ident("at")?;
        let cap = lx.expect_int()?;
        if !(0..=u16::MAX as i64).contains(&cap) {
            return Err(lx.err("cap out of range"));
        }
        lx.expect(Tok::Semi, "`;`")?;
        caps.push((color, cap as u16));
    }
    if lx.peek().is_some() {
        return Err(lx.err("trailing input"));
    }
    Ok(ProblemSpec {
        lo,
        hi,
        algebra,
        cost,
        check,
        caps,
    })
}

// bexpr precedence: -> (right) < or < and < not < atom
fn parse_bexpr(lx: &mut Lexer) -> Result<Bexpr, DslError> {
    let left = parse_or(lx)?;
    if lx.peek() == Some(&Tok::Arrow) {
        lx.next();
        let right = parse_bexpr(lx)?;
        return Ok(Bexpr::Implies(Box::new(left), Box::new(right)));
    }
    Ok(left)
}

fn parse_or(lx: &mut Lexer) -> Result<Bexpr, DslError> {
    let mut left = parse_and(lx)?;
    while let Some(Tok::Ident(s)) = lx.peek() {
        if s != "or" {
            break;
        }
        lx.next();
        let right = parse_and(lx)?;
        left = Bexpr::Or(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_and(lx: &mut Lexer) -> Result<Bexpr, DslError> {
    let mut left = parse_not(lx)?;
    while let Some(Tok::Ident(s)) = lx.peek() {
        if s != "and" {
            break;
        }
        lx.next();
        let right = parse_not(lx)?;
        left = Bexpr::And(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_not(lx: &mut Lexer) -> Result<Bexpr, DslError> {
    if let Some(Tok::Ident(s)) = lx.peek() {
        if s == "not" {
            lx.next();
            let inner = parse_not(lx)?;
            return Ok(Bexpr::Not(Box::new(inner)));
        }
    }
    parse_batom(lx)
}

fn parse_batom(lx: &mut Lexer) -> Result<Bexpr, DslError> {
    // a parenthesis may open either a nested bexpr or an aexpr; try the
    // boolean reading first and fall back to a comparison
    if lx.peek() == Some(&Tok::LParen) {
        let save = lx.pos;
        lx.next();
        if let Ok(inner) = parse_bexpr(lx) {
            if lx.peek() == Some(&Tok::RParen) {
                lx.next();
                // a comparison operator after `)` means the parenthesis
                // belonged to an arithmetic expression after all
                if !matches!(lx.peek(), Some(Tok::Cmp(_)) | Some(Tok::Plus) | Some(Tok::Minus)) {
                    return Ok(inner);
                }
            }
        }
        lx.pos = save;
    }
    let left = parse_aexpr(lx)?;
    let op = match lx.next() {
        Some(Tok::Cmp(op)) => op,
        _ => {
            lx.pos -= 1;
            return Err(lx.err("expected a comparison operator"));
        }
    };
    let right = parse_aexpr(lx)?;
    Ok(Bexpr::Cmp(left, op, right))
}

fn parse_aexpr(lx: &mut Lexer) -> Result<Aexpr, DslError> {
    let mut left = parse_aatom(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let right = parse_aatom(lx)?;
                left = Aexpr::Add(Box::new(left), Box::new(right));
            }
            Some(Tok::Minus) => {
                lx.next();
                let right = parse_aatom(lx)?;
                left = Aexpr::Sub(Box::new(left), Box::new(right));
            }
            _ => return Ok(left),
        }
    }
}

fn parse_aatom(lx: &mut Lexer) -> Result<Aexpr, DslError> {
    match lx.peek().cloned() {
        Some(Tok::Int(n)) => {
            lx.next();
            Ok(Aexpr::Int(n))
        }
        Some(Tok::LParen) => {
            lx.next();
            let inner = parse_aexpr(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(inner)
        }
        Some(Tok::Ident(s)) if s == "c" => {
            let (line, col) = lx.loc();
            lx.next();
            lx.expect(Tok::LParen, "`(`")?;
            match lx.next() {
                Some(Tok::Ident(arg)) if arg == "v" => {}
                Some(Tok::Ident(arg)) if arg == "u" => {
                    return Err(DslError::SymmetryViolation { line, col });
                }
                _ => return Err(lx.err("expected `v`")),
            }
            lx.expect(Tok::RParen, "`)`")?;
            Ok(Aexpr::SelfColor)
        }
        Some(Tok::Ident(s)) if s == "count" => {
            lx.next();
            lx.expect(Tok::LParen, "`(`")?;
            let closed = parse_range_head(lx)?;
            lx.expect(Tok::Pipe, "`|`")?;
            let pred = parse_upred(lx)?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(Aexpr::Count { closed, pred })
        }
        Some(Tok::Ident(s)) if s == "sum" => {
            lx.next();
            lx.expect(Tok::LParen, "`(`")?;
            let closed = parse_range_head(lx)?;
            lx.expect(Tok::Pipe, "`|`")?;
            lx.expect_ident("c")?;
            lx.expect(Tok::LParen, "`(`")?;
            lx.expect_ident("u")?;
            lx.expect(Tok::RParen, "`)`")?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(Aexpr::Sum { closed })
        }
        _ => Err(lx.err("expected an arithmetic expression")),
    }
}

/// Parses `u in N(v)` / `u in N[v]`; returns whether the range is closed.
fn parse_range_head(lx: &mut Lexer) -> Result<bool, DslError> {
    lx.expect_ident("u")?;
    lx.expect_ident("in")?;
    lx.expect_ident("N")?;
    match lx.next() {
        Some(Tok::LParen) => {
            lx.expect_ident("v")?;
            lx.expect(Tok::RParen, "`)`")?;
            Ok(false)
        }
        Some(Tok::LBracket) => {
            lx.expect_ident("v")?;
            lx.expect(Tok::RBracket, "`]`")?;
            Ok(true)
        }
        _ => {
            lx.pos -= 1;
            Err(lx.err("expected `N(v)` or `N[v]`"))
        }
    }
}

// bexprU precedence: or < and < atom
fn parse_upred(lx: &mut Lexer) -> Result<Upred, DslError> {
    let mut left = parse_upred_and(lx)?;
    while let Some(Tok::Ident(s)) = lx.peek() {
        if s != "or" {
            break;
        }
        lx.next();
        let right = parse_upred_and(lx)?;
        left = Upred::Or(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_upred_and(lx: &mut Lexer) -> Result<Upred, DslError> {
    let mut left = parse_upred_atom(lx)?;
    while let Some(Tok::Ident(s)) = lx.peek() {
        if s != "and" {
            break;
        }
        lx.next();
        let right = parse_upred_atom(lx)?;
        left = Upred::And(Box::new(left), Box::new(right));
    }
    Ok(left)
}

fn parse_upred_atom(lx: &mut Lexer) -> Result<Upred, DslError> {
    if lx.peek() == Some(&Tok::LParen) {
        lx.next();
        let inner = parse_upred(lx)?;
        lx.expect(Tok::RParen, "`)`")?;
        return Ok(inner);
    }
    lx.expect_ident("c")?;
    lx.expect(Tok::LParen, "`(`")?;
    lx.expect_ident("u")?;
    lx.expect(Tok::RParen, "`)`")?;
    let op = match lx.next() {
        Some(Tok::Cmp(op)) => op,
        _ => {
            lx.pos -= 1;
            return Err(lx.err("expected a comparison operator"));
        }
    };
    let k = lx.expect_int()?;
    Ok(Upred::Cmp(op, k))
}

fn contains_aggregate(e: &Aexpr) -> bool {
    match e {
        Aexpr::Int(_) | Aexpr::SelfColor => false,
        Aexpr::Count { .. } | Aexpr::Sum { .. } => true,
        Aexpr::Add(a, b) | Aexpr::Sub(a, b) => contains_aggregate(a) || contains_aggregate(b),
    }
}

fn subtraction_touches_aggregate(e: &Bexpr) -> bool {
    fn in_aexpr(e: &Aexpr) -> bool {
        match e {
            Aexpr::Sub(a, b) => contains_aggregate(a) || contains_aggregate(b) || in_aexpr(a) || in_aexpr(b),
            Aexpr::Add(a, b) => in_aexpr(a) || in_aexpr(b),
            _ => false,
        }
    }
    match e {
        Bexpr::Cmp(a, _, b) => in_aexpr(a) || in_aexpr(b),
        Bexpr::And(a, b) | Bexpr::Or(a, b) | Bexpr::Implies(a, b) => {
            subtraction_touches_aggregate(a) || subtraction_touches_aggregate(b)
        }
        Bexpr::Not(a) => subtraction_touches_aggregate(a),
    }
}

fn max_constant(e: &Bexpr) -> Option<i64> {
    fn in_aexpr(e: &Aexpr, acc: &mut Option<i64>) {
        match e {
            Aexpr::Int(n) => *acc = Some(acc.map_or(*n, |m: i64| m.max(*n))),
            Aexpr::Add(a, b) | Aexpr::Sub(a, b) => {
                in_aexpr(a, acc);
                in_aexpr(b, acc);
            }
            Aexpr::Count { pred, .. } => in_upred(pred, acc),
            _ => {}
        }
    }
    fn in_upred(p: &Upred, acc: &mut Option<i64>) {
        match p {
            Upred::Cmp(_, k) => *acc = Some(acc.map_or(*k, |m: i64| m.max(*k))),
            Upred::And(a, b) | Upred::Or(a, b) => {
                in_upred(a, acc);
                in_upred(b, acc);
            }
        }
    }
    fn walk(e: &Bexpr, acc: &mut Option<i64>) {
        match e {
            Bexpr::Cmp(a, _, b) => {
                in_aexpr(a, acc);
                in_aexpr(b, acc);
            }
            Bexpr::And(a, b) | Bexpr::Or(a, b) | Bexpr::Implies(a, b) => {
                walk(a, acc);
                walk(b, acc);
            }
            Bexpr::Not(a) => walk(a, acc),
        }
    }
    let mut acc = None;
    walk(e, &mut acc);
    acc
}

fn eval_aexpr(e: &Aexpr, own: i64, counts: &[i64], lo: i64) -> i64 {
    match e {
        Aexpr::Int(n) => *n,
        Aexpr::SelfColor => own,
        Aexpr::Count { closed, pred } => {
            let mut total: i64 = counts
                .iter()
                .enumerate()
                .filter(|(idx, _)| pred.eval(lo + *idx as i64))
                .map(|(_, &c)| c)
                .sum();
            if *closed && pred.eval(own) {
                total += 1;
            }
            total
        }
        Aexpr::Sum { closed } => {
            let mut total: i64 = counts
                .iter()
                .enumerate()
                .map(|(idx, &c)| (lo + idx as i64) * c)
                .sum();
            if *closed {
                total += own;
            }
            total
        }
        Aexpr::Add(a, b) => eval_aexpr(a, own, counts, lo) + eval_aexpr(b, own, counts, lo),
        Aexpr::Sub(a, b) => eval_aexpr(a, own, counts, lo) - eval_aexpr(b, own, counts, lo),
    }
}

fn eval_bexpr(e: &Bexpr, own: i64, counts: &[i64], lo: i64) -> bool {
    match e {
        Bexpr::Cmp(a, op, b) => op.eval(eval_aexpr(a, own, counts, lo), eval_aexpr(b, own, counts, lo)),
        Bexpr::And(a, b) => eval_bexpr(a, own, counts, lo) && eval_bexpr(b, own, counts, lo),
        Bexpr::Or(a, b) => eval_bexpr(a, own, counts, lo) || eval_bexpr(b, own, counts, lo),
        Bexpr::Not(a) => !eval_bexpr(a, own, counts, lo),
        Bexpr::Implies(a, b) => !eval_bexpr(a, own, counts, lo) || eval_bexpr(b, own, counts, lo),
    }
}

/// Compiles a parsed spec against a graph into an instance plus the
/// counting neighborhood system with inferred (or declared) caps.
pub fn compile_problem(
    spec: &ProblemSpec,
    g: &LabeledGraph,
) -> Result<(ProblemInstance, SharedSystem), DslError> {
    if spec.lo > spec.hi {
        return Err(DslError::EmptyRange);
    }
    if contains_aggregate(&spec.cost) {
        return Err(DslError::AggregateInCost);
    }
    let lo = spec.lo;
    let count_colors = (spec.hi - spec.lo + 1) as usize;
    let check_ast = Arc::new(spec.check.clone());
    let check = {
        let check_ast = check_ast.clone();
        Arc::new(move |g: &LabeledGraph, v: usize, c: &[ColorId]| {
            let mut counts = vec![0i64; count_colors];
            for &u in g.neighbors(v) {
                counts[c[u]] += 1;
            }
            eval_bexpr(&check_ast, lo + c[v] as i64, &counts, lo)
        })
    };
    let tokens: Vec<String> = (spec.lo..=spec.hi).map(|v| v.to_string()).collect();
    let cost = spec.cost.clone();
    let instance = ProblemInstance::uniform(
        Arc::new(g.clone()),
        spec.algebra,
        tokens,
        move |i| eval_aexpr(&cost, lo + i as i64, &[], lo),
        check,
    );

    let unsafe_subtraction = subtraction_touches_aggregate(&spec.check);
    if unsafe_subtraction && !spec.caps.is_empty() {
        return Err(DslError::CapsWithSubtraction);
    }
    let bound = max_constant(&spec.check);
    let caps: Option<Vec<u16>> = if unsafe_subtraction {
        None // exact degree-capped counts
    } else {
        bound.map(|b| {
            let default = (b.max(0) as u16).saturating_add(1);
            vec![default; count_colors]
        })
    };
    let mut caps = caps;
    if !spec.caps.is_empty() {
        let mut vec = caps.unwrap_or_else(|| vec![u16::MAX; count_colors]);
        for &(color, cap) in &spec.caps {
            if !(spec.lo..=spec.hi).contains(&color) {
                return Err(DslError::CapColorOutOfRange(color));
            }
            if let Some(b) = bound {
                if (cap as i64) < b {
                    return Err(DslError::CapTooSmall {
                        color,
                        cap,
                        bound: b,
                    });
                }
            }
            vec[(color - spec.lo) as usize] = cap;
        }
        caps = Some(vec);
    }
    let system = counting_pns(&instance, caps).expect("uniform lists always reconstruct");
    Ok((instance, system))
}

/// Parses and compiles in one step.
pub fn build_problem(
    text: &str,
    g: &LabeledGraph,
) -> Result<(ProblemInstance, SharedSystem), DslError> {
    let spec = parse_problem(text)?;
    compile_problem(&spec, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Weight;
    use crate::engine::{solve, SolveOptions};
    use crate::graph::{cycle, path};
    use crate::oracle::brute_force_solve;
    use crate::treedec::{heuristic_decomposition, to_easy};

    const ROMAN: &str = "colors: 0..2;\nalgebra: min-plus;\ncost: c(v);\ncheck: c(v) = 0 -> count(u in N(v) | c(u) = 2) >= 1;\n";

    #[test]
    fn roman_ast_golden() {
        let spec = parse_problem(ROMAN).unwrap();
        let golden = "ProblemSpec { lo: 0, hi: 2, algebra: MinPlus, cost: SelfColor, \
check: Implies(Cmp(SelfColor, Eq, Int(0)), Cmp(Count { closed: false, pred: Cmp(Eq, 2) }, Ge, Int(1))), \
caps: [] }";
        assert_eq!(format!("{spec:?}"), golden);
    }

    #[test]
    fn empty_check_is_syntax_error() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: ;\n";
        assert!(matches!(parse_problem(text), Err(DslError::Syntax { .. })));
    }

    #[test]
    fn naked_cu_is_symmetry_violation() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: c(u) = 1 and c(v) = 0;\n";
        assert!(matches!(
            parse_problem(text),
            Err(DslError::SymmetryViolation { line: 4, .. })
        ));
    }

    fn dp_value(inst: &ProblemInstance, sys: &SharedSystem) -> Weight {
        let td = heuristic_decomposition(&inst.graph);
        let etd = to_easy(&inst.graph, &td).unwrap();
        solve(inst, sys.as_ref(), &etd, &[], &SolveOptions::default())
            .unwrap()
            .optimum
    }

    #[test]
    fn dsl_roman_matches_catalog() {
        let g = path(4);
        let (inst, sys) = build_problem(ROMAN, &g).unwrap();
        assert_eq!(dp_value(&inst, &sys), Weight::Value(3));
    }

    #[test]
    fn dsl_brace_two_domination() {
        let text = "colors: 0..2;\nalgebra: min-plus;\ncost: c(v);\ncheck: sum(u in N[v] | c(u)) >= 2;\n";
        let (inst, sys) = build_problem(text, &path(2)).unwrap();
        assert_eq!(dp_value(&inst, &sys), Weight::Value(2));
    }

    #[test]
    fn dsl_independent_set_max_plus() {
        let text = "colors: 0..1;\nalgebra: max-plus;\ncost: c(v);\ncheck: c(v) = 1 -> count(u in N(v) | c(u) = 1) = 0;\n";
        let (inst, sys) = build_problem(text, &cycle(5)).unwrap();
        assert_eq!(dp_value(&inst, &sys), Weight::Value(2));
        let oracle = brute_force_solve(&inst, &[], None, false).unwrap().optimum;
        assert_eq!(oracle, Weight::Value(2));
    }

    #[test]
    fn caps_do_not_change_results() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: sum(u in N[v] | c(u)) >= 1;\n";
        let capped = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: sum(u in N[v] | c(u)) >= 1;\ncap 1 at 3;\n";
        for g in [path(5), cycle(6)] {
            let (i1, s1) = build_problem(text, &g).unwrap();
            let (i2, s2) = build_problem(capped, &g).unwrap();
            assert_eq!(dp_value(&i1, &s1), dp_value(&i2, &s2));
        }
    }

    #[test]
    fn cap_too_small_rejected() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: sum(u in N[v] | c(u)) >= 3;\ncap 1 at 2;\n";
        assert!(matches!(
            parse_problem(text).map(|s| compile_problem(&s, &path(3))),
            Ok(Err(DslError::CapTooSmall { .. }))
        ));
    }

    #[test]
    fn subtraction_forces_exact_counts() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: count(u in N(v) | c(u) = 1) - count(u in N(v) | c(u) = 0) >= 0;\n";
        let g = path(4);
        let (inst, sys) = build_problem(text, &g).unwrap();
        let dp = dp_value(&inst, &sys);
        let oracle = brute_force_solve(&inst, &[], None, false).unwrap().optimum;
        assert_eq!(dp, oracle);
    }

    #[test]
    fn parse_rejects_trailing_garbage() {
        let text = "colors: 0..1;\nalgebra: min-plus;\ncost: c(v);\ncheck: c(v) = 0;\nnonsense\n";
        assert!(matches!(parse_problem(text), Err(DslError::Syntax { .. })));
    }
}
