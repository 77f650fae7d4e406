//! Concrete syntax: formula parser and printer, and the team file format.
//!
//! Precedence, tightest first: `X F G ! ~`, then `U`/`R` (right
//! associative), `&`, `|`, `OR`; a quantifier prefix extends as far right as
//! possible. `⩔` and `∼` are accepted for `OR` and `~`.

use std::fmt::{self, Write as _};

use crate::error::{Error, ParseErrorKind, Result, SourceSpan};
use crate::formula::{Formula, Hyper, Matrix, Prop, Quantifier, Var};
use crate::traces::{LassoTrace, Letter, Team};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Language {
    Ltl,
    Team,
    Hyper,
}

/// Result of [`parse_formula`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Formula(Formula),
    Hyper(Hyper),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Bang,
    Tilde,
    Amp,
    Bar,
    OvOr,
    Next,
    Finally,
    Globally,
    Until,
    Release,
    LParen,
    RParen,
    At,
    Dot,
    Quant(Quantifier),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Eof => f.write_str("end of input"),
            other => write!(f, "`{}`", tok_text(other)),
        }
    }
}

fn tok_text(t: &Tok) -> &'static str {
    match t {
        Tok::Zero => "0",
        Tok::One => "1",
        Tok::Bang => "!",
        Tok::Tilde => "~",
        Tok::Amp => "&",
        Tok::Bar => "|",
        Tok::OvOr => "OR",
        Tok::Next => "X",
        Tok::Finally => "F",
        Tok::Globally => "G",
        Tok::Until => "U",
        Tok::Release => "R",
        Tok::LParen => "(",
        Tok::RParen => ")",
        Tok::At => "@",
        Tok::Dot => ".",
        Tok::Quant(Quantifier::Forall) => "forall",
        Tok::Quant(Quantifier::Exists) => "exists",
        Tok::Ident(_) | Tok::Eof => "",
    }
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceSpan)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '0' => Some(Tok::Zero),
            '1' => Some(Tok::One),
            '!' => Some(Tok::Bang),
            '~' | '∼' => Some(Tok::Tilde),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '⩔' => Some(Tok::OvOr),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '@' => Some(Tok::At),
            '.' => Some(Tok::Dot),
            'X' => Some(Tok::Next),
            'F' => Some(Tok::Finally),
            'G' => Some(Tok::Globally),
            'U' => Some(Tok::Until),
            'R' => Some(Tok::Release),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, SourceSpan::new(start, start + c.len_utf8())));
            continue;
        }
        if c == 'O' {
            chars.next();
            if matches!(chars.peek(), Some(&(_, 'R'))) {
                chars.next();
                out.push((Tok::OvOr, SourceSpan::new(start, start + 2)));
                continue;
            }
            return Err(Error::parse(
                ParseErrorKind::Lexical,
                SourceSpan::new(start, start + 1),
                "unexpected `O` (did you mean `OR`?)",
            ));
        }
        if c.is_ascii_lowercase() {
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if !is_ident_continue(c) {
                    break;
                }
                end = i + c.len_utf8();
                chars.next();
            }
            let word = &text[start..end];
            let tok = match word {
                "forall" => Tok::Quant(Quantifier::Forall),
                "exists" => Tok::Quant(Quantifier::Exists),
                _ => Tok::Ident(word.to_string()),
            };
            out.push((tok, SourceSpan::new(start, end)));
            continue;
        }
        return Err(Error::parse(
            ParseErrorKind::Lexical,
            SourceSpan::new(start, start + c.len_utf8()),
            format!("unexpected character `{c}`"),
        ));
    }
    out.push((Tok::Eof, SourceSpan::new(text.len(), text.len())));
    Ok(out)
}

/// Parser tree for the hyper language before the closure level and the
/// matrices are told apart.
#[derive(Debug, Clone)]
enum HNode {
    True,
    False,
    Atom(Prop, Var),
    Not(Box<HNode>),
    And(Box<HNode>, Box<HNode>),
    Or(Box<HNode>, Box<HNode>),
    Next(Box<HNode>),
    Until(Box<HNode>, Box<HNode>),
    Quant(Quantifier, Var, Box<HNode>, SourceSpan),
}

impl HNode {
    fn has_quant(&self) -> bool {
        match self {
            HNode::True | HNode::False | HNode::Atom(..) => false,
            HNode::Quant(..) => true,
            HNode::Not(a) | HNode::Next(a) => a.has_quant(),
            HNode::And(a, b) | HNode::Or(a, b) | HNode::Until(a, b) => {
                a.has_quant() || b.has_quant()
            }
        }
    }

    fn first_quant_span(&self) -> Option<SourceSpan> {
        match self {
            HNode::Quant(.., span) => Some(*span),
            HNode::True | HNode::False | HNode::Atom(..) => None,
            HNode::Not(a) | HNode::Next(a) => a.first_quant_span(),
            HNode::And(a, b) | HNode::Or(a, b) | HNode::Until(a, b) => {
                a.first_quant_span().or_else(|| b.first_quant_span())
            }
        }
    }

    fn into_matrix(self) -> Matrix {
        match self {
            HNode::True => Matrix::True,
            HNode::False => Matrix::False,
            HNode::Atom(p, v) => Matrix::Atom(p, v),
            HNode::Not(a) => Matrix::not(a.into_matrix()),
            HNode::And(a, b) => Matrix::and(a.into_matrix(), b.into_matrix()),
            HNode::Or(a, b) => Matrix::or(a.into_matrix(), b.into_matrix()),
            HNode::Next(a) => Matrix::next(a.into_matrix()),
            HNode::Until(a, b) => Matrix::until(a.into_matrix(), b.into_matrix()),
            HNode::Quant(..) => unreachable!("only called on quantifier-free nodes"),
        }
    }

    fn into_hyper(self) -> Result<Hyper> {
        if !self.has_quant() {
            return Ok(Hyper::Matrix(self.into_matrix()));
        }
        let position_error = |span: Option<SourceSpan>, what: &str| {
            Error::parse(
                ParseErrorKind::QuantifierPosition,
                span.unwrap_or(SourceSpan::new(0, 0)),
                what.to_string(),
            )
        };
        match self {
            HNode::Quant(q, v, body, _) => {
                if body.has_quant() && !matches!(*body, HNode::Quant(..)) {
                    let span = body.first_quant_span();
                    return Err(position_error(span, "quantifier in non-prefix position"));
                }
                Ok(Hyper::Quant(q, v, Box::new(body.into_hyper()?)))
            }
            HNode::Not(a) => Ok(Hyper::not(a.into_hyper()?)),
            HNode::And(a, b) => Ok(Hyper::and(a.into_hyper()?, b.into_hyper()?)),
            HNode::Or(a, b) => Ok(Hyper::or(a.into_hyper()?, b.into_hyper()?)),
            node @ (HNode::Next(_) | HNode::Until(..)) => {
                let span = node.first_quant_span();
                Err(position_error(span, "quantifier under a temporal operator"))
            }
            HNode::True | HNode::False | HNode::Atom(..) => unreachable!("has a quantifier"),
        }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
    lang: Language,
    text: &'a str,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, lang: Language) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            lang,
            text,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax_error(&self, message: impl Into<String>) -> Error {
        Error::parse(ParseErrorKind::Syntax, self.span(), message)
    }

    fn expect(&mut self, tok: Tok) -> Result<SourceSpan> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.syntax_error(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn expect_ident(&mut self) -> Result<(String, SourceSpan)> {
        match self.bump() {
            (Tok::Ident(s), span) => Ok((s, span)),
            (tok, span) => Err(Error::parse(
                ParseErrorKind::Syntax,
                span,
                format!("expected identifier, found {tok}"),
            )),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.syntax_error(format!("unexpected {}", self.peek())))
        }
    }

    // ---- LTL / team ----

    fn team_ovor(&mut self) -> Result<Formula> {
        let mut left = self.team_bar()?;
        while *self.peek() == Tok::OvOr {
            if self.lang == Language::Ltl {
                return Err(self.syntax_error("`OR` is not part of LTL"));
            }
            self.bump();
            let right = self.team_bar()?;
            left = Formula::ov_or(left, right);
        }
        Ok(left)
    }

    fn team_bar(&mut self) -> Result<Formula> {
        let mut left = self.team_amp()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            left = Formula::or(left, self.team_amp()?);
        }
        Ok(left)
    }

    fn team_amp(&mut self) -> Result<Formula> {
        let mut left = self.team_until()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = Formula::and(left, self.team_until()?);
        }
        Ok(left)
    }

    fn team_until(&mut self) -> Result<Formula> {
        let left = self.team_unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                Ok(Formula::until(left, self.team_until()?))
            }
            Tok::Release => {
                self.bump();
                Ok(Formula::release(left, self.team_until()?))
            }
            _ => Ok(left),
        }
    }

    fn team_unary(&mut self) -> Result<Formula> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Zero => Ok(Formula::False),
            Tok::One => Ok(Formula::True),
            Tok::Ident(p) => {
                if *self.peek() == Tok::At {
                    return Err(self.syntax_error("trace variables only occur in hyper formulas"));
                }
                Ok(Formula::atom(p.as_str()))
            }
            Tok::Bang => match self.peek().clone() {
                Tok::Ident(p) if *self.peek_at(1) != Tok::At => {
                    self.bump();
                    Ok(Formula::neg_atom(p.as_str()))
                }
                _ => {
                    let end = self.span().end;
                    Err(Error::parse(
                        ParseErrorKind::NnfViolation,
                        SourceSpan::new(span.start, end),
                        "NNF violation: `!` applied to a non-atom",
                    ))
                }
            },
            Tok::Tilde => {
                if self.lang == Language::Ltl {
                    return Err(Error::parse(
                        ParseErrorKind::Syntax,
                        span,
                        "`~` is not part of LTL",
                    ));
                }
                Ok(Formula::bool_neg(self.team_unary()?))
            }
            Tok::Next => Ok(Formula::next(self.team_unary()?)),
            Tok::Finally => Ok(Formula::finally(self.team_unary()?)),
            Tok::Globally => Ok(Formula::globally(self.team_unary()?)),
            Tok::LParen => {
                let inner = self.team_ovor()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Quant(_) => Err(Error::parse(
                ParseErrorKind::QuantifierPosition,
                span,
                "quantifiers only occur in hyper formulas",
            )),
            tok => Err(Error::parse(
                ParseErrorKind::Syntax,
                span,
                format!("expected a formula, found {tok}"),
            )),
        }
    }

    // ---- hyper ----

    fn hyper_expr(&mut self) -> Result<HNode> {
        let mut left = self.hyper_amp()?;
        loop {
            match self.peek() {
                Tok::Bar => {
                    self.bump();
                    left = HNode::Or(Box::new(left), Box::new(self.hyper_amp()?));
                }
                Tok::OvOr => return Err(self.syntax_error("`OR` is not part of HyperLTL")),
                _ => return Ok(left),
            }
        }
    }

    fn hyper_amp(&mut self) -> Result<HNode> {
        let mut left = self.hyper_until()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            left = HNode::And(Box::new(left), Box::new(self.hyper_until()?));
        }
        Ok(left)
    }

    fn hyper_until(&mut self) -> Result<HNode> {
        let left = self.hyper_unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                Ok(HNode::Until(Box::new(left), Box::new(self.hyper_until()?)))
            }
            Tok::Release => Err(self.syntax_error("`R` is not part of HyperLTL; use `!(!a U !b)`")),
            _ => Ok(left),
        }
    }

    fn hyper_unary(&mut self) -> Result<HNode> {
        let (tok, span) = self.bump();
        let not = |a: HNode| HNode::Not(Box::new(a));
        match tok {
            Tok::Zero => Ok(HNode::False),
            Tok::One => Ok(HNode::True),
            Tok::Ident(p) => {
                if *self.peek() != Tok::At {
                    return Err(Error::parse(
                        ParseErrorKind::Syntax,
                        span,
                        format!("proposition `{p}` needs a trace variable, as in `{p}@pi`"),
                    ));
                }
                self.bump();
                let (v, _) = self.expect_ident()?;
                Ok(HNode::Atom(Prop::from(p), Var::from(v)))
            }
            Tok::Bang => Ok(not(self.hyper_unary()?)),
            Tok::Next => Ok(HNode::Next(Box::new(self.hyper_unary()?))),
            Tok::Finally => Ok(HNode::Until(Box::new(HNode::True), Box::new(self.hyper_unary()?))),
            Tok::Globally => {
                let body = self.hyper_unary()?;
                Ok(not(HNode::Until(Box::new(HNode::True), Box::new(not(body)))))
            }
            Tok::LParen => {
                let inner = self.hyper_expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Quant(q) => {
                let (v, vspan) = self.expect_ident()?;
                self.expect(Tok::Dot)?;
                let body = self.hyper_expr()?;
                Ok(HNode::Quant(q, Var::from(v), Box::new(body), SourceSpan::new(span.start, vspan.end)))
            }
            Tok::Tilde => Err(Error::parse(
                ParseErrorKind::Syntax,
                span,
                "`~` is not part of HyperLTL; use `!`",
            )),
            tok => Err(Error::parse(
                ParseErrorKind::Syntax,
                span,
                format!("expected a formula, found {tok}"),
            )),
        }
    }

    fn parse(mut self) -> Result<Parsed> {
        match self.lang {
            Language::Ltl | Language::Team => {
                let f = self.team_ovor()?;
                self.finish()?;
                Ok(Parsed::Formula(f))
            }
            Language::Hyper => {
                let node = self.hyper_expr()?;
                self.finish()?;
                let h = node.into_hyper()?;
                let whole = SourceSpan::new(0, self.text.len());
                h.validate().map_err(|e| match e {
                    Error::QuantifierPosition => {
                        Error::parse(ParseErrorKind::QuantifierPosition, whole, e.to_string())
                    }
                    e => Error::parse(ParseErrorKind::FreeVariable, whole, e.to_string()),
                })?;
                Ok(Parsed::Hyper(h))
            }
        }
    }
}

pub fn parse_formula(text: &str, lang: Language) -> Result<Parsed> {
    Parser::new(text, lang)?.parse()
}

/// Parses an LTL (`team == false`) or team formula.
pub fn parse_team(text: &str) -> Result<Formula> {
    match parse_formula(text, Language::Team)? {
        Parsed::Formula(f) => Ok(f),
        Parsed::Hyper(_) => unreachable!(),
    }
}

pub fn parse_ltl(text: &str) -> Result<Formula> {
    match parse_formula(text, Language::Ltl)? {
        Parsed::Formula(f) => Ok(f),
        Parsed::Hyper(_) => unreachable!(),
    }
}

pub fn parse_hyper(text: &str) -> Result<Hyper> {
    match parse_formula(text, Language::Hyper)? {
        Parsed::Hyper(h) => Ok(h),
        Parsed::Formula(_) => unreachable!(),
    }
}

// ---- printing ----

const PREC_OVOR: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNTIL: u8 = 4;
const PREC_UNARY: u8 = 5;

fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::OvOr(..) => PREC_OVOR,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Until(l, _) if **l == Formula::True => PREC_UNARY,
        Formula::Until(..) | Formula::Release(..) => PREC_UNTIL,
        _ => PREC_UNARY,
    }
}

fn paren_if(out: &mut String, cond: bool, body: impl FnOnce(&mut String)) {
    if cond {
        out.push('(');
    }
    body(out);
    if cond {
        out.push(')');
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let child = |out: &mut String, c: &Formula, cond: bool| paren_if(out, cond, |o| write_formula(o, c));
    let left_assoc = |out: &mut String, a: &Formula, b: &Formula, op: &str, prec: u8| {
        child(out, a, formula_prec(a) < prec);
        let _ = write!(out, " {op} ");
        child(out, b, formula_prec(b) <= prec);
    };
    let right_assoc = |out: &mut String, a: &Formula, b: &Formula, op: &str| {
        child(out, a, formula_prec(a) <= PREC_UNTIL);
        let _ = write!(out, " {op} ");
        child(out, b, formula_prec(b) < PREC_UNTIL);
    };
    let unary = |out: &mut String, op: &str, a: &Formula| {
        out.push_str(op);
        child(out, a, formula_prec(a) < PREC_UNARY);
    };
    match f {
        Formula::True => out.push('1'),
        Formula::False => out.push('0'),
        Formula::Atom(p) => out.push_str(p.as_str()),
        Formula::NegAtom(p) => {
            out.push('!');
            out.push_str(p.as_str());
        }
        Formula::OvOr(a, b) => {
            // binary operands of OR are always bracketed for readability
            child(out, a, !matches!(formula_prec(a), PREC_OVOR | PREC_UNARY));
            out.push_str(" OR ");
            child(out, b, formula_prec(b) < PREC_UNARY);
        }
        Formula::Or(a, b) => left_assoc(out, a, b, "|", PREC_OR),
        Formula::And(a, b) => left_assoc(out, a, b, "&", PREC_AND),
        Formula::Until(a, b) if **a == Formula::True => unary(out, "F ", b),
        Formula::Until(a, b) => right_assoc(out, a, b, "U"),
        Formula::Release(a, b) => right_assoc(out, a, b, "R"),
        Formula::BoolNeg(a) => {
            out.push('~');
            child(out, a, !matches!(**a, Formula::True | Formula::False | Formula::Atom(_)));
        }
        Formula::Next(a) => unary(out, "X ", a),
        Formula::Globally(a) => unary(out, "G ", a),
    }
}

fn matrix_prec(m: &Matrix) -> u8 {
    match m {
        Matrix::Or(..) => PREC_OR,
        Matrix::And(..) => PREC_AND,
        Matrix::Until(l, _) if **l == Matrix::True => PREC_UNARY,
        Matrix::Until(..) => PREC_UNTIL,
        _ => PREC_UNARY,
    }
}

fn write_matrix(out: &mut String, m: &Matrix) {
    let child = |out: &mut String, c: &Matrix, cond: bool| paren_if(out, cond, |o| write_matrix(o, c));
    let unary = |out: &mut String, op: &str, a: &Matrix| {
        out.push_str(op);
        child(out, a, matrix_prec(a) < PREC_UNARY);
    };
    if let Some(body) = m.as_globally() {
        return unary(out, "G ", body);
    }
    match m {
        Matrix::True => out.push('1'),
        Matrix::False => out.push('0'),
        Matrix::Atom(p, v) => {
            let _ = write!(out, "{p}@{v}");
        }
        Matrix::Not(a) => unary(out, "!", a),
        Matrix::Next(a) => unary(out, "X ", a),
        Matrix::Until(a, b) if **a == Matrix::True => unary(out, "F ", b),
        Matrix::Until(a, b) => {
            child(out, a, matrix_prec(a) <= PREC_UNTIL);
            out.push_str(" U ");
            child(out, b, matrix_prec(b) < PREC_UNTIL);
        }
        Matrix::And(a, b) | Matrix::Or(a, b) => {
            let (op, prec) = if matches!(m, Matrix::And(..)) {
                ("&", PREC_AND)
            } else {
                ("|", PREC_OR)
            };
            child(out, a, matrix_prec(a) < prec);
            let _ = write!(out, " {op} ");
            child(out, b, matrix_prec(b) <= prec);
        }
    }
}

fn hyper_prec(h: &Hyper) -> u8 {
    match h {
        Hyper::Quant(..) => 0,
        Hyper::Matrix(m) => matrix_prec(m),
        Hyper::Not(_) => PREC_UNARY,
        Hyper::And(..) => PREC_AND,
        Hyper::Or(..) => PREC_OR,
    }
}

fn write_hyper(out: &mut String, h: &Hyper) {
    let child = |out: &mut String, c: &Hyper, cond: bool| paren_if(out, cond, |o| write_hyper(o, c));
    match h {
        Hyper::Quant(q, v, body) => {
            let _ = write!(out, "{} {v}. ", q.keyword());
            child(out, body, matches!(**body, Hyper::Matrix(_)) && hyper_prec(body) < PREC_UNARY);
        }
        Hyper::Matrix(m) => write_matrix(out, m),
        Hyper::Not(a) => {
            out.push('!');
            child(out, a, hyper_prec(a) < PREC_UNARY);
        }
        Hyper::And(a, b) | Hyper::Or(a, b) => {
            let (op, prec) = if matches!(h, Hyper::And(..)) {
                ("&", PREC_AND)
            } else {
                ("|", PREC_OR)
            };
            child(out, a, hyper_prec(a) < prec);
            let _ = write!(out, " {op} ");
            child(out, b, hyper_prec(b) <= prec);
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

pub fn print_matrix(m: &Matrix) -> String {
    let mut out = String::new();
    write_matrix(&mut out, m);
    out
}

pub fn print_hyper(h: &Hyper) -> String {
    let mut out = String::new();
    write_hyper(&mut out, h);
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_matrix(self))
    }
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_hyper(self))
    }
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Formula(x) => x.fmt(f),
            Parsed::Hyper(x) => x.fmt(f),
        }
    }
}

// ---- team files ----

/// Contents of a team file.
#[derive(Debug, Clone, Default)]
pub struct TeamFile {
    pub team: Team,
    /// Named traces in file order, before set collapse.
    pub entries: Vec<(String, LassoTrace)>,
    pub warnings: Vec<String>,
}

struct LineScanner<'a> {
    line: &'a str,
    offset: usize,
    pos: usize,
}

impl LineScanner<'_> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.line[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.line[self.pos..].chars().next()
    }

    fn span(&self, len: usize) -> SourceSpan {
        SourceSpan::new(self.offset + self.pos, self.offset + self.pos + len)
    }

    fn unknown(&self, c: Option<char>, expected: &str) -> Error {
        let (len, found) = match c {
            Some(c) => (c.len_utf8(), format!("`{c}`")),
            None => (0, "end of line".to_string()),
        };
        Error::parse(
            ParseErrorKind::UnknownToken,
            self.span(len),
            format!("expected {expected}, found {found}"),
        )
    }

    fn expect(&mut self, want: char) -> Result<()> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += c.len_utf8();
                Ok(())
            }
            c => Err(self.unknown(c, &format!("`{want}`"))),
        }
    }

    fn word(&mut self, allow_upper: bool) -> Option<&str> {
        self.skip_ws();
        let rest = &self.line[self.pos..];
        let first = rest.chars().next()?;
        let ok_first = first.is_ascii_lowercase() || (allow_upper && is_ident_continue(first));
        if !ok_first {
            return None;
        }
        let len = rest.find(|c: char| !is_ident_continue(c)).unwrap_or(rest.len());
        self.pos += len;
        Some(&rest[..len])
    }

    fn letter(&mut self) -> Result<Letter> {
        self.expect('{')?;
        let mut letter = Letter::new();
        if self.peek() == Some('}') {
            self.pos += 1;
            return Ok(letter);
        }
        loop {
            match self.word(false) {
                Some(p) => {
                    letter.insert(Prop::new(p));
                }
                None => {
                    let c = self.peek();
                    return Err(self.unknown(c, "a proposition"));
                }
            }
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('}') => {
                    self.pos += 1;
                    return Ok(letter);
                }
                c => return Err(self.unknown(c, "`,` or `}`")),
            }
        }
    }
}

/// Parses the line-oriented team format `NAME = STEP* ( STEP+ )`.
pub fn parse_team_file(text: &str) -> Result<TeamFile> {
    let mut file = TeamFile::default();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line_offset = offset;
        offset += raw.len();
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut sc = LineScanner {
            line,
            offset: line_offset,
            pos: 0,
        };
        let name = match sc.word(true) {
            Some(n) => n.to_string(),
            None => {
                let c = sc.peek();
                return Err(sc.unknown(c, "a trace name"));
            }
        };
        sc.expect('=')?;
        let mut stem = Vec::new();
        while sc.peek() == Some('{') {
            stem.push(sc.letter()?);
        }
        let open = sc.span(1);
        sc.expect('(')?;
        let mut cycle = Vec::new();
        while sc.peek() == Some('{') {
            cycle.push(sc.letter()?);
        }
        if cycle.is_empty() && sc.peek() == Some(')') {
            return Err(Error::parse(
                ParseErrorKind::EmptyLoop,
                SourceSpan::new(open.start, sc.span(1).end),
                "empty loop",
            ));
        }
        sc.expect(')')?;
        if let Some(c) = sc.peek() {
            return Err(sc.unknown(Some(c), "end of line"));
        }
        let trace = LassoTrace::new(stem, cycle)?;
        if file.entries.iter().any(|(n, _)| *n == name) {
            file.warnings.push(format!("duplicate trace name `{name}`"));
        }
        file.team.insert(trace.clone());
        file.entries.push((name, trace));
    }
    Ok(file)
}

/// One `tN = ...` line per trace.
pub fn print_team_file(team: &Team) -> String {
    let mut out = String::new();
    for (i, t) in team.iter().enumerate() {
        let _ = writeln!(out, "t{i} = {t}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traces::letter;

    fn team(text: &str) -> Formula {
        parse_team(text).unwrap()
    }

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn parse_team_examples() {
        assert_eq!(
            team("p U (q OR ~r)"),
            Formula::until(p(), Formula::ov_or(q(), Formula::bool_neg(Formula::atom("r"))))
        );
        let err = parse_team("!(p & q)").unwrap_err();
        assert!(
            matches!(err, Error::Parse { kind: ParseErrorKind::NnfViolation, .. }),
            "{err}"
        );
        assert!(err.to_string().contains("NNF violation"));
    }

    #[test]
    fn parse_hyper_example() {
        let h = parse_hyper("forall pi. exists tau. p@pi U q@tau").unwrap();
        let (prefix, m) = h.as_prenex().unwrap();
        assert_eq!(
            prefix,
            vec![
                (Quantifier::Forall, Var::new("pi")),
                (Quantifier::Exists, Var::new("tau"))
            ]
        );
        assert_eq!(*m, Matrix::until(Matrix::atom("p", "pi"), Matrix::atom("q", "tau")));
    }

    #[test]
    fn hyper_position_errors() {
        for text in [
            "forall pi. G (forall tau. p@tau)",
            "X (forall pi. p@pi)",
            "forall pi. p@pi & forall tau. q@tau",
        ] {
            let err = parse_hyper(text).unwrap_err();
            assert!(
                matches!(err, Error::Parse { kind: ParseErrorKind::QuantifierPosition, .. }),
                "{text}: {err}"
            );
        }
        let err = parse_hyper("p@pi").unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::FreeVariable, .. }));
    }

    #[test]
    fn precedence() {
        assert_eq!(team("p | q & r"), Formula::or(p(), Formula::and(q(), Formula::atom("r"))));
        assert_eq!(
            team("p U q U r"),
            Formula::until(p(), Formula::until(q(), Formula::atom("r")))
        );
        assert_eq!(team("X p U q"), Formula::until(Formula::next(p()), q()));
        assert_eq!(
            team("p OR q | r"),
            Formula::ov_or(p(), Formula::or(q(), Formula::atom("r")))
        );
        assert_eq!(team("F p"), Formula::until(Formula::True, p()));
        assert_eq!(team("p ⩔ ∼q"), Formula::ov_or(p(), Formula::bool_neg(q())));
    }

    #[test]
    fn ltl_rejects_team_connectives() {
        assert!(parse_ltl("p OR q").is_err());
        assert!(parse_ltl("~p").is_err());
        assert!(parse_ltl("G p").is_ok());
    }

    #[test]
    fn lexical_errors_carry_spans() {
        match parse_team("p & $").unwrap_err() {
            Error::Parse { kind, span, .. } => {
                assert_eq!(kind, ParseErrorKind::Lexical);
                assert_eq!(span, SourceSpan::new(4, 5));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn print_examples() {
        assert_eq!(print_formula(&Formula::until(p(), q())), "p U q");
        assert_eq!(
            print_formula(&Formula::ov_or(Formula::and(p(), q()), Formula::atom("r"))),
            "(p & q) OR r"
        );
        assert_eq!(
            print_formula(&Formula::bool_neg(Formula::neg_atom("p"))),
            "~(!p)"
        );
        assert_eq!(
            print_hyper(&Hyper::forall(
                "pi",
                Hyper::Matrix(Matrix::and(Matrix::atom("p", "pi"), Matrix::atom("q", "pi")))
            )),
            "forall pi. (p@pi & q@pi)"
        );
        assert_eq!(
            print_formula(&Formula::and(Formula::or(p(), q()), Formula::atom("r"))),
            "(p | q) & r"
        );
        assert_eq!(
            print_hyper(&Hyper::forall("pi", Hyper::Matrix(Matrix::atom("p", "pi")))),
            "forall pi. p@pi"
        );
        let g = Hyper::not(Hyper::forall(
            "pi",
            Hyper::Matrix(Matrix::globally(Matrix::atom("p", "pi"))),
        ));
        assert_eq!(print_hyper(&g), "!(forall pi. G p@pi)");
        assert_eq!(parse_hyper("! forall pi. G p@pi").unwrap(), g);
    }

    #[test]
    fn team_file_examples() {
        let f = parse_team_file("t1 = {p}({q})\n").unwrap();
        let t = &f.entries[0].1;
        assert_eq!(t.stem(), &[letter(["p"])]);
        assert_eq!(t.cycle(), &[letter(["q"])]);

        let f = parse_team_file("# comment\na = ({p})\n\nb = ({p}{p})  # same word\n").unwrap();
        assert_eq!(f.team.len(), 1);
        assert_eq!(f.entries.len(), 2);

        let err = parse_team_file("c = ()").unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::EmptyLoop, .. }));
        assert!(err.to_string().contains("empty loop"));

        let err = parse_team_file("c = {p}(x)").unwrap_err();
        assert!(matches!(err, Error::Parse { kind: ParseErrorKind::UnknownToken, .. }));

        let f = parse_team_file("a = ({p})\na = ({q})\n").unwrap();
        assert_eq!(f.warnings.len(), 1);
        assert_eq!(f.team.len(), 2);

        let f = parse_team_file("e = {}{p,q}({} {r})").unwrap();
        assert_eq!(f.entries[0].1.to_string(), "{}{p,q}({}{r})");
    }

    #[test]
    fn team_file_round_trip() {
        let f = parse_team_file("a = {p}({q})\nb = ({p}{})\nc = ()\n".replace("c = ()\n", "").as_str())
            .unwrap();
        let again = parse_team_file(&print_team_file(&f.team)).unwrap();
        assert_eq!(again.team, f.team);
    }
}
