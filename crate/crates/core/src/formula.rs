//! Formula trees for LTL, the team logics and HyperLTL, together with the
//! fragment classifier and the syntactic maps between the languages.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: &str) -> Self {
                $name(Arc::from(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                $name::new(name)
            }
        }

        impl From<String> for $name {
            fn from(name: String) -> Self {
                $name(Arc::from(name))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// An atomic proposition.
    Prop
);
name_type!(
    /// A trace variable of HyperLTL.
    Var
);

/// Formula of LTL and of the team logics TeamLTL(⩔) / TeamLTL(~).
///
/// Classical negation only occurs as [`Formula::NegAtom`]. `F φ` has no node
/// of its own and is stored as `1 U φ`. `Release` never comes out of the
/// team grammar proper; it exists so that [`dual`] stays inside negation
/// normal form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Prop),
    NegAtom(Prop),
    And(Box<Formula>, Box<Formula>),
    /// Splitting disjunction.
    Or(Box<Formula>, Box<Formula>),
    /// Boolean disjunction ⩔.
    OvOr(Box<Formula>, Box<Formula>),
    /// Boolean negation ~.
    BoolNeg(Box<Formula>),
    Next(Box<Formula>),
    Globally(Box<Formula>),
    Until(Box<Formula>, Box<Formula>),
    Release(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(p: impl Into<Prop>) -> Self {
        Formula::Atom(p.into())
    }

    pub fn neg_atom(p: impl Into<Prop>) -> Self {
        Formula::NegAtom(p.into())
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn ov_or(a: Formula, b: Formula) -> Self {
        Formula::OvOr(Box::new(a), Box::new(b))
    }

    pub fn bool_neg(a: Formula) -> Self {
        Formula::BoolNeg(Box::new(a))
    }

    pub fn next(a: Formula) -> Self {
        Formula::Next(Box::new(a))
    }

    pub fn globally(a: Formula) -> Self {
        Formula::Globally(Box::new(a))
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        Formula::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(a: Formula) -> Self {
        Formula::until(Formula::True, a)
    }

    /// `0 R φ` is stored as `G φ`.
    pub fn release(a: Formula, b: Formula) -> Self {
        match a {
            Formula::False => Formula::globally(b),
            a => Formula::Release(Box::new(a), Box::new(b)),
        }
    }

    /// Conjunction that drops a `1` operand.
    pub fn and_simplified(a: Formula, b: Formula) -> Self {
        match (a, b) {
            (Formula::True, b) => b,
            (a, Formula::True) => a,
            (a, b) => Formula::and(a, b),
        }
    }

    /// Left-nested conjunction; `1` for an empty iterator.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and_simplified)
            .unwrap_or(Formula::True)
    }

    /// Left-nested Boolean disjunction; `None` for an empty iterator.
    pub fn ov_disjunction(items: impl IntoIterator<Item = Formula>) -> Option<Self> {
        items.into_iter().reduce(Formula::ov_or)
    }

    pub fn children(&self) -> Vec<&Formula> {
        use Formula::*;
        match self {
            True | False | Atom(_) | NegAtom(_) => vec![],
            BoolNeg(a) | Next(a) | Globally(a) => vec![a],
            And(a, b) | Or(a, b) | OvOr(a, b) | Until(a, b) | Release(a, b) => vec![a, b],
        }
    }

    /// Leaves have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn props(&self) -> BTreeSet<Prop> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<Prop>) {
        match self {
            Formula::Atom(p) | Formula::NegAtom(p) => {
                out.insert(p.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_props(out)),
        }
    }

    /// No ⩔ and no ~.
    pub fn is_ltl(&self) -> bool {
        match self {
            Formula::OvOr(..) | Formula::BoolNeg(_) => false,
            _ => self.children().iter().all(|c| c.is_ltl()),
        }
    }

    /// TeamLTL(⩔): no ~, and `R` only over pure LTL.
    pub fn is_team_ov(&self) -> bool {
        match self {
            Formula::BoolNeg(_) => false,
            Formula::Release(a, b) => a.is_ltl() && b.is_ltl(),
            _ => self.children().iter().all(|c| c.is_team_ov()),
        }
    }

    /// Left-downward-closed TeamLTL(~): the body of every `G` and the left
    /// side of every `U` are TeamLTL(⩔).
    pub fn is_left_dc(&self) -> bool {
        match self {
            Formula::Globally(a) => a.is_team_ov(),
            Formula::Until(a, b) => a.is_team_ov() && b.is_left_dc(),
            Formula::Release(a, b) => a.is_ltl() && b.is_ltl(),
            _ => self.children().iter().all(|c| c.is_left_dc()),
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Formula::*;
        match self {
            True => f.write_str("True"),
            False => f.write_str("False"),
            Atom(p) => write!(f, "Atom({p})"),
            NegAtom(p) => write!(f, "NegAtom({p})"),
            And(a, b) => write!(f, "And({a:?}, {b:?})"),
            Or(a, b) => write!(f, "Or({a:?}, {b:?})"),
            OvOr(a, b) => write!(f, "OvOr({a:?}, {b:?})"),
            BoolNeg(a) => write!(f, "BoolNeg({a:?})"),
            Next(a) => write!(f, "Next({a:?})"),
            Globally(a) => write!(f, "Globally({a:?})"),
            Until(a, b) => write!(f, "Until({a:?}, {b:?})"),
            Release(a, b) => write!(f, "Release({a:?}, {b:?})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::Forall => "forall",
            Quantifier::Exists => "exists",
        }
    }
}

/// Quantifier-free HyperLTL formula. Negation is unrestricted; `G φ` is
/// sugar for `¬(1 U ¬φ)` and `F φ` for `1 U φ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Matrix {
    True,
    False,
    Atom(Prop, Var),
    Not(Box<Matrix>),
    And(Box<Matrix>, Box<Matrix>),
    Or(Box<Matrix>, Box<Matrix>),
    Next(Box<Matrix>),
    Until(Box<Matrix>, Box<Matrix>),
}

impl Matrix {
    pub fn atom(p: impl Into<Prop>, v: impl Into<Var>) -> Self {
        Matrix::Atom(p.into(), v.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Matrix) -> Self {
        Matrix::Not(Box::new(a))
    }

    pub fn and(a: Matrix, b: Matrix) -> Self {
        Matrix::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Matrix, b: Matrix) -> Self {
        Matrix::Or(Box::new(a), Box::new(b))
    }

    pub fn next(a: Matrix) -> Self {
        Matrix::Next(Box::new(a))
    }

    pub fn until(a: Matrix, b: Matrix) -> Self {
        Matrix::Until(Box::new(a), Box::new(b))
    }

    pub fn finally(a: Matrix) -> Self {
        Matrix::until(Matrix::True, a)
    }

    pub fn globally(a: Matrix) -> Self {
        Matrix::not(Matrix::finally(Matrix::not(a)))
    }

    /// If this is `¬(1 U ¬φ)`, returns `φ`.
    pub fn as_globally(&self) -> Option<&Matrix> {
        match self {
            Matrix::Not(inner) => match inner.as_ref() {
                Matrix::Until(l, r) if **l == Matrix::True => match r.as_ref() {
                    Matrix::Not(body) => Some(body),
                    _ => None,
                },
                _ => None,
            },
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&Matrix> {
        use Matrix::*;
        match self {
            True | False | Atom(..) => vec![],
            Not(a) | Next(a) => vec![a],
            And(a, b) | Or(a, b) | Until(a, b) => vec![a, b],
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Matrix::Atom(_, v) => {
                out.insert(v.clone());
            }
            _ => self.children().iter().for_each(|c| c.collect_vars(out)),
        }
    }

    /// Negation pushed through `¬`, `∧`, `∨` and `X`. It stops in front of
    /// atoms and `U`, since the HyperLTL grammar has no release operator.
    pub fn negated(&self) -> Matrix {
        use Matrix::*;
        match self {
            True => False,
            False => True,
            Not(a) => (**a).clone(),
            And(a, b) => Matrix::or(a.negated(), b.negated()),
            Or(a, b) => Matrix::and(a.negated(), b.negated()),
            Next(a) => Matrix::next(a.negated()),
            Atom(..) | Until(..) => Matrix::not(self.clone()),
        }
    }

    pub fn rename(&self, map: &impl Fn(&Var) -> Var) -> Matrix {
        use Matrix::*;
        match self {
            True => True,
            False => False,
            Atom(p, v) => Atom(p.clone(), map(v)),
            Not(a) => Matrix::not(a.rename(map)),
            And(a, b) => Matrix::and(a.rename(map), b.rename(map)),
            Or(a, b) => Matrix::or(a.rename(map), b.rename(map)),
            Next(a) => Matrix::next(a.rename(map)),
            Until(a, b) => Matrix::until(a.rename(map), b.rename(map)),
        }
    }

    /// Translates to an NNF LTL formula, pushing negations to the atoms and
    /// mapping every atom through `atom`.
    pub fn to_ltl(&self, atom: &impl Fn(&Prop, &Var) -> Prop) -> Formula {
        self.to_ltl_signed(true, atom)
    }

    fn to_ltl_signed(&self, positive: bool, atom: &impl Fn(&Prop, &Var) -> Prop) -> Formula {
        use Matrix::*;
        match (self, positive) {
            (True, true) | (False, false) => Formula::True,
            (True, false) | (False, true) => Formula::False,
            (Atom(p, v), true) => Formula::Atom(atom(p, v)),
            (Atom(p, v), false) => Formula::NegAtom(atom(p, v)),
            (Not(a), _) => a.to_ltl_signed(!positive, atom),
            (And(a, b), true) => Formula::and(a.to_ltl_signed(true, atom), b.to_ltl_signed(true, atom)),
            (And(a, b), false) => Formula::or(a.to_ltl_signed(false, atom), b.to_ltl_signed(false, atom)),
            (Or(a, b), true) => Formula::or(a.to_ltl_signed(true, atom), b.to_ltl_signed(true, atom)),
            (Or(a, b), false) => Formula::and(a.to_ltl_signed(false, atom), b.to_ltl_signed(false, atom)),
            (Next(a), _) => Formula::next(a.to_ltl_signed(positive, atom)),
            (Until(a, b), true) => {
                Formula::until(a.to_ltl_signed(true, atom), b.to_ltl_signed(true, atom))
            }
            (Until(a, b), false) => {
                Formula::release(a.to_ltl_signed(false, atom), b.to_ltl_signed(false, atom))
            }
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Matrix::*;
        match self {
            True => f.write_str("True"),
            False => f.write_str("False"),
            Atom(p, v) => write!(f, "Atom({p}@{v})"),
            Not(a) => write!(f, "Not({a:?})"),
            And(a, b) => write!(f, "And({a:?}, {b:?})"),
            Or(a, b) => write!(f, "Or({a:?}, {b:?})"),
            Next(a) => write!(f, "Next({a:?})"),
            Until(a, b) => write!(f, "Until({a:?}, {b:?})"),
        }
    }
}

/// HyperLTL sentence, possibly a Boolean combination of prenex sentences.
///
/// The body of a quantifier is either another quantifier or a matrix; the
/// closure-level connectives `Not`, `And`, `Or` only appear above quantified
/// sentences. [`Hyper::validate`] checks both layers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Hyper {
    Quant(Quantifier, Var, Box<Hyper>),
    Matrix(Matrix),
    Not(Box<Hyper>),
    And(Box<Hyper>, Box<Hyper>),
    Or(Box<Hyper>, Box<Hyper>),
}

impl Hyper {
    pub fn quant(q: Quantifier, v: impl Into<Var>, body: Hyper) -> Self {
        Hyper::Quant(q, v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<Var>, body: Hyper) -> Self {
        Hyper::quant(Quantifier::Forall, v, body)
    }

    pub fn exists(v: impl Into<Var>, body: Hyper) -> Self {
        Hyper::quant(Quantifier::Exists, v, body)
    }

    /// Prenex sentence from a prefix and a matrix.
    pub fn prenex(prefix: impl IntoIterator<Item = (Quantifier, Var)>, matrix: Matrix) -> Self {
        let prefix: Vec<_> = prefix.into_iter().collect();
        prefix
            .into_iter()
            .rev()
            .fold(Hyper::Matrix(matrix), |body, (q, v)| Hyper::quant(q, v, body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Hyper) -> Self {
        Hyper::Not(Box::new(a))
    }

    pub fn and(a: Hyper, b: Hyper) -> Self {
        Hyper::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Hyper, b: Hyper) -> Self {
        Hyper::Or(Box::new(a), Box::new(b))
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Hyper::Quant(..) => true,
            Hyper::Matrix(_) => false,
            Hyper::Not(a) => a.has_quantifier(),
            Hyper::And(a, b) | Hyper::Or(a, b) => a.has_quantifier() || b.has_quantifier(),
        }
    }

    /// Splits a prenex sentence into its prefix and matrix.
    pub fn as_prenex(&self) -> Option<(Vec<(Quantifier, Var)>, &Matrix)> {
        let mut prefix = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Hyper::Quant(q, v, body) => {
                    prefix.push((*q, v.clone()));
                    cur = body;
                }
                Hyper::Matrix(m) => return Some((prefix, m)),
                _ => return None,
            }
        }
    }

    pub fn is_prenex(&self) -> bool {
        self.as_prenex().is_some()
    }

    /// The maximal prenex subsentences below the closure-level connectives.
    pub fn literals(&self) -> Vec<&Hyper> {
        match self {
            Hyper::Quant(..) | Hyper::Matrix(_) => vec![self],
            Hyper::Not(a) => a.literals(),
            Hyper::And(a, b) | Hyper::Or(a, b) => {
                let mut out = a.literals();
                out.extend(b.literals());
                out
            }
        }
    }

    fn has_closure_negation(&self) -> bool {
        match self {
            Hyper::Not(_) => true,
            Hyper::And(a, b) | Hyper::Or(a, b) => {
                a.has_closure_negation() || b.has_closure_negation()
            }
            Hyper::Quant(..) | Hyper::Matrix(_) => false,
        }
    }

    /// Checks that this is a sentence with well-separated layers.
    pub fn validate(&self) -> Result<()> {
        self.validate_in(&mut Vec::new())
    }

    fn validate_in(&self, bound: &mut Vec<Var>) -> Result<()> {
        match self {
            Hyper::Quant(_, v, body) => {
                if bound.contains(v) {
                    return Err(Error::DoubleBinding(v.clone()));
                }
                if !matches!(body.as_ref(), Hyper::Quant(..) | Hyper::Matrix(_)) {
                    return Err(Error::QuantifierPosition);
                }
                bound.push(v.clone());
                let res = body.validate_in(bound);
                bound.pop();
                res
            }
            Hyper::Matrix(m) => match m.vars().into_iter().find(|v| !bound.contains(v)) {
                Some(v) => Err(Error::FreeVariable(v)),
                None => Ok(()),
            },
            Hyper::Not(a) => {
                if !a.has_quantifier() {
                    return Err(Error::QuantifierPosition);
                }
                a.validate_in(bound)
            }
            Hyper::And(a, b) | Hyper::Or(a, b) => {
                if !self.has_quantifier() {
                    return Err(Error::QuantifierPosition);
                }
                a.validate_in(bound)?;
                b.validate_in(bound)
            }
        }
    }
}

impl fmt::Debug for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::Quant(q, v, body) => write!(f, "{q:?}({v}, {body:?})"),
            Hyper::Matrix(m) => write!(f, "{m:?}"),
            Hyper::Not(a) => write!(f, "ClosureNot({a:?})"),
            Hyper::And(a, b) => write!(f, "ClosureAnd({a:?}, {b:?})"),
            Hyper::Or(a, b) => write!(f, "ClosureOr({a:?}, {b:?})"),
        }
    }
}

/// Syntactic fragments a formula can belong to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FragmentTag {
    Ltl,
    TeamOv,
    TeamLeftDcSim,
    TeamSim,
    HyperQF,
    ForallOne,
    QOne,
    ForallStar,
    Prenex,
    PbcForallStar,
    PbcForallOne,
    BcQOne,
    BcHyper,
}

impl fmt::Display for FragmentTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FragmentTag::Ltl => "LTL",
            FragmentTag::TeamOv => "TeamLTL(OR)",
            FragmentTag::TeamLeftDcSim => "left-dc-TeamLTL(~)",
            FragmentTag::TeamSim => "TeamLTL(~)",
            FragmentTag::HyperQF => "quantifier-free HyperLTL",
            FragmentTag::ForallOne => "forall-HyperLTL",
            FragmentTag::QOne => "Q-HyperLTL",
            FragmentTag::ForallStar => "forall*-HyperLTL",
            FragmentTag::Prenex => "HyperLTL",
            FragmentTag::PbcForallStar => "PBC(forall*-HyperLTL)",
            FragmentTag::PbcForallOne => "PBC(forall-HyperLTL)",
            FragmentTag::BcQOne => "BC(Q-HyperLTL)",
            FragmentTag::BcHyper => "BC(HyperLTL)",
        };
        f.write_str(name)
    }
}

pub type FragmentSet = BTreeSet<FragmentTag>;

pub trait Classify {
    /// Every fragment the formula syntactically belongs to.
    fn classify(&self) -> FragmentSet;
}

impl Classify for Formula {
    fn classify(&self) -> FragmentSet {
        let mut tags = FragmentSet::new();
        tags.insert(FragmentTag::TeamSim);
        if self.is_left_dc() {
            tags.insert(FragmentTag::TeamLeftDcSim);
        }
        if self.is_team_ov() {
            tags.insert(FragmentTag::TeamOv);
        }
        if self.is_ltl() {
            tags.insert(FragmentTag::Ltl);
            // hyperifies to a quantifier-free matrix
            tags.insert(FragmentTag::HyperQF);
        }
        tags
    }
}

impl Hyper {
    fn prenex_tags(&self) -> FragmentSet {
        let mut tags = FragmentSet::new();
        if let Some((prefix, _)) = self.as_prenex() {
            tags.insert(FragmentTag::Prenex);
            if prefix.is_empty() {
                tags.insert(FragmentTag::HyperQF);
            }
            if prefix.iter().all(|(q, _)| *q == Quantifier::Forall) {
                tags.insert(FragmentTag::ForallStar);
            }
            if prefix.len() == 1 {
                tags.insert(FragmentTag::QOne);
                if prefix[0].0 == Quantifier::Forall {
                    tags.insert(FragmentTag::ForallOne);
                }
            }
        }
        tags
    }
}

impl Classify for Hyper {
    fn classify(&self) -> FragmentSet {
        if self.validate().is_err() {
            return FragmentSet::new();
        }
        let mut tags = self.prenex_tags();
        tags.insert(FragmentTag::BcHyper);
        let literals: Vec<FragmentSet> = self.literals().iter().map(|l| l.prenex_tags()).collect();
        let all = |tag: FragmentTag| literals.iter().all(|t| t.contains(&tag));
        let positive = !self.has_closure_negation();
        if all(FragmentTag::QOne) {
            tags.insert(FragmentTag::BcQOne);
        }
        if positive && all(FragmentTag::ForallOne) {
            tags.insert(FragmentTag::PbcForallOne);
        }
        if positive && all(FragmentTag::ForallStar) {
            tags.insert(FragmentTag::PbcForallStar);
        }
        tags
    }
}

fn require_ltl(a: &Formula) -> Result<()> {
    if a.is_ltl() {
        Ok(())
    } else {
        Err(Error::fragment("expected a pure LTL formula"))
    }
}

/// Negation normal form of `¬a`.
pub fn dual(a: &Formula) -> Result<Formula> {
    require_ltl(a)?;
    Ok(dual_unchecked(a))
}

fn dual_unchecked(a: &Formula) -> Formula {
    use Formula::*;
    match a {
        True => False,
        False => True,
        Atom(p) => NegAtom(p.clone()),
        NegAtom(p) => Atom(p.clone()),
        And(x, y) => Formula::or(dual_unchecked(x), dual_unchecked(y)),
        Or(x, y) => Formula::and(dual_unchecked(x), dual_unchecked(y)),
        Next(x) => Formula::next(dual_unchecked(x)),
        Globally(x) => Formula::finally(dual_unchecked(x)),
        Until(x, y) => Formula::release(dual_unchecked(x), dual_unchecked(y)),
        Release(x, y) => Formula::until(dual_unchecked(x), dual_unchecked(y)),
        OvOr(..) | BoolNeg(_) => unreachable!("checked by require_ltl"),
    }
}

/// Replaces every proposition `p` by `p@v`.
pub fn hyperify(a: &Formula, v: &Var) -> Result<Matrix> {
    require_ltl(a)?;
    Ok(hyperify_unchecked(a, v))
}

fn hyperify_unchecked(a: &Formula, v: &Var) -> Matrix {
    use Formula::*;
    let h = |x: &Formula| hyperify_unchecked(x, v);
    match a {
        True => Matrix::True,
        False => Matrix::False,
        Atom(p) => Matrix::Atom(p.clone(), v.clone()),
        NegAtom(p) => Matrix::not(Matrix::Atom(p.clone(), v.clone())),
        And(x, y) => Matrix::and(h(x), h(y)),
        Or(x, y) => Matrix::or(h(x), h(y)),
        Next(x) => Matrix::next(h(x)),
        Globally(x) => Matrix::globally(h(x)),
        Until(x, y) => Matrix::until(h(x), h(y)),
        Release(x, y) => Matrix::not(Matrix::until(Matrix::not(h(x)), Matrix::not(h(y)))),
        OvOr(..) | BoolNeg(_) => unreachable!("checked by require_ltl"),
    }
}

/// Inverse of [`hyperify`]: pushes negation to the atoms and strips `v`.
pub fn dehyperify(m: &Matrix, v: &Var) -> Result<Formula> {
    if let Some(other) = m.vars().into_iter().find(|w| w != v) {
        return Err(Error::fragment(format!(
            "matrix mentions trace variable `{other}` besides `{v}`"
        )));
    }
    Ok(m.to_ltl(&|p, _| p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn dual_examples() {
        let a = Formula::and(p(), Formula::next(q()));
        let expected = Formula::or(Formula::neg_atom("p"), Formula::next(Formula::neg_atom("q")));
        assert_eq!(dual(&a).unwrap(), expected);
        assert_eq!(dual(&Formula::True).unwrap(), Formula::False);
        let u = Formula::until(p(), q());
        assert_eq!(
            dual(&u).unwrap(),
            Formula::release(Formula::neg_atom("p"), Formula::neg_atom("q"))
        );
        assert!(dual(&Formula::ov_or(p(), q())).is_err());
    }

    #[test]
    fn dual_of_globally_and_finally_are_each_other() {
        let g = Formula::globally(p());
        let f = Formula::finally(Formula::neg_atom("p"));
        assert_eq!(dual(&g).unwrap(), f);
        assert_eq!(dual(&f).unwrap(), g);
    }

    #[test]
    fn release_with_false_left_is_globally() {
        assert_eq!(Formula::release(Formula::False, p()), Formula::globally(p()));
    }

    #[test]
    fn classify_examples() {
        let g = Formula::globally(p());
        let tags = g.classify();
        for t in [
            FragmentTag::Ltl,
            FragmentTag::TeamOv,
            FragmentTag::TeamLeftDcSim,
            FragmentTag::TeamSim,
            FragmentTag::HyperQF,
        ] {
            assert!(tags.contains(&t), "{t:?}");
        }

        let neg_left = Formula::until(Formula::bool_neg(p()), q());
        let tags = neg_left.classify();
        assert!(tags.contains(&FragmentTag::TeamSim));
        assert!(!tags.contains(&FragmentTag::TeamLeftDcSim));

        let f = Formula::and(
            Formula::globally(Formula::ov_or(p(), q())),
            Formula::bool_neg(Formula::globally(q())),
        );
        let tags = f.classify();
        assert!(tags.contains(&FragmentTag::TeamLeftDcSim));
        assert!(!tags.contains(&FragmentTag::TeamOv));
    }

    #[test]
    fn negation_under_globally_is_not_left_dc() {
        let f = Formula::globally(Formula::bool_neg(p()));
        assert!(!f.is_left_dc());
        let f = Formula::until(p(), Formula::bool_neg(q()));
        assert!(f.is_left_dc());
    }

    #[test]
    fn hyperify_examples() {
        let pi = Var::new("pi");
        let a = Formula::and(p(), Formula::next(q()));
        assert_eq!(
            hyperify(&a, &pi).unwrap(),
            Matrix::and(Matrix::atom("p", "pi"), Matrix::next(Matrix::atom("q", "pi")))
        );
        assert_eq!(hyperify(&Formula::True, &pi).unwrap(), Matrix::True);
        let sigma = Var::new("sigma");
        assert_eq!(
            hyperify(&Formula::until(p(), q()), &sigma).unwrap(),
            Matrix::until(Matrix::atom("p", "sigma"), Matrix::atom("q", "sigma"))
        );
    }

    #[test]
    fn dehyperify_examples() {
        let pi = Var::new("pi");
        let m = Matrix::not(Matrix::atom("p", "pi"));
        assert_eq!(dehyperify(&m, &pi).unwrap(), Formula::neg_atom("p"));

        let m = Matrix::not(Matrix::until(Matrix::atom("p", "pi"), Matrix::atom("q", "pi")));
        assert_eq!(
            dehyperify(&m, &pi).unwrap(),
            dual(&Formula::until(p(), q())).unwrap()
        );

        let m = Matrix::or(Matrix::atom("p", "pi"), Matrix::atom("q", "pi"));
        assert_eq!(dehyperify(&m, &pi).unwrap(), Formula::or(p(), q()));

        let m = Matrix::or(Matrix::atom("p", "pi"), Matrix::atom("q", "tau"));
        assert!(dehyperify(&m, &pi).is_err());
    }

    #[test]
    fn round_trips_on_globally_and_release() {
        let pi = Var::new("pi");
        for a in [
            Formula::globally(p()),
            Formula::release(p(), Formula::next(q())),
            Formula::finally(Formula::globally(Formula::neg_atom("q"))),
        ] {
            assert_eq!(dehyperify(&hyperify(&a, &pi).unwrap(), &pi).unwrap(), a);
            assert_eq!(dual(&dual(&a).unwrap()).unwrap(), a);
        }
    }

    #[test]
    fn validate_rejects_open_and_interleaved() {
        let open = Hyper::Matrix(Matrix::atom("p", "pi"));
        assert!(matches!(open.validate(), Err(Error::FreeVariable(_))));

        let twice = Hyper::forall("pi", Hyper::forall("pi", Hyper::Matrix(Matrix::True)));
        assert!(matches!(twice.validate(), Err(Error::DoubleBinding(_))));

        let inner = Hyper::forall(
            "pi",
            Hyper::and(
                Hyper::Matrix(Matrix::atom("p", "pi")),
                Hyper::exists("tau", Hyper::Matrix(Matrix::atom("q", "tau"))),
            ),
        );
        assert!(matches!(inner.validate(), Err(Error::QuantifierPosition)));
    }

    #[test]
    fn classify_hyper() {
        let a = Hyper::forall("pi", Hyper::Matrix(Matrix::atom("p", "pi")));
        let b = Hyper::exists("pi", Hyper::Matrix(Matrix::atom("q", "pi")));
        let tags = a.classify();
        assert!(tags.contains(&FragmentTag::ForallOne));
        assert!(tags.contains(&FragmentTag::PbcForallOne));
        let tags = Hyper::or(a.clone(), b.clone()).classify();
        assert!(tags.contains(&FragmentTag::BcQOne));
        assert!(!tags.contains(&FragmentTag::PbcForallOne));
        let tags = Hyper::not(a).classify();
        assert!(tags.contains(&FragmentTag::BcQOne));
        assert!(!tags.contains(&FragmentTag::PbcForallStar));
    }
}
