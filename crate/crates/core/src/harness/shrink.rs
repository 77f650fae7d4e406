//! Greedy shrinking of failing cases.

use crate::formula::{Formula, Hyper, Matrix};
use crate::traces::{LassoTrace, Team};

use super::Subject;

/// Smaller variants of `f`: every child, atoms replaced by `1`, and `f` with
/// one subtree replaced by one of its smaller variants.
pub fn formula_candidates(f: &Formula) -> Vec<Formula> {
    let mut out: Vec<Formula> = f.children().into_iter().cloned().collect();
    let rebuild1 = |g: fn(Formula) -> Formula, a: &Formula| -> Vec<Formula> {
        formula_candidates(a).into_iter().map(g).collect()
    };
    let rebuild2 = |g: fn(Formula, Formula) -> Formula, a: &Formula, b: &Formula| -> Vec<Formula> {
        let mut v: Vec<Formula> = formula_candidates(a)
            .into_iter()
            .map(|x| g(x, b.clone()))
            .collect();
        v.extend(formula_candidates(b).into_iter().map(|y| g(a.clone(), y)));
        v
    };
    out.extend(match f {
        Formula::True | Formula::False | Formula::NegAtom(_) => Vec::new(),
        Formula::Atom(_) => vec![Formula::True],
        Formula::And(a, b) => rebuild2(Formula::and, a, b),
        Formula::Or(a, b) => rebuild2(Formula::or, a, b),
        Formula::OvOr(a, b) => rebuild2(Formula::ov_or, a, b),
        Formula::Until(a, b) => rebuild2(Formula::until, a, b),
        Formula::Release(a, b) => rebuild2(Formula::release, a, b),
        Formula::BoolNeg(a) => rebuild1(Formula::bool_neg, a),
        Formula::Next(a) => rebuild1(Formula::next, a),
        Formula::Globally(a) => rebuild1(Formula::globally, a),
    });
    out
}

fn matrix_candidates(m: &Matrix) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = m.children().into_iter().cloned().collect();
    let rebuild2 = |g: fn(Matrix, Matrix) -> Matrix, a: &Matrix, b: &Matrix| -> Vec<Matrix> {
        let mut v: Vec<Matrix> = matrix_candidates(a)
            .into_iter()
            .map(|x| g(x, b.clone()))
            .collect();
        v.extend(matrix_candidates(b).into_iter().map(|y| g(a.clone(), y)));
        v
    };
    out.extend(match m {
        Matrix::True | Matrix::False | Matrix::Atom(..) => Vec::new(),
        Matrix::Not(a) => matrix_candidates(a).into_iter().map(Matrix::not).collect(),
        Matrix::Next(a) => matrix_candidates(a).into_iter().map(Matrix::next).collect(),
        Matrix::And(a, b) => rebuild2(Matrix::and, a, b),
        Matrix::Or(a, b) => rebuild2(Matrix::or, a, b),
        Matrix::Until(a, b) => rebuild2(Matrix::until, a, b),
    });
    out
}

/// Smaller sentences: closure operands, and sentences with a smaller matrix.
pub fn hyper_candidates(s: &Hyper) -> Vec<Hyper> {
    match s {
        Hyper::Quant(q, v, body) => hyper_candidates(body)
            .into_iter()
            .map(|b| Hyper::quant(*q, v.clone(), b))
            .collect(),
        Hyper::Matrix(m) => matrix_candidates(m).into_iter().map(Hyper::Matrix).collect(),
        Hyper::Not(a) => {
            let mut out = vec![(**a).clone()];
            out.extend(hyper_candidates(a).into_iter().map(Hyper::not));
            out
        }
        Hyper::And(a, b) | Hyper::Or(a, b) => {
            let g = if matches!(s, Hyper::And(..)) { Hyper::and } else { Hyper::or };
            let mut out = vec![(**a).clone(), (**b).clone()];
            out.extend(hyper_candidates(a).into_iter().map(|x| g(x, (**b).clone())));
            out.extend(hyper_candidates(b).into_iter().map(|y| g((**a).clone(), y)));
            out
        }
    }
}

fn lasso_candidates(t: &LassoTrace) -> Vec<LassoTrace> {
    let mut out = Vec::new();
    let (stem, cycle) = (t.stem(), t.cycle());
    for i in 0..stem.len() {
        let mut s = stem.to_vec();
        s.remove(i);
        out.extend(LassoTrace::new(s, cycle.to_vec()));
    }
    if cycle.len() > 1 {
        for i in 0..cycle.len() {
            let mut c = cycle.to_vec();
            c.remove(i);
            out.extend(LassoTrace::new(stem.to_vec(), c));
        }
    }
    for (i, letter) in stem.iter().chain(cycle).enumerate() {
        for p in letter {
            let mut s = stem.to_vec();
            let mut c = cycle.to_vec();
            let target = if i < s.len() { &mut s[i] } else { &mut c[i - stem.len()] };
            target.remove(p);
            out.extend(LassoTrace::new(s, c));
        }
    }
    out
}

/// Teams with one trace removed or one trace made smaller.
pub fn team_candidates(team: &Team) -> Vec<Team> {
    let mut out = Vec::new();
    for t in team {
        out.push(team.without(t));
    }
    for t in team {
        for smaller in lasso_candidates(t) {
            let mut next = team.without(t);
            next.insert(smaller);
            out.push(next);
        }
    }
    out
}

fn subject_candidates(s: &Subject) -> Vec<Subject> {
    match s {
        Subject::Team(f) => formula_candidates(f).into_iter().map(Subject::Team).collect(),
        Subject::Hyper(h) => hyper_candidates(h)
            .into_iter()
            .filter(|c| c.validate().is_ok())
            .map(Subject::Hyper)
            .collect(),
    }
}

/// Repeatedly takes the first smaller variant that still fails, up to
/// `budget` re-checks.
pub fn shrink(
    subject: Subject,
    team: Team,
    budget: usize,
    mut fails: impl FnMut(&Subject, &Team) -> bool,
) -> (Subject, Team) {
    let (mut subject, mut team) = (subject, team);
    let mut spent = 0;
    'outer: loop {
        for c in subject_candidates(&subject) {
            if spent == budget {
                break 'outer;
            }
            spent += 1;
            if fails(&c, &team) {
                subject = c;
                continue 'outer;
            }
        }
        for c in team_candidates(&team) {
            if spent == budget {
                break 'outer;
            }
            spent += 1;
            if fails(&subject, &c) {
                team = c;
                continue 'outer;
            }
        }
        break;
    }
    (subject, team)
}
