use std::collections::BTreeMap;

use num_integer::Integer;
use proptest::prelude::*;
use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use teamhyper::eval_classic::{eval_hyper, eval_ltl};
use teamhyper::eval_team::{eval_team_nf, Oracle};
use teamhyper::formula::{dehyperify, dual, hyperify};
use teamhyper::harness::enumerate::{all_formulas, all_lassos, all_lassos_of_len, all_teams, FormulaGrammar};
use teamhyper::harness::gen::{
    self, case_rng, gen_matrix, gen_team_formula, root_distribution, Connective, GenConfig, TeamKind,
};
use teamhyper::syntax::{parse_hyper, parse_ltl, parse_team};
use teamhyper::traces::{product, product_prop};
use teamhyper::transform::{prenex_pbc, teamov_to_pbc, to_ov_dnf, to_quasi_flat, TransformConfig};
use teamhyper::{Classify, FragmentTag, Formula, Hyper, LassoTrace, Letter, Matrix, Prop, Quantifier, Team, Var};

fn cfg() -> GenConfig {
    GenConfig::default()
}

#[test]
fn printing_round_trips_in_every_language() {
    let cfg = GenConfig {
        max_depth: 5,
        ap_size: 3,
        ..GenConfig::default()
    };
    for i in 0..10_000 {
        let mut rng = case_rng(1, i);
        let a = gen::gen_ltl(&mut rng, &cfg);
        assert_eq!(parse_ltl(&a.to_string()).unwrap(), a, "{a}");
        let f = gen::gen_teamsim(&mut rng, &cfg);
        assert_eq!(parse_team(&f.to_string()).unwrap(), f, "{f}");
        let s = gen::gen_hyper_bc(&mut rng, &cfg);
        assert_eq!(parse_hyper(&s.to_string()).unwrap(), s, "{s}");
    }
}

/// Counts of root connectives; `F` and `G` can also arise from `U` and `R`
/// with a constant operand, so those pairs are pooled.
fn pooled(c: Connective) -> Connective {
    match c {
        Connective::Finally => Connective::Until,
        Connective::Release => Connective::Globally,
        c => c,
    }
}

#[test]
fn root_connectives_follow_the_weights() {
    const SAMPLES: u64 = 10_000;
    let cfg = cfg();
    for kind in [TeamKind::Ltl, TeamKind::TeamOv, TeamKind::LeftDc, TeamKind::TeamSim] {
        let dist = root_distribution(kind, cfg.max_depth, &cfg.weights);
        let mut seen: BTreeMap<String, u64> = BTreeMap::new();
        let mut raw: BTreeMap<String, u64> = BTreeMap::new();
        for i in 0..SAMPLES {
            let f = gen_team_formula(&mut case_rng(2, i), &cfg, kind, cfg.max_depth);
            let c = Connective::of(&f);
            *raw.entry(format!("{c:?}")).or_default() += 1;
            *seen.entry(format!("{:?}", pooled(c))).or_default() += 1;
        }
        // every connective of the fragment shows up
        for &(c, _) in &dist {
            assert!(raw.contains_key(&format!("{c:?}")), "{kind:?} never emitted {c:?}");
        }
        let mut expected: BTreeMap<String, f64> = BTreeMap::new();
        let total: u32 = dist.iter().map(|&(_, w)| w).sum();
        for &(c, w) in &dist {
            *expected.entry(format!("{:?}", pooled(c))).or_default() +=
                SAMPLES as f64 * f64::from(w) / f64::from(total);
        }
        let stat: f64 = expected
            .iter()
            .map(|(c, e)| {
                let o = *seen.get(c).unwrap_or(&0) as f64;
                (o - e).powi(2) / e
            })
            .sum();
        let df = (expected.len() - 1) as f64;
        let p = 1.0 - ChiSquared::new(df).unwrap().cdf(stat);
        assert!(p > 1e-4, "{kind:?}: chi-squared {stat:.1} on {df} df, p = {p:.2e}");
    }
}

#[test]
fn quantifier_duality() {
    let cfg = cfg();
    let pi = Var::new("pi");
    for i in 0..1_000 {
        let mut rng = case_rng(3, i);
        let m = gen_matrix(&mut rng, &cfg, std::slice::from_ref(&pi), 3);
        let q = if rng.gen_bool(0.5) {
            Quantifier::Forall
        } else {
            Quantifier::Exists
        };
        let team = gen::gen_team(&mut rng, &cfg);
        let lhs = Hyper::not(Hyper::quant(q, pi.clone(), Hyper::Matrix(m.clone())));
        let rhs = Hyper::quant(q.dual(), pi.clone(), Hyper::Matrix(Matrix::not(m)));
        assert_eq!(eval_hyper(&team, &lhs).unwrap(), eval_hyper(&team, &rhs).unwrap(), "{lhs} on {team}");
    }
}

#[test]
fn corollary_prenex_of_translation_is_universal() {
    let cfg = GenConfig {
        max_depth: 3,
        ..GenConfig::default()
    };
    for i in 0..500 {
        let mut rng = case_rng(4, i);
        let phi = gen::gen_teamov(&mut rng, &cfg);
        let team = gen::gen_team(&mut rng, &cfg);
        let s = prenex_pbc(&teamov_to_pbc(&phi, &TransformConfig::default()).unwrap()).unwrap();
        let tags = s.classify();
        assert!(tags.contains(&FragmentTag::ForallStar), "{s}: {tags:?}");
        assert_eq!(eval_hyper(&team, &s).unwrap(), eval_team_nf(&team, &phi).unwrap(), "{phi} on {team}");
    }
}

fn assert_bound_is_exact(formulas: &[Formula], lassos: Vec<LassoTrace>, slack: usize) {
    let teams = all_teams(&lassos, 2);
    let mut exact = Oracle::new(lassos.clone()).unwrap();
    let mut loose = Oracle::new(lassos).unwrap().with_slack(slack);
    for phi in formulas {
        let a = exact.eval_many(&teams, phi).unwrap();
        let b = loose.eval_many(&teams, phi).unwrap();
        if let Some(i) = (0..teams.len()).find(|&i| a[i] != b[i]) {
            panic!("{phi} on {}: bounded {}, with slack {}", teams[i], a[i], b[i]);
        }
    }
}

#[test]
fn oracle_bound_on_positions_loses_nothing() {
    let leaves = [
        Formula::atom("p"),
        Formula::atom("q"),
        Formula::neg_atom("p"),
        Formula::neg_atom("q"),
    ];
    let formulas: Vec<Formula> = all_formulas(&leaves, FormulaGrammar::TEAM_SIM_OV, 3)
        .into_iter()
        .enumerate()
        .filter(|(i, f)| f.depth() <= 2 || i % 41 == 0)
        .map(|(_, f)| f)
        .collect();
    let ap = [Prop::new("p"), Prop::new("q")];
    assert_bound_is_exact(&formulas, all_lassos(&ap, 1, 2), 2);
    let shallow: Vec<Formula> = formulas.into_iter().filter(|f| f.depth() <= 2).collect();
    assert_bound_is_exact(&shallow, all_lassos_of_len(&ap, 3), 3);
}

fn arb_word(ap: usize, max_len: usize, min_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    let letter = proptest::collection::btree_set(0..ap, 0..=ap)
        .prop_map(|s| s.into_iter().map(|i| Prop::from(format!("a{i}"))).collect::<Letter>());
    proptest::collection::vec(letter, min_len..=max_len)
}

fn unroll_raw(stem: &[Letter], cycle: &[Letter], n: usize) -> Vec<Letter> {
    (0..n)
        .map(|k| {
            if k < stem.len() {
                stem[k].clone()
            } else {
                cycle[(k - stem.len()) % cycle.len()].clone()
            }
        })
        .collect()
}

fn arb_lasso() -> impl Strategy<Value = LassoTrace> {
    (arb_word(2, 3, 0), arb_word(2, 3, 1)).prop_map(|(s, c)| LassoTrace::new(s, c).unwrap())
}

fn seed_team(seed: u64) -> Team {
    gen::gen_team(&mut case_rng(seed, 0), &cfg())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lasso_equality_matches_unrolling(
        s1 in arb_word(1, 3, 0), c1 in arb_word(1, 4, 1),
        s2 in arb_word(1, 3, 0), c2 in arb_word(1, 4, 1),
    ) {
        let n = s1.len().max(s2.len()) + c1.len().lcm(&c2.len());
        let same = unroll_raw(&s1, &c1, n) == unroll_raw(&s2, &c2, n);
        let t1 = LassoTrace::new(s1.clone(), c1.clone()).unwrap();
        let t2 = LassoTrace::new(s2, c2).unwrap();
        prop_assert_eq!(t1 == t2, same);
        // canonical forms denote the same word
        prop_assert_eq!(t1.unroll(n), unroll_raw(&s1, &c1, n));
    }

    #[test]
    fn suffixes_are_periodic(t in arb_lasso(), i in 0usize..6) {
        let i = i + t.stem().len();
        prop_assert_eq!(t.suffix(i + t.cycle().len()), t.suffix(i));
    }

    #[test]
    fn product_projects(t1 in arb_lasso(), t2 in arb_lasso()) {
        let (pi, tau) = (Var::new("pi"), Var::new("tau"));
        let assignment = BTreeMap::from([(pi.clone(), t1.clone()), (tau.clone(), t2.clone())]);
        let prod = product(&assignment);
        let bound = t1.stem().len().max(t2.stem().len()) + 2 * t1.cycle().len().lcm(&t2.cycle().len());
        for k in 0..=bound {
            for p in ["a0", "a1"].map(Prop::new) {
                prop_assert_eq!(prod.letter(k).contains(&product_prop(&p, &pi)), t1.letter(k).contains(&p));
                prop_assert_eq!(prod.letter(k).contains(&product_prop(&p, &tau)), t2.letter(k).contains(&p));
            }
        }
    }

    #[test]
    fn shifted_loops_denote_the_same_trace(stem in arb_word(2, 2, 0), cycle in arb_word(2, 3, 1), k in 0usize..4, reps in 1usize..3) {
        let t = LassoTrace::new(stem.clone(), cycle.clone()).unwrap();
        // unroll k letters into the stem and repeat the rotated loop
        let mut longer = stem;
        longer.extend((0..k).map(|j| cycle[j % cycle.len()].clone()));
        let rotated: Vec<Letter> = (0..cycle.len() * reps).map(|j| cycle[(j + k) % cycle.len()].clone()).collect();
        prop_assert_eq!(LassoTrace::new(longer, rotated).unwrap(), t);
    }

    #[test]
    fn dual_and_hyperify_round_trip(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 0);
        let a = gen::gen_ltl(&mut rng, &cfg());
        let d = dual(&a).unwrap();
        prop_assert_eq!(&dual(&d).unwrap(), &a);
        let pi = Var::new("pi");
        prop_assert_eq!(&dehyperify(&hyperify(&a, &pi).unwrap(), &pi).unwrap(), &a);
        let t = gen::gen_lasso(&mut rng, &cfg());
        prop_assert_ne!(eval_ltl(&t, &a).unwrap(), eval_ltl(&t, &d).unwrap());
    }

    #[test]
    fn classify_is_monotone(seed in any::<u64>()) {
        let f = gen::gen_teamsim(&mut case_rng(seed, 0), &cfg());
        let tags = f.classify();
        let chain = [FragmentTag::Ltl, FragmentTag::TeamOv, FragmentTag::TeamLeftDcSim, FragmentTag::TeamSim];
        for w in chain.windows(2) {
            prop_assert!(!tags.contains(&w[0]) || tags.contains(&w[1]), "{} {:?}", f, tags);
        }
        prop_assert!(tags.contains(&FragmentTag::TeamSim));
    }

    #[test]
    fn normal_forms_are_nnf_and_ltl(seed in any::<u64>()) {
        let f = gen::gen_leftdc(&mut case_rng(seed, 0), &cfg());
        let qf = to_quasi_flat(&f, &TransformConfig::default()).unwrap();
        for c in qf.conjuncts() {
            prop_assert!(c.alpha.is_ltl());
            prop_assert!(c.betas.iter().all(Formula::is_ltl));
        }
        let out = qf.to_formula();
        prop_assert_eq!(parse_team(&out.to_string()).unwrap(), out.clone());
        if f.is_team_ov() {
            let dnf = to_ov_dnf(&f, &TransformConfig::default()).unwrap();
            prop_assert!(dnf.disjuncts().iter().all(Formula::is_ltl));
            prop_assert!(dnf.to_formula().is_team_ov());
        }
    }

    #[test]
    fn teamov_holds_on_the_empty_team(seed in any::<u64>()) {
        let f = gen::gen_teamov(&mut case_rng(seed, 0), &cfg());
        prop_assert!(eval_team_nf(&Team::new(), &f).unwrap());
    }

    #[test]
    fn oracle_agrees_with_normal_forms(seed in any::<u64>()) {
        let cfg = GenConfig { max_depth: 3, ..cfg() };
        let mut rng = case_rng(seed, 0);
        let f = gen::gen_leftdc(&mut rng, &cfg);
        let team = gen::gen_team(&mut rng, &cfg);
        let mut oracle = Oracle::new(team.iter().cloned()).unwrap();
        prop_assert_eq!(oracle.eval(&team, &f).unwrap(), eval_team_nf(&team, &f).unwrap(), "{} on {}", f, team);
    }

    #[test]
    fn generated_teams_respect_bounds(seed in any::<u64>()) {
        let team = seed_team(seed);
        prop_assert!(team.len() <= cfg().max_team);
        for t in &team {
            prop_assert!(t.stem().len() <= cfg().max_stem && t.cycle().len() <= cfg().max_period);
        }
    }
}
