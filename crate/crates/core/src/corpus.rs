//! Bundled example knowledge bases, a seeded random generator, and the
//! self-test behind `recaft selftest`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aft::{enumerate_stable_fixpoints, least_stable_fixpoint, EnumerateOptions};
use crate::atoms::AtomSet;
use crate::entail::Formula;
use crate::kb::{KnowledgeBase, Literal, NamedRule};
use crate::lattice::{project_14, Bi};
use crate::phi::{FilterStrategy, Phi, PhiConfig};
use crate::textio::parse_kb;

pub const EX1: &str = include_str!("../fixtures/ex1.kb");
pub const EX1_RULE4: &str = include_str!("../fixtures/ex1_rule4.kb");
pub const EX3: &str = include_str!("../fixtures/ex3.kb");
pub const LOOKAHEAD: &str = include_str!("../fixtures/lookahead.kb");

/// `(name, source)` for every bundled example.
pub const GOLDEN: [(&str, &str); 4] = [
    ("ex1", EX1),
    ("ex1_rule4", EX1_RULE4),
    ("ex3", EX3),
    ("lookahead", LOOKAHEAD),
];

pub fn golden(name: &str) -> KnowledgeBase {
    let (_, src) = GOLDEN
        .iter()
        .find(|(n, _)| *n == name)
        .unwrap_or_else(|| panic!("no bundled example `{name}`"));
    parse_kb(src).expect("bundled examples parse")
}

/// Shape limits for [`random_kb`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomKbConfig {
    /// Atoms in the whole signature, rule and ontology atoms together.
    pub max_atoms: usize,
    pub max_rules: usize,
    pub max_clauses: usize,
    /// Literals per ontology clause.
    pub max_clause_len: usize,
    /// Literals per rule body.
    pub max_body: usize,
}

impl Default for RandomKbConfig {
    fn default() -> Self {
        Self {
            max_atoms: 8,
            max_rules: 12,
            max_clauses: 4,
            max_clause_len: 3,
            max_body: 3,
        }
    }
}

/// A random ground knowledge base whose ontology is a conjunction of clauses.
pub fn random_kb<R: Rng>(rng: &mut R, cfg: &RandomKbConfig) -> KnowledgeBase {
    let n = rng.gen_range(2..=cfg.max_atoms);
    let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let mut rules = Vec::new();
    for _ in 0..rng.gen_range(1..=cfg.max_rules) {
        let head = names.choose(rng).expect("non-empty").clone();
        let body = (0..rng.gen_range(0..=cfg.max_body))
            .map(|_| Literal {
                atom: names.choose(rng).expect("non-empty").clone(),
                negated: rng.gen_bool(0.5),
            })
            .collect();
        rules.push(NamedRule { head, body });
    }
    let mut ontology = Vec::new();
    for _ in 0..rng.gen_range(0..=cfg.max_clauses) {
        let clause = (0..rng.gen_range(1..=cfg.max_clause_len))
            .map(|_| {
                let a = Formula::Atom(names.choose(rng).expect("non-empty").clone());
                if rng.gen_bool(0.5) {
                    Formula::not(a)
                } else {
                    a
                }
            })
            .reduce(Formula::or)
            .expect("clauses have a literal");
        ontology.push(clause);
    }
    KnowledgeBase::new(ontology, rules)
}

/// `count` knowledge bases from a fixed seed.
pub fn random_corpus(seed: u64, count: usize, cfg: &RandomKbConfig) -> Vec<KnowledgeBase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_kb(&mut rng, cfg)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn sets(kb: &KnowledgeBase, t: &[&str], p: &[&str]) -> Bi<AtomSet> {
    Bi::new(
        kb.ka_set(t).expect("known atoms"),
        kb.ka_set(p).expect("known atoms"),
    )
}

fn show(kb: &KnowledgeBase, ap: &Bi<AtomSet>) -> String {
    format!("({}, {})", kb.show(&ap.first), kb.show(&ap.second))
}

fn lfp_check(name: &str, kb: &KnowledgeBase, cfg: PhiConfig, want: Bi<AtomSet>) -> SelfCheck {
    let phi = Phi::new(kb, cfg);
    match least_stable_fixpoint(&phi) {
        Ok((fix, _)) => {
            let got = project_14(&fix);
            SelfCheck {
                name: name.to_owned(),
                passed: got == want,
                detail: format!("got {}, expected {}", show(kb, &got), show(kb, &want)),
            }
        }
        Err(e) => SelfCheck {
            name: name.to_owned(),
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn models_check(
    name: &str,
    kb: &KnowledgeBase,
    cfg: PhiConfig,
    want: &[(Bi<AtomSet>, bool)],
) -> SelfCheck {
    let phi = Phi::new(kb, cfg);
    let found = match enumerate_stable_fixpoints(&phi, EnumerateOptions::default()) {
        Ok(f) => f,
        Err(e) => {
            return SelfCheck {
                name: name.to_owned(),
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let mut problems = Vec::new();
    for (ap, model) in want {
        if !found.contains(ap) {
            problems.push(format!("{} missing", show(kb, ap)));
        } else if phi.check_model(&ap.first, &ap.second).is_model() != *model {
            problems.push(format!("{} model verdict differs", show(kb, ap)));
        }
    }
    SelfCheck {
        name: name.to_owned(),
        passed: problems.is_empty(),
        detail: if problems.is_empty() {
            format!("{} stable fixpoints", found.len())
        } else {
            problems.join("; ")
        },
    }
}

/// Recomputes hand-verified results on the bundled examples.
pub fn selftest() -> Vec<SelfCheck> {
    let ex1 = golden("ex1");
    let ex1r4 = golden("ex1_rule4");
    let ex3 = golden("ex3");
    let la = golden("lookahead");
    let single = PhiConfig::default();
    let powerset = PhiConfig::with_filter(FilterStrategy::Powerset);

    let ex1r4_found = Phi::new(&ex1r4, single);
    let ex1r4_all = enumerate_stable_fixpoints(&ex1r4_found, EnumerateOptions::default());
    let want_r4 = vec![
        sets(&ex1r4, &[], &["a", "a'", "b"]),
        sets(&ex1r4, &["a", "b"], &["a", "b"]),
        sets(&ex1r4, &["a'"], &["a'"]),
    ];
    let mut want_r4_sorted = want_r4.clone();
    want_r4_sorted.sort();
    let r4_models: Vec<bool> = want_r4
        .iter()
        .map(|ap| ex1r4_found.check_model(&ap.first, &ap.second).is_model())
        .collect();

    vec![
        lfp_check(
            "ex1 least stable fixpoint",
            &ex1,
            single,
            sets(&ex1, &["a'"], &["a'"]),
        ),
        lfp_check(
            "ex1 legacy baseline",
            &ex1,
            PhiConfig::legacy(),
            sets(&ex1, &[], &["a", "a'"]),
        ),
        SelfCheck {
            name: "ex1_rule4 stable fixpoints".into(),
            passed: ex1r4_all.as_ref().is_ok_and(|f| *f == want_r4_sorted)
                && r4_models == [false, true, true],
            detail: format!(
                "{} found, model flags {:?}",
                ex1r4_all.map_or(0, |f| f.len()),
                r4_models
            ),
        },
        lfp_check(
            "ex3 least stable fixpoint (powerset)",
            &ex3,
            powerset,
            sets(&ex3, &[], &["b", "b'", "c", "c'", "x", "y"]),
        ),
        models_check(
            "ex3 models (powerset)",
            &ex3,
            powerset,
            &[(sets(&ex3, &["b'", "c'"], &["b'", "c'"]), true)],
        ),
        lfp_check(
            "lookahead least stable fixpoint",
            &la,
            single,
            sets(&la, &[], &["b", "b'", "c", "c'"]),
        ),
        models_check(
            "lookahead models",
            &la,
            single,
            &[
                (sets(&la, &["b", "c'"], &["b", "c'"]), true),
                (sets(&la, &["c'"], &["b", "b'", "c'"]), false),
            ],
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_examples_parse() {
        for (name, _) in GOLDEN {
            assert!(golden(name).ka_len() > 0);
        }
    }

    #[test]
    fn random_kbs_respect_limits() {
        let cfg = RandomKbConfig::default();
        for kb in random_corpus(3, 200, &cfg) {
            assert!(kb.sig_len() <= cfg.max_atoms);
            assert!(!kb.rules().is_empty() && kb.rules().len() <= cfg.max_rules);
            assert!(kb.ontology().len() <= cfg.max_clauses);
        }
    }

    #[test]
    fn random_corpus_is_reproducible() {
        let cfg = RandomKbConfig::default();
        assert_eq!(random_corpus(9, 10, &cfg), random_corpus(9, 10, &cfg));
    }

    #[test]
    fn selftest_passes() {
        for check in selftest() {
            assert!(check.passed, "{}: {}", check.name, check.detail);
        }
    }
}
