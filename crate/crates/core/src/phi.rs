//! The recurrent approximator for hybrid knowledge bases.
//!
//! For an input `(T, F, U, P)` over `℘(KA)`:
//!
//! ```text
//! Φ(T, F, U, P) = ( add₀(T) ∪ add₁(T, P),
//!                   KA ∖ P,
//!                   KA ∖ T,
//!                   (add₀(P) ∪ add₁(P, T)) ∖ (extract₀(T, F, P) ∪ extract₁(T, F)) )
//! ```
//!
//! `add₀` collects the atoms the ontology entails, `add₁` fires rules, and the
//! two `extract` functions remove atoms whose truth would contradict
//! something already known false. `U` is threaded through but never read.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::aft::{is_stable_fixpoint, TetraApproximator};
use crate::atoms::AtomSet;
use crate::entail::{self, OntologyOracle};
use crate::error::Error;
use crate::kb::{ob_of, KnowledgeBase};
use crate::lattice::{lfp, Bi, PowersetLattice, Tetra};

/// Chooses which sets `B ⊆ F` of known-false atoms `extract₀` may assume.
///
/// Every strategy is `⊆`-monotone in `F`. All except [`FilterStrategy::Empty`]
/// offer `B = ∅`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum FilterStrategy {
    /// No candidates at all; `extract₀` never fires.
    Empty,
    /// Only `B = ∅`.
    None,
    /// `∅` and every singleton of `F`.
    #[default]
    Singletons,
    /// Subsets of `F` with at most `k` atoms.
    BoundedSubsets(usize),
    /// Every subset of `F`.
    Powerset,
}

impl FilterStrategy {
    /// Candidate sets in size-then-lexicographic order.
    pub fn candidates(&self, f: &AtomSet) -> Vec<AtomSet> {
        match *self {
            FilterStrategy::Empty => Vec::new(),
            FilterStrategy::None => vec![AtomSet::new()],
            FilterStrategy::Singletons => f.subsets_up_to(1),
            FilterStrategy::BoundedSubsets(k) => f.subsets_up_to(k),
            FilterStrategy::Powerset => f.subsets(),
        }
    }

    /// The strategies in increasing order of strength, with `k = 2` as the
    /// bounded representative.
    pub const LADDER: [FilterStrategy; 5] = [
        FilterStrategy::Empty,
        FilterStrategy::None,
        FilterStrategy::Singletons,
        FilterStrategy::BoundedSubsets(2),
        FilterStrategy::Powerset,
    ];
}

impl fmt::Display for FilterStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterStrategy::Empty => f.write_str("empty"),
            FilterStrategy::None => f.write_str("none"),
            FilterStrategy::Singletons => f.write_str("singletons"),
            FilterStrategy::BoundedSubsets(k) => write!(f, "subsets:{k}"),
            FilterStrategy::Powerset => f.write_str("powerset"),
        }
    }
}

impl FromStr for FilterStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "empty" => Ok(FilterStrategy::Empty),
            "none" => Ok(FilterStrategy::None),
            "singletons" => Ok(FilterStrategy::Singletons),
            "powerset" => Ok(FilterStrategy::Powerset),
            _ => match s.strip_prefix("subsets:") {
                Some(k) => k
                    .parse()
                    .map(FilterStrategy::BoundedSubsets)
                    .map_err(|_| format!("invalid subset bound `{k}`")),
                None => Err(format!(
                    "unknown filter `{s}` (expected none, empty, singletons, subsets:K or powerset)"
                )),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhiConfig {
    pub filter: FilterStrategy,
    /// Baseline without `extract₁`, and with `extract₀` restricted to the
    /// filter's `B = ∅` candidate (if it offers one).
    pub legacy_mode: bool,
}

impl PhiConfig {
    pub fn with_filter(filter: FilterStrategy) -> Self {
        Self {
            filter,
            legacy_mode: false,
        }
    }

    pub fn legacy() -> Self {
        Self {
            filter: FilterStrategy::None,
            legacy_mode: true,
        }
    }
}

/// The three conditions characterising models among stable fixpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ModelVerdict {
    /// `T ⊆ P`
    pub subset: bool,
    /// `(T, P̄, T̄, P)` is a fixpoint of `S(Φ)`.
    pub fixpoint: bool,
    /// The ontology plus the unblocked upper closure of `T` is consistent.
    pub consistent: bool,
}

impl ModelVerdict {
    pub fn is_model(&self) -> bool {
        self.subset && self.fixpoint && self.consistent
    }
}

// Candidate lists at least this long are scanned in parallel.
const PARALLEL_CANDIDATES: usize = 64;

pub struct Phi<'k> {
    kb: &'k KnowledgeBase,
    cfg: PhiConfig,
    lattice: PowersetLattice,
    oracle: OntologyOracle,
}

impl<'k> Phi<'k> {
    pub fn new(kb: &'k KnowledgeBase, cfg: PhiConfig) -> Self {
        Self {
            kb,
            cfg,
            lattice: kb.lattice(),
            oracle: OntologyOracle::new(kb.ontology(), kb.sig_len()),
        }
    }

    pub fn kb(&self) -> &KnowledgeBase {
        self.kb
    }

    pub fn config(&self) -> PhiConfig {
        self.cfg
    }

    /// KA-atoms entailed by the ontology together with `s`.
    pub fn add0(&self, s: &AtomSet) -> AtomSet {
        self.oracle
            .consequences(s, &AtomSet::new(), &self.kb.ka())
            .forced_true
    }

    /// Heads of rules whose positive body lies in `t` and whose negative body
    /// misses `p`.
    pub fn add1(&self, t: &AtomSet, p: &AtomSet) -> AtomSet {
        let mut out = AtomSet::new();
        for r in self.kb.rules() {
            if r.pos.is_subset(t) && r.neg.is_disjoint(p) {
                out.insert(r.head.id());
            }
        }
        out
    }

    /// KA-atoms `a` such that, for some admissible `B ⊆ F`, the ontology is
    /// consistent with `P ∪ ¬B` and entails `¬a` from `T ∪ ¬B`.
    pub fn extract0(&self, t: &AtomSet, f: &AtomSet, p: &AtomSet) -> AtomSet {
        let ka = self.kb.ka();
        let witness = |b: &AtomSet| {
            if b.is_subset(f) && self.oracle.consistent(p, b) {
                self.oracle.consequences(t, b, &ka).forced_false
            } else {
                AtomSet::new()
            }
        };
        let mut candidates = self.cfg.filter.candidates(f);
        if self.cfg.legacy_mode {
            candidates.retain(AtomSet::is_empty);
        }
        if candidates.len() >= PARALLEL_CANDIDATES {
            candidates
                .par_iter()
                .map(witness)
                .reduce(AtomSet::new, |a, b| &a | &b)
        } else {
            candidates
                .iter()
                .fold(AtomSet::new(), |acc, b| &acc | &witness(b))
        }
    }

    /// Atoms `a` in the positive body of a rule whose head and negative body
    /// are known false and whose other positive atoms are known true.
    pub fn extract1(&self, t: &AtomSet, f: &AtomSet) -> AtomSet {
        if self.cfg.legacy_mode {
            return AtomSet::new();
        }
        let mut out = AtomSet::new();
        for r in self.kb.rules() {
            if !f.contains(r.head.id()) || !r.neg.is_subset(f) {
                continue;
            }
            let missing = &r.pos - t;
            match missing.len() {
                0 => out.union_with(&r.pos),
                1 => out.union_with(&missing),
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, x: &Tetra<AtomSet>) -> Tetra<AtomSet> {
        let ka = self.kb.ka();
        let lower = &self.add0(&x.t) | &self.add1(&x.t, &x.p);
        let upper = &self.add0(&x.p) | &self.add1(&x.p, &x.t);
        let blocked = &self.extract0(&x.t, &x.f, &x.p) | &self.extract1(&x.t, &x.f);
        Tetra::new(lower, &ka - &x.p, &ka - &x.t, &upper - &blocked)
    }

    /// The least `X` with `X = add₀(X) ∪ add₁(X, t)`: what `t` would allow
    /// to become true if nothing were ever blocked.
    pub fn upper_closure(&self, t: &AtomSet) -> AtomSet {
        lfp(
            |x: &AtomSet| &self.add0(x) | &self.add1(x, t),
            AtomSet::new(),
            self.kb.ka_len() + 2,
        )
        .expect("an inflationary step on a finite powerset converges")
    }

    pub fn check_model(&self, t: &AtomSet, p: &AtomSet) -> ModelVerdict {
        let closure = self.upper_closure(t);
        ModelVerdict {
            subset: t.is_subset(p),
            fixpoint: is_stable_fixpoint(self, &Bi::new(t.clone(), p.clone())).expect("Φ is total"),
            consistent: self.oracle.consistent(&closure, &AtomSet::new()),
        }
    }
}

impl TetraApproximator for Phi<'_> {
    type Lattice = PowersetLattice;

    fn lattice(&self) -> &PowersetLattice {
        &self.lattice
    }

    fn apply(&self, x: &Tetra<AtomSet>) -> Result<Tetra<AtomSet>, Error> {
        Ok(self.eval(x))
    }

    fn is_recurrent(&self) -> bool {
        true
    }
}

pub fn add0(kb: &KnowledgeBase, t: &AtomSet) -> AtomSet {
    Phi::new(kb, PhiConfig::default()).add0(t)
}

pub fn add1(kb: &KnowledgeBase, t: &AtomSet, p: &AtomSet) -> AtomSet {
    Phi::new(kb, PhiConfig::default()).add1(t, p)
}

pub fn extract0(
    kb: &KnowledgeBase,
    t: &AtomSet,
    f: &AtomSet,
    p: &AtomSet,
    filter: FilterStrategy,
) -> AtomSet {
    Phi::new(kb, PhiConfig::with_filter(filter)).extract0(t, f, p)
}

pub fn extract1(kb: &KnowledgeBase, t: &AtomSet, f: &AtomSet) -> AtomSet {
    Phi::new(kb, PhiConfig::default()).extract1(t, f)
}

pub fn phi(kb: &KnowledgeBase, cfg: PhiConfig, x: &Tetra<AtomSet>) -> Tetra<AtomSet> {
    Phi::new(kb, cfg).eval(x)
}

pub fn upper_closure(kb: &KnowledgeBase, t: &AtomSet) -> AtomSet {
    Phi::new(kb, PhiConfig::default()).upper_closure(t)
}

pub fn check_model(kb: &KnowledgeBase, cfg: PhiConfig, t: &AtomSet, p: &AtomSet) -> ModelVerdict {
    Phi::new(kb, cfg).check_model(t, p)
}

/// A necessary condition for `(t, p)` to be a model, checked without `Φ`.
///
/// Reads `(t, p)` as a three-valued valuation (true on `t`, undefined on
/// `p ∖ t`, false elsewhere), requires every rule head to be at least as true
/// as its body, and requires the ontology to be consistent with both `t`
/// and `p`.
pub fn sanity_threevalued(kb: &KnowledgeBase, t: &AtomSet, p: &AtomSet) -> bool {
    let v = |a: usize| -> u8 {
        if t.contains(a) {
            2
        } else if p.contains(a) {
            1
        } else {
            0
        }
    };
    let rules_hold = kb.rules().iter().all(|r| {
        let body = r
            .pos
            .iter()
            .map(v)
            .chain(r.neg.iter().map(|a| 2 - v(a)))
            .min()
            .unwrap_or(2);
        v(r.head.id()) >= body
    });
    let consistent = |s: &AtomSet| {
        let theory = ob_of(kb, s);
        entail::consistent(&theory).unwrap_or_else(|_| entail::consistent_fast(&theory))
    };
    rules_hold && consistent(p) && consistent(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aft::{check_recurrent, least_stable_fixpoint, stable_revision_tetra};
    use crate::entail::{entails, Formula};
    use crate::kb::{ob_of_neg, Atom, NamedRule};
    use crate::lattice::{bottom_p4, project_14, try_lfp_chain};

    fn atom(n: &str) -> Formula<String> {
        Formula::Atom(n.to_owned())
    }

    fn example1() -> KnowledgeBase {
        KnowledgeBase::new(
            vec![Formula::not(atom("c"))],
            vec![
                NamedRule::new("a", &[], &["a'"]),
                NamedRule::new("a'", &[], &["a"]),
                NamedRule::new("c", &["a"], &["b"]),
            ],
        )
    }

    fn example3() -> KnowledgeBase {
        KnowledgeBase::new(
            vec![Formula::and(
                Formula::or(atom("x"), atom("y")),
                Formula::iff(
                    Formula::not(atom("c")),
                    Formula::or(Formula::not(atom("x")), Formula::not(atom("y"))),
                ),
            )],
            vec![
                NamedRule::new("c", &["b"], &["a"]),
                NamedRule::new("c", &[], &["c'"]),
                NamedRule::new("c'", &[], &["c"]),
                NamedRule::new("b", &[], &["b'"]),
                NamedRule::new("b'", &[], &["b"]),
                NamedRule::new("x", &["x"], &[]),
                NamedRule::new("y", &["y"], &[]),
            ],
        )
    }

    fn set(kb: &KnowledgeBase, names: &[&str]) -> AtomSet {
        kb.ka_set(names).unwrap()
    }

    #[test]
    fn filter_parsing_round_trips() {
        for f in FilterStrategy::LADDER {
            assert_eq!(f.to_string().parse::<FilterStrategy>(), Ok(f));
        }
        assert!("subsets:x".parse::<FilterStrategy>().is_err());
        assert!("all".parse::<FilterStrategy>().is_err());
    }

    #[test]
    fn filter_candidates() {
        let f = AtomSet::from_ids([1, 3]);
        assert!(FilterStrategy::Empty.candidates(&f).is_empty());
        assert_eq!(FilterStrategy::None.candidates(&f), vec![AtomSet::new()]);
        assert_eq!(FilterStrategy::Singletons.candidates(&f).len(), 3);
        assert_eq!(
            FilterStrategy::BoundedSubsets(0).candidates(&f),
            vec![AtomSet::new()]
        );
        assert_eq!(FilterStrategy::Powerset.candidates(&f).len(), 4);
    }

    #[test]
    fn add0_examples() {
        let kb = example1();
        assert!(add0(&kb, &AtomSet::new()).is_empty());
        let kb2 = KnowledgeBase::new(
            vec![Formula::and(
                Formula::or(atom("x"), atom("y")),
                Formula::not(atom("y")),
            )],
            vec![NamedRule::new("x", &[], &[])],
        );
        assert_eq!(add0(&kb2, &AtomSet::new()), set(&kb2, &["x"]));
        let ka = kb.ka();
        let consistent_part = set(&kb, &["a", "a'", "b"]);
        assert!(consistent_part.is_subset(&add0(&kb, &consistent_part)));
        assert_eq!(
            add0(&kb, &ka),
            ka,
            "inconsistent premises entail everything"
        );
    }

    #[test]
    fn add0_agrees_with_truth_table() {
        let kb = example3();
        for s in kb.ka().subsets() {
            let got = add0(&kb, &s);
            for a in kb.ka().iter() {
                let want = entails(&ob_of(&kb, &s), &Formula::Atom(Atom(a as u32))).unwrap();
                assert_eq!(got.contains(a), want, "{s:?} ⊨ {a}");
            }
        }
    }

    #[test]
    fn add1_examples() {
        let kb = example1();
        let e = AtomSet::new();
        assert_eq!(add1(&kb, &e, &e), set(&kb, &["a", "a'"]));
        assert!(add1(&kb, &e, &set(&kb, &["a", "a'"])).is_empty());
        assert!(add1(&KnowledgeBase::empty(), &e, &e).is_empty());
    }

    #[test]
    fn extract0_example1() {
        let kb = example1();
        let e = AtomSet::new();
        for filter in [
            FilterStrategy::None,
            FilterStrategy::Singletons,
            FilterStrategy::Powerset,
        ] {
            assert_eq!(extract0(&kb, &e, &e, &e, filter), set(&kb, &["c"]));
        }
        assert!(extract0(&kb, &e, &e, &e, FilterStrategy::Empty).is_empty());
    }

    #[test]
    fn extract0_example3_needs_a_nonempty_witness() {
        let kb = example3();
        let e = AtomSet::new();
        let f = set(&kb, &["x", "y"]);
        // With c ∈ P the ontology forces x and y, and no B ⊆ {x, y} passes
        // the consistency guard.
        let p = set(&kb, &["b", "b'", "c'"]);
        let c = kb.atom("c").unwrap().id();
        let p_with_c = &p | &set(&kb, &["c"]);
        assert!(extract0(&kb, &e, &f, &p_with_c, FilterStrategy::Powerset).is_empty());
        assert!(extract0(&kb, &e, &f, &p, FilterStrategy::Powerset).contains(c));
        assert!(extract0(&kb, &e, &f, &p, FilterStrategy::Singletons).contains(c));
        assert!(!extract0(&kb, &e, &f, &p, FilterStrategy::None).contains(c));
        // B = {x, y} alone contradicts x ∨ y, so it witnesses nothing.
        let both = ob_of_neg(&kb, &p, &f);
        assert!(!entail::consistent(&both).unwrap());
    }

    #[test]
    fn extract1_examples() {
        let kb = example1();
        let e = AtomSet::new();
        assert_eq!(extract1(&kb, &e, &set(&kb, &["b", "c"])), set(&kb, &["a"]));
        assert!(extract1(&kb, &e, &set(&kb, &["c"])).is_empty());
        assert!(extract1(&kb, &e, &e).is_empty());

        let kb = KnowledgeBase::new(vec![], vec![NamedRule::new("a", &["p", "q"], &[])]);
        let f = set(&kb, &["a"]);
        assert_eq!(extract1(&kb, &set(&kb, &["p"]), &f), set(&kb, &["q"]));
        assert!(extract1(&kb, &e, &f).is_empty());
    }

    #[test]
    fn phi_first_step_on_example1() {
        let kb = example1();
        let phi = Phi::new(&kb, PhiConfig::default());
        let bot = bottom_p4(phi.lattice());
        // Φ itself sees P = KA, which contradicts ¬c, so add₀ yields all of KA
        // and the guard of extract₀ fails.
        let out = phi.eval(&bot);
        assert_eq!(out.p, kb.ka());
        assert!(out.t.is_empty());
        assert!(check_recurrent(&phi, &[bot.clone(), out]).unwrap());
        // Stable revision rebuilds P from ∅, where extract₀ blocks c.
        let revised = stable_revision_tetra(&phi, &bot).unwrap();
        assert_eq!(revised.p, set(&kb, &["a", "a'"]));
        assert_eq!(revised.u, kb.ka());
    }

    #[test]
    fn legacy_baseline_on_example1() {
        let kb = example1();
        let phi = Phi::new(&kb, PhiConfig::legacy());
        let (fix, _) = least_stable_fixpoint(&phi).unwrap();
        assert_eq!(
            project_14(&fix),
            Bi::new(AtomSet::new(), set(&kb, &["a", "a'"]))
        );
    }

    #[test]
    fn upper_closure_examples() {
        let kb = example1();
        assert_eq!(upper_closure(&kb, &set(&kb, &["a'"])), set(&kb, &["a'"]));
        // ∅ ↦ {a, a'} ↦ {a, a', c}, which contradicts ¬c and so entails
        // every atom.
        assert_eq!(upper_closure(&kb, &AtomSet::new()), kb.ka());
        assert!(!entail::consistent(&ob_of(&kb, &set(&kb, &["a", "a'", "c"]))).unwrap());
        assert!(upper_closure(&KnowledgeBase::empty(), &AtomSet::new()).is_empty());
    }

    #[test]
    fn upper_closure_matches_the_operator_route() {
        // Iterate slots 1, 2 of Φ with (U, P) fixed to (KA ∖ P, T).
        let kb = example3();
        let phi = Phi::new(&kb, PhiConfig::with_filter(FilterStrategy::Powerset));
        let ka = kb.ka();
        for t in ka.subsets() {
            for p in [AtomSet::new(), t.clone(), ka.clone()] {
                let fixed = Bi::new(&ka - &p, t.clone());
                let chain = try_lfp_chain(
                    |tf: &Bi<AtomSet>| {
                        Ok(phi.eval(&Tetra::from_pairs(tf.clone(), fixed.clone())).tf())
                    },
                    Bi::new(AtomSet::new(), AtomSet::new()),
                    2 * ka.len() + 2,
                )
                .unwrap();
                assert_eq!(chain.last().unwrap().first, phi.upper_closure(&t));
            }
        }
    }

    #[test]
    fn check_model_examples() {
        let mut kb_rules = vec![
            NamedRule::new("a", &[], &["a'"]),
            NamedRule::new("a'", &[], &["a"]),
            NamedRule::new("c", &["a"], &["b"]),
        ];
        kb_rules.push(NamedRule::new("b", &["a"], &[]));
        let kb = KnowledgeBase::new(vec![Formula::not(atom("c"))], kb_rules);
        let cfg = PhiConfig::default();
        let v = check_model(&kb, cfg, &set(&kb, &["a'"]), &set(&kb, &["a'"]));
        assert!(v.is_model());
        let v = check_model(&kb, cfg, &AtomSet::new(), &set(&kb, &["a", "a'", "b"]));
        assert!(v.subset && v.fixpoint && !v.consistent);
        let v = check_model(&kb, cfg, &set(&kb, &["a"]), &AtomSet::new());
        assert!(!v.subset && !v.is_model());
    }

    #[test]
    fn sanity_examples() {
        let kb = example1();
        assert!(sanity_threevalued(
            &kb,
            &set(&kb, &["a'"]),
            &set(&kb, &["a'"])
        ));
        assert!(!sanity_threevalued(
            &kb,
            &AtomSet::new(),
            &set(&kb, &["a", "a'"])
        ));
        let e = AtomSet::new();
        assert!(sanity_threevalued(&KnowledgeBase::empty(), &e, &e));
    }
}
