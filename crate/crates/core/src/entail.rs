//! Propositional formulas and entailment.
//!
//! Two independent procedures are provided: [`entails`] evaluates a truth
//! table over the atoms of the query and is the reference oracle, while
//! [`entails_fast`] clausifies and runs a DPLL search. [`OntologyOracle`]
//! answers the batched "which atoms are forced?" questions the fixpoint
//! operator asks, reusing one model table per ontology when it is small.

use std::collections::BTreeSet;

use crate::atoms::AtomSet;
use crate::error::Error;
use crate::kb::Atom;

/// Truth tables are capped at this many distinct atoms.
pub const TRUTH_TABLE_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula<A = Atom> {
    Atom(A),
    Not(Box<Formula<A>>),
    And(Box<Formula<A>>, Box<Formula<A>>),
    Or(Box<Formula<A>>, Box<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
    Iff(Box<Formula<A>>, Box<Formula<A>>),
    Falsum,
}

impl<A> Formula<A> {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Self, b: Self) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Self, b: Self) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Self, b: Self) -> Self {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn map_atoms<B>(&self, f: &mut impl FnMut(&A) -> B) -> Formula<B> {
        match self {
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::Not(x) => Formula::not(x.map_atoms(f)),
            Formula::And(x, y) => {
                let x = x.map_atoms(f);
                Formula::and(x, y.map_atoms(f))
            }
            Formula::Or(x, y) => {
                let x = x.map_atoms(f);
                Formula::or(x, y.map_atoms(f))
            }
            Formula::Implies(x, y) => {
                let x = x.map_atoms(f);
                Formula::implies(x, y.map_atoms(f))
            }
            Formula::Iff(x, y) => {
                let x = x.map_atoms(f);
                Formula::iff(x, y.map_atoms(f))
            }
            Formula::Falsum => Formula::Falsum,
        }
    }

    pub fn eval(&self, v: &impl Fn(&A) -> bool) -> bool {
        match self {
            Formula::Atom(a) => v(a),
            Formula::Not(x) => !x.eval(v),
            Formula::And(x, y) => x.eval(v) && y.eval(v),
            Formula::Or(x, y) => x.eval(v) || y.eval(v),
            Formula::Implies(x, y) => !x.eval(v) || y.eval(v),
            Formula::Iff(x, y) => x.eval(v) == y.eval(v),
            Formula::Falsum => false,
        }
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a A)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Not(x) => x.visit_atoms(f),
            Formula::And(x, y)
            | Formula::Or(x, y)
            | Formula::Implies(x, y)
            | Formula::Iff(x, y) => {
                x.visit_atoms(f);
                y.visit_atoms(f);
            }
            Formula::Falsum => {}
        }
    }
}

/// A literal or `⊥`, the only conclusions the operator ever asks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Conclusion {
    Atom(Atom),
    NegAtom(Atom),
    Falsum,
}

impl Conclusion {
    pub fn to_formula(self) -> Formula {
        match self {
            Conclusion::Atom(a) => Formula::Atom(a),
            Conclusion::NegAtom(a) => Formula::not(Formula::Atom(a)),
            Conclusion::Falsum => Formula::Falsum,
        }
    }
}

fn dense_atoms(formulas: &[&Formula]) -> Vec<Atom> {
    let mut seen = BTreeSet::new();
    for f in formulas {
        f.visit_atoms(&mut |a| {
            seen.insert(*a);
        });
    }
    seen.into_iter().collect()
}

/// `premises ⊨ conclusion`, decided by truth table.
pub fn entails(premises: &[Formula], conclusion: &Formula) -> Result<bool, Error> {
    let mut all: Vec<&Formula> = premises.iter().collect();
    all.push(conclusion);
    let atoms = dense_atoms(&all);
    if atoms.len() > TRUTH_TABLE_CAP {
        return Err(Error::SignatureTooLarge {
            atoms: atoms.len(),
            cap: TRUTH_TABLE_CAP,
        });
    }
    let slot = |a: &Atom| atoms.binary_search(a).unwrap();
    for mask in 0u32..(1u32 << atoms.len()) {
        let v = |a: &Atom| mask >> slot(a) & 1 == 1;
        if premises.iter().all(|f| f.eval(&v)) && !conclusion.eval(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `premises` has a model, decided by truth table.
pub fn consistent(premises: &[Formula]) -> Result<bool, Error> {
    entails(premises, &Formula::Falsum).map(|e| !e)
}

pub fn entails_conclusion(premises: &[Formula], c: Conclusion) -> Result<bool, Error> {
    entails(premises, &c.to_formula())
}

/// `premises ⊨ conclusion`, decided by clausification and DPLL.
pub fn entails_fast(premises: &[Formula], conclusion: &Formula) -> bool {
    let mut cnf = Cnf::default();
    for f in premises {
        cnf.add(f);
    }
    cnf.add(&Formula::not(conclusion.clone()));
    !cnf.satisfiable(&[])
}

pub fn consistent_fast(premises: &[Formula]) -> bool {
    let mut cnf = Cnf::default();
    for f in premises {
        cnf.add(f);
    }
    cnf.satisfiable(&[])
}

/// A signed atom id: `(id, polarity)`.
pub type Lit = (usize, bool);

/// A clause set built by negation normal form and distribution.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    clauses: Vec<Vec<Lit>>,
    vars: usize,
}

impl Cnf {
    pub fn from_formulas(formulas: &[Formula]) -> Self {
        let mut cnf = Self::default();
        for f in formulas {
            cnf.add(f);
        }
        cnf
    }

    pub fn add(&mut self, f: &Formula) {
        for clause in clausify(&nnf(f, true)) {
            for &(v, _) in &clause {
                self.vars = self.vars.max(v + 1);
            }
            self.clauses.push(clause);
        }
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Satisfiability under the given unit assumptions.
    pub fn satisfiable(&self, assumptions: &[Lit]) -> bool {
        let width = assumptions
            .iter()
            .map(|&(v, _)| v + 1)
            .max()
            .unwrap_or(0)
            .max(self.vars);
        let mut assign = vec![None; width];
        for &(v, s) in assumptions {
            match assign[v] {
                Some(prev) if prev != s => return false,
                _ => assign[v] = Some(s),
            }
        }
        dpll(&self.clauses, &mut assign)
    }
}

#[derive(Clone, Debug)]
enum Nnf {
    Lit(usize, bool),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Nnf {
    match (f, positive) {
        (Formula::Atom(a), s) => Nnf::Lit(a.id(), s),
        (Formula::Not(x), s) => nnf(x, !s),
        (Formula::And(x, y), true) | (Formula::Or(x, y), false) => {
            Nnf::And(vec![nnf(x, positive), nnf(y, positive)])
        }
        (Formula::Or(x, y), true) | (Formula::And(x, y), false) => {
            Nnf::Or(vec![nnf(x, positive), nnf(y, positive)])
        }
        (Formula::Implies(x, y), true) => Nnf::Or(vec![nnf(x, false), nnf(y, true)]),
        (Formula::Implies(x, y), false) => Nnf::And(vec![nnf(x, true), nnf(y, false)]),
        (Formula::Iff(x, y), s) => Nnf::And(vec![
            Nnf::Or(vec![nnf(x, false), nnf(y, s)]),
            Nnf::Or(vec![nnf(x, true), nnf(y, !s)]),
        ]),
        (Formula::Falsum, true) => Nnf::Or(vec![]),
        (Formula::Falsum, false) => Nnf::And(vec![]),
    }
}

fn clausify(f: &Nnf) -> Vec<Vec<Lit>> {
    let raw = match f {
        Nnf::Lit(v, s) => vec![vec![(*v, *s)]],
        Nnf::And(xs) => xs.iter().flat_map(clausify).collect(),
        Nnf::Or(xs) => {
            let mut acc: Vec<Vec<Lit>> = vec![vec![]];
            for x in xs {
                let part = clausify(x);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut c = a.clone();
                        c.extend_from_slice(p);
                        next.push(c);
                    }
                }
                acc = next;
            }
            acc
        }
    };
    raw.into_iter()
        .filter_map(|mut c| {
            c.sort_unstable();
            c.dedup();
            let tautology = c.windows(2).any(|w| w[0].0 == w[1].0);
            (!tautology).then_some(c)
        })
        .collect()
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
    loop {
        let mut changed = false;
        for clause in clauses {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &(v, s) in clause {
                match assign[v] {
                    Some(x) if x == s => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some((v, s));
                    }
                }
            }
            if satisfied {
                continue;
            }
            match (open_count, open) {
                (0, _) => return false,
                (1, Some((v, s))) => {
                    assign[v] = Some(s);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = clauses.iter().find_map(|c| {
        let satisfied = c.iter().any(|&(v, s)| assign[v] == Some(s));
        if satisfied {
            None
        } else {
            c.iter().find(|&&(v, _)| assign[v].is_none()).copied()
        }
    });
    let Some((v, s)) = branch else {
        return true;
    };
    for value in [s, !s] {
        let mut trial = assign.clone();
        trial[v] = Some(value);
        if dpll(clauses, &mut trial) {
            *assign = trial;
            return true;
        }
    }
    false
}

/// Result of asserting a set of literals against the ontology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Consequences {
    pub consistent: bool,
    /// Atoms of the scope true in every model (all of the scope if inconsistent).
    pub forced_true: AtomSet,
    /// Atoms of the scope false in every model (all of the scope if inconsistent).
    pub forced_false: AtomSet,
}

#[derive(Clone, Debug)]
enum Backend {
    /// Models of the ontology over the full signature, as bit masks.
    Table(Vec<u64>),
    Clausal(Cnf),
}

/// Answers entailment queries of the form `O ∪ pos ∪ ¬neg ⊨ ±a`.
#[derive(Clone, Debug)]
pub struct OntologyOracle {
    backend: Backend,
}

impl OntologyOracle {
    /// Uses a model table when the signature has at most
    /// [`TRUTH_TABLE_CAP`] atoms, and clausal search otherwise.
    pub fn new(ontology: &[Formula], sig_len: usize) -> Self {
        if sig_len <= TRUTH_TABLE_CAP {
            let models = (0u64..(1u64 << sig_len))
                .filter(|&m| {
                    let v = |a: &Atom| m >> a.id() & 1 == 1;
                    ontology.iter().all(|f| f.eval(&v))
                })
                .collect();
            Self {
                backend: Backend::Table(models),
            }
        } else {
            Self::clausal(ontology)
        }
    }

    pub fn clausal(ontology: &[Formula]) -> Self {
        Self {
            backend: Backend::Clausal(Cnf::from_formulas(ontology)),
        }
    }

    pub fn consistent(&self, pos: &AtomSet, neg: &AtomSet) -> bool {
        match &self.backend {
            Backend::Table(models) => {
                let (p, n) = (pos.low_mask(), neg.low_mask());
                models.iter().any(|m| m & p == p && m & n == 0)
            }
            Backend::Clausal(cnf) => cnf.satisfiable(&assumptions(pos, neg)),
        }
    }

    /// Which atoms of `scope` are entailed true or false by `O ∪ pos ∪ ¬neg`.
    pub fn consequences(&self, pos: &AtomSet, neg: &AtomSet, scope: &AtomSet) -> Consequences {
        match &self.backend {
            Backend::Table(models) => {
                let (p, n) = (pos.low_mask(), neg.low_mask());
                let mut all_true = u64::MAX;
                let mut any_true = 0u64;
                let mut found = false;
                for m in models.iter().filter(|&&m| m & p == p && m & n == 0) {
                    found = true;
                    all_true &= m;
                    any_true |= m;
                }
                if !found {
                    return Consequences::inconsistent(scope);
                }
                let s = scope.low_mask();
                Consequences {
                    consistent: true,
                    forced_true: AtomSet::from_mask(all_true & s),
                    forced_false: AtomSet::from_mask(!any_true & s),
                }
            }
            Backend::Clausal(cnf) => {
                let base = assumptions(pos, neg);
                if !cnf.satisfiable(&base) {
                    return Consequences::inconsistent(scope);
                }
                let mut forced_true = AtomSet::new();
                let mut forced_false = AtomSet::new();
                let mut probe = base.clone();
                for a in scope.iter() {
                    probe.push((a, false));
                    if !cnf.satisfiable(&probe) {
                        forced_true.insert(a);
                    }
                    probe.pop();
                    probe.push((a, true));
                    if !cnf.satisfiable(&probe) {
                        forced_false.insert(a);
                    }
                    probe.pop();
                }
                Consequences {
                    consistent: true,
                    forced_true,
                    forced_false,
                }
            }
        }
    }
}

impl Consequences {
    fn inconsistent(scope: &AtomSet) -> Self {
        Self {
            consistent: false,
            forced_true: scope.clone(),
            forced_false: scope.clone(),
        }
    }
}

fn assumptions(pos: &AtomSet, neg: &AtomSet) -> Vec<Lit> {
    pos.iter()
        .map(|a| (a, true))
        .chain(neg.iter().map(|a| (a, false)))
        .collect()
}
