//! Ground hybrid knowledge bases with a propositional ontology.
//!
//! Atoms are interned into a [`Signature`]. Atoms occurring in some rule
//! (the K-atoms, `KA`) receive the ids `0..ka_len` in order of first
//! occurrence; atoms that occur only in the ontology follow. An [`AtomSet`]
//! over `KA` is therefore also a valid set over the full signature.

use std::collections::HashMap;
use std::fmt;

use crate::atoms::AtomSet;
use crate::entail::Formula;
use crate::lattice::PowersetLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(pub u32);

impl Atom {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    names: Vec<String>,
    index: HashMap<String, Atom>,
}

impl Signature {
    pub fn intern(&mut self, name: &str) -> Atom {
        if let Some(&a) = self.index.get(name) {
            return a;
        }
        let a = Atom(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), a);
        a
    }

    pub fn get(&self, name: &str) -> Option<Atom> {
        self.index.get(name).copied()
    }

    pub fn name(&self, atom: Atom) -> &str {
        &self.names[atom.id()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// `K head ← K pos…, not neg…`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Atom,
    pub pos: AtomSet,
    pub neg: AtomSet,
}

/// A body literal by name, as written in source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Literal {
    pub atom: String,
    pub negated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedRule {
    pub head: String,
    pub body: Vec<Literal>,
}

impl NamedRule {
    pub fn new(head: &str, pos: &[&str], neg: &[&str]) -> Self {
        let lit = |negated| {
            move |a: &&str| Literal {
                atom: (*a).to_owned(),
                negated,
            }
        };
        Self {
            head: head.to_owned(),
            body: pos
                .iter()
                .map(lit(false))
                .chain(neg.iter().map(lit(true)))
                .collect(),
        }
    }
}

pub type Ontology = Vec<Formula>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnowledgeBase {
    signature: Signature,
    ontology: Ontology,
    rules: Vec<Rule>,
    ka_len: usize,
}

impl KnowledgeBase {
    pub fn new(ontology: Vec<Formula<String>>, rules: Vec<NamedRule>) -> Self {
        let mut signature = Signature::default();
        let rules: Vec<Rule> = rules
            .iter()
            .map(|r| {
                let head = signature.intern(&r.head);
                let mut pos = AtomSet::new();
                let mut neg = AtomSet::new();
                for lit in &r.body {
                    let a = signature.intern(&lit.atom).id();
                    if lit.negated {
                        neg.insert(a);
                    } else {
                        pos.insert(a);
                    }
                }
                Rule { head, pos, neg }
            })
            .collect();
        let ka_len = signature.len();
        let ontology = ontology
            .iter()
            .map(|f| f.map_atoms(&mut |name: &String| signature.intern(name)))
            .collect();
        Self {
            signature,
            ontology,
            rules,
            ka_len,
        }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new(), Vec::new())
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn ontology(&self) -> &[Formula] {
        &self.ontology
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// `|KA|`
    pub fn ka_len(&self) -> usize {
        self.ka_len
    }

    /// `KA` as a set of ids.
    pub fn ka(&self) -> AtomSet {
        AtomSet::full(self.ka_len)
    }

    /// Size of the full signature (rule atoms and ontology-only atoms).
    pub fn sig_len(&self) -> usize {
        self.signature.len()
    }

    /// `℘(KA)`
    pub fn lattice(&self) -> PowersetLattice {
        PowersetLattice::new(self.ka_len)
    }

    pub fn atom(&self, name: &str) -> Option<Atom> {
        self.signature.get(name)
    }

    pub fn name(&self, atom: Atom) -> &str {
        self.signature.name(atom)
    }

    /// Resolves names against `KA`; unknown or ontology-only names are errors.
    pub fn ka_set<S: AsRef<str>>(&self, names: &[S]) -> Result<AtomSet, UnknownAtom> {
        let mut out = AtomSet::new();
        for n in names {
            match self.atom(n.as_ref()) {
                Some(a) if a.id() < self.ka_len => {
                    out.insert(a.id());
                }
                _ => return Err(UnknownAtom(n.as_ref().to_owned())),
            }
        }
        Ok(out)
    }

    /// Atom names of `set`, sorted lexicographically.
    pub fn names(&self, set: &AtomSet) -> Vec<&str> {
        let mut v: Vec<&str> = set.iter().map(|i| self.name(Atom(i as u32))).collect();
        v.sort_unstable();
        v
    }

    /// `{a, b}`-style rendering with sorted names.
    pub fn show(&self, set: &AtomSet) -> String {
        format!("{{{}}}", self.names(set).join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownAtom(pub String);

impl fmt::Display for UnknownAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown atom `{}`", self.0)
    }
}

impl std::error::Error for UnknownAtom {}

/// `KA(K)`: heads, positive bodies and negative bodies of all rules.
pub fn ka_of(kb: &KnowledgeBase) -> AtomSet {
    let mut ka = AtomSet::new();
    for r in kb.rules() {
        ka.insert(r.head.id());
        ka.union_with(&r.pos);
        ka.union_with(&r.neg);
    }
    ka
}

/// `OB_O{S}`: the ontology plus a positive unit per atom of `s`.
pub fn ob_of(kb: &KnowledgeBase, s: &AtomSet) -> Vec<Formula> {
    let mut out = kb.ontology().to_vec();
    out.extend(s.iter().map(|i| Formula::Atom(Atom(i as u32))));
    out
}

/// `OB_O{P, B}`: [`ob_of`] plus a negative unit per atom of `b`.
pub fn ob_of_neg(kb: &KnowledgeBase, p: &AtomSet, b: &AtomSet) -> Vec<Formula> {
    let mut out = ob_of(kb, p);
    out.extend(
        b.iter()
            .map(|i| Formula::not(Formula::Atom(Atom(i as u32)))),
    );
    out
}
