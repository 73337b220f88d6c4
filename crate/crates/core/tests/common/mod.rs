#![allow(dead_code)]

use rand::Rng;
use recurrent_aft::entail::Formula;
use recurrent_aft::lattice::{leq_p4, to_tetra};
use recurrent_aft::{Atom, AtomSet, Bi, PowersetLattice, Tetra};

pub fn random_subset<R: Rng>(rng: &mut R, of: &AtomSet) -> AtomSet {
    of.iter().filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn random_set<R: Rng>(rng: &mut R, n: usize) -> AtomSet {
    random_subset(rng, &AtomSet::full(n))
}

pub fn random_tetra<R: Rng>(rng: &mut R, n: usize) -> Tetra<AtomSet> {
    Tetra::new(
        random_set(rng, n),
        random_set(rng, n),
        random_set(rng, n),
        random_set(rng, n),
    )
}

/// `(T, P)⁴` for a random approximation with `T ⊆ P`.
pub fn random_shaped<R: Rng>(rng: &mut R, n: usize) -> Tetra<AtomSet> {
    let p = random_set(rng, n);
    let t = random_subset(rng, &p);
    to_tetra(&PowersetLattice::new(n), &Bi::new(t, p))
}

/// A random pair `x ⪯⁴p y`: `y` gains atoms in `T, F` and loses atoms in `U, P`.
pub fn random_p4_pair<R: Rng>(rng: &mut R, n: usize) -> (Tetra<AtomSet>, Tetra<AtomSet>) {
    let x = random_tetra(rng, n);
    let y = Tetra::new(
        &x.t | &random_set(rng, n),
        &x.f | &random_set(rng, n),
        &x.u - &random_set(rng, n),
        &x.p - &random_set(rng, n),
    );
    debug_assert!(leq_p4(&PowersetLattice::new(n), &x, &y));
    (x, y)
}

pub fn random_formula<R: Rng>(rng: &mut R, atoms: u32, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return if rng.gen_bool(0.03) {
            Formula::Falsum
        } else {
            Formula::Atom(Atom(rng.gen_range(0..atoms)))
        };
    }
    let op = rng.gen_range(0..5);
    let mut sub = || random_formula(rng, atoms, depth - 1);
    match op {
        0 => Formula::not(sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::implies(sub(), sub()),
        _ => Formula::iff(sub(), sub()),
    }
}
