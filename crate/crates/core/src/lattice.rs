//! Complete lattices with a complement, the induced bilattice and
//! tetralattice orderings, and bounded Kleene iteration.
//!
//! Every lattice in this crate is finite. A [`Lattice`] value describes the
//! carrier; elements are plain values ([`AtomSet`], [`Three`], ...) so that
//! pairs and 4-tuples of them can be built without reference to the lattice.
//!
//! Orderings on pairs and 4-tuples:
//!
//! * `(x, y) ⪯²t (z, w)` iff `x ⪯ z` and `y ⪯ w` (truth)
//! * `(x, y) ⪯²p (z, w)` iff `x ⪯ z` and `w ⪯ y` (precision)
//! * `⪯⁴t` is componentwise on all four slots
//! * `(T, F, U, P) ⪯⁴p (T', F', U', P')` iff `T ⪯ T'`, `F ⪯ F'`, `U' ⪯ U`, `P' ⪯ P`

use std::fmt::Debug;
use std::hash::Hash;

use crate::atoms::AtomSet;
use crate::error::Error;

pub trait Lattice: Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn bot(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// An order-reversing involution.
    fn complement(&self, a: &Self::Elem) -> Self::Elem;
    /// Length of the longest strictly increasing chain.
    fn height(&self) -> usize;
}

/// `℘(Σ)` ordered by inclusion, with `Σ = {0, ..., width - 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowersetLattice {
    width: usize,
}

impl PowersetLattice {
    pub fn new(width: usize) -> Self {
        Self { width }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn contains(&self, a: &AtomSet) -> bool {
        a.bound() <= self.width
    }
}

impl Lattice for PowersetLattice {
    type Elem = AtomSet;

    fn leq(&self, a: &AtomSet, b: &AtomSet) -> bool {
        a.is_subset(b)
    }

    fn bot(&self) -> AtomSet {
        AtomSet::new()
    }

    fn top(&self) -> AtomSet {
        AtomSet::full(self.width)
    }

    fn join(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a | b
    }

    fn meet(&self, a: &AtomSet, b: &AtomSet) -> AtomSet {
        a & b
    }

    fn complement(&self, a: &AtomSet) -> AtomSet {
        &AtomSet::full(self.width) - a
    }

    fn height(&self) -> usize {
        self.width
    }
}

/// The chain `⊥ ⪯ + ⪯ ⊤` with complement `⊥ ↔ ⊤`, `+ ↔ +`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Three {
    Bot,
    Plus,
    Top,
}

impl Three {
    pub const ALL: [Three; 3] = [Three::Bot, Three::Plus, Three::Top];
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ThreeLattice;

impl Lattice for ThreeLattice {
    type Elem = Three;

    fn leq(&self, a: &Three, b: &Three) -> bool {
        a <= b
    }

    fn bot(&self) -> Three {
        Three::Bot
    }

    fn top(&self) -> Three {
        Three::Top
    }

    fn join(&self, a: &Three, b: &Three) -> Three {
        *a.max(b)
    }

    fn meet(&self, a: &Three, b: &Three) -> Three {
        *a.min(b)
    }

    fn complement(&self, a: &Three) -> Three {
        match a {
            Three::Bot => Three::Top,
            Three::Plus => Three::Plus,
            Three::Top => Three::Bot,
        }
    }

    fn height(&self) -> usize {
        2
    }
}

/// An element of `L²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bi<E> {
    pub first: E,
    pub second: E,
}

impl<E> Bi<E> {
    pub fn new(first: E, second: E) -> Self {
        Self { first, second }
    }
}

/// A pair `(T, P)` of true and possibly-true atoms.
pub type Approximation = Bi<AtomSet>;

/// An element `(T, F, U, P)` of `L⁴`. The nested form `((T, F), (U, P))`
/// denotes the same element; see [`Tetra::from_pairs`] and [`Tetra::pairs`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tetra<E> {
    pub t: E,
    pub f: E,
    pub u: E,
    pub p: E,
}

impl<E: Clone> Tetra<E> {
    pub fn new(t: E, f: E, u: E, p: E) -> Self {
        Self { t, f, u, p }
    }

    pub fn from_pairs(tf: Bi<E>, up: Bi<E>) -> Self {
        Self::new(tf.first, tf.second, up.first, up.second)
    }

    pub fn pairs(&self) -> (Bi<E>, Bi<E>) {
        (
            Bi::new(self.t.clone(), self.f.clone()),
            Bi::new(self.u.clone(), self.p.clone()),
        )
    }

    pub fn tf(&self) -> Bi<E> {
        Bi::new(self.t.clone(), self.f.clone())
    }

    pub fn up(&self) -> Bi<E> {
        Bi::new(self.u.clone(), self.p.clone())
    }
}

pub fn leq_t2<L: Lattice>(l: &L, x: &Bi<L::Elem>, y: &Bi<L::Elem>) -> bool {
    l.leq(&x.first, &y.first) && l.leq(&x.second, &y.second)
}

pub fn leq_p2<L: Lattice>(l: &L, x: &Bi<L::Elem>, y: &Bi<L::Elem>) -> bool {
    l.leq(&x.first, &y.first) && l.leq(&y.second, &x.second)
}

pub fn leq_t4<L: Lattice>(l: &L, x: &Tetra<L::Elem>, y: &Tetra<L::Elem>) -> bool {
    l.leq(&x.t, &y.t) && l.leq(&x.f, &y.f) && l.leq(&x.u, &y.u) && l.leq(&x.p, &y.p)
}

pub fn leq_p4<L: Lattice>(l: &L, x: &Tetra<L::Elem>, y: &Tetra<L::Elem>) -> bool {
    l.leq(&x.t, &y.t) && l.leq(&x.f, &y.f) && l.leq(&y.u, &x.u) && l.leq(&y.p, &x.p)
}

/// `⪯⁴p` as `(T,F) ⪯²t (T',F') ∧ (U',P') ⪯²t (U,P)`.
pub fn leq_p4_via_truth<L: Lattice>(l: &L, x: &Tetra<L::Elem>, y: &Tetra<L::Elem>) -> bool {
    leq_t2(l, &x.tf(), &y.tf()) && leq_t2(l, &y.up(), &x.up())
}

/// `⪯⁴p` as `(T,P) ⪯²p (T',P') ∧ (F,U) ⪯²p (F',U')`.
pub fn leq_p4_via_precision<L: Lattice>(l: &L, x: &Tetra<L::Elem>, y: &Tetra<L::Elem>) -> bool {
    leq_p2(l, &project_14(x), &project_14(y))
        && leq_p2(
            l,
            &Bi::new(x.f.clone(), x.u.clone()),
            &Bi::new(y.f.clone(), y.u.clone()),
        )
}

pub fn bottom_p2<L: Lattice>(l: &L) -> Bi<L::Elem> {
    Bi::new(l.bot(), l.top())
}

pub fn bottom_t2<L: Lattice>(l: &L) -> Bi<L::Elem> {
    Bi::new(l.bot(), l.bot())
}

/// `(⊥, ⊥, ⊤, ⊤)`
pub fn bottom_p4<L: Lattice>(l: &L) -> Tetra<L::Elem> {
    Tetra::new(l.bot(), l.bot(), l.top(), l.top())
}

/// `(⊤, ⊤, ⊥, ⊥)`
pub fn top_p4<L: Lattice>(l: &L) -> Tetra<L::Elem> {
    Tetra::new(l.top(), l.top(), l.bot(), l.bot())
}

/// `(T, P)⁴ = (T, P̄, T̄, P)`
pub fn to_tetra<L: Lattice>(l: &L, ap: &Bi<L::Elem>) -> Tetra<L::Elem> {
    Tetra::new(
        ap.first.clone(),
        l.complement(&ap.second),
        l.complement(&ap.first),
        ap.second.clone(),
    )
}

/// `(T, F, U, P)₁,₄ = (T, P)`
pub fn project_14<E: Clone>(x: &Tetra<E>) -> Bi<E> {
    Bi::new(x.t.clone(), x.p.clone())
}

/// Kleene iteration: applies `step` from `start` until `step(x) = x`.
///
/// Fails with [`Error::NonConvergence`] when `max_iters` applications of
/// `step` do not reach a fixpoint.
pub fn lfp<E, F>(step: F, start: E, max_iters: usize) -> Result<E, Error>
where
    E: PartialEq,
    F: FnMut(&E) -> E,
{
    let mut chain = lfp_chain(step, start, max_iters)?;
    Ok(chain.pop().expect("chain holds at least the start"))
}

/// Like [`lfp`], returning every iterate from `start` to the fixpoint.
pub fn lfp_chain<E, F>(mut step: F, start: E, max_iters: usize) -> Result<Vec<E>, Error>
where
    E: PartialEq,
    F: FnMut(&E) -> E,
{
    try_lfp_chain(|x| Ok(step(x)), start, max_iters)
}

/// Kleene iteration with a fallible step; the first step error is returned.
pub fn try_lfp_chain<E, F>(mut step: F, start: E, max_iters: usize) -> Result<Vec<E>, Error>
where
    E: PartialEq,
    F: FnMut(&E) -> Result<E, Error>,
{
    let mut chain = vec![start];
    for _ in 0..max_iters {
        let last = chain.last().expect("non-empty");
        let next = step(last)?;
        if &next == last {
            return Ok(chain);
        }
        chain.push(next);
    }
    Err(Error::NonConvergence { max_iters })
}

#[cfg(test)]
mod tests {
    use super::*;

    // a=0, b=1, c=2, d=3
    fn set(ids: &[usize]) -> AtomSet {
        AtomSet::from_ids(ids.iter().copied())
    }

    #[test]
    fn truth_ordering_on_pairs() {
        let l = PowersetLattice::new(4);
        let e = AtomSet::new();
        assert!(leq_t2(
            &l,
            &Bi::new(e.clone(), e.clone()),
            &Bi::new(set(&[0]), set(&[0]))
        ));
        assert!(!leq_t2(
            &l,
            &Bi::new(set(&[0]), e.clone()),
            &Bi::new(e, set(&[0]))
        ));
        assert!(leq_t2(
            &l,
            &Bi::new(set(&[0]), set(&[1])),
            &Bi::new(set(&[0, 2]), set(&[1]))
        ));
    }

    #[test]
    fn precision_ordering_on_pairs() {
        let l = PowersetLattice::new(4);
        let least = bottom_p2(&l);
        assert!(leq_p2(&l, &least, &Bi::new(set(&[0]), set(&[0, 1]))));
        assert!(!leq_p2(
            &l,
            &Bi::new(set(&[0]), set(&[0])),
            &Bi::new(set(&[0]), set(&[0, 1]))
        ));
        assert!(leq_p2(
            &l,
            &Bi::new(set(&[0]), set(&[0, 1])),
            &Bi::new(set(&[0]), set(&[0]))
        ));
    }

    #[test]
    fn truth_ordering_on_quads() {
        let l = PowersetLattice::new(4);
        let s = l.top();
        let e = AtomSet::new();
        let bot = Tetra::new(e.clone(), e.clone(), e.clone(), e.clone());
        assert!(leq_t4(
            &l,
            &bot,
            &Tetra::new(s.clone(), s.clone(), s.clone(), s.clone())
        ));
        assert!(!leq_t4(
            &l,
            &Tetra::new(set(&[0]), e.clone(), e.clone(), e.clone()),
            &Tetra::new(e, s.clone(), s.clone(), s)
        ));
        assert!(leq_t4(
            &l,
            &Tetra::new(set(&[0]), set(&[1]), AtomSet::new(), set(&[2])),
            &Tetra::new(set(&[0]), set(&[1, 2]), set(&[3]), set(&[2]))
        ));
    }

    #[test]
    fn precision_ordering_on_quads() {
        let l = PowersetLattice::new(4);
        let s = l.top();
        let e = AtomSet::new();
        let bot = bottom_p4(&l);
        for y in [
            top_p4(&l),
            Tetra::new(set(&[0]), set(&[3]), set(&[1]), set(&[2])),
            bot.clone(),
        ] {
            assert!(leq_p4(&l, &bot, &y));
        }
        let x = Tetra::new(e.clone(), set(&[2]), s.clone(), set(&[0]));
        let y = Tetra::new(e.clone(), set(&[2]), s.clone(), set(&[0, 1]));
        assert!(!leq_p4(&l, &x, &y));
        let x = Tetra::new(set(&[0]), e, s.clone(), s);
        let y = Tetra::new(set(&[0, 1]), set(&[2]), set(&[0, 1]), set(&[0, 1]));
        assert!(leq_p4(&l, &x, &y));
        assert!(leq_p4_via_truth(&l, &x, &y));
        assert!(leq_p4_via_precision(&l, &x, &y));
    }

    #[test]
    fn three_lattice_complement_table() {
        let l = ThreeLattice;
        assert_eq!(l.complement(&Three::Bot), Three::Top);
        assert_eq!(l.complement(&Three::Plus), Three::Plus);
        assert_eq!(l.complement(&Three::Top), Three::Bot);
        for a in Three::ALL {
            for b in Three::ALL {
                assert_eq!(l.leq(&a, &b), l.leq(&l.complement(&b), &l.complement(&a)));
            }
        }
    }

    #[test]
    fn kleene_iteration() {
        let l = PowersetLattice::new(2);
        assert_eq!(
            lfp(|s: &AtomSet| s.clone(), l.bot(), 4).unwrap(),
            AtomSet::new()
        );
        let add_a = |s: &AtomSet| s | &AtomSet::singleton(0);
        assert_eq!(lfp(add_a, l.bot(), 4).unwrap(), AtomSet::singleton(0));
        let chain = lfp_chain(add_a, l.bot(), 4).unwrap();
        assert_eq!(chain, vec![AtomSet::new(), AtomSet::singleton(0)]);
    }

    #[test]
    fn kleene_iteration_gives_up() {
        let flip = |x: &Three| {
            if *x == Three::Bot {
                Three::Top
            } else {
                Three::Bot
            }
        };
        assert_eq!(
            lfp(flip, Three::Bot, 5),
            Err(Error::NonConvergence { max_iters: 5 })
        );
    }

    #[test]
    fn approximations_in_four_slots() {
        // a=0, a'=1, b=2, c=3
        let l = PowersetLattice::new(4);
        let s = l.top();
        let e = AtomSet::new();
        assert_eq!(
            to_tetra(&l, &Bi::new(e.clone(), s.clone())),
            Tetra::new(e.clone(), e.clone(), s.clone(), s.clone())
        );
        assert_eq!(
            to_tetra(&l, &Bi::new(set(&[1]), set(&[1]))),
            Tetra::new(set(&[1]), set(&[0, 2, 3]), set(&[0, 2, 3]), set(&[1]))
        );
        assert_eq!(
            to_tetra(&l, &Bi::new(s.clone(), s.clone())),
            Tetra::new(s.clone(), e.clone(), e.clone(), s.clone())
        );
        assert_eq!(project_14(&bottom_p4(&l)), Bi::new(e, s));
        assert_eq!(
            project_14(&Tetra::new(set(&[0]), set(&[1]), set(&[2]), set(&[3]))),
            Bi::new(set(&[0]), set(&[3]))
        );
        let ap = Bi::new(set(&[0]), set(&[0, 1]));
        assert_eq!(project_14(&to_tetra(&l, &ap)), ap);
    }

    #[test]
    fn flattened_and_nested_forms_agree() {
        let x = Tetra::new(Three::Bot, Three::Plus, Three::Top, Three::Plus);
        let (tf, up) = x.pairs();
        assert_eq!(Tetra::from_pairs(tf, up), x);
    }
}
