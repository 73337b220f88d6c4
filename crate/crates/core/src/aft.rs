//! Approximators, stable revision, and the recurrent (tetralattice) variant.
//!
//! A [`BiApproximator`] maps pairs `(T, P)` to pairs. A [`TetraApproximator`]
//! maps 4-tuples `(T, F, U, P)`; when it is *recurrent*, slots 2 and 3 of its
//! output are always `(P̄, T̄)` of its input, so that stable revision carries the
//! complement of the previous bounds into the next round.
//!
//! Stable revision fixes one half of the input and computes a least fixpoint
//! over the other half, starting from bottom:
//!
//! ```text
//! S(o)(T, P)             = (lfp o(·, P)₁, lfp o(T, ·)₂)
//! S(o)((T, F), (U, P))   = (lfp o(·, (U, P))₁,₂, lfp o((T, F), ·)₃,₄)
//! ```
//!
//! The inner fixpoints of the 4-tuple form are taken in `⟨L², ⪯²t⟩`.

use rayon::prelude::*;

use crate::atoms::AtomSet;
use crate::error::Error;
use crate::lattice::{
    bottom_p4, bottom_t2, leq_p2, leq_p4, project_14, to_tetra, try_lfp_chain, Approximation, Bi,
    Lattice, PowersetLattice, Tetra,
};

type Elem<O> = <<O as TetraApproximator>::Lattice as Lattice>::Elem;
type Logged<O> = (Tetra<Elem<O>>, InnerLog<Elem<O>>);
type Traced<O> = (Tetra<Elem<O>>, StableTrace<Elem<O>>);
type SamplePairs<O> = [(Tetra<Elem<O>>, Tetra<Elem<O>>)];

pub trait BiApproximator {
    type Lattice: Lattice;

    fn lattice(&self) -> &Self::Lattice;
    fn apply(
        &self,
        x: &Bi<<Self::Lattice as Lattice>::Elem>,
    ) -> Bi<<Self::Lattice as Lattice>::Elem>;
}

pub trait TetraApproximator {
    type Lattice: Lattice;

    fn lattice(&self) -> &Self::Lattice;
    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error>;

    /// Whether slots 2 and 3 are the forced complements `(P̄, T̄)`.
    fn is_recurrent(&self) -> bool {
        false
    }
}

impl<O: TetraApproximator + ?Sized> TetraApproximator for &O {
    type Lattice = O::Lattice;

    fn lattice(&self) -> &Self::Lattice {
        (**self).lattice()
    }

    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error> {
        (**self).apply(x)
    }

    fn is_recurrent(&self) -> bool {
        (**self).is_recurrent()
    }
}

/// A pair operator given by a closure.
pub struct BiFn<L, F> {
    lattice: L,
    f: F,
}

impl<L, F> BiFn<L, F>
where
    L: Lattice,
    F: Fn(&Bi<L::Elem>) -> Bi<L::Elem>,
{
    pub fn new(lattice: L, f: F) -> Self {
        Self { lattice, f }
    }
}

impl<L, F> BiApproximator for BiFn<L, F>
where
    L: Lattice,
    F: Fn(&Bi<L::Elem>) -> Bi<L::Elem>,
{
    type Lattice = L;

    fn lattice(&self) -> &L {
        &self.lattice
    }

    fn apply(&self, x: &Bi<L::Elem>) -> Bi<L::Elem> {
        (self.f)(x)
    }
}

/// A 4-tuple operator given by a closure.
pub struct TetraFn<L, F> {
    lattice: L,
    f: F,
    recurrent: bool,
}

impl<L, F> TetraFn<L, F>
where
    L: Lattice,
    F: Fn(&Tetra<L::Elem>) -> Tetra<L::Elem>,
{
    pub fn new(lattice: L, f: F) -> Self {
        Self {
            lattice,
            f,
            recurrent: false,
        }
    }

    /// Marks the operator as recurrent. Nothing is checked here; see
    /// [`check_recurrent`].
    pub fn recurrent(mut self) -> Self {
        self.recurrent = true;
        self
    }
}

impl<L, F> TetraApproximator for TetraFn<L, F>
where
    L: Lattice,
    F: Fn(&Tetra<L::Elem>) -> Tetra<L::Elem>,
{
    type Lattice = L;

    fn lattice(&self) -> &L {
        &self.lattice
    }

    fn apply(&self, x: &Tetra<L::Elem>) -> Result<Tetra<L::Elem>, Error> {
        Ok((self.f)(x))
    }

    fn is_recurrent(&self) -> bool {
        self.recurrent
    }
}

/// Lifts a pair approximator to a recurrent one:
/// `o⁴(T, F, U, P) = (o(T, P)₁, P̄, T̄, o(T, P)₂)`.
pub struct Lifted<B>(pub B);

impl<B: BiApproximator> TetraApproximator for Lifted<B> {
    type Lattice = B::Lattice;

    fn lattice(&self) -> &B::Lattice {
        self.0.lattice()
    }

    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error> {
        let l = self.0.lattice();
        let out = self.0.apply(&project_14(x));
        Ok(Tetra::new(
            out.first,
            l.complement(&x.p),
            l.complement(&x.t),
            out.second,
        ))
    }

    fn is_recurrent(&self) -> bool {
        true
    }
}

fn inner_cap<L: Lattice>(l: &L) -> usize {
    2 * l.height() + 2
}

fn outer_cap<L: Lattice>(l: &L) -> usize {
    4 * l.height() + 2
}

pub fn stable_revision_bi<B: BiApproximator>(
    o: &B,
    x: &Bi<<B::Lattice as Lattice>::Elem>,
) -> Result<Bi<<B::Lattice as Lattice>::Elem>, Error> {
    let l = o.lattice();
    let cap = l.height() + 2;
    let lower = crate::lattice::lfp(
        |t| o.apply(&Bi::new(t.clone(), x.second.clone())).first,
        l.bot(),
        cap,
    )?;
    let upper = crate::lattice::lfp(
        |p| o.apply(&Bi::new(x.first.clone(), p.clone())).second,
        l.bot(),
        cap,
    )?;
    Ok(Bi::new(lower, upper))
}

/// Iterates of the two inner least fixpoints of one stable-revision step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerLog<E> {
    /// `(T', F')` iterates from `(⊥, ⊥)`.
    pub lower: Vec<Bi<E>>,
    /// `(U', P')` iterates from `(⊥, ⊥)`.
    pub upper: Vec<Bi<E>>,
}

pub fn stable_revision_tetra<O: TetraApproximator>(
    o: &O,
    x: &Tetra<Elem<O>>,
) -> Result<Tetra<Elem<O>>, Error> {
    stable_revision_logged(o, x).map(|(out, _)| out)
}

/// [`stable_revision_tetra`] together with the inner iteration chains.
pub fn stable_revision_logged<O: TetraApproximator>(
    o: &O,
    x: &Tetra<Elem<O>>,
) -> Result<Logged<O>, Error> {
    let l = o.lattice();
    let cap = inner_cap(l);
    let (fixed_tf, fixed_up) = x.pairs();
    let lower = try_lfp_chain(
        |tf: &Bi<Elem<O>>| {
            Ok(o.apply(&Tetra::from_pairs(tf.clone(), fixed_up.clone()))?
                .tf())
        },
        bottom_t2(l),
        cap,
    )?;
    let upper = try_lfp_chain(
        |up: &Bi<Elem<O>>| {
            Ok(o.apply(&Tetra::from_pairs(fixed_tf.clone(), up.clone()))?
                .up())
        },
        bottom_t2(l),
        cap,
    )?;
    let out = Tetra::from_pairs(
        lower.last().expect("non-empty").clone(),
        upper.last().expect("non-empty").clone(),
    );
    Ok((out, InnerLog { lower, upper }))
}

/// `S(o)` as an operator in its own right. It is recurrent whenever `o` is
/// `⪯⁴p`-monotone.
pub struct StableRevision<O>(pub O);

impl<O: TetraApproximator> TetraApproximator for StableRevision<O> {
    type Lattice = O::Lattice;

    fn lattice(&self) -> &O::Lattice {
        self.0.lattice()
    }

    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error> {
        stable_revision_tetra(&self.0, x)
    }

    fn is_recurrent(&self) -> bool {
        true
    }
}

/// The outer iteration of stable revision from `⪯⁴p`-bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableTrace<E> {
    /// `states[0]` is the bottom element; `states[i + 1] = S(o)(states[i])`.
    /// The last state is the fixpoint.
    pub states: Vec<Tetra<E>>,
    /// `inner[i]` logs the application of `S(o)` to `states[i]`.
    pub inner: Vec<InnerLog<E>>,
}

impl<E> StableTrace<E> {
    pub fn fixpoint(&self) -> &Tetra<E> {
        self.states
            .last()
            .expect("trace holds at least the bottom element")
    }
}

pub fn least_stable_fixpoint<O: TetraApproximator>(o: &O) -> Result<Traced<O>, Error> {
    let l = o.lattice();
    let cap = outer_cap(l);
    let mut states = vec![bottom_p4(l)];
    let mut inner = Vec::new();
    for _ in 0..cap {
        let current = states.last().expect("non-empty");
        let (next, log) = stable_revision_logged(o, current)?;
        inner.push(log);
        if &next == current {
            let trace = StableTrace { states, inner };
            return Ok((trace.fixpoint().clone(), trace));
        }
        states.push(next);
    }
    Err(Error::NonConvergence { max_iters: cap })
}

/// Index of the first sample whose image does not have `(P̄, T̄)` in slots 2, 3.
pub fn find_recurrence_violation<O: TetraApproximator>(
    o: &O,
    samples: &[Tetra<Elem<O>>],
) -> Result<Option<usize>, Error> {
    let l = o.lattice();
    for (i, x) in samples.iter().enumerate() {
        let y = o.apply(x)?;
        if y.f != l.complement(&x.p) || y.u != l.complement(&x.t) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub fn check_recurrent<O: TetraApproximator>(
    o: &O,
    samples: &[Tetra<Elem<O>>],
) -> Result<bool, Error> {
    Ok(find_recurrence_violation(o, samples)?.is_none())
}

/// Index of the first pair `x ⪯⁴p y` with `o(x)₁,₄ ⋠²p o(y)₁,₄`.
///
/// Only the `(1, 4)` projections are compared; for a recurrent operator this
/// is equivalent to `⪯⁴p`-monotonicity on the sampled pairs.
pub fn find_p4_violation<O: TetraApproximator>(
    o: &O,
    pairs: &SamplePairs<O>,
) -> Result<Option<usize>, Error> {
    let l = o.lattice();
    for (index, (x, y)) in pairs.iter().enumerate() {
        if !leq_p4(l, x, y) {
            return Err(Error::InvalidSample { index });
        }
    }
    for (index, (x, y)) in pairs.iter().enumerate() {
        let (ox, oy) = (o.apply(x)?, o.apply(y)?);
        if !leq_p2(l, &project_14(&ox), &project_14(&oy)) {
            return Ok(Some(index));
        }
    }
    Ok(None)
}

pub fn check_p4_monotone<O: TetraApproximator>(
    o: &O,
    pairs: &SamplePairs<O>,
) -> Result<bool, Error> {
    Ok(find_p4_violation(o, pairs)?.is_none())
}

/// `o⁺`: slot 1 is joined with `Ū`, slot 4 loses `F`.
pub struct Increasing<O>(pub O);

/// `o⁻`: slot 1 is met with `Ū`, slot 4 is joined with `F̄`.
pub struct Decreasing<O>(pub O);

pub fn make_increasing<O: TetraApproximator>(o: O) -> Increasing<O> {
    Increasing(o)
}

pub fn make_decreasing<O: TetraApproximator>(o: O) -> Decreasing<O> {
    Decreasing(o)
}

impl<O: TetraApproximator> TetraApproximator for Increasing<O> {
    type Lattice = O::Lattice;

    fn lattice(&self) -> &O::Lattice {
        self.0.lattice()
    }

    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error> {
        let l = self.0.lattice();
        let y = self.0.apply(x)?;
        Ok(Tetra::new(
            l.join(&y.t, &l.complement(&x.u)),
            l.complement(&x.p),
            l.complement(&x.t),
            l.meet(&y.p, &l.complement(&x.f)),
        ))
    }

    fn is_recurrent(&self) -> bool {
        true
    }
}

impl<O: TetraApproximator> TetraApproximator for Decreasing<O> {
    type Lattice = O::Lattice;

    fn lattice(&self) -> &O::Lattice {
        self.0.lattice()
    }

    fn apply(&self, x: &Tetra<Elem<Self>>) -> Result<Tetra<Elem<Self>>, Error> {
        let l = self.0.lattice();
        let y = self.0.apply(x)?;
        Ok(Tetra::new(
            l.meet(&y.t, &l.complement(&x.u)),
            l.complement(&x.p),
            l.complement(&x.t),
            l.join(&y.p, &l.complement(&x.f)),
        ))
    }

    fn is_recurrent(&self) -> bool {
        true
    }
}

pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    /// Refuse signatures with more atoms than this.
    pub cap: usize,
    /// Also try pairs with `T ⊄ P`.
    pub include_inconsistent: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_ENUMERATION_CAP,
            include_inconsistent: false,
        }
    }
}

/// All `(T, P)` whose 4-tuple form `(T, P̄, T̄, P)` is a fixpoint of `S(o)`,
/// sorted by `T` then `P`.
///
/// By default only approximations with `T ⊆ P` are tried (`3ⁿ` candidates);
/// with `include_inconsistent` every pair is tried (`4ⁿ`).
pub fn enumerate_stable_fixpoints<O>(
    o: &O,
    opts: EnumerateOptions,
) -> Result<Vec<Approximation>, Error>
where
    O: TetraApproximator<Lattice = PowersetLattice> + Sync,
{
    let l = o.lattice();
    let n = l.width();
    if n > opts.cap {
        return Err(Error::TooLarge {
            atoms: n,
            cap: opts.cap,
        });
    }
    let full = l.top();
    let uppers = full.subsets();
    let found: Result<Vec<Vec<Approximation>>, Error> = uppers
        .par_iter()
        .map(|p| {
            let lowers = if opts.include_inconsistent {
                full.subsets()
            } else {
                p.subsets()
            };
            let mut hits = Vec::new();
            for t in lowers {
                let ap = Bi::new(t, p.clone());
                if is_stable_fixpoint(o, &ap)? {
                    hits.push(ap);
                }
            }
            Ok(hits)
        })
        .collect();
    let mut all: Vec<Approximation> = found?.into_iter().flatten().collect();
    all.sort();
    Ok(all)
}

/// Whether `(T, P̄, T̄, P)` is a fixpoint of `S(o)`.
pub fn is_stable_fixpoint<O>(o: &O, ap: &Bi<AtomSet>) -> Result<bool, Error>
where
    O: TetraApproximator<Lattice = PowersetLattice>,
{
    let x = to_tetra(o.lattice(), ap);
    Ok(stable_revision_tetra(o, &x)? == x)
}
