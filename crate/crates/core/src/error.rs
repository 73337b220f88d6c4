use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("no fixpoint reached within {max_iters} iterations")]
    NonConvergence { max_iters: usize },

    #[error("signature has {atoms} atoms; enumeration is capped at {cap}")]
    TooLarge { atoms: usize, cap: usize },

    #[error("sample pair {index} is not ordered under the precision ordering")]
    InvalidSample { index: usize },

    #[error("query mentions {atoms} atoms; truth-table entailment is capped at {cap}")]
    SignatureTooLarge { atoms: usize, cap: usize },
}
