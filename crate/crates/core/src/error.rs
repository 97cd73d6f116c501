use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{d} is not a divisor of {n}")]
    NotADivisor { n: usize, d: usize },

    #[error("modulus {n} exceeds the configured limit {limit}")]
    ModulusTooLarge { n: usize, limit: usize },

    #[error("invalid modulus {0}")]
    InvalidModulus(usize),

    #[error("{g} is not a unit modulo {n}")]
    NotAUnit { n: usize, g: usize },

    #[error("residue {g} does not lie in the subgroup of order {u} of Z_{n}")]
    NotInSubgroup { n: usize, u: usize, g: usize },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("identity not singleton: the cell containing 0 is {0:?}")]
    IdentityNotSingleton(Vec<usize>),

    #[error("not inverse-closed: -{x} = {neg} is not in the cell {cell:?}'s negation")]
    NotInverseClosed { x: usize, neg: usize, cell: Vec<usize> },

    #[error("structure constants not constant on cell ({x:?},{y:?},{z:?}): {z1} has {c1} representations, {z2} has {c2}")]
    StructureConstants {
        x: Vec<usize>,
        y: Vec<usize>,
        z: Vec<usize>,
        z1: usize,
        c1: usize,
        z2: usize,
        c2: usize,
    },

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(usize, usize),

    #[error("not an A-section: {u}/{l} over Z_{n}")]
    NotASection { n: usize, u: usize, l: usize },

    #[error("section rings differ: left {left:?}, right {right:?}")]
    SectionMismatch { left: Vec<Vec<usize>>, right: Vec<Vec<usize>> },

    #[error("ring sizes do not fit the section: {0}")]
    ShapeMismatch(String),

    #[error("radical depends on the basic set: {0} vs {1}")]
    RadicalInconsistent(usize, usize),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("section not invariant: generator {0} does not preserve the block systems")]
    SectionNotInvariant(usize),

    #[error("partition is not invariant under generator {0}")]
    NotInvariant(usize),

    #[error("target permutation is not in the induced group")]
    NotInInducedGroup,

    #[error("group M is not transitive")]
    NotTransitive,

    #[error("induced groups on the section differ: orders {0} and {1}")]
    InducedMismatch(String, String),

    #[error("the {0}/{1}-condition does not hold")]
    SConditionFails(usize, usize),

    #[error("class is not isolated")]
    NotIsolated,

    #[error("ring B is not an extension of the section ring")]
    NotARefinement,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("automorphism search budget exhausted after {nodes} nodes")]
    SearchBudget { nodes: usize },

    #[error("automorphism search refused: n = {n} exceeds the search bound {bound}")]
    AutBound { n: usize, bound: usize },

    #[error("both groups exceed the enumeration threshold {0}")]
    IntersectionThreshold(usize),

    #[error("induced group exceeds the lifting threshold {0}")]
    LiftThreshold(usize),

    #[error("enumeration budget exceeded: {0}")]
    EnumerationBudget(String),
}

impl Error {
    /// Errors caused by a configured resource bound rather than by the input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            Error::ModulusTooLarge { .. }
                | Error::SearchBudget { .. }
                | Error::AutBound { .. }
                | Error::IntersectionThreshold(_)
                | Error::LiftThreshold(_)
                | Error::EnumerationBudget(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
