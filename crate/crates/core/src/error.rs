use thiserror::Error;

/// Every failure the library reports. Variants carry the names of the
/// offending objects/morphisms so a report can be re-checked by hand.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("missing composite for the composable pair ({f}, {g})")]
    MissingComposite { f: String, g: String },

    #[error("composition is not associative on ({f}, {g}, {h})")]
    NonAssociative { f: String, g: String, h: String },

    #[error("bad identity {morphism} on {object}: {reason}")]
    BadIdentity {
        object: String,
        morphism: String,
        reason: String,
    },

    #[error("malformed category: {0}")]
    Malformed(String),

    #[error("not a functor: {0}")]
    NotAFunctor(String),

    #[error("not natural at {morphism}: {detail}")]
    NotNatural { morphism: String, detail: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("size cap exceeded: {what} needs {actual}, cap is {cap}")]
    SizeCapExceeded { what: String, actual: usize, cap: usize },

    #[error("category is not thin: {0}")]
    NotThin(String),

    #[error("not a preorder: {0}")]
    NotAPreorder(String),

    #[error("not antisymmetric: {x} and {y} are distinct but isomorphic")]
    NotAntisymmetric { x: String, y: String },

    #[error("not monotone: {0}")]
    NotMonotone(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("element {element} does not intertwine the homomorphisms at {witness}")]
    NotIntertwining { element: String, witness: String },

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("not distributive: {a} ∧ ({b} ∨ {c}) differs from ({a} ∧ {b}) ∨ ({a} ∧ {c})")]
    NotDistributive { a: String, b: String, c: String },

    #[error("not a V-category: {0}")]
    NotAVCategory(String),

    #[error("not a V-functor: {0}")]
    NotAVFunctor(String),

    #[error("square is not an orthogonality instance: {0}")]
    NotOrthogonalInput(String),

    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("{count} solutions where exactly one was expected: {detail}")]
    MultipleSolutions { count: usize, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
