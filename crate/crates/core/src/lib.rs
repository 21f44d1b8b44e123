pub mod automata;
pub mod derivation;
pub mod dspace;
pub mod error;
pub mod operators;
pub mod oracle;
pub mod session;
pub mod symbol;
pub mod syntax;
pub mod transducer;

pub use error::{Error, Result};
pub use operators::{Op, Registry};
pub use symbol::{Alphabet, Symbol, Word};
pub use syntax::{Definitions, Expr, ExprId, ExprStore, Term};
pub use automata::{Dfa, EquivResult, Side};
pub use derivation::Nullability;
pub use session::Session;
