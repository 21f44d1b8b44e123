//! Concrete and canonical syntax of enhanced regular expressions.
//!
//! Parsing yields a raw [`Term`] that mirrors the input as written. The
//! [`ExprStore`] turns terms into canonical, hash-consed [`Expr`] nodes whose
//! unions are flattened, sorted, deduplicated and free of `@0`, so two
//! expressions are similar exactly when their [`ExprId`]s coincide.

mod defs;
mod parse;
mod pretty;
mod store;
mod term;

pub use defs::{Definitions, HomTable};
pub use parse::parse_term;
pub use pretty::{pretty, pretty_term};
pub use store::{Expr, ExprId, ExprStore};
pub use term::Term;
