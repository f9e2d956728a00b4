//! Quantifier-free first-order temporal logic with predicate abstraction.
//!
//! Flexible constants are pebbles that move over a domain as time passes.
//! Formulas talk about them only through the binder `<x. φ>(c)`, which
//! fixes `x` to the element `c` designates now. The crate provides:
//!
//! - [`syntax`] and [`parser`]: the formula AST, well-formedness, and a
//!   concrete syntax with an exact printer;
//! - [`model`]: finite trace models, either lassos or observed prefixes;
//! - [`eval`]: exact evaluation on lassos, three-valued on prefixes;
//! - [`props`]: named pebble properties as formula builders;
//! - [`equiv`]: pebble equivalence and the flicker extension;
//! - [`minsky`] and [`translate`]: two-counter machines, their encoding as
//!   sentences, and a certifier against the canonical model of a run;
//! - [`satsearch`]: an explicitly incomplete small-scope model finder;
//! - [`cli`]: the `pebble-ltl` command line.
//!
//! ```
//! use pebble_ltl::model::ModelBuilder;
//! use pebble_ltl::eval::{eval_sentence, Verdict};
//! use pebble_ltl::props::same;
//!
//! let m = ModelBuilder::new(["u", "v"])
//!     .constant("a", ["u", "v"])
//!     .constant("b", ["u", "u"])
//!     .lasso(1, 1)
//!     .build()
//!     .unwrap();
//! assert_eq!(eval_sentence(&m, &same("a", "b"), 0).unwrap(), Verdict::True);
//! assert_eq!(eval_sentence(&m, &same("a", "b"), 1).unwrap(), Verdict::False);
//! ```

pub mod cli;
pub mod equiv;
pub mod eval;
pub mod minsky;
pub mod model;
pub mod parser;
pub mod props;
pub mod satsearch;
pub mod syntax;
pub mod translate;

pub use eval::Verdict;
pub use model::TraceModel;
pub use syntax::Formula;
