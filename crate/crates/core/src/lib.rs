//! Static type checking for the behavioural layer of a Jolie-style
//! service-oriented language.
//!
//! The crate is organised around a small pipeline:
//!
//! * [`ast`] — behaviours, expressions and communication ports, plus
//!   tree addressing ([`ast::Position`]) and variable-path enumeration;
//! * [`parser`] — concrete syntax: lexer, recursive-descent parser and
//!   round-trip pretty-printers for behaviours and typing contexts;
//! * [`context`] — typing contexts: declaration lists, parallel context
//!   trees and the membership/lookup/update operations the rules use;
//! * [`typing`] — the flow-sensitive typing judgment `Γ ⊢ B ▷ Γ′`,
//!   producing explicit derivation trees, and an independent local
//!   verifier for those trees;
//! * [`congruence`] — structural congruence for behaviours: rewrite
//!   rules, normalization, congruence decision with replayable traces,
//!   and transport of typing derivations along congruence steps;
//! * [`oracle`] — brute-force reference implementations (exhaustive
//!   derivation search, breadth-first congruence search, behaviour
//!   enumeration) used to cross-validate the main path, plus the
//!   self-test suites the CLI exposes.
//!
//! # Example
//!
//! ```
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! use bcheck_core::congruence::{congruent, normalize, transport};
//! use bcheck_core::parser::{parse_behaviour, parse_context};
//! use bcheck_core::{check_behaviour, verify_derivation};
//!
//! let ctx = parse_context("{ x0 : int } & { x1 : bool }")?;
//! let b = parse_behaviour("x0 = 1 | x1 = !x1")?;
//!
//! // Type-check: the result is a full derivation tree ending in the
//! // updated context, and it re-validates independently.
//! let d = check_behaviour(&ctx, &b)?;
//! assert_eq!(d.output, ctx);
//! verify_derivation(&d)?;
//!
//! // Structural congruence: decide it, get a replayable trace, and
//! // carry the derivation across each rewrite without re-checking.
//! let swapped = parse_behaviour("x1 = !x1 | x0 = 1")?;
//! let trace = congruent(&b, &swapped).expect("congruent terms");
//! assert_eq!(trace.replay(&b).as_ref(), Some(&swapped));
//! assert_eq!(normalize(&b), normalize(&swapped));
//!
//! let mut d2 = d;
//! for step in trace.steps() {
//!     d2 = transport(&d2, step)?;
//! }
//! assert_eq!(d2.subject, swapped);
//! verify_derivation(&d2)?;
//! # Ok(())
//! # }
//! ```

pub mod ast;
pub mod congruence;
pub mod context;
pub mod oracle;
pub mod parser;
pub mod typing;

pub use ast::{Behaviour, BinOp, Eta, EtaHat, Expr, Ident, Position, Variable};
pub use context::{Context, Ctx, NativeType, TypeDecl};
pub use typing::{check_behaviour, verify_derivation, Derivation, RuleTag, TypeError};
