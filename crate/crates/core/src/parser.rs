//! Concrete syntax: lexing, parsing, and pretty-printing.
//!
//! Behaviours use an operator syntax where `;` binds tighter than `|`
//! and both associate to the right; parentheses override grouping:
//!
//! ```text
//! behaviour ::= par
//! par       ::= seq ("|" par)?
//! seq       ::= atom (";" seq)?
//! atom      ::= "nil"
//!             | "if" expr "then" atom "else" atom
//!             | "while" "[" expr "]" atom
//!             | variable "=" expr
//!             | op "(" variable ")"                          # one-way input
//!             | op "(" variable ")" "(" variable ")" "{" behaviour "}"
//!             | op "@" loc "(" expr ")"                      # notification
//!             | op "@" loc "(" expr ")" "(" variable ")"     # solicit-response
//!             | "inputchoice" ("[" eta "]" "{" behaviour "}")+
//!             | "wait" "(" chan "," op "," loc "," variable ")"
//!             | "exec" "(" chan "," op "," variable ")" "{" behaviour "}"
//!             | "(" behaviour ")"
//! eta       ::= op "(" variable ")" ("(" variable ")" "{" behaviour "}")?
//! ```
//!
//! Expressions:
//!
//! ```text
//! expr    ::= or
//! or      ::= and ("||" and)*            # left-associative
//! and     ::= cmp ("&&" cmp)*            # left-associative
//! cmp     ::= not (("==" | "<") not)?    # non-associative
//! not     ::= "!" not | primary
//! primary ::= "true" | "false" | int | long | double | string
//!           | variable | "(" expr ")"
//! ```
//!
//! Integer literals are 32-bit (`42`), longs take an `L` suffix
//! (`42L`), doubles have a fraction or exponent (`4.2`, `1e300`) and
//! must be finite, and strings are double-quoted with the escapes
//! `\\ \" \n \r \t`.  A leading `-` is part of a numeric literal.
//! Comments run from `#` to the end of the line.
//!
//! Contexts are `&`-separated declaration blocks, `&` associating to
//! the left, with parentheses for explicit grouping:
//!
//! ```text
//! context  ::= ctx ("&" ctx)*
//! ctx      ::= "{" (decl ("," decl)*)? "}" | "(" context ")"
//! decl     ::= variable ":" type
//!            | op ":" "<" type ("," type)? ">"               # input port
//!            | op "@" loc ":" "<" type ("," type)? ">"       # output port
//! type     ::= "bool" | "int" | "double" | "long" | "string" | "raw" | "void"
//! ```
//!
//! Variables are written `x0`, `x1`, … by default.  A [`Session`] in
//! [`VarMode::Paths`] instead accepts dotted names (`amount.fruit`) in
//! every variable position and numbers them by first occurrence, so a
//! context and behaviour parsed through one session share one
//! numbering.
//!
//! Keywords (including the type names) are reserved and cannot be used
//! as operation, location, channel, or path names.
//!
//! Parsing a behaviour also yields a [`SpanTree`] giving the source
//! span of every node, addressed by the same positions that derivation
//! traces use.  The pretty-printers in this module invert the parser:
//! printing any value and reparsing it yields the value back.

mod lexer;
mod parse;
mod pretty;

pub use lexer::Span;
pub use parse::{
    parse_behaviour, parse_context, ParseError, ParsedBehaviour, Session, SpanTree, VarMode,
};
