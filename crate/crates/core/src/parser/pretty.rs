//! Pretty-printers.
//!
//! Each `Display` implementation here emits the concrete syntax parsed
//! by this module, inserting parentheses exactly where the grammar
//! needs them: parsing the printed text yields the original value.

use std::fmt;

use crate::ast::{Behaviour, BinOp, Eta, EtaHat, Expr};
use crate::context::Context;

// Behaviour precedence levels: a node is parenthesised when it appears
// where the grammar demands something that binds at least as tightly.
const B_PAR: u8 = 0;
const B_SEQ: u8 = 1;
const B_ATOM: u8 = 2;

fn behaviour_level(b: &Behaviour) -> u8 {
    match b {
        Behaviour::Par(_, _) => B_PAR,
        Behaviour::Seq(_, _) => B_SEQ,
        _ => B_ATOM,
    }
}

fn write_behaviour(f: &mut fmt::Formatter<'_>, b: &Behaviour, level: u8) -> fmt::Result {
    if behaviour_level(b) < level {
        write!(f, "(")?;
        write_behaviour(f, b, B_PAR)?;
        return write!(f, ")");
    }
    match b {
        Behaviour::Par(a, rest) => {
            // `|` is right-associative: the left operand must bind
            // tighter, the right may be another parallel.
            write_behaviour(f, a, B_SEQ)?;
            write!(f, " | ")?;
            write_behaviour(f, rest, B_PAR)
        }
        Behaviour::Seq(a, rest) => {
            write_behaviour(f, a, B_ATOM)?;
            write!(f, "; ")?;
            write_behaviour(f, rest, B_SEQ)
        }
        Behaviour::Nil => write!(f, "nil"),
        Behaviour::If(guard, then_b, else_b) => {
            write!(f, "if {guard} then ")?;
            write_behaviour(f, then_b, B_ATOM)?;
            write!(f, " else ")?;
            write_behaviour(f, else_b, B_ATOM)
        }
        Behaviour::While(guard, body) => {
            write!(f, "while [{guard}] ")?;
            write_behaviour(f, body, B_ATOM)
        }
        Behaviour::Assign(x, e) => write!(f, "{x} = {e}"),
        Behaviour::Input(eta) => write!(f, "{eta}"),
        Behaviour::Output(eta_hat) => write!(f, "{eta_hat}"),
        Behaviour::InputChoice(branches) => {
            write!(f, "inputchoice")?;
            for (eta, body) in branches {
                write!(f, " [{eta}]{{ ")?;
                write_behaviour(f, body, B_PAR)?;
                write!(f, " }}")?;
            }
            Ok(())
        }
        Behaviour::Wait(chan, op, loc, x) => write!(f, "wait({chan}, {op}, {loc}, {x})"),
        Behaviour::Exec(chan, op, x, body) => {
            write!(f, "exec({chan}, {op}, {x}){{ ")?;
            write_behaviour(f, body, B_PAR)?;
            write!(f, " }}")
        }
    }
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_behaviour(f, self, B_PAR)
    }
}

impl fmt::Display for Eta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eta::OneWay(op, x) => write!(f, "{op}({x})"),
            Eta::RequestResponse(op, x, reply, body) => {
                write!(f, "{op}({x})({reply}){{ ")?;
                write_behaviour(f, body, B_PAR)?;
                write!(f, " }}")
            }
        }
    }
}

impl fmt::Display for EtaHat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaHat::Notification(op, loc, e) => write!(f, "{op} @ {loc}({e})"),
            EtaHat::SolicitResponse(op, loc, e, x) => write!(f, "{op} @ {loc}({e})({x})"),
        }
    }
}

// Expression precedence levels, loosest first.
const E_OR: u8 = 0;
const E_AND: u8 = 1;
const E_CMP: u8 = 2;
const E_NOT: u8 = 3;
const E_PRIMARY: u8 = 4;

fn expr_level(e: &Expr) -> u8 {
    match e {
        Expr::BinOp(BinOp::Or, _, _) => E_OR,
        Expr::BinOp(BinOp::And, _, _) => E_AND,
        Expr::BinOp(BinOp::Eq | BinOp::Lt, _, _) => E_CMP,
        Expr::Not(_) => E_NOT,
        _ => E_PRIMARY,
    }
}

fn write_expr(f: &mut fmt::Formatter<'_>, e: &Expr, level: u8) -> fmt::Result {
    if expr_level(e) < level {
        write!(f, "(")?;
        write_expr(f, e, E_OR)?;
        return write!(f, ")");
    }
    match e {
        Expr::BinOp(op, a, b) => {
            // `||` and `&&` associate to the left; comparisons do not
            // associate at all, so both operands step up a level.
            let (left, right) = match op {
                BinOp::Or => (E_OR, E_AND),
                BinOp::And => (E_AND, E_CMP),
                BinOp::Eq | BinOp::Lt => (E_NOT, E_NOT),
            };
            write_expr(f, a, left)?;
            write!(f, " {} ", op.symbol())?;
            write_expr(f, b, right)
        }
        Expr::Not(inner) => {
            write!(f, "!")?;
            write_expr(f, inner, E_NOT)
        }
        Expr::BoolLit(v) => write!(f, "{v}"),
        Expr::IntLit(n) => write!(f, "{n}"),
        Expr::LongLit(n) => write!(f, "{n}L"),
        // `{:?}` prints the shortest digits that read back exactly.
        Expr::DoubleLit(d) => write!(f, "{:?}", d.into_inner()),
        Expr::StringLit(s) => {
            write!(f, "\"")?;
            for c in s.chars() {
                match c {
                    '\\' => write!(f, "\\\\")?,
                    '"' => write!(f, "\\\"")?,
                    '\n' => write!(f, "\\n")?,
                    '\r' => write!(f, "\\r")?,
                    '\t' => write!(f, "\\t")?,
                    other => write!(f, "{other}")?,
                }
            }
            write!(f, "\"")
        }
        Expr::Var(x) => write!(f, "{x}"),
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self, E_OR)
    }
}

fn write_context(f: &mut fmt::Formatter<'_>, g: &Context, nested: bool) -> fmt::Result {
    match g {
        Context::Leaf(ctx) => {
            if ctx.decls().is_empty() {
                return write!(f, "{{ }}");
            }
            write!(f, "{{ ")?;
            for (i, d) in ctx.decls().iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{d}")?;
            }
            write!(f, " }}")
        }
        Context::Par(l, r) => {
            // `&` is left-associative: a right-nested pairing needs
            // explicit parentheses.
            if nested {
                write!(f, "(")?;
            }
            write_context(f, l, false)?;
            write!(f, " & ")?;
            write_context(f, r, true)?;
            if nested {
                write!(f, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_context(f, self, false)
    }
}

#[cfg(test)]
mod tests {
    use crate::ast::{Ident, Variable};
    use crate::context::{NativeType, TypeDecl};
    use crate::parser::{parse_behaviour, parse_context};

    fn round_trip(src: &str) {
        let b = parse_behaviour(src).expect("source parses");
        let printed = b.to_string();
        assert_eq!(printed, src, "printer canonicalises differently");
        assert_eq!(parse_behaviour(&printed).unwrap(), b);
    }

    #[test]
    fn prints_canonical_sources_verbatim() {
        for src in [
            "nil",
            "x0 = 1; nil",
            "(x0 = 1; nil); nil",
            "nil | x0 = true",
            "(nil | nil); nil",
            "nil; (nil | nil)",
            "(nil | nil) | nil",
            "if true then (nil; nil) else nil",
            "while [x0 < 2] x0 = 1",
            "while [true] (x0 = 1; nil)",
            "o(x0)(x1){ x1 = 2; nil }",
            "o @ l(\"a\\nb\")(x2)",
            "inputchoice [o(x0)]{ nil } [p(x1)(x2){ nil }]{ nil | nil }",
            "wait(c, o, l, x0); exec(c, o, x1){ nil }",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn parenthesises_sequencing_inside_parallel_correctly() {
        let b = parse_behaviour("x0 = 1; (nil | nil)").unwrap();
        assert_eq!(b.to_string(), "x0 = 1; (nil | nil)");
        let b = parse_behaviour("x0 = 1; nil | nil").unwrap();
        assert_eq!(b.to_string(), "x0 = 1; nil | nil");
    }

    #[test]
    fn expression_printing_inserts_minimal_parentheses() {
        for src in [
            "x0 = true || false && 1 < 2",
            "x0 = (true || false) && true",
            "x0 = true || (false || true)",
            "x0 = !(x1 == true)",
            "x0 = !!x1",
            "x0 = (1 < 2) == (3 < 4)",
            "x0 = -7 < 2",
            "x0 = 42L",
            "x0 = -0.5",
            "x0 = 1e300",
            "x0 = \"tab\\t quote\\\" backslash\\\\\"",
        ] {
            round_trip(src);
        }
    }

    #[test]
    fn prints_contexts_with_left_associative_grouping() {
        for src in [
            "{ }",
            "{ x0 : int }",
            "{ x0 : int, o : <string>, p @ l : <int, bool> }",
            "{ } & { } & { }",
            "{ } & ({ } & { })",
            "({ } & { }) & ({ x0 : int } & { })",
        ] {
            let g = parse_context(src).unwrap();
            let printed = g.to_string();
            let expected = match src {
                // The leading group is redundant under left associativity.
                "({ } & { }) & ({ x0 : int } & { })" => "{ } & { } & ({ x0 : int } & { })",
                other => other,
            };
            assert_eq!(printed, expected);
            assert_eq!(parse_context(&printed).unwrap(), g);
        }
    }

    #[test]
    fn declaration_display_matches_grammar() {
        let o = Ident::new("o").unwrap();
        let l = Ident::new("l").unwrap();
        assert_eq!(
            TypeDecl::OutputReqRes(o.clone(), l.clone(), NativeType::Int, NativeType::Void)
                .to_string(),
            "o @ l : <int, void>"
        );
        assert_eq!(
            TypeDecl::VarDecl(Variable(7), NativeType::Double).to_string(),
            "x7 : double"
        );
    }
}
