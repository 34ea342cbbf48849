//! Randomized properties complementing the exhaustive sweeps: deep
//! random terms (including strings, doubles, and runtime constructs),
//! random contexts, and raw byte noise.

use proptest::prelude::*;

use bcheck_core::congruence::{
    applicable_steps, apply_step, congruent, normalize, normalize_with_trace, transport,
};
use bcheck_core::parser::{parse_behaviour, parse_context};
use bcheck_core::typing::{check_behaviour, verify_derivation};
use bcheck_core::{
    Behaviour, BinOp, Context, Eta, EtaHat, Expr, Ident, NativeType, TypeDecl, Variable,
};

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

fn variable() -> impl Strategy<Value = Variable> {
    (0u32..6).prop_map(Variable)
}

/// Identifiers prefixed so they can never collide with a keyword.
fn named(prefix: &'static str) -> impl Strategy<Value = Ident> {
    "[a-z]{0,3}".prop_map(move |s| Ident::new(format!("{prefix}{s}")).expect("valid identifier"))
}

fn native_type() -> impl Strategy<Value = NativeType> {
    prop::sample::select(vec![
        NativeType::Bool,
        NativeType::Int,
        NativeType::Double,
        NativeType::Long,
        NativeType::String,
        NativeType::Raw,
        NativeType::Void,
    ])
}

fn finite_f64() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite doubles only", |d| d.is_finite())
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Expr::BoolLit),
        any::<i32>().prop_map(Expr::IntLit),
        any::<i64>().prop_map(Expr::LongLit),
        finite_f64().prop_map(Expr::double),
        any::<String>().prop_map(Expr::StringLit),
        variable().prop_map(Expr::Var),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        let op = prop::sample::select(vec![BinOp::And, BinOp::Or, BinOp::Eq, BinOp::Lt]);
        prop_oneof![
            inner.clone().prop_map(Expr::negate),
            (op, inner.clone(), inner).prop_map(|(op, a, b)| Expr::bin(op, a, b)),
        ]
    })
}

fn behaviour() -> impl Strategy<Value = Behaviour> {
    let leaf = prop_oneof![
        Just(Behaviour::Nil),
        (variable(), expr()).prop_map(|(x, e)| Behaviour::assign(x, e)),
        (named("o"), variable()).prop_map(|(o, x)| Behaviour::Input(Eta::OneWay(o, x))),
        (named("o"), named("l"), expr())
            .prop_map(|(o, l, e)| Behaviour::Output(EtaHat::Notification(o, l, e))),
        (named("o"), named("l"), expr(), variable())
            .prop_map(|(o, l, e, x)| Behaviour::Output(EtaHat::SolicitResponse(o, l, e, x))),
        (named("c"), named("o"), named("l"), variable())
            .prop_map(|(c, o, l, x)| Behaviour::Wait(c, o, l, x)),
    ];
    leaf.prop_recursive(4, 32, 3, |inner| {
        let eta = prop_oneof![
            (named("o"), variable()).prop_map(|(o, x)| Eta::OneWay(o, x)),
            (named("o"), variable(), variable(), inner.clone())
                .prop_map(|(o, x, reply, b)| Eta::RequestResponse(o, x, reply, Box::new(b))),
        ];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Behaviour::seq(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Behaviour::par(a, b)),
            (expr(), inner.clone(), inner.clone())
                .prop_map(|(e, t, f)| Behaviour::if_then_else(e, t, f)),
            (expr(), inner.clone()).prop_map(|(e, b)| Behaviour::while_do(e, b)),
            eta.clone().prop_map(Behaviour::Input),
            prop::collection::vec((eta, inner.clone()), 1..3).prop_map(Behaviour::InputChoice),
            (named("c"), named("o"), variable(), inner).prop_map(|(c, o, x, b)| Behaviour::Exec(
                c,
                o,
                x,
                Box::new(b)
            )),
        ]
    })
}

fn context() -> impl Strategy<Value = Context> {
    let decl = prop_oneof![
        (variable(), native_type()).prop_map(|(x, t)| TypeDecl::VarDecl(x, t)),
        (named("o"), native_type()).prop_map(|(o, t)| TypeDecl::InputOneWay(o, t)),
        (named("o"), native_type(), native_type())
            .prop_map(|(o, t, t2)| TypeDecl::InputReqRes(o, t, t2)),
        (named("o"), named("l"), native_type())
            .prop_map(|(o, l, t)| TypeDecl::OutputOneWay(o, l, t)),
        (named("o"), named("l"), native_type(), native_type())
            .prop_map(|(o, l, t, t2)| TypeDecl::OutputReqRes(o, l, t, t2)),
    ];
    let leaf = prop::collection::vec(decl, 0..4)
        .prop_filter_map("declarations must not collide", |ds| Context::leaf(ds).ok());
    leaf.prop_recursive(3, 8, 2, |inner| {
        (inner.clone(), inner).prop_map(|(l, r)| Context::par(l, r))
    })
}

// ---------------------------------------------------------------------------
// Properties
// ---------------------------------------------------------------------------

proptest! {
    /// Printing and reparsing any behaviour is the identity, however
    /// deep the term and whatever its literals contain.
    #[test]
    fn printing_then_parsing_is_identity(b in behaviour()) {
        let printed = b.to_string();
        let reparsed = parse_behaviour(&printed);
        prop_assert_eq!(reparsed.as_ref(), Ok(&b), "printed as {}", printed);
    }

    /// Same for contexts.
    #[test]
    fn context_printing_round_trips(g in context()) {
        let printed = g.to_string();
        let reparsed = parse_context(&printed);
        prop_assert_eq!(reparsed.as_ref(), Ok(&g), "printed as {}", printed);
    }

    /// The parser returns errors, never panics, on arbitrary input.
    #[test]
    fn parsing_never_panics(src in any::<String>()) {
        let _ = parse_behaviour(&src);
        let _ = parse_context(&src);
    }

    /// Normal forms are fixed points reached by a replayable trace.
    #[test]
    fn normalization_laws_hold_on_random_terms(b in behaviour()) {
        let (normal, trace) = normalize_with_trace(&b);
        prop_assert_eq!(&normalize(&normal), &normal);
        let replayed = trace.replay(&b);
        prop_assert_eq!(replayed.as_ref(), Some(&normal));
        prop_assert!(congruent(&b, &normal).is_some());
    }

    /// A random walk along the rewrite rules stays congruent, and the
    /// decision procedure hands back a trace that replays both ways.
    #[test]
    fn random_rewrite_walks_are_congruent(b in behaviour(), picks in prop::collection::vec(any::<usize>(), 1..5)) {
        let mut current = b.clone();
        for pick in picks {
            let steps = applicable_steps(&current);
            prop_assert!(!steps.is_empty());
            let step = &steps[pick % steps.len()];
            current = apply_step(&current, step).expect("applicable step applies");
        }
        let there = congruent(&b, &current);
        prop_assert!(there.is_some(), "walk from {} reached {} but congruence says no", b, current);
        let replayed = there.unwrap().replay(&b);
        prop_assert_eq!(replayed.as_ref(), Some(&current));
        let back = congruent(&current, &b).expect("congruence is symmetric");
        let replayed_back = back.replay(&current);
        prop_assert_eq!(replayed_back.as_ref(), Some(&b));
    }

    /// Whatever the checker accepts verifies, concludes what was asked,
    /// and survives (or honestly refuses) every single rewrite step.
    #[test]
    fn accepted_derivations_verify_and_transport(g in context(), b in behaviour()) {
        if let Ok(d) = check_behaviour(&g, &b) {
            prop_assert_eq!(&d.input, &g);
            prop_assert_eq!(&d.subject, &b);
            prop_assert!(verify_derivation(&d).is_ok());
            for step in applicable_steps(&b).into_iter().take(12) {
                let rewritten = apply_step(&b, &step).expect("applicable step applies");
                match transport(&d, &step) {
                    Ok(d2) => {
                        prop_assert_eq!(&d2.subject, &rewritten);
                        prop_assert!(
                            verify_derivation(&d2).is_ok(),
                            "transported derivation for {} by {} does not verify", b, step
                        );
                    }
                    Err(_) => prop_assert!(
                        check_behaviour(&g, &rewritten).is_err(),
                        "transport refused {} by {} but the rewrite types", b, step
                    ),
                }
            }
        }
    }
}
