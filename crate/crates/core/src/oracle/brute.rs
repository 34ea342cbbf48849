//! A second opinion on the typing judgment, written as a brute-force
//! proof search instead of a syntax-directed pass.
//!
//! For every rule whose conclusion could cover the behaviour, the
//! search tries all premise combinations and collects the output
//! contexts of the proofs it completes.  It shares no code with the
//! checker: declaration lookup, variable update and expression typing
//! are reimplemented here from the ground up, so agreement between the
//! two is meaningful evidence.  The rules are syntax-directed, so the
//! returned set ought to hold at most one context — the suites assert
//! that as well.

use std::collections::HashMap;

use crate::ast::{Behaviour, BinOp, Eta, EtaHat, Expr, Location, Operation, Variable};
use crate::context::{Context, Ctx, NativeType, TypeDecl};

/// Every output context some proof of `g ⊢ b ▷ _` reaches.
pub fn brute_force_outputs(g: &Context, b: &Behaviour) -> Vec<Context> {
    let mut memo = Memo::new();
    outputs(g, b, &mut memo)
}

/// The typing the search finds, if any.
pub fn brute_force_check(g: &Context, b: &Behaviour) -> Option<Context> {
    brute_force_outputs(g, b).into_iter().next()
}

type Memo = HashMap<(Context, Behaviour), Vec<Context>>;

fn push_unique(found: &mut Vec<Context>, c: Context) {
    if !found.contains(&c) {
        found.push(c);
    }
}

fn outputs(g: &Context, b: &Behaviour, memo: &mut Memo) -> Vec<Context> {
    let key = (g.clone(), b.clone());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut found: Vec<Context> = Vec::new();
    match b {
        Behaviour::Nil => found.push(g.clone()),

        Behaviour::If(guard, then_b, else_b) => {
            if expr_type(guard, g) == Some(NativeType::Bool) {
                let then_outs = outputs(g, then_b, memo);
                let else_outs = outputs(g, else_b, memo);
                for out in then_outs {
                    if else_outs.contains(&out) {
                        push_unique(&mut found, out);
                    }
                }
            }
        }

        Behaviour::While(guard, body) => {
            if expr_type(guard, g) == Some(NativeType::Bool)
                && outputs(g, body, memo).iter().any(|out| out == g)
            {
                found.push(g.clone());
            }
        }

        Behaviour::Seq(first, second) => {
            for mid in outputs(g, first, memo) {
                for out in outputs(&mid, second, memo) {
                    push_unique(&mut found, out);
                }
            }
        }

        Behaviour::Par(left, right) => {
            if let Context::Par(g1, g2) = g {
                for out_l in outputs(g1, left, memo) {
                    for out_r in outputs(g2, right, memo) {
                        push_unique(&mut found, Context::par(out_l.clone(), out_r));
                    }
                }
            }
        }

        Behaviour::Assign(x, e) => {
            if let Some(t) = expr_type(e, g) {
                found.push(store(g, *x, t));
            }
        }

        Behaviour::Input(eta) => found = guard_outputs(g, eta, memo),

        Behaviour::Output(EtaHat::Notification(op, loc, e)) => {
            if let Some(TypeDecl::OutputOneWay(_, _, t)) = first_output(g, op, loc) {
                if expr_type(e, g) == Some(t) {
                    found.push(g.clone());
                }
            }
        }

        Behaviour::Output(EtaHat::SolicitResponse(op, loc, e, x)) => {
            if let Some(TypeDecl::OutputReqRes(_, _, t_req, t_resp)) = first_output(g, op, loc) {
                if expr_type(e, g) == Some(t_req) {
                    found.push(store(g, *x, t_resp));
                }
            }
        }

        Behaviour::InputChoice(branches) if !branches.is_empty() => {
            // Whatever the first branch can reach, every other branch
            // must reach as well.
            let mut common: Option<Vec<Context>> = None;
            for (eta, continuation) in branches {
                let mut branch_outs = Vec::new();
                for mid in guard_outputs(g, eta, memo) {
                    for out in outputs(&mid, continuation, memo) {
                        push_unique(&mut branch_outs, out);
                    }
                }
                common = Some(match common {
                    None => branch_outs,
                    Some(prev) => prev
                        .into_iter()
                        .filter(|out| branch_outs.contains(out))
                        .collect(),
                });
            }
            found = common.unwrap_or_default();
        }

        // Empty choices, wait and exec have no typing rule.
        Behaviour::InputChoice(_) | Behaviour::Wait(_, _, _, _) | Behaviour::Exec(_, _, _, _) => {}
    }
    memo.insert(key, found.clone());
    found
}

/// Outputs of an input guard: where the context can stand after the
/// message (and, for request-response, the reply body) completes.
fn guard_outputs(g: &Context, eta: &Eta, memo: &mut Memo) -> Vec<Context> {
    let mut found = Vec::new();
    match eta {
        Eta::OneWay(op, x) => {
            if let Some(TypeDecl::InputOneWay(_, t)) = first_input(g, op) {
                found.push(store(g, *x, t));
            }
        }
        Eta::RequestResponse(op, x, reply, body) => {
            if let Some(TypeDecl::InputReqRes(_, t_req, t_resp)) = first_input(g, op) {
                let bound = store(g, *x, t_req);
                for out in outputs(&bound, body, memo) {
                    if var_type(&out, *reply) == Some(t_resp) {
                        push_unique(&mut found, out);
                    }
                }
            }
        }
    }
    found
}

// ---------------------------------------------------------------------------
// Ground-up context primitives
// ---------------------------------------------------------------------------

/// Declarations in search order: the whole left subtree before the
/// right, front to back inside a block.
fn declarations(g: &Context) -> Vec<TypeDecl> {
    match g {
        Context::Leaf(ctx) => ctx.decls().to_vec(),
        Context::Par(l, r) => {
            let mut out = declarations(l);
            out.extend(declarations(r));
            out
        }
    }
}

fn var_type(g: &Context, x: Variable) -> Option<NativeType> {
    declarations(g).into_iter().find_map(|d| match d {
        TypeDecl::VarDecl(y, t) if y == x => Some(t),
        _ => None,
    })
}

fn first_input(g: &Context, op: &Operation) -> Option<TypeDecl> {
    declarations(g).into_iter().find(|d| {
        matches!(d,
            TypeDecl::InputOneWay(o, _) | TypeDecl::InputReqRes(o, _, _) if o == op)
    })
}

fn first_output(g: &Context, op: &Operation, loc: &Location) -> Option<TypeDecl> {
    declarations(g).into_iter().find(|d| {
        matches!(d,
            TypeDecl::OutputOneWay(o, l, _) | TypeDecl::OutputReqRes(o, l, _, _)
                if o == op && l == loc)
    })
}

/// Sets `x : t`: the first declaration of `x` in search order changes
/// type; a variable never seen before lands at the end of the leftmost
/// block.
fn store(g: &Context, x: Variable, t: NativeType) -> Context {
    fn replace(g: &Context, x: Variable, t: NativeType, done: &mut bool) -> Context {
        match g {
            Context::Leaf(ctx) => {
                let mut decls = ctx.decls().to_vec();
                if !*done {
                    for d in decls.iter_mut() {
                        if let TypeDecl::VarDecl(y, ty) = d {
                            if *y == x {
                                *ty = t;
                                *done = true;
                                break;
                            }
                        }
                    }
                }
                Context::Leaf(Ctx::new(decls).expect("retyping a variable keeps the block valid"))
            }
            Context::Par(l, r) => {
                let new_l = replace(l, x, t, done);
                let new_r = replace(r, x, t, done);
                Context::par(new_l, new_r)
            }
        }
    }
    fn append_leftmost(g: &Context, x: Variable, t: NativeType) -> Context {
        match g {
            Context::Leaf(ctx) => {
                let mut decls = ctx.decls().to_vec();
                decls.push(TypeDecl::VarDecl(x, t));
                Context::Leaf(Ctx::new(decls).expect("a fresh variable cannot collide"))
            }
            Context::Par(l, r) => Context::par(append_leftmost(l, x, t), (**r).clone()),
        }
    }
    let mut done = false;
    let replaced = replace(g, x, t, &mut done);
    if done {
        replaced
    } else {
        append_leftmost(g, x, t)
    }
}

// ---------------------------------------------------------------------------
// Ground-up expression typing
// ---------------------------------------------------------------------------

fn expr_type(e: &Expr, g: &Context) -> Option<NativeType> {
    match e {
        Expr::BoolLit(_) => Some(NativeType::Bool),
        Expr::IntLit(_) => Some(NativeType::Int),
        Expr::DoubleLit(_) => Some(NativeType::Double),
        Expr::LongLit(_) => Some(NativeType::Long),
        Expr::StringLit(_) => Some(NativeType::String),
        Expr::Var(x) => var_type(g, *x),
        Expr::Not(inner) => (expr_type(inner, g)? == NativeType::Bool).then_some(NativeType::Bool),
        Expr::BinOp(op, l, r) => {
            let (tl, tr) = (expr_type(l, g)?, expr_type(r, g)?);
            match op {
                BinOp::And | BinOp::Or => {
                    (tl == NativeType::Bool && tr == NativeType::Bool).then_some(NativeType::Bool)
                }
                BinOp::Eq => (tl == tr).then_some(NativeType::Bool),
                BinOp::Lt => {
                    let numeric =
                        matches!(tl, NativeType::Int | NativeType::Double | NativeType::Long);
                    (tl == tr && numeric).then_some(NativeType::Bool)
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_behaviour, parse_context};
    use crate::typing::check_behaviour;

    fn agree(ctx: &str, src: &str) {
        let g = parse_context(ctx).unwrap();
        let b = parse_behaviour(src).unwrap();
        let brute = brute_force_outputs(&g, &b);
        assert!(
            brute.len() <= 1,
            "{src} under {ctx}: {} outputs",
            brute.len()
        );
        match check_behaviour(&g, &b) {
            Ok(d) => assert_eq!(brute, vec![d.output], "{src} under {ctx}"),
            Err(e) => assert!(brute.is_empty(), "{src} under {ctx}: checker said {e}"),
        }
    }

    #[test]
    fn the_search_agrees_with_the_checker_on_spot_cases() {
        agree("{ }", "nil");
        agree("{ }", "x0 = 1; x0 = x0 < 2");
        agree("{ x0 : bool }", "if x0 then x0 = true else x0 = x0");
        agree("{ x0 : bool }", "while [x0] x0 = true");
        agree("{ x0 : bool }", "while [x0] x0 = 1"); // body breaks the loop invariant
        agree("{ } & { }", "x0 = 1 | x0 = true");
        agree("{ }", "x0 = 1 | x0 = true"); // parallel under a lone block
        agree("{ o : <int> }", "o(x0)");
        agree("{ o : <int> } & { o : <bool> }", "o(x0) | o(x0)");
        agree("{ o : <int, bool> }", "o(x0)(x1){ x1 = true }");
        agree("{ o : <int, bool> }", "o(x0)(x1){ x1 = 1 }"); // wrong reply type
        agree("{ o @ l : <int> }", "o @ l(7)");
        agree("{ o @ l : <int> }", "o @ l(true)");
        agree("{ o @ l : <int, string> }", "o @ l(7)(x0); x0 = x0");
        agree(
            "{ o : <int>, p : <bool> }",
            "inputchoice [o(x0)]{ x0 = 1 } [p(x0)]{ x0 = 1 }",
        );
        agree(
            "{ o : <int>, p : <bool> }",
            "inputchoice [o(x0)]{ nil } [p(x0)]{ nil }", // branches disagree on x0
        );
        agree("{ }", "wait(c, o, x0, x1)");
        agree("{ }", "exec(c, o, x0){ nil }");
    }

    #[test]
    fn the_search_shadows_declarations_in_the_same_order() {
        let g = parse_context("{ o : <int> } & { o : <bool> }").unwrap();
        let b = parse_behaviour("o(x0)").unwrap();
        let outs = brute_force_outputs(&g, &b);
        assert_eq!(outs.len(), 1);
        assert_eq!(
            outs[0].to_string(),
            "{ o : <int>, x0 : int } & { o : <bool> }"
        );
    }

    #[test]
    fn stores_replace_first_or_append_leftmost() {
        let g = parse_context("{ } & { x0 : int }").unwrap();
        assert_eq!(
            store(&g, Variable(0), NativeType::Bool).to_string(),
            "{ } & { x0 : bool }"
        );
        assert_eq!(
            store(&g, Variable(1), NativeType::Raw).to_string(),
            "{ x1 : raw } & { x0 : int }"
        );
    }
}
