//! Shared declaration and context pools for the exhaustive sweeps.

use crate::ast::{Location, Operation, Variable};
use crate::context::{Context, Ctx, NativeType, TypeDecl};

fn op(name: &str) -> Operation {
    name.parse().expect("valid identifier")
}

fn loc(name: &str) -> Location {
    name.parse().expect("valid identifier")
}

/// The declarations the core pool draws from: the one enumeration
/// variable under two incompatible types, plus a one-way input.
pub fn decl_pool() -> Vec<TypeDecl> {
    vec![
        TypeDecl::VarDecl(Variable(0), NativeType::Int),
        TypeDecl::VarDecl(Variable(0), NativeType::Bool),
        TypeDecl::InputOneWay(op("o"), NativeType::Int),
    ]
}

/// Every valid declaration block over at most two pool declarations.
/// Order matters and repeating the same operation declaration is
/// allowed, so the pool has 1 + 3 + 5 = 9 blocks.
pub fn leaf_pool() -> Vec<Ctx> {
    let decls = decl_pool();
    let mut out = vec![Ctx::empty()];
    for d in &decls {
        out.extend(Ctx::new(vec![d.clone()]));
    }
    for a in &decls {
        for b in &decls {
            out.extend(Ctx::new(vec![a.clone(), b.clone()]));
        }
    }
    out
}

/// The sweep pool: each block flat, plus every ordered pair — 90
/// contexts covering empty, shadowing, and parallel splits.
pub fn context_pool() -> Vec<Context> {
    let leaves = leaf_pool();
    let mut out: Vec<Context> = leaves.iter().cloned().map(Context::Leaf).collect();
    for l in &leaves {
        for r in &leaves {
            out.push(Context::par(
                Context::Leaf(l.clone()),
                Context::Leaf(r.clone()),
            ));
        }
    }
    out
}

/// Contexts exercising every port kind, for sweeps over communicating
/// behaviours: blocks of at most two port/variable declarations, flat
/// and in pairs.
pub fn comm_context_pool() -> Vec<Context> {
    let decls = vec![
        TypeDecl::VarDecl(Variable(0), NativeType::Int),
        TypeDecl::InputOneWay(op("o"), NativeType::Int),
        TypeDecl::InputReqRes(op("o"), NativeType::Int, NativeType::Int),
        TypeDecl::OutputOneWay(op("o"), loc("l"), NativeType::Int),
        TypeDecl::OutputReqRes(op("o"), loc("l"), NativeType::Int, NativeType::Bool),
    ];
    let mut leaves = vec![Ctx::empty()];
    for d in &decls {
        leaves.extend(Ctx::new(vec![d.clone()]));
    }
    for a in &decls {
        for b in &decls {
            leaves.extend(Ctx::new(vec![a.clone(), b.clone()]));
        }
    }
    let mut out: Vec<Context> = leaves.iter().cloned().map(Context::Leaf).collect();
    // Pairs over the single-declaration blocks keep the pool compact.
    let singles: Vec<&Ctx> = leaves.iter().filter(|c| c.decls().len() <= 1).collect();
    for l in &singles {
        for r in &singles {
            out.push(Context::par(
                Context::Leaf((*l).clone()),
                Context::Leaf((*r).clone()),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
