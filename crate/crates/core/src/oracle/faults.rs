//! Derivation corruptors modelled on classic checker bugs.
//!
//! Each injector takes a valid derivation and plants the conclusion a
//! buggy checker would have drawn at the first node it applies to,
//! leaving everything else intact.  The verifier's job is to reject
//! every such product; the suites assert it does, with no exceptions.

use std::fmt;
use std::str::FromStr;

use crate::ast::{with_subterm, Behaviour, ChildSel, Eta, Position, Variable};
use crate::context::{update_var, Context, NativeType, TypeDecl};
use crate::typing::{Derivation, RuleTag};

/// The checker bug a corrupted derivation imitates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaultKind {
    /// An `if` that concludes in some context of its own even though
    /// the rule says branches must agree and decide it.
    IfBranchContexts,
    /// A sequence that runs its second step under the node's original
    /// context instead of the first step's result.
    SeqThreading,
    /// A parallel whose sides were swapped without swapping the paired
    /// context — the commutation bug the derivation transport must not
    /// have.
    ParCommNoSwap,
}

impl FaultKind {
    pub const ALL: [FaultKind; 3] = [
        FaultKind::IfBranchContexts,
        FaultKind::SeqThreading,
        FaultKind::ParCommNoSwap,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FaultKind::IfBranchContexts => "if-branch-contexts",
            FaultKind::SeqThreading => "seq-threading",
            FaultKind::ParCommNoSwap => "par-comm-no-swap",
        }
    }
}

impl fmt::Display for FaultKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FaultKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FaultKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = FaultKind::ALL.iter().map(|k| k.name()).collect();
                format!("unknown fault {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Corrupts `d` at the first node (in conclusion-first order) the
/// fault fits, or returns `None` when no node qualifies — a fault is
/// only planted where it actually changes the derivation, so a `Some`
/// result is never equal to the input.
pub fn inject_fault(d: &Derivation, fault: FaultKind) -> Option<Derivation> {
    match fault {
        FaultKind::IfBranchContexts => mutate_first(d, &|node| {
            if node.rule != RuleTag::TIf {
                return None;
            }
            let mut bad = node.clone();
            bad.output = spurious_extension(&node.output);
            Some(bad)
        }),
        FaultKind::SeqThreading => mutate_first(d, &|node| {
            if node.rule != RuleTag::TSeq || node.premises.len() != 2 {
                return None;
            }
            if node.premises[0].output == node.input {
                // Re-running the second step under the node's context
                // would be indistinguishable from the correct run.
                return None;
            }
            let mut bad = node.clone();
            bad.premises[1].input = node.input.clone();
            Some(bad)
        }),
        FaultKind::ParCommNoSwap => mutate_first(d, &|node| {
            if node.rule != RuleTag::TPar || node.premises.len() != 2 {
                return None;
            }
            let (p1, p2) = (&node.premises[0], &node.premises[1]);
            if p1.input == p2.input && p1.output == p2.output {
                // When both halves of the paired context agree, the
                // missing swap yields a derivation that is simply
                // correct — nothing to detect.
                return None;
            }
            let mut bad = node.clone();
            bad.subject = Behaviour::par(p2.subject.clone(), p1.subject.clone());
            bad.premises.swap(0, 1);
            Some(bad)
        }),
    }
}

/// A context that visibly differs from `g`: a fresh variable of type
/// `raw` tacked on.
fn spurious_extension(g: &Context) -> Context {
    let fresh = max_var_index(g).map_or(0, |i| i + 1);
    update_var(Variable(fresh), NativeType::Raw, g)
}

fn max_var_index(g: &Context) -> Option<u32> {
    match g {
        Context::Leaf(ctx) => ctx
            .decls()
            .iter()
            .filter_map(|d| match d {
                TypeDecl::VarDecl(Variable(i), _) => Some(*i),
                _ => None,
            })
            .max(),
        Context::Par(l, r) => max_var_index(l).max(max_var_index(r)),
    }
}

/// Applies `f` at the first derivation node it accepts, rebuilding the
/// ancestors around the corrupted premise (including their subjects,
/// so the damage stays where it was planted).
fn mutate_first(
    d: &Derivation,
    f: &dyn Fn(&Derivation) -> Option<Derivation>,
) -> Option<Derivation> {
    if let Some(bad) = f(d) {
        return Some(bad);
    }
    for idx in 0..d.premises.len() {
        if let Some(bad_child) = mutate_first(&d.premises[idx], f) {
            let mut node = d.clone();
            if bad_child.subject != node.premises[idx].subject {
                if let Some(subject) = reseat_child_subject(&node, idx, &bad_child.subject) {
                    node.subject = subject;
                }
            }
            node.premises[idx] = bad_child;
            return Some(node);
        }
    }
    None
}

/// The node's subject with premise `idx`'s slice of it replaced.
fn reseat_child_subject(node: &Derivation, idx: usize, new_child: &Behaviour) -> Option<Behaviour> {
    let sel = match node.rule {
        RuleTag::TIf => [ChildSel::IfThen, ChildSel::IfElse].get(idx).copied()?,
        RuleTag::TWhile => ChildSel::WhileBody,
        RuleTag::TSeq => [ChildSel::SeqFirst, ChildSel::SeqSecond]
            .get(idx)
            .copied()?,
        RuleTag::TPar => [ChildSel::ParLeft, ChildSel::ParRight].get(idx).copied()?,
        RuleTag::TInReqRes => ChildSel::InputBody,
        RuleTag::TChoice => {
            if idx % 2 == 1 {
                ChildSel::ChoiceBody(idx / 2)
            } else {
                // The guard premise derives `Input(eta)`; splice the
                // whole corrupted eta into the branch.
                let Behaviour::Input(eta) = new_child else {
                    return None;
                };
                let Behaviour::InputChoice(branches) = &node.subject else {
                    return None;
                };
                let mut branches = branches.clone();
                branches.get_mut(idx / 2)?.0 = eta.clone();
                return Some(Behaviour::InputChoice(branches));
            }
        }
        _ => return None,
    };
    // A corrupted guard-body premise carries a whole `Input(eta)`
    // subject; its behaviour slot is the eta's reply body.
    let new_child = match (sel, new_child) {
        (ChildSel::ChoiceInputBody(_), Behaviour::Input(Eta::RequestResponse(_, _, _, body))) => {
            (**body).clone()
        }
        _ => new_child.clone(),
    };
    with_subterm(&node.subject, &Position::root().child(sel), new_child)
}

// ---------------------------------------------------------------------------
