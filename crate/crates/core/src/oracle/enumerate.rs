//! Exhaustive enumeration of behaviours by term size.

use crate::ast::{Behaviour, Eta, EtaHat, Expr, Location, Operation, Variable};

/// The alphabet an enumeration draws from.  Term size is the node
/// count reported by [`Behaviour::size`]: atoms weigh 1, composites
/// weigh 1 plus their bodies, guard expressions are free.
#[derive(Debug, Clone)]
pub struct EnumConfig {
    pub max_size: usize,
    /// Variables `x0 .. x{n-1}` usable as assignment targets and
    /// communication binders.
    pub variable_count: u32,
    /// Expressions usable as guards, assigned values and payloads.
    pub expressions: Vec<Expr>,
    pub operations: Vec<Operation>,
    pub locations: Vec<Location>,
    /// Whether to include inputs, outputs and input choices.
    pub include_communications: bool,
}

impl EnumConfig {
    /// `nil`, assignment, `if`, `while`, `;` and `|` over one variable
    /// with the expressions `true` and `1` (the latter never types as
    /// a guard, which keeps negative cases in every sweep).
    pub fn core(max_size: usize) -> EnumConfig {
        EnumConfig {
            max_size,
            variable_count: 1,
            expressions: vec![Expr::BoolLit(true), Expr::IntLit(1)],
            operations: Vec::new(),
            locations: Vec::new(),
            include_communications: false,
        }
    }

    /// [`EnumConfig::core`] plus every communication form on one
    /// operation `o` towards one location `l`.
    pub fn with_communications(max_size: usize) -> EnumConfig {
        EnumConfig {
            operations: vec!["o".parse().expect("valid identifier")],
            locations: vec!["l".parse().expect("valid identifier")],
            include_communications: true,
            ..EnumConfig::core(max_size)
        }
    }

    fn variables(&self) -> impl Iterator<Item = Variable> {
        (0..self.variable_count).map(Variable)
    }
}

/// Every behaviour of size `1..=max_size` over the configured
/// alphabet, in increasing size order, each exactly once.
pub fn enumerate_behaviours(cfg: &EnumConfig) -> Vec<Behaviour> {
    enumerate_by_size(cfg).into_iter().flatten().collect()
}

/// `result[k-1]` holds every behaviour of size exactly `k`.
fn enumerate_by_size(cfg: &EnumConfig) -> Vec<Vec<Behaviour>> {
    let mut sizes: Vec<Vec<Behaviour>> = Vec::with_capacity(cfg.max_size);
    for k in 1..=cfg.max_size {
        let mut out = Vec::new();
        if k == 1 {
            atoms(cfg, &mut out);
        } else {
            composites(cfg, k, &sizes, &mut out);
        }
        sizes.push(out);
    }
    sizes
}

fn atoms(cfg: &EnumConfig, out: &mut Vec<Behaviour>) {
    out.push(Behaviour::Nil);
    for x in cfg.variables() {
        for e in &cfg.expressions {
            out.push(Behaviour::assign(x, e.clone()));
        }
    }
    if !cfg.include_communications {
        return;
    }
    for op in &cfg.operations {
        for x in cfg.variables() {
            out.push(Behaviour::Input(Eta::OneWay(op.clone(), x)));
        }
        for loc in &cfg.locations {
            for e in &cfg.expressions {
                out.push(Behaviour::Output(EtaHat::Notification(
                    op.clone(),
                    loc.clone(),
                    e.clone(),
                )));
                for x in cfg.variables() {
                    out.push(Behaviour::Output(EtaHat::SolicitResponse(
                        op.clone(),
                        loc.clone(),
                        e.clone(),
                        x,
                    )));
                }
            }
        }
    }
}

fn composites(cfg: &EnumConfig, k: usize, sizes: &[Vec<Behaviour>], out: &mut Vec<Behaviour>) {
    // Two-body nodes: the children split k - 1 between them.
    for i in 1..k - 1 {
        let j = k - 1 - i;
        for a in &sizes[i - 1] {
            for b in &sizes[j - 1] {
                out.push(Behaviour::seq(a.clone(), b.clone()));
            }
        }
    }
    for i in 1..k - 1 {
        let j = k - 1 - i;
        for a in &sizes[i - 1] {
            for b in &sizes[j - 1] {
                out.push(Behaviour::par(a.clone(), b.clone()));
            }
        }
    }
    for e in &cfg.expressions {
        for i in 1..k - 1 {
            let j = k - 1 - i;
            for t in &sizes[i - 1] {
                for f in &sizes[j - 1] {
                    out.push(Behaviour::if_then_else(e.clone(), t.clone(), f.clone()));
                }
            }
        }
    }
    for e in &cfg.expressions {
        for body in &sizes[k - 2] {
            out.push(Behaviour::while_do(e.clone(), body.clone()));
        }
    }
    if !cfg.include_communications {
        return;
    }
    for op in &cfg.operations {
        for x in cfg.variables() {
            for reply in cfg.variables() {
                for body in &sizes[k - 2] {
                    out.push(Behaviour::Input(Eta::RequestResponse(
                        op.clone(),
                        x,
                        reply,
                        Box::new(body.clone()),
                    )));
                }
            }
        }
    }
    for branches in choice_branches(cfg, k - 1, sizes) {
        out.push(Behaviour::InputChoice(branches));
    }
}

/// One guarded branch of an input choice, costing `cost` size units:
/// the continuation body, plus the reply body for request-response
/// guards.
fn branch_options(
    cfg: &EnumConfig,
    cost: usize,
    sizes: &[Vec<Behaviour>],
) -> Vec<(Eta, Behaviour)> {
    let mut out = Vec::new();
    for op in &cfg.operations {
        for x in cfg.variables() {
            for body in &sizes[cost - 1] {
                out.push((Eta::OneWay(op.clone(), x), body.clone()));
            }
            for reply_size in 1..cost {
                let body_size = cost - reply_size;
                for reply in cfg.variables() {
                    for reply_body in &sizes[reply_size - 1] {
                        for body in &sizes[body_size - 1] {
                            out.push((
                                Eta::RequestResponse(
                                    op.clone(),
                                    x,
                                    reply,
                                    Box::new(reply_body.clone()),
                                ),
                                body.clone(),
                            ));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Every nonempty branch list whose costs sum to `budget`.
fn choice_branches(
    cfg: &EnumConfig,
    budget: usize,
    sizes: &[Vec<Behaviour>],
) -> Vec<Vec<(Eta, Behaviour)>> {
    let mut out = Vec::new();
    for first_cost in 1..=budget {
        let firsts = branch_options(cfg, first_cost, sizes);
        if first_cost == budget {
            out.extend(firsts.into_iter().map(|b| vec![b]));
        } else {
            for rest in choice_branches(cfg, budget - first_cost, sizes) {
                for first in &firsts {
                    let mut branches = Vec::with_capacity(rest.len() + 1);
                    branches.push(first.clone());
                    branches.extend(rest.iter().cloned());
                    out.push(branches);
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
