//! Well-formedness of a main type together with its declarations.

use std::collections::HashMap;

use crate::ast::{DeclName, Declarations, LightType, RecVar};
use crate::diag::{Code, Diagnostic, Location, NodePath, Owner};

/// Checks every structural invariant of `main` and of each declaration body,
/// that every `call` resolves, and that the call graph is acyclic.
///
/// Returns the empty list iff the pair is well formed. Diagnostics come in a
/// fixed order: per tree (main first, then declarations in table order) in
/// depth-first order, followed by call-graph cycles.
pub fn well_formed(main: &LightType, decls: &Declarations) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    check_tree(main, NodePath::root(Owner::Main), decls, &mut out);
    for (name, body) in decls {
        check_tree(
            body,
            NodePath::root(Owner::Decl(name.clone())),
            decls,
            &mut out,
        );
    }
    check_cycles(main, decls, &mut out);
    out
}

struct Binder<'a> {
    var: &'a RecVar,
    guarded: bool,
}

fn check_tree(t: &LightType, root: NodePath, decls: &Declarations, out: &mut Vec<Diagnostic>) {
    let mut env = Vec::new();
    check_node(t, root, &mut env, decls, out);
}

fn check_node<'a>(
    t: &'a LightType,
    path: NodePath,
    env: &mut Vec<Binder<'a>>,
    decls: &Declarations,
    out: &mut Vec<Diagnostic>,
) {
    match t {
        LightType::End => {}
        LightType::Call(name) => {
            if !decls.contains(name) {
                out.push(Diagnostic::error(
                    Code::UnboundCall,
                    format!("call to undeclared name `{name}`"),
                    Location::Node(path),
                ));
            }
        }
        LightType::Var(v) => match env.iter().rev().find(|b| b.var == v) {
            None => out.push(Diagnostic::error(
                Code::FreeVar,
                format!("recursion variable `{v}` is not bound"),
                Location::Node(path),
            )),
            Some(b) if !b.guarded => out.push(Diagnostic::error(
                Code::UnguardedRec,
                format!("recursion variable `{v}` is not guarded by an interaction"),
                Location::Node(path),
            )),
            Some(_) => {}
        },
        LightType::Rec { var, body } => {
            env.push(Binder {
                var,
                guarded: false,
            });
            check_node(body, path.child(0), env, decls, out);
            env.pop();
        }
        LightType::Branching(b) => {
            // Unreachable through the checked constructors; kept for trees built elsewhere.
            if b.sender() == b.receiver() {
                out.push(Diagnostic::error(
                    Code::SelfMsg,
                    format!("role `{}` sends to itself", b.sender()),
                    Location::Node(path.clone()),
                ));
            }
            if b.branches().is_empty() {
                out.push(Diagnostic::error(
                    Code::EmptyBranch,
                    "branching without branches",
                    Location::Node(path.clone()),
                ));
            }
            for (i, br) in b.branches().iter().enumerate() {
                if b.branches()[..i].iter().any(|p| p.label == br.label) {
                    out.push(Diagnostic::error(
                        Code::DupLabel,
                        format!("label `{}` occurs twice", br.label),
                        Location::Node(path.clone()),
                    ));
                }
            }
            let saved: Vec<bool> = env.iter().map(|b| b.guarded).collect();
            env.iter_mut().for_each(|b| b.guarded = true);
            for (i, br) in b.branches().iter().enumerate() {
                check_node(&br.cont, path.child(i), env, decls, out);
            }
            for (b, g) in env.iter_mut().zip(saved) {
                b.guarded = g;
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mark {
    Active,
    Done,
}

/// Depth-first search from main, then from every declaration not yet reached.
/// One diagnostic per back edge, placed at the closing `call` node.
fn check_cycles(main: &LightType, decls: &Declarations, out: &mut Vec<Diagnostic>) {
    let edges: HashMap<&DeclName, Vec<(&DeclName, NodePath)>> = decls
        .iter()
        .map(|(name, body)| {
            let mut calls = Vec::new();
            call_sites(body, NodePath::root(Owner::Decl(name.clone())), &mut calls);
            (name, calls)
        })
        .collect();
    let mut marks: HashMap<&DeclName, Mark> = HashMap::new();

    fn visit<'a>(
        node: &'a DeclName,
        edges: &HashMap<&'a DeclName, Vec<(&'a DeclName, NodePath)>>,
        marks: &mut HashMap<&'a DeclName, Mark>,
        stack: &mut Vec<&'a DeclName>,
        out: &mut Vec<Diagnostic>,
    ) {
        marks.insert(node, Mark::Active);
        stack.push(node);
        for (target, site) in edges.get(node).into_iter().flatten() {
            match marks.get(target) {
                Some(Mark::Active) => {
                    let start = stack.iter().position(|n| n == target).unwrap_or(0);
                    let cycle: Vec<String> = stack[start..]
                        .iter()
                        .chain(std::iter::once(target))
                        .map(|n| n.to_string())
                        .collect();
                    out.push(Diagnostic::error(
                        Code::CyclicCalls,
                        format!("call cycle {}", cycle.join(" -> ")),
                        Location::Node(site.clone()),
                    ));
                }
                Some(Mark::Done) => {}
                None if edges.contains_key(target) => visit(target, edges, marks, stack, out),
                None => {}
            }
        }
        stack.pop();
        marks.insert(node, Mark::Done);
    }

    let mut stack = Vec::new();
    let mut roots = Vec::new();
    call_sites(main, NodePath::root(Owner::Main), &mut roots);
    for (target, _) in &roots {
        if edges.contains_key(target) && !marks.contains_key(target) {
            visit(target, &edges, &mut marks, &mut stack, out);
        }
    }
    for name in decls.names() {
        if !marks.contains_key(name) {
            visit(name, &edges, &mut marks, &mut stack, out);
        }
    }
}

fn call_sites<'a>(t: &'a LightType, path: NodePath, out: &mut Vec<(&'a DeclName, NodePath)>) {
    match t {
        LightType::Call(name) => out.push((name, path)),
        other => {
            for (i, c) in other.children().into_iter().enumerate() {
                call_sites(c, path.child(i), out);
            }
        }
    }
}
