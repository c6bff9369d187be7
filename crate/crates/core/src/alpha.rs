//! Structural equality up to renaming of declarations and recursion variables.
//!
//! Branches are compared as a label-indexed set, so branch order is irrelevant.

use std::collections::{HashMap, VecDeque};

use crate::ast::{DeclName, Declarations, LightType, RecVar};

/// Compares two trees. `calls` decides whether a pair of call targets may correspond.
fn same_shape(
    a: &LightType,
    b: &LightType,
    env_a: &mut Vec<RecVar>,
    env_b: &mut Vec<RecVar>,
    calls: &mut dyn FnMut(&DeclName, &DeclName) -> bool,
) -> bool {
    match (a, b) {
        (LightType::End, LightType::End) => true,
        (LightType::Var(x), LightType::Var(y)) => {
            // Compare by binder depth; free variables must coincide by name.
            let ix = env_a.iter().rev().position(|v| v == x);
            let iy = env_b.iter().rev().position(|v| v == y);
            match (ix, iy) {
                (None, None) => x == y,
                (ix, iy) => ix == iy,
            }
        }
        (LightType::Call(x), LightType::Call(y)) => calls(x, y),
        (LightType::Rec { var: va, body: ba }, LightType::Rec { var: vb, body: bb }) => {
            env_a.push(va.clone());
            env_b.push(vb.clone());
            let ok = same_shape(ba, bb, env_a, env_b, calls);
            env_a.pop();
            env_b.pop();
            ok
        }
        (LightType::Branching(x), LightType::Branching(y)) => {
            x.sender() == y.sender()
                && x.receiver() == y.receiver()
                && x.branches().len() == y.branches().len()
                && x.branches().iter().all(|bx| match y.branch(&bx.label) {
                    Some(by) => {
                        bx.sort == by.sort && same_shape(&bx.cont, &by.cont, env_a, env_b, calls)
                    }
                    None => false,
                })
        }
        _ => false,
    }
}

/// Alpha-equality of two trees whose call targets must match by name.
pub fn alpha_eq_types(a: &LightType, b: &LightType) -> bool {
    same_shape(a, b, &mut Vec::new(), &mut Vec::new(), &mut |x, y| x == y)
}

/// True iff a bijection between the declarations reachable from `main1` and
/// from `main2` makes the two pairs structurally identical.
///
/// The correspondence is forced by the positions of `call` nodes, so no
/// search is needed: the first call pair fixes the mapping for that name and
/// every later occurrence must agree.
pub fn alpha_eq_decls(
    main1: &LightType,
    decls1: &Declarations,
    main2: &LightType,
    decls2: &Declarations,
) -> bool {
    let mut corr = Correspondence::default();
    let mut pair = (main1, main2);
    loop {
        if !same_shape(
            pair.0,
            pair.1,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut |x, y| corr.link(x, y),
        ) {
            return false;
        }
        let Some((x, y)) = corr.pending.pop_front() else {
            return true;
        };
        match (decls1.get(&x), decls2.get(&y)) {
            (Some(bx), Some(by)) => pair = (bx, by),
            _ => return false,
        }
    }
}

#[derive(Default)]
struct Correspondence {
    forward: HashMap<DeclName, DeclName>,
    backward: HashMap<DeclName, DeclName>,
    pending: VecDeque<(DeclName, DeclName)>,
}

impl Correspondence {
    fn link(&mut self, x: &DeclName, y: &DeclName) -> bool {
        match (self.forward.get(x), self.backward.get(y)) {
            (Some(fy), Some(bx)) => fy == y && bx == x,
            (None, None) => {
                self.forward.insert(x.clone(), y.clone());
                self.backward.insert(y.clone(), x.clone());
                self.pending.push_back((x.clone(), y.clone()));
                true
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse;

    fn pair(src: &str) -> (LightType, Declarations) {
        let f = parse(src).unwrap();
        (f.main, f.decls)
    }

    fn eq(a: &str, b: &str) -> bool {
        let (m1, d1) = pair(a);
        let (m2, d2) = pair(b);
        alpha_eq_decls(&m1, &d1, &m2, &d2)
    }

    #[test]
    fn renaming_one_declaration() {
        assert!(eq(
            "let x = end; main = call x;",
            "let y = end; main = call y;"
        ));
    }

    #[test]
    fn call_is_not_end() {
        assert!(!eq("main = end;", "let y = end; main = call y;"));
    }

    #[test]
    fn mapping_must_be_a_bijection() {
        let two = "let x = end; let y = end; main = a -> b : { p() . call x, q() . call y };";
        let shared = "let z = end; main = a -> b : { p() . call z, q() . call z };";
        assert!(!eq(two, shared));
        assert!(!eq(shared, two));
    }

    #[test]
    fn branch_order_is_irrelevant() {
        assert!(eq(
            "main = a -> b : { p() . end, q(nat) . end };",
            "main = a -> b : { q(nat) . end, p() . end };"
        ));
        assert!(!eq(
            "main = a -> b : { p() . end, q(nat) . end };",
            "main = a -> b : { p() . end, q(str) . end };"
        ));
    }

    #[test]
    fn recursion_variables_rename() {
        assert!(eq(
            "main = rec t . a -> b : x(nat) . t;",
            "main = rec s . a -> b : x(nat) . s;"
        ));
        assert!(!eq(
            "main = rec t . rec s . a -> b : x(nat) . t;",
            "main = rec t . rec s . a -> b : x(nat) . s;"
        ));
    }

    #[test]
    fn unreachable_declarations_are_ignored() {
        assert!(eq("let junk = end; main = end;", "main = end;"));
    }

    #[test]
    fn missing_body_is_unequal() {
        let (m1, d1) = pair("let x = end; main = call x;");
        assert!(!alpha_eq_decls(&m1, &d1, &m1, &Declarations::new()));
    }

    #[test]
    fn reflexive_on_running_example() {
        let g = fixtures::running_example_decls();
        assert!(alpha_eq_decls(&g.main, &g.decls, &g.main, &g.decls));
    }

    #[test]
    fn types_compare_calls_by_name() {
        let (a, _) = pair("main = a -> b : x() . call p;");
        let (b, _) = pair("main = a -> b : x() . call q;");
        assert!(!alpha_eq_types(&a, &b));
        assert!(alpha_eq_types(&a, &a));
    }
}
