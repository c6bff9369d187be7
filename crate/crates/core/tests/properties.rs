use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use slt_core::gen::{random_global, random_light, GenConfig};
use slt_core::lightener::{dedup, descend, lighten_fully, FreshNamer};
use slt_core::scribble;
use slt_core::semantics::{explore, lang_eq, state_bound, traces};
use slt_core::{
    alpha_eq_decls, find_redundant, parse, print, roles_of, well_formed, Branch, DeclName,
    Declarations, Label, LightType, RecVar, Role, Sort,
};

fn global(seed: u64) -> LightType {
    random_global(&mut StdRng::seed_from_u64(seed), &GenConfig::default())
}

fn light(seed: u64) -> (LightType, Declarations) {
    let cfg = GenConfig {
        max_decls: 3,
        max_depth: 4,
        ..GenConfig::default()
    };
    random_light(&mut StdRng::seed_from_u64(seed), &cfg)
}

/// Consistently renames declarations and recursion variables.
fn rename(t: &LightType, tag: &str) -> LightType {
    match t {
        LightType::End => LightType::End,
        LightType::Var(v) => LightType::Var(RecVar::new(format!("{v}{tag}")).unwrap()),
        LightType::Call(n) => LightType::Call(DeclName::new(format!("{n}{tag}")).unwrap()),
        LightType::Rec { var, body } => LightType::rec(
            RecVar::new(format!("{var}{tag}")).unwrap(),
            rename(body, tag),
        ),
        LightType::Branching(b) => LightType::Branching(
            b.with_continuations(b.branches().iter().map(|br| rename(&br.cont, tag))),
        ),
    }
}

fn rename_all(main: &LightType, decls: &Declarations, tag: &str) -> (LightType, Declarations) {
    let decls = decls
        .iter()
        .map(|(n, body)| {
            (
                DeclName::new(format!("{n}{tag}")).unwrap(),
                rename(body, tag),
            )
        })
        .collect();
    (rename(main, tag), decls)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let (main, decls) = light(seed);
        let text = print(&main, &decls);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back.main, &main);
        prop_assert_eq!(&back.decls, &decls);
        prop_assert_eq!(print(&back.main, &back.decls), text);
    }

    #[test]
    fn alpha_equivalence_laws(seed in any::<u64>()) {
        let (m, d) = light(seed);
        let (m1, d1) = rename_all(&m, &d, "x");
        let (m2, d2) = rename_all(&m1, &d1, "y");
        prop_assert!(alpha_eq_decls(&m, &d, &m, &d));
        prop_assert!(alpha_eq_decls(&m, &d, &m1, &d1));
        prop_assert!(alpha_eq_decls(&m1, &d1, &m, &d));
        prop_assert!(alpha_eq_decls(&m1, &d1, &m2, &d2));
        prop_assert!(alpha_eq_decls(&m, &d, &m2, &d2));
    }

    #[test]
    fn sites_validate_themselves(seed in any::<u64>()) {
        let t = global(seed);
        let sites = find_redundant(&t);
        prop_assert_eq!(&sites, &find_redundant(&t));
        for s in &sites {
            let node = s.path.resolve(&t).unwrap();
            prop_assert!(s.matches(node));
        }
    }

    #[test]
    fn recursion_hides_every_site(seed in any::<u64>()) {
        let t = global(seed);
        let wrapped = LightType::rec(
            RecVar::new("zz").unwrap(),
            LightType::message(
                Role::new("r0").unwrap(),
                Role::new("r1").unwrap(),
                Label::new("k").unwrap(),
                Sort::Nat,
                t,
            ).unwrap(),
        );
        prop_assert!(find_redundant(&wrapped).is_empty());
    }

    #[test]
    fn descend_preserves_language(seed in any::<u64>()) {
        let (t, d) = light(seed);
        for role in roles_of(&t, &d).unwrap() {
            let mut namer = FreshNamer::new("L", d.names()).unwrap();
            let out = descend(&t, &role, &mut namer);
            let mut united = d.clone();
            united.extend(out.new_decls).unwrap();
            prop_assert!(lang_eq(&t, &d, &out.result, &united).unwrap().equal);
        }
    }

    #[test]
    fn lightening_preserves_language(seed in any::<u64>()) {
        let (t, d) = light(seed);
        let out = lighten_fully(&t, &d, "L").unwrap();
        prop_assert!(lang_eq(&t, &d, &out.main, &out.decls).unwrap().equal);
        prop_assert!(well_formed(&out.main, &out.decls).is_empty());
        prop_assert!(out.sites().is_empty());
        for name in &out.fresh {
            prop_assert!(!d.contains(name));
        }
        let again = lighten_fully(&out.main, &out.decls, "L").unwrap();
        prop_assert!(again.fresh.is_empty());
        prop_assert_eq!(&again.main, &out.main);
        prop_assert_eq!(&again.decls, &out.decls);

        let shared = dedup(out.clone());
        prop_assert!(shared.fresh.len() <= out.fresh.len());
        prop_assert!(lang_eq(&t, &d, &shared.main, &shared.decls).unwrap().equal);
    }

    #[test]
    fn redundant_prefix_is_invisible(seed in any::<u64>()) {
        let t = global(seed);
        let roles: Vec<Role> = t.local_roles();
        prop_assume!(roles.len() >= 2);
        let prefixed = LightType::message(
            roles[0].clone(),
            roles[1].clone(),
            Label::new("fresh_unit").unwrap(),
            Sort::Unit,
            t.clone(),
        ).unwrap();
        let d = Declarations::new();
        prop_assert_eq!(traces(&prefixed, &d).unwrap(), traces(&t, &d).unwrap());
    }

    #[test]
    fn languages_are_prefix_closed_and_bounded(seed in any::<u64>()) {
        let (t, d) = light(seed);
        let e = explore(&t, &d).unwrap();
        prop_assert!(e.language.is_prefix_closed());
        prop_assert!(e.states <= state_bound(&t, &d));
    }

    #[test]
    fn well_formed_is_pure(seed in any::<u64>()) {
        let (t, d) = light(seed);
        prop_assert_eq!(well_formed(&t, &d), well_formed(&t, &d));
        prop_assert!(well_formed(&t, &d).is_empty());
    }

    #[test]
    fn scribble_links_close_and_count_choices(seed in any::<u64>()) {
        let (t, d) = light(seed);
        let docs = scribble::emit("Main", &t, &d).unwrap();
        prop_assert_eq!(docs.len(), d.len() + 1);
        let names: Vec<&str> = docs.iter().map(|p| p.name.as_str()).collect();
        let mut choices = 0;
        for doc in &docs {
            for line in &doc.body {
                let line = line.trim_start();
                if let Some(rest) = line.strip_prefix("run protocol ") {
                    let target = rest.split('(').next().unwrap();
                    prop_assert!(names.contains(&target));
                }
                if line.starts_with("choice at ") {
                    choices += 1;
                }
            }
        }
        let expected = t.choice_count() + d.iter().map(|(_, b)| b.choice_count()).sum::<usize>();
        prop_assert_eq!(choices, expected);
        prop_assert_eq!(scribble::emit("Main", &t, &d).unwrap(), docs);
    }

    #[test]
    fn parser_never_panics_on_text(text in "\\PC{0,200}") {
        let _ = parse(&text);
    }

    #[test]
    fn parser_never_panics_on_token_soup(
        toks in prop::collection::vec(
            prop::sample::select(vec![
                "main", "let", "=", ";", "a", "b", "->", ":", "{", "}", ",", "(", ")",
                ".", "end", "rec", "t", "call", "x", "nat", "unit", "int", "//", "\n",
            ]),
            0..60,
        )
    ) {
        let _ = parse(&toks.join(" "));
    }

    #[test]
    fn parser_never_panics_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse(&String::from_utf8_lossy(&bytes));
    }
}

#[test]
fn branch_order_does_not_change_language() {
    let x = Branch::new(Label::new("x").unwrap(), Sort::Nat, LightType::End);
    let y = Branch::new(Label::new("y").unwrap(), Sort::Str, LightType::End);
    let (a, b) = (Role::new("a").unwrap(), Role::new("b").unwrap());
    let t1 = LightType::branching(a.clone(), b.clone(), vec![x.clone(), y.clone()]).unwrap();
    let t2 = LightType::branching(a, b, vec![y, x]).unwrap();
    let d = Declarations::new();
    assert!(lang_eq(&t1, &d, &t2, &d).unwrap().equal);
    assert!(alpha_eq_decls(&t1, &d, &t2, &d));
    assert_ne!(t1, t2);
}
