use slt_core::fixtures;
use slt_core::{parse, print, Declarations, LightType};

fn canonical(src: &str) -> String {
    let f = parse(src).unwrap();
    print(&f.main, &f.decls)
}

#[test]
fn store_prints_canonically() {
    assert_eq!(canonical(fixtures::STORE), include_str!("golden/store.lgt"));
}

#[test]
fn gift_prints_canonically() {
    assert_eq!(canonical(fixtures::GIFT), include_str!("golden/gift.lgt"));
    assert_eq!(
        canonical(fixtures::GIFT_SPLIT),
        include_str!("golden/gift_split.lgt")
    );
}

#[test]
fn golden_files_are_fixpoints() {
    for golden in [
        include_str!("golden/store.lgt"),
        include_str!("golden/gift.lgt"),
        include_str!("golden/gift_split.lgt"),
    ] {
        assert_eq!(canonical(golden), golden);
    }
}

#[test]
fn end_prints_as_one_line() {
    assert_eq!(
        print(&LightType::End, &Declarations::new()),
        "main = end;\n"
    );
}

#[test]
fn fixtures_round_trip_structurally() {
    for src in [
        fixtures::GIFT,
        fixtures::GIFT_SPLIT,
        fixtures::GIFT_STAGE1,
        fixtures::STORE,
        fixtures::STOP_LOOP,
    ] {
        let f = parse(src).unwrap();
        let again = parse(&print(&f.main, &f.decls)).unwrap();
        assert_eq!(again.main, f.main);
        assert_eq!(again.decls, f.decls);
    }
}
