//! Reference protocols shipped with the crate.

use crate::syntax::{parse, SourceFile};

/// The gift-request protocol as one global type.
pub const GIFT: &str = include_str!("../fixtures/gift.lgt");
/// The gift protocol split into `main`, `getKey` and `getGiftPrime`.
pub const GIFT_SPLIT: &str = include_str!("../fixtures/gift_split.lgt");
/// The gift protocol with only the `no4` interaction eliminated.
pub const GIFT_STAGE1: &str = include_str!("../fixtures/gift_stage1.lgt");
/// The store exchange as a single declaration `lc`.
pub const STORE: &str = include_str!("../fixtures/store.lgt");
/// A loop whose closing `stop()` message sits under recursion.
pub const STOP_LOOP: &str = include_str!("../fixtures/stop_loop.lgt");

fn load(src: &str) -> SourceFile {
    parse(src).expect("bundled fixture parses")
}

pub fn running_example() -> SourceFile {
    load(GIFT)
}

pub fn running_example_decls() -> SourceFile {
    load(GIFT_SPLIT)
}

pub fn running_example_stage1() -> SourceFile {
    load(GIFT_STAGE1)
}

pub fn store() -> SourceFile {
    load(STORE)
}

pub fn stop_loop() -> SourceFile {
    load(STOP_LOOP)
}
