//! Redundant interactions: a single `unit` label sent at a position reachable
//! from the root through branchings only, never through a `rec`.

use std::fmt;
use std::str::FromStr;

use crate::ast::{Branching, Label, LightType, ModelError, Role};

/// A hole position: the label selected at each branching from the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ContextPath {
    pub steps: Vec<Label>,
}

impl ContextPath {
    pub fn root() -> Self {
        Self::default()
    }

    pub fn is_root(&self) -> bool {
        self.steps.is_empty()
    }

    /// The node this path addresses, if every step selects an existing branch
    /// of a branching.
    pub fn resolve<'a>(&self, t: &'a LightType) -> Option<&'a LightType> {
        self.steps.iter().try_fold(t, |node, label| match node {
            LightType::Branching(b) => b.branch(label).map(|br| &br.cont),
            _ => None,
        })
    }
}

impl fmt::Display for ContextPath {
    /// `label1/label2/…`; the root renders as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            f.write_str(l.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for ContextPath {
    type Err = ModelError;

    /// Accepts `""` or `"/"` for the root; leading and trailing slashes are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .trim_matches('/')
            .split('/')
            .filter(|p| !p.is_empty())
            .map(Label::new)
            .collect::<Result<_, _>>()?;
        Ok(Self { steps })
    }
}

/// `sender -> receiver : label() . continuation` at `path`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundantSite {
    pub path: ContextPath,
    pub sender: Role,
    pub receiver: Role,
    pub label: Label,
    pub continuation: LightType,
}

impl RedundantSite {
    fn at(path: ContextPath, b: &Branching) -> Option<Self> {
        let only = b.is_singleton_unit()?;
        Some(Self {
            path,
            sender: b.sender().clone(),
            receiver: b.receiver().clone(),
            label: only.label.clone(),
            continuation: only.cont.clone(),
        })
    }

    /// True iff `node` is exactly the interaction this site describes.
    pub fn matches(&self, node: &LightType) -> bool {
        match node {
            LightType::Branching(b) => b.is_singleton_unit().is_some_and(|only| {
                b.sender() == &self.sender
                    && b.receiver() == &self.receiver
                    && only.label == self.label
                    && only.cont == self.continuation
            }),
            _ => false,
        }
    }
}

impl fmt::Display for RedundantSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} -> {} : {}() at `{}`",
            self.sender, self.receiver, self.label, self.path
        )
    }
}

/// All redundant interactions of `t` in depth-first, branch-order (pre-order)
/// traversal. Nothing under `rec` or behind `call` is inspected; a site nested
/// below another site is reported too.
pub fn find_redundant(t: &LightType) -> Vec<RedundantSite> {
    fn go(t: &LightType, path: &mut Vec<Label>, out: &mut Vec<RedundantSite>) {
        let LightType::Branching(b) = t else {
            return;
        };
        if let Some(site) = RedundantSite::at(
            ContextPath {
                steps: path.clone(),
            },
            b,
        ) {
            out.push(site);
        }
        for br in b.branches() {
            path.push(br.label.clone());
            go(&br.cont, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::syntax::parse;

    fn main_of(src: &str) -> LightType {
        parse(src).unwrap().main
    }

    #[test]
    fn running_example_sites() {
        let g = fixtures::running_example().main;
        let sites = find_redundant(&g);
        let labels: Vec<&str> = sites.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, ["no4", "no5", "no6"]);
        let paths: Vec<String> = sites.iter().map(|s| s.path.to_string()).collect();
        assert_eq!(paths, ["req1/yes1/req2/no2", "req1/no1", "req1/no1/no5"]);
        assert_eq!(sites[0].receiver.as_str(), "store");
        for s in &sites {
            assert!(s.matches(s.path.resolve(&g).unwrap()));
        }
    }

    #[test]
    fn recursion_shields_its_body() {
        assert!(find_redundant(&fixtures::stop_loop().main).is_empty());
    }

    #[test]
    fn trivial_cases() {
        assert!(find_redundant(&LightType::End).is_empty());
        assert!(find_redundant(&main_of("main = a -> b : { x(nat).end, y(str).end };")).is_empty());
        assert!(find_redundant(&main_of("main = a -> b : x(nat) . end;")).is_empty());
        assert_eq!(
            find_redundant(&main_of("main = a -> b : bye() . end;")).len(),
            1
        );
    }

    #[test]
    fn path_syntax() {
        let p: ContextPath = "req1/yes1/".parse().unwrap();
        assert_eq!(p.to_string(), "req1/yes1");
        assert!("/".parse::<ContextPath>().unwrap().is_root());
        assert!("".parse::<ContextPath>().unwrap().is_root());
        assert!("a/1b".parse::<ContextPath>().is_err());
    }
}
