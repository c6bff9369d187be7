//! Abstract syntax of light global types and declaration tables.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

/// Words of the surface syntax that can never be used as a name.
pub const KEYWORDS: &[&str] = &["end", "rec", "call", "let", "main"];

/// Rejected at construction of a model value.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is a reserved keyword")]
    Keyword(String),
    #[error("role `{0}` sends to itself")]
    SelfMessage(String),
    #[error("label `{0}` occurs twice in one branching")]
    DuplicateLabel(String),
    #[error("a branching needs at least one branch")]
    EmptyBranching,
    #[error("declaration `{0}` is already defined")]
    DuplicateDeclaration(String),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

macro_rules! name_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
                let name = name.into();
                if !is_identifier(&name) {
                    return Err(ModelError::BadIdentifier(name));
                }
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(ModelError::Keyword(name));
                }
                Ok(Self(name))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
    };
}

name_type!(
    /// A session participant.
    Role
);
name_type!(
    /// A message label chosen by the sender of a branching.
    Label
);
name_type!(
    /// A recursion variable bound by `rec`.
    RecVar
);
name_type!(
    /// The name of a declaration, the target of `call`.
    DeclName
);

/// Payload carriers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Unit,
    Nat,
    Str,
    Bool,
}

impl Sort {
    pub fn keyword(self) -> &'static str {
        match self {
            Sort::Unit => "unit",
            Sort::Nat => "nat",
            Sort::Str => "str",
            Sort::Bool => "bool",
        }
    }

    /// `int` is accepted as a spelling of `nat`.
    pub fn from_keyword(s: &str) -> Option<Sort> {
        match s {
            "unit" => Some(Sort::Unit),
            "nat" | "int" => Some(Sort::Nat),
            "str" => Some(Sort::Str),
            "bool" => Some(Sort::Bool),
            _ => None,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// One alternative `label(sort) . continuation` of a branching.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branch {
    pub label: Label,
    pub sort: Sort,
    pub cont: LightType,
}

impl Branch {
    pub fn new(label: Label, sort: Sort, cont: LightType) -> Self {
        Self { label, sort, cont }
    }
}

/// `sender -> receiver : { l_j(S_j) . L_j }`.
///
/// Always has at least one branch, distinct labels and distinct endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Branching {
    sender: Role,
    receiver: Role,
    branches: Vec<Branch>,
}

impl Branching {
    pub fn new(sender: Role, receiver: Role, branches: Vec<Branch>) -> Result<Self, ModelError> {
        if sender == receiver {
            return Err(ModelError::SelfMessage(sender.0));
        }
        if branches.is_empty() {
            return Err(ModelError::EmptyBranching);
        }
        let mut seen = HashSet::new();
        for b in &branches {
            if !seen.insert(&b.label) {
                return Err(ModelError::DuplicateLabel(b.label.0.clone()));
            }
        }
        Ok(Self {
            sender,
            receiver,
            branches,
        })
    }

    pub fn sender(&self) -> &Role {
        &self.sender
    }

    pub fn receiver(&self) -> &Role {
        &self.receiver
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn branch(&self, label: &Label) -> Option<&Branch> {
        self.branches.iter().find(|b| &b.label == label)
    }

    /// A single branch carrying `unit`: the shape of a redundant interaction.
    pub fn is_singleton_unit(&self) -> Option<&Branch> {
        match self.branches.as_slice() {
            [only] if only.sort == Sort::Unit => Some(only),
            _ => None,
        }
    }

    /// Rebuilds the node with new continuations; labels, sorts and endpoints are kept.
    pub fn with_continuations(&self, conts: impl IntoIterator<Item = LightType>) -> Branching {
        let branches: Vec<Branch> = self
            .branches
            .iter()
            .zip(conts)
            .map(|(b, cont)| Branch::new(b.label.clone(), b.sort, cont))
            .collect();
        debug_assert_eq!(branches.len(), self.branches.len());
        Branching {
            sender: self.sender.clone(),
            receiver: self.receiver.clone(),
            branches,
        }
    }

    pub fn into_parts(self) -> (Role, Role, Vec<Branch>) {
        (self.sender, self.receiver, self.branches)
    }
}

/// A light global type. Global types are the closed, call-free subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LightType {
    Branching(Branching),
    Rec { var: RecVar, body: Box<LightType> },
    Var(RecVar),
    End,
    Call(DeclName),
}

impl LightType {
    /// Checked constructor for a branching node.
    pub fn branching(
        sender: Role,
        receiver: Role,
        branches: Vec<Branch>,
    ) -> Result<LightType, ModelError> {
        Branching::new(sender, receiver, branches).map(LightType::Branching)
    }

    /// Single-branch interaction `sender -> receiver : label(sort) . cont`.
    pub fn message(
        sender: Role,
        receiver: Role,
        label: Label,
        sort: Sort,
        cont: LightType,
    ) -> Result<LightType, ModelError> {
        Self::branching(sender, receiver, vec![Branch::new(label, sort, cont)])
    }

    pub fn rec(var: RecVar, body: LightType) -> LightType {
        LightType::Rec {
            var,
            body: Box::new(body),
        }
    }

    /// Direct children, in branch order.
    pub fn children(&self) -> Vec<&LightType> {
        match self {
            LightType::Branching(b) => b.branches.iter().map(|br| &br.cont).collect(),
            LightType::Rec { body, .. } => vec![body],
            LightType::Var(_) | LightType::End | LightType::Call(_) => Vec::new(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(LightType::size)
            .sum::<usize>()
    }

    pub fn contains_call(&self) -> bool {
        match self {
            LightType::Call(_) => true,
            other => other.children().into_iter().any(LightType::contains_call),
        }
    }

    /// Call targets in depth-first, branch order (with repetitions).
    pub fn calls(&self) -> Vec<&DeclName> {
        let mut out = Vec::new();
        self.collect_calls(&mut out);
        out
    }

    fn collect_calls<'a>(&'a self, out: &mut Vec<&'a DeclName>) {
        match self {
            LightType::Call(name) => out.push(name),
            other => other
                .children()
                .into_iter()
                .for_each(|c| c.collect_calls(out)),
        }
    }

    /// True when every recursion variable is bound by an enclosing `rec`.
    pub fn is_closed(&self) -> bool {
        fn go<'a>(t: &'a LightType, bound: &mut Vec<&'a RecVar>) -> bool {
            match t {
                LightType::Var(v) => bound.contains(&v),
                LightType::Rec { var, body } => {
                    bound.push(var);
                    let ok = go(body, bound);
                    bound.pop();
                    ok
                }
                LightType::Branching(b) => b.branches.iter().all(|br| go(&br.cont, bound)),
                LightType::End | LightType::Call(_) => true,
            }
        }
        go(self, &mut Vec::new())
    }

    /// Roles of this tree alone (calls are not followed), in first-occurrence order.
    pub fn local_roles(&self) -> Vec<Role> {
        fn go(t: &LightType, out: &mut Vec<Role>) {
            if let LightType::Branching(b) = t {
                for r in [&b.sender, &b.receiver] {
                    if !out.contains(r) {
                        out.push(r.clone());
                    }
                }
            }
            t.children().into_iter().for_each(|c| go(c, out));
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Number of branching nodes with two or more branches.
    pub fn choice_count(&self) -> usize {
        let own = matches!(self, LightType::Branching(b) if b.branches.len() > 1) as usize;
        own + self
            .children()
            .into_iter()
            .map(LightType::choice_count)
            .sum::<usize>()
    }

    /// Replaces every `call from` by `call to`.
    pub fn rename_calls(&self, from: &DeclName, to: &DeclName) -> LightType {
        match self {
            LightType::Call(n) if n == from => LightType::Call(to.clone()),
            LightType::Branching(b) => LightType::Branching(
                b.with_continuations(b.branches.iter().map(|br| br.cont.rename_calls(from, to))),
            ),
            LightType::Rec { var, body } => {
                LightType::rec(var.clone(), body.rename_calls(from, to))
            }
            other => other.clone(),
        }
    }
}

/// An ordered table of named light global types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Declarations {
    entries: IndexMap<DeclName, LightType>,
}

impl Declarations {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a declaration. Names must be unique.
    pub fn insert(&mut self, name: DeclName, body: LightType) -> Result<(), ModelError> {
        if self.entries.contains_key(&name) {
            return Err(ModelError::DuplicateDeclaration(name.0));
        }
        self.entries.insert(name, body);
        Ok(())
    }

    pub fn get(&self, name: &DeclName) -> Option<&LightType> {
        self.entries.get(name)
    }

    pub fn contains(&self, name: &DeclName) -> bool {
        self.entries.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DeclName, &LightType)> {
        self.entries.iter()
    }

    pub fn names(&self) -> impl Iterator<Item = &DeclName> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Replaces the body of an existing declaration, keeping its position.
    pub fn replace(&mut self, name: &DeclName, body: LightType) -> Option<LightType> {
        self.entries
            .get_mut(name)
            .map(|slot| std::mem::replace(slot, body))
    }

    pub fn remove(&mut self, name: &DeclName) -> Option<LightType> {
        self.entries.shift_remove(name)
    }

    /// Appends all of `other`. Fails on the first name clash.
    pub fn extend(&mut self, other: Declarations) -> Result<(), ModelError> {
        for (name, body) in other.entries {
            self.insert(name, body)?;
        }
        Ok(())
    }

    /// Total node count over all bodies.
    pub fn size(&self) -> usize {
        self.entries.values().map(LightType::size).sum()
    }
}

impl FromIterator<(DeclName, LightType)> for Declarations {
    /// Later duplicates are dropped.
    fn from_iter<I: IntoIterator<Item = (DeclName, LightType)>>(iter: I) -> Self {
        let mut entries = IndexMap::new();
        for (name, body) in iter {
            entries.entry(name).or_insert(body);
        }
        Self { entries }
    }
}

impl<'a> IntoIterator for &'a Declarations {
    type Item = (&'a DeclName, &'a LightType);
    type IntoIter = indexmap::map::Iter<'a, DeclName, LightType>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

/// Roles of `t` and, transitively, of every declaration it calls.
pub fn roles_of(t: &LightType, decls: &Declarations) -> Result<BTreeSet<Role>, crate::Error> {
    let mut roles = BTreeSet::new();
    let mut visited: HashSet<&DeclName> = HashSet::new();
    let mut stack = vec![t];
    while let Some(t) = stack.pop() {
        roles.extend(t.local_roles());
        for name in t.calls() {
            if visited.insert(name) {
                let body = decls
                    .get(name)
                    .ok_or_else(|| crate::Error::UnboundCall(name.clone()))?;
                stack.push(body);
            }
        }
    }
    Ok(roles)
}

/// True iff `t` is a global type: call-free and closed.
pub fn is_global(t: &LightType) -> bool {
    !t.contains_call() && t.is_closed()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn role(s: &str) -> Role {
        Role::new(s).unwrap()
    }

    fn label(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn identifiers() {
        assert!(Label::new("yes1").is_ok());
        assert!(Label::new("_x").is_ok());
        assert_eq!(
            Label::new("1x"),
            Err(ModelError::BadIdentifier("1x".into()))
        );
        assert!(Role::new("").is_err());
        assert!(Role::new("a-b").is_err());
        assert_eq!(
            DeclName::new("call"),
            Err(ModelError::Keyword("call".into()))
        );
    }

    #[test]
    fn branching_boundary_checks() {
        let b = |l: &str| Branch::new(label(l), Sort::Unit, LightType::End);
        assert_eq!(
            Branching::new(role("a"), role("a"), vec![b("x")]),
            Err(ModelError::SelfMessage("a".into()))
        );
        assert_eq!(
            Branching::new(role("a"), role("b"), vec![]),
            Err(ModelError::EmptyBranching)
        );
        assert_eq!(
            Branching::new(role("a"), role("b"), vec![b("x"), b("x")]),
            Err(ModelError::DuplicateLabel("x".into()))
        );
        assert!(Branching::new(role("a"), role("b"), vec![b("x"), b("y")]).is_ok());
    }

    #[test]
    fn int_is_nat() {
        assert_eq!(Sort::from_keyword("int"), Some(Sort::Nat));
        assert_eq!(Sort::from_keyword("float"), None);
    }

    #[test]
    fn declarations_reject_duplicates() {
        let mut d = Declarations::new();
        let x = DeclName::new("x").unwrap();
        d.insert(x.clone(), LightType::End).unwrap();
        assert!(d.insert(x, LightType::End).is_err());
    }

    #[test]
    fn end_is_global_and_roleless() {
        assert!(is_global(&LightType::End));
        assert!(roles_of(&LightType::End, &Declarations::new())
            .unwrap()
            .is_empty());
        assert!(!is_global(&LightType::Var(RecVar::new("t").unwrap())));
        assert!(!is_global(&LightType::Call(DeclName::new("x").unwrap())));
    }

    #[test]
    fn roles_of_reports_unbound_call() {
        let t = LightType::Call(DeclName::new("nowhere").unwrap());
        assert!(matches!(
            roles_of(&t, &Declarations::new()),
            Err(crate::Error::UnboundCall(_))
        ));
    }
}
