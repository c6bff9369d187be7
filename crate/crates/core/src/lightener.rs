//! Removing redundant interactions by splitting a type into `call`-linked
//! declarations.
//!
//! [`descend`] pushes the first interactions received by a role out of a type
//! into fresh declarations, erasing them outright when they are themselves
//! redundant. [`eliminate`] removes one redundant interaction: where the
//! receiver cannot observe which branch was taken above it, the sibling
//! branches are passed through [`descend`] for that receiver so that the
//! receiver learns of them through a `call` instead. [`lighten_fully`] repeats
//! elimination until no redundant interaction is left.

use std::collections::HashSet;

use crate::alpha::alpha_eq_types;
use crate::ast::{DeclName, Declarations, Label, LightType, Role};
use crate::diag::Owner;
use crate::redundancy::{find_redundant, ContextPath, RedundantSite};
use crate::Error;

/// Issues `<prefix>1`, `<prefix>2`, … skipping names already in use.
#[derive(Debug, Clone)]
pub struct FreshNamer {
    prefix: String,
    counter: usize,
    taken: HashSet<DeclName>,
}

impl FreshNamer {
    /// `prefix` must itself be a valid declaration name.
    pub fn new<'a>(
        prefix: &str,
        taken: impl IntoIterator<Item = &'a DeclName>,
    ) -> Result<Self, Error> {
        DeclName::new(prefix)?;
        Ok(Self {
            prefix: prefix.to_string(),
            counter: 0,
            taken: taken.into_iter().cloned().collect(),
        })
    }

    pub fn fresh(&mut self) -> DeclName {
        loop {
            self.counter += 1;
            let name = DeclName::new(format!("{}{}", self.prefix, self.counter))
                .expect("prefix followed by digits is an identifier");
            if self.taken.insert(name.clone()) {
                return name;
            }
        }
    }
}

/// A rewritten type plus the declarations created while rewriting it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LighteningResult {
    pub result: LightType,
    pub new_decls: Declarations,
}

impl LighteningResult {
    fn plain(result: LightType) -> Self {
        Self {
            result,
            new_decls: Declarations::new(),
        }
    }
}

fn absorb(into: &mut Declarations, from: Declarations) {
    into.extend(from)
        .expect("names issued by one FreshNamer are distinct");
}

/// Cuts `t` at the first interactions received by `role` in each branch.
///
/// Such an interaction disappears if it is redundant and otherwise becomes a
/// `call` to a fresh declaration holding it and everything after it. `rec`,
/// variables, `call` and `end` are left alone.
pub fn descend(t: &LightType, role: &Role, namer: &mut FreshNamer) -> LighteningResult {
    match t {
        LightType::End | LightType::Var(_) | LightType::Call(_) | LightType::Rec { .. } => {
            LighteningResult::plain(t.clone())
        }
        LightType::Branching(b) if b.receiver() == role => match b.is_singleton_unit() {
            Some(only) => LighteningResult::plain(only.cont.clone()),
            None => {
                let name = namer.fresh();
                let mut new_decls = Declarations::new();
                absorb(
                    &mut new_decls,
                    [(name.clone(), t.clone())].into_iter().collect(),
                );
                LighteningResult {
                    result: LightType::Call(name),
                    new_decls,
                }
            }
        },
        LightType::Branching(b) => {
            let mut new_decls = Declarations::new();
            let conts: Vec<LightType> = b
                .branches()
                .iter()
                .map(|br| {
                    let r = descend(&br.cont, role, namer);
                    absorb(&mut new_decls, r.new_decls);
                    r.result
                })
                .collect();
            LighteningResult {
                result: LightType::Branching(b.with_continuations(conts)),
                new_decls,
            }
        }
    }
}

fn stale(site: &RedundantSite) -> Error {
    Error::SiteStale(site.path.to_string())
}

/// Replaces the redundant interaction at `path` by its continuation, leaving
/// everything else untouched.
fn erase_at(t: &LightType, path: &[Label], site: &RedundantSite) -> Result<LightType, Error> {
    match (path.split_first(), t) {
        (None, _) if site.matches(t) => Ok(site.continuation.clone()),
        (Some((label, rest)), LightType::Branching(b)) => {
            if b.branch(label).is_none() {
                return Err(stale(site));
            }
            let conts = b
                .branches()
                .iter()
                .map(|br| {
                    if &br.label == label {
                        erase_at(&br.cont, rest, site)
                    } else {
                        Ok(br.cont.clone())
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LightType::Branching(b.with_continuations(conts)))
        }
        _ => Err(stale(site)),
    }
}

fn eliminate_along(
    t: &LightType,
    path: &[Label],
    site: &RedundantSite,
    namer: &mut FreshNamer,
) -> Result<LighteningResult, Error> {
    let Some((label, rest)) = path.split_first() else {
        return if site.matches(t) {
            Ok(LighteningResult::plain(site.continuation.clone()))
        } else {
            Err(stale(site))
        };
    };
    let LightType::Branching(b) = t else {
        return Err(stale(site));
    };
    if b.branch(label).is_none() {
        return Err(stale(site));
    }
    if b.sender() == &site.receiver || b.receiver() == &site.receiver {
        // The receiver takes part in this choice and already knows the branch.
        return Ok(LighteningResult::plain(erase_at(t, path, site)?));
    }
    let mut new_decls = Declarations::new();
    let mut conts = Vec::with_capacity(b.branches().len());
    for br in b.branches() {
        let r = if &br.label == label {
            eliminate_along(&br.cont, rest, site, namer)?
        } else {
            descend(&br.cont, &site.receiver, namer)
        };
        absorb(&mut new_decls, r.new_decls);
        conts.push(r.result);
    }
    Ok(LighteningResult {
        result: LightType::Branching(b.with_continuations(conts)),
        new_decls,
    })
}

/// Removes the redundant interaction `site` of `t`.
///
/// Fails with [`Error::SiteStale`] when the site's path does not lead to the
/// interaction it describes.
pub fn eliminate(
    t: &LightType,
    site: &RedundantSite,
    namer: &mut FreshNamer,
) -> Result<LighteningResult, Error> {
    eliminate_along(t, &site.path.steps, site, namer)
}

/// Outcome of a lightening run over a main type and its declarations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lightening {
    pub main: LightType,
    /// The input declarations (bodies possibly rewritten) followed by the fresh ones.
    pub decls: Declarations,
    /// Names created by this run, in order of creation.
    pub fresh: Vec<DeclName>,
}

impl Lightening {
    fn start(main: &LightType, decls: &Declarations) -> Self {
        Self {
            main: main.clone(),
            decls: decls.clone(),
            fresh: Vec::new(),
        }
    }

    /// Every redundant site, main type first, then declarations in table order.
    pub fn sites(&self) -> Vec<(Owner, RedundantSite)> {
        let mut out: Vec<(Owner, RedundantSite)> = find_redundant(&self.main)
            .into_iter()
            .map(|s| (Owner::Main, s))
            .collect();
        for (name, body) in &self.decls {
            out.extend(
                find_redundant(body)
                    .into_iter()
                    .map(|s| (Owner::Decl(name.clone()), s)),
            );
        }
        out
    }

    /// Eliminates one site in the tree owning it and merges the new declarations.
    pub fn apply(
        &mut self,
        owner: &Owner,
        site: &RedundantSite,
        namer: &mut FreshNamer,
    ) -> Result<(), Error> {
        let target = match owner {
            Owner::Main => &self.main,
            Owner::Decl(name) => self
                .decls
                .get(name)
                .ok_or_else(|| Error::UnboundCall(name.clone()))?,
        };
        let LighteningResult { result, new_decls } = eliminate(target, site, namer)?;
        match owner {
            Owner::Main => self.main = result,
            Owner::Decl(name) => {
                self.decls.replace(name, result);
            }
        }
        self.fresh.extend(new_decls.names().cloned());
        self.decls.extend(new_decls)?;
        Ok(())
    }
}

/// Eliminates redundant interactions until none remain anywhere.
///
/// Each round removes the first site in traversal order, looking at the main
/// type before the declarations. Fresh declarations are stored as created and
/// re-scanned on later rounds. Expects `well_formed(main, decls)` to be empty.
pub fn lighten_fully(
    main: &LightType,
    decls: &Declarations,
    prefix: &str,
) -> Result<Lightening, Error> {
    let mut namer = FreshNamer::new(prefix, decls.names())?;
    let mut state = Lightening::start(main, decls);
    let mut sites = state.sites();
    while let Some((owner, site)) = sites.first() {
        let before = sites.len();
        state.apply(owner, site, &mut namer)?;
        sites = state.sites();
        if sites.len() >= before {
            return Err(Error::Internal(format!(
                "redundant sites did not decrease ({before} -> {})",
                sites.len()
            )));
        }
    }
    Ok(state)
}

/// Eliminates only the redundant interaction of `main` at `path`.
pub fn lighten_at(
    main: &LightType,
    decls: &Declarations,
    path: &ContextPath,
    prefix: &str,
) -> Result<Lightening, Error> {
    let site = find_redundant(main)
        .into_iter()
        .find(|s| &s.path == path)
        .ok_or_else(|| Error::SiteStale(path.to_string()))?;
    let mut namer = FreshNamer::new(prefix, decls.names())?;
    let mut state = Lightening::start(main, decls);
    state.apply(&Owner::Main, &site, &mut namer)?;
    Ok(state)
}

/// Merges fresh declarations whose bodies are alpha-equal, redirecting calls
/// to the first of each group. Input declarations are never merged.
pub fn dedup(mut l: Lightening) -> Lightening {
    loop {
        let mut merge = None;
        'search: for (j, later) in l.fresh.iter().enumerate() {
            for earlier in &l.fresh[..j] {
                let (Some(a), Some(b)) = (l.decls.get(earlier), l.decls.get(later)) else {
                    continue;
                };
                if alpha_eq_types(a, b) {
                    merge = Some((later.clone(), earlier.clone()));
                    break 'search;
                }
            }
        }
        let Some((gone, kept)) = merge else {
            return l;
        };
        l.decls.remove(&gone);
        l.fresh.retain(|n| n != &gone);
        l.main = l.main.rename_calls(&gone, &kept);
        let names: Vec<DeclName> = l.decls.names().cloned().collect();
        for name in names {
            let body = l
                .decls
                .get(&name)
                .expect("listed")
                .rename_calls(&gone, &kept);
            l.decls.replace(&name, body);
        }
    }
}

/// Runs elimination to completion under every possible order of choosing
/// sites, returning one outcome per order (at most `limit`).
pub fn explore_orders(
    main: &LightType,
    decls: &Declarations,
    prefix: &str,
    limit: usize,
) -> Result<Vec<Lightening>, Error> {
    fn go(
        state: Lightening,
        namer: FreshNamer,
        limit: usize,
        out: &mut Vec<Lightening>,
    ) -> Result<(), Error> {
        let sites = state.sites();
        if sites.is_empty() {
            out.push(state);
            return Ok(());
        }
        for (owner, site) in sites {
            if out.len() >= limit {
                break;
            }
            let mut next = state.clone();
            let mut namer = namer.clone();
            next.apply(&owner, &site, &mut namer)?;
            go(next, namer, limit, out)?;
        }
        Ok(())
    }
    let namer = FreshNamer::new(prefix, decls.names())?;
    let mut out = Vec::new();
    go(Lightening::start(main, decls), namer, limit, &mut out)?;
    Ok(out)
}
