//! Labelled transitions and trace languages of light global types.
//!
//! Recursion never unfolds: a `rec` terminates on the spot, exactly like
//! `end`. A `call` and a redundant interaction both move silently, so the
//! language of a type only records informative messages and termination.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::ast::{Declarations, Label, LightType, Role, Sort};
use crate::Error;

/// A visible communication `sender -> receiver : label(sort)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message {
    pub sender: Role,
    pub receiver: Role,
    pub label: Label,
    pub sort: Sort,
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}:{}", self.sender, self.receiver, self.label)?;
        match self.sort {
            Sort::Unit => f.write_str("()"),
            s => write!(f, "({s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Comm(Message),
    Tick,
    Tau,
}

/// Where a transition leads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Successor<'a> {
    Next(&'a LightType),
    Terminated,
}

/// The outgoing transitions of `t`.
///
/// A recursion variable has none; it is never reached from a closed type
/// because `rec` does not unfold.
pub fn step<'a>(
    t: &'a LightType,
    decls: &'a Declarations,
) -> Result<Vec<(Action, Successor<'a>)>, Error> {
    Ok(match t {
        LightType::Call(name) => {
            let body = decls
                .get(name)
                .ok_or_else(|| Error::UnboundCall(name.clone()))?;
            vec![(Action::Tau, Successor::Next(body))]
        }
        LightType::Rec { .. } | LightType::End => vec![(Action::Tick, Successor::Terminated)],
        LightType::Var(_) => Vec::new(),
        LightType::Branching(b) => match b.is_singleton_unit() {
            Some(only) => vec![(Action::Tau, Successor::Next(&only.cont))],
            None => b
                .branches()
                .iter()
                .map(|br| {
                    let msg = Message {
                        sender: b.sender().clone(),
                        receiver: b.receiver().clone(),
                        label: br.label.clone(),
                        sort: br.sort,
                    };
                    (Action::Comm(msg), Successor::Next(&br.cont))
                })
                .collect(),
        },
    })
}

/// A finite sequence of messages, possibly closed by termination.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    pub visible: Vec<Message>,
    pub terminated: bool,
}

impl Trace {
    pub fn empty() -> Self {
        Self {
            visible: Vec::new(),
            terminated: false,
        }
    }

    pub fn tick() -> Self {
        Self {
            visible: Vec::new(),
            terminated: true,
        }
    }

    fn prepend(&self, m: &Message) -> Self {
        let mut visible = Vec::with_capacity(self.visible.len() + 1);
        visible.push(m.clone());
        visible.extend(self.visible.iter().cloned());
        Self {
            visible,
            terminated: self.terminated,
        }
    }
}

impl fmt::Display for Trace {
    /// Messages separated by spaces, `tick` for termination, `<eps>` when empty.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.visible.is_empty() && !self.terminated {
            return f.write_str("<eps>");
        }
        let mut first = true;
        for m in &self.visible {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{m}")?;
            first = false;
        }
        if self.terminated {
            if !first {
                f.write_str(" ")?;
            }
            f.write_str("tick")?;
        }
        Ok(())
    }
}

/// The set of traces generated by a type, always containing the empty trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceLanguage {
    pub traces: BTreeSet<Trace>,
}

impl TraceLanguage {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    pub fn contains(&self, t: &Trace) -> bool {
        self.traces.contains(t)
    }

    /// One rendered trace per line, sorted as strings.
    pub fn render_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self.traces.iter().map(Trace::to_string).collect();
        lines.sort();
        lines
    }

    /// Every unterminated proper prefix of a member is a member, and so is the empty trace.
    pub fn is_prefix_closed(&self) -> bool {
        self.traces.contains(&Trace::empty())
            && self.traces.iter().all(|t| {
                let len = t.visible.len() + usize::from(t.terminated);
                (0..len).all(|k| {
                    self.traces.contains(&Trace {
                        visible: t.visible[..k.min(t.visible.len())].to_vec(),
                        terminated: false,
                    })
                })
            })
    }
}

/// Trace language together with the number of distinct states explored.
#[derive(Debug, Clone)]
pub struct Exploration {
    pub language: TraceLanguage,
    pub states: usize,
}

type Lang = Rc<BTreeSet<Trace>>;

struct Explorer<'a> {
    decls: &'a Declarations,
    memo: HashMap<*const LightType, Lang>,
}

impl<'a> Explorer<'a> {
    /// States are subterm occurrences of the main type and the declaration
    /// bodies, identified by address; each one is expanded once.
    fn lang(&mut self, t: &'a LightType) -> Result<Lang, Error> {
        let key = t as *const LightType;
        if let Some(l) = self.memo.get(&key) {
            return Ok(Rc::clone(l));
        }
        let mut out = BTreeSet::new();
        out.insert(Trace::empty());
        for (action, next) in step(t, self.decls)? {
            match (action, next) {
                (Action::Tick, _) => {
                    out.insert(Trace::tick());
                }
                (Action::Tau, Successor::Next(n)) => {
                    out.extend(self.lang(n)?.iter().cloned());
                }
                (Action::Comm(m), Successor::Next(n)) => {
                    out.extend(self.lang(n)?.iter().map(|tr| tr.prepend(&m)));
                }
                (_, Successor::Terminated) => {}
            }
        }
        let l = Rc::new(out);
        self.memo.insert(key, Rc::clone(&l));
        Ok(l)
    }
}

/// Upper bound on explored states: subterms times (declarations + 1).
pub fn state_bound(t: &LightType, decls: &Declarations) -> usize {
    (t.size() + decls.size()) * (decls.len() + 1)
}

/// Enumerates the language of `t` and reports how many states were visited.
///
/// Terminates on well-formed input: `rec` never unfolds and the call graph is
/// acyclic, so every path is finite.
pub fn explore(t: &LightType, decls: &Declarations) -> Result<Exploration, Error> {
    let mut ex = Explorer {
        decls,
        memo: HashMap::new(),
    };
    let lang = ex.lang(t)?;
    let states = ex.memo.len();
    let bound = state_bound(t, decls);
    if states > bound {
        return Err(Error::Internal(format!(
            "explored {states} states, bound is {bound}"
        )));
    }
    drop(ex);
    let traces = Rc::try_unwrap(lang).unwrap_or_else(|rc| (*rc).clone());
    Ok(Exploration {
        language: TraceLanguage { traces },
        states,
    })
}

/// The trace language of `t` relative to `decls`.
pub fn traces(t: &LightType, decls: &Declarations) -> Result<TraceLanguage, Error> {
    explore(t, decls).map(|e| e.language)
}

/// Which side of a comparison a witness trace belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub trace: Trace,
    pub only_in: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LangEq {
    pub equal: bool,
    /// The least trace in the symmetric difference, when the languages differ.
    pub witness: Option<Witness>,
}

/// Compares the languages of two (type, declarations) pairs.
pub fn lang_eq(
    t1: &LightType,
    d1: &Declarations,
    t2: &LightType,
    d2: &Declarations,
) -> Result<LangEq, Error> {
    let a = traces(t1, d1)?;
    let b = traces(t2, d2)?;
    let left = a.traces.difference(&b.traces).next().map(|t| Witness {
        trace: t.clone(),
        only_in: Side::Left,
    });
    let right = b.traces.difference(&a.traces).next().map(|t| Witness {
        trace: t.clone(),
        only_in: Side::Right,
    });
    let witness = match (left, right) {
        (Some(l), Some(r)) => Some(if r.trace < l.trace { r } else { l }),
        (l, r) => l.or(r),
    };
    Ok(LangEq {
        equal: witness.is_none(),
        witness,
    })
}
