//! Scribble-style rendering of light global types.
//!
//! Every tree becomes one `protocol`; `call` becomes `run protocol … at r;`
//! where `r` is the sender of the first interaction of the called protocol.
//! Payload variables cannot be recovered from types and are named `x1`, `x2`,
//! … per protocol. The `rec t { … }` / `continue t;` rendering of recursion is
//! experimental.

use std::fmt;

use crate::ast::{DeclName, Declarations, LightType, Role, Sort};
use crate::Error;

/// One rendered protocol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProtocolDoc {
    pub name: String,
    /// Roles of the protocol's own interactions, in first-occurrence order.
    pub roles: Vec<Role>,
    /// Statement lines, indented relative to the protocol body.
    pub body: Vec<String>,
}

fn role_list(roles: &[Role]) -> String {
    roles
        .iter()
        .map(|r| format!("role {r}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl fmt::Display for ProtocolDoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "protocol {}({}) {{", self.name, role_list(&self.roles))?;
        if self.body.is_empty() {
            return f.write_str(" }\n");
        }
        f.write_str("\n")?;
        for line in &self.body {
            writeln!(f, "  {line}")?;
        }
        f.write_str("}\n")
    }
}

/// Scribble spells the natural-number carrier `int`.
fn sort_name(sort: Sort) -> &'static str {
    match sort {
        Sort::Nat => "int",
        other => other.keyword(),
    }
}

/// Sender of the first interaction met from `t`, following calls.
fn first_sender<'a>(
    t: &'a LightType,
    decls: &'a Declarations,
    seen: &mut Vec<&'a DeclName>,
) -> Option<&'a Role> {
    match t {
        LightType::Branching(b) => Some(b.sender()),
        LightType::Rec { body, .. } => first_sender(body, decls, seen),
        LightType::Call(name) if !seen.contains(&name) => {
            seen.push(name);
            first_sender(decls.get(name)?, decls, seen)
        }
        _ => None,
    }
}

struct Emitter<'a> {
    decls: &'a Declarations,
    payloads: usize,
    lines: Vec<String>,
}

impl Emitter<'_> {
    fn line(&mut self, depth: usize, text: String) {
        self.lines.push(format!("{}{}", "  ".repeat(depth), text));
    }

    fn emit(&mut self, t: &LightType, depth: usize) -> Result<(), Error> {
        match t {
            LightType::End => Ok(()),
            LightType::Var(v) => {
                self.line(depth, format!("continue {v};"));
                Ok(())
            }
            LightType::Rec { var, body } => {
                self.line(depth, format!("rec {var} {{"));
                self.emit(body, depth + 1)?;
                self.line(depth, "}".to_string());
                Ok(())
            }
            LightType::Call(name) => {
                let body = self
                    .decls
                    .get(name)
                    .ok_or_else(|| Error::UnboundCall(name.clone()))?;
                let at = first_sender(body, self.decls, &mut vec![name])
                    .map(|r| format!(" at {r}"))
                    .unwrap_or_default();
                let roles = role_list(&body.local_roles());
                self.line(depth, format!("run protocol {name}({roles}){at};"));
                Ok(())
            }
            LightType::Branching(b) => {
                let (from, to) = (b.sender(), b.receiver());
                let message = |e: &mut Self, depth: usize, label: &str, sort: Sort| {
                    let payload = match sort {
                        Sort::Unit => String::new(),
                        s => {
                            e.payloads += 1;
                            format!("{} x{}", sort_name(s), e.payloads)
                        }
                    };
                    e.line(depth, format!("{label}({payload}) from {from} to {to};"));
                };
                match b.branches() {
                    [only] => {
                        message(self, depth, only.label.as_str(), only.sort);
                        self.emit(&only.cont, depth)
                    }
                    branches => {
                        self.line(depth, format!("choice at {from} {{"));
                        for (i, br) in branches.iter().enumerate() {
                            if i > 0 {
                                self.line(depth, "} or {".to_string());
                            }
                            message(self, depth + 1, br.label.as_str(), br.sort);
                            self.emit(&br.cont, depth + 1)?;
                        }
                        self.line(depth, "}".to_string());
                        Ok(())
                    }
                }
            }
        }
    }
}

fn render(name: &str, t: &LightType, decls: &Declarations) -> Result<ProtocolDoc, Error> {
    let mut e = Emitter {
        decls,
        payloads: 0,
        lines: Vec::new(),
    };
    e.emit(t, 0)?;
    Ok(ProtocolDoc {
        name: name.to_string(),
        roles: t.local_roles(),
        body: e.lines,
    })
}

/// One protocol for `main` under `main_name`, then one per declaration in table order.
pub fn emit(
    main_name: &str,
    main: &LightType,
    decls: &Declarations,
) -> Result<Vec<ProtocolDoc>, Error> {
    std::iter::once(render(main_name, main, decls))
        .chain(
            decls
                .iter()
                .map(|(n, body)| render(n.as_str(), body, decls)),
        )
        .collect()
}

/// All protocols as one document, separated by blank lines.
pub fn emit_document(
    main_name: &str,
    main: &LightType,
    decls: &Declarations,
) -> Result<String, Error> {
    let docs = emit(main_name, main, decls)?;
    Ok(docs
        .iter()
        .map(ProtocolDoc::to_string)
        .collect::<Vec<_>>()
        .join("\n"))
}
