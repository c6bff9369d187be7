//! Light global session types.
//!
//! A light global type is a multiparty global type that may hand control to a
//! named, separately declared type with `call`. This crate parses and prints
//! them, finds interactions that carry no information (a single `unit` label
//! outside any recursion), removes those interactions by splitting the protocol
//! into `call`-linked declarations, and checks with a labelled transition
//! system that the split protocol generates the same traces as the original.
//!
//! ```
//! use slt_core::{lighten_fully, parse, semantics::lang_eq};
//!
//! let src = "main = a -> b : { go(nat) . b -> c : more(nat) . end, stop() . a -> c : bye() . end };";
//! let file = parse(src).unwrap();
//! let out = lighten_fully(&file.main, &file.decls, "L").unwrap();
//! assert_eq!(out.fresh.len(), 1);
//! assert!(lang_eq(&file.main, &file.decls, &out.main, &out.decls).unwrap().equal);
//! ```

pub mod alpha;
pub mod ast;
pub mod diag;
pub mod fixtures;
#[cfg(any(test, feature = "gen"))]
pub mod gen;
pub mod lightener;
pub mod redundancy;
pub mod scribble;
pub mod semantics;
pub mod syntax;
pub mod wf;

use thiserror::Error;

pub use alpha::{alpha_eq_decls, alpha_eq_types};
pub use ast::{
    is_global, roles_of, Branch, Branching, DeclName, Declarations, Label, LightType, ModelError,
    RecVar, Role, Sort,
};
pub use diag::{Code, Diagnostic, Location, NodePath, Owner, Severity, Span};
pub use lightener::{descend, eliminate, lighten_fully, FreshNamer, Lightening, LighteningResult};
pub use redundancy::{find_redundant, ContextPath, RedundantSite};
pub use semantics::{lang_eq, traces, Action, Message, Trace, TraceLanguage};
pub use syntax::{parse, print, SourceFile};
pub use wf::well_formed;

/// Failures of the transformation and semantic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("call to undeclared name `{0}`")]
    UnboundCall(DeclName),
    #[error("no redundant interaction at `{0}`")]
    SiteStale(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn code(&self) -> Code {
        match self {
            Error::UnboundCall(_) => Code::UnboundCall,
            Error::SiteStale(_) => Code::SiteStale,
            Error::Model(ModelError::DuplicateDeclaration(_)) => Code::DupDecl,
            Error::Model(ModelError::SelfMessage(_)) => Code::SelfMsg,
            Error::Model(ModelError::DuplicateLabel(_)) => Code::DupLabel,
            Error::Model(ModelError::EmptyBranching) => Code::EmptyBranch,
            Error::Model(_) => Code::Syntax,
            Error::Internal(_) => Code::Internal,
        }
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(self.code(), self.to_string(), Location::Unknown)
    }
}
