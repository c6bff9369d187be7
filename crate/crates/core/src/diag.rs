//! Structured diagnostics shared by the parser, the checker and the CLI.

use std::fmt;

use crate::ast::DeclName;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Machine-readable diagnostic tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Code {
    /// Lexical or syntactic error.
    Syntax,
    /// A recursion variable occurs without an interaction between it and its binder.
    UnguardedRec,
    /// A recursion variable with no enclosing binder.
    FreeVar,
    /// A branching whose sender is its receiver.
    SelfMsg,
    /// Two branches of one branching share a label.
    DupLabel,
    /// A branching with no branches.
    EmptyBranch,
    /// Two declarations with the same name.
    DupDecl,
    /// `call` of an undeclared name.
    UnboundCall,
    /// The call graph has a cycle.
    CyclicCalls,
    /// An elimination site does not address a redundant interaction.
    SiteStale,
    /// Two protocols denote different trace languages.
    LangMismatch,
    /// A broken internal invariant.
    Internal,
}

impl Code {
    pub const ALL: [Code; 12] = [
        Code::Syntax,
        Code::UnguardedRec,
        Code::FreeVar,
        Code::SelfMsg,
        Code::DupLabel,
        Code::EmptyBranch,
        Code::DupDecl,
        Code::UnboundCall,
        Code::CyclicCalls,
        Code::SiteStale,
        Code::LangMismatch,
        Code::Internal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Code::Syntax => "SYNTAX",
            Code::UnguardedRec => "UNGUARDED_REC",
            Code::FreeVar => "FREE_VAR",
            Code::SelfMsg => "SELF_MSG",
            Code::DupLabel => "DUP_LABEL",
            Code::EmptyBranch => "EMPTY_BRANCH",
            Code::DupDecl => "DUP_DECL",
            Code::UnboundCall => "UNBOUND_CALL",
            Code::CyclicCalls => "CYCLIC_CALLS",
            Code::SiteStale => "SITE_STALE",
            Code::LangMismatch => "LANG_MISMATCH",
            Code::Internal => "INTERNAL",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// 1-based line and column in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Which tree of a source file a node belongs to.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    Main,
    Decl(DeclName),
}

/// A node inside the main type or a declaration body, as child indices from its root.
///
/// For a branching the index selects a branch; a `rec` has the single child 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodePath {
    pub owner: Owner,
    pub steps: Vec<usize>,
}

impl NodePath {
    pub fn root(owner: Owner) -> Self {
        Self {
            owner,
            steps: Vec::new(),
        }
    }

    pub fn child(&self, index: usize) -> Self {
        let mut steps = self.steps.clone();
        steps.push(index);
        Self {
            owner: self.owner.clone(),
            steps,
        }
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.owner {
            Owner::Main => f.write_str("main")?,
            Owner::Decl(name) => write!(f, "{name}")?,
        }
        for s in &self.steps {
            write!(f, "/{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Location {
    Source(Span),
    Node(NodePath),
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: Code,
    pub message: String,
    pub location: Location,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>, location: Location) -> Self {
        Self {
            severity: Severity::Error,
            code,
            message: message.into(),
            location,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>, location: Location) -> Self {
        Self {
            severity: Severity::Warning,
            ..Self::error(code, message, location)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.location {
            Location::Source(span) => write!(f, "{span}: ")?,
            Location::Node(path) => write!(f, "{path}: ")?,
            Location::Unknown => {}
        }
        write!(f, "{} {}: {}", self.severity, self.code, self.message)
    }
}
