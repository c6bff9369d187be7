//! The `.lgt` text format.
//!
//! ```text
//! file   ::= ( "let" name "=" type ";" )* "main" "=" type ";"
//! type   ::= "end" | recvar | "rec" recvar "." type | "call" name
//!          | role "->" role ":" branch
//!          | role "->" role ":" "{" branch ( "," branch )* "}"
//! branch ::= label "(" sort? ")" "." type
//! sort   ::= "unit" | "nat" | "str" | "bool"      ("int" reads as "nat")
//! ```
//!
//! `//` starts a line comment. An omitted sort means `unit`.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::ast::{
    Branch, DeclName, Declarations, Label, LightType, ModelError, RecVar, Role, Sort,
};
use crate::diag::{Code, Diagnostic, Location, NodePath, Owner, Span};

/// Deepest type nesting the parser accepts.
pub const MAX_NESTING: usize = 128;

/// A parsed file: the main type, the declarations, and where each node came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub main: LightType,
    pub decls: Declarations,
    pub spans: SourceMap,
}

/// Source position of every node, keyed by its tree path.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    nodes: HashMap<NodePath, Span>,
}

impl SourceMap {
    /// Position of the node, or of its closest recorded ancestor.
    pub fn span(&self, path: &NodePath) -> Option<Span> {
        let mut path = path.clone();
        loop {
            if let Some(span) = self.nodes.get(&path) {
                return Some(*span);
            }
            path.steps.pop()?;
        }
    }

    /// Rewrites tree locations to source positions where known.
    pub fn resolve(&self, diag: Diagnostic) -> Diagnostic {
        match &diag.location {
            Location::Node(path) => match self.span(path) {
                Some(span) => Diagnostic {
                    location: Location::Source(span),
                    ..diag
                },
                None => diag,
            },
            _ => diag,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Arrow,
    Colon,
    Dot,
    Comma,
    Semi,
    Eq,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Arrow => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax_error(span: Span, message: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Syntax, message, Location::Source(span))
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let mut toks = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&c) = chars.peek() {
        let span = Span { line, col };
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    bump(&mut chars);
                } else {
                    break;
                }
            }
            toks.push((Tok::Ident(word), span));
            continue;
        }
        bump(&mut chars);
        let tok = match c {
            '-' if chars.peek() == Some(&'>') => {
                bump(&mut chars);
                Tok::Arrow
            }
            '/' if chars.peek() == Some(&'/') => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump(&mut chars);
                }
                continue;
            }
            ':' => Tok::Colon,
            '.' => Tok::Dot,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            other => {
                return Err(syntax_error(
                    span,
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        toks.push((tok, span));
    }
    toks.push((Tok::Eof, Span { line, col }));
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
    spans: HashMap<NodePath, Span>,
    depth: usize,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn advance(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> PResult<Span> {
        if *self.peek() == want {
            Ok(self.advance().1)
        } else {
            Err(syntax_error(
                self.span(),
                format!(
                    "expected {}, found {}",
                    want.describe(),
                    self.peek().describe()
                ),
            ))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Span)> {
        match self.advance() {
            (Tok::Ident(s), span) => Ok((s, span)),
            (tok, span) => Err(syntax_error(
                span,
                format!("expected {what}, found {}", tok.describe()),
            )),
        }
    }

    fn name<T>(&mut self, what: &str, make: fn(String) -> Result<T, ModelError>) -> PResult<T> {
        let (s, span) = self.ident(what)?;
        make(s).map_err(|e| syntax_error(span, format!("invalid {what}: {e}")))
    }

    fn file(&mut self) -> Result<SourceFile, Vec<Diagnostic>> {
        let mut decls = Declarations::new();
        let mut diags = Vec::new();
        while self.is_keyword("let") {
            self.advance();
            let span = self.span();
            let name = self
                .name("declaration name", DeclName::new)
                .map_err(|d| vec![d])?;
            self.expect(Tok::Eq).map_err(|d| vec![d])?;
            let body = self
                .ty(NodePath::root(Owner::Decl(name.clone())))
                .map_err(|d| vec![d])?;
            self.expect(Tok::Semi).map_err(|d| vec![d])?;
            if decls.insert(name.clone(), body).is_err() {
                diags.push(Diagnostic::error(
                    Code::DupDecl,
                    format!("declaration `{name}` is defined more than once"),
                    Location::Source(span),
                ));
            }
        }
        if !self.is_keyword("main") {
            let msg = format!("expected `let` or `main`, found {}", self.peek().describe());
            diags.push(syntax_error(self.span(), msg));
            return Err(diags);
        }
        self.advance();
        self.expect(Tok::Eq).map_err(|d| vec![d])?;
        let main = self.ty(NodePath::root(Owner::Main)).map_err(|d| vec![d])?;
        self.expect(Tok::Semi).map_err(|d| vec![d])?;
        if *self.peek() != Tok::Eof {
            let msg = if self.is_keyword("main") {
                "a file has exactly one `main`".to_string()
            } else {
                format!(
                    "expected end of input after `main`, found {}",
                    self.peek().describe()
                )
            };
            diags.push(syntax_error(self.span(), msg));
        }
        if !diags.is_empty() {
            return Err(diags);
        }
        Ok(SourceFile {
            main,
            decls,
            spans: SourceMap {
                nodes: std::mem::take(&mut self.spans),
            },
        })
    }

    fn ty(&mut self, path: NodePath) -> PResult<LightType> {
        let start = self.span();
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(syntax_error(
                start,
                format!("nesting deeper than {MAX_NESTING}"),
            ));
        }
        self.spans.insert(path.clone(), start);
        let t = self.ty_inner(&path, start);
        self.depth -= 1;
        t
    }

    fn ty_inner(&mut self, path: &NodePath, start: Span) -> PResult<LightType> {
        if matches!(self.peek(), Tok::Ident(_)) && *self.peek2() == Tok::Arrow {
            return self.branching(path, start);
        }
        let (word, span) = self.ident("a type")?;
        match word.as_str() {
            "end" => Ok(LightType::End),
            "rec" => {
                let var = self.name("recursion variable", RecVar::new)?;
                self.expect(Tok::Dot)?;
                let body = self.ty(path.child(0))?;
                Ok(LightType::rec(var, body))
            }
            "call" => Ok(LightType::Call(
                self.name("declaration name", DeclName::new)?,
            )),
            _ => RecVar::new(word)
                .map(LightType::Var)
                .map_err(|e| syntax_error(span, format!("invalid recursion variable: {e}"))),
        }
    }

    fn branching(&mut self, path: &NodePath, start: Span) -> PResult<LightType> {
        let sender = self.name("role", Role::new)?;
        self.expect(Tok::Arrow)?;
        let receiver = self.name("role", Role::new)?;
        self.expect(Tok::Colon)?;
        let mut branches = Vec::new();
        if *self.peek() == Tok::LBrace {
            self.advance();
            if *self.peek() == Tok::RBrace {
                return Err(syntax_error(self.span(), "empty branch set"));
            }
            loop {
                branches.push(self.branch(path.child(branches.len()))?);
                match self.advance() {
                    (Tok::Comma, _) => continue,
                    (Tok::RBrace, _) => break,
                    (tok, span) => {
                        return Err(syntax_error(
                            span,
                            format!("expected `,` or `}}`, found {}", tok.describe()),
                        ))
                    }
                }
            }
        } else {
            branches.push(self.branch(path.child(0))?);
        }
        LightType::branching(sender, receiver, branches).map_err(|e| {
            let code = match e {
                ModelError::SelfMessage(_) => Code::SelfMsg,
                ModelError::DuplicateLabel(_) => Code::DupLabel,
                ModelError::EmptyBranching => Code::EmptyBranch,
                _ => Code::Syntax,
            };
            Diagnostic::error(code, e.to_string(), Location::Source(start))
        })
    }

    fn branch(&mut self, path: NodePath) -> PResult<Branch> {
        let label = self.name("label", Label::new)?;
        self.expect(Tok::LParen)?;
        let sort = if *self.peek() == Tok::RParen {
            Sort::Unit
        } else {
            let (word, span) = self.ident("a sort")?;
            Sort::from_keyword(&word)
                .ok_or_else(|| syntax_error(span, format!("unknown sort `{word}`")))?
        };
        self.expect(Tok::RParen)?;
        self.expect(Tok::Dot)?;
        let cont = self.ty(path)?;
        Ok(Branch::new(label, sort, cont))
    }
}

/// Parses a source file. Semantic checks are left to [`crate::well_formed`].
pub fn parse(text: &str) -> Result<SourceFile, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    Parser {
        toks,
        pos: 0,
        spans: HashMap::new(),
        depth: 0,
    }
    .file()
}

/// Canonical text of a main type and its declarations.
///
/// A single-branch interaction is followed by its continuation on the next
/// line at the same indentation; a choice puts one branch per line, two
/// spaces deeper, and the continuation of a branch two spaces deeper again.
/// `end`, variables and calls stay on the line that introduces them.
pub fn print(main: &LightType, decls: &Declarations) -> String {
    let mut out = String::new();
    for (name, body) in decls {
        top_level(&mut out, &format!("let {name} ="), body);
    }
    top_level(&mut out, "main =", main);
    out
}

fn top_level(out: &mut String, head: &str, t: &LightType) {
    out.push_str(head);
    if is_atom(t) {
        out.push(' ');
    } else {
        out.push('\n');
        indent(out, 1);
    }
    write_type(out, t, 1);
    out.push_str(";\n");
}

fn is_atom(t: &LightType) -> bool {
    matches!(t, LightType::End | LightType::Var(_) | LightType::Call(_))
}

fn indent(out: &mut String, level: usize) {
    out.extend(std::iter::repeat_n("  ", level));
}

fn write_head(out: &mut String, label: &Label, sort: Sort) {
    match sort {
        Sort::Unit => write!(out, "{label}() ."),
        other => write!(out, "{label}({other}) ."),
    }
    .expect("writing to a String");
}

/// Writes `t` starting at the current position; `level` is the indentation of
/// the line `t` starts on.
fn write_type(out: &mut String, t: &LightType, level: usize) {
    match t {
        LightType::End => out.push_str("end"),
        LightType::Var(v) => out.push_str(v.as_str()),
        LightType::Call(name) => {
            out.push_str("call ");
            out.push_str(name.as_str());
        }
        LightType::Rec { var, body } => {
            out.push_str("rec ");
            out.push_str(var.as_str());
            out.push_str(" . ");
            write_type(out, body, level);
        }
        LightType::Branching(b) => {
            let _ = write!(out, "{} -> {} : ", b.sender(), b.receiver());
            match b.branches() {
                [only] => {
                    write_head(out, &only.label, only.sort);
                    continuation(out, &only.cont, level);
                }
                branches => {
                    out.push('{');
                    for (i, br) in branches.iter().enumerate() {
                        out.push('\n');
                        indent(out, level + 1);
                        write_head(out, &br.label, br.sort);
                        continuation(out, &br.cont, level + 2);
                        if i + 1 < branches.len() {
                            out.push(',');
                        }
                    }
                    out.push('\n');
                    indent(out, level);
                    out.push('}');
                }
            }
        }
    }
}

fn continuation(out: &mut String, cont: &LightType, level: usize) {
    if is_atom(cont) {
        out.push(' ');
    } else {
        out.push('\n');
        indent(out, level);
    }
    write_type(out, cont, level);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::Severity;

    fn main_of(src: &str) -> LightType {
        parse(src).unwrap().main
    }

    fn role(s: &str) -> Role {
        Role::new(s).unwrap()
    }

    fn label(s: &str) -> Label {
        Label::new(s).unwrap()
    }

    #[test]
    fn single_interaction() {
        let t = main_of("main = req -> map : req1(str) . end;");
        let want = LightType::message(
            role("req"),
            role("map"),
            label("req1"),
            Sort::Str,
            LightType::End,
        )
        .unwrap();
        assert_eq!(t, want);
    }

    #[test]
    fn recursive_choice() {
        let t = main_of("main = rec t . a -> b : { go(nat).t, stop().end };");
        let tv = RecVar::new("t").unwrap();
        let want = LightType::rec(
            tv.clone(),
            LightType::branching(
                role("a"),
                role("b"),
                vec![
                    Branch::new(label("go"), Sort::Nat, LightType::Var(tv)),
                    Branch::new(label("stop"), Sort::Unit, LightType::End),
                ],
            )
            .unwrap(),
        );
        assert_eq!(t, want);
        assert_eq!(main_of(&print(&t, &Declarations::new())), t);
    }

    #[test]
    fn unit_spellings_agree() {
        assert_eq!(
            main_of("main = a -> b : x() . end;"),
            main_of("main = a -> b : x(unit) . end;")
        );
        assert_eq!(
            main_of("main = a -> b : x(int) . end;"),
            main_of("main = a -> b : x(nat) . end;")
        );
    }

    #[test]
    fn comments_and_whitespace() {
        let src = "// header\nmain =   a->b:x().  // trailing\n end ;";
        assert_eq!(main_of(src), main_of("main = a -> b : x() . end;"));
    }

    #[test]
    fn end_prints_on_one_line() {
        assert_eq!(
            print(&LightType::End, &Declarations::new()),
            "main = end;\n"
        );
    }

    #[test]
    fn errors_carry_positions() {
        let diags = parse("main = a -> b : { };").unwrap_err();
        assert_eq!(diags[0].code, Code::Syntax);
        assert_eq!(
            diags[0].location,
            Location::Source(Span { line: 1, col: 19 })
        );

        let diags = parse("main = end;\nmain = end;").unwrap_err();
        assert_eq!(
            diags[0].location,
            Location::Source(Span { line: 2, col: 1 })
        );

        let diags = parse("main = a -> a : x() . end;").unwrap_err();
        assert_eq!(diags[0].code, Code::SelfMsg);

        let diags = parse("main = a -> b : { x().end, x(nat).end };").unwrap_err();
        assert_eq!(diags[0].code, Code::DupLabel);

        let diags = parse("let x = end; let x = end; main = end;").unwrap_err();
        assert_eq!(diags[0].code, Code::DupDecl);
        assert_eq!(diags[0].severity, Severity::Error);
    }

    #[test]
    fn rejects_missing_main_and_bad_tokens() {
        assert!(parse("").is_err());
        assert!(parse("let x = end;").is_err());
        assert!(parse("main = a -> b : x(float) . end;").is_err());
        assert!(parse("main = end; let x = end;").is_err());
        assert!(parse("main = a # b;").is_err());
        assert!(parse("main = call end;").is_err());
    }

    #[test]
    fn deep_nesting_is_reported() {
        let mut src = String::from("main = ");
        for _ in 0..(MAX_NESTING + 10) {
            src.push_str("a -> b : x(nat) . ");
        }
        src.push_str("end;");
        let diags = parse(&src).unwrap_err();
        assert!(diags[0].message.contains("nesting"));
    }

    #[test]
    fn spans_resolve_tree_paths() {
        let file = parse("main =\n  a -> b : {\n    x() . end,\n    y() . t\n  };").unwrap();
        let path = NodePath::root(Owner::Main).child(1);
        assert_eq!(file.spans.span(&path), Some(Span { line: 4, col: 11 }));
    }
}
