//! Workspace language.
//!
//! ```text
//! # comment
//! group L = wreath(base=cyclic(2), top=Z(1), orbits=[{size=inf, stab=Z(0), stabmap=[]}])
//! group W = regular(Z(1), Z(1)) gens [h, z]
//! char c on L = [1]
//! ```
//!
//! Statements end at a newline outside brackets. Expressions are `Z(n)`,
//! `free(k)`, `cyclic(m)`, `product(..)`, `wreath(..)`, `graphwreath(..)`,
//! `annotated(..)`, the shortcuts `regular(B, T)`, `lamplighter(m)`, `zwrz`,
//! and names of earlier groups.

use std::fmt::Write as _;

use thiserror::Error;

use crate::character::{make_character, Character};
use crate::group::{
    regular_wreath, AnnotatedAtom, Clause, GSetSpec, GraphWreath, GroupError, GroupExpr, LinearCondition, OrbitRecord,
    OrbitSize, PairOrbitRecord, Region, Relation, StabilizerData, Wreath,
};
use crate::rational::{fmt_qvec, parse_q, RatMatrix, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("character has {got} coordinates but the group has free rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("name {0} is already defined")]
    DuplicateName(String),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("invalid group: {0}")]
    Invalid(#[from] GroupError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDef {
    pub name: String,
    pub expr: GroupExpr,
    /// Letter names for the lab's standard generators.
    pub gens: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharDef {
    pub name: String,
    pub group: String,
    pub character: Character,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Workspace {
    pub groups: Vec<GroupDef>,
    pub chars: Vec<CharDef>,
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Workspace, ParseError> {
        let mut ws = Workspace::default();
        ws.extend_from(text)?;
        Ok(ws)
    }

    /// Parses `text` on top of the definitions already present.
    pub fn extend_from(&mut self, text: &str) -> Result<(), ParseError> {
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            ws: self,
        };
        p.file()
    }

    pub fn group(&self, name: &str) -> Option<&GroupDef> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn character(&self, name: &str) -> Option<&CharDef> {
        self.chars.iter().find(|c| c.name == name)
    }

    fn name_taken(&self, name: &str) -> bool {
        self.group(name).is_some() || self.character(name).is_some()
    }

    /// Canonical text; parsing it back yields an equal workspace.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for g in &self.groups {
            write!(s, "group {} = {}", g.name, print_expr(&g.expr)).unwrap();
            if let Some(gens) = &g.gens {
                write!(s, " gens [{}]", gens.join(", ")).unwrap();
            }
            s.push('\n');
        }
        for c in &self.chars {
            writeln!(s, "char {} on {} = {}", c.name, c.group, fmt_qvec(c.character.coords())).unwrap();
        }
        s
    }
}

fn print_matrix(m: &RatMatrix) -> String {
    if m.rows() == 0 || m.cols() == 0 {
        return format!("zeros({}, {})", m.rows(), m.cols());
    }
    let rows: Vec<String> = m.to_rows().iter().map(|r| fmt_qvec(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn print_region(r: &Region) -> String {
    match r {
        Region::Unknown => "unknown".into(),
        Region::Union(cs) if cs.is_empty() => "none".into(),
        Region::Union(cs) if cs.len() == 1 && cs[0].conditions.is_empty() => "all".into(),
        Region::Union(cs) => {
            let clauses: Vec<String> = cs
                .iter()
                .map(|c| {
                    let conds: Vec<String> = c.conditions.iter().map(|x| x.to_string()).collect();
                    format!("{{{}}}", conds.join(", "))
                })
                .collect();
            format!("[{}]", clauses.join(", "))
        }
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn print_wreath_args(w: &Wreath) -> String {
    let orbits: Vec<String> = w
        .gset
        .orbits
        .iter()
        .map(|o| {
            format!(
                "{{label={}, size={}, stab={}, stabmap={}, fg={}}}",
                quote(&o.label),
                o.size,
                print_expr(&o.stabilizer.group),
                print_matrix(&o.stabilizer.image),
                o.stabilizer.finitely_generated
            )
        })
        .collect();
    let mut s = format!(
        "base={}, top={}, orbits=[{}]",
        print_expr(&w.base),
        print_expr(&w.top),
        orbits.join(", ")
    );
    if let Some(pairs) = &w.gset.pairs {
        let pairs: Vec<String> = pairs
            .iter()
            .map(|p| {
                let diag = p.diagonal_of.map(|i| format!(", diag={i}")).unwrap_or_default();
                format!(
                    "{{label={}, stabmap={}{diag}}}",
                    quote(&p.label),
                    print_matrix(&p.image)
                )
            })
            .collect();
        write!(s, ", pairs=[{}]", pairs.join(", ")).unwrap();
    }
    s
}

pub fn print_expr(e: &GroupExpr) -> String {
    match e {
        GroupExpr::FreeAbelian(n) => format!("Z({n})"),
        GroupExpr::Free(k) => format!("free({k})"),
        GroupExpr::Cyclic(m) => format!("cyclic({m})"),
        GroupExpr::Product(fs) => {
            let parts: Vec<String> = fs.iter().map(print_expr).collect();
            format!("product({})", parts.join(", "))
        }
        GroupExpr::Wreath(w) => format!("wreath({})", print_wreath_args(w)),
        GroupExpr::GraphWreath(g) => {
            let edges: Vec<String> = g.edges.iter().map(bool::to_string).collect();
            format!(
                "graphwreath({}, edges=[{}])",
                print_wreath_args(&g.wreath),
                edges.join(", ")
            )
        }
        GroupExpr::Annotated(a) => format!(
            "annotated(rank={}, torsion={}, fg={}, fp={}, sigma1={}, sigma2={})",
            a.rank,
            a.torsion,
            a.finitely_generated,
            a.finitely_presented,
            print_region(&a.sigma1),
            print_region(&a.sigma2)
        ),
    }
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(String),
    Str(String),
    Sym(&'static str),
    Newline,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        kind: ParseErrorKind::Syntax(msg.into()),
    }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut depth: i64 = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                if depth == 0 {
                    out.push(Token {
                        tok: Tok::Newline,
                        line,
                        column: col,
                    });
                }
                i += 1;
                line += 1;
                col = 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '(' | '[' | '{' | ')' | ']' | '}' | ',' | '=' | '>' => {
                let sym = match c {
                    '(' => "(",
                    '[' => "[",
                    '{' => "{",
                    ')' => ")",
                    ']' => "]",
                    '}' => "}",
                    ',' => ",",
                    '=' => "=",
                    _ => ">",
                };
                if "([{".contains(c) {
                    depth += 1;
                } else if ")]}".contains(c) {
                    depth -= 1;
                }
                out.push(Token {
                    tok: Tok::Sym(sym),
                    line: l0,
                    column: c0,
                });
                advance(1, &mut i, &mut col);
            }
            '!' if chars.get(i + 1) == Some(&'=') => {
                out.push(Token {
                    tok: Tok::Sym("!="),
                    line: l0,
                    column: c0,
                });
                advance(2, &mut i, &mut col);
            }
            '"' => {
                let mut s = String::new();
                advance(1, &mut i, &mut col);
                loop {
                    match chars.get(i) {
                        None | Some('\n') => return Err(syntax(l0, c0, "unterminated string")),
                        Some('"') => break,
                        Some('\\') if i + 1 < chars.len() => {
                            s.push(chars[i + 1]);
                            advance(2, &mut i, &mut col);
                        }
                        Some(&ch) => {
                            s.push(ch);
                            advance(1, &mut i, &mut col);
                        }
                    }
                }
                advance(1, &mut i, &mut col);
                out.push(Token {
                    tok: Tok::Str(s),
                    line: l0,
                    column: c0,
                });
            }
            c if c == '-' || c.is_ascii_digit() => {
                let start = i;
                let digits = |i: &mut usize, col: &mut usize| {
                    let s = *i;
                    if chars.get(*i) == Some(&'-') {
                        *i += 1;
                        *col += 1;
                    }
                    while *i < chars.len() && chars[*i].is_ascii_digit() {
                        *i += 1;
                        *col += 1;
                    }
                    *i > s && chars[*i - 1].is_ascii_digit()
                };
                if !digits(&mut i, &mut col) {
                    return Err(syntax(l0, c0, "malformed number"));
                }
                if chars.get(i) == Some(&'/') {
                    i += 1;
                    col += 1;
                    if !digits(&mut i, &mut col) {
                        return Err(syntax(l0, c0, "malformed fraction"));
                    }
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Number(s),
                    line: l0,
                    column: c0,
                });
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                    col += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Ident(s),
                    line: l0,
                    column: c0,
                });
            }
            other => return Err(syntax(l0, c0, format!("unexpected character {other:?}"))),
        }
    }
    out.push(Token {
        tok: Tok::Newline,
        line,
        column: col,
    });
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

// ---------------------------------------------------------------- parser

struct Parser<'w> {
    tokens: Vec<Token>,
    pos: usize,
    ws: &'w mut Workspace,
}

type PResult<T> = Result<T, ParseError>;

const RESERVED: &[&str] = &["group", "char", "on", "gens"];

impl Parser<'_> {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let t = self.peek();
        syntax(t.line, t.column, msg)
    }

    fn error_at(t: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            kind,
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.next();
            Ok(())
        } else {
            Err(self.err_here(format!("expected '{s}'")))
        }
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.next().tok {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err_here("expected a name"))
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.next();
                Ok(())
            }
            _ => Err(self.err_here(format!("expected '{kw}'"))),
        }
    }

    fn number(&mut self) -> PResult<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Number(s) => Ok((s.clone(), t)),
            _ => {
                self.pos -= 1;
                Err(self.err_here("expected a number"))
            }
        }
    }

    fn natural<T: std::str::FromStr>(&mut self) -> PResult<T> {
        let (s, t) = self.number()?;
        s.parse()
            .map_err(|_| syntax(t.line, t.column, format!("expected a non-negative integer, got {s}")))
    }

    fn rational(&mut self) -> PResult<Q> {
        let (s, t) = self.number()?;
        parse_q(&s).ok_or_else(|| syntax(t.line, t.column, format!("bad rational {s}")))
    }

    fn boolean(&mut self) -> PResult<bool> {
        match self.ident()?.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => {
                self.pos -= 1;
                Err(self.err_here("expected true or false"))
            }
        }
    }

    fn string_or_ident(&mut self) -> PResult<String> {
        match self.next().tok {
            Tok::Str(s) | Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                Err(self.err_here("expected a label"))
            }
        }
    }

    fn file(&mut self) -> PResult<()> {
        loop {
            match self.peek().tok.clone() {
                Tok::Eof => return Ok(()),
                Tok::Newline => {
                    self.next();
                }
                Tok::Ident(kw) if kw == "group" => self.group_stmt()?,
                Tok::Ident(kw) if kw == "char" => self.char_stmt()?,
                _ => return Err(self.err_here("expected 'group' or 'char'")),
            }
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline | Tok::Eof => {
                self.next();
                Ok(())
            }
            _ => Err(self.err_here("expected end of line")),
        }
    }

    fn new_name(&mut self) -> PResult<(String, Token)> {
        let t = self.peek().clone();
        let name = self.ident()?;
        if RESERVED.contains(&name.as_str()) {
            return Err(syntax(t.line, t.column, format!("{name} is reserved")));
        }
        if self.ws.name_taken(&name) {
            return Err(Self::error_at(&t, ParseErrorKind::DuplicateName(name)));
        }
        Ok((name, t))
    }

    fn group_stmt(&mut self) -> PResult<()> {
        self.keyword("group")?;
        let (name, _) = self.new_name()?;
        self.expect_sym("=")?;
        let at = self.peek().clone();
        let expr = self.expr()?;
        expr.validate().map_err(|e| Self::error_at(&at, e.into()))?;
        let gens = match &self.peek().tok {
            Tok::Ident(s) if s == "gens" => {
                self.next();
                self.expect_sym("[")?;
                let mut names = Vec::new();
                if !self.is_sym("]") {
                    loop {
                        names.push(self.ident()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                Some(names)
            }
            _ => None,
        };
        self.end_of_statement()?;
        self.ws.groups.push(GroupDef { name, expr, gens });
        Ok(())
    }

    fn char_stmt(&mut self) -> PResult<()> {
        self.keyword("char")?;
        let (name, _) = self.new_name()?;
        self.keyword("on")?;
        let gt = self.peek().clone();
        let group = self.ident()?;
        let expr = self
            .ws
            .group(&group)
            .map(|g| g.expr.clone())
            .ok_or_else(|| Self::error_at(&gt, ParseErrorKind::UnknownGroup(group.clone())))?;
        self.expect_sym("=")?;
        let vt = self.peek().clone();
        let coords = self.qvec()?;
        let character = make_character(&expr, coords.clone()).map_err(|_| {
            Self::error_at(
                &vt,
                ParseErrorKind::DimensionMismatch {
                    expected: expr.free_rank(),
                    got: coords.len(),
                },
            )
        })?;
        self.end_of_statement()?;
        self.ws.chars.push(CharDef { name, group, character });
        Ok(())
    }

    fn qvec(&mut self) -> PResult<Vec<Q>> {
        self.expect_sym("[")?;
        let mut v = Vec::new();
        if !self.is_sym("]") {
            loop {
                v.push(self.rational()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(v)
    }

    fn expr(&mut self) -> PResult<GroupExpr> {
        let t = self.peek().clone();
        let name = self.ident()?;
        let call = |p: &mut Self| -> PResult<()> { p.expect_sym("(") };
        Ok(match name.as_str() {
            "Z" => {
                call(self)?;
                let n = self.natural()?;
                self.expect_sym(")")?;
                GroupExpr::FreeAbelian(n)
            }
            "free" => {
                call(self)?;
                let n = self.natural()?;
                self.expect_sym(")")?;
                GroupExpr::Free(n)
            }
            "cyclic" => {
                call(self)?;
                let n = self.natural()?;
                self.expect_sym(")")?;
                GroupExpr::Cyclic(n)
            }
            "product" => {
                call(self)?;
                let mut fs = vec![self.expr()?];
                while self.eat_sym(",") {
                    fs.push(self.expr()?);
                }
                self.expect_sym(")")?;
                GroupExpr::Product(fs)
            }
            "regular" => {
                call(self)?;
                let b = self.expr()?;
                self.expect_sym(",")?;
                let top = self.expr()?;
                self.expect_sym(")")?;
                regular_wreath(b, top)
            }
            "lamplighter" => {
                call(self)?;
                let m = self.natural()?;
                self.expect_sym(")")?;
                regular_wreath(GroupExpr::Cyclic(m), GroupExpr::FreeAbelian(1))
            }
            "wreath" => {
                call(self)?;
                let (w, edges) = self.wreath_args(false)?;
                debug_assert!(edges.is_none());
                GroupExpr::Wreath(Box::new(w))
            }
            "graphwreath" => {
                call(self)?;
                let (wreath, edges) = self.wreath_args(true)?;
                let edges = edges.ok_or_else(|| syntax(t.line, t.column, "graphwreath needs edges=[..]"))?;
                GroupExpr::GraphWreath(Box::new(GraphWreath { wreath, edges }))
            }
            "annotated" => {
                call(self)?;
                self.annotated(&t)?
            }
            other => match self.ws.group(other) {
                Some(g) => g.expr.clone(),
                None if other == "zwrz" => regular_wreath(GroupExpr::FreeAbelian(1), GroupExpr::FreeAbelian(1)),
                None => return Err(Self::error_at(&t, ParseErrorKind::UnknownGroup(other.to_string()))),
            },
        })
    }

    /// `key=` prefix of a keyword argument.
    fn key(&mut self) -> PResult<(String, Token)> {
        let t = self.peek().clone();
        let k = self.ident()?;
        self.expect_sym("=")?;
        Ok((k, t))
    }

    fn wreath_args(&mut self, graph: bool) -> PResult<(Wreath, Option<Vec<bool>>)> {
        let start = self.peek().clone();
        let (mut base, mut top, mut orbits_raw, mut pairs_raw, mut edges) = (None, None, None, None, None);
        loop {
            let (k, kt) = self.key()?;
            match k.as_str() {
                "base" => base = Some(self.expr()?),
                "top" => top = Some(self.expr()?),
                "orbits" => orbits_raw = Some(self.record_list()?),
                "pairs" => pairs_raw = Some(self.record_list()?),
                "edges" if graph => {
                    self.expect_sym("[")?;
                    let mut v = Vec::new();
                    if !self.is_sym("]") {
                        loop {
                            v.push(self.boolean()?);
                            if !self.eat_sym(",") {
                                break;
                            }
                        }
                    }
                    self.expect_sym("]")?;
                    edges = Some(v);
                }
                _ => return Err(syntax(kt.line, kt.column, format!("unknown argument {k}"))),
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(")")?;
        let missing = |what: &str| syntax(start.line, start.column, format!("wreath needs {what}="));
        let base = base.ok_or_else(|| missing("base"))?;
        let top = top.ok_or_else(|| missing("top"))?;
        let orbits_raw = orbits_raw.ok_or_else(|| missing("orbits"))?;
        let r = top.free_rank();
        let orbits = orbits_raw
            .into_iter()
            .enumerate()
            .map(|(i, rec)| rec.into_orbit(i, r))
            .collect::<PResult<Vec<_>>>()?;
        let pairs = pairs_raw
            .map(|ps| ps.into_iter().map(|rec| rec.into_pair(r)).collect::<PResult<Vec<_>>>())
            .transpose()?;
        Ok((
            Wreath {
                base,
                top,
                gset: GSetSpec::new(orbits, pairs),
            },
            edges,
        ))
    }

    fn record_list(&mut self) -> PResult<Vec<Record>> {
        self.expect_sym("[")?;
        let mut out = Vec::new();
        if !self.is_sym("]") {
            loop {
                out.push(self.record()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn record(&mut self) -> PResult<Record> {
        let at = self.peek().clone();
        self.expect_sym("{")?;
        let mut rec = Record {
            at,
            label: None,
            size: None,
            stab: None,
            stabmap: None,
            fg: None,
            diag: None,
        };
        if !self.is_sym("}") {
            loop {
                let (k, kt) = self.key()?;
                match k.as_str() {
                    "label" => rec.label = Some(self.string_or_ident()?),
                    "size" => {
                        rec.size = Some(match &self.peek().tok {
                            Tok::Ident(s) if s == "inf" => {
                                self.next();
                                OrbitSize::Infinite
                            }
                            _ => {
                                let nt = self.peek().clone();
                                match self.natural::<u64>()? {
                                    0 => return Err(syntax(nt.line, nt.column, "orbit size must be positive")),
                                    1 => OrbitSize::One,
                                    k => OrbitSize::Finite(k),
                                }
                            }
                        })
                    }
                    "stab" => rec.stab = Some(self.expr()?),
                    "stabmap" => rec.stabmap = Some(self.matrix()?),
                    "fg" => rec.fg = Some(self.boolean()?),
                    "diag" => rec.diag = Some(self.natural()?),
                    _ => return Err(syntax(kt.line, kt.column, format!("unknown field {k}"))),
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("}")?;
        Ok(rec)
    }

    fn matrix(&mut self) -> PResult<MatrixLit> {
        let t = self.peek().clone();
        if matches!(&t.tok, Tok::Ident(s) if s == "zeros") {
            self.next();
            self.expect_sym("(")?;
            let r = self.natural()?;
            self.expect_sym(",")?;
            let c = self.natural()?;
            self.expect_sym(")")?;
            return Ok(MatrixLit::Zeros(r, c, t));
        }
        self.expect_sym("[")?;
        let mut rows = Vec::new();
        if !self.is_sym("]") {
            loop {
                rows.push(self.qvec()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(MatrixLit::Rows(rows, t))
    }

    fn region(&mut self) -> PResult<Region> {
        if let Tok::Ident(s) = &self.peek().tok {
            let r = match s.as_str() {
                "all" => Region::everything(),
                "none" => Region::nothing(),
                "unknown" => Region::Unknown,
                _ => return Err(self.err_here("expected all, none, unknown or [..]")),
            };
            self.next();
            return Ok(r);
        }
        self.expect_sym("[")?;
        let mut clauses = Vec::new();
        if !self.is_sym("]") {
            loop {
                self.expect_sym("{")?;
                let mut conditions = Vec::new();
                if !self.is_sym("}") {
                    loop {
                        let normal = self.qvec()?;
                        let relation = if self.eat_sym(">") {
                            Relation::Positive
                        } else if self.eat_sym("=") {
                            Relation::Zero
                        } else if self.eat_sym("!=") {
                            Relation::NonZero
                        } else {
                            return Err(self.err_here("expected >, = or !="));
                        };
                        let zt = self.peek().clone();
                        if self.rational()? != crate::rational::q(0) {
                            return Err(syntax(zt.line, zt.column, "conditions compare against 0"));
                        }
                        conditions.push(LinearCondition { normal, relation });
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("}")?;
                clauses.push(Clause { conditions });
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(Region::Union(clauses))
    }

    fn annotated(&mut self, start: &Token) -> PResult<GroupExpr> {
        let (mut rank, mut torsion, mut fg, mut fp, mut s1, mut s2) = (None, None, None, None, None, None);
        loop {
            let (k, kt) = self.key()?;
            match k.as_str() {
                "rank" => rank = Some(self.natural()?),
                "torsion" => torsion = Some(self.boolean()?),
                "fg" => fg = Some(self.boolean()?),
                "fp" => fp = Some(self.boolean()?),
                "sigma1" => s1 = Some(self.region()?),
                "sigma2" => s2 = Some(self.region()?),
                _ => return Err(syntax(kt.line, kt.column, format!("unknown argument {k}"))),
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        self.expect_sym(")")?;
        let rank = rank.ok_or_else(|| syntax(start.line, start.column, "annotated needs rank="))?;
        let fp = fp.unwrap_or(false);
        Ok(GroupExpr::Annotated(Box::new(AnnotatedAtom {
            rank,
            torsion: torsion.unwrap_or(false),
            // fp implies fg.
            finitely_generated: fg.unwrap_or(true) || fp,
            finitely_presented: fp,
            sigma1: s1.unwrap_or(Region::Unknown),
            sigma2: s2.unwrap_or(Region::Unknown),
        })))
    }
}

enum MatrixLit {
    Zeros(usize, usize, Token),
    Rows(Vec<Vec<Q>>, Token),
}

impl MatrixLit {
    /// `rows` is the top rank; `cols` the expected column count if known.
    fn build(self, rows: usize, cols: Option<usize>) -> PResult<RatMatrix> {
        match self {
            MatrixLit::Zeros(r, c, _) => Ok(RatMatrix::zeros(r, c)),
            // `[]` is shorthand for an all-zero map with no columns, or with
            // no rows when the top group has rank 0.
            MatrixLit::Rows(v, _) if v.is_empty() => Ok(RatMatrix::zeros(rows, cols.unwrap_or(0))),
            MatrixLit::Rows(v, t) => {
                let c = v[0].len();
                let r = v.len();
                RatMatrix::from_rows(r, c, v)
                    .ok_or_else(|| syntax(t.line, t.column, "matrix rows have different lengths"))
            }
        }
    }

    fn token(&self) -> &Token {
        match self {
            MatrixLit::Zeros(_, _, t) | MatrixLit::Rows(_, t) => t,
        }
    }
}

struct Record {
    at: Token,
    label: Option<String>,
    size: Option<OrbitSize>,
    stab: Option<GroupExpr>,
    stabmap: Option<MatrixLit>,
    fg: Option<bool>,
    diag: Option<usize>,
}

impl Record {
    fn into_orbit(self, index: usize, top_rank: usize) -> PResult<OrbitRecord> {
        let at = self.at.clone();
        if self.diag.is_some() {
            return Err(syntax(at.line, at.column, "diag= belongs to pair records"));
        }
        let size = self
            .size
            .ok_or_else(|| syntax(at.line, at.column, "orbit needs size="))?;
        let group = self.stab.unwrap_or(GroupExpr::FreeAbelian(0));
        let k = group.free_rank();
        let image = match self.stabmap {
            None if k == 0 => RatMatrix::zeros(top_rank, 0),
            None => {
                return Err(syntax(
                    at.line,
                    at.column,
                    "orbit with a non-trivial stabilizer needs stabmap=",
                ))
            }
            Some(m) => {
                let t = m.token().clone();
                let empty_ok = k == 0 || top_rank == 0;
                match m {
                    MatrixLit::Rows(v, _) if v.is_empty() && !empty_ok => {
                        return Err(syntax(t.line, t.column, format!("stabmap must be {top_rank}x{k}")))
                    }
                    m => m.build(top_rank, Some(k))?,
                }
            }
        };
        Ok(OrbitRecord {
            label: self.label.unwrap_or_else(|| format!("x{index}")),
            size,
            stabilizer: StabilizerData {
                group,
                image,
                finitely_generated: self.fg.unwrap_or(true),
            },
        })
    }

    fn into_pair(self, top_rank: usize) -> PResult<PairOrbitRecord> {
        let at = self.at.clone();
        if self.size.is_some() || self.stab.is_some() || self.fg.is_some() {
            return Err(syntax(
                at.line,
                at.column,
                "pair records take label=, stabmap= and diag= only",
            ));
        }
        let image = match self.stabmap {
            None => RatMatrix::zeros(top_rank, 0),
            Some(m) => m.build(top_rank, None)?,
        };
        Ok(PairOrbitRecord {
            label: self
                .label
                .unwrap_or_else(|| self.diag.map_or("pair".into(), |i| format!("diag({i})"))),
            image,
            diagonal_of: self.diag,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qvec;

    const L: &str = "group L = wreath(base=cyclic(2), top=Z(1), orbits=[{size=inf, stab=Z(0), stabmap=[]}])\n";

    #[test]
    fn lamplighter_definition() {
        let ws = Workspace::parse(&format!("{L}char c on L = [1]\n")).unwrap();
        let g = ws.group("L").unwrap();
        assert_eq!(g.expr.free_rank(), 1);
        assert_eq!(ws.character("c").unwrap().character.coords(), qvec(&[1]).as_slice());
        let w = g.expr.as_wreath().unwrap();
        assert!(w.gset.pairs.is_none());
    }

    #[test]
    fn dimension_mismatch_has_position() {
        let err = Workspace::parse(&format!("{L}char c on L = [1,2]\n")).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.column, 15);
        assert_eq!(err.kind, ParseErrorKind::DimensionMismatch { expected: 1, got: 2 });
    }

    #[test]
    fn other_errors() {
        let err = Workspace::parse("group A = Z(1)\ngroup A = Z(2)\n").unwrap_err();
        assert_eq!((err.line, err.kind), (2, ParseErrorKind::DuplicateName("A".into())));
        let err = Workspace::parse("group A = B\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownGroup("B".into()));
        let err = Workspace::parse("group A = product(Z(1),\n  free(2)\n").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        let err = Workspace::parse("group A = regular(cyclic(1), Z(1))\n").unwrap_err();
        assert!(matches!(
            err.kind,
            ParseErrorKind::Invalid(GroupError::TrivialBase { .. })
        ));
        let err = Workspace::parse("group A = Z(1) $\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 16));
    }

    #[test]
    fn multi_line_statements_and_references() {
        let ws = Workspace::parse(
            "# two lines\ngroup A = product(Z(1),\n   free(2))\ngroup B = regular(A, Z(1)) gens [p, q, r, s]\n",
        )
        .unwrap();
        assert_eq!(ws.group("B").unwrap().expr.free_rank(), 4);
        assert_eq!(ws.group("B").unwrap().gens.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn catalog_round_trips() {
        let ws = crate::catalog::catalog();
        let text = ws.to_text();
        assert_eq!(Workspace::parse(&text).unwrap(), ws);
    }

    #[test]
    fn annotated_regions_round_trip() {
        let src = "group A = annotated(rank=2, torsion=true, fg=true, fp=true, sigma1=[{[1, 0]>0}, {[0, 1]!=0, [1, -1/2]=0}], sigma2=none)\n";
        let ws = Workspace::parse(src).unwrap();
        assert_eq!(Workspace::parse(&ws.to_text()).unwrap(), ws);
    }
}
