//! Manifest grammar: parsing with positioned diagnostics, and a canonical printer.
//!
//! ```text
//! p = 5;
//! ring x, y;
//! params s, a;
//! sheaf g = y/x^5 bang h = x;
//! ss zero;
//! ss linefield h = x omega = (0, 1);
//! task sweep f = y/(1+x) perturb = x^3 at = (0, 0) xi = (0, 1) level = 3;
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use ramlab_core::exactalg::fp::is_prime;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    /// The integer value of `n` or `-n`.
    pub fn as_int(&self) -> Option<i64> {
        match self {
            Expr::Int(n) => i64::try_from(*n).ok(),
            Expr::Neg(e) => e.as_int().map(|n| -n),
            _ => None,
        }
    }
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bin = |f: &mut fmt::Formatter<'_>, l: &Expr, op: &str, r: &Expr, p: u8| {
            wrap(f, l, l.prec() < p)?;
            write!(f, "{op}")?;
            wrap(f, r, r.prec() <= p)
        };
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Neg(e) => {
                write!(f, "-")?;
                wrap(f, e, e.prec() < 3)
            }
            Expr::Add(l, r) => bin(f, l, " + ", r, 1),
            Expr::Sub(l, r) => bin(f, l, " - ", r, 1),
            Expr::Mul(l, r) => bin(f, l, "*", r, 2),
            Expr::Div(l, r) => bin(f, l, "/", r, 2),
            Expr::Pow(b, k) => {
                wrap(f, b, b.prec() < 5)?;
                write!(f, "^{k}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Expr(Expr),
    List(Vec<Expr>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Expr(e) => write!(f, "{e}"),
            Value::List(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafDecl {
    pub g: Expr,
    pub h: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SsDecl {
    Zero,
    Conormal { h: Expr },
    Point { at: Vec<Expr> },
    LineField { h: Expr, omega: Vec<Expr> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TaskKind {
    Swan,
    PhiDim,
    Sweep,
    Resolve,
    Ep,
    Codifferent,
    DepthBound,
    EmpiricalDepth,
    TtfunCheck,
    GosLine,
}

/// How a task argument is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Expr,
    /// Two expressions free of chart variables.
    Pair,
    List,
    Int,
    IntOrAuto,
    Ident,
    IdentList,
}

struct Arg {
    key: &'static str,
    kind: Kind,
    required: bool,
}

const fn req(key: &'static str, kind: Kind) -> Arg {
    Arg { key, kind, required: true }
}

const fn opt(key: &'static str, kind: Kind) -> Arg {
    Arg { key, kind, required: false }
}

macro_rules! schema {
    ($($a:expr),* $(,)?) => {{
        const S: &[Arg] = &[$($a),*];
        S
    }};
}

impl TaskKind {
    pub const ALL: [TaskKind; 10] = [
        TaskKind::Swan,
        TaskKind::PhiDim,
        TaskKind::Sweep,
        TaskKind::Resolve,
        TaskKind::Ep,
        TaskKind::Codifferent,
        TaskKind::DepthBound,
        TaskKind::EmpiricalDepth,
        TaskKind::TtfunCheck,
        TaskKind::GosLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Swan => "swan",
            TaskKind::PhiDim => "phi-dim",
            TaskKind::Sweep => "sweep",
            TaskKind::Resolve => "resolve",
            TaskKind::Ep => "ep",
            TaskKind::Codifferent => "codifferent",
            TaskKind::DepthBound => "depth-bound",
            TaskKind::EmpiricalDepth => "empirical-depth",
            TaskKind::TtfunCheck => "ttfun-check",
            TaskKind::GosLine => "gos-line",
        }
    }

    fn schema(self) -> &'static [Arg] {
        use Kind::*;
        match self {
            TaskKind::Swan => schema![req("curve", Expr), req("at", Pair)],
            TaskKind::PhiDim => schema![req("f", Expr), req("at", Pair), opt("eta", Int)],
            TaskKind::Sweep => schema![
                req("f", Expr),
                req("perturb", Expr),
                req("at", Pair),
                req("xi", Pair),
                req("level", Int),
                opt("samples", List),
            ],
            TaskKind::Resolve => schema![req("curve", Expr), req("at", Pair)],
            TaskKind::Ep => schema![opt("vars", IdentList), opt("ideal", List), opt("automorphism", List), opt("radical", List)],
            TaskKind::Codifferent => schema![req("f", Expr), req("var", Ident), req("divisor", Expr), req("at", Pair)],
            TaskKind::DepthBound => schema![
                req("group", Int),
                req("ix", Int),
                req("ep", IntOrAuto),
                req("r", IntOrAuto),
                req("s", IntOrAuto),
            ],
            TaskKind::EmpiricalDepth => schema![req("at", Pair), req("xi", Pair), req("nmax", Int), opt("probes", List)],
            TaskKind::TtfunCheck => schema![req("f", Expr), req("at", Pair), req("xi", Pair)],
            TaskKind::GosLine => schema![req("line", Expr)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskDecl {
    pub kind: TaskKind,
    pub args: BTreeMap<String, Value>,
}

impl TaskDecl {
    pub fn get(&self, key: &str) -> Option<&Value> {
        self.args.get(key)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub p: u64,
    pub ring: Vec<String>,
    pub params: Vec<String>,
    pub sheaf: Option<SheafDecl>,
    pub ss: Vec<SsDecl>,
    pub tasks: Vec<TaskDecl>,
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p = {};", self.p)?;
        writeln!(f, "ring {};", self.ring.join(", "))?;
        if !self.params.is_empty() {
            writeln!(f, "params {};", self.params.join(", "))?;
        }
        if let Some(s) = &self.sheaf {
            writeln!(f, "sheaf g = {} bang h = {};", s.g, s.h)?;
        }
        for c in &self.ss {
            match c {
                SsDecl::Zero => writeln!(f, "ss zero;")?,
                SsDecl::Conormal { h } => writeln!(f, "ss conormal h = {h};")?,
                SsDecl::Point { at } => writeln!(f, "ss point at = {};", Value::List(at.clone()))?,
                SsDecl::LineField { h, omega } => writeln!(f, "ss linefield h = {h} omega = {};", Value::List(omega.clone()))?,
            }
        }
        for t in &self.tasks {
            write!(f, "task {}", t.kind.name())?;
            for arg in t.kind.schema() {
                if let Some(v) = t.args.get(arg.key) {
                    write!(f, " {} = {v}", arg.key)?;
                }
            }
            writeln!(f, ";")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub kind: DiagnosticKind,
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            DiagnosticKind::Syntax => "syntax error",
            DiagnosticKind::Semantic => "semantic error",
        };
        write!(f, "{}:{}: {k}: {}", self.line, self.col, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    /// Byte offsets, for adjacency checks in dashed names.
    start: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let (mut line, mut col) = (1, 1);
    while let Some(&(i, ch)) = chars.peek() {
        let (l0, c0) = (line, col);
        if ch == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if ch.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if ch == '#' {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if ch.is_ascii_digit() {
            let mut end = i;
            while let Some(&(j, c)) = chars.peek() {
                if !c.is_ascii_digit() {
                    break;
                }
                end = j + 1;
                chars.next();
                col += 1;
            }
            let n = text[i..end].parse::<u64>().map_err(|_| Diagnostic {
                kind: DiagnosticKind::Syntax,
                line: l0,
                col: c0,
                message: format!("integer literal {} is too large", &text[i..end]),
            })?;
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0, start: i, end });
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let mut end = i;
            while let Some(&(j, c)) = chars.peek() {
                if !(c.is_alphanumeric() || c == '_') {
                    break;
                }
                end = j + c.len_utf8();
                chars.next();
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(text[i..end].to_string()), line: l0, col: c0, start: i, end });
            continue;
        }
        if "=;,()+-*/^".contains(ch) {
            chars.next();
            col += 1;
            out.push(Token { tok: Tok::Sym(ch), line: l0, col: c0, start: i, end: i + 1 });
            continue;
        }
        return Err(Diagnostic { kind: DiagnosticKind::Syntax, line: l0, col: c0, message: format!("unexpected character `{ch}`") });
    }
    let end = text.len();
    out.push(Token { tok: Tok::Eof, line, col, start: end, end });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
    /// Identifiers used in the current statement's expressions, with positions.
    used: Vec<(String, usize, usize)>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, msg: impl Into<String>) -> PResult<T> {
        Err(Diagnostic { kind: DiagnosticKind::Syntax, line: t.line, col: t.col, message: msg.into() })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        let t = self.bump();
        if t.tok == Tok::Sym(c) {
            Ok(t)
        } else {
            self.err(&t, format!("expected `{c}`, found {}", Self::describe(&t.tok)))
        }
    }

    fn at_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn ident(&mut self) -> PResult<(String, Token)> {
        let t = self.bump();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => self.err(&t, format!("expected a name, found {}", Self::describe(other))),
        }
    }

    /// A name possibly containing dashes written without spaces, e.g. `phi-dim`.
    fn dashed_name(&mut self) -> PResult<(String, Token)> {
        let (mut name, first) = self.ident()?;
        let mut end = first.end;
        loop {
            let (dash, next) = (&self.toks[self.pos], self.toks.get(self.pos + 1));
            match (dash.tok == Tok::Sym('-') && dash.start == end, next) {
                (true, Some(Token { tok: Tok::Ident(s), start, end: e, .. })) if *start == dash.end => {
                    name = format!("{name}-{s}");
                    end = *e;
                    self.pos += 2;
                }
                _ => break,
            }
        }
        Ok((name, first))
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let (s, t) = self.ident()?;
        if s == kw {
            Ok(())
        } else {
            self.err(&t, format!("expected `{kw}`, found `{s}`"))
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.at_sym('+') {
                self.bump();
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.at_sym('-') {
                self.bump();
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.at_sym('*') {
                self.bump();
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.at_sym('/') {
                self.bump();
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.at_sym('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.at_sym('^') {
            self.bump();
            let t = self.bump();
            return match t.tok {
                Tok::Int(k) if k <= u32::MAX as u64 => Ok(Expr::Pow(Box::new(base), k as u32)),
                ref other => self.err(&t, format!("expected a non-negative integer exponent, found {}", Self::describe(other))),
            };
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        let t = self.bump();
        match &t.tok {
            Tok::Int(n) => Ok(Expr::Int(*n)),
            Tok::Ident(s) => {
                self.used.push((s.clone(), t.line, t.col));
                Ok(Expr::Var(s.clone()))
            }
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            other => self.err(&t, format!("expected an expression, found {}", Self::describe(other))),
        }
    }

    /// `(e, e, …)` or a single expression.
    fn list(&mut self) -> PResult<Vec<Expr>> {
        if !self.at_sym('(') {
            return Ok(vec![self.expr()?]);
        }
        self.bump();
        let mut out = vec![self.expr()?];
        while self.at_sym(',') {
            self.bump();
            out.push(self.expr()?);
        }
        self.expect_sym(')')?;
        Ok(out)
    }

    fn skip_statement(&mut self) {
        loop {
            match self.bump().tok {
                Tok::Sym(';') | Tok::Eof => return,
                _ => {}
            }
        }
    }
}

struct Scope {
    p: Option<u64>,
    ring: Option<Vec<String>>,
    params: Vec<String>,
}

fn semantic(line: usize, col: usize, msg: impl Into<String>) -> Diagnostic {
    Diagnostic { kind: DiagnosticKind::Semantic, line, col, message: msg.into() }
}

/// Parses a manifest, or returns every diagnostic found.
pub fn parse_manifest(text: &str) -> Result<Manifest, Vec<Diagnostic>> {
    let toks = lex(text).map_err(|d| vec![d])?;
    let mut ps = Parser { toks, pos: 0, diags: Vec::new(), used: Vec::new() };
    let mut scope = Scope { p: None, ring: None, params: Vec::new() };
    let mut sheaf = None;
    let mut ss = Vec::new();
    let mut tasks = Vec::new();
    while ps.peek().tok != Tok::Eof {
        ps.used.clear();
        match statement(&mut ps, &mut scope) {
            Ok(Some(Stmt::Sheaf(s))) => sheaf = Some(s),
            Ok(Some(Stmt::Ss(c))) => ss.push(c),
            Ok(Some(Stmt::Task(t))) => tasks.push(t),
            Ok(None) => {}
            Err(d) => {
                let syntax = d.kind == DiagnosticKind::Syntax;
                ps.diags.push(d);
                if syntax {
                    ps.skip_statement();
                }
            }
        }
    }
    let end = ps.peek().clone();
    if scope.p.is_none() {
        ps.diags.push(semantic(end.line, end.col, "missing `p = <prime>;`"));
    }
    if scope.ring.is_none() {
        ps.diags.push(semantic(end.line, end.col, "missing `ring <x>, <y>;`"));
    }
    if !ps.diags.is_empty() {
        return Err(ps.diags);
    }
    Ok(Manifest { p: scope.p.unwrap(), ring: scope.ring.unwrap(), params: scope.params, sheaf, ss, tasks })
}

enum Stmt {
    Sheaf(SheafDecl),
    Ss(SsDecl),
    Task(TaskDecl),
}

/// Checks that every identifier used is a chart variable, a parameter, or in `extra`.
fn check_names(ps: &Parser, scope: &Scope, extra: &BTreeSet<String>) -> PResult<()> {
    let ring = scope.ring.as_deref().unwrap_or(&[]);
    for (name, line, col) in &ps.used {
        if !ring.contains(name) && !scope.params.contains(name) && !extra.contains(name) {
            return Err(semantic(*line, *col, format!("undeclared variable `{name}`")));
        }
    }
    Ok(())
}

fn require_ring(scope: &Scope, t: &Token) -> PResult<()> {
    if scope.p.is_none() || scope.ring.is_none() {
        return Err(semantic(t.line, t.col, "`p` and `ring` must be declared first"));
    }
    Ok(())
}

fn statement(ps: &mut Parser, scope: &mut Scope) -> PResult<Option<Stmt>> {
    let (head, t) = ps.ident()?;
    let stmt = match head.as_str() {
        "p" => {
            ps.expect_sym('=')?;
            let nt = ps.bump();
            let Tok::Int(p) = nt.tok else { return ps.err(&nt, "expected an integer") };
            ps.expect_sym(';')?;
            if p == 2 {
                return Err(semantic(nt.line, nt.col, "p = 2 is not supported: the theory requires p > 2"));
            }
            if !is_prime(p) {
                return Err(semantic(nt.line, nt.col, format!("p = {p} is not prime")));
            }
            scope.p = Some(p);
            return Ok(None);
        }
        "ring" => {
            let mut vars = vec![ps.ident()?];
            while ps.at_sym(',') {
                ps.bump();
                vars.push(ps.ident()?);
            }
            ps.expect_sym(';')?;
            if vars.len() != 2 {
                return Err(semantic(t.line, t.col, format!("the chart needs exactly two variables, got {}", vars.len())));
            }
            if vars[0].0 == vars[1].0 {
                return Err(semantic(vars[1].1.line, vars[1].1.col, "duplicate variable"));
            }
            scope.ring = Some(vars.into_iter().map(|v| v.0).collect());
            return Ok(None);
        }
        "params" => {
            let mut names = vec![ps.ident()?];
            while ps.at_sym(',') {
                ps.bump();
                names.push(ps.ident()?);
            }
            ps.expect_sym(';')?;
            for (n, nt) in names {
                if n == "eta" {
                    return Err(semantic(nt.line, nt.col, "`eta` is reserved for the generic point of the divisor"));
                }
                if scope.ring.as_ref().is_some_and(|r| r.contains(&n)) || scope.params.contains(&n) {
                    return Err(semantic(nt.line, nt.col, format!("`{n}` is already declared")));
                }
                scope.params.push(n);
            }
            return Ok(None);
        }
        "sheaf" => {
            require_ring(scope, &t)?;
            ps.keyword("g")?;
            ps.expect_sym('=')?;
            let g = ps.expr()?;
            ps.keyword("bang")?;
            ps.keyword("h")?;
            ps.expect_sym('=')?;
            let h = ps.expr()?;
            ps.expect_sym(';')?;
            check_names(ps, scope, &BTreeSet::new())?;
            Stmt::Sheaf(SheafDecl { g, h })
        }
        "ss" => {
            require_ring(scope, &t)?;
            let (kind, kt) = ps.ident()?;
            let decl = match kind.as_str() {
                "zero" => SsDecl::Zero,
                "conormal" => {
                    ps.keyword("h")?;
                    ps.expect_sym('=')?;
                    SsDecl::Conormal { h: ps.expr()? }
                }
                "point" => {
                    ps.keyword("at")?;
                    ps.expect_sym('=')?;
                    let at = ps.list()?;
                    if at.len() != 2 {
                        return Err(semantic(kt.line, kt.col, "a point needs two coordinates"));
                    }
                    SsDecl::Point { at }
                }
                "linefield" => {
                    ps.keyword("h")?;
                    ps.expect_sym('=')?;
                    let h = ps.expr()?;
                    ps.keyword("omega")?;
                    ps.expect_sym('=')?;
                    let omega = ps.list()?;
                    if omega.len() != 2 {
                        return Err(semantic(kt.line, kt.col, "omega needs two coefficients"));
                    }
                    SsDecl::LineField { h, omega }
                }
                other => return ps.err(&kt, format!("unknown singular-support component `{other}`")),
            };
            ps.expect_sym(';')?;
            check_names(ps, scope, &BTreeSet::new())?;
            Stmt::Ss(decl)
        }
        "task" => {
            require_ring(scope, &t)?;
            let (name, nt) = ps.dashed_name()?;
            let Some(kind) = TaskKind::ALL.iter().copied().find(|k| k.name() == name) else {
                return Err(semantic(nt.line, nt.col, format!("unknown task `{name}`")));
            };
            Stmt::Task(task_args(ps, scope, kind, &t)?)
        }
        other => return ps.err(&t, format!("unknown statement `{other}`")),
    };
    Ok(Some(stmt))
}

fn task_args(ps: &mut Parser, scope: &Scope, kind: TaskKind, head: &Token) -> PResult<TaskDecl> {
    let schema = kind.schema();
    let mut args = BTreeMap::new();
    let mut extra = BTreeSet::new();
    // identifiers that are names, not variables
    let mut exempt: Vec<(usize, usize)> = Vec::new();
    while !ps.at_sym(';') {
        let (key, kt) = ps.dashed_name()?;
        let Some(arg) = schema.iter().find(|a| a.key == key) else {
            return Err(semantic(kt.line, kt.col, format!("unknown key `{key}` for task `{}`", kind.name())));
        };
        if args.contains_key(&key) {
            return Err(semantic(kt.line, kt.col, format!("duplicate key `{key}`")));
        }
        ps.expect_sym('=')?;
        let vt = ps.peek().clone();
        let before = ps.used.len();
        let value = match arg.kind {
            Kind::Expr => Value::Expr(ps.expr()?),
            Kind::Pair => {
                let l = ps.list()?;
                if l.len() != 2 {
                    return Err(semantic(vt.line, vt.col, format!("`{key}` needs two entries")));
                }
                Value::List(l)
            }
            Kind::List => Value::List(ps.list()?),
            Kind::Int | Kind::IntOrAuto => {
                let e = ps.expr()?;
                let auto = arg.kind == Kind::IntOrAuto && e == Expr::Var("auto".into());
                if auto {
                    exempt.push((vt.line, vt.col));
                } else if e.as_int().is_none() {
                    return Err(semantic(vt.line, vt.col, format!("`{key}` must be an integer")));
                }
                Value::Expr(e)
            }
            Kind::Ident => {
                let (s, it) = ps.ident()?;
                if scope.ring.as_ref().is_some_and(|r| r.contains(&s)) || scope.params.contains(&s) {
                    return Err(semantic(it.line, it.col, format!("`{s}` is already declared")));
                }
                extra.insert(s.clone());
                Value::Expr(Expr::Var(s))
            }
            Kind::IdentList => {
                let l = ps.list()?;
                for (e, (_, line, col)) in l.iter().zip(ps.used[before..].iter()) {
                    if !matches!(e, Expr::Var(_)) {
                        return Err(semantic(*line, *col, format!("`{key}` must list variable names")));
                    }
                }
                for e in &l {
                    if let Expr::Var(s) = e {
                        extra.insert(s.clone());
                    }
                }
                Value::List(l)
            }
        };
        if arg.kind == Kind::Pair {
            if let Some((name, line, col)) =
                ps.used[before..].iter().find(|(n, ..)| scope.ring.as_ref().is_some_and(|r| r.contains(n)))
            {
                return Err(semantic(*line, *col, format!("`{key}` must not involve the chart variable `{name}`")));
            }
        }
        args.insert(key, value);
    }
    ps.expect_sym(';')?;
    for a in schema {
        if a.required && !args.contains_key(a.key) {
            return Err(semantic(head.line, head.col, format!("task `{}` needs `{}`", kind.name(), a.key)));
        }
    }
    if kind == TaskKind::Ep && (args.contains_key("ideal") == args.contains_key("automorphism")) {
        return Err(semantic(head.line, head.col, "task `ep` needs exactly one of `ideal` and `automorphism`"));
    }
    ps.used.retain(|(_, l, c)| !exempt.contains(&(*l, *c)));
    check_names(ps, scope, &extra)?;
    Ok(TaskDecl { kind, args })
}
