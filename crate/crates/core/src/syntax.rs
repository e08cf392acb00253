//! Core syntax (de Bruijn indices), surface syntax (names and spans), and
//! pretty-printing back into the surface grammar.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

/// A display name. Only used for printing; never consulted by equality.
pub type Name = Arc<str>;

/// De Bruijn index: distance from a variable occurrence to its binder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ix(pub usize);

/// De Bruijn level: absolute binder depth, counted from the outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lvl(pub usize);

impl Lvl {
    pub fn next(self) -> Lvl {
        Lvl(self.0 + 1)
    }

    /// Converts a level to the index it denotes under `self` binders.
    pub fn ix_of(self, var: Lvl) -> Ix {
        debug_assert!(var.0 < self.0, "level {} out of scope at depth {}", var.0, self.0);
        Ix(self.0 - var.0 - 1)
    }
}

/// Reference to a top-level definition: its position in the program plus
/// its declared name. Identity is the ordinal alone.
#[derive(Debug, Clone)]
pub struct TopId {
    pub ordinal: usize,
    pub name: Name,
}

impl PartialEq for TopId {
    fn eq(&self, other: &TopId) -> bool {
        self.ordinal == other.ordinal
    }
}

impl Eq for TopId {}

impl std::hash::Hash for TopId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ordinal.hash(state)
    }
}

/// Core terms.
#[derive(Debug, Clone)]
pub enum Term {
    Var(Ix),
    Top(TopId),
    App(Arc<Term>, Arc<Term>),
    Lam(Name, Arc<Term>),
    Pi(Name, Arc<Term>, Arc<Term>),
    /// Dependent pair type; the second component binds the first.
    Sigma(Name, Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    UnitType,
    UnitVal,
    Univ,
    /// `let name : ty := bound; body`
    Let(Name, Arc<Term>, Arc<Term>, Arc<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Term) -> bool {
        use Term::*;
        match (self, other) {
            (Var(i), Var(j)) => i == j,
            (Top(a), Top(b)) => a == b,
            (App(f, a), App(g, b)) => f == g && a == b,
            (Lam(_, b), Lam(_, c)) => b == c,
            (Pi(_, a, b), Pi(_, c, d)) | (Sigma(_, a, b), Sigma(_, c, d)) => a == c && b == d,
            (Pair(a, b), Pair(c, d)) => a == c && b == d,
            (Fst(a), Fst(b)) | (Snd(a), Snd(b)) => a == b,
            (UnitType, UnitType) | (UnitVal, UnitVal) | (Univ, Univ) => true,
            (Let(_, a, b, c), Let(_, d, e, f)) => a == d && b == e && c == f,
            _ => false,
        }
    }
}

impl Eq for Term {}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn lam(name: &str, body: Term) -> Term {
        Term::Lam(name.into(), Arc::new(body))
    }

    pub fn pi(name: &str, dom: Term, cod: Term) -> Term {
        Term::Pi(name.into(), Arc::new(dom), Arc::new(cod))
    }

    pub fn sigma(name: &str, first: Term, second: Term) -> Term {
        Term::Sigma(name.into(), Arc::new(first), Arc::new(second))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn fst(t: Term) -> Term {
        Term::Fst(Arc::new(t))
    }

    pub fn snd(t: Term) -> Term {
        Term::Snd(Arc::new(t))
    }

    pub fn var(ix: usize) -> Term {
        Term::Var(Ix(ix))
    }

    /// Number of constructors; handy for reporting corpus sizes.
    pub fn size(&self) -> usize {
        use Term::*;
        match self {
            Var(_) | Top(_) | UnitType | UnitVal | Univ => 1,
            Lam(_, b) | Fst(b) | Snd(b) => 1 + b.size(),
            App(a, b) | Pi(_, a, b) | Sigma(_, a, b) | Pair(a, b) => 1 + a.size() + b.size(),
            Let(_, a, b, c) => 1 + a.size() + b.size() + c.size(),
        }
    }

    /// Whether variable `ix` (relative to this term's scope) occurs free.
    pub fn mentions(&self, ix: usize) -> bool {
        use Term::*;
        match self {
            Var(Ix(i)) => *i == ix,
            Top(_) | UnitType | UnitVal | Univ => false,
            Lam(_, b) => b.mentions(ix + 1),
            Fst(b) | Snd(b) => b.mentions(ix),
            App(a, b) | Pair(a, b) => a.mentions(ix) || b.mentions(ix),
            Pi(_, a, b) | Sigma(_, a, b) => a.mentions(ix) || b.mentions(ix + 1),
            Let(_, a, b, c) => a.mentions(ix) || b.mentions(ix) || c.mentions(ix + 1),
        }
    }

    fn collect_tops(&self, out: &mut HashSet<Name>) {
        use Term::*;
        match self {
            Top(id) => {
                out.insert(id.name.clone());
            }
            Var(_) | UnitType | UnitVal | Univ => {}
            Lam(_, b) | Fst(b) | Snd(b) => b.collect_tops(out),
            App(a, b) | Pi(_, a, b) | Sigma(_, a, b) | Pair(a, b) => {
                a.collect_tops(out);
                b.collect_tops(out);
            }
            Let(_, a, b, c) => {
                a.collect_tops(out);
                b.collect_tops(out);
                c.collect_tops(out);
            }
        }
    }
}

/// True iff every variable index in `t` points at an enclosing binder, with
/// `depth` binders already in scope outside `t`.
pub fn shift_check(t: &Term, depth: usize) -> bool {
    use Term::*;
    match t {
        Var(Ix(i)) => *i < depth,
        Top(_) | UnitType | UnitVal | Univ => true,
        Lam(_, b) => shift_check(b, depth + 1),
        Fst(b) | Snd(b) => shift_check(b, depth),
        App(a, b) | Pair(a, b) => shift_check(a, depth) && shift_check(b, depth),
        Pi(_, a, b) | Sigma(_, a, b) => shift_check(a, depth) && shift_check(b, depth + 1),
        Let(_, a, b, c) => shift_check(a, depth) && shift_check(b, depth) && shift_check(c, depth + 1),
    }
}

// ---------------------------------------------------------------------------
// Surface syntax

/// Byte range into the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawTerm {
    pub span: Span,
    pub kind: RawKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawKind {
    Var(Name),
    App(Box<RawTerm>, Box<RawTerm>),
    Lam(Name, Box<RawTerm>),
    Pi(Name, Box<RawTerm>, Box<RawTerm>),
    Sigma(Name, Box<RawTerm>, Box<RawTerm>),
    Pair(Box<RawTerm>, Box<RawTerm>),
    Fst(Box<RawTerm>),
    Snd(Box<RawTerm>),
    UnitType,
    UnitVal,
    Univ,
    Let(Name, Box<RawTerm>, Box<RawTerm>, Box<RawTerm>),
}

impl RawTerm {
    pub fn new(span: Span, kind: RawKind) -> RawTerm {
        RawTerm { span, kind }
    }
}

/// Binder name that can never be referenced.
pub const ANON: &str = "_";

// ---------------------------------------------------------------------------
// Pretty printing

const KEYWORDS: [&str; 5] = ["def", "let", "U", "Unit", "tt"];

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Expr,
    App,
    Proj,
}

struct Printer {
    /// Printed names of the binders in scope, outermost first.
    scope: Vec<String>,
    /// Names of top-level definitions that occur in the printed term.
    tops: HashSet<Name>,
    out: String,
}

impl Printer {
    fn fresh(&self, hint: &str, used: bool) -> String {
        if !used {
            return ANON.to_owned();
        }
        let base = if hint == ANON || hint.is_empty() { "x" } else { hint };
        let taken = |s: &str| KEYWORDS.contains(&s) || self.tops.contains(s) || self.scope.iter().any(|n| n == s);
        if !taken(base) {
            return base.to_owned();
        }
        (1..).map(|i| format!("{base}{i}")).find(|s| !taken(s)).expect("unbounded name supply")
    }

    fn var(&mut self, Ix(ix): Ix) {
        let depth = self.scope.len();
        match depth.checked_sub(ix + 1) {
            Some(lvl) => self.out.push_str(&self.scope[lvl]),
            None => {
                // Not well-scoped; print something recognisable rather than panic.
                self.out.push_str(&format!("?{ix}"));
            }
        }
    }

    fn bind<F: FnOnce(&mut Printer)>(&mut self, name: String, f: F) {
        self.scope.push(name);
        f(self);
        self.scope.pop();
    }

    fn term(&mut self, t: &Term, prec: Prec) {
        use Term::*;
        match t {
            Var(ix) => self.var(*ix),
            Top(id) => self.out.push_str(&id.name),
            UnitType => self.out.push_str("Unit"),
            UnitVal => self.out.push_str("tt"),
            Univ => self.out.push('U'),
            Pair(a, b) => {
                self.out.push('(');
                self.term(a, Prec::Expr);
                self.out.push_str(", ");
                self.term(b, Prec::Expr);
                self.out.push(')');
            }
            App(f, a) => self.parens(prec > Prec::App, |p| {
                p.term(f, Prec::App);
                p.out.push(' ');
                p.term(a, Prec::Proj);
            }),
            Fst(a) | Snd(a) => self.parens(prec > Prec::Proj, |p| {
                p.term(a, Prec::Proj);
                p.out.push_str(if matches!(t, Fst(_)) { ".1" } else { ".2" });
            }),
            Lam(..) => self.parens(prec > Prec::Expr, |p| {
                p.out.push('\\');
                p.lams(t, 0);
            }),
            Pi(x, a, b) | Sigma(x, a, b) => self.parens(prec > Prec::Expr, |p| {
                let op = if matches!(t, Pi(..)) { " -> " } else { " * " };
                let used = b.mentions(0);
                let name = p.fresh(x, used);
                if used {
                    p.out.push('(');
                    p.out.push_str(&name);
                    p.out.push_str(" : ");
                    p.term(a, Prec::Expr);
                    p.out.push(')');
                } else {
                    p.term(a, Prec::App);
                }
                p.out.push_str(op);
                p.bind(name, |p| p.term(b, Prec::Expr));
            }),
            Let(x, a, v, b) => self.parens(prec > Prec::Expr, |p| {
                let name = p.fresh(x, true);
                p.out.push_str("let ");
                p.out.push_str(&name);
                p.out.push_str(" : ");
                p.term(a, Prec::Expr);
                p.out.push_str(" := ");
                p.term(v, Prec::Expr);
                p.out.push_str("; ");
                p.bind(name, |p| p.term(b, Prec::Expr));
            }),
        }
    }

    /// Prints a run of lambdas as `x y z. body`; `bound` counts the binders
    /// already pushed for this run.
    fn lams(&mut self, t: &Term, bound: usize) {
        match t {
            Term::Lam(x, b) => {
                let name = self.fresh(x, b.mentions(0));
                if bound > 0 {
                    self.out.push(' ');
                }
                self.out.push_str(&name);
                self.scope.push(name);
                self.lams(b, bound + 1);
                self.scope.pop();
            }
            body => {
                self.out.push_str(". ");
                self.term(body, Prec::Expr);
            }
        }
    }

    fn parens<F: FnOnce(&mut Printer)>(&mut self, wrap: bool, f: F) {
        if wrap {
            self.out.push('(');
        }
        f(self);
        if wrap {
            self.out.push(')');
        }
    }
}

/// Renders `t` in the surface grammar. `names` are the display names of the
/// enclosing binders, outermost first.
pub fn pretty(t: &Term, names: &[Name]) -> String {
    let mut tops = HashSet::new();
    t.collect_tops(&mut tops);
    let mut p = Printer { scope: names.iter().map(|n| n.to_string()).collect(), tops, out: String::new() };
    p.term(t, Prec::Expr);
    p.out
}

/// Wrapper for `{}` formatting of closed terms.
pub struct Pretty<'a>(pub &'a Term);

impl fmt::Display for Pretty<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&pretty(self.0, &[]))
    }
}
