//! Bidirectional elaboration of surface programs into core terms.
//!
//! The only place the two conversion backends differ is [`ElabCxt::conv`],
//! the comparison of an expected type against an inferred one.

use std::fmt;
use std::sync::Arc;

use crate::conv::typed::{self, ConvCxt};
use crate::conv::{syntactic, ConvError};
use crate::eval::{eval, force, quote, v_fst, Env, Tops, Unfold, UnfoldCounter, Value};
use crate::parser::{RawDecl, RawProgram};
use crate::syntax::{pretty, Lvl, Name, RawKind, RawTerm, Span, Term, ANON};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    Syntactic,
    Typed,
}

impl Backend {
    pub const ALL: [Backend; 2] = [Backend::Syntactic, Backend::Typed];

    pub fn name(self) -> &'static str {
        match self {
            Backend::Syntactic => "syntactic",
            Backend::Typed => "typed",
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Backend, String> {
        match s {
            "syntactic" => Ok(Backend::Syntactic),
            "typed" => Ok(Backend::Typed),
            other => Err(format!("unknown backend `{other}` (expected `syntactic` or `typed`)")),
        }
    }
}

/// Everything that selects how a program is checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub backend: Backend,
    /// Spine-first comparison of equal top-level heads.
    pub speculate: bool,
}

impl CheckOptions {
    pub fn new(backend: Backend) -> CheckOptions {
        CheckOptions { backend, speculate: true }
    }

    pub fn speculate(self, speculate: bool) -> CheckOptions {
        CheckOptions { speculate, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeError {
    pub message: String,
    pub span: Span,
    /// Definition being checked when the error occurred.
    pub decl: Name,
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub backend: Backend,
    pub conv: Option<Box<ConvError>>,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "in `{}`: {}", self.decl, self.message)?;
        if let Some(e) = &self.expected {
            write!(f, "\n  expected: {e}")?;
        }
        if let Some(a) = &self.actual {
            write!(f, "\n  actual:   {a}")?;
        }
        write!(f, "\n  backend:  {}", self.backend)
    }
}

impl std::error::Error for TypeError {}

pub type ElabResult<T> = Result<T, TypeError>;

/// Elaboration context for one definition.
pub struct ElabCxt<'a> {
    tops: &'a Tops,
    env: Env,
    /// Type of each bound variable, by level.
    types: Vec<Value>,
    /// Display name of each bound variable, by level.
    names: Vec<Name>,
    opts: CheckOptions,
    decl: Name,
    counter: &'a mut UnfoldCounter,
}

impl<'a> ElabCxt<'a> {
    pub fn new(tops: &'a Tops, opts: CheckOptions, counter: &'a mut UnfoldCounter) -> ElabCxt<'a> {
        ElabCxt { tops, env: Env::new(), types: Vec::new(), names: Vec::new(), opts, decl: "<expr>".into(), counter }
    }

    pub fn lvl(&self) -> Lvl {
        Lvl(self.types.len())
    }

    pub fn eval(&self, t: &Term) -> Value {
        eval(&self.env, t, self.tops)
    }

    fn force(&mut self, v: &Value) -> Value {
        force(self.tops, v, self.counter)
    }

    fn show(&self, v: &Value) -> String {
        pretty(&quote(self.tops, self.lvl(), v, Unfold::None), &self.names)
    }

    fn error(&self, span: Span, message: impl Into<String>) -> TypeError {
        TypeError {
            message: message.into(),
            span,
            decl: self.decl.clone(),
            expected: None,
            actual: None,
            backend: self.opts.backend,
            conv: None,
        }
    }

    fn with_binder<T>(&mut self, name: &Name, ty: Value, value: Value, f: impl FnOnce(&mut Self) -> T) -> T {
        let saved = self.env.clone();
        self.env = saved.extend(value);
        self.types.push(ty);
        self.names.push(name.clone());
        let r = f(self);
        self.names.pop();
        self.types.pop();
        self.env = saved;
        r
    }

    fn with_var<T>(&mut self, name: &Name, ty: Value, f: impl FnOnce(&mut Self) -> T) -> T {
        let x = Value::local(self.lvl());
        self.with_binder(name, ty, x, f)
    }

    /// The Conv rule: `expected` and `actual` are both types.
    fn conv(&mut self, expected: &Value, actual: &Value, span: Span) -> ElabResult<()> {
        let r = match self.opts.backend {
            Backend::Syntactic => {
                syntactic::unify(self.tops, self.lvl(), expected, actual, self.counter, self.opts.speculate)
            }
            Backend::Typed => {
                let mut cxt = ConvCxt {
                    tops: self.tops,
                    local_types: std::mem::take(&mut self.types),
                    speculate: self.opts.speculate,
                };
                let r = typed::unify_chk(&mut cxt, expected, actual, &Value::Univ, self.counter);
                self.types = cxt.local_types;
                r
            }
        };
        r.map_err(|e| {
            let detail = e.render(&self.names);
            let mut err = self.error(span, format!("type mismatch: {detail}"));
            err.expected = Some(self.show(expected));
            err.actual = Some(self.show(actual));
            err.conv = Some(e);
            err
        })
    }

    fn lookup(&self, name: &Name, span: Span) -> ElabResult<(Term, Value)> {
        if &**name != ANON {
            if let Some(lvl) = self.names.iter().rposition(|n| n == name) {
                return Ok((Term::Var(self.lvl().ix_of(Lvl(lvl))), self.types[lvl].clone()));
            }
            if let Some(e) = self.tops.lookup(name) {
                return Ok((Term::Top(e.id.clone()), e.ty.clone()));
            }
        }
        Err(self.error(span, format!("unbound name `{name}`")))
    }

    pub fn infer(&mut self, r: &RawTerm) -> ElabResult<(Term, Value)> {
        match &r.kind {
            RawKind::Var(x) => self.lookup(x, r.span),
            RawKind::Univ => Ok((Term::Univ, Value::Univ)),
            RawKind::UnitType => Ok((Term::UnitType, Value::Univ)),
            RawKind::UnitVal => Ok((Term::UnitVal, Value::UnitType)),
            RawKind::App(f, a) => {
                let (tf, fty) = self.infer(f)?;
                match self.force(&fty) {
                    Value::Pi(_, dom, cod) => {
                        let ta = self.check(a, &dom)?;
                        let va = self.eval(&ta);
                        Ok((Term::app(tf, ta), cod.apply(self.tops, va)))
                    }
                    other => {
                        let shown = self.show(&other);
                        Err(self.error(f.span, format!("applying a non-function of type `{shown}`")))
                    }
                }
            }
            RawKind::Pi(x, a, b) | RawKind::Sigma(x, a, b) => {
                let ta = self.check(a, &Value::Univ)?;
                let va = self.eval(&ta);
                let tb = self.with_var(x, va, |cx| cx.check(b, &Value::Univ))?;
                let t = if matches!(r.kind, RawKind::Pi(..)) {
                    Term::Pi(x.clone(), Arc::new(ta), Arc::new(tb))
                } else {
                    Term::Sigma(x.clone(), Arc::new(ta), Arc::new(tb))
                };
                Ok((t, Value::Univ))
            }
            RawKind::Fst(p) | RawKind::Snd(p) => {
                let (tp, pty) = self.infer(p)?;
                match self.force(&pty) {
                    Value::Sigma(_, a, b) => {
                        if matches!(r.kind, RawKind::Fst(_)) {
                            Ok((Term::fst(tp), (*a).clone()))
                        } else {
                            let first = v_fst(self.tops, &self.eval(&tp));
                            Ok((Term::snd(tp), b.apply(self.tops, first)))
                        }
                    }
                    other => {
                        let shown = self.show(&other);
                        Err(self.error(p.span, format!("projecting from a non-pair of type `{shown}`")))
                    }
                }
            }
            RawKind::Let(x, a, v, body) => {
                let (ta, va, tv) = self.let_bound(a, v)?;
                let value = self.eval(&tv);
                let (tb, bty) = self.with_binder(x, va, value, |cx| cx.infer(body))?;
                Ok((Term::Let(x.clone(), Arc::new(ta), Arc::new(tv), Arc::new(tb)), bty))
            }
            RawKind::Lam(..) => Err(self.error(r.span, "cannot infer the type of an unannotated lambda")),
            RawKind::Pair(..) => Err(self.error(r.span, "cannot infer the type of an unannotated pair")),
        }
    }

    fn let_bound(&mut self, a: &RawTerm, v: &RawTerm) -> ElabResult<(Term, Value, Term)> {
        let ta = self.check(a, &Value::Univ)?;
        let va = self.eval(&ta);
        let tv = self.check(v, &va)?;
        Ok((ta, va, tv))
    }

    pub fn check(&mut self, r: &RawTerm, expected: &Value) -> ElabResult<Term> {
        match &r.kind {
            RawKind::Lam(x, body) => match self.force(expected) {
                Value::Pi(_, dom, cod) => {
                    let lvl = self.lvl();
                    let tb = self.with_var(x, (*dom).clone(), |cx| {
                        let cod = cod.apply(cx.tops, Value::local(lvl));
                        cx.check(body, &cod)
                    })?;
                    Ok(Term::Lam(x.clone(), Arc::new(tb)))
                }
                other => {
                    let shown = self.show(&other);
                    Err(self.error(r.span, format!("a lambda cannot have type `{shown}`")))
                }
            },
            RawKind::Pair(a, b) => match self.force(expected) {
                Value::Sigma(_, fst_ty, snd_ty) => {
                    let ta = self.check(a, &fst_ty)?;
                    let snd_ty = snd_ty.apply(self.tops, self.eval(&ta));
                    let tb = self.check(b, &snd_ty)?;
                    Ok(Term::pair(ta, tb))
                }
                other => {
                    let shown = self.show(&other);
                    Err(self.error(r.span, format!("a pair cannot have type `{shown}`")))
                }
            },
            RawKind::Let(x, a, v, body) => {
                let (ta, va, tv) = self.let_bound(a, v)?;
                let value = self.eval(&tv);
                let tb = self.with_binder(x, va, value, |cx| cx.check(body, expected))?;
                Ok(Term::Let(x.clone(), Arc::new(ta), Arc::new(tv), Arc::new(tb)))
            }
            _ => {
                let (t, actual) = self.infer(r)?;
                self.conv(expected, &actual, r.span)?;
                Ok(t)
            }
        }
    }
}

/// Checks one declaration against the definitions before it.
fn check_decl(
    tops: &Tops,
    decl: &RawDecl,
    opts: CheckOptions,
    counter: &mut UnfoldCounter,
) -> ElabResult<(Term, Value, Term)> {
    let mut cx = ElabCxt::new(tops, opts, counter);
    cx.decl = decl.name.clone();
    let ty = cx.check(&decl.ty, &Value::Univ)?;
    let vty = cx.eval(&ty);
    let body = cx.check(&decl.body, &vty)?;
    Ok((ty, vty, body))
}

/// Checks every declaration in order, stopping at the first error.
/// Unfoldings are accumulated into `counter` either way.
pub fn check_program_with(p: &RawProgram, opts: CheckOptions, counter: &mut UnfoldCounter) -> ElabResult<Tops> {
    let mut tops = Tops::new();
    for decl in &p.decls {
        let (ty, vty, body) = check_decl(&tops, decl, opts, counter)?;
        tops.push(decl.name.clone(), ty, vty, body);
    }
    Ok(tops)
}

pub fn check_program(p: &RawProgram, backend: Backend) -> ElabResult<Tops> {
    check_program_with(p, CheckOptions::new(backend), &mut UnfoldCounter::new())
}

/// Prints checked definitions back in the surface grammar.
pub fn pretty_program(tops: &Tops) -> String {
    let mut out = String::new();
    for e in tops.entries() {
        out.push_str(&format!("def {} : {} := {}\n", e.id.name, pretty(&e.ty_term, &[]), pretty(&e.body_term, &[])));
    }
    out
}
