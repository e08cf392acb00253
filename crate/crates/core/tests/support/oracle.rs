//! Reference normalizer: named terms, capture-avoiding substitution, and
//! normal-order reduction. Shares nothing with the evaluator under test
//! beyond the core `Term` type it reads and writes.

use etabench::eval::Tops;
use etabench::Term;
use std::collections::HashSet;
use std::sync::Arc;

#[derive(Debug, Clone)]
pub enum Named {
    Var(String),
    App(Box<Named>, Box<Named>),
    Lam(String, Box<Named>),
    Pi(String, Box<Named>, Box<Named>),
    Sigma(String, Box<Named>, Box<Named>),
    Pair(Box<Named>, Box<Named>),
    Fst(Box<Named>),
    Snd(Box<Named>),
    UnitType,
    UnitVal,
    Univ,
}

use Named as N;

fn b(t: Named) -> Box<Named> {
    Box::new(t)
}

pub struct Oracle<'a> {
    tops: &'a Tops,
    fresh: usize,
}

impl<'a> Oracle<'a> {
    pub fn new(tops: &'a Tops) -> Oracle<'a> {
        Oracle { tops, fresh: 0 }
    }

    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("#{}", self.fresh)
    }

    /// De Bruijn to named, inlining every top-level reference and
    /// turning `let` into substitution.
    pub fn named(&mut self, t: &Term, scope: &mut Vec<String>) -> Named {
        match t {
            Term::Var(ix) => N::Var(scope[scope.len() - 1 - ix.0].clone()),
            Term::Top(id) => {
                let body = self.tops.entries()[id.ordinal].body_term.clone();
                self.named(&body, &mut Vec::new())
            }
            Term::App(f, a) => N::App(b(self.named(f, scope)), b(self.named(a, scope))),
            Term::Lam(_, body) => {
                let x = self.fresh();
                scope.push(x.clone());
                let body = self.named(body, scope);
                scope.pop();
                N::Lam(x, b(body))
            }
            Term::Pi(_, a, body) | Term::Sigma(_, a, body) => {
                let a = self.named(a, scope);
                let x = self.fresh();
                scope.push(x.clone());
                let body = self.named(body, scope);
                scope.pop();
                if matches!(t, Term::Pi(..)) {
                    N::Pi(x, b(a), b(body))
                } else {
                    N::Sigma(x, b(a), b(body))
                }
            }
            Term::Pair(x, y) => N::Pair(b(self.named(x, scope)), b(self.named(y, scope))),
            Term::Fst(p) => N::Fst(b(self.named(p, scope))),
            Term::Snd(p) => N::Snd(b(self.named(p, scope))),
            Term::UnitType => N::UnitType,
            Term::UnitVal => N::UnitVal,
            Term::Univ => N::Univ,
            Term::Let(_, _, bound, body) => {
                let bound = self.named(bound, scope);
                let x = self.fresh();
                scope.push(x.clone());
                let body = self.named(body, scope);
                scope.pop();
                self.subst(&body, &x, &bound)
            }
        }
    }

    /// `t[x := s]`, renaming binders that would capture free names of `s`.
    pub fn subst(&mut self, t: &Named, x: &str, s: &Named) -> Named {
        let fv = free_vars(s);
        self.subst_with(t, x, s, &fv)
    }

    fn subst_with(&mut self, t: &Named, x: &str, s: &Named, fv: &HashSet<String>) -> Named {
        match t {
            N::Var(y) => {
                if y == x {
                    s.clone()
                } else {
                    t.clone()
                }
            }
            N::App(f, a) => N::App(b(self.subst_with(f, x, s, fv)), b(self.subst_with(a, x, s, fv))),
            N::Pair(p, q) => N::Pair(b(self.subst_with(p, x, s, fv)), b(self.subst_with(q, x, s, fv))),
            N::Fst(p) => N::Fst(b(self.subst_with(p, x, s, fv))),
            N::Snd(p) => N::Snd(b(self.subst_with(p, x, s, fv))),
            N::UnitType | N::UnitVal | N::Univ => t.clone(),
            N::Lam(y, body) => {
                let (y, body) = self.under(y, body, x, s, fv);
                N::Lam(y, b(body))
            }
            N::Pi(y, a, body) => {
                let a = self.subst_with(a, x, s, fv);
                let (y, body) = self.under(y, body, x, s, fv);
                N::Pi(y, b(a), b(body))
            }
            N::Sigma(y, a, body) => {
                let a = self.subst_with(a, x, s, fv);
                let (y, body) = self.under(y, body, x, s, fv);
                N::Sigma(y, b(a), b(body))
            }
        }
    }

    fn under(&mut self, y: &str, body: &Named, x: &str, s: &Named, fv: &HashSet<String>) -> (String, Named) {
        if y == x {
            return (y.to_string(), body.clone());
        }
        if fv.contains(y) {
            let z = self.fresh();
            let renamed = self.subst(body, y, &N::Var(z.clone()));
            let body = self.subst_with(&renamed, x, s, fv);
            (z, body)
        } else {
            (y.to_string(), self.subst_with(body, x, s, fv))
        }
    }

    pub fn whnf(&mut self, t: &Named) -> Named {
        match t {
            N::App(f, a) => match self.whnf(f) {
                N::Lam(x, body) => {
                    let r = self.subst(&body, &x, a);
                    self.whnf(&r)
                }
                f => N::App(b(f), a.clone()),
            },
            N::Fst(p) => match self.whnf(p) {
                N::Pair(x, _) => self.whnf(&x),
                p => N::Fst(b(p)),
            },
            N::Snd(p) => match self.whnf(p) {
                N::Pair(_, y) => self.whnf(&y),
                p => N::Snd(b(p)),
            },
            _ => t.clone(),
        }
    }

    pub fn nf(&mut self, t: &Named) -> Named {
        match self.whnf(t) {
            N::Lam(x, body) => N::Lam(x, b(self.nf(&body))),
            N::Pi(x, a, body) => N::Pi(x, b(self.nf(&a)), b(self.nf(&body))),
            N::Sigma(x, a, body) => N::Sigma(x, b(self.nf(&a)), b(self.nf(&body))),
            N::Pair(p, q) => N::Pair(b(self.nf(&p)), b(self.nf(&q))),
            N::App(f, a) => N::App(b(self.nf(&f)), b(self.nf(&a))),
            N::Fst(p) => N::Fst(b(self.nf(&p))),
            N::Snd(p) => N::Snd(b(self.nf(&p))),
            w => w,
        }
    }

    /// Full normal form of a closed core term, as a core term.
    pub fn normalize(&mut self, t: &Term) -> Term {
        let named = self.named(t, &mut Vec::new());
        let n = self.nf(&named);
        to_term(&n, &mut Vec::new())
    }
}

pub fn free_vars(t: &Named) -> HashSet<String> {
    fn go(t: &Named, bound: &mut Vec<String>, out: &mut HashSet<String>) {
        match t {
            N::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            N::App(f, a) | N::Pair(f, a) => {
                go(f, bound, out);
                go(a, bound, out);
            }
            N::Fst(p) | N::Snd(p) => go(p, bound, out),
            N::UnitType | N::UnitVal | N::Univ => {}
            N::Lam(x, body) => {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
            N::Pi(x, a, body) | N::Sigma(x, a, body) => {
                go(a, bound, out);
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            }
        }
    }
    let mut out = HashSet::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// Named to de Bruijn; panics on free variables.
pub fn to_term(t: &Named, scope: &mut Vec<String>) -> Term {
    let a = Arc::new;
    match t {
        N::Var(x) => {
            let pos = scope.iter().rposition(|y| y == x).unwrap_or_else(|| panic!("free variable {x}"));
            Term::var(scope.len() - 1 - pos)
        }
        N::App(f, x) => Term::App(a(to_term(f, scope)), a(to_term(x, scope))),
        N::Pair(p, q) => Term::Pair(a(to_term(p, scope)), a(to_term(q, scope))),
        N::Fst(p) => Term::Fst(a(to_term(p, scope))),
        N::Snd(p) => Term::Snd(a(to_term(p, scope))),
        N::UnitType => Term::UnitType,
        N::UnitVal => Term::UnitVal,
        N::Univ => Term::Univ,
        N::Lam(x, body) => {
            scope.push(x.clone());
            let body = to_term(body, scope);
            scope.pop();
            Term::Lam(x.as_str().into(), a(body))
        }
        N::Pi(x, dom, body) | N::Sigma(x, dom, body) => {
            let dom = to_term(dom, scope);
            scope.push(x.clone());
            let body = to_term(body, scope);
            scope.pop();
            if matches!(t, N::Pi(..)) {
                Term::Pi(x.as_str().into(), a(dom), a(body))
            } else {
                Term::Sigma(x.as_str().into(), a(dom), a(body))
            }
        }
    }
}
