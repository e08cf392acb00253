//! Untyped conversion with function η, comparing values at a level.
//!
//! Glued neutrals with the same top-level head are first compared by spine
//! without unfolding; if that fails both sides are unfolded and compared
//! again, so the verdict does not depend on whether the fast path is taken.

use crate::conv::{mismatch, unfold_left_first, Conv, ConvError};
use crate::eval::{apply_spine, force, v_app, Head, Spine, Tops, UnfoldCounter, Value};
use crate::syntax::Lvl;

pub(crate) struct Syntactic<'a> {
    pub tops: &'a Tops,
    pub counter: &'a mut UnfoldCounter,
    pub speculate: bool,
}

fn head_value(tops: &Tops, head: &Head) -> Value {
    match head {
        Head::Local(l) => Value::local(*l),
        Head::Top(id) => tops.get(id).reference(),
    }
}

impl Syntactic<'_> {
    fn force(&mut self, v: &Value) -> Value {
        force(self.tops, v, self.counter)
    }

    pub fn unify(&mut self, lvl: Lvl, v: &Value, w: &Value) -> Conv {
        use Value::*;
        if !self.speculate && (v.top_head().is_some() || w.top_head().is_some()) {
            let (v, w) = (self.force(v), self.force(w));
            return self.unify(lvl, &v, &w);
        }
        match (v, w) {
            (Neutral(n), Neutral(m)) => match (&n.head, &m.head) {
                (Head::Local(a), Head::Local(b)) if a == b => self.unify_sp(lvl, &n.head, &n.spine, &m.spine),
                (Head::Top(a), Head::Top(b)) if a == b => {
                    if self.unify_sp(lvl, &n.head, &n.spine, &m.spine).is_ok() {
                        return Ok(());
                    }
                    let (v, w) = (self.force(v), self.force(w));
                    self.unify(lvl, &v, &w)
                }
                _ => self.unfold_and_retry(lvl, v, w),
            },
            (Neutral(_), _) | (_, Neutral(_)) if v.top_head().is_some() || w.top_head().is_some() => {
                self.unfold_and_retry(lvl, v, w)
            }
            (Lam(_, c), Lam(_, d)) => {
                let x = Value::local(lvl);
                self.unify(lvl.next(), &c.apply(self.tops, x.clone()), &d.apply(self.tops, x))
            }
            (Lam(_, c), _) => {
                let x = Value::local(lvl);
                self.unify(lvl.next(), &c.apply(self.tops, x.clone()), &v_app(self.tops, w, &x))
            }
            (_, Lam(_, d)) => {
                let x = Value::local(lvl);
                self.unify(lvl.next(), &v_app(self.tops, v, &x), &d.apply(self.tops, x))
            }
            (Pi(_, a, b), Pi(_, a2, b2)) | (Sigma(_, a, b), Sigma(_, a2, b2)) => {
                self.unify(lvl, a, a2)?;
                let x = Value::local(lvl);
                self.unify(lvl.next(), &b.apply(self.tops, x.clone()), &b2.apply(self.tops, x))
            }
            (Pair(a, b), Pair(a2, b2)) => {
                self.unify(lvl, a, a2)?;
                self.unify(lvl, b, b2)
            }
            (UnitType, UnitType) | (UnitVal, UnitVal) | (Univ, Univ) => Ok(()),
            _ => mismatch(lvl, v, w, None, "different constructors"),
        }
    }

    fn unfold_and_retry(&mut self, lvl: Lvl, v: &Value, w: &Value) -> Conv {
        if v.top_head().is_none() && w.top_head().is_none() {
            return mismatch(lvl, v, w, None, "different heads");
        }
        if unfold_left_first(v, w) {
            let v = self.force(v);
            self.unify(lvl, &v, w)
        } else {
            let w = self.force(w);
            self.unify(lvl, v, &w)
        }
    }

    pub fn unify_sp(&mut self, lvl: Lvl, head: &Head, sp: &Spine, sp2: &Spine) -> Conv {
        match (sp, sp2) {
            (Spine::Id, Spine::Id) => Ok(()),
            (Spine::App(r, a), Spine::App(r2, a2)) => {
                self.unify_sp(lvl, head, r, r2)?;
                self.unify(lvl, a, a2)
            }
            (Spine::Fst(r), Spine::Fst(r2)) | (Spine::Snd(r), Spine::Snd(r2)) => self.unify_sp(lvl, head, r, r2),
            _ => {
                let h = head_value(self.tops, head);
                let left = apply_spine(self.tops, h.clone(), sp);
                let right = apply_spine(self.tops, h, sp2);
                mismatch(lvl, &left, &right, None, "spine mismatch")
            }
        }
    }
}

/// Decides `v ≡ w` under β and function η. `speculate` enables the
/// spine-first fast path for equal top-level heads.
pub fn unify(
    tops: &Tops,
    lvl: Lvl,
    v: &Value,
    w: &Value,
    counter: &mut UnfoldCounter,
    speculate: bool,
) -> Result<(), Box<ConvError>> {
    Syntactic { tops, counter, speculate }.unify(lvl, v, w).map_err(|m| m.to_error(tops))
}

/// Compares two spines hanging off the same `head`.
pub fn unify_sp(
    tops: &Tops,
    lvl: Lvl,
    head: &Head,
    sp: &Spine,
    sp2: &Spine,
    counter: &mut UnfoldCounter,
    speculate: bool,
) -> Result<(), Box<ConvError>> {
    Syntactic { tops, counter, speculate }.unify_sp(lvl, head, sp, sp2).map_err(|m| m.to_error(tops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, v_fst, v_snd, Env};
    use crate::syntax::Term;
    use std::sync::Arc;

    fn ok(tops: &Tops, lvl: usize, v: &Value, w: &Value) -> bool {
        let mut c = UnfoldCounter::new();
        unify(tops, Lvl(lvl), v, w, &mut c, true).is_ok()
    }

    #[test]
    fn unit_values() {
        assert!(ok(&Tops::new(), 0, &Value::UnitVal, &Value::UnitVal));
    }

    #[test]
    fn function_eta() {
        // f is the local at level 0; compare \x. f x with f
        let tops = Tops::new();
        let env = Env::new().extend(Value::local(Lvl(0)));
        let eta = eval(&env, &Term::lam("x", Term::app(Term::var(1), Term::var(0))), &tops);
        let f = Value::local(Lvl(0));
        assert!(ok(&tops, 1, &eta, &f));
        assert!(ok(&tops, 1, &f, &eta));
    }

    #[test]
    fn distinct_unit_variables_differ() {
        let tops = Tops::new();
        let mut c = UnfoldCounter::new();
        let err = unify(&tops, Lvl(2), &Value::local(Lvl(0)), &Value::local(Lvl(1)), &mut c, true).unwrap_err();
        assert_eq!(err.left, Term::var(1));
        assert_eq!(err.right, Term::var(0));
    }

    #[test]
    fn no_sigma_eta() {
        let tops = Tops::new();
        let p = Value::local(Lvl(0));
        let expanded = Value::Pair(Arc::new(v_fst(&tops, &p)), Arc::new(v_snd(&tops, &p)));
        assert!(!ok(&tops, 1, &p, &expanded));
        assert!(ok(&tops, 1, &expanded, &expanded));
    }

    #[test]
    fn spines() {
        let tops = Tops::new();
        let head = Head::Local(Lvl(0));
        let mut c = UnfoldCounter::new();
        let app = Spine::App(Arc::new(Spine::Id), Value::UnitVal);
        assert!(unify_sp(&tops, Lvl(1), &head, &Spine::Id, &Spine::Id, &mut c, true).is_ok());
        assert!(unify_sp(&tops, Lvl(1), &head, &app, &app.clone(), &mut c, true).is_ok());
        let fst = Spine::Fst(Arc::new(Spine::Id));
        let snd = Spine::Snd(Arc::new(Spine::Id));
        let err = unify_sp(&tops, Lvl(1), &head, &fst, &snd, &mut c, true).unwrap_err();
        assert_eq!(err.rule, "spine mismatch");
        assert_eq!(err.left, Term::fst(Term::var(0)));
        assert!(unify_sp(&tops, Lvl(1), &head, &app, &Spine::Id, &mut c, true).is_err());
    }

    #[test]
    fn speculation_skips_unfolding_equal_heads() {
        // def k : U -> U := \X. X ;  compare k Unit with k Unit
        let mut tops = Tops::new();
        let ty = Term::pi("_", Term::Univ, Term::Univ);
        let vty = eval(&Env::new(), &ty, &tops);
        let k = tops.push("k".into(), ty, vty, Term::lam("X", Term::var(0)));
        let t = Term::app(Term::Top(k.clone()), Term::UnitType);
        let v = eval(&Env::new(), &t, &tops);
        let w = eval(&Env::new(), &t, &tops);
        let mut fast = UnfoldCounter::new();
        unify(&tops, Lvl(0), &v, &w, &mut fast, true).unwrap();
        assert_eq!(fast.get(), 0);
        let mut slow = UnfoldCounter::new();
        unify(&tops, Lvl(0), &v, &w, &mut slow, false).unwrap();
        assert_eq!(slow.get(), 2);
        // different arguments still unfold and fail
        let w2 = eval(&Env::new(), &Term::app(Term::Top(k), Term::Univ), &tops);
        assert!(!ok(&tops, 0, &v, &w2));
        assert!(ok(&tops, 0, &v, &Value::UnitType));
    }
}
