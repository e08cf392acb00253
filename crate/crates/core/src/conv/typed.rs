//! Type-directed conversion.
//!
//! A checking judgement ([`unify_chk`]) consumes the type of the compared
//! values and applies η at Unit, function and pair types. A synthesising
//! judgement ([`unify_syn`]) compares neutrals and produces their type by
//! walking the head's type along both spines ([`unify_sp`]).
//!
//! Types are forced only to weak-head form, as far as needed to pick a rule.

use crate::conv::{mismatch, unfold_left_first, Conv, ConvError};
use crate::eval::{apply_spine, force, v_app, v_fst, v_snd, Head, Neutral, Spine, Tops, UnfoldCounter, Value};
use crate::syntax::Lvl;

/// Context for typed comparison: the type of every bound variable, indexed
/// by level, and the top-level table.
pub struct ConvCxt<'a> {
    pub tops: &'a Tops,
    pub local_types: Vec<Value>,
    /// Compare spines of equal top-level heads before unfolding them.
    pub speculate: bool,
}

impl<'a> ConvCxt<'a> {
    pub fn new(tops: &'a Tops, local_types: Vec<Value>) -> ConvCxt<'a> {
        ConvCxt { tops, local_types, speculate: true }
    }

    pub fn lvl(&self) -> Lvl {
        Lvl(self.local_types.len())
    }
}

struct Typed<'c, 'a> {
    cxt: &'c mut ConvCxt<'a>,
    counter: &'c mut UnfoldCounter,
}

impl<'a> Typed<'_, 'a> {
    fn tops(&self) -> &'a Tops {
        self.cxt.tops
    }

    fn lvl(&self) -> Lvl {
        self.cxt.lvl()
    }

    fn force(&mut self, v: &Value) -> Value {
        force(self.cxt.tops, v, self.counter)
    }

    /// Runs `f` with a fresh variable of type `ty` in scope.
    fn with_fresh<T>(&mut self, ty: &Value, f: impl FnOnce(&mut Self, Value) -> Conv<T>) -> Conv<T> {
        let x = Value::local(self.lvl());
        self.cxt.local_types.push(ty.clone());
        let r = f(self, x);
        self.cxt.local_types.pop();
        r
    }

    fn chk(&mut self, v: &Value, w: &Value, ty: &Value) -> Conv {
        let ty = self.force(ty);
        match &ty {
            Value::UnitType => Ok(()),
            Value::Pi(_, a, b) => self.with_fresh(a, |s, x| {
                let tops = s.tops();
                let (vx, wx, bx) = (v_app(tops, v, &x), v_app(tops, w, &x), b.apply(tops, x));
                s.chk(&vx, &wx, &bx)
            }),
            Value::Sigma(_, a, b) => {
                let tops = self.tops();
                let (v1, w1) = (v_fst(tops, v), v_fst(tops, w));
                self.chk(&v1, &w1, a)?;
                let tops = self.tops();
                let (v2, w2, b1) = (v_snd(tops, v), v_snd(tops, w), b.apply(tops, v1));
                self.chk(&v2, &w2, &b1)
            }
            Value::Univ => self.types(v, w),
            Value::Neutral(_) => self.neutrals(v, w, &ty),
            other => panic!("internal error: comparing at a {}, which is not a type", other.constructor_name()),
        }
    }

    /// Structural comparison of two types (values of type `U`).
    fn types(&mut self, v: &Value, w: &Value) -> Conv {
        use Value::*;
        match (v, w) {
            (Pi(_, a, b), Pi(_, a2, b2)) | (Sigma(_, a, b), Sigma(_, a2, b2)) => {
                self.chk(a, a2, &Univ)?;
                self.with_fresh(a, |s, x| {
                    let tops = s.tops();
                    let (bx, b2x) = (b.apply(tops, x.clone()), b2.apply(tops, x));
                    s.chk(&bx, &b2x, &Univ)
                })
            }
            (UnitType, UnitType) | (Univ, Univ) => Ok(()),
            (Neutral(_), _) | (_, Neutral(_)) => self.neutrals(v, w, &Univ),
            _ => mismatch(self.lvl(), v, w, Some(&Univ), "different type formers"),
        }
    }

    /// Comparison at a neutral type or of neutral types; `ty` is already
    /// forced. Unfolds top-level heads when they differ.
    fn neutrals(&mut self, v: &Value, w: &Value, ty: &Value) -> Conv {
        match (v, w) {
            (Value::Neutral(n), Value::Neutral(m)) if n.head == m.head => self.unify_syn(v, n, w, m).map(drop),
            _ if v.top_head().is_some() || w.top_head().is_some() => {
                let (v, w) =
                    if unfold_left_first(v, w) { (self.force(v), w.clone()) } else { (v.clone(), self.force(w)) };
                self.chk(&v, &w, ty)
            }
            _ => mismatch(self.lvl(), v, w, Some(ty), "different neutrals"),
        }
    }

    fn head(&self, head: &Head) -> (Value, Value) {
        match head {
            Head::Local(l) => (self.cxt.local_types[l.0].clone(), Value::local(*l)),
            Head::Top(id) => {
                let e = self.tops().get(id);
                (e.ty.clone(), e.reference())
            }
        }
    }

    fn unify_syn(&mut self, v: &Value, n: &Neutral, w: &Value, m: &Neutral) -> Conv<Value> {
        if n.head != m.head {
            return mismatch(self.lvl(), v, w, None, "different heads");
        }
        let (head_ty, head) = self.head(&n.head);
        if n.unfolded.is_none() {
            return self.unify_sp(&head_ty, &head, &n.spine, &m.spine).map(|(ty, _)| ty);
        }
        if self.cxt.speculate {
            if let Ok((ty, _)) = self.unify_sp(&head_ty, &head, &n.spine, &m.spine) {
                return Ok(ty);
            }
        }
        // The type still comes from the head's signature.
        let (ty, _) = self.synth_sp(&head_ty, &head, &n.spine);
        let (fv, fw) = (self.force(v), self.force(w));
        self.chk(&fv, &fw, &ty)?;
        Ok(ty)
    }

    /// Walks both spines base-first, threading the head's type. Returns the
    /// type of the whole neutral and the left-hand neutral rebuilt so far.
    fn unify_sp(&mut self, head_ty: &Value, head: &Value, sp: &Spine, sp2: &Spine) -> Conv<(Value, Value)> {
        match (sp, sp2) {
            (Spine::Id, Spine::Id) => Ok((head_ty.clone(), head.clone())),
            (Spine::App(r, a), Spine::App(r2, a2)) => {
                let (ty, prefix) = self.unify_sp(head_ty, head, r, r2)?;
                match self.force(&ty) {
                    Value::Pi(_, dom, cod) => {
                        self.chk(a, a2, &dom)?;
                        let tops = self.tops();
                        Ok((cod.apply(tops, a.clone()), v_app(tops, &prefix, a)))
                    }
                    other => panic!("internal error: application at a {}", other.constructor_name()),
                }
            }
            (Spine::Fst(r), Spine::Fst(r2)) => {
                let (ty, prefix) = self.unify_sp(head_ty, head, r, r2)?;
                self.project(&ty, &prefix, true)
            }
            (Spine::Snd(r), Spine::Snd(r2)) => {
                let (ty, prefix) = self.unify_sp(head_ty, head, r, r2)?;
                self.project(&ty, &prefix, false)
            }
            _ => {
                let tops = self.tops();
                let left = apply_spine(tops, head.clone(), sp);
                let right = apply_spine(tops, head.clone(), sp2);
                mismatch(self.lvl(), &left, &right, None, "spine mismatch")
            }
        }
    }

    fn project(&mut self, ty: &Value, prefix: &Value, first: bool) -> Conv<(Value, Value)> {
        match self.force(ty) {
            Value::Sigma(_, a, b) => {
                let tops = self.tops();
                let fst = v_fst(tops, prefix);
                if first {
                    Ok(((*a).clone(), fst))
                } else {
                    Ok((b.apply(tops, fst), v_snd(tops, prefix)))
                }
            }
            other => panic!("internal error: projection at a {}", other.constructor_name()),
        }
    }

    /// Type of `head` applied to `sp`, without comparing anything.
    fn synth_sp(&mut self, head_ty: &Value, head: &Value, sp: &Spine) -> (Value, Value) {
        match sp {
            Spine::Id => (head_ty.clone(), head.clone()),
            Spine::App(r, a) => {
                let (ty, prefix) = self.synth_sp(head_ty, head, r);
                match self.force(&ty) {
                    Value::Pi(_, _, cod) => {
                        let tops = self.tops();
                        (cod.apply(tops, a.clone()), v_app(tops, &prefix, a))
                    }
                    other => panic!("internal error: application at a {}", other.constructor_name()),
                }
            }
            Spine::Fst(r) | Spine::Snd(r) => {
                let (ty, prefix) = self.synth_sp(head_ty, head, r);
                self.project(&ty, &prefix, matches!(sp, Spine::Fst(_))).expect("projection cannot fail")
            }
        }
    }
}

/// Decides `v ≡ w : ty`.
pub fn unify_chk(
    cxt: &mut ConvCxt,
    v: &Value,
    w: &Value,
    ty: &Value,
    counter: &mut UnfoldCounter,
) -> Result<(), Box<ConvError>> {
    let tops = cxt.tops;
    Typed { cxt, counter }.chk(v, w, ty).map_err(|m| m.to_error(tops))
}

/// Compares two neutrals and returns their common type.
pub fn unify_syn(
    cxt: &mut ConvCxt,
    n: &Value,
    m: &Value,
    counter: &mut UnfoldCounter,
) -> Result<Value, Box<ConvError>> {
    let tops = cxt.tops;
    let mut typed = Typed { cxt, counter };
    let r = match (n, m) {
        (Value::Neutral(nn), Value::Neutral(mm)) => typed.unify_syn(n, nn, m, mm),
        _ => mismatch(typed.lvl(), n, m, None, "not neutral"),
    };
    r.map_err(|e| e.to_error(tops))
}

/// Compares two spines off `head` (whose type is `head_ty`) and returns the
/// type of the resulting neutral.
pub fn unify_sp(
    cxt: &mut ConvCxt,
    head_ty: &Value,
    head: &Value,
    sp: &Spine,
    sp2: &Spine,
    counter: &mut UnfoldCounter,
) -> Result<Value, Box<ConvError>> {
    let tops = cxt.tops;
    Typed { cxt, counter }.unify_sp(head_ty, head, sp, sp2).map(|(ty, _)| ty).map_err(|e| e.to_error(tops))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, quote, Env, Unfold};
    use crate::syntax::Term;
    use std::sync::Arc;

    fn cxt<'a>(tops: &'a Tops, types: Vec<Value>) -> ConvCxt<'a> {
        ConvCxt::new(tops, types)
    }

    #[test]
    fn unit_eta() {
        let tops = Tops::new();
        let mut c = cxt(&tops, vec![Value::UnitType, Value::UnitType]);
        let mut n = UnfoldCounter::new();
        unify_chk(&mut c, &Value::local(Lvl(0)), &Value::local(Lvl(1)), &Value::UnitType, &mut n).unwrap();
    }

    #[test]
    fn surjective_pairing() {
        let tops = Tops::new();
        // A : U, B : A -> U, p : (x : A) * B x
        let sig_ty = Term::sigma("x", Term::var(1), Term::app(Term::var(1), Term::var(0)));
        let env = Env::from_values([Value::local(Lvl(0)), Value::local(Lvl(1))]);
        let sig = eval(&env, &sig_ty, &tops);
        let b_ty = eval(&Env::new().extend(Value::local(Lvl(0))), &Term::pi("_", Term::var(0), Term::Univ), &tops);
        let mut c = cxt(&tops, vec![Value::Univ, b_ty, sig.clone()]);
        let p = Value::local(Lvl(2));
        let expanded = Value::Pair(Arc::new(v_fst(&tops, &p)), Arc::new(v_snd(&tops, &p)));
        let mut n = UnfoldCounter::new();
        unify_chk(&mut c, &p, &expanded, &sig, &mut n).unwrap();
        unify_chk(&mut c, &expanded, &p, &sig, &mut n).unwrap();
    }

    #[test]
    fn distinct_type_formers() {
        let tops = Tops::new();
        let mut c = cxt(&tops, vec![]);
        let pi = eval(&Env::new(), &Term::pi("_", Term::UnitType, Term::UnitType), &tops);
        let sg = eval(&Env::new(), &Term::sigma("_", Term::UnitType, Term::UnitType), &tops);
        let mut n = UnfoldCounter::new();
        let err = unify_chk(&mut c, &pi, &sg, &Value::Univ, &mut n).unwrap_err();
        assert_eq!(err.ty, Some(Term::Univ));
    }

    #[test]
    fn synth_reflexive_neutral() {
        let tops = Tops::new();
        let mut c = cxt(&tops, vec![Value::UnitType]);
        let mut n = UnfoldCounter::new();
        let x = Value::local(Lvl(0));
        let ty = unify_syn(&mut c, &x, &x, &mut n).unwrap();
        assert!(matches!(ty, Value::UnitType));
    }

    #[test]
    fn synth_applies_unit_eta_to_arguments() {
        // P : Unit -> U, x y : Unit;  P x ≡ P y  synthesises U
        let tops = Tops::new();
        let p_ty = eval(&Env::new(), &Term::pi("_", Term::UnitType, Term::Univ), &tops);
        let mut c = cxt(&tops, vec![p_ty, Value::UnitType, Value::UnitType]);
        let p = Value::local(Lvl(0));
        let px = v_app(&tops, &p, &Value::local(Lvl(1)));
        let py = v_app(&tops, &p, &Value::local(Lvl(2)));
        let mut n = UnfoldCounter::new();
        let ty = unify_syn(&mut c, &px, &py, &mut n).unwrap();
        assert!(matches!(ty, Value::Univ));
    }

    #[test]
    fn synth_projection_mismatch() {
        let tops = Tops::new();
        let sig = eval(&Env::new(), &Term::sigma("_", Term::UnitType, Term::UnitType), &tops);
        let mut c = cxt(&tops, vec![sig]);
        let nu = Value::local(Lvl(0));
        let mut n = UnfoldCounter::new();
        let err = unify_syn(&mut c, &v_fst(&tops, &nu), &v_snd(&tops, &nu), &mut n).unwrap_err();
        assert_eq!(err.rule, "spine mismatch");
    }

    #[test]
    fn spine_types() {
        let tops = Tops::new();
        let mut n = UnfoldCounter::new();
        // headTy = Unit, empty spines
        let mut c = cxt(&tops, vec![Value::UnitType]);
        let ty = unify_sp(&mut c, &Value::UnitType, &Value::local(Lvl(0)), &Spine::Id, &Spine::Id, &mut n).unwrap();
        assert!(matches!(ty, Value::UnitType));

        // A : U, B : A -> U, head : (x : A) * B x;  snd/snd gives B (fst head)
        let env = Env::from_values([Value::local(Lvl(0)), Value::local(Lvl(1))]);
        let sig = eval(&env, &Term::sigma("x", Term::var(1), Term::app(Term::var(1), Term::var(0))), &tops);
        let b_ty = eval(&Env::new().extend(Value::local(Lvl(0))), &Term::pi("_", Term::var(0), Term::Univ), &tops);
        let mut c = cxt(&tops, vec![Value::Univ, b_ty, sig.clone()]);
        let snd = Spine::Snd(Arc::new(Spine::Id));
        let ty = unify_sp(&mut c, &sig, &Value::local(Lvl(2)), &snd, &snd, &mut n).unwrap();
        // B (fst head)  at level 3  is  Var 1 applied to (Var 0).1
        assert_eq!(quote(&tops, Lvl(3), &ty, Unfold::None), Term::app(Term::var(1), Term::fst(Term::var(0))));

        // f : Unit -> Unit; App(x) vs App(y) for distinct Unit variables
        let f_ty = eval(&Env::new(), &Term::pi("_", Term::UnitType, Term::UnitType), &tops);
        let mut c = cxt(&tops, vec![f_ty.clone(), Value::UnitType, Value::UnitType]);
        let sx = Spine::App(Arc::new(Spine::Id), Value::local(Lvl(1)));
        let sy = Spine::App(Arc::new(Spine::Id), Value::local(Lvl(2)));
        let ty = unify_sp(&mut c, &f_ty, &Value::local(Lvl(0)), &sx, &sy, &mut n).unwrap();
        assert!(matches!(ty, Value::UnitType));
    }

    #[test]
    fn top_headed_types_are_forced() {
        // def T : U := Unit -> Unit;  compare two functions of type T
        let mut tops = Tops::new();
        let t = tops.push("T".into(), Term::Univ, Value::Univ, Term::pi("_", Term::UnitType, Term::UnitType));
        let ty = eval(&Env::new(), &Term::Top(t), &tops);
        let id = eval(&Env::new(), &Term::lam("x", Term::var(0)), &tops);
        let konst = eval(&Env::new(), &Term::lam("x", Term::UnitVal), &tops);
        let mut c = cxt(&tops, vec![]);
        let mut n = UnfoldCounter::new();
        unify_chk(&mut c, &id, &konst, &ty, &mut n).unwrap();
        assert_eq!(n.get(), 1);
    }
}
