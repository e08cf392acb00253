//! Normalisation by evaluation.
//!
//! Terms evaluate to weak-head values with closures. References to top-level
//! definitions evaluate to *glued* neutrals: the unexpanded head and spine
//! together with a memoised thunk holding the unfolded value. Unfolding only
//! happens in [`force`], which counts it.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::syntax::{Lvl, Name, Term, TopId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Head {
    Local(Lvl),
    Top(TopId),
}

/// Eliminators applied to a neutral head, innermost at the base.
#[derive(Debug, Clone)]
pub enum Spine {
    Id,
    App(Arc<Spine>, Value),
    Fst(Arc<Spine>),
    Snd(Arc<Spine>),
}

impl Spine {
    pub fn len(&self) -> usize {
        let mut n = 0;
        let mut sp = self;
        loop {
            match sp {
                Spine::Id => return n,
                Spine::App(rest, _) | Spine::Fst(rest) | Spine::Snd(rest) => {
                    n += 1;
                    sp = rest;
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Spine::Id)
    }
}

#[derive(Debug)]
pub struct Neutral {
    pub head: Head,
    pub spine: Spine,
    /// Present iff the head is `Top`.
    pub unfolded: Option<Arc<Thunk>>,
}

#[derive(Debug, Clone)]
pub enum Value {
    Neutral(Arc<Neutral>),
    Lam(Name, Closure),
    Pi(Name, Arc<Value>, Closure),
    Sigma(Name, Arc<Value>, Closure),
    Pair(Arc<Value>, Arc<Value>),
    UnitType,
    UnitVal,
    Univ,
}

impl Value {
    /// A bound variable with an empty spine.
    pub fn local(lvl: Lvl) -> Value {
        Value::Neutral(Arc::new(Neutral { head: Head::Local(lvl), spine: Spine::Id, unfolded: None }))
    }

    /// A glued reference to a top-level definition whose value is `value`.
    pub fn top(id: TopId, value: Value) -> Value {
        Value::Neutral(Arc::new(Neutral {
            head: Head::Top(id),
            spine: Spine::Id,
            unfolded: Some(Arc::new(Thunk::ready(value))),
        }))
    }

    pub fn neutral(&self) -> Option<&Neutral> {
        match self {
            Value::Neutral(n) => Some(n),
            _ => None,
        }
    }

    /// Top-level head of a glued neutral, if any.
    pub fn top_head(&self) -> Option<&TopId> {
        match self {
            Value::Neutral(n) => match &n.head {
                Head::Top(id) => Some(id),
                Head::Local(_) => None,
            },
            _ => None,
        }
    }

    pub fn constructor_name(&self) -> &'static str {
        match self {
            Value::Neutral(_) => "neutral",
            Value::Lam(..) => "lambda",
            Value::Pi(..) => "function type",
            Value::Sigma(..) => "pair type",
            Value::Pair(..) => "pair",
            Value::UnitType => "Unit",
            Value::UnitVal => "tt",
            Value::Univ => "U",
        }
    }
}

/// Persistent environment: one value per enclosing binder, innermost first.
#[derive(Clone, Default)]
pub struct Env(Option<Arc<EnvNode>>);

struct EnvNode {
    value: Value,
    len: usize,
    rest: Env,
}

impl Env {
    pub fn new() -> Env {
        Env(None)
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn extend(&self, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode { value, len: self.len() + 1, rest: self.clone() })))
    }

    /// Value bound `ix` binders out.
    pub fn lookup(&self, ix: usize) -> &Value {
        let mut env = self;
        let mut ix = ix;
        loop {
            let node = env.0.as_ref().expect("internal error: variable index outside its environment");
            if ix == 0 {
                return &node.value;
            }
            ix -= 1;
            env = &node.rest;
        }
    }

    pub fn from_values(values: impl IntoIterator<Item = Value>) -> Env {
        values.into_iter().fold(Env::new(), |env, v| env.extend(v))
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Env(len = {})", self.len())
    }
}

#[derive(Debug, Clone)]
pub struct Closure {
    pub env: Env,
    pub body: Arc<Term>,
}

impl Closure {
    pub fn new(env: Env, body: Arc<Term>) -> Closure {
        Closure { env, body }
    }

    pub fn apply(&self, tops: &Tops, arg: Value) -> Value {
        eval(&self.env.extend(arg), &self.body, tops)
    }
}

/// Memoised unfolding of a glued neutral. Computed at most once.
pub struct Thunk {
    cell: OnceLock<Value>,
    init: ThunkInit,
}

enum ThunkInit {
    Ready,
    App(Arc<Thunk>, Value),
    Fst(Arc<Thunk>),
    Snd(Arc<Thunk>),
}

impl Thunk {
    pub fn ready(value: Value) -> Thunk {
        let cell = OnceLock::new();
        let _ = cell.set(value);
        Thunk { cell, init: ThunkInit::Ready }
    }

    fn deferred(init: ThunkInit) -> Thunk {
        Thunk { cell: OnceLock::new(), init }
    }

    pub fn is_evaluated(&self) -> bool {
        self.cell.get().is_some()
    }

    /// The unfolded value. Does not count as an unfolding by itself.
    pub fn get(&self, tops: &Tops) -> &Value {
        self.cell.get_or_init(|| match &self.init {
            ThunkInit::Ready => unreachable!("ready thunks are initialised on construction"),
            ThunkInit::App(t, a) => v_app(tops, t.get(tops), a),
            ThunkInit::Fst(t) => v_fst(tops, t.get(tops)),
            ThunkInit::Snd(t) => v_snd(tops, t.get(tops)),
        })
    }
}

impl fmt::Debug for Thunk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell.get() {
            Some(v) => f.debug_tuple("Thunk").field(v).finish(),
            None => f.write_str("Thunk(<lazy>)"),
        }
    }
}

/// Number of top-level unfoldings forced during one checking run.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct UnfoldCounter(u64);

impl UnfoldCounter {
    pub fn new() -> UnfoldCounter {
        UnfoldCounter(0)
    }

    pub fn get(&self) -> u64 {
        self.0
    }

    fn tick(&mut self) {
        self.0 += 1;
    }
}

// ---------------------------------------------------------------------------
// Top-level table

#[derive(Debug, Clone)]
pub struct TopEntry {
    pub id: TopId,
    pub ty_term: Term,
    pub body_term: Term,
    pub ty: Value,
    pub value: Value,
    /// `Value::top(id, value)`, shared by every reference.
    glued: Value,
}

impl TopEntry {
    /// A glued reference to this definition, as produced by evaluation.
    pub fn reference(&self) -> Value {
        self.glued.clone()
    }
}

/// Checked top-level definitions: signatures and glued values.
#[derive(Debug, Clone, Default)]
pub struct Tops {
    entries: Vec<TopEntry>,
    by_name: HashMap<Name, usize>,
}

impl Tops {
    pub fn new() -> Tops {
        Tops::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TopEntry] {
        &self.entries
    }

    pub fn get(&self, id: &TopId) -> &TopEntry {
        &self.entries[id.ordinal]
    }

    pub fn lookup(&self, name: &str) -> Option<&TopEntry> {
        self.by_name.get(name).map(|&i| &self.entries[i])
    }

    /// The id the next pushed definition will receive.
    pub fn next_id(&self, name: Name) -> TopId {
        TopId { ordinal: self.entries.len(), name }
    }

    /// Appends a checked definition. Its body is evaluated here against the
    /// earlier definitions.
    pub fn push(&mut self, name: Name, ty_term: Term, ty: Value, body_term: Term) -> TopId {
        let id = self.next_id(name);
        let value = eval(&Env::new(), &body_term, self);
        let glued = Value::top(id.clone(), value.clone());
        self.by_name.insert(id.name.clone(), id.ordinal);
        self.entries.push(TopEntry { id: id.clone(), ty_term, body_term, ty, value, glued });
        id
    }
}

// ---------------------------------------------------------------------------
// Evaluation

pub fn eval(env: &Env, t: &Term, tops: &Tops) -> Value {
    match t {
        Term::Var(ix) => env.lookup(ix.0).clone(),
        Term::Top(id) => tops.get(id).glued.clone(),
        Term::App(f, a) => {
            let f = eval(env, f, tops);
            let a = eval(env, a, tops);
            v_app(tops, &f, &a)
        }
        Term::Lam(x, b) => Value::Lam(x.clone(), Closure::new(env.clone(), b.clone())),
        Term::Pi(x, a, b) => Value::Pi(x.clone(), Arc::new(eval(env, a, tops)), Closure::new(env.clone(), b.clone())),
        Term::Sigma(x, a, b) => {
            Value::Sigma(x.clone(), Arc::new(eval(env, a, tops)), Closure::new(env.clone(), b.clone()))
        }
        Term::Pair(a, b) => Value::Pair(Arc::new(eval(env, a, tops)), Arc::new(eval(env, b, tops))),
        Term::Fst(p) => v_fst(tops, &eval(env, p, tops)),
        Term::Snd(p) => v_snd(tops, &eval(env, p, tops)),
        Term::UnitType => Value::UnitType,
        Term::UnitVal => Value::UnitVal,
        Term::Univ => Value::Univ,
        Term::Let(_, _, v, b) => {
            let v = eval(env, v, tops);
            eval(&env.extend(v), b, tops)
        }
    }
}

fn extend_neutral(n: &Neutral, spine: Spine, thunk: impl FnOnce(Arc<Thunk>) -> ThunkInit) -> Value {
    Value::Neutral(Arc::new(Neutral {
        head: n.head.clone(),
        spine,
        unfolded: n.unfolded.as_ref().map(|t| Arc::new(Thunk::deferred(thunk(t.clone())))),
    }))
}

pub fn v_app(tops: &Tops, f: &Value, a: &Value) -> Value {
    match f {
        Value::Lam(_, c) => c.apply(tops, a.clone()),
        Value::Neutral(n) => {
            extend_neutral(n, Spine::App(Arc::new(n.spine.clone()), a.clone()), |t| ThunkInit::App(t, a.clone()))
        }
        other => panic!("internal error: applying a {}", other.constructor_name()),
    }
}

pub fn v_fst(_tops: &Tops, p: &Value) -> Value {
    match p {
        Value::Pair(a, _) => (**a).clone(),
        Value::Neutral(n) => extend_neutral(n, Spine::Fst(Arc::new(n.spine.clone())), ThunkInit::Fst),
        other => panic!("internal error: first projection of a {}", other.constructor_name()),
    }
}

pub fn v_snd(_tops: &Tops, p: &Value) -> Value {
    match p {
        Value::Pair(_, b) => (**b).clone(),
        Value::Neutral(n) => extend_neutral(n, Spine::Snd(Arc::new(n.spine.clone())), ThunkInit::Snd),
        other => panic!("internal error: second projection of a {}", other.constructor_name()),
    }
}

/// Replays a spine on top of `v`.
pub fn apply_spine(tops: &Tops, v: Value, sp: &Spine) -> Value {
    match sp {
        Spine::Id => v,
        Spine::App(rest, a) => v_app(tops, &apply_spine(tops, v, rest), a),
        Spine::Fst(rest) => v_fst(tops, &apply_spine(tops, v, rest)),
        Spine::Snd(rest) => v_snd(tops, &apply_spine(tops, v, rest)),
    }
}

/// Unfolds top-level heads until the head is not a definition. Each payload
/// forced counts once.
pub fn force(tops: &Tops, v: &Value, counter: &mut UnfoldCounter) -> Value {
    let mut v = v.clone();
    loop {
        let next = match &v {
            Value::Neutral(n) => match &n.unfolded {
                Some(t) => t.get(tops).clone(),
                None => return v,
            },
            _ => return v,
        };
        counter.tick();
        v = next;
    }
}

// ---------------------------------------------------------------------------
// Quotation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unfold {
    /// Read back through every top-level definition.
    All,
    /// Keep top-level references as they are.
    None,
}

pub fn quote(tops: &Tops, lvl: Lvl, v: &Value, policy: Unfold) -> Term {
    match v {
        Value::Neutral(n) => {
            if policy == Unfold::All && n.unfolded.is_some() {
                let mut scratch = UnfoldCounter::new();
                return quote(tops, lvl, &force(tops, v, &mut scratch), policy);
            }
            let head = match &n.head {
                Head::Local(l) => Term::Var(lvl.ix_of(*l)),
                Head::Top(id) => Term::Top(id.clone()),
            };
            quote_spine(tops, lvl, head, &n.spine, policy)
        }
        Value::Lam(x, c) => Term::Lam(x.clone(), Arc::new(quote_closure(tops, lvl, c, policy))),
        Value::Pi(x, a, c) => {
            Term::Pi(x.clone(), Arc::new(quote(tops, lvl, a, policy)), Arc::new(quote_closure(tops, lvl, c, policy)))
        }
        Value::Sigma(x, a, c) => {
            Term::Sigma(x.clone(), Arc::new(quote(tops, lvl, a, policy)), Arc::new(quote_closure(tops, lvl, c, policy)))
        }
        Value::Pair(a, b) => Term::pair(quote(tops, lvl, a, policy), quote(tops, lvl, b, policy)),
        Value::UnitType => Term::UnitType,
        Value::UnitVal => Term::UnitVal,
        Value::Univ => Term::Univ,
    }
}

fn quote_closure(tops: &Tops, lvl: Lvl, c: &Closure, policy: Unfold) -> Term {
    quote(tops, lvl.next(), &c.apply(tops, Value::local(lvl)), policy)
}

fn quote_spine(tops: &Tops, lvl: Lvl, head: Term, sp: &Spine, policy: Unfold) -> Term {
    match sp {
        Spine::Id => head,
        Spine::App(rest, a) => Term::app(quote_spine(tops, lvl, head, rest, policy), quote(tops, lvl, a, policy)),
        Spine::Fst(rest) => Term::fst(quote_spine(tops, lvl, head, rest, policy)),
        Spine::Snd(rest) => Term::snd(quote_spine(tops, lvl, head, rest, policy)),
    }
}

/// `quote ∘ eval` on a closed term, reading through all definitions.
pub fn normalize(tops: &Tops, t: &Term) -> Term {
    quote(tops, Lvl(0), &eval(&Env::new(), t, tops), Unfold::All)
}
