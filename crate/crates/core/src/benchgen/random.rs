//! Seeded random programs for differential testing.
//!
//! Every declaration is polymorphic over two type variables and takes one
//! inhabitant of each, so every goal type has a closed-form inhabitant.
//! Types are built from the two variables with `->` and `*`, then spelled
//! through type-level helpers chosen at random. No `Unit` appears, and
//! pairs only ever meet Σ-types, so conversion never needs Unit-η or Σ-η.
//!
//! Roughly two programs in five get one leaf replaced by a variable of the
//! other type variable, which makes them ill-typed under either backend.

use super::Lcg;
use std::fmt::Write;

const PRELUDE: &str = "\
def Fn : U -> U -> U := \\X Y. X -> Y
def Pr : U -> U -> U := \\X Y. X * Y
def Idt : U -> U := \\X. X
def Flip : (U -> U -> U) -> U -> U -> U := \\F X Y. F Y X
def Twice : (U -> U) -> U -> U := \\F X. F (F X)
";

const POISON_PERCENT: usize = 40;
const MAX_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Ty {
    /// Type parameter 0 (`A`) or 1 (`B`).
    Param(u8),
    Arr(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn arr(a: Ty, b: Ty) -> Ty {
        Ty::Arr(Box::new(a), Box::new(b))
    }

    fn prod(a: Ty, b: Ty) -> Ty {
        Ty::Prod(Box::new(a), Box::new(b))
    }

    fn subst(&self, args: &[Ty; 2]) -> Ty {
        match self {
            Ty::Param(i) => args[*i as usize].clone(),
            Ty::Arr(a, b) => Ty::arr(a.subst(args), b.subst(args)),
            Ty::Prod(a, b) => Ty::prod(a.subst(args), b.subst(args)),
        }
    }

    fn size(&self) -> usize {
        match self {
            Ty::Param(_) => 1,
            Ty::Arr(a, b) | Ty::Prod(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// One way of eliminating a value down to a goal type.
#[derive(Debug, Clone)]
enum Step {
    Apply(Ty),
    Fst,
    Snd,
}

/// Elimination paths from `from` that end at `goal`, at most `fuel` steps.
fn paths(from: &Ty, goal: &Ty, fuel: usize, prefix: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    if from == goal {
        out.push(prefix.clone());
    }
    if fuel == 0 {
        return;
    }
    match from {
        Ty::Param(_) => {}
        Ty::Arr(a, b) => {
            prefix.push(Step::Apply((**a).clone()));
            paths(b, goal, fuel - 1, prefix, out);
            prefix.pop();
        }
        Ty::Prod(a, b) => {
            prefix.push(Step::Fst);
            paths(a, goal, fuel - 1, prefix, out);
            prefix.pop();
            prefix.push(Step::Snd);
            paths(b, goal, fuel - 1, prefix, out);
            prefix.pop();
        }
    }
}

struct TopSig {
    name: String,
    /// Types of the value arguments after the two type arguments.
    params: Vec<Ty>,
    result: Ty,
}

impl TopSig {
    fn instantiate(&self, args: &[Ty; 2]) -> Ty {
        self.params.iter().rev().fold(self.result.subst(args), |acc, p| Ty::arr(p.subst(args), acc))
    }
}

struct Gen {
    rng: Lcg,
    tops: Vec<TopSig>,
    locals: Vec<(String, Ty)>,
    fresh: usize,
    poison: bool,
}

fn paren(s: String) -> String {
    if s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
        s
    } else {
        format!("({s})")
    }
}

impl Gen {
    fn random_ty(&mut self, budget: usize) -> Ty {
        if budget == 0 || self.rng.chance(40) {
            return Ty::Param(self.rng.below(2) as u8);
        }
        let a = self.random_ty(budget - 1);
        let b = self.random_ty(budget - 1);
        if self.rng.chance(65) {
            Ty::arr(a, b)
        } else {
            Ty::prod(a, b)
        }
    }

    /// Surface syntax for `ty`, disguised through the prelude helpers.
    fn render_ty(&mut self, ty: &Ty) -> String {
        let wrap = self.rng.below(10);
        let plain = match ty {
            Ty::Param(0) => "A".to_string(),
            Ty::Param(_) => "B".to_string(),
            Ty::Arr(a, b) => {
                let (ra, rb) = (self.render_ty(a), self.render_ty(b));
                match self.rng.below(4) {
                    0 => format!("Fn {} {}", paren(ra), paren(rb)),
                    1 => format!("Flip Fn {} {}", paren(rb), paren(ra)),
                    2 => format!("(_ : {ra}) -> {rb}"),
                    _ => format!("{} -> {rb}", paren(ra)),
                }
            }
            Ty::Prod(a, b) => {
                let (ra, rb) = (self.render_ty(a), self.render_ty(b));
                match self.rng.below(3) {
                    0 => format!("Pr {} {}", paren(ra), paren(rb)),
                    1 => format!("Flip Pr {} {}", paren(rb), paren(ra)),
                    _ => format!("{} * {rb}", paren(ra)),
                }
            }
        };
        match wrap {
            0 => format!("Idt {}", paren(plain)),
            1 => format!("Twice Idt {}", paren(plain)),
            _ => plain,
        }
    }

    fn fresh(&mut self) -> String {
        self.fresh += 1;
        format!("x{}", self.fresh)
    }

    fn leaf(&mut self, goal: &Ty) -> String {
        if self.poison {
            if let Ty::Param(i) = goal {
                self.poison = false;
                return if *i == 0 { "b".into() } else { "a".into() };
            }
        }
        match goal {
            Ty::Param(0) => "a".into(),
            Ty::Param(_) => "b".into(),
            Ty::Arr(a, b) => self.lambda(a, b, 0),
            Ty::Prod(a, b) => {
                let (x, y) = (self.leaf(a), self.leaf(b));
                format!("({x}, {y})")
            }
        }
    }

    fn lambda(&mut self, dom: &Ty, cod: &Ty, depth: usize) -> String {
        let x = self.fresh();
        self.locals.push((x.clone(), dom.clone()));
        let body = self.term(cod, depth);
        self.locals.pop();
        format!("\\{x}. {body}")
    }

    fn eliminate(&mut self, head: String, steps: &[Step], depth: usize) -> String {
        let mut out = head;
        for s in steps {
            out = match s {
                Step::Apply(ty) => {
                    let arg = self.term(ty, depth);
                    format!("{out} {}", paren(arg))
                }
                Step::Fst => format!("{}.1", paren(out)),
                Step::Snd => format!("{}.2", paren(out)),
            };
        }
        out
    }

    fn neutral(&mut self, goal: &Ty, depth: usize) -> Option<String> {
        let mut found: Vec<(String, Vec<Step>)> = Vec::new();
        for (name, ty) in &self.locals {
            let mut ps = Vec::new();
            paths(ty, goal, 3, &mut Vec::new(), &mut ps);
            found.extend(ps.into_iter().map(|p| (name.clone(), p)));
        }
        if !self.tops.is_empty() {
            let t = self.rng.below(self.tops.len());
            let choices = [Ty::Param(0), Ty::Param(1), goal.clone()];
            let args = [self.rng.pick(&choices).clone(), self.rng.pick(&choices).clone()];
            let inst = self.tops[t].instantiate(&args);
            if inst.size() < 40 {
                let mut ps = Vec::new();
                paths(&inst, goal, self.tops[t].params.len() + 2, &mut Vec::new(), &mut ps);
                if let Some(p) = ps.into_iter().last() {
                    let (ra, rb) = (self.render_ty(&args[0]), self.render_ty(&args[1]));
                    let head = format!("{} {} {}", self.tops[t].name, paren(ra), paren(rb));
                    found.push((head, p));
                }
            }
        }
        if found.is_empty() {
            return None;
        }
        // Prefer real eliminations over bare variables.
        let long: Vec<usize> = (0..found.len()).filter(|&i| !found[i].1.is_empty()).collect();
        let pick = if !long.is_empty() && self.rng.chance(80) {
            long[self.rng.below(long.len())]
        } else {
            self.rng.below(found.len())
        };
        let (head, path) = found.swap_remove(pick);
        Some(self.eliminate(head, &path, depth.saturating_sub(1)))
    }

    fn term(&mut self, goal: &Ty, depth: usize) -> String {
        if depth == 0 {
            return self.leaf(goal);
        }
        match self.rng.below(10) {
            0 => {
                let ty = self.random_ty(1);
                let rendered = self.render_ty(&ty);
                let bound = self.term(&ty, depth - 1);
                let x = self.fresh();
                self.locals.push((x.clone(), ty));
                let body = self.term(goal, depth - 1);
                self.locals.pop();
                format!("let {x} : {rendered} := {bound}; {body}")
            }
            1..=5 => match self.neutral(goal, depth) {
                Some(t) => t,
                None => self.intro(goal, depth),
            },
            _ => self.intro(goal, depth),
        }
    }

    fn intro(&mut self, goal: &Ty, depth: usize) -> String {
        match goal {
            Ty::Param(_) => self.leaf(goal),
            Ty::Arr(a, b) => self.lambda(a, b, depth - 1),
            Ty::Prod(a, b) => {
                let x = self.term(a, depth - 1);
                let y = self.term(b, depth - 1);
                format!("({x}, {y})")
            }
        }
    }

    fn decl(&mut self, index: usize) -> String {
        let extra = self.rng.below(3);
        let mut params = vec![Ty::Param(0), Ty::Param(1)];
        for _ in 0..extra {
            params.push(self.random_ty(2));
        }
        let result = self.random_ty(2);
        let mut ty = String::from("(A : U) -> (B : U)");
        let mut binders = String::from("\\A B a b");
        self.fresh = 0;
        for (i, p) in params.iter().enumerate() {
            let name = match i {
                0 => "a".to_string(),
                1 => "b".to_string(),
                _ => self.fresh(),
            };
            let rendered = self.render_ty(p);
            write!(ty, " -> ({name} : {rendered})").unwrap();
            if i >= 2 {
                write!(binders, " {name}").unwrap();
            }
            self.locals.push((name, p.clone()));
        }
        let rendered = self.render_ty(&result);
        write!(ty, " -> {rendered}").unwrap();
        let depth = 1 + self.rng.below(MAX_DEPTH);
        let body = self.term(&result, depth);
        self.locals.clear();
        let name = format!("f{index}");
        self.tops.push(TopSig { name: name.clone(), params, result });
        format!("def {name} : {ty} := {binders}. {body}")
    }
}

pub fn gen_eta_free_random(size: usize, seed: u64) -> String {
    let mut rng = Lcg::new(seed);
    let poisoned = if rng.chance(POISON_PERCENT) { Some(rng.below(size)) } else { None };
    let mut g = Gen { rng, tops: Vec::new(), locals: Vec::new(), fresh: 0, poison: false };
    let mut out = String::from(PRELUDE);
    for i in 0..size {
        g.poison = poisoned == Some(i);
        let d = g.decl(i);
        writeln!(out, "{d}").unwrap();
    }
    out
}
