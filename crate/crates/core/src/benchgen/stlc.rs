//! Church-encoded syntax of the simply typed λ-calculus, followed by object
//! terms whose types are spelled through layers of top-level abbreviations.

use std::fmt::Write;

const PRELUDE: &str = "\
def Ty : U := (T : U) -> T -> (T -> T -> T) -> T
def base : Ty := \\T b a. b
def arr : Ty -> Ty -> Ty := \\A B T b a. a (A T b a) (B T b a)
def Con : U := (C : U) -> C -> (C -> Ty -> C) -> C
def nil : Con := \\C n e. n
def ext : Con -> Ty -> Con := \\G A C n e. e (G C n e) A
def Var : Con -> Ty -> U := \\G A. (V : Con -> Ty -> U)
  -> ((G : Con) -> (A : Ty) -> V (ext G A) A)
  -> ((G : Con) -> (A : Ty) -> (B : Ty) -> V G A -> V (ext G B) A)
  -> V G A
def vz : (G : Con) -> (A : Ty) -> Var (ext G A) A := \\G A V z s. z G A
def vs : (G : Con) -> (A : Ty) -> (B : Ty) -> Var G A -> Var (ext G B) A := \\G A B x V z s. s G A B (x V z s)
def Tm : Con -> Ty -> U := \\G A. (T : Con -> Ty -> U)
  -> ((G : Con) -> (A : Ty) -> Var G A -> T G A)
  -> ((G : Con) -> (A : Ty) -> (B : Ty) -> T (ext G A) B -> T G (arr A B))
  -> ((G : Con) -> (A : Ty) -> (B : Ty) -> T G (arr A B) -> T G A -> T G B)
  -> T G A
def var : (G : Con) -> (A : Ty) -> Var G A -> Tm G A := \\G A x T v l a. v G A x
def lam : (G : Con) -> (A : Ty) -> (B : Ty) -> Tm (ext G A) B -> Tm G (arr A B)
  := \\G A B t T v l a. l G A B (t T v l a)
def app : (G : Con) -> (A : Ty) -> (B : Ty) -> Tm G (arr A B) -> Tm G A -> Tm G B
  := \\G A B t u T v l a. a G A B (t T v l a) (u T v l a)
def endo : Ty -> Ty := \\A. arr A A
def nat : Ty -> Ty := \\A. arr (endo A) (endo A)
def scope : Con -> Ty -> Con := \\G A. ext (ext G (endo A)) A
def vf : (G : Con) -> (A : Ty) -> Tm (scope G A) (endo A)
  := \\G A. var (scope G A) (arr A A) (vs (ext G (arr A A)) (arr A A) A (vz G (arr A A)))
def vx : (G : Con) -> (A : Ty) -> Tm (scope G A) A := \\G A. var (ext (ext G (endo A)) A) A (vz (ext G (endo A)) A)
def step : (G : Con) -> (A : Ty) -> Tm (scope G A) A -> Tm (scope G A) A
  := \\G A t. app (ext (ext G (arr A A)) A) A A (vf G A) t
def church : (G : Con) -> (A : Ty) -> Tm (scope G A) A -> Tm G (nat A)
  := \\G A t. lam G (arr A A) (arr A A) (lam (ext G (endo A)) A A t)
def ty0 : Ty := nat base
def ty1 : Ty := nat (endo base)
def ty2 : Ty := endo (nat ty0)
def ty3 : Ty := nat (arr ty0 ty1)
def ctx0 : Con := ext nil ty2
def ctx1 : Con := scope ctx0 ty3
";

const TYPES: [&str; 4] = ["ty0", "ty1", "ty2", "ty3"];
const CONTEXTS: [&str; 3] = ["nil", "ctx0", "ctx1"];
/// Number of `step` applications cycles through `1..=MAX_STEPS`.
const MAX_STEPS: usize = 12;

pub fn gen_stlc(size: usize) -> String {
    let mut out = String::from(PRELUDE);
    for i in 0..size {
        let ty = TYPES[i % TYPES.len()];
        let cx = CONTEXTS[(i / TYPES.len()) % CONTEXTS.len()];
        let steps = 1 + i % MAX_STEPS;
        let mut body = format!("vx {cx} {ty}");
        for _ in 0..steps {
            body = format!("step {cx} {ty} ({body})");
        }
        writeln!(out, "def t{i} : Tm {cx} (nat {ty}) := church {cx} {ty} ({body})").unwrap();
    }
    out
}
