//! Church-numeral arithmetic checked against literals. Types stay small;
//! the work is normalizing the terms being compared.

use std::fmt::Write;

const PRELUDE: &str = "\
def Nat : U := (N : U) -> (N -> N) -> N -> N
def zero : Nat := \\N s z. z
def suc : Nat -> Nat := \\n N s z. s (n N s z)
def add : Nat -> Nat -> Nat := \\a b N s z. a N s (b N s z)
def mul : Nat -> Nat -> Nat := \\a b N s z. a N (b N s) z
def Eq : (A : U) -> A -> A -> U := \\A x y. (P : A -> U) -> P x -> P y
def refl : (A : U) -> (x : A) -> Eq A x x := \\A x P px. px
";

fn literal(n: usize) -> String {
    let mut body = "z".to_string();
    for _ in 0..n {
        body = format!("s ({body})");
    }
    format!("\\N s z. {body}")
}

fn unary(n: usize) -> String {
    let mut t = "zero".to_string();
    for _ in 0..n {
        t = format!("suc ({t})");
    }
    t
}

/// Operands of obligation `i`; results stay below a hundred.
fn operands(i: usize) -> (usize, usize) {
    (3 + i % 5, 2 + (i / 5) % 4)
}

pub fn gen_asymptotics(size: usize) -> String {
    let mut out = String::from(PRELUDE);
    for i in 0..size {
        let (a, b) = operands(i);
        let (lhs, value) = match i % 3 {
            0 => (format!("mul ({}) ({})", unary(a), unary(b)), a * b),
            1 => (format!("add (mul ({}) ({})) ({})", unary(a), unary(b), unary(a)), a * b + a),
            _ => (format!("mul (add ({}) ({})) ({})", unary(a), unary(b), unary(b)), (a + b) * b),
        };
        writeln!(out, "def lit{i} : Nat := {}", literal(value)).unwrap();
        writeln!(out, "def c{i} : Eq Nat ({lhs}) lit{i} := refl Nat lit{i}").unwrap();
    }
    out
}
