//! Programs that only check when conversion knows Unit-η and Σ-η.

use std::fmt::Write;

const PRELUDE: &str = "\
def Eq : (A : U) -> A -> A -> U := \\A x y. (P : A -> U) -> P x -> P y
";

pub fn gen_eta(size: usize) -> String {
    let mut out = String::from(PRELUDE);
    for i in 0..size {
        let name = if i == 0 { "uc".to_string() } else { format!("uc{i}") };
        let decl = match i % 4 {
            0 => format!("def {name} : (x : Unit) -> (y : Unit) -> Eq Unit x y := \\x y P px. px"),
            1 => format!("def {name} : (A : U) -> (f : Unit -> A) -> Eq (Unit -> A) f (\\u. f tt) := \\A f P pf. pf"),
            2 => format!(
                "def {name} : (A : U) -> (B : A -> U) -> (p : (x : A) * B x) -> Eq ((x : A) * B x) p (p.1, p.2) \
                 := \\A B p P pp. pp"
            ),
            _ => format!("def {name} : (p : Unit * Unit) -> Eq (Unit * Unit) p (tt, tt) := \\p P pp. pp"),
        };
        writeln!(out, "{decl}").unwrap();
    }
    out
}
