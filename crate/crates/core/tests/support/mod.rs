//! Shared helpers for integration tests: an independent normalizer and the
//! program corpora the property checks run over.
#![allow(dead_code)]

pub mod oracle;

use etabench::benchgen::{gen_asymptotics, gen_eta, gen_eta_free_random, gen_stlc};
use etabench::elab::{check_program, Backend};
use etabench::eval::Tops;
use etabench::parser::parse_program;
use etabench::Term;
use std::rc::Rc;

pub use etabench::harness::with_large_stack;

/// Seeds and size of the differential corpus.
pub const RANDOM_SEEDS: std::ops::Range<u64> = 0..200;
pub const RANDOM_SIZE: usize = 6;

pub fn random_corpus() -> Vec<(u64, String)> {
    RANDOM_SEEDS.map(|s| (s, gen_eta_free_random(RANDOM_SIZE, s))).collect()
}

/// Every generated program family, small enough to check quickly.
pub fn full_corpus() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> =
        random_corpus().into_iter().map(|(s, src)| (format!("etafree-random seed {s}"), src)).collect();
    for k in [1, 5, 20] {
        out.push((format!("eta {k}"), gen_eta(k)));
    }
    for k in [1, 10] {
        out.push((format!("stlc {k}"), gen_stlc(k)));
        out.push((format!("asymptotics {k}"), gen_asymptotics(k)));
    }
    out
}

/// Closed, well-typed definition bodies from accepted random programs,
/// paired with the checked program they live in.
pub fn closed_terms(count: usize) -> Vec<(Rc<Tops>, Term)> {
    let mut out = Vec::new();
    for (_, src) in random_corpus() {
        let p = parse_program(&src).unwrap();
        let Ok(tops) = check_program(&p, Backend::Typed) else { continue };
        let tops = Rc::new(tops);
        let bodies: Vec<Term> =
            tops.entries().iter().filter(|e| e.id.name.starts_with('f')).map(|e| e.body_term.clone()).collect();
        for b in bodies {
            if out.len() == count {
                return out;
            }
            out.push((tops.clone(), b));
        }
    }
    out
}
