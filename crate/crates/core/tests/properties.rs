mod support;

use etabench::benchgen::{gen_asymptotics, gen_eta, gen_eta_free_random, gen_stlc};
use etabench::conv::{syntactic, typed};
use etabench::elab::{check_program, pretty_program, Backend};
use etabench::eval::{eval, force, normalize, quote, v_fst, v_snd, Env, Tops, Unfold, UnfoldCounter, Value};
use etabench::parser::parse_program;
use etabench::syntax::{shift_check, Lvl};
use proptest::prelude::*;
use std::sync::Arc;
use support::oracle::Oracle;
use support::with_large_stack;

fn checked(src: &str, backend: Backend) -> Option<Tops> {
    check_program(&parse_program(src).unwrap(), backend).ok()
}

fn random_tops(seed: u64, size: usize) -> Option<Tops> {
    checked(&gen_eta_free_random(size, seed), Backend::Typed)
}

fn assert_round_trip(tops: &Tops, backend: Backend) {
    let printed = pretty_program(tops);
    let again = checked(&printed, backend).unwrap_or_else(|| panic!("reprint does not check:\n{printed}"));
    for (a, b) in tops.entries().iter().zip(again.entries()) {
        assert_eq!(a.ty_term, b.ty_term, "{}", a.id.name);
        assert_eq!(a.body_term, b.body_term, "{}", a.id.name);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), size in 1usize..8) {
        prop_assert_eq!(gen_eta_free_random(size, seed), gen_eta_free_random(size, seed));
    }

    #[test]
    fn generated_programs_parse(seed in any::<u64>(), size in 1usize..8) {
        prop_assert!(parse_program(&gen_eta_free_random(size, seed)).is_ok());
    }

    #[test]
    fn backends_agree(seed in any::<u64>(), size in 1usize..8) {
        let src = gen_eta_free_random(size, seed);
        let (s, t) = with_large_stack(|| (checked(&src, Backend::Syntactic).is_some(), checked(&src, Backend::Typed).is_some()));
        prop_assert_eq!(s, t);
    }

    #[test]
    fn pretty_round_trips(seed in any::<u64>(), size in 1usize..6) {
        if let Some(tops) = random_tops(seed, size) {
            assert_round_trip(&tops, Backend::Typed);
        }
    }

    #[test]
    fn elaborated_terms_are_well_scoped(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            for e in tops.entries() {
                prop_assert!(shift_check(&e.ty_term, 0) && shift_check(&e.body_term, 0));
            }
        }
    }

    #[test]
    fn normal_forms_match_oracle(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            for e in tops.entries() {
                let t = &e.body_term;
                let n = normalize(&tops, t);
                prop_assert_eq!(&n, &Oracle::new(&tops).normalize(t));
                prop_assert_eq!(&normalize(&tops, &n), &n);
            }
        }
    }

    #[test]
    fn conversion_is_reflexive(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            for e in tops.entries() {
                let v = eval(&Env::new(), &e.body_term, &tops);
                let mut c = UnfoldCounter::new();
                prop_assert!(syntactic::unify(&tops, Lvl(0), &v, &v, &mut c, true).is_ok());
                let mut cx = typed::ConvCxt::new(&tops, Vec::new());
                prop_assert!(typed::unify_chk(&mut cx, &v, &v, &e.ty, &mut c).is_ok());
            }
        }
    }

    #[test]
    fn conversion_is_symmetric(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            let tys: Vec<&Value> = tops.entries().iter().map(|e| &e.ty).collect();
            for a in &tys {
                for b in &tys {
                    let mut c = UnfoldCounter::new();
                    let ab = syntactic::unify(&tops, Lvl(0), a, b, &mut c, true).is_ok();
                    let ba = syntactic::unify(&tops, Lvl(0), b, a, &mut c, true).is_ok();
                    prop_assert_eq!(ab, ba);
                    let mut cx = typed::ConvCxt::new(&tops, Vec::new());
                    let ab_t = typed::unify_chk(&mut cx, a, b, &Value::Univ, &mut c).is_ok();
                    let ba_t = typed::unify_chk(&mut cx, b, a, &Value::Univ, &mut c).is_ok();
                    prop_assert_eq!(ab_t, ba_t);
                    prop_assert_eq!(ab, ab_t);
                }
            }
        }
    }

    #[test]
    fn speculation_never_changes_verdicts(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            let tys: Vec<&Value> = tops.entries().iter().map(|e| &e.ty).collect();
            for a in &tys {
                for b in &tys {
                    let mut c = UnfoldCounter::new();
                    let fast = syntactic::unify(&tops, Lvl(0), a, b, &mut c, true).is_ok();
                    let slow = syntactic::unify(&tops, Lvl(0), a, b, &mut c, false).is_ok();
                    prop_assert_eq!(fast, slow);
                }
            }
        }
    }

    #[test]
    fn glue_is_coherent(seed in any::<u64>()) {
        if let Some(tops) = random_tops(seed, 5) {
            for e in tops.entries() {
                let r = e.reference();
                let mut c = UnfoldCounter::new();
                let forced = force(&tops, &r, &mut c);
                prop_assert!(forced.top_head().is_none());
                prop_assert_eq!(quote(&tops, Lvl(0), &r, Unfold::All), quote(&tops, Lvl(0), &forced, Unfold::All));
            }
        }
    }
}

#[test]
fn fixed_suites_round_trip() {
    with_large_stack(|| {
        for src in [gen_stlc(8), gen_asymptotics(3), gen_eta(4)] {
            let tops = checked(&src, Backend::Typed).unwrap();
            assert_round_trip(&tops, Backend::Typed);
        }
    })
}

/// Neutral values of Unit type at a given level.
fn unit_neutrals() -> impl Strategy<Value = (usize, usize, usize)> {
    (2usize..6).prop_flat_map(|n| (Just(n), 0..n, 0..n))
}

proptest! {
    #[test]
    fn unit_values_are_all_equal((n, i, j) in unit_neutrals()) {
        let tops = Tops::new();
        let mut cx = typed::ConvCxt::new(&tops, vec![Value::UnitType; n]);
        let mut c = UnfoldCounter::new();
        let (x, y) = (Value::local(Lvl(i)), Value::local(Lvl(j)));
        prop_assert!(typed::unify_chk(&mut cx, &x, &y, &Value::UnitType, &mut c).is_ok());
        prop_assert!(typed::unify_chk(&mut cx, &x, &Value::UnitVal, &Value::UnitType, &mut c).is_ok());
        prop_assert_eq!(syntactic::unify(&tops, Lvl(n), &x, &y, &mut c, true).is_ok(), i == j);
    }

    #[test]
    fn pairs_are_surjective(depth in 0usize..4) {
        // p : Unit * Unit, compared against (p.1, p.2) and nested re-pairings.
        let tops = Tops::new();
        let sigma = eval(&Env::new(), &etabench::Term::sigma("_", etabench::Term::UnitType, etabench::Term::UnitType), &tops);
        let mut cx = typed::ConvCxt::new(&tops, vec![sigma.clone()]);
        let p = Value::local(Lvl(0));
        let mut q = p.clone();
        for _ in 0..=depth {
            q = Value::Pair(Arc::new(v_fst(&tops, &q)), Arc::new(v_snd(&tops, &q)));
        }
        let mut c = UnfoldCounter::new();
        prop_assert!(typed::unify_chk(&mut cx, &p, &q, &sigma, &mut c).is_ok());
        prop_assert!(typed::unify_chk(&mut cx, &q, &p, &sigma, &mut c).is_ok());
        prop_assert!(syntactic::unify(&tops, Lvl(1), &p, &q, &mut c, true).is_err());
    }
}
