//! Deterministic source generators for the benchmark suites.
//!
//! Every generator is a pure function of its [`SuiteSpec`]; the random
//! family draws from [`Lcg`], whose recurrence is fixed here so corpora can
//! be reproduced by any implementation:
//!
//! ```text
//! state' = state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! output = state' >> 33                                         (31 bits)
//! ```
//!
//! The generator is seeded with `state = seed`, and `below(n)` is
//! `output % n`.

mod asymptotics;
mod eta;
mod random;
mod stlc;

use std::fmt;
use std::str::FromStr;

pub use asymptotics::gen_asymptotics;
pub use eta::gen_eta;
pub use random::gen_eta_free_random;
pub use stlc::gen_stlc;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GenError {
    #[error("suite size must be at least 1")]
    ZeroSize,
    #[error("unknown suite `{0}` (expected stlc, asymptotics, eta or etafree-random)")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Stlc,
    Asymptotics,
    Eta,
    EtaFreeRandom,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Stlc, Family::Asymptotics, Family::Eta, Family::EtaFreeRandom];

    pub fn name(self) -> &'static str {
        match self {
            Family::Stlc => "stlc",
            Family::Asymptotics => "asymptotics",
            Family::Eta => "eta",
            Family::EtaFreeRandom => "etafree-random",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Family, GenError> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| GenError::UnknownFamily(s.to_string()))
    }
}

/// A fully determined suite: the same spec always yields the same bytes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteSpec {
    pub family: Family,
    pub size: usize,
    /// Only consulted by [`Family::EtaFreeRandom`].
    pub seed: u64,
}

impl SuiteSpec {
    pub fn new(family: Family, size: usize, seed: u64) -> Result<SuiteSpec, GenError> {
        if size == 0 {
            return Err(GenError::ZeroSize);
        }
        Ok(SuiteSpec { family, size, seed })
    }

    pub fn generate(&self) -> String {
        match self.family {
            Family::Stlc => gen_stlc(self.size),
            Family::Asymptotics => gen_asymptotics(self.size),
            Family::Eta => gen_eta(self.size),
            Family::EtaFreeRandom => gen_eta_free_random(self.size, self.seed),
        }
    }
}

/// 64-bit linear congruential generator (Knuth's MMIX constants).
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Lcg {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (self.state >> 33) as u32
    }

    /// Uniform-ish draw from `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        self.next_u32() as usize % n
    }

    /// True with probability `percent / 100`.
    pub fn chance(&mut self, percent: usize) -> bool {
        self.below(100) < percent
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len())]
    }
}
