//! Timed benchmark runs, CSV output and summary statistics.

use crate::benchgen::{GenError, SuiteSpec};
use crate::elab::{check_program_with, Backend, CheckOptions};
use crate::eval::UnfoldCounter;
use crate::parser::RawProgram;
use std::fmt;
use std::io;
use std::time::Instant;

/// Stack size for checker threads. Church numerals in the benchmark suites
/// nest a few hundred levels deep, which overflows default thread stacks in
/// unoptimized builds.
pub const CHECK_STACK_BYTES: usize = 1 << 30;

/// Runs `f` on a fresh thread with [`CHECK_STACK_BYTES`] of stack.
pub fn with_large_stack<T, F>(f: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(CHECK_STACK_BYTES)
            .spawn_scoped(s, f)
            .expect("failed to spawn checker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("verdict changed between trials for {backend} on {suite}/{size}: trial 1 {first}, trial {trial} {now}")]
    UnstableVerdict { suite: String, size: usize, backend: Backend, trial: usize, first: Verdict, now: Verdict },
    #[error("at least one trial is required")]
    NoTrials,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One timed check of one program by one backend.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub suite: String,
    pub size: usize,
    pub backend: Backend,
    /// 1-based.
    pub trial: usize,
    pub wall_ns: u64,
    pub unfolds: u64,
    pub verdict: Verdict,
}

pub const CSV_HEADER: [&str; 7] = ["suite", "size", "backend", "trial", "wall_ns", "unfolds", "verdict"];

pub fn write_csv<W: io::Write>(records: &[BenchRecord], out: W) -> Result<(), HarnessError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.suite.clone(),
            r.size.to_string(),
            r.backend.name().to_string(),
            r.trial.to_string(),
            r.wall_ns.to_string(),
            r.unfolds.to_string(),
            r.verdict.name().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub trials: usize,
    pub backends: Vec<Backend>,
    /// Untimed runs per backend before the recorded trials.
    pub warmup: usize,
    pub speculate: bool,
}

impl Default for BenchConfig {
    fn default() -> BenchConfig {
        BenchConfig { trials: 10, backends: Backend::ALL.to_vec(), warmup: 0, speculate: true }
    }
}

/// Checks `program` once; returns the verdict, elapsed nanoseconds, and
/// the unfold count. Only the check itself is inside the timed region.
pub fn time_check(program: &RawProgram, opts: CheckOptions) -> (Verdict, u64, u64) {
    let mut counter = UnfoldCounter::new();
    let start = Instant::now();
    let result = check_program_with(program, opts, &mut counter);
    let elapsed = start.elapsed();
    let verdict = if result.is_ok() { Verdict::Accept } else { Verdict::Reject };
    drop(result);
    (verdict, (elapsed.as_nanos() as u64).max(1), counter.get())
}

/// Runs every configured backend over an already parsed program.
pub fn run_bench(
    program: &RawProgram,
    suite: &str,
    size: usize,
    cfg: &BenchConfig,
) -> Result<Vec<BenchRecord>, HarnessError> {
    if cfg.trials == 0 {
        return Err(HarnessError::NoTrials);
    }
    let mut records = Vec::with_capacity(cfg.trials * cfg.backends.len());
    for &backend in &cfg.backends {
        let opts = CheckOptions::new(backend).speculate(cfg.speculate);
        for _ in 0..cfg.warmup {
            time_check(program, opts);
        }
        let mut first = None;
        for trial in 1..=cfg.trials {
            let (verdict, wall_ns, unfolds) = time_check(program, opts);
            match first {
                None => first = Some(verdict),
                Some(f) if f != verdict => {
                    return Err(HarnessError::UnstableVerdict {
                        suite: suite.to_string(),
                        size,
                        backend,
                        trial,
                        first: f,
                        now: verdict,
                    })
                }
                Some(_) => {}
            }
            records.push(BenchRecord { suite: suite.to_string(), size, backend, trial, wall_ns, unfolds, verdict });
        }
    }
    Ok(records)
}

/// Generates, parses and benchmarks a suite.
pub fn run_suite(spec: &SuiteSpec, cfg: &BenchConfig) -> Result<Vec<BenchRecord>, HarnessError> {
    let src = spec.generate();
    let program = crate::parser::parse_program(&src).expect("generated suites always parse");
    run_bench(&program, spec.family.name(), spec.size, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single observation.
    pub sd: f64,
}

impl Stats {
    pub fn of(xs: &[f64]) -> Option<Stats> {
        if xs.is_empty() {
            return None;
        }
        let n = xs.len();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 { (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt() } else { 0.0 };
        Some(Stats { n, mean, sd })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackendSummary {
    pub backend: Backend,
    pub wall_ns: Stats,
    /// Mean wall time divided by the syntactic mean, when one was measured.
    pub normalized_mean: Option<f64>,
    pub mean_unfolds: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub suite: String,
    pub size: usize,
    pub backends: Vec<BackendSummary>,
}

impl Summary {
    pub fn get(&self, backend: Backend) -> Option<&BackendSummary> {
        self.backends.iter().find(|b| b.backend == backend)
    }
}

/// Groups records by (suite, size) in order of first appearance.
pub fn summarize(records: &[BenchRecord]) -> Vec<Summary> {
    let mut keys: Vec<(String, usize)> = Vec::new();
    for r in records {
        if !keys.iter().any(|(s, n)| *s == r.suite && *n == r.size) {
            keys.push((r.suite.clone(), r.size));
        }
    }
    keys.into_iter()
        .map(|(suite, size)| {
            let group: Vec<&BenchRecord> = records.iter().filter(|r| r.suite == suite && r.size == size).collect();
            let mut backends: Vec<BackendSummary> = Vec::new();
            for backend in Backend::ALL {
                let rows: Vec<&&BenchRecord> = group.iter().filter(|r| r.backend == backend).collect();
                let times: Vec<f64> = rows.iter().map(|r| r.wall_ns as f64).collect();
                let Some(wall_ns) = Stats::of(&times) else { continue };
                let mean_unfolds = rows.iter().map(|r| r.unfolds as f64).sum::<f64>() / rows.len() as f64;
                backends.push(BackendSummary {
                    backend,
                    wall_ns,
                    normalized_mean: None,
                    mean_unfolds,
                    verdict: rows[0].verdict,
                });
            }
            let baseline = backends.iter().find(|b| b.backend == Backend::Syntactic).map(|b| b.wall_ns.mean);
            if let Some(base) = baseline {
                for b in &mut backends {
                    b.normalized_mean = Some(b.wall_ns.mean / base);
                }
            }
            Summary { suite, size, backends }
        })
        .collect()
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (size {})", self.suite, self.size)?;
        writeln!(
            f,
            "  {:<10} {:>7} {:>12} {:>12} {:>10} {:>12}  verdict",
            "backend", "trials", "mean ms", "sd ms", "normalized", "unfolds"
        )?;
        for b in &self.backends {
            let norm = b.normalized_mean.map_or("-".to_string(), |x| format!("{x:.3}"));
            writeln!(
                f,
                "  {:<10} {:>7} {:>12.3} {:>12.3} {:>10} {:>12.1}  {}",
                b.backend.name(),
                b.wall_ns.n,
                b.wall_ns.mean / 1e6,
                b.wall_ns.sd / 1e6,
                norm,
                b.mean_unfolds,
                b.verdict
            )?;
        }
        Ok(())
    }
}
