//! Monte Carlo approximation of referee-based fusion.
//!
//! Each sample runs the two-stage process: draw one focal proposition per
//! source, then draw an outcome from the referee's arbitrament of that
//! tuple. Rejected samples (outcome ∅) count toward N and are tallied
//! separately, so `ẑ = rejected / N` estimates the rejection rate and
//! `m̂(X) = count(X) / (N - rejected)` estimates the fused mass.
//!
//! Sampling is deterministic for a given `(seed, n, chunk_size)`: the run
//! is cut into fixed-size chunks, chunk `c` owns a generator derived from
//! `(seed, c)`, and integer tallies merge by addition, so the worker count
//! never changes the result.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::belief::Bba;
use crate::lattice::{Frame, Proposition};
use crate::referee::{Referee, RefereeError, SeparableReferee};

pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 16;
pub const DEFAULT_REJECTION_GUARD: u64 = 1_000_000;

/// Environment variable capping the number of sampling workers.
pub const THREADS_ENV_VAR: &str = "REFFUSE_THREADS";

#[derive(Debug, Error, PartialEq)]
pub enum SampleError {
    #[error("all {n} samples were rejected (z = 1)")]
    AllRejected { n: u64 },
    #[error("no sample accepted within the first {observed} draws")]
    RejectionGuardTripped { observed: u64 },
    #[error(transparent)]
    Referee(#[from] RefereeError),
}

/// Parameters of one sampling run.
///
/// `n` and `chunk_size` must be at least 1, and the rejection guard must be
/// at least 1; `estimate` asserts this. The guard aborts hopeless runs: when
/// the first `max_consecutive_rejections` samples are all rejected the run
/// stops instead of burning through the remaining budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleConfig {
    pub n: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub max_consecutive_rejections: u64,
}

impl SampleConfig {
    pub fn new(n: u64, seed: u64) -> SampleConfig {
        SampleConfig {
            n,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            max_consecutive_rejections: DEFAULT_REJECTION_GUARD,
        }
    }

    pub fn with_chunk_size(mut self, chunk_size: u64) -> SampleConfig {
        self.chunk_size = chunk_size;
        self
    }

    pub fn with_rejection_guard(mut self, limit: u64) -> SampleConfig {
        self.max_consecutive_rejections = limit;
        self
    }
}

/// The distribution-free standard error bound `√(m(1-m)/n)` for an
/// estimated mass `m` over `n` samples. The bound ignores rejections; see
/// [`FusionEstimate::stderr_accepted`] for the variant that does not.
pub fn stderr_bound(m_val: f64, n: u64) -> f64 {
    assert!((0.0..=1.0).contains(&m_val), "mass must lie in [0, 1]");
    assert!(n >= 1, "at least one sample is required");
    (m_val * (1.0 - m_val) / n as f64).sqrt()
}

/// Tallies from one sampling run. All derived quantities come from the raw
/// integer counts, so two estimates are equal exactly when their tallies
/// are.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionEstimate {
    frame: Frame,
    n: u64,
    rejected: u64,
    counts: BTreeMap<u64, u64>,
}

impl FusionEstimate {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn rejected(&self) -> u64 {
        self.rejected
    }

    pub fn accepted(&self) -> u64 {
        self.n - self.rejected
    }

    /// Estimated rejection rate, `rejected / n`.
    pub fn z_hat(&self) -> f64 {
        self.rejected as f64 / self.n as f64
    }

    pub fn count(&self, prop: &Proposition) -> u64 {
        debug_assert!(*prop.frame() == self.frame);
        self.counts.get(&prop.bits()).copied().unwrap_or(0)
    }

    /// Raw tallies of accepted outcomes in increasing bitmask order.
    pub fn counts(&self) -> impl Iterator<Item = (Proposition, u64)> + '_ {
        self.counts
            .iter()
            .map(|(&bits, &c)| (self.frame.proposition_from_bits(bits), c))
    }

    /// Estimated mass, `count(X) / (n - rejected)`.
    pub fn m_hat(&self, prop: &Proposition) -> f64 {
        self.count(prop) as f64 / self.accepted() as f64
    }

    pub fn m_hat_map(&self) -> BTreeMap<Proposition, f64> {
        self.counts()
            .map(|(prop, c)| (prop, c as f64 / self.accepted() as f64))
            .collect()
    }

    /// Standard error bound `√(m̂(1-m̂)/n)` for one component.
    pub fn stderr(&self, prop: &Proposition) -> f64 {
        stderr_bound(self.m_hat(prop), self.n)
    }

    pub fn stderr_map(&self) -> BTreeMap<Proposition, f64> {
        self.counts()
            .map(|(prop, _)| {
                let se = self.stderr(&prop);
                (prop, se)
            })
            .collect()
    }

    /// Standard error over accepted samples only, `√(m̂(1-m̂)/(n(1-ẑ)))`.
    ///
    /// The bound reported by [`stderr`](Self::stderr) treats all `n` samples
    /// as informative, which overstates precision when some are rejected;
    /// this variant divides by the accepted count instead. It is a
    /// heuristic, not a sharp bound.
    pub fn stderr_accepted(&self, prop: &Proposition) -> f64 {
        stderr_bound(self.m_hat(prop), self.accepted())
    }
}

fn validate(sources: &[Bba], referee: &Referee) -> Result<Frame, RefereeError> {
    let first = sources.first().ok_or(RefereeError::NoSources)?;
    let frame = first.frame().clone();
    if sources.iter().any(|m| *m.frame() != frame) {
        return Err(RefereeError::FrameMismatch);
    }
    if let Some(expected) = referee.arity() {
        if expected != sources.len() {
            return Err(RefereeError::ArityMismatch {
                expected,
                got: sources.len(),
            });
        }
    }
    Ok(frame)
}

fn draw_branch_index<R: Rng + ?Sized>(sep: &SeparableReferee, rng: &mut R) -> usize {
    let branches = sep.branches();
    if branches.len() == 1 {
        return 0;
    }
    let u: f64 = rng.gen();
    let mut cumulative = 0.0;
    for (i, branch) in branches.iter().enumerate() {
        cumulative += branch.weight();
        if u < cumulative {
            return i;
        }
    }
    branches.len() - 1
}

/// One two-stage draw, as outcome bits (0 means rejected). With
/// `use_separable` a mixture referee is sampled branch-first: draw a branch
/// by its weight, then sample only the sources that branch reads.
fn draw_fused_bits<R: Rng + ?Sized>(
    sources: &[Bba],
    referee: &Referee,
    use_separable: bool,
    rng: &mut R,
) -> u64 {
    if use_separable {
        if let Some(sep) = referee.separable() {
            let branch = &sep.branches()[draw_branch_index(sep, rng)];
            let sub_sources: Vec<Bba> = branch
                .sources()
                .iter()
                .map(|&i| sources[i].clone())
                .collect();
            return draw_fused_bits(&sub_sources, branch.referee(), true, rng);
        }
    }
    let entries: Vec<Proposition> = sources
        .iter()
        .map(|m| {
            let bits = m.draw_bits(rng);
            m.frame().proposition_from_bits(bits)
        })
        .collect();
    referee.eval(&entries, sources).draw_bits(rng)
}

/// Runs the two-stage process once: draw one focal proposition per source,
/// then an outcome from the referee's arbitrament. `None` means the sample
/// was rejected. Panics when the sources are empty, disagree on the frame,
/// or do not match the referee arity.
pub fn sample_once<R: Rng + ?Sized>(
    sources: &[Bba],
    referee: &Referee,
    rng: &mut R,
) -> Option<Proposition> {
    let frame = validate(sources, referee).expect("sample_once requires valid sources");
    let bits = draw_fused_bits(sources, referee, true, rng);
    if bits == 0 {
        None
    } else {
        Some(frame.proposition_from_bits(bits))
    }
}

struct Tally {
    counts: BTreeMap<u64, u64>,
    rejected: u64,
}

impl Tally {
    fn new() -> Tally {
        Tally {
            counts: BTreeMap::new(),
            rejected: 0,
        }
    }

    fn absorb(&mut self, other: Tally) {
        self.rejected += other.rejected;
        for (bits, c) in other.counts {
            *self.counts.entry(bits).or_insert(0) += c;
        }
    }

    fn accepted_any(&self) -> bool {
        !self.counts.is_empty()
    }
}

/// Runs the chunks in `[first_chunk, last_chunk)` over up to `workers`
/// threads. Chunk `c` covers samples `[c * chunk_size, ...)` clipped to `n`
/// and seeds its own generator from `(seed, c)`, so the split across
/// workers cannot affect the tallies.
fn run_chunks(
    sources: &[Bba],
    referee: &Referee,
    cfg: &SampleConfig,
    use_separable: bool,
    first_chunk: u64,
    last_chunk: u64,
    workers: usize,
) -> Tally {
    let span = last_chunk.saturating_sub(first_chunk);
    if span == 0 {
        return Tally::new();
    }
    let workers = workers
        .max(1)
        .min(usize::try_from(span).unwrap_or(usize::MAX));
    let run_worker = |offset: u64| {
        let mut tally = Tally::new();
        let mut c = first_chunk + offset;
        while c < last_chunk {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c);
            let lo = c * cfg.chunk_size;
            let hi = (lo + cfg.chunk_size).min(cfg.n);
            for _ in lo..hi {
                let bits = draw_fused_bits(sources, referee, use_separable, &mut rng);
                if bits == 0 {
                    tally.rejected += 1;
                } else {
                    *tally.counts.entry(bits).or_insert(0) += 1;
                }
            }
            c += workers as u64;
        }
        tally
    };
    if workers == 1 {
        return run_worker(0);
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|offset| scope.spawn(move || run_worker(offset)))
            .collect();
        let mut merged = Tally::new();
        for handle in handles {
            merged.absorb(handle.join().expect("sampling worker panicked"));
        }
        merged
    })
}

fn env_thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV_VAR)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v >= 1)
}

fn default_workers() -> usize {
    let available = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    match env_thread_cap() {
        Some(cap) => available.min(cap),
        None => available,
    }
}

fn estimate_impl(
    sources: &[Bba],
    referee: &Referee,
    cfg: &SampleConfig,
    workers: usize,
    use_separable: bool,
) -> Result<FusionEstimate, SampleError> {
    assert!(cfg.n >= 1, "at least one sample is required");
    assert!(cfg.chunk_size >= 1, "chunks must hold at least one sample");
    assert!(
        cfg.max_consecutive_rejections >= 1,
        "the rejection guard must allow at least one draw"
    );
    let frame = validate(sources, referee)?;
    let chunk_count = cfg.n.div_ceil(cfg.chunk_size);
    let guard_chunks = if cfg.n > cfg.max_consecutive_rejections {
        cfg.max_consecutive_rejections
            .div_ceil(cfg.chunk_size)
            .min(chunk_count)
    } else {
        chunk_count
    };
    let mut tally = run_chunks(
        sources,
        referee,
        cfg,
        use_separable,
        0,
        guard_chunks,
        workers,
    );
    if !tally.accepted_any() {
        let covered = (guard_chunks.saturating_mul(cfg.chunk_size)).min(cfg.n);
        if covered == cfg.n {
            return Err(SampleError::AllRejected { n: cfg.n });
        }
        return Err(SampleError::RejectionGuardTripped { observed: covered });
    }
    tally.absorb(run_chunks(
        sources,
        referee,
        cfg,
        use_separable,
        guard_chunks,
        chunk_count,
        workers,
    ));
    Ok(FusionEstimate {
        frame,
        n: cfg.n,
        rejected: tally.rejected,
        counts: tally.counts,
    })
}

/// Runs `cfg.n` samples with the default worker count (all available cores,
/// capped by the `REFFUSE_THREADS` environment variable when set).
pub fn estimate(
    sources: &[Bba],
    referee: &Referee,
    cfg: &SampleConfig,
) -> Result<FusionEstimate, SampleError> {
    estimate_impl(sources, referee, cfg, default_workers(), true)
}

/// Like [`estimate`] with an explicit worker count. The tallies depend only
/// on `(seed, n, chunk_size)`, never on the worker count.
pub fn estimate_with_workers(
    sources: &[Bba],
    referee: &Referee,
    cfg: &SampleConfig,
    workers: usize,
) -> Result<FusionEstimate, SampleError> {
    assert!(workers >= 1, "at least one worker is required");
    estimate_impl(sources, referee, cfg, workers, true)
}

#[cfg(test)]
pub(crate) fn estimate_plain(
    sources: &[Bba],
    referee: &Referee,
    cfg: &SampleConfig,
) -> Result<FusionEstimate, SampleError> {
    estimate_impl(sources, referee, cfg, 1, false)
}

pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One estimate per `N = 10^e`, each run under its own sub-seed mixed from
/// `(seed, position)`. Exponents must be at least 1 and small enough for
/// `10^e` to fit a `u64`.
pub fn convergence_series(
    sources: &[Bba],
    referee: &Referee,
    exponents: &[u32],
    seed: u64,
) -> Result<Vec<FusionEstimate>, SampleError> {
    let mut series = Vec::with_capacity(exponents.len());
    for (i, &exponent) in exponents.iter().enumerate() {
        assert!(exponent >= 1, "exponents must be at least 1");
        let n = 10u64
            .checked_pow(exponent)
            .expect("sample count 10^e must fit a u64");
        let cfg = SampleConfig {
            seed: mix_seed(seed, i as u64),
            ..SampleConfig::new(n, seed)
        };
        series.push(estimate(sources, referee, &cfg)?);
    }
    Ok(series)
}
