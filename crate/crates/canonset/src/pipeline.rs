//! Highly irregular graphs, one shard per candidate degree sequence.
//!
//! Each shard decides whether its sequence is realizable, computes and
//! reduces an instance-dependent canonizing set for it, and enumerates the
//! canonical solutions. Shards run on a pool of worker threads, each with
//! its own oracles; a single aggregator collects the results in candidate
//! order, so totals do not depend on the worker count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::time::Instant;

use canonset_core::canonize::{compute_canonizing_set, enumerate_graphs, reduce, Breaking, Mode, PermSet, Provenance};
use canonset_core::problems::{filter_realizable_degseqs, gen_hi_degseq_candidates, DegreeSequence, Predicate, Realizability};
use canonset_core::GraphAssignment;

use crate::error::Result;
use crate::report::ShardReport;
use crate::solver::{Backend, Deadline};

#[derive(Debug, Clone)]
pub struct HiConfig {
    pub n: usize,
    pub workers: usize,
    pub backend: Backend,
    pub deadline: Deadline,
    pub reduce: bool,
    /// Keep the enumerated graphs, not just their number.
    pub keep_graphs: bool,
}

#[derive(Debug, Clone)]
pub struct Shard {
    pub sequence: DegreeSequence,
    pub realizability: Realizability,
    pub permutations: usize,
    pub removed: usize,
    pub solutions: usize,
    pub graphs: Vec<GraphAssignment>,
    pub complete: bool,
    pub seconds: f64,
}

impl Shard {
    pub fn report(&self) -> ShardReport {
        ShardReport {
            degree_sequence: self.sequence.to_string(),
            realizable: match self.realizability {
                Realizability::Realizable => "realizable",
                Realizability::NotRealizable => "not-realizable",
                Realizability::Unknown => "unknown",
            }
            .into(),
            permutations: self.permutations,
            removed: self.removed,
            solutions: self.solutions,
            seconds: self.seconds,
            complete: self.complete,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HiOutcome {
    /// One shard per candidate, in decreasing lexicographic order.
    pub shards: Vec<Shard>,
}

impl HiOutcome {
    pub fn total(&self) -> usize {
        self.shards.iter().map(|s| s.solutions).sum()
    }

    pub fn realizable(&self) -> usize {
        self.shards
            .iter()
            .filter(|s| s.realizability == Realizability::Realizable)
            .count()
    }

    /// False when some shard ran out of time; the total is then a lower
    /// bound.
    pub fn complete(&self) -> bool {
        self.shards.iter().all(|s| s.complete)
    }
}

fn run_shard(sequence: DegreeSequence, cfg: &HiConfig) -> Result<Shard> {
    let start = Instant::now();
    let n = sequence.len();
    let first = cfg.backend.oracle(cfg.deadline)?;
    let mut once = Some(first);
    let realizability = filter_realizable_degseqs(std::slice::from_ref(&sequence), || {
        once.take().expect("one candidate")
    })?[0]
        .1;
    let mut shard = Shard {
        sequence: sequence.clone(),
        realizability,
        permutations: 0,
        removed: 0,
        solutions: 0,
        graphs: Vec::new(),
        complete: realizability != Realizability::Unknown,
        seconds: 0.0,
    };
    if realizability == Realizability::Realizable {
        let phi = Predicate::HighlyIrregular(sequence);
        let init = PermSet::new(n, Provenance::InstanceIndependent);
        let computed = compute_canonizing_set(cfg.backend.oracle(cfg.deadline)?, &init, &phi, Mode::Dependent)?;
        let mut set = computed.set;
        if cfg.reduce && set.is_complete() {
            let r = reduce(cfg.backend.oracle(cfg.deadline)?, &set, &phi)?;
            shard.removed = r.removed.len();
            set = r.set;
        }
        shard.permutations = set.len();
        let keep = cfg.keep_graphs;
        let graphs = &mut shard.graphs;
        let e = enumerate_graphs(
            cfg.backend.oracle(cfg.deadline)?,
            n,
            &phi,
            Breaking::Perms(set.entries()),
            None,
            |g| {
                if keep {
                    graphs.push(g)
                }
            },
        )?;
        shard.solutions = e.count;
        shard.complete = set.is_complete() && e.is_complete();
    }
    shard.seconds = start.elapsed().as_secs_f64();
    Ok(shard)
}

/// Runs every shard for order `n` on `cfg.workers` threads.
pub fn run_hi_pipeline(cfg: &HiConfig) -> Result<HiOutcome> {
    let candidates = gen_hi_degseq_candidates(cfg.n);
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel();
    let workers = cfg.workers.max(1).min(candidates.len().max(1));
    let mut slots: Vec<Option<Result<Shard>>> = (0..candidates.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            let tx = tx.clone();
            let (next, candidates) = (&next, &candidates);
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(seq) = candidates.get(i) else { break };
                if tx.send((i, run_shard(seq.clone(), cfg))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        for (i, r) in rx {
            slots[i] = Some(r);
        }
    });
    let mut shards = Vec::with_capacity(slots.len());
    for slot in slots {
        shards.push(slot.expect("every shard reports")?);
    }
    Ok(HiOutcome { shards })
}
