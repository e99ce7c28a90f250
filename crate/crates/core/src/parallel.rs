//! Deterministic data-parallel helpers.
//!
//! Kernels split their index range into fixed chunks, workers reduce each
//! chunk in order with compensated summation, and the per-chunk partials are
//! merged sequentially in chunk order. Results are therefore bit-identical
//! for every worker count, which is what the reproducibility suite checks.

use std::sync::atomic::{AtomicUsize, Ordering};

static WORKER_CAP: AtomicUsize = AtomicUsize::new(0);

/// Caps the number of worker threads. 0 restores the default
/// (`GOWERS_LAB_THREADS` or the machine parallelism).
pub fn set_worker_cap(n: usize) {
    WORKER_CAP.store(n, Ordering::SeqCst);
}

pub fn worker_count() -> usize {
    let cap = WORKER_CAP.load(Ordering::SeqCst);
    if cap > 0 {
        return cap;
    }
    if let Ok(v) = std::env::var("GOWERS_LAB_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                return n;
            }
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Kahan–Babuska compensated accumulator.
#[derive(Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Applies `work` to every index chunk of `0..len` and merges the chunk
/// results in chunk order. `work` must be a pure function of its chunk.
pub fn map_reduce_chunks<R, W, M>(len: usize, work: W, mut merge: M)
where
    R: Send,
    W: Fn(std::ops::Range<usize>) -> R + Sync,
    M: FnMut(R),
{
    if len == 0 {
        return;
    }
    let workers = worker_count().min(len).max(1);
    // Chunk geometry is a function of len alone, never of the worker
    // count, so the merge order (and thus every rounding) is fixed.
    let chunk = len.div_ceil(64).max(1024).min(len);
    let ranges: Vec<std::ops::Range<usize>> = (0..len)
        .step_by(chunk)
        .map(|start| start..(start + chunk).min(len))
        .collect();
    if workers == 1 || ranges.len() == 1 {
        for r in ranges {
            merge(work(r));
        }
        return;
    }
    let results: Vec<Option<R>> = {
        let mut slots: Vec<Option<R>> = (0..ranges.len()).map(|_| None).collect();
        let next = AtomicUsize::new(0);
        let slot_ptr = std::sync::Mutex::new(&mut slots);
        std::thread::scope(|scope| {
            for _ in 0..workers.min(ranges.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= ranges.len() {
                        break;
                    }
                    let out = work(ranges[i].clone());
                    let mut guard = slot_ptr.lock().unwrap();
                    guard[i] = Some(out);
                });
            }
        });
        slots
    };
    for r in results {
        merge(r.expect("all chunks completed"));
    }
}
