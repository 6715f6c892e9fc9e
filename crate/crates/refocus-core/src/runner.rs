// Copyright 2026 The refocus developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License. You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied. See the License for the specific language governing permissions and limitations under
// the License.

//! Trajectory execution harness.
//!
//! Work is split into fixed-size batches of trajectory indices. Batches are
//! evaluated independently (in parallel when the `parallel` feature is on)
//! and their partial results are merged in batch order, so the reported
//! numbers are bit-identical for any worker count, and identical to the
//! sequential fallback. Within a batch, sums use Neumaier compensation.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Trajectories per work item. Fixed so that batching, and therefore the
/// merge order, does not depend on the thread count.
const BATCH: u64 = 1024;

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn merge(&mut self, other: KahanSum) {
        self.add(other.sum);
        self.compensation += other.compensation;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Mean, standard error and count from a trajectory sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStats {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

#[derive(Clone, Copy, Default)]
struct MomentAcc {
    sum: KahanSum,
    sum_sq: KahanSum,
    count: u64,
}

impl MomentAcc {
    fn push(&mut self, v: f64) {
        self.sum.add(v);
        self.sum_sq.add(v * v);
        self.count += 1;
    }

    fn merge(mut self, other: MomentAcc) -> MomentAcc {
        self.sum.merge(other.sum);
        self.sum_sq.merge(other.sum_sq);
        self.count += other.count;
        self
    }

    fn stats(&self) -> MeanStats {
        let n = self.count as f64;
        let mean = self.sum.value() / n;
        let std_error = if self.count > 1 {
            let var = ((self.sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        MeanStats {
            mean,
            std_error,
            trials: self.count,
        }
    }
}

fn batch_ranges(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..trials.div_ceil(BATCH)).map(move |b| {
        let start = b * BATCH;
        (start, trials.min(start + BATCH))
    })
}

/// Generic batched map-reduce over trajectory indices `0..trials`. The merge
/// happens in ascending batch order regardless of worker count.
pub fn fold_trajectories<A, I, S, M>(trials: u64, init: I, step: S, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync,
    S: Fn(A, u64) -> A + Sync,
    M: Fn(A, A) -> A,
{
    #[cfg(feature = "parallel")]
    {
        let parts: Vec<A> = batch_ranges(trials)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|(lo, hi)| (lo..hi).fold(init(), &step))
            .collect();
        parts
            .into_iter()
            .fold(None::<A>, |acc, part| {
                Some(match acc {
                    None => part,
                    Some(a) => merge(a, part),
                })
            })
            .unwrap_or_else(&init)
    }
    #[cfg(not(feature = "parallel"))]
    {
        fold_trajectories_seq(trials, init, step, merge)
    }
}

/// Sequential twin of [`fold_trajectories`], always available. Uses the same
/// batching so its output is bit-identical to the parallel path.
pub fn fold_trajectories_seq<A, I, S, M>(trials: u64, init: I, step: S, merge: M) -> A
where
    I: Fn() -> A,
    S: Fn(A, u64) -> A,
    M: Fn(A, A) -> A,
{
    let mut acc: Option<A> = None;
    for (lo, hi) in batch_ranges(trials) {
        let part = (lo..hi).fold(init(), &step);
        acc = Some(match acc {
            None => part,
            Some(a) => merge(a, part),
        });
    }
    acc.unwrap_or_else(init)
}

/// Mean and standard error of `value(t)` over trajectories `t = 0..trials`.
pub fn trajectory_mean<F>(trials: u64, value: F) -> MeanStats
where
    F: Fn(u64) -> f64 + Sync,
{
    fold_trajectories(
        trials,
        MomentAcc::default,
        |mut acc, t| {
            acc.push(value(t));
            acc
        },
        MomentAcc::merge,
    )
    .stats()
}

/// Sequential twin of [`trajectory_mean`].
pub fn trajectory_mean_seq<F>(trials: u64, value: F) -> MeanStats
where
    F: Fn(u64) -> f64,
{
    fold_trajectories_seq(
        trials,
        MomentAcc::default,
        |mut acc, t| {
            acc.push(value(t));
            acc
        },
        MomentAcc::merge,
    )
    .stats()
}

/// Caps the worker pool at `threads`. A no-op on the sequential build or if a
/// pool was already installed.
pub fn init_thread_cap(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Number of workers trajectory sweeps may use.
pub fn effective_parallelism() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}
