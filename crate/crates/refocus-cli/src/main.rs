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

//! Command-line driver for the refocusing-protocol experiments. Every
//! command is deterministic under a fixed `--seed` (independent of the
//! worker count) and writes machine-readable outputs plus a run manifest.

mod commands;
mod manifest;
mod output;
mod state_arg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use refocus_core::{ParityKind, RepetitionMode};

#[derive(Parser)]
#[command(
    name = "refocus",
    version,
    about = "Refocusing noisy entangling gates with repeated parity measurements",
    long_about = "Simulates a faulty two-qubit entangling gate, the ancilla-assisted parity \
                  measurements built from it, and the measurement-based CNOT, and evaluates the \
                  closed-form infidelity expressions. Outputs are CSV/JSON files accompanied by \
                  a run manifest. The environment variable REFOCUS_THREADS (integer >= 1) caps \
                  the worker pool; results do not depend on it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Zz,
    Xx,
}

impl From<KindArg> for ParityKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Zz => ParityKind::Zz,
            KindArg::Xx => ParityKind::Xx,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    EarlyStop,
    Fixed,
}

impl From<ModeArg> for RepetitionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::EarlyStop => RepetitionMode::EarlyStop,
            ModeArg::Fixed => RepetitionMode::FixedTwoNMinusOne,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Measurement infidelity of the 3- and 5-round votes: Monte Carlo vs
    /// the leading-order formula (CSV).
    Table1(Table1Args),
    /// Threshold of the original CNOT error as a function of the
    /// single-body fault rate (CSV).
    Threshold(ThresholdArgs),
    /// Log-log fit of the vote infidelity against the error width (JSON).
    Scaling(ScalingArgs),
    /// Pass/fail residual-subspace report for single-stage errors (JSON).
    Propagation(PropagationArgs),
    /// Trace one run of the measurement-based CNOT (JSON).
    CnotDemo(CnotDemoArgs),
}

#[derive(Args)]
struct Table1Args {
    /// Half-width of the amplitude-error distribution.
    #[arg(long, default_value_t = 0.3)]
    e: f64,
    /// Monte Carlo trajectories per row.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Also sweep this many random sector-balanced input states.
    #[arg(long, default_value_t = 0)]
    sweep_states: usize,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Infidelity target the refocused CNOT must stay below.
    #[arg(long = "T", default_value_t = 1e-4)]
    target: f64,
    #[arg(long, default_value_t = 0.0)]
    eps2_min: f64,
    #[arg(long, default_value_t = 7e-6)]
    eps2_max: f64,
    #[arg(long, default_value_t = 29)]
    points: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScalingArgs {
    /// Parity kind driving the vote.
    #[arg(long, value_enum, default_value_t = KindArg::Zz)]
    kind: KindArg,
    /// Majority count n (the fit should find slope 2n).
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Comma-separated error half-widths.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.05, 0.1, 0.2])]
    e_grid: Vec<f64>,
    /// Branch-enumerated trajectories per grid point.
    #[arg(long, default_value_t = 20_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PropagationArgs {
    /// Amplitude error of the first entangling pulse in each round.
    #[arg(long, default_value_t = 0.17)]
    epsilon1: f64,
    /// Amplitude error of the second entangling pulse in each round.
    #[arg(long, default_value_t = 0.06)]
    epsilon2: f64,
    /// Majority count of both stages.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Number of random input states to check.
    #[arg(long, default_value_t = 10)]
    states: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CnotDemoArgs {
    /// Input amplitudes "alpha,beta,gamma,delta" on |11>,|00>,|10>,|01>
    /// (complex entries like 0.5, i, 1-0.5i); normalized before use.
    #[arg(long, default_value = "1,0,0,0")]
    state: String,
    #[arg(long, default_value_t = 0.3)]
    e: f64,
    #[arg(long, default_value_t = 0.0)]
    eps2: f64,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::EarlyStop)]
    mode: ModeArg,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Force e = eps2 = 0 regardless of the other flags.
    #[arg(long, default_value_t = false)]
    noise_off: bool,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    if let Ok(raw) = std::env::var("REFOCUS_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => refocus_core::runner::init_thread_cap(n),
            _ => {
                eprintln!("error: REFOCUS_THREADS must be an integer >= 1, got {raw:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table1(a) => commands::table1::run(&commands::table1::Table1Params {
            e: a.e,
            trials: a.trials,
            seed: a.seed,
            sweep_states: a.sweep_states,
            out: a.out,
        })
        .map(|()| true),
        Command::Threshold(a) => {
            commands::threshold::run(&commands::threshold::ThresholdParams {
                target: a.target,
                eps2_min: a.eps2_min,
                eps2_max: a.eps2_max,
                points: a.points,
                out: a.out,
            })
            .map(|()| true)
        }
        Command::Scaling(a) => commands::scaling::run(&commands::scaling::ScalingParams {
            kind: a.kind.into(),
            majority: a.n,
            e_grid: a.e_grid,
            trials: a.trials,
            seed: a.seed,
            out: a.out,
        })
        .map(|()| true),
        Command::Propagation(a) => {
            commands::propagation::run(&commands::propagation::PropagationParams {
                epsilon1: a.epsilon1,
                epsilon2: a.epsilon2,
                majority: a.n,
                states: a.states,
                seed: a.seed,
                out: a.out,
            })
        }
        Command::CnotDemo(a) => commands::cnot_demo::run(&commands::cnot_demo::CnotDemoParams {
            state: a.state,
            e: a.e,
            eps2: a.eps2,
            majority: a.n,
            mode: a.mode.into(),
            seed: a.seed,
            noise_off: a.noise_off,
            out: a.out,
        })
        .map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
