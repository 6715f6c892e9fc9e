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

pub mod cnot_demo;
pub mod propagation;
pub mod scaling;
pub mod table1;
pub mod threshold;

use refocus_core::{ParityKind, RepetitionMode};

pub fn kind_name(kind: ParityKind) -> &'static str {
    match kind {
        ParityKind::Zz => "ZZ",
        ParityKind::Xx => "XX",
    }
}

pub fn mode_name(mode: RepetitionMode) -> &'static str {
    match mode {
        RepetitionMode::FixedTwoNMinusOne => "fixed",
        RepetitionMode::EarlyStop => "early-stop",
    }
}
