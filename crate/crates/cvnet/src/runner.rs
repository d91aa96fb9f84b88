// Copyright 2026 The cvnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Parallel execution of an ensemble.

use cvnet_core::ensemble::{run_realization, EnsembleReport, ExperimentSpec};
use rayon::prelude::*;

use crate::{CliError, Result};

/// Runs every realization of `spec` on a pool of `workers` threads. The result
/// does not depend on `workers`.
pub fn run_parallel(spec: &ExperimentSpec, workers: usize) -> Result<EnsembleReport> {
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    let outcomes: Vec<_> = pool.install(|| {
        (0..spec.realizations)
            .into_par_iter()
            .map(|r| (r, run_realization(spec, r)))
            .collect()
    });
    Ok(EnsembleReport::assemble(spec.clone(), outcomes))
}
