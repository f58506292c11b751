use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::semilinear::{lifespan_estimate, write_sweep_csv, LifespanRecord, SemilinearConfig};

use super::config::SweepParams;

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("jobs: {e}")))
}

/// Runs `f` over `items` on a pool of `jobs` workers, preserving order.
pub fn par_map<T: Sync, U: Send>(items: &[T], jobs: Option<usize>, f: impl Fn(&T) -> U + Sync + Send) -> Result<Vec<U>> {
    let pool = pool(jobs)?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

/// One lifespan estimate per amplitude, in parallel. A failing point becomes
/// a row with `error` set; rows come back sorted by increasing `ε`.
pub fn run_sweep(params: &SweepParams, cfg: &SemilinearConfig, jobs: Option<usize>) -> Result<Vec<LifespanRecord>> {
    let eps = params.epsilons.values();
    if eps.is_empty() {
        return Err(invalid("epsilons", "grid is empty"));
    }
    let g = params.data.build(params.dr);
    let p = params.p;
    let mut records = par_map(&eps, jobs, |&e| {
        match catch_unwind(AssertUnwindSafe(|| lifespan_estimate(&g, e, p, params.horizon, cfg))) {
            Ok(Ok(r)) => r,
            Ok(Err(err)) => LifespanRecord::failed(p, e, err.to_string()),
            Err(_) => LifespanRecord::failed(p, e, "run panicked".into()),
        }
    })?;
    records.sort_by(|a, b| a.epsilon.total_cmp(&b.epsilon));
    Ok(records)
}

/// [`run_sweep`] followed by the sweep CSV at `path`.
pub fn run_sweep_to(params: &SweepParams, cfg: &SemilinearConfig, jobs: Option<usize>, path: &Path) -> Result<Vec<LifespanRecord>> {
    let records = run_sweep(params, cfg, jobs)?;
    write_sweep_csv(&records, std::fs::File::create(path)?)?;
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::EpsilonGrid;

    #[test]
    fn empty_grid_is_rejected() {
        let params = SweepParams {
            epsilons: EpsilonGrid::List(vec![]),
            ..SweepParams::critical()
        };
        assert!(run_sweep(&params, &SemilinearConfig::default(), Some(1)).is_err());
    }

    #[test]
    fn failing_point_does_not_abort_siblings() {
        let params = SweepParams {
            p: 2.0,
            epsilons: EpsilonGrid::List(vec![400.0, -1.0, 200.0]),
            horizon: 20.0,
            ..SweepParams::critical()
        };
        let recs = run_sweep(&params, &SemilinearConfig::default(), Some(2)).unwrap();
        assert_eq!(recs.len(), 3);
        assert_eq!(recs[0].epsilon, -1.0);
        assert!(recs[0].error.is_some() && !recs[0].refinement_converged);
        assert!(recs[1..].iter().all(|r| r.error.is_none() && r.blew_up));
        assert!(recs[2].t_measured < recs[1].t_measured);
    }
}
