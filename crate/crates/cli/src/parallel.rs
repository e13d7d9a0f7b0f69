//! Worker splitting for `--jobs`. Results are merged and canonically sorted
//! by the library, so the worker count never changes output.

use std::thread;

use k3evenset_core::families::{self, FamilyError, GlueClassification};
use k3evenset_core::lattice::{FrameVector, IntegerLattice};
use k3evenset_core::positivity::{self, PositivityError, PositivityReport, SearchContext};

/// Splits `lo..=hi` into at most `jobs` contiguous chunks.
fn chunks(lo: i64, hi: i64, jobs: usize) -> Vec<(i64, i64)> {
    if hi < lo {
        return Vec::new();
    }
    let n = (hi - lo + 1) as usize;
    let jobs = jobs.clamp(1, n);
    let size = n.div_ceil(jobs) as i64;
    (0..jobs as i64).map(|k| (lo + k * size, (lo + (k + 1) * size - 1).min(hi))).filter(|(a, b)| a <= b).collect()
}

pub fn classify_positivity(ns: &IntegerLattice, dvec: &FrameVector, jobs: usize) -> Result<PositivityReport, PositivityError> {
    if jobs <= 1 {
        return positivity::classify_positivity(ns, dvec);
    }
    let ctx = SearchContext::new(ns)?;
    let plan = ctx.root_plan(dvec)?;
    let hits = thread::scope(|s| {
        let workers: Vec<_> = chunks(1, plan.x0_max, jobs)
            .into_iter()
            .map(|(a, b)| {
                let (ctx, plan) = (&ctx, &plan);
                s.spawn(move || ctx.scan(plan, a..=b))
            })
            .collect();
        workers.into_iter().flat_map(|w| w.join().expect("scan worker panicked")).collect::<Vec<_>>()
    });
    let search = positivity::search_from_hits(&ctx, &plan, dvec, hits)?;
    positivity::classify_from_search(&ctx, dvec, &search)
}

pub fn admissible_glues(d: u64, jobs: usize) -> Result<GlueClassification, FamilyError> {
    if jobs <= 1 {
        return families::admissible_glues(d);
    }
    let found = thread::scope(|s| {
        let workers: Vec<_> = chunks(0, 255, jobs)
            .into_iter()
            .map(|(a, b)| s.spawn(move || families::admissible_glues_in(d, a as u16..(b + 1) as u16)))
            .collect();
        let mut all = Vec::new();
        for w in workers {
            all.extend(w.join().expect("glue worker panicked")?);
        }
        Ok::<_, FamilyError>(all)
    })?;
    families::classify_glues(d, found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3evenset_core::families::{LClasses, NsFamily};

    #[test]
    fn chunks_cover_the_range() {
        assert_eq!(chunks(1, 10, 3), vec![(1, 4), (5, 8), (9, 10)]);
        assert_eq!(chunks(1, 2, 8), vec![(1, 1), (2, 2)]);
        assert!(chunks(1, 0, 4).is_empty());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let ns = NsFamily::l(5).make().unwrap();
        let c = LClasses::new(ns.frame());
        let seq = positivity::classify_positivity(&ns, &c.l).unwrap();
        let par = classify_positivity(&ns, &c.l, 4).unwrap();
        assert_eq!((seq.status, seq.witness), (par.status, par.witness));
        assert_eq!(families::admissible_glues(4).unwrap(), admissible_glues(4, 3).unwrap());
    }
}
