use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::cases::CaseLabel;
use crate::detmodel::DiamondParams;

use super::{verify_tuple_with, Stage, TupleSummary, VerifyOptions, VerifyReport};

/// Which tuples of the grid to verify.
pub type SweepFilter<'a> = &'a (dyn Fn(&DiamondParams) -> bool + Sync);

/// Forward and backward label names; `"degenerate"` for a zero-gain direction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseCell {
    pub forward: String,
    pub backward: String,
}

fn label_name(l: &Option<CaseLabel>) -> String {
    l.map_or_else(|| "degenerate".to_string(), |l| l.to_string())
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub max_gain: usize,
    pub total: usize,
    pub passed: usize,
    pub stages: BTreeMap<Stage, usize>,
    /// `(passed, total)` per case pair.
    pub cells: BTreeMap<CaseCell, (usize, usize)>,
    /// Every tuple's outcome, sorted by tuple.
    pub summaries: Vec<TupleSummary>,
    /// Full reports of the failing tuples, sorted by tuple.
    pub failures: Vec<VerifyReport>,
}

impl SweepReport {
    pub fn all_pass(&self) -> bool {
        self.passed == self.total
    }

    /// One record per tuple in sweep order.
    pub fn records(&self) -> String {
        let mut s = String::new();
        for r in &self.summaries {
            s.push_str(&r.record());
            s.push('\n');
        }
        s
    }

    /// Per-cell tallies as `cell fwd=... bwd=... pass=... total=...` lines.
    pub fn cell_table(&self) -> String {
        let mut s = String::new();
        for (c, (p, t)) in &self.cells {
            s.push_str(&format!("cell fwd={} bwd={} pass={p} total={t}\n", c.forward, c.backward));
        }
        s
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}/{} pass", self.passed, self.total)?;
        for (stage, n) in &self.stages {
            writeln!(f, "  {stage:<12} {n}")?;
        }
        Ok(())
    }
}

fn decode_index(mut i: usize, base: usize) -> [usize; 8] {
    let mut g = [0; 8];
    for slot in g.iter_mut().rev() {
        *slot = i % base;
        i /= base;
    }
    g
}

/// Verifies every tuple in `{0..=max_gain}^8` accepted by `filter`.
/// Results do not depend on the number of worker threads.
pub fn sweep(max_gain: usize, filter: Option<SweepFilter<'_>>, opts: &VerifyOptions) -> SweepReport {
    let base = max_gain + 1;
    let count = base.pow(8);
    let outcomes: Vec<(TupleSummary, Option<VerifyReport>)> = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let p = DiamondParams::of(decode_index(i, base));
            if filter.is_some_and(|keep| !keep(&p)) {
                return None;
            }
            let r = verify_tuple_with(&p, opts);
            let s = r.summary();
            Some((s, (!r.pass).then_some(r)))
        })
        .collect();
    let mut out = SweepReport { max_gain, ..SweepReport::default() };
    for (r, full) in outcomes {
        out.total += 1;
        out.passed += usize::from(r.pass);
        *out.stages.entry(r.stage).or_default() += 1;
        let cell = CaseCell { forward: label_name(&r.labels[0]), backward: label_name(&r.labels[1]) };
        let e = out.cells.entry(cell).or_default();
        e.0 += usize::from(r.pass);
        e.1 += 1;
        out.failures.extend(full);
        out.summaries.push(r);
    }
    out
}
