//! Equivalence relations between cyclic pivot orderings.
//!
//! Two adjacent pairs may be swapped when they share no index (an admissible
//! transposition). Orderings reachable from each other by such swaps are
//! equivalent; this is trace equivalence over the independence relation
//! "disjoint index sets", decided here by comparing, for every index `k`,
//! the subsequence of pairs that contain `k`.

use std::collections::BTreeMap;
use std::fmt;

use super::ordering::{
    enumerate_antidiagonal, enumerate_classic_modulus, enumerate_row_cyclic, Pair, PivotOrdering,
};
use crate::error::{HsvdError, Result};

fn projections(n: usize, seq: &[Pair]) -> Vec<Vec<Pair>> {
    let mut proj = vec![Vec::new(); n];
    for &(i, j) in seq {
        proj[i].push((i, j));
        proj[j].push((i, j));
    }
    proj
}

/// Whether `o1` can be turned into `o2` by admissible transpositions.
///
/// Both orderings must be cyclic over the same order `n`.
pub fn trace_equivalent(o1: &PivotOrdering, o2: &PivotOrdering) -> Result<bool> {
    if o1.n() != o2.n() {
        return Err(HsvdError::Domain(format!(
            "orderings of different order: {} and {}",
            o1.n(),
            o2.n()
        )));
    }
    if !o1.is_cyclic() || !o2.is_cyclic() {
        return Err(HsvdError::Domain(
            "trace equivalence is decided for cyclic orderings only".into(),
        ));
    }
    let n = o1.n();
    Ok(projections(n, &o1.linearize()) == projections(n, &o2.linearize()))
}

/// Cyclic shift of the linearized ordering: the pair at position `I` moves
/// to `(I + c) mod n_p`. Step boundaries travel with their pairs; a step that
/// wraps around the end is split in two.
pub fn shift_ordering(o: &PivotOrdering, c: i64) -> PivotOrdering {
    let tagged: Vec<(usize, Pair)> = o
        .steps()
        .iter()
        .enumerate()
        .flat_map(|(s, step)| step.iter().map(move |&p| (s, p)))
        .collect();
    let np = tagged.len();
    if np == 0 {
        return o.clone();
    }
    let shift = c.rem_euclid(np as i64) as usize;
    let mut moved = vec![(0, (0, 0)); np];
    for (pos, item) in tagged.into_iter().enumerate() {
        moved[(pos + shift) % np] = item;
    }
    let mut steps: Vec<Vec<Pair>> = Vec::new();
    let mut last = None;
    for (s, p) in moved {
        if last != Some(s) {
            steps.push(Vec::new());
            last = Some(s);
        }
        steps.last_mut().unwrap().push(p);
    }
    PivotOrdering::new(o.n(), steps).expect("shifted steps stay disjoint")
}

/// Witness chain for "classic modulus is weakly equivalent to row-cyclic".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakEquivalence {
    pub n: usize,
    pub holds: bool,
    /// row-cyclic and antidiagonal are trace equivalent
    pub rowcyclic_antidiagonal: bool,
    /// smallest `c` with `shift(antidiagonal, c)` trace equivalent to classic modulus
    pub shift: Option<usize>,
    pub diagnostics: Vec<String>,
}

/// Checks row-cyclic ≡ antidiagonal, then searches `c` in `0..n_p` for
/// `shift(antidiagonal, c)` ≡ classic modulus.
pub fn weakly_equivalent_modulus_rowcyclic(n: usize) -> WeakEquivalence {
    let row = enumerate_row_cyclic(n);
    let anti = enumerate_antidiagonal(n);
    let modulus = enumerate_classic_modulus(n);
    let mut diagnostics = Vec::new();

    let rowcyclic_antidiagonal = match trace_equivalent(&row, &anti) {
        Ok(eq) => eq,
        Err(e) => {
            diagnostics.push(format!("row-cyclic vs antidiagonal: {e}"));
            false
        }
    };
    if !rowcyclic_antidiagonal && diagnostics.is_empty() {
        diagnostics.push("row-cyclic and antidiagonal are not trace equivalent".into());
    }

    let np = anti.len() as i64;
    let shift = (0..np)
        .find(|&c| trace_equivalent(&shift_ordering(&anti, c), &modulus).unwrap_or(false))
        .map(|c| c as usize);
    if shift.is_none() {
        diagnostics.push(format!(
            "no cyclic shift of the antidiagonal ordering (n_p = {np}) is trace equivalent to the modulus ordering"
        ));
    }

    WeakEquivalence {
        n,
        holds: rowcyclic_antidiagonal && shift.is_some(),
        rowcyclic_antidiagonal,
        shift,
        diagnostics,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverageFailure {
    /// A pair never annihilated.
    Missing { pair: Pair },
    /// A pair annihilated the wrong number of times.
    Count {
        pair: Pair,
        count: usize,
        expected: usize,
        steps: Vec<usize>,
    },
    /// A step with the wrong number of pairs.
    StepSize {
        step: usize,
        size: usize,
        expected: usize,
    },
    /// Wrong number of steps or total annihilations.
    Total { steps: usize, pairs: usize },
}

impl fmt::Display for CoverageFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Missing { pair } => write!(f, "pair {pair:?} missing"),
            Self::Count {
                pair,
                count,
                expected,
                steps,
            } => write!(
                f,
                "pair {pair:?} annihilated {count} times (expected {expected}) in steps {steps:?}"
            ),
            Self::StepSize {
                step,
                size,
                expected,
            } => write!(f, "step {step} has {size} pairs (expected {expected})"),
            Self::Total { steps, pairs } => {
                write!(f, "{steps} steps with {pairs} annihilations in total")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    pub r: usize,
    /// Pairs annihilated twice.
    pub doubles: Vec<Pair>,
    pub failures: Vec<CoverageFailure>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks one quasi-sweep of the modified modulus strategy with `r = 2q`:
/// `r` steps of `q` pairs, pairs `(i, q + i)` exactly twice, every other
/// pair exactly once. Per-step disjointness is enforced by [`PivotOrdering`].
pub fn validate_coverage(o: &PivotOrdering, q: usize) -> CoverageReport {
    let r = 2 * q;
    let mut failures = Vec::new();

    if o.n() != r || o.step_count() != r || o.len() != r * q {
        failures.push(CoverageFailure::Total {
            steps: o.step_count(),
            pairs: o.len(),
        });
    }
    for (s, step) in o.steps().iter().enumerate() {
        if step.len() != q {
            failures.push(CoverageFailure::StepSize {
                step: s,
                size: step.len(),
                expected: q,
            });
        }
    }

    let mut where_: BTreeMap<Pair, Vec<usize>> = BTreeMap::new();
    for (s, step) in o.steps().iter().enumerate() {
        for &p in step {
            where_.entry(p).or_default().push(s);
        }
    }
    let mut doubles = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let expected = if j == i + q { 2 } else { 1 };
            match where_.get(&(i, j)) {
                None => failures.push(CoverageFailure::Missing { pair: (i, j) }),
                Some(steps) if steps.len() != expected => failures.push(CoverageFailure::Count {
                    pair: (i, j),
                    count: steps.len(),
                    expected,
                    steps: steps.clone(),
                }),
                Some(steps) => {
                    if steps.len() == 2 {
                        doubles.push((i, j));
                    }
                }
            }
        }
    }
    CoverageReport {
        r,
        doubles,
        failures,
    }
}
