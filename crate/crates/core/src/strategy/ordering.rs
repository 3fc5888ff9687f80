use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::stepper::StepperState;
use crate::error::{HsvdError, Result};

/// Zero-based pivot pair, always stored with `i < j`.
pub type Pair = (usize, usize);

/// A pivot ordering as a sequence of steps of mutually disjoint pairs.
///
/// The linearization concatenates the steps in order, with the pairs of a
/// step in ascending `(i, j)` order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PivotOrdering {
    n: usize,
    steps: Vec<Vec<Pair>>,
}

impl PivotOrdering {
    /// Validates indices and per-step disjointness; pairs are normalized to
    /// `i < j` and sorted within each step.
    pub fn new(n: usize, steps: Vec<Vec<Pair>>) -> Result<Self> {
        let mut out = Vec::with_capacity(steps.len());
        for (s, step) in steps.into_iter().enumerate() {
            let mut used = vec![false; n];
            let mut norm = Vec::with_capacity(step.len());
            for (a, b) in step {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                if i == j || j >= n {
                    return Err(HsvdError::Domain(format!(
                        "step {s}: pair ({a}, {b}) invalid for order {n}"
                    )));
                }
                if used[i] || used[j] {
                    return Err(HsvdError::Domain(format!(
                        "step {s}: pair ({i}, {j}) overlaps another pair of the step"
                    )));
                }
                used[i] = true;
                used[j] = true;
                norm.push((i, j));
            }
            norm.sort_unstable();
            out.push(norm);
        }
        Ok(Self { n, steps: out })
    }

    /// One pair per step, in the given order.
    pub fn from_sequence(n: usize, pairs: &[Pair]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&p| vec![p]).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Vec<Pair>] {
        &self.steps
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    pub fn linearize(&self) -> Vec<Pair> {
        self.steps.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.steps.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn pair_counts(&self) -> BTreeMap<Pair, usize> {
        let mut counts = BTreeMap::new();
        for p in self.steps.iter().flatten() {
            *counts.entry(*p).or_insert(0) += 1;
        }
        counts
    }

    /// Every one of the `n (n - 1) / 2` pairs appears exactly once.
    pub fn is_cyclic(&self) -> bool {
        let counts = self.pair_counts();
        counts.len() == self.n * self.n.saturating_sub(1) / 2 && counts.values().all(|&c| c == 1)
    }

    /// `step,i,j` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,i,j\n");
        for (s, step) in self.steps.iter().enumerate() {
            for (i, j) in step {
                let _ = writeln!(out, "{s},{i},{j}");
            }
        }
        out
    }

    pub fn from_csv(n: usize, text: &str) -> Result<Self> {
        let mut steps: Vec<Vec<Pair>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with("step")) {
                continue;
            }
            let fields: Vec<usize> = line
                .split(',')
                .map(|f| f.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| HsvdError::Domain(format!("line {}: {e}", lineno + 1)))?;
            let [s, i, j] = fields[..] else {
                return Err(HsvdError::Domain(format!(
                    "line {}: expected step,i,j",
                    lineno + 1
                )));
            };
            if s + 1 > steps.len() {
                steps.resize(s + 1, Vec::new());
            }
            steps[s].push((i, j));
        }
        Self::new(n, steps)
    }
}

/// `sweeps` quasi-sweeps of the modified modulus strategy, `r` steps each,
/// with the stepper state carried across quasi-sweep boundaries.
pub fn enumerate_modified_modulus(r: usize, sweeps: usize) -> Result<PivotOrdering> {
    let mut stepper = StepperState::new(r)?;
    let mut steps = Vec::with_capacity(r * sweeps);
    for _ in 0..r * sweeps {
        steps.push(stepper.pairs());
        stepper.advance();
    }
    PivotOrdering::new(r, steps)
}

/// `(0,1), (0,2), ..., (n-2, n-1)`, one pair per step.
pub fn enumerate_row_cyclic(n: usize) -> PivotOrdering {
    let pairs: Vec<Pair> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    PivotOrdering::from_sequence(n, &pairs).expect("row-cyclic pairs are valid")
}

fn antidiagonal_steps(n: usize) -> Vec<Vec<Pair>> {
    if n < 2 {
        return Vec::new();
    }
    // zero-based step s holds the pairs with i + j = s + 1
    (1..2 * n - 2)
        .map(|sum| {
            (0..n)
                .filter_map(|i| {
                    let j = sum.checked_sub(i)?;
                    (i < j && j < n).then_some((i, j))
                })
                .collect()
        })
        .collect()
}

/// Antidiagonal strategy: `2n - 3` steps, step `s` annihilating the `s`-th
/// antidiagonal of the strict upper triangle.
pub fn enumerate_antidiagonal(n: usize) -> PivotOrdering {
    PivotOrdering::new(n, antidiagonal_steps(n)).expect("antidiagonal pairs are valid")
}

/// Modulus strategy assembled from the antidiagonal steps in the order
/// `(n-1, n, n+1, 1, n+2, 2, ..., 2n-3, n-3, n-2)` (one-based step labels).
/// Each pair is annihilated exactly once.
pub fn enumerate_classic_modulus(n: usize) -> PivotOrdering {
    let anti = antidiagonal_steps(n);
    if n <= 2 {
        return PivotOrdering::new(n, anti).expect("valid");
    }
    // one-based antidiagonal step labels
    let mut order = vec![n - 1, n];
    for k in 1..=n - 3 {
        order.push(n + k);
        order.push(k);
    }
    order.push(n - 2);
    let steps = order.into_iter().map(|s| anti[s - 1].clone()).collect();
    PivotOrdering::new(n, steps).expect("modulus pairs are valid")
}
