//! Dual Hilbert basis computation: intersect the orthant with one
//! hyperplane at a time, completing the candidate basis at every step.
//!
//! A step splits the current basis by the sign of `h·x`, then alternates
//! expansion (sums of a strictly positive and a strictly negative element)
//! with reduction (drop anything that dominates another element on the same
//! side) until nothing changes. The elements on the hyperplane form the next
//! basis. With an [`Admissibility`] filter, sums that break the constraints
//! are never formed, and the result is exactly the admissible part of the
//! unfiltered result.

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::cone::{Admissibility, BasisSet, DenseMatrix, IntVector, ZeroSet};
use crate::num::Scalar;
use crate::vertex_enum::sort_rows_position;
use crate::{Deadline, TimedOut};

/// Rounds allowed in one inductive step before it is declared a bug.
pub const DEFAULT_ROUND_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error("inductive step did not reach a fixed point within {0} rounds")]
    RoundCap(usize),
    #[error("basis vector has {found} coordinates, hyperplane has {expected}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    TimedOut(#[from] TimedOut),
}

#[derive(Clone, Debug)]
struct Candidate<T> {
    vector: IntVector<T>,
    zeros: ZeroSet,
    value: T,
    fresh: bool,
}

impl<T: Scalar> Candidate<T> {
    fn new(vector: IntVector<T>, h: &[T]) -> Self {
        let value = vector.dot(h);
        let zeros = vector.zero_set();
        Candidate { vector, zeros, value, fresh: true }
    }

    /// `other <= self` componentwise (support checked first).
    fn dominates(&self, other: &Candidate<T>) -> bool {
        self.zeros.is_subset(&other.zeros) && other.vector.le_componentwise(&self.vector)
    }
}

/// Candidate basis split three ways by the sign of `h·x`.
#[derive(Clone, Debug)]
pub struct CandidateBasis<T> {
    strict_pos: Vec<Candidate<T>>,
    strict_neg: Vec<Candidate<T>>,
    on_plane: Vec<Candidate<T>>,
}

impl<T: Scalar> CandidateBasis<T> {
    fn new(basis: &BasisSet<T>, h: &[T]) -> Self {
        let mut cb = CandidateBasis { strict_pos: Vec::new(), strict_neg: Vec::new(), on_plane: Vec::new() };
        for v in basis {
            cb.push(Candidate::new(v.clone(), h));
        }
        cb
    }

    fn push(&mut self, c: Candidate<T>) {
        match c.value.cmp(&T::zero()) {
            Ordering::Greater => self.strict_pos.push(c),
            Ordering::Less => self.strict_neg.push(c),
            Ordering::Equal => self.on_plane.push(c),
        }
    }

    pub fn len(&self) -> usize {
        self.strict_pos.len() + self.strict_neg.len() + self.on_plane.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether `c` is made redundant by an element on its own side: some
    /// `b` with `c - b >= 0` and `h·(c - b)` of the side's sign.
    fn reducible(&self, c: &Candidate<T>, skip_self: bool) -> bool {
        let hit = |b: &Candidate<T>| !(skip_self && std::ptr::eq(b, c)) && c.dominates(b);
        match c.value.cmp(&T::zero()) {
            Ordering::Equal => self.on_plane.iter().any(hit),
            Ordering::Greater => {
                self.on_plane.iter().any(hit) || self.strict_pos.iter().any(|b| b.value <= c.value && hit(b))
            }
            Ordering::Less => {
                self.on_plane.iter().any(hit) || self.strict_neg.iter().any(|b| b.value >= c.value && hit(b))
            }
        }
    }

    /// Drops every reducible element; returns how many were dropped.
    fn reduce(&mut self) -> usize {
        let flags = |set: &[Candidate<T>]| -> Vec<bool> { set.par_iter().map(|c| self.reducible(c, true)).collect() };
        let (fp, fn_, fz) = (flags(&self.strict_pos), flags(&self.strict_neg), flags(&self.on_plane));
        let mut dropped = 0;
        for (set, f) in [(&mut self.strict_pos, fp), (&mut self.strict_neg, fn_), (&mut self.on_plane, fz)] {
            let before = set.len();
            let mut it = f.into_iter();
            set.retain(|_| !it.next().unwrap());
            dropped += before - set.len();
        }
        dropped
    }

    fn mark_old(&mut self) {
        for c in self.strict_pos.iter_mut().chain(&mut self.strict_neg).chain(&mut self.on_plane) {
            c.fresh = false;
        }
    }

    fn to_set(set: &[Candidate<T>]) -> BasisSet<T> {
        set.iter().map(|c| c.vector.clone()).collect()
    }
}

/// Result of one inductive step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepOutput<T: Ord> {
    /// Elements with `h·x >= 0`.
    pub plus: BasisSet<T>,
    /// Elements with `h·x <= 0`.
    pub minus: BasisSet<T>,
    /// Elements with `h·x = 0`.
    pub zero: BasisSet<T>,
    pub rounds: usize,
    /// Largest candidate basis seen during the step.
    pub peak: usize,
}

pub fn inductive_step<T: Scalar>(
    basis: &BasisSet<T>,
    h: &[T],
    filter: Option<&Admissibility>,
) -> Result<StepOutput<T>, DualError> {
    inductive_step_with(basis, h, filter, DEFAULT_ROUND_CAP, &Deadline::none())
}

pub fn inductive_step_with<T: Scalar>(
    basis: &BasisSet<T>,
    h: &[T],
    filter: Option<&Admissibility>,
    round_cap: usize,
    deadline: &Deadline,
) -> Result<StepOutput<T>, DualError> {
    if let Some(v) = basis.iter().find(|v| v.len() != h.len()) {
        return Err(DualError::Dimension { expected: h.len(), found: v.len() });
    }
    let mut cb = CandidateBasis::new(basis, h);
    let mut peak = cb.len();
    let mut rounds = 0;

    loop {
        deadline.check()?;
        if rounds == round_cap {
            return Err(DualError::RoundCap(round_cap));
        }
        let first = rounds == 0;
        rounds += 1;

        // expansion: only pairs touching an element new since last round
        let sums: Vec<Candidate<T>> = cb
            .strict_pos
            .par_iter()
            .flat_map_iter(|x| {
                let cb = &cb;
                cb.strict_neg.iter().filter_map(move |y| {
                    if !(first || x.fresh || y.fresh) {
                        return None;
                    }
                    let sum = x.vector.add(&y.vector);
                    if filter.is_some_and(|f| !f.is_admissible_vector(&sum)) {
                        return None;
                    }
                    let c = Candidate {
                        zeros: x.zeros.intersection(&y.zeros),
                        value: x.value.clone() + y.value.clone(),
                        vector: sum,
                        fresh: true,
                    };
                    (!cb.reducible(&c, false)).then_some(c)
                })
            })
            .collect();

        cb.mark_old();
        let mut inserted = 0;
        for c in sums {
            if !cb.reducible(&c, false) {
                cb.push(c);
                inserted += 1;
            }
        }
        peak = peak.max(cb.len());
        let dropped = cb.reduce();

        if inserted == 0 && dropped == 0 {
            break;
        }
    }

    let zero = CandidateBasis::to_set(&cb.on_plane);
    let mut plus = CandidateBasis::to_set(&cb.strict_pos);
    plus.extend(zero.iter().cloned());
    let mut minus = CandidateBasis::to_set(&cb.strict_neg);
    minus.extend(zero.iter().cloned());
    Ok(StepOutput { plus, minus, zero, rounds, peak })
}

/// Progress record emitted after each processed row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowProgress {
    /// Position in the processing order (1-based).
    pub step: usize,
    /// Index of the row in the original matrix.
    pub row: usize,
    pub plus: usize,
    pub minus: usize,
    pub zero: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug)]
pub struct DualOutcome<T: Ord> {
    pub basis: BasisSet<T>,
    /// Row processing order.
    pub order: Vec<usize>,
    pub progress: Vec<RowProgress>,
    /// Largest candidate basis over all steps.
    pub peak: usize,
    pub elapsed: Duration,
}

/// Hilbert basis of `{Ax = 0, x >= 0}`, restricted to admissible elements
/// when a filter is given. `observe` sees the basis after every row.
pub fn dual_hilbert_traced<T: Scalar>(
    a: &DenseMatrix<T>,
    filter: Option<&Admissibility>,
    deadline: &Deadline,
    mut observe: impl FnMut(&RowProgress, &BasisSet<T>),
) -> Result<DualOutcome<T>, DualError> {
    let start = Instant::now();
    let order = sort_rows_position(a);
    let mut basis = BasisSet::unit_vectors(a.cols());
    let mut progress = Vec::with_capacity(order.len());
    let mut peak = basis.len();
    for (step, &row) in order.iter().enumerate() {
        let out = inductive_step_with(&basis, a.row(row), filter, DEFAULT_ROUND_CAP, deadline)?;
        peak = peak.max(out.peak);
        let record = RowProgress {
            step: step + 1,
            row,
            plus: out.plus.len(),
            minus: out.minus.len(),
            zero: out.zero.len(),
            elapsed: start.elapsed(),
        };
        basis = out.zero;
        observe(&record, &basis);
        progress.push(record);
    }
    Ok(DualOutcome { basis, order, progress, peak, elapsed: start.elapsed() })
}

/// Admissible Hilbert basis elements of `{Ax = 0, x >= 0}`.
pub fn fundamental_dual_cone<T: Scalar>(
    a: &DenseMatrix<T>,
    admissibility: &Admissibility,
    deadline: &Deadline,
) -> Result<DualOutcome<T>, DualError> {
    dual_hilbert_traced(a, Some(admissibility), deadline, |_, _| {})
}

/// Full Hilbert basis of `{Ax = 0, x >= 0}`.
pub fn hilbert_basis_dual_unfiltered<T: Scalar>(a: &DenseMatrix<T>) -> BasisSet<T> {
    dual_hilbert_traced(a, None, &Deadline::none(), |_, _| {}).expect("no deadline set").basis
}
