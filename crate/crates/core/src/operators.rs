//! Neighbour moves shared by both solvers, plus the EA's crossovers.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::index;
use crate::schedule::AssignmentSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    /// One cell reassigned to a uniformly drawn QPU.
    FlipOneCell,
    /// A run of 2..=T consecutive cells of one row (clipped at the last time
    /// step) moved to one uniformly drawn QPU.
    FlipMultipleCells,
    SwapTwoRows,
    SwapTwoColumns,
    SwapTwoCells,
    /// Permutes the entries of one row.
    ShuffleRow,
    /// Permutes the entries of one column.
    ShuffleColumn,
}

impl MutationKind {
    pub const ALL: [MutationKind; 7] = [
        MutationKind::FlipOneCell,
        MutationKind::FlipMultipleCells,
        MutationKind::SwapTwoRows,
        MutationKind::SwapTwoColumns,
        MutationKind::SwapTwoCells,
        MutationKind::ShuffleRow,
        MutationKind::ShuffleColumn,
    ];
}

/// Applies one uniformly chosen mutation and returns the new schedule.
pub fn mutate<R: Rng + ?Sized>(schedule: &AssignmentSchedule, num_nodes: usize, rng: &mut R) -> AssignmentSchedule {
    let kind = MutationKind::ALL[index(rng, MutationKind::ALL.len())];
    apply_mutation(kind, schedule, num_nodes, rng)
}

pub fn apply_mutation<R: Rng + ?Sized>(
    kind: MutationKind,
    schedule: &AssignmentSchedule,
    num_nodes: usize,
    rng: &mut R,
) -> AssignmentSchedule {
    let mut out = schedule.clone();
    mutate_in_place(kind, &mut out, num_nodes, rng);
    out
}

/// Upper bound on the run length drawn by a multi-cell flip.
pub fn multi_flip_bound(steps: usize) -> usize {
    steps.max(2)
}

pub fn mutate_in_place<R: Rng + ?Sized>(kind: MutationKind, s: &mut AssignmentSchedule, num_nodes: usize, rng: &mut R) {
    let (qubits, steps) = (s.num_qubits(), s.num_steps());
    let cells = qubits * steps;
    if cells == 0 || num_nodes == 0 {
        return;
    }
    let kind = match kind {
        MutationKind::SwapTwoRows if qubits < 2 => MutationKind::FlipOneCell,
        MutationKind::SwapTwoColumns if steps < 2 => MutationKind::FlipOneCell,
        MutationKind::SwapTwoCells if cells < 2 => MutationKind::FlipOneCell,
        k => k,
    };

    match kind {
        MutationKind::FlipOneCell => {
            let cell = index(rng, cells);
            s.raw_mut()[cell] = index(rng, num_nodes) as u32;
        }
        MutationKind::FlipMultipleCells => {
            let m = rng.gen_range(2..=multi_flip_bound(steps) as u64) as usize;
            let q = index(rng, qubits);
            let start = index(rng, steps);
            let node = index(rng, num_nodes) as u32;
            for t in start..(start + m).min(steps) {
                s.column_mut(t)[q] = node;
            }
        }
        MutationKind::SwapTwoRows => {
            let (a, b) = distinct_pair(rng, qubits);
            for t in 0..steps {
                s.column_mut(t).swap(a, b);
            }
        }
        MutationKind::SwapTwoColumns => {
            let (a, b) = distinct_pair(rng, steps);
            let (lo, hi) = (a.min(b), a.max(b));
            let (left, right) = s.raw_mut().split_at_mut(hi * qubits);
            left[lo * qubits..(lo + 1) * qubits].swap_with_slice(&mut right[..qubits]);
        }
        MutationKind::SwapTwoCells => {
            let (a, b) = distinct_pair(rng, cells);
            s.raw_mut().swap(a, b);
        }
        MutationKind::ShuffleRow => {
            let q = index(rng, qubits);
            let mut row: Vec<u32> = (0..steps).map(|t| s.column(t)[q]).collect();
            row.shuffle(rng);
            for (t, node) in row.into_iter().enumerate() {
                s.column_mut(t)[q] = node;
            }
        }
        MutationKind::ShuffleColumn => {
            let t = index(rng, steps);
            s.column_mut(t).shuffle(rng);
        }
    }
}

fn distinct_pair<R: Rng + ?Sized>(rng: &mut R, len: usize) -> (usize, usize) {
    let a = index(rng, len);
    let mut b = index(rng, len - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossoverAxis {
    Rows,
    Columns,
}

/// Row- or column-wise one-point crossover with a uniformly drawn axis and
/// cut. The axis with a single entry cannot be cut, so the other one is used.
pub fn crossover<R: Rng + ?Sized>(
    a: &AssignmentSchedule,
    b: &AssignmentSchedule,
    rng: &mut R,
) -> Result<AssignmentSchedule> {
    check_dims(a, b)?;
    let rows_ok = a.num_qubits() >= 2;
    let cols_ok = a.num_steps() >= 2;
    let axis = match (rows_ok, cols_ok) {
        (false, false) => return Ok(a.clone()),
        (true, false) => CrossoverAxis::Rows,
        (false, true) => CrossoverAxis::Columns,
        (true, true) => {
            if rng.gen_bool(0.5) {
                CrossoverAxis::Rows
            } else {
                CrossoverAxis::Columns
            }
        }
    };
    let dim = match axis {
        CrossoverAxis::Rows => a.num_qubits(),
        CrossoverAxis::Columns => a.num_steps(),
    };
    let cut = rng.gen_range(1..dim as u64) as usize;
    crossover_at(a, b, axis, cut)
}

/// Child takes rows (or columns) `< cut` from `a` and the rest from `b`.
pub fn crossover_at(
    a: &AssignmentSchedule,
    b: &AssignmentSchedule,
    axis: CrossoverAxis,
    cut: usize,
) -> Result<AssignmentSchedule> {
    check_dims(a, b)?;
    let qubits = a.num_qubits();
    let mut child = a.clone();
    match axis {
        CrossoverAxis::Rows => {
            let cut = cut.min(qubits);
            for t in 0..a.num_steps() {
                child.column_mut(t)[cut..].copy_from_slice(&b.column(t)[cut..]);
            }
        }
        CrossoverAxis::Columns => {
            let start = cut.min(a.num_steps()) * qubits;
            child.raw_mut()[start..].copy_from_slice(&b.raw()[start..]);
        }
    }
    Ok(child)
}

fn check_dims(a: &AssignmentSchedule, b: &AssignmentSchedule) -> Result<()> {
    if a.num_qubits() != b.num_qubits() || a.num_steps() != b.num_steps() {
        return Err(Error::DimensionMismatch(format!(
            "cannot cross a {}x{} schedule with a {}x{} one",
            a.num_qubits(),
            a.num_steps(),
            b.num_qubits(),
            b.num_steps()
        )));
    }
    Ok(())
}
