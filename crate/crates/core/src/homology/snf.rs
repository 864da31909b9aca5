//! Smith normal form over the integers.
//!
//! Two phases. A sparse phase eliminates ±1 pivots chosen by Markowitz-style
//! cost, which is where essentially all of a boundary matrix disappears; each
//! such pivot contributes a diagonal 1. The small residual with no unit entries
//! is then densified into arbitrary-precision integers and reduced by the
//! classical algorithm with minimal-absolute-value pivoting, so torsion
//! coefficients are exact no matter how entries grow.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Diagonal of the Smith normal form: `diagonal[i]` divides `diagonal[i+1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    /// Diagonal entries greater than 1, in divisibility order.
    pub torsion: Vec<BigInt>,
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithNormalForm {
    let mut elim = SparseElim::new(m);
    elim.run();
    let units = elim.units;
    let residual = elim.residual();
    let dense_diag = dense_snf(residual);

    let mut diagonal: Vec<BigInt> = std::iter::repeat_with(|| BigInt::from(1))
        .take(units)
        .chain(dense_diag)
        .collect();
    diagonal.retain(|d| !d.is_zero());
    let rank = diagonal.len();
    let torsion: Vec<BigInt> = diagonal.iter().filter(|d| **d > BigInt::from(1)).cloned().collect();
    SmithNormalForm { diagonal, rank, torsion }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Line {
    Row(u32),
    Col(u32),
}

struct SparseElim {
    rows: Vec<HashMap<u32, i64>>,
    col_rows: Vec<HashSet<u32>>,
    heap: BinaryHeap<Reverse<(usize, Line)>>,
    units: usize,
}

struct Overflow;

impl SparseElim {
    fn new(m: &IntMatrix) -> Self {
        let mut rows: Vec<HashMap<u32, i64>> = vec![HashMap::new(); m.rows()];
        let mut col_rows: Vec<HashSet<u32>> = vec![HashSet::new(); m.cols()];
        for &(r, c, v) in m.entries() {
            if v == 0 {
                continue;
            }
            let prev = rows[r as usize].insert(c, v);
            assert!(prev.is_none(), "duplicate entry at ({r}, {c})");
            col_rows[c as usize].insert(r);
        }
        let mut heap = BinaryHeap::new();
        for (r, row) in rows.iter().enumerate() {
            if !row.is_empty() {
                heap.push(Reverse((row.len(), Line::Row(r as u32))));
            }
        }
        for (c, col) in col_rows.iter().enumerate() {
            if !col.is_empty() {
                heap.push(Reverse((col.len(), Line::Col(c as u32))));
            }
        }
        SparseElim { rows, col_rows, heap, units: 0 }
    }

    fn line_len(&self, line: Line) -> usize {
        match line {
            Line::Row(r) => self.rows[r as usize].len(),
            Line::Col(c) => self.col_rows[c as usize].len(),
        }
    }

    /// Unit entry in the line whose opposite line is shortest.
    fn best_unit(&self, line: Line) -> Option<(u32, u32)> {
        match line {
            Line::Row(r) => self.rows[r as usize]
                .iter()
                .filter(|&(_, &v)| v == 1 || v == -1)
                .min_by_key(|&(&c, _)| (self.col_rows[c as usize].len(), c))
                .map(|(&c, _)| (r, c)),
            Line::Col(c) => self.col_rows[c as usize]
                .iter()
                .filter(|&&r| {
                    let v = self.rows[r as usize][&c];
                    v == 1 || v == -1
                })
                .min_by_key(|&&r| (self.rows[r as usize].len(), r))
                .copied()
                .map(|r| (r, c)),
        }
    }

    fn run(&mut self) {
        while let Some(Reverse((len, line))) = self.heap.pop() {
            let current = self.line_len(line);
            if current == 0 {
                continue;
            }
            if current != len {
                self.heap.push(Reverse((current, line)));
                continue;
            }
            if let Some((r, c)) = self.best_unit(line) {
                if self.eliminate(r, c).is_err() {
                    // i64 would overflow; leave the rest to the exact dense phase.
                    return;
                }
            }
            // A line without unit entries re-enters the heap when touched.
        }
    }

    fn eliminate(&mut self, r: u32, c: u32) -> Result<(), Overflow> {
        let val = self.rows[r as usize][&c];
        debug_assert!(val == 1 || val == -1);
        let pivot_row: Vec<(u32, i64)> =
            self.rows[r as usize].iter().map(|(&c2, &v)| (c2, v)).collect();
        let other_rows: Vec<u32> =
            self.col_rows[c as usize].iter().copied().filter(|&r2| r2 != r).collect();

        for r2 in other_rows {
            // factor = entry / pivot; pivot is ±1 so this is entry * pivot.
            let factor = match self.rows[r2 as usize][&c].checked_mul(val) {
                Some(f) => f,
                None => return Err(Overflow),
            };
            let mut delta: Vec<(u32, i64)> = Vec::with_capacity(pivot_row.len());
            for &(c2, pv) in &pivot_row {
                let cur = self.rows[r2 as usize].get(&c2).copied().unwrap_or(0);
                let sub = factor.checked_mul(pv).ok_or(Overflow)?;
                let new = cur.checked_sub(sub).ok_or(Overflow)?;
                delta.push((c2, new));
            }
            for (c2, new) in delta {
                if new == 0 {
                    self.rows[r2 as usize].remove(&c2);
                    self.col_rows[c2 as usize].remove(&r2);
                } else {
                    self.rows[r2 as usize].insert(c2, new);
                    self.col_rows[c2 as usize].insert(r2);
                }
                self.heap.push(Reverse((self.col_rows[c2 as usize].len(), Line::Col(c2))));
            }
            self.heap.push(Reverse((self.rows[r2 as usize].len(), Line::Row(r2))));
        }

        // The pivot column is now zero off the pivot; clearing the pivot row
        // with column operations would touch nothing else, so drop both.
        for &(c2, _) in &pivot_row {
            self.col_rows[c2 as usize].remove(&r);
        }
        self.rows[r as usize].clear();
        debug_assert!(self.col_rows[c as usize].is_empty());
        self.units += 1;
        Ok(())
    }

    /// Remaining nonzero entries as a compact dense matrix.
    fn residual(&self) -> Vec<Vec<BigInt>> {
        let live_rows: Vec<u32> = (0..self.rows.len() as u32)
            .filter(|&r| !self.rows[r as usize].is_empty())
            .collect();
        let mut live_cols: Vec<u32> = self
            .rows
            .iter()
            .flat_map(|row| row.keys().copied())
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        live_cols.sort_unstable();
        let col_idx: HashMap<u32, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &self.rows[r as usize] {
                dense[i][col_idx[&c]] = BigInt::from(v);
            }
        }
        dense
    }
}

/// Classical Smith reduction of a dense integer matrix; returns the nonzero
/// diagonal entries in divisibility order.
fn dense_snf(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let mut diag = Vec::new();
    let mut k = 0usize;
    while k < nrows.min(ncols) {
        // Minimal absolute value pivot limits entry growth.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..nrows {
            for j in k..ncols {
                if m[i][j].is_zero() {
                    continue;
                }
                let better = match pivot {
                    None => true,
                    Some((pi, pj)) => m[i][j].abs() < m[pi][pj].abs(),
                };
                if better {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }

        'reduce: loop {
            // Clear the pivot column by euclidean steps.
            for i in (k + 1)..nrows {
                if m[i][k].is_zero() {
                    continue;
                }
                let q = &m[i][k] / &m[k][k];
                if !q.is_zero() {
                    for j in k..ncols {
                        let sub = &q * &m[k][j];
                        m[i][j] -= sub;
                    }
                }
                if !m[i][k].is_zero() {
                    m.swap(k, i); // smaller remainder becomes the pivot
                    continue 'reduce;
                }
            }
            // Clear the pivot row.
            for j in (k + 1)..ncols {
                if m[k][j].is_zero() {
                    continue;
                }
                let q = &m[k][j] / &m[k][k];
                if !q.is_zero() {
                    for i in k..nrows {
                        let sub = &q * &m[i][k];
                        m[i][j] -= sub;
                    }
                }
                if !m[k][j].is_zero() {
                    for row in m.iter_mut() {
                        row.swap(k, j);
                    }
                    continue 'reduce;
                }
            }
            // Pivot must divide every remaining entry.
            for i in (k + 1)..nrows {
                for j in (k + 1)..ncols {
                    if !(&m[i][j] % &m[k][k]).is_zero() {
                        for col in k..ncols {
                            let add = m[i][col].clone();
                            m[k][col] += add;
                        }
                        continue 'reduce;
                    }
                }
            }
            break;
        }
        if m[k][k].is_negative() {
            let neg = -m[k][k].clone();
            m[k][k] = neg;
        }
        diag.push(m[k][k].clone());
        k += 1;
    }
    diag.retain(|d| !d.is_zero());
    diag
}
