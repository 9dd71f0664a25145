use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Sparse integer matrix; only nonzero entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if v == 0 {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn column(&self, j: usize) -> Vec<(usize, i64)> {
        self.entries
            .iter()
            .filter(|((_, c), _)| *c == j)
            .map(|(&(r, _), &v)| (r, v))
            .collect()
    }

    /// Exact product; panics on a dimension mismatch.
    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (&(i, j), &v) in &rhs.entries {
            by_row.entry(i).or_default().push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (&(i, k), &a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(j, b) in row {
                    *acc.entry((i, j)).or_insert(0) += a * b;
                }
            }
        }
        acc.retain(|_, v| *v != 0);
        IntegerMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries: acc,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Invariant factors of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Positive diagonal entries `d₁ | d₂ | ⋯`.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithForm {
    /// Divisors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.divisors.iter().filter(|d| **d > BigInt::from(1)).cloned().collect()
    }

    pub fn all_units(&self) -> bool {
        self.divisors.iter().all(|d| *d == BigInt::from(1))
    }
}

/// Smith normal form over ℤ with arbitrary-precision arithmetic.
///
/// The pivot is always an entry of least absolute value in the remaining
/// block; after the pivot row and column are cleared, any entry of the block
/// not divisible by the pivot is folded into the pivot row and the step is
/// repeated, so the divisors come out as a divisibility chain.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); cols]; rows];
    for (&(i, j), &v) in &m.entries {
        a[i][j] = BigInt::from(v);
    }
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows && t < cols {
        let Some((pi, pj)) = min_abs_nonzero(&a, t, t..rows, t..cols) else {
            break;
        };
        swap_rows_cols(&mut a, t, pi, pj);
        loop {
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for k in t..cols {
                    if !a[t][k].is_zero() {
                        let d = &q * &a[t][k];
                        a[i][k] -= d;
                    }
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                }
            }
            let col_left = (t + 1..rows).find(|&i| !a[i][t].is_zero());
            let row_left = (t + 1..cols).find(|&j| !a[t][j].is_zero());
            if col_left.is_some() || row_left.is_some() {
                // a remainder smaller than the pivot survived; re-pivot on it
                let (pi, pj) = min_abs_in_cross(&a, t);
                swap_rows_cols(&mut a, t, pi, pj);
                continue;
            }
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]))
            });
            match offender {
                Some(i) => {
                    for k in t..cols {
                        let v = a[i][k].clone();
                        a[t][k] += v;
                    }
                }
                None => break,
            }
        }
        divisors.push(a[t][t].abs());
        t += 1;
    }
    let rank = divisors.len();
    SmithForm { divisors, rank }
}

fn min_abs_nonzero(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = &a[i][j];
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            let better = best.as_ref().is_none_or(|(_, b)| abs < *b);
            if better {
                let one = abs == BigInt::from(1);
                best = Some(((i, j), abs));
                if one {
                    return best.map(|(p, _)| p);
                }
            }
        }
    }
    best.map(|(p, _)| p)
}

fn min_abs_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let rows = a.len();
    let cols = a[0].len();
    let cands = (t..rows)
        .map(|i| (i, t))
        .chain((t + 1..cols).map(|j| (t, j)))
        .filter(|&(i, j)| !a[i][j].is_zero());
    cands
        .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        .expect("cross has a nonzero entry")
}

fn swap_rows_cols(a: &mut [Vec<BigInt>], t: usize, pi: usize, pj: usize) {
    a.swap(t, pi);
    if pj != t {
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(m: &IntegerMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn zero_matrix() {
        let s = smith_normal_form(&IntegerMatrix::zeros(3, 4));
        assert!(s.divisors.is_empty());
        assert_eq!(s.rank, 0);
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(0, 5)).rank, 0);
    }

    #[test]
    fn diag_two_three() {
        // hand reduction: diag(2,3) ~ diag(1,6)
        let m = IntegerMatrix::from_dense(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(divisors(&m), vec![1, 6]);
    }

    #[test]
    fn known_forms() {
        let m = IntegerMatrix::from_dense(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(divisors(&m), vec![2, 6, 12]);
        let m = IntegerMatrix::from_dense(&[vec![4, 6], vec![6, 9]]);
        assert_eq!(divisors(&m), vec![1]);
        let m = IntegerMatrix::from_dense(&[vec![0, 0, 5], vec![0, 0, 0]]);
        assert_eq!(divisors(&m), vec![5]);
    }

    #[test]
    fn large_entries_do_not_overflow() {
        let big = i64::MAX / 2;
        let m = IntegerMatrix::from_dense(&[vec![big, big - 1], vec![big - 1, big]]);
        let s = smith_normal_form(&m);
        // det = 2·big − 1, gcd of entries 1
        assert_eq!(s.divisors[0], BigInt::from(1));
        assert_eq!(s.divisors[1], BigInt::from(2) * BigInt::from(big) - 1);
    }

    #[test]
    fn product() {
        let a = IntegerMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = IntegerMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b), IntegerMatrix::from_dense(&[vec![1, 0], vec![0, 1]]));
    }
}
