//! Exact dense and sparse Gaussian elimination over ℚ and ℚ(i).

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::Coefficient;

pub trait Field: Clone + PartialEq + Zero + One + Debug {
    fn inverse(&self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
}

impl Field for BigRational {
    fn inverse(&self) -> Self {
        self.recip()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
}

impl Field for Coefficient {
    fn inverse(&self) -> Self {
        self.inv().expect("pivot is nonzero")
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
}

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<F: Field>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse();
        for x in m[r].iter_mut() {
            *x = x.times(&inv);
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    if !m[r][j].is_zero() {
                        let t = f.times(&m[r][j]);
                        m[i][j] = m[i][j].minus(&t);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &[Vec<F>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

pub fn determinant<F: Field>(m: &[Vec<F>]) -> F {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = F::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return F::zero();
        };
        if p != c {
            a.swap(p, c);
            det = F::zero().minus(&det);
        }
        det = det.times(&a[c][c]);
        let inv = a[c][c].inverse();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].times(&inv);
            for j in c..n {
                let t = f.times(&a[c][j]);
                a[i][j] = a[i][j].minus(&t);
            }
        }
    }
    det
}

#[derive(Clone, Debug, PartialEq)]
pub enum Solution<F> {
    Unique(Vec<F>),
    /// Consistent but underdetermined; one particular solution.
    Many(Vec<F>),
    Inconsistent { rank: usize, augmented_rank: usize },
}

/// Solves `a x = b` exactly.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Solution<F> {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent {
            rank: pivots.len() - 1,
            augmented_rank: pivots.len(),
        };
    }
    let mut x = vec![F::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    if pivots.len() == n {
        Solution::Unique(x)
    } else {
        Solution::Many(x)
    }
}

/// Incrementally maintained echelon basis of sparse vectors.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon<F> {
    /// pivot column → row with leading 1 at that column
    rows: BTreeMap<usize, BTreeMap<usize, F>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new() -> Self {
        SparseEchelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, v: &BTreeMap<usize, F>) -> BTreeMap<usize, F> {
        let mut v = v.clone();
        loop {
            let hit = v
                .iter()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, f)) = hit else { break };
            for (j, x) in &self.rows[&c] {
                let t = f.times(x);
                let e = v.entry(*j).or_insert_with(F::zero);
                *e = e.minus(&t);
                if e.is_zero() {
                    v.remove(j);
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &BTreeMap<usize, F>) -> bool {
        let r = self.reduce(v);
        let Some((&c, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.inverse();
        let row: BTreeMap<usize, F> = r.iter().map(|(j, x)| (*j, x.times(&inv))).collect();
        // keep rows reduced with respect to the new pivot
        for other in self.rows.values_mut() {
            if let Some(f) = other.get(&c).cloned() {
                for (j, x) in &row {
                    let t = f.times(x);
                    let e = other.entry(*j).or_insert_with(F::zero);
                    *e = e.minus(&t);
                    if e.is_zero() {
                        other.remove(j);
                    }
                }
            }
        }
        self.rows.insert(c, row);
        true
    }

    pub fn contains(&self, v: &BTreeMap<usize, F>) -> bool {
        self.reduce(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn solve_small_systems() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        assert_eq!(solve(&a, &[q(3), q(5)]), Solution::Unique(vec![
            BigRational::new(4.into(), 5.into()),
            BigRational::new(7.into(), 5.into()),
        ]));
        let sing = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert!(matches!(solve(&sing, &[q(1), q(3)]), Solution::Inconsistent { rank: 1, augmented_rank: 2 }));
        assert!(matches!(solve(&sing, &[q(1), q(2)]), Solution::Many(_)));
        assert_eq!(determinant(&a), q(5));
        assert_eq!(determinant(&sing), q(0));
        assert_eq!(rank(&sing), 1);
    }

    #[test]
    fn sparse_span_membership() {
        let mut e: SparseEchelon<BigRational> = SparseEchelon::new();
        let v = |xs: &[(usize, i64)]| xs.iter().map(|&(c, x)| (c, q(x))).collect::<BTreeMap<_, _>>();
        assert!(e.insert(&v(&[(0, 1), (2, 1)])));
        assert!(e.insert(&v(&[(1, 1), (2, -1)])));
        assert!(!e.insert(&v(&[(0, 2), (1, 2)])));
        assert!(e.contains(&v(&[(0, 1), (1, 1)])));
        assert!(!e.contains(&v(&[(2, 1)])));
        assert_eq!(e.rank(), 2);
    }
}
