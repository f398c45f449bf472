//! Distinguished Cartan datum of A(m,n) and the attached `q`-series.
//!
//! Nodes are numbered `1..=m+n+1`; node `m+1` is the odd one.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::series::{Series, VarSpec, HBAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanDatum {
    pub m: usize,
    pub n: usize,
}

impl CartanDatum {
    pub fn build(m: usize, n: usize) -> CartanDatum {
        CartanDatum { m, n }
    }

    pub fn size(&self) -> usize {
        self.m + self.n + 1
    }

    pub fn odd_node(&self) -> usize {
        self.m + 1
    }

    pub fn nodes(&self) -> impl Iterator<Item = usize> {
        1..=self.size()
    }

    pub fn check(&self, i: usize) -> Result<()> {
        if (1..=self.size()).contains(&i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                size: self.size(),
            })
        }
    }

    /// Symmetrized Cartan matrix entry `B_ij`.
    pub fn b(&self, i: usize, j: usize) -> i64 {
        let m = self.m;
        if i == j {
            match i.cmp(&(m + 1)) {
                std::cmp::Ordering::Less => 2,
                std::cmp::Ordering::Equal => 0,
                std::cmp::Ordering::Greater => -2,
            }
        } else if i.abs_diff(j) == 1 {
            if i.min(j) <= m {
                -1
            } else {
                1
            }
        } else {
            0
        }
    }

    pub fn d(&self, i: usize) -> i64 {
        if i <= self.m + 1 {
            1
        } else {
            -1
        }
    }

    /// Cartan matrix entry `a_ij = B_ij / d_i`.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.b(i, j) * self.d(i)
    }

    /// `ã_ij = −|a_ij|`, the exponent bound used in the Serre relations.
    pub fn a_tilde(&self, i: usize, j: usize) -> i64 {
        -self.a(i, j).abs()
    }

    pub fn parity(&self, i: usize) -> u8 {
        u8::from(i == self.m + 1)
    }

    pub fn b_matrix(&self) -> Vec<Vec<i64>> {
        self.nodes().map(|i| self.nodes().map(|j| self.b(i, j)).collect()).collect()
    }

    pub fn a_matrix(&self) -> Vec<Vec<i64>> {
        self.nodes().map(|i| self.nodes().map(|j| self.a(i, j)).collect()).collect()
    }

    /// `q_i = exp(d_i ℏ/2)`.
    pub fn q_series(&self, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.check(i)?;
        exp_hbar(spec, BigRational::new(self.d(i).into(), 2.into()))
    }

    /// `q_i^k = exp(k d_i ℏ/2)`.
    pub fn q_pow(&self, i: usize, k: i64, spec: &Arc<VarSpec>) -> Result<Series> {
        self.check(i)?;
        exp_hbar(spec, BigRational::new((k * self.d(i)).into(), 2.into()))
    }

    /// `(q_i − q_i⁻¹)/ℏ = Σ_k d_i^{2k+1} ℏ^{2k} / (4^k (2k+1)!)`.
    pub fn q_diff_over_hbar(&self, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.check(i)?;
        let h = spec
            .graded_index(HBAR)
            .ok_or_else(|| Error::UnknownVariable(HBAR.into()))?;
        let d = self.d(i);
        let mut out = Series::zero(spec);
        let mut den = BigInt::one();
        let mut k = 0i64;
        while 2 * k <= spec.total_order() as i64 {
            if k > 0 {
                den *= BigInt::from(4 * (2 * k) * (2 * k + 1));
            }
            let mut m = vec![0i16; spec.arity()];
            m[h] = (2 * k) as i16;
            // d^{2k+1} = d since d = ±1
            out.add_term(&m, Coefficient::real(BigRational::new(d.into(), den.clone())))?;
            k += 1;
        }
        Ok(out)
    }

    /// `q_i − q_i⁻¹`.
    pub fn q_diff(&self, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.q_diff_over_hbar(i, spec)?.mul_var_pow(HBAR, 1)
    }

    /// `ℏ/(q_i − q_i⁻¹)`, constant term `1/d_i`.
    pub fn hbar_over_q_diff(&self, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.q_diff_over_hbar(i, spec)?.inverse()
    }

    /// `1/(q_i − q_i⁻¹) = ℏ⁻¹ · ℏ/(q_i − q_i⁻¹)`; needs `hbar_floor ≤ −1`.
    pub fn inv_q_diff(&self, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.hbar_over_q_diff(i, spec)?.mul_var_pow(HBAR, -1)
    }

    /// `[n]_{q_i} = Σ_{j<n} q_i^{n−1−2j}`, extended by `[−n] = −[n]`.
    pub fn q_number(&self, n: i64, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        self.check(i)?;
        let mut out = Series::zero(spec);
        let k = n.abs();
        for j in 0..k {
            out = out.add(&self.q_pow(i, k - 1 - 2 * j, spec)?)?;
        }
        Ok(if n < 0 { out.neg() } else { out })
    }

    pub fn q_factorial(&self, n: i64, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        if n < 0 {
            return Err(Error::InvalidArgument(format!("q-factorial of {n}")));
        }
        let mut out = Series::one(spec);
        for k in 1..=n {
            out = out.mul(&self.q_number(k, i, spec)?)?;
        }
        Ok(out)
    }

    pub fn q_binomial(&self, n: i64, k: i64, i: usize, spec: &Arc<VarSpec>) -> Result<Series> {
        if k < 0 || k > n {
            return Err(Error::InvalidArgument(format!("q-binomial [{n} {k}]")));
        }
        let num = self.q_factorial(n, i, spec)?;
        let den = self
            .q_factorial(n - k, i, spec)?
            .mul(&self.q_factorial(k, i, spec)?)?;
        num.mul(&den.inverse()?)
    }
}

/// `exp(c·ℏ)` for rational `c`.
pub fn exp_hbar(spec: &Arc<VarSpec>, c: BigRational) -> Result<Series> {
    Series::var(spec, HBAR)?
        .scale(&Coefficient::real(c))
        .exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hspec(t: u32) -> Arc<VarSpec> {
        VarSpec::graded(&[HBAR], t).unwrap().with_hbar_floor(-1).unwrap()
    }

    #[test]
    fn a11_matrix() {
        let c = CartanDatum::build(1, 1);
        assert_eq!(c.b_matrix(), vec![vec![2, -1, 0], vec![-1, 0, 1], vec![0, 1, -2]]);
        assert_eq!((1..=3).map(|i| c.d(i)).collect::<Vec<_>>(), vec![1, 1, -1]);
        assert_eq!(c.a_matrix(), vec![vec![2, -1, 0], vec![-1, 0, 1], vec![0, -1, 2]]);
        assert_eq!(c.parity(2), 1);
        assert_eq!(c.parity(1), 0);
    }

    #[test]
    fn sl11_and_a20() {
        let c = CartanDatum::build(0, 0);
        assert_eq!(c.size(), 1);
        assert_eq!(c.b_matrix(), vec![vec![0]]);
        assert_eq!(c.parity(1), 1);
        let c = CartanDatum::build(2, 0);
        assert_eq!(c.b_matrix(), vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 0]]);
    }

    #[test]
    fn symmetry_and_factorization() {
        for m in 0..=6 {
            for n in 0..=6 - m {
                let c = CartanDatum::build(m, n);
                for i in c.nodes() {
                    for j in c.nodes() {
                        assert_eq!(c.b(i, j), c.b(j, i));
                        assert_eq!(c.d(i) * c.a(i, j), c.b(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn q_series_examples() {
        let s = hspec(6);
        let c = CartanDatum::build(1, 1);
        let q = c.q_series(1, &s).unwrap();
        assert_eq!(q.coeff(&[1]), Coefficient::from_frac(1, 2));
        assert_eq!(q.coeff(&[2]), Coefficient::from_frac(1, 8));
        assert_eq!(&q * &c.q_pow(1, -1, &s).unwrap(), Series::one(&s));
        let r = c.hbar_over_q_diff(1, &s).unwrap();
        assert_eq!(r.coeff(&[0]), Coefficient::one());
        assert_eq!(r.coeff(&[2]), Coefficient::from_frac(-1, 24));
        assert_eq!(r.coeff(&[4]), Coefficient::from_frac(7, 5760));
        // d = −1 flips the sign
        assert_eq!(c.hbar_over_q_diff(3, &s).unwrap(), r.neg());
        assert!(c.q_series(4, &s).is_err());
    }

    #[test]
    fn q_diff_matches_exponentials() {
        let s = hspec(7);
        let c = CartanDatum::build(1, 1);
        for i in 1..=3 {
            let lhs = c.q_diff(i, &s).unwrap();
            let rhs = &c.q_pow(i, 1, &s).unwrap() - &c.q_pow(i, -1, &s).unwrap();
            assert_eq!(lhs, rhs);
            let prod = &c.inv_q_diff(i, &s).unwrap() * &lhs;
            // one order lost to the ℏ⁻¹ factor
            assert_eq!(prod.truncate_degree(6), Series::one(&s));
        }
    }

    #[test]
    fn q_numbers() {
        let s = hspec(6);
        let c = CartanDatum::build(0, 1);
        for i in 1..=2 {
            assert_eq!(c.q_number(1, i, &s).unwrap(), Series::one(&s));
            assert!(c.q_number(0, i, &s).unwrap().is_zero());
            let two = c.q_number(2, i, &s).unwrap();
            assert_eq!(two.coeff(&[0]), Coefficient::from_int(2));
            assert_eq!(two.coeff(&[2]), Coefficient::from_frac(1, 4));
            assert_eq!(c.q_binomial(2, 1, i, &s).unwrap(), two);
            assert_eq!(c.q_binomial(4, 0, i, &s).unwrap(), Series::one(&s));
            assert!(c.q_binomial(2, 3, i, &s).is_err());
            for n in -6..=6 {
                let lhs = &c.q_number(n, i, &s).unwrap() * &c.q_diff(i, &s).unwrap();
                let rhs = &c.q_pow(i, n, &s).unwrap() - &c.q_pow(i, -n, &s).unwrap();
                assert_eq!(lhs, rhs, "n = {n}, i = {i}");
            }
        }
    }
}
