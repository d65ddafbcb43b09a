use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// Twice a non-negative half-integer, so `j = twice / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(pub u32);

impl HalfInt {
    pub fn from_f64(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !j.is_finite() || j < 0.0 || (twice - twice.round()).abs() > 1e-12 || twice > 1e6 {
            return Err(Error::InvalidLabel(format!("{j} is not a non-negative half-integer")));
        }
        Ok(HalfInt(twice.round() as u32))
    }

    pub fn value(self) -> f64 {
        0.5 * self.0 as f64
    }

    pub fn dim(self) -> usize {
        self.0 as usize + 1
    }

    pub fn is_integer(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Spin matrices `S_1, S_2, S_3` in the `|j, m⟩` basis ordered `m = j, j−1, …, −j`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularMatrices {
    pub j: HalfInt,
    pub hbar: f64,
    pub s: [CMat; 3],
}

impl AngularMatrices {
    pub fn dim(&self) -> usize {
        self.j.dim()
    }

    /// `Σ_a S_a²`.
    pub fn casimir(&self) -> CMat {
        self.s
            .iter()
            .map(|m| m * m)
            .fold(CMat::zeros(self.dim(), self.dim()), |acc, m| acc + m)
    }
}

/// Ladder-operator construction of the standard matrices.
pub fn angular_momentum_matrices(j: f64, hbar: f64) -> Result<AngularMatrices> {
    let j = HalfInt::from_f64(j)?;
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(Error::InvalidArgument(format!("ħ must be positive, got {hbar}")));
    }
    let d = j.dim();
    let jv = j.value();
    let m_of = |k: usize| jv - k as f64;
    // S₊|m⟩ = ħ√(j(j+1) − m(m+1)) |m+1⟩; row k−1 holds m+1 when column k holds m.
    let mut plus = CMat::zeros(d, d);
    for k in 1..d {
        let m = m_of(k);
        plus[(k - 1, k)] = Complex64::new(hbar * (jv * (jv + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let minus = plus.adjoint();
    let s1 = (&plus + &minus).map(|z| z * 0.5);
    let s2 = (&plus - &minus).map(|z| z / Complex64::new(0.0, 2.0));
    let s3 = CMat::from_diagonal(&nalgebra::DVector::from_fn(d, |k, _| {
        Complex64::new(hbar * m_of(k), 0.0)
    }));
    Ok(AngularMatrices {
        j,
        hbar,
        s: [s1, s2, s3],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &CMat) -> f64 {
        m.iter().fold(0.0_f64, |a, z| a.max(z.norm()))
    }

    #[test]
    fn spin_zero_is_trivial() {
        let a = angular_momentum_matrices(0.0, 1.0).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.s.iter().all(|m| max_abs(m) == 0.0));
    }

    #[test]
    fn spin_half_is_pauli() {
        let hbar = 1.3;
        let a = angular_momentum_matrices(0.5, hbar).unwrap();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let sx = CMat::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]);
        let sy = CMat::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let sz = CMat::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]);
        for (s, sigma) in a.s.iter().zip([sx, sy, sz]) {
            assert!(max_abs(&(s - sigma.map(|z| z * (hbar / 2.0)))) < 1e-15);
        }
    }

    #[test]
    fn spin_one_casimir() {
        let a = angular_momentum_matrices(1.0, 1.0).unwrap();
        let diff = a.casimir() - CMat::identity(3, 3).map(|z| z * 2.0);
        assert!(max_abs(&diff) < 1e-12);
    }

    #[test]
    fn commutators_for_several_spins() {
        let hbar = 0.7;
        for twice in 0..=8u32 {
            let a = angular_momentum_matrices(twice as f64 / 2.0, hbar).unwrap();
            let i_hbar = Complex64::new(0.0, hbar);
            for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                let comm = &a.s[x] * &a.s[y] - &a.s[y] * &a.s[x];
                assert!(max_abs(&(comm - a.s[z].map(|v| v * i_hbar))) < 1e-12);
            }
            let jv = twice as f64 / 2.0;
            let expected = CMat::identity(a.dim(), a.dim()).map(|v| v * hbar * hbar * jv * (jv + 1.0));
            assert!(max_abs(&(a.casimir() - expected)) < 1e-12);
            for m in &a.s {
                assert!(max_abs(&(m - m.adjoint())) < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_non_half_integers() {
        assert!(matches!(
            angular_momentum_matrices(0.3, 1.0),
            Err(Error::InvalidLabel(_))
        ));
        assert!(matches!(
            angular_momentum_matrices(-1.0, 1.0),
            Err(Error::InvalidLabel(_))
        ));
    }
}
