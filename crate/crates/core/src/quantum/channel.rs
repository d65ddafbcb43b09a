use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::HalfInt;

/// Planar channel `(m, n)`: Fourier labels of the spatial and material angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Channel2 {
    pub m: i32,
    pub n: i32,
}

impl Channel2 {
    pub fn new(m: i32, n: i32) -> Self {
        Self { m, n }
    }

    /// All channels with `|m|, |n| ≤ bound`, `m` outer.
    pub fn square(bound: i32) -> Vec<Self> {
        (-bound..=bound)
            .flat_map(|m| (-bound..=bound).map(move |n| Self { m, n }))
            .collect()
    }
}

/// Spatial channel `(s, j)`; both labels are integers or both are half-odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Channel3 {
    pub s: HalfInt,
    pub j: HalfInt,
}

impl Channel3 {
    pub fn new(s: f64, j: f64) -> Result<Self> {
        let (s, j) = (HalfInt::from_f64(s)?, HalfInt::from_f64(j)?);
        if s.is_integer() != j.is_integer() {
            return Err(Error::InvalidLabel(format!("s = {s} and j = {j} differ in halfness")));
        }
        Ok(Self { s, j })
    }

    /// Shape `(2s+1, 2j+1)` of the reduced amplitude.
    pub fn shape(&self) -> (usize, usize) {
        (self.s.dim(), self.j.dim())
    }
}

impl std::fmt::Display for Channel3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.s, self.j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfness_rule() {
        assert!(Channel3::new(0.5, 1.5).is_ok());
        assert!(Channel3::new(1.0, 2.0).is_ok());
        assert!(matches!(Channel3::new(0.5, 1.0), Err(Error::InvalidLabel(_))));
        assert_eq!(Channel3::new(1.0, 0.0).unwrap().shape(), (3, 1));
    }

    #[test]
    fn square_sweep() {
        let all = Channel2::square(4);
        assert_eq!(all.len(), 81);
        assert_eq!(all[0], Channel2::new(-4, -4));
    }
}
