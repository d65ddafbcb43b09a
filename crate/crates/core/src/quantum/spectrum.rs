use serde::{Deserialize, Serialize};

/// One eigenvalue with its quantum numbers and refinement record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub quantum_numbers: Vec<i64>,
    /// Relative change under grid (and box) refinement.
    pub change: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub channel: String,
    pub levels: Vec<Level>,
    pub grid_points: usize,
    pub domain: (f64, f64),
    pub tolerance: f64,
}

impl Spectrum {
    /// Builds a spectrum, sorting levels ascending by energy.
    pub fn new(
        channel: impl Into<String>,
        mut levels: Vec<Level>,
        grid_points: usize,
        domain: (f64, f64),
        tolerance: f64,
    ) -> Self {
        levels.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        Self {
            channel: channel.into(),
            levels,
            grid_points,
            domain,
            tolerance,
        }
    }

    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }

    pub fn converged(&self) -> impl Iterator<Item = &Level> {
        self.levels.iter().filter(|l| l.converged)
    }
}
