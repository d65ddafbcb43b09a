use std::collections::BTreeMap;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::quantum::Channel2;

/// Samples of `Ψ(α, q̄, x, β)` on a uniform `α × β` torus grid, each torus
/// node holding the same list of `(q̄, x)` points. Layout `[ia][ib][point]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusSamples {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub points: usize,
    pub data: Vec<Complex64>,
}

impl TorusSamples {
    pub fn from_fn(n_alpha: usize, n_beta: usize, points: usize, f: impl Fn(f64, f64, usize) -> Complex64) -> Self {
        let tau = std::f64::consts::TAU;
        let mut data = Vec::with_capacity(n_alpha * n_beta * points);
        for ia in 0..n_alpha {
            for ib in 0..n_beta {
                for p in 0..points {
                    data.push(f(tau * ia as f64 / n_alpha as f64, tau * ib as f64 / n_beta as f64, p));
                }
            }
        }
        Self {
            n_alpha,
            n_beta,
            points,
            data,
        }
    }
}

/// Channel amplitudes `f^{mn}` at the `(q̄, x)` points.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMap {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub points: usize,
    pub channels: BTreeMap<Channel2, Vec<Complex64>>,
}

fn frequency(k: usize, n: usize) -> i32 {
    if 2 * k < n {
        k as i32
    } else {
        k as i32 - n as i32
    }
}

fn bin(m: i32, n: usize) -> usize {
    m.rem_euclid(n as i32) as usize
}

/// In-place transform of every `α` and `β` line of `[ia][ib][point]` data.
fn transform(data: &mut [Complex64], na: usize, nb: usize, np: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (fa, fb) = if inverse {
        (planner.plan_fft_inverse(na), planner.plan_fft_inverse(nb))
    } else {
        (planner.plan_fft_forward(na), planner.plan_fft_forward(nb))
    };
    let mut line = vec![Complex64::new(0.0, 0.0); na.max(nb)];
    for ia in 0..na {
        for p in 0..np {
            for ib in 0..nb {
                line[ib] = data[(ia * nb + ib) * np + p];
            }
            fb.process(&mut line[..nb]);
            for ib in 0..nb {
                data[(ia * nb + ib) * np + p] = line[ib];
            }
        }
    }
    for ib in 0..nb {
        for p in 0..np {
            for ia in 0..na {
                line[ia] = data[(ia * nb + ib) * np + p];
            }
            fa.process(&mut line[..na]);
            for ia in 0..na {
                data[(ia * nb + ib) * np + p] = line[ia];
            }
        }
    }
}

/// `f^{mn} = (1/N_α N_β) Σ Ψ e^{−imα} e^{−inβ}`; frequencies run over
/// `−⌈N/2⌉ < m ≤ ⌊N/2⌋` with the Nyquist bin mapped to `−N/2`.
pub fn peter_weyl_reduce_2d(samples: &TorusSamples) -> Result<ChannelMap> {
    let (na, nb, np) = (samples.n_alpha, samples.n_beta, samples.points);
    if na == 0 || nb == 0 || samples.data.len() != na * nb * np {
        return Err(Error::ShapeError(format!(
            "{} samples for a {na}×{nb}×{np} grid",
            samples.data.len()
        )));
    }
    let mut data = samples.data.clone();
    transform(&mut data, na, nb, np, false);
    let scale = 1.0 / (na * nb) as f64;
    let mut channels = BTreeMap::new();
    for ia in 0..na {
        for ib in 0..nb {
            let start = (ia * nb + ib) * np;
            let f = data[start..start + np].iter().map(|z| z * scale).collect();
            channels.insert(Channel2::new(frequency(ia, na), frequency(ib, nb)), f);
        }
    }
    Ok(ChannelMap {
        n_alpha: na,
        n_beta: nb,
        points: np,
        channels,
    })
}

/// Inverse of [`peter_weyl_reduce_2d`]; missing channels count as zero.
pub fn peter_weyl_synthesize_2d(map: &ChannelMap) -> Result<TorusSamples> {
    let (na, nb, np) = (map.n_alpha, map.n_beta, map.points);
    let mut data = vec![Complex64::new(0.0, 0.0); na * nb * np];
    for (ch, f) in &map.channels {
        if f.len() != np {
            return Err(Error::ShapeError(format!(
                "channel {ch:?} has {} points, expected {np}",
                f.len()
            )));
        }
        let (ia, ib) = (bin(ch.m, na), bin(ch.n, nb));
        if frequency(ia, na) != ch.m || frequency(ib, nb) != ch.n {
            return Err(Error::InvalidLabel(format!(
                "channel {ch:?} is not resolved by a {na}×{nb} grid"
            )));
        }
        let start = (ia * nb + ib) * np;
        data[start..start + np].copy_from_slice(f);
    }
    transform(&mut data, na, nb, np, true);
    Ok(TorusSamples {
        n_alpha: na,
        n_beta: nb,
        points: np,
        data,
    })
}
