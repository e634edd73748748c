//! Weighted prefix averages `M_n(T, b̄)(f)(ω) = (1/n) Σ_{k<n} b_k f(T^k ω)`.
//!
//! One pass over the orbit feeds a [`PairwiseAccumulator`]; the running mean
//! is read off at each checkpoint. The per-cell summation order is fixed, so a
//! table is bit-for-bit reproducible regardless of how cells are scheduled.

use std::io::{self, Write};

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frac, frac_mul, sin_pi, turn, Real};
use crate::summation::PairwiseAccumulator;
use crate::system::{DynamicalSystem, Observable, StatePoint};
use crate::weights::WeightSequence;

/// Below this `|q − 1|` the closed form switches to the resonant branch.
pub const RESONANCE_THRESHOLD: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckpointSchedule {
    /// `n = 1, 2, 4, …` up to `n_max`.
    Dyadic {
        n_max: usize,
    },
    /// `n = step, 2·step, …` up to `n_max`.
    Arithmetic {
        step: usize,
        n_max: usize,
    },
    Explicit {
        points: Vec<usize>,
    },
}

impl CheckpointSchedule {
    pub fn checkpoints(&self) -> Result<Vec<usize>> {
        let pts: Vec<usize> = match self {
            CheckpointSchedule::Dyadic { n_max } => {
                if *n_max == 0 {
                    return Err(Error::MalformedSpec("n_max must be at least 1".into()));
                }
                std::iter::successors(Some(1usize), |n| n.checked_mul(2))
                    .take_while(|n| n <= n_max)
                    .collect()
            }
            CheckpointSchedule::Arithmetic { step, n_max } => {
                if *step == 0 || *n_max < *step {
                    return Err(Error::MalformedSpec(
                        "arithmetic schedule needs 1 ≤ step ≤ n_max".into(),
                    ));
                }
                (1..=n_max / step).map(|j| j * step).collect()
            }
            CheckpointSchedule::Explicit { points } => {
                if points.is_empty() || points[0] == 0 || points.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::MalformedSpec(
                        "explicit checkpoints must be positive and strictly increasing".into(),
                    ));
                }
                points.clone()
            }
        };
        Ok(pts)
    }
}

fn running_means<S, I>(terms: I, checkpoints: &[usize]) -> Result<Vec<(usize, Complex<S>)>>
where
    S: Real,
    I: Iterator<Item = Result<Complex<S>>>,
{
    let mut acc = PairwiseAccumulator::new();
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for term in terms {
        acc.push(term?);
        if next.peek().is_some_and(|&&n| n == acc.len()) {
            let n = *next.next().unwrap();
            out.push((n, acc.total() / S::of_usize(n)));
            if next.peek().is_none() {
                break;
            }
        }
    }
    Ok(out)
}

/// `M_n(T, b̄)(f)(ω)` at each checkpoint.
pub fn prefix_averages<S: Real>(
    sys: &DynamicalSystem<S>,
    start: StatePoint<S>,
    f: &Observable<S>,
    w: &WeightSequence<S>,
    schedule: &CheckpointSchedule,
) -> Result<Vec<(usize, Complex<S>)>> {
    sys.admit(f)?;
    let checkpoints = schedule.checkpoints()?;
    let orbit = sys.orbit(start)?;
    let terms = orbit.enumerate().map(|(k, c)| c.map(|c| w.at(k) * f.eval(&c)));
    running_means(terms, &checkpoints)
}

/// Unweighted averages of the modulus, `M_n(T)(|f|)(ω)`.
pub fn modulus_averages<S: Real>(
    sys: &DynamicalSystem<S>,
    start: StatePoint<S>,
    f: &Observable<S>,
    schedule: &CheckpointSchedule,
) -> Result<Vec<(usize, S)>> {
    sys.admit(f)?;
    let checkpoints = schedule.checkpoints()?;
    let terms = sys
        .orbit(start)?
        .map(|c| c.map(|c| Complex::new(f.eval(&c).norm(), S::zero())));
    Ok(running_means(terms, &checkpoints)?
        .into_iter()
        .map(|(n, z)| (n, z.re))
        .collect())
}

/// Averages for every (weight, point) pair on a common checkpoint schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct AverageTable<S> {
    pub point_ids: Vec<usize>,
    pub points: Vec<StatePoint<S>>,
    pub weights: Vec<WeightSequence<S>>,
    pub checkpoints: Vec<usize>,
    pub observable: String,
    /// Entries indexed `[weight][point][checkpoint]`, flattened.
    entries: Vec<Complex<S>>,
}

/// Tag recorded in table metadata.
pub const SUMMATION_MODE: &str = "pairwise-256";

impl<S: Real> AverageTable<S> {
    pub fn n_weights(&self) -> usize {
        self.weights.len()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, weight: usize, point: usize, checkpoint: usize) -> Complex<S> {
        let np = self.points.len();
        let nc = self.checkpoints.len();
        self.entries[(weight * np + point) * nc + checkpoint]
    }

    /// The prefix series of one (weight, point) cell.
    pub fn series(&self, weight: usize, point: usize) -> Vec<(usize, Complex<S>)> {
        let nc = self.checkpoints.len();
        let base = (weight * self.points.len() + point) * nc;
        self.checkpoints
            .iter()
            .copied()
            .zip(self.entries[base..base + nc].iter().copied())
            .collect()
    }

    /// The sub-table on the given point positions, in that order.
    pub fn restrict_points(&self, positions: &[usize]) -> AverageTable<S> {
        let mut entries = Vec::with_capacity(self.weights.len() * positions.len() * self.checkpoints.len());
        for w in 0..self.weights.len() {
            for &p in positions {
                entries.extend(self.series(w, p).into_iter().map(|(_, z)| z));
            }
        }
        AverageTable {
            point_ids: positions.iter().map(|&p| self.point_ids[p]).collect(),
            points: positions.iter().map(|&p| self.points[p]).collect(),
            weights: self.weights.clone(),
            checkpoints: self.checkpoints.clone(),
            observable: self.observable.clone(),
            entries,
        }
    }

    /// Builds a table from raw entries indexed `[weight][point][checkpoint]`.
    pub fn from_entries(
        point_ids: Vec<usize>,
        points: Vec<StatePoint<S>>,
        weights: Vec<WeightSequence<S>>,
        checkpoints: Vec<usize>,
        observable: String,
        entries: Vec<Complex<S>>,
    ) -> Result<Self> {
        if point_ids.len() != points.len() || entries.len() != weights.len() * points.len() * checkpoints.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for {} weights × {} points × {} checkpoints",
                entries.len(),
                weights.len(),
                points.len(),
                checkpoints.len()
            )));
        }
        Ok(AverageTable {
            point_ids,
            points,
            weights,
            checkpoints,
            observable,
            entries,
        })
    }

    /// CSV with columns `weight_id,theta_or_kind,point_id,n,re,im`, 17
    /// significant digits, LF line endings.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "weight_id,theta_or_kind,point_id,n,re,im")?;
        for (wi, w) in self.weights.iter().enumerate() {
            let label = w.label();
            for (pi, pid) in self.point_ids.iter().enumerate() {
                for (ci, n) in self.checkpoints.iter().enumerate() {
                    let z = self.get(wi, pi, ci);
                    writeln!(
                        out,
                        "{wi},{label},{pid},{n},{:.16e},{:.16e}",
                        z.re.to_f64_lossy(),
                        z.im.to_f64_lossy()
                    )?;
                }
            }
        }
        Ok(())
    }
}

/// Fills an [`AverageTable`]. Cells run in parallel on the current rayon
/// pool; results do not depend on the pool size.
pub fn average_table<S: Real>(
    sys: &DynamicalSystem<S>,
    points: &[(usize, StatePoint<S>)],
    f: &Observable<S>,
    weights: &[WeightSequence<S>],
    schedule: &CheckpointSchedule,
) -> Result<AverageTable<S>> {
    sys.admit(f)?;
    let checkpoints = schedule.checkpoints()?;
    for (_, p) in points {
        sys.check_point(p)?;
    }
    let cells: Vec<(usize, usize)> = (0..weights.len())
        .flat_map(|w| (0..points.len()).map(move |p| (w, p)))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(w, p)| prefix_averages(sys, points[p].1, f, &weights[w], schedule))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(rows.len() * checkpoints.len());
    for row in rows {
        // a short row means the orbit ended early, which cannot happen here
        debug_assert_eq!(row.len(), checkpoints.len());
        entries.extend(row.into_iter().map(|(_, z)| z));
    }
    Ok(AverageTable {
        point_ids: points.iter().map(|(id, _)| *id).collect(),
        points: points.iter().map(|(_, p)| *p).collect(),
        weights: weights.to_vec(),
        checkpoints,
        observable: f.name().into(),
        entries,
    })
}

fn frac_mul_signed<S: Real>(k: i64, x: S) -> S {
    let r = frac_mul(k.unsigned_abs(), x);
    if k < 0 {
        frac(-r)
    } else {
        r
    }
}

/// Closed form of `M_n(T, λ)(f)(ω)` for a rotation by `α`, weight
/// `λ = e^{2πiθ}` and eigenfunction `f = e^{2πi k_f x}`:
/// `e^{2πi k_f ω} · (1/n)(q^n − 1)/(q − 1)` with `q = e^{2πi(θ + k_f α)}`.
pub fn character_closed_form<S: Real>(alpha: S, theta: S, omega: S, k_f: i64, n: usize) -> Complex<S> {
    let eigen = turn(frac_mul_signed(k_f, omega));
    let phi = frac(theta + frac_mul_signed(k_f, alpha));
    // |q − 1| = 2|sin(πφ)|
    let half_gap = sin_pi(phi);
    if (S::lit(2.0) * half_gap).abs() <= S::lit(RESONANCE_THRESHOLD) {
        return eigen;
    }
    // q^n with error-free phase products
    let phase_n = frac(frac_mul(n as u64, theta) + frac_mul_signed(k_f.wrapping_mul(n as i64), alpha));
    let numerator = turn(phase_n) - Complex::new(S::one(), S::zero());
    // q − 1 = 2i sin(πφ) e^{iπφ}
    let denominator = Complex::new(S::zero(), S::lit(2.0) * half_gap) * turn(phi / S::lit(2.0));
    eigen * numerator / (denominator * S::of_usize(n))
}
