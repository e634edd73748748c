//! Inequality checkers and the almost-uniform convergence apparatus.
//!
//! * [`vdc_bound`] / [`vdc_check`]: the Van der Corput estimate
//!   `‖(1/n)Σ f_k‖²_∞ < (2/(m+1))‖(1/n)Σ|f_k|²‖_∞ + (4/(m+1)) Σ_{l=1}^{m} ‖(1/n)Σ f̄_k f_{k+l}‖_∞`.
//! * [`maximal_check`]: `μ{max_{n ≤ N} M_n(|g|) > t} ≤ (2‖g‖_p/t)^p`.
//! * [`egorov_estimate`] / [`au_ww_report`]: a common exceptional set outside
//!   of which every weight's averages are Cauchy within `δ` past `N`.

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use crate::averages::{average_table, AverageTable, CheckpointSchedule};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::summation::{pairwise_sum, pairwise_sum_by, PairwiseAccumulator};
use crate::system::{DynamicalSystem, HopfTag, Observable, StatePoint};
use crate::weights::WeightSequence;

/// Below this the right-hand side counts as zero.
pub const DEGENERATE_RHS: f64 = 1e-15;

/// `n` sequences `f_0..f_{n−1}` sampled on a common point set.
#[derive(Debug, Clone, PartialEq)]
pub struct VdcInput<S> {
    /// `values[k][p] = f_k(p)`.
    pub values: Vec<Vec<Complex<S>>>,
    /// Point masses; points of zero mass do not count towards sup norms.
    pub masses: Vec<S>,
    pub m: usize,
}

impl<S: Real> VdcInput<S> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.values.len();
        if n == 0 {
            return Err(Error::DimensionMismatch("need n ≥ 1 sequences".into()));
        }
        if self.m > n - 1 {
            return Err(Error::DimensionMismatch(format!(
                "m = {} exceeds n − 1 = {}",
                self.m,
                n - 1
            )));
        }
        let points = self.masses.len();
        if let Some(k) = self.values.iter().position(|v| v.len() != points) {
            return Err(Error::DimensionMismatch(format!(
                "f_{k} has {} samples, masses have {points}",
                self.values[k].len()
            )));
        }
        if self.masses.iter().any(|m| !(*m >= S::zero())) {
            return Err(Error::DimensionMismatch("masses must be nonnegative".into()));
        }
        Ok(())
    }

    /// Max over points of positive mass.
    fn sup(&self, per_point: impl Fn(usize) -> S) -> S {
        (0..self.masses.len())
            .filter(|&p| self.masses[p] > S::zero())
            .map(per_point)
            .fold(S::zero(), S::max)
    }
}

/// Both sides of the Van der Corput estimate, with `f_k = 0` for `k ≥ n`.
pub fn vdc_bound<S: Real>(input: &VdcInput<S>) -> Result<(S, S)> {
    input.validate()?;
    let n = input.n();
    let m = input.m;
    let nn = S::of_usize(n);
    let f = &input.values;

    let lhs = input.sup(|p| (pairwise_sum_by(n, |k| f[k][p]) / nn).norm_sqr());
    let energy = input.sup(|p| pairwise_sum_by(n, |k| f[k][p].norm_sqr()) / nn);
    let lags: Vec<S> = (1..=m)
        .map(|l| input.sup(|p| (pairwise_sum_by(n - l, |k| f[k][p].conj() * f[k + l][p]) / nn).norm()))
        .collect();
    let m1 = S::of_usize(m + 1);
    let rhs = S::lit(2.0) / m1 * energy + S::lit(4.0) / m1 * pairwise_sum(&lags);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, PartialEq)]
pub enum VdcVerdict<S> {
    StrictHold,
    /// Both sides vanish, so the strict inequality cannot hold.
    DegenerateEquality,
    Violation {
        lhs: S,
        rhs: S,
    },
}

pub fn vdc_check<S: Real>(input: &VdcInput<S>) -> Result<VdcVerdict<S>> {
    let (lhs, rhs) = vdc_bound(input)?;
    Ok(if rhs <= S::lit(DEGENERATE_RHS) && lhs <= rhs {
        VdcVerdict::DegenerateEquality
    } else if lhs < rhs {
        VdcVerdict::StrictHold
    } else {
        VdcVerdict::Violation { lhs, rhs }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalReport<S> {
    pub exceedance_mass: S,
    pub bound: S,
    pub ok: bool,
}

/// Truncated maximal inequality on a finite system: `exceedance_mass` is the
/// mass of states with `max_{1 ≤ n ≤ n_max} M_n(T)(|g|) > t`.
pub fn maximal_check<S: Real>(
    sys: &DynamicalSystem<S>,
    g: &Observable<S>,
    p: u32,
    t: S,
    n_max: usize,
) -> Result<MaximalReport<S>> {
    if !sys.is_finite_permutation() {
        return Err(Error::NotFiniteSystem);
    }
    if p == 0 || !(t > S::zero()) || n_max == 0 {
        return Err(Error::MalformedSpec(
            "maximal check needs p ≥ 1, t > 0 and N_max ≥ 1".into(),
        ));
    }
    sys.admit(g)?;
    let cells = sys.cells();
    let rows = cells
        .par_iter()
        .map(|cell| {
            let start = sys.cell_point(cell)?;
            let mass = sys.cell_mass(cell)?;
            let g0 = g.eval(&start.coord).norm();
            let mut acc = PairwiseAccumulator::new();
            let mut sup = S::neg_infinity();
            for c in sys.orbit(start)?.take(n_max) {
                acc.push(g.eval(&c?).norm());
                sup = sup.max(acc.total() / S::of_usize(acc.len()));
            }
            Ok((mass, g0.powi(p as i32) * mass, if sup > t { mass } else { S::zero() }))
        })
        .collect::<Result<Vec<_>>>()?;
    let norm_p = pairwise_sum(&rows.iter().map(|r| r.1).collect::<Vec<_>>()).powf(S::one() / S::of_usize(p as usize));
    let exceedance_mass = pairwise_sum(&rows.iter().map(|r| r.2).collect::<Vec<_>>());
    let bound = (S::lit(2.0) * norm_p / t).powi(p as i32);
    Ok(MaximalReport {
        exceedance_mass,
        bound,
        ok: exceedance_mass <= bound,
    })
}

/// `max |M_a − M_b|` over checkpoint pairs `a, b ≥ n_start`.
pub fn cauchy_deviation<S: Real>(prefix: &[(usize, Complex<S>)], n_start: usize) -> Result<S> {
    let tail: Vec<Complex<S>> = prefix.iter().filter(|(n, _)| *n >= n_start).map(|(_, z)| *z).collect();
    if tail.len() < 2 {
        return Err(Error::InsufficientCheckpoints {
            start: n_start,
            found: tail.len(),
        });
    }
    let mut best = S::zero();
    for (i, a) in tail.iter().enumerate() {
        for b in &tail[i + 1..] {
            best = best.max((*a - *b).norm());
        }
    }
    Ok(best)
}

/// Largest Cauchy deviation past `n_start` over all points of a table for
/// one weight.
pub fn table_deviation<S: Real>(table: &AverageTable<S>, weight: usize, n_start: usize) -> Result<S> {
    let mut best = S::zero();
    for p in 0..table.n_points() {
        best = best.max(cauchy_deviation(&table.series(weight, p), n_start)?);
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConvergenceVerdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightConvergence<S> {
    pub weight_id: usize,
    /// Smallest checkpoint past which the retained points stay within `δ`.
    pub n_lambda: usize,
    pub deviation: S,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport<S> {
    /// Target exceptional mass; equal to the removed mass until a target is
    /// set with [`ConvergenceReport::with_target`].
    pub epsilon: S,
    pub delta: S,
    pub n_start: usize,
    /// `(point_id, mass)` in removal order.
    pub removed: Vec<(usize, S)>,
    pub removed_mass: S,
    pub retained_mass: S,
    /// Point ids of the retained set, ascending.
    pub retained: Vec<usize>,
    pub per_weight: Vec<WeightConvergence<S>>,
    /// Every point with a nonzero score had to go.
    pub total_removal: bool,
    pub verdict: ConvergenceVerdict,
}

impl<S: Real> ConvergenceReport<S> {
    pub fn with_target(mut self, epsilon: S) -> Self {
        self.epsilon = epsilon;
        self.verdict = if self.removed_mass <= epsilon {
            ConvergenceVerdict::Pass
        } else {
            ConvergenceVerdict::Fail
        };
        self
    }
}

/// Greedy exceptional-set search. Each point is scored by its worst Cauchy
/// deviation past `n_start` over all weights; points are removed from the
/// highest score down (ties by ascending id) until every retained score is
/// at most `delta`. The retained set is shared by all weights.
pub fn egorov_estimate<S: Real>(
    table: &AverageTable<S>,
    masses: &[S],
    delta: S,
    n_start: usize,
) -> Result<ConvergenceReport<S>> {
    if masses.len() != table.n_points() {
        return Err(Error::DimensionMismatch(format!(
            "{} masses for {} points",
            masses.len(),
            table.n_points()
        )));
    }
    if !table.checkpoints.contains(&n_start) {
        let found = table.checkpoints.iter().filter(|&&n| n >= n_start).count();
        return Err(Error::InsufficientCheckpoints {
            start: n_start,
            found: found.min(1),
        });
    }
    let scores = (0..table.n_points())
        .into_par_iter()
        .map(|p| {
            let mut s = S::zero();
            for w in 0..table.n_weights() {
                s = s.max(cauchy_deviation(&table.series(w, p), n_start)?);
            }
            Ok(s)
        })
        .collect::<Result<Vec<S>>>()?;

    let mut order: Vec<usize> = (0..table.n_points()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(table.point_ids[a].cmp(&table.point_ids[b]))
    });
    let cut = order.iter().take_while(|&&p| scores[p] > delta).count();
    let removed: Vec<(usize, S)> = order[..cut].iter().map(|&p| (table.point_ids[p], masses[p])).collect();
    let mut kept: Vec<usize> = order[cut..].to_vec();
    kept.sort_by_key(|&p| table.point_ids[p]);

    let removed_mass = pairwise_sum(&removed.iter().map(|r| r.1).collect::<Vec<_>>());
    let retained_mass = pairwise_sum(&kept.iter().map(|&p| masses[p]).collect::<Vec<_>>());
    let total_removal = cut > 0 && kept.iter().all(|&p| scores[p].is_zero());

    let start_index = table
        .checkpoints
        .iter()
        .position(|&n| n == n_start)
        .expect("checked above");
    let per_weight = (0..table.n_weights())
        .into_par_iter()
        .map(|w| {
            let deviation_at = |n: usize| -> Result<S> {
                let mut d = S::zero();
                for &p in &kept {
                    d = d.max(cauchy_deviation(&table.series(w, p), n)?);
                }
                Ok(d)
            };
            // deviation is nonincreasing in the start, so the first hit is minimal
            for &n in &table.checkpoints[..=start_index] {
                let d = deviation_at(n)?;
                if d <= delta {
                    return Ok(WeightConvergence {
                        weight_id: w,
                        n_lambda: n,
                        deviation: d,
                    });
                }
            }
            unreachable!("retained points are within delta at n_start")
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ConvergenceReport {
        epsilon: removed_mass,
        delta,
        n_start,
        removed,
        removed_mass,
        retained_mass,
        retained: kept.iter().map(|&p| table.point_ids[p]).collect(),
        per_weight,
        total_removal,
        verdict: ConvergenceVerdict::Pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartReport<S> {
    pub part: usize,
    pub hopf: HopfTag,
    pub report: ConvergenceReport<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuWwReport<S> {
    pub table: AverageTable<S>,
    pub overall: ConvergenceReport<S>,
    /// One entry per part for unions, empty otherwise. Each part is judged
    /// against `ε / (number of parts)`.
    pub per_part: Vec<PartReport<S>>,
}

impl<S: Real> AuWwReport<S> {
    pub fn verdict(&self) -> ConvergenceVerdict {
        self.overall.verdict
    }
}

/// Average table followed by the exceptional-set search. Point masses are
/// the cell masses of the points' cells when `masses` is `None`.
#[allow(clippy::too_many_arguments)]
pub fn au_ww_report<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
    weights: &[WeightSequence<S>],
    points: &[(usize, StatePoint<S>)],
    masses: &[S],
    schedule: &CheckpointSchedule,
    epsilon: S,
    delta: S,
    n_start: usize,
) -> Result<AuWwReport<S>> {
    let table = average_table(sys, points, f, weights, schedule)?;
    let overall = egorov_estimate(&table, masses, delta, n_start)?.with_target(epsilon);
    let mut per_part = Vec::new();
    if sys.is_union() {
        let share = epsilon / S::of_usize(sys.parts().len());
        for (pid, part) in sys.parts().iter().enumerate() {
            let positions: Vec<usize> = (0..points.len()).filter(|&i| points[i].1.part == pid).collect();
            let sub = table.restrict_points(&positions);
            let sub_masses: Vec<S> = positions.iter().map(|&i| masses[i]).collect();
            let report = egorov_estimate(&sub, &sub_masses, delta, n_start)?.with_target(share);
            per_part.push(PartReport {
                part: pid,
                hopf: part.hopf,
                report,
            });
        }
    }
    Ok(AuWwReport {
        table,
        overall,
        per_part,
    })
}

/// The all-zero input, where both sides vanish.
pub fn zero_input<S: Real>(n: usize, points: usize, m: usize) -> VdcInput<S> {
    VdcInput {
        values: vec![vec![Complex::zero(); points]; n],
        masses: vec![S::one() / S::of_usize(points); points],
        m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::turn;
    use crate::system::{build_system, SystemSpec};
    use crate::weights::character_grid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn vdc_degenerate_and_single_term() {
        let z = zero_input::<f64>(5, 3, 2);
        assert_eq!(vdc_bound(&z).unwrap(), (0.0, 0.0));
        assert_eq!(vdc_check(&z).unwrap(), VdcVerdict::DegenerateEquality);

        let one = VdcInput {
            values: vec![vec![c(0.5), c(-2.0)]],
            masses: vec![0.5, 0.5],
            m: 0,
        };
        assert_eq!(vdc_bound(&one).unwrap(), (4.0, 8.0));
        assert_eq!(vdc_check(&one).unwrap(), VdcVerdict::StrictHold);
    }

    #[test]
    fn vdc_matches_double_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let (n, m, pts) = (256, 16, 8);
        let values: Vec<Vec<Complex<f64>>> = (0..n)
            .map(|_| (0..pts).map(|_| turn(rng.random::<f64>())).collect())
            .collect();
        let input = VdcInput {
            values: values.clone(),
            masses: vec![0.125; pts],
            m,
        };
        let (lhs, rhs) = vdc_bound(&input).unwrap();

        let mut l_ref = 0f64;
        let mut e_ref = 0f64;
        let mut lag_ref = vec![0f64; m + 1];
        for p in 0..pts {
            let mut s = Complex::zero();
            let mut e = 0.0;
            for k in 0..n {
                s += values[k][p];
                e += values[k][p].norm_sqr();
            }
            l_ref = l_ref.max((s / n as f64).norm_sqr());
            e_ref = e_ref.max(e / n as f64);
            for l in 1..=m {
                let mut a = Complex::zero();
                for k in 0..n {
                    let next = if k + l < n { values[k + l][p] } else { Complex::zero() };
                    a += values[k][p].conj() * next;
                }
                lag_ref[l] = lag_ref[l].max((a / n as f64).norm());
            }
        }
        let r_ref = 2.0 / (m + 1) as f64 * e_ref + 4.0 / (m + 1) as f64 * lag_ref[1..].iter().sum::<f64>();
        assert!((lhs - l_ref).abs() < 1e-13);
        assert!((rhs - r_ref).abs() < 1e-13);
        assert!(lhs < rhs);
        assert_eq!(vdc_check(&input).unwrap(), VdcVerdict::StrictHold);
    }

    #[test]
    fn vdc_rejects_bad_dimensions() {
        let mut z = zero_input::<f64>(3, 2, 2);
        z.values[1].pop();
        assert!(matches!(vdc_bound(&z), Err(Error::DimensionMismatch(_))));
        assert!(vdc_bound(&zero_input::<f64>(3, 2, 3)).is_err());
    }

    fn swap() -> DynamicalSystem<f64> {
        build_system(&SystemSpec::FinitePermutation {
            masses: vec![0.5, 0.5],
            permutation: vec![1, 0],
            density: None,
            hopf: None,
        })
        .unwrap()
    }

    #[test]
    fn maximal_swap_case() {
        let r = maximal_check(&swap(), &Observable::tabulated_real(&[1.0, 0.0]), 1, 0.6, 2).unwrap();
        assert_eq!(r.exceedance_mass, 0.5);
        assert!((r.bound - 5.0 / 3.0).abs() < 1e-15);
        assert!(r.ok);
        let r = maximal_check(&swap(), &Observable::zero(), 2, 0.1, 8).unwrap();
        assert_eq!((r.exceedance_mass, r.bound, r.ok), (0.0, 0.0, true));
    }

    #[test]
    fn maximal_cyclic_eight_against_enumeration() {
        let sys = build_system::<f64>(&SystemSpec::Cyclic {
            n: 8,
            density: None,
            hopf: None,
        })
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g: Vec<f64> = (0..8).map(|_| rng.random()).collect();
        let obs = Observable::tabulated_real(&g);
        for t in [0.25, 0.5, 1.0] {
            let r = maximal_check(&sys, &obs, 2, t, 64).unwrap();
            let mut exceed = 0.0;
            for x in 0..8 {
                let mut s = 0.0;
                let mut sup = f64::NEG_INFINITY;
                for n in 1..=64 {
                    s += g[(x + n - 1) % 8];
                    sup = sup.max(s / n as f64);
                }
                if sup > t {
                    exceed += 0.125;
                }
            }
            let norm2 = (g.iter().map(|v| v * v).sum::<f64>() / 8.0).sqrt();
            assert_eq!(r.exceedance_mass, exceed);
            assert!((r.bound - (2.0 * norm2 / t).powi(2)).abs() < 1e-14);
            assert!(r.ok);
        }
    }

    #[test]
    fn maximal_needs_finite_system() {
        let z = build_system::<f64>(&SystemSpec::IntegerShift { window: 2, hopf: None }).unwrap();
        assert_eq!(
            maximal_check(&z, &Observable::DeltaState(0), 1, 0.5, 4).unwrap_err(),
            Error::NotFiniteSystem
        );
    }

    #[test]
    fn cauchy_examples() {
        let series: Vec<_> = [2usize, 4, 8].iter().map(|&n| (n, c(1.0 / n as f64))).collect();
        assert_eq!(cauchy_deviation(&series, 2).unwrap(), 0.375);
        let constant: Vec<_> = (1..5).map(|n| (n, c(3.0))).collect();
        assert_eq!(cauchy_deviation(&constant, 1).unwrap(), 0.0);
        assert_eq!(
            cauchy_deviation(&series, 8).unwrap_err(),
            Error::InsufficientCheckpoints { start: 8, found: 1 }
        );
    }

    fn shift_table() -> (AverageTable<f64>, Vec<f64>) {
        let sys = build_system::<f64>(&SystemSpec::IntegerShift { window: 9, hopf: None }).unwrap();
        let points: Vec<_> = (0..10).map(|i| (i as usize, StatePoint::index(0, i))).collect();
        let table = average_table(
            &sys,
            &points,
            &Observable::DeltaState(0),
            &character_grid(8),
            &CheckpointSchedule::Dyadic { n_max: 1 << 10 },
        )
        .unwrap();
        (table, vec![1.0; 10])
    }

    #[test]
    fn egorov_on_integer_shift_removes_nothing() {
        let (table, masses) = shift_table();
        let r = egorov_estimate(&table, &masses, 0.5, 2).unwrap().with_target(0.0);
        assert!(r.removed.is_empty());
        assert_eq!(r.removed_mass, 0.0);
        assert_eq!(r.retained_mass, 10.0);
        assert_eq!(r.verdict, ConvergenceVerdict::Pass);
        assert!(r.per_weight.iter().all(|w| w.deviation <= 0.5 && w.n_lambda <= 2));
    }

    #[test]
    fn egorov_on_constants_and_zero_tolerance() {
        let w = character_grid::<f64>(2);
        let checkpoints = vec![1, 2, 4];
        let entries = vec![c(0.7); 2 * 3 * 3];
        let pts: Vec<_> = (0..3).map(|i| StatePoint::index(0, i)).collect();
        let table = AverageTable::from_entries(
            vec![0, 1, 2],
            pts.clone(),
            w.clone(),
            checkpoints.clone(),
            "c".into(),
            entries,
        )
        .unwrap();
        let r = egorov_estimate(&table, &[1.0; 3], 0.0, 2).unwrap();
        assert_eq!(r.removed_mass, 0.0);
        assert!(!r.total_removal);
        assert!(r.per_weight.iter().all(|w| w.n_lambda == 1));

        // point 1 moves, points 0 and 2 do not
        let mut entries = vec![c(0.7); 2 * 3 * 3];
        entries[3 + 1] = c(0.2);
        let table = AverageTable::from_entries(vec![0, 1, 2], pts, w, checkpoints, "c".into(), entries).unwrap();
        let r = egorov_estimate(&table, &[1.0; 3], 0.0, 1).unwrap();
        assert_eq!(r.removed, vec![(1, 1.0)]);
        assert!(r.total_removal);
        assert_eq!(r.retained, vec![0, 2]);
    }

    #[test]
    fn egorov_tie_break_is_by_point_id() {
        let w = vec![WeightSequence::Constant];
        let pts: Vec<_> = (0..3).map(|i| StatePoint::index(0, i)).collect();
        let mut entries = vec![c(0.0); 3 * 2];
        for p in 0..3 {
            entries[p * 2] = c(1.0);
        }
        let table = AverageTable::from_entries(vec![5, 3, 4], pts, w, vec![1, 2], "x".into(), entries).unwrap();
        let r = egorov_estimate(&table, &[0.1, 0.2, 0.3], 0.5, 1).unwrap();
        assert_eq!(r.removed.iter().map(|x| x.0).collect::<Vec<_>>(), vec![3, 4, 5]);
        assert_eq!(r.retained_mass, 0.0);
    }

    #[test]
    fn egorov_rejects_missing_start() {
        let (table, masses) = shift_table();
        assert!(matches!(
            egorov_estimate(&table, &masses, 0.5, 3),
            Err(Error::InsufficientCheckpoints { .. })
        ));
    }

    #[test]
    fn union_report_is_split_by_part() {
        let spec = SystemSpec::DisjointUnion {
            parts: vec![
                SystemSpec::Cyclic {
                    n: 4,
                    density: None,
                    hopf: None,
                },
                SystemSpec::IntegerShift { window: 4, hopf: None },
            ],
        };
        let sys = build_system::<f64>(&spec).unwrap();
        let mut points = Vec::new();
        let mut masses = Vec::new();
        for (id, cell) in sys.cells().into_iter().enumerate() {
            points.push((id, sys.cell_point(&cell).unwrap()));
            masses.push(sys.cell_mass(&cell).unwrap());
        }
        let mut weights = character_grid::<f64>(4);
        weights.truncate(1);
        let report = au_ww_report(
            &sys,
            &Observable::DeltaState(0),
            &weights,
            &points,
            &masses,
            &CheckpointSchedule::Arithmetic { step: 4, n_max: 1024 },
            0.05,
            0.25,
            8,
        )
        .unwrap();
        assert_eq!(report.per_part.len(), 2);
        assert_eq!(report.per_part[0].hopf, HopfTag::FinitePart);
        assert_eq!(report.per_part[1].hopf, HopfTag::Dissipative);
        assert!(report
            .per_part
            .iter()
            .all(|p| p.report.verdict == ConvergenceVerdict::Pass));
        assert_eq!(report.verdict(), ConvergenceVerdict::Pass);
    }
}
