//! Correlation sequences `γ_f(l) = (f, U^l f) = ∫ f̄ · f∘T^l dμ` and what can
//! be read off them: positive-definiteness, the Wiener statistic, atom masses
//! of the spectral measure, and the Kronecker/continuous split of `f`.
//!
//! Conventions: `λ = e^{2πiθ}`, `γ(l) = ∫ e^{2πilθ} dσ_f(θ)`, and the atom scan
//! uses `e^{−2πilθ}` so that `Re A_n(θ) → σ_f{θ}`. Negative lags are never
//! stored; `γ(−l) = conj γ(l)` is applied where needed.

use num_complex::Complex;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{frac, frac_mul, turn, Real};
use crate::summation::{pairwise_sum, pairwise_sum_by};
use crate::system::{Cell, Coord, DynamicalSystem, KroneckerModel, Observable, Part, PartKind, StatePoint};

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance<S> {
    Exact,
    /// Time averages along `base_points` orbits of length `n`; `spread` is
    /// the largest disagreement between two base points at any lag.
    ErgodicEstimate {
        base_points: usize,
        n: usize,
        spread: S,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationSequence<S> {
    values: Vec<Complex<S>>,
    pub provenance: Provenance<S>,
}

impl<S: Real> CorrelationSequence<S> {
    /// Wraps nonnegative-lag values `γ(0..=l_max)`.
    pub fn from_values(values: Vec<Complex<S>>, provenance: Provenance<S>) -> Self {
        assert!(!values.is_empty(), "correlation needs γ(0)");
        Self { values, provenance }
    }

    pub fn l_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[Complex<S>] {
        &self.values
    }

    /// `γ(l)` for any `|l| ≤ l_max`, extended to negative lags by conjugation.
    pub fn at(&self, l: i64) -> Complex<S> {
        let v = self.values[l.unsigned_abs() as usize];
        if l < 0 {
            v.conj()
        } else {
            v
        }
    }
}

fn finite_parts<S: Real>(sys: &DynamicalSystem<S>) -> Result<()> {
    if sys.total_measure().is_none() {
        return Err(Error::InfiniteMeasure);
    }
    Ok(())
}

/// Smallest quadrature resolution for which doubling-map lags up to `l_max`
/// cannot alias.
pub fn doubling_resolution_needed(l_max: usize) -> usize {
    1usize.checked_shl((l_max + 2) as u32).unwrap_or(usize::MAX)
}

fn check_doubling(kind: &PartKind<impl Real>, l_max: usize) -> Result<()> {
    if let PartKind::DoublingMap { resolution } = kind {
        let required = doubling_resolution_needed(l_max);
        if *resolution < required {
            return Err(Error::QuadratureTooCoarse {
                resolution: *resolution,
                required,
            });
        }
    }
    Ok(())
}

/// Cell nodes and masses of a finite-measure part.
fn nodes<S: Real>(sys: &DynamicalSystem<S>, part: usize) -> Vec<(Coord<S>, S)> {
    let kind = &sys.parts()[part].kind;
    let count = kind.cell_count();
    (0..count)
        .map(|j| {
            let cell = Cell { part, index: j as i64 };
            let p = sys.cell_point(&cell).expect("cell in range");
            (p.coord, sys.cell_mass(&cell).expect("cell in range"))
        })
        .collect()
}

/// `T^l` applied to a node of a finite-measure part.
fn iterate<S: Real>(kind: &PartKind<S>, x: Coord<S>, l: usize) -> Coord<S> {
    match (kind, x) {
        (PartKind::FinitePermutation { perm, .. }, Coord::Index(i)) => {
            let mut j = i as usize;
            for _ in 0..l {
                j = perm[j];
            }
            Coord::Index(j as i64)
        }
        (PartKind::CircleRotation { alpha, .. }, Coord::Real(x)) => Coord::Real(frac(x + frac_mul(l as u64, *alpha))),
        (PartKind::DoublingMap { .. }, Coord::Real(mut x)) => {
            for _ in 0..l {
                x = frac(x + x);
            }
            Coord::Real(x)
        }
        _ => unreachable!("finite-measure part with matching coordinates"),
    }
}

/// Exact correlation: weighted sums on finite parts, `M`-point quadrature on
/// circle parts.
pub fn correlation<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
    l_max: usize,
) -> Result<CorrelationSequence<S>> {
    finite_parts(sys)?;
    let mut gamma = vec![Complex::zero(); l_max + 1];
    for (pid, part) in sys.parts().iter().enumerate() {
        f.check_domain(&part.kind)?;
        check_doubling(&part.kind, l_max)?;
        let nodes = nodes(sys, pid);
        let base: Vec<Complex<S>> = nodes.iter().map(|(x, m)| f.eval(x).conj() * *m).collect();
        // walk every node forward one step per lag
        let mut pos: Vec<Coord<S>> = nodes.iter().map(|(x, _)| *x).collect();
        for (l, g) in gamma.iter_mut().enumerate() {
            if l > 0 {
                match &part.kind {
                    // rotation positions are recomputed from the start to avoid drift
                    PartKind::CircleRotation { .. } => {
                        for (p, (x, _)) in pos.iter_mut().zip(&nodes) {
                            *p = iterate(&part.kind, *x, l);
                        }
                    }
                    kind => {
                        for p in pos.iter_mut() {
                            *p = iterate(kind, *p, 1);
                        }
                    }
                }
            }
            let terms: Vec<Complex<S>> = base.iter().zip(&pos).map(|(b, p)| *b * f.eval(p)).collect();
            *g += pairwise_sum(&terms);
        }
    }
    Ok(CorrelationSequence {
        values: gamma,
        provenance: Provenance::Exact,
    })
}

/// Time-average estimate `γ(l) ≈ μ(part) · (1/n) Σ_{k<n} f̄(T^k ω) f(T^{k+l} ω)`,
/// averaged over the base points.
pub fn correlation_ergodic<S: Real>(
    sys: &DynamicalSystem<S>,
    base_points: &[StatePoint<S>],
    f: &Observable<S>,
    l_max: usize,
    n: usize,
) -> Result<CorrelationSequence<S>> {
    if base_points.is_empty() || n == 0 {
        return Err(Error::MalformedSpec("need at least one base point and n ≥ 1".into()));
    }
    let per_point = base_points
        .par_iter()
        .map(|&pt| {
            sys.check_point(&pt)?;
            let kind = &sys.parts()[pt.part].kind;
            f.check_domain(kind)?;
            let mass = kind.total_measure().ok_or(Error::InfiniteMeasure)?;
            let orbit: Vec<Complex<S>> = sys
                .orbit(pt)?
                .take(n + l_max)
                .map(|c| c.map(|c| f.eval(&c)))
                .collect::<Result<_>>()?;
            let scale = mass / S::of_usize(n);
            Ok((0..=l_max)
                .map(|l| pairwise_sum_by(n, |k| orbit[k].conj() * orbit[k + l]) * scale)
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;

    let count = S::of_usize(per_point.len());
    let mut values = vec![Complex::zero(); l_max + 1];
    let mut spread = S::zero();
    for (l, v) in values.iter_mut().enumerate() {
        *v = pairwise_sum(&per_point.iter().map(|e| e[l]).collect::<Vec<_>>()) / count;
        for (i, a) in per_point.iter().enumerate() {
            for b in &per_point[i + 1..] {
                spread = spread.max((a[l] - b[l]).norm());
            }
        }
    }
    Ok(CorrelationSequence {
        values,
        provenance: Provenance::ErgodicEstimate {
            base_points: base_points.len(),
            n,
            spread,
        },
    })
}

/// `Σ_{i,j=0}^{m} γ(i−j) z_i z̄_j` for `z` of length `m+1` (real part; the
/// form is Hermitian).
pub fn hermitian_form<S: Real>(gamma: &CorrelationSequence<S>, z: &[Complex<S>]) -> Result<S> {
    if z.len() > gamma.l_max() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients need lags up to {}, have {}",
            z.len(),
            z.len().saturating_sub(1),
            gamma.l_max()
        )));
    }
    let m = z.len();
    let s = pairwise_sum_by(m * m, |idx| {
        let (i, j) = (idx / m, idx % m);
        gamma.at(i as i64 - j as i64) * z[i] * z[j].conj()
    });
    Ok(s.re)
}

/// Minimum of the Hermitian form over `trials` random `z ∈ ℂ^{m+1}` drawn
/// from `seed`.
pub fn positive_definite_check<S: Real>(
    gamma: &CorrelationSequence<S>,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<S> {
    if m > gamma.l_max() || trials == 0 {
        return Err(Error::DimensionMismatch(format!(
            "m = {m} with l_max = {}",
            gamma.l_max()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = S::infinity();
    for _ in 0..trials {
        let z: Vec<Complex<S>> = (0..=m)
            .map(|_| {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                Complex::new(S::lit(re), S::lit(im))
            })
            .collect();
        min = min.min(hermitian_form(gamma, &z)?);
    }
    Ok(min)
}

/// `W_m = (1/(m+1)) Σ_{l=1}^{m} |γ(l)|²`.
pub fn wiener_statistic<S: Real>(gamma: &CorrelationSequence<S>, m: usize) -> Result<S> {
    if m > gamma.l_max() {
        return Err(Error::DimensionMismatch(format!(
            "m = {m} with l_max = {}",
            gamma.l_max()
        )));
    }
    let v = gamma.values();
    Ok(pairwise_sum_by(m, |l| v[l + 1].norm_sqr()) / S::of_usize(m + 1))
}

/// `A_n(θ) = (1/n) Σ_{l=1}^{n} γ(l) e^{−2πilθ}` for each `θ`.
pub fn atom_scan<S: Real>(gamma: &CorrelationSequence<S>, thetas: &[S], n: usize) -> Result<Vec<Complex<S>>> {
    if n == 0 || n > gamma.l_max() {
        return Err(Error::DimensionMismatch(format!(
            "n = {n} with l_max = {}",
            gamma.l_max()
        )));
    }
    let v = gamma.values();
    Ok(thetas
        .par_iter()
        .map(|&theta| {
            pairwise_sum_by(n, |i| {
                let l = i + 1;
                v[l] * turn(-frac_mul(l as u64, theta))
            }) / S::of_usize(n)
        })
        .collect())
}

/// `‖(1/n) Σ_{l=1}^{n} e^{2πilθ} f∘T^l‖₂`, exact on finite parts and by
/// quadrature on circle parts.
pub fn twisted_mean_norm<S: Real>(sys: &DynamicalSystem<S>, f: &Observable<S>, theta: S, n: usize) -> Result<S> {
    finite_parts(sys)?;
    if n == 0 {
        return Err(Error::MalformedSpec("n must be at least 1".into()));
    }
    let mut total = S::zero();
    for (pid, part) in sys.parts().iter().enumerate() {
        f.check_domain(&part.kind)?;
        check_doubling(&part.kind, n)?;
        let terms: Vec<S> = nodes(sys, pid)
            .par_iter()
            .map(|&(x, mass)| {
                let mut pos = x;
                let v = pairwise_sum_by(n, |i| {
                    let l = i + 1;
                    pos = match &part.kind {
                        PartKind::CircleRotation { .. } => iterate(&part.kind, x, l),
                        kind => iterate(kind, pos, 1),
                    };
                    turn(frac_mul(l as u64, theta)) * f.eval(&pos)
                }) / S::of_usize(n);
                v.norm_sqr() * mass
            })
            .collect();
        total += pairwise_sum(&terms);
    }
    Ok(total.sqrt())
}

/// `(f, g) = ∫ f̄ g dμ` on a finite-measure system, by the cell quadrature.
pub fn inner_product<S: Real>(sys: &DynamicalSystem<S>, f: &Observable<S>, g: &Observable<S>) -> Result<Complex<S>> {
    finite_parts(sys)?;
    let mut total = Complex::zero();
    for (pid, part) in sys.parts().iter().enumerate() {
        f.check_domain(&part.kind)?;
        g.check_domain(&part.kind)?;
        let terms: Vec<Complex<S>> = nodes(sys, pid)
            .iter()
            .map(|(x, m)| f.eval(x).conj() * g.eval(x) * *m)
            .collect();
        total += pairwise_sum(&terms);
    }
    Ok(total)
}

/// Eigenpairs `(θ_f, f)` with `f∘T = e^{2πiθ_f} f` on a part. Rotations list
/// the characters with `|k| ≤ max_frequency`; finite permutations list the
/// discrete Fourier modes of every cycle; the doubling map lists constants.
pub fn eigenpairs<S: Real>(part: &Part<S>, max_frequency: i64) -> Vec<(S, Observable<S>)> {
    match &part.kind {
        PartKind::FinitePermutation { perm, .. } => {
            let n = perm.len();
            let mut seen = vec![false; n];
            let mut out = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                let mut cycle = vec![start];
                seen[start] = true;
                let mut j = perm[start];
                while j != start {
                    seen[j] = true;
                    cycle.push(j);
                    j = perm[j];
                }
                let len = cycle.len();
                for mode in 0..len {
                    let theta = S::of_usize(mode) / S::of_usize(len);
                    let mut values = vec![Complex::zero(); n];
                    for (pos, &state) in cycle.iter().enumerate() {
                        values[state] = turn(frac_mul(pos as u64, theta));
                    }
                    out.push((theta, Observable::Tabulated(values)));
                }
            }
            out
        }
        PartKind::CircleRotation { alpha, .. } => (-max_frequency..=max_frequency)
            .map(|k| {
                let r = frac_mul(k.unsigned_abs(), *alpha);
                let theta = if k < 0 { frac(-r) } else { r };
                (theta, Observable::Character(k))
            })
            .collect(),
        PartKind::DoublingMap { .. } => {
            vec![(S::zero(), Observable::Constant(Complex::new(S::one(), S::zero())))]
        }
        PartKind::IntegerShift { .. } | PartKind::BooleMap { .. } => Vec::new(),
    }
}

/// `f = f_K + f_⊥` with `f_K` in the closed span of eigenfunctions, using the
/// declared Kronecker model.
pub fn kronecker_project<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
) -> Result<(Observable<S>, Observable<S>)> {
    let one = Complex::new(S::one(), S::zero());
    for (pid, p) in sys.parts().iter().enumerate() {
        f.check_domain(&p.kind)?;
        if p.kronecker == KroneckerModel::Empty {
            return Err(Error::NoKroneckerModel(pid));
        }
    }
    if sys.parts().iter().all(|p| p.kronecker == KroneckerModel::FullSpace) {
        return Ok((f.clone(), Observable::zero()));
    }
    if sys.parts().len() != 1 {
        // constants on one part are not constants on the union
        return Err(Error::NoKroneckerModel(0));
    }
    let mean = inner_product(sys, &Observable::Constant(one), f)?;
    let f_k = Observable::Constant(mean);
    let f_perp = Observable::LinearCombination(vec![(one, f.clone()), (-one, Observable::Constant(mean))]);
    Ok((f_k, f_perp))
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralVerdict<S> {
    /// Frequencies whose atom-mass estimate exceeds the tolerance.
    AtomsDetected(Vec<S>),
    ContinuousWithin(S),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary<S> {
    pub gamma: CorrelationSequence<S>,
    pub wiener: Vec<(usize, S)>,
    pub atoms: Vec<(S, Complex<S>)>,
    pub verdict: SpectralVerdict<S>,
}

/// Runs the Wiener statistic on each `m` and the atom scan on `thetas`; any
/// `θ` with `Re A_n(θ) > tolerance` is reported as an atom.
pub fn spectral_summary<S: Real>(
    gamma: CorrelationSequence<S>,
    wiener_ms: &[usize],
    thetas: &[S],
    n: usize,
    tolerance: S,
) -> Result<SpectralSummary<S>> {
    let wiener = wiener_ms
        .iter()
        .map(|&m| Ok((m, wiener_statistic(&gamma, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let scan = atom_scan(&gamma, thetas, n)?;
    let atoms: Vec<(S, Complex<S>)> = thetas.iter().copied().zip(scan).collect();
    let found: Vec<S> = atoms
        .iter()
        .filter(|(_, a)| a.re > tolerance)
        .map(|(t, _)| *t)
        .collect();
    let verdict = if found.is_empty() {
        SpectralVerdict::ContinuousWithin(tolerance)
    } else {
        SpectralVerdict::AtomsDetected(found)
    };
    Ok(SpectralSummary {
        gamma,
        wiener,
        atoms,
        verdict,
    })
}
