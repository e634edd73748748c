use num_complex::Complex;

use super::{Coord, DynamicalSystem, Observable, PartKind};
use crate::error::{Error, Result};
use crate::scalar::{frac, frac_mul, Real};
use crate::summation::{pairwise_sum, pairwise_sum_by};

/// Quadrature used for integrals over `ℝ` on Boole parts: the window
/// `[-window, window]` is mapped by `x = tan u` and integrated with the
/// midpoint rule in `u` on `nodes` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineQuadrature<S> {
    pub window: S,
    pub nodes: usize,
}

impl<S: Real> Default for LineQuadrature<S> {
    fn default() -> Self {
        Self {
            window: S::lit(1e4),
            nodes: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport<S> {
    /// `max_t |∫ f∘T^t dμ − ∫ f dμ|`, summed over parts.
    pub discrepancy: S,
    /// Truncation and quadrature allowance: zero for finite and circle parts.
    pub bound: S,
    /// Discrepancy per iterate `t = 1..=n_trials`.
    pub per_iterate: Vec<S>,
}

impl<S: Real> InvarianceReport<S> {
    pub fn holds(&self) -> bool {
        self.discrepancy <= self.bound + S::lit(1e-12)
    }
}

/// Spot-checks `∫ f∘T^t dμ = ∫ f dμ` for `t = 1..=n_trials`.
pub fn invariance_check<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
    n_trials: usize,
) -> Result<InvarianceReport<S>> {
    invariance_check_with(sys, f, n_trials, &LineQuadrature::default())
}

pub fn invariance_check_with<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
    n_trials: usize,
    quad: &LineQuadrature<S>,
) -> Result<InvarianceReport<S>> {
    if n_trials == 0 {
        return Err(Error::MalformedSpec(
            "invariance check needs at least one iterate".into(),
        ));
    }
    for p in sys.parts() {
        f.check_domain(&p.kind)?;
        if p.kind.is_line() && !f.integrable_on_line() {
            return Err(Error::NonIntegrableObservable(f.name().into()));
        }
    }
    let mut per_iterate = vec![S::zero(); n_trials];
    let mut bound = S::zero();
    for p in sys.parts() {
        let mut part_bound = S::zero();
        for t in 1..=n_trials {
            let (d, b) = part_discrepancy(&p.kind, f, t, quad)?;
            per_iterate[t - 1] += d;
            part_bound = part_bound.max(b);
        }
        bound += part_bound;
    }
    let discrepancy = per_iterate.iter().copied().fold(S::zero(), S::max);
    Ok(InvarianceReport {
        discrepancy,
        bound,
        per_iterate,
    })
}

fn part_discrepancy<S: Real>(
    kind: &PartKind<S>,
    f: &Observable<S>,
    t: usize,
    quad: &LineQuadrature<S>,
) -> Result<(S, S)> {
    match kind {
        PartKind::FinitePermutation { masses, perm } => {
            let n = perm.len();
            let moved: Vec<Complex<S>> = (0..n)
                .map(|i| {
                    let mut j = i;
                    for _ in 0..t {
                        j = perm[j];
                    }
                    f.eval(&Coord::Index(j as i64)) * masses[i]
                })
                .collect();
            let base: Vec<Complex<S>> = (0..n).map(|i| f.eval(&Coord::Index(i as i64)) * masses[i]).collect();
            Ok(((pairwise_sum(&moved) - pairwise_sum(&base)).norm(), S::zero()))
        }
        PartKind::CircleRotation { alpha, resolution } => {
            let m = *resolution;
            let h = S::one() / S::of_usize(m);
            let shift = frac_mul(t as u64, *alpha);
            let moved = pairwise_sum_by(m, |j| f.eval(&Coord::Real(frac(S::of_usize(j) * h + shift))));
            let base = pairwise_sum_by(m, |j| f.eval(&Coord::Real(S::of_usize(j) * h)));
            Ok(((moved - base).norm() * h, S::zero()))
        }
        PartKind::DoublingMap { resolution } => {
            let m = *resolution;
            let h = S::one() / S::of_usize(m);
            let moved = pairwise_sum_by(m, |j| {
                let mut x = S::of_usize(j) * h;
                for _ in 0..t {
                    x = frac(x + x);
                }
                f.eval(&Coord::Real(x))
            });
            let base = pairwise_sum_by(m, |j| f.eval(&Coord::Real(S::of_usize(j) * h)));
            Ok(((moved - base).norm() * h, S::zero()))
        }
        PartKind::IntegerShift { window } => {
            let w = *window;
            let len = (2 * w + 1) as usize;
            let ti = t as i64;
            let moved = pairwise_sum_by(len, |j| f.eval(&Coord::Index(j as i64 - w + ti)));
            let base = pairwise_sum_by(len, |j| f.eval(&Coord::Index(j as i64 - w)));
            let ws = S::from_i64(w).expect("window representable");
            let tail = f.l1_tail(ws) + f.l1_tail(ws - S::of_usize(t));
            Ok(((moved - base).norm(), tail))
        }
        PartKind::BooleMap { .. } => {
            let limit = f.tail(S::one()).map(|(l, _)| l).unwrap_or_default();
            let composed = |x: S| {
                let mut y = x;
                for _ in 0..t {
                    if y.abs() <= S::lit(super::BOOLE_POLE_TOLERANCE) {
                        return limit;
                    }
                    y = y - y.recip();
                }
                f.eval(&Coord::Real(y))
            };
            let plain = |x: S| f.eval(&Coord::Real(x));
            let (q_moved, e_moved) = line_integral(quad, composed);
            let (q_base, e_base) = line_integral(quad, plain);

            // |x| > W forces |T^t x| ≥ a_t with a_s = a_{s-1} − 1/a_{s-1}
            let mut a = quad.window;
            for _ in 0..t {
                a = if a > S::one() { a - a.recip() } else { S::zero() };
            }
            let bound = f.l1_tail(quad.window) + f.l1_tail(a) + e_moved + e_base;
            Ok(((q_moved - q_base).norm(), bound))
        }
    }
}

/// Midpoint rule for `∫_{-W}^{W} g(x) dx` after `x = tan u`. Returns the
/// estimate on `2·nodes` points and its difference from the `nodes`-point
/// estimate as an error indicator.
fn line_integral<S: Real, G>(quad: &LineQuadrature<S>, g: G) -> (Complex<S>, S)
where
    G: Fn(S) -> Complex<S>,
{
    let rule = |n: usize| {
        let u_max = quad.window.atan();
        let h = (u_max + u_max) / S::of_usize(n);
        let s = pairwise_sum_by(n, |j| {
            let u = -u_max + (S::of_usize(j) + S::lit(0.5)) * h;
            let x = u.tan();
            g(x) * (S::one() + x * x)
        });
        s * h
    };
    let coarse = rule(quad.nodes);
    let fine = rule(2 * quad.nodes);
    (fine, (fine - coarse).norm())
}
