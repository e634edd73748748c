//! Membership in `R_μ` (all level sets `{|f| > λ}` of finite measure) and the
//! truncation split `f = g + h` with `g ∈ L¹`, `‖h‖_∞ ≤ δ`.

use num_complex::Complex;
use num_traits::Zero;

use super::{Coord, DynamicalSystem, Observable, PartKind, TruncationSide};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Grid size for measuring level sets on `ℝ`.
const LINE_LEVEL_NODES: usize = 1 << 20;

/// Measure of a level set `{|f| > λ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LevelMeasure<S> {
    Finite(S),
    Infinite,
    /// `|f|` tends to exactly `λ` at infinity and the expression class does
    /// not say from which side.
    Undetermined,
}

impl<S: Real> LevelMeasure<S> {
    pub fn is_finite(&self) -> bool {
        matches!(self, LevelMeasure::Finite(_))
    }
}

fn level_measure_on_part<S: Real>(kind: &PartKind<S>, f: &Observable<S>, level: S) -> LevelMeasure<S> {
    match kind {
        PartKind::FinitePermutation { masses, .. } => LevelMeasure::Finite(
            masses
                .iter()
                .enumerate()
                .filter(|(i, _)| f.eval(&Coord::Index(*i as i64)).norm() > level)
                .map(|(_, &m)| m)
                .sum(),
        ),
        PartKind::CircleRotation { resolution, .. } | PartKind::DoublingMap { resolution } => {
            let m = *resolution;
            let hits = (0..m)
                .filter(|&j| f.eval(&Coord::Real(S::of_usize(j) / S::of_usize(m))).norm() > level)
                .count();
            LevelMeasure::Finite(S::of_usize(hits) / S::of_usize(m))
        }
        PartKind::IntegerShift { .. } | PartKind::BooleMap { .. } => {
            let Some((limit, _)) = f.tail(S::one()) else {
                return LevelMeasure::Undetermined;
            };
            let l = limit.norm();
            if l > level {
                return LevelMeasure::Infinite;
            }
            if l == level {
                return LevelMeasure::Undetermined;
            }
            let Some((_, radius)) = f.tail((level - l) / S::lit(2.0)) else {
                return LevelMeasure::Undetermined;
            };
            if let PartKind::IntegerShift { .. } = kind {
                let r = radius.floor().to_i64().unwrap_or(i64::MAX);
                let count = (-r..=r).filter(|&i| f.eval(&Coord::Index(i)).norm() > level).count();
                LevelMeasure::Finite(S::of_usize(count))
            } else {
                if radius <= S::zero() {
                    return LevelMeasure::Finite(S::zero());
                }
                let h = (radius + radius) / S::of_usize(LINE_LEVEL_NODES);
                let hits = (0..LINE_LEVEL_NODES)
                    .filter(|&j| {
                        let x = -radius + (S::of_usize(j) + S::lit(0.5)) * h;
                        f.eval(&Coord::Real(x)).norm() > level
                    })
                    .count();
                LevelMeasure::Finite(S::of_usize(hits) * h)
            }
        }
    }
}

/// Measure of `{|f| > λ}` for each level, decided from the expression class
/// on infinite parts. Finite parts are summed exactly; circle parts use the
/// quadrature grid; `ℝ` parts use a midpoint grid inside the tail radius.
pub fn rmu_membership<S: Real>(
    sys: &DynamicalSystem<S>,
    f: &Observable<S>,
    levels: &[S],
) -> Result<Vec<LevelMeasure<S>>> {
    if levels.iter().any(|l| !(*l > S::zero())) {
        return Err(Error::MalformedSpec("levels must be strictly positive".into()));
    }
    for p in sys.parts() {
        f.check_domain(&p.kind)?;
    }
    Ok(levels
        .iter()
        .map(|&level| {
            let mut total = S::zero();
            for p in sys.parts() {
                match level_measure_on_part(&p.kind, f, level) {
                    LevelMeasure::Finite(m) => total += m,
                    other => return other,
                }
            }
            LevelMeasure::Finite(total)
        })
        .collect())
}

/// `f = g + h` with `g = f·1{|f| > δ}` and `h = f·1{|f| ≤ δ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RmuSplit<S> {
    pub g: Observable<S>,
    pub h: Observable<S>,
    /// `‖h‖_∞` as computed by [`DynamicalSystem::sup_norm`].
    pub h_sup: S,
}

pub fn rmu_split<S: Real>(sys: &DynamicalSystem<S>, f: &Observable<S>, delta: S) -> Result<RmuSplit<S>> {
    if !(delta > S::zero()) {
        return Err(Error::MalformedSpec("split level must be positive".into()));
    }
    for p in sys.parts() {
        f.check_domain(&p.kind)?;
        if p.kind.is_line() {
            match f.tail(S::one()) {
                Some((l, _)) if l.is_zero() => {}
                Some((l, _)) => {
                    return Err(Error::NotInRmu(format!(
                        "|f| tends to {} on the {} part, so {{|f| > λ}} is infinite for λ < that",
                        l.norm(),
                        p.kind.name()
                    )))
                }
                None => return Err(Error::NotInRmu("tail behavior undetermined".into())),
            }
        }
    }
    let (g, h) = match f {
        Observable::Tabulated(v) => {
            let (g, h): (Vec<_>, Vec<_>) = v
                .iter()
                .map(|&z| {
                    if z.norm() > delta {
                        (z, Complex::zero())
                    } else {
                        (Complex::zero(), z)
                    }
                })
                .unzip();
            (Observable::Tabulated(g), Observable::Tabulated(h))
        }
        _ => (
            Observable::Truncated {
                base: Box::new(f.clone()),
                level: delta,
                side: TruncationSide::Above,
            },
            Observable::Truncated {
                base: Box::new(f.clone()),
                level: delta,
                side: TruncationSide::AtOrBelow,
            },
        ),
    };
    let h_sup = sys.sup_norm(&h)?;
    Ok(RmuSplit { g, h, h_sup })
}
