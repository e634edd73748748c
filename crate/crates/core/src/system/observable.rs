use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{Coord, PartKind};
use crate::error::{Error, Result};
use crate::scalar::{turn, Real};

/// Which half of a level-set split a [`Observable::Truncated`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationSide {
    /// `f · 1{|f| > level}`
    Above,
    /// `f · 1{|f| ≤ level}`
    AtOrBelow,
}

/// A complex-valued function on states.
#[derive(Debug, Clone, PartialEq)]
pub enum Observable<S> {
    Constant(Complex<S>),
    /// `x ↦ e^{2πikx}` on circle parts.
    Character(i64),
    /// Indicator of a single discrete state.
    DeltaState(i64),
    /// Indicator of `[a, b)` applied to the coordinate value.
    IntervalIndicator(S, S),
    /// `x ↦ 1/(1+x²)`.
    RationalDecay,
    /// Values indexed by the local state index of a finite part.
    Tabulated(Vec<Complex<S>>),
    LinearCombination(Vec<(Complex<S>, Observable<S>)>),
    Truncated {
        base: Box<Observable<S>>,
        level: S,
        side: TruncationSide,
    },
}

impl<S: Real> Observable<S> {
    pub fn zero() -> Self {
        Observable::Constant(Complex::zero())
    }

    pub fn tabulated_real(values: &[S]) -> Self {
        Observable::Tabulated(values.iter().map(|&v| Complex::new(v, S::zero())).collect())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Observable::Constant(_) => "constant",
            Observable::Character(_) => "character",
            Observable::DeltaState(_) => "delta_state",
            Observable::IntervalIndicator(..) => "interval_indicator",
            Observable::RationalDecay => "rational_decay",
            Observable::Tabulated(_) => "tabulated",
            Observable::LinearCombination(_) => "linear_combination",
            Observable::Truncated { .. } => "truncated",
        }
    }

    /// Checks that the expression can be evaluated on `part`.
    pub fn check_domain(&self, part: &PartKind<S>) -> Result<()> {
        let ok = match self {
            Observable::Constant(_) | Observable::RationalDecay | Observable::IntervalIndicator(..) => true,
            Observable::Character(_) => part.is_circle(),
            Observable::DeltaState(_) => part.is_discrete(),
            Observable::Tabulated(v) => match part {
                PartKind::FinitePermutation { perm, .. } => v.len() == perm.len(),
                _ => false,
            },
            Observable::LinearCombination(terms) => {
                for (_, t) in terms {
                    t.check_domain(part)?;
                }
                true
            }
            Observable::Truncated { base, level, .. } => {
                if !(*level >= S::zero()) {
                    return Err(Error::MalformedSpec("truncation level must be nonnegative".into()));
                }
                base.check_domain(part)?;
                true
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IncompatibleObservable {
                observable: self.name().into(),
                part: part.name().into(),
            })
        }
    }

    /// Evaluates at a coordinate. The domain must have been checked.
    pub fn eval(&self, coord: &Coord<S>) -> Complex<S> {
        let one = Complex::new(S::one(), S::zero());
        match self {
            Observable::Constant(c) => *c,
            Observable::Character(k) => match coord {
                Coord::Real(x) => {
                    // k·x mod 1 without forming a large product
                    let kx = S::from_i64(*k).expect("frequency representable") * *x;
                    turn(kx)
                }
                Coord::Index(_) => one,
            },
            Observable::DeltaState(i) => match coord {
                Coord::Index(j) if j == i => one,
                _ => Complex::zero(),
            },
            Observable::IntervalIndicator(a, b) => {
                let x = coord.value();
                if *a <= x && x < *b {
                    one
                } else {
                    Complex::zero()
                }
            }
            Observable::RationalDecay => {
                let x = coord.value();
                Complex::new(S::one() / (S::one() + x * x), S::zero())
            }
            Observable::Tabulated(v) => match coord {
                Coord::Index(i) => v[*i as usize],
                Coord::Real(_) => Complex::zero(),
            },
            Observable::LinearCombination(terms) => terms
                .iter()
                .fold(Complex::zero(), |acc, (c, t)| acc + *c * t.eval(coord)),
            Observable::Truncated { base, level, side } => {
                let v = base.eval(coord);
                let keep = match side {
                    TruncationSide::Above => v.norm() > *level,
                    TruncationSide::AtOrBelow => v.norm() <= *level,
                };
                if keep {
                    v
                } else {
                    Complex::zero()
                }
            }
        }
    }

    /// Behavior at `±∞` on a line part (`ℤ` or `ℝ`).
    ///
    /// Returns `(limit, radius)` with `|f(x) − limit| ≤ eta` for `|x| > radius`,
    /// or `None` if the expression class does not determine it.
    pub fn tail(&self, eta: S) -> Option<(Complex<S>, S)> {
        let zero = Complex::zero();
        match self {
            Observable::Constant(c) => Some((*c, S::zero())),
            Observable::DeltaState(i) => Some((zero, S::from_i64(i.abs())?)),
            Observable::IntervalIndicator(a, b) => Some((zero, a.abs().max(b.abs()))),
            Observable::RationalDecay => {
                let r = (S::one() / eta - S::one()).max(S::zero()).sqrt();
                Some((zero, r))
            }
            Observable::Character(_) | Observable::Tabulated(_) => None,
            Observable::LinearCombination(terms) => {
                let active: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
                let n = S::of_usize(active.len().max(1));
                let mut limit = zero;
                let mut radius = S::zero();
                for (c, t) in active {
                    let (l, r) = t.tail(eta / (n * c.norm()))?;
                    limit += *c * l;
                    radius = radius.max(r);
                }
                Some((limit, radius))
            }
            Observable::Truncated { base, level, side } => {
                let (lb, _) = base.tail(S::one())?;
                let m = lb.norm();
                if m == *level {
                    return None;
                }
                let gap = (m - *level).abs() / S::lit(2.0);
                let keeps_tail = match side {
                    TruncationSide::Above => m > *level,
                    TruncationSide::AtOrBelow => m < *level,
                };
                if keeps_tail {
                    let (_, r) = base.tail(eta.min(gap))?;
                    Some((lb, r))
                } else {
                    let (_, r) = base.tail(gap)?;
                    Some((zero, r))
                }
            }
        }
    }

    /// Finite L¹ norm on a line part: the tail limit is zero. Every
    /// expression class here with zero limit decays at least like `1/(1+x²)`.
    pub fn integrable_on_line(&self) -> bool {
        matches!(self.tail(S::one()), Some((l, _)) if l.is_zero())
    }

    /// Upper bound on `Σ_{|x|>R} |f(x)|` (lattice) and `∫_{|x|>R} |f|` (line).
    pub fn l1_tail(&self, radius: S) -> S {
        match self {
            Observable::Constant(c) => {
                if c.is_zero() {
                    S::zero()
                } else {
                    S::infinity()
                }
            }
            Observable::DeltaState(i) => {
                if S::from_i64(i.abs()).unwrap_or(S::infinity()) > radius {
                    S::one()
                } else {
                    S::zero()
                }
            }
            Observable::IntervalIndicator(a, b) => {
                if a.abs().max(b.abs()) <= radius {
                    S::zero()
                } else {
                    (*b - *a).max(S::zero()) + S::one()
                }
            }
            Observable::RationalDecay => {
                // Σ_{|x|>R} 1/(1+x²) ≤ 2∫_R^∞ dx/(1+x²) for a decreasing summand
                if radius <= S::zero() {
                    S::PI()
                } else {
                    S::lit(2.0) * (S::one() / radius).atan()
                }
            }
            Observable::Character(_) | Observable::Tabulated(_) => S::infinity(),
            Observable::LinearCombination(terms) => terms
                .iter()
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, t)| c.norm() * t.l1_tail(radius))
                .fold(S::zero(), |a, b| a + b),
            Observable::Truncated { base, .. } => base.l1_tail(radius),
        }
    }
}
