//! Bounded weight sequences `b̄ = (b_k)`: characters `λ^k`, trigonometric
//! polynomials, and Besicovitch perturbations of trigonometric polynomials.
//!
//! Frequencies are stored as `θ ∈ [0, 1)` with `λ = e^{2πiθ}`, and powers are
//! evaluated as `e^{2πi (kθ mod 1)}` so `|λ^k|` never drifts from 1.

use num_complex::Complex;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frac_mul, turn, Real};
use crate::summation::pairwise_sum_by;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigTerm<S> {
    pub coeff: Complex<S>,
    pub theta: S,
}

/// Perturbation `c_k = b_k − P(k)` of a Besicovitch weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation<S> {
    /// `c_k = c/(k+1)^s`
    PowerDecay { c: S, s: S },
    /// `c_k = bound` on the perfect squares `k = j²`, zero elsewhere.
    SparseBounded { bound: S },
}

impl<S: Real> Perturbation<S> {
    pub fn at(&self, k: usize) -> S {
        match *self {
            Perturbation::PowerDecay { c, s } => c / (S::of_usize(k) + S::one()).powf(s),
            Perturbation::SparseBounded { bound } => {
                if is_square(k) {
                    bound
                } else {
                    S::zero()
                }
            }
        }
    }

    pub fn bound(&self) -> S {
        match *self {
            Perturbation::PowerDecay { c, .. } => c.abs(),
            Perturbation::SparseBounded { bound } => bound.abs(),
        }
    }
}

fn is_square(k: usize) -> bool {
    let r = k.isqrt();
    r * r == k
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSequence<S> {
    Constant,
    Character(S),
    TrigPoly(Vec<TrigTerm<S>>),
    Besicovitch {
        base: Vec<TrigTerm<S>>,
        perturbation: Perturbation<S>,
    },
}

fn poly_at<S: Real>(terms: &[TrigTerm<S>], k: usize) -> Complex<S> {
    terms.iter().fold(Complex::zero(), |acc, t| {
        acc + t.coeff * turn(frac_mul(k as u64, t.theta))
    })
}

impl<S: Real> WeightSequence<S> {
    /// `b_k`.
    pub fn at(&self, k: usize) -> Complex<S> {
        match self {
            WeightSequence::Constant => Complex::new(S::one(), S::zero()),
            WeightSequence::Character(theta) => turn(frac_mul(k as u64, *theta)),
            WeightSequence::TrigPoly(terms) => poly_at(terms, k),
            WeightSequence::Besicovitch { base, perturbation } => {
                poly_at(base, k) + Complex::new(perturbation.at(k), S::zero())
            }
        }
    }

    /// Constructive `C` with `|b_k| ≤ C` for all `k`.
    pub fn bound(&self) -> S {
        match self {
            WeightSequence::Constant | WeightSequence::Character(_) => S::one(),
            WeightSequence::TrigPoly(terms) => terms.iter().map(|t| t.coeff.norm()).sum(),
            WeightSequence::Besicovitch { base, perturbation } => {
                base.iter().map(|t| t.coeff.norm()).sum::<S>() + perturbation.bound()
            }
        }
    }

    /// The trigonometric polynomial a Besicovitch weight perturbs; `self` for
    /// every other kind.
    pub fn base_polynomial(&self) -> WeightSequence<S> {
        match self {
            WeightSequence::Besicovitch { base, .. } => WeightSequence::TrigPoly(base.clone()),
            other => other.clone(),
        }
    }

    /// `(1/n) Σ_{k<n} |b_k − P(k)|`; zero for weights that are their own
    /// polynomial.
    pub fn besicovitch_defect(&self, n: usize) -> S {
        match self {
            WeightSequence::Besicovitch { perturbation, .. } if n > 0 => {
                pairwise_sum_by(n, |k| perturbation.at(k).abs()) / S::of_usize(n)
            }
            _ => S::zero(),
        }
    }

    /// Short label used in tables: the frequency for characters, else the kind.
    pub fn label(&self) -> String {
        match self {
            WeightSequence::Constant => "constant".into(),
            WeightSequence::Character(theta) => format!("{:.16e}", theta.to_f64_lossy()),
            WeightSequence::TrigPoly(_) => "trig_poly".into(),
            WeightSequence::Besicovitch { .. } => "besicovitch".into(),
        }
    }
}

/// The characters `θ_j = j/L`, `j = 0..L`.
pub fn character_grid<S: Real>(l: usize) -> Vec<WeightSequence<S>> {
    (0..l)
        .map(|j| WeightSequence::Character(S::of_usize(j) / S::of_usize(l)))
        .collect()
}

/// Configuration form of a weight: `(kind, parameters)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightSpec {
    Constant,
    Character {
        theta: f64,
    },
    /// Terms as `[re, im, theta]`.
    TrigPoly {
        terms: Vec<[f64; 3]>,
    },
    Besicovitch {
        terms: Vec<[f64; 3]>,
        perturbation: PerturbationSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PerturbationSpec {
    PowerDecay { c: f64, s: f64 },
    SparseBounded { bound: f64 },
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..1.0).contains(&theta) {
        Ok(())
    } else {
        Err(Error::MalformedSpec(format!("frequency {theta} outside [0, 1)")))
    }
}

fn build_terms<S: Real>(terms: &[[f64; 3]]) -> Result<Vec<TrigTerm<S>>> {
    terms
        .iter()
        .map(|&[re, im, theta]| {
            check_theta(theta)?;
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::MalformedSpec("non-finite coefficient".into()));
            }
            Ok(TrigTerm {
                coeff: Complex::new(S::lit(re), S::lit(im)),
                theta: S::lit(theta),
            })
        })
        .collect()
}

impl WeightSpec {
    pub fn build<S: Real>(&self) -> Result<WeightSequence<S>> {
        Ok(match self {
            WeightSpec::Constant => WeightSequence::Constant,
            WeightSpec::Character { theta } => {
                check_theta(*theta)?;
                WeightSequence::Character(S::lit(*theta))
            }
            WeightSpec::TrigPoly { terms } => WeightSequence::TrigPoly(build_terms(terms)?),
            WeightSpec::Besicovitch { terms, perturbation } => {
                let perturbation = match *perturbation {
                    PerturbationSpec::PowerDecay { c, s } => {
                        if !(s > 0.0) || !c.is_finite() {
                            return Err(Error::MalformedSpec("power decay needs s > 0".into()));
                        }
                        Perturbation::PowerDecay {
                            c: S::lit(c),
                            s: S::lit(s),
                        }
                    }
                    PerturbationSpec::SparseBounded { bound } => {
                        if !bound.is_finite() {
                            return Err(Error::MalformedSpec("non-finite sparse bound".into()));
                        }
                        Perturbation::SparseBounded { bound: S::lit(bound) }
                    }
                };
                WeightSequence::Besicovitch {
                    base: build_terms(terms)?,
                    perturbation,
                }
            }
        })
    }
}
