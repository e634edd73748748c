//! Concrete measure-preserving systems.
//!
//! A [`DynamicalSystem`] is a disjoint union of one or more [`Part`]s. Each
//! part carries its transformation, its Hopf classification and a Kronecker
//! descriptor. Continuous parts are never discretized: orbits are evaluated
//! exactly from sampled start points, and integrals use an `M`-point
//! quadrature grid whose nodes double as measure cells.

mod invariance;
mod observable;
mod rmu;

use std::collections::BTreeSet;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{frac, frac_mul, Real};

pub use invariance::{invariance_check, invariance_check_with, InvarianceReport, LineQuadrature};
pub use observable::{Observable, TruncationSide};
pub use rmu::{rmu_membership, rmu_split, LevelMeasure, RmuSplit};

/// Orbits of the Boole map closer than this to the pole at 0 abort.
pub const BOOLE_POLE_TOLERANCE: f64 = 1e-300;

/// Hopf classification of a part, declared from the known analytic picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HopfTag {
    /// Carries a finite invariant measure.
    FinitePart,
    /// Conservative with no finite invariant measure.
    NullConservative,
    Dissipative,
}

/// Declared description of the eigenfunction closure on a part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KroneckerModel {
    /// Eigenfunctions span all of L² (pure point spectrum).
    FullSpace,
    /// Only constants are eigenfunctions.
    ConstantsOnly,
    /// No nonzero L² eigenfunctions.
    Empty,
}

/// A coordinate inside one part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coord<S> {
    Index(i64),
    Real(S),
}

impl<S: Real> Coord<S> {
    /// The coordinate as a real number.
    pub fn value(&self) -> S {
        match *self {
            Coord::Index(i) => S::from_i64(i).expect("index representable"),
            Coord::Real(x) => x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint<S> {
    pub part: usize,
    pub coord: Coord<S>,
}

impl<S: Real> StatePoint<S> {
    pub fn index(part: usize, i: i64) -> Self {
        Self {
            part,
            coord: Coord::Index(i),
        }
    }

    pub fn real(part: usize, x: S) -> Self {
        Self {
            part,
            coord: Coord::Real(x),
        }
    }
}

/// A measure cell of the system's declared discretization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub part: usize,
    pub index: i64,
}

/// Seeded sampling descriptor for Boole map start points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BooleSampling {
    pub count: usize,
    /// Samples lie in `[-range, range]`.
    pub range: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PartKind<S> {
    FinitePermutation {
        masses: Vec<S>,
        perm: Vec<usize>,
    },
    CircleRotation {
        alpha: S,
        resolution: usize,
    },
    DoublingMap {
        resolution: usize,
    },
    /// `x ↦ x + 1` on `ℤ` with counting measure; cells are the window `[-W, W]`.
    IntegerShift {
        window: i64,
    },
    /// `x ↦ x − 1/x` on `ℝ` with Lebesgue measure.
    BooleMap {
        sampling: BooleSampling,
        samples: Vec<S>,
        /// Importance weights: each sample stands for `1/(count·q(x))` of
        /// Lebesgue measure, `q` the sampling density.
        masses: Vec<S>,
    },
}

impl<S: Real> PartKind<S> {
    pub fn name(&self) -> &'static str {
        match self {
            PartKind::FinitePermutation { .. } => "finite_permutation",
            PartKind::CircleRotation { .. } => "circle_rotation",
            PartKind::DoublingMap { .. } => "doubling_map",
            PartKind::IntegerShift { .. } => "integer_shift",
            PartKind::BooleMap { .. } => "boole_map",
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, PartKind::CircleRotation { .. } | PartKind::DoublingMap { .. })
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, PartKind::FinitePermutation { .. } | PartKind::IntegerShift { .. })
    }

    /// Parts whose state space is `ℤ` or `ℝ` with infinite measure.
    pub fn is_line(&self) -> bool {
        matches!(self, PartKind::IntegerShift { .. } | PartKind::BooleMap { .. })
    }

    pub fn analytic_hopf(&self) -> HopfTag {
        match self {
            PartKind::FinitePermutation { .. } | PartKind::CircleRotation { .. } | PartKind::DoublingMap { .. } => {
                HopfTag::FinitePart
            }
            PartKind::IntegerShift { .. } => HopfTag::Dissipative,
            PartKind::BooleMap { .. } => HopfTag::NullConservative,
        }
    }

    pub fn analytic_kronecker(&self) -> KroneckerModel {
        match self {
            PartKind::FinitePermutation { .. } | PartKind::CircleRotation { .. } => KroneckerModel::FullSpace,
            PartKind::DoublingMap { .. } => KroneckerModel::ConstantsOnly,
            PartKind::IntegerShift { .. } | PartKind::BooleMap { .. } => KroneckerModel::Empty,
        }
    }

    /// Total measure, `None` when infinite.
    pub fn total_measure(&self) -> Option<S> {
        match self {
            PartKind::FinitePermutation { masses, .. } => Some(masses.iter().copied().sum()),
            PartKind::CircleRotation { .. } | PartKind::DoublingMap { .. } => Some(S::one()),
            PartKind::IntegerShift { .. } | PartKind::BooleMap { .. } => None,
        }
    }

    /// Number of measure cells.
    pub fn cell_count(&self) -> usize {
        match self {
            PartKind::FinitePermutation { perm, .. } => perm.len(),
            PartKind::CircleRotation { resolution, .. } | PartKind::DoublingMap { resolution } => *resolution,
            PartKind::IntegerShift { window } => (2 * window + 1) as usize,
            PartKind::BooleMap { samples, .. } => samples.len(),
        }
    }

    /// Position of the `j`-th cell (0-based) in cell-index space.
    fn cell_index(&self, j: usize) -> i64 {
        match self {
            PartKind::IntegerShift { window } => j as i64 - window,
            _ => j as i64,
        }
    }

    fn cell_slot(&self, index: i64) -> Option<usize> {
        let slot = match self {
            PartKind::IntegerShift { window } => index + window,
            _ => index,
        };
        (slot >= 0 && (slot as usize) < self.cell_count()).then_some(slot as usize)
    }

    fn cell_mass_at(&self, slot: usize) -> S {
        match self {
            PartKind::FinitePermutation { masses, .. } => masses[slot],
            PartKind::CircleRotation { resolution, .. } | PartKind::DoublingMap { resolution } => {
                S::one() / S::of_usize(*resolution)
            }
            PartKind::IntegerShift { .. } => S::one(),
            PartKind::BooleMap { masses, .. } => masses[slot],
        }
    }

    fn cell_coord_at(&self, slot: usize) -> Coord<S> {
        match self {
            PartKind::FinitePermutation { .. } => Coord::Index(slot as i64),
            PartKind::CircleRotation { resolution, .. } | PartKind::DoublingMap { resolution } => {
                Coord::Real(S::of_usize(slot) / S::of_usize(*resolution))
            }
            PartKind::IntegerShift { window } => Coord::Index(slot as i64 - window),
            PartKind::BooleMap { samples, .. } => Coord::Real(samples[slot]),
        }
    }

    fn contains(&self, c: &Coord<S>) -> bool {
        match (self, c) {
            (PartKind::FinitePermutation { perm, .. }, Coord::Index(i)) => *i >= 0 && (*i as usize) < perm.len(),
            (PartKind::CircleRotation { .. } | PartKind::DoublingMap { .. }, Coord::Real(x)) => {
                *x >= S::zero() && *x < S::one()
            }
            (PartKind::IntegerShift { .. }, Coord::Index(_)) => true,
            (PartKind::BooleMap { .. }, Coord::Real(x)) => x.is_finite(),
            _ => false,
        }
    }

    /// `T^k(start)` computed directly where a closed form exists, otherwise by
    /// one step from `current = T^{k-1}(start)`.
    fn advance(&self, start: &Coord<S>, current: &Coord<S>, k: usize) -> Result<Coord<S>> {
        Ok(match (self, current) {
            (PartKind::FinitePermutation { perm, .. }, Coord::Index(i)) => Coord::Index(perm[*i as usize] as i64),
            (PartKind::CircleRotation { alpha, .. }, Coord::Real(_)) => {
                let x0 = start.value();
                Coord::Real(frac(x0 + frac_mul(k as u64, *alpha)))
            }
            (PartKind::DoublingMap { .. }, Coord::Real(x)) => Coord::Real(frac(*x + *x)),
            (PartKind::IntegerShift { .. }, Coord::Index(i)) => Coord::Index(i + 1),
            (PartKind::BooleMap { .. }, Coord::Real(x)) => {
                if x.abs() <= S::lit(BOOLE_POLE_TOLERANCE) {
                    return Err(Error::OrbitEscape {
                        step: k - 1,
                        x: x.to_f64_lossy(),
                    });
                }
                Coord::Real(*x - x.recip())
            }
            _ => unreachable!("coordinate type checked on entry"),
        })
    }
}

/// One component of a system.
#[derive(Debug, Clone, PartialEq)]
pub struct Part<S> {
    pub kind: PartKind<S>,
    pub hopf: HopfTag,
    pub kronecker: KroneckerModel,
    /// Invariant density `p` (finite permutation parts only), indexed by state.
    pub density: Option<Vec<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DynamicalSystem<S> {
    parts: Vec<Part<S>>,
    union: bool,
}

/// Configuration-level description of a system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    FinitePermutation {
        masses: Vec<f64>,
        permutation: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    /// Cyclic shift `i ↦ i+1 mod n` with uniform masses `1/n`.
    Cyclic {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        density: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    CircleRotation {
        alpha: f64,
        resolution: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    DoublingMap {
        resolution: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    IntegerShift {
        window: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    BooleMap {
        count: usize,
        range: f64,
        seed: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hopf: Option<HopfTag>,
    },
    DisjointUnion {
        parts: Vec<SystemSpec>,
    },
}

fn malformed<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::MalformedSpec(msg.into()))
}

fn to_s<S: Real>(x: f64) -> S {
    S::lit(x)
}

fn boole_samples<S: Real>(sampling: &BooleSampling) -> (Vec<S>, Vec<S>) {
    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let r = sampling.range;
    // truncated standard Cauchy via its inverse CDF
    let lo = 0.5 + r.atan() * -std::f64::consts::FRAC_1_PI;
    let hi = 0.5 + r.atan() * std::f64::consts::FRAC_1_PI;
    let z = 2.0 * r.atan();
    let mut xs = Vec::with_capacity(sampling.count);
    let mut ms = Vec::with_capacity(sampling.count);
    while xs.len() < sampling.count {
        let u: f64 = rng.random_range(lo..hi);
        let x = (std::f64::consts::PI * (u - 0.5)).tan();
        if x == 0.0 || !x.is_finite() {
            continue;
        }
        xs.push(to_s(x));
        ms.push(to_s(z * (1.0 + x * x) / sampling.count as f64));
    }
    (xs, ms)
}

fn build_part<S: Real>(spec: &SystemSpec) -> Result<Part<S>> {
    let (kind, declared, density) = match spec {
        SystemSpec::FinitePermutation {
            masses,
            permutation,
            density,
            hopf,
        } => {
            let n = permutation.len();
            if n == 0 {
                return malformed("finite permutation needs at least one state");
            }
            if masses.len() != n {
                return malformed(format!("{} masses for {} states", masses.len(), n));
            }
            if let Some(m) = masses.iter().find(|m| !(**m > 0.0) || !m.is_finite()) {
                return malformed(format!("nonpositive mass {m}"));
            }
            let mut seen = vec![false; n];
            for &j in permutation {
                if j >= n || seen[j] {
                    return malformed("permutation is not a bijection");
                }
                seen[j] = true;
            }
            // masses must be constant along orbits for exact preservation
            for (i, &j) in permutation.iter().enumerate() {
                if masses[i] != masses[j] {
                    return malformed(format!("mass not constant along the orbit of state {i}"));
                }
            }
            let kind = PartKind::FinitePermutation {
                masses: masses.iter().map(|&m| to_s(m)).collect(),
                perm: permutation.clone(),
            };
            (kind, *hopf, density.clone())
        }
        SystemSpec::Cyclic { n, density, hopf } => {
            if *n == 0 {
                return malformed("cyclic shift needs at least one state");
            }
            let kind = PartKind::FinitePermutation {
                masses: vec![S::one() / S::of_usize(*n); *n],
                perm: (0..*n).map(|i| (i + 1) % n).collect(),
            };
            (kind, *hopf, density.clone())
        }
        SystemSpec::CircleRotation {
            alpha,
            resolution,
            hopf,
        } => {
            if !(*alpha > 0.0 && *alpha < 1.0) {
                return malformed(format!("rotation amount {alpha} outside (0, 1)"));
            }
            if !resolution.is_power_of_two() {
                return malformed(format!("quadrature resolution {resolution} is not a power of two"));
            }
            (
                PartKind::CircleRotation {
                    alpha: to_s(*alpha),
                    resolution: *resolution,
                },
                *hopf,
                None,
            )
        }
        SystemSpec::DoublingMap { resolution, hopf } => {
            if !resolution.is_power_of_two() {
                return malformed(format!("quadrature resolution {resolution} is not a power of two"));
            }
            (
                PartKind::DoublingMap {
                    resolution: *resolution,
                },
                *hopf,
                None,
            )
        }
        SystemSpec::IntegerShift { window, hopf } => {
            if *window < 1 {
                return malformed(format!("integer window {window} must be at least 1"));
            }
            (PartKind::IntegerShift { window: *window }, *hopf, None)
        }
        SystemSpec::BooleMap {
            count,
            range,
            seed,
            hopf,
        } => {
            if *count == 0 || !(*range > 0.0) || !range.is_finite() {
                return malformed("Boole sampling needs count ≥ 1 and a positive finite range");
            }
            let sampling = BooleSampling {
                count: *count,
                range: *range,
                seed: *seed,
            };
            let (samples, masses) = boole_samples(&sampling);
            (
                PartKind::BooleMap {
                    sampling,
                    samples,
                    masses,
                },
                *hopf,
                None,
            )
        }
        SystemSpec::DisjointUnion { .. } => return malformed("nested disjoint unions"),
    };

    let hopf = kind.analytic_hopf();
    if let Some(d) = declared {
        if d != hopf {
            return malformed(format!("{} part declared {:?}, classified {:?}", kind.name(), d, hopf));
        }
    }
    let density = match density {
        None => None,
        Some(p) => Some(validate_density(&kind, &p)?),
    };
    Ok(Part {
        kronecker: kind.analytic_kronecker(),
        kind,
        hopf,
        density,
    })
}

fn validate_density<S: Real>(kind: &PartKind<S>, p: &[f64]) -> Result<Vec<S>> {
    let PartKind::FinitePermutation { perm, .. } = kind else {
        return malformed("densities are supported on finite permutation parts only");
    };
    if p.len() != perm.len() {
        return malformed("density length differs from state count");
    }
    if p.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return malformed("density must be strictly positive");
    }
    if perm.iter().enumerate().any(|(i, &j)| p[i] != p[j]) {
        return malformed("density is not invariant (p∘T ≠ p)");
    }
    Ok(p.iter().map(|&v| to_s(v)).collect())
}

/// Validates a spec and builds the system.
pub fn build_system<S: Real>(spec: &SystemSpec) -> Result<DynamicalSystem<S>> {
    match spec {
        SystemSpec::DisjointUnion { parts } => {
            if parts.is_empty() {
                return malformed("empty disjoint union");
            }
            let parts = parts.iter().map(build_part).collect::<Result<Vec<_>>>()?;
            Ok(DynamicalSystem { parts, union: true })
        }
        other => Ok(DynamicalSystem {
            parts: vec![build_part(other)?],
            union: false,
        }),
    }
}

impl<S: Real> DynamicalSystem<S> {
    pub fn parts(&self) -> &[Part<S>] {
        &self.parts
    }

    pub fn part(&self, id: usize) -> Option<&Part<S>> {
        self.parts.get(id)
    }

    pub fn is_union(&self) -> bool {
        self.union
    }

    /// Total measure, `None` when some part has infinite measure.
    pub fn total_measure(&self) -> Option<S> {
        self.parts.iter().map(|p| p.kind.total_measure()).sum()
    }

    pub fn is_finite_permutation(&self) -> bool {
        self.parts
            .iter()
            .all(|p| matches!(p.kind, PartKind::FinitePermutation { .. }))
    }

    pub fn check_point(&self, pt: &StatePoint<S>) -> Result<()> {
        match self.parts.get(pt.part) {
            Some(p) if p.kind.contains(&pt.coord) => Ok(()),
            _ => malformed(format!("state point {pt:?} is outside the system")),
        }
    }

    /// Checks that `f` can be averaged on this system: its expression fits
    /// every part, and it has finite L¹ norm on infinite-measure parts.
    pub fn admit(&self, f: &Observable<S>) -> Result<()> {
        for p in &self.parts {
            f.check_domain(&p.kind)?;
            if p.kind.is_line() && !f.integrable_on_line() {
                return Err(Error::NonIntegrableObservable(f.name().into()));
            }
        }
        Ok(())
    }

    /// All measure cells in part order.
    pub fn cells(&self) -> Vec<Cell> {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(pid, p)| {
                (0..p.kind.cell_count()).map(move |j| Cell {
                    part: pid,
                    index: p.kind.cell_index(j),
                })
            })
            .collect()
    }

    fn slot(&self, cell: &Cell) -> Result<(&PartKind<S>, usize)> {
        let unknown = Error::UnknownCell {
            part: cell.part,
            index: cell.index,
        };
        let part = self.parts.get(cell.part).ok_or(unknown.clone())?;
        let slot = part.kind.cell_slot(cell.index).ok_or(unknown)?;
        Ok((&part.kind, slot))
    }

    pub fn cell_mass(&self, cell: &Cell) -> Result<S> {
        let (kind, slot) = self.slot(cell)?;
        Ok(kind.cell_mass_at(slot))
    }

    /// Representative state point of a cell (its quadrature node or sample).
    pub fn cell_point(&self, cell: &Cell) -> Result<StatePoint<S>> {
        let (kind, slot) = self.slot(cell)?;
        Ok(StatePoint {
            part: cell.part,
            coord: kind.cell_coord_at(slot),
        })
    }

    /// Measure of a set of cells; duplicates count once.
    pub fn measure_of(&self, cells: &[Cell]) -> Result<S> {
        let unique: BTreeSet<Cell> = cells.iter().copied().collect();
        let mut total = S::zero();
        for c in &unique {
            total += self.cell_mass(c)?;
        }
        Ok(total)
    }

    /// Orbit `ω, Tω, T²ω, …` as coordinates.
    pub fn orbit(&self, start: StatePoint<S>) -> Result<Orbit<'_, S>> {
        self.check_point(&start)?;
        Ok(Orbit {
            kind: &self.parts[start.part].kind,
            start: start.coord,
            current: start.coord,
            k: 0,
            done: false,
        })
    }

    /// Supremum of `|f|`. Exact on finite and lattice parts (the lattice tail
    /// is bounded through [`Observable::tail`]); on continuous parts it is
    /// the maximum over quadrature nodes or samples.
    pub fn sup_norm(&self, f: &Observable<S>) -> Result<S> {
        let mut sup = S::zero();
        for (pid, p) in self.parts.iter().enumerate() {
            f.check_domain(&p.kind)?;
            match &p.kind {
                PartKind::IntegerShift { window } => {
                    let eta = S::lit(1e-12);
                    let (limit, r) = f.tail(eta).ok_or_else(|| Error::NotInRmu("tail undetermined".into()))?;
                    sup = sup.max(limit.norm() + eta);
                    let r = r.ceil().to_i64().unwrap_or(i64::MAX).max(*window);
                    for i in -r..=r {
                        sup = sup.max(f.eval(&Coord::Index(i)).norm());
                    }
                }
                kind => {
                    for j in 0..kind.cell_count() {
                        let c = self.cell_point(&Cell {
                            part: pid,
                            index: kind.cell_index(j),
                        })?;
                        sup = sup.max(f.eval(&c.coord).norm());
                    }
                }
            }
        }
        Ok(sup)
    }

    /// The system re-weighted by its invariant densities, `μ' = p·μ`. Parts
    /// without a density keep their measure.
    pub fn density_weighted(&self) -> DynamicalSystem<S> {
        let parts = self
            .parts
            .iter()
            .map(|p| match (&p.kind, &p.density) {
                (PartKind::FinitePermutation { masses, perm }, Some(d)) => Part {
                    kind: PartKind::FinitePermutation {
                        masses: masses.iter().zip(d).map(|(&m, &q)| m * q).collect(),
                        perm: perm.clone(),
                    },
                    hopf: p.hopf,
                    kronecker: p.kronecker,
                    density: None,
                },
                _ => p.clone(),
            })
            .collect();
        DynamicalSystem {
            parts,
            union: self.union,
        }
    }
}

/// Iterator over `T^k ω` for `k = 0, 1, …`. Yields an error and stops if the
/// orbit escapes.
pub struct Orbit<'a, S> {
    kind: &'a PartKind<S>,
    start: Coord<S>,
    current: Coord<S>,
    k: usize,
    done: bool,
}

impl<S: Real> Iterator for Orbit<'_, S> {
    type Item = Result<Coord<S>>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if self.k > 0 {
            match self.kind.advance(&self.start, &self.current, self.k) {
                Ok(c) => self.current = c,
                Err(e) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
        self.k += 1;
        Some(Ok(self.current))
    }
}

/// Streams `f(T^k ω)` for `k = 0..n_max`.
pub fn orbit_stream<'a, S: Real>(
    sys: &'a DynamicalSystem<S>,
    start: StatePoint<S>,
    f: &'a Observable<S>,
    n_max: usize,
) -> Result<impl Iterator<Item = Result<Complex<S>>> + 'a> {
    if n_max == 0 {
        return malformed("n_max must be at least 1");
    }
    f.check_domain(&sys.parts[sys.check_point(&start).map(|_| start.part)?].kind)?;
    Ok(sys.orbit(start)?.take(n_max).map(move |c| c.map(|c| f.eval(&c))))
}

/// The two real preimages of `x` under the Boole map.
pub fn boole_preimages(x: f64) -> [f64; 2] {
    let d = (x * x + 4.0).sqrt();
    // avoid cancellation in the root of smaller magnitude
    let big = if x >= 0.0 { (x + d) / 2.0 } else { (x - d) / 2.0 };
    [big, -1.0 / big]
}

/// `T'(y) = 1 + 1/y²` for the Boole map.
pub fn boole_derivative(y: f64) -> f64 {
    1.0 + 1.0 / (y * y)
}
