//! Koszul chain and cochain complexes of powered sequences, inter-level
//! transition chain maps, and the colimit engine that evaluates Cech
//! cohomology as the stabilized limit of Koszul cohomologies.
//!
//! Grading convention: the chain generator `e_I` of level `n` sits in
//! internal degree `+n*deg(a_I)` and the cochain generator `(e_I)*` in
//! `-n*deg(a_I)`, which makes every differential and every transition a
//! degree-zero map, so colimits can be taken one internal degree at a time.
//! The Cech complex itself is never materialized (localizations do not have
//! finite graded pieces); its cohomology is the colimit of the cochain
//! Koszul tower, reported with bounded-window stabilization metadata rather
//! than asserted globally.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::homcomplex::{
    homology_space, homology_transition, ChainMap, ComplexError, Direction, FPGradedModule,
    GradedFreeComplex,
};
use crate::polyring::{
    poly_mul, poly_pow, GradedFreeModule, GradedRingContext, Homogeneity, PolyMatrix, Polynomial,
};

#[derive(Debug, Error)]
pub enum KoszulError {
    #[error("sequence must contain at least one element")]
    EmptySequence,
    #[error("sequence element {index} is not homogeneous")]
    NonHomogeneousElement { index: usize },
    #[error("sequence element {index} must have positive degree")]
    NonPositiveDegree { index: usize },
    #[error("level must be at least 1, got {0}")]
    BadLevel(usize),
    #[error("need max level >= window >= 2, got max level {n_max}, window {window}")]
    BadStabilizationBounds { n_max: usize, window: usize },
    #[error("transition requires m >= n >= 1, got n={n}, m={m}")]
    BadTransition { n: usize, m: usize },
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A sequence `a_1, .., a_r` of homogeneous positive-degree ring elements.
#[derive(Debug, Clone)]
pub struct Sequence {
    elements: Vec<Polynomial>,
    degrees: Vec<i64>,
}

impl Sequence {
    pub fn new(ctx: &GradedRingContext, elements: Vec<Polynomial>) -> Result<Self, KoszulError> {
        if elements.is_empty() {
            return Err(KoszulError::EmptySequence);
        }
        let mut degrees = Vec::with_capacity(elements.len());
        for (index, a) in elements.iter().enumerate() {
            match a.homogeneity(ctx.var_degrees()) {
                Homogeneity::Degree(d) if d > 0 => degrees.push(d),
                Homogeneity::Degree(_) | Homogeneity::Zero => {
                    return Err(KoszulError::NonPositiveDegree { index })
                }
                Homogeneity::Mixed => return Err(KoszulError::NonHomogeneousElement { index }),
            }
        }
        Ok(Sequence { elements, degrees })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Sum of the element degrees.
    pub fn total_degree(&self) -> i64 {
        self.degrees.iter().sum()
    }

    /// All elements are single-term polynomials.
    pub fn is_monomial(&self) -> bool {
        self.elements.iter().all(|a| a.single_term().is_some())
    }

    /// `(prod_{j in subset} a_j)^exp`, reduced in the ring.
    fn subset_power(&self, ctx: &GradedRingContext, subset: &[usize], exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(ctx.nvars());
        for &j in subset {
            acc = poly_mul(ctx, &acc, &poly_pow(ctx, &self.elements[j], exp));
        }
        acc
    }

    /// Internal degree of `a_I` for a subset `I`.
    fn subset_degree(&self, subset: &[usize]) -> i64 {
        subset.iter().map(|&j| self.degrees[j]).sum()
    }
}

/// Size-`k` subsets of `{0..r-1}` in lexicographic order.
pub(crate) fn combinations(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for j in start..r {
            cur.push(j);
            rec(j + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    rec(0, r, k, &mut cur, &mut out);
    out
}

/// True when `(-1)^{#{k in set : k < j}}` is negative.
pub(crate) fn wedge_sign(j: usize, set: &[usize]) -> bool {
    set.iter().filter(|&&k| k < j).count() % 2 == 1
}

/// The chain Koszul complex `K(a^n)`: spots `0..=r` with basis `e_I`, the
/// generator `e_I` in internal degree `n*deg(a_I)`, and differential
/// `e_I -> sum sign(j, I) a_j^n e_(I minus j)`.
pub fn koszul_chain(
    ctx: &GradedRingContext,
    a: &Sequence,
    n: usize,
) -> Result<GradedFreeComplex, KoszulError> {
    koszul_complex(ctx, a, n, Direction::Chain)
}

/// The cochain Koszul complex `K*(a^n)` (the dual), generator `(e_I)*` in
/// internal degree `-n*deg(a_I)`; the differential is the transpose of the
/// chain differential.
pub fn koszul_cochain(
    ctx: &GradedRingContext,
    a: &Sequence,
    n: usize,
) -> Result<GradedFreeComplex, KoszulError> {
    koszul_complex(ctx, a, n, Direction::Cochain)
}

fn koszul_complex(
    ctx: &GradedRingContext,
    a: &Sequence,
    n: usize,
    direction: Direction,
) -> Result<GradedFreeComplex, KoszulError> {
    if n == 0 {
        return Err(KoszulError::BadLevel(n));
    }
    let r = a.len();
    let field = ctx.field();
    let powered: Vec<Polynomial> = a
        .elements()
        .iter()
        .map(|e| poly_pow(ctx, e, n as u32))
        .collect();
    let spots: Vec<GradedFreeModule> = (0..=r)
        .map(|i| {
            let degs: Vec<i64> = combinations(r, i)
                .iter()
                .map(|set| {
                    let d = (n as i64) * a.subset_degree(set);
                    match direction {
                        Direction::Chain => d,
                        Direction::Cochain => -d,
                    }
                })
                .collect();
            GradedFreeModule::new(degs)
        })
        .collect();
    let mut diffs = Vec::with_capacity(r);
    for i in 0..r {
        // chain differential d_{i+1}: spot i+1 -> spot i
        let cols_sets = combinations(r, i + 1);
        let rows_sets = combinations(r, i);
        let row_index = |set: &Vec<usize>| rows_sets.iter().position(|s| s == set).unwrap();
        let mut d = PolyMatrix::zeros(rows_sets.len(), cols_sets.len());
        for (col, set) in cols_sets.iter().enumerate() {
            for &j in set {
                let smaller: Vec<usize> = set.iter().copied().filter(|&k| k != j).collect();
                let row = row_index(&smaller);
                let mut entry = powered[j].clone();
                if wedge_sign(j, set) {
                    entry = entry.neg(field);
                }
                d.set(row, col, entry);
            }
        }
        diffs.push(match direction {
            Direction::Chain => d,
            Direction::Cochain => d.transpose(),
        });
    }
    Ok(GradedFreeComplex::new(ctx, spots, diffs, direction)?)
}

/// Diagonal transition matrices `e_I -> a_I^{m-n} e_I` per spot.
fn transition_maps(ctx: &GradedRingContext, a: &Sequence, n: usize, m: usize) -> Vec<PolyMatrix> {
    let r = a.len();
    (0..=r)
        .map(|i| {
            let sets = combinations(r, i);
            PolyMatrix::diagonal(
                sets.iter()
                    .map(|set| a.subset_power(ctx, set, (m - n) as u32))
                    .collect(),
            )
        })
        .collect()
}

/// The projective-system transition `K(a^m) -> K(a^n)` (chain complexes,
/// `m >= n`), verified to be a chain map.
pub fn chain_transition(
    ctx: &GradedRingContext,
    a: &Sequence,
    n: usize,
    m: usize,
) -> Result<ChainMap, KoszulError> {
    if n == 0 || m < n {
        return Err(KoszulError::BadTransition { n, m });
    }
    let source = koszul_chain(ctx, a, m)?;
    let target = koszul_chain(ctx, a, n)?;
    Ok(ChainMap::new(
        ctx,
        source,
        target,
        transition_maps(ctx, a, n, m),
    )?)
}

/// The inductive-system transition `K*(a^n) -> K*(a^m)` (cochain complexes,
/// `m >= n`), verified to be a chain map.
pub fn cochain_transition(
    ctx: &GradedRingContext,
    a: &Sequence,
    n: usize,
    m: usize,
) -> Result<ChainMap, KoszulError> {
    if n == 0 || m < n {
        return Err(KoszulError::BadTransition { n, m });
    }
    let source = koszul_cochain(ctx, a, n)?;
    let target = koszul_cochain(ctx, a, m)?;
    Ok(ChainMap::new(
        ctx,
        source,
        target,
        transition_maps(ctx, a, n, m),
    )?)
}

/// The levels `K(a^1), .., K(a^max)` of one direction, built eagerly with
/// all construction-time checks.
#[derive(Debug)]
pub struct KoszulTower {
    sequence: Sequence,
    direction: Direction,
    levels: Vec<GradedFreeComplex>,
}

impl KoszulTower {
    pub fn build(
        ctx: &GradedRingContext,
        a: &Sequence,
        direction: Direction,
        max_level: usize,
    ) -> Result<Self, KoszulError> {
        if max_level == 0 {
            return Err(KoszulError::BadLevel(max_level));
        }
        let levels = (1..=max_level)
            .map(|n| koszul_complex(ctx, a, n, direction))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(KoszulTower {
            sequence: a.clone(),
            direction,
            levels,
        })
    }

    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn max_level(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, n: usize) -> &GradedFreeComplex {
        &self.levels[n - 1]
    }

    pub fn levels(&self) -> &[GradedFreeComplex] {
        &self.levels
    }

    /// Transition between two levels, oriented by the tower direction:
    /// chain towers map `m -> n`, cochain towers map `n -> m` (`m >= n`).
    pub fn transition(
        &self,
        ctx: &GradedRingContext,
        n: usize,
        m: usize,
    ) -> Result<ChainMap, KoszulError> {
        match self.direction {
            Direction::Chain => chain_transition(ctx, &self.sequence, n, m),
            Direction::Cochain => cochain_transition(ctx, &self.sequence, n, m),
        }
    }
}

/// Stabilization data for one internal degree of a colimit computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColimitEntry {
    pub degree: i64,
    /// Rank of the composite transition from the bottom of the stability
    /// window into the top level: the classes that survived the whole
    /// window, and the colimit dimension once the tower has stabilized.
    pub stabilized_dim: usize,
    /// Smallest level from which every composite transition rank into the
    /// top level agrees with the top level's own dimension.
    pub stabilization_level: usize,
    /// True when the composite ranks are constant across the final
    /// stability window.
    pub certified: bool,
}

/// Per-degree colimit dimensions of one cohomology spot with the window
/// parameters that produced them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColimitReport {
    pub spot: usize,
    pub n_max: usize,
    pub stability_window: usize,
    pub degree_lo: i64,
    pub degree_hi: i64,
    pub entries: Vec<ColimitEntry>,
}

impl ColimitReport {
    pub fn all_certified(&self) -> bool {
        self.entries.iter().all(|e| e.certified)
    }

    pub fn entry(&self, degree: i64) -> Option<&ColimitEntry> {
        self.entries.iter().find(|e| e.degree == degree)
    }

    /// `(degree, dim)` pairs of the table.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.entries
            .iter()
            .map(|e| (e.degree, e.stabilized_dim))
            .collect()
    }
}

/// Colimit of an inductive tower of cochain complexes along explicit
/// transitions into the top level. `transitions[k]` must map level `k+1`
/// to level `n_max`; per degree, the composite rank into the top level is
/// tracked and certified when constant over the last `window` levels.
pub(crate) fn inductive_colimit_report(
    ctx: &GradedRingContext,
    levels: &[GradedFreeComplex],
    transitions: &[ChainMap],
    module: &FPGradedModule,
    spot: usize,
    degrees: std::ops::RangeInclusive<i64>,
    window: usize,
) -> Result<ColimitReport, KoszulError> {
    let n_max = levels.len();
    if window < 2 || n_max < window {
        return Err(KoszulError::BadStabilizationBounds { n_max, window });
    }
    assert_eq!(transitions.len(), n_max - 1, "one transition per lower level");
    let degree_list: Vec<i64> = degrees.clone().collect();
    let entries: Vec<ColimitEntry> = degree_list
        .par_iter()
        .map(|&d| -> Result<ColimitEntry, KoszulError> {
            let top_dim = homology_space(ctx, &levels[n_max - 1], module, spot, d)?.dim();
            let mut ranks = Vec::with_capacity(n_max);
            for t in transitions.iter() {
                let induced = homology_transition(ctx, t, module, spot, d)?;
                ranks.push(induced.rank(ctx.field()));
            }
            ranks.push(top_dim);
            let mut stabilization_level = n_max + 1;
            for lvl in (1..=n_max).rev() {
                if ranks[lvl - 1] == top_dim {
                    stabilization_level = lvl;
                } else {
                    break;
                }
            }
            let certified = stabilization_level <= n_max - window + 1;
            Ok(ColimitEntry {
                degree: d,
                stabilized_dim: ranks[n_max - window],
                stabilization_level,
                certified,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ColimitReport {
        spot,
        n_max,
        stability_window: window,
        degree_lo: *degrees.start(),
        degree_hi: *degrees.end(),
        entries,
    })
}

/// Cech cohomology of `(a, M)` at one spot over a degree window, computed as
/// the colimit of the cochain Koszul tower with `n_max` levels and
/// stabilization window `window`.
pub fn cech_cohomology(
    ctx: &GradedRingContext,
    a: &Sequence,
    module: &FPGradedModule,
    spot: usize,
    degrees: std::ops::RangeInclusive<i64>,
    n_max: usize,
    window: usize,
) -> Result<ColimitReport, KoszulError> {
    if window < 2 || n_max < window {
        return Err(KoszulError::BadStabilizationBounds { n_max, window });
    }
    let tower = KoszulTower::build(ctx, a, Direction::Cochain, n_max)?;
    let transitions: Vec<ChainMap> = (1..n_max)
        .map(|n| cochain_transition(ctx, a, n, n_max))
        .collect::<Result<Vec<_>, _>>()?;
    inductive_colimit_report(ctx, &tower.levels, &transitions, module, spot, degrees, window)
}
