//! Pro-system utilities, weak-proregularity and proregularity certifiers,
//! the torsion functor, local cohomology via Taylor-resolution Ext colimits,
//! and the cross-check that the two cohomology pipelines agree.
//!
//! Verdict semantics are deliberately one-sided: a bounded search that finds
//! no witness reports `FailedWithinBounds`, never a refutation, and zero-map
//! certificates are labelled with the degree bound they were checked under.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{induced_map, quotient_reduce, FieldSpec, Mat};
use crate::groebner::{buchberger, colon_ideal, ideal_contains};
use crate::homcomplex::{
    homology_dims, homology_transition, ChainMap, ComplexError, Direction, FPGradedModule,
    GradedFreeComplex,
};
use crate::koszul::{
    chain_transition, combinations, inductive_colimit_report, wedge_sign, ColimitReport,
    KoszulError, KoszulTower, Sequence,
};
use crate::polyring::{
    degree_piece_basis, poly_pow, GradedFreeModule, GradedRingContext, Monomial, PolyMatrix,
    Polynomial,
};

#[derive(Debug, Error)]
pub enum CohomoError {
    #[error("sequence element `{0}` is not a monomial")]
    NonMonomial(String),
    #[error("the Taylor/Ext pipeline works over the free polynomial ring, not a quotient")]
    QuotientUnsupported,
    #[error("invalid bounds: {0}")]
    BadBounds(String),
    #[error("pro-system shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Koszul(#[from] KoszulError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// An N-indexed projective system of graded vector spaces: per-level
/// dimensions over a fixed degree list, with adjacent transition matrices
/// `X_(k+1) -> X_k` per degree. Composite transitions are built by matrix
/// products, so functoriality holds by construction.
#[derive(Debug, Clone)]
pub struct ProSystem {
    field: FieldSpec,
    degrees: Vec<i64>,
    dims: Vec<Vec<usize>>,
    steps: Vec<Vec<Mat>>,
}

impl ProSystem {
    pub fn new(
        field: FieldSpec,
        degrees: Vec<i64>,
        dims: Vec<Vec<usize>>,
        steps: Vec<Vec<Mat>>,
    ) -> Result<Self, CohomoError> {
        if dims.is_empty() {
            return Err(CohomoError::ShapeMismatch("no levels".into()));
        }
        if steps.len() + 1 != dims.len() {
            return Err(CohomoError::ShapeMismatch(format!(
                "{} levels need {} steps, got {}",
                dims.len(),
                dims.len() - 1,
                steps.len()
            )));
        }
        for (l, level_dims) in dims.iter().enumerate() {
            if level_dims.len() != degrees.len() {
                return Err(CohomoError::ShapeMismatch(format!(
                    "level {} has {} degree slots, expected {}",
                    l + 1,
                    level_dims.len(),
                    degrees.len()
                )));
            }
        }
        for (k, level_steps) in steps.iter().enumerate() {
            if level_steps.len() != degrees.len() {
                return Err(CohomoError::ShapeMismatch(format!(
                    "step {k} has wrong degree count"
                )));
            }
            for (di, m) in level_steps.iter().enumerate() {
                if m.rows() != dims[k][di] || m.cols() != dims[k + 1][di] {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "step {k} degree index {di} is {}x{}, expected {}x{}",
                        m.rows(),
                        m.cols(),
                        dims[k][di],
                        dims[k + 1][di]
                    )));
                }
            }
        }
        Ok(ProSystem {
            field,
            degrees,
            dims,
            steps,
        })
    }

    /// The tower of Koszul homology `H_spot(a^n)` with ring coefficients,
    /// levels `1..=max_level`, in degrees `0..=degree_bound`.
    pub fn from_koszul_homology(
        ctx: &GradedRingContext,
        a: &Sequence,
        spot: usize,
        max_level: usize,
        degree_bound: i64,
    ) -> Result<Self, CohomoError> {
        if max_level == 0 {
            return Err(CohomoError::BadBounds("max level must be positive".into()));
        }
        let module = FPGradedModule::ring();
        let degrees: Vec<i64> = (0..=degree_bound.max(0)).collect();
        let tower = KoszulTower::build(ctx, a, Direction::Chain, max_level)?;
        let mut dims = Vec::with_capacity(max_level);
        for n in 1..=max_level {
            let level = tower.level(n);
            let row = degrees
                .iter()
                .map(|&d| homology_dims(ctx, level, &module, spot, d))
                .collect::<Result<Vec<_>, _>>()?;
            dims.push(row);
        }
        let mut steps = Vec::with_capacity(max_level.saturating_sub(1));
        for n in 1..max_level {
            let t = chain_transition(ctx, a, n, n + 1)?;
            let row = degrees
                .iter()
                .map(|&d| homology_transition(ctx, &t, &module, spot, d))
                .collect::<Result<Vec<_>, _>>()?;
            steps.push(row);
        }
        ProSystem::new(*ctx.field(), degrees, dims, steps)
    }

    pub fn levels(&self) -> usize {
        self.dims.len()
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn dim(&self, level: usize, degree_index: usize) -> usize {
        self.dims[level - 1][degree_index]
    }

    /// Composite transition `X_m -> X_n` (`m >= n`) at one degree index.
    pub fn transition(&self, m: usize, n: usize, degree_index: usize) -> Mat {
        assert!(1 <= n && n <= m && m <= self.levels());
        let mut acc = Mat::identity(self.dims[m - 1][degree_index]);
        for level in (n..m).rev() {
            acc = self.steps[level - 1][degree_index].mul(&acc, &self.field);
        }
        acc
    }

    /// True when the composite `X_m -> X_n` vanishes in every stored degree.
    pub fn transition_is_zero(&self, m: usize, n: usize) -> bool {
        (0..self.degrees.len()).all(|di| self.transition(m, n, di).is_zero())
    }
}

/// Smallest `m` in `n..=m_max` whose composite transition to level `n` is
/// the zero map in every stored degree, or `None` if the bounded search
/// fails. `m = n` is the identity, so it only counts when `X_n` itself is
/// zero.
pub fn essentially_zero(sys: &ProSystem, n: usize, m_max: usize) -> Option<usize> {
    let top = m_max.min(sys.levels());
    (n..=top).find(|&m| sys.transition_is_zero(m, n))
}

/// A levelwise short exact sequence of pro-systems, validated degreewise
/// (injective / surjective / middle dimension) and checked to commute with
/// the transition steps.
#[derive(Debug, Clone)]
pub struct SesOfProSystems {
    x: ProSystem,
    y: ProSystem,
    z: ProSystem,
    inj: Vec<Vec<Mat>>,
    surj: Vec<Vec<Mat>>,
}

impl SesOfProSystems {
    pub fn new(
        x: ProSystem,
        y: ProSystem,
        z: ProSystem,
        inj: Vec<Vec<Mat>>,
        surj: Vec<Vec<Mat>>,
    ) -> Result<Self, CohomoError> {
        let levels = x.levels();
        if y.levels() != levels || z.levels() != levels {
            return Err(CohomoError::ShapeMismatch("level counts differ".into()));
        }
        if x.degrees != y.degrees || x.degrees != z.degrees {
            return Err(CohomoError::ShapeMismatch("degree lists differ".into()));
        }
        if inj.len() != levels || surj.len() != levels {
            return Err(CohomoError::ShapeMismatch("need one map per level".into()));
        }
        let field = x.field;
        let ndeg = x.degrees.len();
        for l in 0..levels {
            for di in 0..ndeg {
                let f = &inj[l][di];
                let g = &surj[l][di];
                let (xd, yd, zd) = (x.dims[l][di], y.dims[l][di], z.dims[l][di]);
                if f.rows() != yd || f.cols() != xd || g.rows() != zd || g.cols() != yd {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "maps at level {} degree index {di} have wrong shapes",
                        l + 1
                    )));
                }
                if f.rank(&field) != xd {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "injection fails at level {} degree index {di}",
                        l + 1
                    )));
                }
                if g.rank(&field) != zd {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "surjection fails at level {} degree index {di}",
                        l + 1
                    )));
                }
                if yd != xd + zd || !g.mul(f, &field).is_zero() {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "exactness fails at level {} degree index {di}",
                        l + 1
                    )));
                }
            }
        }
        for k in 0..levels.saturating_sub(1) {
            for di in 0..ndeg {
                let lhs = inj[k][di].mul(&x.steps[k][di], &field);
                let rhs = y.steps[k][di].mul(&inj[k + 1][di], &field);
                if lhs != rhs {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "injection does not commute with step {k}"
                    )));
                }
                let lhs = surj[k][di].mul(&y.steps[k][di], &field);
                let rhs = z.steps[k][di].mul(&surj[k + 1][di], &field);
                if lhs != rhs {
                    return Err(CohomoError::ShapeMismatch(format!(
                        "surjection does not commute with step {k}"
                    )));
                }
            }
        }
        Ok(SesOfProSystems { x, y, z, inj, surj })
    }

    pub fn sub(&self) -> &ProSystem {
        &self.x
    }

    pub fn middle(&self) -> &ProSystem {
        &self.y
    }

    pub fn quotient(&self) -> &ProSystem {
        &self.z
    }

    pub fn injections(&self) -> &[Vec<Mat>] {
        &self.inj
    }

    pub fn surjections(&self) -> &[Vec<Mat>] {
        &self.surj
    }
}

/// Outcome of the two-out-of-three consistency check.
#[derive(Debug, Clone)]
pub struct TwoOutOfThreeReport {
    pub violations: Vec<String>,
    /// Instances where a middle witness forced the outer systems.
    pub decided_from_middle: usize,
    /// Instances where outer witnesses forced the middle system.
    pub decided_from_outer: usize,
}

impl TwoOutOfThreeReport {
    pub fn consistent(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks, within the level window, that the middle system is essentially
/// zero exactly when both outer systems are. Only implications decidable at
/// bounded scale are asserted: a found middle witness must annihilate both
/// outer systems through the same level, and chained outer witnesses must
/// annihilate the middle system.
pub fn two_out_of_three_check(ses: &SesOfProSystems, m_max: usize) -> TwoOutOfThreeReport {
    let mut violations = Vec::new();
    let mut decided_from_middle = 0;
    let mut decided_from_outer = 0;
    for n in 1..=ses.y.levels() {
        if let Some(m) = essentially_zero(&ses.y, n, m_max) {
            decided_from_middle += 1;
            if !ses.x.transition_is_zero(m, n) {
                violations.push(format!(
                    "middle witness m={m} at n={n} does not kill the sub-system"
                ));
            }
            if !ses.z.transition_is_zero(m, n) {
                violations.push(format!(
                    "middle witness m={m} at n={n} does not kill the quotient system"
                ));
            }
        }
        if let Some(m1) = essentially_zero(&ses.x, n, m_max) {
            if let Some(m2) = essentially_zero(&ses.z, m1, m_max) {
                decided_from_outer += 1;
                if !ses.y.transition_is_zero(m2, n) {
                    violations.push(format!(
                        "outer witnesses m1={m1}, m2={m2} at n={n} do not kill the middle system"
                    ));
                }
            }
        }
    }
    TwoOutOfThreeReport {
        violations,
        decided_from_middle,
        decided_from_outer,
    }
}

/// Result of one bounded witness search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchOutcome {
    Witness(usize),
    NotFoundWithin(usize),
}

impl SearchOutcome {
    pub fn witness(&self) -> Option<usize> {
        match self {
            SearchOutcome::Witness(m) => Some(*m),
            SearchOutcome::NotFoundWithin(_) => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessRow {
    pub n: usize,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct WprEntry {
    pub homological_index: usize,
    pub results: Vec<WitnessRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WprVerdict {
    CertifiedUpToDegree(i64),
    FailedWithinBounds,
}

/// Witness table of the weak-proregularity search.
#[derive(Debug, Clone, Serialize)]
pub struct WprReport {
    pub degree_bound: i64,
    pub m_max: usize,
    pub entries: Vec<WprEntry>,
    pub verdict: WprVerdict,
}

impl WprReport {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, WprVerdict::CertifiedUpToDegree(_))
    }

    pub fn witness(&self, homological_index: usize, n: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.homological_index == homological_index)?
            .results
            .iter()
            .find(|row| row.n == n)?
            .outcome
            .witness()
    }
}

/// Default degree bound for zero-map certification:
/// `m_max * (sum of sequence degrees) + max generator degree of M`.
/// A heuristic for where homology generators can live, not a proof.
pub fn heuristic_degree_bound(a: &Sequence, module: &FPGradedModule, m_max: usize) -> i64 {
    let max_gen = module
        .ambient()
        .generator_degrees()
        .iter()
        .copied()
        .max()
        .unwrap_or(0);
    (m_max as i64) * a.total_degree() + max_gen
}

/// Runs the essentially-zero search on the Koszul homology towers
/// `H_i(a^n)` for every `i = 1..=r` and every starting level in `n_list`.
/// Witnesses certify zero transitions in all degrees up to the bound only.
pub fn is_weakly_proregular(
    ctx: &GradedRingContext,
    a: &Sequence,
    n_list: &[usize],
    m_max: usize,
    degree_bound: Option<i64>,
) -> Result<WprReport, CohomoError> {
    if m_max == 0 || n_list.is_empty() || n_list.iter().any(|&n| n == 0) {
        return Err(CohomoError::BadBounds(
            "m_max and all starting levels must be positive".into(),
        ));
    }
    let bound = degree_bound
        .unwrap_or_else(|| heuristic_degree_bound(a, &FPGradedModule::ring(), m_max));
    let mut entries = Vec::new();
    let mut all_found = true;
    for i in 1..=a.len() {
        let sys = ProSystem::from_koszul_homology(ctx, a, i, m_max, bound)?;
        let mut results = Vec::new();
        for &n in n_list {
            let outcome = if n > m_max {
                SearchOutcome::NotFoundWithin(m_max)
            } else {
                match essentially_zero(&sys, n, m_max) {
                    Some(m) => SearchOutcome::Witness(m),
                    None => SearchOutcome::NotFoundWithin(m_max),
                }
            };
            all_found &= outcome.witness().is_some();
            results.push(WitnessRow { n, outcome });
        }
        entries.push(WprEntry {
            homological_index: i,
            results,
        });
    }
    let verdict = if all_found {
        WprVerdict::CertifiedUpToDegree(bound)
    } else {
        WprVerdict::FailedWithinBounds
    };
    Ok(WprReport {
        degree_bound: bound,
        m_max,
        entries,
        verdict,
    })
}

/// Witness table of the colon-ideal proregularity search.
#[derive(Debug, Clone, Serialize)]
pub struct ProregReport {
    pub m_max: usize,
    pub entries: Vec<WprEntry>,
    pub all_witnesses_found: bool,
}

impl ProregReport {
    pub fn witness(&self, homological_index: usize, n: usize) -> Option<usize> {
        self.entries
            .iter()
            .find(|e| e.homological_index == homological_index)?
            .results
            .iter()
            .find(|row| row.n == n)?
            .outcome
            .witness()
    }
}

/// For each `i` and each starting level `n`, searches for the smallest
/// `m <= m_max` with `((a_1^m..a_(i-1)^m) : a_i^m) ⊆ ((a_1^n..a_(i-1)^n) :
/// a_i^(m-n))`. Quotient contexts contribute their ideal generators to both
/// sides; all ideal arithmetic happens in the free polynomial ring.
pub fn is_proregular(
    ctx: &GradedRingContext,
    a: &Sequence,
    n_list: &[usize],
    m_max: usize,
) -> Result<ProregReport, CohomoError> {
    if m_max == 0 || n_list.is_empty() || n_list.iter().any(|&n| n == 0) {
        return Err(CohomoError::BadBounds(
            "m_max and all starting levels must be positive".into(),
        ));
    }
    let free = ctx.free_context();
    let quotient_gens: Vec<Polynomial> = ctx
        .quotient()
        .map(|q| q.generators().to_vec())
        .unwrap_or_default();
    let mut entries = Vec::new();
    let mut all_found = true;
    for i in 1..=a.len() {
        let prefix: Vec<&Polynomial> = a.elements()[..i - 1].iter().collect();
        let ai = &a.elements()[i - 1];
        let mut results = Vec::new();
        for &n in n_list {
            let mut found = None;
            for m in n..=m_max {
                let left_gens: Vec<Polynomial> = prefix
                    .iter()
                    .map(|p| poly_pow(&free, p, m as u32))
                    .chain(quotient_gens.iter().cloned())
                    .collect();
                let left = buchberger(&free, left_gens);
                let left_colon = colon_ideal(&free, &left, &poly_pow(&free, ai, m as u32));
                let right_gens: Vec<Polynomial> = prefix
                    .iter()
                    .map(|p| poly_pow(&free, p, n as u32))
                    .chain(quotient_gens.iter().cloned())
                    .collect();
                let right = buchberger(&free, right_gens);
                let right_colon =
                    colon_ideal(&free, &right, &poly_pow(&free, ai, (m - n) as u32));
                if ideal_contains(&free, &right_colon, &left_colon) {
                    found = Some(m);
                    break;
                }
            }
            let outcome = match found {
                Some(m) => SearchOutcome::Witness(m),
                None => SearchOutcome::NotFoundWithin(m_max),
            };
            all_found &= outcome.witness().is_some();
            results.push(WitnessRow { n, outcome });
        }
        entries.push(WprEntry {
            homological_index: i,
            results,
        });
    }
    Ok(ProregReport {
        m_max,
        entries,
        all_witnesses_found: all_found,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaEntry {
    pub degree: i64,
    pub dim: usize,
    pub stabilized: bool,
}

/// Per-degree dimensions of the torsion submodule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub n_max: usize,
    pub entries: Vec<GammaEntry>,
}

impl GammaReport {
    pub fn all_stabilized(&self) -> bool {
        self.entries.iter().all(|e| e.stabilized)
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.entries.iter().map(|e| (e.degree, e.dim)).collect()
    }
}

/// Degreewise torsion submodule: elements of `M_d` annihilated by the
/// `n`-fold products of the ideal generators, as an ascending kernel chain
/// unioned up to `n_max`. Reports the last dimension and whether the chain
/// was stationary over the final two levels.
pub fn gamma_torsion(
    ctx: &GradedRingContext,
    module: &FPGradedModule,
    ideal_gens: &Sequence,
    degrees: std::ops::RangeInclusive<i64>,
    n_max: usize,
) -> Result<GammaReport, CohomoError> {
    if n_max < 2 {
        return Err(CohomoError::BadBounds(
            "torsion stabilization needs n_max >= 2".into(),
        ));
    }
    let mut calc = TorsionCalc {
        ctx,
        module,
        gens: ideal_gens,
        pieces: BTreeMap::new(),
        mult_maps: BTreeMap::new(),
        bases: BTreeMap::new(),
    };
    let mut entries = Vec::new();
    for d in degrees {
        let last = calc.basis(d, n_max).cols();
        let prev = calc.basis(d, n_max - 1).cols();
        entries.push(GammaEntry {
            degree: d,
            dim: last,
            stabilized: last == prev,
        });
    }
    Ok(GammaReport { n_max, entries })
}

struct TorsionCalc<'a> {
    ctx: &'a GradedRingContext,
    module: &'a FPGradedModule,
    gens: &'a Sequence,
    pieces: BTreeMap<i64, crate::exactlin::QuotientSpace>,
    mult_maps: BTreeMap<(usize, i64), Mat>,
    bases: BTreeMap<(i64, usize), Mat>,
}

impl<'a> TorsionCalc<'a> {
    fn piece_dim(&mut self, d: i64) -> usize {
        self.piece(d).dim()
    }

    fn piece(&mut self, d: i64) -> crate::exactlin::QuotientSpace {
        if let Some(p) = self.pieces.get(&d) {
            return p.clone();
        }
        let p = self.module.piece(self.ctx, d);
        self.pieces.insert(d, p.clone());
        p
    }

    /// Multiplication by generator `j` on module pieces `M_d -> M_(d+deg)`.
    fn mult_map(&mut self, j: usize, d: i64) -> Mat {
        if let Some(m) = self.mult_maps.get(&(j, d)) {
            return m.clone();
        }
        let g = &self.gens.elements()[j];
        let e = self.gens.degrees()[j];
        let gens = self.module.ambient().generator_degrees().to_vec();
        let n = gens.len();
        let mut diag = PolyMatrix::zeros(n, n);
        for i in 0..n {
            diag.set(i, i, g.clone());
        }
        let shifted: Vec<i64> = gens.iter().map(|&gd| gd + e).collect();
        let free = crate::homcomplex::poly_matrix_piece(self.ctx, &diag, &shifted, &gens, d + e);
        let src = self.piece(d);
        let dst = self.piece(d + e);
        let m = induced_map(&free, &src, &dst, self.ctx.field())
            .expect("multiplication preserves relations");
        self.mult_maps.insert((j, d), m.clone());
        m
    }

    /// Basis (in piece coordinates) of `{x in M_d : I^k x = 0}`.
    fn basis(&mut self, d: i64, k: usize) -> Mat {
        if let Some(b) = self.bases.get(&(d, k)) {
            return b.clone();
        }
        let dim = self.piece_dim(d);
        let result = if k == 0 {
            Mat::zeros(dim, 0)
        } else {
            // x is I^k-torsion iff every a_j x is I^(k-1)-torsion
            let field = *self.ctx.field();
            let mut stacked: Option<Mat> = None;
            for j in 0..self.gens.len() {
                let mult = self.mult_map(j, d);
                let target_dim = mult.rows();
                let prev = self.basis(d + self.gens.degrees()[j], k - 1);
                let proj = quotient_reduce(target_dim, &prev, &field);
                let condition = proj.projection().mul(&mult, &field);
                stacked = Some(match stacked {
                    None => condition,
                    Some(s) => stack_rows(&s, &condition),
                });
            }
            match stacked {
                None => Mat::identity(dim),
                Some(s) => s.kernel_basis(&field),
            }
        };
        self.bases.insert((d, k), result.clone());
        result
    }
}

fn stack_rows(a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols(), b.cols());
    let mut out = Mat::zeros(a.rows() + b.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            out.set(i, j, a.get(i, j));
        }
    }
    for i in 0..b.rows() {
        for j in 0..b.cols() {
            out.set(a.rows() + i, j, b.get(i, j));
        }
    }
    out
}

/// The Taylor complex of a list of monomials: basis `e_I` in internal degree
/// `deg lcm(I)` with differential `e_I -> sum sign(j, I)
/// (lcm(I)/lcm(I minus j)) e_(I minus j)`. A free resolution of the quotient
/// by the monomial ideal; the resolution property is rank-checked at
/// construction in low degrees.
#[derive(Debug, Clone)]
pub struct TaylorComplex {
    generators: Vec<Monomial>,
    complex: GradedFreeComplex,
}

impl TaylorComplex {
    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn complex(&self) -> &GradedFreeComplex {
        &self.complex
    }
}

/// Degree cap for the construction-time resolution spot check.
const TAYLOR_CHECK_BOUND: i64 = 10;

pub fn taylor_complex(
    ctx: &GradedRingContext,
    gens: &[Polynomial],
) -> Result<TaylorComplex, CohomoError> {
    if ctx.quotient().is_some() {
        return Err(CohomoError::QuotientUnsupported);
    }
    let monomials: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            g.single_term()
                .map(|(m, _)| m.clone())
                .ok_or_else(|| CohomoError::NonMonomial(ctx.display_poly(g)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = monomials.len();
    let weights = ctx.var_degrees();
    let lcm_of = |set: &[usize]| -> Monomial {
        set.iter().fold(Monomial::one(ctx.nvars()), |acc, &j| {
            acc.lcm(&monomials[j])
        })
    };
    let spots: Vec<GradedFreeModule> = (0..=r)
        .map(|i| {
            GradedFreeModule::new(
                combinations(r, i)
                    .iter()
                    .map(|set| lcm_of(set).degree(weights))
                    .collect(),
            )
        })
        .collect();
    let field = ctx.field();
    let mut diffs = Vec::with_capacity(r);
    for i in 0..r {
        let cols_sets = combinations(r, i + 1);
        let rows_sets = combinations(r, i);
        let row_index = |set: &Vec<usize>| rows_sets.iter().position(|s| s == set).unwrap();
        let mut d = PolyMatrix::zeros(rows_sets.len(), cols_sets.len());
        for (col, set) in cols_sets.iter().enumerate() {
            let l_full = lcm_of(set);
            for &j in set {
                let smaller: Vec<usize> = set.iter().copied().filter(|&k| k != j).collect();
                let ratio = l_full.div(&lcm_of(&smaller));
                let mut entry = Polynomial::monomial(ratio, 1, field);
                if wedge_sign(j, set) {
                    entry = entry.neg(field);
                }
                d.set(row_index(&smaller), col, entry);
            }
        }
        diffs.push(d);
    }
    let complex = GradedFreeComplex::new(ctx, spots, diffs, Direction::Chain)?;

    // resolution spot check: higher homology vanishes, H_0 counts standard
    // monomials of the monomial quotient
    let module = FPGradedModule::ring();
    let check_bound = TAYLOR_CHECK_BOUND.min(
        complex
            .spot(complex.top_spot())
            .generator_degrees()
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
            + 1,
    );
    for d in 0..=check_bound {
        for i in 1..=r {
            let h = homology_dims(ctx, &complex, &module, i, d)?;
            if h != 0 {
                return Err(CohomoError::ShapeMismatch(format!(
                    "Taylor complex is not a resolution: H_{i} has dim {h} in degree {d}"
                )));
            }
        }
        let h0 = homology_dims(ctx, &complex, &module, 0, d)?;
        let standard = degree_piece_basis(ctx, d)
            .into_iter()
            .filter(|m| !monomials.iter().any(|g| g.divides(m)))
            .count();
        if h0 != standard {
            return Err(CohomoError::ShapeMismatch(format!(
                "Taylor H_0 dimension {h0} differs from standard monomial count {standard} in degree {d}"
            )));
        }
    }

    Ok(TaylorComplex {
        generators: monomials,
        complex,
    })
}

/// The dual `Hom(T, A)` cochain complex of a Taylor complex.
fn taylor_cochain(
    ctx: &GradedRingContext,
    taylor: &TaylorComplex,
) -> Result<GradedFreeComplex, CohomoError> {
    let chain = taylor.complex();
    let spots: Vec<GradedFreeModule> = (0..chain.len())
        .map(|i| {
            GradedFreeModule::new(
                chain
                    .spot(i)
                    .generator_degrees()
                    .iter()
                    .map(|&g| -g)
                    .collect(),
            )
        })
        .collect();
    let diffs: Vec<PolyMatrix> = (0..chain.len() - 1)
        .map(|i| chain.differential(i).transpose())
        .collect();
    Ok(GradedFreeComplex::new(
        ctx,
        spots,
        diffs,
        Direction::Cochain,
    )?)
}

/// Local cohomology `H^spot` of `M` as the colimit over `n` of
/// `Ext^spot(A/(a_1^n..a_r^n), M)`, realized with Taylor resolutions and the
/// lcm-ratio comparison chain maps. Requires monomial sequence elements and
/// a free polynomial ring.
pub fn ext_colimit_local_cohomology(
    ctx: &GradedRingContext,
    a: &Sequence,
    module: &FPGradedModule,
    spot: usize,
    degrees: std::ops::RangeInclusive<i64>,
    n_max: usize,
    window: usize,
) -> Result<ColimitReport, CohomoError> {
    if ctx.quotient().is_some() {
        return Err(CohomoError::QuotientUnsupported);
    }
    if !a.is_monomial() {
        let offender = a
            .elements()
            .iter()
            .find(|e| e.single_term().is_none())
            .expect("some element is not a monomial");
        return Err(CohomoError::NonMonomial(ctx.display_poly(offender)));
    }
    if window < 2 || n_max < window {
        return Err(KoszulError::BadStabilizationBounds { n_max, window }.into());
    }
    let field = ctx.field();
    let base: Vec<Monomial> = a
        .elements()
        .iter()
        .map(|e| e.single_term().unwrap().0.clone())
        .collect();
    let r = base.len();
    let mut levels = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let powered: Vec<Polynomial> = base
            .iter()
            .map(|m| Polynomial::monomial(m.pow(n as u32), 1, field))
            .collect();
        let taylor = taylor_complex(ctx, &powered)?;
        levels.push(taylor_cochain(ctx, &taylor)?);
    }
    // comparison maps into the top level: e_I* -> lcm(I)^(n_max - n) e_I*
    let mut transitions = Vec::with_capacity(n_max - 1);
    for n in 1..n_max {
        let maps: Vec<PolyMatrix> = (0..=r)
            .map(|i| {
                let sets = combinations(r, i);
                PolyMatrix::diagonal(
                    sets.iter()
                        .map(|set| {
                            let lcm = set
                                .iter()
                                .fold(Monomial::one(ctx.nvars()), |acc, &j| acc.lcm(&base[j]));
                            Polynomial::monomial(lcm.pow((n_max - n) as u32), 1, field)
                        })
                        .collect(),
                )
            })
            .collect();
        transitions.push(ChainMap::new(
            ctx,
            levels[n - 1].clone(),
            levels[n_max - 1].clone(),
            maps,
        )?);
    }
    Ok(inductive_colimit_report(
        ctx,
        &levels,
        &transitions,
        module,
        spot,
        degrees,
        window,
    )?)
}

/// Search and window bounds for the theorem cross-check.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckBounds {
    pub n_max: usize,
    pub stability_window: usize,
    pub m_max: usize,
    pub n_list: Vec<usize>,
    pub degree_bound: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrosscheckVerdict {
    Pass,
    Inconclusive,
    Fail,
}

/// Everything the cross-check computed, with the comparison outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CrosscheckReport {
    pub wpr: WprReport,
    pub cech: Vec<ColimitReport>,
    pub ext: Option<Vec<ColimitReport>>,
    pub gamma: GammaReport,
    pub diffs: Vec<String>,
    pub verdict: CrosscheckVerdict,
}

/// Runs the weak-proregularity certifier and both cohomology pipelines (the
/// Ext pipeline only for monomial sequences over the free ring), then
/// compares the certified parts of the tables: Cech against Ext in every
/// spot, and the torsion functor against spot 0. The verdict passes only
/// when every compared entry is certified and equal; bounded-search
/// exhaustion yields `Inconclusive`, a certified disagreement `Fail`.
pub fn theorem_crosscheck(
    ctx: &GradedRingContext,
    a: &Sequence,
    module: &FPGradedModule,
    degrees: std::ops::RangeInclusive<i64>,
    bounds: &CrosscheckBounds,
) -> Result<CrosscheckReport, CohomoError> {
    let wpr = is_weakly_proregular(ctx, a, &bounds.n_list, bounds.m_max, bounds.degree_bound)?;
    let r = a.len();
    let mut cech = Vec::with_capacity(r + 1);
    for spot in 0..=r {
        cech.push(crate::koszul::cech_cohomology(
            ctx,
            a,
            module,
            spot,
            degrees.clone(),
            bounds.n_max,
            bounds.stability_window,
        )?);
    }
    let run_ext = a.is_monomial() && ctx.quotient().is_none();
    let ext = if run_ext {
        let mut reports = Vec::with_capacity(r + 1);
        for spot in 0..=r {
            reports.push(ext_colimit_local_cohomology(
                ctx,
                a,
                module,
                spot,
                degrees.clone(),
                bounds.n_max,
                bounds.stability_window,
            )?);
        }
        Some(reports)
    } else {
        None
    };
    let gamma = gamma_torsion(ctx, module, a, degrees.clone(), bounds.n_max)?;

    let mut diffs = Vec::new();
    if let Some(ext_reports) = &ext {
        for (spot, (c, e)) in cech.iter().zip(ext_reports).enumerate() {
            for (ce, ee) in c.entries.iter().zip(&e.entries) {
                if ce.certified && ee.certified && ce.stabilized_dim != ee.stabilized_dim {
                    diffs.push(format!(
                        "spot {spot} degree {}: Cech colimit {} vs Ext colimit {}",
                        ce.degree, ce.stabilized_dim, ee.stabilized_dim
                    ));
                }
            }
        }
    }
    for (ce, ge) in cech[0].entries.iter().zip(&gamma.entries) {
        if ce.certified && ge.stabilized && ce.stabilized_dim != ge.dim {
            diffs.push(format!(
                "degree {}: torsion dim {} vs Cech spot-0 dim {}",
                ge.degree, ge.dim, ce.stabilized_dim
            ));
        }
    }

    let all_conclusive = wpr.certified()
        && cech.iter().all(ColimitReport::all_certified)
        && ext
            .as_ref()
            .map_or(true, |rs| rs.iter().all(ColimitReport::all_certified))
        && gamma.all_stabilized();
    let verdict = if !diffs.is_empty() {
        CrosscheckVerdict::Fail
    } else if all_conclusive {
        CrosscheckVerdict::Pass
    } else {
        CrosscheckVerdict::Inconclusive
    };
    Ok(CrosscheckReport {
        wpr,
        cech,
        ext,
        gamma,
        diffs,
        verdict,
    })
}
