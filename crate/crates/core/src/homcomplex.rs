//! Graded free complexes, degreewise homology with coefficients in a
//! finitely presented graded module, chain maps, and the snake-lemma
//! machinery (connecting maps, long-exact-sequence checks).
//!
//! Nothing here ever computes module-level syzygies: a complex `C ⊗ M` is
//! evaluated one internal degree at a time, where each spot becomes a
//! finite-dimensional quotient space and each differential an induced matrix.
//! Homology bases are chosen deterministically (kernel basis of the outgoing
//! matrix, echelon complement of the boundary image), so induced maps on
//! homology are reproducible.

use serde::Serialize;
use thiserror::Error;

use crate::exactlin::{
    induced_map, quotient_reduce, ColEchelon, InducedMapError, Mat, QuotientSpace,
};
use crate::polyring::{
    degree_piece_basis, GradedFreeModule, GradedRingContext, Homogeneity, PolyError, PolyMatrix,
    Polynomial,
};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("d∘d ≠ 0 at position {position}")]
    NotAComplex { position: usize },
    #[error("matrix entry at ({row}, {col}) is not homogeneous of the required degree")]
    InhomogeneousEntry { row: usize, col: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map does not commute with differentials at spot {spot}")]
    NotChainMap { spot: usize },
    #[error("sequence is not exact in degree {degree}: {reason}")]
    NotExact { degree: i64, reason: String },
    #[error(transparent)]
    Induced(#[from] InducedMapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Whether differentials lower the spot index (chain) or raise it (cochain).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Chain,
    Cochain,
}

/// A finite complex of graded free modules with homogeneous degree-zero
/// differentials. `diffs[i]` connects spots `i` and `i+1`; the direction flag
/// says which way it points.
#[derive(Debug, Clone)]
pub struct GradedFreeComplex {
    spots: Vec<GradedFreeModule>,
    diffs: Vec<PolyMatrix>,
    direction: Direction,
}

impl GradedFreeComplex {
    /// Validates shapes, entry homogeneity against the generator degrees, and
    /// `d∘d = 0` symbolically.
    pub fn new(
        ctx: &GradedRingContext,
        spots: Vec<GradedFreeModule>,
        diffs: Vec<PolyMatrix>,
        direction: Direction,
    ) -> Result<Self, ComplexError> {
        if spots.is_empty() {
            return Err(ComplexError::ShapeMismatch(
                "complex needs at least one spot".into(),
            ));
        }
        if diffs.len() + 1 != spots.len() {
            return Err(ComplexError::ShapeMismatch(format!(
                "{} spots need {} differentials, got {}",
                spots.len(),
                spots.len() - 1,
                diffs.len()
            )));
        }
        for (i, d) in diffs.iter().enumerate() {
            let (src, dst) = match direction {
                Direction::Chain => (&spots[i + 1], &spots[i]),
                Direction::Cochain => (&spots[i], &spots[i + 1]),
            };
            if d.rows() != dst.rank() || d.cols() != src.rank() {
                return Err(ComplexError::ShapeMismatch(format!(
                    "differential {i} is {}x{}, expected {}x{}",
                    d.rows(),
                    d.cols(),
                    dst.rank(),
                    src.rank()
                )));
            }
            check_degree_zero(ctx, d, src.generator_degrees(), dst.generator_degrees())?;
        }
        for i in 0..diffs.len().saturating_sub(1) {
            let composite = match direction {
                Direction::Chain => diffs[i].mul(&diffs[i + 1], ctx),
                Direction::Cochain => diffs[i + 1].mul(&diffs[i], ctx),
            };
            if !composite.is_zero() {
                return Err(ComplexError::NotAComplex { position: i });
            }
        }
        Ok(GradedFreeComplex {
            spots,
            diffs,
            direction,
        })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn len(&self) -> usize {
        self.spots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spots.is_empty()
    }

    pub fn top_spot(&self) -> usize {
        self.spots.len() - 1
    }

    pub fn spot(&self, i: usize) -> &GradedFreeModule {
        &self.spots[i]
    }

    pub fn differential(&self, i: usize) -> &PolyMatrix {
        &self.diffs[i]
    }

    /// The differential leaving spot `i`, with its target spot.
    pub fn outgoing(&self, i: usize) -> Option<(&PolyMatrix, usize)> {
        match self.direction {
            Direction::Chain => (i >= 1).then(|| (&self.diffs[i - 1], i - 1)),
            Direction::Cochain => (i + 1 < self.spots.len()).then(|| (&self.diffs[i], i + 1)),
        }
    }

    /// The differential arriving at spot `i`, with its source spot.
    pub fn incoming(&self, i: usize) -> Option<(&PolyMatrix, usize)> {
        match self.direction {
            Direction::Chain => (i + 1 < self.spots.len()).then(|| (&self.diffs[i], i + 1)),
            Direction::Cochain => (i >= 1).then(|| (&self.diffs[i - 1], i - 1)),
        }
    }

    /// The spot the differential sends spot `i` to, if any.
    pub fn next_spot(&self, i: usize) -> Option<usize> {
        self.outgoing(i).map(|(_, t)| t)
    }
}

fn check_degree_zero(
    ctx: &GradedRingContext,
    m: &PolyMatrix,
    src_degs: &[i64],
    dst_degs: &[i64],
) -> Result<(), ComplexError> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let p = m.entry(r, c);
            match p.homogeneity(ctx.var_degrees()) {
                Homogeneity::Zero => {}
                Homogeneity::Degree(d) if d == src_degs[c] - dst_degs[r] => {}
                _ => return Err(ComplexError::InhomogeneousEntry { row: r, col: c }),
            }
        }
    }
    Ok(())
}

/// Finitely presented graded module `coker(relations -> ambient)`.
#[derive(Debug, Clone)]
pub struct FPGradedModule {
    ambient: GradedFreeModule,
    relations: PolyMatrix,
    relation_degrees: Vec<i64>,
}

impl FPGradedModule {
    pub fn new(
        ctx: &GradedRingContext,
        ambient: GradedFreeModule,
        relations: PolyMatrix,
    ) -> Result<Self, ComplexError> {
        if relations.rows() != ambient.rank() {
            return Err(ComplexError::ShapeMismatch(format!(
                "relations have {} rows, ambient rank is {}",
                relations.rows(),
                ambient.rank()
            )));
        }
        let mut relation_degrees = Vec::with_capacity(relations.cols());
        for j in 0..relations.cols() {
            let mut col_degree: Option<i64> = None;
            for i in 0..relations.rows() {
                let p = relations.entry(i, j);
                match p.homogeneity(ctx.var_degrees()) {
                    Homogeneity::Zero => {}
                    Homogeneity::Degree(d) => {
                        let total = d + ambient.generator_degrees()[i];
                        match col_degree {
                            None => col_degree = Some(total),
                            Some(t) if t == total => {}
                            Some(_) => {
                                return Err(ComplexError::InhomogeneousEntry { row: i, col: j })
                            }
                        }
                    }
                    Homogeneity::Mixed => {
                        return Err(ComplexError::InhomogeneousEntry { row: i, col: j })
                    }
                }
            }
            relation_degrees.push(col_degree.unwrap_or(0));
        }
        Ok(FPGradedModule {
            ambient,
            relations,
            relation_degrees,
        })
    }

    /// The free module itself (no relations).
    pub fn free(ambient: GradedFreeModule) -> Self {
        let rank = ambient.rank();
        FPGradedModule {
            ambient,
            relations: PolyMatrix::zeros(rank, 0),
            relation_degrees: Vec::new(),
        }
    }

    /// The ring as a module over itself.
    pub fn ring() -> Self {
        FPGradedModule::free(GradedFreeModule::new(vec![0]))
    }

    /// Cyclic module `A / (gens)`.
    pub fn cyclic(ctx: &GradedRingContext, gens: Vec<Polynomial>) -> Result<Self, ComplexError> {
        let relations = PolyMatrix::from_entries(1, gens.len(), gens);
        FPGradedModule::new(ctx, GradedFreeModule::new(vec![0]), relations)
    }

    pub fn ambient(&self) -> &GradedFreeModule {
        &self.ambient
    }

    pub fn relations(&self) -> &PolyMatrix {
        &self.relations
    }

    pub fn relation_degrees(&self) -> &[i64] {
        &self.relation_degrees
    }

    /// The degree-`d` piece as a quotient of the ambient free piece.
    pub fn piece(&self, ctx: &GradedRingContext, d: i64) -> QuotientSpace {
        let rel = poly_matrix_piece(
            ctx,
            &self.relations,
            &self.relation_degrees,
            self.ambient.generator_degrees(),
            d,
        );
        let ambient_dim = free_piece_dim(ctx, self.ambient.generator_degrees(), d);
        quotient_reduce(ambient_dim, &rel, ctx.field())
    }
}

fn free_piece_dim(ctx: &GradedRingContext, gens: &[i64], d: i64) -> usize {
    gens.iter()
        .map(|&g| degree_piece_basis(ctx, d - g).len())
        .sum()
}

/// Evaluates a polynomial matrix as a scalar matrix between the degree-`d`
/// pieces of free modules with the given generator degrees.
pub fn poly_matrix_piece(
    ctx: &GradedRingContext,
    m: &PolyMatrix,
    src_degs: &[i64],
    dst_degs: &[i64],
    d: i64,
) -> Mat {
    assert_eq!(m.cols(), src_degs.len());
    assert_eq!(m.rows(), dst_degs.len());
    let src_dims: Vec<usize> = src_degs
        .iter()
        .map(|&g| degree_piece_basis(ctx, d - g).len())
        .collect();
    let dst_dims: Vec<usize> = dst_degs
        .iter()
        .map(|&g| degree_piece_basis(ctx, d - g).len())
        .collect();
    let src_offsets = offsets(&src_dims);
    let dst_offsets = offsets(&dst_dims);
    let mut out = Mat::zeros(dst_dims.iter().sum(), src_dims.iter().sum());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let p = m.entry(r, c);
            if p.is_zero() {
                continue;
            }
            let block = crate::polyring::mult_matrix(ctx, p, d - src_degs[c])
                .expect("entries validated homogeneous");
            debug_assert_eq!(block.rows(), dst_dims[r], "entry degree mismatch");
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    out.set(dst_offsets[r] + i, src_offsets[c] + j, block.get(i, j));
                }
            }
        }
    }
    out
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for &d in dims {
        out.push(acc);
        acc += d;
    }
    out
}

/// Generator degrees of `S ⊗ F` in spot-major order.
fn tensor_degrees(spot: &GradedFreeModule, inner: &[i64]) -> Vec<i64> {
    let mut out = Vec::with_capacity(spot.rank() * inner.len());
    for &s in spot.generator_degrees() {
        for &g in inner {
            out.push(s + g);
        }
    }
    out
}

/// The degree-`d` piece of `spot ⊗ M` as a quotient space.
pub fn tensor_piece(
    ctx: &GradedRingContext,
    spot: &GradedFreeModule,
    module: &FPGradedModule,
    d: i64,
) -> QuotientSpace {
    let gens = tensor_degrees(spot, module.ambient().generator_degrees());
    let rel_gens = tensor_degrees(spot, module.relation_degrees());
    let rel = module.relations().kron_identity_left(spot.rank());
    let rel_piece = poly_matrix_piece(ctx, &rel, &rel_gens, &gens, d);
    quotient_reduce(free_piece_dim(ctx, &gens, d), &rel_piece, ctx.field())
}

/// The matrix induced on `(spot ⊗ M)` pieces by a spot-level polynomial map.
#[allow(clippy::too_many_arguments)]
fn spot_map_on_pieces(
    ctx: &GradedRingContext,
    map: &PolyMatrix,
    src_spot: &GradedFreeModule,
    dst_spot: &GradedFreeModule,
    module: &FPGradedModule,
    src_piece: &QuotientSpace,
    dst_piece: &QuotientSpace,
    d: i64,
) -> Result<Mat, ComplexError> {
    let mrank = module.ambient().rank();
    let tensored = map.kron_identity_right(mrank);
    let src_gens = tensor_degrees(src_spot, module.ambient().generator_degrees());
    let dst_gens = tensor_degrees(dst_spot, module.ambient().generator_degrees());
    let free = poly_matrix_piece(ctx, &tensored, &src_gens, &dst_gens, d);
    Ok(induced_map(&free, src_piece, dst_piece, ctx.field())?)
}

/// Homology of `C ⊗ M` at one (spot, internal degree), with deterministic
/// cycle and class bases for computing induced maps.
#[derive(Debug, Clone)]
pub struct HomologySpace {
    piece: QuotientSpace,
    cycles: Mat,
    classes: QuotientSpace,
}

impl HomologySpace {
    pub fn dim(&self) -> usize {
        self.classes.dim()
    }

    pub fn piece(&self) -> &QuotientSpace {
        &self.piece
    }

    /// Piece-coordinate representatives of the class basis.
    pub fn representatives(&self, ctx: &GradedRingContext) -> Mat {
        self.cycles.mul(self.classes.lift(), ctx.field())
    }
}

/// Computes the homology space of `C ⊗ M` at `spot` in internal degree `d`.
pub fn homology_space(
    ctx: &GradedRingContext,
    complex: &GradedFreeComplex,
    module: &FPGradedModule,
    spot: usize,
    d: i64,
) -> Result<HomologySpace, ComplexError> {
    let cur = tensor_piece(ctx, complex.spot(spot), module, d);
    let cycles = match complex.outgoing(spot) {
        Some((dmat, tgt)) => {
            let tgt_piece = tensor_piece(ctx, complex.spot(tgt), module, d);
            let out = spot_map_on_pieces(
                ctx,
                dmat,
                complex.spot(spot),
                complex.spot(tgt),
                module,
                &cur,
                &tgt_piece,
                d,
            )?;
            out.kernel_basis(ctx.field())
        }
        None => Mat::identity(cur.dim()),
    };
    let boundaries_in_cycle_coords = match complex.incoming(spot) {
        Some((dmat, src)) => {
            let src_piece = tensor_piece(ctx, complex.spot(src), module, d);
            let inc = spot_map_on_pieces(
                ctx,
                dmat,
                complex.spot(src),
                complex.spot(spot),
                module,
                &src_piece,
                &cur,
                d,
            )?;
            ColEchelon::reduce(&cycles, ctx.field())
                .solve(&inc)
                .expect("boundaries are cycles")
        }
        None => Mat::zeros(cycles.cols(), 0),
    };
    let classes = quotient_reduce(cycles.cols(), &boundaries_in_cycle_coords, ctx.field());
    Ok(HomologySpace {
        piece: cur,
        cycles,
        classes,
    })
}

/// Dimension of `H(spot)` of `C ⊗ M` in internal degree `d`.
pub fn homology_dims(
    ctx: &GradedRingContext,
    complex: &GradedFreeComplex,
    module: &FPGradedModule,
    spot: usize,
    d: i64,
) -> Result<usize, ComplexError> {
    Ok(homology_space(ctx, complex, module, spot, d)?.dim())
}

/// The map induced on homology classes by a matrix on the underlying pieces
/// that carries cycles to cycles and boundaries to boundaries.
pub fn induced_on_homology(
    ctx: &GradedRingContext,
    piece_map: &Mat,
    src: &HomologySpace,
    dst: &HomologySpace,
) -> Mat {
    let f = ctx.field();
    let reps = src.representatives(ctx);
    let images = piece_map.mul(&reps, f);
    let coords = ColEchelon::reduce(&dst.cycles, f)
        .solve(&images)
        .expect("chain maps carry cycles to cycles");
    dst.classes.projection().mul(&coords, f)
}

/// A degree-zero map of complexes, checked to commute with differentials.
#[derive(Debug, Clone)]
pub struct ChainMap {
    source: GradedFreeComplex,
    target: GradedFreeComplex,
    maps: Vec<PolyMatrix>,
}

impl ChainMap {
    pub fn new(
        ctx: &GradedRingContext,
        source: GradedFreeComplex,
        target: GradedFreeComplex,
        maps: Vec<PolyMatrix>,
    ) -> Result<Self, ComplexError> {
        if source.direction() != target.direction() {
            return Err(ComplexError::ShapeMismatch(
                "chain map between complexes of different direction".into(),
            ));
        }
        if source.len() != target.len() || maps.len() != source.len() {
            return Err(ComplexError::ShapeMismatch(format!(
                "chain map needs {} spot maps, got {}",
                source.len(),
                maps.len()
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows() != target.spot(i).rank() || m.cols() != source.spot(i).rank() {
                return Err(ComplexError::ShapeMismatch(format!(
                    "spot {i} map is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.spot(i).rank(),
                    source.spot(i).rank()
                )));
            }
            check_degree_zero(
                ctx,
                m,
                source.spot(i).generator_degrees(),
                target.spot(i).generator_degrees(),
            )?;
        }
        for i in 0..source.len() - 1 {
            let commutes = match source.direction() {
                Direction::Chain => {
                    // target.d_i ∘ map_{i+1} = map_i ∘ source.d_i
                    let lhs = target.differential(i).mul(&maps[i + 1], ctx);
                    let rhs = maps[i].mul(source.differential(i), ctx);
                    lhs.sub(&rhs, ctx.field()).is_zero()
                }
                Direction::Cochain => {
                    let lhs = target.differential(i).mul(&maps[i], ctx);
                    let rhs = maps[i + 1].mul(source.differential(i), ctx);
                    lhs.sub(&rhs, ctx.field()).is_zero()
                }
            };
            if !commutes {
                return Err(ComplexError::NotChainMap { spot: i });
            }
        }
        Ok(ChainMap {
            source,
            target,
            maps,
        })
    }

    pub fn source(&self) -> &GradedFreeComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedFreeComplex {
        &self.target
    }

    pub fn spot_map(&self, i: usize) -> &PolyMatrix {
        &self.maps[i]
    }
}

/// The map a chain map induces on homology in one (spot, degree).
pub fn homology_transition(
    ctx: &GradedRingContext,
    map: &ChainMap,
    module: &FPGradedModule,
    spot: usize,
    d: i64,
) -> Result<Mat, ComplexError> {
    let hs_src = homology_space(ctx, map.source(), module, spot, d)?;
    let hs_dst = homology_space(ctx, map.target(), module, spot, d)?;
    let piece_map = spot_map_on_pieces(
        ctx,
        map.spot_map(spot),
        map.source().spot(spot),
        map.target().spot(spot),
        module,
        hs_src.piece(),
        hs_dst.piece(),
        d,
    )?;
    Ok(induced_on_homology(ctx, &piece_map, &hs_src, &hs_dst))
}

/// Multiplication by a homogeneous ring element `c` on homology:
/// `H(spot)_d -> H(spot)_{d + deg c}`.
pub fn multiplication_on_homology(
    ctx: &GradedRingContext,
    complex: &GradedFreeComplex,
    module: &FPGradedModule,
    spot: usize,
    c: &Polynomial,
    d: i64,
) -> Result<Mat, ComplexError> {
    let e = match c.homogeneity(ctx.var_degrees()) {
        Homogeneity::Degree(e) => e,
        Homogeneity::Zero => 0,
        Homogeneity::Mixed => return Err(PolyError::NonHomogeneous.into()),
    };
    let hs_src = homology_space(ctx, complex, module, spot, d)?;
    let hs_dst = homology_space(ctx, complex, module, spot, d + e)?;
    let gens = tensor_degrees(complex.spot(spot), module.ambient().generator_degrees());
    let n = gens.len();
    let mut diag = PolyMatrix::zeros(n, n);
    for i in 0..n {
        diag.set(i, i, c.clone());
    }
    let shifted: Vec<i64> = gens.iter().map(|&g| g + e).collect();
    let free = poly_matrix_piece(ctx, &diag, &shifted, &gens, d + e);
    let piece_map = induced_map(&free, hs_src.piece(), hs_dst.piece(), ctx.field())?;
    Ok(induced_on_homology(ctx, &piece_map, &hs_src, &hs_dst))
}

/// A short exact sequence `0 -> M1 -f-> M2 -g-> M3 -> 0` of finitely
/// presented graded modules, given by degree-zero maps on ambients.
/// Exactness is a degreewise property and is verified by ranks in each
/// degree an operation touches.
#[derive(Debug, Clone)]
pub struct SESOfModules {
    m1: FPGradedModule,
    m2: FPGradedModule,
    m3: FPGradedModule,
    f: PolyMatrix,
    g: PolyMatrix,
}

impl SESOfModules {
    pub fn new(
        ctx: &GradedRingContext,
        m1: FPGradedModule,
        m2: FPGradedModule,
        m3: FPGradedModule,
        f: PolyMatrix,
        g: PolyMatrix,
    ) -> Result<Self, ComplexError> {
        if f.rows() != m2.ambient().rank() || f.cols() != m1.ambient().rank() {
            return Err(ComplexError::ShapeMismatch("f has wrong shape".into()));
        }
        if g.rows() != m3.ambient().rank() || g.cols() != m2.ambient().rank() {
            return Err(ComplexError::ShapeMismatch("g has wrong shape".into()));
        }
        check_degree_zero(
            ctx,
            &f,
            m1.ambient().generator_degrees(),
            m2.ambient().generator_degrees(),
        )?;
        check_degree_zero(
            ctx,
            &g,
            m2.ambient().generator_degrees(),
            m3.ambient().generator_degrees(),
        )?;
        Ok(SESOfModules { m1, m2, m3, f, g })
    }

    pub fn m1(&self) -> &FPGradedModule {
        &self.m1
    }

    pub fn m2(&self) -> &FPGradedModule {
        &self.m2
    }

    pub fn m3(&self) -> &FPGradedModule {
        &self.m3
    }

    pub fn injection(&self) -> &PolyMatrix {
        &self.f
    }

    pub fn surjection(&self) -> &PolyMatrix {
        &self.g
    }
}

/// Pieces and maps of the tensored SES at one (spot, degree), with exactness
/// verified by ranks.
struct TensorSesPieces {
    p2: QuotientSpace,
    fmap: Mat,
    gmap: Mat,
}

fn tensor_ses_pieces(
    ctx: &GradedRingContext,
    ses: &SESOfModules,
    spot: &GradedFreeModule,
    d: i64,
) -> Result<TensorSesPieces, ComplexError> {
    let p1 = tensor_piece(ctx, spot, &ses.m1, d);
    let p2 = tensor_piece(ctx, spot, &ses.m2, d);
    let p3 = tensor_piece(ctx, spot, &ses.m3, d);
    let fmap = module_map_on_pieces(ctx, &ses.f, spot, &ses.m1, &ses.m2, &p1, &p2, d)?;
    let gmap = module_map_on_pieces(ctx, &ses.g, spot, &ses.m2, &ses.m3, &p2, &p3, d)?;
    let field = ctx.field();
    if fmap.rank(field) != p1.dim() {
        return Err(ComplexError::NotExact {
            degree: d,
            reason: "first map is not injective".into(),
        });
    }
    if gmap.rank(field) != p3.dim() {
        return Err(ComplexError::NotExact {
            degree: d,
            reason: "second map is not surjective".into(),
        });
    }
    if p2.dim() != p1.dim() + p3.dim() || !gmap.mul(&fmap, field).is_zero() {
        return Err(ComplexError::NotExact {
            degree: d,
            reason: "middle homology does not vanish".into(),
        });
    }
    Ok(TensorSesPieces { p2, fmap, gmap })
}

/// Map induced on `(spot ⊗ -)` pieces by a module map on ambients.
#[allow(clippy::too_many_arguments)]
fn module_map_on_pieces(
    ctx: &GradedRingContext,
    map: &PolyMatrix,
    spot: &GradedFreeModule,
    src: &FPGradedModule,
    dst: &FPGradedModule,
    src_piece: &QuotientSpace,
    dst_piece: &QuotientSpace,
    d: i64,
) -> Result<Mat, ComplexError> {
    let tensored = map.kron_identity_left(spot.rank());
    let src_gens = tensor_degrees(spot, src.ambient().generator_degrees());
    let dst_gens = tensor_degrees(spot, dst.ambient().generator_degrees());
    let free = poly_matrix_piece(ctx, &tensored, &src_gens, &dst_gens, d);
    Ok(induced_map(&free, src_piece, dst_piece, ctx.field())?)
}

/// The connecting map `H(spot, C ⊗ M3)_d -> H(next spot, C ⊗ M1)_d` of the
/// tensored short exact sequence, via the standard zig-zag with the
/// deterministic lifts of the echelon solver.
pub fn snake_connecting(
    ctx: &GradedRingContext,
    ses: &SESOfModules,
    complex: &GradedFreeComplex,
    spot: usize,
    d: i64,
) -> Result<Mat, ComplexError> {
    let field = ctx.field();
    let h3 = homology_space(ctx, complex, &ses.m3, spot, d)?;
    let next = match complex.next_spot(spot) {
        Some(n) => n,
        None => return Ok(Mat::zeros(0, h3.dim())),
    };
    let here = tensor_ses_pieces(ctx, ses, complex.spot(spot), d)?;
    let there = tensor_ses_pieces(ctx, ses, complex.spot(next), d)?;
    let h1_next = homology_space(ctx, complex, &ses.m1, next, d)?;

    // cycle representatives of H(C ⊗ M3)
    let z = h3.representatives(ctx);
    // lift through g
    let y = ColEchelon::reduce(&here.gmap, field)
        .solve(&z)
        .expect("g is surjective on pieces");
    // push through the differential of C ⊗ M2
    let (dmat, _) = complex.outgoing(spot).expect("next spot exists");
    let w = spot_map_on_pieces(
        ctx,
        dmat,
        complex.spot(spot),
        complex.spot(next),
        &ses.m2,
        &here.p2,
        &there.p2,
        d,
    )?
    .mul(&y, field);
    // pull back through the injective f
    let u = ColEchelon::reduce(&there.fmap, field)
        .solve(&w)
        .expect("boundary of a lift lands in the image of f");
    // read off the class in H(C ⊗ M1) at the next spot
    let coords = ColEchelon::reduce(&h1_next.cycles, field)
        .solve(&u)
        .expect("connecting image is a cycle");
    Ok(h1_next.classes.projection().mul(&coords, field))
}

/// A morphism of short exact sequences (three module maps commuting with the
/// structure maps, checked symbolically).
#[derive(Debug, Clone)]
pub struct SesMorphism {
    source: SESOfModules,
    target: SESOfModules,
    a1: PolyMatrix,
    a2: PolyMatrix,
    a3: PolyMatrix,
}

impl SesMorphism {
    pub fn new(
        ctx: &GradedRingContext,
        source: SESOfModules,
        target: SESOfModules,
        a1: PolyMatrix,
        a2: PolyMatrix,
        a3: PolyMatrix,
    ) -> Result<Self, ComplexError> {
        let lhs = target.f.mul(&a1, ctx);
        let rhs = a2.mul(&source.f, ctx);
        if !lhs.sub(&rhs, ctx.field()).is_zero() {
            return Err(ComplexError::ShapeMismatch(
                "left naturality square does not commute".into(),
            ));
        }
        let lhs = target.g.mul(&a2, ctx);
        let rhs = a3.mul(&source.g, ctx);
        if !lhs.sub(&rhs, ctx.field()).is_zero() {
            return Err(ComplexError::ShapeMismatch(
                "right naturality square does not commute".into(),
            ));
        }
        Ok(SesMorphism {
            source,
            target,
            a1,
            a2,
            a3,
        })
    }

    pub fn maps(&self) -> (&PolyMatrix, &PolyMatrix, &PolyMatrix) {
        (&self.a1, &self.a2, &self.a3)
    }
}

/// Result of a long-exact-sequence verification for one degree.
#[derive(Debug, Clone, Serialize)]
pub struct LesDegreeResult {
    pub degree: i64,
    pub exact: bool,
    pub first_failure: Option<String>,
    /// Alternating sum of node dimensions; zero whenever the sequence is exact.
    pub alternating_sum: i64,
}

/// Report of `les_exactness_check` over a degree window.
#[derive(Debug, Clone, Serialize)]
pub struct LesReport {
    pub degrees: Vec<LesDegreeResult>,
    pub naturality_ok: Option<bool>,
}

impl LesReport {
    pub fn all_exact(&self) -> bool {
        self.degrees.iter().all(|r| r.exact) && self.naturality_ok.unwrap_or(true)
    }
}

/// Assembles the long exact homology sequence of `C ⊗ (0->M1->M2->M3->0)` in
/// each degree of the window and verifies exactness at every node. When a
/// morphism of sequences is supplied, also verifies the naturality square of
/// the connecting maps.
pub fn les_exactness_check(
    ctx: &GradedRingContext,
    ses: &SESOfModules,
    complex: &GradedFreeComplex,
    degrees: std::ops::RangeInclusive<i64>,
    morphism: Option<&SesMorphism>,
) -> Result<LesReport, ComplexError> {
    let field = ctx.field();
    let spot_order: Vec<usize> = match complex.direction() {
        Direction::Cochain => (0..complex.len()).collect(),
        Direction::Chain => (0..complex.len()).rev().collect(),
    };
    let mut results = Vec::new();
    for d in degrees.clone() {
        // verify the tensored SES is exact at every spot first
        for i in 0..complex.len() {
            tensor_ses_pieces(ctx, ses, complex.spot(i), d)?;
        }
        // nodes: H(spot, M1), H(spot, M2), H(spot, M3) along the spot order
        let mut dims: Vec<usize> = Vec::new();
        let mut maps: Vec<Mat> = Vec::new(); // maps[k]: node k -> node k+1
        for (oi, &spot) in spot_order.iter().enumerate() {
            let spot_mod = complex.spot(spot);
            let h1 = homology_space(ctx, complex, &ses.m1, spot, d)?;
            let h2 = homology_space(ctx, complex, &ses.m2, spot, d)?;
            let h3 = homology_space(ctx, complex, &ses.m3, spot, d)?;
            let fstar = {
                let piece_map = module_map_on_pieces(
                    ctx,
                    &ses.f,
                    spot_mod,
                    &ses.m1,
                    &ses.m2,
                    h1.piece(),
                    h2.piece(),
                    d,
                )?;
                induced_on_homology(ctx, &piece_map, &h1, &h2)
            };
            let gstar = {
                let piece_map = module_map_on_pieces(
                    ctx,
                    &ses.g,
                    spot_mod,
                    &ses.m2,
                    &ses.m3,
                    h2.piece(),
                    h3.piece(),
                    d,
                )?;
                induced_on_homology(ctx, &piece_map, &h2, &h3)
            };
            dims.push(h1.dim());
            dims.push(h2.dim());
            dims.push(h3.dim());
            maps.push(fstar);
            maps.push(gstar);
            if oi + 1 < spot_order.len() {
                maps.push(snake_connecting(ctx, ses, complex, spot, d)?);
            }
        }
        // exactness at every node, with zero maps off both ends
        let mut first_failure = None;
        for k in 0..dims.len() {
            let rank_in = if k == 0 { 0 } else { maps[k - 1].rank(field) };
            let rank_out = if k < maps.len() {
                maps[k].rank(field)
            } else {
                0
            };
            let composite_zero = if k == 0 || k >= maps.len() {
                true
            } else {
                maps[k].mul(&maps[k - 1], field).is_zero()
            };
            let kernel_dim = dims[k] - rank_out;
            if !(composite_zero && rank_in == kernel_dim) {
                first_failure = Some(format!(
                    "degree {d}, node {k}: incoming rank {rank_in}, kernel dim {kernel_dim}, composite zero: {composite_zero}"
                ));
                break;
            }
        }
        let alternating_sum: i64 = dims
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        results.push(LesDegreeResult {
            degree: d,
            exact: first_failure.is_none(),
            first_failure,
            alternating_sum,
        });
    }

    let naturality_ok = match morphism {
        None => None,
        Some(mor) => {
            let mut ok = true;
            'outer: for d in degrees {
                for &spot in &spot_order {
                    let next = match complex.next_spot(spot) {
                        Some(n) => n,
                        None => continue,
                    };
                    let delta_src = snake_connecting(ctx, &mor.source, complex, spot, d)?;
                    let delta_tgt = snake_connecting(ctx, &mor.target, complex, spot, d)?;
                    let h3s = homology_space(ctx, complex, &mor.source.m3, spot, d)?;
                    let h3t = homology_space(ctx, complex, &mor.target.m3, spot, d)?;
                    let a3p = module_map_on_pieces(
                        ctx,
                        &mor.a3,
                        complex.spot(spot),
                        &mor.source.m3,
                        &mor.target.m3,
                        h3s.piece(),
                        h3t.piece(),
                        d,
                    )?;
                    let a3star = induced_on_homology(ctx, &a3p, &h3s, &h3t);
                    let h1s = homology_space(ctx, complex, &mor.source.m1, next, d)?;
                    let h1t = homology_space(ctx, complex, &mor.target.m1, next, d)?;
                    let a1p = module_map_on_pieces(
                        ctx,
                        &mor.a1,
                        complex.spot(next),
                        &mor.source.m1,
                        &mor.target.m1,
                        h1s.piece(),
                        h1t.piece(),
                        d,
                    )?;
                    let a1star = induced_on_homology(ctx, &a1p, &h1s, &h1t);
                    let lhs = delta_tgt.mul(&a3star, field);
                    let rhs = a1star.mul(&delta_src, field);
                    if lhs != rhs {
                        ok = false;
                        break 'outer;
                    }
                }
            }
            Some(ok)
        }
    };

    Ok(LesReport {
        degrees: results,
        naturality_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::FieldSpec;
    use crate::polyring::parse_polynomial;

    fn ctx() -> GradedRingContext {
        GradedRingContext::standard(FieldSpec::default_prime(), &["x", "y"])
    }

    fn p(c: &GradedRingContext, s: &str) -> Polynomial {
        parse_polynomial(c, s).unwrap()
    }

    fn pm(c: &GradedRingContext, rows: usize, cols: usize, entries: &[&str]) -> PolyMatrix {
        PolyMatrix::from_entries(rows, cols, entries.iter().map(|s| p(c, s)).collect())
    }

    /// Chain Koszul complex of (x^n, (xy)^n) over k[x, y], built by hand.
    fn koszul_x_xy(c: &GradedRingContext, n: u32) -> GradedFreeComplex {
        let xn = format!("x^{n}");
        let xyn = format!("x^{n}*y^{n}");
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![n as i64, 2 * n as i64]),
            GradedFreeModule::new(vec![3 * n as i64]),
        ];
        let d1 = pm(c, 1, 2, &[&xn, &xyn]);
        let d2 = pm(c, 2, 1, &[&format!("-{xyn}"), &xn]);
        GradedFreeComplex::new(c, spots, vec![d1, d2], Direction::Chain).unwrap()
    }

    /// Cochain Koszul complex of (x^n, y^n) over k[x, y], built by hand.
    fn cochain_x_y(c: &GradedRingContext, n: u32) -> GradedFreeComplex {
        let xn = format!("x^{n}");
        let yn = format!("y^{n}");
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![-(n as i64), -(n as i64)]),
            GradedFreeModule::new(vec![-2 * (n as i64)]),
        ];
        let d0 = pm(c, 2, 1, &[&xn, &yn]);
        let d1 = pm(c, 1, 2, &[&format!("-{yn}"), &xn]);
        GradedFreeComplex::new(c, spots, vec![d0, d1], Direction::Cochain).unwrap()
    }

    #[test]
    fn rejects_non_complexes() {
        let c = ctx();
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![1, 2]),
            GradedFreeModule::new(vec![3]),
        ];
        let d1 = pm(&c, 1, 2, &["x", "x*y"]);
        let bad_d2 = pm(&c, 2, 1, &["x*y", "x"]); // missing sign: d∘d ≠ 0
        let err = GradedFreeComplex::new(&c, spots, vec![d1, bad_d2], Direction::Chain);
        assert!(matches!(err, Err(ComplexError::NotAComplex { .. })));
    }

    #[test]
    fn rejects_inhomogeneous_differentials() {
        let c = ctx();
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![1]),
        ];
        let d = pm(&c, 1, 1, &["x + x^2"]);
        let err = GradedFreeComplex::new(&c, spots, vec![d], Direction::Chain);
        assert!(matches!(err, Err(ComplexError::InhomogeneousEntry { .. })));
    }

    #[test]
    fn regular_element_has_no_first_homology() {
        let c = GradedRingContext::standard(FieldSpec::default_prime(), &["x"]);
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![1]),
        ];
        let d = pm(&c, 1, 1, &["x"]);
        let k = GradedFreeComplex::new(&c, spots, vec![d], Direction::Chain).unwrap();
        let a = FPGradedModule::ring();
        for deg in 0..8 {
            assert_eq!(homology_dims(&c, &k, &a, 1, deg).unwrap(), 0);
        }
    }

    #[test]
    fn koszul_h0_is_the_residue_field() {
        let c = ctx();
        let spots = vec![
            GradedFreeModule::new(vec![0]),
            GradedFreeModule::new(vec![1, 1]),
            GradedFreeModule::new(vec![2]),
        ];
        let d1 = pm(&c, 1, 2, &["x", "y"]);
        let d2 = pm(&c, 2, 1, &["-y", "x"]);
        let k = GradedFreeComplex::new(&c, spots, vec![d1, d2], Direction::Chain).unwrap();
        let a = FPGradedModule::ring();
        assert_eq!(homology_dims(&c, &k, &a, 0, 0).unwrap(), 1);
        for d in 1..6 {
            assert_eq!(homology_dims(&c, &k, &a, 0, d).unwrap(), 0);
        }
        // regular sequence: higher homology vanishes everywhere
        for d in 0..6 {
            assert_eq!(homology_dims(&c, &k, &a, 1, d).unwrap(), 0);
            assert_eq!(homology_dims(&c, &k, &a, 2, d).unwrap(), 0);
        }
    }

    /// H_1 of (x, xy) is cyclic over A/(x) with generator in degree 2n;
    /// the oracle is the monomial count of (A/(x^n))(shift 2n) degreewise.
    #[test]
    fn koszul_x_xy_first_homology_dims() {
        let c = ctx();
        for n in 1..=3u32 {
            let k = koszul_x_xy(&c, n);
            let a = FPGradedModule::ring();
            for d in 0..=10i64 {
                let expected = {
                    let shifted = d - 2 * n as i64;
                    if shifted < 0 {
                        0
                    } else {
                        // monomials x^i y^j with i < n, i + j = shifted
                        (0..n as i64).filter(|&i| shifted - i >= 0).count()
                    }
                };
                assert_eq!(
                    homology_dims(&c, &k, &a, 1, d).unwrap(),
                    expected,
                    "n={n} d={d}"
                );
            }
            for d in 0..=10i64 {
                assert_eq!(homology_dims(&c, &k, &a, 2, d).unwrap(), 0);
            }
        }
    }

    #[test]
    fn euler_characteristic_matches_homology() {
        let c = ctx();
        let k = koszul_x_xy(&c, 2);
        let m = FPGradedModule::cyclic(&c, vec![p(&c, "x^2")]).unwrap();
        for d in 0..=8i64 {
            let mut chi_pieces = 0i64;
            let mut chi_homology = 0i64;
            for spot in 0..=2usize {
                let sign = if spot % 2 == 0 { 1 } else { -1 };
                chi_pieces += sign * tensor_piece(&c, k.spot(spot), &m, d).dim() as i64;
                chi_homology += sign * homology_dims(&c, &k, &m, spot, d).unwrap() as i64;
            }
            assert_eq!(chi_pieces, chi_homology, "degree {d}");
        }
    }

    #[test]
    fn identity_chain_map_induces_identity() {
        let c = ctx();
        let k = koszul_x_xy(&c, 1);
        let maps = vec![
            PolyMatrix::identity(1, 2),
            PolyMatrix::identity(2, 2),
            PolyMatrix::identity(1, 2),
        ];
        let t = ChainMap::new(&c, k.clone(), k.clone(), maps).unwrap();
        let a = FPGradedModule::ring();
        for d in 2..6 {
            let m = homology_transition(&c, &t, &a, 1, d).unwrap();
            assert_eq!(m, Mat::identity(homology_dims(&c, &k, &a, 1, d).unwrap()));
        }
    }

    /// Transition K(a^2) -> K(a^1) for a = (x, xy): multiplication by
    /// a_I^{2-1} per basis subset. The induced map on H_1 is zero in every
    /// degree because the image x*y*gen is a boundary.
    #[test]
    fn transition_level2_to_level1_is_zero_on_h1() {
        let c = ctx();
        let k2 = koszul_x_xy(&c, 2);
        let k1 = koszul_x_xy(&c, 1);
        let maps = vec![
            PolyMatrix::identity(1, 2),
            pm(&c, 2, 2, &["x", "0", "0", "x*y"]),
            pm(&c, 1, 1, &["x^2*y"]),
        ];
        let t = ChainMap::new(&c, k2, k1, maps).unwrap();
        let a = FPGradedModule::ring();
        for d in 0..=10 {
            let m = homology_transition(&c, &t, &a, 1, d).unwrap();
            assert!(m.is_zero(), "degree {d}");
        }
    }

    /// Transition K(a^3) -> K(a^2) for a = (x, xy) is nonzero on H_1 in
    /// degree 6: the generator maps to xy*gen_2 and only x^2*gen_2 is a
    /// boundary.
    #[test]
    fn transition_level3_to_level2_is_nonzero_in_degree_six() {
        let c = ctx();
        let k3 = koszul_x_xy(&c, 3);
        let k2 = koszul_x_xy(&c, 2);
        let maps = vec![
            PolyMatrix::identity(1, 2),
            pm(&c, 2, 2, &["x", "0", "0", "x*y"]),
            pm(&c, 1, 1, &["x^2*y"]),
        ];
        let t = ChainMap::new(&c, k3, k2, maps).unwrap();
        let a = FPGradedModule::ring();
        let m = homology_transition(&c, &t, &a, 1, 6).unwrap();
        assert!(!m.is_zero());
    }

    #[test]
    fn multiplication_on_homology_acts_as_module_structure() {
        let c = ctx();
        let k = koszul_x_xy(&c, 1);
        let a = FPGradedModule::ring();
        // H_1 = (A/(x))(gen degree 2): multiplication by y is bijective in
        // degrees >= 2, multiplication by x is zero.
        for d in 2..6 {
            let by_y = multiplication_on_homology(&c, &k, &a, 1, &p(&c, "y"), d).unwrap();
            assert_eq!(by_y.rank(c.field()), 1, "y at degree {d}");
            let by_x = multiplication_on_homology(&c, &k, &a, 1, &p(&c, "x"), d).unwrap();
            assert!(by_x.is_zero(), "x at degree {d}");
        }
    }

    fn ses_a_shift_a_mod_x(c: &GradedRingContext) -> SESOfModules {
        // 0 -> A(shift 1) -x-> A -> A/(x) -> 0
        let m1 = FPGradedModule::free(GradedFreeModule::new(vec![1]));
        let m2 = FPGradedModule::ring();
        let m3 = FPGradedModule::cyclic(c, vec![p(c, "x")]).unwrap();
        SESOfModules::new(c, m1, m2, m3, pm(c, 1, 1, &["x"]), pm(c, 1, 1, &["1"])).unwrap()
    }

    #[test]
    fn snake_with_zero_first_module_is_zero() {
        let c = ctx();
        let zero = FPGradedModule::cyclic(&c, vec![Polynomial::one(2)]).unwrap();
        let ses = SESOfModules::new(
            &c,
            zero,
            FPGradedModule::ring(),
            FPGradedModule::ring(),
            pm(&c, 1, 1, &["0"]),
            pm(&c, 1, 1, &["1"]),
        )
        .unwrap();
        let k = cochain_x_y(&c, 1);
        for d in -3..=3 {
            let delta = snake_connecting(&c, &ses, &k, 0, d).unwrap();
            assert!(delta.is_zero());
        }
    }

    #[test]
    fn split_ses_has_zero_connecting_maps() {
        let c = ctx();
        // M2 = M1 ⊕ M3 with M1 = A/(x), M3 = A/(y^2)
        let m1 = FPGradedModule::cyclic(&c, vec![p(&c, "x")]).unwrap();
        let m3 = FPGradedModule::cyclic(&c, vec![p(&c, "y^2")]).unwrap();
        let m2 = FPGradedModule::new(
            &c,
            GradedFreeModule::new(vec![0, 0]),
            pm(&c, 2, 2, &["x", "0", "0", "y^2"]),
        )
        .unwrap();
        let ses = SESOfModules::new(
            &c,
            m1,
            m2,
            m3,
            pm(&c, 2, 1, &["1", "0"]),
            pm(&c, 1, 2, &["0", "1"]),
        )
        .unwrap();
        let k = cochain_x_y(&c, 2);
        for spot in 0..=1usize {
            for d in -4..=4 {
                let delta = snake_connecting(&c, &ses, &k, spot, d).unwrap();
                assert!(delta.is_zero(), "spot {spot} degree {d}");
            }
        }
        let report = les_exactness_check(&c, &ses, &k, -4..=4, None).unwrap();
        assert!(report.all_exact());
    }

    #[test]
    fn les_exact_for_multiplication_ses() {
        let c = ctx();
        let ses = ses_a_shift_a_mod_x(&c);
        for n in 1..=3u32 {
            let k = cochain_x_y(&c, n);
            let report = les_exactness_check(&c, &ses, &k, -5..=5, None).unwrap();
            assert!(report.all_exact(), "level {n}: {report:?}");
            for r in &report.degrees {
                assert_eq!(r.alternating_sum, 0, "degree {}", r.degree);
            }
        }
    }

    #[test]
    fn les_naturality_for_scalar_endomorphism() {
        let c = ctx();
        let ses = ses_a_shift_a_mod_x(&c);
        let two = pm(&c, 1, 1, &["2"]);
        let mor = SesMorphism::new(
            &c,
            ses.clone(),
            ses.clone(),
            two.clone(),
            two.clone(),
            two,
        )
        .unwrap();
        let k = cochain_x_y(&c, 2);
        let report = les_exactness_check(&c, &ses, &k, -4..=4, Some(&mor)).unwrap();
        assert_eq!(report.naturality_ok, Some(true));
        assert!(report.all_exact());
    }

    #[test]
    fn chain_map_rejects_non_commuting_maps() {
        let c = ctx();
        let k1 = koszul_x_xy(&c, 1);
        let k2 = koszul_x_xy(&c, 2);
        let maps = vec![
            PolyMatrix::identity(1, 2),
            pm(&c, 2, 2, &["x", "0", "0", "x^2"]), // wrong second entry
            pm(&c, 1, 1, &["x^2*y"]),
        ];
        let err = ChainMap::new(&c, k2, k1, maps);
        assert!(matches!(err, Err(ComplexError::NotChainMap { .. })));
    }

    #[test]
    fn tensor_ses_detects_non_exactness() {
        let c = ctx();
        // g = 0 is not surjective onto A/(x) in positive degrees
        let m1 = FPGradedModule::free(GradedFreeModule::new(vec![1]));
        let m2 = FPGradedModule::ring();
        let m3 = FPGradedModule::cyclic(&c, vec![p(&c, "x")]).unwrap();
        let ses = SESOfModules::new(
            &c,
            m1,
            m2,
            m3,
            pm(&c, 1, 1, &["x"]),
            pm(&c, 1, 1, &["0"]),
        )
        .unwrap();
        let k = cochain_x_y(&c, 1);
        let err = les_exactness_check(&c, &ses, &k, 0..=0, None);
        assert!(matches!(err, Err(ComplexError::NotExact { .. })));
    }
}
