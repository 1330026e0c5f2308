//! Exact computational commutative algebra over a prime field.
//!
//! The crate computes with graded modules over `F_p[x_1..x_s]` (optionally
//! modulo a homogeneous quotient ideal) one internal degree at a time, so
//! every question about kernels, images and homology reduces to exact dense
//! linear algebra over `F_p`. On top of that substrate it builds Koszul and
//! Taylor complexes, their level towers, and the colimit machinery that
//! evaluates Cech cohomology and local cohomology as stabilized limits of
//! Koszul cohomology and Ext groups, together with certifiers for weakly
//! proregular and proregular sequences.

pub mod cohomo;
pub mod exactlin;
pub mod groebner;
pub mod homcomplex;
pub mod koszul;
pub mod polyring;

pub use cohomo::{
    CrosscheckReport, CrosscheckVerdict, GammaReport, ProSystem, ProregReport, SearchOutcome,
    SesOfProSystems, TaylorComplex, TwoOutOfThreeReport, WprReport, WprVerdict,
};
pub use exactlin::{FieldSpec, Mat, QuotientSpace};
pub use homcomplex::{
    ChainMap, Direction, FPGradedModule, GradedFreeComplex, LesReport, SESOfModules, SesMorphism,
};
pub use koszul::{ColimitEntry, ColimitReport, KoszulTower, Sequence};
pub use polyring::{GradedFreeModule, GradedRingContext, Monomial, PolyMatrix, Polynomial};
pub use cohomo::CrosscheckBounds;
