//! Sparse multivariate polynomials over `F_p`, graded ring contexts, and the
//! degreewise translation of graded data into matrices.
//!
//! A [`GradedRingContext`] fixes the field, the variables with their degrees,
//! and an optional homogeneous quotient ideal (kept as a reduced Groebner
//! basis so products normalize to canonical form). Graded pieces of the ring
//! and of free modules are finite dimensional with a deterministic monomial
//! basis, and multiplication by a homogeneous element becomes an explicit
//! matrix between pieces — the bridge from symbolic data to `exactlin`.
//!
//! Contexts are immutable after construction; all operations are pure.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{FieldSpec, Mat};
use crate::groebner;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable degree must be positive, got {0}")]
    NonPositiveVariableDegree(i64),
    #[error("variable names and degrees disagree in length")]
    VariableMismatch,
    #[error("quotient generator `{0}` is not homogeneous")]
    InhomogeneousQuotientGenerator(String),
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}

/// Exponent vector of a single monomial; one entry per context variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[index] = 1;
        Monomial { exps }
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial { exps }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, weights: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as i64 * w)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Monomial {
        Monomial {
            exps: self.exps.iter().map(|&e| e * k).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a <= b)
    }

    /// Componentwise quotient; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        debug_assert!(other.divides(self));
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.max(b))
                .collect(),
        }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(&a, &b)| a.min(b))
                .collect(),
        }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Graded-lex comparison: weighted degree first, then lexicographic with
    /// earlier variables larger.
    pub fn cmp_grlex(&self, other: &Monomial, weights: &[i64]) -> std::cmp::Ordering {
        self.degree(weights)
            .cmp(&other.degree(weights))
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

/// Homogeneity classification of a polynomial with respect to the variable
/// degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Mixed,
}

/// Sparse polynomial: monomial -> nonzero canonical residue.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, u64>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: u64, nvars: usize, f: &FieldSpec) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(Monomial::one(nvars), c % f.modulus(), f);
        p
    }

    pub fn one(nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(nvars), 1);
        Polynomial { terms }
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(index, nvars), 1);
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial, c: u64, f: &FieldSpec) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c % f.modulus(), f);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The unique term of a nonzero monomial polynomial, if it is one.
    pub fn single_term(&self) -> Option<(&Monomial, u64)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(m, &c)| (m, c))
        } else {
            None
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: u64, f: &FieldSpec) {
        if c % f.modulus() == 0 {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c % f.modulus());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = f.add(*o.get(), c % f.modulus());
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial, f: &FieldSpec) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c, f);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial, f: &FieldSpec) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m.clone(), f.neg(c), f);
        }
        out
    }

    pub fn neg(&self, f: &FieldSpec) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), f.neg(c), f);
        }
        out
    }

    pub fn scale(&self, s: u64, f: &FieldSpec) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in self.terms() {
            out.add_term(m.clone(), f.mul(c, s), f);
        }
        out
    }

    /// Product without quotient reduction.
    pub fn mul_raw(&self, other: &Polynomial, f: &FieldSpec) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                out.add_term(ma.mul(mb), f.mul(ca, cb), f);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: u64, f: &FieldSpec) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in self.terms() {
            out.add_term(ma.mul(m), f.mul(ca, c), f);
        }
        out
    }

    pub fn homogeneity(&self, weights: &[i64]) -> Homogeneity {
        let mut iter = self.terms.keys();
        match iter.next() {
            None => Homogeneity::Zero,
            Some(first) => {
                let d = first.degree(weights);
                if iter.all(|m| m.degree(weights) == d) {
                    Homogeneity::Degree(d)
                } else {
                    Homogeneity::Mixed
                }
            }
        }
    }

    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        !matches!(self.homogeneity(weights), Homogeneity::Mixed)
    }
}

/// Reduced Groebner basis data of the quotient ideal, fixed at construction.
#[derive(Debug, Clone)]
pub struct QuotientIdeal {
    generators: Vec<Polynomial>,
    gb: Vec<Polynomial>,
}

impl QuotientIdeal {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.gb
    }
}

/// The ambient graded ring `F_p[x_1..x_s] / Q`.
///
/// Variables carry positive integer degrees (default all 1); the optional
/// quotient ideal must be generated by homogeneous elements.
#[derive(Debug, Clone)]
pub struct GradedRingContext {
    field: FieldSpec,
    var_names: Vec<String>,
    var_degrees: Vec<i64>,
    quotient: Option<QuotientIdeal>,
}

impl GradedRingContext {
    pub fn polynomial_ring(
        field: FieldSpec,
        var_names: Vec<String>,
        var_degrees: Vec<i64>,
    ) -> Result<Self, PolyError> {
        if var_names.len() != var_degrees.len() {
            return Err(PolyError::VariableMismatch);
        }
        if let Some(&d) = var_degrees.iter().find(|&&d| d <= 0) {
            return Err(PolyError::NonPositiveVariableDegree(d));
        }
        Ok(GradedRingContext {
            field,
            var_names,
            var_degrees,
            quotient: None,
        })
    }

    /// Standard-graded ring with the given variable names.
    pub fn standard(field: FieldSpec, var_names: &[&str]) -> Self {
        let n = var_names.len();
        GradedRingContext::polynomial_ring(
            field,
            var_names.iter().map(|s| s.to_string()).collect(),
            vec![1; n],
        )
        .expect("standard grading is valid")
    }

    /// Attaches a quotient ideal; generators must be homogeneous. The reduced
    /// Groebner basis is computed once here. An empty generator list leaves
    /// the ring unquotiented.
    pub fn with_quotient(mut self, generators: Vec<Polynomial>) -> Result<Self, PolyError> {
        let generators: Vec<Polynomial> =
            generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            self.quotient = None;
            return Ok(self);
        }
        for g in &generators {
            if !g.is_homogeneous(&self.var_degrees) {
                return Err(PolyError::InhomogeneousQuotientGenerator(
                    self.display_poly(g),
                ));
            }
        }
        let free = self.free_context();
        let gb = groebner::buchberger(&free, generators.clone()).into_groebner_basis();
        self.quotient = Some(QuotientIdeal { generators, gb });
        Ok(self)
    }

    /// The same ring without the quotient ideal.
    pub fn free_context(&self) -> GradedRingContext {
        GradedRingContext {
            field: self.field,
            var_names: self.var_names.clone(),
            var_degrees: self.var_degrees.clone(),
            quotient: None,
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn var_degrees(&self) -> &[i64] {
        &self.var_degrees
    }

    pub fn quotient(&self) -> Option<&QuotientIdeal> {
        self.quotient.as_ref()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    /// Canonical form of `f` in this ring: identity for polynomial rings,
    /// Groebner normal form modulo the quotient ideal otherwise.
    pub fn reduce(&self, f: &Polynomial) -> Polynomial {
        match &self.quotient {
            None => f.clone(),
            Some(q) => groebner::normal_form_against(&self.free_context(), f, &q.gb),
        }
    }

    pub fn display_poly(&self, f: &Polynomial) -> String {
        display_polynomial(self, f)
    }
}

/// Product in the ring (reduced to normal form in quotient contexts).
pub fn poly_mul(ctx: &GradedRingContext, f: &Polynomial, g: &Polynomial) -> Polynomial {
    ctx.reduce(&f.mul_raw(g, ctx.field()))
}

/// `f^n` in the ring.
pub fn poly_pow(ctx: &GradedRingContext, f: &Polynomial, n: u32) -> Polynomial {
    let mut acc = Polynomial::one(ctx.nvars());
    for _ in 0..n {
        acc = poly_mul(ctx, &acc, f);
    }
    acc
}

/// Monomials of weighted degree `d` that survive in the quotient ring
/// (not divisible by any quotient Groebner leading term), in descending
/// graded-lex order.
pub fn degree_piece_basis(ctx: &GradedRingContext, d: i64) -> Vec<Monomial> {
    if d < 0 {
        return Vec::new();
    }
    let lead: Vec<Monomial> = ctx
        .quotient()
        .map(|q| {
            q.groebner_basis()
                .iter()
                .map(|g| groebner::leading_monomial(ctx, g).expect("GB elements are nonzero"))
                .collect()
        })
        .unwrap_or_default();
    let mut out = Vec::new();
    let mut exps = vec![0u32; ctx.nvars()];
    enumerate_monomials(ctx.var_degrees(), 0, d, &mut exps, &mut |m: &Monomial| {
        if !lead.iter().any(|l| l.divides(m)) {
            out.push(m.clone());
        }
    });
    out
}

/// Recursively enumerates exponent vectors of weighted degree exactly
/// `remaining`, first variable exponent descending (descending grlex within
/// the degree).
fn enumerate_monomials(
    weights: &[i64],
    var: usize,
    remaining: i64,
    exps: &mut Vec<u32>,
    visit: &mut impl FnMut(&Monomial),
) {
    if var == weights.len() {
        if remaining == 0 {
            visit(&Monomial::from_exps(exps.clone()));
        }
        return;
    }
    if var + 1 == weights.len() {
        // last variable must absorb the remaining degree exactly
        if remaining % weights[var] == 0 {
            exps[var] = (remaining / weights[var]) as u32;
            visit(&Monomial::from_exps(exps.clone()));
            exps[var] = 0;
        }
        return;
    }
    let max = remaining / weights[var];
    for e in (0..=max).rev() {
        exps[var] = e as u32;
        enumerate_monomials(weights, var + 1, remaining - e * weights[var], exps, visit);
    }
    exps[var] = 0;
}

/// The matrix of multiplication by a homogeneous `f` from the degree-`d`
/// piece to the degree-`d + deg f` piece, in `degree_piece_basis` coordinates.
pub fn mult_matrix(ctx: &GradedRingContext, f: &Polynomial, d: i64) -> Result<Mat, PolyError> {
    let e = match f.homogeneity(ctx.var_degrees()) {
        Homogeneity::Degree(e) => e,
        Homogeneity::Zero => 0,
        Homogeneity::Mixed => return Err(PolyError::NonHomogeneous),
    };
    let src = degree_piece_basis(ctx, d);
    let dst = degree_piece_basis(ctx, d + e);
    let index: BTreeMap<&Monomial, usize> = dst.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut out = Mat::zeros(dst.len(), src.len());
    for (j, m) in src.iter().enumerate() {
        let prod = ctx.reduce(&f.mul_monomial(m, 1, ctx.field()));
        for (mon, c) in prod.terms() {
            let i = *index
                .get(mon)
                .expect("reduced product expands in the standard basis");
            out.set(i, j, c);
        }
    }
    Ok(out)
}

/// Free graded module, described by the internal degrees of its generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedFreeModule {
    generator_degrees: Vec<i64>,
}

impl GradedFreeModule {
    pub fn new(generator_degrees: Vec<i64>) -> Self {
        GradedFreeModule { generator_degrees }
    }

    pub fn rank(&self) -> usize {
        self.generator_degrees.len()
    }

    pub fn generator_degrees(&self) -> &[i64] {
        &self.generator_degrees
    }
}

/// Basis of the degree-`d` piece of a free module: concatenated ring pieces
/// in degree `d - generator_degree[k]`, tagged with the generator index.
pub fn free_module_piece(
    ctx: &GradedRingContext,
    module: &GradedFreeModule,
    d: i64,
) -> Vec<(usize, Monomial)> {
    let mut out = Vec::new();
    for (k, &gd) in module.generator_degrees().iter().enumerate() {
        for m in degree_piece_basis(ctx, d - gd) {
            out.push((k, m));
        }
    }
    out
}

/// Matrix of polynomials, used for differentials, relation matrices and
/// chain maps. Entries are stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            cols,
            entries: vec![Polynomial::zero(); rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Polynomial>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        PolyMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Polynomial::one(nvars)
            } else {
                Polynomial::zero()
            }
        })
    }

    pub fn diagonal(entries: Vec<Polynomial>) -> Self {
        let n = entries.len();
        let mut m = PolyMatrix::zeros(n, n);
        for (i, p) in entries.into_iter().enumerate() {
            m.set(i, i, p);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.cols, self.rows, |i, j| self.entry(j, i).clone())
    }

    pub fn mul(&self, other: &PolyMatrix, ctx: &GradedRingContext) -> PolyMatrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        PolyMatrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Polynomial::zero();
            for k in 0..self.cols {
                let prod = poly_mul(ctx, self.entry(i, k), other.entry(k, j));
                acc = acc.add(&prod, ctx.field());
            }
            acc
        })
    }

    pub fn sub(&self, other: &PolyMatrix, f: &FieldSpec) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.entry(i, j).sub(other.entry(i, j), f)
        })
    }

    /// `self ⊗ I_rank`: block matrix with `self`-shaped blocks of scalar
    /// identities, for maps acting on the left tensor factor.
    pub fn kron_identity_right(&self, rank: usize) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows * rank, self.cols * rank, |i, j| {
            let (bi, si) = (i / rank, i % rank);
            let (bj, sj) = (j / rank, j % rank);
            if si == sj {
                self.entry(bi, bj).clone()
            } else {
                Polynomial::zero()
            }
        })
    }

    /// `I_rank ⊗ self`: block-diagonal copies of `self`, for maps acting on
    /// the right tensor factor.
    pub fn kron_identity_left(&self, rank: usize) -> PolyMatrix {
        PolyMatrix::from_fn(self.rows * rank, self.cols * rank, |i, j| {
            let (bi, si) = (i / self.rows, i % self.rows);
            let (bj, sj) = (j / self.cols, j % self.cols);
            if bi == bj {
                self.entry(si, sj).clone()
            } else {
                Polynomial::zero()
            }
        })
    }
}

// ---------------------------------------------------------------------------
// Text syntax: terms like `3*x^2*y`, separated by `+` / `-`.
// ---------------------------------------------------------------------------

/// Parses the documented polynomial syntax against a ring context.
pub fn parse_polynomial(ctx: &GradedRingContext, text: &str) -> Result<Polynomial, PolyError> {
    Parser {
        ctx,
        bytes: text.as_bytes(),
        pos: 0,
    }
    .parse()
}

struct Parser<'a> {
    ctx: &'a GradedRingContext,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn parse(&mut self) -> Result<Polynomial, PolyError> {
        let mut out = Polynomial::zero();
        self.skip_ws();
        if self.at_end() {
            return Err(self.error("empty polynomial"));
        }
        let mut sign_neg = false;
        if self.peek() == Some(b'-') {
            sign_neg = true;
            self.pos += 1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term = self.term()?;
            let term = if sign_neg {
                term.neg(self.ctx.field())
            } else {
                term
            };
            out = out.add(&term, self.ctx.field());
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign_neg = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign_neg = true;
                    self.pos += 1;
                }
                Some(_) => return Err(self.error("expected `+` or `-` between terms")),
            }
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let f = self.ctx.field();
        let mut coeff: u64 = 1;
        let mut mono = Monomial::one(self.ctx.nvars());
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    coeff = f.mul(coeff, n % f.modulus());
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let start = self.pos;
                    let name = self.identifier();
                    let idx = self.ctx.var_index(&name).ok_or_else(|| PolyError::Parse {
                        offset: start,
                        message: format!("unknown variable `{name}`"),
                    })?;
                    let mut exp = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let e = self.integer()?;
                        if e > u32::MAX as u64 {
                            return Err(self.error("exponent too large"));
                        }
                        exp = e as u32;
                    }
                    mono = mono.mul(&Monomial::var(idx, self.ctx.nvars()).pow(exp));
                }
                _ => return Err(self.error("expected a coefficient or variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Polynomial::monomial(mono, coeff, f))
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| PolyError::Parse {
                offset: start,
                message: "integer out of range".into(),
            })
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn error(&self, message: &str) -> PolyError {
        PolyError::Parse {
            offset: self.pos,
            message: message.into(),
        }
    }
}

/// Renders a polynomial in the documented syntax, terms in descending
/// graded-lex order, coefficients as canonical residues.
pub fn display_polynomial(ctx: &GradedRingContext, f: &Polynomial) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<(&Monomial, u64)> = f.terms().collect();
    terms.sort_by(|a, b| b.0.cmp_grlex(a.0, ctx.var_degrees()));
    let rendered: Vec<String> = terms
        .into_iter()
        .map(|(m, c)| {
            let mut factors: Vec<String> = Vec::new();
            if c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(ctx.var_names()[i].clone()),
                    _ => factors.push(format!("{}^{}", ctx.var_names()[i], e)),
                }
            }
            factors.join("*")
        })
        .collect();
    rendered.join(" + ")
}

impl fmt::Display for Monomial {
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(w, "1");
        }
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        write!(w, "{}", parts.join("*"))
    }
}
