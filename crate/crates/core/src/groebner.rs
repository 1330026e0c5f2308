//! Buchberger's algorithm and ideal arithmetic over `F_p[x_1..x_s]`.
//!
//! All computations here happen in the free polynomial ring (quotient
//! contexts contribute their generators explicitly when callers need ideals
//! of a quotient). Provides reduced Groebner bases under graded-lex, normal
//! forms, containment tests, and colon ideals `(I : f)` with a monomial fast
//! path and a general route through intersection by elimination.

use std::cmp::Ordering;

use crate::polyring::{
    parse_polynomial, GradedRingContext, Monomial, PolyError, Polynomial,
};

/// Term order tag. `GrLex` is the global default; `ElimFirst` is the block
/// order (first variable dominates) used internally for elimination.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermOrder {
    GrLex,
    ElimFirst,
}

fn cmp_monomials(order: TermOrder, a: &Monomial, b: &Monomial, weights: &[i64]) -> Ordering {
    match order {
        TermOrder::GrLex => a.cmp_grlex(b, weights),
        TermOrder::ElimFirst => {
            let (ea, eb) = (a.exps()[0], b.exps()[0]);
            ea.cmp(&eb).then_with(|| a.cmp_grlex(b, weights))
        }
    }
}

fn leading_with(order: TermOrder, f: &Polynomial, weights: &[i64]) -> Option<(Monomial, u64)> {
    f.terms()
        .max_by(|(ma, _), (mb, _)| cmp_monomials(order, ma, mb, weights))
        .map(|(m, c)| (m.clone(), c))
}

/// Leading monomial under graded-lex with the context weights.
pub fn leading_monomial(ctx: &GradedRingContext, f: &Polynomial) -> Option<Monomial> {
    leading_with(TermOrder::GrLex, f, ctx.var_degrees()).map(|(m, _)| m)
}

/// A finitely generated ideal with its reduced Groebner basis.
#[derive(Debug, Clone)]
pub struct IdealBasis {
    generators: Vec<Polynomial>,
    gb: Vec<Polynomial>,
    order: TermOrder,
}

impl IdealBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn groebner_basis(&self) -> &[Polynomial] {
        &self.gb
    }

    pub fn into_groebner_basis(self) -> Vec<Polynomial> {
        self.gb
    }

    pub fn order(&self) -> TermOrder {
        self.order
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gb.is_empty()
    }

    /// True if the ideal is the whole ring.
    pub fn is_unit_ideal(&self, ctx: &GradedRingContext) -> bool {
        self.gb.len() == 1 && self.gb[0] == Polynomial::one(ctx.nvars())
    }
}

/// Computes the reduced Groebner basis of the ideal generated by `gens`
/// under graded-lex.
pub fn buchberger(ctx: &GradedRingContext, gens: Vec<Polynomial>) -> IdealBasis {
    let gb = buchberger_with(ctx, gens.clone(), TermOrder::GrLex);
    IdealBasis {
        generators: gens,
        gb,
        order: TermOrder::GrLex,
    }
}

/// Full division: the unique remainder of `f` against a (Groebner) basis.
pub fn normal_form(ctx: &GradedRingContext, f: &Polynomial, ideal: &IdealBasis) -> Polynomial {
    reduce_with(ideal.order, ctx, f, &ideal.gb)
}

/// Normal form against an explicit graded-lex Groebner basis (used for
/// quotient-ring arithmetic).
pub fn normal_form_against(
    ctx: &GradedRingContext,
    f: &Polynomial,
    gb: &[Polynomial],
) -> Polynomial {
    reduce_with(TermOrder::GrLex, ctx, f, gb)
}

/// True if `J ⊆ I` (every generator of `J` reduces to zero against `I`).
pub fn ideal_contains(ctx: &GradedRingContext, outer: &IdealBasis, inner: &IdealBasis) -> bool {
    inner
        .generators()
        .iter()
        .all(|g| normal_form(ctx, g, outer).is_zero())
}

/// The colon ideal `(I : f) = {g : g*f ∈ I}`.
///
/// When `I` and `f` are monomial the generators are `m_k / gcd(m_k, f)`;
/// otherwise the ideal is computed as `(I ∩ (f)) / f` with the intersection
/// obtained by a single elimination variable.
pub fn colon_ideal(ctx: &GradedRingContext, ideal: &IdealBasis, f: &Polynomial) -> IdealBasis {
    assert!(!f.is_zero(), "colon by the zero element");
    let monomial_ideal = ideal
        .generators()
        .iter()
        .all(|g| g.single_term().is_some());
    if let (true, Some((fm, _))) = (monomial_ideal, f.single_term()) {
        let gens: Vec<Polynomial> = ideal
            .generators()
            .iter()
            .map(|g| {
                let (m, _) = g.single_term().expect("monomial generator");
                Polynomial::monomial(m.div(&m.gcd(fm)), 1, ctx.field())
            })
            .collect();
        return buchberger(ctx, gens);
    }
    let intersection = intersect_with_principal(ctx, ideal.generators(), f);
    let gens: Vec<Polynomial> = intersection
        .iter()
        .map(|g| divide_exact(ctx, g, f).expect("intersection elements are divisible by f"))
        .collect();
    buchberger(ctx, gens)
}

/// `I ∩ (f)` via `elim_t(t*I + (1-t)*(f))` in an extended ring with a block
/// order putting `t` first. Homogeneity is broken inside this computation
/// only.
pub fn intersect_with_principal(
    ctx: &GradedRingContext,
    gens: &[Polynomial],
    f: &Polynomial,
) -> Vec<Polynomial> {
    let ext = extended_context(ctx);
    let field = *ctx.field();
    let t = Polynomial::var(0, ext.nvars());
    let one_minus_t = Polynomial::one(ext.nvars()).sub(&t, &field);
    let mut work: Vec<Polynomial> = gens
        .iter()
        .map(|g| t.mul_raw(&lift(g, &field), &field))
        .collect();
    work.push(one_minus_t.mul_raw(&lift(f, &field), &field));
    let gb = buchberger_with(&ext, work, TermOrder::ElimFirst);
    gb.into_iter()
        .filter_map(|g| lower(&g, &field))
        .collect()
}

fn extended_context(ctx: &GradedRingContext) -> GradedRingContext {
    let mut names = vec!["t#elim".to_string()];
    names.extend(ctx.var_names().iter().cloned());
    let mut weights = vec![1i64];
    weights.extend_from_slice(ctx.var_degrees());
    GradedRingContext::polynomial_ring(*ctx.field(), names, weights)
        .expect("extended context is valid")
}

fn lift(f: &Polynomial, field: &crate::exactlin::FieldSpec) -> Polynomial {
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        let mut exps = vec![0u32];
        exps.extend_from_slice(m.exps());
        out.add_term(Monomial::from_exps(exps), c, field);
    }
    out
}

fn lower(f: &Polynomial, field: &crate::exactlin::FieldSpec) -> Option<Polynomial> {
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        if m.exps()[0] != 0 {
            return None;
        }
        out.add_term(Monomial::from_exps(m.exps()[1..].to_vec()), c, field);
    }
    Some(out)
}

/// Exact division `g / f`, or `None` when `f` does not divide `g`.
pub fn divide_exact(
    ctx: &GradedRingContext,
    g: &Polynomial,
    f: &Polynomial,
) -> Option<Polynomial> {
    assert!(!f.is_zero(), "division by zero polynomial");
    let field = *ctx.field();
    let weights = ctx.var_degrees();
    let (fm, fc) = leading_with(TermOrder::GrLex, f, weights)?;
    let fc_inv = field.inv(fc);
    let mut rem = g.clone();
    let mut quot = Polynomial::zero();
    while !rem.is_zero() {
        let (rm, rc) = leading_with(TermOrder::GrLex, &rem, weights).unwrap();
        if !fm.divides(&rm) {
            return None;
        }
        let qm = rm.div(&fm);
        let qc = field.mul(rc, fc_inv);
        quot.add_term(qm.clone(), qc, &field);
        rem = rem.sub(&f.mul_monomial(&qm, qc, &field), &field);
    }
    Some(quot)
}

/// Buchberger loop with product/chain pair pruning, followed by reduction to
/// the unique reduced basis (monic, autoreduced, sorted by leading term).
pub fn buchberger_with(
    ctx: &GradedRingContext,
    gens: Vec<Polynomial>,
    order: TermOrder,
) -> Vec<Polynomial> {
    let weights = ctx.var_degrees().to_vec();
    let field = *ctx.field();
    let mut basis: Vec<Polynomial> = gens.into_iter().filter(|g| !g.is_zero()).collect();
    let mut leads: Vec<Monomial> = basis
        .iter()
        .map(|g| leading_with(order, g, &weights).unwrap().0)
        .collect();

    let mut pending: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in (i + 1)..basis.len() {
            pending.push((i, j));
        }
    }
    let mut done: std::collections::BTreeSet<(usize, usize)> = Default::default();

    while !pending.is_empty() {
        // smallest lcm degree first keeps the processing degreewise for
        // homogeneous input
        pending.sort_by(|&(a, b), &(c, d)| {
            let la = leads[a].lcm(&leads[b]);
            let lb = leads[c].lcm(&leads[d]);
            cmp_monomials(order, &la, &lb, &weights)
                .then(a.cmp(&c))
                .then(b.cmp(&d))
        });
        let (i, j) = pending.remove(0);
        done.insert((i, j));

        // product criterion
        if leads[i].coprime(&leads[j]) {
            continue;
        }
        // chain criterion
        let lcm_ij = leads[i].lcm(&leads[j]);
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leads[k].divides(&lcm_ij)
                && done.contains(&key(i, k))
                && done.contains(&key(j, k))
        });
        if chained {
            continue;
        }

        let s = s_polynomial(&basis[i], &basis[j], order, &weights, &field);
        let rem = reduce_with(order, ctx, &s, &basis);
        if !rem.is_zero() {
            let lead = leading_with(order, &rem, &weights).unwrap().0;
            basis.push(rem);
            leads.push(lead);
            let n = basis.len() - 1;
            for k in 0..n {
                pending.push((k, n));
            }
        }
    }

    reduce_basis(ctx, basis, order)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn s_polynomial(
    f: &Polynomial,
    g: &Polynomial,
    order: TermOrder,
    weights: &[i64],
    field: &crate::exactlin::FieldSpec,
) -> Polynomial {
    let (fm, fc) = leading_with(order, f, weights).unwrap();
    let (gm, gc) = leading_with(order, g, weights).unwrap();
    let l = fm.lcm(&gm);
    let uf = f.mul_monomial(&l.div(&fm), field.inv(fc), field);
    let ug = g.mul_monomial(&l.div(&gm), field.inv(gc), field);
    uf.sub(&ug, field)
}

fn reduce_with(
    order: TermOrder,
    ctx: &GradedRingContext,
    f: &Polynomial,
    basis: &[Polynomial],
) -> Polynomial {
    let weights = ctx.var_degrees();
    let field = *ctx.field();
    let leads: Vec<Option<(Monomial, u64)>> = basis
        .iter()
        .map(|g| leading_with(order, g, weights))
        .collect();
    let mut p = f.clone();
    let mut remainder = Polynomial::zero();
    while !p.is_zero() {
        let (pm, pc) = leading_with(order, &p, weights).unwrap();
        let reducer = basis.iter().zip(&leads).find_map(|(g, lead)| {
            lead.as_ref()
                .filter(|(lm, _)| lm.divides(&pm))
                .map(|(lm, lc)| (g, lm.clone(), *lc))
        });
        match reducer {
            Some((g, lm, lc)) => {
                let qm = pm.div(&lm);
                let qc = field.mul(pc, field.inv(lc));
                p = p.sub(&g.mul_monomial(&qm, qc, &field), &field);
            }
            None => {
                remainder.add_term(pm.clone(), pc, &field);
                p.add_term(pm, field.neg(pc), &field);
            }
        }
    }
    remainder
}

/// Minimizes and autoreduces, yielding the unique reduced basis.
fn reduce_basis(
    ctx: &GradedRingContext,
    basis: Vec<Polynomial>,
    order: TermOrder,
) -> Vec<Polynomial> {
    let weights = ctx.var_degrees().to_vec();
    let field = *ctx.field();
    let mut work: Vec<Polynomial> = basis.into_iter().filter(|g| !g.is_zero()).collect();

    // minimal: drop any element whose leading term another leading term divides
    let leads: Vec<Monomial> = work
        .iter()
        .map(|g| leading_with(order, g, &weights).unwrap().0)
        .collect();
    let keep: Vec<bool> = (0..work.len())
        .map(|i| {
            !(0..work.len()).any(|j| {
                j != i
                    && leads[j].divides(&leads[i])
                    && (leads[j] != leads[i] || j < i)
            })
        })
        .collect();
    work = work
        .into_iter()
        .zip(keep)
        .filter_map(|(g, k)| k.then_some(g))
        .collect();

    // autoreduce: replace each element by its normal form against the others
    loop {
        let mut changed = false;
        for i in 0..work.len() {
            let others: Vec<Polynomial> = work
                .iter()
                .enumerate()
                .filter_map(|(j, g)| (j != i).then(|| g.clone()))
                .collect();
            let nf = reduce_with(order, ctx, &work[i], &others);
            if nf != work[i] {
                work[i] = nf;
                changed = true;
            }
        }
        work.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }

    // monic, sorted descending by leading monomial
    for g in work.iter_mut() {
        let (_, lc) = leading_with(order, g, &weights).unwrap();
        *g = g.scale(field.inv(lc), &field);
    }
    work.sort_by(|a, b| {
        let la = leading_with(order, a, &weights).unwrap().0;
        let lb = leading_with(order, b, &weights).unwrap().0;
        cmp_monomials(order, &lb, &la, &weights)
    });
    work
}

/// Convenience: parse-and-build an ideal from polynomial text.
pub fn ideal_from_text(
    ctx: &GradedRingContext,
    gens: &[&str],
) -> Result<IdealBasis, PolyError> {
    let parsed = gens
        .iter()
        .map(|g| parse_polynomial(ctx, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(buchberger(ctx, parsed))
}
