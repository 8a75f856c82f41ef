use fixedbitset::FixedBitSet;

use crate::cauchy::CauchyFrame;
use crate::completion::completion_presentation;
use crate::frame::{Elem, FiniteFrame};
use crate::presentation::{Expr, Horizon};
use crate::uniform::{star, uniformly_below, UniformityBase};

use super::{CaseReport, LimitError};

/// One joinand `[m(U_j)=k'] ∧ [s(k)∈v]` of `q*([u∈F])`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QStarTerm {
    pub j: usize,
    pub v: Elem,
    pub k_prime: usize,
    pub k: usize,
}

/// Pairs `(j, v)` with `v > 0` and `v ⊲_{U_j} u' ⊲ u` for some `u'`. Since
/// `⊲` is downward closed on the left, `u' = st(v, U_j)` is the only
/// candidate that needs testing.
pub(crate) fn qstar_cores(
    f: &FiniteFrame,
    base: &UniformityBase,
    u: Elem,
    base_len: usize,
) -> Vec<(usize, Elem)> {
    let mut out = Vec::new();
    for j in 0..base_len {
        for v in f.elements().filter(|&v| !f.is_bottom(v)) {
            let st = star(f, v, &base.covers[j]);
            if uniformly_below(f, st, u, base).is_some() {
                out.push((j, v));
            }
        }
    }
    out
}

/// All joinands of `q*([u∈F])` at horizon `h`: base indices below
/// `min(|B|, K)` and `k' ≤ k < K`.
pub fn qstar_terms(f: &FiniteFrame, base: &UniformityBase, u: Elem, h: Horizon) -> Vec<QStarTerm> {
    let mut out = Vec::new();
    for (j, v) in qstar_cores(f, base, u, base.len().min(h.k())) {
        for k in 0..h.k() {
            for k_prime in 0..=k {
                out.push(QStarTerm { j, v, k_prime, k });
            }
        }
    }
    out
}

/// `q*([u∈F])` as an expression over the generators of a truncation.
#[derive(Debug, Clone)]
pub struct QStarExpr {
    pub u: Elem,
    pub terms: Vec<QStarTerm>,
    pub expr: Expr,
}

pub fn qstar_expr(cfr: &CauchyFrame, f: &FiniteFrame, base: &UniformityBase, u: Elem) -> QStarExpr {
    let terms = qstar_terms(f, base, u, cfr.horizon);
    let expr = Expr::from_terms(
        terms
            .iter()
            .map(|t| vec![cfr.m(t.j, t.k_prime), cfr.s(t.k, t.v)])
            .collect(),
    );
    QStarExpr { u, terms, expr }
}

fn eval_with(e: &Expr, images: &[FixedBitSet], top: &FixedBitSet) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(top.len());
    for term in e.terms() {
        let mut m = top.clone();
        for &g in term {
            m.intersect_with(&images[g]);
        }
        out.union_with(&m);
    }
    out
}

/// Evaluates `q*` on every generator `[u∈F]` in the truncated Cauchy frame
/// and checks each relation of the completion presentation, grouped by
/// family (i)–(v).
pub fn qstar_well_defined(
    f: &FiniteFrame,
    base: &UniformityBase,
    cfr: &CauchyFrame,
) -> Result<Vec<CaseReport>, LimitError> {
    let p = completion_presentation(f, base);
    let top = cfr.models.top();
    let images = qstar_images(f, base, cfr);
    let mut cases: Vec<CaseReport> = ["(i)", "(ii)", "(iii)", "(iv)", "(v)"]
        .iter()
        .map(|c| CaseReport::new(c))
        .collect();
    for r in p.relations() {
        let family = r.label.split(' ').next().unwrap_or("");
        let case = cases
            .iter_mut()
            .find(|c| c.case == family)
            .ok_or_else(|| LimitError::Internal(format!("unexpected relation {}", r.label)))?;
        let lhs = eval_with(&r.lhs, &images, &top);
        let rhs = eval_with(&r.rhs, &images, &top);
        case.record(lhs.is_subset(&rhs), || {
            format!("{}: {} fails under q*", r.label, p.render_relation(r))
        });
    }
    Ok(cases)
}

/// `q*` on every generator, as model sets.
pub(crate) fn qstar_images(
    f: &FiniteFrame,
    base: &UniformityBase,
    cfr: &CauchyFrame,
) -> Vec<FixedBitSet> {
    f.elements()
        .map(|u| cfr.models.eval(&qstar_expr(cfr, f, base, u).expr))
        .collect()
}
