use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::cauchy::{m_name, s_name, CauchyFrame};
use crate::completion::CompletionFrame;
use crate::frame::{Elem, FiniteFrame};
use crate::presentation::{induced_hom, Induced};
use crate::uniform::{check_reflection_lemma, regular_interiors, ReflectionLemmaReport, UniformityBase};

use super::qstar::{qstar_expr, qstar_images};
use super::{CaseReport, LimitError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantMapReport {
    /// `c*` respects every truncated Cauchy relation.
    pub relations: CaseReport,
    /// `c* q*([u∈F]) = γ*([u∈F])` for every `u`.
    pub composite: CaseReport,
}

impl ConstantMapReport {
    pub fn holds(&self) -> bool {
        self.relations.holds() && self.composite.holds()
    }
}

/// Induces `c*` from `[s(n)∈u] ↦ u` and `[m(U)=k] ↦ 1`, then compares
/// `c* ∘ q*` with `γ*` on the generators of the completion.
pub fn constant_map_check(
    f: &FiniteFrame,
    base: &UniformityBase,
    cfr: &CauchyFrame,
) -> Result<ConstantMapReport, LimitError> {
    let mut assign: HashMap<String, Elem> = HashMap::new();
    for n in 0..cfr.k() {
        for u in f.elements() {
            assign.insert(s_name(f, n, u), u);
        }
    }
    for j in 0..cfr.base_len() {
        for k in 0..cfr.k() {
            assign.insert(m_name(j, k), f.top());
        }
    }
    let lookup = |name: &str| assign.get(name).copied();
    let p = cfr.presentation();
    let mut relations = CaseReport::new("c* respects the Cauchy relations");
    relations.checked = p.relations().len();
    let mut composite = CaseReport::new("c* q* = γ*");
    let hom = match induced_hom(p, &lookup, f, None)? {
        Induced::Hom(h) => h,
        Induced::Violation(v) => {
            relations.failure = Some(format!("{}: {}", v.label, v.relation));
            return Ok(ConstantMapReport {
                relations,
                composite,
            });
        }
    };
    let gamma = regular_interiors(f, base);
    for u in f.elements() {
        let lhs = hom.eval(&qstar_expr(cfr, f, base, u).expr);
        composite.record(lhs == gamma[u], || {
            format!(
                "u = {}: c*q* gives {}, γ* gives {}",
                f.name(u),
                f.name(lhs),
                f.name(gamma[u])
            )
        });
    }
    Ok(ConstantMapReport {
        relations,
        composite,
    })
}

/// The reflection lemma for `e = q`: the image of `q*` in the truncated
/// Cauchy frame, carrying the initial uniformity, against its fixed opens.
pub fn q_reflection_check(
    f: &FiniteFrame,
    base: &UniformityBase,
    cf: &CompletionFrame,
    cfr: &CauchyFrame,
    budget: usize,
) -> Result<ReflectionLemmaReport, LimitError> {
    let (y, sets) = cfr.models.lattice(budget)?;
    let index: HashMap<&FixedBitSet, Elem> = sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let images = qstar_images(f, base, cfr);
    let site = cf.cif.site();
    let gens = site
        .generator_sets()
        .ok_or_else(|| LimitError::Internal("completion site without generators".into()))?;
    let top = cfr.models.top();
    let mut e = Vec::with_capacity(cf.frame().len());
    for c in cf.frame().elements() {
        let mut set = FixedBitSet::with_capacity(top.len());
        for s in cf.cif.ideal(c).ones() {
            let mut m = top.clone();
            for &g in &gens[s] {
                m.intersect_with(&images[g]);
            }
            set.union_with(&m);
        }
        let elem = index
            .get(&set)
            .copied()
            .ok_or_else(|| LimitError::Internal("q* image is not an up-set of models".into()))?;
        e.push(elem);
    }
    Ok(check_reflection_lemma(cf.frame(), &cf.base, &y, &e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::completion::completion_frame;
    use crate::instances::{discrete, indiscrete};
    use crate::presentation::{Horizon, DEFAULT_BUDGET};

    #[test]
    fn constant_map_factors_gamma() {
        for inst in [discrete(2), discrete(3), indiscrete(2)] {
            for k in 2..=3 {
                let cfr = CauchyFrame::new(&inst.frame, &inst.base, Horizon::new(k).unwrap(), DEFAULT_BUDGET)
                    .unwrap();
                let r = constant_map_check(&inst.frame, &inst.base, &cfr).unwrap();
                assert!(r.holds(), "{} K={k}: {r:?}", inst.name);
            }
        }
    }

    #[test]
    fn reflection_lemma_for_the_limit_map() {
        let inst = discrete(2);
        let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
        let cfr = CauchyFrame::new(&inst.frame, &inst.base, Horizon::new(2).unwrap(), DEFAULT_BUDGET)
            .unwrap();
        let r = q_reflection_check(&inst.frame, &inst.base, &cf, &cfr, DEFAULT_BUDGET).unwrap();
        assert!(r.holds(), "{r:?}");
    }
}
