//! Point-set realization of finite presentations.
//!
//! A finite presentation presents a finite distributive lattice, which is
//! spatial: it is isomorphic to the lattice of upsets of its models (truth
//! assignments of the generators satisfying every relation), ordered by
//! inclusion of their true generators. An open is stored as the set of models
//! it contains, so elements can be computed without enumerating the frame,
//! whose size can be far beyond any budget when the model count is modest.

use fixedbitset::FixedBitSet;

use super::site::enumerate_closed;
use super::{Expr, GenId, Presentation, PresentationError, Relation};
use crate::frame::FiniteFrame;

/// The frame of a finite presentation, realized on its models.
#[derive(Debug, Clone)]
pub struct ModelFrame {
    presentation: Presentation,
    models: Vec<FixedBitSet>,
    extents: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
}

impl ModelFrame {
    /// Finds every model by backtracking over the generators in id order,
    /// checking each relation once its last generator is assigned.
    pub fn new(p: &Presentation, budget: usize) -> Result<ModelFrame, PresentationError> {
        if p.is_schematic() {
            return Err(PresentationError::HorizonRequired);
        }
        let g = p.generators().len();
        let mut checks: Vec<Vec<&Relation>> = vec![Vec::new(); g];
        let mut constant: Vec<&Relation> = Vec::new();
        for r in p.relations() {
            match r.lhs.generators().chain(r.rhs.generators()).max() {
                Some(last) => checks[last].push(r),
                None => constant.push(r),
            }
        }
        let mut models = Vec::new();
        let empty = FixedBitSet::with_capacity(g);
        if constant.iter().all(|r| holds(r, &empty)) {
            let mut cur = FixedBitSet::with_capacity(g);
            search(0, g, &checks, &mut cur, &mut models, budget)?;
        }
        let mut extents = vec![FixedBitSet::with_capacity(models.len()); g];
        for (i, m) in models.iter().enumerate() {
            for x in m.ones() {
                extents[x].insert(i);
            }
        }
        let n = models.len();
        let up = (0..n)
            .map(|i| {
                let mut s = FixedBitSet::with_capacity(n);
                for j in 0..n {
                    if models[i].is_subset(&models[j]) {
                        s.insert(j);
                    }
                }
                s
            })
            .collect();
        Ok(ModelFrame {
            presentation: p.clone(),
            models,
            extents,
            up,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn model_count(&self) -> usize {
        self.models.len()
    }

    /// Generators true in model `i`.
    pub fn model(&self, i: usize) -> &FixedBitSet {
        &self.models[i]
    }

    pub fn models(&self) -> &[FixedBitSet] {
        &self.models
    }

    /// Models above model `i`: the open `⋀ {g : g true in i}`.
    pub fn up_of(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    pub fn top(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.models.len());
        s.insert_range(..);
        s
    }

    pub fn bottom(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.models.len())
    }

    pub fn generator(&self, g: GenId) -> &FixedBitSet {
        &self.extents[g]
    }

    pub fn meet_of_generators(&self, gens: &[GenId]) -> FixedBitSet {
        let mut s = self.top();
        for &x in gens {
            s.intersect_with(&self.extents[x]);
        }
        s
    }

    pub fn eval(&self, e: &Expr) -> FixedBitSet {
        let mut out = self.bottom();
        for t in e.terms() {
            out.union_with(&self.meet_of_generators(t));
        }
        out
    }

    pub fn satisfies(&self, r: &Relation) -> bool {
        self.eval(&r.lhs).is_subset(&self.eval(&r.rhs))
    }

    /// Enumerates every upset as a [`FiniteFrame`], with the upsets themselves.
    pub fn lattice(&self, budget: usize) -> Result<(FiniteFrame, Vec<FixedBitSet>), PresentationError> {
        let n = self.models.len();
        let sets = enumerate_closed(n, &self.up, |_| {}, budget)?;
        let names = sets
            .iter()
            .map(|s| {
                let minimal: Vec<String> = s
                    .ones()
                    .filter(|&i| s.ones().all(|j| j == i || !self.up[j].contains(i)))
                    .map(|i| format!("p{i}"))
                    .collect();
                if minimal.is_empty() {
                    "0".to_string()
                } else {
                    format!("↑{{{}}}", minimal.join(","))
                }
            })
            .collect();
        let frame = FiniteFrame::from_sets(names, &sets).expect("upsets form a frame");
        Ok((frame, sets))
    }
}

fn holds(r: &Relation, assignment: &FixedBitSet) -> bool {
    let sat = |e: &Expr| {
        e.terms()
            .iter()
            .any(|t| t.iter().all(|&x| assignment.contains(x)))
    };
    !sat(&r.lhs) || sat(&r.rhs)
}

fn search(
    depth: usize,
    g: usize,
    checks: &[Vec<&Relation>],
    cur: &mut FixedBitSet,
    out: &mut Vec<FixedBitSet>,
    budget: usize,
) -> Result<(), PresentationError> {
    if depth == g {
        if out.len() >= budget {
            return Err(PresentationError::SizeBudgetExceeded { limit: budget });
        }
        out.push(cur.clone());
        return Ok(());
    }
    for value in [false, true] {
        cur.set(depth, value);
        if checks[depth].iter().all(|r| holds(r, cur)) {
            search(depth + 1, g, checks, cur, out, budget)?;
        }
    }
    cur.set(depth, false);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::find_isomorphism;
    use crate::presentation::{build_site, c_ideal_frame, DEFAULT_BUDGET};

    #[test]
    fn agrees_with_c_ideals_on_a_small_presentation() {
        let mut p = Presentation::with_generators(&["a", "b", "c"]).unwrap();
        let cover = p.expr(&[vec!["a"], vec!["b"]]).unwrap();
        p.add_relation(Expr::top(), cover, "cover");
        let c = p.expr(&[vec!["c"]]).unwrap();
        let a = p.expr(&[vec!["a"]]).unwrap();
        p.add_relation(c, a, "c below a");
        let mf = ModelFrame::new(&p, DEFAULT_BUDGET).unwrap();
        let (lat, _) = mf.lattice(DEFAULT_BUDGET).unwrap();
        let cif = c_ideal_frame(&build_site(&p).unwrap(), DEFAULT_BUDGET).unwrap();
        assert!(find_isomorphism(&lat, &cif.frame).is_some());
    }

    #[test]
    fn inconsistent_presentation_has_no_models() {
        let mut p = Presentation::with_generators(&["a"]).unwrap();
        p.add_relation(Expr::top(), Expr::bottom(), "false");
        let mf = ModelFrame::new(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(mf.model_count(), 0);
        assert_eq!(mf.lattice(DEFAULT_BUDGET).unwrap().0.len(), 1);
    }
}
