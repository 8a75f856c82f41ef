//! Frame homomorphisms out of presented frames, given on generators.

use fixedbitset::FixedBitSet;

use super::{CIdealFrame, Expr, GenId, Horizon, ModelFrame, Presentation, PresentationError};
use crate::frame::{Elem, FiniteFrame, LatticeMap};

/// The first relation an assignment fails to respect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationViolation {
    pub label: String,
    pub relation: String,
    pub lhs_value: String,
    pub rhs_value: String,
}

/// The unique frame homomorphism determined by a generator assignment that
/// respects every relation.
#[derive(Debug, Clone)]
pub struct InducedHom<'a> {
    presentation: Presentation,
    images: Vec<Elem>,
    target: &'a FiniteFrame,
}

#[derive(Debug, Clone)]
pub enum Induced<'a> {
    Hom(InducedHom<'a>),
    Violation(RelationViolation),
}

impl<'a> Induced<'a> {
    pub fn hom(self) -> Option<InducedHom<'a>> {
        match self {
            Induced::Hom(h) => Some(h),
            Induced::Violation(_) => None,
        }
    }

    pub fn violation(&self) -> Option<&RelationViolation> {
        match self {
            Induced::Hom(_) => None,
            Induced::Violation(v) => Some(v),
        }
    }
}

fn eval_in(target: &FiniteFrame, images: &[Elem], e: &Expr) -> Elem {
    target.join_all(
        e.terms()
            .iter()
            .map(|t| target.meet_all(t.iter().map(|&g| images[g]))),
    )
}

/// Evaluates both sides of every relation under `assign` in `target`.
///
/// Schematic presentations are instantiated at `horizon`, which is then
/// required. `assign` must be defined on every generator.
pub fn induced_hom<'a>(
    p: &Presentation,
    assign: &dyn Fn(&str) -> Option<Elem>,
    target: &'a FiniteFrame,
    horizon: Option<Horizon>,
) -> Result<Induced<'a>, PresentationError> {
    let p = if p.is_schematic() {
        p.instantiate(horizon.ok_or(PresentationError::HorizonRequired)?)?
    } else {
        p.clone()
    };
    let images = p
        .generators()
        .iter()
        .map(|g| assign(g).ok_or_else(|| PresentationError::UnknownGenerator(g.clone())))
        .collect::<Result<Vec<Elem>, _>>()?;
    for &(lo, hi) in p.preorder() {
        if !target.leq(images[lo], images[hi]) {
            return Ok(Induced::Violation(RelationViolation {
                label: "preorder".into(),
                relation: format!("{} ≤ {}", p.generators()[lo], p.generators()[hi]),
                lhs_value: target.name(images[lo]).to_string(),
                rhs_value: target.name(images[hi]).to_string(),
            }));
        }
    }
    for r in p.relations() {
        let l = eval_in(target, &images, &r.lhs);
        let rv = eval_in(target, &images, &r.rhs);
        if !target.leq(l, rv) {
            return Ok(Induced::Violation(RelationViolation {
                label: r.label.clone(),
                relation: p.render_relation(r),
                lhs_value: target.name(l).to_string(),
                rhs_value: target.name(rv).to_string(),
            }));
        }
    }
    Ok(Induced::Hom(InducedHom {
        presentation: p,
        images,
        target,
    }))
}

impl<'a> InducedHom<'a> {
    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn target(&self) -> &'a FiniteFrame {
        self.target
    }

    pub fn image(&self, g: GenId) -> Elem {
        self.images[g]
    }

    pub fn image_of(&self, name: &str) -> Option<Elem> {
        self.presentation.generator(name).ok().map(|g| self.images[g])
    }

    pub fn eval(&self, e: &Expr) -> Elem {
        eval_in(self.target, &self.images, e)
    }

    /// The map on the C-ideal frame of the site built from the same
    /// presentation: an ideal goes to the join of its members' images.
    pub fn on_c_ideals<'b>(&self, cif: &'b CIdealFrame) -> LatticeMap<'b>
    where
        'a: 'b,
    {
        let sets = cif
            .site()
            .generator_sets()
            .expect("site was built from a presentation");
        let member: Vec<Elem> = sets
            .iter()
            .map(|gens| self.target.meet_all(gens.iter().map(|&g| self.images[g])))
            .collect();
        let table = cif
            .ideals
            .iter()
            .map(|ideal| self.target.join_all(ideal.ones().map(|s| member[s])))
            .collect();
        LatticeMap {
            source: &cif.frame,
            target: self.target,
            table,
        }
    }

    /// Image of an open of the model realization: the join, over its models,
    /// of the meet of the generators true there.
    pub fn on_models(&self, mf: &ModelFrame, open: &FixedBitSet) -> Elem {
        self.target.join_all(open.ones().map(|i| {
            self.target
                .meet_all(mf.model(i).ones().map(|g| self.images[g]))
        }))
    }

    /// The map on the enumerated upset lattice of a model realization.
    pub fn on_model_lattice<'b>(
        &self,
        mf: &ModelFrame,
        lattice: &'b FiniteFrame,
        sets: &[FixedBitSet],
    ) -> LatticeMap<'b>
    where
        'a: 'b,
    {
        LatticeMap {
            source: lattice,
            target: self.target,
            table: sets.iter().map(|s| self.on_models(mf, s)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{check_morphism, MorphismKind};
    use crate::presentation::{build_site, c_ideal_frame, DEFAULT_BUDGET};

    #[test]
    fn empty_presentation_maps_the_two_element_frame() {
        let p = Presentation::new();
        let target = FiniteFrame::powerset(&["a", "b"]);
        let hom = induced_hom(&p, &|_| None, &target, None)
            .unwrap()
            .hom()
            .unwrap();
        let cif = c_ideal_frame(&build_site(&p).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(cif.frame.len(), 2);
        let map = hom.on_c_ideals(&cif);
        assert!(check_morphism(&map, MorphismKind::FrameHom).holds());
        assert_eq!(map.apply(cif.frame.top()), target.top());
        assert_eq!(map.apply(cif.frame.bottom()), target.bottom());
    }

    #[test]
    fn violated_relation_is_reported() {
        let mut p = Presentation::with_generators(&["x"]).unwrap();
        let x = p.expr(&[vec!["x"]]).unwrap();
        p.add_relation(x, Expr::bottom(), "x is empty");
        let target = FiniteFrame::chain(2);
        let top = target.top();
        let r = induced_hom(&p, &|_| Some(top), &target, None).unwrap();
        assert_eq!(r.violation().unwrap().label, "x is empty");
    }

    #[test]
    fn missing_assignment_is_an_error() {
        let p = Presentation::with_generators(&["x"]).unwrap();
        let target = FiniteFrame::chain(2);
        assert!(induced_hom(&p, &|_| None, &target, None).is_err());
    }
}
