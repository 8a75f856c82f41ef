//! The completion of a finite pre-uniform locale, presented by the theory of
//! regular Cauchy filters and computed through the site engine.

use thiserror::Error;

use crate::frame::{Elem, FiniteFrame};
use crate::presentation::{
    build_site, c_ideal_frame, induced_hom, CIdealFrame, Expr, Induced, Presentation,
    PresentationError,
};
use crate::uniform::{
    below_table, regular_interiors, validate_uniformity, Cover, UniformityBase,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompletionError {
    #[error("base is not a pre-uniformity: {0}")]
    InvalidUniformity(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Name of the generator `[a ∈ F]`.
pub fn filter_generator(f: &FiniteFrame, a: Elem) -> String {
    format!("[{}∈F]", f.name(a))
}

fn check_base(f: &FiniteFrame, base: &UniformityBase) -> Result<(), CompletionError> {
    let report = validate_uniformity(base, f);
    match report.violations.first() {
        Some(v) => Err(CompletionError::InvalidUniformity(v.to_string())),
        None => Ok(()),
    }
}

/// Generators `[a∈F]` in the order of the elements of `f`, and the relations
///
/// * (i) `[1∈F] = 1`
/// * (ii) `[a∧b∈F] = [a∈F] ∧ [b∈F]`
/// * (iii) `[0∈F] ≤ 0`; for `a > 0` the relation is vacuous
/// * (iv) `1 ≤ ⋁_{u∈U_j} [u∈F]` for every base cover
/// * (v) `[a∈F] ≤ ⋁_{b⊲a} [b∈F]`
pub fn completion_presentation(f: &FiniteFrame, base: &UniformityBase) -> Presentation {
    let names: Vec<String> = f.elements().map(|a| filter_generator(f, a)).collect();
    let mut p = Presentation::with_generators(&names).expect("element names are distinct");
    p.add_equation(Expr::gen(f.top()), Expr::top(), "(i)");
    for a in f.elements() {
        for b in (a + 1)..f.len() {
            let label = format!("(ii) {},{}", f.name(a), f.name(b));
            p.add_equation(Expr::gen(f.meet(a, b)), Expr::meet_of([a, b]), &label);
        }
    }
    p.add_relation(Expr::gen(f.bottom()), Expr::bottom(), "(iii)");
    for (j, u) in base.covers.iter().enumerate() {
        p.add_relation(
            Expr::top(),
            Expr::join_of(u.members().iter().copied()),
            &format!("(iv) U{j}"),
        );
    }
    let below = below_table(f, base);
    for a in f.elements() {
        p.add_relation(
            Expr::gen(a),
            Expr::join_of(below[a].ones()),
            &format!("(v) {}", f.name(a)),
        );
    }
    p
}

/// The completion realized as a frame of C-ideals.
#[derive(Debug, Clone)]
pub struct CompletionFrame {
    pub presentation: Presentation,
    pub cif: CIdealFrame,
    /// `a ↦ ⟦[a∈F]⟧`.
    pub gen: Vec<Elem>,
    /// The covers `{⟦[u∈F]⟧ : u ∈ U_j}`, zero members dropped.
    pub base: UniformityBase,
}

impl CompletionFrame {
    pub fn frame(&self) -> &FiniteFrame {
        &self.cif.frame
    }

    pub fn gen(&self, a: Elem) -> Elem {
        self.gen[a]
    }
}

pub fn completion_frame(
    f: &FiniteFrame,
    base: &UniformityBase,
    budget: usize,
) -> Result<CompletionFrame, CompletionError> {
    check_base(f, base)?;
    let presentation = completion_presentation(f, base);
    let site = build_site(&presentation)?;
    let cif = c_ideal_frame(&site, budget)?;
    let elems = site
        .generator_elements()
        .expect("site built from a presentation");
    let gen: Vec<Elem> = f.elements().map(|a| cif.embed(elems[a])).collect();
    let cbase = UniformityBase {
        covers: base
            .covers
            .iter()
            .map(|u| {
                Cover::new(
                    u.members()
                        .iter()
                        .map(|&m| gen[m])
                        .filter(|&m| !cif.frame.is_bottom(m)),
                )
            })
            .collect(),
        star_witness: base.star_witness.clone(),
    };
    Ok(CompletionFrame {
        presentation,
        cif,
        gen,
        base: cbase,
    })
}

/// The frame map `γ*: 𝒞X → X` and its properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gamma {
    pub table: Vec<Elem>,
    /// `γ*(c) = 0` only for `c = 0`.
    pub dense: bool,
    pub injective: bool,
}

/// Induces `γ*` from `[a∈F] ↦ ⋁_{b⊲a} b`.
pub fn gamma_hom(
    cf: &CompletionFrame,
    f: &FiniteFrame,
    base: &UniformityBase,
) -> Result<Gamma, CompletionError> {
    let interiors = regular_interiors(f, base);
    let assign = |name: &str| {
        cf.presentation
            .generator(name)
            .ok()
            .map(|g| interiors[g])
    };
    let hom = match induced_hom(&cf.presentation, &assign, f, None)? {
        Induced::Hom(h) => h,
        Induced::Violation(v) => {
            return Err(CompletionError::Internal(format!(
                "γ* violates {}: {}",
                v.label, v.relation
            )))
        }
    };
    let map = hom.on_c_ideals(&cf.cif);
    let dense = cf
        .frame()
        .elements()
        .all(|c| !f.is_bottom(map.apply(c)) || cf.frame().is_bottom(c));
    let injective = map.is_injective();
    Ok(Gamma {
        table: map.table,
        dense,
        injective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{check_morphism, find_isomorphism, LatticeMap, MorphismKind};
    use crate::instances::{discrete, indiscrete};
    use crate::presentation::DEFAULT_BUDGET;
    use crate::uniform::{check_reflection_lemma, uniform_reflection};

    #[test]
    fn relation_families_on_discrete_two() {
        let inst = discrete(2);
        let p = completion_presentation(&inst.frame, &inst.base);
        let render: Vec<(String, String)> = p
            .relations()
            .iter()
            .map(|r| (r.label.clone(), p.render_relation(r)))
            .collect();
        let find = |label: &str| -> Vec<&str> {
            render
                .iter()
                .filter(|(l, _)| l == label)
                .map(|(_, r)| r.as_str())
                .collect()
        };
        assert_eq!(find("(i)"), vec!["[1∈F] ≤ ⊤", "⊤ ≤ [1∈F]"]);
        assert_eq!(find("(iv) U0"), vec!["⊤ ≤ [{a}∈F] ∨ [{b}∈F]"]);
        assert_eq!(find("(iii)"), vec!["[0∈F] ≤ ⊥"]);
        // ⊲ is ≤ here, so (v) at {a} only lists elements below {a}
        assert_eq!(find("(v) {a}"), vec!["[{a}∈F] ≤ [0∈F] ∨ [{a}∈F]"]);
    }

    #[test]
    fn completion_site_of_discrete_two() {
        let inst = discrete(2);
        let p = completion_presentation(&inst.frame, &inst.base);
        let site = build_site(&p).unwrap();
        let mut names = site.names().to_vec();
        names.sort();
        assert_eq!(names, vec!["[0∈F]", "[1∈F]", "[{a}∈F]", "[{b}∈F]"]);
    }

    #[test]
    fn discrete_completions_are_the_original() {
        for n in 1..=3 {
            let inst = discrete(n);
            let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
            assert_eq!(cf.frame().len(), 1 << n);
            assert!(find_isomorphism(cf.frame(), &inst.frame).is_some());
            let g = gamma_hom(&cf, &inst.frame, &inst.base).unwrap();
            assert!(g.dense && g.injective);
            let map = LatticeMap::new(cf.frame(), &inst.frame, g.table.clone()).unwrap();
            assert!(check_morphism(&map, MorphismKind::FrameHom).holds());
            let a = inst.frame.elem(if n == 1 { "1" } else { "{a}" }).unwrap();
            assert_eq!(g.table[cf.gen(a)], a);
            assert!(validate_uniformity(&cf.base, cf.frame()).is_uniform());
            let refl = uniform_reflection(&inst.frame, &inst.base).unwrap();
            let mut image = g.table.clone();
            image.sort_unstable();
            assert_eq!(image, refl.elements);
        }
    }

    #[test]
    fn indiscrete_completion_collapses() {
        let inst = indiscrete(2);
        let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
        assert_eq!(cf.frame().len(), 2);
        let g = gamma_hom(&cf, &inst.frame, &inst.base).unwrap();
        let a = inst.frame.elem("{a}").unwrap();
        assert_eq!(g.table[cf.gen(a)], inst.frame.bottom());
        assert_eq!(g.table[cf.frame().top()], inst.frame.top());
        assert!(g.dense);
    }

    #[test]
    fn completion_is_idempotent() {
        for n in 1..=3 {
            let inst = discrete(n);
            let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
            let cc = completion_frame(cf.frame(), &cf.base, DEFAULT_BUDGET).unwrap();
            assert!(find_isomorphism(cc.frame(), cf.frame()).is_some());
        }
    }

    #[test]
    fn reflection_lemma_for_gamma() {
        for inst in [discrete(1), discrete(2), discrete(3), indiscrete(2)] {
            let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
            let g = gamma_hom(&cf, &inst.frame, &inst.base).unwrap();
            let r = check_reflection_lemma(cf.frame(), &cf.base, &inst.frame, &g.table);
            assert!(r.holds(), "{}: {r:?}", inst.name);
        }
    }

    #[test]
    fn covers_join_to_top_in_the_completion() {
        let inst = discrete(3);
        let cf = completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap();
        for u in &cf.base.covers {
            assert!(u.is_cover(cf.frame()));
        }
    }
}
