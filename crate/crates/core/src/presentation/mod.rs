//! Frame presentations by generators and relations.
//!
//! A [`Presentation`] has finitely many named generators, an optional
//! preorder on them, and relations `lhs ≤ rhs` between [`Expr`]s. Families of
//! generators and relations indexed over ℕ are described by
//! [`GeneratorFamily`] and [`RelationSchema`] and become finite once
//! instantiated at a [`Horizon`].

mod expr;
mod induced;
mod models;
mod site;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use expr::{Expr, GenId};
pub use induced::{induced_hom, Induced, InducedHom, RelationViolation};
pub use models::ModelFrame;
pub use site::{
    build_site, c_ideal_frame, coverage_iso_check, suplattice_of_site, CIdealFrame, CoverRule,
    CoverageReport, Site, SupLattice, DEFAULT_BUDGET,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("relation `{0}` is not of site form")]
    NotSiteForm(String),
    #[error("size budget of {limit} exceeded")]
    SizeBudgetExceeded { limit: usize },
    #[error("presentation has relation schemas; a horizon is required")]
    HorizonRequired,
    #[error("horizon must be at least 2, got {0}")]
    InvalidHorizon(usize),
    #[error("coverage hypothesis fails at {below} below the rule {rule}")]
    HypothesisViolated { below: String, rule: String },
    #[error("not a meet-semilattice: {0}")]
    NotASemilattice(String),
}

/// Truncation bound for ℕ-indexed data: every ℕ parameter ranges over `0..K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Horizon(usize);

impl Horizon {
    pub fn new(k: usize) -> Result<Horizon, PresentationError> {
        if k < 2 {
            Err(PresentationError::InvalidHorizon(k))
        } else {
            Ok(Horizon(k))
        }
    }

    pub fn k(self) -> usize {
        self.0
    }

    pub fn next(self) -> Horizon {
        Horizon(self.0 + 1)
    }
}

impl fmt::Display for Horizon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}", self.0)
    }
}

/// A relation `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub lhs: Expr,
    pub rhs: Expr,
    pub label: String,
}

/// A relation whose generators are referred to by name, as produced by
/// schema templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedRelation {
    pub lhs: Vec<Vec<String>>,
    pub rhs: Vec<Vec<String>>,
}

/// Parameter kinds of generator families and relation schemas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    /// A natural number, truncated to `0..K`.
    Nat,
    /// An index into a base of covers of the given size, truncated to `0..K`.
    Base(usize),
    /// An index into a finite set of the given size, never truncated.
    Finite(usize),
}

impl Param {
    fn range(self, h: Horizon) -> usize {
        match self {
            Param::Nat => h.k(),
            Param::Base(m) => m.min(h.k()),
            Param::Finite(m) => m,
        }
    }
}

type Namer = Arc<dyn Fn(&[usize]) -> String + Send + Sync>;
type Template = Arc<dyn Fn(&[usize], Horizon) -> Vec<NamedRelation> + Send + Sync>;

/// A family of generators indexed by parameter tuples.
#[derive(Clone)]
pub struct GeneratorFamily {
    pub name: String,
    pub params: Vec<Param>,
    namer: Namer,
}

impl GeneratorFamily {
    pub fn new(
        name: &str,
        params: Vec<Param>,
        namer: impl Fn(&[usize]) -> String + Send + Sync + 'static,
    ) -> GeneratorFamily {
        GeneratorFamily {
            name: name.to_string(),
            params,
            namer: Arc::new(namer),
        }
    }

    pub fn generator_name(&self, args: &[usize]) -> String {
        (self.namer)(args)
    }
}

/// A family of relations indexed by parameter tuples. The template may emit
/// zero or more relations per tuple and sees the horizon, so that ℕ-indexed
/// joins can be truncated to `k < K`.
#[derive(Clone)]
pub struct RelationSchema {
    pub name: String,
    pub params: Vec<Param>,
    template: Template,
}

impl RelationSchema {
    pub fn new(
        name: &str,
        params: Vec<Param>,
        template: impl Fn(&[usize], Horizon) -> Vec<NamedRelation> + Send + Sync + 'static,
    ) -> RelationSchema {
        RelationSchema {
            name: name.to_string(),
            params,
            template: Arc::new(template),
        }
    }

    /// All instances at horizon `h`, labelled `name[p1,p2,…]`.
    pub fn instances(&self, h: Horizon) -> Vec<(String, NamedRelation)> {
        let mut out = Vec::new();
        for args in tuples(&self.params, h) {
            for rel in (self.template)(&args, h) {
                let label = format!(
                    "{}[{}]",
                    self.name,
                    args.iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                );
                out.push((label, rel));
            }
        }
        out
    }
}

fn tuples(params: &[Param], h: Horizon) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for p in params {
        let r = p.range(h);
        let mut next = Vec::with_capacity(out.len() * r);
        for t in &out {
            for i in 0..r {
                let mut t2 = t.clone();
                t2.push(i);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Generators, an optional preorder, relations, and ℕ-indexed schemas.
#[derive(Clone, Default)]
pub struct Presentation {
    generators: Vec<String>,
    index: HashMap<String, GenId>,
    preorder: Vec<(GenId, GenId)>,
    relations: Vec<Relation>,
    families: Vec<GeneratorFamily>,
    schemas: Vec<RelationSchema>,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presentation")
            .field("generators", &self.generators)
            .field("relations", &self.relations.len())
            .field("schemas", &self.schemas.len())
            .finish()
    }
}

impl Presentation {
    pub fn new() -> Presentation {
        Presentation::default()
    }

    pub fn add_generator(&mut self, name: &str) -> Result<GenId, PresentationError> {
        if self.index.contains_key(name) {
            return Err(PresentationError::DuplicateGenerator(name.to_string()));
        }
        let id = self.generators.len();
        self.generators.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn with_generators<S: AsRef<str>>(names: &[S]) -> Result<Presentation, PresentationError> {
        let mut p = Presentation::new();
        for n in names {
            p.add_generator(n.as_ref())?;
        }
        Ok(p)
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Result<GenId, PresentationError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))
    }

    /// Declares `lo ≤ hi` in the generator preorder.
    pub fn add_order(&mut self, lo: GenId, hi: GenId) {
        self.preorder.push((lo, hi));
    }

    pub fn preorder(&self) -> &[(GenId, GenId)] {
        &self.preorder
    }

    pub fn add_relation(&mut self, lhs: Expr, rhs: Expr, label: &str) {
        self.relations.push(Relation {
            lhs,
            rhs,
            label: label.to_string(),
        });
    }

    /// Adds `lhs ≤ rhs` and `rhs ≤ lhs`.
    pub fn add_equation(&mut self, lhs: Expr, rhs: Expr, label: &str) {
        self.add_relation(lhs.clone(), rhs.clone(), label);
        self.add_relation(rhs, lhs, label);
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn add_family(&mut self, family: GeneratorFamily) {
        self.families.push(family);
    }

    pub fn add_schema(&mut self, schema: RelationSchema) {
        self.schemas.push(schema);
    }

    pub fn schemas(&self) -> &[RelationSchema] {
        &self.schemas
    }

    pub fn is_schematic(&self) -> bool {
        !self.families.is_empty() || !self.schemas.is_empty()
    }

    /// Builds an expression from terms of generator names.
    pub fn expr<S: AsRef<str>>(&self, terms: &[Vec<S>]) -> Result<Expr, PresentationError> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let mut m = Vec::with_capacity(t.len());
            for g in t {
                m.push(self.generator(g.as_ref())?);
            }
            out.push(m);
        }
        Ok(Expr::from_terms(out))
    }

    pub fn render(&self, e: &Expr) -> String {
        e.render(&self.generators)
    }

    pub fn render_relation(&self, r: &Relation) -> String {
        format!("{} ≤ {}", self.render(&r.lhs), self.render(&r.rhs))
    }

    /// The finite presentation obtained by instantiating every family and
    /// schema at `h`. Fixed generators keep their ids; family generators
    /// follow in family order, parameter tuples in lexicographic order.
    pub fn instantiate(&self, h: Horizon) -> Result<Presentation, PresentationError> {
        let mut p = Presentation {
            generators: self.generators.clone(),
            index: self.index.clone(),
            preorder: self.preorder.clone(),
            relations: self.relations.clone(),
            families: Vec::new(),
            schemas: Vec::new(),
        };
        for fam in &self.families {
            for args in tuples(&fam.params, h) {
                p.add_generator(&fam.generator_name(&args))?;
            }
        }
        for schema in &self.schemas {
            for (label, rel) in schema.instances(h) {
                let lhs = p.expr(&rel.lhs)?;
                let rhs = p.expr(&rel.rhs)?;
                p.add_relation(lhs, rhs, &label);
            }
        }
        Ok(p)
    }

    /// Splits every relation with a join on the left into one relation per
    /// joinand, and drops relations whose left side is BOTTOM.
    pub fn normalized(&self) -> Presentation {
        let mut p = self.clone();
        p.relations = self
            .relations
            .iter()
            .flat_map(|r| {
                r.lhs.terms().iter().map(move |t| Relation {
                    lhs: Expr::meet_of(t.iter().copied()),
                    rhs: r.rhs.clone(),
                    label: r.label.clone(),
                })
            })
            .collect();
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_instantiation_is_monotone_in_horizon() {
        let mut p = Presentation::new();
        p.add_family(GeneratorFamily::new("x", vec![Param::Nat], |a| {
            format!("x{}", a[0])
        }));
        p.add_schema(RelationSchema::new(
            "chain",
            vec![Param::Nat, Param::Nat],
            |a, _| {
                if a[0] < a[1] {
                    vec![NamedRelation {
                        lhs: vec![vec![format!("x{}", a[1])]],
                        rhs: vec![vec![format!("x{}", a[0])]],
                    }]
                } else {
                    vec![]
                }
            },
        ));
        let p2 = p.instantiate(Horizon::new(2).unwrap()).unwrap();
        let p3 = p.instantiate(Horizon::new(3).unwrap()).unwrap();
        assert_eq!(p2.generators().len(), 2);
        assert_eq!(p3.generators().len(), 3);
        for r in p2.relations() {
            let lhs = p3.expr(&[vec![p2.render(&r.lhs)]]).unwrap();
            assert!(p3.relations().iter().any(|s| s.lhs == lhs && s.label == r.label));
        }
        assert!(Horizon::new(1).is_err());
    }

    #[test]
    fn normalization_splits_left_joins() {
        let mut p = Presentation::with_generators(&["a", "b", "c"]).unwrap();
        let lhs = p.expr(&[vec!["a"], vec!["b"]]).unwrap();
        let rhs = p.expr(&[vec!["c"]]).unwrap();
        p.add_relation(lhs, rhs, "r");
        let n = p.normalized();
        assert_eq!(n.relations().len(), 2);
        assert!(n.relations().iter().all(|r| r.lhs.terms().len() == 1));
    }
}
