//! Covers and uniformities on finite frames.

use std::fmt;

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::UniformError;
use crate::frame::{Elem, FiniteFrame};

/// A finite set of opens, kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover {
    members: Vec<Elem>,
}

impl Cover {
    pub fn new<I: IntoIterator<Item = Elem>>(members: I) -> Cover {
        let mut members: Vec<Elem> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Cover { members }
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn is_cover(&self, f: &FiniteFrame) -> bool {
        f.join_all(self.members.iter().copied()) == f.top()
    }

    /// Every member is nonzero.
    pub fn is_strong(&self, f: &FiniteFrame) -> bool {
        self.members.iter().all(|&u| !f.is_bottom(u))
    }

    /// The maximal members. Stars and refinement only depend on these.
    pub fn reduced(&self, f: &FiniteFrame) -> Cover {
        Cover::new(
            self.members
                .iter()
                .copied()
                .filter(|&u| self.members.iter().all(|&v| v == u || !f.leq(u, v))),
        )
    }

    pub fn render(&self, f: &FiniteFrame) -> String {
        let names: Vec<&str> = self.members.iter().map(|&u| f.name(u)).collect();
        format!("{{{}}}", names.join(", "))
    }
}

/// `st(a, U)`: the join of the members of `U` meeting `a`.
pub fn star(f: &FiniteFrame, a: Elem, u: &Cover) -> Elem {
    f.join_all(u.members.iter().copied().filter(|&m| f.overlaps(a, m)))
}

/// `U⋆ = {st(u, U) : u ∈ U}`.
pub fn star_cover(f: &FiniteFrame, u: &Cover) -> Cover {
    Cover::new(u.members.iter().map(|&m| star(f, m, u)))
}

/// `C1 ≤ C2`: every member of `C1` lies below some member of `C2`.
pub fn refines(f: &FiniteFrame, c1: &Cover, c2: &Cover) -> bool {
    c1.members
        .iter()
        .all(|&u| c2.members.iter().any(|&v| f.leq(u, v)))
}

/// An indexed family of covers generating a uniformity, with for each index
/// `j` a claimed `j'` such that `U_{j'}⋆ ≤ U_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityBase {
    pub covers: Vec<Cover>,
    pub star_witness: Vec<usize>,
}

impl UniformityBase {
    /// Uses the first listed star refinement of each cover as its witness, or
    /// the cover's own index when there is none (validation will flag it).
    pub fn with_found_witnesses(f: &FiniteFrame, covers: Vec<Cover>) -> UniformityBase {
        let star_witness = (0..covers.len())
            .map(|j| {
                (0..covers.len())
                    .find(|&k| refines(f, &star_cover(f, &covers[k]), &covers[j]))
                    .unwrap_or(j)
            })
            .collect();
        UniformityBase {
            covers,
            star_witness,
        }
    }

    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }
}

/// `a ⊲ b` with the least witnessing index: some `U_j` has `st(a, U_j) ≤ b`.
pub fn uniformly_below(f: &FiniteFrame, a: Elem, b: Elem, base: &UniformityBase) -> Option<usize> {
    base.covers
        .iter()
        .position(|u| f.leq(star(f, a, u), b))
}

/// The relation `⊲` as a table: `below[b]` holds every `a ⊲ b`.
pub fn below_table(f: &FiniteFrame, base: &UniformityBase) -> Vec<FixedBitSet> {
    let n = f.len();
    let stars: Vec<Vec<Elem>> = base
        .covers
        .iter()
        .map(|u| f.elements().map(|a| star(f, a, u)).collect())
        .collect();
    (0..n)
        .map(|b| {
            let mut s = FixedBitSet::with_capacity(n);
            for a in 0..n {
                if stars.iter().any(|st| f.leq(st[a], b)) {
                    s.insert(a);
                }
            }
            s
        })
        .collect()
}

/// `⋁ {v : v ⊲ u}` for every `u`.
pub fn regular_interiors(f: &FiniteFrame, base: &UniformityBase) -> Vec<Elem> {
    below_table(f, base)
        .iter()
        .map(|below| f.join_all(below.ones()))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniformityViolation {
    NotACover { index: usize },
    NotStrong { index: usize },
    NotDirected { first: usize, second: usize },
    BadWitness { index: usize, witness: usize },
}

impl fmt::Display for UniformityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniformityViolation::NotACover { index } => write!(f, "U{index} does not join to top"),
            UniformityViolation::NotStrong { index } => write!(f, "U{index} has a zero member"),
            UniformityViolation::NotDirected { first, second } => {
                write!(f, "no listed cover refines both U{first} and U{second}")
            }
            UniformityViolation::BadWitness { index, witness } => {
                write!(f, "U{witness}⋆ does not refine U{index}")
            }
        }
    }
}

/// Outcome of [`validate_uniformity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniformityReport {
    pub violations: Vec<UniformityViolation>,
    /// Opens `u` with `u ≠ ⋁_{v⊲u} v`; empty iff the locale is uniform.
    pub irregular: Vec<Elem>,
}

impl UniformityReport {
    /// Pre-uniform: every check on the base passed.
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn is_uniform(&self) -> bool {
        self.is_valid() && self.irregular.is_empty()
    }
}

pub fn validate_uniformity(base: &UniformityBase, f: &FiniteFrame) -> UniformityReport {
    let mut violations = Vec::new();
    for (j, u) in base.covers.iter().enumerate() {
        if !u.is_cover(f) {
            violations.push(UniformityViolation::NotACover { index: j });
        }
        if !u.is_strong(f) {
            violations.push(UniformityViolation::NotStrong { index: j });
        }
    }
    for i in 0..base.len() {
        for j in (i + 1)..base.len() {
            let directed = base.covers.iter().any(|w| {
                refines(f, w, &base.covers[i]) && refines(f, w, &base.covers[j])
            });
            if !directed {
                violations.push(UniformityViolation::NotDirected { first: i, second: j });
            }
        }
    }
    if base.star_witness.len() != base.len() {
        violations.push(UniformityViolation::BadWitness {
            index: base.star_witness.len().min(base.len()),
            witness: usize::MAX,
        });
    }
    for (j, &w) in base.star_witness.iter().enumerate().take(base.len()) {
        let ok = w < base.len()
            && refines(f, &star_cover(f, &base.covers[w]), &base.covers[j]);
        if !ok {
            violations.push(UniformityViolation::BadWitness { index: j, witness: w });
        }
    }
    let interiors = regular_interiors(f, base);
    let irregular = f.elements().filter(|&u| interiors[u] != u).collect();
    UniformityReport {
        violations,
        irregular,
    }
}

/// The subframe of opens `u` with `u = ⋁_{v⊲u} v`, with the inclusion.
#[derive(Debug, Clone)]
pub struct UniformReflection {
    pub frame: FiniteFrame,
    pub elements: Vec<Elem>,
}

/// Computes the subframe and verifies it is closed under finite meets and
/// joins in `f`.
pub fn uniform_reflection(
    f: &FiniteFrame,
    base: &UniformityBase,
) -> Result<UniformReflection, UniformError> {
    let interiors = regular_interiors(f, base);
    let elements: Vec<Elem> = f.elements().filter(|&u| interiors[u] == u).collect();
    let fixed = |u: Elem| interiors[u] == u;
    for &a in &elements {
        for &b in &elements {
            if !fixed(f.meet(a, b)) || !fixed(f.join(a, b)) {
                return Err(UniformError::NotASubframe {
                    a: f.name(a).to_string(),
                    b: f.name(b).to_string(),
                });
            }
        }
    }
    if !fixed(f.top()) || !fixed(f.bottom()) {
        return Err(UniformError::NotASubframe {
            a: f.name(f.top()).to_string(),
            b: f.name(f.bottom()).to_string(),
        });
    }
    let frame = f.restrict(&elements).map_err(UniformError::Frame)?;
    Ok(UniformReflection { frame, elements })
}

/// The uniformity on `y` induced along a frame map `e: x → y`: the covers
/// `e[U_j]` with zero members dropped, keeping the star witnesses.
pub fn initial_base(y: &FiniteFrame, e: &[Elem], base: &UniformityBase) -> UniformityBase {
    UniformityBase {
        covers: base
            .covers
            .iter()
            .map(|u| Cover::new(u.members().iter().map(|&m| e[m]).filter(|&m| !y.is_bottom(m))))
            .collect(),
        star_witness: base.star_witness.clone(),
    }
}

/// Outcome of [`check_reflection_lemma`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionLemmaReport {
    /// The source uniformity is uniform and the map is injective.
    pub hypotheses_hold: bool,
    /// Elements of the image that are not fixed by `⋁_{b⊲a} b`.
    pub image_not_fixed: Vec<Elem>,
    /// Fixed elements outside the image.
    pub fixed_not_in_image: Vec<Elem>,
}

impl ReflectionLemmaReport {
    pub fn holds(&self) -> bool {
        self.hypotheses_hold && self.image_not_fixed.is_empty() && self.fixed_not_in_image.is_empty()
    }
}

/// For an injective frame map `e: x → y` out of a uniform `x`, with `y`
/// carrying the initial uniformity, compares the image of `e` with the opens
/// `a = ⋁_{b⊲a} b` of `y`.
pub fn check_reflection_lemma(
    x: &FiniteFrame,
    base: &UniformityBase,
    y: &FiniteFrame,
    e: &[Elem],
) -> ReflectionLemmaReport {
    let uniform = validate_uniformity(base, x).is_uniform();
    let injective = {
        let mut seen = e.to_vec();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == e.len()
    };
    let init = initial_base(y, e, base);
    let interiors = regular_interiors(y, &init);
    let mut in_image = vec![false; y.len()];
    for &t in e {
        in_image[t] = true;
    }
    ReflectionLemmaReport {
        hypotheses_hold: uniform && injective,
        image_not_fixed: y
            .elements()
            .filter(|&a| in_image[a] && interiors[a] != a)
            .collect(),
        fixed_not_in_image: y
            .elements()
            .filter(|&a| !in_image[a] && interiors[a] == a)
            .collect(),
    }
}

/// A finite metric space with exact rational distances.
#[derive(Debug, Clone)]
pub struct FiniteMetric {
    pub points: Vec<String>,
    pub dist: Vec<Vec<BigRational>>,
}

impl FiniteMetric {
    pub fn check(&self) -> Result<(), UniformError> {
        let n = self.points.len();
        if n == 0 {
            return Err(UniformError::EmptySpace);
        }
        if n > 15 {
            return Err(UniformError::TooManyPoints(n));
        }
        if self.dist.len() != n || self.dist.iter().any(|r| r.len() != n) {
            return Err(UniformError::BadMetric("distance table has the wrong shape".into()));
        }
        for i in 0..n {
            if !self.dist[i][i].is_zero() {
                return Err(UniformError::BadMetric(format!("d({0},{0}) ≠ 0", self.points[i])));
            }
            for j in 0..n {
                if self.dist[i][j].is_negative() || self.dist[i][j] != self.dist[j][i] {
                    return Err(UniformError::BadMetric(format!(
                        "d({},{}) is negative or asymmetric",
                        self.points[i], self.points[j]
                    )));
                }
                if i != j && self.dist[i][j].is_zero() {
                    return Err(UniformError::BadMetric(format!(
                        "distinct points {} and {} at distance 0",
                        self.points[i], self.points[j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// The discrete locale on the points.
    pub fn frame(&self) -> FiniteFrame {
        FiniteFrame::powerset(&self.points)
    }
}

/// For each `ε_j`, the cover by maximal sets of diameter `< ε_j`, with star
/// witnesses searched among `j' ≥ j`. Returns the frame of all subsets.
pub fn metric_uniformity(
    space: &FiniteMetric,
    schedule: &[BigRational],
) -> Result<(FiniteFrame, UniformityBase), UniformError> {
    space.check()?;
    if schedule.is_empty() {
        return Err(UniformError::EmptySchedule);
    }
    for (j, e) in schedule.iter().enumerate() {
        if !e.is_positive() {
            return Err(UniformError::NonPositiveRadius(j));
        }
        if j > 0 && e >= &schedule[j - 1] {
            return Err(UniformError::NotDecreasing(j));
        }
    }
    let n = space.points.len();
    let f = space.frame();
    let covers: Vec<Cover> = schedule
        .iter()
        .map(|eps| {
            let small: Vec<usize> = (1..(1usize << n))
                .filter(|&m| {
                    (0..n).all(|i| {
                        m >> i & 1 == 0
                            || (0..n).all(|j| m >> j & 1 == 0 || &space.dist[i][j] < eps)
                    })
                })
                .collect();
            let maximal = small
                .iter()
                .copied()
                .filter(|&m| small.iter().all(|&o| o == m || o & m != m));
            // powerset elements are indexed by their bitmask
            Cover::new(maximal)
        })
        .collect();
    let mut star_witness = Vec::with_capacity(covers.len());
    for j in 0..covers.len() {
        let w = (j..covers.len())
            .find(|&k| refines(&f, &star_cover(&f, &covers[k]), &covers[j]))
            .ok_or(UniformError::NoStarRefinement(j))?;
        star_witness.push(w);
    }
    Ok((
        f,
        UniformityBase {
            covers,
            star_witness,
        },
    ))
}

/// Every strong cover of `f` whose members form an antichain. Any strong
/// cover has the same stars and refinements as its antichain of maximal
/// members, so these represent all strong covers.
pub fn antichain_strong_covers(f: &FiniteFrame) -> Vec<Cover> {
    let nonzero: Vec<Elem> = f.elements().filter(|&u| !f.is_bottom(u)).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(
        f: &FiniteFrame,
        nonzero: &[Elem],
        pos: usize,
        cur: &mut Vec<Elem>,
        out: &mut Vec<Cover>,
    ) {
        if pos == nonzero.len() {
            if f.join_all(cur.iter().copied()) == f.top() {
                out.push(Cover::new(cur.iter().copied()));
            }
            return;
        }
        go(f, nonzero, pos + 1, cur, out);
        let x = nonzero[pos];
        if cur.iter().all(|&y| !f.leq(x, y) && !f.leq(y, x)) {
            cur.push(x);
            go(f, nonzero, pos + 1, cur, out);
            cur.pop();
        }
    }
    go(f, &nonzero, 0, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::{check_morphism, LatticeMap, MorphismKind};
    use num_bigint::BigInt;

    fn d2() -> FiniteFrame {
        FiniteFrame::powerset(&["a", "b"])
    }

    fn el(f: &FiniteFrame, n: &str) -> Elem {
        f.elem(n).unwrap()
    }

    fn singleton_base(f: &FiniteFrame) -> UniformityBase {
        UniformityBase {
            covers: vec![Cover::new([el(f, "{a}"), el(f, "{b}")])],
            star_witness: vec![0],
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn stars_on_discrete_two() {
        let f = d2();
        let (a, b) = (el(&f, "{a}"), el(&f, "{b}"));
        let singles = Cover::new([a, b]);
        assert_eq!(star(&f, f.bottom(), &singles), f.bottom());
        assert_eq!(star(&f, a, &singles), a);
        assert_eq!(star(&f, a, &Cover::new([a, b, f.top()])), f.top());
        assert_eq!(star_cover(&f, &singles), singles);
        let whole = Cover::new([f.top()]);
        assert_eq!(star_cover(&f, &whole), whole);
    }

    #[test]
    fn refinement_on_discrete_two() {
        let f = d2();
        let (a, b) = (el(&f, "{a}"), el(&f, "{b}"));
        let singles = Cover::new([a, b]);
        assert!(refines(&f, &singles, &singles));
        assert!(refines(&f, &singles, &Cover::new([f.top(), a])));
        assert!(!refines(&f, &Cover::new([f.top()]), &singles));
    }

    #[test]
    fn uniformly_below_on_discrete_two() {
        let f = d2();
        let base = singleton_base(&f);
        for a in f.elements() {
            assert_eq!(uniformly_below(&f, a, a, &base), Some(0));
        }
        let indiscrete = UniformityBase {
            covers: vec![Cover::new([f.top()])],
            star_witness: vec![0],
        };
        for base in [&base, &indiscrete] {
            assert_eq!(uniformly_below(&f, f.top(), el(&f, "{a}"), base), None);
        }
    }

    #[test]
    fn validation_examples() {
        let f = d2();
        let r = validate_uniformity(&singleton_base(&f), &f);
        assert!(r.is_uniform());
        let indiscrete = UniformityBase {
            covers: vec![Cover::new([f.top()])],
            star_witness: vec![0],
        };
        let r = validate_uniformity(&indiscrete, &f);
        assert!(r.is_valid());
        assert!(!r.is_uniform());
        assert!(r.irregular.contains(&el(&f, "{a}")));
        let with_zero = UniformityBase {
            covers: vec![Cover::new([f.top(), f.bottom()])],
            star_witness: vec![0],
        };
        assert!(validate_uniformity(&with_zero, &f)
            .violations
            .contains(&UniformityViolation::NotStrong { index: 0 }));
    }

    #[test]
    fn reflection_examples() {
        let f = d2();
        assert_eq!(uniform_reflection(&f, &singleton_base(&f)).unwrap().frame.len(), 4);
        let indiscrete = UniformityBase {
            covers: vec![Cover::new([f.top()])],
            star_witness: vec![0],
        };
        let r = uniform_reflection(&f, &indiscrete).unwrap();
        assert_eq!(r.elements, vec![f.bottom(), f.top()]);
    }

    #[test]
    fn regular_interior_is_a_frame_hom_for_discrete_uniformity() {
        let f = d2();
        let table = regular_interiors(&f, &singleton_base(&f));
        let map = LatticeMap::new(&f, &f, table).unwrap();
        assert!(check_morphism(&map, MorphismKind::FrameHom).holds());
    }

    #[test]
    fn discrete_metric_covers() {
        let space = FiniteMetric {
            points: vec!["a".into(), "b".into()],
            dist: vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]],
        };
        let (f, base) = metric_uniformity(&space, &[q(2, 1), q(1, 2)]).unwrap();
        assert_eq!(base.covers[0], Cover::new([f.top()]));
        assert_eq!(base.covers[1], Cover::new([el(&f, "{a}"), el(&f, "{b}")]));
        assert!(validate_uniformity(&base, &f).is_valid());
        // a coarse cover alone has a star refinement (itself)
        assert!(metric_uniformity(&space, &[q(2, 1)]).is_ok());
    }

    #[test]
    fn metric_without_listed_star_refinement() {
        // points 0, 1, 2 on a line; ε = 3/2 joins neighbours only, stars do not refine
        let pts = ["x", "y", "z"];
        let dist = (0..3)
            .map(|i: i64| (0..3).map(|j: i64| q((i - j).abs(), 1)).collect())
            .collect();
        let space = FiniteMetric {
            points: pts.iter().map(|s| s.to_string()).collect(),
            dist,
        };
        assert_eq!(
            metric_uniformity(&space, &[q(3, 2)]).unwrap_err(),
            UniformError::NoStarRefinement(0)
        );
        assert!(metric_uniformity(&space, &[q(3, 2), q(1, 2)]).is_ok());
    }

    #[test]
    fn antichain_covers_of_discrete_two() {
        let f = d2();
        let covers = antichain_strong_covers(&f);
        assert_eq!(covers.len(), 2);
    }
}
