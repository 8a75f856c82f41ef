//! Sites and their frames of C-ideals.
//!
//! A site is a finite meet-semilattice `S` with covering rules `s ◁ A`. The
//! frame it presents is realized as the lattice of C-ideals: downsets of `S`
//! closed under every (meet-saturated) rule. This realization is a choice of
//! this crate; any other realization of the presented frame is isomorphic.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;

use super::{GenId, Presentation, PresentationError};
use crate::frame::{Elem, FiniteFrame};

/// Default bound on the number of closed sets an enumeration may produce.
pub const DEFAULT_BUDGET: usize = 1 << 20;

/// A covering rule `elem ◁ family`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverRule {
    pub elem: Elem,
    pub family: Vec<Elem>,
    pub label: String,
}

/// A finite meet-semilattice with a coverage.
#[derive(Debug, Clone)]
pub struct Site {
    names: Vec<String>,
    down: Vec<FixedBitSet>,
    meet: Vec<Elem>,
    top: Option<Elem>,
    rules: Vec<CoverRule>,
    saturated: Vec<(Elem, Vec<Elem>)>,
    gen_sets: Option<Vec<Vec<GenId>>>,
    generator_elems: Option<Vec<Elem>>,
}

impl Site {
    /// Builds a site from an explicit order (`leq[a][b]` iff `a ≤ b`) and rules
    /// `(s, A, label)`. Family members not below `s` are replaced by their
    /// meet with `s`, which presents the same frame.
    pub fn new(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        rules: Vec<(Elem, Vec<Elem>, String)>,
    ) -> Result<Site, PresentationError> {
        let n = names.len();
        if n == 0 || leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(PresentationError::NotASemilattice(
                "order does not match the carrier".into(),
            ));
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if leq[a][b] {
                    down[b].insert(a);
                }
            }
        }
        for a in 0..n {
            if !down[a].contains(a) {
                return Err(PresentationError::NotASemilattice(format!(
                    "not reflexive at {}",
                    names[a]
                )));
            }
            for b in down[a].ones() {
                if !down[b].is_subset(&down[a]) {
                    return Err(PresentationError::NotASemilattice(format!(
                        "not transitive below {}",
                        names[a]
                    )));
                }
                if b != a && down[b].contains(a) {
                    return Err(PresentationError::NotASemilattice(format!(
                        "{} and {} are distinct but equivalent",
                        names[a], names[b]
                    )));
                }
            }
        }
        let sizes: Vec<usize> = down.iter().map(|d| d.count_ones(..)).collect();
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let mut lower = down[a].clone();
                lower.intersect_with(&down[b]);
                let target = lower.count_ones(..);
                let m = lower.ones().find(|&g| sizes[g] == target).ok_or_else(|| {
                    PresentationError::NotASemilattice(format!(
                        "no meet of {} and {}",
                        names[a], names[b]
                    ))
                })?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let top = (0..n).find(|&t| sizes[t] == n);
        let mut site = Site {
            names,
            down,
            meet,
            top,
            rules: Vec::new(),
            saturated: Vec::new(),
            gen_sets: None,
            generator_elems: None,
        };
        site.rules = rules
            .into_iter()
            .map(|(s, fam, label)| {
                let mut family: Vec<Elem> = fam.into_iter().map(|a| site.meet(a, s)).collect();
                family.sort_unstable();
                family.dedup();
                CoverRule {
                    elem: s,
                    family,
                    label,
                }
            })
            .collect();
        site.saturate();
        Ok(site)
    }

    /// Adds `s∧t ◁ {a∧t : a ∈ A}` for every rule and every `t`.
    fn saturate(&mut self) {
        let n = self.len();
        let mut seen: HashSet<(Elem, Vec<Elem>)> = HashSet::new();
        for r in &self.rules {
            for t in 0..n {
                let s = self.meet(r.elem, t);
                let mut fam: Vec<Elem> = r.family.iter().map(|&a| self.meet(a, t)).collect();
                fam.sort_unstable();
                fam.dedup();
                if fam.contains(&s) {
                    continue;
                }
                seen.insert((s, fam));
            }
        }
        let mut sat: Vec<(Elem, Vec<Elem>)> = seen.into_iter().collect();
        sat.sort();
        self.saturated = sat;
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, s: Elem) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.down[b].contains(a)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.names.len() + b]
    }

    pub fn top(&self) -> Option<Elem> {
        self.top
    }

    pub fn down_set(&self, a: Elem) -> &FixedBitSet {
        &self.down[a]
    }

    /// The rules as given (after meeting families with their element).
    pub fn rules(&self) -> &[CoverRule] {
        &self.rules
    }

    /// The meet-saturated rules, excluding trivially satisfied ones.
    pub fn saturated_rules(&self) -> &[(Elem, Vec<Elem>)] {
        &self.saturated
    }

    /// For sites built from a presentation: the generators whose meet each
    /// element is.
    pub fn generator_sets(&self) -> Option<&[Vec<GenId>]> {
        self.gen_sets.as_deref()
    }

    /// For sites built from a presentation: the element of each generator.
    pub fn generator_elements(&self) -> Option<&[Elem]> {
        self.generator_elems.as_deref()
    }

    pub fn render_rule(&self, elem: Elem, family: &[Elem]) -> String {
        let fam: Vec<&str> = family.iter().map(|&a| self.name(a)).collect();
        format!("{} ◁ {{{}}}", self.name(elem), fam.join(", "))
    }

    fn close_with(&self, rules: &[(Elem, Vec<Elem>)], set: &mut FixedBitSet) {
        let members: Vec<Elem> = set.ones().collect();
        for s in members {
            set.union_with(&self.down[s]);
        }
        loop {
            let mut changed = false;
            for (s, fam) in rules {
                if !set.contains(*s) && fam.iter().all(|&a| set.contains(a)) {
                    set.union_with(&self.down[*s]);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Least C-ideal containing `set`.
    pub fn close(&self, set: &mut FixedBitSet) {
        self.close_with(&self.saturated, set);
    }

    fn raw_rules(&self) -> Vec<(Elem, Vec<Elem>)> {
        self.rules
            .iter()
            .filter(|r| !r.family.contains(&r.elem))
            .map(|r| (r.elem, r.family.clone()))
            .collect()
    }

    fn principal(&self, s: Elem) -> FixedBitSet {
        self.down[s].clone()
    }
}

/// Enumerates every closed set of a closure operator on `0..n`, given a set
/// of join-generators: each closed set is the closure of a union of these.
pub(crate) fn enumerate_closed(
    n: usize,
    generators: &[FixedBitSet],
    close: impl Fn(&mut FixedBitSet),
    budget: usize,
) -> Result<Vec<FixedBitSet>, PresentationError> {
    let mut start = FixedBitSet::with_capacity(n);
    close(&mut start);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        for g in generators {
            if g.is_subset(&cur) {
                continue;
            }
            let mut next = cur.clone();
            next.union_with(g);
            close(&mut next);
            if !seen.contains(&next) {
                if seen.len() >= budget {
                    return Err(PresentationError::SizeBudgetExceeded { limit: budget });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut all: Vec<FixedBitSet> = seen.into_iter().collect();
    sort_sets(&mut all);
    Ok(all)
}

pub(crate) fn sort_sets(sets: &mut [FixedBitSet]) {
    sets.sort_by(|a, b| {
        a.count_ones(..)
            .cmp(&b.count_ones(..))
            .then_with(|| a.ones().cmp(b.ones()))
    });
}

fn ideal_name(site: &Site, ideal: &FixedBitSet) -> String {
    let maximal: Vec<&str> = ideal
        .ones()
        .filter(|&s| ideal.ones().all(|t| t == s || !site.leq(s, t)))
        .map(|s| site.name(s))
        .collect();
    if maximal.is_empty() {
        "0".to_string()
    } else {
        maximal.join(" ∨ ")
    }
}

/// The frame of C-ideals of a site with the embedding `s ↦ close(↓s)`.
#[derive(Debug, Clone)]
pub struct CIdealFrame {
    pub frame: FiniteFrame,
    pub ideals: Vec<FixedBitSet>,
    pub embedding: Vec<Elem>,
    site: Site,
    lookup: HashMap<FixedBitSet, Elem>,
}

impl CIdealFrame {
    pub fn site(&self) -> &Site {
        &self.site
    }

    pub fn ideal(&self, e: Elem) -> &FixedBitSet {
        &self.ideals[e]
    }

    /// The frame element of the least C-ideal containing `set`.
    pub fn element_of(&self, set: &FixedBitSet) -> Elem {
        let mut s = set.clone();
        self.site.close(&mut s);
        self.lookup[&s]
    }

    /// Image of the site element `s`.
    pub fn embed(&self, s: Elem) -> Elem {
        self.embedding[s]
    }

    /// Describes how the presented frame is realized, for reports.
    pub fn realization(&self) -> &'static str {
        "frame of C-ideals (downsets of the site closed under its meet-saturated coverage)"
    }
}

/// Enumerates all C-ideals, failing when more than `budget` are found.
pub fn c_ideal_frame(site: &Site, budget: usize) -> Result<CIdealFrame, PresentationError> {
    let n = site.len();
    let gens: Vec<FixedBitSet> = (0..n).map(|s| site.principal(s)).collect();
    let ideals = enumerate_closed(n, &gens, |set| site.close(set), budget)?;
    let names: Vec<String> = ideals.iter().map(|i| ideal_name(site, i)).collect();
    let frame = FiniteFrame::from_sets(names, &ideals)
        .expect("C-ideals of a meet-stable coverage form a frame");
    let lookup: HashMap<FixedBitSet, Elem> = ideals
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i))
        .collect();
    let embedding = (0..n)
        .map(|s| {
            let mut p = site.principal(s);
            site.close(&mut p);
            lookup[&p]
        })
        .collect();
    Ok(CIdealFrame {
        frame,
        ideals,
        embedding,
        site: site.clone(),
        lookup,
    })
}

/// A complete lattice given as a closure system: joins are closures of
/// unions, the order is inclusion. Not necessarily distributive.
#[derive(Debug, Clone)]
pub struct SupLattice {
    pub sets: Vec<FixedBitSet>,
    pub names: Vec<String>,
    pub embedding: Vec<usize>,
}

impl SupLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.sets[a].is_subset(&self.sets[b])
    }
}

/// The suplattice presented by the site's order and its rules alone (no
/// meet-saturation): downsets closed under each given rule.
pub fn suplattice_of_site(site: &Site, budget: usize) -> Result<SupLattice, PresentationError> {
    let n = site.len();
    let raw = site.raw_rules();
    let gens: Vec<FixedBitSet> = (0..n).map(|s| site.principal(s)).collect();
    let sets = enumerate_closed(n, &gens, |set| site.close_with(&raw, set), budget)?;
    let lookup: HashMap<&FixedBitSet, usize> =
        sets.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let embedding = (0..n)
        .map(|s| {
            let mut p = site.principal(s);
            site.close_with(&raw, &mut p);
            lookup[&p]
        })
        .collect();
    let names = sets.iter().map(|s| ideal_name(site, s)).collect();
    Ok(SupLattice {
        sets,
        names,
        embedding,
    })
}

/// Outcome of [`coverage_iso_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub sup_size: usize,
    pub frame_size: usize,
    /// First reason the generator-respecting isomorphism fails, if it does.
    pub failure: Option<String>,
}

impl CoverageReport {
    pub fn holds(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the refinement hypothesis, then compares the suplattice presented by
/// the rules with the frame presented by the rules plus the meet structure.
///
/// The hypothesis asks, for each rule `a ◁ A` and each `b ≤ a`, for a rule
/// `b ◁ B` with `B ⊆ ↓b` refining `A`. The trivial cover `b ◁ {b}` counts as
/// such a rule: adding it changes neither presentation.
pub fn coverage_iso_check(site: &Site, budget: usize) -> Result<CoverageReport, PresentationError> {
    for r in site.rules() {
        for b in site.down_set(r.elem).ones() {
            let refines = |fam: &[Elem]| {
                fam.iter()
                    .all(|&x| site.leq(x, b) && r.family.iter().any(|&y| site.leq(x, y)))
            };
            let ok = refines(&[b])
                || site
                    .rules()
                    .iter()
                    .any(|other| other.elem == b && refines(&other.family));
            if !ok {
                return Err(PresentationError::HypothesisViolated {
                    below: site.name(b).to_string(),
                    rule: site.render_rule(r.elem, &r.family),
                });
            }
        }
    }
    let sup = suplattice_of_site(site, budget)?;
    let frm = c_ideal_frame(site, budget)?;
    let mut report = CoverageReport {
        sup_size: sup.len(),
        frame_size: frm.frame.len(),
        failure: None,
    };
    let phi: Vec<Elem> = sup.sets.iter().map(|s| frm.element_of(s)).collect();
    for s in 0..site.len() {
        if phi[sup.embedding[s]] != frm.embed(s) {
            report.failure = Some(format!("generator {} is not respected", site.name(s)));
            return Ok(report);
        }
    }
    let mut hit = vec![false; frm.frame.len()];
    for &e in &phi {
        hit[e] = true;
    }
    if let Some(missed) = hit.iter().position(|h| !h) {
        report.failure = Some(format!(
            "frame element {} has no preimage",
            frm.frame.name(missed)
        ));
        return Ok(report);
    }
    for a in 0..sup.len() {
        for b in 0..sup.len() {
            if sup.leq(a, b) != frm.frame.leq(phi[a], phi[b]) {
                report.failure = Some(format!(
                    "order between {} and {} is not matched",
                    sup.names[a], sup.names[b]
                ));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Separates meet-structure relations (single meet ≤ single meet) from cover
/// relations (single meet ≤ join of meets) and builds the site: the
/// meet-semilattice of generator sets closed under the meet-structure
/// relations, with the cover relations as rules.
pub fn build_site(p: &Presentation) -> Result<Site, PresentationError> {
    build_site_with_budget(p, DEFAULT_BUDGET)
}

pub(crate) fn build_site_with_budget(
    p: &Presentation,
    budget: usize,
) -> Result<Site, PresentationError> {
    if p.is_schematic() {
        return Err(PresentationError::HorizonRequired);
    }
    let g = p.generators().len();
    let mut horn: Vec<(Vec<GenId>, Vec<GenId>)> = Vec::new();
    let mut covers: Vec<(Vec<GenId>, Vec<Vec<GenId>>, String)> = Vec::new();
    for &(lo, hi) in p.preorder() {
        horn.push((vec![lo], vec![hi]));
    }
    for r in p.relations() {
        match r.lhs.terms().len() {
            0 => continue,
            1 => {}
            _ => return Err(PresentationError::NotSiteForm(r.label.clone())),
        }
        let lhs = r.lhs.terms()[0].clone();
        if r.rhs.terms().len() == 1 {
            horn.push((lhs, r.rhs.terms()[0].clone()));
        } else {
            covers.push((lhs, r.rhs.terms().to_vec(), r.label.clone()));
        }
    }
    let close = |set: &mut FixedBitSet| loop {
        let mut changed = false;
        for (body, head) in &horn {
            if body.iter().all(|&b| set.contains(b)) && head.iter().any(|&h| !set.contains(h)) {
                for &h in head {
                    set.insert(h);
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    };
    let singles: Vec<FixedBitSet> = (0..g)
        .map(|i| {
            let mut s = FixedBitSet::with_capacity(g);
            s.insert(i);
            s
        })
        .collect();
    let sets = enumerate_closed(g, &singles, close, budget)?;
    let n = sets.len();
    let lookup: HashMap<FixedBitSet, Elem> =
        sets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let elem_of = |gens: &[GenId]| -> Elem {
        let mut s = FixedBitSet::with_capacity(g);
        for &x in gens {
            s.insert(x);
        }
        close(&mut s);
        lookup[&s]
    };
    let generator_elems: Vec<Elem> = (0..g).map(|x| elem_of(&[x])).collect();
    let names: Vec<String> = sets
        .iter()
        .enumerate()
        .map(|(e, set)| {
            if let Some(x) = (0..g).find(|&x| generator_elems[x] == e) {
                return p.generators()[x].clone();
            }
            if set.count_ones(..) == 0 {
                return "⊤".to_string();
            }
            let mut kept: Vec<GenId> = Vec::new();
            for x in set.ones() {
                if elem_of(&kept) == e {
                    break;
                }
                let mut with = kept.clone();
                with.push(x);
                if elem_of(&with) != elem_of(&kept) {
                    kept = with;
                }
            }
            let mut i = 0;
            while i < kept.len() {
                let mut without = kept.clone();
                without.remove(i);
                if elem_of(&without) == e {
                    kept = without;
                } else {
                    i += 1;
                }
            }
            kept.iter()
                .map(|&x| p.generators()[x].as_str())
                .collect::<Vec<_>>()
                .join("∧")
        })
        .collect();
    // x ≤ y iff the generators of y are among those of x
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| sets[y].is_subset(&sets[x])).collect())
        .collect();
    let rules: Vec<(Elem, Vec<Elem>, String)> = covers
        .iter()
        .map(|(lhs, rhs, label)| {
            let fam = rhs
                .iter()
                .map(|t| {
                    let mut all = lhs.clone();
                    all.extend_from_slice(t);
                    elem_of(&all)
                })
                .collect();
            (elem_of(lhs), fam, label.clone())
        })
        .collect();
    let mut site = Site::new(names, leq, rules)?;
    site.gen_sets = Some(sets.iter().map(|s| s.ones().collect()).collect());
    site.generator_elems = Some(generator_elems);
    Ok(site)
}
