//! Exact finite frames.
//!
//! A finite frame is a finite distributive lattice. Frames are stored by their
//! order relation; meet and join tables are derived once on construction.
//! Elements are addressed by dense indices ([`Elem`]) and carry opaque names.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// Dense element index inside a [`FiniteFrame`].
pub type Elem = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("frame has no elements")]
    Empty,
    #[error("malformed order: {0}")]
    MalformedOrder(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("not a frame: {0}")]
    NotAFrame(AxiomViolation),
}

/// An order relation on a named carrier, as supplied by a user or a builder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawOrder {
    pub names: Vec<String>,
    pub leq: Vec<Vec<bool>>,
}

impl RawOrder {
    /// Builds the reflexive-transitive closure of the given pairs.
    pub fn from_pairs<S: AsRef<str>>(
        names: &[S],
        pairs: &[(S, S)],
    ) -> Result<RawOrder, FrameError> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(FrameError::DuplicateElement(n.clone()));
            }
        }
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            let ia = *index
                .get(a.as_ref())
                .ok_or_else(|| FrameError::UnknownElement(a.as_ref().to_string()))?;
            let ib = *index
                .get(b.as_ref())
                .ok_or_else(|| FrameError::UnknownElement(b.as_ref().to_string()))?;
            leq[ia][ib] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        Ok(RawOrder { names, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// One violated instance of a frame axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    Antisymmetry { a: String, b: String },
    NoTop,
    NoBottom,
    NoMeet { a: String, b: String },
    NoJoin { a: String, b: String },
    /// `a ∧ (b ∨ c) ≠ (a ∧ b) ∨ (a ∧ c)`
    Distributivity { a: String, b: String, c: String },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Antisymmetry { a, b } => {
                write!(f, "antisymmetry fails: {a} <= {b} <= {a}")
            }
            AxiomViolation::NoTop => write!(f, "no top element"),
            AxiomViolation::NoBottom => write!(f, "no bottom element"),
            AxiomViolation::NoMeet { a, b } => write!(f, "no meet of {a} and {b}"),
            AxiomViolation::NoJoin { a, b } => write!(f, "no join of {a} and {b}"),
            AxiomViolation::Distributivity { a, b, c } => {
                write!(f, "{a} ∧ ({b} ∨ {c}) ≠ ({a} ∧ {b}) ∨ ({a} ∧ {c})")
            }
        }
    }
}

/// Outcome of [`check_frame_axioms`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrameReport {
    pub violations: Vec<AxiomViolation>,
}

impl FrameReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

fn glb(down: &[FixedBitSet], sizes: &[usize], a: usize, b: usize) -> Option<usize> {
    let mut lower = down[a].clone();
    lower.intersect_with(&down[b]);
    let target = lower.count_ones(..);
    lower.ones().find(|&g| sizes[g] == target)
}

fn lub(up: &[FixedBitSet], sizes: &[usize], a: usize, b: usize) -> Option<usize> {
    let mut upper = up[a].clone();
    upper.intersect_with(&up[b]);
    let target = upper.count_ones(..);
    upper.ones().find(|&g| sizes[g] == target)
}

fn order_sets(leq: &[Vec<bool>]) -> (Vec<FixedBitSet>, Vec<FixedBitSet>) {
    let n = leq.len();
    let mut down = vec![FixedBitSet::with_capacity(n); n];
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for a in 0..n {
        for b in 0..n {
            if leq[a][b] {
                down[b].insert(a);
                up[a].insert(b);
            }
        }
    }
    (down, up)
}

/// Checks that `order` is a frame, listing every violated instance.
///
/// Distributivity is tested on all triples, which for finite lattices is
/// equivalent to the infinite distributive law (every join is a finite one).
pub fn check_frame_axioms(order: &RawOrder) -> Result<FrameReport, FrameError> {
    let n = order.len();
    if n == 0 {
        return Err(FrameError::Empty);
    }
    if order.leq.len() != n || order.leq.iter().any(|r| r.len() != n) {
        return Err(FrameError::MalformedOrder(
            "order matrix does not match the carrier".into(),
        ));
    }
    let leq = &order.leq;
    for a in 0..n {
        if !leq[a][a] {
            return Err(FrameError::MalformedOrder(format!(
                "not reflexive at {}",
                order.names[a]
            )));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if !leq[a][b] {
                continue;
            }
            for c in 0..n {
                if leq[b][c] && !leq[a][c] {
                    return Err(FrameError::MalformedOrder(format!(
                        "not transitive: {} <= {} <= {}",
                        order.names[a], order.names[b], order.names[c]
                    )));
                }
            }
        }
    }
    let name = |i: usize| order.names[i].clone();
    let mut report = FrameReport::default();
    for a in 0..n {
        for b in (a + 1)..n {
            if leq[a][b] && leq[b][a] {
                report
                    .violations
                    .push(AxiomViolation::Antisymmetry { a: name(a), b: name(b) });
            }
        }
    }
    if !report.violations.is_empty() {
        // Lattice operations are meaningless without antisymmetry.
        return Ok(report);
    }
    if !(0..n).any(|t| (0..n).all(|x| leq[x][t])) {
        report.violations.push(AxiomViolation::NoTop);
    }
    if !(0..n).any(|z| (0..n).all(|x| leq[z][x])) {
        report.violations.push(AxiomViolation::NoBottom);
    }
    let (down, up) = order_sets(leq);
    let dsz: Vec<usize> = down.iter().map(|s| s.count_ones(..)).collect();
    let usz: Vec<usize> = up.iter().map(|s| s.count_ones(..)).collect();
    let mut meet = vec![None; n * n];
    let mut join = vec![None; n * n];
    for a in 0..n {
        for b in a..n {
            let m = glb(&down, &dsz, a, b);
            let j = lub(&up, &usz, a, b);
            if m.is_none() {
                report
                    .violations
                    .push(AxiomViolation::NoMeet { a: name(a), b: name(b) });
            }
            if j.is_none() {
                report
                    .violations
                    .push(AxiomViolation::NoJoin { a: name(a), b: name(b) });
            }
            meet[a * n + b] = m;
            meet[b * n + a] = m;
            join[a * n + b] = j;
            join[b * n + a] = j;
        }
    }
    if !report.violations.is_empty() {
        return Ok(report);
    }
    let m = |a: usize, b: usize| meet[a * n + b].unwrap();
    let j = |a: usize, b: usize| join[a * n + b].unwrap();
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                if m(a, j(b, c)) != j(m(a, b), m(a, c)) {
                    report.violations.push(AxiomViolation::Distributivity {
                        a: name(a),
                        b: name(b),
                        c: name(c),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// A finite frame with cached lattice tables. Immutable after construction.
#[derive(Clone)]
pub struct FiniteFrame {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    down: Vec<FixedBitSet>,
    meet: Vec<Elem>,
    join: Vec<Elem>,
    top: Elem,
    bottom: Elem,
}

impl fmt::Debug for FiniteFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteFrame")
            .field("elements", &self.names)
            .finish()
    }
}

impl FiniteFrame {
    /// Validates `order` as a frame and derives its tables.
    pub fn new(order: RawOrder) -> Result<FiniteFrame, FrameError> {
        let n = order.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let (down, up) = order_sets(&order.leq);
        for a in 0..n {
            if !down[a].contains(a) {
                return Err(FrameError::MalformedOrder(format!(
                    "not reflexive at {}",
                    order.names[a]
                )));
            }
            for b in down[a].ones() {
                if !down[b].is_subset(&down[a]) {
                    return Err(FrameError::MalformedOrder(format!(
                        "not transitive below {}",
                        order.names[a]
                    )));
                }
                if b != a && down[b].contains(a) {
                    return Err(FrameError::NotAFrame(AxiomViolation::Antisymmetry {
                        a: order.names[b].clone(),
                        b: order.names[a].clone(),
                    }));
                }
            }
        }
        Self::from_order_sets(order.names, down, up)
    }

    /// Frame whose elements are the given sets ordered by inclusion.
    pub fn from_sets(names: Vec<String>, sets: &[FixedBitSet]) -> Result<FiniteFrame, FrameError> {
        let n = sets.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for a in 0..n {
            for b in 0..n {
                if sets[a].is_subset(&sets[b]) {
                    down[b].insert(a);
                    up[a].insert(b);
                }
            }
        }
        Self::from_order_sets(names, down, up)
    }

    fn from_order_sets(
        names: Vec<String>,
        down: Vec<FixedBitSet>,
        up: Vec<FixedBitSet>,
    ) -> Result<FiniteFrame, FrameError> {
        let n = names.len();
        if n == 0 {
            return Err(FrameError::Empty);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(FrameError::DuplicateElement(name.clone()));
            }
        }
        let top = (0..n)
            .find(|&t| down[t].count_ones(..) == n)
            .ok_or(FrameError::NotAFrame(AxiomViolation::NoTop))?;
        let bottom = (0..n)
            .find(|&z| up[z].count_ones(..) == n)
            .ok_or(FrameError::NotAFrame(AxiomViolation::NoBottom))?;
        let dsz: Vec<usize> = down.iter().map(|s| s.count_ones(..)).collect();
        let usz: Vec<usize> = up.iter().map(|s| s.count_ones(..)).collect();
        let mut meet = vec![0; n * n];
        let mut join = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let m = glb(&down, &dsz, a, b).ok_or_else(|| {
                    FrameError::NotAFrame(AxiomViolation::NoMeet {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    })
                })?;
                let j = lub(&up, &usz, a, b).ok_or_else(|| {
                    FrameError::NotAFrame(AxiomViolation::NoJoin {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    })
                })?;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
                join[a * n + b] = j;
                join[b * n + a] = j;
            }
        }
        let frame = FiniteFrame {
            names,
            index,
            down,
            meet,
            join,
            top,
            bottom,
        };
        frame.check_join_prime()?;
        Ok(frame)
    }

    /// A finite lattice is distributive iff every join-irreducible is join-prime.
    fn check_join_prime(&self) -> Result<(), FrameError> {
        let irreducibles = self.join_irreducibles();
        for &j in &irreducibles {
            for b in self.elements() {
                if self.leq(j, b) {
                    continue;
                }
                for c in self.elements() {
                    if !self.leq(j, c) && self.leq(j, self.join(b, c)) {
                        return Err(FrameError::NotAFrame(AxiomViolation::Distributivity {
                            a: self.names[j].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                        }));
                    }
                }
            }
        }
        Ok(())
    }

    /// The frame of all subsets of `points`, with elements named `{p,q}`,
    /// `0` for the empty set and `1` for the whole set.
    pub fn powerset<S: AsRef<str>>(points: &[S]) -> FiniteFrame {
        let k = points.len();
        assert!(k < 16, "powerset frames are limited to 15 points");
        let size = 1usize << k;
        let names: Vec<String> = (0..size).map(|m| subset_name(points, m)).collect();
        let sets: Vec<FixedBitSet> = (0..size)
            .map(|m| {
                let mut s = FixedBitSet::with_capacity(k);
                for i in 0..k {
                    if m >> i & 1 == 1 {
                        s.insert(i);
                    }
                }
                s
            })
            .collect();
        FiniteFrame::from_sets(names, &sets).expect("powersets are frames")
    }

    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FiniteFrame {
        assert!(n > 0);
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FiniteFrame::new(RawOrder { names, leq }).expect("chains are frames")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.names.len()
    }

    pub fn name(&self, a: Elem) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    pub fn bottom(&self) -> Elem {
        self.bottom
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.down[b].contains(a)
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a * self.names.len() + b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a * self.names.len() + b]
    }

    pub fn meet_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    pub fn join_all<I: IntoIterator<Item = Elem>>(&self, it: I) -> Elem {
        it.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn is_bottom(&self, a: Elem) -> bool {
        a == self.bottom
    }

    /// `a ≬ b`: the meet is nonzero.
    pub fn overlaps(&self, a: Elem, b: Elem) -> bool {
        self.meet(a, b) != self.bottom
    }

    pub fn down_set(&self, a: Elem) -> &FixedBitSet {
        &self.down[a]
    }

    /// Nonzero elements that are not the join of the elements strictly below.
    /// These are the points of the finite locale.
    pub fn join_irreducibles(&self) -> Vec<Elem> {
        self.elements()
            .filter(|&j| {
                j != self.bottom
                    && self.join_all(self.down[j].ones().filter(|&x| x != j)) != j
            })
            .collect()
    }

    /// The order relation as a [`RawOrder`].
    pub fn raw_order(&self) -> RawOrder {
        RawOrder {
            names: self.names.clone(),
            leq: self
                .elements()
                .map(|a| self.elements().map(|b| self.leq(a, b)).collect())
                .collect(),
        }
    }

    /// Sub-lattice on `keep`, with the induced order. Callers guarantee that
    /// `keep` is closed under the operations they care about.
    pub fn restrict(&self, keep: &[Elem]) -> Result<FiniteFrame, FrameError> {
        let names = keep.iter().map(|&a| self.names[a].clone()).collect();
        let leq = keep
            .iter()
            .map(|&a| keep.iter().map(|&b| self.leq(a, b)).collect())
            .collect();
        FiniteFrame::new(RawOrder { names, leq })
    }
}

pub(crate) fn subset_name<S: AsRef<str>>(points: &[S], mask: usize) -> String {
    let k = points.len();
    if mask == 0 {
        "0".to_string()
    } else if mask == (1 << k) - 1 {
        "1".to_string()
    } else {
        let inner: Vec<&str> = (0..k)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| points[i].as_ref())
            .collect();
        format!("{{{}}}", inner.join(","))
    }
}

/// A function between the carriers of two finite frames.
#[derive(Debug, Clone)]
pub struct LatticeMap<'a> {
    pub source: &'a FiniteFrame,
    pub target: &'a FiniteFrame,
    pub table: Vec<Elem>,
}

impl<'a> LatticeMap<'a> {
    pub fn new(
        source: &'a FiniteFrame,
        target: &'a FiniteFrame,
        table: Vec<Elem>,
    ) -> Result<LatticeMap<'a>, FrameError> {
        if table.len() != source.len() {
            return Err(FrameError::MalformedOrder(format!(
                "map is defined on {} of {} source elements",
                table.len(),
                source.len()
            )));
        }
        if let Some(&bad) = table.iter().find(|&&t| t >= target.len()) {
            return Err(FrameError::UnknownElement(format!("target index {bad}")));
        }
        Ok(LatticeMap {
            source,
            target,
            table,
        })
    }

    pub fn identity(frame: &'a FiniteFrame) -> LatticeMap<'a> {
        LatticeMap {
            source: frame,
            target: frame,
            table: frame.elements().collect(),
        }
    }

    pub fn apply(&self, a: Elem) -> Elem {
        self.table[a]
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &LatticeMap<'b>) -> LatticeMap<'b>
    where
        'a: 'b,
    {
        assert_eq!(self.target.len(), other.source.len());
        LatticeMap {
            source: self.source,
            target: other.target,
            table: self.table.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.target.len());
        self.table.iter().all(|&t| {
            let fresh = !seen.contains(t);
            seen.insert(t);
            fresh
        })
    }

    pub fn image(&self) -> Vec<Elem> {
        let mut img: Vec<Elem> = self.table.clone();
        img.sort_unstable();
        img.dedup();
        img
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphismKind {
    FrameHom,
    SuplatticeHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismViolation {
    Top { image: String },
    EmptyJoin { image: String },
    Meet { a: String, b: String },
    Join { a: String, b: String },
}

impl fmt::Display for MorphismViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorphismViolation::Top { image } => write!(f, "top is sent to {image}"),
            MorphismViolation::EmptyJoin { image } => write!(f, "bottom is sent to {image}"),
            MorphismViolation::Meet { a, b } => write!(f, "meet of {a} and {b} not preserved"),
            MorphismViolation::Join { a, b } => write!(f, "join of {a} and {b} not preserved"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismReport {
    pub kind: MorphismKind,
    pub counterexample: Option<MorphismViolation>,
}

impl MorphismReport {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks preservation of the structure named by `kind`.
///
/// Every join in a finite lattice is a finite join, so preserving the empty
/// join and binary joins is the same as preserving all joins of subsets.
pub fn check_morphism(f: &LatticeMap<'_>, kind: MorphismKind) -> MorphismReport {
    let (s, t) = (f.source, f.target);
    let name = |a: Elem| s.name(a).to_string();
    let fail = |v| MorphismReport {
        kind,
        counterexample: Some(v),
    };
    if f.apply(s.bottom()) != t.bottom() {
        return fail(MorphismViolation::EmptyJoin {
            image: t.name(f.apply(s.bottom())).to_string(),
        });
    }
    if kind == MorphismKind::FrameHom && f.apply(s.top()) != t.top() {
        return fail(MorphismViolation::Top {
            image: t.name(f.apply(s.top())).to_string(),
        });
    }
    for a in s.elements() {
        for b in a..s.len() {
            if f.apply(s.join(a, b)) != t.join(f.apply(a), f.apply(b)) {
                return fail(MorphismViolation::Join { a: name(a), b: name(b) });
            }
            if kind == MorphismKind::FrameHom
                && f.apply(s.meet(a, b)) != t.meet(f.apply(a), f.apply(b))
            {
                return fail(MorphismViolation::Meet { a: name(a), b: name(b) });
            }
        }
    }
    MorphismReport {
        kind,
        counterexample: None,
    }
}

/// Searches for an order isomorphism `a → b`. Candidates are tried in the
/// lexicographic order of the target names, so the result is deterministic.
pub fn find_isomorphism(a: &FiniteFrame, b: &FiniteFrame) -> Option<Vec<Elem>> {
    if a.len() != b.len() {
        return None;
    }
    let n = a.len();
    let dsize = |f: &FiniteFrame, x: Elem| f.down_set(x).count_ones(..);
    let mut order: Vec<Elem> = a.elements().collect();
    order.sort_by_key(|&x| (dsize(a, x), a.name(x).to_string()));
    let mut cands: Vec<Elem> = b.elements().collect();
    cands.sort_by(|&x, &y| b.name(x).cmp(b.name(y)));
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn go(
        pos: usize,
        order: &[Elem],
        cands: &[Elem],
        a: &FiniteFrame,
        b: &FiniteFrame,
        map: &mut [Elem],
        used: &mut [bool],
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        let dx = a.down_set(x).count_ones(..);
        for &y in cands {
            if used[y] || b.down_set(y).count_ones(..) != dx {
                continue;
            }
            let consistent = order[..pos].iter().all(|&p| {
                a.leq(p, x) == b.leq(map[p], y) && a.leq(x, p) == b.leq(y, map[p])
            });
            if !consistent {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(pos + 1, order, cands, a, b, map, used) {
                return true;
            }
            used[y] = false;
        }
        map[x] = usize::MAX;
        false
    }

    if go(0, &order, &cands, a, b, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> RawOrder {
        RawOrder::from_pairs(
            &["0", "x", "y", "z", "1"],
            &[
                ("0", "x"),
                ("0", "y"),
                ("0", "z"),
                ("x", "1"),
                ("y", "1"),
                ("z", "1"),
            ],
        )
        .unwrap()
    }

    // Brute-force frame distributivity over every (a, B) with B ⊆ carrier.
    fn brute_distributive(order: &RawOrder) -> Vec<(usize, usize)> {
        let n = order.len();
        let leq = &order.leq;
        let sup = |set: &[usize]| -> usize {
            (0..n)
                .find(|&u| {
                    set.iter().all(|&s| leq[s][u])
                        && (0..n).all(|v| !set.iter().all(|&s| leq[s][v]) || leq[u][v])
                })
                .unwrap()
        };
        let inf2 = |a: usize, b: usize| -> usize {
            (0..n)
                .find(|&l| {
                    leq[l][a] && leq[l][b] && (0..n).all(|v| !(leq[v][a] && leq[v][b]) || leq[v][l])
                })
                .unwrap()
        };
        let mut bad = Vec::new();
        for a in 0..n {
            for mask in 0..(1usize << n) {
                let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let lhs = inf2(a, sup(&set));
                let meets: Vec<usize> = set.iter().map(|&b| inf2(a, b)).collect();
                if lhs != sup(&meets) {
                    bad.push((a, mask));
                }
            }
        }
        bad
    }

    #[test]
    fn powerset_of_two_is_a_frame() {
        let f = FiniteFrame::powerset(&["a", "b"]);
        assert_eq!(f.len(), 4);
        assert!(check_frame_axioms(&f.raw_order()).unwrap().is_valid());
        assert_eq!(f.name(f.top()), "1");
        assert_eq!(f.name(f.bottom()), "0");
        let a = f.elem("{a}").unwrap();
        let b = f.elem("{b}").unwrap();
        assert_eq!(f.join(a, b), f.top());
        assert_eq!(f.meet(a, b), f.bottom());
        assert_eq!(f.join_irreducibles(), vec![a, b]);
    }

    #[test]
    fn m3_is_rejected_with_witness() {
        let order = m3();
        let report = check_frame_axioms(&order).unwrap();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, AxiomViolation::Distributivity { .. })));
        // the oracle agrees that M3 breaks the law
        assert!(!brute_distributive(&order).is_empty());
        assert!(matches!(
            FiniteFrame::new(order),
            Err(FrameError::NotAFrame(AxiomViolation::Distributivity { .. }))
        ));
    }

    #[test]
    fn binary_check_agrees_with_subset_oracle() {
        let n5 = RawOrder::from_pairs(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
        )
        .unwrap();
        for order in [m3(), n5, FiniteFrame::powerset(&["p", "q", "r"]).raw_order()] {
            let fast = check_frame_axioms(&order).unwrap().is_valid();
            let brute = brute_distributive(&order).is_empty();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn one_element_frame() {
        let order = RawOrder::from_pairs(&["*"], &[]).unwrap();
        assert!(check_frame_axioms(&order).unwrap().is_valid());
        let f = FiniteFrame::new(order).unwrap();
        assert_eq!(f.top(), f.bottom());
    }

    #[test]
    fn malformed_orders() {
        let not_reflexive = RawOrder {
            names: vec!["a".into(), "b".into()],
            leq: vec![vec![true, true], vec![false, false]],
        };
        assert!(matches!(
            check_frame_axioms(&not_reflexive),
            Err(FrameError::MalformedOrder(_))
        ));
        let not_transitive = RawOrder {
            names: vec!["a".into(), "b".into(), "c".into()],
            leq: vec![
                vec![true, true, false],
                vec![false, true, true],
                vec![false, false, true],
            ],
        };
        assert!(matches!(
            check_frame_axioms(&not_transitive),
            Err(FrameError::MalformedOrder(_))
        ));
        let cyclic = RawOrder::from_pairs(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap();
        let report = check_frame_axioms(&cyclic).unwrap();
        assert!(matches!(
            report.violations[0],
            AxiomViolation::Antisymmetry { .. }
        ));
        assert!(matches!(
            RawOrder::from_pairs(&["a"], &[("a", "z")]),
            Err(FrameError::UnknownElement(_))
        ));
    }

    #[test]
    fn morphism_checks() {
        let f = FiniteFrame::powerset(&["a", "b"]);
        let id = LatticeMap::identity(&f);
        assert!(check_morphism(&id, MorphismKind::FrameHom).holds());
        let to_top = LatticeMap::new(&f, &f, vec![f.top(); 4]).unwrap();
        let r = check_morphism(&to_top, MorphismKind::SuplatticeHom);
        assert!(matches!(
            r.counterexample,
            Some(MorphismViolation::EmptyJoin { .. })
        ));
        // joins only: collapse everything nonzero to {a}
        let a = f.elem("{a}").unwrap();
        let table = f
            .elements()
            .map(|x| if x == f.bottom() { x } else { a })
            .collect();
        let collapse = LatticeMap::new(&f, &f, table).unwrap();
        assert!(check_morphism(&collapse, MorphismKind::SuplatticeHom).holds());
        assert!(matches!(
            check_morphism(&collapse, MorphismKind::FrameHom).counterexample,
            Some(MorphismViolation::Top { .. })
        ));
    }

    #[test]
    fn isomorphism_search() {
        let p = FiniteFrame::powerset(&["a", "b"]);
        let q = FiniteFrame::powerset(&["x", "y"]);
        let iso = find_isomorphism(&p, &q).unwrap();
        assert_eq!(q.name(iso[p.elem("{a}").unwrap()]), "{x}");
        assert!(find_isomorphism(&p, &FiniteFrame::chain(4)).is_none());
    }
}
