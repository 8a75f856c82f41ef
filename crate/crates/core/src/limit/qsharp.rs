use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::cauchy::CauchyFrame;
use crate::completion::CompletionFrame;
use crate::frame::{Elem, FiniteFrame};
use crate::presentation::{Horizon, PresentationError};
use crate::uniform::{refines, star_cover, UniformityBase};

use super::qstar::{qstar_cores, qstar_terms, QStarTerm};
use super::{CaseReport, LimitError};

/// A basic open `[s(n⃗)∈u⃗] ∧ [m(U⃗)=k⃗]`: one optional coordinate per
/// sequence index below the horizon and a set of `(j, k)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basic {
    pub coords: Vec<Option<Elem>>,
    pub pairs: Vec<(usize, usize)>,
}

impl Basic {
    pub fn render(&self, f: &FiniteFrame) -> String {
        let mut parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|u| format!("[s({n})∈{}]", f.name(u))))
            .collect();
        parts.extend(self.pairs.iter().map(|(j, k)| format!("[m(U{j})={k}]")));
        if parts.is_empty() {
            "⊤".to_string()
        } else {
            parts.join(" ∧ ")
        }
    }
}

/// Evaluation of `q#` on basics, independent of any horizon.
struct QSharp<'a> {
    f: &'a FiniteFrame,
    cf: &'a CompletionFrame,
    /// Distinct members of all base covers.
    union_b: Vec<Elem>,
    /// `below_member[j]`: opens below some member of `U_j`.
    below_member: Vec<FixedBitSet>,
    /// `star_opts[j]`: indices `j'` with `U_{j'}⋆ ≤ U_j`.
    star_opts: Vec<Vec<usize>>,
}

impl<'a> QSharp<'a> {
    fn new(f: &'a FiniteFrame, base: &'a UniformityBase, cf: &'a CompletionFrame) -> QSharp<'a> {
        let mut union_b: Vec<Elem> = base
            .covers
            .iter()
            .flat_map(|u| u.members().iter().copied())
            .collect();
        union_b.sort_unstable();
        union_b.dedup();
        let below_member = base
            .covers
            .iter()
            .map(|u| {
                let mut s = FixedBitSet::with_capacity(f.len());
                for &m in u.members() {
                    s.union_with(f.down_set(m));
                }
                s
            })
            .collect();
        let star_opts = base
            .covers
            .iter()
            .map(|u| {
                (0..base.len())
                    .filter(|&jp| refines(f, &star_cover(f, &base.covers[jp]), u))
                    .collect()
            })
            .collect();
        QSharp {
            f,
            cf,
            union_b,
            below_member,
            star_opts,
        }
    }

    /// Joins over choices `V_p` with `V_p⋆ ≤ U_{j_p}` for every pair; given
    /// the choices, the join over `v⃗` of `⋀_i [v_i∈F]` distributes into a
    /// meet over coordinates of per-coordinate joins.
    fn eval(&self, coords: &[(usize, Elem)], pairs: &[(usize, usize)]) -> Elem {
        let c = self.cf.frame();
        let opts: Vec<&[usize]> = pairs.iter().map(|&(j, _)| &self.star_opts[j][..]).collect();
        if opts.iter().any(|o| o.is_empty()) {
            return c.bottom();
        }
        let mut choice = vec![0usize; pairs.len()];
        let mut result = c.bottom();
        loop {
            let mut acc = c.top();
            for &(n, u) in coords {
                let mut val = c.bottom();
                for &v in &self.union_b {
                    let ok = self.f.overlaps(v, u)
                        && pairs.iter().enumerate().all(|(p, &(_, k))| {
                            k > n || self.below_member[opts[p][choice[p]]].contains(v)
                        });
                    if ok {
                        val = c.join(val, self.cf.gen(v));
                    }
                }
                acc = c.meet(acc, val);
            }
            result = c.join(result, acc);
            // next choice
            let mut p = 0;
            loop {
                if p == choice.len() {
                    return result;
                }
                choice[p] += 1;
                if choice[p] < opts[p].len() {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
        }
    }
}

/// `q#([s(n⃗)∈u⃗] ∧ [m(U⃗)=k⃗])` in the completion frame.
#[allow(clippy::too_many_arguments)]
pub fn q_sharp_basic(
    cf: &CompletionFrame,
    f: &FiniteFrame,
    base: &UniformityBase,
    h: Horizon,
    ns: &[usize],
    us: &[Elem],
    js: &[usize],
    ks: &[usize],
) -> Result<Elem, LimitError> {
    if ns.len() != us.len() || js.len() != ks.len() {
        return Err(LimitError::MalformedBasic("list lengths differ".into()));
    }
    for (i, n) in ns.iter().enumerate() {
        if ns[..i].contains(n) {
            return Err(LimitError::MalformedBasic(format!("index {n} repeats")));
        }
        if *n >= h.k() {
            return Err(LimitError::MalformedBasic(format!("index {n} beyond {h}")));
        }
    }
    for &u in us {
        if u >= f.len() || f.is_bottom(u) {
            return Err(LimitError::MalformedBasic("coordinate opens must be nonzero".into()));
        }
    }
    for (&j, &k) in js.iter().zip(ks) {
        if j >= base.len().min(h.k()) || k >= h.k() {
            return Err(LimitError::MalformedBasic(format!("[m(U{j})={k}] beyond {h}")));
        }
    }
    let coords: Vec<(usize, Elem)> = ns.iter().copied().zip(us.iter().copied()).collect();
    let pairs: Vec<(usize, usize)> = js.iter().copied().zip(ks.iter().copied()).collect();
    Ok(QSharp::new(f, base, cf).eval(&coords, &pairs))
}

/// Every basic at a horizon, indexed by coordinate codes (0 for absent,
/// `1 + u` otherwise) in base `|F| + 1` and a bitmask of `(j, k)` pairs,
/// with `q#` tabulated.
pub struct BasicSpace<'a> {
    f: &'a FiniteFrame,
    base: &'a UniformityBase,
    cf: &'a CompletionFrame,
    pub horizon: Horizon,
    base_len: usize,
    radix: usize,
    powers: Vec<usize>,
    pair_bits: usize,
    table: Vec<Elem>,
}

impl<'a> BasicSpace<'a> {
    pub fn new(
        f: &'a FiniteFrame,
        base: &'a UniformityBase,
        cf: &'a CompletionFrame,
        h: Horizon,
        budget: usize,
    ) -> Result<BasicSpace<'a>, LimitError> {
        let k = h.k();
        let base_len = base.len().min(k);
        let radix = f.len() + 1;
        let pair_bits = base_len * k;
        let mut powers = vec![1usize];
        for _ in 0..k {
            let last = *powers.last().expect("nonempty");
            powers.push(last.checked_mul(radix).ok_or(PresentationError::SizeBudgetExceeded {
                limit: budget,
            })?);
        }
        let size = powers[k]
            .checked_shl(pair_bits as u32)
            .filter(|&s| pair_bits < usize::BITS as usize && s <= budget)
            .ok_or(PresentationError::SizeBudgetExceeded { limit: budget })?;
        let qs = QSharp::new(f, base, cf);
        let mut space = BasicSpace {
            f,
            base,
            cf,
            horizon: h,
            base_len,
            radix,
            powers,
            pair_bits,
            table: Vec::with_capacity(size),
        };
        for idx in 0..size {
            let b = space.decode(idx);
            let coords: Vec<(usize, Elem)> = b
                .coords
                .iter()
                .enumerate()
                .filter_map(|(n, c)| c.map(|u| (n, u)))
                .collect();
            space.table.push(qs.eval(&coords, &b.pairs));
        }
        Ok(space)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn q_sharp(&self, idx: usize) -> Elem {
        self.table[idx]
    }

    fn bit(&self, j: usize, k: usize) -> usize {
        1 << (j * self.horizon.k() + k)
    }

    fn code(&self, idx: usize, n: usize) -> usize {
        (idx >> self.pair_bits) / self.powers[n] % self.radix
    }

    fn coord(&self, idx: usize, n: usize) -> Option<Elem> {
        self.code(idx, n).checked_sub(1)
    }

    fn mask(&self, idx: usize) -> usize {
        idx & ((1 << self.pair_bits) - 1)
    }

    fn with_coord(&self, idx: usize, n: usize, u: Option<Elem>) -> usize {
        let old = self.code(idx, n);
        let new = u.map_or(0, |u| u + 1);
        let coords = idx >> self.pair_bits;
        let coords = coords - old * self.powers[n] + new * self.powers[n];
        (coords << self.pair_bits) | self.mask(idx)
    }

    pub fn decode(&self, idx: usize) -> Basic {
        let k = self.horizon.k();
        let mask = self.mask(idx);
        let mut pairs = Vec::new();
        for j in 0..self.base_len {
            for kk in 0..k {
                if mask & self.bit(j, kk) != 0 {
                    pairs.push((j, kk));
                }
            }
        }
        Basic {
            coords: (0..k).map(|n| self.coord(idx, n)).collect(),
            pairs,
        }
    }

    pub fn encode(&self, b: &Basic) -> usize {
        let mut coords = 0;
        for (n, c) in b.coords.iter().enumerate() {
            coords += c.map_or(0, |u| u + 1) * self.powers[n];
        }
        let mask = b.pairs.iter().fold(0, |m, &(j, k)| m | self.bit(j, k));
        (coords << self.pair_bits) | mask
    }

    pub fn render(&self, idx: usize) -> String {
        self.decode(idx).render(self.f)
    }

    /// `a ∧ [m(U_j)=k'] ∧ [s(k)∈v]` as a basic, or `None` when it is zero.
    fn meet_term(&self, idx: usize, t: &QStarTerm) -> Option<usize> {
        let u = match self.coord(idx, t.k) {
            Some(u) => self.f.meet(u, t.v),
            None => t.v,
        };
        if self.f.is_bottom(u) {
            return None;
        }
        Some(self.with_coord(idx, t.k, Some(u)) | self.bit(t.j, t.k_prime))
    }

    /// The open of a basic in a model realization of the same truncation.
    pub fn open_of(&self, cfr: &CauchyFrame, idx: usize) -> FixedBitSet {
        let b = self.decode(idx);
        let mut gens: Vec<_> = b
            .coords
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|u| cfr.s(n, u)))
            .collect();
        gens.extend(b.pairs.iter().map(|&(j, k)| cfr.m(j, k)));
        cfr.models.meet_of_generators(&gens)
    }

    /// The canonical extension `x ↦ ⋁{q#(a) : a basic, a ≤ x}`.
    pub fn extend(&self, opens: &[FixedBitSet], x: &FixedBitSet) -> Elem {
        let c = self.cf.frame();
        opens
            .iter()
            .zip(&self.table)
            .filter(|(o, _)| o.is_subset(x))
            .fold(c.bottom(), |acc, (_, &q)| c.join(acc, q))
    }
}

/// Checks that `q#` is monotone on the preorder of basics and respects the
/// relations (i), (ii), (iii) and (iii′) of the site-form presentation of the
/// truncated Cauchy frame.
///
/// The preorder is generated by dropping a pair, weakening a coordinate,
/// dropping a coordinate and adding a coordinate `1`, so those steps are
/// checked. Relation (i) is checked for binary joins; with monotonicity
/// this covers every finite family.
pub fn q_sharp_well_defined(space: &BasicSpace<'_>) -> Vec<CaseReport> {
    let f = space.f;
    let c = space.cf.frame();
    let k = space.horizon.k();
    let mut mono = CaseReport::new("monotone");
    let mut rel1 = CaseReport::new("(i)");
    let mut rel2 = CaseReport::new("(ii)");
    let mut rel3 = CaseReport::new("(iii)");
    let mut rel3p = CaseReport::new("(iii')");
    let qs = QSharp::new(f, space.base, space.cf);
    let q = |i: usize| space.q_sharp(i);
    let q_or_zero = |i: usize, n: usize, u: Elem| {
        if f.is_bottom(u) {
            c.bottom()
        } else {
            q(space.with_coord(i, n, Some(u)))
        }
    };
    for idx in 0..space.len() {
        let a = q(idx);
        let mask = space.mask(idx);
        if space.decode(idx).coords.iter().any(|c| c.is_some_and(|u| f.is_bottom(u))) {
            continue;
        }
        let present: Vec<(usize, Elem)> = (0..k)
            .filter_map(|n| space.coord(idx, n).map(|u| (n, u)))
            .collect();
        // monotonicity
        for bit in (0..space.pair_bits).map(|b| 1 << b).filter(|b| mask & b != 0) {
            let other = idx & !bit;
            mono.record(c.leq(a, q(other)), || {
                format!("{} ≤ {}", space.render(idx), space.render(other))
            });
        }
        for n in 0..k {
            match space.coord(idx, n) {
                Some(u) => {
                    for w in f.elements().filter(|&w| w != u && f.leq(u, w)) {
                        let other = space.with_coord(idx, n, Some(w));
                        mono.record(c.leq(a, q(other)), || {
                            format!("{} ≤ {}", space.render(idx), space.render(other))
                        });
                    }
                    let other = space.with_coord(idx, n, None);
                    mono.record(c.leq(a, q(other)), || {
                        format!("{} ≤ {}", space.render(idx), space.render(other))
                    });
                }
                None => {
                    let other = space.with_coord(idx, n, Some(f.top()));
                    mono.record(c.leq(a, q(other)), || {
                        format!("{} ≤ {}", space.render(idx), space.render(other))
                    });
                }
            }
        }
        // (i): binary joins in one coordinate
        for &(n, u) in &present {
            for x in f.elements().filter(|&x| x != u && f.leq(x, u)) {
                for y in f.elements().filter(|&y| y != u && y >= x && f.join(x, y) == u) {
                    let rhs = c.join(q_or_zero(idx, n, x), q_or_zero(idx, n, y));
                    rel1.record(c.leq(a, rhs), || {
                        format!("{} at s({n}) = {} ∨ {}", space.render(idx), f.name(x), f.name(y))
                    });
                }
            }
        }
        // (ii): left totality at each base index. The untruncated join runs
        // over all k; every k above the coordinates gives the same basic
        // value, so k = K stands for all of them.
        let basic = space.decode(idx);
        let coords: Vec<(usize, Elem)> = basic
            .coords
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|u| (n, u)))
            .collect();
        for j in 0..space.base_len {
            let mut pairs = basic.pairs.clone();
            pairs.push((j, k));
            let beyond = qs.eval(&coords, &pairs);
            let rhs = (0..k).fold(beyond, |acc, k0| c.join(acc, q(idx | space.bit(j, k0))));
            rel2.record(c.leq(a, rhs), || format!("{} over U{j}", space.render(idx)));
        }
        // (iii) and (iii′): Cauchyness at each pair present
        for j in 0..space.base_len {
            for k0 in 0..k {
                let bit = space.bit(j, k0);
                if mask & bit == 0 {
                    continue;
                }
                let rest = idx & !bit;
                let cover = space.base.covers[j].members();
                for (p1, &(n1, u1)) in present.iter().enumerate() {
                    if n1 < k0 {
                        continue;
                    }
                    let rhs = cover
                        .iter()
                        .filter(|&&w| f.overlaps(w, u1))
                        .fold(c.bottom(), |acc, &w| {
                            c.join(acc, q(space.with_coord(rest, n1, Some(f.meet(u1, w)))))
                        });
                    rel3p.record(c.leq(a, rhs), || {
                        format!("{} at s({n1}), U{j}", space.render(idx))
                    });
                    for &(n2, u2) in &present[p1 + 1..] {
                        if n2 < k0 {
                            continue;
                        }
                        let rhs = cover
                            .iter()
                            .filter(|&&w| f.overlaps(w, u1) && f.overlaps(w, u2))
                            .fold(c.bottom(), |acc, &w| {
                                let b = space.with_coord(rest, n1, Some(f.meet(u1, w)));
                                let b = space.with_coord(b, n2, Some(f.meet(u2, w)));
                                c.join(acc, q(b))
                            });
                        rel3.record(c.leq(a, rhs), || {
                            format!("{} at s({n1}), s({n2}), U{j}", space.render(idx))
                        });
                    }
                }
            }
        }
    }
    vec![mono, rel1, rel2, rel3, rel3p]
}

/// The triquotient conditions at one horizon. `q*` is truncated to the
/// horizon like the frame it maps into; the `full_` reports take `q*(b)`
/// as the untruncated join instead, so they check the untruncated
/// statement on the basics below the horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusVerdict {
    pub horizon: Horizon,
    pub basics: usize,
    /// `q#(1) = 1`.
    pub top_preserved: bool,
    /// `q# q*(b) ≤ b` for every generator `b`.
    pub retraction: CaseReport,
    /// `q#(a ∧ q*(b)) ≥ q#(a) ∧ b`.
    pub frobenius_ge: CaseReport,
    /// `q#(a ∧ q*(b)) ≤ q#(a) ∧ b`.
    pub frobenius_le: CaseReport,
    pub full_retraction: CaseReport,
    pub full_ge: CaseReport,
    pub full_le: CaseReport,
}

impl FrobeniusVerdict {
    pub fn holds(&self) -> bool {
        self.top_preserved
            && self.retraction.holds()
            && self.frobenius_ge.holds()
            && self.frobenius_le.holds()
    }

    pub fn untruncated_holds(&self) -> bool {
        self.top_preserved
            && self.full_retraction.holds()
            && self.full_ge.holds()
            && self.full_le.holds()
    }
}

/// Verdicts at `K` and `K+1`; a disagreement is horizon instability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusReport {
    pub at: FrobeniusVerdict,
    pub next: FrobeniusVerdict,
}

impl FrobeniusReport {
    pub fn horizon_stable(&self) -> bool {
        self.at.holds() == self.next.holds()
    }

    pub fn holds(&self) -> bool {
        self.at.holds() && self.horizon_stable()
    }
}

/// `q#(a ∧ q*(b))` for basics `a`, expanding `q*(b)` into its joinands.
fn q_sharp_meet_qstar(space: &BasicSpace<'_>, idx: usize, terms: &[QStarTerm]) -> Elem {
    let c = space.cf.frame();
    terms
        .iter()
        .filter_map(|t| space.meet_term(idx, t))
        .fold(c.bottom(), |acc, i| c.join(acc, space.q_sharp(i)))
}

/// Joinands of the untruncated `q*([u∈F])` up to equivalence over basics
/// below horizon `K`: every base index, and `k' ≤ k ≤ K`, since `q#` only
/// compares indices and every index from `K` on exceeds the coordinates.
fn full_terms(f: &FiniteFrame, base: &UniformityBase, u: Elem, k: usize) -> Vec<QStarTerm> {
    let mut out = Vec::new();
    for (j, v) in qstar_cores(f, base, u, base.len()) {
        for kk in 0..=k {
            for k_prime in 0..=kk {
                out.push(QStarTerm { j, v, k_prime, k: kk });
            }
        }
    }
    out
}

/// `q#` on basics past the table of a horizon, memoized.
struct Beyond<'s, 'a> {
    space: &'s BasicSpace<'a>,
    qs: QSharp<'a>,
    /// Keys hold the coordinates in radix `|F| + 1` and one bit per pair;
    /// without room for them every value is computed afresh.
    memo: Option<HashMap<(u64, u64), Elem>>,
}

impl<'s, 'a> Beyond<'s, 'a> {
    fn new(space: &'s BasicSpace<'a>) -> Beyond<'s, 'a> {
        let k = space.horizon.k();
        let fits = space.base.len() * (k + 1) <= 64
            && (space.radix as u64).checked_pow(k as u32 + 1).is_some();
        Beyond {
            space,
            qs: QSharp::new(space.f, space.base, space.cf),
            memo: fits.then(HashMap::new),
        }
    }

    /// `q#(a ∧ [m(U_j)=k'] ∧ [s(k)∈v])`, with `a` given decoded.
    fn meet_term(&mut self, idx: usize, a: &Basic, t: &QStarTerm) -> Elem {
        let space = self.space;
        let (f, c) = (space.f, space.cf.frame());
        let k = space.horizon.k();
        if t.j < space.base_len && t.k < k && t.k_prime < k {
            return space.meet_term(idx, t).map_or(c.bottom(), |i| space.q_sharp(i));
        }
        let mut coords: Vec<(usize, Elem)> = a
            .coords
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|u| (n, u)))
            .collect();
        match coords.iter_mut().find(|(n, _)| *n == t.k) {
            Some((_, u)) => *u = f.meet(*u, t.v),
            None => coords.push((t.k, t.v)),
        }
        if coords.iter().any(|&(_, u)| f.is_bottom(u)) {
            return c.bottom();
        }
        let mut pairs = a.pairs.clone();
        if !pairs.contains(&(t.j, t.k_prime)) {
            pairs.push((t.j, t.k_prime));
        }
        let Some(memo) = self.memo.as_mut() else {
            return self.qs.eval(&coords, &pairs);
        };
        let radix = space.radix as u64;
        let code = coords
            .iter()
            .fold(0u64, |acc, &(n, u)| acc + (u as u64 + 1) * radix.pow(n as u32));
        let mask = pairs.iter().fold(0u64, |m, &(j, kk)| m | 1 << (j * (k + 1) + kk));
        let qs = &self.qs;
        *memo.entry((code, mask)).or_insert_with(|| qs.eval(&coords, &pairs))
    }
}

pub(crate) fn frobenius_at(space: &BasicSpace<'_>) -> FrobeniusVerdict {
    let f = space.f;
    let c = space.cf.frame();
    let k = space.horizon.k();
    let terms: Vec<Vec<QStarTerm>> = f
        .elements()
        .map(|u| qstar_terms(f, space.base, u, space.horizon))
        .collect();
    let full: Vec<Vec<QStarTerm>> = f
        .elements()
        .map(|u| full_terms(f, space.base, u, k))
        .collect();
    let mut beyond = Beyond::new(space);
    let mut full_q = |idx: usize, a: &Basic, u: Elem| {
        full[u]
            .iter()
            .fold(c.bottom(), |acc, t| c.join(acc, beyond.meet_term(idx, a, t)))
    };
    let mut retraction = CaseReport::new("q#q*(b) ≤ b");
    let mut ge = CaseReport::new("q#(a ∧ q*(b)) ≥ q#(a) ∧ b");
    let mut le = CaseReport::new("q#(a ∧ q*(b)) ≤ q#(a) ∧ b");
    let mut full_retraction = CaseReport::new("q#q*(b) ≤ b, untruncated q*");
    let mut full_ge = CaseReport::new("q#(a ∧ q*(b)) ≥ q#(a) ∧ b, untruncated q*");
    let mut full_le = CaseReport::new("q#(a ∧ q*(b)) ≤ q#(a) ∧ b, untruncated q*");
    let top_basic = 0;
    let top = space.decode(top_basic);
    for u in f.elements() {
        let b = space.cf.gen(u);
        let witness = || format!("b = [{}∈F]", f.name(u));
        let lhs = q_sharp_meet_qstar(space, top_basic, &terms[u]);
        retraction.record(c.leq(lhs, b), witness);
        let lhs = full_q(top_basic, &top, u);
        full_retraction.record(c.leq(lhs, b), witness);
    }
    for idx in 0..space.len() {
        if (0..k).any(|n| space.coord(idx, n).is_some_and(|u| f.is_bottom(u))) {
            continue;
        }
        let a = space.decode(idx);
        let qa = space.q_sharp(idx);
        for u in f.elements() {
            let b = space.cf.gen(u);
            let rhs = c.meet(qa, b);
            let witness = || format!("a = {}, b = [{}∈F]", a.render(f), f.name(u));
            let lhs = q_sharp_meet_qstar(space, idx, &terms[u]);
            ge.record(c.leq(rhs, lhs), witness);
            le.record(c.leq(lhs, rhs), witness);
            let lhs = full_q(idx, &a, u);
            full_ge.record(c.leq(rhs, lhs), witness);
            full_le.record(c.leq(lhs, rhs), witness);
        }
    }
    FrobeniusVerdict {
        horizon: space.horizon,
        basics: space.len(),
        top_preserved: space.q_sharp(top_basic) == c.top(),
        retraction,
        frobenius_ge: ge,
        frobenius_le: le,
        full_retraction,
        full_ge,
        full_le,
    }
}

/// Checks the lower triquotient conditions at `h` and `h + 1`.
pub fn frobenius_check(
    f: &FiniteFrame,
    base: &UniformityBase,
    cf: &CompletionFrame,
    h: Horizon,
    budget: usize,
) -> Result<FrobeniusReport, LimitError> {
    let at = frobenius_at(&BasicSpace::new(f, base, cf, h, budget)?);
    let next = frobenius_at(&BasicSpace::new(f, base, cf, h.next(), budget)?);
    Ok(FrobeniusReport { at, next })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{discrete, indiscrete, Instance};
    use crate::completion::completion_frame;
    use crate::presentation::DEFAULT_BUDGET;

    fn setup(inst: &Instance) -> CompletionFrame {
        completion_frame(&inst.frame, &inst.base, DEFAULT_BUDGET).unwrap()
    }

    #[test]
    fn basic_values_on_discrete_two() {
        let inst = discrete(2);
        let cf = setup(&inst);
        let f = &inst.frame;
        let a = f.elem("{a}").unwrap();
        let h = Horizon::new(2).unwrap();
        let v = q_sharp_basic(&cf, f, &inst.base, h, &[0], &[a], &[0], &[0]).unwrap();
        assert_eq!(v, cf.gen(a));
        let top = q_sharp_basic(&cf, f, &inst.base, h, &[], &[], &[], &[]).unwrap();
        assert_eq!(top, cf.frame().top());
        assert!(matches!(
            q_sharp_basic(&cf, f, &inst.base, h, &[0], &[f.bottom()], &[], &[]),
            Err(LimitError::MalformedBasic(_))
        ));
        assert!(matches!(
            q_sharp_basic(&cf, f, &inst.base, h, &[1, 1], &[a, a], &[], &[]),
            Err(LimitError::MalformedBasic(_))
        ));
    }

    #[test]
    fn encoding_round_trips() {
        let inst = discrete(2);
        let cf = setup(&inst);
        let space =
            BasicSpace::new(&inst.frame, &inst.base, &cf, Horizon::new(2).unwrap(), DEFAULT_BUDGET)
                .unwrap();
        assert_eq!(space.len(), 25 * 4);
        for idx in 0..space.len() {
            assert_eq!(space.encode(&space.decode(idx)), idx);
        }
    }

    #[test]
    fn well_defined_and_frobenius_on_discrete_two() {
        for inst in [discrete(2), indiscrete(2)] {
            let cf = setup(&inst);
            for k in 2..=3 {
                let h = Horizon::new(k).unwrap();
                let space = BasicSpace::new(&inst.frame, &inst.base, &cf, h, DEFAULT_BUDGET).unwrap();
                for case in q_sharp_well_defined(&space) {
                    assert!(case.holds(), "{} {h} {}: {:?}", inst.name, case.case, case.failure);
                }
                let r = frobenius_check(&inst.frame, &inst.base, &cf, h, DEFAULT_BUDGET).unwrap();
                assert!(r.holds(), "{} {h}: {r:?}", inst.name);
            }
        }
    }

    #[test]
    fn mismatched_completion_is_detected() {
        let inst = discrete(2);
        let wrong = setup(&indiscrete(2));
        let r = frobenius_check(&inst.frame, &inst.base, &wrong, Horizon::new(2).unwrap(), DEFAULT_BUDGET)
            .unwrap();
        assert!(!r.at.frobenius_ge.holds());
    }

    #[test]
    fn termwise_expansion_matches_the_canonical_extension() {
        let inst = discrete(2);
        let cf = setup(&inst);
        let f = &inst.frame;
        for k in 2..=3 {
            let h = Horizon::new(k).unwrap();
            let cfr = CauchyFrame::new(f, &inst.base, h, DEFAULT_BUDGET).unwrap();
            let space = BasicSpace::new(f, &inst.base, &cf, h, DEFAULT_BUDGET).unwrap();
            let opens: Vec<FixedBitSet> = (0..space.len()).map(|i| space.open_of(&cfr, i)).collect();
            let images = super::super::qstar::qstar_images(f, &inst.base, &cfr);
            for idx in 0..space.len() {
                assert_eq!(space.extend(&opens, &opens[idx]), space.q_sharp(idx));
                for u in f.elements() {
                    let terms = qstar_terms(f, &inst.base, u, h);
                    let mut x = opens[idx].clone();
                    x.intersect_with(&images[u]);
                    assert_eq!(
                        space.extend(&opens, &x),
                        q_sharp_meet_qstar(&space, idx, &terms),
                        "{} ∧ q*([{}∈F])",
                        space.render(idx),
                        f.name(u)
                    );
                }
            }
        }
    }
}
