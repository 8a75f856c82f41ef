#![allow(dead_code)]

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use uniform_completion::frame::{Elem, FiniteFrame};
use uniform_completion::instances::{discrete, indiscrete, Instance};
use uniform_completion::uniform::{metric_uniformity, Cover, FiniteMetric, UniformityBase};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Naturally labelled posets: point `i` has strict down-set `lower[i]`, a
/// bitmask over the points before it. Every finite poset has such a
/// labelling, so growing by a new maximal point reaches all of them.
#[derive(Debug, Clone)]
pub struct Poset {
    pub lower: Vec<u32>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_down_set(&self, mask: u32) -> bool {
        (0..self.len()).all(|i| mask >> i & 1 == 0 || self.lower[i] & !mask == 0)
    }

    pub fn down_sets(&self) -> Vec<u32> {
        (0..1u32 << self.len()).filter(|&m| self.is_down_set(m)).collect()
    }
}

/// Every poset with at most `max_points` points whose lattice of down-sets
/// has at most `max_downs` elements, up to relabelling (with repetitions).
pub fn posets(max_points: usize, max_downs: usize) -> Vec<Poset> {
    let mut out = Vec::new();
    let mut stack = vec![Poset { lower: Vec::new() }];
    while let Some(p) = stack.pop() {
        let downs = p.down_sets();
        if downs.len() > max_downs {
            continue;
        }
        if p.len() < max_points {
            for &d in &downs {
                let mut lower = p.lower.clone();
                lower.push(d);
                stack.push(Poset { lower });
            }
        }
        out.push(p);
    }
    out
}

/// The frame of down-sets of `p`.
pub fn down_set_frame(p: &Poset) -> FiniteFrame {
    let mut downs = p.down_sets();
    downs.sort_by_key(|m| (m.count_ones(), *m));
    let names = downs
        .iter()
        .map(|&m| {
            let pts: Vec<String> = (0..p.len()).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
            format!("{{{}}}", pts.join(","))
        })
        .collect();
    let sets: Vec<FixedBitSet> = downs
        .iter()
        .map(|&m| {
            let mut s = FixedBitSet::with_capacity(p.len().max(1));
            for i in (0..p.len()).filter(|i| m >> i & 1 == 1) {
                s.insert(i);
            }
            s
        })
        .collect();
    FiniteFrame::from_sets(names, &sets).expect("down-sets form a distributive lattice")
}

/// Finite distributive lattices with at most `max` elements, one per
/// naturally labelled poset of join-irreducibles (isomorphic copies repeat).
pub fn small_frames(max: usize) -> Vec<FiniteFrame> {
    posets(max, max).iter().map(down_set_frame).collect()
}

/// A meet-semilattice on `n` points as an order matrix: naturally labelled
/// posets in which every pair has a greatest lower bound.
pub fn meet_semilattices(max: usize) -> Vec<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    for p in posets(max, usize::MAX) {
        if p.len() == 0 {
            continue;
        }
        let n = p.len();
        let leq = |a: usize, b: usize| a == b || p.lower[b] >> a & 1 == 1;
        let has_meets = (0..n).all(|a| {
            (0..n).all(|b| {
                let lower: Vec<usize> = (0..n).filter(|&c| leq(c, a) && leq(c, b)).collect();
                lower.iter().any(|&g| lower.iter().all(|&c| leq(c, g)))
            })
        });
        if has_meets {
            out.push((0..n).map(|a| (0..n).map(|b| leq(a, b)).collect()).collect());
        }
    }
    out
}

/// `st(a, U)` from the definition: the join of the members meeting `a`.
pub fn star_oracle(f: &FiniteFrame, a: Elem, members: &[Elem]) -> Elem {
    members
        .iter()
        .filter(|&&u| !f.is_bottom(f.meet(u, a)))
        .fold(f.bottom(), |acc, &u| f.join(acc, u))
}

/// Every member of `c1` lies below a member of `c2`.
pub fn refines_oracle(f: &FiniteFrame, c1: &[Elem], c2: &[Elem]) -> bool {
    c1.iter().all(|&u| c2.iter().any(|&v| f.leq(u, v)))
}

/// Some base cover `U` has `st(a, U) ≤ b`.
pub fn below_oracle(f: &FiniteFrame, base: &UniformityBase, a: Elem, b: Elem) -> bool {
    base.covers.iter().any(|u| f.leq(star_oracle(f, a, u.members()), b))
}

/// `a = ⋁_{b⊲a} b`.
pub fn regular_oracle(f: &FiniteFrame, base: &UniformityBase, a: Elem) -> bool {
    let join = f
        .elements()
        .filter(|&b| below_oracle(f, base, b, a))
        .fold(f.bottom(), |acc, b| f.join(acc, b));
    join == a
}

/// Three points on a line at distances 1, 1, 2 with radii 3, 3/2, 1/2.
pub fn three_point_line() -> Instance {
    let space = FiniteMetric {
        points: vec!["p".into(), "q".into(), "r".into()],
        dist: vec![
            vec![q(0, 1), q(1, 1), q(2, 1)],
            vec![q(1, 1), q(0, 1), q(1, 1)],
            vec![q(2, 1), q(1, 1), q(0, 1)],
        ],
    };
    let (frame, base) = metric_uniformity(&space, &[q(3, 1), q(3, 2), q(1, 2)]).unwrap();
    Instance {
        name: "three-point-line".into(),
        frame,
        base,
    }
}

/// The finite instances the suites run on.
pub fn finite_instances() -> Vec<Instance> {
    vec![discrete(1), discrete(2), discrete(3), indiscrete(2)]
}

pub fn cover_members(c: &Cover) -> Vec<Elem> {
    c.members().to_vec()
}
