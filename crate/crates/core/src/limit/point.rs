use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cauchy::{CauchyError, Certificate, ModulatedSeq};
use crate::frame::{Elem, FiniteFrame};
use crate::uniform::{
    eps, format_rational, star, uniformly_below, GridBase, RationalOpen, UniformityBase,
};

use super::{CaseReport, LimitError};

/// Search bounds for point-level queries: base indices `j < depth`, and
/// `range` sequence indices from the least modulus value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub depth: usize,
    pub range: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { depth: 24, range: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer<Y, N> {
    Yes(Y),
    No(N),
    Unknown,
}

impl<Y, N> Answer<Y, N> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Answer::No(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Answer::Yes(_) => "yes",
            Answer::No(_) => "no",
            Answer::Unknown => "unknown",
        }
    }
}

/// `s(k) ∈ v`, `st(v, U_j) = u'` and `st(u', U_{j2}) = outer ≤ u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub j: usize,
    pub k: usize,
    pub v: RationalOpen,
    pub u_prime: RationalOpen,
    pub j2: usize,
    pub outer: RationalOpen,
}

/// `dist(s(k), u) ≥ distance > g(k) + 2^-j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub j: usize,
    pub k: usize,
    pub distance: Option<BigRational>,
}

/// `floor(x · 2^m)`, without normalizing large rationals.
fn floor_scaled(x: &BigRational, m: usize) -> BigInt {
    (x.numer() << m).div_floor(x.denom())
}

fn dyadic(a: BigInt, m: usize) -> BigRational {
    BigRational::new(a, BigInt::one() << m)
}

/// Distance from `[lo, hi]` to `u`; `None` for empty `u`.
fn distance(lo: &BigRational, hi: &BigRational, u: &RationalOpen) -> Option<BigRational> {
    u.intervals()
        .iter()
        .map(|(a, b)| {
            if hi <= a {
                a - hi
            } else if lo >= b {
                lo - b
            } else {
                BigRational::zero()
            }
        })
        .min()
}

/// Whether `u` belongs to the regular Cauchy filter of the limit of `p`.
///
/// A yes answer exhibits `k ≥ m(U_j)`, a dyadic `v ∋ s(k)` of width
/// `3ε_j/16`, `u' = st(v, U_j)` and some `j2` with `st(u', U_{j2}) ≤ u`. A no
/// answer needs the certificate: a term further from `u` than its tail
/// bound plus `2^-j`.
pub fn filter_query(
    p: &ModulatedSeq<BigRational>,
    u: &RationalOpen,
    budget: Budget,
) -> Result<Answer<Witness, Separation>, CauchyError> {
    let grid = GridBase;
    for j in 0..budget.depth {
        let kmin = p.min_modulus(j)?;
        for k in kmin..kmin + budget.range.max(1) {
            let x = p.term(k);
            let m = j + 4;
            let a = floor_scaled(&x, m);
            let v = RationalOpen::interval(
                dyadic(&a - BigInt::one(), m),
                dyadic(&a + BigInt::from(2), m),
            );
            let u_prime = grid.star(&v, j);
            // stars shrink as the grid refines, so the finest decides
            if grid.star(&u_prime, budget.depth - 1).leq(u) {
                for j2 in 0..budget.depth {
                    let outer = grid.star(&u_prime, j2);
                    if outer.leq(u) {
                        return Ok(Answer::Yes(Witness {
                            j,
                            k,
                            v,
                            u_prime,
                            j2,
                            outer,
                        }));
                    }
                }
            }
            if let Some(g) = p.certificate.as_ref().and_then(|c| c.tail(k)) {
                let mm = j + 8;
                let lo = dyadic(floor_scaled(&x, mm), mm);
                let hi = &lo + dyadic(BigInt::one(), mm);
                let d = distance(&lo, &hi, u);
                let separated = match &d {
                    None => true,
                    Some(d) => *d > g + eps(j),
                };
                if separated {
                    return Ok(Answer::No(Separation { j, k, distance: d }));
                }
            }
        }
    }
    Ok(Answer::Unknown)
}

/// An interval of width `precision` that the filter of the limit contains.
///
/// With `ε_j ≤ precision/6`, the interval of that width centred on the
/// `(precision/4)`-grid point nearest `s(m(U_j))` contains
/// `st(st(v, U_j), U_j)` for the dyadic `v` the query picks.
pub fn approximate(
    p: &ModulatedSeq<BigRational>,
    precision: &BigRational,
) -> Result<(BigRational, BigRational, Witness), LimitError> {
    if !precision.is_positive() {
        return Err(LimitError::Internal("precision must be positive".into()));
    }
    let six = BigRational::from_integer(BigInt::from(6));
    let mut j = 0;
    while eps(j) * &six > *precision {
        j += 1;
    }
    let depth = j + 8;
    let k = p.min_modulus(j)?;
    let m = j + 6;
    let x = dyadic(floor_scaled(&p.term(k), m), m);
    let step = precision / BigRational::from_integer(BigInt::from(4));
    let half = precision / BigRational::from_integer(BigInt::from(2));
    let centre = ((&x / &step) + BigRational::new(BigInt::one(), BigInt::from(2))).floor() * &step;
    for shift in [0i64, -1, 1] {
        let c = &centre + &step * BigRational::from_integer(BigInt::from(shift));
        let (lo, hi) = (&c - &half, &c + &half);
        let u = RationalOpen::interval(lo.clone(), hi.clone());
        if let Answer::Yes(w) = filter_query(p, &u, Budget { depth, range: 2 })? {
            return Ok((lo, hi, w));
        }
    }
    Err(LimitError::BudgetExhausted { depth })
}

/// Lower and upper cut membership through the filter of the limit:
/// `r ∈ L` iff `(r, upper)` is in the filter, `r ∈ U` iff `(lower, r)` is,
/// where `lower < L < upper` follows from the certificate.
#[derive(Debug, Clone)]
pub struct CutOracle {
    seq: ModulatedSeq<BigRational>,
    pub budget: Budget,
    pub lower: BigRational,
    pub upper: BigRational,
}

pub fn dedekind_extract(
    p: &ModulatedSeq<BigRational>,
    budget: Budget,
) -> Result<CutOracle, LimitError> {
    let cert: &Certificate = p
        .certificate
        .as_ref()
        .ok_or(LimitError::Uncertified("cut extraction"))?;
    let from = cert.from();
    let x = p.term(from);
    let g = cert.tail(from).expect("tail bound holds from its start");
    let one = BigRational::one();
    Ok(CutOracle {
        seq: p.clone(),
        budget,
        lower: (&x - &g).floor() - &one,
        upper: (&x + &g).ceil() + &one,
    })
}

impl CutOracle {
    pub fn in_l(&self, r: &BigRational) -> Result<Answer<Witness, Separation>, LimitError> {
        let u = RationalOpen::interval(r.clone(), self.upper.clone());
        Ok(filter_query(&self.seq, &u, self.budget)?)
    }

    pub fn in_u(&self, r: &BigRational) -> Result<Answer<Witness, Separation>, LimitError> {
        let u = RationalOpen::interval(self.lower.clone(), r.clone());
        Ok(filter_query(&self.seq, &u, self.budget)?)
    }

    /// Some `q > r` in `L`, read off the witness for `r`: `u'` lies inside
    /// the star above `r`, so `(inf u', upper)` contains a filter member.
    pub fn l_rounded(&self, r: &BigRational) -> Result<Option<BigRational>, LimitError> {
        if let Answer::Yes(w) = self.in_l(r)? {
            for q in [w.u_prime.inf(), w.outer.inf()].into_iter().flatten() {
                if q > r && self.in_l(q)?.is_yes() {
                    return Ok(Some(q.clone()));
                }
            }
        }
        Ok(None)
    }

    /// Some `q < r` in `U`, read off the witness for `r`.
    pub fn u_rounded(&self, r: &BigRational) -> Result<Option<BigRational>, LimitError> {
        if let Answer::Yes(w) = self.in_u(r)? {
            for q in [w.u_prime.sup(), w.outer.sup()].into_iter().flatten() {
                if q < r && self.in_u(q)?.is_yes() {
                    return Ok(Some(q.clone()));
                }
            }
        }
        Ok(None)
    }
}

/// The eight cut axioms on a sample of rationals, sorted ascending.
/// Roundedness is witnessed by the bound of the star found for each member.
pub fn cut_axioms(cut: &CutOracle, samples: &[BigRational]) -> Result<Vec<CaseReport>, LimitError> {
    let mut l = Vec::with_capacity(samples.len());
    let mut u = Vec::with_capacity(samples.len());
    for r in samples {
        l.push(cut.in_l(r)?.is_yes());
        u.push(cut.in_u(r)?.is_yes());
    }
    let name = |i: usize| format_rational(&samples[i]);
    let mut down = CaseReport::new("L downward closed");
    let mut up = CaseReport::new("U upward closed");
    let mut disjoint = CaseReport::new("L and U disjoint");
    let mut located = CaseReport::new("located");
    for i in 0..samples.len() {
        for j in 0..samples.len() {
            if samples[i] <= samples[j] {
                down.record(!l[j] || l[i], || format!("{} ∈ L but {} ∉ L", name(j), name(i)));
                up.record(!u[i] || u[j], || format!("{} ∈ U but {} ∉ U", name(i), name(j)));
            }
            if samples[i] >= samples[j] {
                disjoint.record(!(l[i] && u[j]), || format!("{} ∈ L and {} ∈ U", name(i), name(j)));
            } else {
                located.record(l[i] || u[j], || format!("neither {} ∈ L nor {} ∈ U", name(i), name(j)));
            }
        }
    }
    let mut l_round = CaseReport::new("L rounded");
    let mut u_round = CaseReport::new("U rounded");
    for (i, r) in samples.iter().enumerate() {
        if l[i] {
            let ok = cut.l_rounded(r)?.is_some();
            l_round.record(ok, || format!("no member of L above {}", name(i)));
        }
        if u[i] {
            let ok = cut.u_rounded(r)?.is_some();
            u_round.record(ok, || format!("no member of U below {}", name(i)));
        }
    }
    let mut l_inh = CaseReport::new("L inhabited");
    l_inh.record(l.iter().any(|&b| b), || "no sample in L".into());
    let mut u_inh = CaseReport::new("U inhabited");
    u_inh.record(u.iter().any(|&b| b), || "no sample in U".into());
    Ok(vec![down, l_round, l_inh, up, u_round, u_inh, disjoint, located])
}

/// `s(k) ∈ v` with `v ⊲_{U_j} u' = st(v, U_j) ⊲ u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteWitness {
    pub j: usize,
    pub k: usize,
    pub v: Elem,
    pub u_prime: Elem,
}

/// The filter query on a finite instance, where points are join-irreducibles
/// and `x ∈ v` means `x ≤ v`. Every `(j, v)` is tried; indices run `range`
/// past the least modulus value, or up to the stabilization index of an
/// eventually-constant sequence, in which case a miss is a definite no.
pub fn finite_filter_query(
    p: &ModulatedSeq<Elem>,
    u: Elem,
    f: &FiniteFrame,
    base: &UniformityBase,
    range: usize,
) -> Result<Answer<FiniteWitness, ()>, CauchyError> {
    let stable = match &p.certificate {
        Some(Certificate::EventuallyConstant { from }) => Some(*from),
        _ => None,
    };
    for (j, cover) in base.covers.iter().enumerate() {
        let kmin = p.min_modulus(j)?;
        let end = match stable {
            Some(from) => kmin.max(from),
            None => kmin + range.max(1) - 1,
        };
        for k in kmin..=end {
            let x = p.term(k);
            for v in f.elements().filter(|&v| f.leq(x, v)) {
                let u_prime = star(f, v, cover);
                if uniformly_below(f, u_prime, u, base).is_some() {
                    return Ok(Answer::Yes(FiniteWitness { j, k, v, u_prime }));
                }
            }
        }
    }
    Ok(if stable.is_some() {
        Answer::No(())
    } else {
        Answer::Unknown
    })
}
