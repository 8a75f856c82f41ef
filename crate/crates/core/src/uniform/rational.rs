//! Opens of the rational line and its grid uniformity.
//!
//! Opens are finite unions of bounded open intervals with rational endpoints.
//! The base cover `U_j` consists of the intervals `(q - ε/2, q + ε/2)` for
//! `ε = 2^-j` and `q` on the grid `(ε/4)ℤ`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `2^-j`.
pub fn eps(j: usize) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << j)
}

/// Smallest multiple of `step` strictly above `t`.
pub fn grid_above(t: &BigRational, step: &BigRational) -> BigRational {
    (t / step).floor() * step + step
}

/// Largest multiple of `step` strictly below `t`.
pub fn grid_below(t: &BigRational, step: &BigRational) -> BigRational {
    (t / step).ceil() * step - step
}

/// A finite union of bounded open rational intervals in canonical form:
/// sorted, nonempty, pairwise disjoint. Intervals that merely share an
/// endpoint stay separate, since the endpoint is not in the union.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalOpen {
    intervals: Vec<(BigRational, BigRational)>,
}

impl RationalOpen {
    pub fn empty() -> RationalOpen {
        RationalOpen {
            intervals: Vec::new(),
        }
    }

    pub fn interval(lo: BigRational, hi: BigRational) -> RationalOpen {
        RationalOpen::from_intervals(vec![(lo, hi)])
    }

    /// The ball `(x - r, x + r)`.
    pub fn ball(x: &BigRational, r: &BigRational) -> RationalOpen {
        RationalOpen::interval(x - r, x + r)
    }

    pub fn from_intervals(mut raw: Vec<(BigRational, BigRational)>) -> RationalOpen {
        raw.retain(|(lo, hi)| lo < hi);
        raw.sort();
        let mut intervals: Vec<(BigRational, BigRational)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some(last) if lo < last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => intervals.push((lo, hi)),
            }
        }
        RationalOpen { intervals }
    }

    pub fn intervals(&self) -> &[(BigRational, BigRational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn inf(&self) -> Option<&BigRational> {
        self.intervals.first().map(|i| &i.0)
    }

    pub fn sup(&self) -> Option<&BigRational> {
        self.intervals.last().map(|i| &i.1)
    }

    pub fn join(&self, other: &RationalOpen) -> RationalOpen {
        let mut all = self.intervals.clone();
        all.extend(other.intervals.iter().cloned());
        RationalOpen::from_intervals(all)
    }

    pub fn meet(&self, other: &RationalOpen) -> RationalOpen {
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            for (c, d) in &other.intervals {
                let lo = if a > c { a } else { c };
                let hi = if b < d { b } else { d };
                if lo < hi {
                    out.push((lo.clone(), hi.clone()));
                }
            }
        }
        RationalOpen::from_intervals(out)
    }

    /// Inclusion. Each interval must sit inside one component of `other`,
    /// because the gaps between components contain rational points.
    pub fn leq(&self, other: &RationalOpen) -> bool {
        self.intervals.iter().all(|(a, b)| {
            other
                .intervals
                .iter()
                .any(|(c, d)| c <= a && b <= d)
        })
    }

    pub fn overlaps(&self, other: &RationalOpen) -> bool {
        !self.meet(other).is_empty()
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.intervals.iter().any(|(a, b)| a < x && x < b)
    }

    /// Distance from `x` to the closure; `None` for the empty open.
    pub fn distance_to(&self, x: &BigRational) -> Option<BigRational> {
        self.intervals
            .iter()
            .map(|(a, b)| {
                if x < a {
                    a - x
                } else if x > b {
                    x - b
                } else {
                    BigRational::zero()
                }
            })
            .min()
    }
}

impl fmt::Display for RationalOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        let parts: Vec<String> = self
            .intervals
            .iter()
            .map(|(a, b)| format!("({a}, {b})"))
            .collect();
        f.write_str(&parts.join(" ∪ "))
    }
}

/// The grid base of the rational line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GridBase;

impl GridBase {
    pub fn eps(&self, j: usize) -> BigRational {
        eps(j)
    }

    /// Spacing of the centres of `U_j`.
    pub fn step(&self, j: usize) -> BigRational {
        eps(j) / BigRational::from_integer(BigInt::from(4))
    }

    /// The member of `U_j` centred at `q`.
    pub fn member(&self, j: usize, q: &BigRational) -> RationalOpen {
        let half = eps(j) / BigRational::from_integer(BigInt::from(2));
        RationalOpen::ball(q, &half)
    }

    /// `st(a, U_j)`. The members meeting a component `(x, y)` are those with
    /// centre in `(x - ε/2, y + ε/2)`; consecutive members overlap, so their
    /// union is a single interval.
    pub fn star(&self, a: &RationalOpen, j: usize) -> RationalOpen {
        let half = eps(j) / BigRational::from_integer(BigInt::from(2));
        let step = self.step(j);
        let parts = a
            .intervals()
            .iter()
            .map(|(x, y)| {
                let qmin = grid_above(&(x - &half), &step);
                let qmax = grid_below(&(y + &half), &step);
                (qmin - &half, qmax + &half)
            })
            .collect();
        RationalOpen::from_intervals(parts)
    }

    /// Claimed index `j'` with `U_{j'}⋆ ≤ U_j`.
    pub fn star_witness(&self, j: usize) -> usize {
        j + 2
    }

    /// Decides `U_{jp}⋆ ≤ U_j` exactly. For `jp ≥ j` the configuration
    /// repeats with period `ε_j/4`, so it suffices to check the centres
    /// `r·ε_{jp}/4` for `r < 2^(jp-j)`. For `jp < j` the stars are longer
    /// than any member of `U_j`.
    pub fn star_refines(&self, jp: usize, j: usize) -> bool {
        if jp < j {
            return false;
        }
        let step = self.step(j);
        let small = self.step(jp);
        let half = eps(j) / BigRational::from_integer(BigInt::from(2));
        (0..(1usize << (jp - j))).all(|r| {
            let q = &small * BigRational::from_integer(BigInt::from(r));
            let member = self.member(jp, &q);
            let st = self.star(&member, jp);
            let (lo, hi) = st.intervals()[0].clone();
            // centres c with c - ε/2 ≤ lo and hi ≤ c + ε/2
            let cmin = &hi - &half;
            let cmax = &lo + &half;
            let c = (&cmax / &step).floor() * &step;
            c >= cmin
        })
    }

    /// Checks every star witness `j ↦ j + 2` for `j < depth`.
    pub fn validate(&self, depth: usize) -> Result<(), usize> {
        match (0..depth).find(|&j| !self.star_refines(self.star_witness(j), j)) {
            Some(j) => Err(j),
            None => Ok(()),
        }
    }

    /// Grid centres `q` of the members of `U_j` containing `x`.
    pub fn centres_containing(&self, j: usize, x: &BigRational) -> Vec<BigRational> {
        let half = eps(j) / BigRational::from_integer(BigInt::from(2));
        let step = self.step(j);
        let mut q = grid_above(&(x - &half), &step);
        let hi = x + &half;
        let mut out = Vec::new();
        while q < hi {
            out.push(q.clone());
            q += &step;
        }
        out
    }

    /// Whether some member of `U_j` contains both `x` and `y`: a grid centre
    /// lies in `(max - ε/2, min + ε/2)`.
    pub fn share_member(&self, j: usize, x: &BigRational, y: &BigRational) -> bool {
        let half = eps(j) / BigRational::from_integer(BigInt::from(2));
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        let step = self.step(j);
        grid_above(&(hi - &half), &step) < lo + &half
    }
}

/// Outcome of a depth-bounded `⊲` search on the rational line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Below {
    Yes(usize),
    No,
    Unknown,
}

/// `a ⊲ b` on the rational line: the least `j < depth` with
/// `st(a, U_j) ≤ b`. Answers `No` only when `a` is nonempty and not
/// contained in `b`, since then no star can fit.
pub fn uniformly_below_rational(a: &RationalOpen, b: &RationalOpen, depth: usize) -> Below {
    let grid = GridBase;
    if a.is_empty() {
        return Below::Yes(0);
    }
    if !a.leq(b) {
        return Below::No;
    }
    match (0..depth).find(|&j| grid.star(a, j).leq(b)) {
        Some(j) => Below::Yes(j),
        None => Below::Unknown,
    }
}

/// Parses `"n/d"`, `"n"`, or a decimal such as `"1e-6"` or `"0.25"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(all);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// `"n/d"`, or `"n"` for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// A decimal rendering truncated toward zero to `digits` places.
pub fn decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (q.abs() * BigRational::from_integer(scale.clone())).floor().to_integer();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if q.is_negative() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn iv(a: (i64, i64), b: (i64, i64)) -> RationalOpen {
        RationalOpen::interval(q(a.0, a.1), q(b.0, b.1))
    }

    #[test]
    fn canonical_form() {
        let u = RationalOpen::from_intervals(vec![
            (q(1, 1), q(2, 1)),
            (q(0, 1), q(1, 1)),
            (q(1, 2), q(3, 2)),
        ]);
        assert_eq!(u, iv((0, 1), (2, 1)));
        let touching = iv((0, 1), (1, 1)).join(&iv((1, 1), (2, 1)));
        assert_eq!(touching.intervals().len(), 2);
        assert!(!iv((0, 1), (2, 1)).leq(&touching));
        assert!(!touching.contains(&q(1, 1)));
        assert!(iv((3, 1), (2, 1)).is_empty());
    }

    #[test]
    fn star_of_member_is_short() {
        let g = GridBase;
        for j in 0..5 {
            let e = eps(j);
            let m = g.member(j, &q(3, 4));
            let st = g.star(&m, j);
            let (lo, hi) = st.intervals()[0].clone();
            assert!(hi - lo <= &e * q(3, 1));
            // brute force: members with centres on a wide grid window
            let step = g.step(j);
            let mut brute = RationalOpen::empty();
            for k in -80..80 {
                let c = &step * q(k, 1);
                let member = g.member(j, &c);
                if member.overlaps(&m) {
                    brute = brute.join(&member);
                }
            }
            assert_eq!(brute, st);
        }
    }

    #[test]
    fn star_refinement_witnesses() {
        let g = GridBase;
        assert!(g.validate(12).is_ok());
        assert!(!g.star_refines(1, 0));
        assert!(!g.star_refines(0, 0));
        assert!(!g.star_refines(0, 1));
    }

    #[test]
    fn unit_interval_well_inside() {
        let a = iv((0, 1), (1, 1));
        let b = iv((-1, 1), (2, 1));
        let Below::Yes(j) = uniformly_below_rational(&a, &b, 10) else {
            panic!("expected a witness");
        };
        assert!(GridBase.star(&a, j).leq(&b));
        // the coarse index 2, where 3·2^-2 < 1, also witnesses
        assert!(GridBase.star(&a, 2).leq(&b));
        assert_eq!(uniformly_below_rational(&b, &a, 10), Below::No);
        assert_eq!(uniformly_below_rational(&a, &a, 10), Below::Unknown);
    }

    #[test]
    fn shared_members() {
        let g = GridBase;
        assert!(g.share_member(0, &q(0, 1), &q(1, 2)));
        assert!(!g.share_member(0, &q(0, 1), &q(1, 1)));
        for c in g.centres_containing(2, &q(1, 3)) {
            assert!(g.member(2, &c).contains(&q(1, 3)));
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/7"), Some(q(3, 7)));
        assert_eq!(parse_rational("-2"), Some(q(-2, 1)));
        assert_eq!(parse_rational("1e-6"), Some(q(1, 1_000_000)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&q(6, 4)), "3/2");
        assert_eq!(decimal(&q(-1, 3), 3), "-0.333");
    }
}
