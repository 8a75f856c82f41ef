mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use proptest::prelude::*;

use common::{q, small_frames};
use uniform_completion::cauchy::{
    const_seq, exp_series, newton_sqrt, validate_modulated_seq, ModulatedSeq, Verdict,
};
use uniform_completion::limit::{approximate, filter_query, Answer, Budget};
use uniform_completion::uniform::{
    antichain_strong_covers, regular_interiors, validate_uniformity, GridBase, RationalOpen,
    UniformityBase,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-400i64..400, 1i64..40).prop_map(|(n, d)| q(n, d))
}

fn positive() -> impl Strategy<Value = BigRational> {
    (1i64..400, 1i64..40).prop_map(|(n, d)| q(n, d))
}

/// A limit with an exact description.
#[derive(Debug, Clone)]
enum Limit {
    Rational(BigRational),
    Sqrt(BigRational),
}

impl Limit {
    fn seq(&self) -> ModulatedSeq<BigRational> {
        match self {
            Limit::Rational(c) => const_seq(c.clone()),
            Limit::Sqrt(c) => newton_sqrt(c.clone()).unwrap(),
        }
    }

    /// `Some(true)` when the limit is below `r`, `Some(false)` when above.
    fn below(&self, r: &BigRational) -> Option<bool> {
        match self {
            Limit::Rational(v) => (r != v).then(|| v < r),
            Limit::Sqrt(_) if !r.is_positive() => Some(false),
            Limit::Sqrt(v) => (r * r != *v).then(|| *v < r * r),
        }
    }
}

fn limit() -> impl Strategy<Value = Limit> {
    prop_oneof![rational().prop_map(Limit::Rational), positive().prop_map(Limit::Sqrt)]
}

fn interval() -> impl Strategy<Value = (BigRational, BigRational)> {
    (rational(), positive()).prop_map(|(a, w)| (a.clone(), a + w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn answers_agree_with_the_limit(l in limit(), (a, b) in interval()) {
        let s = l.seq();
        let u = RationalOpen::interval(a.clone(), b.clone());
        match filter_query(&s, &u, Budget { depth: 16, range: 2 }).unwrap() {
            Answer::Yes(_) => prop_assert!(l.below(&a) == Some(false) && l.below(&b) == Some(true)),
            Answer::No(_) => prop_assert!(l.below(&a) != Some(false) || l.below(&b) != Some(true)),
            Answer::Unknown => {}
        }
    }

    #[test]
    fn the_filter_is_upward_closed_and_has_meets(c in rational(), m1 in 1i64..50, m2 in 1i64..50, m3 in 1i64..50, m4 in 1i64..50) {
        let s = const_seq(c.clone());
        let b = Budget { depth: 16, range: 2 };
        let u1 = RationalOpen::interval(&c - q(m1, 100), &c + q(m2, 100));
        let u2 = RationalOpen::interval(&c - q(m3, 100), &c + q(m4, 100));
        prop_assert!(filter_query(&s, &u1, b).unwrap().is_yes());
        prop_assert!(filter_query(&s, &u2, b).unwrap().is_yes());
        prop_assert!(filter_query(&s, &u1.meet(&u2), b).unwrap().is_yes());
        prop_assert!(filter_query(&s, &u1.join(&u2), b).unwrap().is_yes());
        let wider = RationalOpen::interval(&c - q(1, 1), &c + q(1, 1));
        prop_assert!(filter_query(&s, &wider.join(&u1), b).unwrap().is_yes());
    }

    #[test]
    fn approximations_have_the_width_and_contain_the_limit(l in limit(), n in 2i64..100_000) {
        let s = l.seq();
        let precision = q(1, n);
        let (lo, hi, _) = approximate(&s, &precision).unwrap();
        prop_assert!(&hi - &lo <= precision);
        prop_assert!(l.below(&lo) != Some(true) && l.below(&hi) != Some(false));
    }

    #[test]
    fn grid_members_near_late_terms_are_in_the_filter(l in limit(), j in 0usize..8) {
        let s = l.seq();
        let grid = GridBase;
        let x = s.term(s.min_modulus(j + 3).unwrap());
        let step = grid.step(j);
        let half = q(1, 2);
        let centre = ((&x / &step) + &half).floor() * &step;
        let member = grid.member(j, &centre);
        let answer = filter_query(&s, &member, Budget { depth: j + 4, range: 2 }).unwrap();
        prop_assert!(answer.is_yes(), "{} not in the filter", member);
    }

    #[test]
    fn builtin_sequences_are_certified(c in positive(), e in -30i64..30) {
        prop_assert_eq!(validate_modulated_seq(&const_seq(c.clone()), 6).unwrap(), Verdict::Certified);
        prop_assert_eq!(validate_modulated_seq(&newton_sqrt(c).unwrap(), 6).unwrap(), Verdict::Certified);
        let x = BigRational::new(BigInt::from(e), BigInt::from(10));
        prop_assert_eq!(validate_modulated_seq(&exp_series(x), 6).unwrap(), Verdict::Certified);
    }

    #[test]
    fn regular_interiors_are_an_interior_operator(i in 0usize..55, picks in proptest::collection::vec(0usize..64, 1..3)) {
        let frames = small_frames(8);
        let f = &frames[i % frames.len()];
        let covers = antichain_strong_covers(f);
        prop_assume!(!covers.is_empty());
        let chosen = picks.iter().map(|p| covers[p % covers.len()].clone()).collect();
        let base = UniformityBase::with_found_witnesses(f, chosen);
        prop_assume!(validate_uniformity(&base, f).is_valid());
        let int = regular_interiors(f, &base);
        for a in f.elements() {
            prop_assert!(f.leq(int[a], a));
            prop_assert_eq!(int[int[a]], int[a]);
            for b in f.elements().filter(|&b| f.leq(a, b)) {
                prop_assert!(f.leq(int[a], int[b]));
            }
        }
    }
}
