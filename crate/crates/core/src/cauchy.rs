//! The locale of modulated Cauchy sequences.
//!
//! For a finite instance the presentation is emitted as ℕ-indexed schemas and
//! truncated at a horizon. On the rational line, points of the locale are
//! given concretely by [`ModulatedSeq`] values.

use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::frame::{Elem, FiniteFrame};
use crate::presentation::{
    Expr, GenId, GeneratorFamily, Horizon, ModelFrame, NamedRelation, Param, Presentation,
    PresentationError, RelationSchema,
};
use crate::uniform::{eps, format_rational, GridBase, UniformityBase};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CauchyError {
    #[error("modulus is undefined at U{0}")]
    ModulusUndefined(usize),
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

pub fn s_name(f: &FiniteFrame, n: usize, u: Elem) -> String {
    format!("[s({n})∈{}]", f.name(u))
}

pub fn m_name(j: usize, k: usize) -> String {
    format!("[m(U{j})={k}]")
}

fn one(name: String) -> Vec<String> {
    vec![name]
}

/// The ℕ-indexed presentation of the Cauchy locale of a finite instance.
#[derive(Debug, Clone)]
pub struct CauchySchema {
    pub presentation: Presentation,
}

/// Emits generators `[s(n)∈u]` and `[m(U_j)=k]` with the relation families
///
/// * (i) each `u ↦ [s(n)∈u]` is a frame homomorphism: it preserves top,
///   bottom, binary meets and binary joins, and is monotone;
/// * (ii) `1 ≤ ⋁_k [m(U_j)=k]`, truncated to `k < K`;
/// * (iii) `[m(U_j)=k] ≤ ⋁_{u∈U_j} [s(n)∈u] ∧ [s(n')∈u]` for `k ≤ n ≤ n'`.
pub fn cauchy_presentation(f: &FiniteFrame, base: &UniformityBase) -> CauchySchema {
    let f = Arc::new(f.clone());
    let covers: Arc<Vec<Vec<Elem>>> =
        Arc::new(base.covers.iter().map(|u| u.members().to_vec()).collect());
    let mut p = Presentation::new();
    let fs = f.clone();
    p.add_family(GeneratorFamily::new(
        "s",
        vec![Param::Nat, Param::Finite(f.len())],
        move |a| s_name(&fs, a[0], a[1]),
    ));
    p.add_family(GeneratorFamily::new(
        "m",
        vec![Param::Base(covers.len()), Param::Nat],
        |a| m_name(a[0], a[1]),
    ));
    let fi = f.clone();
    p.add_schema(RelationSchema::new("(i)", vec![Param::Nat], move |a, _| {
        let n = a[0];
        let f = &fi;
        let s = |u: Elem| s_name(f, n, u);
        let mut out = vec![
            NamedRelation {
                lhs: vec![vec![]],
                rhs: vec![one(s(f.top()))],
            },
            NamedRelation {
                lhs: vec![one(s(f.bottom()))],
                rhs: vec![],
            },
        ];
        for x in f.elements() {
            for y in f.elements() {
                if x < y {
                    out.push(NamedRelation {
                        lhs: vec![vec![s(x), s(y)]],
                        rhs: vec![one(s(f.meet(x, y)))],
                    });
                    out.push(NamedRelation {
                        lhs: vec![one(s(f.join(x, y)))],
                        rhs: vec![one(s(x)), one(s(y))],
                    });
                }
                if x != y && f.leq(x, y) {
                    out.push(NamedRelation {
                        lhs: vec![one(s(x))],
                        rhs: vec![one(s(y))],
                    });
                }
            }
        }
        out
    }));
    p.add_schema(RelationSchema::new(
        "(ii)",
        vec![Param::Base(covers.len())],
        |a, h| {
            vec![NamedRelation {
                lhs: vec![vec![]],
                rhs: (0..h.k()).map(|k| one(m_name(a[0], k))).collect(),
            }]
        },
    ));
    let fc = f.clone();
    let cc = covers.clone();
    p.add_schema(RelationSchema::new(
        "(iii)",
        vec![Param::Base(covers.len()), Param::Nat, Param::Nat, Param::Nat],
        move |a, _| {
            let (j, k, n, n2) = (a[0], a[1], a[2], a[3]);
            if !(k <= n && n <= n2) {
                return vec![];
            }
            vec![NamedRelation {
                lhs: vec![one(m_name(j, k))],
                rhs: cc[j]
                    .iter()
                    .map(|&u| {
                        if n == n2 {
                            vec![s_name(&fc, n, u)]
                        } else {
                            vec![s_name(&fc, n, u), s_name(&fc, n2, u)]
                        }
                    })
                    .collect(),
            }]
        },
    ));
    CauchySchema { presentation: p }
}

/// The finite presentation with every ℕ parameter below `h.k()`.
pub fn truncate_cauchy(schema: &CauchySchema, h: Horizon) -> Result<Presentation, CauchyError> {
    Ok(schema.presentation.instantiate(h)?)
}

/// A truncation of the Cauchy locale, realized on its models.
#[derive(Debug, Clone)]
pub struct CauchyFrame {
    pub horizon: Horizon,
    pub models: ModelFrame,
    s_gen: Vec<Vec<GenId>>,
    m_gen: Vec<Vec<GenId>>,
}

impl CauchyFrame {
    pub fn new(
        f: &FiniteFrame,
        base: &UniformityBase,
        h: Horizon,
        budget: usize,
    ) -> Result<CauchyFrame, CauchyError> {
        let p = truncate_cauchy(&cauchy_presentation(f, base), h)?;
        let s_gen = (0..h.k())
            .map(|n| {
                f.elements()
                    .map(|u| p.generator(&s_name(f, n, u)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let m_gen = (0..base.len().min(h.k()))
            .map(|j| {
                (0..h.k())
                    .map(|k| p.generator(&m_name(j, k)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let models = ModelFrame::new(&p, budget)?;
        Ok(CauchyFrame {
            horizon: h,
            models,
            s_gen,
            m_gen,
        })
    }

    pub fn presentation(&self) -> &Presentation {
        self.models.presentation()
    }

    pub fn k(&self) -> usize {
        self.horizon.k()
    }

    /// Number of base covers present at this horizon.
    pub fn base_len(&self) -> usize {
        self.m_gen.len()
    }

    pub fn s(&self, n: usize, u: Elem) -> GenId {
        self.s_gen[n][u]
    }

    pub fn m(&self, j: usize, k: usize) -> GenId {
        self.m_gen[j][k]
    }
}

/// Checks that sending `[s(K)∈u] ↦ [s(K-1)∈u]`, `[m(U)=K] ↦ 0` and every
/// other generator to itself respects the relations at `K+1`, evaluated in
/// the frame at `K`. Since every generator at `K` is hit, this exhibits the
/// frame at `K` as a quotient of the frame at `K+1`.
pub fn restriction_respects_relations(
    f: &FiniteFrame,
    base: &UniformityBase,
    h: Horizon,
    budget: usize,
) -> Result<Option<String>, CauchyError> {
    let lower = CauchyFrame::new(f, base, h, budget)?;
    let schema = cauchy_presentation(f, base);
    let upper = truncate_cauchy(&schema, h.next())?;
    let k = h.k();
    let lp = lower.presentation();
    let image: Vec<Expr> = upper
        .generators()
        .iter()
        .map(|name| {
            if let Ok(g) = lp.generator(name) {
                return Expr::gen(g);
            }
            let shifted = name.replace(&format!("[s({k})"), &format!("[s({})", k - 1));
            match lp.generator(&shifted) {
                Ok(g) if shifted != *name => Expr::gen(g),
                _ => Expr::bottom(),
            }
        })
        .collect();
    let subst = |e: &Expr| {
        e.terms().iter().fold(Expr::bottom(), |acc, t| {
            let m = t
                .iter()
                .fold(Expr::top(), |m, &g| m.meet(&image[g]));
            acc.join(&m)
        })
    };
    for r in upper.relations() {
        let l = lower.models.eval(&subst(&r.lhs));
        let rv = lower.models.eval(&subst(&r.rhs));
        if !l.is_subset(&rv) {
            return Ok(Some(format!("{} {}", r.label, upper.render_relation(r))));
        }
    }
    Ok(None)
}

/// A declared bound `|s(n) - L| ≤ g(n)` on the distance to the limit, valid
/// for `n ≥ from`, with `g` decreasing from there on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `s(n) = s(from)` for `n ≥ from`.
    EventuallyConstant { from: usize },
    /// `g(n) = scale · ratio^n`.
    Geometric {
        scale: BigRational,
        ratio: BigRational,
        from: usize,
    },
    /// `g(n) = 2|x|^(n+1) / (n+1)!`, the exponential series tail.
    FactorialTail { x: BigRational, from: usize },
}

impl Certificate {
    pub fn from(&self) -> usize {
        match self {
            Certificate::EventuallyConstant { from }
            | Certificate::Geometric { from, .. }
            | Certificate::FactorialTail { from, .. } => *from,
        }
    }

    /// `g(n)`, or `None` before `from`.
    pub fn tail(&self, n: usize) -> Option<BigRational> {
        if n < self.from() {
            return None;
        }
        Some(match self {
            Certificate::EventuallyConstant { .. } => BigRational::zero(),
            Certificate::Geometric { scale, ratio, .. } => scale * num_traits::pow(ratio.clone(), n),
            Certificate::FactorialTail { x, .. } => {
                let mut fact = BigInt::one();
                for i in 2..=(n as u64 + 1) {
                    fact *= i;
                }
                BigRational::from_integer(BigInt::from(2)) * num_traits::pow(x.abs(), n + 1)
                    / BigRational::from_integer(fact)
            }
        })
    }

    /// The side conditions under which `g` is decreasing from `from` on and
    /// the bound has the stated meaning.
    pub fn side_conditions_hold(&self) -> bool {
        match self {
            Certificate::EventuallyConstant { .. } => true,
            Certificate::Geometric { scale, ratio, .. } => {
                !scale.is_negative() && !ratio.is_negative() && ratio < &BigRational::one()
            }
            Certificate::FactorialTail { x, from } => {
                BigRational::from_integer(BigInt::from(*from as u64 + 2))
                    >= BigRational::from_integer(BigInt::from(2)) * x.abs()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Certificate::EventuallyConstant { from } => format!("constant from n={from}"),
            Certificate::Geometric { scale, ratio, from } => format!(
                "|s(n)-L| ≤ {}·({})^n for n ≥ {from}",
                format_rational(scale),
                format_rational(ratio)
            ),
            Certificate::FactorialTail { x, from } => format!(
                "|s(n)-L| ≤ 2·|{}|^(n+1)/(n+1)! for n ≥ {from}",
                format_rational(x)
            ),
        }
    }
}

type Term<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;
type Modulus = Arc<dyn Fn(usize) -> Vec<usize> + Send + Sync>;

/// A sequence program with a modulus: for each base index `j` a nonempty
/// finite set of indices after which terms are `U_j`-close.
#[derive(Clone)]
pub struct ModulatedSeq<T> {
    pub name: String,
    term: Term<T>,
    modulus: Modulus,
    pub certificate: Option<Certificate>,
}

impl<T> std::fmt::Debug for ModulatedSeq<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ModulatedSeq")
            .field("name", &self.name)
            .field("certificate", &self.certificate)
            .finish()
    }
}

impl<T> ModulatedSeq<T> {
    pub fn new(
        name: &str,
        term: impl Fn(usize) -> T + Send + Sync + 'static,
        modulus: impl Fn(usize) -> Vec<usize> + Send + Sync + 'static,
        certificate: Option<Certificate>,
    ) -> ModulatedSeq<T> {
        ModulatedSeq {
            name: name.to_string(),
            term: Arc::new(term),
            modulus: Arc::new(modulus),
            certificate,
        }
    }

    pub fn term(&self, n: usize) -> T {
        (self.term)(n)
    }

    /// The modulus set at `j`, sorted; empty sets are an error.
    pub fn modulus(&self, j: usize) -> Result<Vec<usize>, CauchyError> {
        let mut m = (self.modulus)(j);
        if m.is_empty() {
            return Err(CauchyError::ModulusUndefined(j));
        }
        m.sort_unstable();
        m.dedup();
        Ok(m)
    }

    pub fn min_modulus(&self, j: usize) -> Result<usize, CauchyError> {
        Ok(self.modulus(j)?[0])
    }
}

/// Outcome of validating a modulated sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The certificate implies the Cauchy condition for all `n, n' ≥ k` at
    /// every checked index, and every sample agreed.
    Certified,
    /// Every sample agreed; nothing beyond them is claimed.
    SampledOk { depth: usize },
    /// Terms `n`, `n2` past a modulus value share no member of `U_j`, or
    /// contradict the certificate.
    Refuted {
        j: usize,
        n: usize,
        n2: usize,
        reason: String,
    },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

/// Validates a rational sequence against the grid base: for `j < depth`,
/// `k` in the modulus set and `k ≤ n ≤ n' ≤ k + depth`, some member of `U_j`
/// holds `s(n)` and `s(n')`.
///
/// A certificate `|s(n) - L| ≤ g(n)` places every term from `k` on in an
/// interval of width `2g(k)`, and every closed interval shorter than `3ε/4`
/// lies in a grid member (the nearest centre is within `ε/8` of its middle).
/// So `2g(k) < 3ε_j/4` proves the condition for all `n, n' ≥ k`.
pub fn validate_modulated_seq(
    p: &ModulatedSeq<BigRational>,
    depth: usize,
) -> Result<Verdict, CauchyError> {
    let grid = GridBase;
    let three_quarters = BigRational::new(BigInt::from(3), BigInt::from(4));
    let mut all_certified = p
        .certificate
        .as_ref()
        .map(|c| c.side_conditions_hold())
        .unwrap_or(false);
    for j in 0..depth {
        for k in p.modulus(j)? {
            for n in k..=(k + depth) {
                let x = p.term(n);
                for n2 in n..=(k + depth) {
                    let y = p.term(n2);
                    if !grid.share_member(j, &x, &y) {
                        return Ok(Verdict::Refuted {
                            j,
                            n,
                            n2,
                            reason: format!("no member of U{j} holds both terms"),
                        });
                    }
                    if let Some(c) = &p.certificate {
                        if let (Some(gx), Some(gy)) = (c.tail(n), c.tail(n2)) {
                            if (&x - &y).abs() > gx + gy {
                                return Ok(Verdict::Refuted {
                                    j,
                                    n,
                                    n2,
                                    reason: "terms contradict the certificate".into(),
                                });
                            }
                        }
                    }
                }
            }
            if let Some(c) = &p.certificate {
                let covered = match c.tail(k) {
                    Some(g) => {
                        BigRational::from_integer(BigInt::from(2)) * g < &three_quarters * eps(j)
                    }
                    None => false,
                };
                if !covered {
                    all_certified = false;
                }
            }
        }
    }
    Ok(if all_certified {
        Verdict::Certified
    } else {
        Verdict::SampledOk { depth }
    })
}

/// Validates a sequence of points of a finite frame (each point given by the
/// join-irreducible whose up-set is its neighbourhood filter). With an
/// eventually-constant certificate, pairs up to the stabilization index are
/// checked exhaustively and the verdict is a certification.
pub fn validate_finite_seq(
    p: &ModulatedSeq<Elem>,
    f: &FiniteFrame,
    base: &UniformityBase,
    depth: usize,
) -> Result<Verdict, CauchyError> {
    let from = match &p.certificate {
        Some(Certificate::EventuallyConstant { from }) => Some(*from),
        _ => None,
    };
    for (j, cover) in base.covers.iter().enumerate() {
        for k in p.modulus(j)? {
            let end = match from {
                Some(fr) => fr.max(k),
                None => k + depth,
            };
            for n in k..=end {
                for n2 in n..=end {
                    let (x, y) = (p.term(n), p.term(n2));
                    let shared = cover
                        .members()
                        .iter()
                        .any(|&u| f.leq(x, u) && f.leq(y, u));
                    if !shared {
                        return Ok(Verdict::Refuted {
                            j,
                            n,
                            n2,
                            reason: format!("no member of U{j} holds both terms"),
                        });
                    }
                }
            }
        }
    }
    Ok(match from {
        Some(_) => Verdict::Certified,
        None => Verdict::SampledOk { depth },
    })
}

/// Least `n ≥ from` with `2g(n) < ε_j/2`.
fn certified_modulus(c: &Certificate, j: usize) -> usize {
    let target = eps(j) / BigRational::from_integer(BigInt::from(4));
    let mut n = c.from();
    while c.tail(n).expect("n ≥ from") >= target {
        n += 1;
    }
    n
}

fn with_certified_modulus(
    name: &str,
    term: impl Fn(usize) -> BigRational + Send + Sync + 'static,
    cert: Certificate,
) -> ModulatedSeq<BigRational> {
    let c = cert.clone();
    ModulatedSeq::new(
        name,
        term,
        move |j| vec![certified_modulus(&c, j)],
        Some(cert),
    )
}

/// The constant sequence at `q`, modulus `j ↦ {0}`.
pub fn const_seq(q: BigRational) -> ModulatedSeq<BigRational> {
    let name = format!("const({})", format_rational(&q));
    ModulatedSeq::new(
        &name,
        move |_| q.clone(),
        |_| vec![0],
        Some(Certificate::EventuallyConstant { from: 0 }),
    )
}

fn memoized(
    step: impl Fn(&BigRational, usize) -> BigRational + Send + Sync + 'static,
    first: BigRational,
) -> impl Fn(usize) -> BigRational + Send + Sync + 'static {
    let memo = Mutex::new(vec![first]);
    move |n| {
        let mut m = memo.lock().expect("memo lock");
        while m.len() <= n {
            let i = m.len();
            let next = step(&m[i - 1], i);
            m.push(next);
        }
        m[n].clone()
    }
}

/// Newton's iteration for `√q`: `s(0) = max(q, 1)`, `s(n+1) = s(n)/2 + q/(2s(n))`.
///
/// Every iterate from `s(0)` on is at least `√q`, and the error satisfies
/// `e(n+1) = e(n)²/(2s(n)) ≤ e(n)²/(2r)` for a rational `r ≤ √q`, while
/// `e(n) ≤ s(n) - q/s(n)`. Once that computable bound is at most `r/2`, the
/// error shrinks at least fourfold per step, which gives the certificate.
pub fn newton_sqrt(q: BigRational) -> Result<ModulatedSeq<BigRational>, CauchyError> {
    if !q.is_positive() {
        return Err(CauchyError::InvalidSequence(
            "newton-sqrt needs a positive argument".into(),
        ));
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let first = if q > BigRational::one() {
        q.clone()
    } else {
        BigRational::one()
    };
    let qq = q.clone();
    let term = memoized(
        move |s, _| s / BigRational::from_integer(BigInt::from(2)) + &qq / (s * BigRational::from_integer(BigInt::from(2))),
        first,
    );
    // rational lower bound for √q
    let r = if q >= BigRational::one() {
        BigRational::one()
    } else {
        q.clone()
    };
    let mut n0 = 1;
    let bound = loop {
        let s = term(n0);
        let d = &s - &q / &s;
        if d <= &r / &two {
            break d;
        }
        n0 += 1;
    };
    let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
    let scale = bound * num_traits::pow(BigRational::from_integer(BigInt::from(4)), n0);
    let cert = Certificate::Geometric {
        scale,
        ratio: quarter,
        from: n0,
    };
    Ok(with_certified_modulus(
        &format!("newton-sqrt({})", format_rational(&q)),
        term,
        cert,
    ))
}

/// Partial sums `Σ_{i≤n} x^i/i!` of the exponential series.
pub fn exp_series(x: BigRational) -> ModulatedSeq<BigRational> {
    let xx = x.clone();
    // s(n) = s(n-1) + x^n/n!, carried with the last summand
    let summand = {
        let xs = x.clone();
        memoized(
            move |prev, i| prev * &xs / BigRational::from_integer(BigInt::from(i as u64)),
            BigRational::one(),
        )
    };
    let summand = Arc::new(summand);
    let sm = summand.clone();
    let term = memoized(move |prev, i| prev + sm(i), BigRational::one());
    let twice = BigRational::from_integer(BigInt::from(2)) * xx.abs();
    let mut from = 0usize;
    while BigRational::from_integer(BigInt::from(from as u64 + 2)) < twice {
        from += 1;
    }
    let cert = Certificate::FactorialTail { x: xx, from };
    with_certified_modulus(&format!("exp-series({})", format_rational(&x)), term, cert)
}

/// Parses `const:q`, `newton-sqrt:q` or `exp-series:q`.
pub fn builtin_sequence(spec: &str) -> Result<ModulatedSeq<BigRational>, CauchyError> {
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| CauchyError::InvalidSequence(format!("expected kind:value, got `{spec}`")))?;
    let q = crate::uniform::parse_rational(arg)
        .ok_or_else(|| CauchyError::InvalidSequence(format!("bad rational `{arg}`")))?;
    match kind {
        "const" => Ok(const_seq(q)),
        "newton-sqrt" => newton_sqrt(q),
        "exp-series" => Ok(exp_series(q)),
        _ => Err(CauchyError::InvalidSequence(format!("unknown sequence `{kind}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::discrete;
    use crate::presentation::DEFAULT_BUDGET;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn truncation_at_two_on_discrete_two() {
        let inst = discrete(2);
        let schema = cauchy_presentation(&inst.frame, &inst.base);
        let p = truncate_cauchy(&schema, Horizon::new(2).unwrap()).unwrap();
        assert_eq!(p.generators().len(), 2 * 4 + 2);
        let rendered: Vec<String> = p.relations().iter().map(|r| p.render_relation(r)).collect();
        assert!(rendered.contains(&"⊤ ≤ [m(U0)=0] ∨ [m(U0)=1]".to_string()));
        assert!(rendered.contains(&"⊤ ≤ [s(0)∈1]".to_string()));
        // (iii) instances only for k ≤ n ≤ n' < 2
        let third: Vec<&str> = p
            .relations()
            .iter()
            .filter(|r| r.label.starts_with("(iii)"))
            .map(|r| r.label.as_str())
            .collect();
        assert_eq!(third, vec!["(iii)[0,0,0,0]", "(iii)[0,0,0,1]", "(iii)[0,0,1,1]", "(iii)[0,1,1,1]"]);
    }

    #[test]
    fn cauchyness_instance_matches_direct_instantiation() {
        let inst = discrete(2);
        let schema = cauchy_presentation(&inst.frame, &inst.base);
        let p = truncate_cauchy(&schema, Horizon::new(3).unwrap()).unwrap();
        let r = p
            .relations()
            .iter()
            .find(|r| r.label == "(iii)[0,1,1,2]")
            .unwrap();
        assert_eq!(
            p.render_relation(r),
            "[m(U0)=1] ≤ ([s(1)∈{a}] ∧ [s(2)∈{a}]) ∨ ([s(1)∈{b}] ∧ [s(2)∈{b}])"
        );
    }

    #[test]
    fn relations_grow_with_the_horizon() {
        let inst = discrete(2);
        let schema = cauchy_presentation(&inst.frame, &inst.base);
        for k in 2..4 {
            let lo = truncate_cauchy(&schema, Horizon::new(k).unwrap()).unwrap();
            let hi = truncate_cauchy(&schema, Horizon::new(k + 1).unwrap()).unwrap();
            for r in lo.relations() {
                let text = lo.render_relation(r);
                let same = hi.relations().iter().any(|s| hi.render_relation(s) == text);
                // the truncated left-totality join only gains joinands
                let weakened = r.label.starts_with("(ii)")
                    && hi.relations().iter().any(|s| {
                        s.label == r.label
                            && hi.render(&s.rhs).starts_with(&lo.render(&r.rhs))
                    });
                assert!(same || weakened, "{text}");
            }
        }
    }

    #[test]
    fn model_counts() {
        let inst = discrete(2);
        let cf = CauchyFrame::new(&inst.frame, &inst.base, Horizon::new(2).unwrap(), DEFAULT_BUDGET)
            .unwrap();
        // sequences of 2 points, moduli: nonempty sets of allowed k
        // m={0}: s constant (2); m={1}: any (4); m={0,1}: constant (2)
        assert_eq!(cf.models.model_count(), 8);
        let (lat, _) = cf.models.lattice(DEFAULT_BUDGET).unwrap();
        assert_eq!(lat.len(), 100);
    }

    #[test]
    fn higher_horizons_restrict_onto_lower() {
        let inst = discrete(2);
        for k in 2..=3 {
            let r = restriction_respects_relations(
                &inst.frame,
                &inst.base,
                Horizon::new(k).unwrap(),
                DEFAULT_BUDGET,
            )
            .unwrap();
            assert_eq!(r, None);
        }
    }

    #[test]
    fn constant_sequence_is_certified() {
        assert_eq!(
            validate_modulated_seq(&const_seq(q(1, 2)), 8).unwrap(),
            Verdict::Certified
        );
    }

    #[test]
    fn newton_sequence_is_certified() {
        let s = newton_sqrt(q(2, 1)).unwrap();
        assert_eq!(s.term(0), q(2, 1));
        assert_eq!(s.term(1), q(3, 2));
        assert_eq!(s.term(2), q(17, 12));
        // the derived certificate implies |s(n) - √2| ≤ 2·4^-n from n = 1
        let c = s.certificate.clone().unwrap();
        assert!(c.from() <= 1);
        for n in 1..12 {
            assert!(c.tail(n).unwrap() <= q(2, 1) * num_traits::pow(q(1, 4), n));
        }
        assert_eq!(validate_modulated_seq(&s, 6).unwrap(), Verdict::Certified);
        for d in 2..6 {
            assert_eq!(validate_modulated_seq(&s, d).unwrap(), Verdict::Certified);
        }
    }

    #[test]
    fn identity_sequence_is_refuted() {
        let s = ModulatedSeq::new(
            "id",
            |n| BigRational::from_integer(BigInt::from(n as u64)),
            |_| vec![0],
            None,
        );
        assert!(validate_modulated_seq(&s, 4).unwrap().is_refuted());
    }

    #[test]
    fn undefined_modulus() {
        let s = ModulatedSeq::new("bad", |_| q(0, 1), |j| if j < 2 { vec![0] } else { vec![] }, None);
        assert_eq!(
            validate_modulated_seq(&s, 4).unwrap_err(),
            CauchyError::ModulusUndefined(2)
        );
    }

    #[test]
    fn exp_series_certificate_holds_against_partial_sums() {
        let s = exp_series(q(1, 1));
        let c = s.certificate.clone().unwrap();
        // |s(n) - s(n+m)| is bounded by the tail bound at n
        for n in c.from()..10 {
            let g = c.tail(n).unwrap();
            assert!((s.term(n) - s.term(n + 6)).abs() <= g);
        }
        assert_eq!(validate_modulated_seq(&s, 6).unwrap(), Verdict::Certified);
    }

    #[test]
    fn finite_eventually_constant_sequences_are_certified() {
        let inst = discrete(2);
        let a = inst.frame.elem("{a}").unwrap();
        let b = inst.frame.elem("{b}").unwrap();
        let s = ModulatedSeq::new(
            "b then a",
            move |n| if n < 3 { b } else { a },
            |_| vec![3],
            Some(Certificate::EventuallyConstant { from: 3 }),
        );
        assert_eq!(
            validate_finite_seq(&s, &inst.frame, &inst.base, 4).unwrap(),
            Verdict::Certified
        );
        let early = ModulatedSeq::new(
            "early modulus",
            move |n| if n < 3 { b } else { a },
            |_| vec![1],
            Some(Certificate::EventuallyConstant { from: 3 }),
        );
        assert!(validate_finite_seq(&early, &inst.frame, &inst.base, 4)
            .unwrap()
            .is_refuted());
    }

    #[test]
    fn parsing_builtins() {
        assert!(builtin_sequence("const:3/7").is_ok());
        assert!(builtin_sequence("newton-sqrt:2").is_ok());
        assert!(builtin_sequence("exp-series:1").is_ok());
        assert!(builtin_sequence("newton-sqrt:-1").is_err());
        assert!(builtin_sequence("nope:1").is_err());
    }
}
