use std::fmt;

/// Index of a generator in its presentation.
pub type GenId = usize;

/// A join of finite meets of generators.
///
/// Each term is a sorted, duplicate-free list of generators (their meet);
/// the empty term is TOP. The empty join is BOTTOM. Terms are kept sorted and
/// absorbed: no term is a superset of another.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Expr {
    terms: Vec<Vec<GenId>>,
}

impl Expr {
    pub fn top() -> Expr {
        Expr {
            terms: vec![Vec::new()],
        }
    }

    pub fn bottom() -> Expr {
        Expr { terms: Vec::new() }
    }

    pub fn gen(g: GenId) -> Expr {
        Expr {
            terms: vec![vec![g]],
        }
    }

    pub fn meet_of<I: IntoIterator<Item = GenId>>(gens: I) -> Expr {
        Expr::from_terms(vec![gens.into_iter().collect()])
    }

    pub fn join_of<I: IntoIterator<Item = GenId>>(gens: I) -> Expr {
        Expr::from_terms(gens.into_iter().map(|g| vec![g]).collect())
    }

    pub fn from_terms(terms: Vec<Vec<GenId>>) -> Expr {
        let mut terms: Vec<Vec<GenId>> = terms
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t.dedup();
                t
            })
            .collect();
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        terms.dedup();
        let mut kept: Vec<Vec<GenId>> = Vec::with_capacity(terms.len());
        for t in terms {
            // a meet containing a kept meet lies below it
            if !kept.iter().any(|k| is_sorted_subset(k, &t)) {
                kept.push(t);
            }
        }
        kept.sort();
        Expr { terms: kept }
    }

    pub fn terms(&self) -> &[Vec<GenId>] {
        &self.terms
    }

    pub fn is_top(&self) -> bool {
        self.terms.iter().any(|t| t.is_empty())
    }

    pub fn is_bottom(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn join(&self, other: &Expr) -> Expr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Expr::from_terms(terms)
    }

    pub fn meet(&self, other: &Expr) -> Expr {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut t = a.clone();
                t.extend_from_slice(b);
                terms.push(t);
            }
        }
        Expr::from_terms(terms)
    }

    pub fn generators(&self) -> impl Iterator<Item = GenId> + '_ {
        self.terms.iter().flatten().copied()
    }

    /// Renders with the given generator names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_bottom() {
            return "⊥".to_string();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "⊤".to_string()
                } else {
                    t.iter()
                        .map(|&g| names[g].as_str())
                        .collect::<Vec<_>>()
                        .join(" ∧ ")
                }
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            parts
                .into_iter()
                .map(|p| if p.contains('∧') { format!("({p})") } else { p })
                .collect::<Vec<_>>()
                .join(" ∨ ")
        }
    }
}

fn is_sorted_subset(small: &[GenId], big: &[GenId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|x| it.any(|y| y == x))
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..=self.generators().max().unwrap_or(0))
            .map(|g| format!("g{g}"))
            .collect();
        f.write_str(&self.render(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn absorption_and_constants() {
        let e = Expr::from_terms(vec![vec![1, 0], vec![0], vec![0, 2]]);
        assert_eq!(e.terms(), &[vec![0]]);
        assert!(Expr::top().is_top());
        assert!(Expr::bottom().is_bottom());
        assert_eq!(Expr::gen(3).meet(&Expr::bottom()), Expr::bottom());
        assert_eq!(Expr::gen(3).join(&Expr::top()), Expr::top());
    }

    #[test]
    fn meet_distributes() {
        let a = Expr::join_of([0, 1]);
        let b = Expr::gen(2);
        assert_eq!(a.meet(&b), Expr::from_terms(vec![vec![0, 2], vec![1, 2]]));
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        assert_eq!(a.meet(&b).render(&names), "(x ∧ z) ∨ (y ∧ z)");
    }
}
