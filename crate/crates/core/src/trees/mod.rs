//! Simplicial trees: points of outer space as marked metric graphs and
//! free splittings as graphs of groups.

mod marked;
mod splitting;

pub use marked::{bbt_bounds, ll_deviation, sample_marked_graph, BbtBounds, EdgeStep, MarkedMetricGraph, MetricEdge};
pub use splitting::Splitting;

use num_traits::Zero;

use crate::currents::{FrequencyTable, RationalCurrent};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::words::{Basis, CyclicWord, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Graph(MarkedMetricGraph),
    Splitting(Splitting),
}

/// A current argument for [`Tree::intersection_number`].
#[derive(Clone, Copy, Debug)]
pub enum CurrentRef<'a> {
    Rational(&'a RationalCurrent),
    Table(&'a FrequencyTable),
}

impl Tree {
    pub fn basis(&self) -> Basis {
        match self {
            Tree::Graph(t) => t.basis(),
            Tree::Splitting(s) => s.basis(),
        }
    }

    /// `||g||_T`.
    pub fn length(&self, g: &CyclicWord) -> Rational {
        match self {
            Tree::Graph(t) => t.translation_length(g),
            Tree::Splitting(s) => Rational::from_integer(s.bass_serre_length(g).into()),
        }
    }

    pub fn length_word(&self, g: &Word) -> Rational {
        CyclicWord::from_word(g).map_or_else(Rational::zero, |c| self.length(&c))
    }

    /// `⟨T, μ⟩`. Rational currents pair with every tree through translation
    /// lengths (on marked graphs via the edge formula on the immersed loops);
    /// tables pair only with roses marked by single loops.
    pub fn intersection_number(&self, mu: CurrentRef<'_>) -> Result<Rational> {
        match (self, mu) {
            (Tree::Graph(t), CurrentRef::Rational(mu)) => {
                Ok(mu.terms().iter().map(|(r, g)| r * t.edge_formula(g)).sum())
            }
            (Tree::Splitting(s), CurrentRef::Rational(mu)) => Ok(mu
                .terms()
                .iter()
                .map(|(r, g)| r * Rational::from_integer(s.bass_serre_length(g).into()))
                .sum()),
            (Tree::Graph(t), CurrentRef::Table(table)) => {
                if table.basis() != t.basis() {
                    return Err(Error::UnsupportedChart("table over a different basis".into()));
                }
                let lengths = t.rose_chart_lengths().ok_or_else(|| {
                    Error::UnsupportedChart("tables pair only with roses in their own basis; realize the table first".into())
                })?;
                let two = Rational::from_integer(2.into());
                Ok(t.basis()
                    .letters()
                    .map(|x| &lengths[x.generator()] * table.get(&Word::from_letter(x)))
                    .sum::<Rational>()
                    / two)
            }
            (Tree::Splitting(_), CurrentRef::Table(_)) => Err(Error::UnsupportedChart(
                "tables do not pair with splittings; realize the table first".into(),
            )),
        }
    }

    /// Whether `v` is in the laminary language of `L²(T)`.
    pub fn l2_contains(&self, v: &Word) -> bool {
        match self {
            Tree::Graph(_) => false,
            Tree::Splitting(s) => s.l2_contains(v),
        }
    }

    /// Whether the support of `μ` lies in `L²(T)`.
    pub fn supp_subset_l2(&self, mu: &RationalCurrent) -> bool {
        match self {
            Tree::Graph(_) => mu.is_empty(),
            Tree::Splitting(s) => mu.terms().iter().all(|(_, g)| s.axis_in_l2(g)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{counting_table, uniform_table};
    use crate::rational::{frac, int};
    use num_traits::Signed;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b2() -> Basis {
        Basis::new(2).unwrap()
    }

    fn cyc(s: &str) -> CyclicWord {
        b2().parse_cyclic(s).unwrap().unwrap()
    }

    fn mu(s: &str) -> RationalCurrent {
        RationalCurrent::parse(b2(), s).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let rose = Tree::Graph(MarkedMetricGraph::unit_rose(b2()));
        assert_eq!(rose.intersection_number(CurrentRef::Rational(&mu("ab"))).unwrap(), int(2));
        let t = counting_table(b2(), &cyc("ab"), 1);
        assert_eq!(rose.intersection_number(CurrentRef::Table(&t)).unwrap(), int(2));
        let u = uniform_table(b2(), 2);
        assert_eq!(rose.intersection_number(CurrentRef::Table(&u)).unwrap(), frac(1, 2));
        let fp = Tree::Splitting(Splitting::free_product(b2(), &[0], &[1]).unwrap());
        assert_eq!(fp.intersection_number(CurrentRef::Rational(&mu("b"))).unwrap(), int(0));
        assert!(matches!(fp.intersection_number(CurrentRef::Table(&u)), Err(Error::UnsupportedChart(_))));
        let theta = Tree::Graph(sample_marked_graph(b2(), &mut ChaCha8Rng::seed_from_u64(0)).precompose(
            &crate::Automorphism::new(b2(), vec![b2().parse_word("ab").unwrap(), b2().parse_word("b").unwrap()]).unwrap(),
        ));
        assert!(matches!(theta.intersection_number(CurrentRef::Table(&u)), Err(Error::UnsupportedChart(_))));
    }

    #[test]
    fn pairing_is_linear_and_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let g = sample_marked_graph(b2(), &mut rng);
            let t = Tree::Graph(g.clone());
            let t3 = Tree::Graph(g.scale(&frac(3, 2)));
            let (m1, m2) = (mu("1/3*ab + abb"), mu("2*aB + 5/7*aaBab"));
            let p = |t: &Tree, m: &RationalCurrent| t.intersection_number(CurrentRef::Rational(m)).unwrap();
            assert_eq!(p(&t, &m1.add(&m2)), p(&t, &m1) + p(&t, &m2));
            assert_eq!(p(&t3, &m1), p(&t, &m1) * frac(3, 2));
            assert!(p(&t, &m1).is_positive());
        }
    }

    #[test]
    fn l2_examples() {
        let fp = Tree::Splitting(Splitting::free_product(b2(), &[0], &[1]).unwrap());
        let w = |s: &str| b2().parse_word(s).unwrap();
        assert!(fp.l2_contains(&w("aa")));
        assert!(!fp.l2_contains(&w("ab")));
        assert!(!Tree::Graph(MarkedMetricGraph::unit_rose(b2())).l2_contains(&w("a")));
        assert!(fp.supp_subset_l2(&mu("b")));
        assert!(!fp.supp_subset_l2(&mu("ab")));
        assert!(fp.supp_subset_l2(&RationalCurrent::empty()));
        assert!(Tree::Graph(MarkedMetricGraph::unit_rose(b2())).supp_subset_l2(&RationalCurrent::empty()));
    }

    #[test]
    fn l2_factor_closed_and_flip_invariant() {
        let psi = crate::Automorphism::new(b2(), vec![b2().parse_word("aba").unwrap(), b2().parse_word("ab").unwrap()]).unwrap();
        let mut all = Splitting::seeds(b2());
        all.push(Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0], vec![1]], psi).unwrap());
        for s in all {
            for v in b2().reduced_words_up_to(6).iter().filter(|v| !v.is_empty()) {
                if s.l2_contains(v) {
                    assert!(s.l2_contains(&v.inverse()));
                    let l = v.letters();
                    for i in 0..l.len() {
                        for j in i + 1..=l.len() {
                            assert!(s.l2_contains(&Word::reduce(l[i..j].iter().copied())));
                        }
                    }
                }
            }
        }
    }
}
