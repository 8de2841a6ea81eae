//! Marked metric graphs: points of outer space.

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::automorphisms::{whitehead_generators, Automorphism};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::words::{Basis, CyclicWord, Letter, Word};

/// One oriented traversal of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeStep {
    pub edge: usize,
    pub reversed: bool,
}

impl EdgeStep {
    pub fn inverse(self) -> EdgeStep {
        EdgeStep { edge: self.edge, reversed: !self.reversed }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricEdge {
    pub from: usize,
    pub to: usize,
    pub length: Rational,
}

/// A finite connected metric graph with base vertex 0 and a marking: each
/// basis generator is sent to a closed edge path at the base.
///
/// The marking is certified at construction: reading the marking loops in
/// the basis of the fundamental group given by the non-tree edges must
/// produce a free basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedMetricGraph {
    basis: Basis,
    num_vertices: usize,
    edges: Vec<MetricEdge>,
    tree: Vec<usize>,
    marking: Vec<Vec<EdgeStep>>,
    /// Non-tree edge `i` ↦ chart letter.
    chart_letter: Vec<Option<usize>>,
    /// The marking read in the chart of non-tree edges.
    chart: Automorphism,
}

fn push_reduced(path: &mut Vec<EdgeStep>, s: EdgeStep) {
    if path.last() == Some(&s.inverse()) {
        path.pop();
    } else {
        path.push(s);
    }
}

impl MarkedMetricGraph {
    pub fn new(
        basis: Basis,
        num_vertices: usize,
        edges: Vec<MetricEdge>,
        tree: Vec<usize>,
        marking: Vec<Vec<EdgeStep>>,
    ) -> Result<MarkedMetricGraph> {
        let k = basis.rank();
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("no vertices".into()));
        }
        let mut degree = vec![0usize; num_vertices];
        for (i, e) in edges.iter().enumerate() {
            if e.from >= num_vertices || e.to >= num_vertices {
                return Err(Error::InvalidGraph(format!("edge {} leaves the vertex range", i + 1)));
            }
            if !e.length.is_positive() {
                return Err(Error::InvalidGraph(format!("edge {} has nonpositive length", i + 1)));
            }
            degree[e.from] += 1;
            degree[e.to] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d <= 1) {
            return Err(Error::InvalidGraph(format!("vertex {v} has degree at most one")));
        }
        if edges.len() + 1 != num_vertices + k {
            return Err(Error::RankMismatch { expected: k, found: edges.len() + 1 - num_vertices.min(edges.len() + 1) });
        }
        // Spanning tree check by union-find.
        let mut parent: Vec<usize> = (0..num_vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut in_tree = vec![false; edges.len()];
        for &t in &tree {
            if t >= edges.len() || in_tree[t] {
                return Err(Error::InvalidGraph(format!("bad tree edge {}", t + 1)));
            }
            in_tree[t] = true;
            let (a, b) = (find(&mut parent, edges[t].from), find(&mut parent, edges[t].to));
            if a == b {
                return Err(Error::InvalidGraph("tree contains a cycle".into()));
            }
            parent[a] = b;
        }
        if tree.len() + 1 != num_vertices {
            return Err(Error::InvalidGraph("tree does not span".into()));
        }
        if marking.len() != k {
            return Err(Error::RankMismatch { expected: k, found: marking.len() });
        }
        let mut chart_letter = vec![None; edges.len()];
        let mut next = 0;
        for (i, t) in in_tree.iter().enumerate() {
            if !t {
                chart_letter[i] = Some(next);
                next += 1;
            }
        }
        let mut reduced = Vec::with_capacity(k);
        let mut images = Vec::with_capacity(k);
        for (i, path) in marking.iter().enumerate() {
            let mut v = 0;
            let mut red = Vec::new();
            for &s in path {
                let e = edges.get(s.edge).ok_or_else(|| {
                    Error::InvalidGraph(format!("marking of generator {} uses a missing edge", i + 1))
                })?;
                let (a, b) = if s.reversed { (e.to, e.from) } else { (e.from, e.to) };
                if a != v {
                    return Err(Error::InvalidGraph(format!(
                        "marking of {} is not an edge path",
                        Letter::new(i, false)
                    )));
                }
                v = b;
                push_reduced(&mut red, s);
            }
            if v != 0 {
                return Err(Error::InvalidGraph(format!(
                    "marking of {} is not closed at the base",
                    Letter::new(i, false)
                )));
            }
            images.push(Word::reduce(
                red.iter().filter_map(|s| chart_letter[s.edge].map(|j| Letter::new(j, s.reversed))),
            ));
            reduced.push(red);
        }
        let chart = Automorphism::new(basis, images)?;
        Ok(MarkedMetricGraph {
            basis,
            num_vertices,
            edges,
            tree,
            marking: reduced,
            chart_letter,
            chart,
        })
    }

    /// The rose with one unit loop per generator and the identity marking.
    pub fn unit_rose(basis: Basis) -> MarkedMetricGraph {
        MarkedMetricGraph::rose(basis, vec![Rational::one(); basis.rank()]).expect("rose")
    }

    pub fn rose(basis: Basis, lengths: Vec<Rational>) -> Result<MarkedMetricGraph> {
        let edges = lengths.into_iter().map(|length| MetricEdge { from: 0, to: 0, length }).collect();
        let marking = (0..basis.rank()).map(|i| vec![EdgeStep { edge: i, reversed: false }]).collect();
        MarkedMetricGraph::new(basis, 1, edges, Vec::new(), marking)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn edges(&self) -> &[MetricEdge] {
        &self.edges
    }

    pub fn tree(&self) -> &[usize] {
        &self.tree
    }

    pub fn marking(&self) -> &[Vec<EdgeStep>] {
        &self.marking
    }

    /// For each non-tree edge (in edge order), the group element whose loop
    /// crosses it once: the inverse marking.
    pub fn inverse_marking(&self) -> Vec<Word> {
        self.chart.invert().images().to_vec()
    }

    pub fn volume(&self) -> Rational {
        self.edges.iter().map(|e| e.length.clone()).sum()
    }

    pub fn scale(&self, c: &Rational) -> MarkedMetricGraph {
        assert!(c.is_positive());
        let mut out = self.clone();
        for e in &mut out.edges {
            e.length = &e.length * c;
        }
        out
    }

    /// Same graph with the marking `x ↦ marking(φ(x))`, so that
    /// `||g||` of the result is `||φ(g)||` of `self`.
    pub fn precompose(&self, phi: &Automorphism) -> MarkedMetricGraph {
        let marking = phi.images().iter().map(|w| self.path_of(w)).collect();
        MarkedMetricGraph { marking, chart: self.chart.compose(phi), ..self.clone() }
    }

    fn path_of(&self, w: &Word) -> Vec<EdgeStep> {
        let mut path = Vec::new();
        for &l in w.letters() {
            let m = &self.marking[l.generator()];
            if l.is_inverse() {
                for &s in m.iter().rev() {
                    push_reduced(&mut path, s.inverse());
                }
            } else {
                for &s in m {
                    push_reduced(&mut path, s);
                }
            }
        }
        path
    }

    /// The immersed loop representing the class of `g`.
    pub fn loop_of(&self, g: &CyclicWord) -> Vec<EdgeStep> {
        let path = self.path_of(&g.to_word());
        let mut lo = 0;
        let mut hi = path.len();
        while hi - lo >= 2 && path[lo] == path[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        path[lo..hi].to_vec()
    }

    fn path_length(&self, path: &[EdgeStep]) -> Rational {
        let mut count = vec![0u64; self.edges.len()];
        for s in path {
            count[s.edge] += 1;
        }
        self.edges
            .iter()
            .zip(count)
            .filter(|(_, c)| *c > 0)
            .map(|(e, c)| &e.length * Rational::from_integer(c.into()))
            .sum()
    }

    /// `||g||_T`: the length of the immersed loop.
    pub fn translation_length(&self, g: &CyclicWord) -> Rational {
        self.path_length(&self.loop_of(g))
    }

    pub fn translation_length_word(&self, g: &Word) -> Rational {
        match CyclicWord::from_word(g) {
            Some(c) => self.translation_length(&c),
            None => Rational::zero(),
        }
    }

    /// `d(p, gp)` for the base-vertex lift `p`.
    pub fn displacement(&self, w: &Word) -> Rational {
        self.path_length(&self.path_of(w))
    }

    /// `½ Σ_e L(e) ⟨e, η_g⟩` over oriented edges, with `⟨e, η_g⟩` the number
    /// of crossings of `e` in either direction by the immersed loop.
    pub fn edge_formula(&self, g: &CyclicWord) -> Rational {
        let mut crossings = vec![0u64; self.edges.len()];
        for s in self.loop_of(g) {
            crossings[s.edge] += 1;
        }
        let two = Rational::from_integer(2.into());
        self.edges
            .iter()
            .zip(&crossings)
            .map(|(e, &c)| &e.length * Rational::from_integer((2 * c).into()))
            .sum::<Rational>()
            / two
    }

    /// If the graph is a rose whose marking sends each generator to a single
    /// loop, the loop lengths indexed by generator.
    pub fn rose_chart_lengths(&self) -> Option<Vec<Rational>> {
        if self.num_vertices != 1 {
            return None;
        }
        let mut seen = vec![false; self.edges.len()];
        let mut out = Vec::with_capacity(self.basis.rank());
        for m in &self.marking {
            if m.len() != 1 || seen[m[0].edge] {
                return None;
            }
            seen[m[0].edge] = true;
            out.push(self.edges[m[0].edge].length.clone());
        }
        Some(out)
    }

    /// Chart letter of a non-tree edge, if any.
    pub fn chart_letter(&self, edge: usize) -> Option<usize> {
        self.chart_letter[edge]
    }
}

/// Lower and upper bounds for the bounded back-tracking constant of the
/// orbit map at the base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbtBounds {
    pub lower: Rational,
    pub upper: Rational,
}

/// `lower` is the largest Gromov product `(p · uvp)_{up}` over sampled
/// reduced products `uv` with `|u| = |v| = sample_len`, together with all
/// products of two letters; `upper` is the total length of the marking
/// loops.
pub fn bbt_bounds<R: Rng>(t: &MarkedMetricGraph, sample_len: usize, samples: usize, rng: &mut R) -> BbtBounds {
    let basis = t.basis();
    let two = Rational::from_integer(2.into());
    let gromov = |u: &Word, v: &Word| -> Rational {
        let uv = u.mul(v);
        (t.displacement(u) + t.displacement(v) - t.displacement(&uv)) / &two
    };
    let mut lower = Rational::zero();
    let letters: Vec<Letter> = basis.letters().collect();
    for &x in &letters {
        for &y in &letters {
            if y != x.inverse() {
                let g = gromov(&Word::from_letter(x), &Word::from_letter(y));
                if g > lower {
                    lower = g;
                }
            }
        }
    }
    if sample_len > 0 {
        for _ in 0..samples {
            let w = basis.sample_reduced_word_with(2 * sample_len, rng);
            let (u, v) = w.letters().split_at(sample_len);
            let g = gromov(&Word::reduce(u.iter().copied()), &Word::reduce(v.iter().copied()));
            if g > lower {
                lower = g;
            }
        }
    }
    let upper = t.marking().iter().map(|m| t.path_length(m)).sum();
    BbtBounds { lower, upper }
}

/// Largest `| ||w||_T − d(p, wp) |` over sampled cyclically reduced words.
pub fn ll_deviation<R: Rng>(t: &MarkedMetricGraph, len: usize, samples: usize, rng: &mut R) -> Rational {
    let basis = t.basis();
    let mut worst = Rational::zero();
    for _ in 0..samples {
        let c = basis.sample_cyclic_word_with(len, rng);
        let w = c.to_word();
        let d = (t.translation_length(&c) - t.displacement(&w)).abs();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// A random rank-`k` marked graph: for rank 2 one of the rose, theta and
/// barbell shapes, otherwise a rose; lengths `p/q` with `p ≤ 20`, `q ≤ 10`;
/// marking twisted by up to three Whitehead generators.
pub fn sample_marked_graph<R: Rng>(basis: Basis, rng: &mut R) -> MarkedMetricGraph {
    let k = basis.rank();
    let shape = if k == 2 { rng.gen_range(0..3) } else { 0 };
    let mut len = || Rational::new(rng.gen_range(1..=20).into(), rng.gen_range(1..=10).into());
    let step = |edge: usize, reversed: bool| EdgeStep { edge, reversed };
    let base = match shape {
        0 => MarkedMetricGraph::rose(basis, (0..k).map(|_| len()).collect()),
        1 => MarkedMetricGraph::new(
            basis,
            2,
            (0..3).map(|_| MetricEdge { from: 0, to: 1, length: len() }).collect(),
            vec![0],
            vec![vec![step(1, false), step(0, true)], vec![step(2, false), step(0, true)]],
        ),
        _ => MarkedMetricGraph::new(
            basis,
            2,
            vec![
                MetricEdge { from: 0, to: 0, length: len() },
                MetricEdge { from: 0, to: 1, length: len() },
                MetricEdge { from: 1, to: 1, length: len() },
            ],
            vec![1],
            vec![vec![step(0, false)], vec![step(1, false), step(2, false), step(1, true)]],
        ),
    }
    .expect("standard shapes are valid");
    let gens = whitehead_generators(basis);
    let n = rng.gen_range(0..=3);
    let mut phi = Automorphism::identity(basis);
    for _ in 0..n {
        phi = gens[rng.gen_range(0..gens.len())].compose(&phi);
    }
    base.precompose(&phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b2() -> Basis {
        Basis::new(2).unwrap()
    }

    fn cyc(s: &str) -> CyclicWord {
        b2().parse_cyclic(s).unwrap().unwrap()
    }

    #[test]
    fn translation_examples() {
        let rose = MarkedMetricGraph::unit_rose(b2());
        assert_eq!(rose.translation_length(&cyc("abAB")), int(4));
        let r = MarkedMetricGraph::rose(b2(), vec![frac(1, 2), frac(1, 3)]).unwrap();
        assert_eq!(r.translation_length(&cyc("ab")), frac(5, 6));
        assert_eq!(r.translation_length_word(&Word::identity()), int(0));
    }

    #[test]
    fn rejects_bad_markings() {
        let s = |edge| vec![EdgeStep { edge, reversed: false }];
        let edges = || vec![MetricEdge { from: 0, to: 0, length: int(1) }; 2];
        assert!(matches!(
            MarkedMetricGraph::new(b2(), 1, edges(), vec![], vec![s(0), s(0)]),
            Err(Error::NotAnAutomorphism(_))
        ));
        let zero = vec![MetricEdge { from: 0, to: 0, length: int(0) }; 2];
        assert!(MarkedMetricGraph::new(b2(), 1, zero, vec![], vec![s(0), s(1)]).is_err());
        let dangling = vec![
            MetricEdge { from: 0, to: 0, length: int(1) },
            MetricEdge { from: 0, to: 0, length: int(1) },
            MetricEdge { from: 0, to: 1, length: int(1) },
        ];
        assert!(matches!(
            MarkedMetricGraph::new(b2(), 2, dangling, vec![2], vec![s(0), s(1)]),
            Err(Error::InvalidGraph(_))
        ));
    }

    #[test]
    fn precompose_matches_pushforward() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let gens = whitehead_generators(b2());
        for _ in 0..20 {
            let t = sample_marked_graph(b2(), &mut rng);
            let phi = &gens[rng.gen_range(0..gens.len())];
            let tp = t.precompose(phi);
            // Re-certify from scratch.
            let fresh = MarkedMetricGraph::new(
                b2(),
                tp.num_vertices(),
                tp.edges().to_vec(),
                tp.tree().to_vec(),
                tp.marking().to_vec(),
            )
            .unwrap();
            assert_eq!(fresh, tp);
            for g in b2().cyclic_words_up_to(4) {
                assert_eq!(tp.translation_length(&g), t.translation_length(&phi.apply_cyclic(&g)));
            }
        }
    }

    #[test]
    fn edge_formula_matches_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let t = sample_marked_graph(b2(), &mut rng);
            for g in b2().cyclic_words_up_to(5) {
                assert_eq!(t.edge_formula(&g), t.translation_length(&g));
                assert!(t.translation_length(&g).is_positive());
            }
        }
    }

    #[test]
    fn inverse_marking_reads_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let t = sample_marked_graph(b2(), &mut rng);
            for (j, w) in t.inverse_marking().iter().enumerate() {
                let loop_ = t.path_of(w);
                let crossed: Vec<(usize, bool)> = loop_
                    .iter()
                    .filter_map(|s| t.chart_letter(s.edge).map(|c| (c, s.reversed)))
                    .collect();
                assert_eq!(crossed, vec![(j, false)]);
            }
        }
    }

    #[test]
    fn bbt_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rose = MarkedMetricGraph::unit_rose(b2());
        let b = bbt_bounds(&rose, 6, 200, &mut rng);
        assert_eq!(b.lower, int(0));
        assert_eq!(b.upper, int(2));
        let phi = Automorphism::new(b2(), vec![b2().parse_word("ab").unwrap(), b2().parse_word("b").unwrap()]).unwrap();
        let t = rose.precompose(&phi);
        let b = bbt_bounds(&t, 6, 200, &mut rng);
        assert!(b.lower >= int(1));
        assert!(b.lower <= b.upper);
        let dev = ll_deviation(&t, 12, 100, &mut rng);
        assert!(dev <= &b.upper * int(2));
    }

    #[test]
    fn bbt_interval_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let t = sample_marked_graph(b2(), &mut rng);
            let b = bbt_bounds(&t, 5, 100, &mut rng);
            assert!(b.lower <= b.upper);
            assert!(ll_deviation(&t, 10, 50, &mut rng) <= &b.upper * int(2));
        }
    }
}
