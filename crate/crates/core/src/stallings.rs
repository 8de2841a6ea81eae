//! Stallings subgroup graphs: folding, cores, membership, readability,
//! product graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::fold::fold_petals;
use crate::words::{least_rotation, Basis, CyclicWord, Letter, Word};

/// A folded, connected graph labelled by basis generators, with base
/// vertex 0. Edges are `(from, generator, to)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StallingsGraph {
    basis: Basis,
    num_vertices: usize,
    edges: Vec<(usize, usize, usize)>,
    /// `next[v][letter]` is the edge step leaving `v` with that label.
    next: Vec<Vec<Option<Step>>>,
    core: Vec<bool>,
}

/// An oriented traversal of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step {
    pub edge: usize,
    pub reversed: bool,
    pub target: usize,
}

/// A closed reduced path in the core, up to rotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreCycle {
    /// Label, as a conjugacy class of the ambient group.
    pub ambient: CyclicWord,
    /// The same loop as a conjugacy class of the subgroup, in the chart
    /// whose generators are the non-tree edges (see
    /// [`StallingsGraph::subgroup_basis`]).
    pub chart: CyclicWord,
    /// Oriented edges `2·id + reversed`, least rotation.
    pub steps: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyIntersection {
    pub reps: Vec<CoreCycle>,
    pub d: usize,
}

impl StallingsGraph {
    /// Fold the wedge of petals spelling `generators`.
    pub fn fold(basis: Basis, generators: &[Word]) -> Result<StallingsGraph> {
        for g in generators {
            if let Some(l) = g.letters().iter().find(|l| !basis.contains(**l)) {
                return Err(Error::UnknownLetter(l.to_char(), basis.rank()));
            }
        }
        let folded = fold_petals(generators, false);
        let g = StallingsGraph::build(basis, folded.num_vertices, folded.edges)?;
        Ok(g.canonical())
    }

    /// Graph of the whole group: one vertex, one loop per generator.
    pub fn rose(basis: Basis) -> StallingsGraph {
        let edges = (0..basis.rank()).map(|i| (0, i, 0)).collect();
        StallingsGraph::build(basis, 1, edges).expect("rose is folded")
    }

    /// Build from an explicit edge list; the graph must be connected and
    /// folded.
    pub fn from_edges(
        basis: Basis,
        num_vertices: usize,
        edges: Vec<(usize, usize, usize)>,
    ) -> Result<StallingsGraph> {
        let g = StallingsGraph::build(basis, num_vertices, edges)?;
        let mut seen = vec![false; num_vertices];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for s in g.next[v].iter().flatten() {
                if !seen[s.target] {
                    seen[s.target] = true;
                    queue.push_back(s.target);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    fn build(
        basis: Basis,
        num_vertices: usize,
        edges: Vec<(usize, usize, usize)>,
    ) -> Result<StallingsGraph> {
        if num_vertices == 0 {
            return Err(Error::InvalidGraph("no base vertex".into()));
        }
        let mut next = vec![vec![None; basis.num_letters()]; num_vertices];
        for (id, &(from, gen, to)) in edges.iter().enumerate() {
            if from >= num_vertices || to >= num_vertices {
                return Err(Error::InvalidGraph(format!("edge {id} leaves the vertex range")));
            }
            if gen >= basis.rank() {
                return Err(Error::InvalidGraph(format!("edge {id} label outside the basis")));
            }
            let fwd = Letter::new(gen, false).index();
            let bwd = Letter::new(gen, true).index();
            if next[from][fwd].is_some() || next[to][bwd].is_some() {
                return Err(Error::InvalidGraph(format!("not folded at edge {id}")));
            }
            next[from][fwd] = Some(Step { edge: id, reversed: false, target: to });
            next[to][bwd] = Some(Step { edge: id, reversed: true, target: from });
        }
        let mut g = StallingsGraph { basis, num_vertices, edges, next, core: Vec::new() };
        g.core = g.compute_core();
        Ok(g)
    }

    fn compute_core(&self) -> Vec<bool> {
        let mut degree: Vec<usize> = self
            .next
            .iter()
            .map(|row| row.iter().filter(|s| s.is_some()).count())
            .collect();
        let mut alive = vec![true; self.num_vertices];
        let mut queue: Vec<usize> = (0..self.num_vertices).filter(|&v| degree[v] <= 1).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for s in self.next[v].iter().flatten() {
                let u = s.target;
                if alive[u] {
                    degree[u] -= 1;
                    if degree[u] <= 1 {
                        queue.push(u);
                    }
                }
            }
        }
        alive
    }

    /// Renumber vertices in breadth-first order from the base, following
    /// letters in order, and sort the edges.
    fn canonical(&self) -> StallingsGraph {
        let mut order = vec![usize::MAX; self.num_vertices];
        order[0] = 0;
        let mut count = 1;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for s in self.next[v].iter().flatten() {
                if order[s.target] == usize::MAX {
                    order[s.target] = count;
                    count += 1;
                    queue.push_back(s.target);
                }
            }
        }
        let mut edges: Vec<(usize, usize, usize)> = self
            .edges
            .iter()
            .filter(|e| order[e.0] != usize::MAX)
            .map(|&(f, g, t)| (order[f], g, order[t]))
            .collect();
        edges.sort();
        StallingsGraph::build(self.basis, count, edges).expect("renumbering keeps folding")
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn base(&self) -> usize {
        0
    }

    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn is_core_vertex(&self, v: usize) -> bool {
        self.core[v]
    }

    pub fn core_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices).filter(|&v| self.core[v]).collect()
    }

    pub fn core_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&i| self.core[self.edges[i].0] && self.core[self.edges[i].2])
            .collect()
    }

    /// Rank of the subgroup.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.num_vertices
    }

    pub fn step(&self, v: usize, l: Letter) -> Option<Step> {
        self.next[v][l.index()]
    }

    /// Follow `letters` from `start`; `None` if some edge is missing.
    pub fn trace(&self, start: usize, letters: &[Letter], core_only: bool) -> Option<Vec<Step>> {
        let mut v = start;
        let mut path = Vec::with_capacity(letters.len());
        for &l in letters {
            let s = self.step(v, l)?;
            if core_only && !self.core[s.target] {
                return None;
            }
            path.push(s);
            v = s.target;
        }
        Some(path)
    }

    fn end_of(&self, start: usize, letters: &[Letter], core_only: bool) -> Option<usize> {
        let mut v = start;
        for &l in letters {
            let s = self.step(v, l)?;
            if core_only && !self.core[s.target] {
                return None;
            }
            v = s.target;
        }
        Some(v)
    }

    /// Whether `w` lies in the subgroup.
    pub fn member(&self, w: &Word) -> bool {
        self.end_of(0, w.letters(), false) == Some(0)
    }

    /// Whether `v` labels some path in the core.
    pub fn readable_in_core(&self, v: &Word) -> bool {
        self.readable_letters(v.letters())
    }

    pub(crate) fn readable_letters(&self, v: &[Letter]) -> bool {
        (0..self.num_vertices)
            .filter(|&s| self.core[s])
            .any(|s| self.end_of(s, v, true).is_some())
    }

    /// Breadth-first spanning tree: for each vertex the letters of the tree
    /// path from the base, and the set of tree edges.
    fn spanning_tree(&self) -> (Vec<Word>, Vec<bool>) {
        let mut path: Vec<Option<Word>> = vec![None; self.num_vertices];
        let mut tree = vec![false; self.edges.len()];
        path[0] = Some(Word::identity());
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (li, s) in self.next[v].iter().enumerate() {
                let Some(s) = s else { continue };
                if path[s.target].is_none() {
                    let p = path[v].as_ref().unwrap().mul(&Word::from_letter(Letter::from_index(li)));
                    path[s.target] = Some(p);
                    tree[s.edge] = true;
                    queue.push_back(s.target);
                }
            }
        }
        (path.into_iter().map(|p| p.expect("connected")).collect(), tree)
    }

    /// Free basis of the subgroup: one element per non-tree edge, in edge
    /// order. Chart letter `i` stands for the `i`-th of these.
    pub fn subgroup_basis(&self) -> Vec<Word> {
        let (path, tree) = self.spanning_tree();
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !tree[*i])
            .map(|(_, &(f, g, t))| {
                path[f].mul(&Word::from_letter(Letter::new(g, false))).mul(&path[t].inverse())
            })
            .collect()
    }

    /// Chart letter of each oriented non-tree edge.
    fn chart_letters(&self) -> Vec<Option<usize>> {
        let (_, tree) = self.spanning_tree();
        let mut out = vec![None; self.edges.len()];
        let mut j = 0;
        for (i, is_tree) in tree.iter().enumerate() {
            if !is_tree {
                out[i] = Some(j);
                j += 1;
            }
        }
        out
    }

    /// Express `w ∈ H` in the subgroup basis.
    pub fn chart_word(&self, w: &Word) -> Option<Word> {
        let path = self.trace(0, w.letters(), false)?;
        if path.last().map_or(0, |s| s.target) != 0 {
            return None;
        }
        let chart = self.chart_letters();
        Some(Word::reduce(path.iter().filter_map(|s| {
            chart[s.edge].map(|j| Letter::new(j, s.reversed))
        })))
    }

    fn cycle_from_steps(&self, steps: &[Step], chart: &[Option<usize>]) -> CoreCycle {
        let letters: Vec<Letter> = steps
            .iter()
            .map(|s| Letter::new(self.edges[s.edge].1, s.reversed))
            .collect();
        let ambient = CyclicWord::from_letters(letters).expect("core cycle is nontrivial");
        let chart_letters: Vec<Letter> = steps
            .iter()
            .filter_map(|s| chart[s.edge].map(|j| Letter::new(j, s.reversed)))
            .collect();
        let chart = CyclicWord::from_letters(chart_letters).expect("core cycle is essential");
        let mut codes: Vec<usize> = steps.iter().map(|s| 2 * s.edge + s.reversed as usize).collect();
        let r = least_rotation(&codes);
        codes.rotate_left(r);
        CoreCycle { ambient, chart, steps: codes }
    }

    /// Core cycles whose label is exactly a rotation of `h` (one pass).
    /// Distinct cycles are distinct conjugacy classes of the subgroup; `d`
    /// is the exponent of `h` as a power of a primitive element.
    pub fn conjugacy_intersection(&self, h: &CyclicWord) -> ConjugacyIntersection {
        let (_, d) = h.primitive_root();
        let chart = self.chart_letters();
        let mut found: BTreeMap<Vec<usize>, CoreCycle> = BTreeMap::new();
        for s in self.core_vertices() {
            for r in h.rotations() {
                if let Some(steps) = self.trace(s, r.letters(), true) {
                    if steps.last().unwrap().target == s {
                        let c = self.cycle_from_steps(&steps, &chart);
                        found.entry(c.steps.clone()).or_insert(c);
                    }
                }
            }
        }
        ConjugacyIntersection { reps: found.into_values().collect(), d }
    }

    /// Primitive core cycles labelled by a power of a rotation of the
    /// primitive word `f`: the subgroup classes carried by the axis of `f`.
    pub fn primitive_cycles(&self, f: &CyclicWord) -> Vec<CoreCycle> {
        let chart = self.chart_letters();
        let core = self.core_vertices();
        let mut found: BTreeMap<Vec<usize>, CoreCycle> = BTreeMap::new();
        for &s in &core {
            for r in f.rotations() {
                let mut steps = Vec::new();
                let mut v = s;
                for _ in 0..core.len() {
                    match self.trace(v, r.letters(), true) {
                        Some(p) => {
                            v = p.last().unwrap().target;
                            steps.extend(p);
                        }
                        None => break,
                    }
                    if v == s {
                        let c = self.cycle_from_steps(&steps, &chart);
                        found.entry(c.steps.clone()).or_insert(c);
                        break;
                    }
                }
            }
        }
        found.into_values().collect()
    }

    /// Components of the labelled product graph. With `core_only` only
    /// core vertices and edges take part. Returns, per component, its
    /// vertex pairs (sorted) and edges as `(from, gen, to)` on pair indices.
    fn product(&self, other: &StallingsGraph, core_only: bool) -> Vec<ProductComponent> {
        let n2 = other.num_vertices;
        let keep = |g: &StallingsGraph, v: usize| !core_only || g.core[v];
        let mut comp = vec![usize::MAX; self.num_vertices * n2];
        let mut out = Vec::new();
        for start in 0..self.num_vertices * n2 {
            let (u0, v0) = (start / n2, start % n2);
            if comp[start] != usize::MAX || !keep(self, u0) || !keep(other, v0) {
                continue;
            }
            let id = out.len();
            comp[start] = id;
            let mut members = vec![(u0, v0)];
            let mut queue = VecDeque::from([(u0, v0)]);
            let mut edges = Vec::new();
            while let Some((u, v)) = queue.pop_front() {
                for gen in 0..self.basis.rank() {
                    for inv in [false, true] {
                        let l = Letter::new(gen, inv);
                        let (Some(a), Some(b)) = (self.step(u, l), other.step(v, l)) else {
                            continue;
                        };
                        if !keep(self, a.target) || !keep(other, b.target) {
                            continue;
                        }
                        let key = a.target * n2 + b.target;
                        if !inv {
                            edges.push(((u, v), gen, (a.target, b.target)));
                        }
                        if comp[key] == usize::MAX {
                            comp[key] = id;
                            members.push((a.target, b.target));
                            queue.push_back((a.target, b.target));
                        }
                    }
                }
            }
            members.sort();
            edges.sort();
            out.push(ProductComponent { vertices: members, edges });
        }
        out
    }

    /// `H₁ ∩ H₂` first, followed by the further nontrivial components of the
    /// product of the cores (each an intersection `H₁ ∩ gH₂g⁻¹`, based at its
    /// least vertex pair).
    pub fn intersect(&self, other: &StallingsGraph) -> Vec<StallingsGraph> {
        assert_eq!(self.basis, other.basis);
        let full = self.product(other, false);
        let base_comp = full
            .iter()
            .find(|c| c.vertices.first() == Some(&(0, 0)))
            .expect("base pair present");
        let mut out = vec![base_comp.to_graph(self.basis, (0, 0))];
        let base_set: BTreeSet<(usize, usize)> = base_comp.vertices.iter().copied().collect();
        for c in self.product(other, true) {
            if c.rank() == 0 || c.vertices.iter().any(|p| base_set.contains(p)) {
                continue;
            }
            out.push(c.to_graph(self.basis, c.vertices[0]));
        }
        out
    }

    /// Whether the subgroup meets each of its nontrivial conjugates
    /// trivially: every off-diagonal component of the core product is a tree.
    pub fn is_malnormal(&self) -> bool {
        self.product(self, true)
            .iter()
            .filter(|c| c.vertices.iter().all(|(u, v)| u != v))
            .all(|c| c.rank() == 0)
    }
}

type Pair = (usize, usize);

struct ProductComponent {
    vertices: Vec<Pair>,
    edges: Vec<(Pair, usize, Pair)>,
}

impl ProductComponent {
    fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// The component as a Stallings graph based at `base`, with hanging
    /// trees away from the base pruned.
    fn to_graph(&self, basis: Basis, base: (usize, usize)) -> StallingsGraph {
        let index: BTreeMap<(usize, usize), usize> = std::iter::once(base)
            .chain(self.vertices.iter().copied().filter(|&p| p != base))
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let edges = self.edges.iter().map(|(f, g, t)| (index[f], *g, index[t])).collect();
        let g = StallingsGraph::build(basis, index.len(), edges).expect("product is folded");
        g.prune_to_base().canonical()
    }
}

impl StallingsGraph {
    /// Remove degree-one vertices other than the base, repeatedly.
    fn prune_to_base(&self) -> StallingsGraph {
        let mut degree: Vec<usize> = self
            .next
            .iter()
            .map(|row| row.iter().filter(|s| s.is_some()).count())
            .collect();
        let mut alive = vec![true; self.num_vertices];
        let mut queue: Vec<usize> =
            (1..self.num_vertices).filter(|&v| degree[v] <= 1).collect();
        while let Some(v) = queue.pop() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for s in self.next[v].iter().flatten() {
                let u = s.target;
                if alive[u] && u != 0 {
                    degree[u] -= 1;
                    if degree[u] <= 1 {
                        queue.push(u);
                    }
                }
            }
        }
        let mut renumber = vec![usize::MAX; self.num_vertices];
        let mut n = 0;
        for v in 0..self.num_vertices {
            if alive[v] {
                renumber[v] = n;
                n += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| alive[e.0] && alive[e.2])
            .map(|&(f, g, t)| (renumber[f], g, renumber[t]))
            .collect();
        StallingsGraph::build(self.basis, n, edges).expect("subgraph of a folded graph")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn b2() -> Basis {
        Basis::new(2).unwrap()
    }

    fn w(s: &str) -> Word {
        b2().parse_word(s).unwrap()
    }

    fn sub(gens: &[&str]) -> StallingsGraph {
        StallingsGraph::fold(b2(), &gens.iter().map(|s| w(s)).collect::<Vec<_>>()).unwrap()
    }

    fn cyc(s: &str) -> CyclicWord {
        b2().parse_cyclic(s).unwrap().unwrap()
    }

    /// Elements of ⟨gens⟩ of length ≤ maxlen, by closing products of
    /// generators under multiplication with a length cutoff on the
    /// intermediate words.
    fn brute_elements(gens: &[Word], maxlen: usize, slack: usize) -> HashSet<Word> {
        let mut all: Vec<Word> = gens.to_vec();
        all.extend(gens.iter().map(Word::inverse));
        let mut seen: HashSet<Word> = HashSet::from([Word::identity()]);
        let mut frontier = vec![Word::identity()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &all {
                    let y = x.mul(g);
                    if y.len() <= maxlen + slack && seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        seen.into_iter().filter(|x| x.len() <= maxlen).collect()
    }

    #[test]
    fn fold_examples() {
        let g = sub(&["aa", "b"]);
        let core = g.core_vertices();
        assert_eq!(core.len(), 2);
        assert_eq!(g.core_edges().len(), 3);
        let mut labels: Vec<usize> = g.edges().iter().map(|e| e.1).collect();
        labels.sort();
        assert_eq!(labels, vec![0, 0, 1]);
        assert!(g.edges().contains(&(0, 1, 0)));

        let f = sub(&["a", "b"]);
        assert_eq!(f, StallingsGraph::rose(b2()));
        assert_eq!(f.core_vertices(), vec![0]);

        let a = sub(&["a"]);
        assert_eq!(a.edges(), &[(0, 0, 0)]);
        assert_eq!(a.core_edges(), vec![0]);

        let trivial = StallingsGraph::fold(b2(), &[]).unwrap();
        assert_eq!(trivial.num_vertices(), 1);
        assert!(trivial.core_vertices().is_empty());

        // Base outside the core.
        let c = sub(&["baB"]);
        assert_eq!(c.core_vertices().len(), 1);
        assert!(!c.is_core_vertex(0));
    }

    #[test]
    fn member_examples() {
        let g = sub(&["aa", "b"]);
        assert!(g.member(&w("aab")));
        assert!(!g.member(&w("a")));
        assert!(g.member(&Word::identity()));
        assert!(g.member(&w("bAAbaa")));
    }

    #[test]
    fn readable_examples() {
        let g = sub(&["aa", "b"]);
        assert!(g.readable_in_core(&w("aa")));
        assert!(g.readable_in_core(&w("ab")));
        assert!(!sub(&["a"]).readable_in_core(&w("b")));
        assert!(!sub(&["baB"]).readable_in_core(&w("b")));
        assert!(sub(&["baB"]).readable_in_core(&w("aaa")));
    }

    #[test]
    fn intersect_examples() {
        let i = sub(&["a"]).intersect(&sub(&["b"]));
        assert_eq!(i[0].rank(), 0);
        let i = sub(&["aa"]).intersect(&sub(&["aaa"]));
        assert_eq!(i[0], sub(&["aaaaaa"]));
        let g = sub(&["aa", "b"]);
        assert_eq!(g.intersect(&g)[0], g);
        // ⟨baB⟩ meets ⟨a⟩ only after conjugation.
        let i = sub(&["baB"]).intersect(&sub(&["a"]));
        assert_eq!(i[0].rank(), 0);
        assert_eq!(i.len(), 2);
        assert_eq!(i[1].rank(), 1);
    }

    #[test]
    fn conjugacy_intersection_examples() {
        let g = sub(&["aa", "b"]);
        let r = g.conjugacy_intersection(&cyc("aa"));
        assert_eq!(r.d, 2);
        assert_eq!(r.reps.len(), 1);
        assert_eq!(r.reps[0].ambient, cyc("aa"));
        assert_eq!(r.reps[0].chart.len(), 1);
        let r = g.conjugacy_intersection(&cyc("a"));
        assert_eq!((r.reps.len(), r.d), (0, 1));
        let r = g.conjugacy_intersection(&cyc("b"));
        assert_eq!((r.reps.len(), r.d), (1, 1));
        assert_eq!(r.reps[0].ambient, cyc("b"));
        // b and a b a⁻¹ are not conjugate in H.
        let r = g.conjugacy_intersection(&cyc("ab"));
        assert!(r.reps.is_empty());
        let r = g.conjugacy_intersection(&cyc("bb"));
        assert_eq!((r.reps.len(), r.d), (1, 2));
    }

    #[test]
    fn primitive_cycles_of_axes() {
        let g = sub(&["aa", "b"]);
        let c = g.primitive_cycles(&cyc("a"));
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].ambient, cyc("aa"));
        assert_eq!(g.primitive_cycles(&cyc("b")).len(), 1);
        assert!(g.primitive_cycles(&cyc("ab")).is_empty());
    }

    #[test]
    fn malnormal_examples() {
        assert!(!sub(&["aa"]).is_malnormal());
        assert!(sub(&["ab"]).is_malnormal());
        assert!(StallingsGraph::rose(b2()).is_malnormal());
        assert!(sub(&["a"]).is_malnormal());
        assert!(!sub(&["aa", "b"]).is_malnormal());
    }

    #[test]
    fn member_matches_enumeration() {
        for gens in [vec!["aa", "b"], vec!["ab"], vec!["aab", "bA"], vec!["aba", "bb"]] {
            let gens: Vec<Word> = gens.iter().map(|s| w(s)).collect();
            let g = StallingsGraph::fold(b2(), &gens).unwrap();
            let elements = brute_elements(&gens, 8, 6);
            for x in b2().reduced_words_up_to(8) {
                assert_eq!(g.member(&x), elements.contains(&x), "{x}");
            }
        }
    }

    #[test]
    fn subgroup_basis_regenerates() {
        for gens in [vec!["aa", "b"], vec!["aab", "bA"], vec!["baB"], vec!["aba", "bb", "ab"]] {
            let gens: Vec<Word> = gens.iter().map(|s| w(s)).collect();
            let g = StallingsGraph::fold(b2(), &gens).unwrap();
            let again = StallingsGraph::fold(b2(), &g.subgroup_basis()).unwrap();
            assert_eq!(again, g);
            for x in &gens {
                let c = g.chart_word(x).unwrap();
                let basis = g.subgroup_basis();
                let back = Word::reduce(c.letters().iter().flat_map(|l| {
                    let y = &basis[l.generator()];
                    if l.is_inverse() { y.inverse() } else { y.clone() }.into_letters()
                }));
                assert_eq!(&back, x);
            }
        }
    }

    #[test]
    fn intersect_matches_membership() {
        let pairs = [(vec!["aa", "b"], vec!["a", "bb"]), (vec!["ab"], vec!["abab", "ba"]), (vec!["aab", "b"], vec!["ba"])];
        for (x, y) in pairs {
            let gx = sub(&x);
            let gy = sub(&y);
            let i = &gx.intersect(&gy)[0];
            for v in b2().reduced_words_up_to(8) {
                assert_eq!(i.member(&v), gx.member(&v) && gy.member(&v), "{v}");
            }
        }
    }

    fn gens_strategy() -> impl Strategy<Value = Vec<Word>> {
        prop::collection::vec(prop::collection::vec(0usize..4, 1..6), 1..4)
            .prop_map(|gs| gs.into_iter().map(|g| Word::reduce(g.into_iter().map(Letter::from_index))).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn folding_is_order_independent(mut gens in gens_strategy(), seed in 0usize..6) {
            let g1 = StallingsGraph::fold(b2(), &gens).unwrap();
            let n = gens.len();
            gens.rotate_left(seed % n);
            gens.reverse();
            let g2 = StallingsGraph::fold(b2(), &gens).unwrap();
            prop_assert_eq!(g1, g2);
        }

        #[test]
        fn readable_is_factor_closed(gens in gens_strategy(), raw in prop::collection::vec(0usize..4, 1..8)) {
            let g = StallingsGraph::fold(b2(), &gens).unwrap();
            let v = Word::reduce(raw.into_iter().map(Letter::from_index));
            if !v.is_empty() && g.readable_in_core(&v) {
                let l = v.letters();
                for i in 0..l.len() {
                    for j in i + 1..=l.len() {
                        prop_assert!(g.readable_letters(&l[i..j]));
                    }
                }
                prop_assert!(g.readable_in_core(&v.inverse()));
            }
        }

        #[test]
        fn generators_are_members(gens in gens_strategy()) {
            let g = StallingsGraph::fold(b2(), &gens).unwrap();
            for x in &gens {
                prop_assert!(g.member(x));
                prop_assert!(g.member(&x.inverse()));
            }
        }
    }
}
