//! Free splittings: graphs of groups with trivial edge groups, given by an
//! adapted basis.

use crate::automorphisms::Automorphism;
use crate::error::{Error, Result};
use crate::stallings::StallingsGraph;
use crate::words::{Basis, CyclicWord, Letter, Word};

/// A graph of groups with trivial edge groups.
///
/// The adapted basis `B` has one letter per non-tree edge (`loops`) and the
/// remaining letters generate the vertex groups (`vertex_gens`). `psi`
/// sends letter `i` of `B` to its expression in the ambient basis.
#[derive(Clone, Debug)]
pub struct Splitting {
    num_vertices: usize,
    tree_edges: Vec<(usize, usize)>,
    /// `(letter of B, from, to)`.
    loops: Vec<(usize, usize, usize)>,
    vertex_gens: Vec<Vec<usize>>,
    psi: Automorphism,
    /// Per `B` letter: `Some(v)` for a vertex generator at `v`, else the
    /// index into `loops`.
    role: Vec<Role>,
    vertex_graphs: Vec<Option<StallingsGraph>>,
}

impl PartialEq for Splitting {
    fn eq(&self, other: &Self) -> bool {
        self.num_vertices == other.num_vertices
            && self.tree_edges == other.tree_edges
            && self.loops == other.loops
            && self.vertex_gens == other.vertex_gens
            && self.psi == other.psi
    }
}

impl Eq for Splitting {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Vertex(usize),
    Loop(usize),
}

/// An item of a path in the graph of groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Item {
    /// Oriented edge: tree edge `i` is `2i`, loop `j` is `2j + 1`.
    Edge { id: usize, reversed: bool },
    /// A nontrivial vertex group element.
    Syllable,
}

impl Splitting {
    pub fn new(
        num_vertices: usize,
        tree_edges: Vec<(usize, usize)>,
        loops: Vec<(usize, usize, usize)>,
        vertex_gens: Vec<Vec<usize>>,
        psi: Automorphism,
    ) -> Result<Splitting> {
        let k = psi.basis().rank();
        let bad = |m: String| Err(Error::InvalidSplitting(m));
        if num_vertices == 0 {
            return bad("no vertices".into());
        }
        if vertex_gens.len() != num_vertices {
            return bad(format!("{} vertex generator lists for {num_vertices} vertices", vertex_gens.len()));
        }
        if tree_edges.len() + 1 != num_vertices {
            return bad("tree edges do not form a spanning tree".into());
        }
        let mut parent: Vec<usize> = (0..num_vertices).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(u, v) in &tree_edges {
            if u >= num_vertices || v >= num_vertices {
                return bad(format!("tree edge {u}-{v} outside the vertex range"));
            }
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a == b {
                return bad(format!("tree edge {u}-{v} closes a cycle"));
            }
            parent[a] = b;
        }
        let mut role: Vec<Option<Role>> = vec![None; k];
        for (v, gens) in vertex_gens.iter().enumerate() {
            for &g in gens {
                if g >= k || role[g].is_some() {
                    return bad(format!("letter {} used twice or outside the basis", Letter::new(g.min(25), false)));
                }
                role[g] = Some(Role::Vertex(v));
            }
        }
        for (j, &(g, u, v)) in loops.iter().enumerate() {
            if g >= k || role[g].is_some() {
                return bad(format!("letter {} used twice or outside the basis", Letter::new(g.min(25), false)));
            }
            if u >= num_vertices || v >= num_vertices {
                return bad(format!("loop {} outside the vertex range", Letter::new(g, false)));
            }
            role[g] = Some(Role::Loop(j));
        }
        let Some(role) = role.into_iter().collect::<Option<Vec<Role>>>() else {
            return bad("adapted basis letters are not all assigned".into());
        };
        if num_vertices == 1 && loops.is_empty() {
            return bad("a single vertex without edges gives the trivial action".into());
        }
        let mut degree = vec![0usize; num_vertices];
        for &(u, v) in &tree_edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        for &(_, u, v) in &loops {
            degree[u] += 1;
            degree[v] += 1;
        }
        for v in 0..num_vertices {
            if degree[v] <= 1 && vertex_gens[v].is_empty() {
                return bad(format!("vertex {v} has degree {} and trivial group", degree[v]));
            }
        }
        let basis = psi.basis();
        let vertex_graphs = vertex_gens
            .iter()
            .map(|gens| {
                if gens.is_empty() {
                    None
                } else {
                    let words: Vec<Word> =
                        gens.iter().map(|&g| psi.image(Letter::new(g, false))).collect();
                    Some(StallingsGraph::fold(basis, &words).expect("images are over the basis"))
                }
            })
            .collect();
        Ok(Splitting { num_vertices, tree_edges, loops, vertex_gens, psi, role, vertex_graphs })
    }

    /// Free product `⟨P⟩ * ⟨Q⟩` of two complementary sets of generators.
    pub fn free_product(basis: Basis, left: &[usize], right: &[usize]) -> Result<Splitting> {
        Splitting::new(
            2,
            vec![(0, 1)],
            Vec::new(),
            vec![left.to_vec(), right.to_vec()],
            Automorphism::identity(basis),
        )
    }

    /// HNN extension of the group generated by all other generators, with
    /// stable letter `x`.
    pub fn hnn(basis: Basis, x: usize) -> Result<Splitting> {
        let others: Vec<usize> = (0..basis.rank()).filter(|&i| i != x).collect();
        Splitting::new(1, Vec::new(), vec![(x, 0, 0)], vec![others], Automorphism::identity(basis))
    }

    /// All two-part free product forms and all single-letter HNN forms
    /// over the standard basis.
    pub fn seeds(basis: Basis) -> Vec<Splitting> {
        let k = basis.rank();
        let mut out = Vec::new();
        for mask in 1..(1u32 << k) - 1 {
            if mask & 1 == 0 {
                continue;
            }
            let left: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).collect();
            let right: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 0).collect();
            out.push(Splitting::free_product(basis, &left, &right).expect("seed"));
        }
        for x in 0..k {
            out.push(Splitting::hnn(basis, x).expect("seed"));
        }
        out
    }

    pub fn basis(&self) -> Basis {
        self.psi.basis()
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn loops(&self) -> &[(usize, usize, usize)] {
        &self.loops
    }

    pub fn vertex_gens(&self) -> &[Vec<usize>] {
        &self.vertex_gens
    }

    pub fn psi(&self) -> &Automorphism {
        &self.psi
    }

    /// Stallings graphs of the nontrivial vertex groups, in the ambient basis.
    pub fn vertex_groups(&self) -> Vec<&StallingsGraph> {
        self.vertex_graphs.iter().flatten().collect()
    }

    /// The splitting with lengths `||g|| ↦ ||φ(g)||`.
    pub fn precompose(&self, phi: &Automorphism) -> Splitting {
        Splitting::new(
            self.num_vertices,
            self.tree_edges.clone(),
            self.loops.clone(),
            self.vertex_gens.clone(),
            phi.invert().compose(&self.psi),
        )
        .expect("same graph of groups")
    }

    /// Tree edges on the path from `u` to `v`.
    fn tree_path(&self, u: usize, v: usize) -> Vec<Item> {
        // Depth-first search in the tree; graphs are small.
        let mut prev: Vec<Option<(usize, Item)>> = vec![None; self.num_vertices];
        let mut seen = vec![false; self.num_vertices];
        seen[u] = true;
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            for (i, &(a, b)) in self.tree_edges.iter().enumerate() {
                for (from, to, reversed) in [(a, b, false), (b, a, true)] {
                    if from == x && !seen[to] {
                        seen[to] = true;
                        prev[to] = Some((x, Item::Edge { id: 2 * i, reversed }));
                        stack.push(to);
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut x = v;
        while x != u {
            let (p, item) = prev[x].expect("tree spans");
            path.push(item);
            x = p;
        }
        path.reverse();
        path
    }

    /// Number of edges crossed by the reduced cyclic path of `g` in the
    /// graph of groups: the translation length in the Bass–Serre tree.
    pub fn bass_serre_length(&self, g: &CyclicWord) -> usize {
        let b = self.psi.apply_inverse(&g.to_word());
        let Some(c) = CyclicWord::from_word(&b) else { return 0 };
        let letters = c.letters();
        // Start right after a vertex change, so the closing tree path is
        // inserted between the last and first letters.
        let mut items: Vec<Item> = Vec::new();
        let (start_vertex, _) = self.endpoints(letters[0]);
        let mut at = start_vertex;
        for &l in letters {
            let (from, to) = self.endpoints(l);
            items.extend(self.tree_path(at, from));
            match self.role[l.generator()] {
                Role::Vertex(_) => items.push(Item::Syllable),
                Role::Loop(j) => items.push(Item::Edge { id: 2 * j + 1, reversed: l.is_inverse() }),
            }
            at = to;
        }
        items.extend(self.tree_path(at, start_vertex));
        // Reduce: an edge followed by its reverse with nothing between.
        let mut stack: Vec<Item> = Vec::new();
        for it in items {
            match (stack.last(), it) {
                (Some(&Item::Edge { id: a, reversed: ra }), Item::Edge { id: b, reversed: rb })
                    if a == b && ra != rb =>
                {
                    stack.pop();
                }
                _ => stack.push(it),
            }
        }
        // Cyclic reduction.
        let (mut lo, mut hi) = (0, stack.len());
        while hi - lo >= 2 {
            match (stack[lo], stack[hi - 1]) {
                (Item::Edge { id: a, reversed: ra }, Item::Edge { id: b, reversed: rb })
                    if a == b && ra != rb =>
                {
                    lo += 1;
                    hi -= 1;
                }
                _ => break,
            }
        }
        stack[lo..hi].iter().filter(|i| matches!(i, Item::Edge { .. })).count()
    }

    /// Vertices at which a letter of `B` starts and ends.
    fn endpoints(&self, l: Letter) -> (usize, usize) {
        match self.role[l.generator()] {
            Role::Vertex(v) => (v, v),
            Role::Loop(j) => {
                let (_, u, v) = self.loops[j];
                if l.is_inverse() {
                    (v, u)
                } else {
                    (u, v)
                }
            }
        }
    }

    /// Whether `v` is readable in the core of some nontrivial vertex group.
    pub fn l2_contains(&self, v: &Word) -> bool {
        self.vertex_groups().iter().any(|g| g.readable_in_core(v))
    }

    /// Whether the axis of `g` lies in the core of some vertex group: `g^K`
    /// is readable, with `K` large enough that a closed loop is forced.
    pub fn axis_in_l2(&self, g: &CyclicWord) -> bool {
        self.vertex_groups().iter().any(|graph| {
            let v = graph.core_vertices().len();
            let spec_k = (v + 1).div_ceil(g.len()) + 1;
            let k = spec_k.max(v + 1);
            graph.readable_in_core(&g.pow(k).to_word())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> Basis {
        Basis::new(2).unwrap()
    }

    fn cyc(s: &str) -> CyclicWord {
        b2().parse_cyclic(s).unwrap().unwrap()
    }

    fn w(s: &str) -> Word {
        b2().parse_word(s).unwrap()
    }

    #[test]
    fn bass_serre_examples() {
        let fp = Splitting::free_product(b2(), &[0], &[1]).unwrap();
        assert_eq!(fp.bass_serre_length(&cyc("ab")), 2);
        assert_eq!(fp.bass_serre_length(&cyc("a")), 0);
        assert_eq!(fp.bass_serre_length(&cyc("aabAb")), 4);
        let hnn = Splitting::hnn(b2(), 0).unwrap();
        assert_eq!(hnn.bass_serre_length(&cyc("abAB")), 2);
        assert_eq!(hnn.bass_serre_length(&cyc("b")), 0);
        assert_eq!(hnn.bass_serre_length(&cyc("a")), 1);
        assert_eq!(hnn.bass_serre_length(&cyc("aab")), 2);
    }

    #[test]
    fn validation() {
        let id = Automorphism::identity(b2());
        assert!(Splitting::new(1, vec![], vec![], vec![vec![0, 1]], id.clone()).is_err());
        assert!(Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0, 1], vec![]], id.clone()).is_err());
        assert!(Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0], vec![0]], id.clone()).is_err());
        // Barbell with trivial vertex groups is reduced enough: both ends carry loops.
        let barbell = Splitting::new(2, vec![(0, 1)], vec![(0, 0, 0), (1, 1, 1)], vec![vec![], vec![]], id.clone());
        assert!(barbell.is_ok());
        assert_eq!(Splitting::seeds(b2()).len(), 3);
        assert_eq!(Splitting::seeds(Basis::new(3).unwrap()).len(), 6);
    }

    #[test]
    fn l2_examples() {
        let fp = Splitting::free_product(b2(), &[0], &[1]).unwrap();
        assert!(fp.l2_contains(&w("aa")));
        assert!(!fp.l2_contains(&w("ab")));
        assert!(fp.axis_in_l2(&cyc("b")));
        assert!(!fp.axis_in_l2(&cyc("ab")));
    }

    #[test]
    fn transverse_pair_lengths() {
        let psi = Automorphism::new(b2(), vec![w("aba"), w("ab")]).unwrap();
        let s2 = Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0], vec![1]], psi).unwrap();
        assert_eq!(s2.bass_serre_length(&cyc("aba")), 0);
        assert_eq!(s2.bass_serre_length(&cyc("ab")), 0);
        assert!(s2.bass_serre_length(&cyc("a")) > 0);
        assert!(s2.bass_serre_length(&cyc("b")) > 0);
    }

    #[test]
    fn elliptic_iff_conjugate_into_vertex_group() {
        let psi = Automorphism::new(b2(), vec![w("aba"), w("ab")]).unwrap();
        let mut splittings = Splitting::seeds(b2());
        splittings.push(Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0], vec![1]], psi).unwrap());
        for s in &splittings {
            for g in b2().cyclic_words_up_to(7) {
                let elliptic = s.bass_serre_length(&g) == 0;
                let conj = s.vertex_groups().iter().any(|h| !h.conjugacy_intersection(&g).reps.is_empty());
                assert_eq!(elliptic, conj, "{g}");
                assert_eq!(elliptic, s.axis_in_l2(&g), "{g}");
            }
        }
    }

    #[test]
    fn precompose_matches_pushforward() {
        let fp = Splitting::free_product(b2(), &[0], &[1]).unwrap();
        let phi = Automorphism::new(b2(), vec![w("ab"), w("b")]).unwrap();
        let t = fp.precompose(&phi);
        for g in b2().cyclic_words_up_to(6) {
            assert_eq!(t.bass_serre_length(&g), fp.bass_serre_length(&phi.apply_cyclic(&g)));
        }
    }
}
