//! Stallings folding of a wedge of petals, optionally carrying edge tags.
//!
//! Each petal spells one generator. When tags are tracked, every edge also
//! carries a word in the abstract free group on the generators, maintained
//! so that the tags along any closed path at the base multiply to the
//! generator-expression of that path's label. Before two edges are
//! identified their tags are equalized by a gauge change at a non-base
//! vertex, so the loops of a fully folded rose end up tagged with the
//! inverse images of the basis.

use crate::words::{Letter, Word};

#[derive(Clone, Debug)]
struct Edge {
    from: usize,
    gen: usize,
    to: usize,
    tag: Option<Word>,
}

#[derive(Clone, Debug)]
pub(crate) struct Folded {
    pub num_vertices: usize,
    /// Base vertex is always 0.
    pub edges: Vec<(usize, usize, usize)>,
    pub tags: Option<Vec<Word>>,
    /// Some identification of parallel edges happened, i.e. the generators
    /// were not a free basis of the subgroup they generate.
    pub rank_dropped: bool,
}

struct Folder {
    edges: Vec<Option<Edge>>,
    incident: Vec<Vec<usize>>,
    alive: Vec<bool>,
    track: bool,
    rank_dropped: bool,
}

/// One oriented view of an edge at a vertex.
#[derive(Clone)]
struct Half {
    edge: usize,
    letter: Letter,
    target: usize,
}

impl Folder {
    fn add_vertex(&mut self) -> usize {
        self.incident.push(Vec::new());
        self.alive.push(true);
        self.incident.len() - 1
    }

    fn add_edge(&mut self, from: usize, gen: usize, to: usize, tag: Option<Word>) {
        let id = self.edges.len();
        self.edges.push(Some(Edge { from, gen, to, tag }));
        self.incident[from].push(id);
        if to != from {
            self.incident[to].push(id);
        }
    }

    fn halves(&self, v: usize) -> Vec<Half> {
        let mut out = Vec::new();
        for &id in &self.incident[v] {
            let Some(e) = &self.edges[id] else { continue };
            if e.from == v {
                out.push(Half { edge: id, letter: Letter::new(e.gen, false), target: e.to });
            }
            if e.to == v {
                out.push(Half { edge: id, letter: Letter::new(e.gen, true), target: e.from });
            }
        }
        out
    }

    /// Oriented tag of an edge leaving `v`.
    fn oriented_tag(&self, h: &Half) -> Word {
        let e = self.edges[h.edge].as_ref().unwrap();
        let t = e.tag.clone().unwrap_or_default();
        if h.letter.is_inverse() {
            t.inverse()
        } else {
            t
        }
    }

    fn gauge(&mut self, z: usize, g: &Word) {
        let g_inv = g.inverse();
        for &id in &self.incident[z] {
            let Some(e) = self.edges[id].as_mut() else { continue };
            let t = e.tag.take().unwrap_or_default();
            let t = match (e.from == z, e.to == z) {
                (true, true) => g.mul(&t).mul(&g_inv),
                (true, false) => g.mul(&t),
                (false, true) => t.mul(&g_inv),
                (false, false) => t,
            };
            e.tag = Some(t);
        }
    }

    fn merge(&mut self, from: usize, into: usize) {
        let ids = std::mem::take(&mut self.incident[from]);
        for id in ids {
            let Some(e) = self.edges[id].as_mut() else { continue };
            let was_incident = e.from == into || e.to == into;
            if e.from == from {
                e.from = into;
            }
            if e.to == from {
                e.to = into;
            }
            if !was_incident {
                self.incident[into].push(id);
            }
        }
        self.alive[from] = false;
    }

    fn delete(&mut self, id: usize) {
        self.edges[id] = None;
    }

    /// Find one folding opportunity at `v`.
    fn conflict_at(&self, v: usize) -> Option<(Half, Half)> {
        let hs = self.halves(v);
        for i in 0..hs.len() {
            for j in i + 1..hs.len() {
                if hs[i].letter == hs[j].letter && hs[i].edge != hs[j].edge {
                    return Some((hs[i].clone(), hs[j].clone()));
                }
            }
        }
        None
    }

    fn run(&mut self) {
        let mut stack: Vec<usize> = (0..self.alive.len()).collect();
        while let Some(v) = stack.pop() {
            if !self.alive[v] {
                continue;
            }
            let Some((h1, h2)) = self.conflict_at(v) else { continue };
            let (w1, w2) = (h1.target, h2.target);
            if w1 == w2 {
                // Deleting a parallel edge lowers the rank of the graph.
                self.rank_dropped = true;
                self.delete(h2.edge);
                stack.push(v);
                continue;
            }
            const BASE: usize = 0;
            // Vertex to discard, the one it merges into, and the gauge.
            let (gone, keep) = if w2 != BASE && w2 != v {
                if self.track {
                    let g = self.oriented_tag(&h1).inverse().mul(&self.oriented_tag(&h2));
                    self.gauge(w2, &g);
                }
                (w2, w1)
            } else if w1 != BASE && w1 != v {
                if self.track {
                    let g = self.oriented_tag(&h2).inverse().mul(&self.oriented_tag(&h1));
                    self.gauge(w1, &g);
                }
                (w1, w2)
            } else {
                // One half is a loop at v, the other runs from v to the base.
                debug_assert!(v != BASE);
                if self.track {
                    let (l1, l2) = (self.oriented_tag(&h1), self.oriented_tag(&h2));
                    let g = if w2 == v {
                        l1.inverse().mul(&l2)
                    } else {
                        l2.inverse().mul(&l1)
                    };
                    self.gauge(v, &g);
                }
                (v, BASE)
            };
            debug_assert!(gone != BASE);
            self.merge(gone, keep);
            // The two halves are now parallel with equal tags.
            self.delete(h2.edge);
            stack.push(keep);
            if keep != v && self.alive[v] {
                stack.push(v);
            }
        }
    }

    fn finish(self) -> Folded {
        let mut renumber = vec![usize::MAX; self.alive.len()];
        let mut n = 0;
        for (v, &a) in self.alive.iter().enumerate() {
            if a {
                renumber[v] = n;
                n += 1;
            }
        }
        let mut edges = Vec::new();
        let mut tags = Vec::new();
        for e in self.edges.into_iter().flatten() {
            edges.push((renumber[e.from], e.gen, renumber[e.to]));
            tags.push(e.tag.unwrap_or_default());
        }
        Folded {
            num_vertices: n,
            edges,
            tags: if self.track { Some(tags) } else { None },
            rank_dropped: self.rank_dropped,
        }
    }
}

/// Fold the wedge of petals spelling `gens`. Generator `i` is tagged with
/// letter `i` of the abstract basis when `track` is set.
pub(crate) fn fold_petals(gens: &[Word], track: bool) -> Folded {
    let mut f = Folder {
        edges: Vec::new(),
        incident: Vec::new(),
        alive: Vec::new(),
        track,
        rank_dropped: false,
    };
    let base = f.add_vertex();
    for (i, g) in gens.iter().enumerate() {
        if g.is_empty() {
            f.rank_dropped = true;
            continue;
        }
        let letters = g.letters();
        let mut cur = base;
        for (j, &l) in letters.iter().enumerate() {
            let last = j + 1 == letters.len();
            let next = if last { base } else { f.add_vertex() };
            let tag = if track {
                Some(if last {
                    Word::from_letter(Letter::new(i, false))
                } else {
                    Word::identity()
                })
            } else {
                None
            };
            if l.is_inverse() {
                f.add_edge(next, l.generator(), cur, tag.map(|t| t.inverse()));
            } else {
                f.add_edge(cur, l.generator(), next, tag);
            }
            cur = next;
        }
    }
    f.run();
    f.finish()
}
