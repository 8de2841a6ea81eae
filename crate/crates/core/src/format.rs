//! Text formats for tables, folded graphs, marked metric graphs, splittings
//! and automorphisms. Every `emit_*` output re-parses to an equal value.

use std::fmt::Write as _;

use crate::automorphisms::Automorphism;
use crate::currents::FrequencyTable;
use crate::error::{Error, Result};
use crate::rational;
use crate::stallings::StallingsGraph;
use crate::trees::{EdgeStep, MarkedMetricGraph, MetricEdge, Splitting, Tree};
use crate::words::{Basis, Letter, Word};

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn num(s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::parse(format!("expected {what}, found `{s}`")))
}

fn generator(basis: Basis, s: &str) -> Result<usize> {
    let mut cs = s.chars();
    let (Some(c), None) = (cs.next(), cs.next()) else {
        return Err(Error::parse(format!("expected a generator letter, found `{s}`")));
    };
    let l = Letter::from_char(c).filter(|l| !l.is_inverse() && basis.contains(*l));
    l.map(|l| l.generator()).ok_or_else(|| Error::parse(format!("`{s}` is not a generator of the basis")))
}

// ---------------------------------------------------------------------------
// Automorphisms: one line `a=ab` per generator.

pub fn emit_automorphism(phi: &Automorphism) -> String {
    let mut out = String::new();
    for (i, w) in phi.images().iter().enumerate() {
        let _ = writeln!(out, "{}={}", Letter::new(i, false), w);
    }
    out
}

/// Lines or comma-separated entries `x=w`, each generator exactly once.
pub fn parse_automorphism(basis: Basis, text: &str) -> Result<Automorphism> {
    let mut images: Vec<Option<Word>> = vec![None; basis.rank()];
    for entry in text.split([',', '\n']).map(str::trim).filter(|e| !e.is_empty() && !e.starts_with('#')) {
        let (lhs, rhs) = entry
            .split_once('=')
            .ok_or_else(|| Error::parse(format!("expected `x=word`, found `{entry}`")))?;
        let g = generator(basis, lhs.trim())?;
        if images[g].is_some() {
            return Err(Error::parse(format!("generator {} given twice", lhs.trim())));
        }
        images[g] = Some(basis.parse_word(rhs.trim())?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(i, w)| w.ok_or_else(|| Error::parse(format!("no image for {}", Letter::new(i, false)))))
        .collect::<Result<Vec<_>>>()?;
    Automorphism::new(basis, images)
}

// ---------------------------------------------------------------------------
// Frequency tables.

pub fn emit_table(t: &FrequencyTable) -> String {
    let mut out = format!("basis k={} depth L={}\n", t.basis().rank(), t.depth());
    for (w, r) in t.entries() {
        let _ = writeln!(out, "{w} {}", rational::fmt(r));
    }
    out
}

pub fn parse_table(text: &str) -> Result<FrequencyTable> {
    let mut it = lines(text);
    let (_, header) = it.next().ok_or_else(|| Error::parse("empty table"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    let (k, depth) = match h.as_slice() {
        ["basis", k, "depth", l] => (
            k.strip_prefix("k=").ok_or_else(|| Error::parse("expected `k=`"))?,
            l.strip_prefix("L=").ok_or_else(|| Error::parse("expected `L=`"))?,
        ),
        _ => return Err(Error::parse(format!("bad table header `{header}`"))),
    };
    let basis = Basis::new(num(k, "rank")?)?;
    let depth = num(depth, "depth")?;
    let mut weights = Vec::new();
    for (n, line) in it {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [w, r] = parts.as_slice() else {
            return Err(Error::parse(format!("line {n}: expected `word p/q`")));
        };
        weights.push((basis.parse_word(w)?, rational::parse(r)?));
    }
    FrequencyTable::new(basis, depth, weights)
}

// ---------------------------------------------------------------------------
// Folded graphs.

pub fn emit_graph(g: &StallingsGraph) -> String {
    let mut out = format!("vertices {} base {}\n", g.num_vertices(), g.base());
    for &(from, gen, to) in g.edges() {
        let _ = writeln!(out, "{from} {} {to}", Letter::new(gen, false));
    }
    let join = |xs: Vec<usize>| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "core vertices: {}", join(g.core_vertices()));
    let _ = writeln!(out, "core edges: {}", join(g.core_edges()));
    out
}

/// Core listings are recomputed, so they are accepted but not trusted.
pub fn parse_graph(basis: Basis, text: &str) -> Result<StallingsGraph> {
    let mut it = lines(text);
    let n = parse_vertices_header(it.next())?;
    let mut edges = Vec::new();
    for (ln, line) in it {
        if line.starts_with("core") {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [from, label, to] = parts.as_slice() else {
            return Err(Error::parse(format!("line {ln}: expected `from label to`")));
        };
        let (from, to) = (num(from, "vertex")?, num(to, "vertex")?);
        let l = basis.parse_letters(label)?;
        let [l] = l.as_slice() else {
            return Err(Error::parse(format!("line {ln}: label must be one letter")));
        };
        if l.is_inverse() {
            edges.push((to, l.generator(), from));
        } else {
            edges.push((from, l.generator(), to));
        }
    }
    StallingsGraph::from_edges(basis, n, edges)
}

fn parse_vertices_header(line: Option<(usize, &str)>) -> Result<usize> {
    let (_, header) = line.ok_or_else(|| Error::parse("empty graph"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    match h.as_slice() {
        ["vertices", n, "base", "0"] => num(n, "vertex count"),
        _ => Err(Error::parse(format!("expected `vertices N base 0`, found `{header}`"))),
    }
}

// ---------------------------------------------------------------------------
// Marked metric graphs. Edge ids are 1-based in the file.

pub fn emit_marked_graph(t: &MarkedMetricGraph) -> String {
    let mut out = format!("vertices {} base 0\n", t.num_vertices());
    for (i, e) in t.edges().iter().enumerate() {
        let _ = writeln!(out, "{} {} {} length {}", i + 1, e.from, e.to, rational::fmt(&e.length));
    }
    let tree: Vec<String> = t.tree().iter().map(|i| (i + 1).to_string()).collect();
    let _ = writeln!(out, "tree: {}", tree.join(" "));
    for (g, path) in t.marking().iter().enumerate() {
        let steps: Vec<String> = path
            .iter()
            .map(|s| format!("{}{}", if s.reversed { '-' } else { '+' }, s.edge + 1))
            .collect();
        let _ = writeln!(out, "{} = {}", Letter::new(g, false), steps.join(" "));
    }
    out
}

pub fn parse_marked_graph(basis: Basis, text: &str) -> Result<MarkedMetricGraph> {
    let mut it = lines(text);
    let n = parse_vertices_header(it.next())?;
    let mut edges = Vec::new();
    let mut tree = None;
    let mut marking: Vec<Option<Vec<EdgeStep>>> = vec![None; basis.rank()];
    for (ln, line) in it {
        if let Some(rest) = line.strip_prefix("tree:") {
            let ids = rest
                .split_whitespace()
                .map(|s| edge_id(s, edges.len()))
                .collect::<Result<Vec<_>>>()?;
            tree = Some(ids);
        } else if let Some((lhs, rhs)) = line.split_once('=') {
            let g = generator(basis, lhs.trim())?;
            let mut path = Vec::new();
            for tok in rhs.split_whitespace() {
                let (reversed, id) = match tok.as_bytes().first() {
                    Some(b'+') => (false, &tok[1..]),
                    Some(b'-') => (true, &tok[1..]),
                    _ => return Err(Error::parse(format!("line {ln}: expected a signed edge id, found `{tok}`"))),
                };
                path.push(EdgeStep { edge: edge_id(id, edges.len())?, reversed });
            }
            if marking[g].replace(path).is_some() {
                return Err(Error::parse(format!("line {ln}: generator marked twice")));
            }
        } else {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let (id, from, to, len) = match parts.as_slice() {
                [id, from, to, "length", len] | [id, from, to, len] => (id, from, to, len),
                _ => return Err(Error::parse(format!("line {ln}: expected `id from to length p/q`"))),
            };
            if num(id, "edge id")? != edges.len() + 1 {
                return Err(Error::parse(format!("line {ln}: edge ids must be 1, 2, ... in order")));
            }
            edges.push(MetricEdge {
                from: num(from, "vertex")?,
                to: num(to, "vertex")?,
                length: rational::parse(len)?,
            });
        }
    }
    let tree = tree.ok_or_else(|| Error::parse("missing `tree:` line"))?;
    let marking = marking
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::parse(format!("no marking for {}", Letter::new(i, false)))))
        .collect::<Result<Vec<_>>>()?;
    MarkedMetricGraph::new(basis, n, edges, tree, marking)
}

fn edge_id(s: &str, count: usize) -> Result<usize> {
    let id = num(s, "edge id")?;
    if id == 0 || id > count {
        return Err(Error::parse(format!("edge id {id} out of range")));
    }
    Ok(id - 1)
}

// ---------------------------------------------------------------------------
// Splittings.

pub fn emit_splitting(s: &Splitting) -> String {
    let mut out = format!("graph: vertices {}\n", s.num_vertices());
    let tree: Vec<String> = s.tree_edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    let _ = writeln!(out, "tree-edges: {}", tree.join(" "));
    let loops: Vec<String> = s
        .loops()
        .iter()
        .map(|&(l, u, v)| format!("{} {u}-{v}", Letter::new(l, false)))
        .collect();
    let _ = writeln!(out, "loops: {}", loops.join(" "));
    for (v, gens) in s.vertex_gens().iter().enumerate() {
        let gens: Vec<String> = gens.iter().map(|&g| Letter::new(g, false).to_string()).collect();
        let _ = writeln!(out, "vertexgens {v}: {}", gens.join(" "));
    }
    out.push_str("psi:\n");
    out.push_str(&emit_automorphism(s.psi()));
    out
}

fn pair(s: &str) -> Result<(usize, usize)> {
    let (u, v) = s.split_once('-').ok_or_else(|| Error::parse(format!("expected `u-v`, found `{s}`")))?;
    Ok((num(u, "vertex")?, num(v, "vertex")?))
}

pub fn parse_splitting(basis: Basis, text: &str) -> Result<Splitting> {
    let mut it = lines(text);
    let (_, header) = it.next().ok_or_else(|| Error::parse("empty splitting"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["graph:", "vertices", n] => num(n, "vertex count")?,
        _ => return Err(Error::parse(format!("expected `graph: vertices N`, found `{header}`"))),
    };
    let mut tree_edges = Vec::new();
    let mut loops = Vec::new();
    let mut vertex_gens: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut psi = None;
    let mut rest: Vec<&str> = Vec::new();
    for (ln, line) in it.by_ref() {
        if psi.is_some() {
            rest.push(line);
            continue;
        }
        if let Some(r) = line.strip_prefix("tree-edges:") {
            for p in r.split_whitespace() {
                tree_edges.push(pair(p)?);
            }
        } else if let Some(r) = line.strip_prefix("loops:") {
            let toks: Vec<&str> = r.split_whitespace().collect();
            if !toks.len().is_multiple_of(2) {
                return Err(Error::parse(format!("line {ln}: loops come as `letter u-v`")));
            }
            for c in toks.chunks(2) {
                let (u, v) = pair(c[1])?;
                loops.push((generator(basis, c[0])?, u, v));
            }
        } else if let Some(r) = line.strip_prefix("vertexgens") {
            let (v, gens) = r
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("line {ln}: expected `vertexgens v: ...`")))?;
            let v = num(v.trim(), "vertex")?;
            if v >= n {
                return Err(Error::parse(format!("line {ln}: vertex {v} out of range")));
            }
            let gens = gens.split_whitespace().map(|g| generator(basis, g)).collect::<Result<Vec<_>>>()?;
            if vertex_gens[v].replace(gens).is_some() {
                return Err(Error::parse(format!("line {ln}: vertex {v} listed twice")));
            }
        } else if line == "psi:" {
            psi = Some(());
        } else {
            return Err(Error::parse(format!("line {ln}: unexpected `{line}`")));
        }
    }
    if psi.is_none() {
        return Err(Error::parse("missing `psi:` block"));
    }
    let psi = parse_automorphism(basis, &rest.join("\n"))?;
    let vertex_gens = vertex_gens.into_iter().map(Option::unwrap_or_default).collect();
    Splitting::new(n, tree_edges, loops, vertex_gens, psi)
}

// ---------------------------------------------------------------------------
// Tree files.

pub fn emit_tree(t: &Tree) -> String {
    match t {
        Tree::Graph(g) => emit_marked_graph(g),
        Tree::Splitting(s) => emit_splitting(s),
    }
}

/// Dispatch on the first line: `graph:` is a splitting, `vertices` a marked
/// metric graph.
pub fn parse_tree(basis: Basis, text: &str) -> Result<Tree> {
    match lines(text).next() {
        Some((_, l)) if l.starts_with("graph:") => Ok(Tree::Splitting(parse_splitting(basis, text)?)),
        Some((_, l)) if l.starts_with("vertices") => Ok(Tree::Graph(parse_marked_graph(basis, text)?)),
        _ => Err(Error::parse("unrecognized tree file")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::currents::{counting_table, uniform_table};
    use crate::trees::sample_marked_graph;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn b2() -> Basis {
        Basis::new(2).unwrap()
    }

    #[test]
    fn table_text() {
        let t = counting_table(b2(), &b2().parse_cyclic("ab").unwrap().unwrap(), 2);
        let s = emit_table(&t);
        assert!(s.starts_with("basis k=2 depth L=2\n"));
        assert!(s.contains("\nab 1\n"));
        assert_eq!(parse_table(&s).unwrap(), t);
        let u = uniform_table(Basis::new(3).unwrap(), 2);
        assert_eq!(parse_table(&emit_table(&u)).unwrap(), u);
        assert!(parse_table("basis k=2 depth L=1\nab 1\n").is_err());
        assert!(parse_table("basis 2 depth 1\n").is_err());
    }

    #[test]
    fn automorphism_text() {
        let phi = parse_automorphism(b2(), "a=ab\nb=b\n").unwrap();
        assert_eq!(emit_automorphism(&phi), "a=ab\nb=b\n");
        assert_eq!(parse_automorphism(b2(), "b=b, a=ab").unwrap(), phi);
        assert!(matches!(parse_automorphism(b2(), "a=aa\nb=b"), Err(Error::NotAnAutomorphism(_))));
        assert!(parse_automorphism(b2(), "a=ab").is_err());
        assert!(parse_automorphism(b2(), "a=ab\na=b\nb=b").is_err());
    }

    #[test]
    fn graph_text() {
        let g = StallingsGraph::fold(b2(), &[b2().parse_word("aa").unwrap(), b2().parse_word("baB").unwrap()]).unwrap();
        let s = emit_graph(&g);
        assert!(s.starts_with(&format!("vertices {} base 0\n", g.num_vertices())));
        assert_eq!(parse_graph(b2(), &s).unwrap(), g);
        assert!(parse_graph(b2(), "vertices 2 base 0\n0 a 1\n0 a 0\n").is_err());
        let flipped = parse_graph(b2(), "vertices 2 base 0\n1 A 0\n0 b 0\n").unwrap();
        assert_eq!(flipped.edges(), &[(0, 0, 1), (0, 1, 0)]);
    }

    #[test]
    fn marked_graph_text() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let t = sample_marked_graph(b2(), &mut rng);
            let s = emit_marked_graph(&t);
            assert_eq!(parse_marked_graph(b2(), &s).unwrap(), t);
            assert_eq!(parse_tree(b2(), &s).unwrap(), Tree::Graph(t));
        }
        let rose = parse_marked_graph(b2(), "vertices 1 base 0\n1 0 0 1/2\n2 0 0 length 1/3\ntree:\na = +1\nb = +2\n").unwrap();
        assert_eq!(rose.translation_length(&b2().parse_cyclic("ab").unwrap().unwrap()), crate::rational::frac(5, 6));
        assert!(parse_marked_graph(b2(), "vertices 1 base 0\n1 0 0 1\n2 0 0 1\ntree:\na = +1\nb = +1\n").is_err());
    }

    #[test]
    fn splitting_text() {
        let mut all = Splitting::seeds(b2());
        all.extend(Splitting::seeds(Basis::new(3).unwrap()));
        for s in all {
            let text = emit_splitting(&s);
            assert_eq!(parse_splitting(s.basis(), &text).unwrap(), s);
            assert_eq!(parse_tree(s.basis(), &text).unwrap(), Tree::Splitting(s));
        }
        let fp = parse_splitting(
            b2(),
            "graph: vertices 2\ntree-edges: 0-1\nloops:\nvertexgens 0: a\nvertexgens 1: b\npsi:\na=a\nb=b\n",
        )
        .unwrap();
        assert_eq!(fp, Splitting::free_product(b2(), &[0], &[1]).unwrap());
        assert!(parse_splitting(b2(), "graph: vertices 1\ntree-edges:\nloops:\nvertexgens 0: a b\npsi:\na=a\nb=b\n").is_err());
    }

    proptest! {
        #[test]
        fn table_round_trip(letters in proptest::collection::vec(0usize..4, 1..10), depth in 1usize..4) {
            let b = b2();
            let w = Word::reduce(letters.into_iter().map(Letter::from_index));
            if let Some(g) = crate::CyclicWord::from_word(&w) {
                let t = counting_table(b, &g, depth);
                prop_assert_eq!(parse_table(&emit_table(&t)).unwrap(), t);
            }
        }

        #[test]
        fn automorphism_round_trip(seq in proptest::collection::vec(0usize..1000, 0..6)) {
            let gens = crate::automorphisms::whitehead_generators(b2());
            let phi = seq.iter().fold(Automorphism::identity(b2()), |acc, &i| gens[i % gens.len()].compose(&acc));
            prop_assert_eq!(parse_automorphism(b2(), &emit_automorphism(&phi)).unwrap(), phi);
        }

        #[test]
        fn graph_round_trip(gens in proptest::collection::vec(proptest::collection::vec(0usize..4, 1..6), 1..4)) {
            let words: Vec<Word> = gens.into_iter().map(|l| Word::reduce(l.into_iter().map(Letter::from_index))).collect();
            let g = StallingsGraph::fold(b2(), &words).unwrap();
            prop_assert_eq!(parse_graph(b2(), &emit_graph(&g)).unwrap(), g);
        }
    }
}
