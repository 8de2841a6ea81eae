//! Currents as exact frequency tables in the rose chart, rational currents,
//! restriction to subgroups, realization by cyclic words, and the generic
//! stretching factor.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::automorphisms::{bounded_cancellation, Automorphism};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::stallings::StallingsGraph;
use crate::words::{cancellation, Basis, CyclicWord, Letter, Word};

pub const DEFAULT_DEPTH: usize = 3;

/// Weights `⟨v, μ⟩` for reduced words `1 ≤ |v| ≤ depth`. Absent words
/// weigh zero; zero weights are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    basis: Basis,
    depth: usize,
    weights: BTreeMap<Word, Rational>,
}

/// One failed constraint of [`FrequencyTable::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Negative { word: Word, value: Rational },
    Flip { word: Word, value: Rational, inverse: Rational },
    Right { word: Word, value: Rational, sum: Rational },
    Left { word: Word, value: Rational, sum: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative { word, value } => {
                write!(f, "negative {word} {}", rational::fmt(value))
            }
            Violation::Flip { word, value, inverse } => write!(
                f,
                "flip {word} {} vs {} {}",
                rational::fmt(value),
                word.inverse(),
                rational::fmt(inverse)
            ),
            Violation::Right { word, value, sum } => {
                write!(f, "right {word} {} vs sum {}", rational::fmt(value), rational::fmt(sum))
            }
            Violation::Left { word, value, sum } => {
                write!(f, "left {word} {} vs sum {}", rational::fmt(value), rational::fmt(sum))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        writeln!(f, "invalid: {} violation(s)", self.violations.len())?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FrequencyTable {
    /// Build a table; words must be reduced, over the basis, and of length
    /// `1..=depth`. Sign and consistency are checked by [`validate`](Self::validate).
    pub fn new(
        basis: Basis,
        depth: usize,
        weights: impl IntoIterator<Item = (Word, Rational)>,
    ) -> Result<FrequencyTable> {
        if depth == 0 {
            return Err(Error::InvalidTable("depth must be at least 1".into()));
        }
        let mut map = BTreeMap::new();
        for (w, r) in weights {
            if w.is_empty() || w.len() > depth {
                return Err(Error::InvalidTable(format!("word {w} outside depth {depth}")));
            }
            if let Some(l) = w.letters().iter().find(|l| !basis.contains(**l)) {
                return Err(Error::UnknownLetter(l.to_char(), basis.rank()));
            }
            if map.contains_key(&w) {
                return Err(Error::InvalidTable(format!("word {w} listed twice")));
            }
            if !r.is_zero() {
                map.insert(w, r);
            }
        }
        Ok(FrequencyTable { basis, depth, weights: map })
    }

    pub fn zero(basis: Basis, depth: usize) -> FrequencyTable {
        FrequencyTable { basis, depth, weights: BTreeMap::new() }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn get(&self, v: &Word) -> Rational {
        self.weights.get(v).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in shortlex order.
    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.weights.iter()
    }

    /// Total weight of the one-letter words.
    pub fn mass(&self) -> Rational {
        self.weights.iter().filter(|(w, _)| w.len() == 1).map(|(_, r)| r.clone()).sum()
    }

    pub fn scale(&self, c: &Rational) -> FrequencyTable {
        if c.is_zero() {
            return FrequencyTable::zero(self.basis, self.depth);
        }
        FrequencyTable {
            basis: self.basis,
            depth: self.depth,
            weights: self.weights.iter().map(|(w, r)| (w.clone(), r * c)).collect(),
        }
    }

    pub fn add(&self, other: &FrequencyTable) -> FrequencyTable {
        assert_eq!((self.basis, self.depth), (other.basis, other.depth));
        let mut weights = self.weights.clone();
        for (w, r) in &other.weights {
            let e = weights.entry(w.clone()).or_insert_with(Rational::zero);
            *e += r;
        }
        weights.retain(|_, r| !r.is_zero());
        FrequencyTable { basis: self.basis, depth: self.depth, weights }
    }

    /// Same table truncated to a smaller depth.
    pub fn truncate(&self, depth: usize) -> FrequencyTable {
        assert!(depth >= 1 && depth <= self.depth);
        FrequencyTable {
            basis: self.basis,
            depth,
            weights: self
                .weights
                .iter()
                .filter(|(w, _)| w.len() <= depth)
                .map(|(w, r)| (w.clone(), r.clone()))
                .collect(),
        }
    }

    /// Rescaled to unit one-letter mass (unchanged if the mass is zero).
    pub fn normalized(&self) -> FrequencyTable {
        let m = self.mass();
        if m.is_zero() {
            self.clone()
        } else {
            self.scale(&(Rational::one() / m))
        }
    }

    /// Largest absolute difference of entries, in floating point.
    pub fn sup_distance(&self, other: &FrequencyTable) -> f64 {
        let keys: BTreeSet<&Word> = self.weights.keys().chain(other.weights.keys()).collect();
        keys.into_iter()
            .map(|w| rational::to_f64(&(self.get(w) - other.get(w))).abs())
            .fold(0.0, f64::max)
    }

    /// Check sign, flip invariance, and left and right consistency.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (w, r) in &self.weights {
            if r.is_negative() {
                violations.push(Violation::Negative { word: w.clone(), value: r.clone() });
            }
        }
        let words = self.basis.reduced_words_up_to(self.depth);
        for w in words.iter().filter(|w| !w.is_empty()) {
            let value = self.get(w);
            let inv = w.inverse();
            if inv > *w {
                let inverse = self.get(&inv);
                if inverse != value {
                    violations.push(Violation::Flip { word: w.clone(), value: value.clone(), inverse });
                }
            }
            if w.len() < self.depth {
                let mut right = Rational::zero();
                let mut left = Rational::zero();
                for x in self.basis.letters() {
                    if w.last() != Some(x.inverse()) {
                        let mut l = w.letters().to_vec();
                        l.push(x);
                        right += self.get(&Word::from_reduced(l));
                    }
                    if w.first() != Some(x.inverse()) {
                        let mut l = vec![x];
                        l.extend_from_slice(w.letters());
                        left += self.get(&Word::from_reduced(l));
                    }
                }
                if right != value {
                    violations.push(Violation::Right { word: w.clone(), value: value.clone(), sum: right });
                }
                if left != value {
                    violations.push(Violation::Left { word: w.clone(), value, sum: left });
                }
            }
        }
        ValidationReport { violations }
    }

    /// `{v : ⟨v, μ⟩ > 0}`.
    pub fn support(&self) -> Result<BTreeSet<Word>> {
        let report = self.validate();
        if !report.is_valid() {
            return Err(Error::InvalidTable(report.violations[0].to_string()));
        }
        Ok(self.weights.keys().cloned().collect())
    }
}

/// `⟨v, η_g⟩ = occ(v, g) + occ(v⁻¹, g)` for `1 ≤ |v| ≤ depth`.
pub fn counting_table(basis: Basis, g: &CyclicWord, depth: usize) -> FrequencyTable {
    let mut weights: BTreeMap<Word, Rational> = BTreeMap::new();
    let n = g.len();
    let one = Rational::one();
    for i in 0..n {
        let mut v = Vec::with_capacity(depth);
        for j in 0..depth {
            v.push(g.letter_at(i + j));
            let w = Word::from_reduced(v.clone());
            *weights.entry(w.inverse()).or_insert_with(Rational::zero) += &one;
            *weights.entry(w).or_insert_with(Rational::zero) += &one;
        }
    }
    FrequencyTable { basis, depth, weights }
}

/// The uniform current: `1/(2k(2k−1)^{n−1})` on every reduced word of length `n`.
pub fn uniform_table(basis: Basis, depth: usize) -> FrequencyTable {
    let k = basis.rank() as i64;
    let mut weights = BTreeMap::new();
    for n in 1..=depth {
        let denom = BigInt::from(2 * k) * BigInt::from(2 * k - 1).pow(n as u32 - 1);
        let r = Rational::new(BigInt::one(), denom);
        for w in basis.reduced_words(n) {
            weights.insert(w, r.clone());
        }
    }
    FrequencyTable { basis, depth, weights }
}

/// A finite positive combination `Σ λ_i η_{g_i}`, kept sorted by word with
/// like terms merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RationalCurrent {
    terms: Vec<(Rational, CyclicWord)>,
}

impl RationalCurrent {
    pub fn new(terms: impl IntoIterator<Item = (Rational, CyclicWord)>) -> Result<RationalCurrent> {
        let mut map: BTreeMap<CyclicWord, Rational> = BTreeMap::new();
        for (r, g) in terms {
            if r.is_negative() {
                return Err(Error::InvalidTable(format!("negative weight on {g}")));
            }
            *map.entry(g).or_insert_with(Rational::zero) += r;
        }
        Ok(RationalCurrent {
            terms: map.into_iter().filter(|(_, r)| !r.is_zero()).map(|(g, r)| (r, g)).collect(),
        })
    }

    pub fn counting(g: CyclicWord) -> RationalCurrent {
        RationalCurrent { terms: vec![(Rational::one(), g)] }
    }

    pub fn empty() -> RationalCurrent {
        RationalCurrent::default()
    }

    pub fn terms(&self) -> &[(Rational, CyclicWord)] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parse `1*ab + 2/3*aab`; a bare word has weight 1, `0` is empty.
    pub fn parse(basis: Basis, s: &str) -> Result<RationalCurrent> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(RationalCurrent::empty());
        }
        let mut terms = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let (r, w) = match part.split_once('*') {
                Some((r, w)) => (rational::parse(r)?, w.trim()),
                None => (Rational::one(), part),
            };
            let g = basis
                .parse_cyclic(w)?
                .ok_or_else(|| Error::parse(format!("trivial class in term {part:?}")))?;
            terms.push((r, g));
        }
        RationalCurrent::new(terms)
    }

    pub fn table(&self, basis: Basis, depth: usize) -> FrequencyTable {
        self.terms.iter().fold(FrequencyTable::zero(basis, depth), |acc, (r, g)| {
            acc.add(&counting_table(basis, g, depth).scale(r))
        })
    }

    /// `φμ`, using `φη_g = η_{φ(g)}`.
    pub fn push_forward(&self, phi: &Automorphism) -> RationalCurrent {
        RationalCurrent::new(self.terms.iter().map(|(r, g)| (r.clone(), phi.apply_cyclic(g))))
            .expect("weights stay nonnegative")
    }

    pub fn scale(&self, c: &Rational) -> RationalCurrent {
        RationalCurrent::new(self.terms.iter().map(|(r, g)| (r * c, g.clone())))
            .expect("nonnegative scale")
    }

    pub fn add(&self, other: &RationalCurrent) -> RationalCurrent {
        RationalCurrent::new(self.terms.iter().chain(other.terms.iter()).cloned())
            .expect("sum of currents")
    }

    /// Restriction to the subgroup of `graph`: each `λη_g` with `g = f^d`
    /// becomes `λ d Σ η_c`, the sum over the subgroup classes `c` carried by
    /// the axis of `f` (primitive closed core paths labelled by powers of
    /// rotations of `f`).
    pub fn restrict(&self, graph: &StallingsGraph) -> Result<RestrictedCurrent> {
        let mut outside = Vec::new();
        let mut terms: BTreeMap<CyclicWord, RestrictedTerm> = BTreeMap::new();
        for (r, g) in &self.terms {
            let (f, d) = g.primitive_root();
            let cycles = graph.primitive_cycles(&f);
            if cycles.is_empty() {
                outside.push(g.to_string());
                continue;
            }
            let w = r * Rational::from_integer(BigInt::from(d));
            for c in cycles {
                let t = terms.entry(c.chart.clone()).or_insert_with(|| RestrictedTerm {
                    weight: Rational::zero(),
                    chart: c.chart.clone(),
                    ambient: c.ambient.clone(),
                });
                t.weight += &w;
            }
        }
        if !outside.is_empty() {
            return Err(Error::OutsideSupport(outside.join(", ")));
        }
        Ok(RestrictedCurrent { terms: terms.into_values().collect() })
    }
}

impl fmt::Display for RationalCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().map(|(r, g)| format!("{}*{}", rational::fmt(r), g)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedTerm {
    pub weight: Rational,
    /// Class in the subgroup's own basis.
    pub chart: CyclicWord,
    /// The same class in the ambient group.
    pub ambient: CyclicWord,
}

/// A rational current on a subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedCurrent {
    pub terms: Vec<RestrictedTerm>,
}

impl RestrictedCurrent {
    /// The current written in the subgroup chart.
    pub fn chart_current(&self) -> RationalCurrent {
        RationalCurrent::new(self.terms.iter().map(|t| (t.weight.clone(), t.chart.clone())))
            .expect("nonnegative")
    }

    /// The same combination of classes viewed in the ambient group; pairing
    /// it with a tree gives the pairing of the restricted current with the
    /// subgroup's minimal subtree.
    pub fn ambient_current(&self) -> RationalCurrent {
        RationalCurrent::new(self.terms.iter().map(|t| (t.weight.clone(), t.ambient.clone())))
            .expect("nonnegative")
    }
}

impl fmt::Display for RestrictedCurrent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| format!("{}*{} [{}]", rational::fmt(&t.weight), t.chart, t.ambient))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A cyclic word whose counting table at the table's depth is proportional
/// to the table.
pub fn realize_table(t: &FrequencyTable) -> Result<CyclicWord> {
    let report = t.validate();
    if !report.is_valid() {
        return Err(Error::InvalidTable(report.violations[0].to_string()));
    }
    let depth = t.depth();
    let top: Vec<(&Word, &Rational)> = t.entries().filter(|(w, _)| w.len() == depth).collect();
    if top.is_empty() {
        return Err(Error::NotRealizable("empty support".into()));
    }
    let lcm = top.iter().fold(BigInt::one(), |acc, (_, r)| acc.lcm(r.denom()));
    let counts: BTreeMap<Word, BigInt> =
        top.iter().map(|(w, r)| ((*w).clone(), (*r * Rational::from_integer(lcm.clone())).to_integer())).collect();

    if depth == 1 {
        let mut letters = Vec::new();
        let g = counts.iter().filter(|(w, _)| !w.letters()[0].is_inverse()).fold(BigInt::zero(), |acc, (_, n)| acc.gcd(n));
        for (w, n) in &counts {
            let l = w.letters()[0];
            if !l.is_inverse() {
                let n = (n / &g).to_usize().ok_or_else(|| Error::NotRealizable("weights too large".into()))?;
                letters.extend(std::iter::repeat_n(l, n));
            }
        }
        return Ok(CyclicWord::from_cyclically_reduced(letters));
    }

    // Transition graph: nodes are words of length depth−1, each depth word
    // an edge from its prefix to its suffix.
    let edges: Vec<(Word, BigInt)> = counts.into_iter().collect();
    let node_of = |w: &Word, prefix: bool| -> Word {
        let l = w.letters();
        Word::from_reduced(if prefix { l[..l.len() - 1].to_vec() } else { l[1..].to_vec() })
    };
    let mut nodes: BTreeMap<Word, usize> = BTreeMap::new();
    for (w, _) in &edges {
        for p in [true, false] {
            let n = nodes.len();
            nodes.entry(node_of(w, p)).or_insert(n);
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for (w, _) in &edges {
        let a = find(&mut parent, nodes[&node_of(w, true)]);
        let b = find(&mut parent, nodes[&node_of(w, false)]);
        parent[a] = b;
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (w, _)) in edges.iter().enumerate() {
        let c = find(&mut parent, nodes[&node_of(w, true)]);
        components.entry(c).or_default().push(i);
    }
    let comps: Vec<Vec<usize>> = components.into_values().collect();
    let index: BTreeMap<&Word, usize> = edges.iter().enumerate().map(|(i, (w, _))| (w, i)).collect();
    let comp_of: Vec<usize> = {
        let mut v = vec![0; edges.len()];
        for (ci, c) in comps.iter().enumerate() {
            for &e in c {
                v[e] = ci;
            }
        }
        v
    };
    // A single word realizes either one flip-invariant component or one of a
    // mirror pair of components.
    let first = &comps[comp_of[0]];
    let mirror = comp_of[index[&edges[first[0]].0.inverse()]];
    let allowed = if mirror == comp_of[0] { 1 } else { 2 };
    if comps.len() != allowed {
        let described: Vec<String> = comps
            .iter()
            .map(|c| c.iter().map(|&e| edges[e].0.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        return Err(Error::NotRealizable(format!("components {{{}}}", described.join("} {"))));
    }
    let chosen = &comps[comp_of[0]];
    let g = chosen.iter().fold(BigInt::zero(), |acc, &e| acc.gcd(&edges[e].1));
    let mut out: BTreeMap<Word, Vec<(usize, usize)>> = BTreeMap::new();
    let mut remaining = Vec::new();
    for (slot, &e) in chosen.iter().enumerate() {
        let n = (&edges[e].1 / &g)
            .to_usize()
            .ok_or_else(|| Error::NotRealizable("weights too large".into()))?;
        remaining.push(n);
        out.entry(node_of(&edges[e].0, true)).or_default().push((slot, e));
    }
    // Hierholzer, iterative.
    let start = node_of(&edges[chosen[0]].0, true);
    let mut cursor: BTreeMap<Word, usize> = BTreeMap::new();
    let mut stack: Vec<(Word, Option<usize>)> = vec![(start, None)];
    let mut circuit: Vec<usize> = Vec::new();
    while let Some((v, via)) = stack.last().cloned() {
        let outs = out.get(&v).map(Vec::as_slice).unwrap_or(&[]);
        let c = cursor.entry(v.clone()).or_insert(0);
        while *c < outs.len() && remaining[outs[*c].0] == 0 {
            *c += 1;
        }
        if *c < outs.len() {
            let (slot, e) = outs[*c];
            remaining[slot] -= 1;
            stack.push((node_of(&edges[e].0, false), Some(e)));
        } else {
            stack.pop();
            if let Some(e) = via {
                circuit.push(e);
            }
        }
    }
    circuit.reverse();
    let letters: Vec<Letter> = circuit.iter().map(|&e| *edges[e].0.letters().last().unwrap()).collect();
    CyclicWord::from_letters(letters).ok_or_else(|| Error::NotRealizable("degenerate circuit".into()))
}

/// Generic stretching factor `lim |φ(w_n)| / n` over uniformly random
/// reduced words, computed exactly.
///
/// `|φ(ux)| = |φ(u)| + |φ(x)| − 2·c(φ(u), φ(x))`, and with `C` the bounded
/// cancellation constant extending a suffix `u'` of `u` to the left changes
/// at most the first `C` letters of `φ(u')`. Once the cancellation against
/// `φ(x)` is decided inside the remaining letters (at the latest when
/// `|φ(u')| ≥ 2C`) it is the same for every `u` ending in `u'`. Summing over
/// the minimal such suffixes, each weighted by its cylinder measure, gives
/// the exact mean increment.
pub fn stretching_factor(phi: &Automorphism) -> Result<Rational> {
    let (c, certified) = bounded_cancellation(phi);
    if !certified {
        return Err(Error::ResourceLimit("cancellation constant could not be certified".into()));
    }
    let basis = phi.basis();
    let k = basis.rank();
    let q = 2 * k - 1;
    let letters: Vec<Letter> = basis.letters().collect();
    let mean_len = Rational::new(BigInt::from(phi.total_image_len() * 2), BigInt::from(2 * k));
    if c == 0 {
        return Ok(mean_len);
    }
    // Σ over leaves of cancellation · (2k−1)^{-depth}, accumulated per depth.
    let per_first: Vec<BTreeMap<usize, u64>> = crate::par::map(&letters, |&x| {
        let img_x = phi.image(x);
        let mut acc: BTreeMap<usize, u64> = BTreeMap::new();
        // (suffix u' written left to right, its image)
        let mut stack: Vec<(Vec<Letter>, Word)> = letters
            .iter()
            .filter(|&&y| y != x.inverse())
            .map(|&y| (vec![y], phi.image(y)))
            .collect();
        while let Some((u, img)) = stack.pop() {
            // Extending u' to the left changes at most the first `c` letters
            // of its image; stop once the cancellation is decided by the rest.
            let canc = cancellation(img.letters(), img_x.letters());
            let fixed = img.len().saturating_sub(c);
            if canc < fixed || (canc <= fixed && (canc == img_x.len() || canc == c)) {
                if canc > 0 {
                    *acc.entry(u.len()).or_insert(0) += canc as u64;
                }
                continue;
            }
            let head = u[0];
            for &y in &letters {
                if y != head.inverse() {
                    let mut u2 = Vec::with_capacity(u.len() + 1);
                    u2.push(y);
                    u2.extend_from_slice(&u);
                    let img2 = phi.image(y).mul(&img);
                    stack.push((u2, img2));
                }
            }
        }
        acc
    });
    let mut total = Rational::zero();
    for acc in per_first {
        for (depth, sum) in acc {
            let denom = BigInt::from(2 * k) * BigInt::from(q).pow(depth as u32);
            total += Rational::new(BigInt::from(sum), denom);
        }
    }
    Ok(mean_len - total * Rational::from_integer(BigInt::from(2)))
}

/// The first-order approximation
/// `(1/2k) Σ_x |φ(x)| − (2/(2k(2k−1))) Σ_{xy reduced} c(φ(x), φ(y))`,
/// exact whenever cancellation never reaches beyond one neighbouring image.
pub fn first_order_stretch(phi: &Automorphism) -> Rational {
    let basis = phi.basis();
    let k = basis.rank();
    let letters: Vec<Letter> = basis.letters().collect();
    let mut csum = 0usize;
    for &x in &letters {
        for &y in &letters {
            if y != x.inverse() {
                csum += cancellation(phi.image(x).letters(), phi.image(y).letters());
            }
        }
    }
    Rational::new(BigInt::from(2 * phi.total_image_len()), BigInt::from(2 * k))
        - Rational::new(BigInt::from(2 * csum), BigInt::from(2 * k * (2 * k - 1)))
}

/// Monte Carlo estimate `|φ(w)| / n` for one uniformly random reduced word
/// of length `n`.
pub fn monte_carlo_stretch(phi: &Automorphism, n: usize, seed: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = phi.basis().sample_reduced_word_with(n, &mut rng);
    Ok(phi.apply(&w).len() as f64 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::whitehead_generators;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

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
    fn counting_examples() {
        let t = counting_table(b2(), &cyc("ab"), 1);
        for l in ["a", "A", "b", "B"] {
            assert_eq!(t.get(&w(l)), int(1));
        }
        let t = counting_table(b2(), &cyc("ab"), 2);
        for v in ["ab", "ba", "AB", "BA"] {
            assert_eq!(t.get(&w(v)), int(1));
        }
        assert_eq!(t.get(&w("aB")), int(0));
        let t = counting_table(b2(), &cyc("aa"), 1);
        assert_eq!(t.get(&w("a")), int(2) * counting_table(b2(), &cyc("a"), 1).get(&w("a")));
    }

    #[test]
    fn counting_agrees_with_occurrences() {
        for g in b2().cyclic_words_up_to(5) {
            let t = counting_table(b2(), &g, 3);
            for v in b2().reduced_words_up_to(3).iter().filter(|v| !v.is_empty()) {
                let expected = g.occurrences(v).unwrap() + g.occurrences(&v.inverse()).unwrap();
                assert_eq!(t.get(v), int(expected as i64));
            }
        }
    }

    #[test]
    fn uniform_examples() {
        let t = uniform_table(b2(), 1);
        assert_eq!(t.entries().count(), 4);
        assert!(t.entries().all(|(_, r)| *r == frac(1, 4)));
        let t = uniform_table(b2(), 2);
        assert_eq!(t.entries().filter(|(w, _)| w.len() == 2).count(), 12);
        assert!(t.entries().filter(|(w, _)| w.len() == 2).all(|(_, r)| *r == frac(1, 12)));
        assert!(uniform_table(b2(), 3).validate().is_valid());
        assert!(uniform_table(Basis::new(3).unwrap(), 3).validate().is_valid());
    }

    #[test]
    fn validation_examples() {
        let t = FrequencyTable::new(b2(), 1, [(w("a"), int(1)), (w("A"), int(0))]).unwrap();
        let r = t.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Flip { .. })));
        let t = FrequencyTable::new(
            b2(),
            2,
            [(w("a"), int(1)), (w("A"), int(1)), (w("aa"), int(1)), (w("ab"), int(1))],
        )
        .unwrap();
        let r = t.validate();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Right { word, sum, .. } if *word == w("a") && *sum == int(2))));
        let t = FrequencyTable::new(b2(), 1, [(w("a"), int(-1)), (w("A"), int(-1))]).unwrap();
        assert!(matches!(t.validate().violations[0], Violation::Negative { .. }));
    }

    #[test]
    fn support_examples() {
        let s = counting_table(b2(), &cyc("ab"), 2).support().unwrap();
        let expected: BTreeSet<Word> =
            ["a", "A", "b", "B", "ab", "ba", "AB", "BA"].iter().map(|s| w(s)).collect();
        assert_eq!(s, expected);
        assert_eq!(uniform_table(b2(), 2).support().unwrap().len(), 16);
        assert!(FrequencyTable::zero(b2(), 2).support().unwrap().is_empty());
        let bad = FrequencyTable::new(b2(), 1, [(w("a"), int(1))]).unwrap();
        assert!(matches!(bad.support(), Err(Error::InvalidTable(_))));
    }

    #[test]
    fn realize_examples() {
        let t = counting_table(b2(), &cyc("ab"), 2);
        assert_eq!(realize_table(&t).unwrap(), cyc("ab"));
        let u = uniform_table(b2(), 1);
        let r = realize_table(&u).unwrap();
        let c = counting_table(b2(), &r, 1);
        assert_eq!(c.get(&w("a")), c.get(&w("b")));
        let bad = FrequencyTable::new(b2(), 2, [(w("a"), int(1)), (w("b"), int(1)), (w("ab"), int(1)), (w("AB"), int(1))]).unwrap();
        assert!(matches!(realize_table(&bad), Err(Error::InvalidTable(_))));
        let two = counting_table(b2(), &cyc("a"), 2).add(&counting_table(b2(), &cyc("b"), 2));
        assert!(matches!(realize_table(&two), Err(Error::NotRealizable(_))));
        let u3 = uniform_table(b2(), 3);
        let r = realize_table(&u3).unwrap();
        assert!(proportional(&counting_table(b2(), &r, 3), &u3));
    }

    fn proportional(a: &FrequencyTable, b: &FrequencyTable) -> bool {
        a.normalized() == b.normalized()
    }

    #[test]
    fn realize_inverts_counting() {
        for g in b2().cyclic_words_up_to(5) {
            for depth in 1..=3 {
                let t = counting_table(b2(), &g, depth);
                let r = realize_table(&t).unwrap();
                assert!(proportional(&counting_table(b2(), &r, depth), &t), "{g} depth {depth} gave {r}");
            }
        }
    }

    #[test]
    fn rational_current_parse_and_print() {
        let mu = RationalCurrent::parse(b2(), "1*ab + 2/3*aab").unwrap();
        assert_eq!(mu.to_string(), "1*ab + 2/3*aab");
        assert_eq!(RationalCurrent::parse(b2(), "ba + 1*ab").unwrap().to_string(), "2*ab");
        assert_eq!(RationalCurrent::parse(b2(), "0").unwrap(), RationalCurrent::empty());
        assert!(RationalCurrent::parse(b2(), "1*aA").is_err());
    }

    #[test]
    fn restrict_examples() {
        let h = StallingsGraph::fold(b2(), &[w("aa"), w("b")]).unwrap();
        let r = RationalCurrent::counting(cyc("aa")).restrict(&h).unwrap();
        assert_eq!(r.terms.len(), 1);
        assert_eq!(r.terms[0].weight, int(2));
        assert_eq!(r.terms[0].ambient, cyc("aa"));
        let r = RationalCurrent::counting(cyc("b")).restrict(&h).unwrap();
        assert_eq!((r.terms.len(), r.terms[0].weight.clone()), (1, int(1)));
        let h = StallingsGraph::fold(b2(), &[w("ab")]).unwrap();
        let r = RationalCurrent::counting(cyc("ab")).restrict(&h).unwrap();
        assert_eq!((r.terms.len(), r.terms[0].weight.clone()), (1, int(1)));
        assert!(matches!(
            RationalCurrent::counting(cyc("a")).restrict(&h),
            Err(Error::OutsideSupport(_))
        ));
    }

    #[test]
    fn stretch_examples() {
        let id = Automorphism::identity(b2());
        assert_eq!(stretching_factor(&id).unwrap(), int(1));
        let phi = Automorphism::new(b2(), vec![w("ab"), w("b")]).unwrap();
        assert_eq!(first_order_stretch(&phi), frac(7, 6));
        assert_eq!(stretching_factor(&phi).unwrap(), frac(7, 6));
        let mc = monte_carlo_stretch(&phi, 100_000, 7).unwrap();
        assert!((mc - 7.0 / 6.0).abs() < 0.01, "{mc}");
    }

    #[test]
    fn stretch_matches_monte_carlo() {
        // Compositions with deep cancellation, where the first-order formula
        // is not exact.
        let basis = b2();
        let gens = whitehead_generators(basis);
        let mut phi = Automorphism::identity(basis);
        for i in [13, 2, 17, 5, 13] {
            phi = gens[i % gens.len()].compose(&phi);
        }
        let exact = rational::to_f64(&stretching_factor(&phi).unwrap());
        let mut mc = 0.0;
        for seed in 0..4 {
            mc += monte_carlo_stretch(&phi, 200_000, seed).unwrap() / 4.0;
        }
        assert!((exact - mc).abs() < 0.01, "{phi}: exact {exact} vs {mc}");
    }

    #[test]
    fn stretch_is_outer_invariant_and_at_least_one() {
        let basis = b2();
        let gens = whitehead_generators(basis);
        for g in gens.iter().take(8) {
            for h in gens.iter().skip(4).take(6) {
                let phi = g.compose(h);
                let s = stretching_factor(&phi).unwrap();
                assert!(s >= int(1), "{phi}");
                for c in ["a", "bA", "abb"] {
                    let inner = Automorphism::inner(basis, &w(c));
                    assert_eq!(stretching_factor(&inner.compose(&phi)).unwrap(), s);
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn counting_laws(raw in prop::collection::vec(0usize..4, 1..9), depth in 1usize..4) {
            if let Some(g) = CyclicWord::from_letters(raw.into_iter().map(Letter::from_index)) {
                let t = counting_table(b2(), &g, depth);
                prop_assert!(t.validate().is_valid());
                prop_assert_eq!(t.mass(), int(2 * g.len() as i64));
            }
        }

        #[test]
        fn push_forward_matches_recount(idx in 0usize..15, raw in prop::collection::vec(0usize..4, 1..7)) {
            let phi = &whitehead_generators(b2())[idx];
            if let Some(g) = CyclicWord::from_letters(raw.into_iter().map(Letter::from_index)) {
                let mu = RationalCurrent::counting(g.clone()).push_forward(phi);
                let direct = CyclicWord::from_word(&phi.apply(&g.to_word())).unwrap();
                prop_assert_eq!(mu.table(b2(), 2), counting_table(b2(), &direct, 2));
            }
        }
    }
}
