//! Automorphisms of the free group as basis-image tuples.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::fold::fold_petals;
use crate::par;
use crate::words::{cancellation, Basis, CyclicWord, Letter, Word};

/// An automorphism given by the images of the basis generators.
///
/// The inverse is computed (and the basis property certified) once, at
/// construction, by folding the petals of the images while tracking which
/// product of images each edge spells.
#[derive(Clone, Debug)]
pub struct Automorphism {
    basis: Basis,
    images: Vec<Word>,
    inverse: Vec<Word>,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Automorphism {
    pub fn new(basis: Basis, images: Vec<Word>) -> Result<Automorphism> {
        let inverse = certify_basis(basis, &images)?;
        Ok(Automorphism { basis, images, inverse })
    }

    pub fn identity(basis: Basis) -> Automorphism {
        let images: Vec<Word> = basis.generators().map(Word::from_letter).collect();
        Automorphism { basis, inverse: images.clone(), images }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, l: Letter) -> Word {
        let w = &self.images[l.generator()];
        if l.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [Letter::new(i, false)])
    }

    pub fn apply(&self, w: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let img = &self.images[l.generator()];
            let push = |out: &mut Vec<Letter>, x: Letter| {
                if out.last() == Some(&x.inverse()) {
                    out.pop();
                } else {
                    out.push(x);
                }
            };
            if l.is_inverse() {
                for &x in img.letters().iter().rev() {
                    push(&mut out, x.inverse());
                }
            } else {
                for &x in img.letters() {
                    push(&mut out, x);
                }
            }
        }
        Word::from_reduced(out)
    }

    /// Image of a conjugacy class. Automorphisms never kill a nontrivial
    /// class, so the result is again a cyclic word.
    pub fn apply_cyclic(&self, c: &CyclicWord) -> CyclicWord {
        CyclicWord::from_word(&self.apply(&c.to_word())).expect("automorphism kills no class")
    }

    /// `self ∘ other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        assert_eq!(self.basis, other.basis);
        Automorphism {
            basis: self.basis,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse: self.inverse.iter().map(|w| other.apply_inverse(w)).collect(),
        }
    }

    pub fn invert(&self) -> Automorphism {
        Automorphism {
            basis: self.basis,
            images: self.inverse.clone(),
            inverse: self.images.clone(),
        }
    }

    pub fn apply_inverse(&self, w: &Word) -> Word {
        let inv = Automorphism {
            basis: self.basis,
            images: self.inverse.clone(),
            inverse: Vec::new(),
        };
        inv.apply(w)
    }

    /// Conjugation `x ↦ w x w⁻¹`.
    pub fn inner(basis: Basis, w: &Word) -> Automorphism {
        let images = basis.generators().map(|x| w.conjugate(&Word::from_letter(x))).collect();
        let w_inv = w.inverse();
        let inverse = basis
            .generators()
            .map(|x| w_inv.conjugate(&Word::from_letter(x)))
            .collect();
        Automorphism { basis, images, inverse }
    }

    /// Lipschitz constant: the longest basis image.
    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn total_image_len(&self) -> usize {
        self.images.iter().map(Word::len).sum()
    }

    pub fn outer_key(&self) -> OuterKey {
        outer_normal_form(&self.images).0
    }

    /// The canonical member of this outer class (the one whose images are
    /// the [`OuterKey`]).
    pub fn outer_representative(&self) -> Automorphism {
        let (key, w) = outer_normal_form(&self.images);
        let w_inv = w.inverse();
        // (c_w ∘ φ)⁻¹ = φ⁻¹ ∘ c_{w⁻¹}
        let inverse = self
            .basis
            .generators()
            .map(|x| self.apply_inverse(&w_inv.conjugate(&Word::from_letter(x))))
            .collect();
        Automorphism { basis: self.basis, images: key.0, inverse }
    }
}

impl fmt::Display for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}={}", Letter::new(i, false), w)?;
        }
        Ok(())
    }
}

/// Fold the petals of `images`; on success returns the inverse images.
fn certify_basis(basis: Basis, images: &[Word]) -> Result<Vec<Word>> {
    if images.len() != basis.rank() {
        return Err(Error::RankMismatch { expected: basis.rank(), found: images.len() });
    }
    if let Some(bad) = images.iter().flat_map(|w| w.letters()).find(|l| !basis.contains(**l)) {
        return Err(Error::UnknownLetter(bad.to_char(), basis.rank()));
    }
    let folded = fold_petals(images, true);
    if folded.rank_dropped {
        return Err(Error::NotAnAutomorphism("images satisfy a relation".into()));
    }
    if folded.num_vertices != 1 || folded.edges.len() != basis.rank() {
        return Err(Error::NotAnAutomorphism("images generate a proper subgroup".into()));
    }
    let tags = folded.tags.expect("tracked fold");
    let mut inverse = vec![Word::identity(); basis.rank()];
    for (&(_, gen, _), tag) in folded.edges.iter().zip(tags) {
        inverse[gen] = tag;
    }
    Ok(inverse)
}

/// Canonical key of an outer automorphism class.
///
/// Conjugating the image tuple by `w` moves the point `w⁻¹` of the Cayley
/// tree; the total image length is a convex function of that point, so its
/// minimizers form a finite subtree that depends only on the outer class.
/// The key is the least image tuple over that subtree, which makes key
/// equality coincide exactly with outer equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OuterKey(Vec<Word>);

impl OuterKey {
    pub fn images(&self) -> &[Word] {
        &self.0
    }
}

impl fmt::Display for OuterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{}={}", Letter::new(i, false), w))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Returns the key and the conjugator `w` with key = `w φ(x) w⁻¹`.
fn outer_normal_form(images: &[Word]) -> (OuterKey, Word) {
    let total = |t: &[Word]| t.iter().map(Word::len).sum::<usize>();
    let conj = |t: &[Word], y: Letter| -> Vec<Word> {
        let yw = Word::from_letter(y);
        let yi = yw.inverse();
        t.iter().map(|v| yi.mul(v).mul(&yw)).collect()
    };
    let rank = images.len();
    let letters: Vec<Letter> = (0..2 * rank).map(Letter::from_index).collect();

    // Descend to a minimizer.
    let mut cur: Vec<Word> = images.to_vec();
    let mut w = Word::identity();
    let mut val = total(&cur);
    loop {
        let mut moved = false;
        for &y in &letters {
            let cand = conj(&cur, y);
            let cv = total(&cand);
            if cv < val {
                cur = cand;
                val = cv;
                w = Word::from_letter(y.inverse()).mul(&w);
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }

    // Explore the (connected) set of minimizers.
    let mut seen: HashSet<Vec<Word>> = HashSet::new();
    let mut best = (cur.clone(), w.clone());
    seen.insert(cur.clone());
    let mut stack = vec![(cur, w)];
    while let Some((t, w)) = stack.pop() {
        if t < best.0 {
            best = (t.clone(), w.clone());
        }
        for &y in &letters {
            let cand = conj(&t, y);
            if total(&cand) == val && seen.insert(cand.clone()) {
                stack.push((cand, Word::from_letter(y.inverse()).mul(&w)));
            }
        }
    }
    (OuterKey(best.0), best.1)
}

/// Signed permutations of the basis and the elementary Nielsen transvections
/// `x ↦ x y^±1`, `x ↦ y^±1 x`. Identity excluded; closed under inversion.
pub fn whitehead_generators(basis: Basis) -> Vec<Automorphism> {
    let k = basis.rank();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut perms = Vec::new();
    permutations(&mut perm, 0, &mut perms);
    perms.sort();
    for p in &perms {
        for signs in 0..(1u32 << k) {
            let images: Vec<Word> = (0..k)
                .map(|i| Word::from_letter(Letter::new(p[i], signs >> i & 1 == 1)))
                .collect();
            let phi = Automorphism::new(basis, images).expect("signed permutation");
            if !phi.is_identity() {
                out.push(phi);
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            for inv in [false, true] {
                let x = Word::from_letter(Letter::new(i, false));
                let y = Word::from_letter(Letter::new(j, inv));
                for right in [true, false] {
                    let mut images: Vec<Word> =
                        basis.generators().map(Word::from_letter).collect();
                    images[i] = if right { x.mul(&y) } else { y.mul(&x) };
                    out.push(Automorphism::new(basis, images).expect("transvection"));
                }
            }
        }
    }
    out
}

fn permutations(p: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == p.len() {
        out.push(p.clone());
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, out);
        p.swap(i, j);
    }
}

/// One outer class in a ball, with the least radius at which it appears.
#[derive(Clone, Debug)]
pub struct BallEntry {
    pub key: OuterKey,
    pub representative: Automorphism,
    pub radius: usize,
}

pub const DEFAULT_BALL_CAP: usize = 500_000;

/// Outer classes of all products of at most `radius` Whitehead generators,
/// sorted by key.
pub fn outer_ball(basis: Basis, radius: usize, cap: usize) -> Result<Vec<BallEntry>> {
    let gens = whitehead_generators(basis);
    let id = Automorphism::identity(basis);
    let mut found: BTreeMap<OuterKey, BallEntry> = BTreeMap::new();
    let key = id.outer_key();
    found.insert(key.clone(), BallEntry { key, representative: id.clone(), radius: 0 });
    let mut frontier = vec![id];
    for r in 1..=radius {
        let expanded = par::map(&frontier, |phi| {
            gens.iter()
                .map(|g| {
                    let psi = g.compose(phi).outer_representative();
                    (psi.outer_key(), psi)
                })
                .collect::<Vec<_>>()
        });
        let mut next = Vec::new();
        for (key, psi) in expanded.into_iter().flatten() {
            if !found.contains_key(&key) {
                found.insert(
                    key.clone(),
                    BallEntry { key, representative: psi.clone(), radius: r },
                );
                next.push(psi);
                if found.len() > cap {
                    return Err(Error::ResourceLimit(format!(
                        "outer ball of radius {radius} exceeds {cap} classes"
                    )));
                }
            }
        }
        next.sort_by(|a, b| a.images.cmp(&b.images));
        frontier = next;
    }
    Ok(found.into_values().collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationConstants {
    /// `max_a |φ(a)|`.
    pub lipschitz: usize,
    /// Largest terminal cancellation in `φ(u)·φ(v)` over reduced `uv`.
    pub bcc: usize,
    /// Whether `bcc` was certified exact (the search reached a length at
    /// which every image is longer than twice the cancellation found).
    pub bcc_certified: bool,
    /// Least `n` passing the double cancellation check.
    pub double_bcc: usize,
}

/// Cancellation constants of `φ`. The double bounded cancellation search
/// tries `n = 1..=bound`.
pub fn cancellation_constants(phi: &Automorphism, bound: usize) -> Result<CancellationConstants> {
    let (bcc, bcc_certified) = bounded_cancellation(phi);
    let (inv_bcc, _) = bounded_cancellation(&phi.invert());
    let double_bcc = double_cancellation(phi, bcc, inv_bcc, bound)?;
    Ok(CancellationConstants {
        lipschitz: phi.max_image_len(),
        bcc,
        bcc_certified,
        double_bcc,
    })
}

/// Hard cap on the words `p` visited per first letter and level.
const BCC_WORK_CAP: usize = 25_000_000;

/// Depth-first walk over reduced words `p` with a fixed first letter,
/// keeping `φ(p)` reduced in place and recording its `key`-letter prefixes.
struct PrefixWalk<'a> {
    images: &'a [Vec<Letter>],
    letters: &'a [Letter],
    buf: Vec<Letter>,
    key: usize,
    limit: usize,
    prefixes: HashSet<Vec<Letter>>,
    visited: usize,
}

impl PrefixWalk<'_> {
    /// Append `φ(x)`; returns how many letters of `φ(x)` cancelled.
    fn push(&mut self, x: Letter) -> usize {
        let img = &self.images[x.index()];
        let mut i = 0;
        while i < img.len() && self.buf.last() == Some(&img[i].inverse()) {
            self.buf.pop();
            i += 1;
        }
        self.buf.extend_from_slice(&img[i..]);
        i
    }

    fn pop(&mut self, x: Letter, cancelled: usize) {
        let img = &self.images[x.index()];
        self.buf.truncate(self.buf.len() - (img.len() - cancelled));
        self.buf.extend(img[..cancelled].iter().rev().map(|l| l.inverse()));
    }

    fn visit(&mut self, last: Letter) -> bool {
        self.visited += 1;
        if self.visited > BCC_WORK_CAP {
            return false;
        }
        if self.buf.len() >= self.key && !self.prefixes.contains(&self.buf[..self.key]) {
            self.prefixes.insert(self.buf[..self.key].to_vec());
        }
        if self.buf.len() > self.limit {
            return true;
        }
        for i in 0..self.letters.len() {
            let x = self.letters[i];
            if x == last.inverse() {
                continue;
            }
            let c = self.push(x);
            let ok = self.visit(x);
            self.pop(x, c);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Exact maximal cancellation `C`, with a certificate flag.
///
/// For reduced `uv`, the cancellation in `φ(u)φ(v)` is the common prefix
/// length of `φ(u⁻¹)` and `φ(v)`, images of words with distinct first
/// letters. Given a lower bound `l`, walk for every first letter the words
/// `p`, stopping at `p` once `|φ(p)| > 2l`, and collect the `(l+1)`-letter
/// prefixes of the images. If no prefix is shared by two first letters,
/// then `l` is exact: in a shortest pair beating `l`, each word either is
/// walked or extends a stopped `p` by some `r`, and then `φ(p)` and `φ(pr)`
/// share more than `l` letters because the shorter pair `(p⁻¹, r)` cancels
/// at most `l`. Otherwise `l + 1` is a lower bound and the walk repeats.
pub fn bounded_cancellation(phi: &Automorphism) -> (usize, bool) {
    let basis = phi.basis();
    let letters: Vec<Letter> = basis.letters().collect();
    let images: Vec<Vec<Letter>> = letters.iter().map(|&x| phi.image(x).into_letters()).collect();
    let mut l = 0;
    loop {
        let sets: Vec<Option<HashSet<Vec<Letter>>>> = par::map(&letters, |&y| {
            let mut walk = PrefixWalk {
                images: &images,
                letters: &letters,
                buf: Vec::new(),
                key: l + 1,
                limit: 2 * l,
                prefixes: HashSet::new(),
                visited: 0,
            };
            walk.push(y);
            walk.visit(y).then_some(walk.prefixes)
        });
        let Some(sets) = sets.into_iter().collect::<Option<Vec<_>>>() else {
            return (l, false);
        };
        let shared = (0..sets.len()).any(|i| (i + 1..sets.len()).any(|j| !sets[i].is_disjoint(&sets[j])));
        if !shared {
            return (l, true);
        }
        l += 1;
    }
}

/// Least `n ≤ bound` such that for every reduced `w = u w₀ v` with
/// `|u| = |v| = n + 1` and `w₀` a single letter, the image `φ(w)` keeps a
/// nonempty middle after trimming `bcc` letters from both ends, and pulling
/// that middle back and trimming `inv_bcc` from both ends still covers `w₀`.
fn double_cancellation(
    phi: &Automorphism,
    bcc: usize,
    inv_bcc: usize,
    bound: usize,
) -> Result<usize> {
    let basis = phi.basis();
    let psi = phi.invert();
    for n in 1..=bound {
        let words = basis.reduced_words(2 * n + 3);
        let ok = par::map(&words, |w| {
            let img = phi.apply(w);
            if img.len() <= 2 * bcc {
                return false;
            }
            let alpha = Word::from_reduced(img.letters()[..bcc].to_vec());
            let middle = Word::from_reduced(img.letters()[bcc..img.len() - bcc].to_vec());
            let a = psi.apply(&alpha);
            let m = psi.apply(&middle);
            if m.len() <= 2 * inv_bcc {
                return false;
            }
            let c1 = cancellation(a.letters(), m.letters());
            let kept = &m.letters()[inv_bcc..m.len() - inv_bcc];
            let start = (a.len() + inv_bcc) as isize - 2 * c1 as isize;
            if start < 0 || start as usize + kept.len() > w.len() {
                return false;
            }
            let start = start as usize;
            let centre = n + 1;
            &w.letters()[start..start + kept.len()] == kept
                && start <= centre
                && centre < start + kept.len()
        });
        if ok.into_iter().all(|b| b) {
            return Ok(n);
        }
    }
    Err(Error::SearchBoundExceeded { bound, lower: bound + 1 })
}

/// Words of length `≤ maxlen` on which `φ⁻¹ ∘ φ` is checked; used by tests and
/// by the CLI's self-check.
pub fn round_trip_holds(phi: &Automorphism, maxlen: usize) -> bool {
    let basis = phi.basis();
    let inv = phi.invert();
    basis
        .reduced_words_up_to(maxlen)
        .iter()
        .all(|w| inv.apply(&phi.apply(w)) == *w)
}

/// Distinct outer classes among a list of automorphisms.
pub fn distinct_outer_classes(list: &[Automorphism]) -> usize {
    list.iter().map(Automorphism::outer_key).collect::<BTreeSet<_>>().len()
}

/// Group automorphisms by outer key (used to audit keys against sampled
/// inner automorphisms).
pub fn group_by_outer_key(list: &[Automorphism]) -> HashMap<OuterKey, Vec<usize>> {
    let mut map: HashMap<OuterKey, Vec<usize>> = HashMap::new();
    for (i, phi) in list.iter().enumerate() {
        map.entry(phi.outer_key()).or_default().push(i);
    }
    map
}
