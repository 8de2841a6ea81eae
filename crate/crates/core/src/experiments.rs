//! Experiment harness: the pairing/lamination equivalence on simplicial
//! trees, length spectra, North–South iteration, filling certificates,
//! bounded translation equivalence and bilipschitz scans.
//!
//! Every experiment returns a typed result; [`ExperimentReport`] renders
//! any of them as one CSV table plus a short summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::automorphisms::{outer_ball, Automorphism, OuterKey};
use crate::currents::{counting_table, stretching_factor, FrequencyTable, RationalCurrent};
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self, Rational};
use crate::trees::{CurrentRef, MarkedMetricGraph, Splitting, Tree};
use crate::words::{Basis, CyclicWord, Word};

/// A named check with its outcome. Build-failing verdicts decide the exit
/// status of the command line front end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub invariant: String,
    pub passed: bool,
    pub build_failing: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: Option<u64>,
    pub inputs: Vec<(String, String)>,
    /// Hypotheses the caller asserts but the harness cannot certify.
    pub assumptions: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Vec<(String, String)>,
    pub verdicts: Vec<Verdict>,
}

impl ExperimentReport {
    fn new(name: &str) -> ExperimentReport {
        ExperimentReport { name: name.to_string(), ..Default::default() }
    }

    fn input(&mut self, k: &str, v: impl ToString) {
        self.inputs.push((k.to_string(), v.to_string()));
    }

    fn stat(&mut self, k: &str, v: impl ToString) {
        self.summary.push((k.to_string(), v.to_string()));
    }

    fn verdict(&mut self, invariant: &str, passed: bool, build_failing: bool, detail: impl ToString) {
        self.verdicts.push(Verdict {
            invariant: invariant.to_string(),
            passed,
            build_failing,
            detail: detail.to_string(),
        });
    }

    /// Whether every build-failing verdict passed.
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed || !v.build_failing)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let esc = |s: &str| {
            if s.contains([',', '"', '\n']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let line = |cells: &[String]| cells.iter().map(|c| esc(c)).collect::<Vec<_>>().join(",");
        out.push_str(&line(&self.columns));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }

    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "experiment {}", self.name);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        for (k, v) in &self.inputs {
            let _ = writeln!(out, "input {k} = {v}");
        }
        for a in &self.assumptions {
            let _ = writeln!(out, "assumed {a}");
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k} = {v}");
        }
        for v in &self.verdicts {
            let tag = if v.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", v.invariant, v.detail);
        }
        out
    }
}

fn rat(r: &Rational) -> String {
    rational::fmt(r)
}

// ---------------------------------------------------------------------------
// Main theorem on the simplicial stratum.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainCheck {
    pub pairing: Rational,
    pub inclusion: bool,
    pub equivalent: bool,
}

/// Both sides of `⟨T, μ⟩ = 0 ⟺ supp(μ) ⊆ L²(T)`.
pub fn main_theorem_check(tree: &Tree, mu: &RationalCurrent) -> Result<MainCheck> {
    let pairing = tree.intersection_number(CurrentRef::Rational(mu))?;
    let inclusion = tree.supp_subset_l2(mu);
    Ok(MainCheck { equivalent: pairing.is_zero() == inclusion, pairing, inclusion })
}

pub fn main_theorem_report(tree_name: &str, tree: &Tree, mu: &RationalCurrent) -> Result<ExperimentReport> {
    let c = main_theorem_check(tree, mu)?;
    let mut r = ExperimentReport::new("main");
    r.input("tree", tree_name);
    r.input("current", mu);
    r.columns = ["tree", "current", "pairing", "inclusion", "equivalent"].map(String::from).to_vec();
    r.rows.push(vec![
        tree_name.to_string(),
        mu.to_string(),
        rat(&c.pairing),
        c.inclusion.to_string(),
        c.equivalent.to_string(),
    ]);
    r.stat("pairing", rat(&c.pairing));
    r.stat("inclusion", c.inclusion);
    r.stat("equivalent", c.equivalent);
    r.verdict("pairing zero iff support in dual lamination", c.equivalent, true, format!("equivalent={}", c.equivalent));
    Ok(r)
}

/// The equivalence for every tree and every cyclic word up to `maxlen`.
pub fn main_theorem_sweep(basis: Basis, trees: &[(String, Tree)], maxlen: usize) -> Result<ExperimentReport> {
    let words = basis.cyclic_words_up_to(maxlen);
    let mut r = ExperimentReport::new("main-sweep");
    r.input("basis", basis.rank());
    r.input("maxlen", maxlen);
    r.columns = ["tree", "checked", "elliptic", "failures"].map(String::from).to_vec();
    let mut total_fail = 0;
    for (name, tree) in trees {
        let results: Vec<(bool, bool)> = par::map(&words, |g| {
            let c = main_theorem_check(tree, &RationalCurrent::counting(g.clone())).expect("rational current");
            (c.equivalent, c.pairing.is_zero())
        });
        let fails = results.iter().filter(|x| !x.0).count();
        let elliptic = results.iter().filter(|x| x.1).count();
        total_fail += fails;
        r.rows.push(vec![name.clone(), words.len().to_string(), elliptic.to_string(), fails.to_string()]);
    }
    r.stat("cases", words.len() * trees.len());
    r.stat("failures", total_fail);
    r.verdict("pairing zero iff support in dual lamination", total_fail == 0, true, format!("{total_fail} failures"));
    Ok(r)
}

// ---------------------------------------------------------------------------
// Length spectra.

#[derive(Clone, Debug)]
pub enum SpectrumCurrent {
    /// The uniform current of the basis.
    Uniform,
    Rational(RationalCurrent),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    /// `(class, radius, ⟨T, φμ⟩)` for every outer class in the ball.
    pub classes: Vec<(OuterKey, usize, Rational)>,
    /// Distinct values with multiplicities, ascending.
    pub values: Vec<(Rational, usize)>,
    /// `#{φ : value ≤ C}` per requested `C`.
    pub sublevel: Vec<(Rational, usize)>,
}

/// `⟨T, φμ⟩` over the outer ball of radius `radius`.
pub fn length_spectrum(
    tree: &Tree,
    mu: &SpectrumCurrent,
    radius: usize,
    thresholds: &[Rational],
    cap: usize,
) -> Result<Spectrum> {
    let basis = tree.basis();
    let ball = outer_ball(basis, radius, cap)?;
    let uniform_scale = match mu {
        SpectrumCurrent::Uniform => {
            let Tree::Graph(t) = tree else {
                return Err(Error::UnsupportedChart("the uniform current needs a rose".into()));
            };
            let lengths = t.rose_chart_lengths().ok_or_else(|| {
                Error::UnsupportedChart("the uniform current needs a rose in its own basis".into())
            })?;
            if lengths.iter().any(|l| *l != lengths[0]) {
                return Err(Error::UnsupportedChart("the uniform current needs equal loop lengths".into()));
            }
            // ⟨rose, ν⟩ = ½ · loop length.
            Some(&lengths[0] / Rational::from_integer(2.into()))
        }
        SpectrumCurrent::Rational(_) => None,
    };
    let values: Vec<Result<Rational>> = par::map(&ball, |e| {
        let phi = &e.representative;
        match (mu, &uniform_scale) {
            (SpectrumCurrent::Uniform, Some(s)) => Ok(stretching_factor(phi)? * s),
            (SpectrumCurrent::Rational(m), _) => {
                Ok(m.terms().iter().map(|(r, g)| r * tree.length(&phi.apply_cyclic(g))).sum())
            }
            _ => unreachable!(),
        }
    });
    let mut classes = Vec::with_capacity(ball.len());
    for (e, v) in ball.into_iter().zip(values) {
        classes.push((e.key, e.radius, v?));
    }
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for (_, _, v) in &classes {
        *counts.entry(v.clone()).or_insert(0) += 1;
    }
    let sublevel = thresholds
        .iter()
        .map(|c| (c.clone(), classes.iter().filter(|(_, _, v)| v <= c).count()))
        .collect();
    Ok(Spectrum { classes, values: counts.into_iter().collect(), sublevel })
}

pub fn length_spectrum_report(tree_name: &str, mu_name: &str, radius: usize, s: &Spectrum) -> ExperimentReport {
    let mut r = ExperimentReport::new("spectrum");
    r.input("tree", tree_name);
    r.input("current", mu_name);
    r.input("radius", radius);
    r.columns = ["value", "multiplicity"].map(String::from).to_vec();
    for (v, m) in &s.values {
        r.rows.push(vec![rat(v), m.to_string()]);
    }
    r.stat("classes", s.classes.len());
    r.stat("distinct", s.values.len());
    for (c, n) in &s.sublevel {
        r.stat(&format!("sublevel<={}", rat(c)), n);
    }
    let positive = s.values.iter().all(|(v, _)| *v > Rational::zero());
    r.verdict("all spectrum values positive", positive, false, format!("min {}", s.values.first().map_or("-".into(), |v| rat(&v.0))));
    r
}

// ---------------------------------------------------------------------------
// North–South dynamics.

#[derive(Clone, Debug)]
pub struct CurrentTrajectory {
    /// Depth-`L` tables normalized to unit one-letter mass, `n + 1` states.
    pub states: Vec<FrequencyTable>,
    /// Sup distances between consecutive states.
    pub deltas: Vec<f64>,
    /// Mass growth ratios between consecutive raw states.
    pub eigenvalues: Vec<f64>,
    /// Raw one-letter masses.
    pub masses: Vec<Rational>,
    pub not_converging: bool,
}

/// Iterate `μ ↦ φμ` on a rational current for `n` steps.
pub fn north_south_currents(phi: &Automorphism, start: &RationalCurrent, n: usize, depth: usize, burn_in: usize) -> CurrentTrajectory {
    let basis = phi.basis();
    let mut mu = start.clone();
    let mut states = Vec::with_capacity(n + 1);
    let mut masses = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let t = mu.table(basis, depth);
        masses.push(t.mass());
        states.push(t.normalized());
        if i < n {
            mu = mu.push_forward(phi);
        }
    }
    let deltas: Vec<f64> = states.windows(2).map(|w| w[0].sup_distance(&w[1])).collect();
    let eigenvalues: Vec<f64> = masses
        .windows(2)
        .map(|w| rational::to_f64(&(&w[1] / &w[0])))
        .collect();
    let not_converging = !non_increasing_after(&deltas, burn_in);
    CurrentTrajectory { states, deltas, eigenvalues, masses, not_converging }
}

fn non_increasing_after(xs: &[f64], burn_in: usize) -> bool {
    xs.iter().skip(burn_in).collect::<Vec<_>>().windows(2).all(|w| w[1] <= w[0])
}

#[derive(Clone, Debug)]
pub struct TreeTrajectory {
    /// Normalized length vectors over the word list, `n + 1` states.
    pub lengths: Vec<Vec<Rational>>,
    pub deltas: Vec<f64>,
    /// Growth ratios of the normalizing factor.
    pub expansion: Vec<f64>,
    pub not_converging: bool,
}

/// Iterate the tree action: state `i` has `||g||_i = ||φ^{-i}(g)||_T`,
/// rescaled so the basis elements have total length 1. The images
/// `φ^{-i}(g)` are carried along one application of `φ^{-1}` per step.
pub fn north_south_trees(phi: &Automorphism, start: &MarkedMetricGraph, words: &[CyclicWord], n: usize, burn_in: usize) -> TreeTrajectory {
    let basis = phi.basis();
    let inv = phi.invert();
    let mut gens: Vec<Word> = basis.generators().map(Word::from_letter).collect();
    let mut images: Vec<Word> = words.iter().map(|g| g.to_word()).collect();
    let mut lengths = Vec::with_capacity(n + 1);
    let mut norms = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let norm: Rational = gens.iter().map(|g| start.translation_length_word(g)).sum();
        lengths.push(images.iter().map(|g| start.translation_length_word(g) / &norm).collect::<Vec<_>>());
        norms.push(norm);
        if i < n {
            gens = gens.iter().map(|g| inv.apply(g)).collect();
            images = images.iter().map(|g| inv.apply(g)).collect();
        }
    }
    let deltas = lengths
        .windows(2)
        .map(|w| {
            w[0].iter()
                .zip(&w[1])
                .map(|(a, b)| rational::to_f64(&(a - b)).abs())
                .fold(0.0, f64::max)
        })
        .collect::<Vec<_>>();
    let expansion = norms.windows(2).map(|w| rational::to_f64(&(&w[1] / &w[0]))).collect();
    let not_converging = !non_increasing_after(&deltas, burn_in);
    TreeTrajectory { lengths, deltas, expansion, not_converging }
}

/// `⟨T_i, μ_i⟩` with the tree normalized as in [`north_south_trees`] and the
/// current to unit mass. Lengths in `T_i` are evaluated as
/// `||φ^{-i}(w)||_T`, applying `φ^{-1}` one step at a time with free
/// reduction; composing markings first would trace paths of length
/// `|φ^i g| · |φ^{-i} x|`.
pub fn cross_pairings(phi: &Automorphism, tree: &MarkedMetricGraph, mu: &RationalCurrent, n: usize) -> Vec<f64> {
    let basis = phi.basis();
    let inv = phi.invert();
    let mut gens: Vec<Word> = basis.generators().map(Word::from_letter).collect();
    let mut m = mu.clone();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let norm: Rational = gens.iter().map(|g| tree.translation_length_word(g)).sum();
        let mass = m.table(basis, 1).mass();
        let pairing: Rational = m
            .terms()
            .iter()
            .map(|(r, g)| {
                let w = (0..i).fold(g.to_word(), |w, _| inv.apply(&w));
                r * tree.translation_length_word(&w)
            })
            .sum();
        out.push(rational::to_f64(&(pairing / (norm * mass))));
        if i < n {
            gens = gens.iter().map(|g| inv.apply(g)).collect();
            m = m.push_forward(phi);
        }
    }
    out
}

pub fn north_south_report(
    phi: &Automorphism,
    start: &RationalCurrent,
    n: usize,
    depth: usize,
    burn_in: usize,
    tol: f64,
) -> ExperimentReport {
    let basis = phi.basis();
    let cur = north_south_currents(phi, start, n, depth, burn_in);
    let words = basis.cyclic_words_up_to(2);
    let rose = MarkedMetricGraph::unit_rose(basis);
    let tr = north_south_trees(phi, &rose, &words, n, burn_in);
    let cross = cross_pairings(phi, &rose, start, n);
    let mut r = ExperimentReport::new("ns");
    r.input("phi", phi.to_string().replace('\n', ","));
    r.input("start", start);
    r.input("steps", n);
    r.input("depth", depth);
    r.assumptions.push("phi is a fully irreducible atoroidal automorphism".into());
    r.columns = ["step", "current_delta", "eigenvalue", "tree_delta", "expansion", "cross_pairing"]
        .map(String::from)
        .to_vec();
    for i in 0..=n {
        let f = |v: Option<&f64>| v.map_or(String::new(), |x| format!("{x:.6}"));
        r.rows.push(vec![
            i.to_string(),
            f(i.checked_sub(1).and_then(|j| cur.deltas.get(j))),
            f(i.checked_sub(1).and_then(|j| cur.eigenvalues.get(j))),
            f(i.checked_sub(1).and_then(|j| tr.deltas.get(j))),
            f(i.checked_sub(1).and_then(|j| tr.expansion.get(j))),
            f(cross.get(i)),
        ]);
    }
    let last_delta = cur.deltas.last().copied().unwrap_or(0.0);
    let gap = match cur.eigenvalues.as_slice() {
        [.., a, b] => (a - b).abs(),
        _ => 0.0,
    };
    r.stat("states", cur.states.len());
    r.stat("final_delta approx", format!("{last_delta:.6}"));
    r.stat("eigenvalue approx", format!("{:.6}", cur.eigenvalues.last().copied().unwrap_or(0.0)));
    r.stat("expansion approx", format!("{:.6}", tr.expansion.last().copied().unwrap_or(0.0)));
    r.stat("cross_pairing approx", format!("{:.6}", cross.last().copied().unwrap_or(0.0)));
    r.stat("not_converging", cur.not_converging || tr.not_converging);
    r.verdict("trajectory has n+1 states", cur.states.len() == n + 1, true, cur.states.len());
    r.verdict("current deltas below tolerance", last_delta < tol, false, format!("{last_delta:.6}"));
    r.verdict("eigenvalue estimates Cauchy", gap < tol, false, format!("{gap:.6}"));
    r.verdict(
        "cross pairing decreasing after burn-in",
        non_increasing_after(&cross, burn_in),
        false,
        format!("{:.6}", cross.last().copied().unwrap_or(0.0)),
    );
    r
}

// ---------------------------------------------------------------------------
// Filling certificates.

#[derive(Clone, Debug)]
pub struct FillingCertificate {
    pub splitting: Splitting,
    pub seed: usize,
    pub twist: Automorphism,
    pub radius: usize,
}

/// Search seed splittings twisted by the outer ball for one in which `g` is
/// elliptic. `None` means no certificate up to that radius, which is not a
/// proof that `g` fills.
pub fn filling_search(basis: Basis, g: &CyclicWord, radius: usize, cap: usize) -> Result<Option<FillingCertificate>> {
    let seeds = Splitting::seeds(basis);
    let ball = outer_ball(basis, radius, cap)?;
    for r in 0..=radius {
        for e in ball.iter().filter(|e| e.radius == r) {
            for (i, s) in seeds.iter().enumerate() {
                let t = s.precompose(&e.representative);
                if t.bass_serre_length(g) == 0 {
                    return Ok(Some(FillingCertificate {
                        splitting: t,
                        seed: i,
                        twist: e.representative.clone(),
                        radius: r,
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn filling_report(g: &CyclicWord, radius: usize, cert: &Option<FillingCertificate>) -> ExperimentReport {
    let mut r = ExperimentReport::new("filling");
    r.input("word", g);
    r.input("radius", radius);
    r.columns = ["word", "certificate", "seed", "radius", "twist"].map(String::from).to_vec();
    match cert {
        Some(c) => {
            let pairing = c.splitting.bass_serre_length(g);
            r.rows.push(vec![
                g.to_string(),
                "found".into(),
                c.seed.to_string(),
                c.radius.to_string(),
                c.twist.to_string().replace('\n', ","),
            ]);
            r.stat("certificate", "found");
            r.verdict("certificate pairs to zero", pairing == 0, true, pairing);
        }
        None => {
            r.rows.push(vec![g.to_string(), "none".into(), String::new(), String::new(), String::new()]);
            r.stat("certificate", format!("none up to radius {radius}"));
        }
    }
    r
}

// ---------------------------------------------------------------------------
// Bounded translation equivalence.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BteBounds {
    pub min_ratio: Option<Rational>,
    pub max_ratio: Option<Rational>,
    /// Trees where exactly one of the two lengths vanishes.
    pub degenerate: Vec<usize>,
    pub skipped: Vec<usize>,
}

pub fn bte_bounds(g: &CyclicWord, h: &CyclicWord, trees: &[Tree]) -> Result<BteBounds> {
    if trees.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut out = BteBounds { min_ratio: None, max_ratio: None, degenerate: Vec::new(), skipped: Vec::new() };
    for (i, t) in trees.iter().enumerate() {
        let (lg, lh) = (t.length(g), t.length(h));
        match (lg.is_zero(), lh.is_zero()) {
            (true, true) => out.skipped.push(i),
            (true, false) | (false, true) => out.degenerate.push(i),
            (false, false) => {
                let q = lg / lh;
                if out.min_ratio.as_ref().is_none_or(|m| q < *m) {
                    out.min_ratio = Some(q.clone());
                }
                if out.max_ratio.as_ref().is_none_or(|m| q > *m) {
                    out.max_ratio = Some(q);
                }
            }
        }
    }
    Ok(out)
}

pub fn bte_report(g: &CyclicWord, h: &CyclicWord, names: &[String], b: &BteBounds) -> ExperimentReport {
    let mut r = ExperimentReport::new("bte");
    r.input("g", g);
    r.input("h", h);
    r.input("trees", names.len());
    r.columns = ["kind", "value"].map(String::from).to_vec();
    let opt = |v: &Option<Rational>| v.as_ref().map_or("-".to_string(), rat);
    r.rows.push(vec!["min_ratio".into(), opt(&b.min_ratio)]);
    r.rows.push(vec!["max_ratio".into(), opt(&b.max_ratio)]);
    for &i in &b.degenerate {
        r.rows.push(vec!["degenerate".into(), names[i].clone()]);
    }
    for &i in &b.skipped {
        r.rows.push(vec!["skipped".into(), names[i].clone()]);
    }
    r.stat("min_ratio", opt(&b.min_ratio));
    r.stat("max_ratio", opt(&b.max_ratio));
    r.stat("degenerate", b.degenerate.len());
    r
}

// ---------------------------------------------------------------------------
// Bilipschitz scan.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilipschitzScan {
    pub c_low: Rational,
    pub c_high: Rational,
    pub scanned: usize,
    /// Words attaining the extremes.
    pub argmin: CyclicWord,
    pub argmax: CyclicWord,
}

/// Whether no nontrivial element is elliptic in both splittings: every
/// component of the core product of every pair of vertex groups is a tree.
pub fn transversality(s1: &Splitting, s2: &Splitting) -> Result<()> {
    for (i, g1) in s1.vertex_groups().into_iter().enumerate() {
        for (j, g2) in s2.vertex_groups().into_iter().enumerate() {
            if g1.intersect(g2).iter().any(|c| c.rank() > 0) {
                return Err(Error::NotTransverse(format!(
                    "vertex group {i} of the first and {j} of the second share elliptic elements"
                )));
            }
        }
    }
    Ok(())
}

/// Extremes of `(||w||_1 + ||w||_2) / ||w||_{T0}` over cyclic words of length
/// up to `maxlen`.
pub fn bilipschitz_scan(s1: &Splitting, s2: &Splitting, t0: &MarkedMetricGraph, maxlen: usize) -> Result<BilipschitzScan> {
    transversality(s1, s2)?;
    let words = t0.basis().cyclic_words_up_to(maxlen);
    if words.is_empty() {
        return Err(Error::EmptySample);
    }
    let ratios: Vec<Rational> = par::map(&words, |w| {
        let num = s1.bass_serre_length(w) + s2.bass_serre_length(w);
        Rational::from_integer(num.into()) / t0.translation_length(w)
    });
    let (mut lo, mut hi) = (0, 0);
    for i in 0..ratios.len() {
        if ratios[i] < ratios[lo] {
            lo = i;
        }
        if ratios[i] > ratios[hi] {
            hi = i;
        }
    }
    Ok(BilipschitzScan {
        c_low: ratios[lo].clone(),
        c_high: ratios[hi].clone(),
        scanned: words.len(),
        argmin: words[lo].clone(),
        argmax: words[hi].clone(),
    })
}

pub fn bilipschitz_report(maxlen: usize, scan: &Result<BilipschitzScan>) -> ExperimentReport {
    let mut r = ExperimentReport::new("bilip");
    r.input("maxlen", maxlen);
    r.columns = ["transverse", "c_low", "c_high", "scanned", "argmin", "argmax"].map(String::from).to_vec();
    match scan {
        Ok(s) => {
            r.rows.push(vec![
                "true".into(),
                rat(&s.c_low),
                rat(&s.c_high),
                s.scanned.to_string(),
                s.argmin.to_string(),
                s.argmax.to_string(),
            ]);
            r.stat("transverse", true);
            r.stat("c_low", rat(&s.c_low));
            r.stat("c_high", rat(&s.c_high));
            r.verdict("lower constant positive", s.c_low > Rational::zero(), true, rat(&s.c_low));
        }
        Err(e) => {
            r.rows.push(vec!["false".into(), String::new(), String::new(), "0".into(), String::new(), String::new()]);
            r.stat("transverse", format!("false ({e})"));
        }
    }
    r
}

/// Depth-`L` distance between the normalized counting tables of two words.
pub fn normalized_distance(basis: Basis, g: &CyclicWord, h: &CyclicWord, depth: usize) -> f64 {
    counting_table(basis, g, depth).normalized().sup_distance(&counting_table(basis, h, depth).normalized())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphisms::DEFAULT_BALL_CAP;
    use crate::rational::int;
    use crate::trees::sample_marked_graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

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
    fn main_examples() {
        let fp = Tree::Splitting(Splitting::free_product(b2(), &[0], &[1]).unwrap());
        let c = main_theorem_check(&fp, &RationalCurrent::counting(cyc("b"))).unwrap();
        assert_eq!((c.pairing, c.inclusion, c.equivalent), (int(0), true, true));
        let c = main_theorem_check(&fp, &RationalCurrent::counting(cyc("ab"))).unwrap();
        assert_eq!((c.pairing, c.inclusion, c.equivalent), (int(2), false, true));
        let rose = Tree::Graph(MarkedMetricGraph::unit_rose(b2()));
        let c = main_theorem_check(&rose, &RationalCurrent::counting(cyc("a"))).unwrap();
        assert_eq!((c.pairing, c.inclusion, c.equivalent), (int(1), false, true));
    }

    #[test]
    fn spectrum_examples() {
        let rose = Tree::Graph(MarkedMetricGraph::unit_rose(b2()));
        let s = length_spectrum(&rose, &SpectrumCurrent::Uniform, 0, &[int(2)], DEFAULT_BALL_CAP).unwrap();
        assert_eq!(s.values, vec![(Rational::new(1.into(), 2.into()), 1)]);
        let mu = RationalCurrent::parse(b2(), "1*ab + 1/2*aab").unwrap();
        let s = length_spectrum(&rose, &SpectrumCurrent::Rational(mu.clone()), 1, &[], DEFAULT_BALL_CAP).unwrap();
        let at_id = s.classes.iter().find(|c| c.1 == 0).unwrap();
        assert_eq!(at_id.2, rose.intersection_number(CurrentRef::Rational(&mu)).unwrap());
        assert!(s.values.iter().all(|(v, _)| *v > Rational::zero()));
    }

    #[test]
    fn north_south_shapes() {
        let b3 = Basis::new(3).unwrap();
        let phi = Automorphism::new(b3, vec![b3.parse_word("b").unwrap(), b3.parse_word("c").unwrap(), b3.parse_word("ab").unwrap()]).unwrap();
        assert_eq!(phi.invert().images(), &[b3.parse_word("cA").unwrap(), b3.parse_word("a").unwrap(), b3.parse_word("b").unwrap()]);
        let mu = RationalCurrent::counting(b3.parse_cyclic("a").unwrap().unwrap());
        let t = north_south_currents(&phi, &mu, 12, 2, 4);
        assert_eq!(t.states.len(), 13);
        let words = b3.cyclic_words_up_to(2);
        let tr = north_south_trees(&phi, &MarkedMetricGraph::unit_rose(b3), &words, 12, 4);
        assert_eq!(tr.lengths.len(), 13);
        let cross = cross_pairings(&phi, &MarkedMetricGraph::unit_rose(b3), &mu, 12);
        assert!(cross[12] < cross[4]);
    }

    #[test]
    fn filling_examples() {
        for g in ["a", "aa"] {
            let c = filling_search(b2(), &cyc(g), 0, DEFAULT_BALL_CAP).unwrap().unwrap();
            assert_eq!(c.seed, 0);
            assert_eq!(c.splitting, Splitting::free_product(b2(), &[0], &[1]).unwrap());
            assert_eq!(c.splitting.bass_serre_length(&cyc(g)), 0);
        }
        let c = filling_search(b2(), &cyc("ab"), 1, DEFAULT_BALL_CAP).unwrap().unwrap();
        assert_eq!(c.splitting.bass_serre_length(&cyc("ab")), 0);
        assert!(filling_search(b2(), &cyc("abAB"), 2, DEFAULT_BALL_CAP).unwrap().is_none());
    }

    #[test]
    fn bte_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut trees: Vec<Tree> = (0..5).map(|_| Tree::Graph(sample_marked_graph(b2(), &mut rng))).collect();
        trees.push(Tree::Splitting(Splitting::free_product(b2(), &[0], &[1]).unwrap()));
        let b = bte_bounds(&cyc("abb"), &cyc("bab"), &trees).unwrap();
        assert_eq!(b.min_ratio, Some(int(1)));
        assert_eq!(b.max_ratio, Some(int(1)));
        trees.push(Tree::Splitting(Splitting::hnn(b2(), 0).unwrap()));
        let b = bte_bounds(&cyc("a"), &cyc("b"), &trees).unwrap();
        assert_eq!(b.degenerate, vec![6]);
        assert_eq!(b.skipped, vec![5]);
        assert_eq!(bte_bounds(&cyc("a"), &cyc("b"), &[]), Err(Error::EmptySample));
    }

    #[test]
    fn bilipschitz_examples() {
        let s1 = Splitting::free_product(b2(), &[0], &[1]).unwrap();
        let rose = MarkedMetricGraph::unit_rose(b2());
        assert!(matches!(bilipschitz_scan(&s1, &s1, &rose, 4), Err(Error::NotTransverse(_))));
        let psi = Automorphism::new(b2(), vec![w("aba"), w("ab")]).unwrap();
        let s2 = Splitting::new(2, vec![(0, 1)], vec![], vec![vec![0], vec![1]], psi).unwrap();
        let scan = bilipschitz_scan(&s1, &s2, &rose, 6).unwrap();
        assert!(scan.c_low > Rational::zero());
        assert!(scan.c_low <= scan.c_high);
    }
}
