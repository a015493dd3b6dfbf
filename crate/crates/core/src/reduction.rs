//! Edge reduction.
//!
//! Cancelling an invertible term `i → j` removes both generators and adds a
//! composite `k → l` for every zigzag `k → j ← i → l`. On filtered complexes
//! the cancellations run in order of filtration drop, which computes the
//! pages of the spectral sequence and, at the end, τ.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::Basis;
use crate::error::{Error, Result};
use crate::f2::BitMatrix;
use crate::structure::{BorderedStructure, OperationTerm, Payload};

pub const BRUTE_CAP: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CancellationOrder {
    /// All drop-0 edges first, then drop 1, and so on.
    #[default]
    FiltrationThenKey,
    /// Ignore the filtration.
    KeyOnly,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CancellationPolicy {
    pub order: CancellationOrder,
    /// `None` breaks ties by (source name, target name); `Some(seed)`
    /// shuffles each batch of equal-drop edges.
    pub seed: Option<u64>,
    pub trace: bool,
}

impl CancellationPolicy {
    pub fn seeded(seed: u64) -> Self {
        CancellationPolicy { seed: Some(seed), ..Default::default() }
    }

    pub fn traced(mut self) -> Self {
        self.trace = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cancellation {
    pub src: String,
    pub dst: String,
    pub drop: i32,
    /// Arrows toggled by the zigzag rule.
    pub created: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub survivors: Vec<(String, i32)>,
    /// `pages[k]` is the E^{k+1} page, as dimension per Alexander level.
    pub pages: BTreeMap<usize, BTreeMap<i32, usize>>,
    pub tau: Option<i32>,
    pub trace: Vec<Cancellation>,
    /// What is left after cancelling.
    pub structure: BorderedStructure,
}

impl ReductionResult {
    pub fn survivor_levels(&self) -> BTreeMap<i32, usize> {
        level_counts(self.survivors.iter().map(|(_, a)| *a))
    }
}

fn level_counts(levels: impl Iterator<Item = i32>) -> BTreeMap<i32, usize> {
    let mut m = BTreeMap::new();
    for a in levels {
        *m.entry(a).or_insert(0) += 1;
    }
    m
}

fn trivial_payload(s: &BorderedStructure, i: usize) -> Vec<Payload> {
    s.sides()
        .iter()
        .zip(&s.generators()[i].idempotents)
        .map(|(side, &e)| match side.kind {
            crate::structure::SideKind::D => Payload::Out(Basis::Idem(e)),
            crate::structure::SideKind::A => Payload::In(Vec::new()),
        })
        .collect()
}

/// Multiplies D outputs and concatenates A inputs, `a` first.
fn join(a: &[Payload], b: &[Payload]) -> Option<Vec<Payload>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (Payload::Out(p), Payload::Out(q)) => p.mul(*q).map(Payload::Out),
            (Payload::In(p), Payload::In(q)) => Some(Payload::In([p.as_slice(), q.as_slice()].concat())),
            _ => None,
        })
        .collect()
}

/// Cancels `t` in place, leaving its endpoints as isolated generators.
/// Returns the composite terms that were toggled.
fn cancel_in_place(s: &mut BorderedStructure, t: &OperationTerm) -> Result<Vec<OperationTerm>> {
    if !s.contains_term(t) {
        return Err(Error::NotInvertible(format!("{} (not present)", s.describe(t))));
    }
    if !t.is_invertible() {
        return Err(Error::NotInvertible(s.describe(t)));
    }
    let (i, j) = (t.src, t.dst);
    if i == j {
        return Err(Error::SelfLoop(s.name(i).to_string()));
    }
    let mut into_j = Vec::new();
    let mut out_of_i = Vec::new();
    let mut parallel = Vec::new();
    for u in s.terms() {
        if u == t {
            continue;
        }
        if u.src == i && u.dst == j {
            if u.payload.iter().any(|p| matches!(p, Payload::In(seq) if !seq.is_empty())) {
                return Err(Error::InfiniteZigzag(s.describe(t)));
            }
            parallel.push(u.payload.clone());
        } else if u.dst == j && u.src != i && u.src != j {
            into_j.push(u.clone());
        } else if u.src == i && u.dst != i && u.dst != j {
            out_of_i.push(u.clone());
        }
    }
    // words in the parallel arrows; they carry chords on some D side, so
    // long products vanish
    let mut words = vec![trivial_payload(s, i)];
    let mut frontier = words.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for b in &parallel {
                if let Some(p) = join(w, b) {
                    next.push(p);
                }
            }
        }
        if next.len() > 1 << 16 {
            return Err(Error::InfiniteZigzag(s.describe(t)));
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut created = Vec::new();
    for a in &into_j {
        for w in &words {
            let Some(aw) = join(&a.payload, w) else { continue };
            for c in &out_of_i {
                if let Some(p) = join(&aw, &c.payload) {
                    created.push(OperationTerm::new(a.src, c.dst, p));
                }
            }
        }
    }
    s.retain_terms(|u| u.src != i && u.src != j && u.dst != i && u.dst != j);
    for c in &created {
        s.toggle_term(c.clone());
    }
    Ok(created)
}

/// Cancels one invertible term and returns the smaller structure.
pub fn cancel_pair(s: &BorderedStructure, t: &OperationTerm) -> Result<BorderedStructure> {
    let mut work = s.clone();
    cancel_in_place(&mut work, t)?;
    let (i, j) = (t.src, t.dst);
    Ok(work.restrict(|g| g != i && g != j))
}

pub fn reduce(s: &BorderedStructure, policy: &CancellationPolicy) -> Result<ReductionResult> {
    if s.sides().is_empty() {
        reduce_complex(s, policy)
    } else {
        reduce_bordered(s, policy)
    }
}

fn name_ranks(s: &BorderedStructure) -> Vec<usize> {
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s.name(a).cmp(s.name(b)));
    let mut rank = vec![0; s.len()];
    for (r, &g) in order.iter().enumerate() {
        rank[g] = r;
    }
    rank
}

/// Cancels filtration-preserving invertible terms only; pages and τ are not
/// produced.
fn reduce_bordered(s: &BorderedStructure, policy: &CancellationPolicy) -> Result<ReductionResult> {
    let mut work = s.clone();
    let rank = name_ranks(s);
    let mut rng = policy.seed.map(ChaCha8Rng::seed_from_u64);
    let mut alive = vec![true; s.len()];
    let mut refused: HashSet<OperationTerm> = HashSet::new();
    let mut trace = Vec::new();
    loop {
        let mut candidates: Vec<OperationTerm> = work
            .terms()
            .filter(|t| {
                t.src != t.dst
                    && t.is_invertible()
                    && (policy.order == CancellationOrder::KeyOnly || work.alexander(t.src) == work.alexander(t.dst))
                    && !refused.contains(*t)
            })
            .cloned()
            .collect();
        if candidates.is_empty() {
            break;
        }
        candidates.sort_by_key(|t| (rank[t.src], rank[t.dst]));
        if let Some(r) = rng.as_mut() {
            candidates.shuffle(r);
        }
        let mut progressed = false;
        for t in candidates {
            match cancel_in_place(&mut work, &t) {
                Ok(created) => {
                    alive[t.src] = false;
                    alive[t.dst] = false;
                    if policy.trace {
                        trace.push(Cancellation {
                            src: work.name(t.src).to_string(),
                            dst: work.name(t.dst).to_string(),
                            drop: work.alexander(t.src) - work.alexander(t.dst),
                            created: created.iter().map(|c| (work.name(c.src).to_string(), work.name(c.dst).to_string())).collect(),
                        });
                    }
                    progressed = true;
                    break;
                }
                Err(Error::InfiniteZigzag(_)) => {
                    refused.insert(t);
                }
                Err(e) => return Err(e),
            }
        }
        if !progressed {
            break;
        }
    }
    let structure = work.restrict(|g| alive[g]);
    let survivors = structure.generators().iter().map(|g| (g.name.clone(), g.alexander)).collect();
    Ok(ReductionResult { survivors, pages: BTreeMap::new(), tau: None, trace, structure })
}

struct Graph {
    out: Vec<HashSet<usize>>,
    inn: Vec<HashSet<usize>>,
    alive: Vec<bool>,
}

impl Graph {
    fn new(s: &BorderedStructure) -> Self {
        let n = s.len();
        let mut g = Graph { out: vec![HashSet::new(); n], inn: vec![HashSet::new(); n], alive: vec![true; n] };
        for t in s.terms() {
            g.toggle(t.src, t.dst);
        }
        g
    }

    fn toggle(&mut self, a: usize, b: usize) {
        if !self.out[a].remove(&b) {
            self.out[a].insert(b);
            self.inn[b].insert(a);
        } else {
            self.inn[b].remove(&a);
        }
    }

    fn cancel(&mut self, i: usize, j: usize) -> Vec<(usize, usize)> {
        let ks: Vec<usize> = self.inn[j].iter().copied().filter(|&k| k != i && k != j).collect();
        let ls: Vec<usize> = self.out[i].iter().copied().filter(|&l| l != j && l != i).collect();
        for g in [i, j] {
            for t in std::mem::take(&mut self.out[g]) {
                self.inn[t].remove(&g);
            }
            for s in std::mem::take(&mut self.inn[g]) {
                self.out[s].remove(&g);
            }
            self.alive[g] = false;
        }
        let mut created = Vec::with_capacity(ks.len() * ls.len());
        for &k in &ks {
            for &l in &ls {
                self.toggle(k, l);
                created.push((k, l));
            }
        }
        created
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b)))
    }
}

fn reduce_complex(s: &BorderedStructure, policy: &CancellationPolicy) -> Result<ReductionResult> {
    let mut g = Graph::new(s);
    let rank = name_ranks(s);
    let lvl = |x: usize| s.alexander(x);
    let mut rng = policy.seed.map(ChaCha8Rng::seed_from_u64);
    let mut trace = Vec::new();
    let mut pages = BTreeMap::new();
    let filtered = policy.order == CancellationOrder::FiltrationThenKey;

    let mut drop = 0i32;
    loop {
        loop {
            let mut batch: Vec<(usize, usize)> =
                g.edges().filter(|&(a, b)| a != b && (!filtered || lvl(a) - lvl(b) == drop)).collect();
            if batch.is_empty() {
                break;
            }
            batch.sort_by_key(|&(a, b)| (rank[a], rank[b]));
            if let Some(r) = rng.as_mut() {
                batch.shuffle(r);
            }
            for (i, j) in batch {
                if !g.out[i].contains(&j) {
                    continue;
                }
                if filtered && lvl(i) - lvl(j) < drop {
                    return Err(Error::Internal(format!("edge {} -> {} with drop below {drop}", s.name(i), s.name(j))));
                }
                let created = g.cancel(i, j);
                if filtered {
                    for &(k, l) in &created {
                        if lvl(k) - lvl(l) < drop {
                            return Err(Error::Internal(format!(
                                "cancelling {} -> {} created {} -> {} of drop {} below {drop}",
                                s.name(i),
                                s.name(j),
                                s.name(k),
                                s.name(l),
                                lvl(k) - lvl(l)
                            )));
                        }
                    }
                }
                if policy.trace {
                    trace.push(Cancellation {
                        src: s.name(i).to_string(),
                        dst: s.name(j).to_string(),
                        drop: lvl(i) - lvl(j),
                        created: created.iter().map(|&(k, l)| (s.name(k).to_string(), s.name(l).to_string())).collect(),
                    });
                }
            }
        }
        let remaining = g.edges().any(|(a, b)| a != b);
        if !filtered {
            break;
        }
        if drop < 0 {
            return Err(Error::Internal("negative drop".into()));
        }
        pages.insert(drop as usize, level_counts((0..s.len()).filter(|&x| g.alive[x]).map(lvl)));
        if !remaining {
            break;
        }
        drop += 1;
        if drop as i64 > 1 + level_span(s) {
            return Err(Error::Internal("edges remain beyond the filtration span".into()));
        }
    }

    let structure = {
        let mut rest = s.restrict(|x| g.alive[x]);
        rest.retain_terms(|_| false);
        let idx: Vec<usize> = (0..s.len()).filter(|&x| g.alive[x]).collect();
        let pos: std::collections::HashMap<usize, usize> = idx.iter().enumerate().map(|(p, &x)| (x, p)).collect();
        for (a, b) in g.edges() {
            rest.toggle_arrow(pos[&a], pos[&b]);
        }
        rest
    };
    let survivors: Vec<(String, i32)> =
        (0..s.len()).filter(|&x| g.alive[x]).map(|x| (s.name(x).to_string(), lvl(x))).collect();
    let tau = (filtered && survivors.len() == 1).then(|| survivors[0].1);
    Ok(ReductionResult { survivors, pages: if filtered { pages } else { BTreeMap::new() }, tau, trace, structure })
}

fn level_span(s: &BorderedStructure) -> i64 {
    let lv = s.generators().iter().map(|g| g.alexander as i64);
    let (lo, hi) = lv.fold((i64::MAX, i64::MIN), |(lo, hi), a| (lo.min(a), hi.max(a)));
    if lo > hi { 0 } else { hi - lo }
}

fn boundary_matrix(s: &BorderedStructure) -> Result<BitMatrix> {
    if !s.sides().is_empty() {
        return Err(Error::Schema("homology is defined here for complexes without sides".into()));
    }
    if s.len() > BRUTE_CAP {
        return Err(Error::SizeCap { n: s.len(), cap: BRUTE_CAP });
    }
    let mut m = BitMatrix::zeros(s.len(), s.len());
    for t in s.terms() {
        m.flip(t.dst, t.src);
    }
    Ok(m)
}

/// Total homology graded by filtration level (the E∞ page), from ranks of
/// the full boundary matrix.
pub fn brute_homology(s: &BorderedStructure) -> Result<BTreeMap<i32, usize>> {
    let m = boundary_matrix(s)?;
    let n = s.len();
    let all: Vec<usize> = (0..n).collect();
    let total_rank = m.rank();
    let mut levels: Vec<i32> = s.generators().iter().map(|g| g.alexander).collect();
    levels.sort();
    levels.dedup();
    let mut out = BTreeMap::new();
    let mut prev = 0usize;
    for &p in &levels {
        let low: Vec<usize> = all.iter().copied().filter(|&x| s.alexander(x) <= p).collect();
        let high: Vec<usize> = all.iter().copied().filter(|&x| s.alexander(x) > p).collect();
        let cycles = low.len() - m.select(&all, &low).rank();
        let bounds = total_rank - m.select(&high, &all).rank();
        let dim = cycles - bounds;
        if dim > prev {
            out.insert(p, dim - prev);
        }
        prev = dim;
    }
    Ok(out)
}

/// Homology of the associated graded complex (the drop-0 part of the
/// differential), per level: the E¹ page.
pub fn associated_graded_homology(s: &BorderedStructure) -> Result<BTreeMap<i32, usize>> {
    let m = boundary_matrix(s)?;
    let mut out = BTreeMap::new();
    for (p, n) in s.alexander_counts() {
        let idx: Vec<usize> = (0..s.len()).filter(|&x| s.alexander(x) == p).collect();
        let r = m.select(&idx, &idx).rank();
        if n > 2 * r {
            out.insert(p, n - 2 * r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Chord, Idempotent::*};
    use crate::structure::SideSpec;
    use proptest::prelude::*;

    fn complex(levels: &[(&str, i32)], arrows: &[(&str, &str)]) -> BorderedStructure {
        let mut s = BorderedStructure::complex();
        for (n, a) in levels {
            s.add_generator(*n, vec![], *a).unwrap();
        }
        for (a, b) in arrows {
            let (a, b) = (s.generator_index(a).unwrap(), s.generator_index(b).unwrap());
            s.toggle_arrow(a, b);
        }
        s
    }

    #[test]
    fn single_arrow_cancels_to_nothing() {
        let s = complex(&[("x", 0), ("y", 0)], &[("x", "y")]);
        let t = s.terms().next().unwrap().clone();
        let c = cancel_pair(&s, &t).unwrap();
        assert!(c.is_empty() && c.term_count() == 0);
    }

    #[test]
    fn zigzag_concatenates() {
        let mut s = BorderedStructure::new(vec![SideSpec::a("rho")]).unwrap();
        let k = s.add_generator("k", vec![I0], 0).unwrap();
        let j = s.add_generator("j", vec![I1], 0).unwrap();
        let i = s.add_generator("i", vec![I1], 0).unwrap();
        let l = s.add_generator("l", vec![I1], 0).unwrap();
        s.toggle_term(OperationTerm::new(k, j, vec![Payload::In(vec![Chord::R1])]));
        s.toggle_term(OperationTerm::new(i, l, vec![Payload::In(vec![Chord::R2, Chord::R1])]));
        let t = OperationTerm::new(i, j, vec![Payload::In(vec![])]);
        s.toggle_term(t.clone());
        let c = cancel_pair(&s, &t).unwrap();
        assert_eq!(c.len(), 2);
        let only = c.terms().next().unwrap();
        assert_eq!(c.term_count(), 1);
        assert_eq!(only.payload, vec![Payload::In(vec![Chord::R1, Chord::R2, Chord::R1])]);
        assert_eq!((c.name(only.src), c.name(only.dst)), ("k", "l"));
    }

    #[test]
    fn existing_composite_disappears() {
        let s = complex(&[("k", 0), ("j", 0), ("i", 0), ("l", 0)], &[("k", "j"), ("i", "j"), ("i", "l"), ("k", "l")]);
        let t = OperationTerm::new(s.generator_index("i").unwrap(), s.generator_index("j").unwrap(), vec![]);
        let c = cancel_pair(&s, &t).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.term_count(), 0);
    }

    #[test]
    fn non_invertible_and_self_loop_rejected() {
        let mut s = BorderedStructure::new(vec![SideSpec::d("rho")]).unwrap();
        let x = s.add_generator("x", vec![I0], 0).unwrap();
        let y = s.add_generator("y", vec![I0], 0).unwrap();
        let lab = OperationTerm::new(x, y, vec![Payload::Out(Basis::Chord(Chord::R12))]);
        s.toggle_term(lab.clone());
        assert!(matches!(cancel_pair(&s, &lab), Err(Error::NotInvertible(_))));
        let lp = OperationTerm::new(x, x, vec![Payload::Out(Basis::Idem(I0))]);
        s.toggle_term(lp.clone());
        assert!(matches!(cancel_pair(&s, &lp), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn isolated_generator_survives() {
        let s = complex(&[("a", 0), ("b", 0), ("c", 0)], &[("a", "b")]);
        let r = reduce(&s, &CancellationPolicy::default()).unwrap();
        assert_eq!(r.survivors, vec![("c".to_string(), 0)]);
        assert_eq!(brute_homology(&s).unwrap().values().sum::<usize>(), 1);
    }

    #[test]
    fn pages_of_small_filtered_complex() {
        let s = complex(&[("p", 1), ("q", 0), ("r", 0)], &[("p", "q")]);
        let r = reduce(&s, &CancellationPolicy::default()).unwrap();
        assert_eq!(r.pages[&0], BTreeMap::from([(1, 1), (0, 2)]));
        assert_eq!(r.survivors, vec![("r".to_string(), 0)]);
        assert_eq!(r.tau, Some(0));
        assert_eq!(associated_graded_homology(&s).unwrap(), r.pages[&0]);
    }

    #[test]
    fn empty_and_acyclic_brute() {
        assert!(brute_homology(&BorderedStructure::complex()).unwrap().is_empty());
        let s = complex(&[("x", 0), ("y", 0)], &[("x", "y")]);
        assert!(brute_homology(&s).unwrap().is_empty());
    }

    #[test]
    fn key_only_has_no_pages() {
        let s = complex(&[("p", 1), ("q", 0), ("r", 0)], &[("p", "q")]);
        let r = reduce(&s, &CancellationPolicy { order: CancellationOrder::KeyOnly, ..Default::default() }).unwrap();
        assert!(r.pages.is_empty() && r.tau.is_none());
        assert_eq!(r.survivors.len(), 1);
    }

    #[test]
    fn trace_lists_cancellations() {
        let s = complex(&[("k", 1), ("j", 0), ("i", 1), ("l", 0)], &[("k", "j"), ("i", "j"), ("i", "l")]);
        let r = reduce(&s, &CancellationPolicy::default().traced()).unwrap();
        assert!(!r.trace.is_empty());
        assert_eq!(r.survivors.len() + 2 * r.trace.len(), 4);
    }

    #[test]
    fn parallel_labelled_arrow_with_inputs_refused() {
        let mut s = BorderedStructure::new(vec![SideSpec::a("rho")]).unwrap();
        let i = s.add_generator("i", vec![I0], 0).unwrap();
        let j = s.add_generator("j", vec![I0], 0).unwrap();
        let t = OperationTerm::new(i, j, vec![Payload::In(vec![])]);
        s.toggle_term(t.clone());
        s.toggle_term(OperationTerm::new(i, j, vec![Payload::In(vec![Chord::R12])]));
        assert!(matches!(cancel_pair(&s, &t), Err(Error::InfiniteZigzag(_))));
        let r = reduce(&s, &CancellationPolicy::default()).unwrap();
        assert_eq!(r.survivors.len(), 2);
    }

    #[test]
    fn parallel_d_outputs_multiply_through() {
        // i -> j twice: once invertible, once with r12 on a second side
        let mut s = BorderedStructure::new(vec![SideSpec::d("rho")]).unwrap();
        let k = s.add_generator("k", vec![I0], 0).unwrap();
        let j = s.add_generator("j", vec![I0], 0).unwrap();
        let i = s.add_generator("i", vec![I0], 0).unwrap();
        let l = s.add_generator("l", vec![I1], 0).unwrap();
        let t = OperationTerm::new(i, j, vec![Payload::Out(Basis::Idem(I0))]);
        s.toggle_term(t.clone());
        s.toggle_term(OperationTerm::new(i, j, vec![Payload::Out(Basis::Chord(Chord::R12))]));
        s.toggle_term(OperationTerm::new(k, j, vec![Payload::Out(Basis::Idem(I0))]));
        s.toggle_term(OperationTerm::new(i, l, vec![Payload::Out(Basis::Chord(Chord::R3))]));
        let c = cancel_pair(&s, &t).unwrap();
        let outs: Vec<_> = c.terms().map(|u| u.payload[0].clone()).collect();
        assert_eq!(outs, vec![Payload::Out(Basis::Chord(Chord::R3)), Payload::Out(Basis::Chord(Chord::R123))]);
    }

    fn random_complex() -> impl Strategy<Value = BorderedStructure> {
        (0usize..40, any::<u64>()).prop_map(|(n, seed)| crate::random::filtered_complex(n, seed))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn survivors_match_ranks(s in random_complex()) {
            let r = reduce(&s, &CancellationPolicy::default()).unwrap();
            prop_assert_eq!(r.survivor_levels(), brute_homology(&s).unwrap());
            prop_assert_eq!(r.pages.get(&0).cloned().unwrap_or_default(), associated_graded_homology(&s).unwrap());
        }

        #[test]
        fn key_only_total_matches(s in random_complex(), seed in any::<u64>()) {
            let r = reduce(&s, &CancellationPolicy { order: CancellationOrder::KeyOnly, seed: Some(seed), trace: false }).unwrap();
            prop_assert_eq!(r.survivors.len(), brute_homology(&s).unwrap().values().sum::<usize>());
        }
    }
}
