//! Structure relations: δ₁² = 0 for type D sides, the A∞ relations for type
//! A sides, and the bookkeeping invariants shared by every structure.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::algebra::{Basis, Chord, Idempotent};
use crate::structure::{composable, BorderedStructure, OperationTerm, Payload, SideKind};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Idempotent, naming and filtration problems.
    pub structural: Vec<String>,
    /// Failed structure relations, each with a witness.
    pub relations: Vec<String>,
    /// Number of relation instances evaluated.
    pub checked: usize,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.structural.is_empty() && self.relations.is_empty()
    }

    pub fn merge(&mut self, other: Report) {
        self.structural.extend(other.structural);
        self.relations.extend(other.relations);
        self.checked += other.checked;
    }

    pub fn lines(&self) -> impl Iterator<Item = &String> {
        self.structural.iter().chain(&self.relations)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequencePool {
    /// Subsequences, pairwise concatenations and one-chord extensions of the
    /// input sequences that occur in the structure.
    SupportClosure,
    /// Every composable sequence up to the given length on each A side.
    Exhaustive(usize),
}

pub fn structural_errors(s: &BorderedStructure) -> Vec<String> {
    let mut errs = Vec::new();
    for t in s.terms() {
        let (x, y) = (&s.generators()[t.src], &s.generators()[t.dst]);
        for (k, (side, p)) in s.sides().iter().zip(&t.payload).enumerate() {
            let (si, di) = (x.idempotents[k], y.idempotents[k]);
            match (side.kind, p) {
                (SideKind::D, Payload::Out(b)) => {
                    if b.idempotents() != (si, di) {
                        errs.push(format!("{}: output on `{}` incompatible with idempotents", s.describe(t), side.label));
                    }
                }
                (SideKind::A, Payload::In(seq)) => {
                    if !composable(seq, si, di) {
                        errs.push(format!("{}: input on `{}` not composable", s.describe(t), side.label));
                    }
                }
                _ => errs.push(format!("{}: payload kind does not match side `{}`", s.describe(t), side.label)),
            }
        }
        if x.alexander < y.alexander {
            errs.push(format!("{}: raises filtration {} -> {}", s.describe(t), x.alexander, y.alexander));
        }
    }
    errs
}

/// δ₁² = 0 on a structure whose sides are all of type D, multiplying the
/// outputs on each side independently.
pub fn validate_type_d(s: &BorderedStructure) -> Report {
    let mut report = Report { structural: structural_errors(s), ..Default::default() };
    if let Some(a) = s.sides().iter().find(|x| x.kind == SideKind::A) {
        report.structural.push(format!("side `{}` is of type A", a.label));
        return report;
    }
    let mut out: Vec<Vec<&OperationTerm>> = vec![Vec::new(); s.len()];
    for t in s.terms() {
        out[t.src].push(t);
    }
    let mut square: HashMap<(usize, usize, Vec<Basis>), bool> = HashMap::new();
    for t1 in s.terms() {
        for t2 in &out[t1.dst] {
            report.checked += 1;
            if let Some(prod) = multiply_outputs(&t1.payload, &t2.payload) {
                *square.entry((t1.src, t2.dst, prod)).or_insert(false) ^= true;
            }
        }
    }
    let mut bad: Vec<_> = square.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect();
    bad.sort();
    for (x, z, prod) in bad {
        let outs: Vec<String> = s.sides().iter().zip(&prod).map(|(sd, b)| format!("{}:{b}", sd.label)).collect();
        report.relations.push(format!("d^2({}) contains [{}] {}", s.name(x), outs.join(" "), s.name(z)));
    }
    report
}

fn multiply_outputs(a: &[Payload], b: &[Payload]) -> Option<Vec<Basis>> {
    a.iter()
        .zip(b)
        .map(|(p, q)| match (p, q) {
            (Payload::Out(x), Payload::Out(y)) => x.mul(*y),
            _ => None,
        })
        .collect()
}

type Inputs = Vec<Vec<Chord>>;

struct RelationIndex<'a> {
    s: &'a BorderedStructure,
    a_sides: Vec<usize>,
    d_sides: Vec<usize>,
    from: Vec<Vec<&'a OperationTerm>>,
    exact: HashMap<(usize, Inputs), Vec<&'a OperationTerm>>,
}

impl<'a> RelationIndex<'a> {
    fn new(s: &'a BorderedStructure) -> Self {
        let a_sides: Vec<usize> = (0..s.sides().len()).filter(|&k| s.sides()[k].kind == SideKind::A).collect();
        let d_sides: Vec<usize> = (0..s.sides().len()).filter(|&k| s.sides()[k].kind == SideKind::D).collect();
        let mut from = vec![Vec::new(); s.len()];
        let mut exact: HashMap<(usize, Inputs), Vec<&OperationTerm>> = HashMap::new();
        let mut idx = RelationIndex { s, a_sides, d_sides, from: Vec::new(), exact: HashMap::new() };
        for t in s.terms() {
            from[t.src].push(t);
            exact.entry((t.src, idx.inputs(t))).or_default().push(t);
        }
        idx.from = from;
        idx.exact = exact;
        idx
    }

    fn inputs(&self, t: &OperationTerm) -> Inputs {
        self.a_sides
            .iter()
            .map(|&k| match &t.payload[k] {
                Payload::In(seq) => seq.clone(),
                Payload::Out(_) => Vec::new(),
            })
            .collect()
    }

    fn outputs(&self, t: &OperationTerm) -> Vec<Basis> {
        self.d_sides
            .iter()
            .map(|&k| match t.payload[k] {
                Payload::Out(b) => b,
                Payload::In(_) => Basis::Idem(Idempotent::I0),
            })
            .collect()
    }

    /// The A∞ relation at generator `x` with inputs `q`, as the set of
    /// (target, D outputs) that fail to cancel.
    fn residue(&self, x: usize, q: &Inputs) -> Vec<(usize, Vec<Basis>)> {
        let mut acc: HashMap<(usize, Vec<Basis>), bool> = HashMap::new();
        let mut flip = |k: (usize, Vec<Basis>)| *acc.entry(k).or_insert(false) ^= true;

        for t1 in &self.from[x] {
            let ins = self.inputs(t1);
            if !ins.iter().zip(q).all(|(p, full)| full.starts_with(p)) {
                continue;
            }
            let rest: Inputs = ins.iter().zip(q).map(|(p, full)| full[p.len()..].to_vec()).collect();
            let Some(second) = self.exact.get(&(t1.dst, rest)) else { continue };
            let o1 = self.outputs(t1);
            for t2 in second {
                let o2 = self.outputs(t2);
                let prod: Option<Vec<Basis>> = o1.iter().zip(&o2).map(|(a, b)| a.mul(*b)).collect();
                if let Some(p) = prod {
                    flip((t2.dst, p));
                }
            }
        }
        for (side, seq) in q.iter().enumerate() {
            for j in 0..seq.len().saturating_sub(1) {
                let Some(c) = seq[j].mul(seq[j + 1]) else { continue };
                let mut q2 = q.clone();
                q2[side].splice(j..j + 2, [c]);
                if let Some(ts) = self.exact.get(&(x, q2)) {
                    for t in ts {
                        flip((t.dst, self.outputs(t)));
                    }
                }
            }
        }
        let mut out: Vec<_> = acc.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect();
        out.sort();
        out
    }

    fn describe_inputs(&self, q: &Inputs) -> String {
        let parts: Vec<String> = self
            .a_sides
            .iter()
            .zip(q)
            .map(|(&k, seq)| {
                let toks: Vec<&str> = seq.iter().map(|c| c.token()).collect();
                format!("{}:[{}]", self.s.sides()[k].label, toks.join(","))
            })
            .collect();
        parts.join(" ")
    }
}

fn is_chain(seq: &[Chord]) -> bool {
    seq.windows(2).all(|w| w[0].right() == w[1].left())
}

fn support_closure(idx: &RelationIndex) -> BTreeSet<Inputs> {
    let supports: BTreeSet<Inputs> = idx.s.terms().map(|t| idx.inputs(t)).collect();
    let mut pool = BTreeSet::new();
    for sup in &supports {
        let mut partial: Vec<Inputs> = vec![Vec::new()];
        for seq in sup {
            let mut subs = vec![Vec::new()];
            for i in 0..seq.len() {
                for j in i + 1..=seq.len() {
                    subs.push(seq[i..j].to_vec());
                }
            }
            partial = partial
                .into_iter()
                .flat_map(|p| {
                    subs.iter().map(move |s| {
                        let mut q = p.clone();
                        q.push(s.clone());
                        q
                    })
                })
                .collect();
        }
        pool.extend(partial);
        for side in 0..sup.len() {
            for c in Chord::ALL {
                let mut pre = sup.clone();
                pre[side].insert(0, c);
                pool.insert(pre);
                let mut post = sup.clone();
                post[side].push(c);
                pool.insert(post);
            }
        }
    }
    for a in &supports {
        for b in &supports {
            pool.insert(a.iter().zip(b).map(|(x, y)| [x.as_slice(), y.as_slice()].concat()).collect());
        }
    }
    pool.retain(|q| q.iter().all(|s| is_chain(s)));
    pool
}

fn exhaustive(sides: usize, n: usize) -> BTreeSet<Inputs> {
    let mut seqs: Vec<Vec<Chord>> = vec![Vec::new()];
    let mut frontier = seqs.clone();
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &frontier {
            for c in Chord::ALL {
                if s.last().is_none_or(|l| l.right() == c.left()) {
                    let mut t = s.clone();
                    t.push(c);
                    next.push(t);
                }
            }
        }
        seqs.extend(next.iter().cloned());
        frontier = next;
    }
    let mut pool: Vec<Inputs> = vec![Vec::new()];
    for _ in 0..sides {
        pool = pool
            .into_iter()
            .flat_map(|p| {
                seqs.iter().map(move |s| {
                    let mut q = p.clone();
                    q.push(s.clone());
                    q
                })
            })
            .collect();
    }
    pool.into_iter().collect()
}

/// Checks the structure relation for every generator against every input
/// tuple in the pool. With no A sides this is the δ₁² check.
pub fn validate_a_infinity(s: &BorderedStructure, pool: SequencePool) -> Report {
    let mut report = Report { structural: structural_errors(s), ..Default::default() };
    let idx = RelationIndex::new(s);
    let tuples = match pool {
        SequencePool::SupportClosure => support_closure(&idx),
        SequencePool::Exhaustive(n) => exhaustive(idx.a_sides.len(), n),
    };
    let mut seen = HashSet::new();
    for q in &tuples {
        for (x, g) in s.generators().iter().enumerate() {
            let fits = idx.a_sides.iter().zip(q).all(|(&k, seq)| seq.first().is_none_or(|c| c.left() == g.idempotents[k]));
            if !fits {
                continue;
            }
            report.checked += 1;
            for (z, outs) in idx.residue(x, q) {
                if !seen.insert((x, q.clone(), z)) {
                    continue;
                }
                let outs: Vec<String> =
                    idx.d_sides.iter().zip(&outs).map(|(&k, b)| format!(" {}:{b}", s.sides()[k].label)).collect();
                report.relations.push(format!(
                    "relation at {} with {} leaves{} {}",
                    s.name(x),
                    idx.describe_inputs(q),
                    outs.concat(),
                    s.name(z)
                ));
            }
        }
    }
    report
}

/// Bookkeeping invariants plus whichever relation check applies.
pub fn validate_generic(s: &BorderedStructure) -> Report {
    if s.sides().iter().any(|x| x.kind == SideKind::A) {
        validate_a_infinity(s, SequencePool::SupportClosure)
    } else {
        validate_type_d(s)
    }
}
