//! Generators, operation terms and the structures built from them.
//!
//! One type covers chain complexes (no sides), type A/D modules (one side)
//! and bimodules of any kind (two sides). Terms form an F₂-set: inserting a
//! term that is already present removes it.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{Basis, Chord, Idempotent};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SideKind {
    A,
    D,
}

impl SideKind {
    pub fn token(self) -> &'static str {
        match self {
            SideKind::A => "A",
            SideKind::D => "D",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SideSpec {
    pub label: String,
    pub kind: SideKind,
}

impl SideSpec {
    pub fn new(label: impl Into<String>, kind: SideKind) -> Self {
        SideSpec { label: label.into(), kind }
    }

    pub fn a(label: impl Into<String>) -> Self {
        Self::new(label, SideKind::A)
    }

    pub fn d(label: impl Into<String>) -> Self {
        Self::new(label, SideKind::D)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    /// One idempotent per side, in side order.
    pub idempotents: Vec<Idempotent>,
    pub alexander: i32,
}

/// What a term does on one side: a D side emits one basis element, an A
/// side consumes a (possibly empty) chord sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Out(Basis),
    In(Vec<Chord>),
}

impl Payload {
    pub fn is_trivial(&self) -> bool {
        match self {
            Payload::Out(b) => b.is_idempotent(),
            Payload::In(seq) => seq.is_empty(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationTerm {
    pub src: usize,
    pub dst: usize,
    pub payload: Vec<Payload>,
}

impl OperationTerm {
    pub fn new(src: usize, dst: usize, payload: Vec<Payload>) -> Self {
        OperationTerm { src, dst, payload }
    }

    /// Invertible terms are the ones edge reduction may cancel.
    pub fn is_invertible(&self) -> bool {
        self.payload.iter().all(Payload::is_trivial)
    }
}

#[derive(Clone, Debug, Default)]
pub struct BorderedStructure {
    sides: Vec<SideSpec>,
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
    terms: BTreeSet<OperationTerm>,
}

impl PartialEq for BorderedStructure {
    fn eq(&self, other: &Self) -> bool {
        if self.sides != other.sides || self.generators.len() != other.generators.len() {
            return false;
        }
        // generator order is not part of the contract
        for g in &self.generators {
            match other.generator(&g.name) {
                Some(h) if h == g => {}
                _ => return false,
            }
        }
        let remap = |t: &OperationTerm, from: &Self, to: &Self| OperationTerm {
            src: to.index[&from.generators[t.src].name],
            dst: to.index[&from.generators[t.dst].name],
            payload: t.payload.clone(),
        };
        let mine: BTreeSet<OperationTerm> = self.terms.iter().map(|t| remap(t, self, other)).collect();
        mine == other.terms
    }
}

impl Eq for BorderedStructure {}

impl BorderedStructure {
    pub fn new(sides: Vec<SideSpec>) -> Result<Self> {
        for (i, s) in sides.iter().enumerate() {
            if sides[..i].iter().any(|t| t.label == s.label) {
                return Err(Error::DuplicateSide(s.label.clone()));
            }
        }
        Ok(BorderedStructure { sides, ..Default::default() })
    }

    /// A chain complex: no sides.
    pub fn complex() -> Self {
        BorderedStructure::default()
    }

    pub fn sides(&self) -> &[SideSpec] {
        &self.sides
    }

    pub fn side_index(&self, label: &str) -> Result<usize> {
        self.sides.iter().position(|s| s.label == label).ok_or_else(|| Error::UnknownSide(label.to_string()))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, name: &str) -> Option<&Generator> {
        self.index.get(name).map(|&i| &self.generators[i])
    }

    pub fn generator_index(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.generators[i].name
    }

    pub fn alexander(&self, i: usize) -> i32 {
        self.generators[i].alexander
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &OperationTerm> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn contains_term(&self, t: &OperationTerm) -> bool {
        self.terms.contains(t)
    }

    pub fn add_generator(&mut self, name: impl Into<String>, idempotents: Vec<Idempotent>, alexander: i32) -> Result<usize> {
        let name = name.into();
        if idempotents.len() != self.sides.len() {
            return Err(Error::Schema(format!(
                "generator `{name}` has {} idempotents for {} sides",
                idempotents.len(),
                self.sides.len()
            )));
        }
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateGenerator(name));
        }
        let i = self.generators.len();
        self.index.insert(name.clone(), i);
        self.generators.push(Generator { name, idempotents, alexander });
        Ok(i)
    }

    /// Adds `t` over F₂. Returns `true` if the term is present afterwards.
    pub fn toggle_term(&mut self, t: OperationTerm) -> bool {
        debug_assert_eq!(t.payload.len(), self.sides.len());
        debug_assert!(t.src < self.generators.len() && t.dst < self.generators.len());
        if self.terms.remove(&t) {
            false
        } else {
            self.terms.insert(t);
            true
        }
    }

    /// Convenience for complexes: a bare arrow `src → dst`.
    pub fn toggle_arrow(&mut self, src: usize, dst: usize) -> bool {
        self.toggle_term(OperationTerm::new(src, dst, Vec::new()))
    }

    pub fn remove_term(&mut self, t: &OperationTerm) -> bool {
        self.terms.remove(t)
    }

    pub fn retain_terms(&mut self, mut keep: impl FnMut(&OperationTerm) -> bool) {
        self.terms.retain(|t| keep(t));
    }

    /// Copy with side labels renamed; labels not listed are kept.
    pub fn relabel(&self, map: &[(&str, &str)]) -> Result<Self> {
        for (from, _) in map {
            self.side_index(from)?;
        }
        let sides = self
            .sides
            .iter()
            .map(|s| {
                let label = map.iter().find(|(f, _)| *f == s.label).map_or(s.label.as_str(), |(_, t)| t);
                SideSpec::new(label, s.kind)
            })
            .collect();
        let mut out = BorderedStructure::new(sides)?;
        out.generators = self.generators.clone();
        out.index = self.index.clone();
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Copy with the sides permuted into the given label order.
    pub fn reorder_sides(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.sides.len() {
            return Err(Error::Schema(format!("expected {} side labels, got {}", self.sides.len(), order.len())));
        }
        let perm: Vec<usize> = order.iter().map(|l| self.side_index(l)).collect::<Result<_>>()?;
        let mut out = BorderedStructure::new(perm.iter().map(|&i| self.sides[i].clone()).collect())?;
        for g in &self.generators {
            out.add_generator(g.name.clone(), perm.iter().map(|&i| g.idempotents[i]).collect(), g.alexander)?;
        }
        for t in &self.terms {
            out.terms.insert(OperationTerm::new(t.src, t.dst, perm.iter().map(|&i| t.payload[i].clone()).collect()));
        }
        Ok(out)
    }

    pub fn rename_generators(&self, mut f: impl FnMut(&str) -> String) -> Result<Self> {
        let mut out = BorderedStructure::new(self.sides.clone())?;
        for g in &self.generators {
            out.add_generator(f(&g.name), g.idempotents.clone(), g.alexander)?;
        }
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Drops generators not selected by `keep`, along with every incident term.
    pub fn restrict(&self, keep: impl Fn(usize) -> bool) -> Self {
        let mut out = BorderedStructure::new(self.sides.clone()).expect("sides already distinct");
        let mut map = vec![usize::MAX; self.generators.len()];
        for (i, g) in self.generators.iter().enumerate() {
            if keep(i) {
                map[i] = out.add_generator(g.name.clone(), g.idempotents.clone(), g.alexander).expect("names already distinct");
            }
        }
        for t in &self.terms {
            if map[t.src] != usize::MAX && map[t.dst] != usize::MAX {
                out.terms.insert(OperationTerm::new(map[t.src], map[t.dst], t.payload.clone()));
            }
        }
        out
    }

    /// Bounded in the sense needed by the box tensor product.
    ///
    /// Structures without D sides are always bounded here, since their term
    /// set is finite. Otherwise the term graph must be acyclic.
    pub fn is_bounded(&self) -> bool {
        if !self.sides.iter().any(|s| s.kind == SideKind::D) {
            return true;
        }
        let n = self.generators.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for t in &self.terms {
            out[t.src].push(t.dst);
            indeg[t.dst] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    stack.push(w);
                }
            }
        }
        seen == n
    }

    /// Human-readable form of one term, used in reports and errors.
    pub fn describe(&self, t: &OperationTerm) -> String {
        let mut parts = Vec::new();
        for (side, p) in self.sides.iter().zip(&t.payload) {
            match p {
                Payload::Out(b) => parts.push(format!("{}:{}", side.label, b)),
                Payload::In(seq) if !seq.is_empty() => {
                    let toks: Vec<&str> = seq.iter().map(|c| c.token()).collect();
                    parts.push(format!("{}:[{}]", side.label, toks.join(",")));
                }
                Payload::In(_) => {}
            }
        }
        if parts.is_empty() {
            format!("{} -> {}", self.name(t.src), self.name(t.dst))
        } else {
            format!("{} -({})-> {}", self.name(t.src), parts.join(" "), self.name(t.dst))
        }
    }

    /// Counts of generators per idempotent tuple.
    pub fn idempotent_buckets(&self) -> std::collections::BTreeMap<Vec<Idempotent>, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.generators {
            *m.entry(g.idempotents.clone()).or_insert(0) += 1;
        }
        m
    }

    pub fn alexander_counts(&self) -> std::collections::BTreeMap<i32, usize> {
        let mut m = std::collections::BTreeMap::new();
        for g in &self.generators {
            *m.entry(g.alexander).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for BorderedStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sides: Vec<String> = self.sides.iter().map(|s| format!("{}({})", s.label, s.kind.token())).collect();
        writeln!(f, "sides [{}], {} generators, {} terms", sides.join(", "), self.generators.len(), self.terms.len())?;
        for t in &self.terms {
            writeln!(f, "  {}", self.describe(t))?;
        }
        Ok(())
    }
}

/// Checks that a chord sequence can be read from `from` to `to`.
pub fn composable(seq: &[Chord], from: Idempotent, to: Idempotent) -> bool {
    match (seq.first(), seq.last()) {
        (None, _) => from == to,
        (Some(first), Some(last)) => {
            first.left() == from && last.right() == to && seq.windows(2).all(|w| w[0].right() == w[1].left())
        }
        _ => unreachable!(),
    }
}
