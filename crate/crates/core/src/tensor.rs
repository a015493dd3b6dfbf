//! Box tensor product of an A side against a D side.

use std::collections::HashMap;

use crate::algebra::{Basis, Chord};
use crate::error::{Error, Result};
use crate::structure::{BorderedStructure, OperationTerm, Payload, SideKind, SideSpec};

/// Adjacent chord pairs that a knot-complement type D structure never emits
/// in succession.
pub const FORBIDDEN_PAIRS: [(Chord, Chord); 4] =
    [(Chord::R1, Chord::R2), (Chord::R1, Chord::R23), (Chord::R2, Chord::R3), (Chord::R12, Chord::R3)];

#[derive(Clone, Debug)]
pub struct TensorPlan<'a> {
    pub left: &'a BorderedStructure,
    pub left_side: &'a str,
    pub right: &'a BorderedStructure,
    pub right_side: &'a str,
    /// Skip left terms whose paired sequence contains a [`FORBIDDEN_PAIRS`] pair.
    pub prune: bool,
}

impl<'a> TensorPlan<'a> {
    pub fn new(left: &'a BorderedStructure, left_side: &'a str, right: &'a BorderedStructure, right_side: &'a str) -> Self {
        TensorPlan { left, left_side, right, right_side, prune: false }
    }

    pub fn pruned(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }
}

pub fn has_forbidden_pair(seq: &[Chord]) -> bool {
    seq.windows(2).any(|w| FORBIDDEN_PAIRS.contains(&(w[0], w[1])))
}

pub fn box_tensor(plan: &TensorPlan) -> Result<BorderedStructure> {
    let (l, r) = (plan.left, plan.right);
    let ls = l.side_index(plan.left_side)?;
    let rs = r.side_index(plan.right_side)?;
    if l.sides()[ls].kind != SideKind::A {
        return Err(Error::SideKind { label: plan.left_side.to_string(), expected: "A" });
    }
    if r.sides()[rs].kind != SideKind::D {
        return Err(Error::SideKind { label: plan.right_side.to_string(), expected: "D" });
    }
    if !l.is_bounded() && !r.is_bounded() {
        return Err(Error::Unbounded);
    }

    let l_rest: Vec<usize> = (0..l.sides().len()).filter(|&k| k != ls).collect();
    let r_rest: Vec<usize> = (0..r.sides().len()).filter(|&k| k != rs).collect();
    let sides: Vec<SideSpec> =
        l_rest.iter().map(|&k| l.sides()[k].clone()).chain(r_rest.iter().map(|&k| r.sides()[k].clone())).collect();
    let mut out = BorderedStructure::new(sides)?;

    // generator (x, y) exists when the paired idempotents agree
    let mut pair: HashMap<(usize, usize), usize> = HashMap::new();
    let mut right_by_idem: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (y, g) in r.generators().iter().enumerate() {
        right_by_idem[g.idempotents[rs] as usize].push(y);
    }
    let mut left_by_idem: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (x, gx) in l.generators().iter().enumerate() {
        left_by_idem[gx.idempotents[ls] as usize].push(x);
        for &y in &right_by_idem[gx.idempotents[ls] as usize] {
            let gy = &r.generators()[y];
            let idems = l_rest.iter().map(|&k| gx.idempotents[k]).chain(r_rest.iter().map(|&k| gy.idempotents[k])).collect();
            let i = out.add_generator(format!("{}|{}", gx.name, gy.name), idems, gx.alexander + gy.alexander)?;
            pair.insert((x, y), i);
        }
    }

    let lookup = |x: usize, y: usize| -> Result<usize> {
        pair.get(&(x, y)).copied().ok_or_else(|| {
            Error::IdempotentMismatch(format!("no generator {}|{} in the tensor product", l.name(x), r.name(y)))
        })
    };
    let left_identity = |x: usize| -> Vec<Payload> {
        l_rest
            .iter()
            .map(|&k| match l.sides()[k].kind {
                SideKind::D => Payload::Out(Basis::Idem(l.generators()[x].idempotents[k])),
                SideKind::A => Payload::In(Vec::new()),
            })
            .collect()
    };
    let right_identity = |y: usize| -> Vec<Payload> {
        r_rest
            .iter()
            .map(|&k| match r.sides()[k].kind {
                SideKind::D => Payload::Out(Basis::Idem(r.generators()[y].idempotents[k])),
                SideKind::A => Payload::In(Vec::new()),
            })
            .collect()
    };

    // right terms indexed by (source, paired output chord)
    let mut by_chord: HashMap<(usize, Chord), Vec<&OperationTerm>> = HashMap::new();
    for t in r.terms() {
        match t.payload[rs] {
            Payload::Out(Basis::Chord(c)) => by_chord.entry((t.src, c)).or_default().push(t),
            Payload::Out(Basis::Idem(_)) => {
                // pairs with the unit m2(x, 1) = x
                for &x in &left_by_idem[r.generators()[t.src].idempotents[rs] as usize] {
                    let p: Vec<Payload> =
                        left_identity(x).into_iter().chain(r_rest.iter().map(|&k| t.payload[k].clone())).collect();
                    out.toggle_term(OperationTerm::new(lookup(x, t.src)?, lookup(x, t.dst)?, p));
                }
            }
            Payload::In(_) => unreachable!("D side carries outputs"),
        }
    }

    for t in l.terms() {
        let Payload::In(seq) = &t.payload[ls] else { unreachable!("A side carries inputs") };
        if plan.prune && has_forbidden_pair(seq) {
            continue;
        }
        let l_payload: Vec<Payload> = l_rest.iter().map(|&k| t.payload[k].clone()).collect();
        let src_idem = l.generators()[t.src].idempotents[ls];
        if seq.is_empty() {
            for &y in &right_by_idem[src_idem as usize] {
                let p = l_payload.iter().cloned().chain(right_identity(y)).collect();
                out.toggle_term(OperationTerm::new(lookup(t.src, y)?, lookup(t.dst, y)?, p));
            }
            continue;
        }
        for &y in &right_by_idem[src_idem as usize] {
            let mut chains: Vec<(usize, Vec<Payload>)> = vec![(y, right_identity(y))];
            for c in seq {
                let mut next = Vec::new();
                for (end, acc) in &chains {
                    let Some(steps) = by_chord.get(&(*end, *c)) else { continue };
                    for u in steps {
                        if let Some(joined) = compose(acc, &r_rest.iter().map(|&k| &u.payload[k]).collect::<Vec<_>>()) {
                            next.push((u.dst, joined));
                        }
                    }
                }
                chains = next;
                if chains.is_empty() {
                    break;
                }
            }
            for (end, rp) in chains {
                let p = l_payload.iter().cloned().chain(rp).collect();
                out.toggle_term(OperationTerm::new(lookup(t.src, y)?, lookup(t.dst, end)?, p));
            }
        }
    }
    Ok(out)
}

/// Multiplies D outputs and concatenates A inputs along a chain.
fn compose(acc: &[Payload], step: &[&Payload]) -> Option<Vec<Payload>> {
    acc.iter()
        .zip(step)
        .map(|(a, b)| match (a, b) {
            (Payload::Out(x), Payload::Out(y)) => x.mul(*y).map(Payload::Out),
            (Payload::In(x), Payload::In(y)) => Some(Payload::In([x.as_slice(), y.as_slice()].concat())),
            _ => None,
        })
        .collect()
}

/// The satellite complex: the A sides of `cfaa` are paired with `j` on `rho`
/// and with `k` on `sigma`.
pub fn glue_filtered_complex(
    cfaa: &BorderedStructure,
    j: &BorderedStructure,
    k: &BorderedStructure,
    prune: bool,
) -> Result<BorderedStructure> {
    let half = box_tensor(&TensorPlan::new(cfaa, "rho", j, "rho").pruned(prune))?;
    box_tensor(&TensorPlan::new(&half, "sigma", k, "sigma").pruned(prune))
}
