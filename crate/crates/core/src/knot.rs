//! Type D structures of framed knot complements, read off from a reduced
//! model of CFK⁻.
//!
//! The ι₀ generators are the vertically simplified basis ξ₀..ξ₂ₙ. Arrows
//! that the horizontal chains attach to η-basis elements are pushed through
//! the change of basis: with ξ_q = Σ_p x_{q,p} η_p and η_p = Σ_q y_{p,q} ξ_q,
//! an arrow out of η_p leaves every ξ_q with x_{q,p} = 1 and an arrow into
//! η_p lands on every ξ_q with y_{p,q} = 1.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{Basis, Chord, Idempotent};
use crate::error::{Error, Result};
use crate::structure::{BorderedStructure, OperationTerm, Payload, SideSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CfkModel {
    pub name: String,
    pub n: usize,
    pub tau: i32,
    pub vertical_lengths: Vec<usize>,
    pub horizontal_lengths: Vec<usize>,
    pub xi_to_eta: Vec<Vec<u8>>,
    pub eta_to_xi: Vec<Vec<u8>>,
}

#[derive(Clone, Debug)]
pub struct FramedComplement<'a> {
    pub model: &'a CfkModel,
    pub framing: i32,
    pub side_label: &'a str,
}

pub const BUILTIN_MODELS: [&str; 4] = ["unknot", "trefoil_rh", "trefoil_lh", "figure_eight"];

fn perm(p: &[usize]) -> Vec<Vec<u8>> {
    (0..p.len()).map(|i| (0..p.len()).map(|j| u8::from(p[i] == j)).collect()).collect()
}

pub fn builtin_model(name: &str) -> Result<CfkModel> {
    let (n, tau, lens, p): (usize, i32, Vec<usize>, Vec<usize>) = match name {
        "unknot" => (0, 0, vec![], vec![0]),
        // staircase a - b - c: vertical pair (b, c), horizontal pair (b, a)
        "trefoil_rh" => (1, 1, vec![1], vec![2, 1, 0]),
        "trefoil_lh" => (1, -1, vec![1], vec![1, 0, 2]),
        // a unit box plus a dot
        "figure_eight" => (2, 0, vec![1, 1], vec![0, 1, 3, 2, 4]),
        other => return Err(Error::UnknownModel(other.to_string())),
    };
    let m = perm(&p);
    Ok(CfkModel {
        name: name.to_string(),
        n,
        tau,
        vertical_lengths: lens.clone(),
        horizontal_lengths: lens,
        xi_to_eta: m.clone(),
        eta_to_xi: m,
    })
}

fn mat_mul(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).fold(0, |acc, k| acc ^ (a[i][k] & b[k][j]))).collect()).collect()
}

/// Every violated model invariant, or an empty list.
pub fn validate_model(m: &CfkModel) -> Vec<String> {
    let mut errs = Vec::new();
    let dim = 2 * m.n + 1;
    if m.vertical_lengths.len() != m.n {
        errs.push(format!("expected {} vertical lengths, found {}", m.n, m.vertical_lengths.len()));
    }
    if m.horizontal_lengths.len() != m.n {
        errs.push(format!("expected {} horizontal lengths, found {}", m.n, m.horizontal_lengths.len()));
    }
    for (j, &k) in m.vertical_lengths.iter().enumerate() {
        if k == 0 {
            errs.push(format!("vertical length k_{} must be positive", j + 1));
        }
    }
    for (j, &l) in m.horizontal_lengths.iter().enumerate() {
        if l == 0 {
            errs.push(format!("horizontal length l_{} must be positive", j + 1));
        }
    }
    let mut shapes_ok = true;
    for (label, mat) in [("xi_to_eta", &m.xi_to_eta), ("eta_to_xi", &m.eta_to_xi)] {
        if mat.len() != dim || mat.iter().any(|r| r.len() != dim) {
            errs.push(format!("{label} must be {dim}x{dim}"));
            shapes_ok = false;
        } else if mat.iter().flatten().any(|&v| v > 1) {
            errs.push(format!("{label} entries must be 0 or 1"));
            shapes_ok = false;
        }
    }
    if shapes_ok {
        let id: Vec<Vec<u8>> = (0..dim).map(|i| (0..dim).map(|j| u8::from(i == j)).collect()).collect();
        if mat_mul(&m.xi_to_eta, &m.eta_to_xi) != id || mat_mul(&m.eta_to_xi, &m.xi_to_eta) != id {
            errs.push("xi_to_eta and eta_to_xi are not mutually inverse over F2".to_string());
        }
    }
    errs
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CfkModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    model_from_json(&text)
}

pub fn model_from_json(text: &str) -> Result<CfkModel> {
    let m: CfkModel = serde_json::from_str(text)?;
    let errs = validate_model(&m);
    if errs.is_empty() {
        Ok(m)
    } else {
        Err(Error::InvalidModel(errs))
    }
}

struct Builder {
    s: BorderedStructure,
}

impl Builder {
    fn gen(&mut self, name: String, idem: Idempotent) -> usize {
        self.s.add_generator(name, vec![idem], 0).expect("generated names are distinct")
    }

    fn arrow(&mut self, a: usize, b: usize, c: Chord) {
        self.s.toggle_term(OperationTerm::new(a, b, vec![Payload::Out(Basis::Chord(c))]));
    }
}

pub fn build_cfd(fc: &FramedComplement) -> Result<BorderedStructure> {
    let m = fc.model;
    let errs = validate_model(m);
    if !errs.is_empty() {
        return Err(Error::InvalidModel(errs));
    }
    let upper = fc.side_label == "sigma";
    let nm = |lower: &str, rest: String| {
        let mut c = lower.chars();
        let head: String = c.next().map(|h| if upper { h.to_ascii_uppercase().to_string() } else { h.to_string() }).unwrap_or_default();
        format!("{head}{}{rest}", c.as_str())
    };
    let mut b = Builder { s: BorderedStructure::new(vec![SideSpec::d(fc.side_label)])? };
    let dim = 2 * m.n + 1;
    let xi: Vec<usize> = (0..dim).map(|p| b.gen(nm("xi", p.to_string()), Idempotent::I0)).collect();
    let x = &m.xi_to_eta;
    let y = &m.eta_to_xi;
    let out_of_eta = |p: usize| -> Vec<usize> { (0..dim).filter(|&q| x[q][p] == 1).map(|q| xi[q]).collect() };
    let into_eta = |p: usize| -> Vec<usize> { (0..dim).filter(|&q| y[p][q] == 1).map(|q| xi[q]).collect() };

    for j in 1..=m.n {
        let kappa: Vec<usize> =
            (1..=m.vertical_lengths[j - 1]).map(|i| b.gen(nm("k", format!("{j}_{i}")), Idempotent::I1)).collect();
        b.arrow(xi[2 * j], kappa[0], Chord::R123);
        for w in kappa.windows(2) {
            b.arrow(w[0], w[1], Chord::R23);
        }
        b.arrow(xi[2 * j - 1], *kappa.last().unwrap(), Chord::R1);

        let lambda: Vec<usize> =
            (1..=m.horizontal_lengths[j - 1]).map(|i| b.gen(nm("l", format!("{j}_{i}")), Idempotent::I1)).collect();
        for src in out_of_eta(2 * j - 1) {
            b.arrow(src, lambda[0], Chord::R3);
        }
        for w in lambda.windows(2) {
            b.arrow(w[0], w[1], Chord::R23);
        }
        for dst in into_eta(2 * j) {
            b.arrow(*lambda.last().unwrap(), dst, Chord::R2);
        }
    }

    let two_tau = 2 * m.tau;
    let r = (two_tau - fc.framing).unsigned_abs() as usize;
    let gamma: Vec<usize> = (1..=r).map(|i| b.gen(nm("g", i.to_string()), Idempotent::I1)).collect();
    if fc.framing < two_tau {
        for src in out_of_eta(0) {
            b.arrow(src, gamma[0], Chord::R3);
        }
        for w in gamma.windows(2) {
            b.arrow(w[0], w[1], Chord::R23);
        }
        b.arrow(xi[0], *gamma.last().unwrap(), Chord::R1);
    } else if fc.framing == two_tau {
        for dst in into_eta(0) {
            b.arrow(xi[0], dst, Chord::R12);
        }
    } else {
        b.arrow(xi[0], gamma[0], Chord::R123);
        for w in gamma.windows(2) {
            b.arrow(w[0], w[1], Chord::R23);
        }
        for dst in into_eta(0) {
            b.arrow(*gamma.last().unwrap(), dst, Chord::R2);
        }
    }

    let report = crate::validate::validate_type_d(&b.s);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report.lines().cloned().collect()));
    }
    Ok(b.s)
}

/// Chord pairs `(a, b)` such that some generator receives `a` and emits `b`.
pub fn consecutive_outputs(s: &BorderedStructure) -> Vec<(Chord, Chord)> {
    let mut pairs = Vec::new();
    for t in s.terms() {
        let Payload::Out(Basis::Chord(a)) = t.payload[0] else { continue };
        for u in s.terms().filter(|u| u.src == t.dst) {
            if let Payload::Out(Basis::Chord(b)) = u.payload[0] {
                if !pairs.contains(&(a, b)) {
                    pairs.push((a, b));
                }
            }
        }
    }
    pairs.sort();
    pairs
}
