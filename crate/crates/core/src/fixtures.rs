//! The embedded bimodules: the identity AA bimodule, CFDD and CFAA of the
//! Borromean exterior with pattern knot B3, and the pruned CFAA blocks.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::algebra::{Chord, Idempotent};
use crate::error::{Error, Result};
use crate::io::from_json_str;
use crate::reduction::{reduce, CancellationPolicy};
use crate::structure::{BorderedStructure, Payload, SideKind};
use crate::tensor::{box_tensor, TensorPlan};
use crate::validate::{validate_a_infinity, validate_type_d, SequencePool};

pub const FIXTURE_FILES: [(&str, &str); 8] = [
    ("identity_aa.json", include_str!("../fixtures/identity_aa.json")),
    ("cfdd_y_b3.json", include_str!("../fixtures/cfdd_y_b3.json")),
    ("cfaa_y_b3.json", include_str!("../fixtures/cfaa_y_b3.json")),
    ("cfaa_y_b3_pruned_blocks.json", include_str!("../fixtures/cfaa_y_b3_pruned_blocks.json")),
    ("models/unknot.json", include_str!("../fixtures/models/unknot.json")),
    ("models/trefoil_rh.json", include_str!("../fixtures/models/trefoil_rh.json")),
    ("models/trefoil_lh.json", include_str!("../fixtures/models/trefoil_lh.json")),
    ("models/figure_eight.json", include_str!("../fixtures/models/figure_eight.json")),
];

pub const CHECKSUMS: &str = include_str!("../fixtures/CHECKSUMS");

/// Chord pairs after which no knot-complement type D structure continues;
/// used to reproduce the pruned CFAA blocks.
pub const PRUNED_PAIRS: [(Chord, Chord); 3] = [(Chord::R2, Chord::R3), (Chord::R1, Chord::R2), (Chord::R1, Chord::R23)];

/// Blocks of CFAA for which a pruned form is embedded, as (source letter, target letter).
pub const PRUNED_BLOCKS: [(char, char); 5] = [('a', 'c'), ('a', 'd'), ('b', 'a'), ('b', 'c'), ('b', 'd')];

#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub identity_aa: BorderedStructure,
    pub cfdd_y_b3: BorderedStructure,
    pub cfaa_y_b3_reference: BorderedStructure,
    pub cfaa_y_b3_pruned_blocks: BorderedStructure,
}

fn parse_set(read: impl Fn(&str) -> Result<String>) -> Result<FixtureSet> {
    let load = |name: &str| -> Result<BorderedStructure> {
        from_json_str(&read(name)?).map_err(|e| Error::Schema(format!("{name}: {e}")))
    };
    Ok(FixtureSet {
        identity_aa: load("identity_aa.json")?,
        cfdd_y_b3: load("cfdd_y_b3.json")?,
        cfaa_y_b3_reference: load("cfaa_y_b3.json")?,
        cfaa_y_b3_pruned_blocks: load("cfaa_y_b3_pruned_blocks.json")?,
    })
}

fn embedded(name: &str) -> Result<String> {
    FIXTURE_FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Schema(format!("no embedded fixture `{name}`")))
}

/// The embedded fixtures, parsed once.
pub fn fixtures() -> &'static FixtureSet {
    static SET: OnceLock<FixtureSet> = OnceLock::new();
    SET.get_or_init(|| parse_set(embedded).expect("embedded fixtures parse"))
}

pub fn load_from_dir(dir: impl AsRef<Path>) -> Result<FixtureSet> {
    let dir = dir.as_ref();
    parse_set(|name| {
        let path = dir.join(name);
        std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
    })
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn parse_checksums(text: &str) -> BTreeMap<String, String> {
    text.lines()
        .filter_map(|l| {
            let mut it = l.split_whitespace();
            Some((it.nth(1)?.to_string(), l.split_whitespace().next()?.to_string()))
        })
        .collect()
}

/// Compares fixture files against the recorded checksums. With `dir` the
/// files are read from disk, otherwise the embedded copies are used.
pub fn verify_checksums(dir: Option<&Path>) -> Result<Vec<String>> {
    let recorded = match dir {
        Some(d) => {
            let path = d.join("CHECKSUMS");
            parse_checksums(&std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })?)
        }
        None => parse_checksums(CHECKSUMS),
    };
    let mut bad = Vec::new();
    for (name, text) in FIXTURE_FILES {
        let actual = match dir {
            Some(d) => {
                let path = d.join(name);
                sha256_hex(&std::fs::read_to_string(&path).map_err(|source| Error::Io { path, source })?)
            }
            None => sha256_hex(text),
        };
        match recorded.get(name) {
            Some(want) if *want == actual => {}
            Some(want) => bad.push(format!("{name}: checksum {actual} does not match recorded {want}")),
            None => bad.push(format!("{name}: no recorded checksum")),
        }
    }
    Ok(bad)
}

fn has_pruned_pair(seq: &[Chord]) -> bool {
    seq.windows(2).any(|w| PRUNED_PAIRS.contains(&(w[0], w[1])))
}

/// Drops terms whose input sequence on either A side contains one of the
/// [`PRUNED_PAIRS`].
pub fn prune_reference(s: &BorderedStructure) -> Result<BorderedStructure> {
    if s.sides().len() != 2 || s.sides().iter().any(|x| x.kind != SideKind::A) {
        return Err(Error::Schema("pruning expects a structure with two A sides".into()));
    }
    let mut out = s.clone();
    out.retain_terms(|t| !t.payload.iter().any(|p| matches!(p, Payload::In(seq) if has_pruned_pair(seq))));
    Ok(out)
}

/// Terms from generators named `x…` to generators named `y…`.
pub fn block(s: &BorderedStructure, from: char, to: char) -> BorderedStructure {
    let mut out = s.clone();
    out.retain_terms(|t| s.name(t.src).starts_with(from) && s.name(t.dst).starts_with(to));
    out
}

/// CFAA(I) ⊠ (CFAA(I) ⊠ CFDD), reduced along filtration-preserving arrows.
pub fn derive_cfaa_y_b3_from(set: &FixtureSet) -> Result<BorderedStructure> {
    // the identity's rho side pairs with the D side; its sigma side takes the label
    let first = set.identity_aa.relabel(&[("rho", "pair"), ("sigma", "rho")])?;
    let half = box_tensor(&TensorPlan::new(&first, "pair", &set.cfdd_y_b3, "rho"))?;
    let half = reduce(&half, &CancellationPolicy::default())?.structure;
    let second = set.identity_aa.relabel(&[("rho", "pair")])?;
    let full = box_tensor(&TensorPlan::new(&second, "pair", &half, "sigma"))?;
    let full = full.reorder_sides(&["rho", "sigma"])?;
    Ok(reduce(&full, &CancellationPolicy::default())?.structure)
}

pub fn derive_cfaa_y_b3() -> Result<BorderedStructure> {
    derive_cfaa_y_b3_from(fixtures())
}

/// Generator counts per (rho, sigma) idempotent pair, in the order
/// ι₀ι₀, ι₁ι₀, ι₀ι₁, ι₁ι₁.
pub fn bucket_counts(s: &BorderedStructure) -> [usize; 4] {
    use Idempotent::*;
    let b = s.idempotent_buckets();
    [[I0, I0], [I1, I0], [I0, I1], [I1, I1]].map(|k| b.get(k.as_slice()).copied().unwrap_or(0))
}

pub fn alexander_triple(s: &BorderedStructure) -> [usize; 3] {
    let c = s.alexander_counts();
    [-1, 0, 1].map(|a| c.get(&a).copied().unwrap_or(0))
}

#[derive(Clone, Debug)]
pub struct FixtureCheck {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

/// Every fixture invariant, one line each.
pub fn check_fixtures(set: &FixtureSet) -> Vec<FixtureCheck> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, ok: bool, detail: String| out.push(FixtureCheck { name, ok, detail });

    let r = validate_type_d(&set.cfdd_y_b3);
    push("cfdd d^2 = 0", r.is_valid(), format!("{} products, {} violations", r.checked, r.lines().count()));
    let r = validate_a_infinity(&set.identity_aa, SequencePool::SupportClosure);
    push("identity A-infinity", r.is_valid(), format!("{} instances, {} violations", r.checked, r.lines().count()));
    let r = validate_a_infinity(&set.cfaa_y_b3_reference, SequencePool::SupportClosure);
    push("cfaa A-infinity", r.is_valid(), format!("{} instances, {} violations", r.checked, r.lines().count()));

    for (name, s) in [("cfdd counts", &set.cfdd_y_b3), ("cfaa counts", &set.cfaa_y_b3_reference)] {
        let (b, a) = (bucket_counts(s), alexander_triple(s));
        push(name, s.len() == 19 && b == [7, 4, 4, 4] && a == [1, 9, 9], format!("buckets {b:?}, alexander {a:?}"));
    }

    use Idempotent::*;
    let want = [("w1", [I1, I0]), ("w2", [I1, I0]), ("z1", [I0, I1]), ("z2", [I0, I1]), ("x", [I0, I0]), ("y", [I1, I1])];
    let ok = set.identity_aa.len() == 6
        && want.iter().all(|(n, i)| set.identity_aa.generator(n).is_some_and(|g| g.idempotents == i && g.alexander == 0));
    push("identity generators", ok, format!("{} generators", set.identity_aa.len()));

    match prune_reference(&set.cfaa_y_b3_reference) {
        Ok(p) => {
            let mut diffs = Vec::new();
            for (a, b) in PRUNED_BLOCKS {
                if block(&p, a, b) != block(&set.cfaa_y_b3_pruned_blocks, a, b) {
                    diffs.push(format!("{a}{b}"));
                }
            }
            let extra = set.cfaa_y_b3_pruned_blocks.terms().filter(|t| {
                let (a, b) = (set.cfaa_y_b3_pruned_blocks.name(t.src), set.cfaa_y_b3_pruned_blocks.name(t.dst));
                !PRUNED_BLOCKS.iter().any(|(x, y)| a.starts_with(*x) && b.starts_with(*y))
            });
            let extra = extra.count();
            push(
                "pruned blocks",
                diffs.is_empty() && extra == 0,
                if diffs.is_empty() { format!("{} blocks match", PRUNED_BLOCKS.len()) } else { format!("mismatch in {}", diffs.join(", ")) },
            );
        }
        Err(e) => push("pruned blocks", false, e.to_string()),
    }
    out
}
