//! JSON form of [`BorderedStructure`].
//!
//! ```json
//! { "sides": [{"label": "rho", "kind": "D"}],
//!   "generators": [{"name": "x", "idem": {"rho": "i0"}, "alexander": 0}],
//!   "terms": [{"src": "x", "dst": "x", "out": {"rho": "r12"}, "in": {}}] }
//! ```
//!
//! A missing D output means the idempotent arrow, a missing A input means the
//! empty sequence. D outputs may be sums; they are split into atomic terms.
//! Idempotent consistency is left to the validators.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{parse_element, Basis, Chord, Idempotent};
use crate::error::{Error, Result};
use crate::structure::{BorderedStructure, OperationTerm, Payload, SideKind, SideSpec};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub sides: Vec<SideEntry>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideEntry {
    pub label: String,
    pub kind: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorEntry {
    pub name: String,
    #[serde(default)]
    pub idem: BTreeMap<String, String>,
    #[serde(default)]
    pub alexander: i32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub src: String,
    pub dst: String,
    #[serde(default)]
    pub out: BTreeMap<String, String>,
    #[serde(default, rename = "in")]
    pub input: BTreeMap<String, Vec<String>>,
}

pub fn from_json_str(text: &str) -> Result<BorderedStructure> {
    let file: StructureFile = serde_json::from_str(text)?;
    from_file(&file)
}

pub fn from_file(file: &StructureFile) -> Result<BorderedStructure> {
    let mut sides = Vec::new();
    for (i, s) in file.sides.iter().enumerate() {
        let kind = match s.kind.as_str() {
            "A" | "a" => SideKind::A,
            "D" | "d" => SideKind::D,
            other => return Err(Error::Schema(format!("sides[{i}].kind: expected A or D, found `{other}`"))),
        };
        sides.push(SideSpec::new(s.label.clone(), kind));
    }
    let mut s = BorderedStructure::new(sides)?;
    let labels: Vec<String> = s.sides().iter().map(|x| x.label.clone()).collect();

    for (i, g) in file.generators.iter().enumerate() {
        for key in g.idem.keys() {
            if !labels.contains(key) {
                return Err(Error::Schema(format!("generators[{i}] (`{}`).idem: unknown side `{key}`", g.name)));
            }
        }
        let mut idems = Vec::new();
        for l in &labels {
            let tok = g
                .idem
                .get(l)
                .ok_or_else(|| Error::Schema(format!("generators[{i}] (`{}`).idem: missing side `{l}`", g.name)))?;
            idems.push(Idempotent::from_token(tok).map_err(|e| Error::Schema(format!("generators[{i}].idem.{l}: {e}")))?);
        }
        s.add_generator(g.name.clone(), idems, g.alexander)?;
    }

    for (i, t) in file.terms.iter().enumerate() {
        let ctx = |field: &str| format!("terms[{i}] ({} -> {}).{field}", t.src, t.dst);
        let src = s.generator_index(&t.src).map_err(|e| Error::Schema(format!("{}: {e}", ctx("src"))))?;
        let dst = s.generator_index(&t.dst).map_err(|e| Error::Schema(format!("{}: {e}", ctx("dst"))))?;
        for key in t.out.keys().chain(t.input.keys()) {
            if !labels.contains(key) {
                return Err(Error::Schema(format!("{}: unknown side `{key}`", ctx("out/in"))));
            }
        }
        // each D side contributes a list of basis choices; the term is their product
        let mut choices: Vec<Vec<Payload>> = Vec::new();
        for (k, side) in s.sides().iter().enumerate() {
            let (si, di) = (s.generators()[src].idempotents[k], s.generators()[dst].idempotents[k]);
            match side.kind {
                SideKind::D => {
                    if t.input.contains_key(&side.label) {
                        return Err(Error::Schema(format!("{}: side `{}` is of kind D", ctx("in"), side.label)));
                    }
                    let elt = match t.out.get(&side.label) {
                        Some(tok) => parse_element(tok).map_err(|e| Error::Schema(format!("{}: {e}", ctx("out"))))?,
                        None => Basis::Idem(si).into(),
                    };
                    let mut opts = Vec::new();
                    for b in elt.terms() {
                        // an element token like `1` contributes only its summand matching the idempotents
                        if b.is_idempotent() && elt.terms().count() > 1 && b.idempotents() != (si, di) {
                            continue;
                        }
                        opts.push(Payload::Out(b));
                    }
                    choices.push(opts);
                }
                SideKind::A => {
                    if t.out.contains_key(&side.label) {
                        return Err(Error::Schema(format!("{}: side `{}` is of kind A", ctx("out"), side.label)));
                    }
                    let seq = match t.input.get(&side.label) {
                        Some(toks) => toks
                            .iter()
                            .map(|x| Chord::from_token(x))
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| Error::Schema(format!("{}: {e}", ctx("in"))))?,
                        None => Vec::new(),
                    };
                    choices.push(vec![Payload::In(seq)]);
                }
            }
        }
        let mut payloads: Vec<Vec<Payload>> = vec![Vec::new()];
        for opts in choices {
            payloads = payloads
                .into_iter()
                .flat_map(|p| {
                    opts.iter().map(move |o| {
                        let mut q = p.clone();
                        q.push(o.clone());
                        q
                    })
                })
                .collect();
        }
        for p in payloads {
            s.toggle_term(OperationTerm::new(src, dst, p));
        }
    }
    Ok(s)
}

pub fn to_file(s: &BorderedStructure, description: Option<String>) -> StructureFile {
    let sides = s
        .sides()
        .iter()
        .map(|x| SideEntry { label: x.label.clone(), kind: x.kind.token().to_string() })
        .collect();
    let generators = s
        .generators()
        .iter()
        .map(|g| GeneratorEntry {
            name: g.name.clone(),
            idem: s.sides().iter().zip(&g.idempotents).map(|(x, i)| (x.label.clone(), i.token().to_string())).collect(),
            alexander: g.alexander,
        })
        .collect();
    let terms = s
        .terms()
        .map(|t| {
            let mut out = BTreeMap::new();
            let mut input = BTreeMap::new();
            for (side, p) in s.sides().iter().zip(&t.payload) {
                match p {
                    Payload::Out(b) => {
                        out.insert(side.label.clone(), b.token().to_string());
                    }
                    Payload::In(seq) => {
                        input.insert(side.label.clone(), seq.iter().map(|c| c.token().to_string()).collect());
                    }
                }
            }
            TermEntry { src: s.name(t.src).to_string(), dst: s.name(t.dst).to_string(), out, input }
        })
        .collect();
    StructureFile { description, sides, generators, terms }
}

pub fn to_json_string(s: &BorderedStructure) -> String {
    serde_json::to_string_pretty(&to_file(s, None)).expect("structure serializes")
}

pub fn load_structure(path: impl AsRef<Path>) -> Result<BorderedStructure> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
    from_json_str(&text).map_err(|e| match e {
        Error::Io { .. } => e,
        other => Error::Schema(format!("{}: {other}", path.display())),
    })
}

pub fn save_structure(s: &BorderedStructure, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = to_json_string(s);
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
