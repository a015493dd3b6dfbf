//! Shared inputs for the criterion benches.

use borderfloer::{build_cfd, builtin_model, BorderedStructure, CfkModel, FramedComplement};

pub fn model(name: &str) -> CfkModel {
    builtin_model(name).expect("built-in model")
}

/// The two knot-complement factors of D_{J,s}(K,t).
pub fn factors(j: &CfkModel, s: i32, k: &CfkModel, t: i32) -> (BorderedStructure, BorderedStructure) {
    let jd = build_cfd(&FramedComplement { model: j, framing: s, side_label: "rho" }).expect("valid model");
    let kd = build_cfd(&FramedComplement { model: k, framing: t, side_label: "sigma" }).expect("valid model");
    (jd, kd)
}
