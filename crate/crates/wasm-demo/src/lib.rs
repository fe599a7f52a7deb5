//! Browser bindings: three small operations with plain-text reports.
//! The `*_report` functions are the testable cores; the exported wrappers
//! turn their errors into JavaScript exceptions.

use mfpush::chern::jacobi_frame;
use mfpush::connection::{Grading, TAdicFrame};
use mfpush::convolution::knorrer_round_trip;
use mfpush::mf::MF;
use mfpush::residue::{residue_trace, residue_transform, ResidueQuery};
use mfpush::{Poly, Ring};
use wasm_bindgen::prelude::*;

fn names(list: &str, sep: char) -> Vec<String> {
    list.split(sep).map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

/// μ and a monomial basis of the Jacobi algebra of `potential`.
pub fn milnor_report(potential: &str, vars: &str) -> Result<String, String> {
    let ring = Ring::new(&names(vars, ',')).map_err(|e| e.to_string())?;
    let w = Poly::parse(potential, &ring).map_err(|e| e.to_string())?;
    let qa = jacobi_frame(&w).map_err(|e| e.to_string())?.quotient().clone();
    let basis: Vec<String> = (0..qa.dim()).map(|i| qa.basis_poly(i).to_string()).collect();
    Ok(format!("W = {w}\nμ = {}\nbasis: {}", qa.dim(), basis.join(", ")))
}

/// `Res[s·dy / t]` by the trace formula and by the transformation law;
/// the denominators are separated by `;`.
pub fn residue_report(vars: &str, denominators: &str, numerator: &str) -> Result<String, String> {
    let ys = names(vars, ',');
    let ring = Ring::new(&ys).map_err(|e| e.to_string())?;
    let t: Vec<Poly> = names(denominators, ';')
        .iter()
        .map(|s| Poly::parse(s, &ring))
        .collect::<mfpush::Result<_>>()
        .map_err(|e| e.to_string())?;
    let s = Poly::parse(numerator, &ring).map_err(|e| e.to_string())?;
    let yv: Vec<&str> = ys.iter().map(String::as_str).collect();
    let frame = TAdicFrame::new(&ring, &yv, &t, Grading::Auto).map_err(|e| e.to_string())?;
    let q = ResidueQuery::dy(&frame, s).map_err(|e| e.to_string())?;
    let a = residue_trace(&q).map_err(|e| e.to_string())?;
    let b = residue_transform(&q).map_err(|e| e.to_string())?;
    Ok(format!(
        "μ = {}\ntrace formula: {a}\ntransformation law: {b}\n{}",
        frame.mu(),
        if a == b { "agree" } else { "DISAGREE" }
    ))
}

/// Knörrer round trip of `X = (x^a | x^{d−a})`.
pub fn knorrer_report(a: u32, d: u32) -> Result<String, String> {
    if a == 0 || a >= d {
        return Err(format!("need 1 ≤ a < d, got a = {a}, d = {d}"));
    }
    let r = Ring::new(&["x"]).map_err(|e| e.to_string())?;
    let x = Poly::var(&r, 0);
    let mf = MF::rank_one(&x.pow(a), &x.pow(d - a)).map_err(|e| e.to_string())?;
    let rep = knorrer_round_trip(&mf, "u", "v").map_err(|e| e.to_string())?;
    let iso = rep.iso.as_ref().map_or("none found".to_string(), |p| p.to_string());
    Ok(format!(
        "X = ({} | {})\nmodel ranks: {}|{}\ne strict: {}\ne = 1_X ⊗ [[1,0,0,1],0,0,0]: {}\nsplitting maps: {}\nstripped splitting: {}|{}\nisomorphism to X: {iso}",
        x.pow(a),
        x.pow(d - a),
        rep.model.reduced.r0(),
        rep.model.reduced.r1(),
        rep.model.strict,
        rep.e_matches,
        rep.splitting_maps,
        rep.stripped.r0(),
        rep.stripped.r1(),
    ))
}

#[wasm_bindgen]
pub fn milnor(potential: &str, vars: &str) -> Result<String, JsValue> {
    milnor_report(potential, vars).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn residue(vars: &str, denominators: &str, numerator: &str) -> Result<String, JsValue> {
    residue_report(vars, denominators, numerator).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn knorrer(a: u32, d: u32) -> Result<String, JsValue> {
    knorrer_report(a, d).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn milnor_of_a_cubic() {
        let out = milnor_report("x^3 + y^3", "x, y").unwrap();
        assert!(out.contains("μ = 4"), "{out}");
    }

    #[test]
    fn residue_agrees() {
        let out = residue_report("y1,y2", "y1^2; y2^3", "y1*y2^2").unwrap();
        assert!(out.ends_with("agree"), "{out}");
        assert!(out.contains("trace formula: 1\n"), "{out}");
    }

    #[test]
    fn knorrer_round_trip_reports() {
        let out = knorrer_report(1, 3).unwrap();
        assert!(out.contains("e = 1_X ⊗ [[1,0,0,1],0,0,0]: true"), "{out}");
        assert!(knorrer_report(3, 3).is_err());
        assert!(milnor_report("x^^2", "x").is_err());
    }
}
