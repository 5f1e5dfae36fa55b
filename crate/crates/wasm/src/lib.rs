//! Browser bindings for the demo page in `www/`.
//!
//! Every export takes plain strings and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use cartheta::car::{build_tau_x, minimal_level, number_operator_spectra, verify_car_relations};
use cartheta::classify::classify_n2;
use cartheta::fibers::fiber_descriptor;
use cartheta::graded::SkewMatrix;
use cartheta::numerics::Real;
use cartheta::Error;
use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

const TOL: f64 = 1e-9;

fn reals(s: &str) -> Result<Vec<Real>, Error> {
    s.split(',').map(|v| v.trim().parse()).collect()
}

/// Upper triangle, row by row: `"t01"` for n = 2, `"t01, t02, t12"` for n = 3.
fn parse_theta(s: &str) -> Result<SkewMatrix, Error> {
    let upper = reals(s)?;
    let n = (2..=6)
        .find(|n| n * (n - 1) / 2 == upper.len())
        .ok_or_else(|| Error::Parse(format!("{} entries is not a strict upper triangle", upper.len())))?;
    let mut values = upper.into_iter();
    Ok(SkewMatrix::from_upper_fn(n, |_, _| values.next().expect("count checked")))
}

fn respond(r: Result<Value, Error>) -> String {
    r.unwrap_or_else(|e| json!({ "error": e.to_string() })).to_string()
}

#[wasm_bindgen]
pub fn fiber(theta: &str, x: &str) -> String {
    respond((|| {
        let d = fiber_descriptor(&parse_theta(theta)?, &reals(x)?)?;
        Ok(serde_json::to_value(d).expect("descriptor serializes"))
    })())
}

/// Builds `τ_x` at level `q` (`0` picks the smallest admissible level) and
/// reports the relation check with each number-operator spectrum.
#[wasm_bindgen]
pub fn spectra(theta: &str, x: &str, q: u32) -> String {
    respond((|| {
        let theta = parse_theta(theta)?;
        let x = reals(x)?;
        let q = if q == 0 { minimal_level(&theta, &x)? } else { u64::from(q) };
        let rep = build_tau_x(&theta, &x, q)?;
        if rep.dim() > 512 {
            return Err(Error::SizeLimit(format!("dimension {} is too large for the page", rep.dim())));
        }
        let relations = verify_car_relations(&rep, TOL);
        let spectra = number_operator_spectra(&rep, TOL)?;
        Ok(json!({
            "q": q,
            "dim": rep.dim(),
            "relationsExact": relations.exact,
            "relationsPass": relations.pass,
            "spectra": spectra,
        }))
    })())
}

/// Pairwise `n = 2` verdicts for a comma-separated list of parameters.
#[wasm_bindgen]
pub fn classify_table(values: &str) -> String {
    respond((|| {
        let thetas = reals(values)?;
        let rows: Vec<Vec<Value>> = thetas
            .iter()
            .map(|&a| {
                thetas
                    .iter()
                    .map(|&b| serde_json::to_value(classify_n2(a, b, TOL).status).expect("status serializes"))
                    .collect()
            })
            .collect();
        Ok(json!({ "values": thetas, "status": rows }))
    })())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(out: String) -> Value {
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn fiber_reports_case() {
        let v = call(fiber("1/3", "1/4, 1/2"));
        assert_eq!(v["caseTag"], 1);
        assert_eq!(v["k0Rank"], 2);
        assert!(call(fiber("1/3, 1/5", "0,0")).get("error").is_some());
    }

    #[test]
    fn spectra_picks_a_level() {
        let v = call(spectra("1/2", "1/2, 1/4", 0));
        assert_eq!(v["relationsExact"], true, "{v}");
        assert_eq!(v["spectra"]["pass"], true);
        assert!(call(spectra("1/2", "0.7, 0", 0)).get("error").is_some());
    }

    #[test]
    fn table_is_symmetric() {
        let v = call(classify_table("1/3, 2/3, 1/4"));
        let s = &v["status"];
        assert_eq!(s[0][1], "ISOMORPHIC");
        assert_eq!(s[0][2], "NOT_ISOMORPHIC");
        assert_eq!(s[2][0], s[0][2]);
        assert!(call(classify_table("1/3, x")).get("error").is_some());
    }
}
