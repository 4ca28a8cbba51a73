//! Browser bindings. Every function returns the same JSON the CLI prints
//! with `--json`, or throws the CLI's error message.

use wasm_bindgen::prelude::*;

fn call(args: &[&str]) -> Result<String, String> {
    let out = quadform::cli::run(std::iter::once("quadform").chain(args.iter().copied()).chain(["--json"]));
    if out.stdout.is_empty() {
        Err(out.stderr.trim_end().trim_start_matches("error: ").to_string())
    } else {
        Ok(out.stdout)
    }
}

pub fn witt_json(field: &str, form: &str) -> Result<String, String> {
    call(&["witt", "--field", field, form])
}

pub fn pfister_json(field: &str, form: &str) -> Result<String, String> {
    call(&["pfister", "--field", field, form])
}

pub fn hyp_over_json(field: &str, q: &str, p: &str, seed: u64) -> Result<String, String> {
    let seed = seed.to_string();
    call(&["hyp-over", "--field", field, "--q", q, "--p", p, "--seed", &seed])
}

/// Witt index and anisotropic part.
#[wasm_bindgen]
pub fn witt(field: &str, form: &str) -> Result<String, JsValue> {
    witt_json(field, form).map_err(|e| JsValue::from_str(&e))
}

/// Similarity to a Pfister form.
#[wasm_bindgen]
pub fn pfister(field: &str, form: &str) -> Result<String, JsValue> {
    pfister_json(field, form).map_err(|e| JsValue::from_str(&e))
}

/// Whether `q` becomes hyperbolic over the function field of `p`.
#[wasm_bindgen(js_name = hypOver)]
pub fn hyp_over(field: &str, q: &str, p: &str, seed: u32) -> Result<String, JsValue> {
    hyp_over_json(field, q, p, seed as u64).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_over_laurent() {
        let v: serde_json::Value = serde_json::from_str(&witt_json("Q((x))", "<1,-1> + x*<1,1>").unwrap()).unwrap();
        assert_eq!(v["index"], 1);
        assert_eq!(v["anisotropic_part"], "<x,x>");
    }

    #[test]
    fn errors_are_messages() {
        let e = witt_json("Q", "<1,").unwrap_err();
        assert!(e.starts_with("parse error"), "{e}");
    }

    #[test]
    fn hyp_over_certificate() {
        let v: serde_json::Value = serde_json::from_str(&hyp_over_json("Q", "<1,1,1,1>", "<1,1>", 0).unwrap()).unwrap();
        assert_eq!(v["certificate"]["kind"], "QuadExtDivisibility");
        assert!(pfister_json("Q", "<3,3,3,3>").unwrap().contains("pf(1,1)"));
    }
}
