//! Golden outputs of the `mfpush` binary: byte-identical stdout (and stderr
//! for failures) and the expected exit code. `UPDATE_GOLDEN=1` rewrites them.

mod common;

use common::{check_case, crate_dir, run_case, CASES};

#[test]
fn golden_outputs() {
    let failures: Vec<String> = CASES
        .iter()
        .filter_map(|(name, args, code)| check_case(name, args, *code).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn json_and_text_carry_the_same_numbers() {
    for args in [
        &["milnor", "fixtures/cubic.mf"][..],
        &["euler", "fixtures/cubic.mf", "L", "S"],
        &["knorrer", "fixtures/x_cubed.mf"],
        &["fuse", "fixtures/kernels.mf", "F", "E"],
    ] {
        let (_, text, _) = run_case(args);
        let mut with_json = args.to_vec();
        with_json.push("--json");
        let (_, json, _) = run_case(&with_json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = v.as_object().unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(obj.len(), lines.len(), "{args:?}");
        for ((k, val), line) in obj.iter().zip(lines) {
            let (tk, tv) = line.split_once(": ").unwrap();
            assert_eq!(k, tk);
            let flat = match val {
                serde_json::Value::String(s) => s.clone(),
                serde_json::Value::Array(a) if a.iter().all(|x| !x.is_array()) => {
                    a.iter().map(|x| x.as_str().map_or(x.to_string(), str::to_string)).collect::<Vec<_>>().join(", ")
                }
                serde_json::Value::Array(_) => {
                    let a: Vec<Vec<String>> = serde_json::from_value(val.clone()).unwrap();
                    format!("[{}]", a.iter().map(|r| format!("[{}]", r.join(", "))).collect::<Vec<_>>().join(", "))
                }
                other => other.to_string(),
            };
            assert_eq!(flat, tv, "{args:?} field {k}");
        }
    }
}

#[test]
fn documents_round_trip_through_the_binary() {
    let tmp = std::env::temp_dir().join(format!("mfpush-roundtrip-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    for f in ["knorrer_k", "koszul_xy", "cubic", "x_cubed", "kernels", "point"] {
        let src = crate_dir().join("fixtures").join(format!("{f}.mf"));
        let text = std::fs::read_to_string(&src).unwrap();
        let doc = mfpush_cli::MFDocument::parse(&text, Default::default()).unwrap();
        assert_eq!(doc.to_text(), text, "{f} is not canonical");
        let json = tmp.join(format!("{f}.json"));
        std::fs::write(&json, doc.to_json()).unwrap();
        let back = mfpush_cli::MFDocument::parse(&std::fs::read_to_string(&json).unwrap(), Default::default()).unwrap();
        assert_eq!(back.to_text(), text);
        let (c, out, _) = run_case(&["check", json.to_str().unwrap()]);
        assert_eq!(c, 0);
        assert!(out.contains("verified"));
    }
    let out = tmp.join("dual.mf");
    let (c, stdout, _) = run_case(&["dual", "fixtures/koszul_xy.mf", "--out", out.to_str().unwrap()]);
    assert_eq!((c, stdout.as_str()), (0, ""));
    let (c, _, _) = run_case(&["check", out.to_str().unwrap()]);
    assert_eq!(c, 0);
    std::fs::remove_dir_all(&tmp).unwrap();
}
