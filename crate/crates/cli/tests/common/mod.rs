//! Shared golden-case table and runner for the binary's integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// (name, arguments, exit code)
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("check_k", &["check", "fixtures/knorrer_k.mf"], 0),
    ("check_k_json", &["check", "fixtures/knorrer_k.mf", "--json"], 0),
    ("check_corrupted", &["check", "fixtures/corrupted.mf"], 4),
    ("check_cubic", &["check", "fixtures/cubic.mf"], 0),
    ("chern_koszul_xy", &["chern", "fixtures/koszul_xy.mf"], 0),
    ("chern_cubic_l", &["chern", "fixtures/cubic.mf", "L"], 0),
    ("chern_cubic_l_json", &["chern", "fixtures/cubic.mf", "L", "--json"], 0),
    ("milnor_cubic", &["milnor", "fixtures/cubic.mf"], 0),
    ("milnor_flags_lex", &["milnor", "--potential", "x^3 + x*y^2 + y^4", "--vars", "x,y", "--order", "lex"], 0),
    ("milnor_char7", &["milnor", "--potential", "x^3 + y^3", "--vars", "x,y", "--char", "7", "--json"], 0),
    ("milnor_not_isolated", &["milnor", "--potential", "x^2*y^2", "--vars", "x,y"], 3),
    ("residue_dt", &["residue", "--vars", "y", "--t", "y^3", "--numerator", "1", "--dt"], 0),
    (
        "residue_two_vars",
        &["residue", "--vars", "y1,y2", "--t", "y1^2", "--t", "y2^3", "--numerator", "y1*y2^2"],
        0,
    ),
    (
        "residue_forms",
        &["residue", "--vars", "y1,y2", "--base", "a", "--t", "y1^2 - y2", "--t", "y2^2", "--numerator", "y1 + a", "--r", "y2", "--r", "y1 + y1*y2"],
        0,
    ),
    ("residue_weights", &["residue", "--vars", "y1,y2", "--t", "y1^2", "--t", "y2^3", "--numerator", "y1*y2^2", "--weights", "1/2,1/3"], 0),
    ("euler_cubic", &["euler", "fixtures/cubic.mf", "L", "S"], 0),
    ("cardy_cubic", &["cardy", "fixtures/cubic.mf", "L", "L", "--alpha", "xL"], 0),
    ("dual_k", &["dual", "fixtures/koszul_xy.mf"], 0),
    ("hom_k", &["hom", "fixtures/koszul_xy.mf", "K", "K"], 0),
    ("tensor_k_json", &["tensor", "fixtures/koszul_xy.mf", "K", "K", "--json"], 0),
    ("pushforward_point", &["pushforward", "fixtures/point.mf", "--integrate", "y", "--t", "y^2"], 0),
    ("fuse_quadratic", &["fuse", "fixtures/kernels.mf", "F", "E"], 0),
    ("knorrer_x3", &["knorrer", "fixtures/x_cubed.mf"], 0),
    ("selftest", &["selftest"], 0),
    ("usage_missing_file", &["check"], 1),
    ("usage_unknown_name", &["chern", "fixtures/cubic.mf", "Z"], 1),
    ("parse_error", &["milnor", "--potential", "x^^2", "--vars", "x"], 2),
];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Run the binary from the crate directory; (exit code, stdout, stderr).
pub fn run_case(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mfpush"))
        .args(args)
        .current_dir(crate_dir())
        .env_remove("RUST_BACKTRACE")
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

fn golden_path(name: &str, stream: &str) -> PathBuf {
    crate_dir().join("tests").join("golden").join(format!("{name}.{stream}"))
}

fn read_or_empty(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap_or_default()
}

/// Compare one case against its golden files (or rewrite them); `Err` names the mismatch.
pub fn check_case(name: &str, args: &[&str], code: i32) -> Result<(), String> {
    let (c, out, err) = run_case(args);
    let (c2, out2, err2) = run_case(args);
    if (c, &out, &err) != (c2, &out2, &err2) {
        return Err(format!("{name}: two runs differ"));
    }
    // usage errors print clap's help text, which is not part of the contract
    let err = if code == 1 && args.len() <= 1 { String::new() } else { err };
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(golden_path(name, "stdout"), &out).unwrap();
        let ep = golden_path(name, "stderr");
        if err.is_empty() {
            let _ = std::fs::remove_file(ep);
        } else {
            std::fs::write(ep, &err).unwrap();
        }
    }
    if c != code {
        return Err(format!("{name}: exit code {c}, expected {code}; stderr: {err}"));
    }
    if out != read_or_empty(&golden_path(name, "stdout")) {
        return Err(format!("{name}: stdout differs from golden:\n{out}"));
    }
    if err != read_or_empty(&golden_path(name, "stderr")) {
        return Err(format!("{name}: stderr differs from golden:\n{err}"));
    }
    Ok(())
}
