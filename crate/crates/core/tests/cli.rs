mod common;

use asymmetry::cli::run;
use common::fixture;
use serde_json::Value;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn exec(args: &[&str]) -> Out {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("asymmetry".to_string()).chain(args.iter().map(|a| {
        if a.ends_with(".json") && !a.starts_with('/') {
            fixture(a).to_string_lossy().into_owned()
        } else {
            a.to_string()
        }
    }));
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(o: &Out) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(fixture("expected").join(name)).unwrap()
}

#[test]
fn charfn_matches_golden_output() {
    let o = exec(&["charfn", "--rep", "z2_regular_rep.json", "--state", "state_e.json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(o.stdout, golden("charfn_z2.json"));
}

#[test]
fn u1_charfn_samples_match_closed_form() {
    let o = exec(&["charfn", "--rep", "u1_01_rep.json", "--state", "state_plus.json"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    let samples = v["samples"].as_array().unwrap();
    assert_eq!(samples.len(), 8);
    for s in samples {
        let t = s["element"]["theta"].as_f64().unwrap();
        let (re, im) = (s["value"][0].as_f64().unwrap(), s["value"][1].as_f64().unwrap());
        assert!((re - (1.0 + t.cos()) / 2.0).abs() < 1e-12);
        assert!((im - t.sin() / 2.0).abs() < 1e-12);
    }
    assert!(v["reduction"]["n=0"].is_array());
}

#[test]
fn decompose_reports_multiplicities() {
    let o = exec(&["decompose", "--rep", "s3_regular_rep.json"]);
    assert_eq!(o.stdout, golden("decompose_s3.json"));
    let o = exec(&["decompose", "--rep", "u1_011_rep.json"]);
    assert_eq!(o.stdout, golden("decompose_u1.json"));
    let v = json(&exec(&["decompose", "--rep", "s3_regular_rep.json", "--isometries"]));
    let iso = &v["blocks"][2]["isometry"];
    assert_eq!(iso.as_array().unwrap().len(), 6);
    assert_eq!(iso[0].as_array().unwrap().len(), 4);
}

#[test]
fn group_without_irreps_is_a_validation_error() {
    let o = exec(&["decompose", "--rep", "klein_regular_rep.json"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("irrep"), "{}", o.stderr);
}

#[test]
fn parse_errors_name_the_offending_key() {
    let o = exec(&["charfn", "--rep", "z2_regular_rep.json", "--state", "state_missing.json"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("state.amplitudes"), "{}", o.stderr);
    let o = exec(&["charfn", "--rep", "z2_regular_rep.json", "--state", "no_such_file.json"]);
    assert_eq!(o.code, 2);
    assert_eq!(exec(&["frobnicate"]).code, 2);
}

#[test]
fn unnormalized_state_is_a_validation_error() {
    let o = exec(&["charfn", "--rep", "z2_regular_rep.json", "--state", "state_unnormalized.json"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("norm"));
}

#[test]
fn tolerance_overrides_are_checked() {
    let base = ["charfn", "--rep", "z2_regular_rep.json", "--state", "state_e.json"];
    let with = |t: &str| {
        let mut a = vec!["--tol", t];
        a.extend(base);
        exec(&a)
    };
    assert_eq!(with("equality=1e-9").code, 0);
    assert_eq!(with("equality=0.5").code, 3);
    let o = with("bogus=1e-9");
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("unknown tolerance"));
    assert_eq!(with("equality").code, 3);
}

#[test]
fn equiv_exit_codes_follow_the_outcome() {
    let o = exec(&[
        "equiv", "--mode", "unitary", "--rep", "u1_011_rep.json", "--state-a", "planted_a.json", "--state-b", "planted_b.json",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["witness"]["type"], "invariant_unitary");

    let o = exec(&[
        "equiv", "--mode", "gcov", "--rep", "z2_regular_rep.json", "--state-a", "state_plus.json", "--state-b", "state_e.json",
    ]);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["certificate"]["type"], "element");
    assert!(v["certificate"]["detail"].as_str().unwrap().contains("moduli"));

    let o = exec(&[
        "equiv", "--mode", "gcov", "--rep", "z4_diag_rep.json", "--state-a", "z4_twisted.json", "--state-b", "z4_zero.json",
    ]);
    assert_eq!(o.code, 4);
    assert!(json(&o)["reason"].as_str().unwrap().contains("nonvanishing"));

    let o = exec(&[
        "equiv", "--mode", "gcov", "--rep", "u1_012_rep.json", "--state-a", "shift_a.json", "--state-b", "shift_b.json",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["witness"]["charge"], 1);
}

#[test]
fn convert_exit_codes_follow_the_outcome() {
    let o = exec(&[
        "convert", "--rep", "u1_0112_rep.json", "--rep-b", "u1_01_b2_rep.json", "--state-a", "coin_squared.json", "--state-b", "coin.json",
    ]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert_eq!(json(&o)["witness"]["type"], "pd_function");

    let o = exec(&["convert", "--rep", "z2_regular_rep.json", "--state-a", "state_plus.json", "--state-b", "state_tilt.json"]);
    assert_eq!(o.code, 1);
    assert_eq!(json(&o)["certificate"]["type"], "pd_bound");

    let o = exec(&["convert", "--rep", "z4_diag_rep.json", "--state-a", "z4_twisted.json", "--state-b", "z4_zero.json"]);
    assert_eq!(o.code, 4);
    assert_eq!(json(&o)["residuals"]["iterations"].as_f64(), Some(asymmetry::deciders::MAX_ITERATIONS as f64));
}

#[test]
fn asymptotic_reports_rate_and_flags_momentum() {
    let o = exec(&["asymptotic", "--rep", "u1_copies_rep.json", "--state-a", "one_copy.json", "--state-b", "two_copies.json"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout, golden("asymptotic_copies.json"));
    assert!((json(&o)["rate"].as_f64().unwrap() - 0.5).abs() < 1e-8);

    let o = exec(&["asymptotic", "--rep", "su2_half_rep.json", "--state-a", "state_e.json", "--state-b", "state_down.json"]);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["conditions"][2]["holds"], false);
    assert_eq!(v["conditions"][0]["holds"], true);
    assert!(v["overall"]["condition"].as_str().unwrap().starts_with("(iii)"));

    let o = exec(&["asymptotic", "--rep", "z2_regular_rep.json", "--state-a", "state_e.json", "--state-b", "state_e.json"]);
    assert_eq!(o.code, 3);
    assert!(o.stderr.contains("Lie"));
}

#[test]
fn sym_lists_stabilizer() {
    let o = exec(&["sym", "--rep", "z2_regular_rep.json", "--state", "state_plus.json"]);
    assert_eq!(o.stdout, golden("sym_z2.json"));
    let v = json(&exec(&["sym", "--rep", "z2_regular_rep.json", "--state", "state_e.json"]));
    assert_eq!(v["subgroup"]["elements"], serde_json::json!(["g0"]));
}

#[test]
fn verify_accepts_saved_witnesses_and_rejects_mismatched_states() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("v.json");
    let saved = saved.to_str().unwrap();
    let o = exec(&[
        "convert", "--rep", "z4_diag_rep.json", "--state-a", "z4_feasible.json", "--state-b", "z4_zero.json", "--out", saved,
    ]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let check = |a: &str| {
        exec(&["verify", "--verdict", saved, "--rep", "z4_diag_rep.json", "--state-a", a, "--state-b", "z4_zero.json"])
    };
    let ok = check("z4_feasible.json");
    assert_eq!(ok.code, 0);
    assert_eq!(json(&ok)["ok"], true);
    let bad = check("z4_twisted.json");
    assert_eq!(bad.code, 1);
    assert_eq!(json(&bad)["ok"], false);
}

#[test]
fn verify_reruns_negative_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let saved = dir.path().join("no.json");
    let saved = saved.to_str().unwrap();
    let args = ["--rep", "z2_regular_rep.json", "--state-a", "state_plus.json", "--state-b", "state_e.json"];
    let mut cmd = vec!["equiv", "--mode", "gcov", "--out", saved];
    cmd.extend(args);
    assert_eq!(exec(&cmd).code, 1);
    let mut v = vec!["verify", "--verdict", saved];
    v.extend(args);
    let o = exec(&v);
    assert_eq!(o.code, 0);
    assert_eq!(json(&o)["checked"], "re-run of the decider");
}

#[test]
fn text_format_renders_complex_values() {
    let o = exec(&["--format", "text", "charfn", "--rep", "z2_regular_rep.json", "--state", "state_e.json"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("g0: 1.0000000000+0.0000000000i"), "{}", o.stdout);
}

#[test]
fn emitted_json_round_trips_byte_for_byte() {
    for args in [
        vec!["charfn", "--rep", "u1_01_rep.json", "--state", "state_plus.json"],
        vec!["decompose", "--rep", "s3_regular_rep.json", "--isometries"],
        vec!["convert", "--rep", "z2_regular_rep.json", "--state-a", "state_plus.json", "--state-b", "state_tilt.json"],
        vec!["asymptotic", "--rep", "su2_half_rep.json", "--state-a", "state_e.json", "--state-b", "state_down.json"],
    ] {
        let o = exec(&args);
        assert_eq!(asymmetry::io::to_canonical_json(&json(&o)), o.stdout, "{args:?}");
    }
}
