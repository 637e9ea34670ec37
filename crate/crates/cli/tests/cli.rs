use std::fs;

use metagame_cli::dispatch;

#[test]
fn exit_codes() {
    assert_eq!(dispatch(["metagame", "--help"]), 0);
    assert_eq!(dispatch(["metagame", "frobnicate"]), 1);
    assert_eq!(dispatch(["metagame", "ingest", "--input", "/nonexistent/corpus.csv"]), 2);
}

#[test]
fn sweep_requires_output_directory() {
    assert_eq!(dispatch(["metagame", "sweep", "--experiments-per-cell", "1"]), 1);
}

#[test]
fn simulate_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.csv");
    let coef = dir.path().join("coef.json");
    let code = dispatch([
        "metagame",
        "--seed",
        "5",
        "--out",
        corpus.to_str().unwrap(),
        "simulate",
        "--families",
        "negotiation",
        "--roster-size",
        "3",
        "--games-per-cell",
        "3",
    ]);
    assert_eq!(code, 0);
    let code = dispatch([
        "metagame",
        "--out",
        coef.to_str().unwrap(),
        "fit",
        "--input",
        corpus.to_str().unwrap(),
        "--family",
        "negotiation",
    ]);
    assert_eq!(code, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&coef).unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    fs::write(&config, "[sweep]\nexperiment_per_cell = 3\n").unwrap();
    let out = dir.path().join("out");
    let code = dispatch(["metagame", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap(), "sweep"]);
    assert_ne!(code, 0);
}

#[test]
fn bare_boolean_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("expand.json");
    let args = ["metagame", "--out", out.to_str().unwrap(), "expand", "--coefficients", "@poisoned-apple"];
    assert_eq!(dispatch(args.into_iter().chain(["--techs", "A,B,C,D", "--add", "E", "--strict"])), 0);
    assert_eq!(dispatch(args.into_iter().chain(["--techs", "A,B,C,D", "--add", "E", "--strict", "false"])), 0);
}
