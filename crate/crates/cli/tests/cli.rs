use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = partseq_cli::run(std::iter::once("partseq").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.display().to_string()
}

#[test]
fn lottery_query_after_two_losers() {
    let (code, out, _) = run(&["prob", "query", &data("lottery100.prob"), "--on", "~p1", "--on", "~p2", "--eps", "1/99", "--query", "p3"]);
    assert_eq!((code, out.as_str()), (0, "1/98\n"));
}

#[test]
fn lottery_third_loser_is_rejected() {
    let f = data("lottery100.prob");
    let (code, out, _) = run(&["prob", "threshold", &f, "--on", "~p1", "--on", "~p2", "--on", "~p3", "--eps", "1/99"]);
    assert_eq!(code, 1);
    assert!(out.contains("condition 3"), "{out}");
    let (code, _, _) = run(&["prob", "threshold", &f, "--on", "~p1", "--on", "~p2", "--eps", "1/100"]);
    assert_eq!(code, 1);
}

#[test]
fn conditional_probabilities() {
    let f = data("pq.prob");
    let (_, p, _) = run(&["prob", "query", &f, "--on", "p -> q", "--on", "p | q", "--query", "p"]);
    let (_, q, _) = run(&["prob", "query", &f, "--on", "p -> q", "--on", "p | q", "--query", "q"]);
    assert_eq!((p.as_str(), q.as_str()), ("2/3\n", "1\n"));
    let (code, _, _) = run(&["prob", "query", &f, "--on", "p & ~p", "--query", "q"]);
    assert_eq!(code, 1);
}

#[test]
fn negative_results_exit_one() {
    assert_eq!(run(&["default", "extensions", &data("self_defeating.dl")]).0, 1);
    assert_eq!(run(&["default", "sequences", &data("self_defeating.dl")]).0, 1);
    assert_eq!(run(&["ael", "expansions", &data("no_expansion.ael")]).0, 1);
    assert_eq!(run(&["ael", "sequences", &data("no_expansion.ael")]).0, 1);
    let (code, out, _) = run(&["poss", "build", &data("clashing.poss")]);
    assert_eq!(code, 1);
    assert!(out.contains("p & q"), "{out}");
}

#[test]
fn positive_results() {
    let (code, out, _) = run(&["default", "extensions", &data("opposing.dl")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("2 extension(s)"), "{out}");
    let (code, out, _) = run(&["poss", "query", &data("graded.poss"), "--query", "p", "--query", "~q"]);
    assert_eq!(code, 0);
    assert_eq!(out, "p: possibility 0.7, necessity 0\n~q: possibility 1, necessity 0\n");
    let (code, out, _) = run(&["worlds", &data("belief_choice.ael")]);
    assert_eq!((code, out.lines().count()), (0, 4));
}

#[test]
fn built_sequences_check_and_explain() {
    for (group, kb) in [("default", "opposing.dl"), ("ael", "belief_choice.ael"), ("poss", "graded.poss")] {
        let cmd = if group == "poss" { "build" } else { "sequences" };
        let (code, out, _) = run(&["--json", group, cmd, &data(kb)]);
        assert_eq!(code, 0);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        for (i, seq) in doc["sequences"].as_array().unwrap().iter().enumerate() {
            let path = scratch(&format!("{group}-{i}.json"), &seq.to_string());
            let (code, out, _) = run(&[group, "check", &data(kb), &path]);
            assert_eq!((code, out.as_str()), (0, "valid\n"), "{group} {i}");
            let (code, out, _) = run(&["explain", &path]);
            assert_eq!(code, 0);
            assert!(out.contains("preference chain"));
        }
    }
}

#[test]
fn failed_check_reports_condition() {
    let seq = r#"{"kind":"default","vocab":["p"],"classes":[[{"assign":{"p":0}}],[{"assign":{"p":1}}]]}"#;
    let path = scratch("bad-default.json", seq);
    let kb = scratch("fact-p.dl", "fact: p\n");
    assert_eq!(run(&["default", "check", &kb, &path]).0, 0);
    let swapped = r#"{"kind":"default","vocab":["p"],"classes":[[{"assign":{"p":1}}],[{"assign":{"p":0}}]]}"#;
    let path = scratch("swapped-default.json", swapped);
    let (code, out, _) = run(&["default", "check", &kb, &path]);
    assert_eq!(code, 1);
    assert!(out.contains("condition 1"), "{out}");
}

#[test]
fn parse_and_usage_errors() {
    let (code, _, err) = run(&["prob", "query", &data("pq.prob"), "--on", "p &", "--query", "p"]);
    assert_eq!(code, 2);
    assert!(err.contains("1:4"), "{err}");
    let bad = scratch("bad.dl", "rule r: true : p / p\n");
    let (code, _, err) = run(&["default", "extensions", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains(":1:16:"), "{err}");
    assert_eq!(run(&["prob", "query", &data("pq.prob"), "--on", "p", "--query", "zz"]).0, 2);
    assert_eq!(run(&["explain", &bad]).0, 2);
    assert_eq!(run(&["prob", "threshold", &data("pq.prob"), "--on", "p", "--eps", "1"]).0, 3);
    assert_eq!(run(&["worlds", "/no/such/file.dl"]).0, 3);
    assert_eq!(run(&["worlds", &data("pq.prob").replace(".prob", ".txt")]).0, 3);
    assert_eq!(run(&["frobnicate"]).0, 3);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "default", "sequences", &data("opposing.dl")];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let doc: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(doc["command"], "default sequences");
    assert_eq!(doc["result"]["count"], 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_partseq");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap().status.code();
    assert_eq!(status(&["ael", "expansions", &data("belief_choice.ael")]), Some(0));
    assert_eq!(status(&["ael", "expansions", &data("no_expansion.ael")]), Some(1));
    assert_eq!(status(&["bogus"]), Some(3));
}
