//! End-to-end coverage of the command-line interface: every subcommand is
//! exercised through the compiled binary, including the full
//! generate / reason / eval / report loop on the standard case matrix.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn manifest_path(relative: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(relative)
}

fn arkon() -> Command {
    Command::new(env!("CARGO_BIN_EXE_arkon"))
}

fn run(args: &[&str]) -> Output {
    arkon().args(args).output().expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("stderr is utf-8")
}

fn generate_standard_matrix(out: &Path) {
    let output = run(&[
        "generate",
        "--preset",
        "standard",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
}

#[test]
fn help_and_version_exit_zero() {
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let text = stdout_of(&help);
    for subcommand in ["generate", "reason", "translate", "eval", "report", "selftest"] {
        assert!(text.contains(subcommand), "help is missing {subcommand}");
    }
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let output = arkon().output().expect("binary runs");
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn generate_preset_emits_the_standard_matrix() {
    let dir = tempfile::tempdir().unwrap();
    generate_standard_matrix(dir.path());
    let mut case_dirs: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|entry| entry.unwrap().file_name().into_string().unwrap())
        .collect();
    case_dirs.sort();
    assert_eq!(case_dirs.len(), 32);
    assert!(case_dirs.contains(&"chain_8_minus_rand_0".to_owned()));
    assert!(case_dirs.contains(&"hierarchies_2_4_plus_seq_31".to_owned()));
    for case_dir in &case_dirs {
        for file in ["theory.dfl", "knowledge.txt", "meta.json"] {
            assert!(
                dir.path().join(case_dir).join(file).is_file(),
                "{case_dir} is missing {file}"
            );
        }
    }
}

#[test]
fn generate_single_case_encodes_the_setting_in_its_directory() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "generate",
        "--family",
        "chain",
        "--n",
        "3",
        "--polarity",
        "minus",
        "--ordering",
        "rand",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let case_dir = dir.path().join("chain_3_minus_rand_7");
    assert!(case_dir.is_dir());
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(case_dir.join("meta.json")).unwrap())
            .unwrap();
    assert_eq!(meta["expected"], "undetermined");
    assert_eq!(meta["query"], "A0000000");
}

#[test]
fn generate_rejects_branching_families_without_k() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "generate",
        "--family",
        "dag",
        "--n",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).starts_with("error: "));
}

#[test]
fn generate_rejects_unknown_families() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "generate",
        "--family",
        "spiral",
        "--n",
        "3",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn reason_agrees_with_every_generated_meta() {
    let dir = tempfile::tempdir().unwrap();
    generate_standard_matrix(dir.path());
    let mut checked = 0;
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let case_dir = entry.unwrap().path();
        let meta: serde_json::Value = serde_json::from_str(
            &std::fs::read_to_string(case_dir.join("meta.json")).unwrap(),
        )
        .unwrap();
        let output = run(&[
            "reason",
            case_dir.join("theory.dfl").to_str().unwrap(),
            "--query",
            meta["query"].as_str().unwrap(),
            "--json",
        ]);
        assert!(output.status.success(), "{}", stderr_of(&output));
        let answer: serde_json::Value = serde_json::from_str(&stdout_of(&output)).unwrap();
        assert_eq!(
            answer["verdict"], meta["expected"],
            "verdict mismatch in {}",
            case_dir.display()
        );
        checked += 1;
    }
    assert_eq!(checked, 32);
}

#[test]
fn reason_prints_a_tag_line_per_family() {
    let golden = manifest_path("goldens/chain_2.dfl");
    let output = run(&["reason", golden.to_str().unwrap(), "--query", "A0000000"]);
    assert!(output.status.success());
    assert_eq!(stdout_of(&output), "-D A0000000\n+d A0000000\n");

    let negated = run(&["reason", golden.to_str().unwrap(), "--query", "-A0000000"]);
    assert!(negated.status.success());
    assert_eq!(stdout_of(&negated), "-D -A0000000\n-d -A0000000\n");
}

#[test]
fn reason_without_a_query_lists_the_whole_universe() {
    let golden = manifest_path("goldens/chain_2.dfl");
    let output = run(&["reason", golden.to_str().unwrap()]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    for literal in ["A0000000", "A0000001", "A0000002"] {
        assert!(text.contains(&format!("+d {literal}")), "missing +d {literal}");
    }
    assert!(text.contains("+D A0000002"));
}

#[test]
fn reason_explain_prints_a_replayable_derivation() {
    let golden = manifest_path("goldens/chain_2.dfl");
    let output = run(&[
        "reason",
        golden.to_str().unwrap(),
        "--query",
        "A0000000",
        "--explain",
    ]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.starts_with("1. "), "derivations are numbered from 1");
    assert!(text.lines().last().unwrap().contains("+d A0000000"));
}

#[test]
fn reason_explain_fails_on_undetermined_queries() {
    let golden = manifest_path("goldens/circle_2.dfl");
    let output = run(&[
        "reason",
        golden.to_str().unwrap(),
        "--query",
        "A0000000",
        "--explain",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("A0000000"));
}

#[test]
fn reason_reports_parse_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.dfl");
    std::fs::write(&path, "this is not a theory\n").unwrap();
    let output = run(&["reason", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_of(&output).contains("does not parse"));
}

#[test]
fn translate_reproduces_every_golden_rendering() {
    let goldens = manifest_path("goldens");
    let mut checked = 0;
    for entry in std::fs::read_dir(&goldens).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("dfl") {
            continue;
        }
        let expected = std::fs::read_to_string(path.with_extension("txt")).unwrap();
        let output = run(&["translate", path.to_str().unwrap()]);
        assert!(output.status.success(), "{}", stderr_of(&output));
        assert_eq!(stdout_of(&output), expected, "mismatch for {}", path.display());
        checked += 1;
    }
    assert!(checked >= 8, "expected a golden per family, found {checked}");
}

#[test]
fn translate_honors_noun_and_article_flags() {
    let golden = manifest_path("goldens/chain_2.dfl");
    let output = run(&[
        "translate",
        golden.to_str().unwrap(),
        "--noun",
        "Blip",
        "--article",
        "a",
    ]);
    assert!(output.status.success());
    let text = stdout_of(&output);
    assert!(text.contains("A0000002 is a Blip."));
    assert!(!text.contains("Arkon"));
}

#[test]
fn offline_eval_writes_records_and_report_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases");
    generate_standard_matrix(&cases);
    let config = manifest_path("config/harness.example.toml");
    let fixtures = manifest_path("fixtures/transcripts");

    let eval = |out: &Path| {
        let output = run(&[
            "eval",
            "--cases",
            cases.to_str().unwrap(),
            "--config",
            config.to_str().unwrap(),
            "--offline",
            fixtures.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "{}", stderr_of(&output));
        output
    };

    let first_out = dir.path().join("run1");
    let first = eval(&first_out);
    let table = stdout_of(&first);
    assert!(table.contains("Theory"));
    for row in [
        "chain(8)", "chains(8)", "circle(8)", "circles(8)",
        "dag(3,2)", "levels-(5)", "levels(5)", "hierarchies(2,4)",
    ] {
        assert!(table.contains(row), "table is missing the {row} row");
    }

    let records = std::fs::read_to_string(first_out.join("records.jsonl")).unwrap();
    assert_eq!(records.lines().count(), 32);
    assert!(!records.contains("timestamp"), "offline records carry no timestamps");
    let csv = std::fs::read_to_string(first_out.join("report.csv")).unwrap();
    assert!(csv.starts_with("theory,-d-rand,+d-rand,-d-seq,+d-seq\n"));

    let second_out = dir.path().join("run2");
    eval(&second_out);
    let replay = std::fs::read_to_string(second_out.join("records.jsonl")).unwrap();
    assert_eq!(records, replay, "offline records are bit-reproducible");

    let report = run(&["report", "--run", first_out.to_str().unwrap()]);
    assert!(report.status.success());
    assert_eq!(stdout_of(&report), table);

    let report_csv = run(&["report", "--run", first_out.to_str().unwrap(), "--csv"]);
    assert!(report_csv.status.success());
    assert_eq!(stdout_of(&report_csv), csv);
}

#[test]
fn eval_offline_fails_cleanly_when_cases_are_missing() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "eval",
        "--cases",
        dir.path().to_str().unwrap(),
        "--config",
        manifest_path("config/harness.example.toml").to_str().unwrap(),
        "--offline",
        manifest_path("fixtures/transcripts").to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn live_eval_requires_the_configured_credential() {
    let dir = tempfile::tempdir().unwrap();
    let cases = dir.path().join("cases");
    let generated = run(&[
        "generate",
        "--family",
        "chain",
        "--n",
        "2",
        "--out",
        cases.to_str().unwrap(),
    ]);
    assert!(generated.status.success());
    let output = arkon()
        .args([
            "eval",
            "--cases",
            cases.to_str().unwrap(),
            "--config",
            manifest_path("config/harness.example.toml").to_str().unwrap(),
            "--out",
            dir.path().join("out").to_str().unwrap(),
        ])
        .env_remove("ARKON_API_KEY")
        .output()
        .expect("binary runs");
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_of(&output).contains("ARKON_API_KEY"),
        "the error names the credential variable"
    );
}

#[test]
fn report_fails_cleanly_without_records() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&["report", "--run", dir.path().to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_names_each_check() {
    let output = run(&["selftest"]);
    assert!(output.status.success(), "{}", stderr_of(&output));
    let text = stdout_of(&output);
    assert!(text.contains("ok   oracle agreement on family instances"));
    assert!(text.contains("ok   verdict extraction corpus"));
    assert!(!text.contains("FAIL"));
    assert!(text.trim_end().ends_with("checks passed"));
}
