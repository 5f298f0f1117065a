use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hlevel_core::check::{AxiomPolicy, Options};
use hlevel_core::report::EntryStatus;
use hlevel_corpus::mutation::Mutation;
use hlevel_oracle::model::FinBij;
use serde_json::Value;

fn hlevel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hlevel"))
        .args(args)
        .output()
        .expect("run hlevel")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn committed(rel: &str) -> String {
    root().join("corpus").join(rel).display().to_string()
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.display().to_string()
}

fn schema() -> Value {
    let text = std::fs::read_to_string(root().join("docs/report-schema.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Validates `v` against the subset of JSON Schema the report schema uses:
/// `type`, `enum`, `required`, `properties`, `additionalProperties`,
/// `items`, `minimum`, `pattern` (only `^[a-z]+(-[a-z]+)*$`) and local `$ref`.
fn violations(root: &Value, s: &Value, v: &Value, at: &str, out: &mut Vec<String>) {
    if let Some(r) = s["$ref"].as_str() {
        let name = r.strip_prefix("#/$defs/").expect("local reference");
        return violations(root, &root["$defs"][name], v, at, out);
    }
    let type_ok = |t: &str| match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_u64() || v.is_i64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        other => panic!("unsupported type {other}"),
    };
    let types: Vec<&str> = match &s["type"] {
        Value::String(t) => vec![t.as_str()],
        Value::Array(ts) => ts.iter().filter_map(Value::as_str).collect(),
        _ => Vec::new(),
    };
    if !types.is_empty() && !types.iter().any(|t| type_ok(t)) {
        out.push(format!("{at}: expected {types:?}, got {v}"));
        return;
    }
    if let Some(options) = s["enum"].as_array() {
        if !options.contains(v) {
            out.push(format!("{at}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s["minimum"].as_f64(), v.as_f64()) {
        if x < min {
            out.push(format!("{at}: {x} < {min}"));
        }
    }
    if let (Some(p), Some(x)) = (s["pattern"].as_str(), v.as_str()) {
        assert_eq!(p, "^[a-z]+(-[a-z]+)*$", "unsupported pattern");
        let kebab = !x.is_empty() && x.split('-').all(|w| !w.is_empty() && w.bytes().all(|b| b.is_ascii_lowercase()));
        if !kebab {
            out.push(format!("{at}: {x:?} does not match {p}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in s["required"].as_array().into_iter().flatten() {
            if !obj.contains_key(key.as_str().unwrap()) {
                out.push(format!("{at}: missing {key}"));
            }
        }
        for (k, x) in obj {
            match s["properties"].get(k) {
                Some(sub) => violations(root, sub, x, &format!("{at}.{k}"), out),
                None if s["additionalProperties"] == Value::Bool(false) => out.push(format!("{at}: unexpected {k}")),
                None => {}
            }
        }
    }
    if let (Some(items), Some(xs)) = (s.get("items"), v.as_array()) {
        for (i, x) in xs.iter().enumerate() {
            violations(root, items, x, &format!("{at}[{i}]"), out);
        }
    }
}

/// Parses a JSON report stream, validating every line against the schema.
fn reports(o: &Output) -> Vec<Value> {
    let s = schema();
    stdout(o)
        .lines()
        .map(|line| {
            let r: Value = serde_json::from_str(line).unwrap_or_else(|e| panic!("{e}: {line}"));
            let mut errors = Vec::new();
            violations(&s, &s, &r, "$", &mut errors);
            assert!(errors.is_empty(), "{errors:?}\n{line}");
            r
        })
        .collect()
}

#[test]
fn the_validator_rejects_bad_reports() {
    let s = schema();
    let good: Value = serde_json::from_str(r#"{"file":"f","declarations":[],"totals":{"total":0,"ok":0,"failed":0,"ms":null}}"#).unwrap();
    let mut errors = Vec::new();
    violations(&s, &s, &good, "$", &mut errors);
    assert!(errors.is_empty(), "{errors:?}");
    for bad in [
        r#"{"file":"f","declarations":[]}"#,
        r#"{"file":"f","declarations":[],"totals":{"total":-1,"ok":0,"failed":0,"ms":null}}"#,
        r#"{"file":"f","declarations":[{"name":"x","status":"maybe","paper_ref":null,"ms":null}],"totals":{"total":1,"ok":0,"failed":1,"ms":null}}"#,
        r#"{"file":"f","declarations":[],"totals":{"total":0,"ok":0,"failed":0,"ms":null},"extra":1}"#,
        r#"{"file":"f","declarations":[],"totals":{"total":0,"ok":0,"failed":0,"ms":null},"error":{"code":"Bad Code","message":""}}"#,
    ] {
        let mut errors = Vec::new();
        violations(&s, &s, &serde_json::from_str(bad).unwrap(), "$", &mut errors);
        assert!(!errors.is_empty(), "accepted {bad}");
    }
}

/// Reports with every timing field cleared.
fn untimed(mut rs: Vec<Value>) -> Vec<Value> {
    for r in &mut rs {
        r["totals"]["ms"] = Value::Null;
        for d in r["declarations"].as_array_mut().unwrap() {
            d["ms"] = Value::Null;
        }
    }
    rs
}

const ARITH: &str = "def swap (b : Two) : Two := twoelim [_. Two] 1_2 0_2 b\n\
                     def swap_swap_one : Two := swap (swap 1_2)\n\
                     def add (m n : Nat) : Nat := natrec [_. Nat] m [k r. suc r] n\n\
                     def two_plus_two : Nat := add 2 2\n\
                     axiom ua_x (A : U0) : Id U0 A A\n\
                     def stuck : Id U0 Two Two := ua_x Two\n";

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let prelude: Vec<String> = ["paths", "equiv", "axioms", "trunc"]
        .iter()
        .map(|f| committed(&format!("prelude/{f}.hott")))
        .collect();
    let mut args = vec!["check"];
    args.extend(prelude.iter().map(String::as_str));
    assert_eq!(code(&hlevel(&args)), 0);

    let bad = write(dir.path(), "bad.hott", "goal g : U0 := U0\n");
    assert_eq!(code(&hlevel(&["check", &bad])), 1);

    let missing = dir.path().join("missing.hott").display().to_string();
    assert_eq!(code(&hlevel(&["check", &missing])), 2);

    let broken = write(dir.path(), "broken.hott", "def x : Two := (0_2\n");
    let out = hlevel(&["check", &broken]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("broken.hott:1:"), "{}", stdout(&out));
}

#[test]
fn normalize_prints_normal_forms() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "arith.hott", ARITH);
    for (name, nf) in [("swap_swap_one", "1₂"), ("two_plus_two", "4"), ("stuck", "ua_x Two")] {
        let out = hlevel(&["normalize", &f, "--name", name]);
        assert_eq!(code(&out), 0);
        assert_eq!(stdout(&out).lines().last(), Some(nf), "{name}");
    }
    assert_eq!(code(&hlevel(&["normalize", &f, "--name", "nope"])), 1);
}

#[test]
fn gen_is_idempotent_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c").display().to_string();
    assert_eq!(code(&hlevel(&["gen", "--level", "1", "--out", &out])), 0);
    let first = std::fs::read(dir.path().join("c/generated/level-1/commuting-loops.hott")).unwrap();
    assert_eq!(code(&hlevel(&["gen", "--level", "1", "--out", &out])), 0);
    let second = std::fs::read(dir.path().join("c/generated/level-1/commuting-loops.hott")).unwrap();
    assert_eq!(first, second);
    assert!(!dir.path().join("c/generated/level-2").exists());

    assert_eq!(code(&hlevel(&["check", &out])), 0);
    let unsupported = hlevel(&["--format", "json", "gen", "--level", "3", "--out", &out]);
    assert_eq!(code(&unsupported), 2);
    assert_eq!(reports(&unsupported)[0]["error"]["code"], "unsupported-level");
}

#[test]
fn oracle_exit_codes_and_selection() {
    assert_eq!(code(&hlevel(&["oracle", "--bound", "4"])), 0);

    let one = hlevel(&["--format", "json", "oracle", "--suite", "transport-conjugation"]);
    assert_eq!(code(&one), 0);
    let r = reports(&one);
    let names: Vec<&str> = r[0]["declarations"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["transport-conjugation"]);

    let over = hlevel(&["--format", "json", "oracle", "--bound", "99"]);
    assert_eq!(code(&over), 2);
    assert_eq!(reports(&over)[0]["error"]["code"], "bound-exceeded");

    let unknown = hlevel(&["--format", "json", "oracle", "--suite", "nope"]);
    assert_eq!(code(&unknown), 2);
    assert_eq!(reports(&unknown)[0]["error"]["code"], "unknown-suite");
}

#[test]
fn every_json_outcome_matches_the_schema() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(dir.path(), "ok.hott", ARITH);
    let rejected = write(dir.path(), "rej.hott", "--| deliberately wrong\ngoal g : Id Two 0_2 1_2 := refl 0_2\n");
    let broken = write(dir.path(), "broken.hott", "def := \n");
    let missing = dir.path().join("missing.hott").display().to_string();
    let out = dir.path().join("c").display().to_string();
    let runs: Vec<Vec<&str>> = vec![
        vec!["check", &ok],
        vec!["check", &rejected],
        vec!["check", &broken],
        vec!["check", &missing],
        vec!["gen", "--level", "0", "--out", &out],
        vec!["gen", "--level", "9", "--out", &out],
        vec!["oracle"],
        vec!["oracle", "--bound", "6"],
        vec!["oracle", "--suite", "x"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend(args.iter().copied());
        let o = hlevel(&full);
        let rs = reports(&o);
        assert!(!rs.is_empty(), "{args:?} printed nothing");
    }
    let rej = hlevel(&["--format", "json", "check", &rejected]);
    let r = &reports(&rej)[0];
    assert_eq!(r["declarations"][0]["paper_ref"], "deliberately wrong");
    assert_eq!(r["declarations"][0]["diagnostic"]["code"], "endpoint-mismatch");
    assert_eq!(r["declarations"][0]["diagnostic"]["line"], 2);
}

#[test]
fn end_to_end_runs_are_reproducible() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("corpus").display().to_string();
        let mut all = reports(&hlevel(&["--format", "json", "gen", "--level", "2", "--out", &out]));
        // Written paths mention the temporary directory.
        for r in &mut all {
            r["file"] = Value::Null;
            for d in r["declarations"].as_array_mut().unwrap() {
                let name = d["name"].as_str().unwrap().to_string();
                d["name"] = Value::String(name.replacen(&out, "", 1));
            }
        }
        let checked = reports(&hlevel(&["--format", "json", "check", &out]));
        for mut r in checked {
            r["file"] = Value::String(r["file"].as_str().unwrap().replacen(&out, "", 1));
            all.push(r);
        }
        all.extend(reports(&hlevel(&["--format", "json", "oracle"])));
        untimed(all)
    };
    assert_eq!(run(), run());
}

/// A swap or beta that the oracle rejects is exactly one that the corpus
/// rejects, and the genuine ones pass both.
#[test]
fn oracle_and_corpus_agree_on_mutations() {
    fn corpus_accepts(m: Option<Mutation>, target: &str) -> bool {
        let mut files = hlevel_corpus::corpus(1).unwrap();
        if let Some(m) = m {
            assert!(m.apply(&mut files));
        }
        hlevel_corpus::check_files(&files, Options::default(), AxiomPolicy::default())
            .iter()
            .flat_map(|r| &r.declarations)
            .any(|e| e.name == target && e.status == EntryStatus::Accepted)
    }
    let swap_ok = hlevel_oracle::check_bijections_with(4, &FinBij::swap()).passed();
    let swap_id_ok = hlevel_oracle::check_bijections_with(4, &FinBij::identity(2)).passed();
    assert_eq!(swap_ok, corpus_accepts(None, "universe_not_trunc_0"));
    assert_eq!(swap_id_ok, corpus_accepts(Some(Mutation::SwapIsIdentity), "universe_not_trunc_0"));
    assert!(swap_ok && !swap_id_ok);

    let beta = hlevel_oracle::check_k_witnesses_with(4, hlevel_oracle::alpha_first, hlevel_oracle::beta_first);
    let beta_refl =
        hlevel_oracle::check_k_witnesses_with(4, hlevel_oracle::alpha_first, hlevel_oracle::alpha_first);
    assert_eq!(beta.passed(), corpus_accepts(None, "universe_not_trunc_1"));
    assert_eq!(beta_refl.passed(), corpus_accepts(Some(Mutation::BetaFirstRefl), "universe_not_trunc_1"));
    assert!(beta.passed() && !beta_refl.passed());
}
