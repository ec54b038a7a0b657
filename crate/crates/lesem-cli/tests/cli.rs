use std::path::{Path, PathBuf};

use lesem_cli::{run_from, Outcome, EXIT_CAP, EXIT_FALSE, EXIT_OK, EXIT_USAGE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const DIST: &str = "p /\\ (q \\/ r) |- (p /\\ q) \\/ (p /\\ r)";

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Outcome {
    run_from(std::iter::once("lesem").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let out = run(&[args, &["--json"]].concat());
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn lattice_listing_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("plays.dot").display().to_string();
    let out = run(&["lattice", "--context", &fixture("plays.csv"), "--dot", &dot]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("5 concepts\n"));
    let dot = std::fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches("->").count(), 5);

    let empty = write(dir.path(), "empty.csv", "");
    assert!(run(&["lattice", "--context", &empty]).stdout.starts_with("1 concepts\n"));

    let ragged = write(dir.path(), "ragged.csv", ",x,y\na,1\n");
    let out = run(&["lattice", "--context", &ragged]);
    assert_eq!(out.code, EXIT_USAGE);
    assert!(out.stderr.contains("row"));
}

#[test]
fn lattice_count_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..20 {
        let mut csv = String::from(",x0,x1,x2,x3\n");
        let mut rows = vec![];
        for a in 0..4 {
            let row: Vec<bool> = (0..4).map(|_| rng.random_bool(0.5)).collect();
            csv += &format!("a{a},{}\n", row.iter().map(|&b| if b { "1" } else { "0" }).collect::<Vec<_>>().join(","));
            rows.push(row);
        }
        let path = write(dir.path(), &format!("c{i}.csv"), &csv);
        let v = json(&["lattice", "--context", &path]);
        let p = lesem::Polarity::from_fn(4, 4, |a, x| rows[a][x]);
        let oracle = lesem::ConceptLattice::new(&p).unwrap().len();
        assert_eq!(v["concepts"].as_array().unwrap().len(), oracle);
    }
}

#[test]
fn eval_tables() {
    let v = json(&[
        "eval",
        "--frame",
        &fixture("witness.frame.json"),
        "--valuation",
        &fixture("witness.valuation.json"),
        "--formula",
        "p \\/ q",
    ]);
    let row = v["points"].as_array().unwrap().iter().find(|r| r["point"] == "v").unwrap().clone();
    assert_eq!(row["forces"], true);

    let top = json(&["eval", "--frame", &fixture("plays.frame.json"), "--formula", "top"]);
    for r in top["points"].as_array().unwrap() {
        assert_ne!(r["forces"], false);
        assert_ne!(r["refutes"], true);
    }

    let dir = tempfile::tempdir().unwrap();
    let frame = write(
        dir.path(),
        "boxi.json",
        r#"{"kind":"polarity","objects":["a","b","c"],"attributes":["x","y","z"],
            "incidence":[["a","z"],["b","x"],["c","x"],["c","y"]],
            "relations":{"box":[["a","z"],["b","x"],["c","x"],["c","y"]]}}"#,
    );
    let val = fixture("plays.valuation.json");
    for letter in ["d", "h", "r"] {
        let plain = json(&["eval", "--frame", &frame, "--valuation", &val, "--formula", letter]);
        let boxed = json(&["eval", "--frame", &frame, "--valuation", &val, "--formula", &format!("box {letter}")]);
        assert_eq!(plain["points"], boxed["points"]);
    }

    let out = run(&["eval", "--frame", &frame, "--valuation", &val, "--formula", "p"]);
    assert_eq!(out.code, EXIT_USAGE);
    let bad = write(dir.path(), "bad.json", r#"{"p": {"extent": ["b"]}}"#);
    assert_eq!(run(&["eval", "--frame", &frame, "--valuation", &bad, "--formula", "p"]).code, EXIT_USAGE);
}

#[test]
fn validity_verdicts_and_exit_codes() {
    let plays = fixture("plays.frame.json");
    let out = run(&["valid", "--frame", &plays, "--sequent", DIST]);
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.starts_with("INVALID"));
    assert_eq!(run(&["valid", "--frame", &plays, "--sequent", DIST, "--assert"]).code, EXIT_FALSE);
    assert_eq!(run(&["valid", "--frame", &plays, "--sequent", "p |- p", "--assert"]).code, EXIT_OK);
    assert_eq!(run(&["valid", "--frame", &plays, "--sequent", DIST, "--vars", "2"]).code, EXIT_CAP);

    let v = json(&["valid", "--frame", &plays, "--sequent", DIST]);
    assert_eq!(v["valid"], false);
    assert_eq!(v["countermodel"]["assignment"][0], serde_json::json!(["p", "b,c|x"]));

    let witness = fixture("witness.frame.json");
    assert!(run(&["valid", "--frame", &witness, "--sequent", "box p |- p"]).stdout.starts_with("VALID"));
    assert_eq!(run(&["valid", "--frame", &witness, "--sequent", "dia p |- p"]).code, EXIT_USAGE);
}

#[test]
fn property_checks() {
    let witness = fixture("witness.frame.json");
    let out = run(&["check", "--frame", &witness, "--properties", "transitive,antisymmetric"]);
    assert_eq!(out.stdout, "transitive: false\nantisymmetric: true\n");
    assert_eq!(run(&["check", "--frame", &witness, "--properties", "transitive", "--assert"]).code, EXIT_FALSE);
    assert_eq!(run(&["check", "--frame", &witness, "--properties", "nonsense"]).code, EXIT_USAGE);
    assert_eq!(run(&["check", "--frame", &witness, "--properties", "factivity"]).code, EXIT_USAGE);

    let dir = tempfile::tempdir().unwrap();
    let delta = write(
        dir.path(),
        "delta.json",
        r#"{"kind":"graph","nodes":["a","b","c"],"edges":[],
            "relations":{"box":[["a","b"],["b","c"],["a","c"]]}}"#,
    );
    let out = run(&["check", "--frame", &delta, "--properties", "e-transitivity,e-reflexivity,e-omniscience", "--assert"]);
    assert_eq!(out.stdout, "e-transitivity: true\ne-reflexivity: false\ne-omniscience: false\n");
    assert_eq!(out.code, EXIT_FALSE);
    assert!(out.stderr.contains("self-loop"));

    let broken = write(
        dir.path(),
        "broken.json",
        r#"{"kind":"polarity","objects":["a","b","c"],"attributes":["x","y","z"],
            "incidence":[["a","z"],["b","x"],["c","x"],["c","y"]],
            "relations":{"box":[["b","x"]]}}"#,
    );
    let v = json(&["check", "--frame", &broken, "--properties", "compatibility,distributivity"]);
    assert_eq!(v["properties"][0]["holds"], false);
    assert!(!v["properties"][0]["detail"].as_array().unwrap().is_empty());
    assert_eq!(run(&["valid", "--frame", &broken, "--sequent", "p |- p"]).code, EXIT_USAGE);
}

#[test]
fn algebra_frames_are_compatible() {
    let dir = tempfile::tempdir().unwrap();
    let alg = lesem::algebra::LeAlgebra::new(
        lesem::FiniteLattice::n5(),
        lesem::Signature::with_builtins(&["box"]),
        vec![lesem::algebra::OpTable::build(5, 1, |t| t[0]).unwrap()],
    )
    .unwrap();
    let pf = lesem::polarity::frame_from_algebra(&alg).unwrap();
    let (gf, _) = lesem::graph::frame_from_algebra(&alg).unwrap();
    for (name, f) in [("p.json", lesem::AnyFrame::Polarity(pf)), ("g.json", lesem::AnyFrame::Graph(gf))] {
        let path = write(dir.path(), name, &lesem::io::save_frame(&f).unwrap());
        assert_eq!(run(&["check", "--frame", &path, "--properties", "compatibility", "--assert"]).code, EXIT_OK);
    }
}

#[test]
fn countermodel_search_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().display().to_string();
    let out = run(&["countermodel", "--sequent", DIST, "--seed", "42", "--out", &out_dir, "--assert"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let frame = dir.path().join("frame.json").display().to_string();
    let val = dir.path().join("valuation.json").display().to_string();
    assert!(run(&["valid", "--frame", &frame, "--sequent", DIST]).stdout.starts_with("INVALID"));
    let lhs = json(&["eval", "--frame", &frame, "--valuation", &val, "--formula", "p /\\ (q \\/ r)"]);
    let rhs = json(&["eval", "--frame", &frame, "--valuation", &val, "--formula", "(p /\\ q) \\/ (p /\\ r)"]);
    assert_ne!(lhs["value"], rhs["value"]);

    let none = run(&["countermodel", "--sequent", "p |- p", "--budget", "50", "--assert"]);
    assert_eq!(none.code, EXIT_FALSE);
    assert!(none.stdout.contains("none within budget"));
    let factive = run(&["countermodel", "--sequent", "box p |- p", "--factive", "--budget", "300"]);
    assert!(factive.stdout.contains("none within budget"));
    let factive = run(&["countermodel", "--sequent", "box p |- p", "--factive", "--kind", "graph", "--budget", "300"]);
    assert!(factive.stdout.contains("none within budget"));
    assert!(!run(&["countermodel", "--sequent", "box p |- p", "--budget", "300"]).stdout.contains("none"));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["countermodel", "--sequent", DIST, "--seed", "7", "--kind", "graph", "--json"];
    assert_eq!(run(&args), run(&args));
    let args = ["lattice", "--frame", &fixture("witness.frame.json")];
    assert_eq!(run(&args), run(&args));
}

#[test]
fn bundled_examples_pass() {
    for name in ["plays", "witnesses", "craig"] {
        let out = run(&["examples", name, "--assert"]);
        assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
        assert!(!out.stdout.contains("FAILED"));
    }
    assert_eq!(run(&["examples", "nope"]).code, EXIT_USAGE);
}
