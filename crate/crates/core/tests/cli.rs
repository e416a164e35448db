mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::corpus_dir;
use selfsim::cli::parse_document;

fn selfsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selfsim")).args(args).output().expect("binary runs")
}

fn corpus_path(name: &str) -> String {
    corpus_dir().join(format!("{name}.ifs")).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn corpus_files_are_canonical() {
    for entry in fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        let doc = parse_document(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(doc.to_string(), text, "{}", path.display());
    }
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let (half, third) = (corpus_path("lebesgue_half"), corpus_path("four_map"));
    let runs: Vec<(Vec<u8>, Vec<u8>)> = (0..2)
        .map(|i| {
            let out = dir.path().join(format!("f{i}.csv")).to_string_lossy().into_owned();
            let f = selfsim(&["fourier", &third, "--min", "-3", "--max", "3", "--samples", "13", "--mode", "recursive", "-o", &out]);
            assert_eq!(f.status.code(), Some(0), "{f:?}");
            let m = selfsim(&["moments", &half, "-n", "12"]);
            let mut text = m.stdout;
            text.extend(selfsim(&["zeros", &corpus_path("cantor_third"), "--im-max", "30"]).stdout);
            (text, fs::read(&out).unwrap())
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert!(String::from_utf8_lossy(&runs[0].1).starts_with("xi,re,im,abs,error_bound\n"));
}

#[test]
fn compose_and_iterate_write_documents() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.ifs");
    let o = selfsim(&["compose", &corpus_path("lebesgue_half"), &corpus_path("lebesgue_third"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let composed = parse_document(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(composed.ifs.len(), 6);
    let o = selfsim(&["equal", out.to_str().unwrap(), &corpus_path("lebesgue_half")]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");

    let it = dir.path().join("it.ifs");
    assert_eq!(selfsim(&["iterate", &corpus_path("cantor_third"), "-n", "3", "-o", it.to_str().unwrap()]).status.code(), Some(0));
    let o = selfsim(&["minimal", &corpus_path("cantor_third"), it.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    assert!(stdout(&o).starts_with("IterationOf k=3"), "{}", stdout(&o));
}

#[test]
fn documented_exit_codes() {
    let o = selfsim(&["equal", &corpus_path("lebesgue_half"), &corpus_path("lebesgue_third")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("EqualUpToChecks"));

    let o = selfsim(&["equal", &corpus_path("cantor_half"), &corpus_path("cantor_third")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("Distinct"));

    let o = selfsim(&["check-hlc", &corpus_path("lebesgue_half"), &corpus_path("lebesgue_third")]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "Incommensurable\n"));

    let o = selfsim(&["verify-example4", "--p", "2/3", "--q", "1/4"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");

    let o = selfsim(&["check-z", &corpus_path("four_map_base")]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let o = selfsim(&["check-z", &corpus_path("cantor_half")]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    assert!(stdout(&o).starts_with("ZeroBranchFails"), "{}", stdout(&o));

    let o = selfsim(&["irreducible", &corpus_path("cantor_third")]);
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    assert!(stdout(&o).ends_with("SimpleBinomial\n"));
    let o = selfsim(&["irreducible", &corpus_path("irrational_translations")]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ifs");
    fs::write(&bad, "map: r=1/3 b=0 p=1/2\nmap: r=1/3 b=2/3 p=2/5\n").unwrap();
    let o = selfsim(&["moments", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("9/10"));

    assert_eq!(selfsim(&["moments", "/nonexistent/none.ifs"]).status.code(), Some(3));
    assert_eq!(selfsim(&["no-such-command"]).status.code(), Some(3));
    assert_eq!(selfsim(&["verify-example4", "--p", "1/3", "--q", "1/2"]).status.code(), Some(3));
    let o = selfsim(&["fourier", &corpus_path("lebesgue_half"), "--tol", "0"]);
    assert_eq!(o.status.code(), Some(3), "{o:?}");
    assert!(!Path::new("none.ifs").exists());
}
