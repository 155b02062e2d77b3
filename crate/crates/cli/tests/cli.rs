use std::io::Write;
use std::process::{Command, Output, Stdio};

use commsol::group::GroupTag;
use commsol::solenoid::DepthModel;
use commsol::text::{format_commensuration, parse_commensuration};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commsol")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn file(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().into()
}

const SWAP: &str = "comm F 2\nF 2 graph 1\n1\n1\na -> b\nb -> a\n";

#[test]
fn documented_examples() {
    let dir = tempfile::tempdir().unwrap();
    let z = file(&dir, "z.txt", "comm Z 1\n2/1\n");
    assert_eq!(stdout(&["tomatrix", &z]), "2/1\n");
    assert_eq!(stdout(&["enumerate", "F", "2", "--max-index", "3"]), "1:1 2:3 3:13\n");
    assert_eq!(stdout(&["dpro", "Z", "1", "--depth", "5", "0", "12"]), "exp(-4) = 0.0183156\n");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["dpro", "Z", "1"]).status.code(), Some(2));
    assert_eq!(run(&["enumerate", "F", "2", "--format", "xml"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = file(&dir, "bad.txt", "comm Z 1\n0\n");
    for args in [
        vec!["tomatrix", bad.as_str()],
        vec!["index", "/no/such/file"],
        vec!["fixpoint", "2", "1"],
        vec!["ball", "F", "2", "2/5"],
        vec!["dpro", "Q", "1", "0", "1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn reads_standard_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_commsol"))
        .args(["invert", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"comm Z 1\n2/1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let printed = String::from_utf8(out.stdout).unwrap();
    let expected = parse_commensuration("comm Z 1\n2/1\n").unwrap().invert().unwrap();
    assert_eq!(printed.trim_end(), format_commensuration(&expected));
}

#[test]
fn subgroup_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let k = stdout(&["kernel", "F", "2", "--max-index", "2", "--format", "lines"]);
    assert_eq!(k, "F 2 graph 4 a=2,1,4,3 b=3,4,1,2\n");
    let kf = file(&dir, "k.txt", &k);
    assert_eq!(stdout(&["index", &kf]), "4\n");
    // rank 1 + index·(k − 1) = 5
    assert_eq!(stdout(&["basis", &kf]).lines().count(), 5);
    let cover = stdout(&["cover", &kf]);
    assert!(cover.starts_with("4 sheets\n"), "{cover}");
    let a2 = file(&dir, "a2.txt", "F 2\naa\nb\naBA\n");
    let b2 = file(&dir, "b2.txt", "F 2\nbb\na\nbAB\n");
    let both = stdout(&["intersect", &a2, &b2, "--format", "lines"]);
    assert_eq!(both, k);
    assert_eq!(stdout(&["kernel", "Z", "1", "--max-index", "6", "--format", "lines"]), "Z 1 [(60)]\n");
}

#[test]
fn commensuration_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let swap = file(&dir, "swap.txt", SWAP);
    let id = file(&dir, "id.txt", &stdout(&["compose", &swap, &swap]));
    assert_eq!(stdout(&["equiv", &id, &id, "--format", "lines"]), "true\n");
    assert_eq!(stdout(&["equiv", &id, &swap]), "not equivalent\n");
    assert_eq!(stdout(&["invert", &swap]), format!("{}\n", SWAP.trim_end()));
    let dump = file(&dir, "zeta.txt", &stdout(&["zeta", &swap, "--depth", "3"]));
    assert_eq!(stdout(&["reconstruct", &dump]), format!("{}\n", SWAP.trim_end()));
    let lift = stdout(&["lift", &swap, &kernel_file(&dir), &kernel_file(&dir)]);
    assert!(lift.starts_with("4 sheets -> 4 sheets\n"), "{lift}");
    assert_eq!(lift.lines().filter(|l| l.starts_with("vertex")).count(), 4);
}

fn kernel_file(dir: &tempfile::TempDir) -> String {
    file(dir, "kernel.txt", &stdout(&["kernel", "F", "2", "--max-index", "2", "--format", "lines"]))
}

#[test]
fn cofinal_selection() {
    let dir = tempfile::tempdir().unwrap();
    let swap = file(&dir, "swap.txt", SWAP);
    let dump = stdout(&["zeta", &swap, "--depth", "2", "--format", "lines"]);
    let system: String = dump
        .lines()
        .take_while(|l| !l.starts_with("source"))
        .map(|l| format!("{l}\n"))
        .collect();
    let sys = file(&dir, "sys.txt", &system);
    let kept = stdout(&["cofinal", &sys, "--multiple-of", "2", "--format", "lines"]);
    assert_eq!(kept.lines().filter(|l| l.starts_with("idx=")).count(), 3);
    assert_eq!(run(&["cofinal", &sys, "--multiple-of", "3"]).status.code(), Some(1));
}

#[test]
fn solenoid_verbs_match_library() {
    let m = DepthModel::build(GroupTag::Free(2), 2).unwrap();
    let g = GroupTag::Free(2).parse_element("abA").unwrap();
    let line = stdout(&["baseleaf", "F", "2", "abA"]);
    assert_eq!(line.trim_end(), m.format_point(&m.baseleaf(&g)));
    let h = GroupTag::Free(2).parse_element("b").unwrap();
    let (d, at) = m.sigma(&m.baseleaf(&g), &m.baseleaf(&h));
    assert_eq!(
        stdout(&["sigma", "F", "2", line.trim_end(), "b", "--format", "lines"]),
        format!("{} g={at}\n", d.symbolic())
    );
    // (2,-2) lies in the depth-2 kernel 2Z^2, (2,-1) only in Z^2
    assert_eq!(stdout(&["dpro", "Z", "2", "--depth", "2", "1,-1", "-1,1"]), "0\n");
    assert_eq!(stdout(&["dpro", "Z", "2", "--depth", "2", "1,-1", "-1,0"]), "exp(-1) = 0.3678794\n");
    let ball = stdout(&["ball", "Z", "1", "--depth", "5", "1/20"]);
    assert!(ball.starts_with("ball N=5 eps=1/20 components=10 expected=10"), "{ball}");
    assert_eq!(ball.lines().count(), 11);
}

#[test]
fn geometry_verbs() {
    let dir = tempfile::tempdir().unwrap();
    let swap = file(&dir, "swap.txt", SWAP);
    let id = file(&dir, "id.txt", "comm F 2\nF 2 graph 1\n1\n1\na -> a\nb -> b\n");
    let qi = stdout(&["qi", &id, "--radius", "3"]);
    assert!(qi.contains(" L=1 ") && qi.contains(" C=0 "), "{qi}");
    assert_eq!(stdout(&["bounded", &swap, &id, "--radius", "3"]), "growing profile 0 2 4 6\n");
    assert_eq!(stdout(&["bounded", &swap, &swap, "--radius", "3"]), "bounded 0 from R=0 profile 0 0 0 0\n");
    assert!(stdout(&["factor", &swap]).starts_with("factor N=2 R=5 checked=485 mismatches=0"));
    assert_eq!(stdout(&["fixpoint", "2", "Aba"]), "u=A c=b\n");
    assert_eq!(stdout(&["fixpoint", "2", "a", "--repelling"]), "u=1 c=A\n");
    assert_eq!(stdout(&["baction", &swap, "ab"]), "u=1 c=ba\n");
    assert_eq!(run(&["qi", &id, "--radius", "11"]).status.code(), Some(1));
}
