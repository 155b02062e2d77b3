//! Acceptance criteria 1 through 12, one test each. Every test prints a
//! single PASS/FAIL line.

use std::process::Command;
use std::time::{Duration, Instant};

use commsol::acceptance;

fn criterion(id: usize) {
    let outcome = acceptance::run(id);
    println!("{outcome}");
    assert!(outcome.passed, "{outcome}");
}

#[test]
fn criterion_01_gl_realization() {
    criterion(1);
}

#[test]
fn criterion_02_group_axioms() {
    criterion(2);
}

#[test]
fn criterion_03_zeta_correspondence() {
    criterion(3);
}

#[test]
fn criterion_04_subgroup_and_cover_counts() {
    criterion(4);
}

#[test]
fn criterion_05_profinite_kernel() {
    criterion(5);
}

#[test]
fn criterion_06_ultrametric_and_sigma() {
    criterion(6);
}

#[test]
fn criterion_07_small_balls() {
    criterion(7);
}

#[test]
fn criterion_08_baseleaf_density() {
    criterion(8);
}

#[test]
fn criterion_09_lifts_and_factorization() {
    criterion(9);
}

#[test]
fn criterion_10_qi_layer() {
    criterion(10);
}

#[test]
fn criterion_11_boundary_action() {
    criterion(11);
}

fn commsol(args: &[&str]) -> (bool, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_commsol"))
        .args(args)
        .env_remove("COMMSOL_MAX_WORK")
        .output()
        .expect("the binary runs");
    (out.status.success(), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

/// Every machine-readable value printed by the binary re-parses to itself.
fn round_trips(dir: &tempfile::TempDir) -> Result<usize, String> {
    let mut checked = 0;
    let mut same = |name: &str, text: &str| -> Result<(), String> {
        let path = write(dir, name, text);
        let (ok, again) = commsol(&["parse", &path, "--format", "lines"]);
        if !ok || again != text {
            return Err(format!("{name}: {text:?} re-parsed as {again:?}"));
        }
        checked += 1;
        Ok(())
    };
    for (g, n, m) in [("F", "2", "3"), ("Z", "2", "4")] {
        let (ok, listing) = commsol(&["enumerate", g, n, "--max-index", m, "--format", "lines"]);
        if !ok {
            return Err(format!("enumerate {g} {n} failed"));
        }
        for (i, line) in listing.lines().enumerate() {
            same(&format!("sub_{g}{n}_{i}"), &format!("{line}\n"))?;
        }
    }
    let swap = write(dir, "swap.txt", "comm F 2\nF 2 graph 1\n1\n1\na -> b\nb -> a\n");
    let half = write(dir, "half.txt", "comm Z 1\n1/2\n");
    for (name, phi) in [("swap", &swap), ("half", &half)] {
        let (_, inv) = commsol(&["invert", phi, "--format", "lines"]);
        same(&format!("{name}_inv"), &inv)?;
        let (_, dump) = commsol(&["zeta", phi, "--depth", "3", "--format", "lines"]);
        same(&format!("{name}_zeta"), &dump)?;
        let zeta_file = write(dir, &format!("{name}_zeta.txt"), &dump);
        let (_, back) = commsol(&["reconstruct", &zeta_file, "--format", "lines"]);
        let back_file = write(dir, &format!("{name}_back.txt"), &back);
        if commsol(&["equiv", phi, &back_file, "--format", "lines"]).1 != "true\n" {
            return Err(format!("{name}: reconstruct(zeta) is not equivalent"));
        }
    }
    for (g, n, x, y) in [("F", "2", "abA", "ba"), ("Z", "1", "7", "-5")] {
        let (_, p) = commsol(&["baseleaf", g, n, "--depth", "3", x]);
        let (_, direct) = commsol(&["sigma", g, n, "--depth", "3", x, y, "--format", "lines"]);
        let (_, via) = commsol(&["sigma", g, n, "--depth", "3", p.trim(), y, "--format", "lines"]);
        if direct != via || direct.is_empty() {
            return Err(format!("solpoint {p:?} does not re-parse to the baseleaf point of {x}"));
        }
        checked += 1;
    }
    Ok(checked)
}

#[test]
fn criterion_12_cli_hermeticity() {
    let start = Instant::now();
    let (ok, report) = commsol(&["selftest"]);
    let passes = report.lines().filter(|l| l.starts_with("criterion") && l.contains(" PASS ")).count();
    let dir = tempfile::tempdir().unwrap();
    let trips = round_trips(&dir);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(360);
    let passed = ok && passes == 11 && trips.is_ok() && elapsed < limit;
    let detail = match &trips {
        Ok(n) => format!("selftest exit ok={ok}, {passes}/11 criteria passed, {n} round trips"),
        Err(e) => format!("selftest exit ok={ok}, {passes}/11 criteria passed, round trip failed: {e}"),
    };
    let line = format!(
        "criterion 12 {} CLI hermeticity: {detail} ({:.2}s, limit {}s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    println!("{line}");
    assert!(passed, "{line}\n{report}");
}
