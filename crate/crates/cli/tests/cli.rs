use std::path::Path;
use std::process::{Command, Output};

fn feqlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_feqlab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn catalog_listings() {
    let o = feqlab(&["catalog"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    for name in ["Z1", "Z8", "Z2xZ2", "Z2xZ4", "S3", "S4", "D4", "Q8"] {
        assert!(s.contains(&format!("\"name\":\"{name}\"")), "{name}");
    }
    let s = stdout(&feqlab(&["catalog", "--group", "S3", "--morphisms"]));
    assert_eq!(s.matches("\"selector\":\"aut:").count(), 4);
    assert_eq!(s.matches("\"selector\":\"anti:").count(), 4);
    let s = stdout(&feqlab(&["catalog", "--group", "Q8", "--characters"]));
    assert_eq!(s.matches("\"record\":\"character\"").count(), 4);
}

#[test]
fn solve_exit_codes() {
    assert_eq!(code(&feqlab(&["solve", "--group", "Z4", "--sigma", "inv", "--chi", "1"])), 0);
    assert_eq!(code(&feqlab(&["solve", "--group", "S3", "--sigma", "id", "--chi", "0"])), 0);

    let o = feqlab(&["solve", "--group", "Z4", "--sigma", "id", "--chi", "1"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("at x = 1"));

    // the closed-form families miss the character pairs on Z6
    let o = feqlab(&["solve", "--group", "Z6", "--sigma", "inv", "--chi", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("Z6,inv,1,3,6,FAIL"));
    assert_eq!(code(&feqlab(&["solve", "--group", "Z6", "--sigma", "inv", "--chi", "1", "--character-pairs"])), 0);

    assert_eq!(code(&feqlab(&["solve", "--group", "S3", "--sigma", "inv"])), 4, "inversion of S3 is anti");
    assert_eq!(code(&feqlab(&["solve", "--group", "Z9x"])), 4);
    assert_eq!(code(&feqlab(&["solve", "--group", "Z4", "--sigma", "aut:7"])), 4);
}

#[test]
fn audit_exact_and_perturbed() {
    for g in ["S3", "D4", "Q8"] {
        let o = feqlab(&["audit", "--group", g, "--sigma", "inv"]);
        assert_eq!(code(&o), 0, "{g}");
        assert!(stdout(&o).contains("\"check\":\"audit\""));
    }
    let dir = tempfile::tempdir().unwrap();
    let pair = dir.path().join("p.txt");
    let p = pair.to_str().unwrap();
    let o = feqlab(&["perturb", "--group", "Q8", "--base", "half-trace", "--epsilon", "1e-3", "--seed", "1", "--out", p]);
    assert_eq!(code(&o), 0);
    assert!(Path::new(p).exists());
    let o = feqlab(&["audit", "--group", "Q8", "--pair", p]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("\"pass\":false"));
    assert_eq!(code(&feqlab(&["audit", "--group", "S3", "--sigma", "id"])), 4);
}

#[test]
fn stability_is_deterministic_and_catches_small_delta() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let o = feqlab(&[
            "stability", "--ball", "Z^2", "--radius", "4", "--sigma", "neg", "--m", "1.1,0.9", "--fe", "2",
            "--report", "/dev/null", "--csv", csv.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(csv).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("epsilon,seed,delta,name,bound,max_violation,witness,pass"));
    assert_eq!(text.lines().count(), 1 + 3 * 5);

    let o = feqlab(&["stability", "--group", "Q8", "--base", "half-trace", "--seed", "1", "--delta", "1e-6"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains(",false"));
}

#[test]
fn dichotomy_table() {
    let o = feqlab(&[
        "stability", "--dichotomy", "--ball", "Z1", "--radii", "4,8,12,16", "--equation", "cauchy", "--sigma", "id",
        "--candidate", "exp:2", "--report", "/dev/null",
    ]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("radius,sup_f,sup_g,delta,dist_to_family,branch_label"));
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[3], "0.0000000000000000e0");
        assert_eq!(cells[4], "0.0000000000000000e0");
    }
}

#[test]
fn config_file_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# Z4 run\ncommand = solve\ngroup = Z4\nsigma = id\nchi = 1\n").unwrap();
    let c = cfg.to_str().unwrap();
    // χ = i^k is incompatible with the identity, but the flag overrides the file
    assert_eq!(code(&feqlab(&["--config", c])), 4);
    assert_eq!(code(&feqlab(&["solve", "--config", c, "--sigma", "inv"])), 0);

    std::fs::write(&cfg, "group = Z4\nbogus = 1\n").unwrap();
    assert_eq!(code(&feqlab(&["solve", "--config", c])), 4);

    let o = Command::new(env!("CARGO_BIN_EXE_feqlab"))
        .args(["solve", "--group", "S3", "--sigma", "id"])
        .env("FEQLAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_feqlab")).arg("catalog").env("FEQLAB_THREADS", "zero").output().unwrap();
    assert_eq!(code(&o), 4);
}
