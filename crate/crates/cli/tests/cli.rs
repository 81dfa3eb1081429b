use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIBONACCI: &str = r#"{"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "a"}}"#;

struct Sandbox {
    dir: TempDir,
    system: PathBuf,
}

impl Sandbox {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let system = dir.path().join("fib.json");
        fs::write(&system, FIBONACCI).unwrap();
        Sandbox { dir, system }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        tfg(&self.system, args)
    }
}

fn tfg(system: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tfg"))
        .args(args)
        .arg("--system")
        .arg(system)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn member_and_factors() {
    let s = Sandbox::new();
    let o = s.run(&["member", "--word", "abaab"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "true\n");
    assert_eq!(stdout(&s.run(&["member", "--word", "aaa"])), "false\n");
    let o = s.run(&["factors", "--length", "3"]);
    assert_eq!(stdout(&o), "aab\naba\nbaa\nbab\n");
}

#[test]
fn recode_reports_block_length() {
    let s = Sandbox::new();
    let out = stdout(&s.run(&["recode"]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n0=7"));
    assert_eq!(lines.count(), 8);
}

#[test]
fn check_system_and_returns() {
    let s = Sandbox::new();
    let out = stdout(&s.run(&["check-system"]));
    assert!(out.contains("primitive=true"));
    assert!(out.contains("two-blocks=aa,ab,ba"));
    assert!(out.contains("distinct-five=false"));
    assert_eq!(stdout(&s.run(&["returns", "--word", "a.a"])), "3 aba\n5 ababa\n");
}

#[test]
fn kr_table() {
    let s = Sandbox::new();
    let out = stdout(&s.run(&["kr", "--seed-point", "a.a:2", "--level", "1"]));
    assert!(out.starts_with("level=1 u=a v=ab"));
    assert!(out.contains("return_word\theight\tbase_members"));
}

#[test]
fn relator_file_round_trip() {
    let s = Sandbox::new();
    let out = s.path("pres.txt");
    let o = s.run(&[
        "relators",
        "--max-word-len",
        "3",
        "--depth",
        "1",
        "--offsets",
        "1..2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# system=fib.json n0=7 W=3 depth=1\n"));
    let relator = text.lines().find(|l| l.starts_with("rel R4:")).unwrap();
    let word_file = s.path("w.txt");
    fs::write(&word_file, relator).unwrap();
    let o = s.run(&["wordproblem", "--word-file", word_file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "identity\n");
    // deterministic output
    let again = stdout(&s.run(&["relators", "--max-word-len", "3", "--depth", "1", "--offsets", "1..2"]));
    assert_eq!(again, text);
}

#[test]
fn verify_and_sweep() {
    let s = Sandbox::new();
    let o = s.run(&["verify-relators", "--max-word-len", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("failures=0\n"));
    let a = stdout(&s.run(&["wordproblem", "--seed", "5", "--samples", "40"]));
    let b = stdout(&s.run(&["wordproblem", "--seed", "5", "--samples", "40"]));
    assert_eq!(a, b);
    assert!(a.ends_with("disagreements=0\n"));
}

#[test]
fn group_commands() {
    let s = Sandbox::new();
    let o = s.run(&["sigma-eval", "--word", "s[(0-3-6),1]"]);
    assert!(stdout(&o).contains("support="));
    let o = s.run(&["wordproblem", "--word", "s[(0-3-6),1] s[(0-3-6),1] s[(0-3-6),1]"]);
    assert_eq!(stdout(&o), "identity\n");
    let o = s.run(&["wordproblem", "--word", "s[(0-3-6),1]"]);
    assert_eq!(stdout(&o), "not identity\n");
    let o = s.run(&["tietze", "--word", "0-3-6", "--offset", "1"]);
    assert_eq!(stdout(&o), "s[(0-3-6),1]\n");
    let o = s.run(&[
        "factorize",
        "--seed-point",
        "a.a:2",
        "--seed-point",
        "b.a:2",
        "--word",
        "s[(0-3),1] s[(4-7-3),2]^-1",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("product=true p_tower_interior=true q_inside_base=true"));
}

#[test]
fn alt_check() {
    let o = Command::new(env!("CARGO_BIN_EXE_tfg"))
        .args(["alt-check", "--degree", "7"])
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n=7 relations=ok order=2520 expected=2520\n");
}

#[test]
fn exit_codes() {
    let s = Sandbox::new();
    // domain error: symbol outside the alphabet
    assert_eq!(s.run(&["member", "--word", "abc"]).status.code(), Some(1));
    // domain error: periodic system refused by the group layer
    let periodic = s.path("periodic.json");
    fs::write(&periodic, r#"{"alphabet": ["a", "b"], "rules": {"a": "ab", "b": "ab"}}"#).unwrap();
    let o = tfg(&periodic, &["wordproblem", "--word", "1"]);
    assert_eq!(o.status.code(), Some(1));
    // config errors
    let missing = s.path("missing.json");
    assert_eq!(tfg(&missing, &["recode"]).status.code(), Some(2));
    assert_eq!(s.run(&["relators", "--offsets", "3"]).status.code(), Some(2));
    assert_eq!(s.run(&["kr"]).status.code(), Some(2));
    assert_eq!(s.run(&["no-such-command"]).status.code(), Some(2));
}
