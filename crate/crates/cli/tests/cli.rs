use std::io::Write;
use std::process::{Command, Output, Stdio};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sbt(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sbt"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("sbt-cli-{}-{name}", std::process::id()))
}

#[test]
fn sorted_input_needs_no_moves() {
    let out = sbt(&["sort"], "1 2 3\n");
    assert!(out.status.success());
    assert_eq!(stdout(&out), "moves=0 lb=0 ratio=0\n");
}

#[test]
fn swap_takes_one_move() {
    let out = sbt(&["sort"], "2 1\n");
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["t 1 2 3", "moves=1 lb=1 ratio=1"]);
}

#[test]
fn emitted_moves_replay_on_plain_arrays() {
    let mut rng = ChaCha8Rng::seed_from_u64(1000);
    let mut v: Vec<u32> = (1..=1000).collect();
    v.shuffle(&mut rng);
    let line = v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    let out = sbt(&["sort", "--search-depth", "4"], &format!("{line}\n"));
    assert!(out.status.success());
    let text = stdout(&out);
    let mut count = 0;
    for l in text.lines() {
        let f: Vec<&str> = l.split(' ').collect();
        if f[0] != "t" {
            assert!(l.starts_with(&format!("moves={count} ")));
            continue;
        }
        let [i, j, k] = [f[1], f[2], f[3]].map(|x| x.parse::<usize>().unwrap() - 1);
        let mut next = v[..i].to_vec();
        next.extend_from_slice(&v[j..k]);
        next.extend_from_slice(&v[i..j]);
        next.extend_from_slice(&v[k..]);
        v = next;
        count += 1;
    }
    assert!(v.iter().enumerate().all(|(i, &x)| x as usize == i + 1));
}

#[test]
fn malformed_line_fails() {
    let out = sbt(&["sort"], "1 2\n3 3 1\n");
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn verify_round_trip() {
    let perms = tmp("perms.txt");
    let moves = tmp("moves.txt");
    std::fs::write(&perms, "3 1 2\n1 2 3 4\n5 4 3 2 1\n").unwrap();
    let sorted = sbt(&["sort", perms.to_str().unwrap()], "");
    std::fs::write(&moves, &sorted.stdout).unwrap();
    let ok = sbt(&["verify", perms.to_str().unwrap(), moves.to_str().unwrap()], "");
    assert!(ok.status.success());

    // identity with no moves at all
    std::fs::write(&perms, "1 2 3\n").unwrap();
    assert!(sbt(&["verify", perms.to_str().unwrap()], "").status.success());

    std::fs::write(&perms, "2 1 3\n").unwrap();
    let bad = sbt(&["verify", perms.to_str().unwrap()], "t 1 2 4\nmoves=1 lb=1 ratio=1\n");
    assert!(!bad.status.success());
    std::fs::remove_file(perms).ok();
    std::fs::remove_file(moves).ok();
}

#[test]
fn distance_reports_bounds() {
    let out = sbt(&["distance"], "3 1 2\n4 3 2 1\n");
    assert_eq!(stdout(&out), "lb=1 exact=1 ub=1\nlb=2 exact=3 ub=3\n");
    let big: Vec<String> = (1..=12).rev().map(|v| v.to_string()).collect();
    let out = sbt(&["distance"], &big.join(" "));
    assert!(stdout(&out).contains("exact=?"));
}

#[test]
fn bench_writes_csv_deterministically() {
    let run = |name: &str| {
        let path = tmp(name);
        let out = sbt(&["bench", "--min-n", "16", "--max-n", "64", "--seeds", "2", "--csv", path.to_str().unwrap()], "");
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::remove_file(path).ok();
        text
    };
    let a = run("a.csv");
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "n,seed,moves,lb,ratio,ns_total,ns_tree,ns_graph");
    assert_eq!(lines.len(), 1 + 3 * 2);
    let b = run("b.csv");
    // everything but the timings matches
    let strip = |s: &str| s.lines().map(|l| l.split(',').take(5).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn bench_budget_guard() {
    let out = sbt(&["bench", "--min-n", "1024", "--max-n", "8192", "--seeds", "1", "--budget-seconds", "0.000001"], "");
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("budget"));
}
