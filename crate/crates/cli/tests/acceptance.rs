use std::process::Command;
use std::time::Instant;

use laplaza_cli::selftest::{determinism_argv, run_one, Scale, NAMES};

const SEED: u64 = 7;

fn binary(args: &[String]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_laplaza"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

/// Each argv run twice as separate processes, compared byte for byte.
fn processes_are_deterministic() -> (bool, Vec<String>) {
    let mut ok = true;
    let mut notes = Vec::new();
    for argv in determinism_argv() {
        let mut args: Vec<String> = argv[1..].to_vec();
        args.extend(["--seed".to_string(), SEED.to_string()]);
        let first = binary(&args);
        let second = binary(&args);
        let in_process =
            laplaza_cli::run(std::iter::once("laplaza".to_string()).chain(args.iter().cloned()));
        let same = first == second
            && first.0 == Some(in_process.0)
            && first.1 == in_process.1.as_bytes()
            && first.0 != Some(3);
        if !same {
            notes.push(args.join(" "));
        }
        ok &= same;
    }
    (ok, notes)
}

fn main() {
    let mut failed = Vec::new();
    for id in 1..=8 {
        let start = Instant::now();
        let mut log = String::new();
        let result = run_one(id, Scale::Full, SEED, 1, &mut log);
        let (mut passed, detail) = match result {
            Ok(r) => (r.passed, r.detail.to_string()),
            Err(e) => (false, e.0),
        };
        if id == 8 {
            let (ok, notes) = processes_are_deterministic();
            passed &= ok;
            if !ok {
                eprintln!("nondeterministic: {notes:?}");
            }
        }
        let verdict = if passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id}: {verdict} ({}, {:.1}s)",
            NAMES[id - 1],
            start.elapsed().as_secs_f64()
        );
        if !passed {
            eprintln!("criterion {id} detail: {detail}");
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
