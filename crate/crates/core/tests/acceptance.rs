//! The ten acceptance criteria, each run through its property suite with
//! the stated case counts and time limits. One PASS/FAIL line per criterion
//! goes straight to stderr so it shows even when output is captured.

use std::io::Write;
use std::time::{Duration, Instant};

use elgroup::cli::suites::run_suite;
use elgroup::cli::{Report, Status};
use elgroup::matform::{roots, sigma};
use elgroup::FormKind;

struct Outcome {
    id: u32,
    title: &'static str,
    pass: bool,
    note: String,
}

fn cases(r: &Report) -> u64 {
    r.witness["cases"].as_u64().unwrap_or(0)
}

fn run(id: u32, title: &'static str, suite: &str, seed: u64, want_cases: u64, limit: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let res = run_suite(suite, seed, 5);
    let took = start.elapsed();
    let (pass, note) = match res {
        Err(e) => (false, format!("error: {e}")),
        Ok(r) => {
            let mut problems = Vec::new();
            if r.status != Status::Pass {
                problems.push(format!("failures: {}", r.witness["first_counterexample"]));
            }
            if cases(&r) != want_cases {
                problems.push(format!("expected {want_cases} cases, ran {}", cases(&r)));
            }
            if let Some(l) = limit {
                if took > l {
                    problems.push(format!("took {took:.2?}, limit {l:?}"));
                }
            }
            let summary = format!("{} cases, {:.2?}", cases(&r), took);
            if problems.is_empty() {
                (true, summary)
            } else {
                (false, format!("{summary}; {}", problems.join("; ")))
            }
        }
    };
    Outcome { id, title, pass, note }
}

fn generator_cases() -> u64 {
    let mut roots_total = 0;
    for n in [3, 4, 6, 8] {
        roots_total += roots(FormKind::Linear, n).len();
    }
    for kind in [FormKind::Symplectic, FormKind::Orthogonal] {
        for n in [4, 6, 8] {
            roots_total += roots(kind, n).len();
        }
    }
    // 50 parameters over each of three rings
    (roots_total * 50 * 3) as u64
}

fn long_triples() -> u64 {
    let mut count = 0;
    for (kind, sizes) in [
        (FormKind::Linear, vec![3, 4, 5, 6]),
        (FormKind::Symplectic, vec![4, 6]),
        (FormKind::Orthogonal, vec![4, 6]),
    ] {
        for n in sizes {
            for i in 1..=n {
                for k in 1..=n {
                    for j in 1..=n {
                        let distinct = i != k && k != j && i != j;
                        let paired = !kind.is_linear() && (j == sigma(i) || k == sigma(i) || k == sigma(j));
                        count += u64::from(distinct && !paired);
                    }
                }
            }
        }
    }
    count
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let start = Instant::now();
    let runs = vec![
        run(1, "generator soundness", "generator-soundness", 1, generator_cases(), Some(secs(10))),
        run(2, "commutator relation", "commutator-relation", 2, long_triples(), None),
        run(3, "conjugation expansion", "conjugation-expansion", 3, 100, Some(secs(30))),
        run(4, "dilation", "dilation-soundness", 1, 50, Some(secs(30))),
        run(5, "patching", "patch-soundness", 5, 25, None),
        run(6, "diagonal reduction", "diagonal-reduction", 6, 50, None),
        run(7, "congruence commutator", "congruence-commutator", 7, 100, None),
        run(8, "nilpotent power", "nilpotent-power", 8, 256, Some(secs(5))),
        run(9, "transvection geometry", "form-preservation", 7, 200, None),
        run(10, "stable range", "stable-range", 10, 5, Some(secs(5))),
    ];
    let total = start.elapsed();
    let mut err = std::io::stderr();
    for o in &runs {
        let _ = writeln!(err, "criterion {:>2} {:<24} {} ({})", o.id, o.title, if o.pass { "PASS" } else { "FAIL" }, o.note);
    }
    let total_ok = total < secs(60);
    let _ = writeln!(err, "all criteria {:.2?} (limit 60s): {}", total, if total_ok { "PASS" } else { "FAIL" });
    let failed: Vec<u32> = runs.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(total_ok, "full run took {total:.2?}");
}
