//! One line per acceptance criterion. Criteria 1 to 10 come from the
//! battery in `brouwerlab::suite`, run once on an eight-thread pool; the
//! eleventh reruns it single-threaded and compares the JSON byte for byte.
//! Exits non-zero if any line is FAIL.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use brouwerlab::suite::{run_criterion, SuiteConfig, SuiteReport, CRITERIA};

/// Wall-clock ceilings for the criteria that carry one.
fn limit(id: u32) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(5)),
        2 => Some(Duration::from_secs(60)),
        4 => Some(Duration::from_secs(120)),
        8 => Some(Duration::from_secs(10)),
        _ => None,
    }
}

const SUITE_LIMIT: Duration = Duration::from_secs(300);

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool")
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut all_ok = true;

    let started = Instant::now();
    let criteria = pool(8).install(|| {
        CRITERIA
            .iter()
            .map(|&(id, name)| {
                let t = Instant::now();
                let r = run_criterion(id, &cfg);
                let took = t.elapsed();
                let in_time = limit(id).is_none_or(|l| took <= l);
                let ok = r.passed && in_time;
                all_ok &= ok;
                let verdict = if ok { "PASS" } else { "FAIL" };
                let budget = limit(id).map_or(String::new(), |l| format!(", limit {l:?}"));
                println!("{verdict} criterion {id}: {name} ({took:.2?}{budget})");
                if !ok {
                    println!("    details: {}", r.details);
                }
                r
            })
            .collect::<Vec<_>>()
    });
    let parallel_time = started.elapsed();
    let parallel = SuiteReport { config: cfg.clone(), passed: criteria.iter().all(|c| c.passed), criteria };

    let serial = pool(1).install(|| brouwerlab::suite::run_suite(&cfg, None));
    let (a, b) = (parallel.to_json(), serial.to_json());
    let same = a == b;
    let fast = parallel_time <= SUITE_LIMIT;
    let ok = same && fast;
    all_ok &= ok;
    println!(
        "{} criterion 11: deterministic across 1 and 8 threads ({} bytes, identical: {same}; full suite {parallel_time:.2?}, limit {SUITE_LIMIT:?})",
        if ok { "PASS" } else { "FAIL" },
        a.len(),
    );
    if !same {
        let at = a.bytes().zip(b.bytes()).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
        println!("    first difference at byte {at}");
    }

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
