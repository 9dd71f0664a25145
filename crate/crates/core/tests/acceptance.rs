use std::process::ExitCode;

use cathom::acceptance::{run, CRITERIA};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let c = run(id, 42);
        let status = if c.check.pass { "PASS" } else { "FAIL" };
        println!("{status} [{id:>2}] {} ({} ms): {}", c.check.name, c.elapsed_ms, c.check.detail);
        if !c.check.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {CRITERIA}/{CRITERIA} passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {failed:?}");
        ExitCode::FAILURE
    }
}
