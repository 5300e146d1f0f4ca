use std::process::ExitCode;

use volterra_helix::acceptance::{run_all, CRITERIA};

fn main() -> ExitCode {
    let outcomes = run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    println!("acceptance: {passed}/{} criteria passed", CRITERIA.len());
    if outcomes.len() == CRITERIA.len() && passed == outcomes.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
