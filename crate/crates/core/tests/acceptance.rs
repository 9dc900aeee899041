//! Acceptance matrix: one `PASS`/`FAIL` line per criterion, with every
//! measured value next to its pinned limit.
//!
//! Criteria 1 and 10 contain nominal values that the reference duct cannot
//! reproduce: the boundary parameter from A(0) = 5, A′(0) = −0.52 comes out
//! as +0.052, and the cot α = −0.052 member of the reflectance family does
//! not match the reference relative area. Both are evaluated literally and
//! expected to report `FAIL`. The run fails when any criterion deviates from
//! that expectation.
//!
//! Numeric arguments select criteria: `cargo test --test acceptance -- 3 7`.

use std::process::ExitCode;

use horn_inverse::verify::{run, ExactGolden, Tolerances, CRITERIA};

const EXPECTED_FAILURES: [u8; 2] = [1, 10];

fn main() -> ExitCode {
    let picked: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> =
        CRITERIA.iter().map(|(id, _)| *id).filter(|id| picked.is_empty() || picked.contains(id)).collect();
    let reports = run(&ids, &Tolerances::default(), &ExactGolden);

    let mut unexpected = Vec::new();
    println!("\nacceptance matrix");
    for r in &reports {
        println!("{}", r.render());
        let expect_pass = !EXPECTED_FAILURES.contains(&r.id);
        if r.passed() != expect_pass || (expect_pass && r.error.is_some()) {
            unexpected.push(r.id);
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("\n{passed}/{} criteria pass; expected failures: {EXPECTED_FAILURES:?}", reports.len());
    if unexpected.is_empty() {
        println!("acceptance: outcome matches expectation");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
