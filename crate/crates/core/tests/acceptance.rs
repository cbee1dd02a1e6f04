//! Prints one PASS/FAIL line per acceptance criterion and exits non-zero if
//! any of them fails.

use std::process::ExitCode;
use std::time::Instant;

use circlesort::oracle::SearchConfig;
use circlesort::verify::{self, Check, SamplePlan};

fn main() -> ExitCode {
    let cfg = SearchConfig::default();
    let start = Instant::now();
    let mut checks: Vec<Check> = Vec::new();
    let mut run = |c: circlesort::Result<Check>| match c {
        Ok(c) => {
            println!("{c}");
            checks.push(c);
        }
        Err(e) => {
            println!("[FAIL] error: {e}");
            checks.push(Check {
                criterion: 0,
                name: "error".into(),
                passed: false,
                detail: e.to_string(),
            });
        }
    };

    run(verify::diameter_formula(10, &cfg));
    run(Ok(verify::constructive_sorter(8, &SamplePlan::default())));
    run(verify::lower_bound_witness(10, 8, &cfg));
    let equivalence = verify::oracle_equivalence(8, &cfg);
    let oracle_agrees = equivalence.as_ref().is_ok_and(|c| c.passed);
    run(equivalence);
    let (records, records_err) = match verify::t_records(11, &cfg) {
        Ok(r) => (r, None),
        Err(e) => (Vec::new(), Some(e.to_string())),
    };
    let t11 = records.iter().find(|r| r.n == 11).map(|r| r.t_n);
    let with_records = |check: Check| match &records_err {
        Some(e) => Err(circlesort::Error::Internal(e.clone())),
        None => Ok(check),
    };
    run(with_records(verify::t_table(&records)));
    run(Ok(verify::multiplicative_constructions(2000)));
    run(verify::probability_bound(30));
    run(with_records(verify::general_bound(&records)));
    run(verify::conjectures(10, &cfg));
    run(verify::discrepancy_report(t11, oracle_agrees));

    let failed = checks.iter().filter(|c| !c.passed).count();
    println!(
        "{} of {} criteria passed in {:.1?}",
        checks.len() - failed,
        checks.len(),
        start.elapsed()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
