//! One line per acceptance criterion. Runs without the test harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qschur::suites::{self, SuiteError, SuiteReport};
use qschur::AlgebraContext;

struct Criterion {
    id: u32,
    what: &'static str,
    budget: Duration,
    run: fn() -> Result<Vec<SuiteReport>, SuiteError>,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn counting() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::counting(&[1, 2, 3], &[1, 2, 3, 4])?])
}

fn relations() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::relations(2, 2, (-2, 4))?])
}

fn oracle() -> Result<Vec<SuiteReport>, SuiteError> {
    let mut out = vec![suites::oracle(1, 1, &[3, 5])?, suites::oracle(1, 2, &[3, 5])?];
    let mut extra = suites::oracle(2, 1, &[3])?;
    for q in [3, 5] {
        let c = suites::oracle_structure_constants(AlgebraContext::schur_i(2, 2), q, true)?;
        extra.pass &= c.pass;
        extra.checks.push(c);
    }
    out.push(extra);
    Ok(out)
}

fn canonical() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::canonical(1, 1, 3)?, suites::canonical(1, 2, 4)?])
}

fn compat() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::compat(1, 1, 3)?, suites::compat(1, 2, 4)?])
}

fn worked() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::worked_product(&[(-2, 1), (0, 2), (3, 1)])?])
}

fn duality() -> Result<Vec<SuiteReport>, SuiteError> {
    let pts = suites::default_points();
    Ok(vec![suites::duality(1, 2, &pts)?, suites::duality(2, 2, &pts)?])
}

fn inner_product() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::inner_product(1, 1)?, suites::inner_product(1, 2)?])
}

fn stabilization() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::stabilization((-1, 2), 2)?])
}

fn t_calculus() -> Result<Vec<SuiteReport>, SuiteError> {
    Ok(vec![suites::t_calculus(&[1, 2], 20, 2024)?])
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, what: "label set sizes", budget: secs(10), run: counting },
        Criterion { id: 2, what: "relation suites at (2,2), window [-2,4]", budget: secs(300), run: relations },
        Criterion { id: 3, what: "structure constants and actions against point counts", budget: secs(1800), run: oracle },
        Criterion { id: 4, what: "canonical bases", budget: secs(300), run: canonical },
        Criterion { id: 5, what: "canonical bases through phi_d and the quotient maps", budget: secs(600), run: compat },
        Criterion { id: 6, what: "worked K^j product", budget: secs(1), run: worked },
        Criterion { id: 7, what: "duality", budget: secs(600), run: duality },
        Criterion { id: 8, what: "inner product", budget: secs(1200), run: inner_product },
        Criterion { id: 9, what: "stabilization fits", budget: secs(600), run: stabilization },
        Criterion { id: 10, what: "t-calculus", budget: secs(60), run: t_calculus },
    ];
    let mut all = true;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let (pass, detail) = match &result {
            Ok(reps) => {
                let checks: usize = reps.iter().map(|r| r.checks.iter().map(|k| k.checked).sum::<usize>()).sum();
                let failed: Vec<String> = reps
                    .iter()
                    .flat_map(|r| r.failed().into_iter().map(move |k| format!("{}: {} {:?}", r.suite, k.name, k.failures)))
                    .collect();
                let ok = failed.is_empty() && reps.iter().all(|r| r.pass) && checks > 0;
                (ok, if ok { format!("{checks} cases") } else { failed.join("; ") })
            }
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = took <= c.budget;
        let pass = pass && in_time;
        all &= pass;
        println!(
            "criterion {}: {} ({}; {}; {:.2}s of {}s)",
            c.id,
            if pass { "pass" } else { "fail" },
            c.what,
            detail,
            took.as_secs_f64(),
            c.budget.as_secs()
        );
        if let Ok(reps) = &result {
            for r in reps {
                for note in &r.notes {
                    println!("    note [{}]: {note}", r.suite);
                }
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
