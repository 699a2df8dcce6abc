//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! runtime limit. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use symplecta::verifier::{self, CheckSpec, Report, Status, DEFAULT_SEED};
use symplecta::Budget;

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    run: fn() -> Result<String, String>,
}

fn check(name: &str) -> Result<Report, String> {
    let spec = CheckSpec::new(name)
        .with_seed(DEFAULT_SEED)
        .with_budget(Budget::DEFAULT);
    let report = verifier::run_check(&spec).map_err(|e| format!("{name}: {e}"))?;
    match report.status {
        Status::Pass => Ok(report),
        other => Err(format!(
            "{name}: status {other:?}, counterexample {}",
            report
                .counterexample
                .as_ref()
                .map(|c| serde_json::to_string(c).unwrap())
                .unwrap_or_else(|| "none".into())
        )),
    }
}

fn count(report: &Report, key: &str) -> Result<u64, String> {
    report
        .counts
        .get(key)
        .copied()
        .ok_or_else(|| format!("{}: missing count {key}", report.check))
}

fn expect(report: &Report, key: &str, expected: u64) -> Result<(), String> {
    let found = count(report, key)?;
    if found == expected {
        Ok(())
    } else {
        Err(format!(
            "{}: {key} = {found}, expected {expected}",
            report.check
        ))
    }
}

fn c1() -> Result<String, String> {
    let r = check("enumeration")?;
    for (tag, lines, bases) in [("p2_n2", 20, 10), ("p3_n2", 90, 45), ("p2_n3", 336, 1120)] {
        expect(&r, &format!("{tag}_hyperbolic_lines"), lines)?;
        for suffix in ["", "_recursive", "_orbit"] {
            expect(&r, &format!("{tag}_base_subsets{suffix}"), bases)?;
        }
    }
    Ok("|H_1| = 20/90/336, base subsets = 10/45/1120, each matched by two identities".into())
}

fn c2() -> Result<String, String> {
    let r = check("fact1")?;
    expect(&r, "involutions", 90)?;
    expect(&r, "base_subsets", 45)?;
    expect(&r, "mc_subsets", 45)?;
    let pairs = count(&r, "commuting_pairs")?;
    expect(&r, "commuting_pairs_in_mc", pairs)?;
    Ok(format!(
        "45 MC-subsets = 45 base subsets; {pairs} commuting pairs all covered"
    ))
}

fn c3() -> Result<String, String> {
    let r = check("fact2")?;
    expect(&r, "base_subsets", 1120)?;
    expect(&r, "distinct_images", 1120)?;
    expect(&r, "intertwining_holds", 100)?;
    Ok("1120 base subsets carried bijectively; 100 seeded l intertwine".into())
}

fn c4() -> Result<String, String> {
    let r = check("perp_iff_base")?;
    expect(&r, "p2_n2_pairs", 190)?;
    expect(&r, "p3_n2_pairs", 4005)?;
    Ok("190 pairs at p=2 and 4005 at p=3 agree".into())
}

fn c5() -> Result<String, String> {
    let mut parts = Vec::new();
    for name in ["lemma1", "lemma4"] {
        let r = check(name)?;
        expect(&r, "subsets", 64)?;
        let nodes = count(&r, "oracle_nodes")?;
        if nodes > 10_000_000 {
            return Err(format!("{name}: {nodes} oracle nodes exceed 10^7"));
        }
        let maximal = count(&r, "maximal_inexact")?;
        parts.push(format!("{name}: {maximal} maximal inexact, {nodes} nodes"));
    }
    Ok(parts.join("; "))
}

fn c6() -> Result<String, String> {
    let mut parts = Vec::new();
    for name in ["lemma2", "lemma5"] {
        let r = check(name)?;
        expect(&r, "bijections_tested", 720)?;
        let hyp = count(&r, "bijections_hypothesis_satisfied")?;
        expect(&r, "bijections_conclusion_held", hyp)?;
        parts.push(format!(
            "{name}: {hyp}/720 satisfy the hypothesis, all conclude"
        ));
    }
    Ok(parts.join("; "))
}

fn c7() -> Result<String, String> {
    let r = check("lemma3")?;
    let checked = count(&r, "subsets_checked")?;
    if checked < 500 + 64 {
        return Err(format!("only {checked} subsets checked"));
    }
    expect(&r, "implication_held", checked)?;
    Ok(format!("{checked} subsets, implication never falsified"))
}

fn c8() -> Result<String, String> {
    let r = check("lemma7")?;
    let mut applicable = 0;
    for m in [2, 3] {
        for part in 1..=3 {
            applicable += (count(&r, &format!("m{m}_part{part}_cases"))? > 0) as u32;
        }
    }
    expect(&r, "m2_subspaces_m", 336)?;
    expect(&r, "m3_subspaces_m", 1)?;
    Ok(format!(
        "dim M in {{4, 6}}: {applicable} applicable parts pass, {} inapplicable parts reported",
        r.notes.len()
    ))
}

fn c9() -> Result<String, String> {
    let e = check("example1")?;
    expect(&e, "perp_closed_sets", 1024)?;
    expect(&e, "flips_preserving_base_subsets", 1024)?;
    expect(&e, "nonempty_flips_not_induced", 1023)?;
    expect(&e, "group_elements", 720)?;
    let t = check("thm2_flip_negative")?;
    expect(&t, "flips_identity_on_pairs", 1024)?;
    expect(&t, "flips_respecting_perp", 1024)?;
    expect(&t, "nonempty_flips_not_induced", 1023)?;
    Ok("1024 flips preserve base subsets, fix perp pairs, respect perp; 1023 nonempty flips not induced".into())
}

fn c10() -> Result<String, String> {
    let r = check("thm1_positive")?;
    for k in [1, 2] {
        expect(&r, &format!("k{k}_images_are_base_subsets"), 2000)?;
        expect(&r, &format!("k{k}_witnesses"), 100)?;
    }
    Ok("k = 1, 2: 100 elements x 20 base subsets mapped to base subsets; 200 witnesses".into())
}

fn c11() -> Result<String, String> {
    let run = || -> Result<String, String> {
        let outcome =
            verifier::run_suite(None, DEFAULT_SEED, Budget::DEFAULT).map_err(|e| e.to_string())?;
        if outcome.exit_code() != 0 {
            return Err("suite has failing checks".into());
        }
        let stripped: Vec<Report> = outcome
            .reports
            .iter()
            .map(Report::without_runtime)
            .collect();
        Ok(serde_json::to_string_pretty(&stripped).unwrap())
    };
    let (first, second) = (run()?, run()?);
    if first != second {
        return Err("suite reports differ between runs".into());
    }
    Ok(format!(
        "two suite runs byte-identical ({} bytes)",
        first.len()
    ))
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: "C1",
        title: "enumeration oracles",
        limit: Some(Duration::from_secs(60)),
        run: c1,
    },
    Criterion {
        id: "C2",
        title: "MC-subsets are base subsets",
        limit: Some(Duration::from_secs(300)),
        run: c2,
    },
    Criterion {
        id: "C3",
        title: "perp map on base subsets",
        limit: None,
        run: c3,
    },
    Criterion {
        id: "C4",
        title: "orthogonal iff common base subset",
        limit: None,
        run: c4,
    },
    Criterion {
        id: "C5",
        title: "maximal inexact classification",
        limit: Some(Duration::from_secs(600)),
        run: c5,
    },
    Criterion {
        id: "C6",
        title: "bijection sweeps over 720 maps",
        limit: None,
        run: c6,
    },
    Criterion {
        id: "C7",
        title: "single-deviation exactness",
        limit: None,
        run: c7,
    },
    Criterion {
        id: "C8",
        title: "orthogonal hyperbolic lines in large subspaces",
        limit: None,
        run: c8,
    },
    Criterion {
        id: "C9",
        title: "flips at n = 2k",
        limit: None,
        run: c9,
    },
    Criterion {
        id: "C10",
        title: "induced maps and witnesses",
        limit: Some(Duration::from_secs(600)),
        run: c10,
    },
    Criterion {
        id: "C11",
        title: "suite determinism",
        limit: None,
        run: c11,
    },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result = (c.run)();
        let elapsed = start.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.1?}, limit {limit:?}"))
            }
            (r, _) => r,
        };
        let limit = c
            .limit
            .map(|l| format!(" (limit {}s)", l.as_secs()))
            .unwrap_or_default();
        match result {
            Ok(detail) => println!("{} PASS {} [{elapsed:.2?}{limit}]: {detail}", c.id, c.title),
            Err(why) => {
                failed += 1;
                println!("{} FAIL {} [{elapsed:.2?}{limit}]: {why}", c.id, c.title);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
