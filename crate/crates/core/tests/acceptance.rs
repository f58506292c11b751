//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Pass a substring of a check id to run a subset.

use std::process::ExitCode;

use dw_exterior::harness::checks::{self, Ctx};
use dw_exterior::harness::{CheckRow, ExperimentConfig};
use dw_exterior::Result;

type Check = fn(&Ctx) -> Result<CheckRow>;

fn subcritical(ctx: &Ctx) -> Result<CheckRow> {
    checks::subcritical_lifespan(ctx, &ctx.cfg.sweep)
}

fn critical(ctx: &Ctx) -> Result<CheckRow> {
    checks::critical_q_band(ctx, &ctx.cfg.critical)
}

const CRITERIA: [(&str, Check, f64); 12] = [
    ("critical-hardy", checks::hardy, 60.0),
    ("positivity", checks::positivity, 300.0),
    ("l1dmu-contraction", checks::l1_contraction, 120.0),
    ("matsumura-difference", checks::matsumura, 600.0),
    ("log-heat-decay", checks::heat_decay, 300.0),
    ("supersolution-residual", checks::supersolution_residual, 10.0),
    ("log-gagliardo-nirenberg", checks::log_gn, 120.0),
    ("subcritical-lifespan", subcritical, 1800.0),
    ("critical-q-band", critical, 3600.0),
    ("supercritical-global-decay", checks::global_decay, 900.0),
    ("oracle-equivalence", checks::oracle_equivalence, 600.0),
    ("modal-matsumura", checks::modal_matsumura, 10.0),
];

fn main() -> ExitCode {
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if std::env::args().any(|a| a == "--list") {
        for (id, _, _) in CRITERIA {
            println!("{id}: test");
        }
        return ExitCode::SUCCESS;
    }
    let cfg = ExperimentConfig::default();
    let ctx = Ctx::new(&cfg);
    let mut failed = 0;
    let mut ran = 0;
    for (n, (id, check, budget)) in CRITERIA.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| id.contains(f.as_str())) {
            continue;
        }
        ran += 1;
        match check(&ctx) {
            Ok(row) => {
                let in_time = row.seconds <= *budget;
                let ok = row.passed && in_time;
                if !ok {
                    failed += 1;
                }
                println!(
                    "criterion {:>2} {}: {} | {} = {:.6e} (need {}) | {:.1} s of {budget} s",
                    n + 1,
                    id,
                    if ok { "PASS" } else { "FAIL" },
                    row.metric,
                    row.value,
                    row.threshold,
                    row.seconds
                );
                if !row.passed {
                    println!("    details: {}", row.details);
                }
            }
            Err(e) => {
                failed += 1;
                println!("criterion {:>2} {}: FAIL | error: {e}", n + 1, id);
            }
        }
    }
    println!("acceptance: {} of {ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
