use std::time::Instant;

use crate::catalog;
use crate::checks::{self, Context, Overrides};
use crate::report::{CheckResult, Report, Status};
use crate::scenario::World;

/// Run the requested checks concurrently and assemble the report in
/// catalog order.
pub fn run(world: &World, overrides: &Overrides) -> Report {
    let rep = world.algebroid.check_axioms();
    let broken_axioms = (!rep.passed()).then(|| rep.summary(&world.chart));
    let ctx = Context {
        world,
        overrides,
        broken_axioms,
    };
    let mut order = world.checks.clone();
    order.sort_by_key(|info| catalog::position(info));
    let results: Vec<CheckResult> = std::thread::scope(|s| {
        let handles: Vec<_> = order
            .iter()
            .map(|&info| {
                let ctx = &ctx;
                (
                    info,
                    s.spawn(move || {
                        let start = Instant::now();
                        let mut r = checks::run(info, ctx);
                        r.seconds = start.elapsed().as_secs_f64();
                        r
                    }),
                )
            })
            .collect();
        handles
            .into_iter()
            .map(|(info, h)| {
                h.join().unwrap_or_else(|panic| {
                    let msg = panic
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_else(|| "panic".into());
                    let mut r = CheckResult::new(info);
                    r.stop(Status::Error, "error", msg);
                    r
                })
            })
            .collect()
    });
    Report::new(&world.name, results)
}
