//! Runs every bundled scenario and prints its checks.

use zpkit::cli::demo::{run_demo, DemoName};
use zpkit::cli::RunConfig;

fn main() -> zpkit::Result<()> {
    for name in [
        DemoName::ManinMumford,
        DemoName::Unlikely,
        DemoName::CountingGrowth,
        DemoName::MinkowskiSweep,
        DemoName::DefectSweep,
    ] {
        let r = run_demo(name, &mut RunConfig::default())?;
        println!("{} [{}] in {:.2?}", r.name, if r.pass { "pass" } else { "FAIL" }, r.elapsed);
        for c in &r.checks {
            println!("  {}: {} ({})", c.name, c.pass, c.achieved);
        }
    }
    Ok(())
}
