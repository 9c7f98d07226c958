//! Generate Wp, HSI and W suites and confirm the checker accepts them.

use ka_conformance::checker::check_ka;
use ka_conformance::fixtures;
use ka_conformance::generators::{generate, GenConfig, Method};

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::three_state_spec();
    let cover = spec.minimal_state_cover()?;
    for k in 0..=1 {
        for method in [Method::Wp, Method::Hsi, Method::W] {
            let suite = generate(&spec, &GenConfig::new(method, k, cover.clone()))?;
            let total: usize = suite.maximal().map(|t| t.len()).sum();
            let report = check_ka(&spec, &suite, &cover, k)?;
            println!(
                "{method:>3} k={k}: {:>3} tests, {:>4} inputs, {}",
                suite.maximal().count(),
                total,
                if report.is_accepted() { "accepted" } else { "rejected" }
            );
        }
    }
    let hsi = generate(&spec, &GenConfig::new(Method::Hsi, 0, cover))?;
    print!("\nHSI suite for k = 0:\n{}", hsi.serialize(spec.inputs()));
    Ok(())
}
