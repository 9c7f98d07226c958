//! Sample a fault domain for a machine that passes a suite but is inequivalent.

use ka_conformance::fault::{sample_mutant, search_counterexample, FaultDomain, SamplerConfig};
use ka_conformance::fixtures;
use ka_conformance::format::serialize_machine;
use ka_conformance::mealy::passes;

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::turnstile();
    let cover = fixtures::cover(&spec, "c");
    let suite = fixtures::spyh_suite();

    let m = sample_mutant(&spec, &cover, 1, 7, &SamplerConfig::default())?;
    println!(
        "mutant with {} edits, passes suite: {}",
        m.edits.len(),
        passes(&m.machine, &spec, &suite)?.is_pass()
    );

    let domain = FaultDomain::ka_union(1, &cover);
    match search_counterexample(&spec, &suite, &domain, 100_000, 42)? {
        Some(c) => {
            println!("found after seed {} ({:?})", c.mutant.seed, c.mutant.origin);
            println!("distinguishing word: {}", spec.render(&c.distinguishing));
            print!("{}", serialize_machine(&c.mutant.machine));
        }
        None => println!("no counterexample within budget"),
    }
    Ok(())
}
