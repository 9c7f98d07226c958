//! Shrink an accepted suite while the checker still accepts it.

use ka_conformance::checker::{prune_suite, CheckMode};
use ka_conformance::fixtures;
use ka_conformance::generators::{generate, GenConfig, Method};

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::three_state_spec();
    let cover = spec.minimal_state_cover()?;
    let suite = generate(&spec, &GenConfig::new(Method::W, 0, cover.clone()))?;
    let pruned = prune_suite(&spec, &suite, &cover, 0, CheckMode::KA)?;
    let size = |s: &ka_conformance::TestSuite| s.maximal().map(|t| t.len() + 1).sum::<usize>();
    println!("W suite: {} tests, size {}", suite.maximal().count(), size(&suite));
    println!("pruned:  {} tests, size {}", pruned.maximal().count(), size(&pruned));
    print!("{}", pruned.serialize(spec.inputs()));
    Ok(())
}
