//! Enumerate every small machine and confirm a generated suite kills all
//! inequivalent ones.

use ka_conformance::fault::{enumerate_complete_machines, member, FaultDomain};
use ka_conformance::generators::{generate, GenConfig, Method};
use ka_conformance::mealy::{equivalent, passes};
use ka_conformance::random::random_spec;

fn main() -> ka_conformance::Result<()> {
    let spec = random_spec(2, 2, 2, 3);
    let cover = spec.minimal_state_cover()?;
    let k = 1;
    let suite = generate(&spec, &GenConfig::new(Method::Wp, k, cover.clone()))?;
    let domain = FaultDomain::ka_union(k, &cover);
    let machines = enumerate_complete_machines(spec.inputs(), spec.outputs(), cover.len() + k, 1_000_000)?;
    println!("enumerating {} machines", machines.count_total());
    let (mut passing, mut outside) = (0, 0);
    for m in machines {
        let m = m.reachable_part();
        if !member(&m, &domain)? {
            outside += 1;
        }
        if passes(&m, &spec, &suite)?.is_pass() {
            passing += 1;
            assert!(equivalent(&spec, &m)?.is_equivalent());
        }
    }
    println!("{passing} pass the Wp suite, all equivalent; {outside} outside U_{k}^A ∪ U^A");
    Ok(())
}
