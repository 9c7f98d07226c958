//! Fault-domain membership, eccentricity and the state-count bound.

use ka_conformance::fault::{bound_states, bound_witness, member, FaultDomain};
use ka_conformance::fixtures;
use ka_conformance::mealy::eccentricity;

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::chain_spec();
    let imp = fixtures::chain_impl();
    let a = fixtures::words(&spec, &["", "a", "a a"]);
    let sources: Vec<usize> = a.iter().filter_map(|w| imp.reach(imp.initial(), w)).collect();
    println!(
        "eccentricity of A in the implementation: {}",
        eccentricity(&imp, &sources)?
    );
    for d in [
        FaultDomain::Um(3),
        FaultDomain::UkA { k: 0, cover: a.clone() },
        FaultDomain::UkA { k: 1, cover: a.clone() },
        FaultDomain::UA { cover: a },
    ] {
        println!("implementation in {d}: {}", member(&imp, &d)?);
    }

    println!("bound for n = 55, l = 13, k = 2: {}", bound_states(55, 13, 2)?);
    let w = bound_witness(2, 2, 2)?;
    println!(
        "n = 2, l = 2, k = 2: bound {} reached by a {}-state machine",
        bound_states(2, 2, 2)?,
        w.num_states()
    );
    Ok(())
}
