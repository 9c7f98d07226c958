//! Parse a machine, inspect it, and compare it with a faulty variant.

use ka_conformance::format::{parse_machine, serialize_machine, to_dot};
use ka_conformance::mealy::{equivalent, separating_family};

const TURNSTILE: &str = "\
mealy
inputs: c p
outputs: N L F
initial: L
L -c/N-> U
L -p/L-> L
U -c/N-> U
U -p/F-> L
";

fn main() -> ka_conformance::Result<()> {
    let spec = parse_machine(TURNSTILE)?;
    spec.require_specification()?;
    println!("{} states, {} inputs", spec.num_states(), spec.num_inputs());

    let cover = spec.minimal_state_cover()?;
    let words: Vec<String> = cover.words().map(|w| spec.render(w)).collect();
    println!("minimal state cover: {}", words.join(", "));

    let family = separating_family(&spec, true)?;
    for q in spec.states() {
        let ws: Vec<String> = family.get(q).iter().map(|w| spec.render(w)).collect();
        println!("identifier of {}: {}", spec.state_name(q), ws.join(" ; "));
    }

    let faulty = parse_machine(&TURNSTILE.replace("U -c/N-> U", "U -c/N-> L"))?;
    match equivalent(&spec, &faulty)?.counterexample() {
        Some(w) => println!("faulty variant differs on `{}`", spec.render(w)),
        None => println!("faulty variant is equivalent"),
    }

    assert_eq!(parse_machine(&serialize_machine(&spec))?, spec);
    println!("{}", to_dot(&spec));
    Ok(())
}
