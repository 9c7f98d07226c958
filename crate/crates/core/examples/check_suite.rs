//! Check a hand-written suite in both modes and print the reports.

use ka_conformance::checker::{check_ka, check_m};
use ka_conformance::fixtures;

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::h_spec();
    let suite = fixtures::h_suite();
    let cover = fixtures::cover(&spec, "a");

    let m = check_m(&spec, &suite, &cover, 1)?;
    println!("-- m-completeness, k = 1\n{m}");
    let ka = check_ka(&spec, &suite, &cover, 1)?;
    println!("-- 1-A-completeness\n{ka}");
    println!("structured report:\n{}", ka.to_json());
    Ok(())
}
