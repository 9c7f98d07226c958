//! Rerun every worked example and print each claim with its outcome.

use ka_conformance::reproduce::{reproduce, EXAMPLES};

fn main() -> ka_conformance::Result<()> {
    let mut failed = 0;
    for name in EXAMPLES {
        let r = reproduce(name)?;
        println!("{r}");
        failed += r.mismatches().count();
    }
    println!("{failed} mismatches");
    Ok(())
}
