//! Build a testing tree, compute apartness, and list candidate sets per frontier.

use ka_conformance::build_testing_tree;
use ka_conformance::fixtures;
use ka_conformance::obs::{basis_from_cover, strata_completeness};

fn main() -> ka_conformance::Result<()> {
    let spec = fixtures::three_state_spec();
    let suite = fixtures::stratified_suite();
    let tree = build_testing_tree(&spec, &suite)?;
    let matrix = tree.apartness();
    println!("{} nodes, {} apart pairs", tree.len(), matrix.count_apart());

    for (q, r) in [(0, 1), (0, 8), (2, 3)] {
        match matrix.witness(&tree, q, r) {
            Ok(w) => println!("t{q} # t{r}, witness `{}`", spec.render(&w)),
            Err(_) => println!("t{q} and t{r} are not apart"),
        }
    }

    let cover = fixtures::cover(&spec, "a\nb");
    let strat = basis_from_cover(&tree, &cover, &matrix)?;
    for k in 0..strat.num_strata() {
        for &q in strat.stratum(k) {
            let c: Vec<String> = strat.candidate_nodes(q).iter().map(|n| n.to_string()).collect();
            println!("F^{k}: C({q}) = {{{}}} ({})", c.join(","), tree.access_string(q));
        }
    }
    print!("{}", strata_completeness(&tree, &strat, strat.num_strata()));
    Ok(())
}
