//! The family that records runs through `fig3_M`: a {down}-family that
//! fails only the variable jump condition once `@` is allowed.

use hybis::bisim::{example46_family, verify_omega_family, Scope};

fn main() {
    let ex = example46_family(5, 2).unwrap();
    let scope = Scope::fixture_depth(&ex.left, &ex.right, 4);
    for features in ["down", "at,down,nom"] {
        let report = verify_omega_family(&ex.left, &ex.right, &ex.family, features.parse().unwrap(), 2, &scope).unwrap();
        let tags: Vec<String> = report.tags().iter().map(ToString::to_string).collect();
        println!("F = {{{features}}}: {} violation(s), conditions {tags:?}", report.violations.len());
        if let Some(v) = report.violations.first() {
            println!("  e.g. {}", v.render(&ex.left, &ex.right));
        }
    }
}
