//! A bisimulation that does not respect nominals.

use hybis::bisim::{verify_plain_bisim, Scope};
use hybis::model::fixtures;

fn main() {
    let fig = fixtures::fig1();
    let (m, n) = (&fig.left, &fig.right);
    let plain = verify_plain_bisim(m, n, &fig.relation, false, &Scope::All).unwrap();
    print!("without (nom): {}", plain.render(m, n));
    let with_nom = verify_plain_bisim(m, n, &fig.relation, true, &Scope::All).unwrap();
    print!("with (nom):    {}", with_nom.render(m, n));
}
