//! Times the glue classification for d = 1..=12.
use std::time::Instant;

fn main() {
    let t = Instant::now();
    for d in 1..=12 {
        let c = k3evenset_core::families::admissible_glues(d).expect("classification");
        println!("d={d} glues={} classes={} elapsed={:?}", c.glues.len(), c.classes.len(), t.elapsed());
    }
}
