use dircomplex::constructions::*;
use dircomplex::molecule::MoleculeCtx;
use dircomplex::ogposet::Side;
use std::time::Instant;

fn main() {
    for d in [4usize, 5, 6] {
        let c = cube(d);
        let t = Instant::now();
        let ctx = MoleculeCtx::new(&c);
        let top = c.elements_of_dim(d)[0];
        let b = c.element_boundary(top, d - 1, Side::Minus);
        assert!(ctx.is_molecule(&b).is_some());
        println!("cube{d} half ({} elements): {:?}", b.len(), t.elapsed());
    }
}
