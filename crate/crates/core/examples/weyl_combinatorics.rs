//! Lengths, reduced words and facets of the base chamber.
use prohecke::weyl::{elements_up_to, ApartmentFacet, Coweight, ExtendedWeylElt};

fn main() {
    let q = 2;
    let w = ExtendedWeylElt::translation(q, Coweight::plain(vec![0, 1, 3]));
    let (omega, word) = w.reduced_word();
    println!("{w}: length {}, rotation part {omega}, reduced word {word:?}", w.length());
    for l in 0..=3 {
        println!("n = 3: {} elements of length <= {l} (trivial torus, reduced center)", elements_up_to(3, q, l).len());
    }
    for f in ApartmentFacet::all(3) {
        println!("facet {:?} has Levi blocks {:?}", f.vertex_types, f.blocks());
    }
}
