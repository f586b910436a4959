//! Products in the pro-p Iwahori-Hecke algebra against the coset oracle.
use prohecke::hecke::{convolve_oracle, tau_basis_product};
use prohecke::linalg::Field;
use prohecke::weyl::ExtendedWeylElt;

fn main() {
    let (n, q) = (2, 3);
    let f = Field::Prime(2);
    let s0 = ExtendedWeylElt::simple(n, q, 0);
    let s1 = ExtendedWeylElt::simple(n, q, 1);
    for (a, b) in [(&s1, &s1), (&s0, &s1), (&s0, &s0)] {
        let braid = tau_basis_product(&f, a, b);
        let oracle = convolve_oracle(&f, a, b, 16).unwrap();
        println!("tau({a}) tau({b}) = {braid:?}  [oracle agrees: {}]", braid == oracle);
    }
}
