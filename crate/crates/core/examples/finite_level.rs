//! Parahoric Hecke algebras of GL_3(F_3): freeness, the tensor transfer and
//! the finite specialization, for every facet through the base vertex.
use prohecke::character::PrincipalSeriesChar;
use prohecke::finite::{verify_free_basis, verify_lemma_finite, verify_transfer, FacetLevel, FiniteGroup};
use prohecke::linalg::Field;
use prohecke::weyl::ApartmentFacet;

fn main() {
    let g = FiniteGroup::new(3, 3);
    println!("{} points, {} Bruhat cells", g.len(), g.cells.len());
    let field = Field::Prime(3);
    let chi = PrincipalSeriesChar::parse("tame=[1,0,0]", &Field::Rational, 3, 3).unwrap();
    for f in ApartmentFacet::all_through_base_vertex(3) {
        let fl = FacetLevel::new(&g, &f);
        let free = verify_free_basis(&g, &fl, &field);
        let tr = verify_transfer(&g, &fl, &field, 0);
        let sp = verify_lemma_finite(&g, &fl, &chi);
        println!(
            "blocks {:?}: {} x {} = {} free [{}], tensor {} = fixed {} [{}], specialization {} [{}]",
            fl.blocks, free.d_size, free.dim_h_f, free.dim_h_x0, free.passed, tr.tensor_dim, tr.fixed_dim, tr.passed,
            sp.target_dim, sp.passed
        );
    }
}
