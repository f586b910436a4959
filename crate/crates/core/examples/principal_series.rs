//! Invariants of a principal series, the normalization of f_1 and the fiber
//! dimension sandwich.
use std::sync::Arc;

use prohecke::character::PrincipalSeriesChar;
use prohecke::group::SubgroupSpec;
use prohecke::hecke::HeckeElt;
use prohecke::linalg::Field;
use prohecke::principal::{fiber_dimension_sandwich, invariant_space, InductionModel, IwahoriGeometry, IwahoriModule};
use prohecke::weyl::Coweight;

fn main() {
    let (n, q) = (3, 2);
    let chi = PrincipalSeriesChar::parse("z=[2,3,5]", &Field::Rational, n, q).unwrap();
    let model = InductionModel::new(&chi, 2);
    for om in [SubgroupSpec::ProPIwahori, SubgroupSpec::Km(1), SubgroupSpec::Km(2)] {
        println!("dim V^{om:?} = {}", invariant_space(&model, &om).unwrap().basis.len());
    }

    let module = IwahoriModule::new(Arc::new(IwahoriGeometry::new(n, q, 16)), &chi).unwrap();
    for l in [vec![0, 1, 2], vec![-1, 0, 2]] {
        println!("f_1 normalized by {l:?}: {}", module.normalization_holds(&Coweight::plain(l.clone())).unwrap());
    }
    let one = HeckeElt::unit(chi.field(), n, q);
    for budget in 3..=5 {
        let r = fiber_dimension_sandwich(&module, std::slice::from_ref(&one), budget).unwrap();
        println!("L = {budget}: upper {} lower {} witness {}", r.upper, r.lower, r.witness);
    }
}
