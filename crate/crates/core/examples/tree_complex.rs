//! The oriented chain complex of fixed vectors on a ball of the tree.
use prohecke::character::PrincipalSeriesChar;
use prohecke::linalg::Field;
use prohecke::tree::{boundary_and_augmentation, build_ball, exactness_report, orbit_decomposition_check};

fn main() {
    let (q, r) = (3, 2);
    let chi = PrincipalSeriesChar::parse("z=[2,1]", &Field::Prime(3), 2, q).unwrap();
    let ball = build_ball(r, q).unwrap();
    println!("{} vertices, {} edges", ball.vertices.len(), ball.edges.len());
    let cx = boundary_and_augmentation(&ball, &chi, r + 2).unwrap();
    println!("boundary is {} x {}", cx.boundary.rows(), cx.boundary.cols());
    let rep = exactness_report(&cx);
    for x in &rep.radii {
        println!(
            "r = {}: rank d = {} of {}, dim ker e = {}, rank e = {} = dim V^K_(r+1) {}",
            x.radius, x.rank_boundary, x.chains1, x.kernel_augmentation, x.rank_augmentation, x.probe_dim
        );
    }
    println!("orbit check: {}", orbit_decomposition_check(&cx).passed);
}
