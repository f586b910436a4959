//! Ranks and kernels over F_p, F_(p^d), Q and F_p(t).
use prohecke::linalg::{ExactMatrix, Field, RatFunc};

fn main() {
    let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]];
    for f in [Field::Rational, Field::Prime(2), Field::Prime(3), Field::from_char(2, 2).unwrap()] {
        let m = ExactMatrix::from_i64(&f, &rows);
        let (rank, kernel) = m.rank_and_kernel();
        println!("{f:?}: rank {rank}, kernel dimension {}", kernel.len());
    }

    let q = 3;
    let x = RatFunc::monomial(q, 2, -1).add(&RatFunc::t(q));
    println!("2/t + t has valuation {:?} and angular component {}", x.val(), x.angular_component());
}
