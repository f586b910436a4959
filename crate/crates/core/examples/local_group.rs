//! Iwasawa and Bruhat decompositions, Iwahori factorization, coset
//! representatives and double coset counts.
use prohecke::group::{bruhat_iwahori_class, coset_reps, iwahori_factor, iwasawa, random_iwahori, GroupMat, SubgroupSpec};
use prohecke::principal::double_coset_count;
use prohecke::weyl::ExtendedWeylElt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let (n, q) = (3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let w = ExtendedWeylElt::from_word(n, q, &[0, 1, 2]);
    let g = random_iwahori(&mut rng, n, q, 2).mul(&GroupMat::lift(&w)).mul(&random_iwahori(&mut rng, n, q, 2));
    println!("class of a random element of I w I: {} (w = {w})", bruhat_iwahori_class(&g));

    let (b, k) = iwasawa(&g);
    println!("Iwasawa reconstructs: {}", b.mul(&k) == g);

    let i = random_iwahori(&mut rng, n, q, 3);
    let (up, t0, lo) = iwahori_factor(&i).expect("element of I");
    println!("Iwahori factorization reconstructs: {}", up.mul(&t0).mul(&lo) == i);

    println!("|I w I / I| = {} = q^{}", coset_reps(&w, 16).unwrap().len(), w.length());
    for om in [SubgroupSpec::ProPIwahori, SubgroupSpec::Km(1), SubgroupSpec::Km(2)] {
        println!("|B\\G/{om:?}| = {}", double_coset_count(&om, n, q).unwrap().0);
    }
}
