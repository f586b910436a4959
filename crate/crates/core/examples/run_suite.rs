//! The whole suite from code, with an on-disk coset cache.
use prohecke::suite::{run_suite, SuiteConfig};

fn main() {
    let dir = std::env::temp_dir().join("prohecke-example-cache");
    let cfg = SuiteConfig { n: 2, q: 3, char_ell: 5, chi: "tame=[1,0]".into(), cache_dir: Some(dir), ..Default::default() };
    let report = run_suite(&cfg).expect("valid configuration");
    print!("{}", report.summary());
}
