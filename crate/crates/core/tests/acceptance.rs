//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p prohecke --test acceptance -- --nocapture` to see
//! the lines; the test fails if any criterion fails.

use std::sync::Arc;
use std::time::Instant;

use prohecke::character::PrincipalSeriesChar;
use prohecke::finite::{verify_free_basis, verify_lemma_finite, verify_transfer, FacetLevel, FiniteGroup};
use prohecke::group::{contraction_test, SubgroupSpec};
use prohecke::hecke::{convolve_oracle, tau_basis_product, HeckeElt};
use prohecke::linalg::Field;
use prohecke::principal::{
    double_coset_count, fiber_dimension_sandwich, invariant_space, InductionModel, IwahoriGeometry, IwahoriModule,
};
use prohecke::suite::{run_suite, SuiteConfig};
use prohecke::tree::{boundary_and_augmentation, build_ball, exactness_report, orbit_decomposition_check};
use prohecke::weyl::{
    apartment_stabilizer_check, elements_with_torus_up_to, integer_box, torus_parts, ApartmentFacet, Coweight,
};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Test characters: trivial, unramified regular and (q = 3) tame, over
/// fields of characteristic 0, `l != p` and `l = p`.
fn characters(n: usize, q: u32) -> Vec<PrincipalSeriesChar> {
    let z = |xs: [&str; 3]| format!("z=[{}]", xs[..n].join(","));
    let tame = if n == 2 { "tame=[1,0]" } else { "tame=[1,0,1]" };
    let cases: Vec<(Field, String)> = if q == 2 {
        vec![
            (Field::Prime(2), String::new()),
            (Field::Rational, z(["2", "3", "5"])),
            (Field::Prime(3), z(["2", "1", "2"])),
            (Field::Prime(5), z(["2", "3", "4"])),
        ]
    } else {
        vec![
            (Field::Prime(3), String::new()),
            (Field::Prime(3), z(["2", "1", "2"])),
            (Field::Rational, format!("{};{tame}", z(["2", "3", "1/2"]))),
            (Field::Prime(5), format!("{};{tame}", z(["2", "3", "4"]))),
            (Field::Rational, tame.to_string()),
        ]
    };
    cases.into_iter().map(|(f, s)| PrincipalSeriesChar::parse(&s, &f, n, q).expect("valid test character")).collect()
}

fn label(chi: &PrincipalSeriesChar) -> String {
    format!("{}/{:?}", chi.spec_string(), chi.field())
}

fn cases() -> [(usize, u32); 4] {
    [(2, 2), (2, 3), (3, 2), (3, 3)]
}

fn criterion_1() -> Verdict {
    let mut total = 0;
    for (n, q) in cases() {
        for lambda in integer_box(n, 2) {
            for t in torus_parts(n, q) {
                let c = Coweight::new(lambda.clone(), t);
                total += 1;
                if contraction_test(&c, q) != c.is_antidominant() {
                    return Err(format!("n={n} q={q} {c:?}"));
                }
            }
        }
    }
    Ok(format!("{total} coweights"))
}

fn criterion_2() -> Verdict {
    let mut pairs = 0;
    for q in [2, 3] {
        let elts = elements_with_torus_up_to(2, q, 4);
        for field in [Field::Prime(2), Field::Prime(3), Field::Rational] {
            for x in &elts {
                for y in elts.iter().filter(|y| x.length() + y.length() <= 4) {
                    pairs += 1;
                    let oracle = convolve_oracle(&field, x, y, 16).map_err(|e| e.to_string())?;
                    if tau_basis_product(&field, x, y) != oracle {
                        return Err(format!("q={q} {field:?}: {x} * {y}"));
                    }
                }
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn finite_criterion(what: &str) -> Verdict {
    let mut checked = 0;
    for (n, q) in cases() {
        let g = FiniteGroup::new(n, q);
        for f in ApartmentFacet::all_through_base_vertex(n) {
            let fl = FacetLevel::new(&g, &f);
            for field in [Field::Rational, Field::Prime(q), Field::Prime(if q == 2 { 3 } else { 2 })] {
                checked += 1;
                let ok = match what {
                    "free" => {
                        let r = verify_free_basis(&g, &fl, &field);
                        r.passed && r.d_size * r.dim_h_f == r.dim_h_x0
                    }
                    _ => verify_transfer(&g, &fl, &field, 7).passed,
                };
                if !ok {
                    return Err(format!("n={n} q={q} facet {:?} {field:?}", fl.blocks));
                }
            }
        }
    }
    Ok(format!("{checked} (facet, field) cases"))
}

fn criterion_5() -> Verdict {
    let mut rows = 0;
    for (n, q) in cases() {
        let mut omegas = vec![SubgroupSpec::ProPIwahori, SubgroupSpec::Km(1)];
        omegas.extend(ApartmentFacet::all(n).iter().map(|f| SubgroupSpec::facet(f, q)));
        let counts: Vec<usize> = omegas.iter().map(|o| double_coset_count(o, n, q).map(|c| c.0)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let n_fact: usize = (1..=n).product();
        if counts[0] != n_fact {
            return Err(format!("n={n} q={q}: |B\\G/I| = {}", counts[0]));
        }
        for chi in characters(n, q) {
            let model = InductionModel::new(&chi, 2);
            for (o, &c) in omegas.iter().zip(&counts) {
                rows += 1;
                let d = invariant_space(&model, o).map_err(|e| e.to_string())?.basis.len();
                if d != c {
                    return Err(format!("n={n} q={q} {} {o:?}: dim {d} vs {c}", label(&chi)));
                }
            }
        }
    }
    Ok(format!("{rows} (subgroup, character) cases; dim V^I = n!"))
}

fn criterion_6() -> Verdict {
    let mut checked = 0;
    for (n, q) in cases() {
        let geom = Arc::new(IwahoriGeometry::new(n, q, 16));
        let lambdas: Vec<Coweight> =
            integer_box(n, 2).into_iter().map(Coweight::plain).filter(|c| c.is_antidominant()).collect();
        for chi in characters(n, q) {
            let m = IwahoriModule::new(geom.clone(), &chi).map_err(|e| e.to_string())?;
            for c in &lambdas {
                checked += 1;
                if !m.normalization_holds(c).map_err(|e| e.to_string())? {
                    return Err(format!("n={n} q={q} {} {c:?}", label(&chi)));
                }
            }
        }
    }
    Ok(format!("{checked} (coweight, character) cases"))
}

fn criterion_7() -> Verdict {
    let mut checked = 0;
    for (n, q) in cases() {
        let geom = Arc::new(IwahoriGeometry::new(n, q, 16));
        let n_fact: usize = (1..=n).product();
        // the longest element of S_n has length n(n-1)/2, the window must hold it
        let first = n * (n - 1) / 2;
        for chi in characters(n, q) {
            let m = IwahoriModule::new(geom.clone(), &chi).map_err(|e| e.to_string())?;
            let one = HeckeElt::unit(chi.field(), n, q);
            for budget in first..=6 {
                checked += 1;
                let r = fiber_dimension_sandwich(&m, std::slice::from_ref(&one), budget).map_err(|e| e.to_string())?;
                if !(r.upper == n_fact && r.lower == n_fact && r.witness) {
                    return Err(format!("n={n} q={q} {} L={budget}: {r:?}", label(&chi)));
                }
            }
        }
    }
    Ok(format!("{checked} (character, budget) cases with upper = lower = n! and witness"))
}

fn criterion_8() -> Verdict {
    let mut checked = 0;
    let mut tame = 0;
    for (n, q) in cases() {
        let g = FiniteGroup::new(n, q);
        for f in ApartmentFacet::all_through_base_vertex(n) {
            let fl = FacetLevel::new(&g, &f);
            for chi in characters(n, q) {
                checked += 1;
                tame += chi.has_tame_part() as usize;
                let r = verify_lemma_finite(&g, &fl, &chi);
                if !r.passed {
                    return Err(format!("{r:?}"));
                }
            }
        }
    }
    ensure(tame > 0, format!("{checked} (facet, character) cases, {tame} with tame part"))
}

fn criterion_9() -> Verdict {
    let mut lines = Vec::new();
    for (q, r) in [(2, 3), (3, 2)] {
        for chi in characters(2, q) {
            let cx = boundary_and_augmentation(&build_ball(r, q).map_err(|e| e.to_string())?, &chi, r + 2)
                .map_err(|e| e.to_string())?;
            let rep = exactness_report(&cx);
            let orb = orbit_decomposition_check(&cx);
            if !(rep.passed && orb.passed) {
                return Err(format!("q={q} {}: {rep:?} {orb:?}", label(&chi)));
            }
            lines.push(format!(
                "q={q} {}: {:?}",
                label(&chi),
                rep.radii.iter().map(|x| (x.rank_boundary, x.kernel_augmentation)).collect::<Vec<_>>()
            ));
        }
    }
    Ok(lines.join("; "))
}

fn criterion_10() -> Verdict {
    let mut checked = 0;
    for n in [2, 3] {
        for f in ApartmentFacet::all_through_base_vertex(n) {
            checked += 1;
            if !apartment_stabilizer_check(&f, 3) {
                return Err(format!("{f:?}"));
            }
        }
    }
    Ok(format!("{checked} facets"))
}

fn criterion_11() -> Verdict {
    let d1 = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d2 = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |dir: &std::path::Path| {
        let cfg = SuiteConfig { cache_dir: Some(dir.to_path_buf()), seed: 11, ..SuiteConfig::default() };
        run_suite(&cfg).map(|r| r.without_timing().to_json()).map_err(|e| e.to_string())
    };
    let (a, b) = (run(d1.path())?, run(d2.path())?);
    let files = |dir: &std::path::Path| -> Vec<(String, Vec<u8>)> {
        let mut v: Vec<_> = std::fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap())
            .map(|e| (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap()))
            .collect();
        v.sort();
        v
    };
    let (fa, fb) = (files(d1.path()), files(d2.path()));
    ensure(a == b && fa == fb && !fa.is_empty(), format!("{} bytes of JSON, {} cache files", a.len(), fa.len()))
}

#[test]
fn acceptance() {
    let criteria: Vec<Criterion> = vec![
        ("1 contraction test equals antidominance", criterion_1),
        ("2 braid products equal the convolution oracle", criterion_2),
        ("3 freeness over the facet Hecke algebras", || finite_criterion("free")),
        ("4 tensor transfer isomorphism", || finite_criterion("transfer")),
        ("5 invariant dimensions equal double coset counts", criterion_5),
        ("6 normalization of f_1", criterion_6),
        ("7 fiber dimension sandwich", criterion_7),
        ("8 finite-level freeness and specialization", criterion_8),
        ("9 ball exactness of the tree complex", criterion_9),
        ("10 apartment stabilizer check", criterion_10),
        ("11 deterministic certificates", criterion_11),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let t = Instant::now();
        let v = f();
        let secs = t.elapsed().as_secs_f64();
        match &v {
            Ok(d) => println!("PASS criterion {name} ({secs:.1}s): {d}"),
            Err(d) => {
                println!("FAIL criterion {name} ({secs:.1}s): {d}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

