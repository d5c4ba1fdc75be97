//! Acceptance suite: one test and one printed verdict line per criterion.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.
//!
//! Criterion 8 (the genus-4 stretch run) reports SKIP unless
//! `FILLSYS_STRETCH=1` is set; everything else runs unconditionally.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::prelude::*;

use fillsys::chain::{assemble_matrix, boundary_terms, compose_check, ChainVector};
use fillsys::enumerate::{enumerate_basis, enumerate_matchings, Budget};
use fillsys::figures::{build_x, build_y, build_z, verify_paper, VerifyOptions};
use fillsys::filling::{
    boundary_profile, delete_chord, is_disconnected, is_filling_system, matching_orbit_lengths,
    ChainTerm, FillingSystem,
};
use fillsys::zlinalg::{rank_mod_p, smith_normal_form, SparseIntMatrix};
use fillsys::{ChordWord, Matching};

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} [{detail}]",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn x_class(g: usize) -> ChordWord {
    let (class, _) = build_x(g).unwrap().word().canonicalize();
    class.into_word()
}

#[test]
fn criterion_1_proof_identities() {
    let mut details = Vec::new();
    for g in [2usize, 3, 4] {
        let start = Instant::now();
        let x = x_class(g);
        let y = build_y(g).unwrap();
        let z = build_z(g).unwrap();

        // boundary deletions of Y: ends give X, neighbors of the ends die
        for i in [1, 2 * g + 1] {
            match delete_chord(&y, i).unwrap() {
                ChainTerm::Term { word, .. } => {
                    let (c, _) = word.canonicalize();
                    assert_eq!(c.word(), &x, "g={g}: deletion {i} of Y is not X");
                }
                ChainTerm::Zero => panic!("g={g}: deletion {i} of Y vanished"),
            }
        }
        for i in [2, 2 * g] {
            assert_eq!(
                delete_chord(&y, i).unwrap(),
                ChainTerm::Zero,
                "g={g}: deletion {i} of Y must vanish"
            );
        }
        // middle deletions die: disconnected 0-fillings or zero outright
        for i in 3..2 * g {
            if let ChainTerm::Term { word, .. } = delete_chord(&y, i).unwrap() {
                assert!(
                    is_filling_system(&word, g, 0) && is_disconnected(&word),
                    "g={g}: middle deletion {i} survived connected"
                );
            }
        }

        // d(Y) = +-2 X plus disconnected-supported remainder
        let y_terms = boundary_terms(&y).unwrap();
        let coeff = y_terms
            .iter()
            .find(|t| t.class.word() == &x)
            .map(|t| t.coefficient)
            .unwrap_or(0);
        assert_eq!(coeff.abs(), 2, "g={g}: X coefficient of d(Y)");
        for t in &y_terms {
            if t.class.word() != &x {
                assert!(is_disconnected(t.class.word()), "g={g}: connected remainder");
            }
        }

        // d(Z) = +-(2g+1) X and nothing else
        let z_terms = boundary_terms(&z).unwrap();
        assert_eq!(z_terms.len(), 1, "g={g}: d(Z) support");
        assert_eq!(z_terms[0].class.word(), &x, "g={g}: d(Z) lands on X");
        assert_eq!(
            z_terms[0].coefficient.unsigned_abs() as usize,
            2 * g + 1,
            "g={g}: d(Z) magnitude"
        );

        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 1.0, "g={g}: identities took {elapsed:.2}s (budget 1s)");
        details.push(format!("g={g} {:.0}ms", elapsed * 1e3));
    }
    report(
        1,
        "proof identities for Y and Z",
        true,
        &format!("g in {{2,3,4}}: dY = +-2X + disconnected, dZ = +-(2g+1)X; {}", details.join(", ")),
    );
}

#[test]
fn criterion_2_cokernel_trivial() {
    let mut details = Vec::new();
    for (g, limit) in [(2usize, 1.0f64), (3, 60.0)] {
        let start = Instant::now();
        let d = assemble_matrix(g, 1, Budget::default()).unwrap();
        let group = d.cokernel();
        let elapsed = start.elapsed().as_secs_f64();
        assert!(group.is_trivial(), "g={g}: U_0/d(U_1) = {group}");
        assert!(elapsed < limit, "g={g}: took {elapsed:.2}s (budget {limit}s)");
        details.push(format!(
            "g={g}: {}x{} matrix, cokernel 0, {:.2}s",
            d.row_count(),
            d.col_count(),
            elapsed
        ));
    }
    report(2, "U_0/d(U_1) = 0 at g=2,3", true, &details.join("; "));
}

#[test]
fn criterion_3_quotient_generated_by_x() {
    let mut details = Vec::new();
    for g in [2usize, 3] {
        let d = assemble_matrix(g, 1, Budget::default()).unwrap();
        let u0 = d.row_basis();
        let x_id = u0.index_of(&x_class(g)).expect("X lies in the U_0 basis");
        let mut reduced = 0usize;
        'classes: for id in 0..u0.len() {
            for c in [0i64, 1, -1, 2, -2] {
                let mut v = ChainVector::singleton(u0, id, 1);
                v.add_scaled(u0, x_id, -c);
                if d.solve_in_image(&v).unwrap().is_some() {
                    reduced += 1;
                    continue 'classes;
                }
            }
            report(
                3,
                "every class is a multiple of [X] mod the image",
                false,
                &format!("g={g}: class {} does not reduce", u0.class(id).word()),
            );
        }
        details.push(format!("g={g}: {reduced}/{} classes reduced", u0.len()));
    }
    report(
        3,
        "every class is a multiple of [X] mod the image",
        true,
        &details.join("; "),
    );
}

#[test]
fn criterion_4_disconnected_classes_have_preimages() {
    let mut details = Vec::new();
    for g in [2usize, 3] {
        let d = assemble_matrix(g, 1, Budget::default()).unwrap();
        let u0 = d.row_basis();
        let torsion = d.torsion_rows();
        let mut certified = 0usize;
        for id in 0..u0.len() {
            if !is_disconnected(u0.class(id).word()) {
                continue;
            }
            let v = ChainVector::singleton(u0, id, 1);
            let cert = d
                .solve_in_image(&v)
                .unwrap()
                .unwrap_or_else(|| panic!("g={g}: class {id} has no preimage"));
            // independent re-verification by explicit multiplication
            let mut achieved = vec![BigInt::zero(); u0.len()];
            let (on_cols, on_torsion) = cert.split(d.col_count());
            for (col, y) in &on_cols {
                for &(r, val) in d.column(*col) {
                    achieved[r as usize] += BigInt::from(val) * y;
                }
            }
            for (t, y) in &on_torsion {
                achieved[torsion[*t]] += BigInt::from(2) * y;
            }
            assert_eq!(achieved, v.to_dense(u0), "g={g}: certificate mismatch");
            certified += 1;
        }
        assert!(certified > 0);
        details.push(format!("g={g}: {certified} certificates re-verified"));
    }
    report(
        4,
        "disconnected classes lie in the image",
        true,
        &details.join("; "),
    );
}

#[test]
fn criterion_5_boundary_squares_to_zero() {
    for g in [1usize, 2, 3] {
        assert!(
            compose_check(g, Budget::default()).unwrap(),
            "d . d != 0 at genus {g}"
        );
    }
    report(
        5,
        "d . d = 0 from U_2 to U_0",
        true,
        "g in {1,2,3}, torsion rows mod 2",
    );
}

#[test]
fn criterion_6_enumeration_oracles() {
    // labeled one-face matching counts: brute force vs closed form
    let frozen = [(4usize, 21u128), (6, 1485), (8, 225225)];
    for (n, expected) in frozen {
        let mut brute = 0u128;
        enumerate_matchings(2 * n, |partner| {
            let m = Matching::new(partner.to_vec()).unwrap();
            if matching_orbit_lengths(&m).len() == 1 {
                brute += 1;
            }
        })
        .unwrap();
        let closed = one_face_closed_form(n);
        assert_eq!(brute, expected, "2n = {}", 2 * n);
        assert_eq!(closed, expected, "closed form at 2n = {}", 2 * n);
    }

    // golden basis files are reproduced byte-identically, at any thread count
    let golden: [(usize, usize, &str); 4] = [
        (1, 0, include_str!("golden/basis-g1-k0.txt")),
        (2, 0, include_str!("golden/basis-g2-k0.txt")),
        (2, 1, include_str!("golden/basis-g2-k1.txt")),
        (3, 0, include_str!("golden/basis-g3-k0.txt")),
    ];
    for (g, k, want) in golden {
        let got = enumerate_basis(g, k, Budget::default())
            .unwrap()
            .to_cache_string();
        assert_eq!(got, want, "basis (g={g}, k={k}) differs from golden");
        for threads in [1usize, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let again = pool.install(|| {
                enumerate_basis(g, k, Budget::default())
                    .unwrap()
                    .to_cache_string()
            });
            assert_eq!(again, want, "(g={g}, k={k}) at {threads} threads");
        }
    }
    report(
        6,
        "matching counts and golden bases",
        true,
        "21/1485/225225 one-face counts; 4 golden files byte-identical at 1 and 4 threads",
    );
}

fn one_face_closed_form(n: usize) -> u128 {
    let fact = |m: usize| (1..=m as u128).product::<u128>();
    let denom = (1u128 << n) * fact(n + 1);
    assert_eq!(fact(2 * n) % denom, 0);
    fact(2 * n) / denom
}

#[test]
fn criterion_7_property_suite() {
    // Euler parity on every matching up to 10 points, and deletion moves
    // the boundary count by exactly one
    for n in 1..=5usize {
        enumerate_matchings(2 * n, |partner| {
            let w = Matching::new(partner.to_vec()).unwrap().word();
            let p = boundary_profile(&w);
            assert_eq!(p.b() % 2, (n + 1) % 2, "euler parity of {w}");
            assert!(p.genus().is_some(), "{w}");
            if n >= 2 {
                for chord in 1..=n as u16 {
                    let remnant: Vec<u16> = w
                        .labels()
                        .iter()
                        .filter(|&&x| x != chord)
                        .map(|&x| if x > chord { x - 1 } else { x })
                        .collect();
                    let r = ChordWord::new(remnant).unwrap();
                    let diff = boundary_profile(&r).b() as i64 - p.b() as i64;
                    assert_eq!(diff.abs(), 1, "deleting {chord} from {w}");
                }
            }
            // one boundary cycle on >= 2 chords is automatically long
            if p.b() == 1 && n >= 2 {
                assert!(p.min_orbit_length() >= 3);
            }
        })
        .unwrap();
    }

    // canonical-class invariance under all rotations, on real basis data
    let u1 = enumerate_basis(2, 1, Budget::default()).unwrap();
    for class in u1.classes() {
        for r in 0..class.word().point_count() {
            let (c, _) = class.word().rotate(r).canonicalize();
            assert_eq!(c.word(), class.word());
            assert_eq!(c.torsion(), class.torsion());
        }
    }

    // sign equivariance of the boundary under odd reorderings
    let u0 = enumerate_basis(2, 0, Budget::default()).unwrap();
    let swap: Vec<u16> = vec![2, 1, 3, 4, 5];
    for class in u1.classes().iter().take(8) {
        let base = boundary_terms(&FillingSystem::new(class.word().clone()).unwrap()).unwrap();
        let (reordered, sign) = class.word().apply_permutation(&swap).unwrap();
        assert_eq!(sign, -1);
        let flipped = boundary_terms(&FillingSystem::new(reordered).unwrap()).unwrap();
        assert_eq!(base.len(), flipped.len());
        for (a, b) in base.iter().zip(&flipped) {
            assert_eq!(a.class.word(), b.class.word());
            let torsion = u0
                .index_of(a.class.word())
                .map(|id| u0.class(id).torsion())
                .unwrap_or(false);
            if torsion {
                assert_eq!(a.coefficient, b.coefficient);
            } else {
                assert_eq!(a.coefficient, -b.coefficient);
            }
        }
    }

    // SNF invariant factors survive row/column permutation of the real
    // boundary matrix, and modular rank agrees
    let d = assemble_matrix(2, 1, Budget::default()).unwrap();
    let sparse = d.to_sparse();
    let snf = smith_normal_form(&sparse, false);
    let factors = snf.invariant_factors().to_vec();
    let (rows, cols) = (sparse.rows(), sparse.cols());
    let mut rng = StdRng::seed_from_u64(0x12345678);
    for _ in 0..5 {
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        rp.shuffle(&mut rng);
        cp.shuffle(&mut rng);
        let permuted = SparseIntMatrix::from_triples(
            rows,
            cols,
            sparse.triples().map(|(r, c, v)| (rp[r], cp[c], v.clone())),
        )
        .unwrap();
        assert_eq!(
            smith_normal_form(&permuted, false).invariant_factors(),
            factors.as_slice()
        );
    }
    for p in [10007u64, 65537] {
        let divides = factors
            .iter()
            .any(|f| f.mod_floor(&BigInt::from(p)).is_zero());
        if !divides {
            assert_eq!(rank_mod_p(&sparse, p), snf.rank());
        }
    }

    // membership certificates re-verify by multiplication (done internally
    // by solve_in_image; exercise the failure-free path on fresh solves)
    let u0 = d.row_basis();
    for id in 0..u0.len() {
        let v = ChainVector::singleton(u0, id, 1);
        assert!(d.solve_in_image(&v).unwrap().is_some());
    }

    report(
        7,
        "property suite",
        true,
        "euler parity, deletion step, rotation invariance, sign equivariance, SNF permutation invariance, modular rank, certified solves",
    );
}

#[test]
fn criterion_8_stretch_genus_4() {
    if std::env::var("FILLSYS_STRETCH").as_deref() != Ok("1") {
        println!(
            "criterion 8 (genus-4 stretch): SKIP [set FILLSYS_STRETCH=1 to run; reported, not required for pass/fail]"
        );
        return;
    }
    let start = Instant::now();
    let report_g4 = verify_paper(
        4,
        &VerifyOptions {
            stretch: true,
            ..Default::default()
        },
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(report_g4.passed(), "{report_g4}");
    assert!(
        report_g4.cokernel.as_ref().unwrap().is_trivial(),
        "genus-4 cokernel"
    );
    assert!(
        elapsed < 1800.0,
        "stretch run took {elapsed:.0}s (budget 30 minutes)"
    );
    report(
        8,
        "genus-4 stretch",
        true,
        &format!("identities exact, surjectivity certified, {elapsed:.0}s"),
    );
}
