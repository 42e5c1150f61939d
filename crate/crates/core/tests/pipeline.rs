//! End-to-end runs of the library on fixtures and seeded instances.

use r2pencil_core::algebra::{gauss, gauss_int, Exact, Scalar};
use r2pencil_core::christoffel::{
    sample_shift_point, shift_residuals, to_uv_params, transform_phi, verify_hat_orthogonality,
};
use r2pencil_core::fixtures;
use r2pencil_core::functional::{
    biorth_matrix, check_biorth, check_cross_n, check_vanishing_moments, default_moments, gen_moments,
};
use r2pencil_core::pencil::{build_pencil, eig_residual, HChoice};
use r2pencil_core::recurrence::{check_o_recurrence, check_phi_recurrence, Families, PsiVariant};
use r2pencil_core::roots::{eigenvalues, root_residual};
use r2pencil_core::sampling::{random_params, RandomSpec, Sampler};

#[test]
fn s1_biorthogonality_anchors() {
    let p = fixtures::s1();
    let fam = Families::build(&p, 3, PsiVariant::default()).unwrap();
    let mom = gen_moments(&p, gauss_int(1, 0), gauss_int(3, 0), 3).unwrap();
    let b = biorth_matrix(&fam, &mom, 1).unwrap();
    assert_eq!(b[0][0], gauss(1, 2, 0, 1));
    assert_eq!(b[1][1], gauss_int(0, -1));
    assert!(b[0][1].is_zero() && b[1][0].is_zero());
    assert!(check_biorth(&p, &mom, &b).residual.exact_zero);
}

#[test]
fn recurrences_and_functional_on_random_instance() {
    let p = random_params(11, RandomSpec::new(6, false)).unwrap();
    let fam = Families::build_strict(&p, 6, PsiVariant::default()).unwrap();
    assert!(check_o_recurrence(&fam, 6).unwrap().exact_zero);
    assert!(check_phi_recurrence(&fam, 6).unwrap().exact_zero);
    let (m0, m1) = default_moments(&p);
    let mom = gen_moments(&p, m0, m1, 6).unwrap();
    assert!(check_vanishing_moments(&fam, &mom, 6).unwrap().exact_zero);
    let cross = check_cross_n(&fam, &mom, 6).unwrap();
    assert!(cross.exact_zero && cross.count > 0);
    let b = biorth_matrix(&fam, &mom, 4).unwrap();
    assert!(check_biorth(&p, &mom, &b).residual.exact_zero);
}

#[test]
fn eigenpairs_in_float() {
    let p = random_params(4, RandomSpec::new(10, false)).unwrap().map(Scalar::to_c64);
    let fam = Families::build(&p, 10, PsiVariant::default()).unwrap();
    for j in 1..=10 {
        let pencil = build_pencil(&p, j, &HChoice::EigenvectorDefault).unwrap();
        for lambda in eigenvalues(&fam.r[j], 1e-10).unwrap() {
            assert!(root_residual(&fam.r[j], lambda) <= 1e-10);
            let res = eig_residual(&pencil, &lambda, &fam.phi).unwrap();
            assert!(res <= 1e-8, "j = {j}, residual {res:e}");
        }
    }
}

#[test]
fn christoffel_on_sampled_shift_point() {
    let p = random_params(21, RandomSpec::new(8, true)).unwrap();
    let fam = Families::build(&p, 8, PsiVariant::default()).unwrap();
    let uv = to_uv_params(&p).unwrap();
    assert!(shift_residuals(&uv, &fam, 7, 5, 4).unwrap().exact_zero);
    let ctx = sample_shift_point(&uv, &fam, 6, &mut Sampler::new(21)).unwrap();
    let (m0, m1) = default_moments(&p);
    let mom = gen_moments(&p, m0, m1, 8).unwrap();
    let (odd, even) = transform_phi(&ctx, &fam).unwrap();
    for h in odd.iter().chain(&even) {
        assert!(h.bracket_at_z_hat.is_zero());
    }
    let hats: Vec<_> = odd.into_iter().chain(even).collect();
    let (res, entries) = verify_hat_orthogonality(&ctx, &hats, &fam, &mom, 3).unwrap();
    assert!(res.exact_zero);
    assert!(!entries.is_empty());

    // the float shadow of the same computation
    let pf = p.map(Scalar::to_c64);
    let famf = Families::build(&pf, 8, PsiVariant::default()).unwrap();
    let uvf = to_uv_params(&pf).unwrap();
    let ctxf = r2pencil_core::christoffel::build_context(&uvf, &famf, ctx.z_hat.to_c64(), 6).unwrap();
    let (m0, m1) = default_moments(&pf);
    let momf = gen_moments(&pf, m0, m1, 8).unwrap();
    let (o, e) = transform_phi(&ctxf, &famf).unwrap();
    let hats: Vec<_> = o.into_iter().chain(e).collect();
    let (res, _) = verify_hat_orthogonality(&ctxf, &hats, &famf, &momf, 3).unwrap();
    assert!(res.max_abs <= 1e-9, "{:e}", res.max_abs);
}

#[test]
fn seeded_generation_is_reproducible() {
    let spec = RandomSpec::new(7, true);
    let a: r2pencil_core::recurrence::ParamSeq<Exact> = random_params(99, spec).unwrap();
    assert_eq!(a, random_params(99, spec).unwrap());
    assert_ne!(a, random_params(100, spec).unwrap());
}
