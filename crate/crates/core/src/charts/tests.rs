use super::*;
use crate::algebra::rat;
use crate::corpus;
use crate::pencil::Lambda;

fn mp(n: usize, s: &str) -> MultiPoly {
    MultiPoly::parse(n, s).unwrap()
}

fn pt(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

#[test]
fn jacobi_examples() {
    assert!(jacobi_check(&corpus::so3()).holds);
    let bad = PolyBivector::parse(4, &[(1, 2, "x3"), (3, 4, "x1")]).unwrap();
    let check = jacobi_check(&bad);
    assert!(!check.holds);
    // P⁴³ ∂₃ P¹² = −x₁ on (1,2,4) and P²¹ ∂₁ P³⁴ = −x₃ on (2,3,4)
    let w = check.witness.unwrap();
    assert_eq!((w.triple, w.residual), ([1, 2, 4], mp(4, "-x1")));
    let all: Vec<([usize; 3], MultiPoly)> = check.failures.into_iter().map(|w| (w.triple, w.residual)).collect();
    assert_eq!(all, vec![([1, 2, 4], mp(4, "-x1")), ([2, 3, 4], mp(4, "-x3"))]);
    let constant = PolyBivector::parse(3, &[(1, 2, "5"), (2, 3, "-1/2")]).unwrap();
    assert!(jacobi_check(&constant).holds);
}

#[test]
fn compatibility_examples() {
    let so3 = corpus::so3();
    let frozen = PolyBivector::parse(3, &[(1, 2, "1")]).unwrap();
    assert!(compatibility_check(&so3, &frozen).unwrap().holds);
    let other = PolyBivector::parse(3, &[(1, 2, "x1")]).unwrap();
    let check = compatibility_check(&so3, &other).unwrap();
    let w = check.witness.unwrap();
    // the cyclic sum over (1,2,3) equals the one over (3,1,2): A³¹ ∂₁ B¹² = x₂
    assert_eq!(w.triple, [1, 2, 3]);
    assert_eq!(w.residual, mp(3, "x2"));
    assert!(compatibility_check(&so3, &so3).unwrap().holds);
}

#[test]
fn compatibility_matches_jacobi_of_sum() {
    for entry in corpus::corpus() {
        let (a, b) = (entry.chart.a(), entry.chart.b());
        if !(jacobi_check(a).holds && jacobi_check(b).holds) {
            continue;
        }
        let ab = compatibility_check(a, b).unwrap().holds;
        assert_eq!(ab, compatibility_check(b, a).unwrap().holds, "{}", entry.name);
        assert_eq!(ab, jacobi_check(&a.add(b)).holds, "{}", entry.name);
    }
}

#[test]
fn corpus_flags() {
    for entry in corpus::corpus() {
        let ok = entry.chart.jacobi_verified() && entry.chart.compatibility_verified();
        assert_eq!(ok, entry.valid, "{}", entry.name);
    }
}

#[test]
fn block_form() {
    let pqz = corpus::pqz();
    let r = block_compatibility_check(pqz.a(), pqz.b(), 1).unwrap();
    assert!(r.full.holds && r.block.holds);
    // a single ∂p∧∂q entry is always compatible, so p·∂p∧∂q still passes
    let p_b = PolyBivector::parse(3, &[(1, 2, "x1")]).unwrap();
    let r = block_compatibility_check(pqz.a(), &p_b, 1).unwrap();
    assert!(r.agree() && r.full.holds);
    // so(3) with B¹² = x₁ bordered by a parameter coordinate fails in both forms
    let a = PolyBivector::parse(4, &[(1, 2, "x3"), (1, 3, "-x2"), (2, 3, "x1")]).unwrap();
    let b = PolyBivector::parse(4, &[(1, 2, "x1")]).unwrap();
    let r = block_compatibility_check(&a, &b, 1).unwrap();
    assert!(!r.full.holds && !r.block.holds);
    let r0 = block_compatibility_check(pqz.a(), pqz.b(), 0).unwrap();
    assert_eq!(r0.full, compatibility_check(pqz.a(), pqz.b()).unwrap());
    assert!(block_compatibility_check(&a, &b, 2).is_err());
}

#[test]
fn evaluation() {
    let c = corpus::so3_frozen();
    let p = c.evaluate_at(&pt(&[0, 0, 1]));
    assert_eq!(p.a(), p.b());
    assert_eq!(p.rank(), 2);
    assert!(c.evaluate_at(&pt(&[0, 0, 0])).a().is_zero());
    let p = corpus::pqz().evaluate_at(&pt(&[1, 1, 5]));
    assert_eq!(p.form_at(&Lambda::int(2))[(0, 1)], rat(7, 1));
}

#[test]
fn bundle_scans() {
    let c = corpus::so3_frozen();
    let samples = sample_points(3, 6, 1);
    let r = jk_regular_scan(&c, &pt(&[1, 1, 1]), &samples).unwrap();
    assert!(r.changes().is_empty());
    let r = jk_regular_scan(&c, &pt(&[1, 1, 1]), &[pt(&[0, 0, 0])]).unwrap();
    // at the origin A vanishes; the rank stays 2 (from B) but a Jordan block appears
    assert_eq!(r.changes().len(), 1);
    assert_eq!(r.entries[0].rank, 2);
    let k = corpus::constant_chart(&corpus::k(5));
    assert!(jk_regular_scan(&k, &pt(&[0; 5]), &sample_points(5, 3, 2)).unwrap().changes().is_empty());
}

#[test]
fn casimir_shifts() {
    let c = corpus::pqz();
    let z = mp(3, "x3");
    let s = c.casimir_shift(&z).unwrap();
    assert_eq!(s.a(), &PolyBivector::parse(3, &[(1, 2, "2*x3")]).unwrap());
    assert!(s.compatibility_verified());
    assert_eq!(c.casimir_shift(&MultiPoly::zero(3)).unwrap().a(), c.a());
    assert_eq!(c.casimir_shift(&MultiPoly::one(3)).unwrap().a(), &c.a().add(c.b()));
    assert!(matches!(c.casimir_shift(&mp(3, "x1")), Err(Error::NotCasimir(_))));
    let r = verify_eigenvalue_shift(&c, &z, &pt(&[1, 1, 5])).unwrap();
    assert!(r.passed);
    assert_eq!(r.before[0].0, Eigenvalue::rational(rat(5, 1)));
    assert_eq!(r.after[0].0, Eigenvalue::rational(rat(10, 1)));
    let r = verify_eigenvalue_shift(&c, &mp(3, "7"), &pt(&[1, 1, 5])).unwrap();
    assert_eq!(r.after[0].0, Eigenvalue::rational(rat(12, 1)));
}

#[test]
fn brackets() {
    let c = corpus::so3_frozen();
    let f = mp(3, "x1^2 + x2^2 + x3^2");
    assert!(c.bracket(&f, &f, &Lambda::int(3)).is_zero());
    assert_eq!(c.bracket(&mp(3, "x1"), &mp(3, "x2"), &Lambda::int(0)), mp(3, "x3"));
    assert!(c.bracket(&f, &mp(3, "x3"), &Lambda::Infinity).is_zero());
    // Leibniz rule
    let (g, h) = (mp(3, "x1*x2 + 2"), mp(3, "x3^2 - x1"));
    let lhs = c.bracket(&f, &(&g * &h), &Lambda::int(2));
    let rhs = &(&c.bracket(&f, &g, &Lambda::int(2)) * &h) + &(&g * &c.bracket(&f, &h, &Lambda::int(2)));
    assert_eq!(lhs, rhs);
}

#[test]
fn involution() {
    let c = corpus::so3_frozen();
    let g = corpus::so3_frozen_family().functions();
    assert!(bi_involution_check(&c, &g).holds);
    let r = bi_involution_check(&c, &[mp(3, "x1"), mp(3, "x2")]);
    let w = r.witness.unwrap();
    assert_eq!((w.pair, w.form, w.residual), ((0, 1), Form::A, mp(3, "x3")));
    assert!(bi_involution_check(&c, &[mp(3, "x1")]).holds);
    let s = c.casimir_shift(&MultiPoly::one(3)).unwrap();
    assert_eq!(bi_involution_check(&s, &g).holds, bi_involution_check(&c, &g).holds);
}

#[test]
fn completeness() {
    let c = corpus::so3_frozen();
    let g = corpus::so3_frozen_family().functions();
    let samples = sample_points(3, 5, 3);
    let r = completeness_check(&c, &g, &pt(&[1, 1, 1]), None, &samples).unwrap();
    assert_eq!((r.expected, r.count, r.rank_at_point), (2, 2, 2));
    assert!(matches!(
        completeness_check(&c, &g[..1], &pt(&[1, 1, 1]), None, &samples),
        Err(Error::CountMismatch { expected: 2, found: 1 })
    ));
    let dep = [mp(3, "x3"), mp(3, "x3^2")];
    assert!(matches!(completeness_check(&c, &dep, &pt(&[1, 1, 1]), None, &samples), Err(Error::Dependent)));
}

#[test]
fn casimir_search() {
    let cas = polynomial_casimirs(&corpus::so3(), 2);
    assert_eq!(cas, vec![MultiPoly::one(3), mp(3, "x1^2 + x2^2 + x3^2")]);
    let frozen = PolyBivector::parse(3, &[(1, 2, "1")]).unwrap();
    assert_eq!(polynomial_casimirs(&frozen, 1), vec![MultiPoly::one(3), mp(3, "x3")]);
    assert_eq!(polynomial_casimirs(&PolyBivector::zero(2), 2).len(), 6);
}

#[test]
fn standard_integrals() {
    let c = corpus::so3_frozen();
    let samples = sample_points(3, 5, 4);
    let r = standard_integrals_verify(&c, &corpus::so3_frozen_family(), &corpus::symmetric_top_hamiltonians(), &samples);
    assert!(r.passed(), "{:?}", r.items);
    // the asymmetric Euler top admits no H_∞ with B¹² = 1: A·dH₀ has a third component −x₁x₂
    let field = hamiltonian_field(&c, &Lambda::int(0), &corpus::euler_top_hamiltonian());
    assert_eq!(field[2], mp(3, "-x1*x2"));
    let mut fam = corpus::so3_frozen_family();
    fam.members.push((mp(3, "x1"), FunctionTag::Extension));
    let r = standard_integrals_verify(&c, &fam, &corpus::symmetric_top_hamiltonians(), &samples);
    assert!(!r.passed());
    assert!(r.items.iter().any(|i| i.name == "f3 is a first integral" && !i.passed));
    let constant = vec![(Lambda::int(0), MultiPoly::one(3)), (Lambda::Infinity, MultiPoly::one(3))];
    let r = standard_integrals_verify(&c, &corpus::so3_frozen_family(), &constant, &samples);
    assert!(r.passed());
}

#[test]
fn eigenvalue_tags() {
    let c = corpus::pqz();
    let fam = FunctionFamily::new(vec![(mp(3, "x3"), FunctionTag::EigenvalueRealPart)]);
    let r = standard_integrals_verify(&c, &fam, &[], &sample_points(3, 4, 5));
    assert!(r.passed(), "{:?}", r.items);
    let c = corpus::linear_complex();
    let fam = FunctionFamily::new(vec![
        (mp(4, "x1"), FunctionTag::EigenvalueRealPart),
        (mp(4, "x2"), FunctionTag::EigenvalueImagPart),
    ]);
    let pts: Vec<Vec<Rational>> = sample_points(4, 6, 6).into_iter().filter(|x| !x[1].is_zero()).collect();
    let r = standard_integrals_verify(&c, &fam, &[], &pts);
    assert!(r.passed(), "{:?}", r.items);
}

#[test]
fn eigenvalue_differentials() {
    let r = eigenvalue_differential_check(&corpus::pqz(), &[1.0, 1.0, 5.0], 1e-4, 1e-8);
    assert_eq!(r.entries.len(), 1);
    let e = &r.entries[0];
    assert!((e.value.re - 5.0).abs() < 1e-12);
    assert!(e.residual < 1e-12);
    assert!((e.gradient[2].re - 1.0).abs() < 1e-8);
    let r = eigenvalue_differential_check(&corpus::linear_complex(), &[0.5, 0.75, 0.1, -0.2], 1e-4, 1e-8);
    assert_eq!(r.status, eigdiff::Status::Pass);
    assert!(r.entries[0].complex);
    let k = corpus::constant_chart(&corpus::j4(3));
    let r = eigenvalue_differential_check(&k, &[0.1, 0.2, 0.3, 0.4], 1e-4, 1e-8);
    assert_eq!(r.entries.len(), 1);
    assert!(r.entries[0].residual == 0.0);
}

#[test]
fn eigenvalue_differential_order() {
    let steps = [1e-3, 5e-4, 2.5e-4];
    for c in [corpus::warped(), corpus::holomorphic()] {
        let x = [0.3, 0.2, 0.4, 0.1, 0.5];
        let x = &x[..c.dim()];
        let rep = eigenvalue_differential_convergence(&c, x, &steps);
        let measured: Vec<f64> = rep.orders.iter().flatten().copied().collect();
        assert!(!measured.is_empty(), "{:?}", rep);
        for o in measured {
            assert!((1.7..=2.3).contains(&o), "order {o}: {rep:?}");
        }
    }
}
