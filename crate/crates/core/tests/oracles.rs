//! Frozen values for small groups, checked through the public API only.

use num_rational::BigRational;
use num_traits::{One, Zero};

use nker::chartab::CharacterTable;
use nker::cyclotomic::Cyclotomic;
use nker::dsl::build_group;
use nker::group::FiniteGroup;
use nker::nker::{classify_rational, classify_real, cross_check, division_product_predicate, Prediction};
use nker::schur::{m_q_blackburn, quaternion_splits_over, BlackburnShape, Field, QuaternionVariant, SchurAnalysis, Verdict};

fn g(text: &str) -> FiniteGroup {
    build_group(text).unwrap()
}

fn predicted_order(p: &Prediction) -> Option<usize> {
    match p {
        Prediction::Exact(s) => Some(s.order()),
        Prediction::Nontrivial { .. } => None,
    }
}

fn faithful_of_degree(t: &CharacterTable, d: u32) -> usize {
    (0..t.irreducibles().len())
        .find(|&i| t.character(i).degree == d && t.kernel(i).is_trivial())
        .expect("faithful character")
}

#[test]
fn structure() {
    let q8 = FiniteGroup::quaternion();
    assert_eq!(q8.center().order(), 2);
    assert_eq!(q8.derived_subgroup().order(), 2);
    assert!(q8.is_dedekind());
    assert!(!g("D4").is_dedekind());

    assert_eq!(g("S3").r_of_g().order(), 1);
    assert_eq!(q8.r_of_g().order(), 8);
    assert_eq!(g("Dic(3)").r_of_g().order(), 2);

    assert!(q8.generalized_dicyclic_witness().is_some());
    assert!(g("D4").generalized_dicyclic_witness().is_none());
    assert!(g("Dic(3)").generalized_dicyclic_witness().is_some());

    assert_eq!(g("Dic(3)").normal_p_complement(2).map(|s| s.order()), Some(3));
    assert!(g("A4").normal_p_complement(2).is_none());
    assert_eq!(g("A4").normal_p_complement(3).map(|s| s.order()), Some(4));
}

#[test]
fn cyclotomic_arithmetic() {
    let one = BigRational::one();
    // 1 + ζ_3 + ζ_3^2 = 0
    let s = (0..3)
        .map(|k| Cyclotomic::root_of_unity(3, k).unwrap())
        .try_fold(Cyclotomic::zero(3), |acc, x| acc.add(&x))
        .unwrap();
    assert!(s.is_zero());
    // ζ_4^2 = -1
    let i = Cyclotomic::root_of_unity(4, 1).unwrap();
    assert_eq!(i.mul(&i).unwrap().as_rational().unwrap(), -one.clone());
    // ζ_5 + conj is real, and sqrt 5 = 1 + 2(ζ_5 + ζ_5^4)
    let z = Cyclotomic::root_of_unity(5, 1).unwrap();
    let r = z.add(&z.conj()).unwrap();
    assert!(!r.is_rational());
    let two = BigRational::from_integer(2.into());
    let root5 = Cyclotomic::from_int(5, 1).add(&r.scalar_mul(&two)).unwrap();
    assert_eq!(root5.mul(&root5).unwrap().as_rational().unwrap(), BigRational::from_integer(5.into()));
    // Galois action σ_2 on ζ_5 gives ζ_5^2
    assert_eq!(z.galois_apply(2).unwrap(), Cyclotomic::root_of_unity(5, 2).unwrap());
    assert!(Cyclotomic::root_of_unity(8, 2).unwrap().minimal_conductor() == 4);
    assert!(Cyclotomic::zero(7).as_rational().unwrap().is_zero());
}

#[test]
fn tables() {
    let cases: [(&str, &[u32]); 6] = [
        ("S3", &[1, 1, 2]),
        ("Q8", &[1, 1, 1, 1, 2]),
        ("A4", &[1, 1, 1, 3]),
        ("S4", &[1, 1, 2, 3, 3]),
        ("Dic(3)", &[1, 1, 1, 1, 2, 2]),
        ("C6", &[1, 1, 1, 1, 1, 1]),
    ];
    for (text, degrees) in cases {
        let t = CharacterTable::compute(&g(text)).unwrap();
        let mut d = t.degrees();
        d.sort();
        assert_eq!(d, degrees, "{text}");
        t.check_orthogonality().unwrap();
    }
}

#[test]
fn indicators_and_kernels() {
    let q8 = g("Q8");
    let t = CharacterTable::compute(&q8).unwrap();
    let tau = faithful_of_degree(&t, 2);
    assert_eq!(t.fs_indicator(tau).unwrap(), -1);
    assert_eq!(t.galois_orbit(tau), vec![tau]);

    let d4 = CharacterTable::compute(&g("D4")).unwrap();
    assert_eq!(d4.fs_indicator(faithful_of_degree(&d4, 2)).unwrap(), 1);

    let c3 = CharacterTable::compute(&g("C3")).unwrap();
    let nonreal: Vec<_> = (0..3).filter(|&i| c3.fs_indicator(i).unwrap() == 0).collect();
    assert_eq!(nonreal.len(), 2);
    assert_eq!(c3.galois_orbit(nonreal[0]).len(), 2);
    assert_eq!(c3.character_field_degree(nonreal[0]), 2);

    let s3 = CharacterTable::compute(&g("S3")).unwrap();
    let linear_kernels: Vec<_> = (0..3)
        .filter(|&i| s3.character(i).degree == 1)
        .map(|i| s3.kernel(i).order())
        .collect();
    assert_eq!(linear_kernels.iter().filter(|&&n| n == 3).count(), 1);
}

#[test]
fn restriction_and_pairing() {
    let s3 = g("S3");
    let t = CharacterTable::compute(&s3).unwrap();
    let two = faithful_of_degree(&t, 2);
    let a3 = s3.derived_subgroup();
    assert_eq!(a3.order(), 3);
    // the degree-2 character of S3 restricts to A3 as the two nontrivial linear characters
    let parts = t.constituents(two, &a3).unwrap();
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|&(_, m)| m == 1));
    let e = t.en_pairing(two, &a3).unwrap();
    assert!(e.is_rational());
}

#[test]
fn schur_indices() {
    let q8 = g("Q8");
    let t = CharacterTable::compute(&q8).unwrap();
    let sa = SchurAnalysis::new(&t).unwrap();
    let tau = faithful_of_degree(&t, 2);
    assert_eq!(sa.m_real(tau).unwrap(), 2);
    let v = sa.verdict(tau).unwrap();
    assert_eq!(v.m_rational.known(), Some(2));
    // skew-linear over Q and R, not over C
    assert_eq!(v.verdict(Field::Rational), Verdict::Yes);
    assert_eq!(v.verdict(Field::Real), Verdict::Yes);
    assert_eq!(v.verdict(Field::Complex), Verdict::No);

    let dic3 = g("Dic(3)");
    let t = CharacterTable::compute(&dic3).unwrap();
    let sa = SchurAnalysis::new(&t).unwrap();
    let f = faithful_of_degree(&t, 2);
    assert_eq!(sa.verdict(f).unwrap().m_rational.known(), Some(2));

    assert!(!quaternion_splits_over(1, QuaternionVariant::RationalCyclotomic).unwrap());
    assert!(quaternion_splits_over(3, QuaternionVariant::RationalCyclotomic).unwrap());
    assert!(!quaternion_splits_over(7, QuaternionVariant::RationalCyclotomic).unwrap());
    assert!(!quaternion_splits_over(5, QuaternionVariant::Real).unwrap());
    assert!(quaternion_splits_over(5, QuaternionVariant::Sqrt2Extension).unwrap());
    assert!(quaternion_splits_over(4, QuaternionVariant::TwoAdic).is_err());
}

#[test]
fn blackburn_indices() {
    let pq = g("PQ(3,7,1,1)");
    let shape = BlackburnShape::detect(&pq, 3).expect("shape at 3");
    assert_eq!((shape.p, shape.q, shape.c, shape.d), (3, 7, 1, 1));
    assert_eq!(m_q_blackburn(&shape, 3, 9, 7).unwrap(), 3);

    let pq = g("PQ(2,3,1,1)");
    let shape = BlackburnShape::detect(&pq, 2).expect("shape at 2");
    assert_eq!(m_q_blackburn(&shape, 2, 4, 3).unwrap(), 2);
    assert!(m_q_blackburn(&shape, 4, 2, 3).is_err());
}

#[test]
fn classifiers() {
    let real = |t: &str| predicted_order(&classify_real(&g(t)).prediction);
    let rational = |t: &str| predicted_order(&classify_rational(&g(t)).prediction);

    assert_eq!(real("Q8"), Some(8));
    assert_eq!(real("S3"), Some(1));
    assert_eq!(rational("C4 x Q8"), Some(2));
    assert_eq!(rational("S4"), Some(1));
    assert_eq!(rational("Dic(5)"), Some(2));
    assert_eq!(rational("Q8 x C7"), Some(56));
    assert_eq!(rational("Q8 x C3"), Some(1));
    assert_eq!(rational("PQ(3,7,1,1)"), Some(3));

    assert!(division_product_predicate(&g("Q8 x C7"), Field::Rational));
    assert!(!division_product_predicate(&g("Q8 x C3"), Field::Rational));
    assert!(division_product_predicate(&g("Q8"), Field::Real));
}

#[test]
fn cross_checks() {
    for text in ["Dic(3)", "PQ(3,7,1,1)", "S4", "Q8 x C2", "C4 x Q8"] {
        let reports = cross_check(&g(text)).unwrap_or_else(|e| panic!("{text}: {e}"));
        assert!(!reports.is_empty());
    }
}

#[test]
fn dsl_names() {
    assert_eq!(g("Q8 x C7").order(), 56);
    assert_eq!(g("Q8 x C7").name(), "Q8 x C7");
    assert_eq!(g("Dic(5)").order(), 20);
    assert_eq!(g("(C2 x C3)^2").order(), 36);
    assert_eq!(g("Perm[(1 2 3), (1 2)]").order(), 6);
}
