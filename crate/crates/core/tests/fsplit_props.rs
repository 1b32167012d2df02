use koszul_core::fsplit::{
    cartier_phi, closure_property_check, compatibility_check, frobenius_section_check, is_splitting,
    schubert_chart_data, split_apply, ChartCase, ChartIdeal, CharPPolynomial, SplittingCandidate,
};
use koszul_core::PrimeField;
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect()
}

fn poly(p: u32, n: usize, terms: &[(Vec<u32>, u32)]) -> CharPPolynomial {
    let f = PrimeField::new(p).unwrap();
    CharPPolynomial::from_terms(f, &names(n), terms.iter().map(|(e, c)| (e[..n].to_vec(), c % p)))
}

fn terms(max_deg: u32) -> impl Strategy<Value = Vec<(Vec<u32>, u32)>> {
    prop::collection::vec((prop::collection::vec(0..=max_deg, 3), 0u32..1000), 0..5)
        .prop_map(move |ts| ts.into_iter().filter(|(e, _)| e.iter().sum::<u32>() <= max_deg).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_p_inverse_linear(p in prop::sample::select(vec![2u32, 3, 5, 7]), n in 1usize..=3,
                               f in terms(10), g in terms(3), h in terms(10)) {
        let (f, g, h) = (poly(p, n, &f), poly(p, n, &g), poly(p, n, &h));
        prop_assert_eq!(cartier_phi(&g.frobenius().mul(&f)), g.mul(&cartier_phi(&f)));
        prop_assert_eq!(cartier_phi(&f.add(&h)), cartier_phi(&f).add(&cartier_phi(&h)));
    }

    #[test]
    fn splittings_fix_frobenius_images(p in prop::sample::select(vec![2u32, 3, 5]), f in terms(4)) {
        let field = PrimeField::new(p).unwrap();
        let vars = names(2);
        let sigma = CharPPolynomial::var(field, &vars, 0).mul(&CharPPolynomial::var(field, &vars, 1));
        let c = SplittingCandidate::new(sigma).unwrap();
        let f = poly(p, 2, &f);
        prop_assert_eq!(split_apply(&c, &f.frobenius()).unwrap(), f);
    }
}

#[test]
fn products_of_coordinate_splittings() {
    for p in [2, 3, 5, 7] {
        let field = PrimeField::new(p).unwrap();
        let vars = names(3);
        let x = |i| CharPPolynomial::var(field, &vars, i);
        let xyz = SplittingCandidate::new(x(0).mul(&x(1)).mul(&x(2))).unwrap();
        assert!(is_splitting(&xyz));
        assert_eq!(frobenius_section_check(&xyz, 4), None);
        let xy = SplittingCandidate::new(x(0).mul(&x(1))).unwrap();
        assert!(!is_splitting(&xy));
        assert!(frobenius_section_check(&xy, 1).is_some());
        let square = SplittingCandidate::new(x(0).mul(&x(0)).mul(&x(1)).mul(&x(2))).unwrap();
        assert!(!is_splitting(&square));
    }
}

#[test]
fn coordinate_ideals_and_their_closures() {
    let field = PrimeField::new(3).unwrap();
    let vars = names(2);
    let x = CharPPolynomial::var(field, &vars, 0);
    let y = CharPPolynomial::var(field, &vars, 1);
    let c = SplittingCandidate::new(x.mul(&y)).unwrap();
    let ix = ChartIdeal::new("(x)", vec![x.clone()]).unwrap();
    let iy = ChartIdeal::new("(y)", vec![y.clone()]).unwrap();
    let r = closure_property_check(&c, &ix, &iy, 8).unwrap();
    assert!(r.preconditions_hold && r.holds());
    let shifted = ChartIdeal::new("(x+y)", vec![x.add(&y)]).unwrap();
    let bad = compatibility_check(&c, &shifted, 6).unwrap();
    assert!(!bad.compatible);
    assert!(bad.counterexample.is_some());
}

#[test]
fn chart_ideals_are_compatible_for_several_primes() {
    for p in [2, 3, 5] {
        let data = schubert_chart_data(ChartCase::Gr24BigCell, PrimeField::new(p).unwrap()).unwrap();
        let c = data.candidate().unwrap();
        assert!(is_splitting(&c));
        for ideal in &data.ideals {
            assert!(compatibility_check(&c, ideal, 5).unwrap().compatible, "p={p} {}", ideal.label);
        }
    }
}
