use std::sync::Arc;

use koszul_core::algebra::{GradedModule, ModulePresentation, ModuleSide, QuadraticAlgebra, QuadraticPresentation};
use koszul_core::flag::{pluecker_presentation, schubert_module, Grassmannian, PlueckerIndex, SchubertSpec};
use koszul_core::koszul::{
    check_agreement, hilbert_duality_check, is_distributive, koszul_lattice_test, koszul_module_lattice_test,
    lattice_closure, module_tor, tor_table, TorEngine,
};
use koszul_core::linalg::Subspace;
use koszul_core::{Error, Field, PrimeField, Rationals};

fn gf() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

#[test]
fn three_lines_in_a_plane() {
    let q = Rationals;
    let line = |v: Vec<i64>| Subspace::span(q, 2, vec![v.into_iter().map(|x| q.from_i64(x)).collect()]).unwrap();
    let c = lattice_closure(&[line(vec![1, 0]), line(vec![0, 1]), line(vec![1, 1])], 64).unwrap();
    assert_eq!(c.len(), 5);
    let v = is_distributive(&c);
    assert!(!v.distributive);
    assert!(v.witness.unwrap().recheck().unwrap());

    let chain = lattice_closure(&[line(vec![1, 0])], 64).unwrap();
    assert_eq!(chain.len(), 1);
    assert!(is_distributive(&chain).distributive);
    assert!(matches!(
        lattice_closure(&[line(vec![1, 0]), line(vec![0, 1]), line(vec![1, 1])], 3),
        Err(Error::CapExceeded { .. })
    ));
}

#[test]
fn monomial_algebras_are_koszul() {
    let f = gf();
    for killed in [vec![(0, 0)], vec![(0, 1), (1, 0)], vec![(0, 0), (1, 1), (0, 1)], vec![(1, 0), (2, 2), (0, 2)]] {
        let g = 3;
        let p = QuadraticPresentation::monomial(f, g, &killed).unwrap();
        let a = check_agreement(&p, 4, 4096, TorEngine::Auto).unwrap();
        assert_eq!(a.lattice_first_failure, None, "{killed:?}");
        assert_eq!(a.tor_first_off_diagonal, None, "{killed:?}");
        assert!(a.low_degree_sanity);
    }
}

#[test]
fn duality_screen_on_known_algebras() {
    let f = gf();
    let sym = QuadraticPresentation::polynomial_ring(f, 3);
    let d = hilbert_duality_check(&sym, 5).unwrap();
    assert!(d.holds);
    assert_eq!(d.dual_dims, vec![1, 3, 3, 1, 0, 0]);
    let free = QuadraticPresentation::free(f, 2);
    assert_eq!(hilbert_duality_check(&free, 4).unwrap().dual_dims, vec![1, 2, 0, 0, 0]);
    let gr = pluecker_presentation(2, 4, f).unwrap();
    assert!(hilbert_duality_check(&gr, 4).unwrap().holds);
}

fn assert_engines_agree(p: &QuadraticPresentation<PrimeField>, j: usize) {
    let (bar, e1) = tor_table(p, j, j, TorEngine::Bar).unwrap();
    let (res, e2) = tor_table(p, j, j, TorEngine::Resolution).unwrap();
    assert_eq!((e1, e2), (TorEngine::Bar, TorEngine::Resolution));
    assert_eq!(bar, res);
    assert!(bar.is_diagonal(0));
}

#[test]
fn engines_agree_on_projective_space() {
    assert_engines_agree(&pluecker_presentation(1, 4, gf()).unwrap(), 5);
}

#[test]
fn engines_agree_on_gr24() {
    let p = pluecker_presentation(2, 4, gf()).unwrap();
    assert_engines_agree(&p, 5);
    let (t, _) = tor_table(&p, 5, 5, TorEngine::Auto).unwrap();
    assert_eq!(t.diagonal()[..3], [1, 6, 16]);
}

#[test]
fn engines_agree_on_gr25() {
    assert_engines_agree(&pluecker_presentation(2, 5, gf()).unwrap(), 4);
}

#[test]
fn engines_agree_on_schubert_modules() {
    let f = gf();
    let gr = Grassmannian::new(2, 4, f).unwrap();
    let w = PlueckerIndex::new(vec![1, 3], 4).unwrap();
    for (spec, side) in [
        (SchubertSpec::standard(w.clone()), ModuleSide::Right),
        (SchubertSpec::opposite(w.clone()), ModuleSide::Left),
    ] {
        let m = schubert_module(&gr, &spec, side).unwrap();
        let (bar, _) = module_tor(&m, 4, 4, TorEngine::Bar).unwrap();
        let (res, _) = module_tor(&m, 4, 4, TorEngine::Resolution).unwrap();
        assert_eq!(bar, res, "{spec}");
        assert!(bar.is_diagonal(0));
    }
}

#[test]
fn lattice_detects_non_koszul_plane_quotients() {
    // x² = xy, y² = 0: the lattice and Tor should agree on the first bad degree.
    let f = gf();
    let m = f.from_i64(-1);
    let r = Subspace::span(f, 4, vec![vec![1, m, 0, 0], vec![0, 0, 0, 1]]).unwrap();
    let p = QuadraticPresentation::new(vec!["x".into(), "y".into()], None, r).unwrap();
    let a = check_agreement(&p, 4, 4096, TorEngine::Auto).unwrap();
    assert!(a.agree);
    let lattice = koszul_lattice_test(&p, 4, 4096).unwrap();
    assert_eq!(lattice.iter().find(|v| !v.distributive).map(|v| v.degree), a.lattice_first_failure);
}

#[test]
fn free_and_trivial_modules() {
    let f = gf();
    let p = pluecker_presentation(2, 4, f).unwrap();
    let a = Arc::new(QuadraticAlgebra::new(p.clone()).unwrap());
    let free = ModulePresentation::free(p.clone(), ModuleSide::Right, 2);
    let dims = GradedModule::new(a.clone(), free.clone()).unwrap().hilbert_series(3).unwrap().dims;
    assert_eq!(dims, vec![2, 12, 40, 100]);
    let (t, _) = module_tor(&free, 3, 3, TorEngine::Auto).unwrap();
    assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![(0, 0, 2)]);
    assert!(koszul_module_lattice_test(&free, 3, 4096).unwrap().iter().all(|v| v.distributive));
}
