use num_traits::Signed;
use wordstat::linalg::{BilinearForm, Subspace};
use wordstat::multisample::{
    decompose_two_sample, exact_normalized_moment_multi, grading_spaces, lambda_eigenvalue,
    moment_matrices, two_sample_component, two_sample_components, two_sample_dimension,
    two_sample_spectrum,
};
use wordstat::rational::{binomial, q, qb, qi};
use wordstat::words::{enumerate_by_composition, Combination, Composition};
use wordstat::Q;

fn comp(v: &[usize]) -> Composition {
    Composition::new(v.to_vec())
}

#[test]
fn spectrum_matches_components() {
    for kappa in [[2, 1], [2, 2], [3, 2], [3, 3]] {
        let kappa = comp(&kappa);
        let k = kappa.total();
        let kb = kappa.0[1];
        for ra in 0..=kb {
            for rb in 0..=kb - ra {
                let rr = ra + rb;
                if rr == 0 {
                    continue;
                }
                let spectrum = two_sample_spectrum(&kappa, &comp(&[ra, rb])).unwrap();
                let comps = two_sample_components(&kappa, rr).unwrap();
                for c in &comps {
                    let scale = qb(binomial((k - 2 * rr) as u64, (kb - rr) as u64)
                        * binomial(rr as u64, ra as u64));
                    let lam =
                        wordstat::multisample::small_lambda(&kappa, rr, c.i, c.j).unwrap() * scale;
                    let (_, eig) = spectrum
                        .iter()
                        .find(|(v, _)| *v == lam)
                        .expect("eigenvalue present");
                    assert!(
                        eig.contains_space(&c.space),
                        "{kappa} r=({ra},{rb}) (i,j)=({},{})",
                        c.i,
                        c.j
                    );
                    assert_eq!(
                        c.space.dim(),
                        two_sample_dimension(&kappa, rr, c.i, c.j).unwrap()
                    );
                }
                let total: usize = spectrum.iter().map(|(_, s)| s.dim()).sum();
                assert_eq!(total, grading_spaces(&kappa).unwrap()[rr].dim());
            }
        }
    }
}

#[test]
fn components_are_orthogonal_and_span() {
    for kappa in [[2, 2], [3, 2], [3, 3], [4, 2]] {
        let kappa = comp(&kappa);
        for r in 1..=kappa.0[1] {
            let comps = two_sample_components(&kappa, r).unwrap();
            let n = enumerate_by_composition(&kappa).len();
            let sum = comps
                .iter()
                .fold(Subspace::zero(n), |acc, c| acc.sum(&c.space));
            assert_eq!(sum, grading_spaces(&kappa).unwrap()[r]);
            for (a, x) in comps.iter().enumerate() {
                for y in &comps[a + 1..] {
                    for u in x.space.vectors() {
                        for v in y.space.vectors() {
                            assert_eq!(BilinearForm::Standard.apply(u, v), qi(0));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn proportional_moment_matrices() {
    let kappa = comp(&[3, 3]);
    for rr in 1..=3usize {
        let base = moment_matrices(&kappa, &comp(&[0, rr])).unwrap().m;
        for ra in 1..=rr {
            let other = moment_matrices(&kappa, &comp(&[ra, rr - ra])).unwrap().m;
            let ratio = Q::new(binomial(rr as u64, ra as u64), 1.into());
            assert_eq!(other, base.scale(&ratio));
        }
    }
}

#[test]
fn decomposition_finds_single_component() {
    let kappa = comp(&[2, 2]);
    let space = two_sample_component(&kappa, 2, 0, 1).unwrap();
    assert_eq!(space.dim(), 1);
    let basis = enumerate_by_composition(&kappa);
    let t = Combination::from_vector(&basis, &space.vectors()[0]);
    let d = decompose_two_sample(&t).unwrap();
    assert_eq!(d.support(), vec![vec![2, 0, 1]]);
    assert_eq!(d.total(), t);
}

#[test]
fn theorem_four_limits() {
    // ((n_a n_b)/n)^r E[tĩlde#f²] approaches Λ⟨f,f⟩ on each W_κrij.
    for (kappa, r, i, j) in [
        ([1, 1], 1, 0, 0),
        ([2, 1], 1, 1, 0),
        ([2, 2], 2, 0, 1),
        ([2, 2], 2, 0, 0),
    ] {
        let kappa = comp(&kappa);
        let space = two_sample_component(&kappa, r, i, j).unwrap();
        let basis = enumerate_by_composition(&kappa);
        let f = Combination::from_vector(&basis, &space.vectors()[0]);
        let target = lambda_eigenvalue(&kappa, r, i, j).unwrap() * f.dot(&f);
        let mut prev_gap: Option<Q> = None;
        for (na, nb) in [(20, 30), (40, 60), (80, 120)] {
            let n = comp(&[na, nb]);
            let m = exact_normalized_moment_multi(&f, &f, &n).unwrap();
            let scale = Q::new((na * nb).into(), (na + nb).into());
            let scaled = (0..r).fold(m, |acc, _| acc * &scale);
            let gap = (&scaled - &target).abs();
            if let Some(p) = &prev_gap {
                assert!(
                    gap < *p || gap == qi(0),
                    "{kappa} ({r},{i},{j}): gap {gap} after {p}"
                );
            }
            prev_gap = Some(gap);
        }
        let small = prev_gap.unwrap() / &target;
        assert!(small < q(1, 10), "{kappa} relative gap {small}");
    }
}
