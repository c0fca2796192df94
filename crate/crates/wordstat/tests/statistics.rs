use wordstat::multisample::{asymptotic_covariance_multi, embed, rank};
use wordstat::onesample::{inner_product_p, ProbabilityVector};
use wordstat::rational::{q, qi};
use wordstat::statistics::{build, build_with, classify, Model};
use wordstat::words::{Alphabet, Combination, Composition};

fn labels(name: &str) -> Vec<Vec<usize>> {
    classify(&build(name).unwrap())
        .unwrap()
        .components
        .into_iter()
        .map(|c| c.label)
        .collect()
}

fn variance(name: &str) -> wordstat::Q {
    classify(&build(name).unwrap()).unwrap().variance
}

#[test]
fn cramer_von_mises() {
    assert_eq!(labels("cvm"), vec![vec![2, 0, 1]]);
    assert_eq!(variance("cvm"), q(1, 45));
}

#[test]
fn watson_splits_into_cvm_and_v() {
    let s = build("watson_s").unwrap().combination;
    let t = build("cvm").unwrap().combination;
    let v = build("watson_v").unwrap().combination;
    assert_eq!(s, v.add(&t.scale(&q(1, 4))));
    assert_eq!(v.dot(&t), qi(0));
    assert_eq!(labels("watson_v"), vec![vec![2, 0, 0]]);
    assert_eq!(variance("watson_v"), q(1, 720));
    assert_eq!(variance("watson_s"), q(1, 360));
}

#[test]
fn mann_whitney() {
    assert_eq!(labels("mann_whitney"), vec![vec![1, 0, 0]]);
    assert_eq!(variance("mann_whitney"), q(1, 12));
    let s = build("mann_whitney").unwrap();
    assert_eq!(
        asymptotic_covariance_multi(&s.combination, &s.combination, &s.p).unwrap(),
        q(1, 3)
    );
}

#[test]
fn pearson_is_pure_second_order() {
    assert_eq!(labels("pearson_chi2"), vec![vec![2, 0]]);
    let p = ProbabilityVector::parse("1/6,1/3,1/2").unwrap();
    let s = build_with("pearson_chi2", Some(&p)).unwrap();
    let c = classify(&s).unwrap();
    assert_eq!(
        c.components
            .iter()
            .map(|c| c.label.clone())
            .collect::<Vec<_>>(),
        vec![vec![2, 0]]
    );
    // Limit of n²E[(b̄#f)²] for the χ² form is 2(d−1).
    assert_eq!(c.variance, qi(4));
}

#[test]
fn boolean_parity_sits_on_top() {
    for k in 1..=4usize {
        let name = format!("boolean_parity_{k}");
        assert_eq!(labels(&name), vec![vec![k, 0]]);
        let f = (1..=k).product::<usize>();
        assert_eq!(variance(&name), qi(f as i64));
    }
    let p = ProbabilityVector::parse("1/3,2/3").unwrap();
    let s = build_with("boolean_parity_2", Some(&p)).unwrap();
    let c = classify(&s).unwrap();
    assert_eq!(c.order, 2);
    assert_eq!(
        c.variance,
        inner_product_p(&s.combination, &s.combination, &p) * qi(2)
    );
}

#[test]
fn coin_statistics() {
    assert_eq!(variance("coin_bias"), qi(1));
    assert_eq!(variance("coin_hh_tt"), qi(1));
    assert_eq!(variance("coin_ht_th"), q(1, 3));
    assert_eq!(labels("coin_ht_th"), vec![vec![1, 1]]);
}

#[test]
fn levy_area() {
    assert_eq!(labels("levy_area"), vec![vec![2, 0]]);
    assert_eq!(variance("levy_area"), qi(1));
}

#[test]
fn closed_levy_area_matches_logistic_variance() {
    let s = build("levy_area_closed").unwrap();
    assert_eq!(s.model, Model::Fixed);
    assert_eq!(rank(&s.combination, 4).unwrap(), 2);
    // #a'/4n with density π sech²(2πx) has variance 1/48; with n letters of
    // each kind that is C′ = 16·16/48.
    assert_eq!(variance("levy_area_closed"), q(16, 3));
}

#[test]
fn dice_covariances() {
    let names = ["dice_bias_ab", "dice_bias_bc", "dice_bias_ca"];
    let stats: Vec<_> = names.iter().map(|n| build(n).unwrap()).collect();
    let p = ProbabilityVector::uniform(3);
    for (i, a) in stats.iter().enumerate() {
        for (j, b) in stats.iter().enumerate() {
            let c = asymptotic_covariance_multi(&a.combination, &b.combination, &p).unwrap();
            assert_eq!(
                c,
                if i == j { qi(2) } else { qi(-1) },
                "{} {}",
                a.name,
                b.name
            );
        }
    }
}

#[test]
fn gepner_is_sum_of_biases() {
    let g = build("gepner").unwrap();
    let sum = ["dice_bias_ab", "dice_bias_bc", "dice_bias_ca"]
        .iter()
        .fold(Combination::zero(), |acc, n| {
            acc.add(&build(n).unwrap().combination)
        });
    assert_eq!(sum, g.combination);
    assert_eq!(rank(&g.combination, 3).unwrap(), 2);
    assert_eq!(variance("gepner"), qi(9));
}

#[test]
fn embedding_a_difference_of_pairs() {
    let a = Alphabet::new("abc").unwrap();
    let f = Combination::parse(&a, "ba - ab").unwrap();
    let e = embed(&f, 3, &Composition::new(vec![1, 1, 1])).unwrap();
    assert_eq!(
        e,
        Combination::parse(&a, "cba + bca + bac - cab - acb - abc").unwrap()
    );
}

#[test]
fn unknown_names_are_rejected() {
    assert!(build("nope").is_err());
    assert!(build("boolean_parity_0").is_err());
    assert!(build("boolean_parity_x").is_err());
}

#[test]
fn unembedded_biases_give_the_same_covariances() {
    let a = Alphabet::new("abc").unwrap();
    let p = ProbabilityVector::uniform(3);
    let raw: Vec<Combination> = ["ba - ab", "cb - bc", "ac - ca"]
        .iter()
        .map(|s| Combination::parse(&a, s).unwrap())
        .collect();
    for (i, f) in raw.iter().enumerate() {
        for (j, g) in raw.iter().enumerate() {
            let c = asymptotic_covariance_multi(f, g, &p).unwrap();
            assert_eq!(c, if i == j { qi(2) } else { qi(-1) });
        }
    }
    let n = Composition::new(vec![4, 3, 3]);
    let embedded = build("dice_bias_ab").unwrap().combination;
    let other = build("dice_bias_bc").unwrap().combination;
    assert_eq!(
        wordstat::multisample::exact_normalized_moment_multi(&raw[0], &raw[1], &n).unwrap(),
        wordstat::multisample::exact_normalized_moment_multi(&embedded, &other, &n).unwrap()
    );
}
