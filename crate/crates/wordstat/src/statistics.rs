//! A catalog of classical statistics written as word combinations, and a
//! classifier that reports their components and limiting variances.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multisample::{
    asymptotic_covariance_multi, decompose_two_sample, embed, grade_multi, lambda_eigenvalue, rank,
};
use crate::onesample::{
    inner_product_p, leading_variance, refine, theorem2_constant, ProbabilityVector,
};
use crate::rational::{q, Q};
use crate::words::{Alphabet, Combination, Composition};

/// Which random word model a statistic is meant for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    /// Independent letters with distribution `p`.
    Iid,
    /// A uniformly random word with fixed letter counts.
    Fixed,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Iid => "iid",
            Model::Fixed => "fixed",
        })
    }
}

/// A named statistic with its alphabet and model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedStatistic {
    pub name: String,
    pub model: Model,
    pub alphabet: Alphabet,
    pub combination: Combination,
    /// Letter distribution for the i.i.d. model; proportions for the fixed one.
    pub p: ProbabilityVector,
}

/// Names accepted by [`build`]; `boolean_parity_<k>` takes any `k ≥ 1`.
pub const NAMES: &[&str] = &[
    "coin_bias",
    "coin_hh_tt",
    "coin_ht_th",
    "pearson_chi2",
    "boolean_parity_<k>",
    "levy_area",
    "levy_area_closed",
    "mann_whitney",
    "cvm",
    "watson_s",
    "watson_v",
    "dice_bias_ab",
    "dice_bias_bc",
    "dice_bias_ca",
    "gepner",
];

fn parse(a: &Alphabet, s: &str) -> Combination {
    Combination::parse(a, s).expect("catalog expressions are well formed")
}

fn stat(name: &str, model: Model, letters: &str, text: &str) -> NamedStatistic {
    let alphabet = Alphabet::new(letters).expect("catalog alphabets are valid");
    let combination = parse(&alphabet, text);
    let p = ProbabilityVector::uniform(alphabet.len());
    NamedStatistic {
        name: name.to_string(),
        model,
        alphabet,
        combination,
        p,
    }
}

fn embedded(name: &str, letters: &str, text: &str) -> NamedStatistic {
    let mut s = stat(name, Model::Fixed, letters, text);
    let d = s.alphabet.len();
    let target = Composition::new(vec![1; d]);
    let mut out = Combination::zero();
    // Terms may have different compositions; embed each separately.
    for (w, c) in s.combination.terms() {
        out = out
            .add(&embed(&Combination::term(w.clone(), c.clone()), d, &target).expect("embedding"));
    }
    s.combination = out;
    s
}

/// Builds a statistic with its default distribution.
pub fn build(name: &str) -> Result<NamedStatistic> {
    build_with(name, None)
}

/// Builds a statistic; `p` overrides the letter distribution where the
/// statistic depends on it (`pearson_chi2`, `boolean_parity_<k>`).
pub fn build_with(name: &str, p: Option<&ProbabilityVector>) -> Result<NamedStatistic> {
    let s = match name {
        "coin_bias" => stat(name, Model::Iid, "HT", "H - T"),
        "coin_hh_tt" => stat(name, Model::Iid, "HT", "HH - TT"),
        "coin_ht_th" => stat(name, Model::Iid, "HT", "HT - TH"),
        "pearson_chi2" => return Ok(pearson(p)),
        "levy_area" => stat(
            name,
            Model::Iid,
            "ENWS",
            "EN - WN + WS - ES - NE + NW - SW + SE",
        ),
        "levy_area_closed" => embedded(name, "ENWS", "EN - WN + WS - ES"),
        "mann_whitney" => stat(name, Model::Fixed, "xy", "1/2*yx - 1/2*xy"),
        "cvm" => stat(
            name,
            Model::Fixed,
            "xy",
            "1/3*xxyy + 1/3*yyxx - 1/6*xyyx - 1/6*yxxy - 1/6*xyxy - 1/6*yxyx",
        ),
        "watson_s" => stat(
            name,
            Model::Fixed,
            "xy",
            "1/12*xxyy + 1/12*yyxx + 1/12*xyyx + 1/12*yxxy - 1/6*xyxy - 1/6*yxyx",
        ),
        "watson_v" => {
            let s = build("watson_s")?;
            let t = build("cvm")?;
            let v = s.combination.sub(&t.combination.scale(&q(1, 4)));
            NamedStatistic {
                name: name.to_string(),
                combination: v,
                ..s
            }
        }
        "dice_bias_ab" => embedded(name, "abc", "ba - ab"),
        "dice_bias_bc" => embedded(name, "abc", "cb - bc"),
        "dice_bias_ca" => embedded(name, "abc", "ac - ca"),
        "gepner" => stat(
            name,
            Model::Fixed,
            "abc",
            "cba + bac + acb - abc - bca - cab",
        ),
        _ => {
            if let Some(k) = name.strip_prefix("boolean_parity_") {
                let k: usize = k
                    .parse()
                    .map_err(|_| Error::UnknownStatistic(name.to_string()))?;
                if k == 0 {
                    return Err(Error::UnknownStatistic(name.to_string()));
                }
                return boolean_parity(k, p);
            }
            return Err(Error::UnknownStatistic(name.to_string()));
        }
    };
    Ok(s)
}

/// `Σ_x xx/p_x − Σ_{|u|=2} u`, the quadratic form behind Pearson's χ².
fn pearson(p: Option<&ProbabilityVector>) -> NamedStatistic {
    let p = p.cloned().unwrap_or_else(|| ProbabilityVector::uniform(2));
    let d = p.len();
    let alphabet = if d == 2 {
        Alphabet::new("HT")
    } else {
        Ok(Alphabet::digits(d))
    }
    .expect("alphabet");
    let mut f = Combination::zero();
    for u in crate::words::enumerate_words(d, 2) {
        let mut c = -Q::one();
        if u[0] == u[1] {
            c += Q::one() / p.get(u[0] as usize);
        }
        f.add_term(u, c);
    }
    NamedStatistic {
        name: "pearson_chi2".into(),
        model: Model::Iid,
        alphabet,
        combination: f,
        p,
    }
}

/// `(q·0 − p·1)^{⊗k}` over the bits `0,1` with `P(0) = p`. At `p = 1/2` the
/// factor is taken as `0 − 1`, which gives the parity bias of `k`-bit
/// subwords.
fn boolean_parity(k: usize, p: Option<&ProbabilityVector>) -> Result<NamedStatistic> {
    let alphabet = Alphabet::new("01")?;
    let p = p.cloned().unwrap_or_else(|| ProbabilityVector::uniform(2));
    if p.len() != 2 {
        return Err(Error::InvalidProbability(
            "boolean statistics need two letters".into(),
        ));
    }
    let factor = if p == ProbabilityVector::uniform(2) {
        [Q::one(), -Q::one()]
    } else {
        [p.get(1).clone(), -p.get(0).clone()]
    };
    let mut f = Combination::word(Vec::new());
    for _ in 0..k {
        f = f.map_words(|u| {
            let mut out = Combination::zero();
            for (x, c) in factor.iter().enumerate() {
                let mut w = u.to_vec();
                w.push(x as u8);
                out.add_term(w, c.clone());
            }
            out
        });
    }
    Ok(NamedStatistic {
        name: format!("boolean_parity_{k}"),
        model: Model::Iid,
        alphabet,
        combination: f,
        p,
    })
}

/// One nonzero component found by [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentReport {
    /// `(r, m)` in the i.i.d. model, `(r, i, j)` for two letters, `(r)`
    /// otherwise.
    pub label: Vec<usize>,
    /// Squared norm of the component: `⟨·,·⟩_p` for i.i.d., standard otherwise.
    pub norm: Q,
    /// The limiting variance per unit norm, when known in closed form.
    pub constant: Option<Q>,
}

/// Result of [`classify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub model: Model,
    /// Pattern length `k` (i.i.d.) or composition `κ` (fixed), as text.
    pub shape: String,
    pub components: Vec<ComponentReport>,
    /// Leading order `r`: the normalized statistic scales as `n^{−r/2}`.
    pub order: usize,
    /// i.i.d.: `lim n^r E[(b̄#f)²]`. Two letters:
    /// `lim ((n_a n_b)/n)^r E[(tĩlde#f)²]`. More letters: `lim n^r E[(tĩlde#f)²]`
    /// with proportions `p`.
    pub variance: Q,
}

/// Decomposes a statistic and reports its leading-order variance.
pub fn classify(s: &NamedStatistic) -> Result<Classification> {
    match s.model {
        Model::Iid => classify_iid(&s.combination, &s.p),
        Model::Fixed => classify_fixed(&s.combination, &s.p),
    }
}

/// Classification in the i.i.d. model.
pub fn classify_iid(f: &Combination, p: &ProbabilityVector) -> Result<Classification> {
    let k = f.degree()?.ok_or(Error::ZeroCombination)?;
    let dec = refine(f, p)?;
    let components = dec
        .nonzero()
        .map(|c| ComponentReport {
            label: c.label.clone(),
            norm: inner_product_p(&c.part, &c.part, p),
            constant: Some(theorem2_constant(k, c.label[0], c.label[1])),
        })
        .collect();
    let (order, variance) = leading_variance(f, p)?;
    Ok(Classification {
        model: Model::Iid,
        shape: k.to_string(),
        components,
        order,
        variance,
    })
}

/// Classification in the fixed-composition model.
pub fn classify_fixed(f: &Combination, p: &ProbabilityVector) -> Result<Classification> {
    let d = p.len();
    let kappa = f.composition(d)?.ok_or(Error::ZeroCombination)?;
    let order = rank(f, d)?;
    if d == 2 {
        let dec = decompose_two_sample(f)?;
        let mut components = Vec::new();
        let mut variance = Q::zero();
        for c in dec.nonzero() {
            let norm = c.part.dot(&c.part);
            let constant = if c.label[0] == 0 {
                None
            } else {
                Some(lambda_eigenvalue(
                    &kappa, c.label[0], c.label[1], c.label[2],
                )?)
            };
            if c.label[0] == order {
                if let Some(l) = &constant {
                    variance += l * &norm;
                }
            }
            components.push(ComponentReport {
                label: c.label.clone(),
                norm,
                constant,
            });
        }
        return Ok(Classification {
            model: Model::Fixed,
            shape: kappa.to_string(),
            components,
            order,
            variance,
        });
    }
    let dec = grade_multi(f, d)?;
    let components = dec
        .nonzero()
        .map(|c| ComponentReport {
            label: c.label.clone(),
            norm: c.part.dot(&c.part),
            constant: None,
        })
        .collect();
    let variance = if order == 0 {
        Q::zero()
    } else {
        asymptotic_covariance_multi(f, f, p)?
    };
    Ok(Classification {
        model: Model::Fixed,
        shape: kappa.to_string(),
        components,
        order,
        variance,
    })
}
