use std::fmt;
use std::path::PathBuf;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use wordstat::multisample::rank;
use wordstat::onesample::{leading_variance, ProbabilityVector};
use wordstat::rational::binomial;
use wordstat::{Combination, Composition, Word};

use crate::counter::PatternCounter;
use crate::sample::{sample_multi, sample_one, sample_rng};
use crate::{McError, Result};

/// Which random words to draw.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelSpec {
    /// `n` i.i.d. letters from `p`.
    Iid { n: usize, p: ProbabilityVector },
    /// Uniform shuffles of a word with letter counts `n`.
    Fixed { n: Composition },
}

impl ModelSpec {
    pub fn letters(&self) -> usize {
        match self {
            ModelSpec::Iid { p, .. } => p.len(),
            ModelSpec::Fixed { n } => n.len(),
        }
    }

    pub fn length(&self) -> usize {
        match self {
            ModelSpec::Iid { n, .. } => *n,
            ModelSpec::Fixed { n } => n.total(),
        }
    }

    fn draw(&self, seed: u64, index: u64) -> Word {
        let mut rng = sample_rng(seed, index);
        match self {
            ModelSpec::Iid { n, p } => sample_one(*n, p, &mut rng),
            ModelSpec::Fixed { n } => sample_multi(n, &mut rng),
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Iid { n, p } => {
                let ps: Vec<String> = p
                    .values()
                    .iter()
                    .map(wordstat::rational::fmt_rational)
                    .collect();
                write!(f, "iid n={n} p={}", ps.join(":"))
            }
            ModelSpec::Fixed { n } => {
                let ns: Vec<String> = n.0.iter().map(|c| c.to_string()).collect();
                write!(f, "fixed n={}", ns.join(":"))
            }
        }
    }
}

/// A statistic to simulate together with the order `r` used for scaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimStatistic {
    pub name: String,
    pub combination: Combination,
    pub order: usize,
}

impl SimStatistic {
    /// Computes the order of `combination` exactly under `model`.
    pub fn new(name: &str, combination: Combination, model: &ModelSpec) -> Result<Self> {
        let order = match model {
            ModelSpec::Iid { p, .. } => leading_variance(&combination, p)?.0,
            ModelSpec::Fixed { n } => rank(&combination, n.len())?,
        };
        Ok(SimStatistic {
            name: name.to_string(),
            combination,
            order,
        })
    }

    pub fn with_order(name: &str, combination: Combination, order: usize) -> Self {
        SimStatistic {
            name: name.to_string(),
            combination,
            order,
        }
    }

    /// Factor turning `#f` into the scaled statistic: `n^{r/2}·b̄#f` (i.i.d.),
    /// `(n_a n_b/n)^{r/2}·tĩlde#f` (two letters), `n^{r/2}·tĩlde#f` otherwise.
    fn scale(&self, model: &ModelSpec) -> Result<f64> {
        let r = self.order as i32;
        match model {
            ModelSpec::Iid { n, .. } => {
                let k = self.combination.degree()?.unwrap_or(0);
                if k > *n {
                    return Err(McError::Config(format!(
                        "{}: pattern length {k} exceeds n = {n}",
                        self.name
                    )));
                }
                let c = binomial(*n as u64, k as u64)
                    .to_f64()
                    .unwrap_or(f64::INFINITY);
                Ok((*n as f64).powf(r as f64 / 2.0) / c)
            }
            ModelSpec::Fixed { n } => {
                let kappa = self
                    .combination
                    .composition(n.len())?
                    .unwrap_or_else(|| Composition::new(vec![0; n.len()]));
                if !kappa.le(n) {
                    return Err(McError::Config(format!(
                        "{}: composition {kappa} exceeds n = {n}",
                        self.name
                    )));
                }
                let c: f64 = kappa
                    .0
                    .iter()
                    .zip(&n.0)
                    .map(|(&k, &m)| {
                        binomial(m as u64, k as u64)
                            .to_f64()
                            .unwrap_or(f64::INFINITY)
                    })
                    .product();
                let base = if n.len() == 2 {
                    (n.0[0] * n.0[1]) as f64 / n.total() as f64
                } else {
                    n.total() as f64
                };
                Ok(base.powf(r as f64 / 2.0) / c)
            }
        }
    }
}

/// Everything needed to run a simulation.
#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub model: ModelSpec,
    pub statistics: Vec<SimStatistic>,
    /// Number of sampled words `N`.
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool. Results do not depend on it.
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(McError::Config("sample count must be at least 1".into()));
        }
        if self.statistics.is_empty() {
            return Err(McError::Config("no statistics requested".into()));
        }
        let d = self.model.letters();
        for s in &self.statistics {
            if s.combination
                .terms()
                .any(|(u, _)| u.iter().any(|&x| x as usize >= d))
            {
                return Err(McError::Config(format!(
                    "{} uses letters outside a {d}-letter alphabet",
                    s.name
                )));
            }
            s.scale(&self.model)?;
        }
        if self.threads == Some(0) {
            return Err(McError::Config("thread count must be positive".into()));
        }
        Ok(())
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> T + Send) -> Result<T> {
        match self.threads {
            None => Ok(job()),
            Some(t) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| McError::Pool(e.to_string()))?;
                Ok(pool.install(job))
            }
        }
    }
}

/// Scaled statistic values, one row per sample in sample order.
pub fn simulate_values(config: &SimulationConfig) -> Result<Vec<Vec<f64>>> {
    config.validate()?;
    let combos: Vec<Combination> = config
        .statistics
        .iter()
        .map(|s| s.combination.clone())
        .collect();
    let counter = PatternCounter::new(&combos, config.model.letters());
    let scales = config
        .statistics
        .iter()
        .map(|s| s.scale(&config.model))
        .collect::<Result<Vec<_>>>()?;
    config.run(|| {
        (0..config.samples as u64)
            .into_par_iter()
            .map(|i| {
                let w = config.model.draw(config.seed, i);
                let mut v = counter.evaluate(&w);
                for (x, s) in v.iter_mut().zip(&scales) {
                    *x *= s;
                }
                v
            })
            .collect()
    })
}

/// Empirical moments of the scaled statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEstimate {
    pub names: Vec<String>,
    pub samples: usize,
    pub seed: u64,
    pub mean: Vec<f64>,
    pub mean_stderr: Vec<f64>,
    /// Centred covariance with divisor `N − 1`.
    pub covariance: Vec<Vec<f64>>,
    pub covariance_stderr: Vec<Vec<f64>>,
    /// Raw `E[XY]`, comparable with exact second moments.
    pub second_moment: Vec<Vec<f64>>,
    pub second_moment_stderr: Vec<Vec<f64>>,
}

/// Sum in a fixed binary tree, independent of how the values were produced.
fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        xs.iter().sum()
    } else {
        let (a, b) = xs.split_at(xs.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Mean and standard error of the mean.
fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = pairwise_sum(xs) / n;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let sq: Vec<f64> = xs.iter().map(|x| (x - m) * (x - m)).collect();
    let var = pairwise_sum(&sq) / (n - 1.0);
    (m, (var / n).sqrt())
}

/// Runs the simulation and reduces it to a [`MomentEstimate`].
pub fn estimate_covariance(config: &SimulationConfig) -> Result<MomentEstimate> {
    let values = simulate_values(config)?;
    Ok(summarize(config, &values))
}

fn summarize(config: &SimulationConfig, values: &[Vec<f64>]) -> MomentEstimate {
    let s = config.statistics.len();
    let n = values.len();
    let column = |a: usize| -> Vec<f64> { values.iter().map(|v| v[a]).collect() };
    let cols: Vec<Vec<f64>> = (0..s).map(column).collect();
    let (mean, mean_stderr): (Vec<f64>, Vec<f64>) = cols.iter().map(|c| mean_and_stderr(c)).unzip();
    let mut covariance = vec![vec![0.0; s]; s];
    let mut covariance_stderr = vec![vec![0.0; s]; s];
    let mut second_moment = vec![vec![0.0; s]; s];
    let mut second_moment_stderr = vec![vec![0.0; s]; s];
    for a in 0..s {
        for b in a..s {
            let centred: Vec<f64> = (0..n)
                .map(|i| (cols[a][i] - mean[a]) * (cols[b][i] - mean[b]))
                .collect();
            let (c, cse) = mean_and_stderr(&centred);
            let unbiased = if n > 1 {
                c * n as f64 / (n as f64 - 1.0)
            } else {
                c
            };
            let raw: Vec<f64> = (0..n).map(|i| cols[a][i] * cols[b][i]).collect();
            let (m2, m2se) = mean_and_stderr(&raw);
            for (x, y) in [(a, b), (b, a)] {
                covariance[x][y] = unbiased;
                covariance_stderr[x][y] = cse;
                second_moment[x][y] = m2;
                second_moment_stderr[x][y] = m2se;
            }
        }
    }
    MomentEstimate {
        names: config.statistics.iter().map(|s| s.name.clone()).collect(),
        samples: n,
        seed: config.seed,
        mean,
        mean_stderr,
        covariance,
        covariance_stderr,
        second_moment,
        second_moment_stderr,
    }
}
