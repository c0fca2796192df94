//! One function per subcommand, each returning a [`Report`].

use std::io::Read;

use serde_json::Value;
use thiserror::Error;
use wordstat::multisample::{
    exact_normalized_moment_multi, grading_spaces, small_lambda, two_sample_components,
    two_sample_spectrum,
};
use wordstat::onesample::{
    decompose_space, exact_moment_one_sample, exact_normalized_moment, spectrum_m,
    ProbabilityVector,
};
use wordstat::rational::{binomial, qb, qi};
use wordstat::statistics::{build_with, classify, Model, NamedStatistic};
use wordstat::words::count_combination;
use wordstat::{Alphabet, Combination, Composition, Q};
use wordstat_mc::{
    estimate_covariance, write_csv, McError, ModelSpec, SimStatistic, SimulationConfig,
};

use crate::args::{
    ClassifyArgs, CountArgs, DecomposeArgs, ModelArg, MomentsArgs, SimulateArgs, SpectrumArgs,
};
use crate::report::{label, rat, Report};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or inconsistent flags; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// A precondition of the computation failed; exit code 1.
    #[error("{0}")]
    Domain(String),
}

impl From<wordstat::Error> for CliError {
    fn from(e: wordstat::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        match e {
            McError::Config(m) => CliError::Usage(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_composition(s: &str, flag: &str) -> Result<Composition> {
    let parts: std::result::Result<Vec<usize>, _> =
        s.split(',').map(|x| x.trim().parse()).collect();
    parts
        .map(Composition::new)
        .map_err(|_| usage(format!("{flag} expects comma-separated counts, got {s:?}")))
}

fn parse_alphabet(s: &str) -> Result<Alphabet> {
    Alphabet::new(s).map_err(|e| usage(format!("--alphabet: {e}")))
}

fn parse_p(s: &str) -> Result<ProbabilityVector> {
    ProbabilityVector::parse(s).map_err(|e| usage(format!("--p: {e}")))
}

fn model_of(m: ModelArg) -> Model {
    match m {
        ModelArg::Iid => Model::Iid,
        ModelArg::Fixed => Model::Fixed,
    }
}

fn is_catalog_name(s: &str) -> bool {
    wordstat::statistics::NAMES.contains(&s) || s.starts_with("boolean_parity_")
}

/// A catalog statistic, or a combination over `alphabet`.
fn resolve(
    text: &str,
    model: Option<Model>,
    alphabet: Option<&Alphabet>,
    p: Option<&ProbabilityVector>,
) -> Result<NamedStatistic> {
    if is_catalog_name(text) {
        let mut s = build_with(text, p).map_err(|e| usage(e.to_string()))?;
        if let Some(a) = alphabet {
            if a != &s.alphabet {
                return Err(usage(format!(
                    "{text} is defined over the alphabet {:?}",
                    s.alphabet.letters().iter().collect::<String>()
                )));
            }
        }
        if let Some(p) = p {
            if p.len() != s.alphabet.len() {
                return Err(usage(format!(
                    "--p has {} entries but {text} uses {} letters",
                    p.len(),
                    s.alphabet.len()
                )));
            }
            s.p = p.clone();
        }
        if let Some(m) = model {
            s.model = m;
        }
        return Ok(s);
    }
    let alphabet = alphabet
        .ok_or_else(|| usage(format!("{text:?} is not a catalog name; give --alphabet")))?;
    let model = model.ok_or_else(|| usage("combinations need --model"))?;
    let combination = Combination::parse(alphabet, text)
        .map_err(|e| usage(format!("statistic {text:?}: {e}")))?;
    if combination.is_zero() {
        return Err(usage(format!("statistic {text:?} is zero")));
    }
    let p = match p {
        Some(p) if p.len() != alphabet.len() => {
            return Err(usage(format!(
                "--p has {} entries for {} letters",
                p.len(),
                alphabet.len()
            )))
        }
        Some(p) => p.clone(),
        None => ProbabilityVector::uniform(alphabet.len()),
    };
    Ok(NamedStatistic {
        name: text.to_string(),
        model,
        alphabet: alphabet.clone(),
        combination,
        p,
    })
}

fn read_source(text: Option<&str>, file: Option<&std::path::Path>) -> Result<String> {
    let raw = match (text, file) {
        (Some("-"), _) => read_stdin()?,
        (Some(t), _) => t.to_string(),
        (None, Some(f)) if f.as_os_str() == "-" => read_stdin()?,
        (None, Some(f)) => std::fs::read_to_string(f)
            .map_err(|e| usage(format!("--text-file {}: {e}", f.display())))?,
        (None, None) => return Err(usage("give --text or --text-file")),
    };
    Ok(raw.chars().filter(|c| !c.is_whitespace()).collect())
}

fn read_stdin() -> Result<String> {
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| usage(format!("stdin: {e}")))?;
    Ok(s)
}

pub fn count(args: &CountArgs) -> Result<Report> {
    let text = read_source(args.text.as_deref(), args.text_file.as_deref())?;
    let alphabet = match &args.alphabet {
        Some(a) => parse_alphabet(a)?,
        None => {
            let mut letters: Vec<char> = text
                .chars()
                .chain(args.pattern.chars().filter(|c| c.is_alphabetic()))
                .collect();
            letters.sort_unstable();
            letters.dedup();
            parse_alphabet(&letters.into_iter().collect::<String>())?
        }
    };
    let f = Combination::parse(&alphabet, &args.pattern)
        .map_err(|e| usage(format!("--pattern: {e}")))?;
    let w = alphabet
        .parse_word(&text)
        .map_err(|e| usage(format!("text: {e}")))?;
    Ok(Report::new().field("count", rat(&count_combination(&f, &w))))
}

pub fn decompose(args: &DecomposeArgs) -> Result<Report> {
    match args.model {
        ModelArg::Iid => {
            let k = args.k.ok_or_else(|| usage("--model iid needs --k"))?;
            if args.kappa.is_some() {
                return Err(usage("--kappa belongs to --model fixed"));
            }
            let p = match (&args.p, &args.alphabet) {
                (Some(p), a) => {
                    let p = parse_p(p)?;
                    if let Some(a) = a {
                        if parse_alphabet(a)?.len() != p.len() {
                            return Err(usage("--p and --alphabet have different lengths"));
                        }
                    }
                    p
                }
                (None, Some(a)) => ProbabilityVector::uniform(parse_alphabet(a)?.len()),
                (None, None) => return Err(usage("--model iid needs --alphabet or --p")),
            };
            let mut report = Report::new()
                .field("model", "iid")
                .field("k", k)
                .field("letters", p.len())
                .columns(&["r", "m", "dim", "constant", "mu"]);
            for c in decompose_space(k, &p)? {
                let (r, m) = (c.label[1], c.label[2]);
                // Eigenvalue of the merging matrix on V_kr; undefined at r = 0.
                let mu = if r == 0 {
                    Value::Null
                } else {
                    rat(&qb(binomial((2 * k - r) as u64, (k + m) as u64)))
                };
                report.row(vec![
                    r.into(),
                    m.into(),
                    c.dim.into(),
                    c.value.as_ref().map_or(Value::Null, rat),
                    mu,
                ]);
            }
            Ok(report)
        }
        ModelArg::Fixed => {
            let kappa = parse_composition(
                args.kappa
                    .as_deref()
                    .ok_or_else(|| usage("--model fixed needs --kappa"))?,
                "--kappa",
            )?;
            if args.k.is_some() {
                return Err(usage("--k belongs to --model iid"));
            }
            if kappa.total() == 0 {
                return Err(usage("--kappa must be nonzero"));
            }
            if let Some(a) = &args.alphabet {
                if parse_alphabet(a)?.len() != kappa.len() {
                    return Err(usage("--alphabet and --kappa have different lengths"));
                }
            }
            let spaces = grading_spaces(&kappa)?;
            let base = Report::new()
                .field("model", "fixed")
                .field("kappa", label(&kappa.0));
            if kappa.len() != 2 {
                let mut report = base.columns(&["r", "dim"]);
                for (r, s) in spaces.iter().enumerate() {
                    if s.dim() > 0 {
                        report.row(vec![r.into(), s.dim().into()]);
                    }
                }
                return Ok(report);
            }
            let mut report = base.columns(&["r", "i", "j", "dim", "lambda"]);
            report.row(vec![
                0.into(),
                kappa.total().into(),
                0.into(),
                spaces[0].dim().into(),
                Value::Null,
            ]);
            for r in 1..=kappa.0[0].min(kappa.0[1]) {
                for c in two_sample_components(&kappa, r)? {
                    report.row(vec![
                        r.into(),
                        c.i.into(),
                        c.j.into(),
                        c.space.dim().into(),
                        c.lambda.as_ref().map_or(Value::Null, rat),
                    ]);
                }
            }
            Ok(report)
        }
    }
}

pub fn classify_cmd(args: &ClassifyArgs) -> Result<Report> {
    let alphabet = args.alphabet.as_deref().map(parse_alphabet).transpose()?;
    let p = args.p.as_deref().map(parse_p).transpose()?;
    let s = resolve(
        &args.stat,
        args.model.map(model_of),
        alphabet.as_ref(),
        p.as_ref(),
    )?;
    let c = classify(&s)?;
    let mut report = Report::new()
        .field("name", s.name.as_str())
        .field("statistic", s.combination.display(&s.alphabet))
        .field("model", c.model.to_string())
        .field("shape", c.shape.as_str())
        .field("order", c.order)
        .field("variance", rat(&c.variance))
        .columns(&["label", "norm", "constant"]);
    for comp in &c.components {
        report.row(vec![
            label(&comp.label),
            rat(&comp.norm),
            comp.constant.as_ref().map_or(Value::Null, rat),
        ]);
    }
    Ok(report)
}

pub fn moments(args: &MomentsArgs) -> Result<Report> {
    if !args.exact {
        return Err(usage(
            "moments are exact only; pass --exact, or use simulate",
        ));
    }
    let alphabet = args.alphabet.as_deref().map(parse_alphabet).transpose()?;
    let p = args.p.as_deref().map(parse_p).transpose()?;
    let model = if args.n.is_some() {
        Model::Iid
    } else {
        Model::Fixed
    };
    let stats = args
        .stats
        .iter()
        .map(|t| resolve(t, Some(model), alphabet.as_ref(), p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let d = stats[0].alphabet.len();
    if stats.iter().any(|s| s.alphabet.len() != d) {
        return Err(usage("all statistics must use alphabets of the same size"));
    }
    let cols = ["stat_a", "stat_b", "moment", "normalized"];
    let mut report;
    let mut pairs = Vec::new();
    for (a, sa) in stats.iter().enumerate() {
        for sb in &stats[a..] {
            pairs.push((sa, sb));
        }
    }
    if let Some(n) = args.n {
        let p = p.unwrap_or_else(|| stats[0].p.clone());
        if p.len() != d {
            return Err(usage("--p length does not match the alphabet"));
        }
        report = Report::new()
            .field("model", "iid")
            .field("n", n)
            .columns(&cols);
        for (sa, sb) in pairs {
            let raw = exact_moment_one_sample(&sa.combination, &sb.combination, n, &p)?;
            let norm = exact_normalized_moment(&sa.combination, &sb.combination, n, &p)?;
            report.row(vec![
                sa.name.as_str().into(),
                sb.name.as_str().into(),
                rat(&raw),
                rat(&norm),
            ]);
        }
    } else {
        let n = parse_composition(args.nvec.as_deref().unwrap_or_default(), "--nvec")?;
        if n.len() != d {
            return Err(usage(format!(
                "--nvec has {} counts for {d} letters",
                n.len()
            )));
        }
        report = Report::new()
            .field("model", "fixed")
            .field("n", label(&n.0))
            .columns(&cols);
        for (sa, sb) in pairs {
            let norm = exact_normalized_moment_multi(&sa.combination, &sb.combination, &n)?;
            let raw = norm.clone()
                * denominator(&sa.combination, &n)?
                * denominator(&sb.combination, &n)?;
            report.row(vec![
                sa.name.as_str().into(),
                sb.name.as_str().into(),
                rat(&raw),
                rat(&norm),
            ]);
        }
    }
    Ok(report)
}

/// `Π C(n_x, k_x)`.
fn denominator(f: &Combination, n: &Composition) -> Result<Q> {
    let kappa = f
        .composition(n.len())?
        .ok_or(wordstat::Error::ZeroCombination)?;
    Ok(kappa.0.iter().zip(&n.0).fold(qi(1), |acc, (&k, &m)| {
        acc * qb(binomial(m as u64, k as u64))
    }))
}

pub fn spectrum(args: &SpectrumArgs) -> Result<Report> {
    if let Some(k) = args.k {
        let r: usize = args
            .r
            .as_deref()
            .unwrap_or_default()
            .parse()
            .map_err(|_| usage("--r with --k expects a single integer"))?;
        if r == 0 || r > k {
            return Err(usage(format!("--r must satisfy 1 ≤ r ≤ k = {k}")));
        }
        let mut report = Report::new().field("k", k).field("r", r).columns(&[
            "m",
            "eigenvalue",
            "dim",
            "b_eigenvalue",
        ]);
        let pairs = spectrum_m(k, r)?;
        for m in 0..=k - r {
            let ev = qb(binomial((2 * k - r) as u64, (k + m) as u64));
            let dim = pairs
                .iter()
                .find(|(v, _)| *v == ev)
                .map_or(0, |(_, s)| s.dim());
            let b = (k - r - m) * (k + m);
            report.row(vec![m.into(), rat(&ev), dim.into(), b.into()]);
        }
        return Ok(report);
    }
    let kappa = parse_composition(args.kappa.as_deref().unwrap_or_default(), "--kappa")?;
    if kappa.len() != 2 {
        return Err(usage("--kappa takes exactly two counts"));
    }
    let (ka, kb) = (kappa.0[0], kappa.0[1]);
    let kmin = ka.min(kb);
    let rs: Vec<Composition> = match &args.r {
        Some(r) => {
            let r = parse_composition(r, "--r")?;
            if r.len() != 2 || r.total() == 0 || r.total() > kmin {
                return Err(usage(format!(
                    "--r must be r_a,r_b with 1 ≤ r_a + r_b ≤ {kmin}"
                )));
            }
            vec![r]
        }
        None => (1..=kmin)
            .flat_map(|t| {
                (0..=t)
                    .rev()
                    .map(move |ra| Composition::new(vec![ra, t - ra]))
            })
            .collect(),
    };
    let k = kappa.total();
    let mut report = Report::new().field("kappa", label(&kappa.0)).columns(&[
        "r_a",
        "r_b",
        "r",
        "i",
        "j",
        "eigenvalue",
        "dim",
    ]);
    for rv in rs {
        let rr = rv.total();
        let spectrum = two_sample_spectrum(&kappa, &rv)?;
        let comps = two_sample_components(&kappa, rr)?;
        let scale =
            qb(binomial((k - 2 * rr) as u64, (kmin - rr) as u64)
                * binomial(rr as u64, rv.0[0] as u64));
        for (ev, space) in spectrum {
            if space.dim() == 0 {
                continue;
            }
            let found = comps.iter().find(|c| {
                small_lambda(&kappa, rr, c.i, c.j)
                    .map(|l| l * &scale == ev)
                    .unwrap_or(false)
            });
            let (i, j) = found.map_or((Value::Null, Value::Null), |c| (c.i.into(), c.j.into()));
            report.row(vec![
                rv.0[0].into(),
                rv.0[1].into(),
                rr.into(),
                i,
                j,
                rat(&ev),
                space.dim().into(),
            ]);
        }
    }
    Ok(report)
}

pub fn simulate(args: &SimulateArgs) -> Result<String> {
    let alphabet = args.alphabet.as_deref().map(parse_alphabet).transpose()?;
    let p = args.p.as_deref().map(parse_p).transpose()?;
    let model = model_of(args.model);
    let stats = args
        .stats
        .iter()
        .map(|t| resolve(t, Some(model), alphabet.as_ref(), p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let d = stats[0].alphabet.len();
    if stats.iter().any(|s| s.alphabet.len() != d) {
        return Err(usage("all statistics must use alphabets of the same size"));
    }
    let spec = match (args.model, args.n, &args.nvec) {
        (ModelArg::Iid, Some(n), None) => {
            let p = p.unwrap_or_else(|| stats[0].p.clone());
            if p.len() != d {
                return Err(usage("--p length does not match the alphabet"));
            }
            ModelSpec::Iid { n, p }
        }
        (ModelArg::Fixed, None, Some(nv)) => {
            let n = parse_composition(nv, "--nvec")?;
            if n.len() != d {
                return Err(usage(format!(
                    "--nvec has {} counts for {d} letters",
                    n.len()
                )));
            }
            ModelSpec::Fixed { n }
        }
        (ModelArg::Iid, _, _) => return Err(usage("--model iid takes --n")),
        (ModelArg::Fixed, _, _) => return Err(usage("--model fixed takes --nvec")),
    };
    let statistics = stats
        .iter()
        .map(|s| SimStatistic::new(&s.name, s.combination.clone(), &spec))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let config = SimulationConfig {
        model: spec,
        statistics,
        samples: args.samples,
        seed: args.seed,
        threads: args.threads,
        output: args.out.clone(),
    };
    config.validate()?;
    let estimate = estimate_covariance(&config)?;
    let mut buf = Vec::new();
    write_csv(&config, &estimate, &mut buf)?;
    let csv = String::from_utf8(buf).expect("csv is utf-8");
    match &config.output {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| CliError::Domain(format!("writing {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(csv),
    }
}
