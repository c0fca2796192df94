//! The i.i.d. model: words of `n` independent letters drawn from `p`.
//!
//! Combinations are expanded in a tensor basis `D^k`, where the first basis
//! vector of `ℚΣ` is the all-ones vector `1` and the others span its
//! `p`-orthogonal complement. The number of non-`1` letters grades a
//! combination by its order of magnitude, and the spectral pieces `W_krm` come
//! from kernels of the operator that deletes a `1`.
//!
//! The basis is orthogonal but not normalized, so norms stay rational. Each
//! second moment of basis words is weighted by the squared norms of its
//! non-`1` letters.

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graded::{GradedDecomposition, SpaceComponent};
use crate::linalg::{
    eigen_split, kernel, orthogonal_complement, project, BilinearForm, Matrix, Subspace,
};
use crate::memo::Memo;
use crate::operators::{delete, matrix_of, shuffle_insert, subsets};
use crate::rational::{binomial, factorial, parse_rational, primitive, qb, Q};
use crate::words::{enumerate_words, index_map, Combination, Word};

/// A strictly positive rational distribution on the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbabilityVector {
    p: Vec<Q>,
}

impl ProbabilityVector {
    pub fn new(p: Vec<Q>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbability("empty".into()));
        }
        if p.iter().any(|x| !x.is_positive()) {
            return Err(Error::InvalidProbability("entries must be positive".into()));
        }
        let s: Q = p.iter().fold(Q::zero(), |a, x| a + x);
        if !s.is_one() {
            return Err(Error::InvalidProbability(format!(
                "entries sum to {}",
                crate::rational::fmt_rational(&s)
            )));
        }
        Ok(ProbabilityVector { p })
    }

    pub fn uniform(d: usize) -> Self {
        ProbabilityVector {
            p: vec![Q::new(BigInt::one(), BigInt::from(d)); d],
        }
    }

    /// Parses a comma-separated list such as `1/2,1/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let p: Result<Vec<Q>> = s.split(',').map(parse_rational).collect();
        ProbabilityVector::new(p?)
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn get(&self, x: usize) -> &Q {
        &self.p[x]
    }

    pub fn values(&self) -> &[Q] {
        &self.p
    }

    /// `p_u = Π p_{u_i}`.
    pub fn word_prob(&self, u: &[u8]) -> Q {
        u.iter().fold(Q::one(), |acc, &x| acc * &self.p[x as usize])
    }

    /// The diagonal form `⟨·,·⟩_p` on `Σ^k` in lexicographic order.
    pub fn form(&self, k: usize) -> BilinearForm {
        BilinearForm::Diagonal(
            enumerate_words(self.len(), k)
                .iter()
                .map(|u| self.word_prob(u))
                .collect(),
        )
    }
}

/// `⟨f, g⟩_p = Σ_u p_u f_u g_u`.
pub fn inner_product_p(f: &Combination, g: &Combination, p: &ProbabilityVector) -> Q {
    f.terms()
        .filter_map(|(u, c)| {
            let d = g.coeff(u);
            (!d.is_zero()).then(|| p.word_prob(u) * c * d)
        })
        .fold(Q::zero(), |a, x| a + x)
}

/// The basis `1, v_2, …, v_d` of `ℚΣ`, orthogonal under `⟨·,·⟩_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DBasis {
    /// `vectors[e][x]` is the coefficient of letter `x` in basis letter `e`.
    pub vectors: Vec<Vec<Q>>,
    /// `‖v_e‖²_p`; the first entry is 1.
    pub norms: Vec<Q>,
}

impl DBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// `Π` of squared norms of the letters of a D-word.
    pub fn weight(&self, e: &[u8]) -> Q {
        e.iter()
            .fold(Q::one(), |acc, &x| acc * &self.norms[x as usize])
    }
}

/// Gram–Schmidt on `x − (p_x/p_a)·a` for `x ≠ a`, each vector rescaled to
/// coprime integers with a positive leading entry.
pub fn build_d_basis(p: &ProbabilityVector) -> DBasis {
    let d = p.len();
    let ip =
        |u: &[Q], v: &[Q]| -> Q { (0..d).fold(Q::zero(), |acc, x| acc + &p.p[x] * &u[x] * &v[x]) };
    let mut vectors = vec![vec![Q::one(); d]];
    for x in 1..d {
        let mut v = vec![Q::zero(); d];
        v[x] = Q::one();
        v[0] = -(&p.p[x] / &p.p[0]);
        for b in vectors.iter().skip(1) {
            let c = ip(&v, b) / ip(b, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= &c * bi;
            }
        }
        vectors.push(primitive(&v));
    }
    let norms = vectors.iter().map(|v| ip(v, v)).collect();
    DBasis { vectors, norms }
}

/// Coordinates of `f` in the D-word basis: `c_e = ⟨f, e⟩_p / ‖e‖²_p`.
/// D-letters are indices into the basis, with `0` the all-ones vector.
pub fn to_d_coordinates(f: &Combination, basis: &DBasis, p: &ProbabilityVector) -> Combination {
    let d = basis.dim();
    let k = f.degree().ok().flatten().unwrap_or(0);
    let t: Vec<Vec<Q>> = (0..d)
        .map(|e| {
            (0..d)
                .map(|x| &p.p[x] * &basis.vectors[e][x] / &basis.norms[e])
                .collect()
        })
        .collect();
    let mut cur = f.clone();
    for pos in 0..k {
        cur = cur.map_words(|u| {
            let mut out = Combination::zero();
            for (e, row) in t.iter().enumerate() {
                let c = &row[u[pos] as usize];
                if !c.is_zero() {
                    let mut w = u.to_vec();
                    w[pos] = e as u8;
                    out.add_term(w, c.clone());
                }
            }
            out
        });
    }
    cur
}

/// Expands a combination of D-words back into ordinary words.
pub fn from_d_coordinates(g: &Combination, basis: &DBasis) -> Combination {
    let d = basis.dim();
    let k = g.degree().ok().flatten().unwrap_or(0);
    let mut cur = g.clone();
    for pos in 0..k {
        cur = cur.map_words(|e| {
            let mut out = Combination::zero();
            for x in 0..d {
                let c = &basis.vectors[e[pos] as usize][x];
                if !c.is_zero() {
                    let mut w = e.to_vec();
                    w[pos] = x as u8;
                    out.add_term(w, c.clone());
                }
            }
            out
        });
    }
    cur
}

fn non_one(e: &[u8]) -> usize {
    e.iter().filter(|&&x| x != 0).count()
}

/// `π(e)`: non-1 letters become `2` (index 1).
pub fn pi_word(e: &[u8]) -> Word {
    e.iter().map(|&x| u8::from(x != 0)).collect()
}

/// `ρ(e)`: the non-1 letters in order.
pub fn rho_word(e: &[u8]) -> Word {
    e.iter().copied().filter(|&x| x != 0).collect()
}

/// Grades `f ∈ W_k` into parts in `W_kr`, `r = 0..k`.
pub fn grade(f: &Combination, p: &ProbabilityVector) -> Result<GradedDecomposition> {
    let k = f.degree()?.unwrap_or(0);
    let basis = build_d_basis(p);
    let c = to_d_coordinates(f, &basis, p);
    let mut parts = vec![Combination::zero(); k + 1];
    for (e, x) in c.terms() {
        parts[non_one(e)].add_term(e.clone(), x.clone());
    }
    let mut out = GradedDecomposition::default();
    for (r, part) in parts.into_iter().enumerate() {
        out.push(vec![r], from_d_coordinates(&part, &basis));
    }
    Ok(out)
}

/// Two-letter words over `{1,2}` (indices 0,1) of length `k` with `r` twos,
/// in lexicographic order. They index `V_kr`.
pub fn v_words(k: usize, r: usize) -> Vec<Word> {
    let mut out: Vec<Word> = subsets(k, r)
        .into_iter()
        .map(|pos| {
            let mut w = vec![0u8; k];
            for i in pos {
                w[i] = 1;
            }
            w
        })
        .collect();
    out.sort();
    out
}

/// Matrix of `∂ = ∂_1` from `V_kr` to `V_(k−1)r`.
pub fn delete_one_matrix(k: usize, r: usize) -> Matrix {
    let dom = v_words(k, r);
    let cod = if k > r { v_words(k - 1, r) } else { Vec::new() };
    matrix_of(|f| delete(&[0], f), &dom, &cod).expect("deletion stays in V")
}

/// Matrix of `sha = sha_1` from `V_kr` to `V_(k+1)r`.
pub fn shuffle_one_matrix(k: usize, r: usize) -> Matrix {
    matrix_of(
        |f| shuffle_insert(&[0], f),
        &v_words(k, r),
        &v_words(k + 1, r),
    )
    .expect("insertion stays in V")
}

/// `∂^j` on `V_kr`.
fn delete_power(k: usize, r: usize, j: usize) -> Matrix {
    let mut m = Matrix::identity(v_words(k, r).len());
    for s in 0..j {
        if k - s <= r {
            return Matrix::zeros(0, m.cols());
        }
        m = delete_one_matrix(k - s, r).mul(&m);
    }
    m
}

/// `ker ∂^j` inside `V_kr`.
fn ker_delete_power(k: usize, r: usize, j: usize) -> Subspace {
    let n = v_words(k, r).len();
    if j == 0 {
        return Subspace::zero(n);
    }
    if j > k - r {
        return Subspace::full(n);
    }
    kernel(&delete_power(k, r, j))
}

fn v_components_memo() -> &'static Memo<(usize, usize), Vec<Subspace>> {
    static M: OnceLock<Memo<(usize, usize), Vec<Subspace>>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// `V_krm = ker ∂^{k−r−m+1} ∩ (ker ∂^{k−r−m})^⊥` for `m = 0..=k−r`, over
/// `{1,2}`-words with the standard form.
pub fn v_components(k: usize, r: usize) -> Result<Arc<Vec<Subspace>>> {
    if r > k {
        return Err(Error::OutOfRange(format!("r = {r} > k = {k}")));
    }
    v_components_memo().get_or_try(&(k, r), || {
        (0..=k - r)
            .map(|m| {
                let big = ker_delete_power(k, r, k - r - m + 1);
                let small = ker_delete_power(k, r, k - r - m);
                orthogonal_complement(&small, &big, &BilinearForm::Standard)
            })
            .collect()
    })
}

/// `V_krm` as a subspace of `ℚ^{V_kr}`.
pub fn v_krm(k: usize, r: usize, m: usize) -> Result<Subspace> {
    if r > k || m > k - r {
        return Err(Error::OutOfRange(format!("(k,r,m) = ({k},{r},{m})")));
    }
    Ok(v_components(k, r)?[m].clone())
}

/// Inserts the letters of `rho` into the `2`-positions of `pi`.
pub fn fill_rho(pi: &[u8], rho: &[u8]) -> Word {
    let mut it = rho.iter();
    pi.iter()
        .map(|&x| {
            if x == 0 {
                0
            } else {
                *it.next().expect("rho length")
            }
        })
        .collect()
}

/// `W_krm` as a subspace of `ℚΣ^k` (words in lexicographic order).
pub fn component_basis(k: usize, r: usize, m: usize, p: &ProbabilityVector) -> Result<Subspace> {
    let v = v_krm(k, r, m)?;
    let d = p.len();
    if r > 0 && d == 1 {
        return Ok(Subspace::zero(1));
    }
    let basis = build_d_basis(p);
    let pis = v_words(k, r);
    let words = enumerate_words(d, k);
    let idx = index_map(&words);
    let rhos: Vec<Word> = enumerate_words(d - 1, r)
        .into_iter()
        .map(|w| w.into_iter().map(|x| x + 1).collect())
        .collect();
    let mut vectors = Vec::new();
    for rho in &rhos {
        for vec in v.vectors() {
            let mut g = Combination::zero();
            for (pi, c) in pis.iter().zip(vec) {
                g.add_term(fill_rho(pi, rho), c.clone());
            }
            vectors.push(from_d_coordinates(&g, &basis).to_vector(&idx, words.len())?);
        }
    }
    Ok(Subspace::new(words.len(), vectors))
}

/// `W_kr`: the span of D-words with `r` non-1 letters, inside `ℚΣ^k`.
pub fn grade_subspace(k: usize, r: usize, p: &ProbabilityVector) -> Result<Subspace> {
    if r > k {
        return Err(Error::OutOfRange(format!("r = {r} > k = {k}")));
    }
    let basis = build_d_basis(p);
    let words = enumerate_words(p.len(), k);
    let idx = index_map(&words);
    let vectors: Result<Vec<Vec<Q>>> = enumerate_words(p.len(), k)
        .into_iter()
        .filter(|e| non_one(e) == r)
        .map(|e| from_d_coordinates(&Combination::word(e), &basis).to_vector(&idx, words.len()))
        .collect();
    Ok(Subspace::new(words.len(), vectors?))
}

/// Splits `f` into its `W_krm` parts, labeled `(r, m)`.
pub fn refine(f: &Combination, p: &ProbabilityVector) -> Result<GradedDecomposition> {
    let k = f.degree()?.unwrap_or(0);
    let basis = build_d_basis(p);
    let c = to_d_coordinates(f, &basis, p);
    let mut out = GradedDecomposition::default();
    for r in 0..=k {
        let comps = v_components(k, r)?;
        let pis = v_words(k, r);
        let pidx = index_map(&pis);
        // Group D-coordinates by ρ; the p-form is constant on each block.
        let mut blocks: std::collections::BTreeMap<Word, Vec<Q>> = Default::default();
        for (e, x) in c.terms() {
            if non_one(e) != r {
                continue;
            }
            let v = blocks
                .entry(rho_word(e))
                .or_insert_with(|| vec![Q::zero(); pis.len()]);
            v[pidx[&pi_word(e)]] = x.clone();
        }
        for (m, space) in comps.iter().enumerate() {
            let mut g = Combination::zero();
            for (rho, v) in &blocks {
                let proj = project(v, space, &BilinearForm::Standard)?;
                for (pi, y) in pis.iter().zip(&proj) {
                    g.add_term(fill_rho(pi, rho), y.clone());
                }
            }
            out.push(vec![r, m], from_d_coordinates(&g, &basis));
        }
    }
    Ok(out)
}

/// Lists every `W_krm` of `ℚΣ^k` with its dimension and the constant
/// `(k!)² / ((k+m)!(k−r−m)!)` of the limiting covariance.
pub fn decompose_space(k: usize, p: &ProbabilityVector) -> Result<Vec<SpaceComponent>> {
    let d = p.len();
    let mut out = Vec::new();
    for r in 0..=k {
        let block = num_traits::pow(BigInt::from(d - 1), r);
        for m in 0..=k - r {
            let dim = v_krm(k, r, m)?.dim() * usize::try_from(&block).unwrap_or(usize::MAX);
            if dim == 0 {
                continue;
            }
            out.push(SpaceComponent {
                label: vec![k, r, m],
                dim,
                value: Some(theorem2_constant(k, r, m)),
            });
        }
    }
    Ok(out)
}

/// `(k!)² / ((k+m)!(k−r−m)!)`.
pub fn theorem2_constant(k: usize, r: usize, m: usize) -> Q {
    let kf = factorial(k as u64);
    Q::new(
        &kf * &kf,
        factorial((k + m) as u64) * factorial((k - r - m) as u64),
    )
}

/// `m_ℓ(e, e')` with `special` playing the role of the letter `1`: the number
/// of pairs `(I, I')` of index sets with `|I| = |e|`, `|I'| = |e'|`,
/// `I ∪ I' = {1..ℓ}`, equal letters on shared positions and `special` on
/// positions covered by only one side. Counted by direct enumeration.
pub fn merging_count(e: &[u8], e2: &[u8], l: usize, special: u8) -> u64 {
    let (k, k2) = (e.len(), e2.len());
    if l < k.max(k2) || l > k + k2 {
        return 0;
    }
    let shared = k + k2 - l;
    let mut count = 0;
    for i_set in subsets(l, k) {
        let mut in_i = vec![false; l];
        for &i in &i_set {
            in_i[i] = true;
        }
        for pick in subsets(k, shared) {
            let mut in_i2 = in_i.iter().map(|&b| !b).collect::<Vec<bool>>();
            for &s in &pick {
                in_i2[i_set[s]] = true;
            }
            let (mut a, mut b) = (0, 0);
            let mut ok = true;
            for pos in 0..l {
                match (in_i[pos], in_i2[pos]) {
                    (true, true) => {
                        ok = e[a] == e2[b];
                        a += 1;
                        b += 1;
                    }
                    (true, false) => {
                        ok = e[a] == special;
                        a += 1;
                    }
                    (false, true) => {
                        ok = e2[b] == special;
                        b += 1;
                    }
                    (false, false) => unreachable!("union covers every position"),
                }
                if !ok {
                    break;
                }
            }
            if ok {
                count += 1;
            }
        }
    }
    count
}

/// All merging coefficients at once: entry `ℓ` is `m_ℓ(e, e')`. A merging
/// pair is a walk through both words that either consumes a letter from
/// both (equal letters) or one letter from one side (which must be
/// `special`); the walk length is `ℓ`.
pub fn merging_counts(e: &[u8], e2: &[u8], special: u8) -> Vec<u64> {
    let (k, k2) = (e.len(), e2.len());
    let shared_max = k.min(k2);
    // table[i][j][s]: walks consuming e[..i], e2[..j] with s shared steps.
    let mut table = vec![vec![vec![0u64; shared_max + 1]; k2 + 1]; k + 1];
    table[0][0][0] = 1;
    for i in 0..=k {
        for j in 0..=k2 {
            for s in 0..=shared_max {
                let here = table[i][j][s];
                if here == 0 {
                    continue;
                }
                if i < k && j < k2 && e[i] == e2[j] && s < shared_max {
                    table[i + 1][j + 1][s + 1] += here;
                }
                if i < k && e[i] == special {
                    table[i + 1][j][s] += here;
                }
                if j < k2 && e2[j] == special {
                    table[i][j + 1][s] += here;
                }
            }
        }
    }
    let mut out = vec![0; k + k2 + 1];
    for (s, &c) in table[k][k2].iter().enumerate() {
        out[k + k2 - s] = c;
    }
    out
}

/// `m_ℓ(e, e')` for D-words, where letter index 0 is `1`.
pub fn merging_coefficient(e: &[u8], e2: &[u8], l: usize) -> u64 {
    merging_count(e, e2, l, 0)
}

/// Lengths of the runs of `1` between consecutive non-1 letters.
pub fn one_runs(e: &[u8]) -> Vec<usize> {
    let mut runs = vec![0];
    for &x in e {
        if x == 0 {
            *runs.last_mut().expect("nonempty") += 1;
        } else {
            runs.push(0);
        }
    }
    runs
}

/// `Π_i C(d_i + d'_i, d_i)` over the 1-runs of two words with equal `ρ`.
pub fn merging_product_formula(e: &[u8], e2: &[u8]) -> BigInt {
    if rho_word(e) != rho_word(e2) {
        return BigInt::zero();
    }
    one_runs(e)
        .iter()
        .zip(one_runs(e2))
        .fold(BigInt::one(), |acc, (&a, b)| {
            acc * binomial((a + b) as u64, a as u64)
        })
}

fn merging_memo() -> &'static Memo<(usize, usize), Matrix> {
    static M: OnceLock<Memo<(usize, usize), Matrix>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// `M_kr` with entries `m_{2k−r}(e, e')` over `{1,2}`-words with `r` twos.
/// Enumeration and the run-length product formula are both evaluated and
/// must agree.
pub fn merging_matrix(k: usize, r: usize) -> Result<Matrix> {
    if r > k {
        return Err(Error::OutOfRange(format!("r = {r} > k = {k}")));
    }
    let m = merging_memo().get_or_try(&(k, r), || -> Result<Matrix> {
        let words = v_words(k, r);
        let n = words.len();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let direct = merging_coefficient(&words[i], &words[j], 2 * k - r);
                let formula = merging_product_formula(&words[i], &words[j]);
                assert_eq!(BigInt::from(direct), formula, "merging formulas disagree");
                m.set(i, j, qb(formula));
            }
        }
        Ok(m)
    })?;
    Ok((*m).clone())
}

/// Eigenpairs of `M_kr` on `V_kr`, largest first, with eigenvalues
/// `C(2k−r, k+m)` for `m = 0..=k−r`.
pub fn spectrum_m(k: usize, r: usize) -> Result<Vec<(Q, Subspace)>> {
    let m = merging_matrix(k, r)?;
    let candidates: Vec<Q> = (0..=k - r)
        .map(|m| qb(binomial((2 * k - r) as u64, (k + m) as u64)))
        .collect();
    eigen_split(&m, &Subspace::full(m.rows()), &candidates)
}

/// `B = sha ∘ ∂` on `V_kr`.
pub fn b_operator(k: usize, r: usize) -> Matrix {
    if k == r {
        return Matrix::zeros(1, 1);
    }
    shuffle_one_matrix(k - 1, r).mul(&delete_one_matrix(k, r))
}

/// `A = ∂ ∘ sha` on `V_kr`.
pub fn a_operator(k: usize, r: usize) -> Matrix {
    delete_one_matrix(k + 1, r).mul(&shuffle_one_matrix(k, r))
}

/// `sha^j ∂^j` on `V_kr`.
pub fn sha_del_power(k: usize, r: usize, j: usize) -> Matrix {
    let n = v_words(k, r).len();
    if j > k - r {
        return Matrix::zeros(n, n);
    }
    let mut down = Matrix::identity(n);
    for s in 0..j {
        down = delete_one_matrix(k - s, r).mul(&down);
    }
    let mut up = down;
    for s in 0..j {
        up = shuffle_one_matrix(k - j + s, r).mul(&up);
    }
    up
}

/// `E[#f · #f']` under the i.i.d. model with `n` letters.
pub fn exact_moment_one_sample(
    f: &Combination,
    f2: &Combination,
    n: usize,
    p: &ProbabilityVector,
) -> Result<Q> {
    let k = f.degree()?.unwrap_or(0);
    let k2 = f2.degree()?.unwrap_or(0);
    if n < k.max(k2) {
        return Err(Error::TooShort(format!(
            "n = {n} < pattern length {}",
            k.max(k2)
        )));
    }
    let basis = build_d_basis(p);
    let c = to_d_coordinates(f, &basis, p);
    let c2 = to_d_coordinates(f2, &basis, p);
    let binoms: Vec<Q> = (0..=k + k2)
        .map(|l| qb(binomial(n as u64, l as u64)))
        .collect();
    let mut total = Q::zero();
    for (e, x) in c.terms() {
        let w = basis.weight(e);
        for (e2, y) in c2.terms() {
            let mut s = Q::zero();
            for (l, &m) in merging_counts(e, e2, 0).iter().enumerate() {
                if m > 0 {
                    s += qb(BigInt::from(m)) * &binoms[l];
                }
            }
            if !s.is_zero() {
                total += s * &w * x * y;
            }
        }
    }
    Ok(total)
}

/// `E[b̄#f · b̄#f']`.
pub fn exact_normalized_moment(
    f: &Combination,
    f2: &Combination,
    n: usize,
    p: &ProbabilityVector,
) -> Result<Q> {
    let k = f.degree()?.unwrap_or(0) as u64;
    let k2 = f2.degree()?.unwrap_or(0) as u64;
    let raw = exact_moment_one_sample(f, f2, n, p)?;
    Ok(raw / qb(binomial(n as u64, k) * binomial(n as u64, k2)))
}

/// The unique `(r, m)` with `f ∈ W_krm`, or an error for mixed input.
pub fn homogeneous_label(f: &Combination, p: &ProbabilityVector) -> Result<(usize, usize)> {
    let dec = refine(f, p)?;
    let support = dec.support();
    match support.as_slice() {
        [one] => Ok((one[0], one[1])),
        [] => Err(Error::ZeroCombination),
        _ => Err(Error::NotHomogeneous(format!(
            "spans components {support:?}"
        ))),
    }
}

/// `lim n^r E[b̄#f · b̄#f']` for `f ∈ W_krm`, `f' ∈ W_kr'm'`:
/// `(k!)²⟨f,f'⟩_p / ((k+m)!(k−r−m)!)` when `(r,m) = (r',m')`, else 0.
pub fn asymptotic_covariance_one_sample(
    f: &Combination,
    f2: &Combination,
    p: &ProbabilityVector,
) -> Result<Q> {
    let k = f.degree()?.ok_or(Error::ZeroCombination)?;
    let k2 = f2.degree()?.ok_or(Error::ZeroCombination)?;
    if k != k2 {
        return Err(Error::LengthMismatch(format!("lengths {k} and {k2}")));
    }
    let (r, m) = homogeneous_label(f, p)?;
    let (r2, m2) = homogeneous_label(f2, p)?;
    if (r, m) != (r2, m2) {
        return Ok(Q::zero());
    }
    Ok(theorem2_constant(k, r, m) * inner_product_p(f, f2, p))
}

/// Leading order `r` of `f` and `lim n^r E[(b̄#f)²]`, summed blockwise over
/// the `W_krm` parts at that order.
pub fn leading_variance(f: &Combination, p: &ProbabilityVector) -> Result<(usize, Q)> {
    let k = f.degree()?.ok_or(Error::ZeroCombination)?;
    let dec = refine(f, p)?;
    let r = dec
        .nonzero()
        .map(|x| x.label[0])
        .min()
        .ok_or(Error::ZeroCombination)?;
    let v = dec
        .nonzero()
        .filter(|x| x.label[0] == r)
        .map(|x| theorem2_constant(k, r, x.label[1]) * inner_product_p(&x.part, &x.part, p))
        .fold(Q::zero(), |a, b| a + b);
    Ok((r, v))
}
