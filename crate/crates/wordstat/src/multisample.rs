//! The multi-sample model: a uniformly random word with fixed composition `n`.
//!
//! Combinations live in `W_κ`, the span of words with composition `κ`. The
//! symmetric group acts by permuting positions, and `W_κ` splits into Specht
//! modules. Grouping them by the length of the first row gives the grading
//! `W_κr`, and `r` is the order of magnitude of the normalized count.
//!
//! Second moments go through an extended alphabet with one extra letter,
//! written `1` in the literature, appended after the last letter of `Σ`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::GradedDecomposition;
use crate::linalg::{
    eigen_split, kernel, orthogonal_complement, project, projector, BilinearForm, Matrix, Subspace,
};
use crate::memo::Memo;
use crate::onesample::{merging_counts, ProbabilityVector};
use crate::operators::{
    act, alpha_word, column_antisymmetrizer, delete, lift_b, matrix_of, replace, shuffle_insert,
    subsets, theta, theta_pow, ReplacementTable,
};
use crate::rational::{binomial, factorial, q, qb, qi, Q};
use crate::words::{enumerate_by_composition, index_map, Combination, Composition, Word};

/// Word length above which merging enumeration is refused.
pub const MAX_MERGE_LENGTH: usize = 8;

fn kappa_of(f: &Combination, d: usize) -> Result<Composition> {
    f.composition(d)?.ok_or(Error::ZeroCombination)
}

/// Embeds `f ∈ W_κ` into `W_κ'` for `κ' ≥ κ` by repeated
/// `f ↦ sha_x f / (k_x + 1)`. Normalized counts are unchanged.
pub fn embed(f: &Combination, d: usize, target: &Composition) -> Result<Combination> {
    if target.len() != d {
        return Err(Error::CompositionMismatch(format!(
            "target {target} has {} letters, expected {d}",
            target.len()
        )));
    }
    let Some(kappa) = f.composition(d)? else {
        return Ok(Combination::zero());
    };
    if !kappa.le(target) {
        return Err(Error::CompositionMismatch(format!(
            "{kappa} is not below {target}"
        )));
    }
    let mut g = f.clone();
    for x in 0..d {
        for c in kappa.0[x]..target.0[x] {
            g = shuffle_insert(&[x as u8], &g).scale(&q(1, c as i64 + 1));
        }
    }
    Ok(g)
}

/// Letter order that sorts `κ` into a partition: `order[new] = old`.
fn partition_order(kappa: &Composition) -> Vec<usize> {
    let mut order: Vec<usize> = (0..kappa.len()).collect();
    order.sort_by(|&a, &b| kappa.0[b].cmp(&kappa.0[a]));
    order
}

/// Moves vectors over the words of one composition to another by renaming
/// letters with `map[old] = new`.
fn relabel_space(space: &Subspace, from: &[Word], to: &[Word], map: &[u8]) -> Subspace {
    let idx = index_map(to);
    let vectors = space
        .vectors()
        .iter()
        .map(|v| {
            let mut out = vec![Q::zero(); to.len()];
            for (w, c) in from.iter().zip(v) {
                let u: Word = w.iter().map(|&x| map[x as usize]).collect();
                out[idx[&u]] = c.clone();
            }
            out
        })
        .collect();
    Subspace::new(to.len(), vectors)
}

/// Runs `build` on the partition obtained by reordering letters, then maps
/// the resulting subspaces back.
fn via_partition(
    kappa: &Composition,
    build: impl Fn(&Composition) -> Result<Vec<Subspace>>,
) -> Result<Vec<Subspace>> {
    if kappa.is_partition() {
        return build(kappa);
    }
    let order = partition_order(kappa);
    let sorted = Composition::new(order.iter().map(|&x| kappa.0[x]).collect());
    let mut back = vec![0u8; order.len()];
    for (new, &old) in order.iter().enumerate() {
        back[new] = old as u8;
    }
    let from = enumerate_by_composition(&sorted);
    let to = enumerate_by_composition(kappa);
    Ok(build(&sorted)?
        .iter()
        .map(|s| relabel_space(s, &from, &to, &back))
        .collect())
}

/// `α_λ b_λ`, the generator of the Specht module `S^λ` in `W_λ`.
pub fn specht_generator(lambda: &[usize]) -> Result<Combination> {
    act(
        &Combination::word(alpha_word(lambda)),
        &column_antisymmetrizer(lambda),
    )
}

fn specht_memo() -> &'static Memo<Vec<usize>, Subspace> {
    static M: OnceLock<Memo<Vec<usize>, Subspace>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// `S^λ ⊂ W_λ`: the span of the orbit of `α_λ b_λ` under adjacent
/// transpositions.
pub fn specht_module(lambda: &[usize]) -> Result<Subspace> {
    let s = specht_memo().get_or_try(&lambda.to_vec(), || -> Result<Subspace> {
        let basis = enumerate_by_composition(&Composition::new(lambda.to_vec()));
        let idx = index_map(&basis);
        let n = basis.len();
        let k: usize = lambda.iter().sum();
        let swaps: Vec<Vec<usize>> = (0..k.saturating_sub(1))
            .map(|p| {
                basis
                    .iter()
                    .map(|w| {
                        let mut u = w.clone();
                        u.swap(p, p + 1);
                        idx[&u]
                    })
                    .collect()
            })
            .collect();
        let start = specht_generator(lambda)?.to_vector(&idx, n)?;
        let mut vecs = vec![start];
        let mut space = Subspace::new(n, vecs.clone());
        let mut i = 0;
        while i < vecs.len() {
            for perm in &swaps {
                let mut moved = vec![Q::zero(); n];
                for (src, &dst) in perm.iter().enumerate() {
                    moved[dst] = vecs[i][src].clone();
                }
                if !space.contains(&moved) {
                    vecs.push(moved);
                    space = Subspace::new(n, vecs.clone());
                }
            }
            i += 1;
        }
        Ok(space)
    })?;
    Ok((*s).clone())
}

/// `S^(k_a,k_b) = ker Θ_ba` inside `W_(k_a,k_b)`.
pub fn specht_two_letter(ka: usize, kb: usize) -> Result<Subspace> {
    if ka < kb {
        return Err(Error::OutOfRange(format!("({ka},{kb}) is not a partition")));
    }
    let dom = enumerate_by_composition(&Composition::new(vec![ka, kb]));
    if kb == 0 {
        return Ok(Subspace::full(dom.len()));
    }
    let cod = enumerate_by_composition(&Composition::new(vec![ka + 1, kb - 1]));
    Ok(kernel(&matrix_of(|f| theta(1, 0, f), &dom, &cod)?))
}

/// Semistandard tables with content `κ`, ordered by shape and then rows.
pub fn semistandard_tables(kappa: &Composition) -> Vec<ReplacementTable> {
    struct Ctx<'a> {
        kappa: &'a [usize],
        out: Vec<ReplacementTable>,
    }
    fn letter(ctx: &mut Ctx, x: usize, shape: &mut Vec<usize>, rows: &mut Vec<Word>) {
        if x == ctx.kappa.len() {
            ctx.out.push(ReplacementTable::new(rows.clone()));
            return;
        }
        let old = shape.clone();
        strip(ctx, x, 0, ctx.kappa[x], &old, shape, rows);
    }
    fn strip(
        ctx: &mut Ctx,
        x: usize,
        row: usize,
        left: usize,
        old: &[usize],
        shape: &mut Vec<usize>,
        rows: &mut Vec<Word>,
    ) {
        if row > x || row == ctx.kappa.len() {
            if left == 0 {
                letter(ctx, x + 1, shape, rows);
            }
            return;
        }
        let room = if row == 0 {
            left
        } else {
            left.min(old[row - 1] - shape[row])
        };
        for add in 0..=room {
            shape[row] += add;
            rows[row].extend(std::iter::repeat_n(x as u8, add));
            strip(ctx, x, row + 1, left - add, old, shape, rows);
            let len = rows[row].len();
            rows[row].truncate(len - add);
            shape[row] -= add;
        }
    }
    let d = kappa.len();
    let mut ctx = Ctx {
        kappa: &kappa.0,
        out: Vec::new(),
    };
    letter(&mut ctx, 0, &mut vec![0; d], &mut vec![Vec::new(); d]);
    let mut out = ctx.out;
    out.sort_by(|a, b| (a.shape(), &a.rows).cmp(&(b.shape(), &b.rows)));
    out
}

/// One Specht module copy inside `W_κ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpechtCopy {
    pub table: ReplacementTable,
    pub shape: Vec<usize>,
    pub space: Subspace,
}

/// Young's rule: one copy of `S^λ` per semistandard table of shape `λ` and
/// content `κ`, realized as `Θ[T] S^λ`. Copies of the same shape are made
/// mutually orthogonal, so the list is an orthogonal decomposition of `W_κ`.
pub fn young_decomposition(kappa: &Composition) -> Result<Vec<SpechtCopy>> {
    if !kappa.is_partition() {
        return Err(Error::CompositionMismatch(format!(
            "{kappa} is not a partition"
        )));
    }
    let basis = enumerate_by_composition(kappa);
    let idx = index_map(&basis);
    let n = basis.len();
    let mut seen: BTreeMap<Vec<usize>, Subspace> = BTreeMap::new();
    let mut out = Vec::new();
    for table in semistandard_tables(kappa) {
        let shape = table.shape().0;
        let spec = specht_module(&shape)?;
        let spec_basis = enumerate_by_composition(&Composition::new(shape.clone()));
        let images: Result<Vec<Vec<Q>>> = spec
            .vectors()
            .iter()
            .map(|v| replace(&table, &Combination::from_vector(&spec_basis, v))?.to_vector(&idx, n))
            .collect();
        let raw = Subspace::new(n, images?);
        let prev = seen
            .entry(shape.clone())
            .or_insert_with(|| Subspace::zero(n));
        let total = prev.sum(&raw);
        let space = orthogonal_complement(prev, &total, &BilinearForm::Standard)?;
        *prev = total;
        out.push(SpechtCopy {
            table,
            shape,
            space,
        });
    }
    Ok(out)
}

fn grading_memo() -> &'static Memo<Vec<usize>, Vec<Subspace>> {
    static M: OnceLock<Memo<Vec<usize>, Vec<Subspace>>> = OnceLock::new();
    M.get_or_init(Memo::new)
}

/// `W_κr` for `r = 0..=k − max κ`, as subspaces of `W_κ` (words in
/// lexicographic order). Two letters use `Θ_ab^{k_b−r} S^(k−r,r)`; more
/// letters use Young's rule.
pub fn grading_spaces(kappa: &Composition) -> Result<Arc<Vec<Subspace>>> {
    grading_memo().get_or_try(&kappa.0, || via_partition(kappa, grading_partition))
}

fn grading_partition(kappa: &Composition) -> Result<Vec<Subspace>> {
    let k = kappa.total();
    let top = kappa.0.first().copied().unwrap_or(0);
    let basis = enumerate_by_composition(kappa);
    let idx = index_map(&basis);
    let n = basis.len();
    if kappa.len() == 2 {
        let (ka, kb) = (kappa.0[0], kappa.0[1]);
        return (0..=kb)
            .map(|r| {
                let spec = specht_two_letter(k - r, r)?;
                let from = enumerate_by_composition(&Composition::new(vec![k - r, r]));
                let vs: Result<Vec<Vec<Q>>> = spec
                    .vectors()
                    .iter()
                    .map(|v| {
                        theta_pow(0, 1, kb - r, &Combination::from_vector(&from, v))
                            .to_vector(&idx, n)
                    })
                    .collect();
                debug_assert_eq!(ka + kb, k);
                Ok(Subspace::new(n, vs?))
            })
            .collect();
    }
    let copies = young_decomposition(kappa)?;
    Ok((0..=k - top)
        .map(|r| {
            copies
                .iter()
                .filter(|c| c.shape.first().copied().unwrap_or(0) == k - r)
                .fold(Subspace::zero(n), |acc, c| acc.sum(&c.space))
        })
        .collect())
}

/// Compositions `s ≤ κ` in lexicographic order.
pub fn compositions_below(kappa: &Composition) -> Vec<Composition> {
    let mut out = vec![Vec::new()];
    for &c in &kappa.0 {
        out = out
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..=c).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(Composition::new).collect()
}

/// `Π_x Θ_{x1}^{k_x−r_x} / (k_x−r_x)!`: forgets all but `r_x` occurrences of
/// each letter by turning them into the extra letter `d`.
pub fn theta_hat(f: &Combination, kappa: &Composition, r: &Composition) -> Combination {
    let d = kappa.len() as u8;
    let mut g = f.clone();
    for x in 0..kappa.len() {
        let e = kappa.0[x] - r.0[x];
        if e > 0 {
            g = theta_pow(x as u8, d, e, &g).scale(&Q::new(BigInt::one(), factorial(e as u64)));
        }
    }
    g
}

/// The extended composition `(r_1, …, r_d, k − |r|)`.
fn extended(kappa: &Composition, r: &Composition) -> Composition {
    let mut c = r.0.clone();
    c.push(kappa.total() - r.total());
    Composition::new(c)
}

/// `⊕_{r' ≥ r} W_κr'` as the common kernel of `Θ̂_s` for all `s ≤ κ` with
/// `|s| < r`.
pub fn high_order_space(kappa: &Composition, r: usize) -> Result<Subspace> {
    let basis = enumerate_by_composition(kappa);
    let mut rows = Vec::new();
    for s in compositions_below(kappa) {
        if s.total() >= r {
            continue;
        }
        let m = matrix_of(
            |f| theta_hat(f, kappa, &s),
            &basis,
            &enumerate_by_composition(&extended(kappa, &s)),
        )?;
        for i in 0..m.rows() {
            rows.push(m.row(i).to_vec());
        }
    }
    if rows.is_empty() {
        return Ok(Subspace::full(basis.len()));
    }
    Ok(kernel(&Matrix::from_rows(rows)))
}

/// `W_κr` from the kernel description, independent of Specht modules.
pub fn grading_space_by_kernels(kappa: &Composition, r: usize) -> Result<Subspace> {
    let big = high_order_space(kappa, r)?;
    let small = high_order_space(kappa, r + 1)?;
    orthogonal_complement(&small, &big, &BilinearForm::Standard)
}

/// Splits `f` into its `W_κr` parts, labeled `(r)`.
pub fn grade_multi(f: &Combination, d: usize) -> Result<GradedDecomposition> {
    let kappa = kappa_of(f, d)?;
    let basis = enumerate_by_composition(&kappa);
    let v = f.to_vector(&index_map(&basis), basis.len())?;
    let mut out = GradedDecomposition::default();
    for (r, space) in grading_spaces(&kappa)?.iter().enumerate() {
        let p = project(&v, space, &BilinearForm::Standard)?;
        out.push(vec![r], Combination::from_vector(&basis, &p));
    }
    Ok(out)
}

/// The smallest `r` with a nonzero `W_κr` part.
pub fn rank(f: &Combination, d: usize) -> Result<usize> {
    grade_multi(f, d)?
        .nonzero()
        .map(|p| p.label[0])
        .min()
        .ok_or(Error::ZeroCombination)
}

fn check_merge_size(k: usize) -> Result<()> {
    if k > MAX_MERGE_LENGTH {
        return Err(Error::Unsupported(format!(
            "word length {k} exceeds the merging limit {MAX_MERGE_LENGTH}"
        )));
    }
    Ok(())
}

/// `Π_x r_x!(k_x−r_x)!² / (2k−|r|)!`.
fn m_r_prefactor(kappa: &Composition, r: &Composition) -> Q {
    let num = kappa
        .0
        .iter()
        .zip(&r.0)
        .fold(BigInt::one(), |acc, (&k, &s)| {
            let f = factorial((k - s) as u64);
            acc * factorial(s as u64) * &f * &f
        });
    Q::new(num, factorial((2 * kappa.total() - r.total()) as u64))
}

/// `Σ c_e c'_e' m_ℓ(e, e')` with `special` as the distinguished letter.
fn merged_form(g: &Combination, g2: &Combination, l: usize, special: u8) -> Q {
    let mut s = Q::zero();
    for (e, x) in g.terms() {
        for (e2, y) in g2.terms() {
            let m = merging_counts(e, e2, special).get(l).copied().unwrap_or(0);
            if m > 0 {
                s += qi(m as i64) * x * y;
            }
        }
    }
    s
}

fn common_kappa(f: &Combination, f2: &Combination, d: usize) -> Result<Composition> {
    let kappa = kappa_of(f, d)?;
    let kappa2 = kappa_of(f2, d)?;
    if kappa != kappa2 {
        return Err(Error::CompositionMismatch(format!("{kappa} vs {kappa2}")));
    }
    check_merge_size(kappa.total())?;
    Ok(kappa)
}

/// `m_r(f, f') = Π(r_x!(k_x−r_x)!²)/(2k−r)! · m_{2k−r}(Θ̂f, Θ̂f')`, computed in
/// the alphabet extended by the letter `d`.
pub fn m_r_coefficient(f: &Combination, f2: &Combination, r: &Composition, d: usize) -> Result<Q> {
    let kappa = common_kappa(f, f2, d)?;
    if !r.le(&kappa) {
        return Err(Error::CompositionMismatch(format!(
            "{r} is not below {kappa}"
        )));
    }
    let l = 2 * kappa.total() - r.total();
    let g = theta_hat(f, &kappa, r);
    let g2 = theta_hat(f2, &kappa, r);
    Ok(m_r_prefactor(&kappa, r) * merged_form(&g, &g2, l, d as u8))
}

/// `|ℳ_r(w, w')|`: index sets `I, I'` of size `k` covering `{1..2k−|r|}`
/// with equal letters on shared positions and exactly `r_x` shared `x`s.
/// Counted by enumeration on the original words.
pub fn multi_merging_count(w: &[u8], w2: &[u8], r: &Composition) -> u64 {
    let k = w.len();
    let l = 2 * k - r.total();
    if w2.len() != k || r.total() > k {
        return 0;
    }
    let shared = r.total();
    let mut count = 0;
    for i_set in subsets(l, k) {
        let mut in_i = vec![false; l];
        for &i in &i_set {
            in_i[i] = true;
        }
        for pick in subsets(k, shared) {
            let mut in_i2: Vec<bool> = in_i.iter().map(|&b| !b).collect();
            for &s in &pick {
                in_i2[i_set[s]] = true;
            }
            let (mut a, mut b) = (0, 0);
            let mut per_letter = vec![0usize; r.len()];
            let mut ok = true;
            for pos in 0..l {
                match (in_i[pos], in_i2[pos]) {
                    (true, true) => {
                        if w[a] != w2[b] {
                            ok = false;
                            break;
                        }
                        per_letter[w[a] as usize] += 1;
                        a += 1;
                        b += 1;
                    }
                    (true, false) => a += 1,
                    _ => b += 1,
                }
            }
            if ok && per_letter == r.0 {
                count += 1;
            }
        }
    }
    count
}

/// `m_r` from [`multi_merging_count`], bilinearly extended.
pub fn m_r_by_enumeration(
    f: &Combination,
    f2: &Combination,
    r: &Composition,
    d: usize,
) -> Result<Q> {
    let kappa = common_kappa(f, f2, d)?;
    let mut s = Q::zero();
    for (w, x) in f.terms() {
        for (w2, y) in f2.terms() {
            let m = multi_merging_count(w, w2, r);
            if m > 0 {
                s += qi(m as i64) * x * y;
            }
        }
    }
    Ok(m_r_prefactor(&kappa, r) * s)
}

/// `E[#f · #f']` for a uniformly random word of composition `n`.
pub fn exact_moment_multi(f: &Combination, f2: &Combination, n: &Composition) -> Result<Q> {
    let d = n.len();
    let kappa = common_kappa(f, f2, d)?;
    if !kappa.le(n) {
        return Err(Error::TooShort(format!("composition {n} is below {kappa}")));
    }
    let mut total = Q::zero();
    for r in compositions_below(&kappa) {
        let weight =
            kappa
                .0
                .iter()
                .zip(&r.0)
                .zip(&n.0)
                .fold(BigInt::one(), |acc, ((&k, &s), &nx)| {
                    let (k, s, nx) = (k as u64, s as u64, nx as u64);
                    acc * binomial(nx, s) * binomial(nx - s, k - s) * binomial(nx - k, k - s)
                });
        if weight.is_zero() {
            continue;
        }
        total += m_r_coefficient(f, f2, &r, d)? * qb(weight);
    }
    Ok(total)
}

/// Embeds both combinations into their componentwise maximum composition
/// when they differ.
fn common_embedding(
    f: &Combination,
    f2: &Combination,
    d: usize,
) -> Result<Option<(Combination, Combination)>> {
    let (kappa, kappa2) = (kappa_of(f, d)?, kappa_of(f2, d)?);
    if kappa == kappa2 {
        return Ok(None);
    }
    let join = Composition::new(
        kappa
            .0
            .iter()
            .zip(&kappa2.0)
            .map(|(&a, &b)| a.max(b))
            .collect(),
    );
    Ok(Some((embed(f, d, &join)?, embed(f2, d, &join)?)))
}

/// `E[tĩlde#f · tĩlde#f']`, counts divided by `Π C(n_x, k_x)`. Combinations
/// of different compositions are first embedded into a common one.
pub fn exact_normalized_moment_multi(
    f: &Combination,
    f2: &Combination,
    n: &Composition,
) -> Result<Q> {
    if let Some((g, g2)) = common_embedding(f, f2, n.len())? {
        return exact_normalized_moment_multi(&g, &g2, n);
    }
    let kappa = kappa_of(f, n.len())?;
    let denom = kappa
        .0
        .iter()
        .zip(&n.0)
        .fold(BigInt::one(), |acc, (&k, &nx)| {
            acc * binomial(nx as u64, k as u64)
        });
    Ok(exact_moment_multi(f, f2, n)? / qb(&denom * &denom))
}

/// `lim n^rank E[tĩlde#f · tĩlde#f']` as `n/|n| → p`:
/// `Σ_{|r| = rank} m_r(f,f') Π k_x!² / (r_x!(k_x−r_x)!² p_x^{r_x})`.
/// Zero when the ranks differ; rank zero is rejected. Different compositions
/// are embedded into a common one.
pub fn asymptotic_covariance_multi(
    f: &Combination,
    f2: &Combination,
    p: &ProbabilityVector,
) -> Result<Q> {
    let d = p.len();
    if let Some((g, g2)) = common_embedding(f, f2, d)? {
        return asymptotic_covariance_multi(&g, &g2, p);
    }
    let kappa = common_kappa(f, f2, d)?;
    let rk = rank(f, d)?;
    if rk != rank(f2, d)? {
        return Ok(Q::zero());
    }
    if rk == 0 {
        return Err(Error::Unsupported(
            "rank-0 statistics have no fluctuation limit".into(),
        ));
    }
    let mut total = Q::zero();
    for r in compositions_below(&kappa)
        .into_iter()
        .filter(|r| r.total() == rk)
    {
        let mut w = Q::one();
        for x in 0..d {
            let (k, s) = (kappa.0[x] as u64, r.0[x] as u64);
            let kf = factorial(k);
            let rest = factorial(k - s);
            w *= Q::new(&kf * &kf, factorial(s) * &rest * &rest);
            for _ in 0..s {
                w /= p.get(x);
            }
        }
        total += m_r_coefficient(f, f2, &r, d)? * w;
    }
    Ok(total)
}

/// `λ_κrij = (2k−r)!(k−2r+1)! / (i!(2k−r−i−j)!(k−2r+1+j)!)`.
pub fn small_lambda(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<Q> {
    let k = check_two_sample(kappa, r, i, j)?;
    Ok(Q::new(
        factorial((2 * k - r) as u64) * factorial((k - 2 * r + 1) as u64),
        factorial(i as u64)
            * factorial((2 * k - r - i - j) as u64)
            * factorial((k - 2 * r + 1 + j) as u64),
    ))
}

/// `Λ_κrij`, the limit of `((n_a n_b)/n)^r E[tĩlde#f tĩlde#f']` per unit of
/// `⟨f, f'⟩` on `W_κrij`.
pub fn lambda_eigenvalue(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<Q> {
    let k = check_two_sample(kappa, r, i, j)?;
    let (ka, kb) = (kappa.0[0], kappa.0[1]);
    let fa = factorial(ka as u64);
    let fb = factorial(kb as u64);
    let num =
        &fa * &fa * &fb * &fb * factorial((k - 2 * r) as u64) * factorial((k - 2 * r + 1) as u64);
    let den = factorial((ka - r) as u64)
        * factorial((kb - r) as u64)
        * factorial(i as u64)
        * factorial((2 * k - r - i - j) as u64)
        * factorial((k - 2 * r + 1 + j) as u64);
    Ok(Q::new(num, den))
}

/// `dim W_κrij = (k−2r−i+j+1)(k−i−j−2)! / ((k−i−r)!(r−j−1)!)`.
pub fn two_sample_dimension(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<usize> {
    let k = check_two_sample(kappa, r, i, j)?;
    let v = Q::new(
        BigInt::from(k - 2 * r - i + j + 1) * factorial((k - i - j - 2) as u64),
        factorial((k - i - r) as u64) * factorial((r - j - 1) as u64),
    );
    usize::try_from(v.to_integer()).map_err(|_| Error::OutOfRange("dimension overflow".into()))
}

fn check_two_sample(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<usize> {
    if kappa.len() != 2 {
        return Err(Error::Unsupported(
            "two-sample spectra need exactly two letters".into(),
        ));
    }
    let k = kappa.total();
    let kmin = kappa.0[0].min(kappa.0[1]);
    if r == 0 || r > kmin || i > k - 2 * r || j >= r {
        return Err(Error::OutOfRange(format!(
            "(r,i,j) = ({r},{i},{j}) outside 1 ≤ r ≤ {kmin}, i ≤ k−2r, j < r"
        )));
    }
    Ok(k)
}

/// A spectral piece `W_κrij` of `W_κr` in the two-sample model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSampleComponent {
    pub r: usize,
    pub i: usize,
    pub j: usize,
    pub space: Subspace,
    /// `Λ_κrij`; `None` for the constant piece `r = 0`.
    pub lambda: Option<Q>,
}

/// `W_κrij = Θ_ab^{k_b−r} ℒ_b^j sha_a^i ker(∂_a | S^(k−r−i, r−j))`. With
/// `r = 0` only `(i, j) = (k, 0)` is valid and names `W_κ0`.
pub fn two_sample_component(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<Subspace> {
    if kappa.len() != 2 {
        return Err(Error::Unsupported(
            "two-sample spectra need exactly two letters".into(),
        ));
    }
    if r == 0 {
        if (i, j) != (kappa.total(), 0) {
            return Err(Error::OutOfRange(format!(
                "r = 0 admits only (i,j) = ({},0)",
                kappa.total()
            )));
        }
        return Ok(grading_spaces(kappa)?[0].clone());
    }
    check_two_sample(kappa, r, i, j)?;
    let spaces = via_partition(kappa, |sorted| {
        Ok(vec![component_partition(sorted, r, i, j)?])
    })?;
    Ok(spaces.into_iter().next().expect("one space"))
}

fn component_partition(kappa: &Composition, r: usize, i: usize, j: usize) -> Result<Subspace> {
    let k = kappa.total();
    let kb = kappa.0[1];
    let (ma, mb) = (k - r - i, r - j);
    let spec = specht_two_letter(ma, mb)?;
    let from = enumerate_by_composition(&Composition::new(vec![ma, mb]));
    let to = enumerate_by_composition(&Composition::new(vec![ma - 1, mb]));
    let del = matrix_of(|f| delete(&[0], f), &from, &to)?;
    let images = Matrix::from_cols(
        to.len(),
        &spec
            .vectors()
            .iter()
            .map(|v| del.mul_vec(v))
            .collect::<Vec<_>>(),
    );
    let coeffs = kernel(&images);
    let target = enumerate_by_composition(kappa);
    let idx = index_map(&target);
    let mut vectors = Vec::new();
    for c in coeffs.vectors() {
        let v = crate::linalg::combine(spec.vectors(), c);
        let mut g = Combination::from_vector(&from, &v);
        for _ in 0..i {
            g = shuffle_insert(&[0], &g);
        }
        for _ in 0..j {
            g = lift_b(&g)?;
        }
        g = theta_pow(0, 1, kb - r, &g);
        vectors.push(g.to_vector(&idx, target.len())?);
    }
    Ok(Subspace::new(target.len(), vectors))
}

/// All `W_κrij` for one `r ≥ 1`, with their `Λ` values.
pub fn two_sample_components(kappa: &Composition, r: usize) -> Result<Vec<TwoSampleComponent>> {
    let k = kappa.total();
    check_two_sample(kappa, r, 0, 0)?;
    let mut out = Vec::new();
    for i in 0..=k - 2 * r {
        for j in 0..r {
            out.push(TwoSampleComponent {
                r,
                i,
                j,
                space: two_sample_component(kappa, r, i, j)?,
                lambda: Some(lambda_eigenvalue(kappa, r, i, j)?),
            });
        }
    }
    Ok(out)
}

/// Splits `f` over two letters into its `W_κrij` parts, labeled `(r, i, j)`.
pub fn decompose_two_sample(f: &Combination) -> Result<GradedDecomposition> {
    let kappa = kappa_of(f, 2)?;
    let basis = enumerate_by_composition(&kappa);
    let v = f.to_vector(&index_map(&basis), basis.len())?;
    let mut out = GradedDecomposition::default();
    let zero = two_sample_component(&kappa, 0, kappa.total(), 0)?;
    out.push(
        vec![0, kappa.total(), 0],
        Combination::from_vector(&basis, &project(&v, &zero, &BilinearForm::Standard)?),
    );
    for r in 1..=kappa.0[0].min(kappa.0[1]) {
        for c in two_sample_components(&kappa, r)? {
            let p = project(&v, &c.space, &BilinearForm::Standard)?;
            out.push(vec![r, c.i, c.j], Combination::from_vector(&basis, &p));
        }
    }
    Ok(out)
}

/// The `(κ, r)`-merging matrix `N` and its projection `M = 𝒫 N 𝒫` onto
/// the copy of `S^(k−|r|,|r|)` in `W_κ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentMatrices {
    pub basis: Vec<Word>,
    pub n: Matrix,
    pub m: Matrix,
}

/// Builds `N = Θ̂ᵀ M_ext Θ̂`, where `M_ext` holds `m_{2k−|r|}` between
/// extended words, and `M = 𝒫 N 𝒫`.
pub fn moment_matrices(kappa: &Composition, r: &Composition) -> Result<MomentMatrices> {
    if !r.le(kappa) {
        return Err(Error::CompositionMismatch(format!(
            "{r} is not below {kappa}"
        )));
    }
    check_merge_size(kappa.total())?;
    let d = kappa.len() as u8;
    let basis = enumerate_by_composition(kappa);
    let ext = enumerate_by_composition(&extended(kappa, r));
    let l = 2 * kappa.total() - r.total();
    let t = matrix_of(|f| theta_hat(f, kappa, r), &basis, &ext)?;
    let mut mext = Matrix::zeros(ext.len(), ext.len());
    for a in 0..ext.len() {
        for b in a..ext.len() {
            let v = qi(merging_counts(&ext[a], &ext[b], d)[l] as i64);
            mext.set(b, a, v.clone());
            mext.set(a, b, v);
        }
    }
    let n = t.transpose().mul(&mext).mul(&t);
    let spaces = grading_spaces(kappa)?;
    let p = match spaces.get(r.total()) {
        Some(s) => projector(s, &BilinearForm::Standard)?,
        None => Matrix::zeros(basis.len(), basis.len()),
    };
    let m = p.mul(&n).mul(&p);
    Ok(MomentMatrices { basis, n, m })
}

/// Eigenpairs of `M` on `W_κ|r|`, with candidates
/// `C(k−2|r|, k_b−|r|)·C(|r|, r_a)·λ_κ|r|ij`.
pub fn two_sample_spectrum(kappa: &Composition, r: &Composition) -> Result<Vec<(Q, Subspace)>> {
    let rr = r.total();
    let k = kappa.total();
    let mm = moment_matrices(kappa, r)?;
    let space = grading_spaces(kappa)?
        .get(rr)
        .cloned()
        .ok_or_else(|| Error::OutOfRange(format!("|r| = {rr} exceeds the grading of {kappa}")))?;
    let mut candidates = Vec::new();
    if rr >= 1 {
        let kb = kappa.0[0].min(kappa.0[1]);
        let scale =
            qb(binomial((k - 2 * rr) as u64, (kb - rr) as u64)
                * binomial(rr as u64, r.0[0] as u64));
        for i in 0..=k - 2 * rr {
            for j in 0..rr {
                candidates.push(&scale * small_lambda(kappa, rr, i, j)?);
            }
        }
    }
    eigen_split(&mm.m, &space, &candidates)
}
